//! Plain OFF meshes: `OFF`, then `V F 0`, then `V` coordinate lines and `F`
//! lines of the form `3 i j k` with zero-based indices.

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

use super::{validate, SurfaceMesh, Vec3};

/// Serialises a mesh; coordinates use the shortest round-tripping decimal form.
pub fn to_off_string(mesh: &SurfaceMesh) -> String {
    let mut s = String::with_capacity(64 * (mesh.num_vertices() + mesh.num_triangles()));
    s.push_str("OFF\n");
    let _ = writeln!(s, "{} {} 0", mesh.num_vertices(), mesh.num_triangles());
    for v in mesh.vertices() {
        let _ = writeln!(s, "{} {} {}", v.x(), v.y(), v.z());
    }
    for [i, j, k] in mesh.triangles() {
        let _ = writeln!(s, "3 {i} {j} {k}");
    }
    s
}

/// Writes a validated mesh to `path`.
pub fn write_off(mesh: &SurfaceMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let report = validate(mesh);
    if !report.is_valid() {
        return Err(Error::InvalidMesh(report.summary()));
    }
    std::fs::write(path, to_off_string(mesh)).map_err(|e| Error::io(path, e))
}

pub fn read_off(path: impl AsRef<Path>) -> Result<SurfaceMesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_off(&text, path)
}

pub fn parse_off(text: &str, path: &Path) -> Result<SurfaceMesh> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, "OFF")) => {}
        Some((n, other)) => return Err(err(n, format!("expected \"OFF\" header, found {other:?}"))),
        None => return Err(err(1, "empty file".into())),
    }
    let (n, counts) = lines.next().ok_or_else(|| err(2, "missing count line".into()))?;
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| err(n, format!("bad count line: {e}")))?;
    let [nv, nf, _] = counts[..] else {
        return Err(err(n, "count line must hold \"V F E\"".into()));
    };

    let mut vertices = Vec::with_capacity(nv);
    for i in 0..nv {
        let (n, l) = lines
            .next()
            .ok_or_else(|| err(n + 1 + i, format!("expected {nv} vertices, found {i}")))?;
        let c: Vec<f64> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| err(n, format!("bad vertex: {e}")))?;
        let [x, y, z] = c[..] else {
            return Err(err(n, format!("vertex needs 3 coordinates, found {}", c.len())));
        };
        vertices.push(Vec3::new(x, y, z));
    }

    let mut triangles = Vec::with_capacity(nf);
    let mut last = n;
    for (n, l) in lines.by_ref() {
        last = n;
        if triangles.len() == nf {
            return Err(err(n, format!("more than the declared {nf} faces")));
        }
        let f: Vec<usize> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| err(n, format!("bad face: {e}")))?;
        match f[..] {
            [3, i, j, k] => {
                if let Some(bad) = [i, j, k].into_iter().find(|&v| v >= nv) {
                    return Err(err(n, format!("vertex index {bad} out of range")));
                }
                triangles.push([i, j, k]);
            }
            _ => return Err(err(n, "face must be \"3 i j k\"".into())),
        }
    }
    if triangles.len() != nf {
        return Err(err(
            last + 1,
            format!("declared {nf} faces, found {}", triangles.len()),
        ));
    }
    SurfaceMesh::new(vertices, triangles)
}
