use std::collections::BTreeMap;

use crate::{Error, Result};

use super::SurfaceMesh;

/// Interior edge shared by a plus and a minus triangle.
///
/// For the vertex pair `(v_lo, v_hi)` with `v_lo < v_hi`, the plus triangle is
/// the one whose cyclic vertex order runs `v_lo → v_hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub vertices: [usize; 2],
    pub plus: usize,
    pub minus: usize,
    /// Vertex of the plus triangle not on the edge.
    pub plus_opposite: usize,
    /// Vertex of the minus triangle not on the edge.
    pub minus_opposite: usize,
    pub length: f64,
}

#[derive(Debug, Clone)]
pub struct EdgeTopology {
    edges: Vec<Edge>,
    /// Interior edges of each triangle as `(edge index, is plus triangle)`.
    triangle_edges: Vec<Vec<(usize, bool)>>,
}

/// Incidences of each undirected edge: `(triangle, runs lo → hi)`.
pub(crate) fn edge_incidence(mesh: &SurfaceMesh) -> BTreeMap<(usize, usize), Vec<(usize, bool)>> {
    let mut map: BTreeMap<(usize, usize), Vec<(usize, bool)>> = BTreeMap::new();
    for (t, tri) in mesh.triangles().iter().enumerate() {
        for j in 0..3 {
            let (a, b) = (tri[j], tri[(j + 1) % 3]);
            map.entry((a.min(b), a.max(b))).or_default().push((t, a < b));
        }
    }
    map
}

fn opposite(tri: [usize; 3], a: usize, b: usize) -> usize {
    *tri.iter().find(|&&v| v != a && v != b).expect("triangle has three distinct vertices")
}

impl EdgeTopology {
    /// Topology of a closed mesh; every edge must have exactly two incident triangles.
    pub fn build(mesh: &SurfaceMesh) -> Result<Self> {
        Self::build_impl(mesh, false)
    }

    /// Like [`EdgeTopology::build`] but skips boundary edges, for open patches.
    pub fn build_open(mesh: &SurfaceMesh) -> Result<Self> {
        Self::build_impl(mesh, true)
    }

    fn build_impl(mesh: &SurfaceMesh, allow_boundary: bool) -> Result<Self> {
        let mut edges = Vec::new();
        let mut triangle_edges = vec![Vec::with_capacity(3); mesh.num_triangles()];
        for ((lo, hi), inc) in edge_incidence(mesh) {
            match inc.len() {
                1 if allow_boundary => continue,
                2 => {}
                n => return Err(Error::Topology(lo, hi, n)),
            }
            let (plus, minus) = match (inc[0], inc[1]) {
                ((p, true), (m, false)) | ((m, false), (p, true)) => (p, m),
                _ => {
                    return Err(Error::InvalidMesh(format!(
                        "edge ({lo}, {hi}) has inconsistent orientation in triangles {} and {}",
                        inc[0].0, inc[1].0
                    )))
                }
            };
            let idx = edges.len();
            let v = mesh.vertices();
            edges.push(Edge {
                vertices: [lo, hi],
                plus,
                minus,
                plus_opposite: opposite(mesh.triangle(plus), lo, hi),
                minus_opposite: opposite(mesh.triangle(minus), lo, hi),
                length: (v[hi] - v[lo]).norm(),
            });
            triangle_edges[plus].push((idx, true));
            triangle_edges[minus].push((idx, false));
        }
        Ok(Self {
            edges,
            triangle_edges,
        })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Interior edges touching triangle `t`, with `true` when `t` is their plus triangle.
    pub fn triangle_edges(&self, t: usize) -> &[(usize, bool)] {
        &self.triangle_edges[t]
    }
}
