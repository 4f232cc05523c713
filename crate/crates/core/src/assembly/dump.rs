//! Binary matrix dumps: 16-byte header (`BEMM`, u32 rows, u32 cols, u32
//! reserved zero) followed by row-major `(re, im)` pairs, all little-endian.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::linalg::DenseMatrix;
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"BEMM";

pub fn encode_matrix(m: &DenseMatrix<Complex64>) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 16 * m.as_slice().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(m.rows() as u32).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u32).to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    for v in m.as_slice() {
        out.extend_from_slice(&v.re.to_le_bytes());
        out.extend_from_slice(&v.im.to_le_bytes());
    }
    out
}

pub fn decode_matrix(bytes: &[u8]) -> Result<DenseMatrix<Complex64>> {
    let bad = |msg: &str| Error::Parse {
        path: "<matrix>".into(),
        line: 0,
        msg: msg.to_string(),
    };
    if bytes.len() < 16 || &bytes[..4] != MAGIC {
        return Err(bad("missing BEMM header"));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
    let (rows, cols) = (word(4), word(8));
    let body = &bytes[16..];
    if body.len() != rows * cols * 16 {
        return Err(bad(&format!(
            "expected {} payload bytes for {rows}x{cols}, found {}",
            rows * cols * 16,
            body.len()
        )));
    }
    let data = body
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    DenseMatrix::from_row_major(rows, cols, data)
}

pub fn write_matrix(m: &DenseMatrix<Complex64>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(&encode_matrix(m)))
        .map_err(|e| Error::io(path, e))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix<Complex64>> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    decode_matrix(&bytes)
}
