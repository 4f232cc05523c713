//! RWG functions attached to interior edges.
//!
//! On its plus triangle the function is `l/(2A⁺) (r − p⁺)`, on its minus
//! triangle `l/(2A⁻) (p⁻ − r)`, where `p±` is the vertex opposite the edge.
//! Its normal component across the edge is continuous and its surface
//! divergence is `±l/A±`.

use crate::geometry::{EdgeTopology, SurfaceMesh, Vec3};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwgFunction {
    pub edge: usize,
    pub plus: usize,
    pub minus: usize,
    pub plus_opposite: Vec3,
    pub minus_opposite: Vec3,
    pub length: f64,
    pub area_plus: f64,
    pub area_minus: f64,
    pub normal_plus: Vec3,
    pub normal_minus: Vec3,
}

/// One RWG function restricted to one of its two triangles:
/// `sign · coef · (r − opposite)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalRwg {
    pub index: usize,
    pub sign: f64,
    pub coef: f64,
    pub opposite: Vec3,
}

impl LocalRwg {
    #[inline]
    pub fn value(&self, r: Vec3) -> Vec3 {
        (r - self.opposite) * (self.sign * self.coef)
    }

    #[inline]
    pub fn divergence(&self) -> f64 {
        2.0 * self.sign * self.coef
    }
}

impl RwgFunction {
    fn side(&self, triangle: usize) -> Result<(f64, f64, Vec3, Vec3)> {
        if triangle == self.plus {
            Ok((1.0, self.area_plus, self.plus_opposite, self.normal_plus))
        } else if triangle == self.minus {
            Ok((-1.0, self.area_minus, self.minus_opposite, self.normal_minus))
        } else {
            Err(Error::Domain(format!(
                "triangle {triangle} is not in the support of the RWG on edge {}",
                self.edge
            )))
        }
    }

    /// Restriction to `triangle`, which must be the plus or minus triangle.
    pub fn local(&self, index: usize, triangle: usize) -> Result<LocalRwg> {
        let (sign, area, opposite, _) = self.side(triangle)?;
        Ok(LocalRwg {
            index,
            sign,
            coef: self.length / (2.0 * area),
            opposite,
        })
    }
}

/// Value of `f` at `point` on `triangle`.
pub fn rwg_value(f: &RwgFunction, triangle: usize, point: Vec3) -> Result<Vec3> {
    let (sign, area, opp, _) = f.side(triangle)?;
    Ok((point - opp) * (sign * f.length / (2.0 * area)))
}

/// Surface divergence of `f`, constant on each triangle.
pub fn rwg_divergence(f: &RwgFunction, triangle: usize) -> Result<f64> {
    let (sign, area, _, _) = f.side(triangle)?;
    Ok(sign * f.length / area)
}

/// `n × f` at `point` on `triangle`.
pub fn rwg_cross_n(f: &RwgFunction, triangle: usize, point: Vec3) -> Result<Vec3> {
    let (_, _, _, n) = f.side(triangle)?;
    Ok(n.cross(rwg_value(f, triangle, point)?))
}

/// All RWG functions of a mesh, indexed like the edges of its topology.
#[derive(Debug, Clone)]
pub struct RwgBasis {
    functions: Vec<RwgFunction>,
    per_triangle: Vec<Vec<LocalRwg>>,
}

impl RwgBasis {
    pub fn new(mesh: &SurfaceMesh, topology: &EdgeTopology) -> Self {
        let v = mesh.vertices();
        let functions: Vec<RwgFunction> = topology
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| RwgFunction {
                edge: i,
                plus: e.plus,
                minus: e.minus,
                plus_opposite: v[e.plus_opposite],
                minus_opposite: v[e.minus_opposite],
                length: e.length,
                area_plus: mesh.area(e.plus),
                area_minus: mesh.area(e.minus),
                normal_plus: mesh.normal(e.plus),
                normal_minus: mesh.normal(e.minus),
            })
            .collect();
        let per_triangle = (0..mesh.num_triangles())
            .map(|t| {
                topology
                    .triangle_edges(t)
                    .iter()
                    .map(|&(i, _)| functions[i].local(i, t).expect("edge touches triangle"))
                    .collect()
            })
            .collect();
        Self {
            functions,
            per_triangle,
        }
    }

    /// Builds topology and basis for a closed mesh.
    pub fn from_mesh(mesh: &SurfaceMesh) -> Result<Self> {
        Ok(Self::new(mesh, &EdgeTopology::build(mesh)?))
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[RwgFunction] {
        &self.functions
    }

    pub fn function(&self, i: usize) -> &RwgFunction {
        &self.functions[i]
    }

    /// Functions supported on triangle `t` (at most three).
    #[inline]
    pub fn on_triangle(&self, t: usize) -> &[LocalRwg] {
        &self.per_triangle[t]
    }

    /// Current `Σ coeffs[i] t_i` evaluated at `point` on triangle `t`.
    pub fn current_at(
        &self,
        coeffs: &[num_complex::Complex64],
        t: usize,
        point: Vec3,
    ) -> crate::geometry::CVec3 {
        self.on_triangle(t)
            .iter()
            .fold(crate::geometry::CVec3::ZERO, |acc, f| {
                acc.add_real(f.value(point), coeffs[f.index])
            })
    }
}
