use num_complex::Complex64;

use crate::config::QuadConfig;
use crate::geometry::{CVec3, SurfaceMesh, Vec3};
use crate::{Error, Result};

use super::{RefPair, SingularRules, TriangleRule};

/// How two panels touch, by shared-vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanelPairClass {
    Coincident,
    /// Shared vertex pair, in the cyclic order of the lower-numbered panel.
    EdgeAdjacent { shared: [usize; 2] },
    VertexAdjacent { shared: usize },
    Separated,
}

impl PanelPairClass {
    pub fn shared_vertices(&self) -> usize {
        match self {
            PanelPairClass::Coincident => 3,
            PanelPairClass::EdgeAdjacent { .. } => 2,
            PanelPairClass::VertexAdjacent { .. } => 1,
            PanelPairClass::Separated => 0,
        }
    }

    pub fn is_singular(&self) -> bool {
        !matches!(self, PanelPairClass::Separated)
    }
}

pub fn classify_pair(tri_a: usize, tri_b: usize, mesh: &SurfaceMesh) -> PanelPairClass {
    if tri_a == tri_b {
        return PanelPairClass::Coincident;
    }
    let (lo, hi) = (tri_a.min(tri_b), tri_a.max(tri_b));
    let (tl, th) = (mesh.triangle(lo), mesh.triangle(hi));
    let mut shared = [0usize; 3];
    let mut n = 0;
    for &v in &tl {
        if th.contains(&v) {
            shared[n] = v;
            n += 1;
        }
    }
    match n {
        0 => PanelPairClass::Separated,
        1 => PanelPairClass::VertexAdjacent { shared: shared[0] },
        2 => {
            // keep the cyclic order of `lo`
            let i0 = tl.iter().position(|&v| v == shared[0]).unwrap();
            let pair = if tl[(i0 + 1) % 3] == shared[1] {
                [shared[0], shared[1]]
            } else {
                [shared[1], shared[0]]
            };
            PanelPairClass::EdgeAdjacent { shared: pair }
        }
        _ => PanelPairClass::Coincident,
    }
}

/// Free-space kernel of the scalar Helmholtz (`e^{ikR}/4πR`) or Laplace
/// (`1/4πR`) equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Helmholtz(f64),
    Laplace,
}

const INV_FOUR_PI: f64 = 0.25 * std::f64::consts::FRAC_1_PI;

impl Kernel {
    #[inline]
    pub fn eval(&self, r: f64) -> Complex64 {
        match *self {
            Kernel::Laplace => Complex64::new(INV_FOUR_PI / r, 0.0),
            Kernel::Helmholtz(k) => {
                let (s, c) = (k * r).sin_cos();
                Complex64::new(c, s) * (INV_FOUR_PI / r)
            }
        }
    }
}

/// Panel-local factor of a pair integrand; two factors contract to a scalar.
pub trait PanelFactor: Copy {
    fn contract(self, other: Self) -> Complex64;
}

impl PanelFactor for f64 {
    fn contract(self, other: f64) -> Complex64 {
        Complex64::new(self * other, 0.0)
    }
}

impl PanelFactor for Complex64 {
    fn contract(self, other: Complex64) -> Complex64 {
        self * other
    }
}

impl PanelFactor for Vec3 {
    fn contract(self, other: Vec3) -> Complex64 {
        Complex64::new(self.dot(other), 0.0)
    }
}

impl PanelFactor for CVec3 {
    fn contract(self, other: CVec3) -> Complex64 {
        self.dot(&other)
    }
}

/// Point-pair quadrature for every ordered panel pair of one mesh.
///
/// Separated pairs use a tensor product of triangle rules (promoted to the
/// near rule when close); touching pairs use the singular transforms. For a
/// touching pair the rule is built once for the lower-numbered panel first,
/// and `(b, a)` visits the mirror image of `(a, b)`, so symmetric kernels give
/// exactly symmetric results.
#[derive(Debug, Clone)]
pub struct PairQuadrature<'m> {
    mesh: &'m SurfaceMesh,
    config: QuadConfig,
    regular: PanelPoints,
    near: PanelPoints,
    singular: SingularRules,
}

/// Physical rule points of every triangle, weights scaled by the area Jacobian.
#[derive(Debug, Clone)]
struct PanelPoints {
    per_panel: usize,
    points: Vec<Vec3>,
    weights: Vec<f64>,
}

impl PanelPoints {
    fn new(mesh: &SurfaceMesh, rule: &TriangleRule) -> Self {
        let n = rule.len();
        let mut points = Vec::with_capacity(n * mesh.num_triangles());
        let mut weights = Vec::with_capacity(n * mesh.num_triangles());
        for t in 0..mesh.num_triangles() {
            let jac = 2.0 * mesh.area(t);
            for (p, w) in rule.points().iter().zip(rule.weights()) {
                points.push(mesh.point(t, p[1], p[2]));
                weights.push(w * jac);
            }
        }
        Self {
            per_panel: n,
            points,
            weights,
        }
    }

    #[inline]
    fn panel(&self, t: usize) -> (&[Vec3], &[f64]) {
        let r = t * self.per_panel..(t + 1) * self.per_panel;
        (&self.points[r.clone()], &self.weights[r])
    }
}

/// Corners ordered for the singular transforms: shared vertices first.
fn ordered_corners(mesh: &SurfaceMesh, t: usize, first: &[usize]) -> [Vec3; 3] {
    let tri = mesh.triangle(t);
    let v = mesh.vertices();
    match *first {
        [] => tri.map(|i| v[i]),
        [s] => {
            let i = tri.iter().position(|&x| x == s).unwrap();
            [v[tri[i]], v[tri[(i + 1) % 3]], v[tri[(i + 2) % 3]]]
        }
        [s0, s1] => {
            let other = *tri.iter().find(|&&x| x != s0 && x != s1).unwrap();
            [v[s0], v[s1], v[other]]
        }
        _ => unreachable!("at most two leading vertices"),
    }
}

#[inline]
fn chi(p: &[Vec3; 3], r: [f64; 2]) -> Vec3 {
    p[0] + (p[1] - p[0]) * r[0] + (p[2] - p[1]) * r[1]
}

impl<'m> PairQuadrature<'m> {
    pub fn new(mesh: &'m SurfaceMesh, config: QuadConfig) -> Result<Self> {
        config.check()?;
        Ok(Self {
            mesh,
            config,
            regular: PanelPoints::new(mesh, &TriangleRule::new(config.regular_degree)?),
            near: PanelPoints::new(mesh, &TriangleRule::new(config.near_degree)?),
            singular: SingularRules::new(config.singular_order),
        })
    }

    pub fn mesh(&self) -> &'m SurfaceMesh {
        self.mesh
    }

    pub fn config(&self) -> &QuadConfig {
        &self.config
    }

    /// Regular-rule points and Jacobian-scaled weights of one triangle.
    pub fn panel_points(&self, t: usize) -> (&[Vec3], &[f64]) {
        self.regular.panel(t)
    }

    fn is_near(&self, a: usize, b: usize) -> bool {
        let m = self.mesh;
        let d = (m.centroid(a) - m.centroid(b)).norm();
        d < self.config.near_threshold * m.diameter(a).max(m.diameter(b))
    }

    /// Calls `f(x, y, w)` for every quadrature point pair, `x` on `a` and `y` on `b`.
    #[inline]
    pub fn visit(&self, a: usize, b: usize, mut f: impl FnMut(Vec3, Vec3, f64)) {
        let class = classify_pair(a, b, self.mesh);
        self.visit_classified(a, b, class, &mut f)
    }

    #[inline]
    pub fn visit_classified(
        &self,
        a: usize,
        b: usize,
        class: PanelPairClass,
        f: &mut impl FnMut(Vec3, Vec3, f64),
    ) {
        self.visit_tagged(a, b, class, &mut |x, y, w, _| f(x, y, w))
    }

    /// Like [`PairQuadrature::visit_classified`], also reporting where `y`
    /// comes from so callers can reuse per-panel precomputed values.
    #[inline]
    pub fn visit_tagged(
        &self,
        a: usize,
        b: usize,
        class: PanelPairClass,
        f: &mut impl FnMut(Vec3, Vec3, f64, PointTag),
    ) {
        let (rules, lead): (&[RefPair], &[usize]) = match &class {
            PanelPairClass::Separated => {
                let near = self.is_near(a, b);
                let pts = if near { &self.near } else { &self.regular };
                let (xa, wa) = pts.panel(a);
                let (yb, wb) = pts.panel(b);
                for (&x, &w1) in xa.iter().zip(wa) {
                    for (j, (&y, &w2)) in yb.iter().zip(wb).enumerate() {
                        let tag = if near { PointTag::Near(j) } else { PointTag::Regular(j) };
                        f(x, y, w1 * w2, tag);
                    }
                }
                return;
            }
            PanelPairClass::Coincident => (&self.singular.coincident, &[]),
            PanelPairClass::EdgeAdjacent { shared } => (&self.singular.edge, &shared[..]),
            PanelPairClass::VertexAdjacent { shared } => {
                (&self.singular.vertex, std::slice::from_ref(shared))
            }
        };
        let (lo, hi) = (a.min(b), a.max(b));
        let pl = ordered_corners(self.mesh, lo, lead);
        let ph = ordered_corners(self.mesh, hi, lead);
        let jac = 4.0 * self.mesh.area(lo) * self.mesh.area(hi);
        if a == lo {
            for r in rules {
                f(chi(&pl, r.x), chi(&ph, r.y), r.w * jac, PointTag::Singular);
            }
        } else {
            for r in rules {
                f(chi(&ph, r.y), chi(&pl, r.x), r.w * jac, PointTag::Singular);
            }
        }
    }

    /// Points of the regular and near rules on panel `t`, in visiting order.
    pub fn rule_points(&self, t: usize) -> (&[Vec3], &[Vec3]) {
        (self.regular.panel(t).0, self.near.panel(t).0)
    }
}

/// Origin of the `y` point handed to a visitor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointTag {
    /// Index into the regular rule points of panel `b`.
    Regular(usize),
    /// Index into the near rule points of panel `b`.
    Near(usize),
    /// Generated by a singular transform.
    Singular,
}

/// `∫_a ∫_b kernel(x, y) fa(x) · fb(y) dS_y dS_x`.
pub fn pair_integral<F: PanelFactor>(
    quad: &PairQuadrature<'_>,
    kernel: Kernel,
    tri_a: usize,
    tri_b: usize,
    fa: impl Fn(Vec3) -> F,
    fb: impl Fn(Vec3) -> F,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    quad.visit(tri_a, tri_b, |x, y, w| {
        acc += kernel.eval((x - y).norm()) * fa(x).contract(fb(y)) * w;
    });
    if acc.re.is_finite() && acc.im.is_finite() {
        Ok(acc)
    } else {
        Err(Error::NumericalFailure(format!(
            "non-finite pair integral for panels ({tri_a}, {tri_b})"
        )))
    }
}
