//! Relative-coordinate transforms for panel pairs that touch.
//!
//! Both panels are parametrised over `τ̂ = {0 ≤ x₂ ≤ x₁ ≤ 1}` by
//! `χ(x̂) = P₀ + x̂₁ (P₁ − P₀) + x̂₂ (P₂ − P₁)`, with shared vertices listed
//! first and in the same order on both panels. Each transform splits
//! `τ̂ × τ̂` into regions where the singularity sits at a face of `[0,1]⁴`
//! and the Jacobian cancels a `1/|x − y|` kernel.

use super::gauss_legendre;

/// Reference point pair with weight, Jacobian of the transform included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefPair {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub w: f64,
}

#[derive(Debug, Clone)]
pub struct SingularRules {
    pub coincident: Vec<RefPair>,
    pub edge: Vec<RefPair>,
    pub vertex: Vec<RefPair>,
    pub order: usize,
}

impl SingularRules {
    /// Tensor Gauss rules with `order` points in each of the four directions.
    pub fn new(order: usize) -> Self {
        let g = gauss_legendre(order);
        let mut coincident = Vec::with_capacity(6 * order.pow(4));
        let mut edge = Vec::with_capacity(5 * order.pow(4));
        let mut vertex = Vec::with_capacity(2 * order.pow(4));
        for &(xi, wxi) in &g {
            for &(e1, w1) in &g {
                for &(e2, w2) in &g {
                    for &(e3, w3) in &g {
                        let w = wxi * w1 * w2 * w3;
                        coincident_regions(xi, e1, e2, e3, w, &mut coincident);
                        edge_regions(xi, e1, e2, e3, w, &mut edge);
                        vertex_regions(xi, e1, e2, e3, w, &mut vertex);
                    }
                }
            }
        }
        Self {
            coincident,
            edge,
            vertex,
            order,
        }
    }
}

fn push(out: &mut Vec<RefPair>, x: [f64; 2], y: [f64; 2], w: f64) {
    out.push(RefPair { x, y, w });
}

fn coincident_regions(xi: f64, e1: f64, e2: f64, e3: f64, w: f64, out: &mut Vec<RefPair>) {
    let j = w * xi.powi(3) * e1 * e1 * e2;
    let a = [xi, xi * (1.0 - e1 + e1 * e2)];
    let b = [xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1)];
    push(out, a, b, j);
    push(out, b, a, j);
    let a = [xi, xi * e1 * (1.0 - e2 + e2 * e3)];
    let b = [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)];
    push(out, a, b, j);
    push(out, b, a, j);
    let a = [xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)];
    let b = [xi, xi * e1 * (1.0 - e2)];
    push(out, a, b, j);
    push(out, b, a, j);
}

fn edge_regions(xi: f64, e1: f64, e2: f64, e3: f64, w: f64, out: &mut Vec<RefPair>) {
    let j1 = w * xi.powi(3) * e1 * e1;
    push(
        out,
        [xi, xi * e1 * e3],
        [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)],
        j1,
    );
    let j = j1 * e2;
    push(
        out,
        [xi, xi * e1],
        [xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3)],
        j,
    );
    push(
        out,
        [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)],
        [xi, xi * e1 * e2 * e3],
        j,
    );
    push(
        out,
        [xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3)],
        [xi, xi * e1],
        j,
    );
    push(
        out,
        [xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)],
        [xi, xi * e1 * e2],
        j,
    );
}

fn vertex_regions(xi: f64, e1: f64, e2: f64, e3: f64, w: f64, out: &mut Vec<RefPair>) {
    let j = w * xi.powi(3) * e2;
    let a = [xi, xi * e1];
    let b = [xi * e2, xi * e2 * e3];
    push(out, a, b, j);
    push(out, b, a, j);
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ∫_τ̂ x₁^a x₂^b.
    fn tau_monomial(a: i32, b: i32) -> f64 {
        1.0 / ((b + 1) as f64 * (a + b + 2) as f64)
    }

    #[test]
    fn transforms_integrate_polynomials_exactly() {
        let rules = SingularRules::new(7);
        for set in [&rules.coincident, &rules.edge, &rules.vertex] {
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        for d in 0..3 {
                            let s: f64 = set
                                .iter()
                                .map(|p| {
                                    p.w * p.x[0].powi(a)
                                        * p.x[1].powi(b)
                                        * p.y[0].powi(c)
                                        * p.y[1].powi(d)
                                })
                                .sum();
                            let exact = tau_monomial(a, b) * tau_monomial(c, d);
                            assert!((s - exact).abs() < 1e-14, "{a}{b}{c}{d}: {s} vs {exact}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn points_inside_reference_triangle() {
        let rules = SingularRules::new(4);
        for p in rules.coincident.iter().chain(&rules.edge).chain(&rules.vertex) {
            for q in [p.x, p.y] {
                assert!(q[1] >= 0.0 && q[1] <= q[0] && q[0] <= 1.0);
            }
            assert!(p.w > 0.0);
        }
    }
}
