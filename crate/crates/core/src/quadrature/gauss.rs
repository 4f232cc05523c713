use crate::{Error, Result};

/// Gauss–Legendre nodes and weights on `[0, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n > 0, "Gauss-Legendre rule needs at least one point");
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (0.5 * (1.0 - x), 0.5 * w);
        out[n - 1 - i] = (0.5 * (1.0 + x), 0.5 * w);
    }
    out
}

/// Symmetric quadrature on the reference triangle `(0,0), (1,0), (0,1)`.
///
/// Points are barycentric triples `(λ0, λ1, λ2)`; the Cartesian reference
/// point is `(λ1, λ2)`. Weights are positive and sum to `1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule {
    degree: u32,
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

/// `(weight, a)` for the 3-point orbit `(1 − 2a, a, a)`.
type Orbit3 = (f64, f64);
/// `(weight, a, b)` for the 6-point orbit of `(a, b, 1 − a − b)`.
type Orbit6 = (f64, f64, f64);

struct RuleTable {
    exact_degree: u32,
    centroid: Option<f64>,
    orbit3: &'static [Orbit3],
    orbit6: &'static [Orbit6],
}

// Weights normalised to sum to one.
const DEG1: RuleTable = RuleTable {
    exact_degree: 1,
    centroid: Some(1.0),
    orbit3: &[],
    orbit6: &[],
};
const DEG2: RuleTable = RuleTable {
    exact_degree: 2,
    centroid: None,
    orbit3: &[(1.0 / 3.0, 1.0 / 6.0)],
    orbit6: &[],
};
// 6-point rule, exact to degree 4.
const DEG4: RuleTable = RuleTable {
    exact_degree: 4,
    centroid: None,
    orbit3: &[
        (0.223381589678011, 0.445948490915965),
        (0.109951743655322, 0.091576213509771),
    ],
    orbit6: &[],
};
// 7-point Radon rule.
const DEG5: RuleTable = RuleTable {
    exact_degree: 5,
    centroid: Some(0.225),
    orbit3: &[
        (0.132394152788506, 0.470142064105115),
        (0.125939180544827, 0.101286507323456),
    ],
    orbit6: &[],
};
// 16-point rule with positive weights, exact to degree 8.
const DEG8: RuleTable = RuleTable {
    exact_degree: 8,
    centroid: Some(0.144315607677787),
    orbit3: &[
        (0.095091634267285, 0.459292588292723),
        (0.103217370534718, 0.170569307751760),
        (0.032458497623198, 0.050547228317031),
    ],
    orbit6: &[(0.027230314174435, 0.008394777409958, 0.263112829634638)],
};

impl TriangleRule {
    /// Rule exact at least to total degree `degree`, one of 1, 2, 3, 5, 7.
    pub fn new(degree: u32) -> Result<Self> {
        let table = match degree {
            1 => DEG1,
            2 => DEG2,
            3 => DEG4,
            5 => DEG5,
            7 => DEG8,
            d => {
                return Err(Error::InvalidArgument(format!(
                    "unsupported triangle rule degree {d} (use 1, 2, 3, 5 or 7)"
                )))
            }
        };
        let mut points = Vec::new();
        let mut weights = Vec::new();
        if let Some(w) = table.centroid {
            points.push([1.0 / 3.0; 3]);
            weights.push(w);
        }
        for &(w, a) in table.orbit3 {
            let b = 1.0 - 2.0 * a;
            for p in [[b, a, a], [a, b, a], [a, a, b]] {
                points.push(p);
                weights.push(w);
            }
        }
        for &(w, a, b) in table.orbit6 {
            let c = 1.0 - a - b;
            for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                points.push(p);
                weights.push(w);
            }
        }
        // normalise so the weights sum to exactly 1/2 despite 15-digit tables
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w *= 0.5 / total;
        }
        debug_assert!(table.exact_degree >= degree);
        Ok(Self {
            degree,
            points,
            weights,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integral of `f(ξ, η)` over the reference triangle.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p[1], p[2]))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// ∫ x^a y^b over the reference triangle.
    fn monomial(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..=12 {
            let rule = gauss_legendre(n);
            let wsum: f64 = rule.iter().map(|p| p.1).sum();
            assert!((wsum - 1.0).abs() < 1e-14);
            for p in 0..(2 * n as i32) {
                let s: f64 = rule.iter().map(|&(x, w)| w * x.powi(p)).sum();
                assert!((s - 1.0 / (p + 1) as f64).abs() < 1e-14, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn degree_one_is_centroid() {
        let r = TriangleRule::new(1).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r.weights()[0], 0.5);
        assert!((r.integrate(|_, _| 3.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn degree_three_x2y() {
        let r = TriangleRule::new(3).unwrap();
        assert!((r.integrate(|x, y| x * x * y) - 1.0 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn degree_seven_x3y3() {
        let r = TriangleRule::new(7).unwrap();
        assert!((r.integrate(|x, y| x.powi(3) * y.powi(3)) - 36.0 / 40320.0).abs() < 1e-16);
    }

    #[test]
    fn monomial_exactness_all_rules() {
        for d in [1, 2, 3, 5, 7] {
            let r = TriangleRule::new(d).unwrap();
            assert!(r.weights().iter().all(|&w| w > 0.0));
            for p in r.points() {
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            }
            for a in 0..=d {
                for b in 0..=(d - a) {
                    let s = r.integrate(|x, y| x.powi(a as i32) * y.powi(b as i32));
                    assert!((s - monomial(a, b)).abs() < 2e-15, "degree {d}: x^{a} y^{b}");
                }
            }
        }
    }

    #[test]
    fn unsupported_degree() {
        assert!(TriangleRule::new(4).is_err());
        assert!(TriangleRule::new(0).is_err());
    }
}
