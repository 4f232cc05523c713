use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::basis::RwgBasis;
use crate::geometry::{icosphere, Vec3};
use crate::Error;

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n < 1.0 {
            return v * (1.0 / n);
        }
    }
}

/// Rotation matrix from a unit axis and an angle.
fn rotation(axis: Vec3, angle: f64) -> [Vec3; 3] {
    let (s, c) = angle.sin_cos();
    let [x, y, z] = axis.0;
    let t = 1.0 - c;
    [
        Vec3::new(t * x * x + c, t * x * y - s * z, t * x * z + s * y),
        Vec3::new(t * x * y + s * z, t * y * y + c, t * y * z - s * x),
        Vec3::new(t * x * z - s * y, t * y * z + s * x, t * z * z + c),
    ]
}

fn apply(r: &[Vec3; 3], v: Vec3) -> Vec3 {
    Vec3::new(r[0].dot(v), r[1].dot(v), r[2].dot(v))
}

#[test]
fn truncation_rule_values() {
    assert_eq!(truncation_rule(1.0), 15);
    assert_eq!(truncation_rule(6.1), 24);
    assert_eq!(truncation_rule(0.01), 11);
}

#[test]
fn current_is_tangential() {
    let cfg = MieConfig::new(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let x = random_unit(&mut rng);
        let j = mie_surface_current(&cfg, x).unwrap();
        assert!(j.dot_real(x).norm() / j.norm() < 1e-10);
    }
}

#[test]
fn series_is_converged_at_the_rule() {
    let cfg = MieConfig::new(6.1);
    let more = cfg.with_terms(2 * cfg.n_terms);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let x = random_unit(&mut rng);
        let a = mie_surface_current(&cfg, x).unwrap();
        let b = mie_surface_current(&more, x).unwrap();
        assert!(a.sub(&b).norm() / b.norm() < 1e-10);
    }
}

#[test]
fn current_rotates_with_the_frame() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let base = MieConfig::new(2.3);
    for _ in 0..5 {
        let r = rotation(random_unit(&mut rng), rng.gen_range(0.0..6.0));
        let cfg = base.with_frame(apply(&r, base.direction), apply(&r, base.polarisation));
        let x = random_unit(&mut rng);
        let j = mie_surface_current(&base, x).unwrap();
        let jr = mie_surface_current(&cfg, apply(&r, x)).unwrap();
        let rj = [0, 1, 2].map(|i| {
            (0..3).fold(Complex64::new(0.0, 0.0), |acc, l| acc + j.0[l] * r[i].0[l])
        });
        for i in 0..3 {
            assert!((rj[i] - jr.0[i]).norm() < 1e-12 * j.norm());
        }
    }
}

#[test]
fn low_frequency_limit() {
    // J → 1.5 r̂ × (d × p) as ka → 0
    let cfg = MieConfig::new(1e-4);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let x = random_unit(&mut rng);
        let j = mie_surface_current(&cfg, x).unwrap();
        let expect = x.cross(Vec3::new(0.0, 1.0, 0.0)) * 1.5;
        for i in 0..3 {
            assert!((j.0[i] - expect.0[i]).norm() < 1e-3);
        }
    }
}

#[test]
fn off_sphere_points_are_rejected() {
    let cfg = MieConfig::new(1.0);
    assert!(matches!(mie_surface_current(&cfg, Vec3::new(0.0, 0.0, 1.1)), Err(Error::Domain(_))));
    assert!(mie_surface_current(&cfg.with_terms(3), Vec3::new(0.0, 0.0, 1.0)).is_err());
}

#[test]
fn self_check_passes_at_reference_sizes() {
    for ka in [0.01, 1.0, 6.1] {
        let d = mie_self_check(&MieConfig::new(ka)).unwrap();
        assert!(d.cross_section_rel_diff < 1e-8, "{}", d.summary());
    }
    let d = mie_self_check(&MieConfig::new(0.01)).unwrap();
    let ratio = d.rayleigh_ratio.unwrap();
    assert!((ratio / 2f64.sqrt() - 1.0).abs() < 0.05);
}

#[test]
fn self_check_catches_short_series() {
    let cfg = MieConfig::new(6.1);
    let short = cfg.with_terms(cfg.n_terms / 2);
    assert!(matches!(mie_self_check(&short), Err(Error::OracleInvalid(_))));
}

#[test]
fn cross_section_has_the_rayleigh_scaling() {
    // small perfectly conducting sphere: C_sca = (10π/3) k⁴ a⁶
    let ka = 0.01;
    let s = MieSeries::new(&MieConfig::new(ka)).unwrap();
    let expect = 10.0 * std::f64::consts::PI / 3.0 * ka.powi(4);
    assert!((s.cross_section_series() / expect - 1.0).abs() < 1e-3);
}

#[test]
fn zero_coefficients_have_unit_error() {
    let mesh = icosphere(1, 1.0).unwrap();
    let basis = RwgBasis::from_mesh(&mesh).unwrap();
    let x = vec![Complex64::new(0.0, 0.0); basis.len()];
    let e = relative_error(&x, &mesh, &basis, &MieConfig::new(1.0)).unwrap();
    assert_eq!(e, 1.0);
    assert!(relative_error(&x[1..], &mesh, &basis, &MieConfig::new(1.0)).is_err());
}

#[test]
fn projection_is_the_best_approximation() {
    let mesh = icosphere(2, 1.0).unwrap();
    let basis = RwgBasis::from_mesh(&mesh).unwrap();
    let cfg = MieConfig::new(1.0);
    let p = l2_projection(&mesh, &basis, &cfg).unwrap();
    let best = relative_error(&p, &mesh, &basis, &cfg).unwrap();
    assert!(best > 0.0 && best < 0.2);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let scale = rng.gen_range(1e-3..1e-1);
        let q: Vec<_> = p
            .iter()
            .map(|v| v + Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale)
            .collect();
        assert!(relative_error(&q, &mesh, &basis, &cfg).unwrap() >= best - 1e-12);
    }
}

#[test]
fn projection_error_decreases_with_refinement() {
    let cfg = MieConfig::new(1.0);
    let errs: Vec<f64> = (1..=3)
        .map(|l| {
            let mesh = icosphere(l, 1.0).unwrap();
            let basis = RwgBasis::from_mesh(&mesh).unwrap();
            relative_error(&l2_projection(&mesh, &basis, &cfg).unwrap(), &mesh, &basis, &cfg).unwrap()
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}
