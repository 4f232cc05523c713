//! End-to-end acceptance suite.
//!
//! Runs every criterion in order and prints one PASS/FAIL line each; the
//! process fails if any criterion fails. Pass criterion numbers as arguments
//! to run a subset, e.g. `cargo test --test acceptance -- 1 7`.

use std::collections::HashMap;
use std::time::Instant;

use cfie_core::assembly::{assemble_g, assemble_r, assemble_system};
use cfie_core::basis::{rwg_divergence, rwg_value};
use cfie_core::geometry::validate;
use cfie_core::linalg::{DenseMatrix, SparseMatrix};
use cfie_core::quadrature::{pair_integral, Kernel, PairQuadrature, TriangleRule};
use cfie_core::reference::{l2_projection, mie_diagnostics, mie_self_check};
use cfie_core::solve::{apply_operator, solve_assembled, GramFactor, LinearOperatorSpec};
use cfie_core::{
    icosphere, relative_error, Complex64, EdgeTopology, Excitation, Formulation, MatrixSet, MieConfig,
    QuadConfig, RwgBasis, SolveConfig, SurfaceMesh, Vec3,
};

use Formulation::{Cfie, Efie, Mfie, RegCfie};

const ALPHA: f64 = 0.5;

#[derive(Debug, Clone)]
struct Run {
    iterations: usize,
    converged: bool,
    error: f64,
    residual_history: Vec<f64>,
}

/// Meshes, static regularisers and finished solves, shared by all criteria.
#[derive(Default)]
struct Lab {
    spheres: HashMap<u32, (SurfaceMesh, RwgBasis)>,
    regularisers: HashMap<u32, DenseMatrix<f64>>,
    runs: HashMap<(u32, i64, Formulation), Run>,
}

fn k_key(k: f64) -> i64 {
    (k * 1e6).round() as i64
}

impl Lab {
    fn sphere(&mut self, level: u32) -> &(SurfaceMesh, RwgBasis) {
        self.spheres.entry(level).or_insert_with(|| {
            let mesh = icosphere(level, 1.0).unwrap();
            let basis = RwgBasis::from_mesh(&mesh).unwrap();
            (mesh, basis)
        })
    }

    /// Solves the missing formulations at `(level, k)` from one assembly.
    fn solve(&mut self, level: u32, k: f64, methods: &[Formulation]) -> cfie_core::Result<Vec<Run>> {
        let todo: Vec<Formulation> = methods
            .iter()
            .copied()
            .filter(|f| !self.runs.contains_key(&(level, k_key(k), *f)))
            .collect();
        if !todo.is_empty() {
            let mut set = MatrixSet::default();
            for f in &todo {
                let s = MatrixSet::for_formulation(*f);
                set.efio |= s.efio;
                set.mfio |= s.mfio;
                set.regulariser |= s.regulariser;
            }
            self.sphere(level);
            let (mesh, basis) = &self.spheres[&level];
            let quad = PairQuadrature::new(mesh, QuadConfig::default())?;
            let need_r = set.regulariser;
            set.regulariser = false;
            if need_r && !self.regularisers.contains_key(&level) {
                self.regularisers.insert(level, assemble_r(&quad, basis)?);
            }
            let mut sys = assemble_system(&quad, basis, k, set)?;
            sys.regulariser = if need_r { self.regularisers.remove(&level) } else { None };
            let exc = Excitation::default_wave(k)?.with_alpha(ALPHA);
            let mie = MieConfig::new(k);
            let mut fresh = Vec::new();
            for f in todo {
                let r = solve_assembled(&quad, basis, &sys, &exc, f, &SolveConfig::default())?;
                let error = relative_error(&r.x, mesh, basis, &mie)?;
                fresh.push((f, Run {
                    iterations: r.iterations,
                    converged: r.converged,
                    error,
                    residual_history: r.residual_history,
                }));
            }
            if let Some(r) = sys.regulariser.take() {
                self.regularisers.insert(level, r);
            }
            for (f, run) in fresh {
                self.runs.insert((level, k_key(k), f), run);
            }
        }
        Ok(methods.iter().map(|f| self.runs[&(level, k_key(k), *f)].clone()).collect())
    }

    fn one(&mut self, level: u32, k: f64, f: Formulation) -> cfie_core::Result<Run> {
        Ok(self.solve(level, k, &[f])?.remove(0))
    }

    /// Frees the dense data of a level once no criterion needs it.
    fn release(&mut self, level: u32) {
        self.regularisers.remove(&level);
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn pct(e: f64) -> String {
    format!("{:.3}%", 100.0 * e)
}

fn runtime_failure(e: cfie_core::Error) -> Outcome {
    outcome(false, format!("runtime failure: {e}"))
}

fn criterion_1(lab: &mut Lab) -> cfie_core::Result<Outcome> {
    let mut notes = Vec::new();
    let mut ok = true;
    for ka in [0.01, 1.0, 6.1] {
        match mie_self_check(&MieConfig::new(ka)) {
            Ok(d) => notes.push(format!("mie ka={ka} ok ({:.1e})", d.cross_section_rel_diff)),
            Err(e) => {
                ok = false;
                notes.push(format!("mie ka={ka}: {e}"));
            }
        }
    }
    let short = MieConfig::new(6.1);
    let negative = mie_diagnostics(&short.with_terms(short.n_terms / 2))?;
    if negative.passed {
        ok = false;
        notes.push("halved series passed the self-check".into());
    }
    for f in [Mfie, Efie] {
        let r = lab.one(3, 1.0, f)?;
        ok &= r.converged && r.error < 0.15;
        notes.push(format!("{f} ico3 k=1 err {} ({} it)", pct(r.error), r.iterations));
    }
    Ok(outcome(ok, notes.join("; ")))
}

fn band(lab: &mut Lab, k: f64, max_it: usize, lo: f64, hi: f64) -> cfie_core::Result<Outcome> {
    let r = lab.one(4, k, RegCfie)?;
    let ok = r.converged && r.iterations <= max_it && r.error >= lo && r.error <= hi;
    Ok(outcome(
        ok,
        format!(
            "regcfie ico4 k={k}: {} it (<= {max_it}), err {} in [{}, {}]",
            r.iterations,
            pct(r.error),
            pct(lo),
            pct(hi)
        ),
    ))
}

fn criterion_3(lab: &mut Lab) -> cfie_core::Result<Outcome> {
    let a = band(lab, 2.75, 18, 0.02, 0.08)?;
    let b = band(lab, 6.1, 22, 0.04, 0.16)?;
    Ok(outcome(a.passed && b.passed, format!("{}; {}", a.detail, b.detail)))
}

fn criterion_4(lab: &mut Lab) -> cfie_core::Result<Outcome> {
    let mut ok = true;
    let mut notes = Vec::new();
    for k in [1.0, 2.75, 6.1] {
        let i3 = lab.one(3, k, RegCfie)?.iterations;
        let i4 = lab.one(4, k, RegCfie)?.iterations;
        ok &= i3.abs_diff(i4) <= 3;
        notes.push(format!("k={k}: {i3} vs {i4}"));
    }
    Ok(outcome(ok, notes.join(", ")))
}

fn sweep_grid() -> Vec<f64> {
    (0..=10).map(|i| ((6.0 + 0.01 * i as f64) * 1e12).round() / 1e12).collect()
}

fn criterion_5(lab: &mut Lab) -> cfie_core::Result<Outcome> {
    let mut reg = Vec::new();
    let mut efie = Vec::new();
    for k in sweep_grid() {
        let runs = lab.solve(3, k, &[RegCfie, Efie])?;
        reg.push(runs[0].clone());
        efie.push(runs[1].clone());
    }
    let anchor = lab.one(3, 5.5, Efie)?;
    let ratio = |v: Vec<f64>| {
        let max = v.iter().cloned().fold(f64::MIN, f64::max);
        let min = v.iter().cloned().fold(f64::MAX, f64::min);
        max / min
    };
    let all_conv = reg.iter().all(|r| r.converged);
    let err_ratio = ratio(reg.iter().map(|r| r.error).collect());
    let it_ratio = ratio(reg.iter().map(|r| r.iterations as f64).collect());
    let efie_max = efie.iter().map(|r| r.iterations).max().unwrap();
    let efie_failed = efie.iter().any(|r| !r.converged);
    let efie_signature = efie_failed || efie_max >= 3 * anchor.iterations;
    let ok = all_conv && err_ratio <= 1.5 && it_ratio <= 1.5 && efie_signature;
    Ok(outcome(
        ok,
        format!(
            "regcfie converged everywhere: {all_conv}, error ratio {err_ratio:.3}, iteration ratio {it_ratio:.3} \
             ({}..{} it); efie max {efie_max} it, non-converged {efie_failed}, anchor k=5.5 {} it",
            reg.iter().map(|r| r.iterations).min().unwrap(),
            reg.iter().map(|r| r.iterations).max().unwrap(),
            anchor.iterations
        ),
    ))
}

fn criterion_6(lab: &mut Lab) -> cfie_core::Result<Outcome> {
    let mut faces = Vec::new();
    let mut errors = Vec::new();
    for level in [2, 3, 4] {
        errors.push(lab.one(level, 1.0, RegCfie)?.error);
        faces.push(lab.sphere(level).0.num_triangles() as f64);
    }
    let xs: Vec<f64> = faces.iter().map(|f| f.sqrt().ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let order = -sxy / sxx;
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    Ok(outcome(
        order >= 0.8 && decreasing,
        format!(
            "errors {} -> {} -> {}, fitted order {order:.3}",
            pct(errors[0]),
            pct(errors[1]),
            pct(errors[2])
        ),
    ))
}

fn criterion_8(lab: &mut Lab) -> cfie_core::Result<Outcome> {
    let k = 6.05;
    let r3 = lab.solve(3, k, &[RegCfie, Cfie])?;
    let r2 = lab.solve(2, k, &[RegCfie, Cfie])?;
    let ratio3 = r3[1].iterations as f64 / r3[0].iterations as f64;
    let ratio2 = r2[1].iterations as f64 / r2[0].iterations as f64;
    let hard_fail = !r3[1].converged || (ratio3 < 1.0 && ratio2 < 1.0);
    let soft = if ratio3 >= 1.2 { "met" } else { "missed" };
    Ok(outcome(
        !hard_fail,
        format!(
            "k={k}: ico3 cfie {} / regcfie {} it (ratio {ratio3:.2}, soft target 1.2 {soft}); \
             ico2 {} / {} (ratio {ratio2:.2})",
            r3[1].iterations, r3[0].iterations, r2[1].iterations, r2[0].iterations
        ),
    ))
}

/// Fast structural and algebraic properties on small icospheres.
fn criterion_7(lab: &mut Lab) -> cfie_core::Result<Outcome> {
    let mut failures: Vec<String> = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };

    // mesh topology
    for level in 0..=2 {
        let (mesh, basis) = lab.sphere(level).clone();
        let report = validate(&mesh);
        let topo = EdgeTopology::build(&mesh)?;
        let (v, e, f) = (mesh.num_vertices(), topo.edges().len(), mesh.num_triangles());
        check(report.is_valid(), "mesh validation");
        check(v + f == e + 2, "Euler characteristic");
        check(f == 20 * 4usize.pow(level), "face count");
        check(topo.edges().iter().all(|e| e.plus != e.minus), "edge incidence");

        // RWG normal continuity and charge neutrality
        for func in basis.functions() {
            let edge = &topo.edges()[func.edge];
            let [va, vb] = edge.vertices.map(|v| mesh.vertices()[v]);
            let dir = (vb - va).normalized();
            let mut flux_ok = true;
            for (t, opp, flux) in [(func.plus, func.plus_opposite, 1.0), (func.minus, func.minus_opposite, -1.0)] {
                let mut nu = mesh.normal(t).cross(dir);
                if nu.dot(opp - va) > 0.0 {
                    nu = -nu;
                }
                for s in [0.1, 0.5, 0.9] {
                    let x = va + (vb - va) * s;
                    flux_ok &= (rwg_value(func, t, x)?.dot(nu) - flux).abs() < 1e-10;
                }
            }
            check(flux_ok, "RWG normal continuity");
            let charge = rwg_divergence(func, func.plus)? * func.area_plus
                + rwg_divergence(func, func.minus)? * func.area_minus;
            check(charge.abs() < 1e-12, "RWG charge neutrality");
        }
    }

    // triangle rule exactness on monomials
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    for d in [1u32, 2, 3, 5, 7] {
        let rule = TriangleRule::new(d)?;
        for a in 0..=d {
            for b in 0..=(d - a) {
                let got = rule.integrate(|x, y| x.powi(a as i32) * y.powi(b as i32));
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                check((got - exact).abs() < 1e-13, "triangle rule exactness");
            }
        }
    }

    // pair-integral symmetry
    let (mesh2, basis2) = lab.sphere(2).clone();
    let quad2 = PairQuadrature::new(&mesh2, QuadConfig::default())?;
    let mut seed = 12345u64;
    let mut next = |n: usize| {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((seed >> 33) as usize) % n
    };
    for _ in 0..40 {
        let (a, b) = (next(320), next(320));
        let fa = |x: Vec3| x.0[0] + 0.5;
        let fb = |y: Vec3| 1.0 - y.0[2];
        let ab = pair_integral(&quad2, Kernel::Helmholtz(2.0), a, b, fa, fb)?;
        let ba = pair_integral(&quad2, Kernel::Helmholtz(2.0), b, a, fb, fa)?;
        check((ab - ba).norm() <= 1e-12 * ab.norm(), "pair integral symmetry");
    }

    // operator properties on icosphere(1)
    let (mesh1, basis1) = lab.sphere(1).clone();
    let quad1 = PairQuadrature::new(&mesh1, QuadConfig::default())?;
    let sys = assemble_system(&quad1, &basis1, 1.0, MatrixSet::ALL)?;
    let t = sys.efio.as_ref().unwrap();
    let r = sys.regulariser.as_ref().unwrap();
    check(t.asymmetry() < 1e-8, "T complex symmetric");
    check(r.asymmetry() < 1e-8, "R symmetric");
    check(GramFactor::new(&assemble_g(&mesh1, &basis1)).is_ok(), "G positive definite");
    let n = basis1.len();
    let neg_r = SparseMatrix::from_triplets(
        n,
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (i, j, -r.get(i, j))).collect(),
    );
    check(GramFactor::new(&neg_r).is_ok(), "-R positive definite");

    // regularised operator against the explicit matrix
    let spec = LinearOperatorSpec::new(RegCfie, &sys, ALPHA)?;
    let gram = GramFactor::new(&sys.gram)?;
    let kmat = sys.mfio.as_ref().unwrap();
    let zero = Complex64::new(0.0, 0.0);
    let mut e = vec![zero; n];
    for j in [0, n / 3, n - 1] {
        e[j] = Complex64::new(1.0, 0.0);
        let col = apply_operator(&spec, &e)?;
        e[j] = zero;
        let mut tcol: Vec<Complex64> = (0..n).map(|i| t.get(i, j)).collect();
        gram.solve_in_place(&mut tcol)?;
        let mut rt = vec![zero; n];
        r.matvec(&tcol, &mut rt);
        let close = (0..n).all(|i| {
            let expect = kmat.get(i, j) + Complex64::new(0.0, 1.0) * rt[i];
            (col[i] - expect).norm() < 1e-10 * (1.0 + expect.norm())
        });
        check(close, "operator column cross-check");
    }

    // residual monotonicity and best-approximation dominance on icosphere(2)
    let k = 1.0;
    let mie = MieConfig::new(k);
    let best = relative_error(&l2_projection(&mesh2, &basis2, &mie)?, &mesh2, &basis2, &mie)?;
    for f in Formulation::ALL {
        let run = lab.one(2, k, f)?;
        check(
            run.residual_history.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)),
            "GMRES residual monotonicity",
        );
        check(run.error >= best - 1e-12, "best-approximation dominance");
    }

    failures.sort();
    failures.dedup();
    Ok(outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("all properties hold (projection error ico2 {})", pct(best))
        } else {
            format!("violated: {}", failures.join(", "))
        },
    ))
}

type Criterion = fn(&mut Lab) -> cfie_core::Result<Outcome>;

fn main() {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |id: u32| selected.is_empty() || selected.contains(&id);
    let criteria: [(u32, &str, Criterion); 8] = [
        (1, "gating oracle checks", criterion_1),
        (7, "property suites", criterion_7),
        (5, "fictitious-frequency stability on icosphere(3)", criterion_5),
        (8, "classical combined field baseline", criterion_8),
        (2, "icosphere(4), k = 1", |lab| band(lab, 1.0, 15, 0.008, 0.03)),
        (3, "icosphere(4), k = 2.75 and 6.1", criterion_3),
        (4, "mesh independence of iteration counts", criterion_4),
        (6, "convergence order", criterion_6),
    ];
    let mut lab = Lab::default();
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut gate_failed = false;
    for (id, title, run) in criteria {
        if !wanted(id) {
            continue;
        }
        let start = Instant::now();
        let out = if gate_failed && id != 7 {
            outcome(false, "blocked: gating oracle checks failed".into())
        } else {
            run(&mut lab).unwrap_or_else(runtime_failure)
        };
        if id == 1 && !out.passed {
            gate_failed = true;
        }
        if id == 8 {
            // the icosphere(3) study is complete; keep memory for level 4
            lab.release(3);
            lab.release(2);
        }
        let secs = start.elapsed().as_secs_f64();
        println!(
            "criterion {id} {} {title}: {} [{secs:.0} s]",
            if out.passed { "PASS" } else { "FAIL" },
            out.detail
        );
        results.push((id, title, out, secs));
    }
    results.sort_by_key(|r| r.0);
    println!();
    for (id, title, out, _) in &results {
        println!("criterion {id}: {} ({title})", if out.passed { "PASS" } else { "FAIL" });
    }
    if results.iter().any(|r| !r.2.passed) {
        std::process::exit(1);
    }
}
