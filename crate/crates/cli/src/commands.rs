use std::path::PathBuf;

use cfie_core::assembly::{assemble_r, assemble_system};
use cfie_core::geometry::{read_off, validate, write_off};
use cfie_core::quadrature::PairQuadrature;
use cfie_core::reference::mie_self_check;
use cfie_core::solve::solve_assembled;
use cfie_core::{
    icosphere, relative_error, EdgeTopology, Excitation, Formulation, MatrixSet, MieConfig, RwgBasis,
    SolveReport, SurfaceMesh,
};

use crate::args::{ConvergenceArgs, MeshGenArgs, SolveArgs, SweepArgs};
use crate::error::{usage, CliError};
use crate::settings::{
    parse_list, parse_method, positive_k, resolve_common, Common, FileConfig,
};
use crate::table::{fitted_order, Row, Sink};

/// Largest distance of a vertex from the unit sphere still scored against the Mie series.
const UNIT_SPHERE_TOL: f64 = 1e-6;

pub fn mesh_gen(args: &MeshGenArgs) -> Result<(), CliError> {
    if !(args.radius > 0.0) {
        return Err(usage(format!("--radius must be positive, got {}", args.radius)));
    }
    let mesh = icosphere(args.subdiv, args.radius)?;
    write_off(&mesh, &args.out)?;
    let edges = EdgeTopology::build(&mesh)?.edges().len();
    println!(
        "F={} E={} V={}",
        mesh.num_triangles(),
        edges,
        mesh.num_vertices()
    );
    Ok(())
}

enum MeshSource {
    File(PathBuf),
    Subdiv(u32),
}

fn mesh_source(
    mesh: Option<PathBuf>,
    subdiv: Option<u32>,
    file: &FileConfig,
) -> Result<MeshSource, CliError> {
    // a flag of either kind overrides both config keys
    let (mesh, subdiv) = if mesh.is_some() || subdiv.is_some() {
        (mesh, subdiv)
    } else {
        (file.get("mesh")?, file.get("subdiv")?)
    };
    match (mesh, subdiv) {
        (Some(p), None) => Ok(MeshSource::File(p)),
        (None, Some(s)) => Ok(MeshSource::Subdiv(s)),
        (Some(_), Some(_)) => Err(usage("give exactly one of --mesh and --subdiv")),
        (None, None) => Err(usage("one of --mesh or --subdiv is required")),
    }
}

fn load_mesh(source: &MeshSource) -> Result<SurfaceMesh, CliError> {
    let mesh = match source {
        MeshSource::File(p) => read_off(p)?,
        MeshSource::Subdiv(s) => icosphere(*s, 1.0)?,
    };
    let report = validate(&mesh);
    if !report.is_valid() {
        return Err(cfie_core::Error::InvalidMesh(report.summary()).into());
    }
    Ok(mesh)
}

fn check_unit_sphere(mesh: &SurfaceMesh) -> Result<(), CliError> {
    let dev = mesh.max_radius_deviation(1.0);
    if dev > UNIT_SPHERE_TOL {
        return Err(usage(format!(
            "--mie-reference needs a unit sphere mesh; vertices deviate by up to {dev:.3e}"
        )));
    }
    Ok(())
}

fn mie_oracle(k: f64) -> Result<MieConfig, CliError> {
    let cfg = MieConfig::new(k);
    mie_self_check(&cfg)?;
    Ok(cfg)
}

fn install_workers(common: &Common) -> Result<(), CliError> {
    if let Some(n) = common.workers {
        // a second initialisation within one process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// One mesh with its basis and quadrature, reused across solves.
struct Problem {
    mesh: SurfaceMesh,
    basis: RwgBasis,
}

impl Problem {
    fn new(mesh: SurfaceMesh) -> Result<Self, CliError> {
        let basis = RwgBasis::from_mesh(&mesh)?;
        Ok(Self { mesh, basis })
    }

    fn row(&self, f: Formulation, k: f64, common: &Common, report: &SolveReport, err: Option<f64>) -> Row {
        Row {
            method: f.name().to_string(),
            k: Some(k),
            n_triangles: Some(self.mesh.num_triangles()),
            n_edges: Some(self.basis.len()),
            alpha: (f == Formulation::Cfie).then_some(common.solve.alpha),
            tol: common.solve.tol,
            iterations: Some(report.iterations),
            converged: report.converged,
            rel_error: err,
            final_residual: Some(report.final_residual()),
            wall_time_s: report.wall_time,
        }
    }

    /// Solves every formulation at one wavenumber from a single assembly.
    /// A precomputed regulariser is moved in and handed back afterwards.
    fn solve_all(
        &self,
        methods: &[Formulation],
        k: f64,
        common: &Common,
        mie: Option<&MieConfig>,
        regulariser: &mut Option<cfie_core::linalg::DenseMatrix<f64>>,
    ) -> Result<Vec<(Formulation, SolveReport, Option<f64>)>, CliError> {
        let start = std::time::Instant::now();
        let quad = PairQuadrature::new(&self.mesh, common.solve.quad)?;
        let mut set = methods.iter().fold(MatrixSet::default(), |acc, &f| {
            let s = MatrixSet::for_formulation(f);
            MatrixSet {
                efio: acc.efio || s.efio,
                mfio: acc.mfio || s.mfio,
                regulariser: acc.regulariser || s.regulariser,
            }
        });
        let reuse = set.regulariser && regulariser.is_some();
        if reuse {
            set.regulariser = false;
        }
        let mut sys = assemble_system(&quad, &self.basis, k, set)?;
        if reuse {
            sys.regulariser = regulariser.take();
        }
        let assembly_time = start.elapsed().as_secs_f64();
        let exc = Excitation::default_wave(k)?.with_alpha(common.solve.alpha);
        let mut out = Vec::new();
        for &f in methods {
            let mut report = solve_assembled(&quad, &self.basis, &sys, &exc, f, &common.solve)?;
            report.wall_time += assembly_time;
            let err = mie
                .map(|m| relative_error(&report.x, &self.mesh, &self.basis, m))
                .transpose()?;
            out.push((f, report, err));
        }
        if set.regulariser || reuse {
            *regulariser = sys.regulariser.take();
        }
        Ok(out)
    }
}

pub fn solve(args: &SolveArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_ref())?;
    let common = resolve_common(&args.common, &file)?;
    let method = parse_method(
        &file
            .pick(args.method.clone(), "method")?
            .ok_or_else(|| usage("--method is required"))?,
    )?;
    let k = positive_k(file.pick(args.k, "k")?, "k")?;
    let source = mesh_source(args.mesh.clone(), args.subdiv, &file)?;
    install_workers(&common)?;

    let problem = Problem::new(load_mesh(&source)?)?;
    let mie = if common.mie_reference {
        check_unit_sphere(&problem.mesh)?;
        Some(mie_oracle(k)?)
    } else {
        None
    };
    let mut sink = Sink::open(common.out.as_deref())?;
    let mut reg = None;
    let results = problem.solve_all(&[method], k, &common, mie.as_ref(), &mut reg)?;
    let (f, report, err) = &results[0];
    sink.write(&problem.row(*f, k, &common, report, *err))?;
    if report.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged(1))
    }
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_ref())?;
    let common = resolve_common(&args.common, &file)?;
    let methods: Vec<Formulation> = parse_list::<String>(
        &file
            .pick(args.methods.clone(), "methods")?
            .ok_or_else(|| usage("--methods is required"))?,
        "method",
    )?
    .iter()
    .map(|m| parse_method(m))
    .collect::<Result<_, _>>()?;
    if methods.is_empty() {
        return Err(usage("--methods lists no method"));
    }
    let k_min = positive_k(file.pick(args.k_min, "k_min")?, "k-min")?;
    let k_max = positive_k(file.pick(args.k_max, "k_max")?, "k-max")?;
    let steps: usize = file
        .pick(args.k_steps, "k_steps")?
        .ok_or_else(|| usage("--k-steps is required"))?;
    if k_min >= k_max {
        return Err(usage(format!("--k-min ({k_min}) must be below --k-max ({k_max})")));
    }
    if steps < 2 {
        return Err(usage(format!("--k-steps must be at least 2, got {steps}")));
    }
    let source = mesh_source(args.mesh.clone(), args.subdiv, &file)?;
    install_workers(&common)?;

    let problem = Problem::new(load_mesh(&source)?)?;
    if common.mie_reference {
        check_unit_sphere(&problem.mesh)?;
    }
    let mut sink = Sink::open(common.out.as_deref())?;
    let mut reg = if methods.contains(&Formulation::RegCfie) {
        let quad = PairQuadrature::new(&problem.mesh, common.solve.quad)?;
        Some(assemble_r(&quad, &problem.basis)?)
    } else {
        None
    };
    let mut failed = 0;
    for i in 0..steps {
        // snap to 12 decimals so grid points print as typed (6.07, not 6.069999999999999)
        let k = k_min + (k_max - k_min) * i as f64 / (steps - 1) as f64;
        let k = (k * 1e12).round() / 1e12;
        let mie = if common.mie_reference { Some(mie_oracle(k)?) } else { None };
        for (f, report, err) in problem.solve_all(&methods, k, &common, mie.as_ref(), &mut reg)? {
            failed += usize::from(!report.converged);
            sink.write(&problem.row(f, k, &common, &report, err))?;
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::NotConverged(failed))
    }
}

pub fn convergence(args: &ConvergenceArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_ref())?;
    let common = resolve_common(&args.common, &file)?;
    let levels: Vec<u32> = parse_list(
        &file
            .pick(args.subdiv_list.clone(), "subdiv_list")?
            .ok_or_else(|| usage("--subdiv-list is required"))?,
        "level",
    )?;
    if levels.len() < 2 {
        return Err(usage("--subdiv-list needs at least two levels"));
    }
    let method = match file.pick(args.method.clone(), "method")? {
        Some(m) => parse_method(&m)?,
        None => Formulation::RegCfie,
    };
    let k = positive_k(Some(file.pick(args.k, "k")?.unwrap_or(1.0)), "k")?;
    install_workers(&common)?;
    let mie = mie_oracle(k)?;

    let mut sink = Sink::open(common.out.as_deref())?;
    let (mut faces, mut errors) = (Vec::new(), Vec::new());
    let mut all_converged = true;
    let mut total_time = 0.0;
    let mut failed = 0;
    for &level in &levels {
        let problem = Problem::new(load_mesh(&MeshSource::Subdiv(level))?)?;
        let mut reg = None;
        let results = problem.solve_all(&[method], k, &common, Some(&mie), &mut reg)?;
        let (f, report, err) = &results[0];
        sink.write(&problem.row(*f, k, &common, report, *err))?;
        all_converged &= report.converged;
        failed += usize::from(!report.converged);
        total_time += report.wall_time;
        faces.push(problem.mesh.num_triangles());
        errors.push(err.expect("reference requested"));
    }
    sink.write(&Row {
        method: "order_fit".into(),
        k: Some(k),
        alpha: (method == Formulation::Cfie).then_some(common.solve.alpha),
        tol: common.solve.tol,
        converged: all_converged,
        rel_error: fitted_order(&faces, &errors),
        wall_time_s: total_time,
        ..Row::default()
    })?;
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::NotConverged(failed))
    }
}

