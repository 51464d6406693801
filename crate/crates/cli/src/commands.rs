use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use dualtopo::analytic::{
    buridan, double_well_triality, simp_counterexample, symmetric_truss, CriticalKind, DoubleWellSpec, SimpSurface,
    TrussSpec,
};
use dualtopo::baselines::{gray_count, per_iteration_cost_probe, run_beso, run_simp, BesoConfig, ProbeConfig, SimpConfig};
use dualtopo::driver::{run_cdt, CdtConfig, DriverError, Method, RunRecord};
use dualtopo::fem::{EquilibriumSolver, Material, StructuralModel};
use dualtopo::io::{
    cost_table_csv, format_g, numeric_csv, runrecord_csv, write_density_pgm, write_text, PgmFormat,
};
use dualtopo::problems::{ProblemKind, ProblemSpec};

use crate::args::{Command, DemoArgs, DemoName, ProbeArgs, RunArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit code 1.
    Usage(String),
    /// Failure while computing or writing results; exit code 2.
    Solver(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Solver(e)
    }
}

type CliResult = Result<(), CliError>;

pub fn execute(command: Command) -> CliResult {
    match command {
        Command::Run(args) => run(&args),
        Command::Demo(args) => demo(&args),
        Command::Probe(args) => probe(&args),
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn prepare_out(dir: &Path) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    Ok(dir.to_path_buf())
}

fn save(path: PathBuf, text: &str) -> CliResult {
    write_text(&path, text).map_err(|e| CliError::Solver(e.into()))
}

fn g(x: f64) -> String {
    format_g(x, 12)
}

fn build_model(args: &RunArgs) -> Result<StructuralModel, CliError> {
    let mut dims = vec![args.nelx as usize, args.nely as usize];
    if args.problem == ProblemKind::Cantilever3d {
        dims.push(args.nelz as usize);
    }
    let material = Material::new(args.e, args.nu, args.emin).map_err(usage)?;
    let spec = ProblemSpec { kind: args.problem, dims, load: args.load, material };
    spec.build().map_err(usage)
}

struct Outcome {
    density: Vec<f64>,
    record: RunRecord,
    compliance: f64,
    strain_energy: f64,
    relative_residual: f64,
}

fn run(args: &RunArgs) -> CliResult {
    let model = build_model(args)?;
    let out = prepare_out(&args.output.out)?;
    let max_outer = args.max_outer as usize;
    let result = match args.method {
        Method::Cdt => {
            let cfg = CdtConfig {
                volfrac: args.volfrac,
                mu: args.mu,
                tau0: args.tau0,
                omega1: args.omega1,
                omega2: args.omega2,
                max_outer,
                max_inner: args.max_inner as usize,
                beta0: args.beta,
                gain: args.gain,
                ..Default::default()
            };
            cfg.validate().map_err(usage)?;
            run_cdt(&model, &cfg).map(|r| Outcome {
                density: r.density.values(),
                record: r.record,
                compliance: r.compliance,
                strain_energy: r.strain_energy,
                relative_residual: r.relative_residual,
            })
        }
        Method::Beso => {
            let cfg = BesoConfig { volfrac: args.volfrac, mu: args.mu, omega2: args.omega2, max_outer, gain: args.gain };
            cfg.validate().map_err(usage)?;
            run_beso(&model, &cfg).map(|r| Outcome {
                density: r.density.values(),
                record: r.record,
                compliance: r.compliance,
                strain_energy: r.strain_energy,
                relative_residual: r.relative_residual,
            })
        }
        Method::Simp => {
            let cfg = SimpConfig {
                penal: args.penal,
                rmin: args.rmin,
                tol: args.omega2,
                max_iters: max_outer,
                ..Default::default()
            };
            cfg.validate().map_err(usage)?;
            run_simp(&model, args.volfrac, &cfg).and_then(|r| {
                let residual = EquilibriumSolver::new(&model)
                    .relative_residual(&r.density, cfg.penal, &r.displacement)
                    .map_err(|source| DriverError::Fem { gamma: r.record.len(), source })?;
                Ok(Outcome {
                    density: r.density,
                    record: r.record,
                    compliance: r.compliance,
                    strain_energy: r.strain_energy,
                    relative_residual: residual,
                })
            })
        }
    };
    let outcome = match result {
        Ok(o) => o,
        Err(DriverError::MaxOuterExceeded { max_outer, record }) => {
            save(out.join("history.csv"), &runrecord_csv(&record))?;
            return Err(CliError::Solver(anyhow!(
                "no convergence within {max_outer} outer steps; partial history in {}",
                out.join("history.csv").display()
            )));
        }
        Err(DriverError::Config(m)) => return Err(CliError::Usage(m)),
        Err(e) => return Err(CliError::Solver(e.into())),
    };

    let format = if args.pgm_ascii { PgmFormat::Ascii } else { PgmFormat::Binary };
    let images = write_density_pgm(&outcome.density, model.mesh(), &out.join("density.pgm"), format)
        .map_err(|e| CliError::Solver(e.into()))?;
    save(out.join("history.csv"), &runrecord_csv(&outcome.record))?;

    let volume: f64 = outcome.density.iter().sum::<f64>() * model.mesh().element_volume();
    let mut summary = String::new();
    let dims: Vec<String> = model.mesh().dims().iter().map(usize::to_string).collect();
    let _ = writeln!(summary, "problem = {}", args.problem);
    let _ = writeln!(summary, "mesh = {}", dims.join("x"));
    let _ = writeln!(summary, "method = {}", args.method);
    let _ = writeln!(summary, "volfrac = {}", g(args.volfrac));
    let _ = writeln!(summary, "mu = {}", g(args.mu));
    let _ = writeln!(summary, "outer_iters = {}", outcome.record.len());
    let _ = writeln!(summary, "converged = {}", outcome.record.converged);
    let _ = writeln!(summary, "volume = {}", g(volume));
    let _ = writeln!(summary, "compliance = {}", g(outcome.compliance));
    let _ = writeln!(summary, "strain_energy = {}", g(outcome.strain_energy));
    let _ = writeln!(summary, "gray_elements = {}", gray_count(&outcome.density));
    let _ = writeln!(summary, "relative_residual = {}", g(outcome.relative_residual));
    save(out.join("summary.txt"), &summary)?;
    print!("{summary}");
    for image in images {
        println!("wrote {}", image.display());
    }
    Ok(())
}

fn demo(args: &DemoArgs) -> CliResult {
    let out = prepare_out(&args.output.out)?;
    let sqrt2 = std::f64::consts::SQRT_2;
    let a = args.a.unwrap_or((2.0 - sqrt2) / 2.0);
    let b = args.b.unwrap_or((4.0 + sqrt2) / 2.0);
    match args.name {
        DemoName::Buridan => {
            let r = buridan(args.w, args.epsilon, false).map_err(|e| CliError::Solver(e.into()))?;
            let tc = r.existence.tau_c;
            let w = r.instance.gains();
            let rho = r.density.as_ref().map_or([f64::NAN; 2], |d| [d.get(0) as u8 as f64, d.get(1) as u8 as f64]);
            let row = vec![
                w[0],
                w[1],
                tc.tau,
                tc.lo,
                tc.hi,
                f64::from(u8::from(r.existence.unique)),
                r.optima.optima.len() as f64,
                rho[0],
                rho[1],
            ];
            let header = ["w1", "w2", "tau_c", "tau_lo", "tau_hi", "unique", "optima", "rho1", "rho2"];
            save(out.join("buridan.csv"), &numeric_csv(&header, &[row]))?;
            println!("w = ({}, {}), tau_c in [{}, {}]", g(w[0]), g(w[1]), g(tc.lo), g(tc.hi));
            println!("unique = {}, brute-force optima = {}", r.existence.unique, r.optima.optima.len());
            match r.density {
                Some(d) => println!("rho = ({}, {})", u8::from(d.get(0)), u8::from(d.get(1))),
                None => println!("rho: degenerate instance, no unique selection"),
            }
        }
        DemoName::Truss => {
            let spec = TrussSpec { a, b, ..TrussSpec::symmetric(args.epsilon) };
            let r = symmetric_truss(&spec, false).map_err(|e| CliError::Solver(e.into()))?;
            let rho = [r.density.get(0) as u8 as f64, r.density.get(1) as u8 as f64];
            let header = ["epsilon", "rho1", "rho2", "potential", "nominal_potential", "reference", "outer_steps"];
            let row = vec![
                args.epsilon,
                rho[0],
                rho[1],
                r.potential,
                r.nominal_potential,
                spec.reference_potential(),
                r.outer_steps as f64,
            ];
            save(out.join("truss.csv"), &numeric_csv(&header, &[row]))?;
            println!("rho = ({}, {}) after {} steps", rho[0], rho[1], r.outer_steps);
            println!("potential (perturbed load) = {}", g(r.potential));
            println!("potential (nominal load) = {}", g(r.nominal_potential));
            println!("-(1/a + 1/b)/2 = {}", g(spec.reference_potential()));
        }
        DemoName::Counterexample => {
            let f = match args.f.as_deref() {
                None => [1.0, 1.0],
                Some(&[x, y]) => [x, y],
                Some(other) => return Err(usage(format!("counterexample needs two load entries, got {}", other.len()))),
            };
            let surface = SimpSurface::new(a, b, f, args.p).map_err(CliError::Usage)?;
            let r = simp_counterexample(&surface, args.resolution as usize);
            let samples: Vec<Vec<f64>> = r.samples.iter().map(|s| s.to_vec()).collect();
            save(out.join("surface.csv"), &numeric_csv(&["rho1", "rho2", "P_s"], &samples))?;
            let minima: Vec<Vec<f64>> =
                r.boundary_minima.iter().map(|m| vec![m[0], m[1], surface.eval(m[0], m[1])]).collect();
            save(out.join("boundary_minima.csv"), &numeric_csv(&["rho1", "rho2", "P_s"], &minima))?;
            for m in &r.boundary_minima {
                println!("boundary minimum at ({}, {}), P_s = {}", g(m[0]), g(m[1]), g(r.boundary_min_value));
            }
        }
        DemoName::DoubleWell => {
            let spec = DoubleWellSpec::new(args.beta, args.lambda, args.f.clone().unwrap_or_else(|| vec![0.5])).map_err(CliError::Usage)?;
            let r = double_well_triality(&spec);
            let n = spec.dim();
            let mut text = String::from("sigma,");
            for i in 1..=n {
                let _ = write!(text, "x{i},");
            }
            text.push_str("primal,dual,kind\n");
            for p in &r.points {
                let xs: Vec<String> = p.x.iter().map(|&v| g(v)).collect();
                let _ = writeln!(text, "{},{},{},{},{}", g(p.sigma), xs.join(","), g(p.primal), g(p.dual), kind_name(p.kind));
                println!(
                    "sigma = {}, x = ({}), Pi = {}, Pi^d = {} ({})",
                    g(p.sigma),
                    xs.join(", "),
                    g(p.primal),
                    g(p.dual),
                    kind_name(p.kind)
                );
            }
            if let Some([plus, minus]) = &r.symmetric_minimizers {
                let show = |v: &Vec<f64>| v.iter().map(|&x| g(x)).collect::<Vec<_>>().join(", ");
                println!("f = 0: minimizers ({}) and ({})", show(plus), show(minus));
            }
            save(out.join("roots.csv"), &text)?;
        }
    }
    Ok(())
}

fn kind_name(kind: CriticalKind) -> &'static str {
    match kind {
        CriticalKind::GlobalMin => "global-min",
        CriticalKind::LocalMin => "local-min",
        CriticalKind::LocalMax => "local-max",
        CriticalKind::Saddle => "saddle",
    }
}

fn probe(args: &ProbeArgs) -> CliResult {
    let out = prepare_out(&args.output.out)?;
    let want = args.problem.spatial_dim();
    if let Some(bad) = args.meshes.iter().find(|m| m.0.len() != want) {
        return Err(usage(format!("{} needs {want} element counts per mesh, got {:?}", args.problem, bad.0)));
    }
    let config = ProbeConfig {
        problem: args.problem,
        volfrac: args.volfrac,
        mu: args.mu,
        omega2: args.omega2,
        max_outer: args.max_outer as usize,
    };
    dualtopo::driver::CdtConfig { volfrac: args.volfrac, mu: args.mu, ..Default::default() }
        .validate()
        .map_err(usage)?;
    let meshes: Vec<Vec<usize>> = args.meshes.iter().map(|m| m.0.clone()).collect();
    let rows = per_iteration_cost_probe(&args.methods, &meshes, &config).map_err(|e| match e {
        DriverError::Config(m) => CliError::Usage(m),
        other => CliError::Solver(other.into()),
    })?;
    let text = cost_table_csv(&rows);
    save(out.join("cost.csv"), &text)?;
    print!("{text}");
    Ok(())
}
