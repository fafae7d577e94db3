//! The dec2d binary: solve, convergence, meshgen, and sample commands.
//!
//! Exit codes: 0 success, 1 usage, 2 data/validation, 3 solver failure.
//! `DEC2D_THREADS` caps the worker pool used for element assembly.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use dec2d_cli::config::{parse_methods, LineSpec, ScenarioConfig};
use dec2d_cli::driver::{self, Artifact};
use dec2d_cli::report;
use dec2d_cli::{build_case, parse_config, run_case, run_convergence, CliError};
use dec2d_core::local_ops::Method;
use dec2d_core::mesh::{
    gen_disk, gen_egg, gen_square, write_mesh, DirichletSet, Inclusion, MaterialSpec, Point2,
    TriMesh,
};

#[derive(Parser)]
#[command(
    name = "dec2d",
    version,
    about = "2D anisotropic Poisson solver on triangle meshes (local DEC and linear FEM)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one scenario; print the report and write configured artifacts.
    Solve(SolveArgs),
    /// Solve a generator scenario on successively refined meshes.
    Convergence(ConvergenceArgs),
    /// Generate a structured mesh file, e.g.: meshgen disk rings=2 radius=1 dirichlet=10
    Meshgen(MeshgenArgs),
    /// Solve, then sample temperature and flux along straight lines as CSV.
    Sample(SampleArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Override the configured method set: dec, feml, or both.
    #[arg(long)]
    method: Option<String>,
    /// Override the solver tolerance.
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Directory output artifacts are written into (default: current dir).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of refinement levels (overrides [convergence] levels).
    #[arg(long)]
    levels: Option<usize>,
}

#[derive(Args)]
struct MeshgenArgs {
    /// Generator spec: square | disk | egg followed by key=value pairs.
    /// square: n=, side=, inclusion=cx,cy,r,inside,outside; disk: rings=,
    /// radius=; egg: rings=. Optional for all: dirichlet= (boundary value),
    /// kx=, ky=, angle=, q= (material blocks written into the file).
    #[arg(required = true)]
    spec: Vec<String>,
    /// Mesh file to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Sampling segment "x0,y0,x1,y1,count"; replaces [samples] lines.
    #[arg(long, allow_hyphen_values = true)]
    line: Option<String>,
}

fn main() {
    let code = match real_main() {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn real_main() -> Result<(), CliError> {
    init_threads()?;
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::usage(e.to_string())),
    };
    match cli.cmd {
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Convergence(args) => cmd_convergence(args),
        Cmd::Meshgen(args) => cmd_meshgen(args),
        Cmd::Sample(args) => cmd_sample(args),
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("DEC2D_THREADS") else {
        return Ok(());
    };
    let n = v.trim().parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(|| {
        CliError::usage(format!("DEC2D_THREADS must be a positive integer, not {v:?}"))
    })?;
    // Already-initialized is fine; the pool keeps its first size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn load_config(common: &CommonArgs) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", common.config.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(m) = &common.method {
        cfg.methods = parse_methods(m).map_err(CliError::Usage)?;
    }
    if let Some(t) = common.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::usage("--tol must be finite and positive"));
        }
        cfg.tol = t;
    }
    Ok(cfg)
}

fn out_dir(common: &CommonArgs) -> Result<PathBuf, CliError> {
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<(), CliError> {
    for a in artifacts {
        let full = dir.join(&a.path);
        if let Some(parent) = full.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent).map_err(|e| {
                    CliError::data(format!("cannot create {}: {e}", parent.display()))
                })?;
            }
        }
        std::fs::write(&full, &a.text)
            .map_err(|e| CliError::data(format!("cannot write {}: {e}", full.display())))?;
        println!("wrote {}", full.display());
    }
    Ok(())
}

fn wall_note(runs: &[driver::MethodRun]) -> String {
    let times: Vec<(Method, u128)> = runs.iter().map(|r| (r.method, r.wall_ms)).collect();
    report::wall_time_note(&times)
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.common)?;
    let case = build_case(&cfg)?;
    let runs = run_case(&case, &cfg.methods, cfg.tol, cfg.max_iter, cfg.exact.as_ref())?;
    let text = report::solve_report(&case, &runs);
    print!("{text}");
    println!("{}", wall_note(&runs));

    if cfg.csv.is_some() && cfg.lines.is_empty() {
        println!("note: [output] csv is set but the config has no [samples] lines");
    }
    let mut artifacts = driver::field_artifacts(&case, &runs, &cfg);
    if let Some(rp) = &cfg.report {
        artifacts.push(Artifact { path: PathBuf::from(rp), text });
    }
    write_artifacts(&out_dir(&args.common)?, &artifacts)
}

fn cmd_convergence(args: ConvergenceArgs) -> Result<(), CliError> {
    let mut cfg = load_config(&args.common)?;
    if let Some(l) = args.levels {
        if l == 0 {
            return Err(CliError::usage("--levels must be at least 1"));
        }
        cfg.levels = l;
    }
    let levels = run_convergence(&cfg, cfg.levels)?;
    let text =
        report::convergence_report(&cfg.mesh.to_string(), &levels, &cfg.methods, cfg.exact.as_ref());
    print!("{text}");

    let mut sums: Vec<(Method, u128)> = cfg.methods.iter().map(|&m| (m, 0)).collect();
    for lv in &levels {
        for (i, run) in lv.runs.iter().enumerate() {
            sums[i].1 += run.wall_ms;
        }
    }
    println!("{}", report::wall_time_note(&sums));

    let mut artifacts = Vec::new();
    if let Some(rp) = &cfg.report {
        artifacts.push(Artifact { path: PathBuf::from(rp), text });
    }
    write_artifacts(&out_dir(&args.common)?, &artifacts)
}

fn cmd_sample(args: SampleArgs) -> Result<(), CliError> {
    let mut cfg = load_config(&args.common)?;
    if let Some(spec) = &args.line {
        cfg.lines = vec![parse_cli_line(spec)?];
    }
    if cfg.lines.is_empty() {
        return Err(CliError::usage(
            "sample needs --line \"x0,y0,x1,y1,count\" or [samples] lines in the config",
        ));
    }
    let case = build_case(&cfg)?;
    let runs = run_case(&case, &cfg.methods, cfg.tol, cfg.max_iter, cfg.exact.as_ref())?;

    let to_stdout = cfg.csv.is_none() && args.common.out.is_none();
    if cfg.csv.is_none() {
        cfg.csv = Some("sample.csv".to_string());
    }
    cfg.vtk = None;
    cfg.report = None;
    let artifacts = driver::field_artifacts(&case, &runs, &cfg);
    if to_stdout {
        for a in &artifacts {
            println!("# {}", a.path.display());
            print!("{}", a.text);
        }
    } else {
        write_artifacts(&out_dir(&args.common)?, &artifacts)?;
    }
    println!("{}", wall_note(&runs));
    Ok(())
}

fn parse_cli_line(spec: &str) -> Result<LineSpec, CliError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(CliError::usage(format!("--line needs \"x0,y0,x1,y1,count\", not {spec:?}")));
    }
    let num = |s: &str, what: &str| -> Result<f64, CliError> {
        s.parse().map_err(|_| CliError::usage(format!("--line: cannot parse {what} from {s:?}")))
    };
    let count = parts[4].parse::<usize>().ok().filter(|&c| c >= 1).ok_or_else(|| {
        CliError::usage(format!("--line: count must be a positive integer, not {:?}", parts[4]))
    })?;
    Ok(LineSpec {
        p0: Point2::new(num(parts[0], "x0")?, num(parts[1], "y0")?),
        p1: Point2::new(num(parts[2], "x1")?, num(parts[3], "y1")?),
        count,
    })
}

fn cmd_meshgen(args: MeshgenArgs) -> Result<(), CliError> {
    let (mesh, materials, dirichlet) = generate_from_spec(&args.spec)?;
    let text = write_mesh(&mesh, &materials, &dirichlet);
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::data(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(&args.out, text)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", args.out.display())))?;
    println!(
        "wrote {} ({} nodes, {} elements)",
        args.out.display(),
        mesh.num_nodes(),
        mesh.num_elements()
    );
    Ok(())
}

fn get_f64(kv: &BTreeMap<&str, &str>, k: &str) -> Result<Option<f64>, CliError> {
    kv.get(k)
        .map(|v| v.parse::<f64>().map_err(|_| CliError::usage(format!("cannot parse {k} from {v:?}"))))
        .transpose()
}

fn get_usize(kv: &BTreeMap<&str, &str>, k: &str) -> Result<Option<usize>, CliError> {
    kv.get(k)
        .map(|v| {
            v.parse::<usize>().map_err(|_| CliError::usage(format!("cannot parse {k} from {v:?}")))
        })
        .transpose()
}

fn parse_meshgen_inclusion(v: &str) -> Result<Inclusion, CliError> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(CliError::usage(format!(
            "inclusion needs \"cx,cy,r,inside,outside\", not {v:?}"
        )));
    }
    let num = |s: &str, what: &str| -> Result<f64, CliError> {
        s.parse().map_err(|_| CliError::usage(format!("inclusion: cannot parse {what} from {s:?}")))
    };
    let id = |s: &str, what: &str| -> Result<usize, CliError> {
        s.parse().map_err(|_| CliError::usage(format!("inclusion: cannot parse {what} from {s:?}")))
    };
    Ok(Inclusion {
        center: Point2::new(num(parts[0], "cx")?, num(parts[1], "cy")?),
        radius: num(parts[2], "r")?,
        inside: id(parts[3], "inside")?,
        outside: id(parts[4], "outside")?,
    })
}

fn generate_from_spec(spec: &[String]) -> Result<(TriMesh, Vec<MaterialSpec>, DirichletSet), CliError> {
    let kind = spec[0].as_str();
    let mut kv: BTreeMap<&str, &str> = BTreeMap::new();
    for token in &spec[1..] {
        let (k, v) = token.split_once('=').ok_or_else(|| {
            CliError::usage(format!("meshgen spec entries are key=value, not {token:?}"))
        })?;
        if kv.insert(k, v).is_some() {
            return Err(CliError::usage(format!("duplicate meshgen key {k}")));
        }
    }
    let known: &[&str] = match kind {
        "square" => &["n", "side", "inclusion", "dirichlet", "kx", "ky", "angle", "q"],
        "disk" => &["rings", "radius", "dirichlet", "kx", "ky", "angle", "q"],
        "egg" => &["rings", "dirichlet", "kx", "ky", "angle", "q"],
        other => {
            return Err(CliError::usage(format!(
                "meshgen kind must be square, disk, or egg, not {other:?}"
            )))
        }
    };
    for k in kv.keys() {
        if !known.contains(k) {
            return Err(CliError::usage(format!("key {k} does not apply to meshgen kind {kind}")));
        }
    }

    let mesh = match kind {
        "square" => {
            let n = get_usize(&kv, "n")?
                .ok_or_else(|| CliError::usage("meshgen square needs n="))?;
            let side = get_f64(&kv, "side")?
                .ok_or_else(|| CliError::usage("meshgen square needs side="))?;
            if n < 1 {
                return Err(CliError::usage("n must be at least 1"));
            }
            if !(side > 0.0 && side.is_finite()) {
                return Err(CliError::usage("side must be finite and positive"));
            }
            let inclusion = kv.get("inclusion").map(|v| parse_meshgen_inclusion(v)).transpose()?;
            gen_square(n, side, inclusion.as_ref()).map_err(|e| CliError::data(e.to_string()))?
        }
        "disk" | "egg" => {
            let rings = get_usize(&kv, "rings")?
                .ok_or_else(|| CliError::usage(format!("meshgen {kind} needs rings=")))?;
            if rings < 1 {
                return Err(CliError::usage("rings must be at least 1"));
            }
            if kind == "disk" {
                let radius = get_f64(&kv, "radius")?.unwrap_or(1.0);
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(CliError::usage("radius must be finite and positive"));
                }
                gen_disk(rings, radius).map_err(|e| CliError::data(e.to_string()))?
            } else {
                gen_egg(rings).map_err(|e| CliError::data(e.to_string()))?
            }
        }
        _ => unreachable!("kind validated above"),
    };

    let kx = get_f64(&kv, "kx")?.unwrap_or(1.0);
    let ky = get_f64(&kv, "ky")?.unwrap_or(1.0);
    let angle = get_f64(&kv, "angle")?.unwrap_or(0.0);
    let q = get_f64(&kv, "q")?.unwrap_or(1.0);
    let ids: BTreeSet<usize> = mesh.triangles().iter().map(|t| t.material).collect();
    let materials: Vec<MaterialSpec> =
        ids.into_iter().map(|id| MaterialSpec { id, kx, ky, angle_deg: angle, q }).collect();
    let dirichlet = match get_f64(&kv, "dirichlet")? {
        Some(v) => DirichletSet::constant(mesh.boundary_nodes(), v),
        None => DirichletSet::new(),
    };
    Ok((mesh, materials, dirichlet))
}
