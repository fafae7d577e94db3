//! Case construction and the assemble/solve/postprocess pipeline.
//!
//! Local element systems are built in parallel (order-preserving), then
//! scattered serially, so results and reports are bit-identical for a fixed
//! configuration regardless of thread count.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use dec2d_core::geometry::Vec2;
use dec2d_core::local_ops::{LocalSystem, Method};
use dec2d_core::mesh::{
    gen_disk, gen_egg, gen_square, parse_mesh, refine_with, BoundaryProjection, DirichletSet,
    EggShape, MaterialSpec, MeshError, Point2, TriMesh,
};
use dec2d_core::postprocess::{
    csv_document, element_fluxes, error_norms, nodal_flux_magnitude, sample_line, vtk_document,
    FluxField, ScalarField,
};
use dec2d_core::system::{
    apply_dirichlet, assemble_from, element_system, element_systems, solve_cg, LinearSystem,
    MaterialMap, SparseSym,
};
use dec2d_core::SolveStats;

use crate::config::{LineSpec, MeshSource, Paraboloid, ScenarioConfig};
use crate::error::CliError;
use crate::report;

/// A solvable problem: mesh, materials, prescribed boundary values, and the
/// boundary curve refined midpoints are projected onto.
#[derive(Clone, Debug)]
pub struct BuiltCase {
    pub mesh: TriMesh,
    pub materials: Vec<MaterialSpec>,
    pub dirichlet: DirichletSet,
    pub projection: Option<BoundaryProjection>,
    /// Constant boundary value; present exactly for generator sources,
    /// which is what makes a case refinable.
    pub dirichlet_value: Option<f64>,
    /// Mesh source description used in reports.
    pub source: String,
}

fn mesh_data(e: MeshError) -> CliError {
    CliError::data(e.to_string())
}

/// Realizes the configured mesh source. File sources may carry their own
/// materials and dirichlet blocks; config sections override them. Generator
/// sources must be fully specified by the config.
pub fn build_case(cfg: &ScenarioConfig) -> Result<BuiltCase, CliError> {
    let source = cfg.mesh.to_string();
    match &cfg.mesh {
        MeshSource::File { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::data(format!("cannot read {path}: {e}")))?;
            let file = parse_mesh(&text).map_err(|e| CliError::data(format!("{path}: {e}")))?;
            let materials =
                if cfg.materials.is_empty() { file.materials } else { cfg.materials.clone() };
            let dirichlet = match cfg.dirichlet_value {
                Some(v) => DirichletSet::constant(file.mesh.boundary_nodes(), v),
                None => file.dirichlet,
            };
            Ok(BuiltCase {
                mesh: file.mesh,
                materials,
                dirichlet,
                projection: None,
                dirichlet_value: cfg.dirichlet_value,
                source,
            })
        }
        generator => {
            if cfg.materials.is_empty() {
                return Err(CliError::data("generator mesh sources need a [materials] section"));
            }
            let value = cfg
                .dirichlet_value
                .ok_or_else(|| CliError::data("generator mesh sources need a [dirichlet] value"))?;
            let (mesh, projection) = match generator {
                MeshSource::Square { n, side, inclusion } => {
                    (gen_square(*n, *side, inclusion.as_ref()).map_err(mesh_data)?, None)
                }
                MeshSource::Disk { rings, radius } => (
                    gen_disk(*rings, *radius).map_err(mesh_data)?,
                    Some(BoundaryProjection::Circle {
                        center: Point2::new(0.0, 0.0),
                        radius: *radius,
                    }),
                ),
                MeshSource::Egg { rings } => (
                    gen_egg(*rings).map_err(mesh_data)?,
                    Some(BoundaryProjection::Egg(EggShape::standard())),
                ),
                MeshSource::File { .. } => unreachable!("file handled above"),
            };
            let dirichlet = DirichletSet::constant(mesh.boundary_nodes(), value);
            Ok(BuiltCase {
                mesh,
                materials: cfg.materials.clone(),
                dirichlet,
                projection,
                dirichlet_value: Some(value),
                source,
            })
        }
    }
}

/// One midpoint-refinement step; boundary midpoints follow the case's
/// projection curve and the constant boundary value is re-prescribed on the
/// new boundary.
pub fn refine_case(case: &BuiltCase) -> Result<BuiltCase, CliError> {
    let value = case.dirichlet_value.ok_or_else(|| {
        CliError::data("convergence studies need a generator mesh source (files are not refinable)")
    })?;
    let mesh = refine_with(&case.mesh, case.projection.as_ref());
    let dirichlet = DirichletSet::constant(mesh.boundary_nodes(), value);
    Ok(BuiltCase {
        mesh,
        materials: case.materials.clone(),
        dirichlet,
        projection: case.projection,
        dirichlet_value: Some(value),
        source: case.source.clone(),
    })
}

/// Everything one method produced on one mesh. The matrix and load are the
/// assembled system before Dirichlet elimination, which is what the
/// cross-method comparison in reports is about.
#[derive(Clone, Debug)]
pub struct MethodRun {
    pub method: Method,
    pub stats: SolveStats,
    pub matrix: SparseSym,
    pub load: Vec<f64>,
    pub solution: Vec<f64>,
    pub element_flux: Vec<Vec2>,
    pub nodal_flux: Vec<f64>,
    pub max_temp_node: usize,
    pub max_temp: f64,
    pub max_element_flux: f64,
    pub max_nodal_flux_node: usize,
    pub max_nodal_flux: f64,
    pub stiffness_fp: u64,
    pub load_fp: u64,
    /// (Linf, L2) nodal errors against the configured exact solution.
    pub errors: Option<(f64, f64)>,
    /// Assemble + solve time; reported on stdout only.
    pub wall_ms: u128,
}

fn parallel_local_systems(
    mesh: &TriMesh,
    map: &MaterialMap,
    method: Method,
) -> Result<Vec<LocalSystem>, CliError> {
    let par: Result<Vec<LocalSystem>, _> = (0..mesh.num_elements())
        .into_par_iter()
        .map(|e| element_system(mesh, map, e, method))
        .collect();
    match par {
        Ok(locals) => Ok(locals),
        // Rerun serially so the reported element is the first failing one
        // regardless of thread schedule.
        Err(_) => match element_systems(mesh, map, method) {
            Ok(locals) => Ok(locals),
            Err(e) => Err(CliError::data(e.to_string())),
        },
    }
}

/// Assembles, solves, and postprocesses one method on a built case.
/// `max_iter = 0` selects an automatic cap of 10 n iterations.
pub fn run_method(
    case: &BuiltCase,
    method: Method,
    tol: f64,
    max_iter: usize,
    exact: Option<&Paraboloid>,
) -> Result<MethodRun, CliError> {
    let t0 = Instant::now();
    let map = MaterialMap::build(&case.materials).map_err(|e| CliError::data(e.to_string()))?;
    let locals = parallel_local_systems(&case.mesh, &map, method)?;
    let (matrix, load) = assemble_from(&case.mesh, &locals);
    let stiffness_fp = report::matrix_fingerprint(&matrix);
    let load_fp = report::vector_fingerprint(&load);

    let sys = LinearSystem {
        matrix: matrix.clone(),
        rhs: load.clone(),
        fixed: case.dirichlet.clone(),
    };
    let sys = apply_dirichlet(sys).map_err(|e| CliError::data(e.to_string()))?;
    let cap = if max_iter == 0 { 10 * case.mesh.num_nodes().max(100) } else { max_iter };
    let (solution, stats) =
        solve_cg(&sys, tol, cap).map_err(|e| CliError::solver(e.to_string()))?;
    if !stats.converged {
        return Err(CliError::solver(format!(
            "{method}: conjugate gradients hit the {cap}-iteration cap (residual {:e})",
            stats.final_residual
        )));
    }
    let wall_ms = t0.elapsed().as_millis();

    let field = ScalarField::new(&case.mesh, solution);
    let flux = element_fluxes(&field, &map).map_err(|e| CliError::data(e.to_string()))?;
    let nodal = nodal_flux_magnitude(&flux);
    let (max_temp_node, max_temp) = field.max();
    let (max_nodal_flux_node, max_nodal_flux) = nodal.max();
    let errors = exact.map(|p| error_norms(&field, |pt| p.eval(pt)));

    Ok(MethodRun {
        method,
        stats,
        max_element_flux: flux.max_magnitude(),
        element_flux: flux.vectors().to_vec(),
        nodal_flux: nodal.values().to_vec(),
        solution: field.values().to_vec(),
        matrix,
        load,
        max_temp_node,
        max_temp,
        max_nodal_flux_node,
        max_nodal_flux,
        stiffness_fp,
        load_fp,
        errors,
        wall_ms,
    })
}

/// Runs every requested method on the case, in the configured order.
pub fn run_case(
    case: &BuiltCase,
    methods: &[Method],
    tol: f64,
    max_iter: usize,
    exact: Option<&Paraboloid>,
) -> Result<Vec<MethodRun>, CliError> {
    methods.iter().map(|&m| run_method(case, m, tol, max_iter, exact)).collect()
}

/// One refinement level of a convergence study.
#[derive(Clone, Debug)]
pub struct LevelRun {
    pub level: usize,
    pub nodes: usize,
    pub elements: usize,
    pub runs: Vec<MethodRun>,
}

/// Solves the scenario on `levels` nested meshes (level 0 is the generator
/// output, each further level one midpoint refinement).
pub fn run_convergence(cfg: &ScenarioConfig, levels: usize) -> Result<Vec<LevelRun>, CliError> {
    if !cfg.mesh.is_generator() {
        return Err(CliError::data("convergence studies need a generator mesh source"));
    }
    let mut case = build_case(cfg)?;
    let mut out = Vec::with_capacity(levels);
    for level in 0..levels {
        let runs = run_case(&case, &cfg.methods, cfg.tol, cfg.max_iter, cfg.exact.as_ref())?;
        out.push(LevelRun {
            level,
            nodes: case.mesh.num_nodes(),
            elements: case.mesh.num_elements(),
            runs,
        });
        if level + 1 < levels {
            case = refine_case(&case)?;
        }
    }
    Ok(out)
}

/// A rendered output file waiting to be written under the output directory.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub path: PathBuf,
    pub text: String,
}

/// Inserts tags into a file name: `a/b.csv` + `["u", "dec"]` -> `a/b-u-dec.csv`.
pub fn artifact_name(base: &str, tags: &[&str]) -> PathBuf {
    let p = Path::new(base);
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = p.extension().and_then(|s| s.to_str());
    let mut name = String::from(stem);
    for t in tags {
        name.push('-');
        name.push_str(t);
    }
    if let Some(e) = ext {
        name.push('.');
        name.push_str(e);
    }
    match p.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => dir.join(name),
        _ => PathBuf::from(name),
    }
}

/// VTK document with the solution, recovered nodal flux magnitude, and
/// per-element flux vectors.
pub fn render_vtk(case: &BuiltCase, run: &MethodRun) -> String {
    let u = ScalarField::new(&case.mesh, run.solution.clone());
    let nodal = ScalarField::new(&case.mesh, run.nodal_flux.clone());
    let flux = FluxField::new(&case.mesh, run.element_flux.clone());
    vtk_document(&case.mesh, &[("u", &u), ("flux_magnitude", &nodal)], &[("flux", &flux)])
}

/// CSV of the temperature and of the nodal flux magnitude along one line.
pub fn render_line_csv(case: &BuiltCase, run: &MethodRun, line: &LineSpec) -> (String, String) {
    let u = ScalarField::new(&case.mesh, run.solution.clone());
    let nodal = ScalarField::new(&case.mesh, run.nodal_flux.clone());
    let temp = csv_document(&sample_line(&u, line.p0, line.p1, line.count));
    let flux = csv_document(&sample_line(&nodal, line.p0, line.p1, line.count));
    (temp, flux)
}

/// VTK and CSV artifacts for a solve, named per method (when several ran)
/// and per sample line (when several are configured).
pub fn field_artifacts(case: &BuiltCase, runs: &[MethodRun], cfg: &ScenarioConfig) -> Vec<Artifact> {
    let mut out = Vec::new();
    let many_methods = runs.len() > 1;
    let many_lines = cfg.lines.len() > 1;
    for run in runs {
        let method = run.method.to_string();
        if let Some(vtk) = &cfg.vtk {
            let tags: Vec<&str> = if many_methods { vec![method.as_str()] } else { vec![] };
            out.push(Artifact { path: artifact_name(vtk, &tags), text: render_vtk(case, run) });
        }
        if let Some(csv) = &cfg.csv {
            for (i, line) in cfg.lines.iter().enumerate() {
                let idx = (i + 1).to_string();
                let (temp, flux) = render_line_csv(case, run, line);
                for (field_tag, text) in [("u", temp), ("flux", flux)] {
                    let mut tags: Vec<&str> = vec![field_tag];
                    if many_methods {
                        tags.push(method.as_str());
                    }
                    if many_lines {
                        tags.push(idx.as_str());
                    }
                    out.push(Artifact { path: artifact_name(csv, &tags), text });
                }
            }
        }
    }
    out
}
