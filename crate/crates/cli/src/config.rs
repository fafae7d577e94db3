//! Scenario configuration files: a sectioned key/value text format.
//!
//! ```text
//! [mesh]
//! kind = disk              # file | square | disk | egg
//! rings = 8                # disk, egg
//! radius = 1               # disk (default 1)
//! # path = case.mesh       # file
//! # n = 16                 # square: subdivisions per side
//! # side = 2               # square: edge length
//! # inclusion = 1 1 0.5 0 1  # square: cx cy r inside_mat outside_mat
//!
//! [materials]
//! material = 0 1.5 1.0 30 1  # id kx ky angle_deg q, repeatable
//!
//! [dirichlet]
//! value = 10               # prescribed on every boundary node
//!
//! [solver]
//! method = both            # dec | feml | both (default both)
//! tol = 1e-10              # relative residual target (default 1e-10)
//! max_iter = 0             # CG cap, 0 = automatic (default)
//!
//! [output]
//! report = report.txt
//! vtk = fields.vtk
//! csv = line.csv
//!
//! [samples]
//! line = -1 0 1 0 201      # x0 y0 x1 y1 count, repeatable
//!
//! [convergence]
//! levels = 4
//! exact = paraboloid 10 0.2  # u = base + coef * (1 - x^2 - y^2)
//! ```
//!
//! `#` starts a comment, blank lines are skipped. `material` and `line`
//! may repeat; every other key may appear at most once. A mesh file source
//! may carry its own materials and dirichlet blocks, so those sections are
//! optional here; generator sources must provide both.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use dec2d_core::local_ops::Method;
use dec2d_core::mesh::{Inclusion, MaterialSpec, Point2};

use crate::error::CliError;

/// Where the mesh comes from. Generator sources are refinable; a file
/// source is solved as-is.
#[derive(Clone, Debug)]
pub enum MeshSource {
    File { path: String },
    Square { n: usize, side: f64, inclusion: Option<Inclusion> },
    Disk { rings: usize, radius: f64 },
    Egg { rings: usize },
}

impl MeshSource {
    pub fn is_generator(&self) -> bool {
        !matches!(self, MeshSource::File { .. })
    }
}

impl fmt::Display for MeshSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshSource::File { path } => write!(f, "file {path}"),
            MeshSource::Square { n, side, inclusion } => {
                write!(f, "square n={n} side={side}")?;
                if let Some(inc) = inclusion {
                    write!(
                        f,
                        " inclusion=({} {} {} {} {})",
                        inc.center.x, inc.center.y, inc.radius, inc.inside, inc.outside
                    )?;
                }
                Ok(())
            }
            MeshSource::Disk { rings, radius } => write!(f, "disk rings={rings} radius={radius}"),
            MeshSource::Egg { rings } => write!(f, "egg rings={rings}"),
        }
    }
}

/// Exact solution family u = base + coef * (1 - x^2 - y^2), used for the
/// error columns of convergence studies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Paraboloid {
    pub base: f64,
    pub coef: f64,
}

impl Paraboloid {
    pub fn eval(&self, p: Point2) -> f64 {
        self.base + self.coef * (1.0 - p.x * p.x - p.y * p.y)
    }
}

impl fmt::Display for Paraboloid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u = {} + {} * (1 - x^2 - y^2)", self.base, self.coef)
    }
}

/// One straight sampling segment with an inclusive point count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSpec {
    pub p0: Point2,
    pub p1: Point2,
    pub count: usize,
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub mesh: MeshSource,
    pub materials: Vec<MaterialSpec>,
    pub dirichlet_value: Option<f64>,
    pub methods: Vec<Method>,
    pub tol: f64,
    /// CG iteration cap; 0 selects an automatic cap of 10 n.
    pub max_iter: usize,
    pub report: Option<String>,
    pub vtk: Option<String>,
    pub csv: Option<String>,
    pub lines: Vec<LineSpec>,
    pub levels: usize,
    pub exact: Option<Paraboloid>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Mesh,
    Materials,
    Dirichlet,
    Solver,
    Output,
    Samples,
    Convergence,
}

struct Row {
    key: String,
    value: String,
    line: usize,
}

fn bad(line: usize, msg: impl fmt::Display) -> CliError {
    CliError::data(format!("config line {line}: {msg}"))
}

fn parse_num<T: FromStr>(value: &str, line: usize, what: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| bad(line, format!("cannot parse {what} from {value:?}")))
}

fn set_once<T>(slot: &mut Option<T>, v: T, line: usize, key: &str) -> Result<(), CliError> {
    if slot.is_some() {
        return Err(bad(line, format!("duplicate key {key}")));
    }
    *slot = Some(v);
    Ok(())
}

fn fields(value: &str, line: usize, n: usize, shape: &str) -> Result<Vec<String>, CliError> {
    let f: Vec<String> = value.split_whitespace().map(str::to_string).collect();
    if f.len() != n {
        return Err(bad(line, format!("expected {n} fields: {shape}")));
    }
    Ok(f)
}

/// Parses `dec`, `feml`, or `both` into the ordered method set.
pub fn parse_methods(value: &str) -> Result<Vec<Method>, String> {
    match value.trim() {
        "dec" => Ok(vec![Method::Dec]),
        "feml" => Ok(vec![Method::Feml]),
        "both" => Ok(vec![Method::Dec, Method::Feml]),
        other => Err(format!("method must be dec, feml, or both, not {other:?}")),
    }
}

fn parse_material(value: &str, line: usize) -> Result<MaterialSpec, CliError> {
    let f = fields(value, line, 5, "id kx ky angle_deg q")?;
    Ok(MaterialSpec {
        id: parse_num(&f[0], line, "material id")?,
        kx: parse_num(&f[1], line, "kx")?,
        ky: parse_num(&f[2], line, "ky")?,
        angle_deg: parse_num(&f[3], line, "angle_deg")?,
        q: parse_num(&f[4], line, "q")?,
    })
}

fn parse_line_spec(value: &str, line: usize) -> Result<LineSpec, CliError> {
    let f = fields(value, line, 5, "x0 y0 x1 y1 count")?;
    let spec = LineSpec {
        p0: Point2::new(parse_num(&f[0], line, "x0")?, parse_num(&f[1], line, "y0")?),
        p1: Point2::new(parse_num(&f[2], line, "x1")?, parse_num(&f[3], line, "y1")?),
        count: parse_num(&f[4], line, "count")?,
    };
    if spec.count == 0 {
        return Err(bad(line, "sample count must be at least 1"));
    }
    Ok(spec)
}

fn parse_exact(value: &str, line: usize) -> Result<Paraboloid, CliError> {
    let f: Vec<&str> = value.split_whitespace().collect();
    match f.as_slice() {
        [family, base, coef] if *family == "paraboloid" => Ok(Paraboloid {
            base: parse_num(base, line, "paraboloid base")?,
            coef: parse_num(coef, line, "paraboloid coef")?,
        }),
        _ => Err(bad(line, "exact must be: paraboloid <base> <coef>")),
    }
}

fn parse_inclusion(value: &str, line: usize) -> Result<Inclusion, CliError> {
    let f = fields(value, line, 5, "cx cy r inside_mat outside_mat")?;
    Ok(Inclusion {
        center: Point2::new(parse_num(&f[0], line, "cx")?, parse_num(&f[1], line, "cy")?),
        radius: parse_num(&f[2], line, "r")?,
        inside: parse_num(&f[3], line, "inside_mat")?,
        outside: parse_num(&f[4], line, "outside_mat")?,
    })
}

fn mesh_source(rows: &[Row], saw_mesh_section: bool) -> Result<MeshSource, CliError> {
    if !saw_mesh_section {
        return Err(CliError::data("config: missing [mesh] section"));
    }
    let mut kind: Option<(&str, usize)> = None;
    for r in rows {
        if r.key == "kind" {
            if kind.is_some() {
                return Err(bad(r.line, "duplicate key kind"));
            }
            kind = Some((&r.value, r.line));
        }
    }
    let (kind, _) =
        kind.ok_or_else(|| CliError::data("config: [mesh] needs kind = file | square | disk | egg"))?;

    let mut seen = BTreeSet::new();
    let mut path: Option<String> = None;
    let mut n: Option<usize> = None;
    let mut side: Option<f64> = None;
    let mut inclusion: Option<Inclusion> = None;
    let mut rings: Option<usize> = None;
    let mut radius: Option<f64> = None;
    for r in rows {
        if r.key == "kind" {
            continue;
        }
        if !seen.insert(r.key.clone()) {
            return Err(bad(r.line, format!("duplicate key {}", r.key)));
        }
        match (kind, r.key.as_str()) {
            ("file", "path") => path = Some(r.value.clone()),
            ("square", "n") => n = Some(parse_num(&r.value, r.line, "n")?),
            ("square", "side") => side = Some(parse_num(&r.value, r.line, "side")?),
            ("square", "inclusion") => inclusion = Some(parse_inclusion(&r.value, r.line)?),
            ("disk", "rings") | ("egg", "rings") => {
                rings = Some(parse_num(&r.value, r.line, "rings")?)
            }
            ("disk", "radius") => radius = Some(parse_num(&r.value, r.line, "radius")?),
            ("file", other) | ("square", other) | ("disk", other) | ("egg", other) => {
                return Err(bad(r.line, format!("key {other} does not apply to mesh kind {kind}")))
            }
            _ => return Err(CliError::data(format!("config: unknown mesh kind {kind:?}"))),
        }
    }
    fn need<T>(slot: Option<T>, kind: &str, key: &str) -> Result<T, CliError> {
        slot.ok_or_else(|| CliError::data(format!("config: mesh kind {kind} needs {key} =")))
    }
    match kind {
        "file" => Ok(MeshSource::File { path: need(path, kind, "path")? }),
        "square" => Ok(MeshSource::Square {
            n: need(n, kind, "n")?,
            side: need(side, kind, "side")?,
            inclusion,
        }),
        "disk" => {
            Ok(MeshSource::Disk { rings: need(rings, kind, "rings")?, radius: radius.unwrap_or(1.0) })
        }
        "egg" => Ok(MeshSource::Egg { rings: need(rings, kind, "rings")? }),
        other => Err(CliError::data(format!("config: unknown mesh kind {other:?}"))),
    }
}

/// Parses a scenario document. Errors carry 1-based line numbers.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    let mut section: Option<Section> = None;
    let mut saw_mesh_section = false;
    let mut mesh_rows: Vec<Row> = Vec::new();
    let mut materials: Vec<MaterialSpec> = Vec::new();
    let mut dirichlet_value: Option<f64> = None;
    let mut methods: Option<Vec<Method>> = None;
    let mut tol: Option<f64> = None;
    let mut max_iter: Option<usize> = None;
    let mut report: Option<String> = None;
    let mut vtk: Option<String> = None;
    let mut csv: Option<String> = None;
    let mut lines_spec: Vec<LineSpec> = Vec::new();
    let mut levels: Option<usize> = None;
    let mut exact: Option<Paraboloid> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| bad(line, "unterminated [section] header"))?;
            section = Some(match name {
                "mesh" => {
                    saw_mesh_section = true;
                    Section::Mesh
                }
                "materials" => Section::Materials,
                "dirichlet" => Section::Dirichlet,
                "solver" => Section::Solver,
                "output" => Section::Output,
                "samples" => Section::Samples,
                "convergence" => Section::Convergence,
                other => return Err(bad(line, format!("unknown section [{other}]"))),
            });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| bad(line, "expected key = value"))?;
        let key = key.trim();
        let value = value.trim();
        let unknown = |section: &str| bad(line, format!("unknown key {key} in [{section}]"));
        match section {
            None => return Err(bad(line, "key outside any [section]")),
            Some(Section::Mesh) => {
                mesh_rows.push(Row { key: key.to_string(), value: value.to_string(), line })
            }
            Some(Section::Materials) => match key {
                "material" => materials.push(parse_material(value, line)?),
                _ => return Err(unknown("materials")),
            },
            Some(Section::Dirichlet) => match key {
                "value" => set_once(&mut dirichlet_value, parse_num(value, line, "value")?, line, key)?,
                _ => return Err(unknown("dirichlet")),
            },
            Some(Section::Solver) => match key {
                "method" => {
                    let m = parse_methods(value).map_err(|e| bad(line, e))?;
                    set_once(&mut methods, m, line, key)?
                }
                "tol" => {
                    let t: f64 = parse_num(value, line, "tol")?;
                    if !(t > 0.0 && t.is_finite()) {
                        return Err(bad(line, "tol must be finite and positive"));
                    }
                    set_once(&mut tol, t, line, key)?
                }
                "max_iter" => set_once(&mut max_iter, parse_num(value, line, "max_iter")?, line, key)?,
                _ => return Err(unknown("solver")),
            },
            Some(Section::Output) => match key {
                "report" => set_once(&mut report, value.to_string(), line, key)?,
                "vtk" => set_once(&mut vtk, value.to_string(), line, key)?,
                "csv" => set_once(&mut csv, value.to_string(), line, key)?,
                _ => return Err(unknown("output")),
            },
            Some(Section::Samples) => match key {
                "line" => lines_spec.push(parse_line_spec(value, line)?),
                _ => return Err(unknown("samples")),
            },
            Some(Section::Convergence) => match key {
                "levels" => {
                    let l: usize = parse_num(value, line, "levels")?;
                    if l == 0 {
                        return Err(bad(line, "levels must be at least 1"));
                    }
                    set_once(&mut levels, l, line, key)?
                }
                "exact" => set_once(&mut exact, parse_exact(value, line)?, line, key)?,
                _ => return Err(unknown("convergence")),
            },
        }
    }

    Ok(ScenarioConfig {
        mesh: mesh_source(&mesh_rows, saw_mesh_section)?,
        materials,
        dirichlet_value,
        methods: methods.unwrap_or_else(|| vec![Method::Dec, Method::Feml]),
        tol: tol.unwrap_or(1e-10),
        max_iter: max_iter.unwrap_or(0),
        report,
        vtk,
        csv,
        lines: lines_spec,
        levels: levels.unwrap_or(1),
        exact,
    })
}
