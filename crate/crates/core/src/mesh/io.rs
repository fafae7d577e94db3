//! Plain-text mesh format.
//!
//! Line-oriented, whitespace-separated, `#` starts a comment, indices are
//! 0-based. Four blocks in order, each opened by a `<name> <count>` header:
//!
//! ```text
//! nodes N        # N lines: x y
//! elements M     # M lines: i j k mat_id
//! materials P    # P lines: mat_id kx ky angle_deg q
//! dirichlet D    # D lines: node_id value
//! ```
//!
//! `materials` and `dirichlet` may be absent. Writers emit 17 significant
//! digits, so write/parse round-trips are exact.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::mesh::{DirichletSet, MaterialSpec, MeshError, Point2, TriMesh, Triangle};

/// Parsed mesh file: validated mesh plus material and boundary blocks.
#[derive(Clone, Debug)]
pub struct MeshFile {
    pub mesh: TriMesh,
    pub materials: Vec<MaterialSpec>,
    pub dirichlet: DirichletSet,
}

struct Lines<'a> {
    iter: core::str::Lines<'a>,
    number: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { iter: text.lines(), number: 0 }
    }

    /// Next line with content, as (line number, tokens).
    fn next_content(&mut self) -> Option<(usize, Vec<&'a str>)> {
        loop {
            let line = self.iter.next()?;
            self.number += 1;
            let line = match line.find('#') {
                Some(pos) => &line[..pos],
                None => line,
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((self.number, tokens));
            }
        }
    }
}

fn parse_err(line: usize, what: impl ToString) -> MeshError {
    MeshError::Parse { line, what: what.to_string() }
}

fn parse_f64(line: usize, token: &str, what: &str) -> Result<f64, MeshError> {
    let v: f64 = token
        .parse()
        .map_err(|_| parse_err(line, format!("{what}: bad real '{token}'")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("{what}: non-finite real '{token}'")));
    }
    Ok(v)
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize, MeshError> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("{what}: bad index '{token}'")))
}

fn header_count(line: usize, tokens: &[&str], name: &str) -> Result<usize, MeshError> {
    if tokens.len() != 2 || tokens[0] != name {
        return Err(parse_err(line, format!("expected '{name} <count>' header")));
    }
    parse_usize(line, tokens[1], name)
}

/// Parses and validates a mesh file. Triangle winding is corrected to
/// counter-clockwise; the count of flipped triangles is available through
/// `TriMesh::reoriented`.
pub fn parse_mesh(text: &str) -> Result<MeshFile, MeshError> {
    let mut lines = Lines::new(text);

    let (no, tokens) = lines.next_content().ok_or_else(|| parse_err(1, "empty mesh file"))?;
    let nodes = header_count(no, &tokens, "nodes")?;
    let mut points = Vec::with_capacity(nodes);
    for _ in 0..nodes {
        let (no, tokens) = lines
            .next_content()
            .ok_or_else(|| parse_err(lines.number, "unexpected end of nodes block"))?;
        if tokens.len() != 2 {
            return Err(parse_err(no, "node line needs exactly 'x y'"));
        }
        points.push(Point2::new(
            parse_f64(no, tokens[0], "node x")?,
            parse_f64(no, tokens[1], "node y")?,
        ));
    }

    let (no, tokens) = lines
        .next_content()
        .ok_or_else(|| parse_err(lines.number, "missing 'elements' block"))?;
    let elements = header_count(no, &tokens, "elements")?;
    let mut triangles = Vec::with_capacity(elements);
    for _ in 0..elements {
        let (no, tokens) = lines
            .next_content()
            .ok_or_else(|| parse_err(lines.number, "unexpected end of elements block"))?;
        if tokens.len() != 4 {
            return Err(parse_err(no, "element line needs exactly 'i j k mat_id'"));
        }
        triangles.push(Triangle::new(
            [
                parse_usize(no, tokens[0], "element node")?,
                parse_usize(no, tokens[1], "element node")?,
                parse_usize(no, tokens[2], "element node")?,
            ],
            parse_usize(no, tokens[3], "material id")?,
        ));
    }

    // Optional trailing blocks, in order: materials, then dirichlet.
    let mut materials = Vec::new();
    let mut dirichlet = DirichletSet::new();
    let mut next = lines.next_content();

    if let Some((no, tokens)) = &next {
        if tokens.first() == Some(&"materials") {
            let count = header_count(*no, tokens, "materials")?;
            for _ in 0..count {
                let (no, tokens) = lines
                    .next_content()
                    .ok_or_else(|| parse_err(lines.number, "unexpected end of materials block"))?;
                if tokens.len() != 5 {
                    return Err(parse_err(no, "material line needs 'mat_id kx ky angle_deg q'"));
                }
                let spec = MaterialSpec {
                    id: parse_usize(no, tokens[0], "material id")?,
                    kx: parse_f64(no, tokens[1], "kx")?,
                    ky: parse_f64(no, tokens[2], "ky")?,
                    angle_deg: parse_f64(no, tokens[3], "angle_deg")?,
                    q: parse_f64(no, tokens[4], "q")?,
                };
                if !(spec.kx > 0.0 && spec.ky > 0.0) {
                    return Err(parse_err(no, "kx and ky must be positive"));
                }
                if materials.iter().any(|m: &MaterialSpec| m.id == spec.id) {
                    return Err(parse_err(no, format!("duplicate material id {}", spec.id)));
                }
                materials.push(spec);
            }
            next = lines.next_content();
        }
    }

    if let Some((no, tokens)) = &next {
        if tokens.first() == Some(&"dirichlet") {
            let count = header_count(*no, tokens, "dirichlet")?;
            for _ in 0..count {
                let (no, tokens) = lines
                    .next_content()
                    .ok_or_else(|| parse_err(lines.number, "unexpected end of dirichlet block"))?;
                if tokens.len() != 2 {
                    return Err(parse_err(no, "dirichlet line needs 'node_id value'"));
                }
                let node = parse_usize(no, tokens[0], "dirichlet node")?;
                if dirichlet.contains(node) {
                    return Err(parse_err(no, format!("duplicate dirichlet node {node}")));
                }
                dirichlet.insert(node, parse_f64(no, tokens[1], "dirichlet value")?);
            }
            next = lines.next_content();
        }
    }

    if let Some((no, _)) = next {
        return Err(parse_err(no, "unexpected content after mesh blocks"));
    }

    let mesh = TriMesh::new(points, triangles)?;
    for (node, _) in dirichlet.iter() {
        if !mesh.boundary_nodes().contains(&node) {
            return Err(MeshError::DirichletOffBoundary { node });
        }
    }

    Ok(MeshFile { mesh, materials, dirichlet })
}

/// Formats the mesh, materials, and boundary values in the mesh file
/// format. Reals carry 17 significant digits.
pub fn write_mesh(mesh: &TriMesh, materials: &[MaterialSpec], dirichlet: &DirichletSet) -> String {
    let mut out = String::new();
    out.push_str(&format!("nodes {}\n", mesh.num_nodes()));
    for p in mesh.points() {
        out.push_str(&format!("{:.16e} {:.16e}\n", p.x, p.y));
    }
    out.push_str(&format!("elements {}\n", mesh.num_elements()));
    for tri in mesh.triangles() {
        out.push_str(&format!(
            "{} {} {} {}\n",
            tri.nodes[0], tri.nodes[1], tri.nodes[2], tri.material
        ));
    }
    out.push_str(&format!("materials {}\n", materials.len()));
    for m in materials {
        out.push_str(&format!(
            "{} {:.16e} {:.16e} {:.16e} {:.16e}\n",
            m.id, m.kx, m.ky, m.angle_deg, m.q
        ));
    }
    out.push_str(&format!("dirichlet {}\n", dirichlet.len()));
    for (node, value) in dirichlet.iter() {
        out.push_str(&format!("{node} {value:.16e}\n"));
    }
    out
}
