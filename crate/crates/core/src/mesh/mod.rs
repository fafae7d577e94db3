//! Triangle meshes: representation and validation, the plain-text mesh
//! format, structured generators, and midpoint refinement.

pub mod generate;
pub mod io;
pub mod refine;

pub use generate::{gen_disk, gen_egg, gen_square, EggShape, Inclusion};
pub use io::{parse_mesh, write_mesh, MeshFile};
pub use refine::{refine, refine_with, BoundaryProjection};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// A point in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Oriented triangle: three node indices plus a material id.
///
/// After mesh validation the nodes are in counter-clockwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub nodes: [usize; 3],
    pub material: usize,
}

impl Triangle {
    pub const fn new(nodes: [usize; 3], material: usize) -> Self {
        Triangle { nodes, material }
    }
}

/// Per-material anisotropic conductivity (principal values `kx`, `ky` and the
/// angle of the `kx` axis, degrees counter-clockwise from +x) plus a constant
/// source density `q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaterialSpec {
    pub id: usize,
    pub kx: f64,
    pub ky: f64,
    pub angle_deg: f64,
    pub q: f64,
}

/// Prescribed nodal values; only boundary nodes may appear.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DirichletSet {
    values: BTreeMap<usize, f64>,
}

impl DirichletSet {
    pub fn new() -> Self {
        DirichletSet::default()
    }

    /// Same value on every node of the given set.
    pub fn constant(nodes: &BTreeSet<usize>, value: f64) -> Self {
        let mut set = DirichletSet::new();
        for &n in nodes {
            set.insert(n, value);
        }
        set
    }

    pub fn insert(&mut self, node: usize, value: f64) {
        self.values.insert(node, value);
    }

    pub fn get(&self, node: usize) -> Option<f64> {
        self.values.get(&node).copied()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.values.contains_key(&node)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Ascending node order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().map(|(&n, &v)| (n, v))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeshError {
    Parse { line: usize, what: String },
    NonFiniteCoordinate { node: usize },
    NodeIndexOutOfRange { triangle: usize, index: usize },
    RepeatedNode { triangle: usize },
    DegenerateTriangle { triangle: usize },
    NonManifoldEdge { a: usize, b: usize },
    DirichletOffBoundary { node: usize },
    InvalidParameter { what: String },
}

impl fmt::Display for MeshError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshError::Parse { line, what } => write!(f, "parse error at line {line}: {what}"),
            MeshError::NonFiniteCoordinate { node } => {
                write!(f, "node {node} has a non-finite coordinate")
            }
            MeshError::NodeIndexOutOfRange { triangle, index } => {
                write!(f, "triangle {triangle} references node {index}, out of range")
            }
            MeshError::RepeatedNode { triangle } => {
                write!(f, "triangle {triangle} repeats a node index")
            }
            MeshError::DegenerateTriangle { triangle } => {
                write!(f, "triangle {triangle} is degenerate (zero area)")
            }
            MeshError::NonManifoldEdge { a, b } => {
                write!(f, "edge ({a},{b}) is shared by more than two triangles")
            }
            MeshError::DirichletOffBoundary { node } => {
                write!(f, "dirichlet node {node} is not a boundary node")
            }
            MeshError::InvalidParameter { what } => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for MeshError {}

/// Validated triangle mesh.
///
/// Immutable after construction: every triangle is counter-clockwise with
/// distinct in-range nodes, every edge has at most two incident triangles,
/// and `boundary_nodes` are exactly the endpoints of single-incidence edges.
#[derive(Clone, Debug)]
pub struct TriMesh {
    points: Vec<Point2>,
    triangles: Vec<Triangle>,
    boundary_nodes: BTreeSet<usize>,
    reoriented: usize,
}

impl TriMesh {
    /// Validates and adopts the given nodes and triangles. Clockwise
    /// triangles are flipped to counter-clockwise; `reoriented()` reports
    /// how many.
    pub fn new(points: Vec<Point2>, mut triangles: Vec<Triangle>) -> Result<Self, MeshError> {
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(MeshError::NonFiniteCoordinate { node: i });
            }
        }

        let n = points.len();
        let mut reoriented = 0;
        for (t, tri) in triangles.iter_mut().enumerate() {
            for &i in &tri.nodes {
                if i >= n {
                    return Err(MeshError::NodeIndexOutOfRange { triangle: t, index: i });
                }
            }
            let [a, b, c] = tri.nodes;
            if a == b || b == c || a == c {
                return Err(MeshError::RepeatedNode { triangle: t });
            }
            let (pa, pb, pc) = (points[a], points[b], points[c]);
            let two_a = (pb.x - pa.x) * (pc.y - pa.y) - (pb.y - pa.y) * (pc.x - pa.x);
            let max_edge_sq = edge_sq(pa, pb).max(edge_sq(pb, pc)).max(edge_sq(pc, pa));
            if math::abs(two_a) <= 2e-14 * max_edge_sq {
                return Err(MeshError::DegenerateTriangle { triangle: t });
            }
            if two_a < 0.0 {
                tri.nodes = [a, c, b];
                reoriented += 1;
            }
        }

        let mut incidence: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for tri in &triangles {
            let [a, b, c] = tri.nodes;
            for (u, v) in [(a, b), (b, c), (c, a)] {
                let key = (u.min(v), u.max(v));
                let count = incidence.entry(key).or_insert(0);
                *count += 1;
                if *count > 2 {
                    return Err(MeshError::NonManifoldEdge { a: key.0, b: key.1 });
                }
            }
        }

        let mut boundary_nodes = BTreeSet::new();
        for (&(a, b), &count) in &incidence {
            if count == 1 {
                boundary_nodes.insert(a);
                boundary_nodes.insert(b);
            }
        }

        Ok(TriMesh { points, triangles, boundary_nodes, reoriented })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn boundary_nodes(&self) -> &BTreeSet<usize> {
        &self.boundary_nodes
    }

    /// Number of triangles flipped to counter-clockwise during validation.
    pub fn reoriented(&self) -> usize {
        self.reoriented
    }

    pub fn num_nodes(&self) -> usize {
        self.points.len()
    }

    pub fn num_elements(&self) -> usize {
        self.triangles.len()
    }

    /// Vertex coordinates of triangle `e` in node order.
    pub fn vertices_of(&self, e: usize) -> [Point2; 3] {
        let [a, b, c] = self.triangles[e].nodes;
        [self.points[a], self.points[b], self.points[c]]
    }

    /// Signed area of triangle `e` (positive after validation).
    pub fn element_area(&self, e: usize) -> f64 {
        let [pa, pb, pc] = self.vertices_of(e);
        0.5 * ((pb.x - pa.x) * (pc.y - pa.y) - (pb.y - pa.y) * (pc.x - pa.x))
    }

    /// Total mesh area.
    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|e| self.element_area(e)).sum()
    }

    /// Undirected edges with their triangle incidence counts (1 or 2).
    pub fn edge_incidence(&self) -> BTreeMap<(usize, usize), u32> {
        let mut incidence = BTreeMap::new();
        for tri in &self.triangles {
            let [a, b, c] = tri.nodes;
            for (u, v) in [(a, b), (b, c), (c, a)] {
                *incidence.entry((u.min(v), u.max(v))).or_insert(0) += 1;
            }
        }
        incidence
    }

    /// Index of the node closest to `p`; lowest index wins ties.
    pub fn nearest_node(&self, p: Point2) -> usize {
        assert!(!self.points.is_empty(), "mesh has no nodes");
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, q) in self.points.iter().enumerate() {
            let d = edge_sq(p, *q);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

fn edge_sq(a: Point2, b: Point2) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    dx * dx + dy * dy
}
