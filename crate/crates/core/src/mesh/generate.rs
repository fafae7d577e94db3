//! Structured mesh generators: a square grid with an optional circular
//! inclusion, a fan-and-ring disk, and an egg of nested piecewise-elliptic
//! material bands.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::math;
use crate::mesh::{MeshError, Point2, TriMesh, Triangle};

const PI: f64 = core::f64::consts::PI;

/// Circular material region for `gen_square`: triangles whose centroid lies
/// strictly inside the circle get `inside`, all others `outside`.
#[derive(Clone, Copy, Debug)]
pub struct Inclusion {
    pub center: Point2,
    pub radius: f64,
    pub inside: usize,
    pub outside: usize,
}

fn invalid(what: impl ToString) -> MeshError {
    MeshError::InvalidParameter { what: what.to_string() }
}

/// Structured square [0, side]^2 with n subdivisions per side: (n+1)^2
/// nodes, 2n^2 triangles, each cell split along its bottom-left to top-right
/// diagonal.
pub fn gen_square(n: usize, side: f64, inclusion: Option<&Inclusion>) -> Result<TriMesh, MeshError> {
    if n < 1 {
        return Err(invalid("square subdivisions must be >= 1"));
    }
    if !(side > 0.0 && side.is_finite()) {
        return Err(invalid(format!("square side must be positive, got {side}")));
    }
    if let Some(inc) = inclusion {
        if !(inc.radius > 0.0 && inc.radius.is_finite() && inc.center.is_finite()) {
            return Err(invalid("inclusion needs a finite center and positive radius"));
        }
    }

    let h = side / n as f64;
    let mut points = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            points.push(Point2::new(i as f64 * h, j as f64 * h));
        }
    }

    let material_of = |a: Point2, b: Point2, c: Point2| -> usize {
        match inclusion {
            None => 0,
            Some(inc) => {
                let cx = (a.x + b.x + c.x) / 3.0;
                let cy = (a.y + b.y + c.y) / 3.0;
                let dx = cx - inc.center.x;
                let dy = cy - inc.center.y;
                if dx * dx + dy * dy < inc.radius * inc.radius {
                    inc.inside
                } else {
                    inc.outside
                }
            }
        }
    };

    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let a = j * (n + 1) + i;
            let b = a + 1;
            let c = b + (n + 1);
            let d = a + (n + 1);
            for nodes in [[a, b, c], [a, c, d]] {
                let mat = material_of(points[nodes[0]], points[nodes[1]], points[nodes[2]]);
                triangles.push(Triangle::new(nodes, mat));
            }
        }
    }
    TriMesh::new(points, triangles)
}

/// Disk node/triangle lattice: center node plus rings of 6k nodes at radius
/// k * radius / rings, triangulated sector by sector.
fn disk_lattice(rings: usize, radius: f64) -> (Vec<Point2>, Vec<Triangle>) {
    let ring_start = |k: usize| -> usize {
        // 1 + 6 * (1 + 2 + ... + (k-1)) nodes precede ring k.
        1 + 3 * k * (k - 1)
    };

    let mut points = Vec::with_capacity(1 + 3 * rings * (rings + 1));
    points.push(Point2::new(0.0, 0.0));
    for k in 1..=rings {
        let r = radius * k as f64 / rings as f64;
        let count = 6 * k;
        for p in 0..count {
            let theta = 2.0 * PI * p as f64 / count as f64;
            points.push(Point2::new(r * math::cos(theta), r * math::sin(theta)));
        }
    }

    let mut triangles = Vec::with_capacity(6 * rings * rings);
    for p in 0..6 {
        triangles.push(Triangle::new([0, 1 + p, 1 + (p + 1) % 6], 0));
    }
    for k in 2..=rings {
        let inner = ring_start(k - 1);
        let outer = ring_start(k);
        let inner_count = 6 * (k - 1);
        let outer_count = 6 * k;
        for s in 0..6 {
            let inner_at = |j: usize| inner + (s * (k - 1) + j) % inner_count;
            let outer_at = |j: usize| outer + (s * k + j) % outer_count;
            for j in 0..k {
                triangles.push(Triangle::new([outer_at(j), outer_at(j + 1), inner_at(j)], 0));
            }
            for j in 0..k - 1 {
                triangles.push(Triangle::new([inner_at(j), outer_at(j + 1), inner_at(j + 1)], 0));
            }
        }
    }
    (points, triangles)
}

/// Fan-and-ring disk triangulation of the circle of given radius:
/// 1 + 3*rings*(rings+1) nodes, 6*rings^2 triangles, all of material 0,
/// outermost ring on the boundary.
pub fn gen_disk(rings: usize, radius: f64) -> Result<TriMesh, MeshError> {
    if rings < 1 {
        return Err(invalid("disk rings must be >= 1"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid(format!("disk radius must be positive, got {radius}")));
    }
    let (points, triangles) = disk_lattice(rings, radius);
    TriMesh::new(points, triangles)
}

/// Egg outline made of two half-ellipses sharing the vertical semi-axis
/// `b`: semi-axis `a_right` for x >= 0 and `a_left` for x < 0. The nested
/// `curves` split the domain into the material bands of `material_at`.
#[derive(Clone, Copy, Debug)]
pub struct EggShape {
    /// (a_left, a_right, b), outermost first.
    pub curves: [(f64, f64, f64); 4],
}

impl EggShape {
    /// The built-in domain: outer boundary (5, 8, 4) enclosing bands down
    /// to a unit-circle core.
    pub const fn standard() -> Self {
        EggShape {
            curves: [(5.0, 8.0, 4.0), (4.0, 7.0, 3.0), (3.0, 6.0, 2.0), (1.0, 1.0, 1.0)],
        }
    }

    pub fn outer(&self) -> (f64, f64, f64) {
        self.curves[0]
    }

    fn inside(curve: (f64, f64, f64), p: Point2) -> bool {
        let (a_left, a_right, b) = curve;
        let a = if p.x >= 0.0 { a_right } else { a_left };
        let u = p.x / a;
        let v = p.y / b;
        u * u + v * v < 1.0
    }

    /// Band index of `p`: 0 between the outer boundary and the first inner
    /// curve, increasing inward to 3 inside the core.
    pub fn material_at(&self, p: Point2) -> usize {
        for (band, &curve) in self.curves[1..].iter().enumerate().rev() {
            if Self::inside(curve, p) {
                return band + 1;
            }
        }
        0
    }

    /// Radial projection of `p` onto the outer boundary.
    pub fn project_outer(&self, p: Point2) -> Point2 {
        let (a_left, a_right, b) = self.outer();
        let a = if p.x >= 0.0 { a_right } else { a_left };
        let u = p.x / a;
        let v = p.y / b;
        let t = 1.0 / math::sqrt(u * u + v * v);
        Point2::new(p.x * t, p.y * t)
    }
}

/// Egg-shaped domain with four nested material bands (`EggShape::standard`),
/// built by mapping the unit-disk lattice onto the outer outline and
/// assigning materials 0..=3 by triangle centroid, outermost band first.
pub fn gen_egg(rings: usize) -> Result<TriMesh, MeshError> {
    if rings < 1 {
        return Err(invalid("egg rings must be >= 1"));
    }
    let shape = EggShape::standard();
    let (a_left, a_right, b) = shape.outer();
    let (unit_points, mut triangles) = disk_lattice(rings, 1.0);
    let points: Vec<Point2> = unit_points
        .iter()
        .map(|p| {
            let a = if p.x >= 0.0 { a_right } else { a_left };
            Point2::new(p.x * a, p.y * b)
        })
        .collect();
    for tri in triangles.iter_mut() {
        let [i, j, k] = tri.nodes;
        let centroid = Point2::new(
            (points[i].x + points[j].x + points[k].x) / 3.0,
            (points[i].y + points[j].y + points[k].y) / 3.0,
        );
        tri.material = shape.material_at(centroid);
    }
    TriMesh::new(points, triangles)
}
