//! Uniform 4-to-1 midpoint refinement.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::mesh::generate::EggShape;
use crate::mesh::{Point2, TriMesh, Triangle};

/// Curve to project new boundary midpoints onto, so refined meshes keep a
/// second-order boundary approximation.
#[derive(Clone, Copy, Debug)]
pub enum BoundaryProjection {
    Circle { center: Point2, radius: f64 },
    Egg(EggShape),
}

impl BoundaryProjection {
    fn project(&self, p: Point2) -> Point2 {
        match *self {
            BoundaryProjection::Circle { center, radius } => {
                let dx = p.x - center.x;
                let dy = p.y - center.y;
                let d = crate::math::sqrt(dx * dx + dy * dy);
                if d == 0.0 {
                    return p;
                }
                Point2::new(center.x + dx * radius / d, center.y + dy * radius / d)
            }
            BoundaryProjection::Egg(shape) => shape.project_outer(p),
        }
    }
}

/// Midpoint refinement: every triangle splits into four, children inherit
/// the parent material. Node count grows by the edge count, triangle count
/// by a factor of four.
pub fn refine(mesh: &TriMesh) -> TriMesh {
    refine_with(mesh, None)
}

/// Like `refine`, but new midpoints of boundary edges are projected onto
/// the given curve.
pub fn refine_with(mesh: &TriMesh, boundary: Option<&BoundaryProjection>) -> TriMesh {
    let incidence = mesh.edge_incidence();
    let mut points: Vec<Point2> = mesh.points().to_vec();
    let mut midpoint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&(a, b), &count) in &incidence {
        let pa = points[a];
        let pb = points[b];
        let mut mid = Point2::new(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y));
        if count == 1 {
            if let Some(proj) = boundary {
                mid = proj.project(mid);
            }
        }
        midpoint.insert((a, b), points.len());
        points.push(mid);
    }

    let mid_of = |u: usize, v: usize| midpoint[&(u.min(v), u.max(v))];
    let mut triangles = Vec::with_capacity(4 * mesh.num_elements());
    for tri in mesh.triangles() {
        let [a, b, c] = tri.nodes;
        let (ab, bc, ca) = (mid_of(a, b), mid_of(b, c), mid_of(c, a));
        for nodes in [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]] {
            triangles.push(Triangle::new(nodes, tri.material));
        }
    }

    TriMesh::new(points, triangles).expect("refinement of a valid mesh is valid")
}
