//! Derived fields and exports: element fluxes, nodal flux magnitudes, line
//! sampling, error norms, and VTK / CSV documents.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{cross, Vec2};
use crate::local_ops::anisotropic_flux;
use crate::math;
use crate::mesh::{Point2, TriMesh};
use crate::system::{MaterialMap, SystemError};

/// One value per mesh node.
#[derive(Clone, Debug)]
pub struct ScalarField<'m> {
    mesh: &'m TriMesh,
    values: Vec<f64>,
}

impl<'m> ScalarField<'m> {
    pub fn new(mesh: &'m TriMesh, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), mesh.num_nodes(), "one value per node");
        ScalarField { mesh, values }
    }

    pub fn mesh(&self) -> &'m TriMesh {
        self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// (node, value) with the largest value; lowest node wins ties.
    pub fn max(&self) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, &v) in self.values.iter().enumerate() {
            if v > best.1 {
                best = (i, v);
            }
        }
        best
    }
}

/// One constant vector per mesh element.
#[derive(Clone, Debug)]
pub struct FluxField<'m> {
    mesh: &'m TriMesh,
    vectors: Vec<Vec2>,
}

impl<'m> FluxField<'m> {
    pub fn new(mesh: &'m TriMesh, vectors: Vec<Vec2>) -> Self {
        assert_eq!(vectors.len(), mesh.num_elements(), "one vector per element");
        FluxField { mesh, vectors }
    }

    pub fn mesh(&self) -> &'m TriMesh {
        self.mesh
    }

    pub fn vectors(&self) -> &[Vec2] {
        &self.vectors
    }

    pub fn max_magnitude(&self) -> f64 {
        self.vectors.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Per-element anisotropic flux W' = K_e * (discrete gradient of u).
pub fn element_fluxes<'m>(
    u: &ScalarField<'m>,
    materials: &MaterialMap,
) -> Result<FluxField<'m>, SystemError> {
    let mesh = u.mesh;
    let mut vectors = Vec::with_capacity(mesh.num_elements());
    for (e, tri) in mesh.triangles().iter().enumerate() {
        let &(tensor, _) = materials
            .get(tri.material)
            .ok_or(SystemError::MissingMaterial { id: tri.material })?;
        let [v1, v2, v3] = mesh.vertices_of(e);
        let f = [
            u.values[tri.nodes[0]],
            u.values[tri.nodes[1]],
            u.values[tri.nodes[2]],
        ];
        let w = anisotropic_flux(v1, v2, v3, &tensor, f)
            .map_err(|source| SystemError::Geometry { element: e, source })?;
        vectors.push(w);
    }
    Ok(FluxField { mesh, vectors })
}

/// Element-area-weighted average of the incident element flux vectors at
/// each node, reported as a magnitude.
pub fn nodal_flux_magnitude<'m>(flux: &FluxField<'m>) -> ScalarField<'m> {
    let mesh = flux.mesh;
    let n = mesh.num_nodes();
    let mut sums = vec![Vec2::new(0.0, 0.0); n];
    let mut weights = vec![0.0; n];
    for (e, tri) in mesh.triangles().iter().enumerate() {
        let area = mesh.element_area(e);
        let w = flux.vectors[e];
        for &node in &tri.nodes {
            sums[node] = sums[node] + w * area;
            weights[node] += area;
        }
    }
    let values = sums
        .iter()
        .zip(&weights)
        .map(|(s, &wt)| if wt > 0.0 { (*s * (1.0 / wt)).norm() } else { 0.0 })
        .collect();
    ScalarField { mesh, values }
}

/// Fields that can be probed at a point.
pub trait Sampleable {
    /// Value at `p`, or None when `p` lies outside every triangle.
    fn probe(&self, p: Point2) -> Option<f64>;
}

/// Containing triangle and barycentric coordinates of `p`, if any. A point
/// counts as inside when every normalized barycentric coordinate is at
/// least -1e-12.
fn locate(mesh: &TriMesh, p: Point2) -> Option<(usize, [f64; 3])> {
    for e in 0..mesh.num_elements() {
        let [v1, v2, v3] = mesh.vertices_of(e);
        let two_a = cross(v2 - v1, v3 - v1);
        let b1 = cross(v3 - v2, p - v2) / two_a;
        let b2 = cross(v1 - v3, p - v3) / two_a;
        let b3 = cross(v2 - v1, p - v1) / two_a;
        if b1 >= -1e-12 && b2 >= -1e-12 && b3 >= -1e-12 {
            return Some((e, [b1, b2, b3]));
        }
    }
    None
}

impl Sampleable for ScalarField<'_> {
    fn probe(&self, p: Point2) -> Option<f64> {
        let (e, b) = locate(self.mesh, p)?;
        let nodes = self.mesh.triangles()[e].nodes;
        Some(b[0] * self.values[nodes[0]] + b[1] * self.values[nodes[1]] + b[2] * self.values[nodes[2]])
    }
}

impl Sampleable for FluxField<'_> {
    fn probe(&self, p: Point2) -> Option<f64> {
        let (e, _) = locate(self.mesh, p)?;
        Some(self.vectors[e].norm())
    }
}

/// One sample of a field along a segment; `value` is None outside the mesh.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSample {
    pub t: f64,
    pub p: Point2,
    pub value: Option<f64>,
}

/// Samples the field at `count` evenly spaced points from p0 (t = 0) to p1
/// (t = 1), endpoints included.
pub fn sample_line<F: Sampleable>(
    field: &F,
    p0: Point2,
    p1: Point2,
    count: usize,
) -> Vec<LineSample> {
    assert!(count >= 1, "need at least one sample");
    let mut samples = Vec::with_capacity(count);
    for k in 0..count {
        let t = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
        let p = Point2::new(p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y));
        samples.push(LineSample { t, p, value: field.probe(p) });
    }
    samples
}

/// Maximum nodal error and the elementwise L2 norm (three-point nodal
/// quadrature) of u minus the exact solution.
pub fn error_norms(u: &ScalarField<'_>, exact: impl Fn(Point2) -> f64) -> (f64, f64) {
    let mesh = u.mesh;
    let err: Vec<f64> = mesh
        .points()
        .iter()
        .zip(&u.values)
        .map(|(p, &v)| v - exact(*p))
        .collect();
    let linf = err.iter().fold(0.0, |acc: f64, &e| acc.max(math::abs(e)));
    let mut l2_sq = 0.0;
    for (e, tri) in mesh.triangles().iter().enumerate() {
        let area = mesh.element_area(e);
        let mean_sq = tri.nodes.iter().map(|&n| err[n] * err[n]).sum::<f64>() / 3.0;
        l2_sq += area * mean_sq;
    }
    (linf, math::sqrt(l2_sq))
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Legacy ASCII VTK unstructured-grid document with the given point scalars
/// and cell vectors. Deterministic: fixed template, fields in given order,
/// floats at full precision.
pub fn vtk_document(
    mesh: &TriMesh,
    scalars: &[(&str, &ScalarField<'_>)],
    vectors: &[(&str, &FluxField<'_>)],
) -> String {
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    out.push_str("dec2d fields\n");
    out.push_str("ASCII\n");
    out.push_str("DATASET UNSTRUCTURED_GRID\n");

    let n = mesh.num_nodes();
    let m = mesh.num_elements();
    out.push_str(&format!("POINTS {n} double\n"));
    for p in mesh.points() {
        out.push_str(&format!("{} {} 0\n", fmt_f64(p.x), fmt_f64(p.y)));
    }
    out.push_str(&format!("CELLS {m} {}\n", 4 * m));
    for tri in mesh.triangles() {
        out.push_str(&format!("3 {} {} {}\n", tri.nodes[0], tri.nodes[1], tri.nodes[2]));
    }
    out.push_str(&format!("CELL_TYPES {m}\n"));
    for _ in 0..m {
        out.push_str("5\n");
    }

    if !scalars.is_empty() {
        out.push_str(&format!("POINT_DATA {n}\n"));
        for (name, field) in scalars {
            assert_eq!(field.values.len(), n, "scalar field size mismatch");
            out.push_str(&format!("SCALARS {name} double 1\n"));
            out.push_str("LOOKUP_TABLE default\n");
            for &v in &field.values {
                out.push_str(&fmt_f64(v));
                out.push('\n');
            }
        }
    }
    if !vectors.is_empty() {
        out.push_str(&format!("CELL_DATA {m}\n"));
        for (name, field) in vectors {
            assert_eq!(field.vectors.len(), m, "vector field size mismatch");
            out.push_str(&format!("VECTORS {name} double\n"));
            for v in &field.vectors {
                out.push_str(&format!("{} {} 0\n", fmt_f64(v.x), fmt_f64(v.y)));
            }
        }
    }
    out
}

/// CSV document `t,x,y,value` for line samples; missing values print as
/// `nan`. Floats carry 17 significant digits and round-trip exactly.
pub fn csv_document(samples: &[LineSample]) -> String {
    let mut out = String::from("t,x,y,value\n");
    for s in samples {
        let value = match s.value {
            Some(v) => fmt_f64(v),
            None => String::from("nan"),
        };
        out.push_str(&format!("{},{},{},{}\n", fmt_f64(s.t), fmt_f64(s.p.x), fmt_f64(s.p.y), value));
    }
    out
}
