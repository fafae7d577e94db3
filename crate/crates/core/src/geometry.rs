//! Per-triangle circumcentric dual geometry and anisotropy tensors.
//!
//! Dual lengths and dual cell areas are signed, computed from determinant
//! forms that remain valid when the circumcenter leaves the triangle; on
//! right or obtuse triangles some of them are zero or negative by design.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::math;
use crate::mesh::Point2;

/// A displacement vector in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        math::sqrt(self.norm_sq())
    }
}

impl Sub for Point2 {
    type Output = Vec2;
    fn sub(self, other: Point2) -> Vec2 {
        Vec2::new(self.x - other.x, self.y - other.y)
    }
}

impl Add<Vec2> for Point2 {
    type Output = Point2;
    fn add(self, v: Vec2) -> Point2 {
        Point2::new(self.x + v.x, self.y + v.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x + other.x, self.y + other.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, other: Vec2) -> Vec2 {
        Vec2::new(self.x - other.x, self.y - other.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

/// z-component of the cross product.
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// 90 degree counter-clockwise rotation: (x, y) -> (-y, x).
pub fn rotate90(v: Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

/// Twice the signed area of the triangle (p, q, r).
fn det3(p: Point2, q: Point2, r: Point2) -> f64 {
    cross(q - p, r - p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeometryError {
    DegenerateTriangle,
    NotCounterClockwise,
    NonPositiveDiffusivity,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::DegenerateTriangle => write!(f, "triangle is degenerate"),
            GeometryError::NotCounterClockwise => {
                write!(f, "triangle is not counter-clockwise")
            }
            GeometryError::NonPositiveDiffusivity => {
                write!(f, "principal diffusivities must be positive and finite")
            }
        }
    }
}

impl core::error::Error for GeometryError {}

/// Circumcentric quantities of one counter-clockwise triangle (v1, v2, v3).
///
/// Edge order is `[v1 v2], [v2 v3], [v3 v1]` throughout: `edge_len[i]` is the
/// length of edge i, `dual_len[i]` the signed length of its dual edge (from
/// edge midpoint to circumcenter), `alpha[i]` the signed half-angle
/// subtending it, and `dual_area[i]` the signed dual cell area at vertex
/// v(i+1). Signed identities: dual_len[i] = r*sin(alpha[i]),
/// edge_len[i] = 2r*cos(alpha[i]), alpha sums to pi/2, dual areas sum to
/// the triangle area.
#[derive(Clone, Copy, Debug)]
pub struct TriangleGeometry {
    /// Circumcenter.
    pub c: Point2,
    /// Triangle area (positive).
    pub area: f64,
    /// Circumradius.
    pub r: f64,
    /// Primal edge lengths.
    pub edge_len: [f64; 3],
    /// Signed dual edge lengths.
    pub dual_len: [f64; 3],
    /// Signed dual cell areas, per vertex.
    pub dual_area: [f64; 3],
    /// Signed half-angles (radians), per edge.
    pub alpha: [f64; 3],
    /// Edge vectors w1 = v2-v1, w2 = v3-v2, w3 = v1-v3 (sum is zero).
    pub w: [Vec2; 3],
}

/// The point equidistant from the three vertices.
pub fn circumcenter(v1: Point2, v2: Point2, v3: Point2) -> Result<Point2, GeometryError> {
    let a = v2 - v1;
    let b = v3 - v1;
    let d = cross(a, b);
    let max_edge_sq = a.norm_sq().max(b.norm_sq()).max((b - a).norm_sq());
    if math::abs(d) <= 2e-14 * max_edge_sq {
        return Err(GeometryError::DegenerateTriangle);
    }
    let asq = a.norm_sq();
    let bsq = b.norm_sq();
    let ux = (asq * b.y - bsq * a.y) / (2.0 * d);
    let uy = (bsq * a.x - asq * b.x) / (2.0 * d);
    Ok(v1 + Vec2::new(ux, uy))
}

/// Builds the full circumcentric dual geometry of a counter-clockwise
/// triangle. Signed quantities come from the determinant forms
/// `dual_len[i] * edge_len[i] = det(v(i+1)-v(i), c-v(i))`, with each dual
/// cell area a quarter of the sum of the two determinants at its vertex.
pub fn triangle_geometry(
    v1: Point2,
    v2: Point2,
    v3: Point2,
) -> Result<TriangleGeometry, GeometryError> {
    let w1 = v2 - v1;
    let w2 = v3 - v2;
    let w3 = v1 - v3;
    let two_a = cross(w1, w2);
    let max_edge_sq = w1.norm_sq().max(w2.norm_sq()).max(w3.norm_sq());
    if math::abs(two_a) <= 2e-14 * max_edge_sq {
        return Err(GeometryError::DegenerateTriangle);
    }
    if two_a < 0.0 {
        return Err(GeometryError::NotCounterClockwise);
    }

    let c = circumcenter(v1, v2, v3)?;
    let edge_len = [w1.norm(), w2.norm(), w3.norm()];

    // det_i = dual_len_i * edge_len_i; their sum over the three edges is 2A.
    let det = [det3(v1, v2, c), det3(v2, v3, c), det3(v3, v1, c)];
    let dual_len = [det[0] / edge_len[0], det[1] / edge_len[1], det[2] / edge_len[2]];
    let dual_area = [
        0.25 * (det[0] + det[2]),
        0.25 * (det[0] + det[1]),
        0.25 * (det[1] + det[2]),
    ];

    let r = (c - v1).norm();
    let alpha = [
        math::atan(2.0 * dual_len[0] / edge_len[0]),
        math::atan(2.0 * dual_len[1] / edge_len[1]),
        math::atan(2.0 * dual_len[2] / edge_len[2]),
    ];

    Ok(TriangleGeometry {
        c,
        area: 0.5 * two_a,
        r,
        edge_len,
        dual_len,
        dual_area,
        alpha,
        w: [w1, w2, w3],
    })
}

/// Symmetric 2x2 diffusion tensor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnisotropyTensor {
    pub k11: f64,
    pub k12: f64,
    pub k22: f64,
}

impl AnisotropyTensor {
    pub const fn isotropic(k: f64) -> Self {
        AnisotropyTensor { k11: k, k12: 0.0, k22: k }
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.k11 * v.x + self.k12 * v.y, self.k12 * v.x + self.k22 * v.y)
    }
}

/// Tensor with principal values `kx`, `ky` and the `kx` axis rotated
/// `angle_deg` counter-clockwise from +x: R(theta) diag(kx, ky) R(theta)^T.
pub fn material_tensor(
    kx: f64,
    ky: f64,
    angle_deg: f64,
) -> Result<AnisotropyTensor, GeometryError> {
    if !(kx > 0.0 && ky > 0.0 && kx.is_finite() && ky.is_finite() && angle_deg.is_finite()) {
        return Err(GeometryError::NonPositiveDiffusivity);
    }
    let theta = angle_deg * core::f64::consts::PI / 180.0;
    let c = math::cos(theta);
    let s = math::sin(theta);
    Ok(AnisotropyTensor {
        k11: kx * c * c + ky * s * s,
        k12: (kx - ky) * c * s,
        k22: kx * s * s + ky * c * c,
    })
}
