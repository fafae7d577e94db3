//! Element-local operators: the edge-difference matrix, diagonal Hodge
//! weights, the discretized anisotropy action on edge values, flux vectors,
//! and the DEC / FEML local stiffness matrices and load vectors.
//!
//! Everything uses one fixed local numbering: vertices (v1, v2, v3) counter-
//! clockwise, edges ([v1 v2], [v2 v3], [v3 v1]).

use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::geometry::{cross, AnisotropyTensor, GeometryError, TriangleGeometry, Vec2};
use crate::mesh::Point2;

/// Dense 3x3 matrix over the local vertex or edge numbering.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat3 {
    pub m: [[f64; 3]; 3],
}

impl Mat3 {
    pub const fn zero() -> Self {
        Mat3 { m: [[0.0; 3]; 3] }
    }

    pub const fn from_rows(m: [[f64; 3]; 3]) -> Self {
        Mat3 { m }
    }

    pub const fn diag(d: [f64; 3]) -> Self {
        Mat3 {
            m: [[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]],
        }
    }

    pub fn transpose(&self) -> Mat3 {
        let mut t = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] = self.m[j][i];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: [f64; 3]) -> [f64; 3] {
        self.m.map(|row| row[0] * v[0] + row[1] * v[1] + row[2] * v[2])
    }

    pub fn max_abs(&self) -> f64 {
        let mut best: f64 = 0.0;
        for row in &self.m {
            for &v in row {
                best = best.max(crate::math::abs(v));
            }
        }
        best
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.m[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.m[i][j]
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: Mat3) -> Mat3 {
        let mut out = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = (0..3).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        out
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, rhs: Mat3) -> Mat3 {
        let mut out = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[i][j] + rhs.m[i][j];
            }
        }
        out
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, rhs: Mat3) -> Mat3 {
        let mut out = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[i][j] - rhs.m[i][j];
            }
        }
        out
    }
}

/// Discretization backend for the local system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Dec,
    Feml,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Dec => write!(f, "dec"),
            Method::Feml => write!(f, "feml"),
        }
    }
}

/// Decomposition coefficients of the tensor action on edge vectors:
/// K w_i = lambda_i w_(i+1) + mu_i w_(i+2) (indices mod 3). They satisfy
/// lambda_3 = lambda_2 + mu_1 - mu_2 and mu_3 = -lambda_1 + lambda_2 + mu_1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnisoCoeffs {
    pub lambda: [f64; 3],
    pub mu: [f64; 3],
}

/// 3x3 element stiffness (vertex-indexed, symmetric, zero row sums) plus the
/// element load vector.
#[derive(Clone, Copy, Debug)]
pub struct LocalSystem {
    pub stiffness: Mat3,
    pub load: [f64; 3],
    pub method: Method,
}

/// Edge-difference matrix: maps vertex values to oriented edge differences
/// (f2-f1, f3-f2, f1-f3).
pub fn d0() -> Mat3 {
    Mat3::from_rows([[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0], [1.0, 0.0, -1.0]])
}

/// Diagonal edge weights dual_len[i] / edge_len[i]; zero or negative entries
/// on right/obtuse triangles.
pub fn hodge1(g: &TriangleGeometry) -> Mat3 {
    Mat3::diag([
        g.dual_len[0] / g.edge_len[0],
        g.dual_len[1] / g.edge_len[1],
        g.dual_len[2] / g.edge_len[2],
    ])
}

/// Diagonal vertex weights: signed dual cell areas. Trace equals the
/// triangle area.
pub fn hodge0(g: &TriangleGeometry) -> Mat3 {
    Mat3::diag(g.dual_area)
}

/// Discretizes the tensor action on edge values. Returns the decomposition
/// coefficients and the matrix
/// [[0, lambda_1, mu_1], [mu_2, 0, lambda_2], [lambda_3, mu_3, 0]].
/// For K = k*Id every off-diagonal entry is -k and the matrix acts on d0()
/// as multiplication by k.
pub fn k_dec(g: &TriangleGeometry, k: &AnisotropyTensor) -> (AnisoCoeffs, Mat3) {
    let two_a = 2.0 * g.area;
    let mut lambda = [0.0; 3];
    let mut mu = [0.0; 3];
    for i in 0..3 {
        let kw = k.apply(g.w[i]);
        lambda[i] = -cross(g.w[(i + 2) % 3], kw) / two_a;
        mu[i] = cross(g.w[(i + 1) % 3], kw) / two_a;
    }
    let mat = Mat3::from_rows([
        [0.0, lambda[0], mu[0]],
        [mu[1], 0.0, lambda[1]],
        [lambda[2], mu[2], 0.0],
    ]);
    (AnisoCoeffs { lambda, mu }, mat)
}

/// Element-constant discrete gradient: the vector W with
/// W . (v2-v1) = f2-f1 and W . (v3-v1) = f3-f1 (the third edge equation is
/// then automatic).
pub fn flux(v1: Point2, v2: Point2, v3: Point2, f: [f64; 3]) -> Result<Vec2, GeometryError> {
    let a = v2 - v1;
    let b = v3 - v1;
    let d = cross(a, b);
    let max_edge_sq = a.norm_sq().max(b.norm_sq()).max((b - a).norm_sq());
    if crate::math::abs(d) <= 2e-14 * max_edge_sq {
        return Err(GeometryError::DegenerateTriangle);
    }
    let p = f[1] - f[0];
    let q = f[2] - f[0];
    Ok(Vec2::new((p * b.y - q * a.y) / d, (q * a.x - p * b.x) / d))
}

/// Image of the discrete gradient under the tensor: W' = K W.
pub fn anisotropic_flux(
    v1: Point2,
    v2: Point2,
    v3: Point2,
    k: &AnisotropyTensor,
    f: [f64; 3],
) -> Result<Vec2, GeometryError> {
    Ok(k.apply(flux(v1, v2, v3, f)?))
}

/// Local DEC system: stiffness d0^T M1 Kdec d0, load (A_i q_i) with the
/// signed dual cell areas.
pub fn local_system_dec(
    g: &TriangleGeometry,
    k: &AnisotropyTensor,
    q: [f64; 3],
) -> LocalSystem {
    let (_, kdec) = k_dec(g, k);
    let stiffness = d0().transpose() * (hodge1(g) * (kdec * d0()));
    let load = [
        g.dual_area[0] * q[0],
        g.dual_area[1] * q[1],
        g.dual_area[2] * q[2],
    ];
    LocalSystem { stiffness, load, method: Method::Dec }
}

/// Local linear finite element system: stiffness A * G^T K G where column j
/// of G is the gradient of shape function j, load (A/3) q.
pub fn local_system_feml(
    v1: Point2,
    v2: Point2,
    v3: Point2,
    k: &AnisotropyTensor,
    q: [f64; 3],
) -> Result<LocalSystem, GeometryError> {
    let w1 = v2 - v1;
    let w2 = v3 - v2;
    let two_a = cross(w1, w2);
    let max_edge_sq = w1.norm_sq().max(w2.norm_sq()).max((v1 - v3).norm_sq());
    if crate::math::abs(two_a) <= 2e-14 * max_edge_sq {
        return Err(GeometryError::DegenerateTriangle);
    }
    if two_a < 0.0 {
        return Err(GeometryError::NotCounterClockwise);
    }
    let area = 0.5 * two_a;

    let grads = [
        Vec2::new(v2.y - v3.y, v3.x - v2.x) * (1.0 / two_a),
        Vec2::new(v3.y - v1.y, v1.x - v3.x) * (1.0 / two_a),
        Vec2::new(v1.y - v2.y, v2.x - v1.x) * (1.0 / two_a),
    ];
    let mut stiffness = Mat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            stiffness.m[i][j] = area * grads[i].dot(k.apply(grads[j]));
        }
    }
    let third = area / 3.0;
    let load = [third * q[0], third * q[1], third * q[2]];
    Ok(LocalSystem { stiffness, load, method: Method::Feml })
}
