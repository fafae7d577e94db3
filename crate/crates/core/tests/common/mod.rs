//! Shared helpers for the integration tests: seeded random samplers and
//! independent oracle computations (plain 2x2 eliminations, shoelace sums,
//! inscribed-angle trigonometry) that never call the code under test.

// Each test binary compiles this module separately and uses its own subset.
// Indexed loops are kept where they mirror the written-out algebra.
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use dec2d_core::geometry::{AnisotropyTensor, Vec2};
use dec2d_core::mesh::Point2;
use rand::rngs::StdRng;
use rand::Rng;

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!(
        (a - b).abs() <= tol,
        "{what}: {a} vs {b} differ by {}",
        (a - b).abs()
    );
}

pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

pub fn signed_area(v: [Point2; 3]) -> f64 {
    0.5 * cross(v[1] - v[0], v[2] - v[0])
}

/// Random counter-clockwise triangle with vertices in [0,1]^2 and area at
/// least `min_area`.
pub fn random_triangle(rng: &mut StdRng, min_area: f64) -> [Point2; 3] {
    loop {
        let mut v = [
            Point2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)),
            Point2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)),
            Point2::new(rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)),
        ];
        let area = signed_area(v);
        if area.abs() < min_area {
            continue;
        }
        if area < 0.0 {
            v.swap(1, 2);
        }
        return v;
    }
}

/// Flat counter-clockwise triangle with an obtuse angle at the third
/// vertex, randomly rotated and translated. Area stays in [0.01, 0.04].
pub fn forced_obtuse_triangle(rng: &mut StdRng) -> [Point2; 3] {
    let u = rng.gen_range(0.25..0.75);
    let e = rng.gen_range(0.02..0.08);
    let base = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(u, e)];
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let (s, c) = phi.sin_cos();
    let tx = rng.gen_range(0.0..1.0);
    let ty = rng.gen_range(0.0..1.0);
    base.map(|p| Point2::new(c * p.x - s * p.y + tx, s * p.x + c * p.y + ty))
}

pub fn is_obtuse(v: [Point2; 3]) -> bool {
    for i in 0..3 {
        let a = v[(i + 1) % 3] - v[i];
        let b = v[(i + 2) % 3] - v[i];
        if a.dot(b) < 0.0 {
            return true;
        }
    }
    false
}

/// Random SPD tensor with principal values in [0.1, 100] and any
/// orientation, assembled by an explicit rotation product (not by the
/// library constructor).
pub fn random_tensor(rng: &mut StdRng) -> AnisotropyTensor {
    let kx = rng.gen_range(0.1..100.0);
    let ky = rng.gen_range(0.1..100.0);
    let deg = rng.gen_range(0.0..360.0);
    tensor_oracle(kx, ky, deg)
}

/// R(theta) diag(kx, ky) R(theta)^T by explicit matrix products.
pub fn tensor_oracle(kx: f64, ky: f64, angle_deg: f64) -> AnisotropyTensor {
    let t = angle_deg.to_radians();
    let (s, c) = t.sin_cos();
    // R = [[c,-s],[s,c]], D = diag(kx, ky); K = R D R^T.
    let rd = [[c * kx, -s * ky], [s * kx, c * ky]];
    AnisotropyTensor {
        k11: rd[0][0] * c + rd[0][1] * -s,
        k12: rd[1][0] * c + rd[1][1] * -s,
        k22: rd[1][0] * s + rd[1][1] * c,
    }
}

/// Circumcenter by eliminating the two equidistance equations
/// 2 (v2-v1).c = |v2|^2-|v1|^2 and 2 (v3-v1).c = |v3|^2-|v1|^2.
pub fn circumcenter_oracle(v: [Point2; 3]) -> Point2 {
    let a11 = 2.0 * (v[1].x - v[0].x);
    let a12 = 2.0 * (v[1].y - v[0].y);
    let a21 = 2.0 * (v[2].x - v[0].x);
    let a22 = 2.0 * (v[2].y - v[0].y);
    let sq = |p: Point2| p.x * p.x + p.y * p.y;
    let b1 = sq(v[1]) - sq(v[0]);
    let b2 = sq(v[2]) - sq(v[0]);
    let det = a11 * a22 - a12 * a21;
    Point2::new((b1 * a22 - b2 * a12) / det, (a11 * b2 - a21 * b1) / det)
}

/// Signed shoelace area of a polygon.
pub fn shoelace(poly: &[Point2]) -> f64 {
    let mut twice = 0.0;
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        twice += p.x * q.y - p.y * q.x;
    }
    0.5 * twice
}

/// Signed dual cell areas by shoelace over the quadrilaterals
/// [vertex, adjacent edge midpoint, circumcenter, other edge midpoint].
pub fn dual_areas_oracle(v: [Point2; 3]) -> [f64; 3] {
    let c = circumcenter_oracle(v);
    let mid = |a: Point2, b: Point2| Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
    let m12 = mid(v[0], v[1]);
    let m23 = mid(v[1], v[2]);
    let m31 = mid(v[2], v[0]);
    [
        shoelace(&[v[0], m12, c, m31]),
        shoelace(&[v[1], m23, c, m12]),
        shoelace(&[v[2], m31, c, m23]),
    ]
}

/// Triangle vertex angles by acos of normalized dot products.
pub fn vertex_angles(v: [Point2; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        let a = v[(i + 1) % 3] - v[i];
        let b = v[(i + 2) % 3] - v[i];
        out[i] = (a.dot(b) / (a.norm() * b.norm())).acos();
    }
    out
}

/// Coefficients (lambda_i, mu_i) of K w_i = lambda_i w_(i+1) + mu_i w_(i+2)
/// by Cramer elimination of each 2x2 system.
pub fn aniso_coeffs_oracle(w: [Vec2; 3], k: &AnisotropyTensor) -> ([f64; 3], [f64; 3]) {
    let mut lambda = [0.0; 3];
    let mut mu = [0.0; 3];
    for i in 0..3 {
        let rhs = k.apply(w[i]);
        let c1 = w[(i + 1) % 3];
        let c2 = w[(i + 2) % 3];
        let det = cross(c1, c2);
        lambda[i] = cross(rhs, c2) / det;
        mu[i] = cross(c1, rhs) / det;
    }
    (lambda, mu)
}

/// The element-constant gradient by pivoted Gaussian elimination of the two
/// independent edge equations W.(v2-v1) = f2-f1, W.(v3-v1) = f3-f1.
pub fn flux_oracle(v: [Point2; 3], f: [f64; 3]) -> Vec2 {
    let a = v[1] - v[0];
    let b = v[2] - v[0];
    let mut m = [[a.x, a.y, f[1] - f[0]], [b.x, b.y, f[2] - f[0]]];
    if m[0][0].abs() < m[1][0].abs() {
        m.swap(0, 1);
    }
    let factor = m[1][0] / m[0][0];
    for j in 0..3 {
        m[1][j] -= factor * m[0][j];
    }
    let wy = m[1][2] / m[1][1];
    let wx = (m[0][2] - m[0][1] * wy) / m[0][0];
    Vec2::new(wx, wy)
}
