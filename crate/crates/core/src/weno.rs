//! Non-oscillatory reconstruction kernels.
//!
//! Three kernels share the Jiang-Shu weighting recipe (eps = 1e-6, power 2):
//!
//! * `fdweno5_flux_derivative` - upwind fifth-order WENO approximation of
//!   d(speed * u)/dx from nodal values, via numerical flux differences.
//! * FBMWENO - reconstruction of a primitive function U from six face
//!   values, used by the conservative semi-Lagrangian advection. The linear
//!   weights are position-dependent polynomials C_l(x) and the smoothness
//!   indicators measure the smoothness of u = dU/dx, not of U.
//! * Point-value WENO - non-oscillatory interpolation of nodal values on a
//!   six-point stencil, used by the direct semi-Lagrangian advection.
//!
//! FBMWENO and the point-value interpolator use the same stencil geometry:
//! six equispaced values at offsets -5/2..5/2 (units of dx) around the
//! center of the evaluation interval, three cubic substencils, and the same
//! C_l. Substencil l = 0 is the right-most one.

use crate::error::{QrvmError, Result};

/// Regularization of the nonlinear weights.
pub const WENO_EPS: f64 = 1e-6;

// ---------------------------------------------------------------------------
// FDWENO5: flux reconstruction for finite differences
// ---------------------------------------------------------------------------

/// Left-biased fifth-order WENO value at the right face of the center cell,
/// from five consecutive nodal values.
#[inline]
fn weno5_face(a: f64, b: f64, c: f64, d: f64, e: f64) -> f64 {
    let s0 = 13.0 / 12.0 * (a - 2.0 * b + c) * (a - 2.0 * b + c)
        + 0.25 * (a - 4.0 * b + 3.0 * c) * (a - 4.0 * b + 3.0 * c);
    let s1 = 13.0 / 12.0 * (b - 2.0 * c + d) * (b - 2.0 * c + d) + 0.25 * (b - d) * (b - d);
    let s2 = 13.0 / 12.0 * (c - 2.0 * d + e) * (c - 2.0 * d + e)
        + 0.25 * (3.0 * c - 4.0 * d + e) * (3.0 * c - 4.0 * d + e);
    let d0 = (WENO_EPS + s0) * (WENO_EPS + s0);
    let d1 = (WENO_EPS + s1) * (WENO_EPS + s1);
    let d2 = (WENO_EPS + s2) * (WENO_EPS + s2);
    // single-division form of the normalized weights
    let w0 = 0.1 * d1 * d2;
    let w1 = 0.6 * d0 * d2;
    let w2 = 0.3 * d0 * d1;
    let q0 = 2.0 * a - 7.0 * b + 11.0 * c;
    let q1 = -b + 5.0 * c + 2.0 * d;
    let q2 = 2.0 * c + 5.0 * d - e;
    (w0 * q0 + w1 * q1 + w2 * q2) / (6.0 * (w0 + w1 + w2))
}

/// Upwind-biased fifth-order WENO approximation of d(speed * u)/dx at each
/// physical node of `line`, which carries `n_ghost >= 3` ghost values per
/// side. `out` receives the physical-node derivatives.
pub fn fdweno5_flux_derivative_into(
    line: &[f64],
    n_ghost: usize,
    speed: f64,
    dx: f64,
    out: &mut [f64],
) {
    assert!(n_ghost >= 3, "fifth-order stencil needs at least 3 ghosts");
    let n = line.len() - 2 * n_ghost;
    assert_eq!(out.len(), n);
    if speed == 0.0 {
        out.fill(0.0);
        return;
    }
    let g = n_ghost;
    let mut faces = vec![0.0; n + 1];
    if speed > 0.0 {
        for (k, fk) in faces.iter_mut().enumerate() {
            let c = g + k;
            *fk = weno5_face(line[c - 3], line[c - 2], line[c - 1], line[c], line[c + 1]);
        }
    } else {
        for (k, fk) in faces.iter_mut().enumerate() {
            let c = g + k;
            *fk = weno5_face(line[c + 2], line[c + 1], line[c], line[c - 1], line[c - 2]);
        }
    }
    let scale = speed / dx;
    for i in 0..n {
        out[i] = scale * (faces[i + 1] - faces[i]);
    }
}

/// Allocating wrapper around [`fdweno5_flux_derivative_into`].
pub fn fdweno5_flux_derivative(line: &[f64], n_ghost: usize, speed: f64, dx: f64) -> Vec<f64> {
    let mut out = vec![0.0; line.len() - 2 * n_ghost];
    fdweno5_flux_derivative_into(line, n_ghost, speed, dx, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Shared six-point stencil machinery
// ---------------------------------------------------------------------------

/// Offsets of the six stencil values around the evaluation-interval center,
/// in units of dx.
const NODES: [f64; 6] = [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5];

/// Substencil value indices; l = 0 is the right-most substencil.
const SUB: [[usize; 4]; 3] = [[2, 3, 4, 5], [1, 2, 3, 4], [0, 1, 2, 3]];

/// Linear-weight polynomials C_l at offset `t` in [-1/2, 1/2] from the
/// evaluation-interval center. Sum to 1 identically and are nonnegative on
/// the center interval.
pub fn linear_weight_polynomials(t: f64) -> [f64; 3] {
    [
        (t + 2.5) * (t + 1.5) / 20.0,
        -(t + 2.5) * (t - 2.5) / 10.0,
        (t - 2.5) * (t - 1.5) / 20.0,
    ]
}

/// Cubic Lagrange basis at offset `t` for the four nodes of substencil `l`.
fn cubic_basis(l: usize, t: f64) -> [f64; 4] {
    let n = SUB[l].map(|k| NODES[k]);
    let mut basis = [0.0; 4];
    for m in 0..4 {
        let mut num = 1.0;
        let mut den = 1.0;
        for k in 0..4 {
            if k != m {
                num *= t - n[k];
                den *= n[m] - n[k];
            }
        }
        basis[m] = num / den;
    }
    basis
}

/// Precomputed evaluation tables for a fixed offset within the center
/// interval; `theta` in [0, 1] measures from the left stencil point of that
/// interval.
#[derive(Debug, Clone)]
struct StencilEval {
    c: [f64; 3],
    basis: [[f64; 4]; 3],
}

impl StencilEval {
    fn new(theta: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&theta));
        let t = theta - 0.5;
        let c = linear_weight_polynomials(t);
        debug_assert!(c.iter().all(|&x| x >= -1e-12), "C_l negative inside the center cell");
        StencilEval {
            c,
            basis: [cubic_basis(0, t), cubic_basis(1, t), cubic_basis(2, t)],
        }
    }

    /// Convex combination of the three substencil cubics with nonlinear
    /// weights built from `sigma`.
    #[inline]
    fn combine(&self, u: &[f64; 6], sigma: [f64; 3]) -> f64 {
        let d0 = (WENO_EPS + sigma[0]) * (WENO_EPS + sigma[0]);
        let d1 = (WENO_EPS + sigma[1]) * (WENO_EPS + sigma[1]);
        let d2 = (WENO_EPS + sigma[2]) * (WENO_EPS + sigma[2]);
        let w0 = self.c[0] * d1 * d2;
        let w1 = self.c[1] * d0 * d2;
        let w2 = self.c[2] * d0 * d1;
        let b0 = &self.basis[0];
        let p0 = b0[0] * u[2] + b0[1] * u[3] + b0[2] * u[4] + b0[3] * u[5];
        let b1 = &self.basis[1];
        let p1 = b1[0] * u[1] + b1[1] * u[2] + b1[2] * u[3] + b1[3] * u[4];
        let b2 = &self.basis[2];
        let p2 = b2[0] * u[0] + b2[1] * u[1] + b2[2] * u[2] + b2[3] * u[3];
        (w0 * p0 + w1 * p1 + w2 * p2) / (w0 + w1 + w2)
    }
}

// ---------------------------------------------------------------------------
// FBMWENO: primitive-function reconstruction
// ---------------------------------------------------------------------------

/// Six consecutive primitive values U at faces i-5/2..i+5/2 with spacing dx.
#[derive(Debug, Clone, Copy)]
pub struct StencilWindow {
    pub u: [f64; 6],
    pub dx: f64,
}

/// Smoothness indicators for the three cubic substencils of a primitive
/// stencil, as quadratic forms in the U values. They measure the smoothness
/// of u = dU/dx over the center interval and vanish on data whose u is
/// constant.
pub fn fbmweno_smoothness(u: &[f64; 6]) -> [f64; 3] {
    let (v0, v1, v2, v3, v4, v5) = (u[0], u[1], u[2], u[3], u[4], u[5]);
    let s0 = 10.0 / 3.0 * v2 * v2 - 17.0 * v2 * v3 + 14.0 * v2 * v4 - 11.0 / 3.0 * v2 * v5
        + 22.0 * v3 * v3
        - 37.0 * v3 * v4
        + 10.0 * v3 * v5
        + 16.0 * v4 * v4
        - 9.0 * v4 * v5
        + 4.0 / 3.0 * v5 * v5;
    let s1 = 4.0 / 3.0 * v1 * v1 - 7.0 * v1 * v2 + 6.0 * v1 * v3 - 5.0 / 3.0 * v1 * v4
        + 10.0 * v2 * v2
        - 19.0 * v2 * v3
        + 6.0 * v2 * v4
        + 10.0 * v3 * v3
        - 7.0 * v3 * v4
        + 4.0 / 3.0 * v4 * v4;
    let s2 = 10.0 / 3.0 * v3 * v3 - 17.0 * v3 * v2 + 14.0 * v3 * v1 - 11.0 / 3.0 * v3 * v0
        + 22.0 * v2 * v2
        - 37.0 * v2 * v1
        + 10.0 * v2 * v0
        + 16.0 * v1 * v1
        - 9.0 * v0 * v1
        + 4.0 / 3.0 * v0 * v0;
    [s0, s1, s2]
}

/// Reconstruction evaluator for a fixed in-cell offset (hot path).
#[derive(Debug, Clone)]
pub struct FbmEval(StencilEval);

impl FbmEval {
    /// `theta` in [0, 1]: offset of the evaluation point from the left face
    /// of the center cell, in units of dx.
    pub fn new(theta: f64) -> Self {
        FbmEval(StencilEval::new(theta))
    }

    #[inline]
    pub fn eval(&self, u: &[f64; 6]) -> f64 {
        self.0.combine(u, fbmweno_smoothness(u))
    }
}

/// Reconstructs the primitive at `x_rel` in [0, dx] measured from the left
/// face of the center cell. Evaluation at a stencil face returns the face
/// value exactly.
pub fn fbmweno_reconstruct(window: &StencilWindow, x_rel: f64) -> Result<f64> {
    if !(0.0..=window.dx).contains(&x_rel) {
        return Err(QrvmError::InvalidParams(format!(
            "evaluation point {x_rel} outside the center cell [0, {}]",
            window.dx
        )));
    }
    let theta = x_rel / window.dx;
    if theta == 0.0 {
        return Ok(window.u[2]);
    }
    if theta == 1.0 {
        return Ok(window.u[3]);
    }
    Ok(FbmEval::new(theta).eval(&window.u))
}

// ---------------------------------------------------------------------------
// Point-value WENO interpolation
// ---------------------------------------------------------------------------

/// Smoothness indicators for point-value interpolation: full Jiang-Shu
/// measure (first through third derivative) of each substencil cubic over
/// the center interval, on unit-spaced data. Scale-free in dx.
pub fn pointvalue_smoothness(v: &[f64; 6]) -> [f64; 3] {
    let (v0, v1, v2, v3, v4, v5) = (v[0], v[1], v[2], v[3], v[4], v[5]);
    let s0 = 407.0 / 90.0 * v2 * v2 - 1193.0 / 60.0 * v2 * v3 + 439.0 / 30.0 * v2 * v4
        - 683.0 / 180.0 * v2 * v5
        + 721.0 / 30.0 * v3 * v3
        - 2309.0 / 60.0 * v3 * v4
        + 103.0 / 10.0 * v3 * v5
        + 248.0 / 15.0 * v4 * v4
        - 553.0 / 60.0 * v4 * v5
        + 61.0 / 45.0 * v5 * v5;
    let s1 = 61.0 / 45.0 * v1 * v1 - 141.0 / 20.0 * v1 * v2 + 179.0 / 30.0 * v1 * v3
        - 293.0 / 180.0 * v1 * v4
        + 331.0 / 30.0 * v2 * v2
        - 1259.0 / 60.0 * v2 * v3
        + 179.0 / 30.0 * v2 * v4
        + 331.0 / 30.0 * v3 * v3
        - 141.0 / 20.0 * v3 * v4
        + 61.0 / 45.0 * v4 * v4;
    let s2 = 61.0 / 45.0 * v0 * v0 - 553.0 / 60.0 * v0 * v1 + 103.0 / 10.0 * v0 * v2
        - 683.0 / 180.0 * v0 * v3
        + 248.0 / 15.0 * v1 * v1
        - 2309.0 / 60.0 * v1 * v2
        + 439.0 / 30.0 * v1 * v3
        + 721.0 / 30.0 * v2 * v2
        - 1193.0 / 60.0 * v2 * v3
        + 407.0 / 90.0 * v3 * v3;
    [s0, s1, s2]
}

/// Interpolation evaluator for a fixed fractional offset (hot path).
#[derive(Debug, Clone)]
pub struct PointEval(StencilEval);

impl PointEval {
    /// `theta` in [0, 1]: offset between the two center stencil nodes.
    pub fn new(theta: f64) -> Self {
        PointEval(StencilEval::new(theta))
    }

    /// `v` holds the six nodal values i-2..i+3; interpolates at x_i + theta dx.
    #[inline]
    pub fn eval(&self, v: &[f64; 6]) -> f64 {
        self.0.combine(v, pointvalue_smoothness(v))
    }
}

/// Non-oscillatory six-point interpolation of `line` at x_i + theta dx,
/// theta in [0, 1). `i` indexes into `line`, which must cover i-2..i+3.
pub fn pointvalue_weno_interp(line: &[f64], theta: f64, i: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&theta) {
        return Err(QrvmError::InvalidParams(format!("theta = {theta} outside [0, 1)")));
    }
    if i < 2 || i + 3 >= line.len() {
        return Err(QrvmError::InvalidParams(format!(
            "stencil i-2..i+3 out of bounds for i = {i}, len = {}",
            line.len()
        )));
    }
    if theta == 0.0 {
        return Ok(line[i]);
    }
    let v: [f64; 6] = line[i - 2..i + 4].try_into().unwrap();
    Ok(PointEval::new(theta).eval(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::{lagrange_eval, sigma_by_quadrature, Xorshift};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn periodic_line(n: usize, g: usize, f: impl Fn(f64) -> f64) -> (Vec<f64>, f64) {
        let dx = 1.0 / n as f64;
        let mut line = vec![0.0; n + 2 * g];
        for k in 0..n + 2 * g {
            let i = k as isize - g as isize;
            let x = i.rem_euclid(n as isize) as f64 * dx;
            line[k] = f(x);
        }
        (line, dx)
    }

    #[test]
    fn fdweno5_constant_is_exactly_zero() {
        for speed in [1.0, -2.5, 0.0] {
            let line = vec![3.7; 40 + 6];
            let d = fdweno5_flux_derivative(&line, 3, speed, 0.025);
            assert!(d.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn fdweno5_exact_on_linear_data() {
        let n = 32;
        let dx = 1.0 / n as f64;
        for speed in [1.0, -1.3] {
            let mut line = vec![0.0; n + 6];
            for (k, v) in line.iter_mut().enumerate() {
                // globally linear, no periodic wrap: u = 2x + 1
                *v = 2.0 * (k as f64 - 3.0) * dx + 1.0;
            }
            let d = fdweno5_flux_derivative(&line, 3, speed, dx);
            for &v in &d {
                assert_relative_eq!(v, 2.0 * speed, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn fdweno5_convergence_order_on_sine() {
        let mut errs = Vec::new();
        for &n in &[32usize, 64, 128, 256] {
            let (line, dx) = periodic_line(n, 3, |x| (2.0 * PI * x).sin());
            let d = fdweno5_flux_derivative(&line, 3, 1.0, dx);
            let mut err = 0.0f64;
            for (i, &v) in d.iter().enumerate() {
                let x = i as f64 * dx;
                err = err.max((v - 2.0 * PI * (2.0 * PI * x).cos()).abs());
            }
            errs.push(err);
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 4.5, "observed order {order} below 4.5 ({errs:?})");
        }
    }

    #[test]
    fn fdweno5_upwind_direction_respected() {
        // a step moving right with a > 0 must not look downstream:
        // derivative ahead of the step stays zero
        let mut line = vec![0.0; 22];
        for v in line.iter_mut().take(8) {
            *v = 1.0;
        }
        let d = fdweno5_flux_derivative(&line, 3, 1.0, 0.1);
        assert_eq!(d[12], 0.0);
        assert_eq!(d[13], 0.0);
    }

    #[test]
    fn smoothness_zero_for_constant_u() {
        // U linear in node index (u constant): (0,1,2,3,4,5) * dx
        for dxs in [1.0, 0.01] {
            let u = [0.0, dxs, 2.0 * dxs, 3.0 * dxs, 4.0 * dxs, 5.0 * dxs];
            for s in fbmweno_smoothness(&u) {
                assert!(s.abs() <= 1e-12 * dxs * dxs, "sigma = {s}");
            }
        }
    }

    #[test]
    fn smoothness_flags_jump_in_substencil_zero() {
        // u = smooth background + unit jump located between faces i+3/2 and
        // i+5/2, which only substencil 0 sees; dx = 0.01. The background is
        // curved so the smooth indicators are small but nonzero.
        let dx = 0.01;
        let jump_at = 1.7 * dx; // relative to the center face grid
        // u = 0.3 + 2x + 4x^2 plus the jump; U is its primitive
        let primitive = |x: f64| {
            0.3 * x + x * x + 4.0 / 3.0 * x * x * x + if x > jump_at { x - jump_at } else { 0.0 }
        };
        let mut u = [0.0; 6];
        for (m, v) in u.iter_mut().enumerate() {
            *v = primitive((m as f64 - 2.5) * dx);
        }
        let s = fbmweno_smoothness(&u);
        assert!(s[1] > 0.0 && s[2] > 0.0, "background indicators degenerate: {s:?}");
        assert!(s[0] / s[1].max(s[2]) >= 1e2, "sigma ratio too small: {s:?}");
    }

    #[test]
    fn smoothness_matches_integral_definition() {
        // independent route: assemble each substencil cubic numerically and
        // integrate dx^(2k-1) * ((dP/dx)^(k))^2 by Gauss quadrature, dx = 1
        let mut rng = Xorshift::new(0x5eed);
        for _ in 0..50 {
            let u: [f64; 6] = std::array::from_fn(|_| rng.uniform(-2.0, 2.0));
            let sig = fbmweno_smoothness(&u);
            for l in 0..3 {
                let nodes: Vec<f64> = SUB[l].iter().map(|&k| NODES[k]).collect();
                let vals: Vec<f64> = SUB[l].iter().map(|&k| u[k]).collect();
                let oracle = sigma_by_quadrature(&nodes, &vals, &[2, 3]);
                assert_relative_eq!(sig[l], oracle, epsilon = 1e-10, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn pointvalue_smoothness_matches_integral_definition() {
        let mut rng = Xorshift::new(0xfeed);
        for _ in 0..50 {
            let v: [f64; 6] = std::array::from_fn(|_| rng.uniform(-2.0, 2.0));
            let sig = pointvalue_smoothness(&v);
            for l in 0..3 {
                let nodes: Vec<f64> = SUB[l].iter().map(|&k| NODES[k]).collect();
                let vals: Vec<f64> = SUB[l].iter().map(|&k| v[k]).collect();
                let oracle = sigma_by_quadrature(&nodes, &vals, &[1, 2, 3]);
                assert_relative_eq!(sig[l], oracle, epsilon = 1e-10, max_relative = 1e-10);
            }
        }
    }

    proptest! {
        #[test]
        fn smoothness_nonnegative(seed in any::<u64>()) {
            let mut rng = Xorshift::new(seed.max(1));
            let u: [f64; 6] = std::array::from_fn(|_| rng.uniform(-1.0, 1.0));
            for s in fbmweno_smoothness(&u) {
                prop_assert!(s >= -1e-13);
            }
            for s in pointvalue_smoothness(&u) {
                prop_assert!(s >= -1e-13);
            }
        }
    }

    #[test]
    fn linear_weights_partition_of_unity() {
        let mut rng = Xorshift::new(42);
        for _ in 0..10 {
            let t = rng.uniform(-0.5, 0.5);
            let c = linear_weight_polynomials(t);
            assert!((c[0] + c[1] + c[2] - 1.0).abs() <= 1e-13);
            assert!(c.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn linear_weights_at_cell_center() {
        let c = linear_weight_polynomials(0.0);
        assert_eq!(c[0], 0.1875);
        assert_eq!(c[1], 0.625);
        assert_eq!(c[2], 0.1875);
        assert_eq!(c[0] + c[1] + c[2], 1.0);
    }

    #[test]
    fn linear_weights_reassemble_quintic() {
        // defining relation: quintic through all six points equals the
        // C_l-weighted sum of the substencil cubics
        let mut rng = Xorshift::new(7);
        for _ in 0..20 {
            let u: [f64; 6] = std::array::from_fn(|_| rng.uniform(-3.0, 3.0));
            let t = rng.uniform(-0.5, 0.5);
            let c = linear_weight_polynomials(t);
            let mut combo = 0.0;
            for l in 0..3 {
                let b = cubic_basis(l, t);
                let p: f64 = (0..4).map(|m| b[m] * u[SUB[l][m]]).sum();
                combo += c[l] * p;
            }
            let quintic = lagrange_eval(&NODES, &u, t);
            assert_relative_eq!(combo, quintic, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn reconstruct_exact_at_center_faces() {
        let w = StencilWindow {
            u: [0.3, 1.9, 2.2, 4.1, 4.15, 6.0],
            dx: 0.5,
        };
        assert_eq!(fbmweno_reconstruct(&w, 0.0).unwrap(), 2.2);
        assert_eq!(fbmweno_reconstruct(&w, 0.5).unwrap(), 4.1);
        assert!(fbmweno_reconstruct(&w, 0.6).is_err());
        assert!(fbmweno_reconstruct(&w, -0.1).is_err());
    }

    #[test]
    fn reconstruct_near_faces_is_continuous() {
        let w = StencilWindow {
            u: [0.3, 1.9, 2.2, 4.1, 4.15, 6.0],
            dx: 0.5,
        };
        let at_face = fbmweno_reconstruct(&w, 0.5 * 1e-12).unwrap();
        assert_relative_eq!(at_face, 2.2, max_relative = 1e-9);
    }

    #[test]
    fn reconstruct_sixth_order_on_quintic_primitive() {
        // U is a degree-5 polynomial; reconstruction error decays like dx^6
        let q = |x: f64| {
            0.3 + 1.1 * x - 0.7 * x * x + 0.45 * x.powi(3) + 0.2 * x.powi(4) - 0.35 * x.powi(5)
        };
        let theta = 0.37;
        let mut errs = Vec::new();
        for &dx in &[0.2, 0.1, 0.05] {
            // worst error over a few center positions
            let mut err = 0.0f64;
            for c in 0..5 {
                let xc = -0.4 + 0.23 * c as f64; // center of the eval cell
                let u: [f64; 6] = std::array::from_fn(|m| q(xc + (m as f64 - 2.5) * dx));
                let x_eval = xc + (theta - 0.5) * dx;
                let rec = fbmweno_reconstruct(&StencilWindow { u, dx }, theta * dx).unwrap();
                err = err.max((rec - q(x_eval)).abs());
            }
            errs.push(err);
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 5.5, "observed order {order} below 5.5 ({errs:?})");
        }
    }

    #[test]
    fn nonlinear_weights_approach_linear_weights_quadratically() {
        // smooth data: |omega - C| = O(dx^2)
        let theta: f64 = 0.3;
        let t = theta - 0.5;
        let c = linear_weight_polynomials(t);
        let mut devs = Vec::new();
        for &dx in &[0.1, 0.05, 0.025] {
            let xc = 0.3;
            let u: [f64; 6] = std::array::from_fn(|m| ((xc + (m as f64 - 2.5) * dx) * 2.0).sin());
            let s = fbmweno_smoothness(&u);
            let den: f64 = (0..3).map(|l| c[l] / (WENO_EPS + s[l]).powi(2)).sum();
            let mut dev = 0.0f64;
            for l in 0..3 {
                let w = c[l] / (WENO_EPS + s[l]).powi(2) / den;
                dev = dev.max((w - c[l]).abs());
            }
            devs.push(dev);
        }
        for w in devs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 1.7, "weight deviation order {order} below 1.7 ({devs:?})");
        }
    }

    #[test]
    fn pointvalue_exact_at_node_and_on_linears() {
        let line: Vec<f64> = (0..12).map(|k| 0.7 * k as f64 - 1.0).collect();
        // theta = 0 returns the nodal value bit-exactly
        assert_eq!(pointvalue_weno_interp(&line, 0.0, 5).unwrap(), line[5]);
        // linear data is reproduced for any theta
        for theta in [0.1, 0.37, 0.5, 0.9] {
            let v = pointvalue_weno_interp(&line, theta, 5).unwrap();
            assert_relative_eq!(v, 0.7 * (5.0 + theta) - 1.0, epsilon = 1e-12);
        }
        assert!(pointvalue_weno_interp(&line, 1.0, 5).is_err());
        assert!(pointvalue_weno_interp(&line, 0.5, 1).is_err());
    }

    proptest! {
        #[test]
        fn pointvalue_linear_exactness(a in -5.0..5.0f64, b in -5.0..5.0f64,
                                       theta in 0.0..0.999f64) {
            let line: Vec<f64> = (0..10).map(|k| a * k as f64 + b).collect();
            let v = pointvalue_weno_interp(&line, theta, 4).unwrap();
            let expect = a * (4.0 + theta) + b;
            prop_assert!((v - expect).abs() <= 1e-11 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn pointvalue_convergence_on_sine() {
        let theta = 0.37;
        let mut errs = Vec::new();
        for &n in &[32usize, 64, 128, 256] {
            let (line, dx) = periodic_line(n, 3, |x| (2.0 * PI * x).sin());
            let mut err = 0.0f64;
            for i in 0..n {
                let v = pointvalue_weno_interp(&line, theta, i + 3).unwrap();
                let x = (i as f64 + theta) * dx;
                err = err.max((v - (2.0 * PI * x).sin()).abs());
            }
            errs.push(err);
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 4.5, "observed order {order} below 4.5 ({errs:?})");
        }
    }
}
