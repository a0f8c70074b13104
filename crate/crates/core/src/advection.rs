//! Constant-coefficient 1D advection steps for the Strang splitting:
//! conservative (flux-balance) and direct semi-Lagrangian variants.
//!
//! Both split the characteristic shift a*dt into an exact integer-cell part
//! plus a fractional part handled by reconstruction, so arbitrary Courant
//! numbers work with a fixed stencil. Integer shifts reduce to index
//! arithmetic and are bit-exact.

use crate::weno::{FbmEval, PointEval};

/// Boundary semantics of a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineBc {
    /// Periodic wrap (the x-dimension).
    Periodic,
    /// Replicate the nearest physical value (the p-dimension). Feet beyond
    /// the physical domain are clamped and counted.
    NeumannClamp,
}

/// A 1D line of values with its spacing and interpretation.
#[derive(Debug, Clone)]
pub struct LineBuffer {
    pub values: Vec<f64>,
    pub dx: f64,
    pub bc: LineBc,
}

/// Splits a shift (in cells) into integer and fractional parts,
/// with theta in [0, 1).
#[inline]
fn split_shift(shift_cells: f64) -> (i64, f64) {
    let s = shift_cells.floor();
    (s as i64, shift_cells - s)
}

#[inline]
fn wrap(k: i64, n: i64) -> usize {
    k.rem_euclid(n) as usize
}

#[inline]
fn clamp_index(k: i64, n: i64) -> usize {
    k.clamp(0, n - 1) as usize
}

/// Conservative semi-Lagrangian step of cell averages `u` by speed `a` over
/// `dt`: differences of the reconstructed primitive at backward-traced cell
/// faces. Returns the number of clamped feet (Neumann lines only).
pub fn csl_advect_into(u: &[f64], bc: LineBc, a: f64, dt: f64, dx: f64, out: &mut [f64]) -> usize {
    let n = u.len();
    assert_eq!(out.len(), n);
    assert!(n >= 6, "line too short for the six-point stencil");
    let ni = n as i64;
    let (s, theta) = split_shift(a * dt / dx);

    if theta == 0.0 {
        // pure integer shift: exact index arithmetic
        let mut clamped = 0;
        for i in 0..ni {
            let src = i - s;
            out[i as usize] = match bc {
                LineBc::Periodic => u[wrap(src, ni)],
                LineBc::NeumannClamp => {
                    if src < 0 || src >= ni {
                        clamped += 1;
                    }
                    u[clamp_index(src, ni)]
                }
            };
        }
        return clamped;
    }

    // primitive at physical faces 0..=n, anchored at the left face
    let mut primitive = vec![0.0; n + 1];
    for i in 0..n {
        primitive[i + 1] = primitive[i] + dx * u[i];
    }
    let mass = primitive[n];

    // primitive at an arbitrary extended face index
    let prim_ext = |k: i64| -> f64 {
        match bc {
            LineBc::Periodic => {
                let q = k.div_euclid(ni);
                primitive[wrap(k, ni)] + q as f64 * mass
            }
            LineBc::NeumannClamp => {
                if k < 0 {
                    primitive[0] + k as f64 * dx * u[0]
                } else if k > ni {
                    primitive[n] + (k - ni) as f64 * dx * u[n - 1]
                } else {
                    primitive[k as usize]
                }
            }
        }
    };

    // the back of face k sits inside cell k - s - 1, at offset 1 - theta
    // from that cell's left face; the offset is the same for every k
    let eval = FbmEval::new(1.0 - theta);
    let mut recon = vec![0.0; n + 1];
    let mut clamped = 0usize;
    let faces_to_build = if bc == LineBc::Periodic { n } else { n + 1 };
    let mut window = [0.0f64; 6];
    for k in 0..faces_to_build as i64 {
        let cell = k - s - 1;
        for (m, w) in window.iter_mut().enumerate() {
            *w = prim_ext(cell - 2 + m as i64);
        }
        recon[k as usize] = eval.eval(&window);
        if bc == LineBc::NeumannClamp {
            let back = k as f64 - s as f64 - theta;
            if back < 0.0 || back > n as f64 {
                clamped += 1;
            }
        }
    }
    if bc == LineBc::Periodic {
        // periodicity of the reconstruction: exact mass telescoping
        recon[n] = recon[0] + mass;
    }

    for i in 0..n {
        out[i] = (recon[i + 1] - recon[i]) / dx;
    }
    clamped
}

/// Direct (non-conservative) semi-Lagrangian step of point values: WENO
/// interpolation at the backward-traced foot of each node.
pub fn dsl_advect_into(u: &[f64], bc: LineBc, a: f64, dt: f64, dx: f64, out: &mut [f64]) -> usize {
    let n = u.len();
    assert_eq!(out.len(), n);
    assert!(n >= 6, "line too short for the six-point stencil");
    let ni = n as i64;
    let (s, theta) = split_shift(a * dt / dx);

    if theta == 0.0 {
        let mut clamped = 0;
        for i in 0..ni {
            let src = i - s;
            out[i as usize] = match bc {
                LineBc::Periodic => u[wrap(src, ni)],
                LineBc::NeumannClamp => {
                    if src < 0 || src >= ni {
                        clamped += 1;
                    }
                    u[clamp_index(src, ni)]
                }
            };
        }
        return clamped;
    }

    // foot of node i is node (i - s - 1) plus fractional offset 1 - theta
    let eval = PointEval::new(1.0 - theta);
    let mut clamped = 0usize;
    let mut stencil = [0.0f64; 6];
    for i in 0..ni {
        let base = i - s - 1;
        match bc {
            LineBc::Periodic => {
                for (m, v) in stencil.iter_mut().enumerate() {
                    *v = u[wrap(base - 2 + m as i64, ni)];
                }
            }
            LineBc::NeumannClamp => {
                let foot = i as f64 - s as f64 - theta;
                if foot < 0.0 || foot > (ni - 1) as f64 {
                    clamped += 1;
                }
                for (m, v) in stencil.iter_mut().enumerate() {
                    *v = u[clamp_index(base - 2 + m as i64, ni)];
                }
            }
        }
        out[i as usize] = eval.eval(&stencil);
    }
    clamped
}

/// Allocating wrapper for [`csl_advect_into`].
pub fn csl_advect(line: &LineBuffer, a: f64, dt: f64) -> (LineBuffer, usize) {
    let mut out = line.clone();
    let clamped = csl_advect_into(&line.values, line.bc, a, dt, line.dx, &mut out.values);
    (out, clamped)
}

/// Allocating wrapper for [`dsl_advect_into`].
pub fn dsl_advect(line: &LineBuffer, a: f64, dt: f64) -> (LineBuffer, usize) {
    let mut out = line.clone();
    let clamped = dsl_advect_into(&line.values, line.bc, a, dt, line.dx, &mut out.values);
    (out, clamped)
}
