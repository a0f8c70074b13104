//! Field solvers: spectral Poisson solve, Yee leap-frog Maxwell stepping,
//! the node-collocated Maxwell right-hand side for the RK coupling, and
//! ponderomotive zero-averaging.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{QrvmError, Result};
use crate::init::{pump_fields, PhysicalParams};

/// Staggering layout of the electromagnetic triplet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Staggering {
    /// All three fields on nodes, sharing one time tag (RK coupling).
    RkNodal,
    /// Yee layout: A and B tagged together (B on faces x_{i+1/2}),
    /// E_perp on nodes half a step apart.
    LeapFrog,
}

/// The electromagnetic triplet (A, B, E_perp) with staggering metadata.
#[derive(Debug, Clone)]
pub struct EmState {
    pub a: Vec<f64>,
    /// LF: face values B_{i+1/2} stored at index i; RK: node values.
    pub b: Vec<f64>,
    pub e_perp: Vec<f64>,
    pub staggering: Staggering,
    /// Time of a and b.
    pub t_ab: f64,
    /// Time of e_perp (= t_ab in RK mode, t_ab + dt/2 in LF mode).
    pub t_e: f64,
}

impl EmState {
    /// Node-collocated initial pump state (RK coupling).
    pub fn pump_rk(n_x: usize, t: f64, params: &PhysicalParams) -> Self {
        let dx = 1.0 / n_x as f64;
        let mut a = vec![0.0; n_x];
        let mut b = vec![0.0; n_x];
        let mut e = vec![0.0; n_x];
        for i in 0..n_x {
            let (ai, bi, ei) = pump_fields(t, i as f64 * dx, params);
            a[i] = ai;
            b[i] = bi;
            e[i] = ei;
        }
        EmState {
            a,
            b,
            e_perp: e,
            staggering: Staggering::RkNodal,
            t_ab: t,
            t_e: t,
        }
    }

    /// Staggered initial pump state: A(t_ab, x_i), B(t_ab, x_{i+1/2}),
    /// E_perp(t_ab + dt/2, x_i).
    pub fn pump_lf(n_x: usize, t_ab: f64, dt: f64, params: &PhysicalParams) -> Self {
        let dx = 1.0 / n_x as f64;
        let mut a = vec![0.0; n_x];
        let mut b = vec![0.0; n_x];
        let mut e = vec![0.0; n_x];
        for i in 0..n_x {
            let x = i as f64 * dx;
            a[i] = pump_fields(t_ab, x, params).0;
            b[i] = pump_fields(t_ab, x + 0.5 * dx, params).1;
            e[i] = pump_fields(t_ab + 0.5 * dt, x, params).2;
        }
        EmState {
            a,
            b,
            e_perp: e,
            staggering: Staggering::LeapFrog,
            t_ab,
            t_e: t_ab + 0.5 * dt,
        }
    }

    /// B collocated to nodes: face average in LF mode, clone in RK mode.
    pub fn b_at_nodes(&self) -> Vec<f64> {
        match self.staggering {
            Staggering::RkNodal => self.b.clone(),
            Staggering::LeapFrog => {
                let n = self.b.len();
                let mut out = vec![0.0; n];
                for i in 0..n {
                    let left = self.b[(i + n - 1) % n];
                    out[i] = 0.5 * (left + self.b[i]);
                }
                out
            }
        }
    }
}

/// Electrostatic pair: charge density and longitudinal field.
#[derive(Debug, Clone)]
pub struct ElectroStatics {
    pub rho: Vec<f64>,
    pub e_long: Vec<f64>,
    /// Neutralizing immobile ion background (uniformly 1).
    pub rho_ext: Vec<f64>,
}

/// Periodic spectral solver for dE/dx = eta^-2 (rho_ext - rho).
///
/// The k = 0 mode of E is set to zero (zero-mean gauge); the mean of the
/// right-hand side is removed before solving, with a warning when it exceeds
/// 1e-8 (a non-neutral plasma makes the periodic problem ill-posed).
pub struct PoissonSolver {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
}

impl PoissonSolver {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        PoissonSolver {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            buf: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Solves for the unique zero-mean periodic E. Returns the removed
    /// right-hand-side mean alongside.
    pub fn solve_into(
        &mut self,
        rho: &[f64],
        rho_ext: &[f64],
        eta: f64,
        dx: f64,
        e_out: &mut [f64],
    ) -> Result<f64> {
        let n = self.n;
        assert_eq!(rho.len(), n);
        assert_eq!(rho_ext.len(), n);
        assert_eq!(e_out.len(), n);
        let eta_inv2 = eta.powi(-2);
        for i in 0..n {
            let r = eta_inv2 * (rho_ext[i] - rho[i]);
            if !r.is_finite() {
                return Err(QrvmError::InvalidParams(format!(
                    "non-finite Poisson right-hand side at node {i}"
                )));
            }
            self.buf[i] = Complex64::new(r, 0.0);
        }
        self.fwd.process(&mut self.buf);

        let length = n as f64 * dx;
        let mean = self.buf[0].re / n as f64;
        if mean.abs() > 1e-8 {
            log::warn!("Poisson right-hand side has nonzero mean {mean:.3e}; removed");
        }
        self.buf[0] = Complex64::new(0.0, 0.0);
        for m in 1..n {
            let k_signed = if m <= n / 2 { m as isize } else { m as isize - n as isize };
            if n % 2 == 0 && m == n / 2 {
                // unpaired Nyquist mode of the antiderivative: drop it
                self.buf[m] = Complex64::new(0.0, 0.0);
                continue;
            }
            let k = 2.0 * std::f64::consts::PI * k_signed as f64 / length;
            // divide by i k
            self.buf[m] = self.buf[m] / Complex64::new(0.0, k);
        }
        self.inv.process(&mut self.buf);
        let scale = 1.0 / n as f64;
        for i in 0..n {
            e_out[i] = self.buf[i].re * scale;
        }
        Ok(mean)
    }
}

/// One-shot solve (tests and small callers).
pub fn solve_poisson(rho: &[f64], rho_ext: &[f64], eta: f64, dx: f64) -> Result<Vec<f64>> {
    let mut solver = PoissonSolver::new(rho.len());
    let mut e = vec![0.0; rho.len()];
    solver.solve_into(rho, rho_ext, eta, dx, &mut e)?;
    Ok(e)
}

/// One Yee leap-frog step: (A^n, B^n, E^{n+1/2}) -> (A^{n+1}, B^{n+1},
/// E^{n+3/2}), with rho_next the density at the time of the updated A.
pub fn yee_step(em: &EmState, rho_next: &[f64], dt: f64, dx: f64, eta: f64) -> Result<EmState> {
    if em.staggering != Staggering::LeapFrog {
        return Err(QrvmError::SchemeMismatch(
            "yee_step requires a leap-frog staggered state".into(),
        ));
    }
    let half = 0.5 * dt;
    if (em.t_e - em.t_ab - half).abs() > 1e-9 * dt.max(1e-300) {
        return Err(QrvmError::SchemeMismatch(format!(
            "yee_step time tags inconsistent: t_ab = {}, t_e = {}, dt = {dt}",
            em.t_ab, em.t_e
        )));
    }
    let n = em.a.len();
    assert_eq!(rho_next.len(), n);
    let eta_inv2 = eta.powi(-2);
    let r = dt / dx;

    let mut a = vec![0.0; n];
    for i in 0..n {
        a[i] = em.a[i] - em.e_perp[i] * dt;
    }
    let mut b = vec![0.0; n];
    for i in 0..n {
        b[i] = em.b[i] - r * (em.e_perp[(i + 1) % n] - em.e_perp[i]);
    }
    let mut e = vec![0.0; n];
    for i in 0..n {
        let b_left = b[(i + n - 1) % n];
        e[i] = em.e_perp[i] + eta_inv2 * a[i] * rho_next[i] * dt - r * (b[i] - b_left);
    }
    Ok(EmState {
        a,
        b,
        e_perp: e,
        staggering: Staggering::LeapFrog,
        t_ab: em.t_ab + dt,
        t_e: em.t_e + dt,
    })
}

/// Fourth-order centered periodic first derivative.
pub fn d4x_periodic(u: &[f64], dx: f64, out: &mut [f64]) {
    let n = u.len();
    assert_eq!(out.len(), n);
    let c = 1.0 / (12.0 * dx);
    for i in 0..n {
        let m2 = u[(i + n - 2) % n];
        let m1 = u[(i + n - 1) % n];
        let p1 = u[(i + 1) % n];
        let p2 = u[(i + 2) % n];
        out[i] = c * (m2 - 8.0 * m1 + 8.0 * p1 - p2);
    }
}

/// Semi-discrete Maxwell right-hand side on node-collocated fields:
/// dA/dt = -E_perp, dB/dt = -dE_perp/dx, dE_perp/dt = eta^-2 A rho - dB/dx.
pub fn maxwell_rhs(
    a: &[f64],
    b: &[f64],
    e_perp: &[f64],
    rho: &[f64],
    eta: f64,
    dx: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = a.len();
    let eta_inv2 = eta.powi(-2);
    let mut da = vec![0.0; n];
    for i in 0..n {
        da[i] = -e_perp[i];
    }
    let mut db = vec![0.0; n];
    d4x_periodic(e_perp, dx, &mut db);
    for v in db.iter_mut() {
        *v = -*v;
    }
    let mut de = vec![0.0; n];
    d4x_periodic(b, dx, &mut de);
    for i in 0..n {
        de[i] = eta_inv2 * a[i] * rho[i] - de[i];
    }
    (da, db, de)
}

/// Subtracts the arithmetic mean in place; the result has zero average.
pub fn zero_average(values: &mut [f64]) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    for v in values.iter_mut() {
        *v -= mean;
    }
}

/// Zero-averaged ponderomotive product A*B on nodes.
pub fn zero_average_ponderomotive(f_pond: &[f64]) -> Vec<f64> {
    let mut out = f_pond.to_vec();
    zero_average(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::init::default_params;
    use crate::test_util::Xorshift;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn poisson_neutral_plasma_gives_zero_field() {
        let n = 64;
        let rho = vec![1.0; n];
        let e = solve_poisson(&rho, &vec![1.0; n], 0.1, 1.0 / n as f64).unwrap();
        for v in e {
            assert!(v.abs() <= 1e-14);
        }
    }

    #[test]
    fn poisson_cosine_mode_analytic() {
        let n = 128;
        let dx = 1.0 / n as f64;
        let eta = default_params().eta;
        for k in [1usize, 3, 7] {
            // rho_ext - rho = cos(2 pi k x)  =>  E = eta^-2 sin(2 pi k x)/(2 pi k)
            let rho: Vec<f64> =
                (0..n).map(|i| 1.0 - (2.0 * PI * k as f64 * i as f64 * dx).cos()).collect();
            let e = solve_poisson(&rho, &vec![1.0; n], eta, dx).unwrap();
            for i in 0..n {
                let x = i as f64 * dx;
                let expect = eta.powi(-2) * (2.0 * PI * k as f64 * x).sin() / (2.0 * PI * k as f64);
                assert!((e[i] - expect).abs() <= 1e-12 * eta.powi(-2), "mode {k} node {i}");
            }
        }
    }

    #[test]
    fn poisson_removes_rhs_mean() {
        let n = 64;
        let dx = 1.0 / n as f64;
        let rho: Vec<f64> =
            (0..n).map(|i| 1.0 - 0.3 * (2.0 * PI * i as f64 * dx).cos()).collect();
        let e_neutral = solve_poisson(&rho, &vec![1.0; n], 0.2, dx).unwrap();
        // shift rho by a constant: same solution after mean removal
        let rho_shifted: Vec<f64> = rho.iter().map(|r| r + 0.05).collect();
        let mut solver = PoissonSolver::new(n);
        let mut e = vec![0.0; n];
        let mean = solver.solve_into(&rho_shifted, &vec![1.0; n], 0.2, dx, &mut e).unwrap();
        assert_relative_eq!(mean, -0.05 * 0.2f64.powi(-2), max_relative = 1e-12);
        for i in 0..n {
            assert!((e[i] - e_neutral[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn poisson_output_has_zero_mean() {
        let n = 96;
        let mut rng = Xorshift::new(11);
        let rho: Vec<f64> = (0..n).map(|_| 1.0 + rng.uniform(-0.2, 0.2)).collect();
        let e = solve_poisson(&rho, &vec![1.0; n], 0.1, 1.0 / n as f64).unwrap();
        let mean = e.iter().sum::<f64>() / n as f64;
        let max = e.iter().cloned().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(mean.abs() <= 1e-14 * max.max(1e-300));
    }

    #[test]
    fn poisson_shift_equivariance() {
        let n = 64;
        let dx = 1.0 / n as f64;
        let mut rng = Xorshift::new(99);
        let rho: Vec<f64> = (0..n).map(|_| 1.0 + rng.uniform(-0.1, 0.1)).collect();
        let e = solve_poisson(&rho, &vec![1.0; n], 0.15, dx).unwrap();
        let rho_rolled: Vec<f64> = (0..n).map(|i| rho[(i + n - 1) % n]).collect();
        let e_rolled = solve_poisson(&rho_rolled, &vec![1.0; n], 0.15, dx).unwrap();
        for i in 0..n {
            assert!((e_rolled[(i + 1) % n] - e[i]).abs() <= 1e-12);
        }
    }

    fn lf_state(n: usize, dt: f64) -> EmState {
        EmState {
            a: vec![0.0; n],
            b: vec![0.0; n],
            e_perp: vec![0.0; n],
            staggering: Staggering::LeapFrog,
            t_ab: 0.0,
            t_e: 0.5 * dt,
        }
    }

    #[test]
    fn yee_zero_state_is_fixed_point() {
        let n = 32;
        let dt = 0.01;
        let em = lf_state(n, dt);
        let rho: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * i as f64).collect();
        let out = yee_step(&em, &rho, dt, 1.0 / n as f64, 0.1).unwrap();
        assert!(out.a.iter().all(|&v| v == 0.0));
        assert!(out.b.iter().all(|&v| v == 0.0));
        assert!(out.e_perp.iter().all(|&v| v == 0.0));
        assert_eq!(out.t_ab, dt);
    }

    #[test]
    fn yee_constant_e_decreases_a_uniformly() {
        let n = 16;
        let dt = 0.02;
        let mut em = lf_state(n, dt);
        em.e_perp = vec![0.7; n];
        let out = yee_step(&em, &vec![0.0; n], dt, 1.0 / n as f64, 0.1).unwrap();
        for i in 0..n {
            assert_relative_eq!(out.a[i], -0.7 * dt, max_relative = 1e-15);
            assert_eq!(out.b[i], 0.0);
            assert_eq!(out.e_perp[i], 0.7);
        }
    }

    #[test]
    fn yee_rejects_mis_tagged_state() {
        let n = 16;
        let mut em = lf_state(n, 0.01);
        em.t_e = 0.3; // not t_ab + dt/2
        assert!(yee_step(&em, &vec![0.0; n], 0.01, 1.0 / n as f64, 0.1).is_err());
        let mut rk = em.clone();
        rk.staggering = Staggering::RkNodal;
        rk.t_e = rk.t_ab;
        assert!(yee_step(&rk, &vec![0.0; n], 0.01, 1.0 / n as f64, 0.1).is_err());
    }

    #[test]
    fn yee_is_linear_in_fields() {
        let n = 48;
        let dx = 1.0 / n as f64;
        let dt = 0.5 * dx;
        let eta = 0.1;
        let mut rng = Xorshift::new(7);
        let rho: Vec<f64> = (0..n).map(|_| 1.0 + rng.uniform(-0.3, 0.3)).collect();
        let mut em1 = lf_state(n, dt);
        let mut em2 = lf_state(n, dt);
        for i in 0..n {
            em1.a[i] = rng.uniform(-1.0, 1.0);
            em1.b[i] = rng.uniform(-1.0, 1.0);
            em1.e_perp[i] = rng.uniform(-1.0, 1.0);
            em2.a[i] = rng.uniform(-1.0, 1.0);
            em2.b[i] = rng.uniform(-1.0, 1.0);
            em2.e_perp[i] = rng.uniform(-1.0, 1.0);
        }
        let mut sum = lf_state(n, dt);
        for i in 0..n {
            sum.a[i] = em1.a[i] + em2.a[i];
            sum.b[i] = em1.b[i] + em2.b[i];
            sum.e_perp[i] = em1.e_perp[i] + em2.e_perp[i];
        }
        let o1 = yee_step(&em1, &rho, dt, dx, eta).unwrap();
        let o2 = yee_step(&em2, &rho, dt, dx, eta).unwrap();
        let os = yee_step(&sum, &rho, dt, dx, eta).unwrap();
        for i in 0..n {
            assert!((os.a[i] - o1.a[i] - o2.a[i]).abs() <= 1e-13);
            assert!((os.b[i] - o1.b[i] - o2.b[i]).abs() <= 1e-13);
            assert!((os.e_perp[i] - o1.e_perp[i] - o2.e_perp[i]).abs() <= 1e-13);
        }
    }

    #[test]
    fn yee_vacuum_wave_energy_and_dispersion() {
        // vacuum plane wave initialized as a discrete eigenmode; the phase
        // advance per step follows the Yee dispersion relation
        let n = 256;
        let dx = 1.0 / n as f64;
        let dt = 0.5 * dx;
        let k = 3.0;
        let kk = 2.0 * PI * k;
        // omega from sin(w dt / 2) = (dt/dx) sin(k dx / 2)
        let omega = 2.0 / dt * ((dt / dx) * (kk * dx / 2.0).sin()).asin();

        let mut em = lf_state(n, dt);
        for i in 0..n {
            let x = i as f64 * dx;
            em.b[i] = (kk * (x + 0.5 * dx)).cos();
            em.e_perp[i] = (kk * x - omega * 0.5 * dt).cos();
        }
        let eta = default_params().eta;
        let energy = |em: &EmState| -> f64 {
            let e2: f64 = em.e_perp.iter().map(|v| v * v).sum();
            let b2: f64 = em.b.iter().map(|v| v * v).sum();
            eta * eta / 2.0 * (e2 + b2) * dx
        };
        let w0 = energy(&em);
        let rho = vec![0.0; n];
        let steps = 100;
        for _ in 0..steps {
            em = yee_step(&em, &rho, dt, dx, eta).unwrap();
            let w = energy(&em);
            assert!((w - w0).abs() / w0 <= 0.01, "energy drifted: {w} vs {w0}");
        }
        // observed phase of mode k in e_perp after `steps` steps
        let mut re = 0.0;
        let mut im = 0.0;
        for i in 0..n {
            let x = i as f64 * dx;
            re += em.e_perp[i] * (kk * x).cos();
            im += em.e_perp[i] * (kk * x).sin();
        }
        let phase = f64::atan2(im, re); // e_perp ~ cos(kk x - phi)
        let expected_phase = (omega * (steps as f64 * dt + 0.5 * dt)).rem_euclid(2.0 * PI);
        let mut diff = (phase - expected_phase).abs();
        while diff > PI {
            diff = (diff - 2.0 * PI).abs();
        }
        let rel = diff / (omega * steps as f64 * dt);
        assert!(rel <= 1e-3, "dispersion mismatch: {rel}");
    }

    #[test]
    fn maxwell_rhs_zero_derivative_cases() {
        let n = 32;
        let a: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let rho: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * (i as f64).cos()).collect();
        let eta = 0.3;
        let (da, db, de) = maxwell_rhs(&a, &vec![0.0; n], &vec![0.0; n], &rho, eta, 1.0 / n as f64);
        for i in 0..n {
            assert_eq!(da[i], 0.0);
            assert_eq!(db[i], 0.0);
            assert_relative_eq!(de[i], eta.powi(-2) * a[i] * rho[i], max_relative = 1e-15);
        }
    }

    #[test]
    fn maxwell_rhs_fourth_order_derivative() {
        let mut errs = Vec::new();
        for &n in &[32usize, 64, 128] {
            let dx = 1.0 / n as f64;
            let e: Vec<f64> = (0..n).map(|i| (2.0 * PI * i as f64 * dx).sin()).collect();
            let (_, db, _) =
                maxwell_rhs(&vec![0.0; n], &vec![0.0; n], &e, &vec![0.0; n], 0.1, dx);
            let mut err = 0.0f64;
            for i in 0..n {
                let x = i as f64 * dx;
                err = err.max((db[i] + 2.0 * PI * (2.0 * PI * x).cos()).abs());
            }
            errs.push(err);
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 3.7, "D_x order {order} ({errs:?})");
        }
    }

    #[test]
    fn maxwell_rhs_consistent_on_plane_wave() {
        // wave with the dispersion of the continuous system (rho = 1):
        // omega^2 = eta^-2 + (2 pi k)^2; the semi-discrete residual against
        // the analytic time derivatives vanishes at fourth order in dx
        let eta = default_params().eta;
        let k = 2.0;
        let kk = 2.0 * PI * k;
        let omega = (eta.powi(-2) + kk * kk).sqrt();
        let t = 0.31;
        let mut errs = Vec::new();
        for &n in &[64usize, 128, 256] {
            let dx = 1.0 / n as f64;
            let mut a = vec![0.0; n];
            let mut b = vec![0.0; n];
            let mut e = vec![0.0; n];
            for i in 0..n {
                let ph = kk * i as f64 * dx - omega * t;
                a[i] = ph.sin();
                b[i] = kk * ph.cos();
                e[i] = omega * ph.cos();
            }
            let rho = vec![1.0; n];
            let (da, db, de) = maxwell_rhs(&a, &b, &e, &rho, eta, dx);
            let mut err = 0.0f64;
            for i in 0..n {
                let ph = kk * i as f64 * dx - omega * t;
                // analytic: dA/dt = -omega cos, dB/dt = kk omega sin,
                // dE/dt = omega^2 sin
                err = err.max((da[i] + omega * ph.cos()).abs());
                err = err.max((db[i] - kk * omega * ph.sin()).abs());
                err = err.max((de[i] - omega * omega * ph.sin()).abs());
            }
            errs.push(err);
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 3.7, "residual order {order} ({errs:?})");
        }
    }

    #[test]
    fn zero_average_basics() {
        // constant array maps to zero up to one rounding of the mean
        let mut c = vec![4.2; 17];
        zero_average(&mut c);
        assert!(c.iter().all(|&v| v.abs() <= 1e-15));

        let mut rng = Xorshift::new(5);
        let mut v: Vec<f64> = (0..33).map(|_| rng.uniform(-2.0, 2.0)).collect();
        zero_average(&mut v);
        let mean = v.iter().sum::<f64>() / 33.0;
        assert!(mean.abs() <= 1e-15);
        // idempotent up to roundoff
        let w = zero_average_ponderomotive(&v);
        for i in 0..33 {
            assert!((w[i] - v[i]).abs() <= 1e-15);
        }
    }

    #[test]
    fn zero_average_pump_product() {
        let p = default_params();
        let n = 128;
        let dx = 1.0 / n as f64;
        let prod: Vec<f64> = (0..n)
            .map(|i| {
                let (a, b, _) = pump_fields(0.0, i as f64 * dx, &p);
                a * b
            })
            .collect();
        let out = zero_average_ponderomotive(&prod);
        let mean = out.iter().sum::<f64>() / n as f64;
        assert!(mean.abs() <= 1e-16);
        let removed = prod[0] - out[0];
        for i in 1..n {
            assert_relative_eq!(prod[i] - out[i], removed, epsilon = 1e-12);
        }
    }
}
