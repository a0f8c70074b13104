//! Initial conditions: two-temperature Maxwellian with a density
//! fluctuation, and the analytic pump wave.

use std::f64::consts::PI;

use crate::error::{QrvmError, Result};
use crate::grid::{DistributionField, PhaseGrid};

/// Physical constants of the dimensionless system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub eta: f64,
    pub k_pump: i32,
    pub k_pla: i32,
    pub omega0: f64,
    pub a0: f64,
    /// Hot-electron fraction, in [0, 1].
    pub alpha: f64,
    pub v_cold: f64,
    pub v_hot: f64,
    /// Density-fluctuation amplitude.
    pub epsilon: f64,
    pub p_max: f64,
}

/// Reference parameter set of the dimensionless system.
pub fn default_params() -> PhysicalParams {
    let eta = 3.0 / (10.0 * PI);
    let k_pump = 4;
    let omega0 = (eta.powi(-2) + (k_pump * k_pump) as f64).sqrt();
    PhysicalParams {
        eta,
        k_pump,
        k_pla: 2,
        omega0,
        a0: 2.5 / omega0,
        alpha: 0.05,
        v_cold: (15.0 / 511.0_f64).sqrt(),
        v_hot: (100.0 / 511.0_f64).sqrt(),
        epsilon: 2.0_f64.sqrt() / 10.0,
        p_max: 8.0,
    }
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha <= 1.0) {
            return Err(QrvmError::InvalidParams(format!("alpha = {} outside [0, 1]", self.alpha)));
        }
        for (name, v) in [
            ("eta", self.eta),
            ("v_cold", self.v_cold),
            ("v_hot", self.v_hot),
            ("p_max", self.p_max),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(QrvmError::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// omega0 consistent with eta and k_pump.
    pub fn derived_omega0(&self) -> f64 {
        (self.eta.powi(-2) + (self.k_pump * self.k_pump) as f64).sqrt()
    }
}

/// Quadrature domain and resolution for the Juttner normalization.
/// The integrand decays like exp(-|p|/v_hot^2); at |p| = 64 it is far below
/// the f64 underflow threshold, so the domain truncation is immaterial.
const JUTTNER_DOMAIN: f64 = 64.0;
const JUTTNER_POINTS: usize = 1 << 18;

fn juttner_unnormalized(p: f64, v_hot: f64) -> f64 {
    (-(((1.0 + p * p).sqrt()) - 1.0) / (v_hot * v_hot)).exp()
}

/// Composite midpoint quadrature of the Juttner integral over [-64, 64].
pub fn juttner_normalization(v_hot: f64) -> f64 {
    let h = 2.0 * JUTTNER_DOMAIN / JUTTNER_POINTS as f64;
    let mut sum = 0.0;
    for k in 0..JUTTNER_POINTS {
        let p = -JUTTNER_DOMAIN + (k as f64 + 0.5) * h;
        sum += juttner_unnormalized(p, v_hot);
    }
    sum * h
}

/// Two-temperature Maxwellian G(p) with the Juttner normalization
/// precomputed once.
#[derive(Debug, Clone)]
pub struct Maxwellian {
    alpha: f64,
    v_cold: f64,
    v_hot: f64,
    juttner_norm: f64,
}

impl Maxwellian {
    pub fn new(params: &PhysicalParams) -> Self {
        Maxwellian {
            alpha: params.alpha,
            v_cold: params.v_cold,
            v_hot: params.v_hot,
            juttner_norm: juttner_normalization(params.v_hot),
        }
    }

    /// Normalized classical Gaussian of width v_cold.
    #[inline]
    pub fn g_cold(&self, p: f64) -> f64 {
        (-p * p / (2.0 * self.v_cold * self.v_cold)).exp() / ((2.0 * PI).sqrt() * self.v_cold)
    }

    /// Normalized Juttner distribution.
    #[inline]
    pub fn g_hot(&self, p: f64) -> f64 {
        juttner_unnormalized(p, self.v_hot) / self.juttner_norm
    }

    /// G(p) = (1 - alpha) G_cold(p) + alpha G_hot(p).
    #[inline]
    pub fn eval(&self, p: f64) -> f64 {
        (1.0 - self.alpha) * self.g_cold(p) + self.alpha * self.g_hot(p)
    }
}

/// Initial density rho(0, x) = 1 + amplitude * cos(2 pi k_pla x).
pub fn initial_density(x: f64, params: &PhysicalParams) -> f64 {
    1.0 + initial_density_amplitude(params) * (2.0 * PI * params.k_pla as f64 * x).cos()
}

/// Amplitude of the initial density fluctuation.
pub fn initial_density_amplitude(params: &PhysicalParams) -> f64 {
    let kt = 0.6 * params.k_pla as f64;
    params.epsilon * params.v_cold * kt / (1.0 + 3.0 * params.v_cold * params.v_cold * kt * kt).sqrt()
}

/// f(0, x, p) = rho(0, x) * G(p - eps v_cold cos(2 pi k_pla x)), ghosts filled.
pub fn init_distribution(grid: &PhaseGrid, params: &PhysicalParams) -> DistributionField {
    let maxwellian = Maxwellian::new(params);
    let mut f = DistributionField::zeros(*grid);
    for i in 0..grid.n_x {
        let x = grid.x_node(i);
        let rho = initial_density(x, params);
        let shift = params.epsilon * params.v_cold * (2.0 * PI * params.k_pla as f64 * x).cos();
        for j in 0..grid.n_p {
            let p = grid.p_node(j);
            f.set(i as isize, j as isize, rho * maxwellian.eval(p - shift));
        }
    }
    f.fill_ghosts();
    f
}

/// Analytic pump wave (A, B, E_perp) at (t, x).
pub fn pump_fields(t: f64, x: f64, params: &PhysicalParams) -> (f64, f64, f64) {
    let phase = 2.0 * PI * params.k_pump as f64 * x - params.omega0 * t;
    let a = params.a0 * phase.sin();
    let b = 2.0 * PI * params.a0 * params.k_pump as f64 * phase.cos();
    let e_perp = params.a0 * params.omega0 * phase.cos();
    (a, b, e_perp)
}
