//! The four scheme couplings: full-step drivers advancing the coupled
//! state (f, A, B, E_perp, E) in time.
//!
//! * RK-FDWENO-RK: one TVD-RK3 integrator over the whole coupled vector;
//!   Vlasov derivatives by flux-split WENO5, Maxwell by fourth-order
//!   centered differences, density by midpoint quadrature, E by the
//!   spectral Poisson solve at every stage.
//! * RK-FDWENO-LF: TVD-RK3 for Vlasov only; the Yee step advances the
//!   fields once per step using the density predicted by the first stage,
//!   and stage fields at t + dt/2 come from linear interpolation in time.
//! * TS-DSLWENO-LF / TS-CSLWENO-LF: Strang splitting (half x-advection,
//!   full p-advection, half x-advection) with the force frozen at the
//!   prediction time t + dt/2, where the densities are computed after the
//!   first half-advection; the Yee step sits between the half-advections so
//!   the half-level fields exist when the force is assembled.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::advection::{csl_advect_into, dsl_advect_into, LineBc};
use crate::diagnostics::{compute_record, density, DiagnosticsRecord};
use crate::error::{QrvmError, Result};
use crate::fields::{
    maxwell_rhs, yee_step, zero_average, ElectroStatics, EmState, PoissonSolver, Staggering,
};
use crate::grid::{DistributionField, PhaseGrid};
use crate::init::{init_distribution, PhysicalParams};
use crate::weno::fdweno5_flux_derivative_into;

/// The closed set of scheme couplings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    RkFdwenoRk,
    RkFdwenoLf,
    TsDslwenoLf,
    TsCslwenoLf,
}

impl Scheme {
    pub fn parse(s: &str) -> Option<Scheme> {
        match s {
            "rk-fdweno-rk" => Some(Scheme::RkFdwenoRk),
            "rk-fdweno-lf" => Some(Scheme::RkFdwenoLf),
            "ts-dslweno-lf" => Some(Scheme::TsDslwenoLf),
            "ts-cslweno-lf" => Some(Scheme::TsCslwenoLf),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::RkFdwenoRk => "rk-fdweno-rk",
            Scheme::RkFdwenoLf => "rk-fdweno-lf",
            Scheme::TsDslwenoLf => "ts-dslweno-lf",
            Scheme::TsCslwenoLf => "ts-cslweno-lf",
        }
    }

    /// Only the fully explicit coupling is driven by a CFL number; the
    /// leap-frog couplings run at a fixed step.
    pub fn uses_cfl(&self) -> bool {
        matches!(self, Scheme::RkFdwenoRk)
    }

    pub fn all() -> [Scheme; 4] {
        [Scheme::RkFdwenoRk, Scheme::RkFdwenoLf, Scheme::TsDslwenoLf, Scheme::TsCslwenoLf]
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Semi-Lagrangian kernel used inside the Strang stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VlasovKernel {
    Csl,
    Dsl,
}

/// Lorentz force F = -(E + A B) on x-nodes at a given time.
#[derive(Debug, Clone)]
pub struct ForceField {
    pub values: Vec<f64>,
    pub time: f64,
}

/// Assembles F = -(E + AB) with the ponderomotive product zero-averaged.
pub fn assemble_force(e_long: &[f64], a: &[f64], b_nodal: &[f64], time: f64) -> ForceField {
    let n = e_long.len();
    let mut pond = vec![0.0; n];
    for i in 0..n {
        pond[i] = a[i] * b_nodal[i];
    }
    zero_average(&mut pond);
    let mut values = vec![0.0; n];
    for i in 0..n {
        values[i] = -(e_long[i] + pond[i]);
    }
    ForceField { values, time }
}

/// Max |F| with a fixed reduction order.
pub fn force_max(force: &ForceField) -> f64 {
    force.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// CFL-limited time step cfl / (|v|_max/dx + |F|_max/dp); for the
/// leap-frog-coupled schemes the result is additionally capped at cfl * dx.
pub fn cfl_dt(grid: &PhaseGrid, f_max: f64, cfl: f64, lf_coupled: bool) -> Result<f64> {
    if !(cfl > 0.0 && cfl < 1.0) {
        return Err(QrvmError::InvalidParams(format!("cfl = {cfl} outside (0, 1)")));
    }
    if !(grid.dx > 0.0 && grid.dp > 0.0) {
        return Err(QrvmError::InvalidGrid("zero grid spacing".into()));
    }
    let denom = grid.v_max() / grid.dx + f_max / grid.dp;
    let mut dt = cfl / denom;
    if lf_coupled {
        dt = dt.min(cfl * grid.dx);
    }
    Ok(dt)
}

// ---------------------------------------------------------------------------
// TVD-RK3 stage arithmetic
// ---------------------------------------------------------------------------

/// State vector usable by the TVD-RK3 combinator.
pub trait RkVec: Sized {
    /// a*x + b*y
    fn comb2(a: f64, x: &Self, b: f64, y: &Self) -> Self;
    /// a*x + b*y + c*z
    fn comb3(a: f64, x: &Self, b: f64, y: &Self, c: f64, z: &Self) -> Self;
}

impl RkVec for f64 {
    fn comb2(a: f64, x: &f64, b: f64, y: &f64) -> f64 {
        a * x + b * y
    }
    fn comb3(a: f64, x: &f64, b: f64, y: &f64, c: f64, z: &f64) -> f64 {
        a * x + b * y + c * z
    }
}

impl RkVec for Vec<f64> {
    fn comb2(a: f64, x: &Vec<f64>, b: f64, y: &Vec<f64>) -> Vec<f64> {
        debug_assert_eq!(x.len(), y.len());
        x.iter().zip(y).map(|(&xi, &yi)| a * xi + b * yi).collect()
    }
    fn comb3(a: f64, x: &Vec<f64>, b: f64, y: &Vec<f64>, c: f64, z: &Vec<f64>) -> Vec<f64> {
        debug_assert_eq!(x.len(), y.len());
        debug_assert_eq!(x.len(), z.len());
        x.iter()
            .zip(y)
            .zip(z)
            .map(|((&xi, &yi), &zi)| a * xi + b * yi + c * zi)
            .collect()
    }
}

/// Third-order TVD Runge-Kutta step with stage times t, t + dt, t + dt/2:
///   y1 = y + dt L(t, y)
///   y2 = 3/4 y + 1/4 y1 + 1/4 dt L(t + dt, y1)
///   y' = 1/3 y + 2/3 y2 + 2/3 dt L(t + dt/2, y2)
pub fn tvd_rk3<S: RkVec>(y0: &S, t: f64, dt: f64, mut rhs: impl FnMut(f64, &S) -> S) -> S {
    let k0 = rhs(t, y0);
    let y1 = S::comb2(1.0, y0, dt, &k0);
    let k1 = rhs(t + dt, &y1);
    let y2 = S::comb3(0.75, y0, 0.25, &y1, 0.25 * dt, &k1);
    let k2 = rhs(t + 0.5 * dt, &y2);
    S::comb3(1.0 / 3.0, y0, 2.0 / 3.0, &y2, 2.0 / 3.0 * dt, &k2)
}

/// Coupled (f, A, B, E_perp) vector for RK-FDWENO-RK; f is the flat
/// physical region, one row per p-index.
#[derive(Clone)]
struct CoupledState {
    f: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    e: Vec<f64>,
}

impl RkVec for CoupledState {
    fn comb2(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        CoupledState {
            f: Vec::comb2(a, &x.f, b, &y.f),
            a: Vec::comb2(a, &x.a, b, &y.a),
            b: Vec::comb2(a, &x.b, b, &y.b),
            e: Vec::comb2(a, &x.e, b, &y.e),
        }
    }
    fn comb3(a: f64, x: &Self, b: f64, y: &Self, c: f64, z: &Self) -> Self {
        CoupledState {
            f: Vec::comb3(a, &x.f, b, &y.f, c, &z.f),
            a: Vec::comb3(a, &x.a, b, &y.a, c, &z.a),
            b: Vec::comb3(a, &x.b, b, &y.b, c, &z.b),
            e: Vec::comb3(a, &x.e, b, &y.e, c, &z.e),
        }
    }
}

// ---------------------------------------------------------------------------
// Shared sweep machinery
// ---------------------------------------------------------------------------

/// Density from the flat physical buffer; identical reduction order to
/// [`density`] on the field.
fn density_flat(flat: &[f64], grid: &PhaseGrid) -> Vec<f64> {
    let (n_x, n_p, dp) = (grid.n_x, grid.n_p, grid.dp);
    let mut sums = vec![0.0; n_x];
    for j in 0..n_p {
        let row = &flat[j * n_x..(j + 1) * n_x];
        for (s, &v) in sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    for s in sums.iter_mut() {
        *s *= dp;
    }
    sums
}

/// Vlasov right-hand side -v(p) df/dx - F df/dp by flux-split WENO5.
/// `field` holds the stage distribution (ghosts are refreshed here);
/// `out` receives the flat physical RHS.
fn vlasov_rhs(field: &mut DistributionField, force: &[f64], out: &mut [f64]) {
    let grid = *field.grid();
    let (n_x, n_p, g) = (grid.n_x, grid.n_p, grid.n_ghost);
    assert_eq!(out.len(), n_x * n_p);
    field.fill_ghosts();

    // x-term: -v(p_j) df/dx per p-row (rows are contiguous)
    {
        let field_ref = &*field;
        out.par_chunks_mut(n_x).enumerate().for_each(|(j, out_row)| {
            let speed = grid.v_node(j);
            fdweno5_flux_derivative_into(field_ref.row(j), g, speed, grid.dx, out_row);
            for v in out_row.iter_mut() {
                *v = -*v;
            }
        });
    }

    // p-term: -F_i df/dp per x-column, via a transposed scratch
    let stride = field.stride();
    let values = field.values();
    let mut tmp = vec![0.0; n_x * n_p];
    tmp.par_chunks_mut(n_p).enumerate().for_each(|(i, dcol)| {
        let speed = force[i];
        let mut col = vec![0.0; n_p + 2 * g];
        for (k, c) in col.iter_mut().enumerate() {
            *c = values[k * stride + g + i];
        }
        fdweno5_flux_derivative_into(&col, g, speed, grid.dp, dcol);
    });
    out.par_chunks_mut(n_x).enumerate().for_each(|(j, out_row)| {
        for (i, v) in out_row.iter_mut().enumerate() {
            *v -= tmp[i * n_p + j];
        }
    });
}

/// Linear interpolation (or one-sided extrapolation) in time between two
/// tagged arrays; the single code path shared by stage forces and
/// diagnostics synchronization.
pub fn lerp_in_time(v0: &[f64], t0: f64, v1: &[f64], t1: f64, t: f64) -> Vec<f64> {
    if t == t1 {
        return v1.to_vec();
    }
    if t == t0 {
        return v0.to_vec();
    }
    let w = (t - t0) / (t1 - t0);
    v0.iter().zip(v1).map(|(&a, &b)| a + w * (b - a)).collect()
}

// ---------------------------------------------------------------------------
// Simulation driver
// ---------------------------------------------------------------------------

/// Mutable simulation state exposed between steps.
#[derive(Debug, Clone)]
pub struct SimState {
    pub f: DistributionField,
    pub em: EmState,
    /// Previous leap-frog level, for time interpolation (None in RK mode).
    pub em_prev: Option<EmState>,
    pub es: ElectroStatics,
    pub t: f64,
    pub step: u64,
    /// Cumulative count of semi-Lagrangian feet clamped at the p-boundary.
    pub clamped_feet: u64,
}

/// One configured run of a scheme on a grid.
pub struct Simulation {
    pub grid: PhaseGrid,
    pub params: PhysicalParams,
    pub scheme: Scheme,
    pub state: SimState,
    poisson: PoissonSolver,
    cfl: f64,
    fixed_dt: Option<f64>,
}

impl Simulation {
    /// Initializes f from the two-temperature Maxwellian and the fields
    /// from the pump wave at the scheme's native staggering.
    pub fn new(
        grid: PhaseGrid,
        params: PhysicalParams,
        scheme: Scheme,
        cfl: f64,
        fixed_dt: Option<f64>,
    ) -> Result<Self> {
        params.validate()?;
        if scheme.uses_cfl() {
            if !(cfl > 0.0 && cfl < 1.0) {
                return Err(QrvmError::InvalidParams(format!("cfl = {cfl} outside (0, 1)")));
            }
        } else {
            let dt = fixed_dt.ok_or_else(|| {
                QrvmError::InvalidParams(format!("scheme {scheme} needs a fixed dt"))
            })?;
            if !(dt > 0.0) {
                return Err(QrvmError::InvalidTimeStep { dt, why: "dt must be positive".into() });
            }
            if dt >= grid.dx {
                return Err(QrvmError::InvalidTimeStep {
                    dt,
                    why: format!("leap-frog Maxwell requires dt < dx = {}", grid.dx),
                });
            }
        }

        let f = init_distribution(&grid, &params);
        let (em, em_prev) = match scheme {
            Scheme::RkFdwenoRk => (EmState::pump_rk(grid.n_x, 0.0, &params), None),
            Scheme::RkFdwenoLf => {
                let dt = fixed_dt.unwrap();
                (
                    EmState::pump_lf(grid.n_x, 0.0, dt, &params),
                    Some(EmState::pump_lf(grid.n_x, -dt, dt, &params)),
                )
            }
            Scheme::TsDslwenoLf | Scheme::TsCslwenoLf => {
                // A, B shifted to half-integer levels so the force exists at
                // the prediction time; E_perp sits on integer levels
                let dt = fixed_dt.unwrap();
                (
                    EmState::pump_lf(grid.n_x, -0.5 * dt, dt, &params),
                    Some(EmState::pump_lf(grid.n_x, -1.5 * dt, dt, &params)),
                )
            }
        };

        let mut poisson = PoissonSolver::new(grid.n_x);
        let rho = density(&f);
        let mut e_long = vec![0.0; grid.n_x];
        poisson.solve_into(&rho, &vec![1.0; grid.n_x], params.eta, grid.dx, &mut e_long)?;
        let es = ElectroStatics { rho, e_long, rho_ext: vec![1.0; grid.n_x] };

        Ok(Simulation {
            grid,
            params,
            scheme,
            state: SimState { f, em, em_prev, es, t: 0.0, step: 0, clamped_feet: 0 },
            poisson,
            cfl,
            fixed_dt,
        })
    }

    pub fn fixed_dt(&self) -> Option<f64> {
        self.fixed_dt
    }

    pub fn cfl(&self) -> f64 {
        self.cfl
    }

    /// Refreshes es (rho, E) from the current f, so the exposed state is
    /// never stale.
    fn refresh_electrostatics(&mut self) -> Result<()> {
        self.state.es.rho = density(&self.state.f);
        self.poisson.solve_into(
            &self.state.es.rho,
            &self.state.es.rho_ext,
            self.params.eta,
            self.grid.dx,
            &mut self.state.es.e_long,
        )?;
        Ok(())
    }

    /// Force at the current state (fresh es + current A, B levels).
    pub fn current_force(&self) -> ForceField {
        assemble_force(
            &self.state.es.e_long,
            &self.state.em.a,
            &self.state.em.b_at_nodes(),
            self.state.em.t_ab,
        )
    }

    /// The CFL-limited step for the current state.
    pub fn current_cfl_dt(&self) -> Result<f64> {
        cfl_dt(&self.grid, force_max(&self.current_force()), self.cfl, !self.scheme.uses_cfl())
    }

    /// Advances one step. RK-FDWENO-RK picks the CFL-limited step (clipped
    /// to `t_remaining` when positive); the leap-frog couplings use their
    /// fixed dt. Returns the dt taken.
    pub fn step_auto(&mut self, t_remaining: f64) -> Result<f64> {
        let dt = match self.scheme {
            Scheme::RkFdwenoRk => {
                let dt = self.current_cfl_dt()?;
                if t_remaining > 0.0 {
                    dt.min(t_remaining)
                } else {
                    dt
                }
            }
            _ => self.fixed_dt.unwrap(),
        };
        match self.scheme {
            Scheme::RkFdwenoRk => self.step_rk_fdweno_rk(dt)?,
            Scheme::RkFdwenoLf => self.step_rk_fdweno_lf(dt)?,
            Scheme::TsDslwenoLf => self.step_ts_sl_lf(dt, VlasovKernel::Dsl)?,
            Scheme::TsCslwenoLf => self.step_ts_sl_lf(dt, VlasovKernel::Csl)?,
        }
        Ok(dt)
    }

    /// One step of the fully explicit coupling: TVD-RK3 over the whole
    /// vector (f, A, B, E_perp). Refuses dt above the CFL limit.
    pub fn step_rk_fdweno_rk(&mut self, dt: f64) -> Result<()> {
        if self.state.em.staggering != Staggering::RkNodal {
            return Err(QrvmError::SchemeMismatch(
                "rk-fdweno-rk requires node-collocated fields".into(),
            ));
        }
        let dt_max = self.current_cfl_dt()?;
        if dt > dt_max * (1.0 + 1e-12) {
            return Err(QrvmError::InvalidTimeStep {
                dt,
                why: format!("violates the CFL bound {dt_max:.6e}"),
            });
        }

        let grid = self.grid;
        let eta = self.params.eta;
        let mut scratch = self.state.f.clone();
        let rho_ext = self.state.es.rho_ext.clone();
        let poisson = &mut self.poisson;

        let mut y0 = CoupledState {
            f: vec![0.0; grid.n_x * grid.n_p],
            a: self.state.em.a.clone(),
            b: self.state.em.b.clone(),
            e: self.state.em.e_perp.clone(),
        };
        self.state.f.physical_to_flat(&mut y0.f);

        let mut e_long = vec![0.0; grid.n_x];
        let rhs = |_t: f64, s: &CoupledState| -> CoupledState {
            let rho = density_flat(&s.f, &grid);
            poisson
                .solve_into(&rho, &rho_ext, eta, grid.dx, &mut e_long)
                .expect("finite density");
            let force = assemble_force(&e_long, &s.a, &s.b, 0.0);
            scratch.flat_to_physical(&s.f);
            let mut df = vec![0.0; s.f.len()];
            vlasov_rhs(&mut scratch, &force.values, &mut df);
            let (da, db, de) = maxwell_rhs(&s.a, &s.b, &s.e, &rho, eta, grid.dx);
            CoupledState { f: df, a: da, b: db, e: de }
        };
        let y1 = tvd_rk3(&y0, self.state.t, dt, rhs);

        self.state.f.flat_to_physical(&y1.f);
        self.state.f.fill_ghosts();
        let t_new = self.state.t + dt;
        self.state.em = EmState {
            a: y1.a,
            b: y1.b,
            e_perp: y1.e,
            staggering: Staggering::RkNodal,
            t_ab: t_new,
            t_e: t_new,
        };
        self.refresh_electrostatics()?;
        self.state.t = t_new;
        self.state.step += 1;
        Ok(())
    }

    /// One step of RK-FDWENO-LF: TVD-RK3 stages for f with forces at t,
    /// t + dt, t + dt/2; one Yee step per time step driven by the density
    /// of the first-stage prediction.
    pub fn step_rk_fdweno_lf(&mut self, dt: f64) -> Result<()> {
        self.check_fixed_dt(dt)?;
        if self.state.em.staggering != Staggering::LeapFrog {
            return Err(QrvmError::SchemeMismatch(
                "rk-fdweno-lf requires a leap-frog staggered state".into(),
            ));
        }
        let grid = self.grid;
        let eta = self.params.eta;
        let t = self.state.t;
        let mut scratch = self.state.f.clone();
        let mut e_long = vec![0.0; grid.n_x];
        let rho_ext = self.state.es.rho_ext.clone();

        let mut f0 = vec![0.0; grid.n_x * grid.n_p];
        self.state.f.physical_to_flat(&mut f0);

        // stage 1 at t^n: force from the current state
        let em = &self.state.em;
        let force0 = assemble_force(&self.state.es.e_long, &em.a, &em.b_at_nodes(), t);
        let mut k0 = vec![0.0; f0.len()];
        vlasov_rhs(&mut scratch, &force0.values, &mut k0);
        let f1 = Vec::comb2(1.0, &f0, dt, &k0);

        // predicted density at t^{n+1} drives the single Yee advance
        let rho1 = density_flat(&f1, &grid);
        let em_next = yee_step(em, &rho1, dt, grid.dx, eta)?;

        // stage 2 at t^n + dt: fields exist at the new level
        self.poisson.solve_into(&rho1, &rho_ext, eta, grid.dx, &mut e_long)?;
        let force1 = assemble_force(&e_long, &em_next.a, &em_next.b_at_nodes(), t + dt);
        scratch.flat_to_physical(&f1);
        let mut k1 = vec![0.0; f0.len()];
        vlasov_rhs(&mut scratch, &force1.values, &mut k1);
        let f2 = Vec::comb3(0.75, &f0, 0.25, &f1, 0.25 * dt, &k1);

        // stage 3 at t^n + dt/2: A, B interpolated between the LF levels
        let rho2 = density_flat(&f2, &grid);
        self.poisson.solve_into(&rho2, &rho_ext, eta, grid.dx, &mut e_long)?;
        let a_half = lerp_in_time(&em.a, em.t_ab, &em_next.a, em_next.t_ab, t + 0.5 * dt);
        let b_half = lerp_in_time(
            &em.b_at_nodes(),
            em.t_ab,
            &em_next.b_at_nodes(),
            em_next.t_ab,
            t + 0.5 * dt,
        );
        let force2 = assemble_force(&e_long, &a_half, &b_half, t + 0.5 * dt);
        scratch.flat_to_physical(&f2);
        let mut k2 = vec![0.0; f0.len()];
        vlasov_rhs(&mut scratch, &force2.values, &mut k2);
        let f_new = Vec::comb3(1.0 / 3.0, &f0, 2.0 / 3.0, &f2, 2.0 / 3.0 * dt, &k2);

        self.state.f.flat_to_physical(&f_new);
        self.state.f.fill_ghosts();
        self.state.em_prev = Some(std::mem::replace(&mut self.state.em, em_next));
        self.refresh_electrostatics()?;
        self.state.t = t + dt;
        self.state.step += 1;
        Ok(())
    }

    /// One Strang-split step with the chosen semi-Lagrangian kernel:
    /// half x-advection; rho and E at the prediction time; Yee advance of
    /// the half-level fields; full p-advection with the frozen force;
    /// second half x-advection.
    pub fn step_ts_sl_lf(&mut self, dt: f64, kernel: VlasovKernel) -> Result<()> {
        self.check_fixed_dt(dt)?;
        if self.state.em.staggering != Staggering::LeapFrog {
            return Err(QrvmError::SchemeMismatch(
                "ts couplings require a leap-frog staggered state".into(),
            ));
        }
        if dt >= self.grid.dx {
            return Err(QrvmError::InvalidTimeStep {
                dt,
                why: format!("leap-frog Maxwell requires dt < dx = {}", self.grid.dx),
            });
        }
        let grid = self.grid;
        let eta = self.params.eta;
        let t = self.state.t;

        self.advect_x(0.5 * dt, kernel);

        // prediction: rho and E from the half-advected f
        let rho_half = density(&self.state.f);
        let mut e_half = vec![0.0; grid.n_x];
        self.poisson.solve_into(
            &rho_half,
            &self.state.es.rho_ext,
            eta,
            grid.dx,
            &mut e_half,
        )?;

        // Yee advance brings A, B to the half level matching rho_half
        let em_next = yee_step(&self.state.em, &rho_half, dt, grid.dx, eta)?;
        let force = assemble_force(&e_half, &em_next.a, &em_next.b_at_nodes(), t + 0.5 * dt);

        let clamped = self.advect_p(dt, &force.values, kernel);
        self.state.clamped_feet += clamped;

        self.advect_x(0.5 * dt, kernel);

        self.state.em_prev = Some(std::mem::replace(&mut self.state.em, em_next));
        self.refresh_electrostatics()?;
        self.state.f.fill_ghosts();
        self.state.t = t + dt;
        self.state.step += 1;
        Ok(())
    }

    fn check_fixed_dt(&self, dt: f64) -> Result<()> {
        match self.fixed_dt {
            Some(fixed) if dt == fixed => Ok(()),
            Some(fixed) => Err(QrvmError::InvalidTimeStep {
                dt,
                why: format!("the Yee staggering pins dt = {fixed} for the whole run"),
            }),
            None => Err(QrvmError::SchemeMismatch("scheme runs on a CFL step".into())),
        }
    }

    /// Constant-speed x-advection of every p-line by v(p_j) over `dt`.
    fn advect_x(&mut self, dt: f64, kernel: VlasovKernel) {
        let grid = self.grid;
        let (n_x, n_p, g) = (grid.n_x, grid.n_p, grid.n_ghost);
        let stride = self.state.f.stride();
        let start = g * stride;
        let end = (g + n_p) * stride;
        self.state.f.values_mut()[start..end]
            .par_chunks_mut(stride)
            .enumerate()
            .for_each(|(j, row)| {
                let speed = grid.v_node(j);
                let phys = &mut row[g..g + n_x];
                let mut out = vec![0.0; n_x];
                match kernel {
                    VlasovKernel::Csl => {
                        csl_advect_into(phys, LineBc::Periodic, speed, dt, grid.dx, &mut out);
                    }
                    VlasovKernel::Dsl => {
                        dsl_advect_into(phys, LineBc::Periodic, speed, dt, grid.dx, &mut out);
                    }
                }
                phys.copy_from_slice(&out);
            });
    }

    /// Constant-speed p-advection of every x-line by F_i over `dt`;
    /// returns the number of clamped feet at the p-boundary.
    fn advect_p(&mut self, dt: f64, force: &[f64], kernel: VlasovKernel) -> u64 {
        let grid = self.grid;
        let (n_x, n_p, g) = (grid.n_x, grid.n_p, grid.n_ghost);
        let stride = self.state.f.stride();
        let clamped = AtomicU64::new(0);

        let mut tmp = vec![0.0; n_x * n_p];
        {
            let values = self.state.f.values();
            tmp.par_chunks_mut(n_p).enumerate().for_each(|(i, col)| {
                for (j, c) in col.iter_mut().enumerate() {
                    *c = values[(g + j) * stride + g + i];
                }
                let speed = force[i];
                let mut out = vec![0.0; n_p];
                let count = match kernel {
                    VlasovKernel::Csl => {
                        csl_advect_into(col, LineBc::NeumannClamp, speed, dt, grid.dp, &mut out)
                    }
                    VlasovKernel::Dsl => {
                        dsl_advect_into(col, LineBc::NeumannClamp, speed, dt, grid.dp, &mut out)
                    }
                };
                col.copy_from_slice(&out);
                clamped.fetch_add(count as u64, Ordering::Relaxed);
            });
        }
        let start = g * stride;
        let end = (g + n_p) * stride;
        self.state.f.values_mut()[start..end]
            .par_chunks_mut(stride)
            .enumerate()
            .for_each(|(j, row)| {
                for i in 0..n_x {
                    row[g + i] = tmp[i * n_p + j];
                }
            });
        clamped.into_inner()
    }

    /// A, B (node-collocated), E_perp synchronized to the current time by
    /// the same linear interpolation used for stage forces.
    pub fn synced_nodal_em(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let em = &self.state.em;
        match em.staggering {
            Staggering::RkNodal => (em.a.clone(), em.b.clone(), em.e_perp.clone()),
            Staggering::LeapFrog => {
                let prev = self
                    .state
                    .em_prev
                    .as_ref()
                    .expect("leap-frog state carries a previous level");
                let t = self.state.t;
                let a = lerp_in_time(&prev.a, prev.t_ab, &em.a, em.t_ab, t);
                let b = lerp_in_time(&prev.b_at_nodes(), prev.t_ab, &em.b_at_nodes(), em.t_ab, t);
                let e = lerp_in_time(&prev.e_perp, prev.t_e, &em.e_perp, em.t_e, t);
                (a, b, e)
            }
        }
    }

    /// Diagnostics record of the current state, fields synchronized to t.
    pub fn diagnostics_record(&self) -> DiagnosticsRecord {
        let (a, b, e) = self.synced_nodal_em();
        compute_record(
            &self.state.f,
            &a,
            &b,
            &e,
            &self.state.es.e_long,
            self.params.eta,
            self.state.t,
        )
    }
}
