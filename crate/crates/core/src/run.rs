//! Run orchestration: initialization, the time loop, snapshot and
//! diagnostics emission, and blow-up detection.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::SimConfig;
use crate::diagnostics::DiagnosticsRecord;
use crate::error::{QrvmError, Result};
use crate::grid::build_grid;
use crate::integrators::Simulation;
use crate::output::{write_fields_csv, write_snapshot, DiagnosticsWriter};

/// A run stops either by reaching t_max or by detected blow-up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunOutcome {
    Completed,
    BlowUp { t: f64, max_abs: f64 },
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub outcome: RunOutcome,
    pub steps: u64,
    pub final_t: f64,
    pub snapshots: usize,
    pub diag_rows: usize,
    pub clamped_feet: u64,
}

/// Max |f| beyond which the run is declared blown up; far above any
/// physical value of f (the initial max is about 2.4) yet reached quickly
/// by genuine instability.
pub const BLOWUP_THRESHOLD: f64 = 1e6;

fn snapshot_paths(dir: &Path, index: usize) -> (PathBuf, PathBuf) {
    (
        dir.join(format!("snapshot_{index:06}.dat")),
        dir.join(format!("fields_{index:06}.csv")),
    )
}

struct Emitter<'a> {
    dir: &'a Path,
    scheme: &'static str,
    count: usize,
    last_step: Option<u64>,
}

impl<'a> Emitter<'a> {
    fn emit(&mut self, sim: &Simulation) -> Result<()> {
        let (snap_path, fields_path) = snapshot_paths(self.dir, self.count);
        write_snapshot(&snap_path, self.scheme, sim.state.t, &sim.state.f)?;
        let (a, b, e_perp) = sim.synced_nodal_em();
        write_fields_csv(
            &fields_path,
            sim.grid.dx,
            &sim.state.es.rho,
            &sim.state.es.e_long,
            &a,
            &b,
            &e_perp,
        )?;
        log::info!("snapshot {:06} at t = {:.6}", self.count, sim.state.t);
        self.count += 1;
        self.last_step = Some(sim.state.step);
        Ok(())
    }
}

/// Runs a configured simulation to completion (or blow-up), writing
/// `diagnostics.csv` and numbered snapshot/field files into the output
/// directory.
pub fn run(config: &SimConfig) -> Result<RunReport> {
    fs::create_dir_all(&config.output_dir).map_err(|e| QrvmError::io(&config.output_dir, e))?;
    let grid = build_grid(config.n_x, config.n_p, config.params.p_max, 3)?;
    let mut sim = Simulation::new(
        grid,
        config.params,
        config.scheme,
        config.cfl(),
        config.fixed_dt(),
    )?;

    let mut diag = DiagnosticsWriter::create(&config.output_dir.join("diagnostics.csv"))?;
    let base: DiagnosticsRecord = sim.diagnostics_record();
    diag.push(&base.with_reference(&base))?;

    let mut emitter = Emitter {
        dir: &config.output_dir,
        scheme: config.scheme.name(),
        count: 0,
        last_step: None,
    };
    emitter.emit(&sim)?;

    let t_tol = match config.fixed_dt() {
        Some(dt) => 1e-9 * dt,
        None => 1e-12 * config.t_max.max(1.0),
    };
    let mut next_snap = config.snapshot_every;

    let outcome = loop {
        let remaining = config.t_max - sim.state.t;
        if remaining <= t_tol {
            break RunOutcome::Completed;
        }
        sim.step_auto(remaining)?;

        let max_abs = sim.state.f.max_abs();
        if !max_abs.is_finite() || sim.state.f.has_non_finite() || max_abs > BLOWUP_THRESHOLD {
            log::warn!(
                "blow-up detected at t = {:.6} (max |f| = {max_abs:.3e}); stopping",
                sim.state.t
            );
            break RunOutcome::BlowUp { t: sim.state.t, max_abs };
        }

        if sim.state.step % config.diag_every == 0 {
            diag.push(&sim.diagnostics_record().with_reference(&base))?;
        }
        while sim.state.t >= next_snap - t_tol {
            emitter.emit(&sim)?;
            next_snap += config.snapshot_every;
        }
    };

    // final snapshot at the end state, unless this step already has one
    if emitter.last_step != Some(sim.state.step) {
        emitter.emit(&sim)?;
    }
    let rows = diag.rows;
    diag.finish()?;

    Ok(RunReport {
        outcome,
        steps: sim.state.step,
        final_t: sim.state.t,
        snapshots: emitter.count,
        diag_rows: rows,
        clamped_feet: sim.state.clamped_feet,
    })
}
