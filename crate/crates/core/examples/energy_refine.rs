// Scratch probe: energy/mass drift under mesh refinement.

use qrvm::grid::build_grid;
use qrvm::init::default_params;
use qrvm::integrators::{Scheme, Simulation};

fn run_to(scheme: Scheme, n_x: usize, n_p: usize, t_end: f64, dt_frac: f64) {
    let grid = build_grid(n_x, n_p, 8.0, 3).unwrap();
    let params = default_params();
    let dt = dt_frac * grid.dx;
    let fixed = if scheme.uses_cfl() { None } else { Some(dt) };
    let mut sim = Simulation::new(grid, params, scheme, 0.9, fixed).unwrap();
    let base = sim.diagnostics_record();
    while sim.state.t < t_end - 1e-9 {
        sim.step_auto(t_end - sim.state.t).unwrap();
    }
    let rec = sim.diagnostics_record().with_reference(&base);
    println!(
        "{:<14} {:>4}x{:<4} dt={:.5} t={:.1}: rel_mass={:+.3e} rel_energy={:+.3e}  W0={:.6} W={:.6} wtk={:.4} wtp={:.4} wlk={:.4} wlp={:.4}",
        scheme.name(), n_x, n_p, dt, t_end,
        rec.rel_mass, rec.rel_energy, base.w_total, rec.w_total,
        rec.wtk, rec.wtp, rec.wlk, rec.wlp
    );
}

fn main() {
    let t_end: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2.0);
    for &(nx, np) in &[(64usize, 64usize), (64, 256), (128, 128), (128, 256)] {
        run_to(Scheme::TsCslwenoLf, nx, np, t_end, 0.5);
    }
    run_to(Scheme::TsCslwenoLf, 64, 256, t_end, 0.25);
    for &(nx, np) in &[(64usize, 64usize), (64, 256), (128, 256)] {
        run_to(Scheme::RkFdwenoRk, nx, np, t_end, 0.5);
    }
    run_to(Scheme::TsDslwenoLf, 64, 256, t_end, 0.5);
    run_to(Scheme::TsDslwenoLf, 64, 400, t_end, 0.5);
}
