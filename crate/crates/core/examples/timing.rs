// Scratch probe: per-step wall time at the reference resolution.

use std::time::Instant;

use qrvm::grid::build_grid;
use qrvm::init::default_params;
use qrvm::integrators::{Scheme, Simulation};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(400);
    let steps: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(50);
    let grid = build_grid(n, n, 8.0, 3).unwrap();
    let params = default_params();

    for scheme in [Scheme::TsCslwenoLf, Scheme::TsDslwenoLf, Scheme::RkFdwenoRk, Scheme::RkFdwenoLf]
    {
        let dt = 0.5 * grid.dx;
        let fixed = if scheme.uses_cfl() { None } else { Some(dt) };
        let mut sim = Simulation::new(grid, params, scheme, 0.9, fixed).unwrap();
        let start = Instant::now();
        for _ in 0..steps {
            sim.step_auto(0.0).unwrap();
        }
        let per = start.elapsed().as_secs_f64() / steps as f64;
        let dt_used = if scheme.uses_cfl() { sim.current_cfl_dt().unwrap() } else { dt };
        println!(
            "{:<14} {n}x{n}: {:.1} ms/step, dt ~ {dt_used:.5} -> {:.1} s per unit t, t=20 in {:.0} s",
            scheme.name(),
            per * 1e3,
            per / dt_used,
            20.0 * per / dt_used
        );
    }
}
