// Scratch probe: RK-FDWENO-LF instability at coarse fixed dt.

use qrvm::grid::build_grid;
use qrvm::init::default_params;
use qrvm::integrators::{Scheme, Simulation};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(400);
    let frac: f64 = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(0.9);
    let grid = build_grid(n, n, 8.0, 3).unwrap();
    let params = default_params();
    let dt = frac * grid.dx;
    let mut sim = Simulation::new(grid, params, Scheme::RkFdwenoLf, 0.9, Some(dt)).unwrap();
    let start = std::time::Instant::now();
    loop {
        sim.step_auto(0.0).unwrap();
        let max = sim.state.f.max_abs();
        if sim.state.step % 100 == 0 {
            println!(
                "t = {:8.4} step {:6} max|f| = {:.4e}  ({:.0} s)",
                sim.state.t,
                sim.state.step,
                max,
                start.elapsed().as_secs_f64()
            );
        }
        if !max.is_finite() || max > 1e6 {
            println!(
                "BLOW-UP at t = {:.4} step {} max|f| = {max:.3e} after {:.0} s",
                sim.state.t,
                sim.state.step,
                start.elapsed().as_secs_f64()
            );
            break;
        }
        if sim.state.t > 50.0 {
            println!("no blow-up by t = 50");
            break;
        }
    }
}
