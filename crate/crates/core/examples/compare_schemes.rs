// Scratch probe: three-way scheme comparison at short time.

use qrvm::grid::build_grid;
use qrvm::init::default_params;
use qrvm::integrators::{Scheme, Simulation};

fn l2_diff(a: &qrvm::DistributionField, b: &qrvm::DistributionField) -> f64 {
    let g = a.grid();
    let mut s = 0.0;
    for j in 0..g.n_p {
        for i in 0..g.n_x {
            let d = a.get(i as isize, j as isize) - b.get(i as isize, j as isize);
            s += d * d;
        }
    }
    (s * g.dx * g.dp).sqrt()
}

fn main() {
    let n = 64;
    let grid = build_grid(n, n, 8.0, 3).unwrap();
    let params = default_params();
    let dt = 0.5 * grid.dx;
    let t_end: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5.0);

    let mut csl = Simulation::new(grid, params, Scheme::TsCslwenoLf, 0.9, Some(dt)).unwrap();
    let mut dsl = Simulation::new(grid, params, Scheme::TsDslwenoLf, 0.9, Some(dt)).unwrap();
    let mut rk = Simulation::new(grid, params, Scheme::RkFdwenoRk, 0.9, None).unwrap();

    let m0 = qrvm::diagnostics::total_mass(&csl.state.f);
    for checkpoint in [1.0, 2.0, 3.0, 4.0, t_end] {
        if checkpoint > t_end {
            break;
        }
        while csl.state.t < checkpoint - 1e-9 * dt {
            csl.step_auto(checkpoint - csl.state.t).unwrap();
            dsl.step_auto(checkpoint - dsl.state.t).unwrap();
        }
        while rk.state.t < checkpoint - 1e-12 {
            rk.step_auto(checkpoint - rk.state.t).unwrap();
        }
        let rec_csl = csl.diagnostics_record();
        let rec_dsl = dsl.diagnostics_record();
        let rec_rk = rk.diagnostics_record();
        println!(
            "t={:5.2}  |csl-dsl|={:.3e}  |csl-rk|={:.3e}  |dsl-rk|={:.3e}",
            checkpoint,
            l2_diff(&csl.state.f, &dsl.state.f),
            l2_diff(&csl.state.f, &rk.state.f),
            l2_diff(&dsl.state.f, &rk.state.f),
        );
        println!(
            "        mass drift: csl={:+.3e} dsl={:+.3e} rk={:+.3e}   W: csl={:.6} dsl={:.6} rk={:.6}",
            (rec_csl.mass - m0) / m0,
            (rec_dsl.mass - m0) / m0,
            (rec_rk.mass - m0) / m0,
            rec_csl.w_total,
            rec_dsl.w_total,
            rec_rk.w_total,
        );
    }
}
