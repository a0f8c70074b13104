// Scratch probe: which DSL substep leaks mass?

use qrvm::advection::{dsl_advect_into, LineBc};
use qrvm::grid::build_grid;
use qrvm::init::{default_params, init_distribution};

fn main() {
    let n = 64;
    let grid = build_grid(n, n, 8.0, 3).unwrap();
    let params = default_params();
    let mut f = init_distribution(&grid, &params);
    let dt = 0.5 * grid.dx;
    let mass = |f: &qrvm::DistributionField| qrvm::diagnostics::total_mass(f);
    let m0 = mass(&f);
    println!("initial mass {m0:.15}");

    // x half-advections only, 20 steps
    let mut buf = vec![0.0; n];
    let mut line = vec![0.0; n];
    for step in 0..20 {
        for j in 0..n {
            let speed = grid.v_node(j);
            for i in 0..n {
                line[i] = f.get(i as isize, j as isize);
            }
            dsl_advect_into(&line, LineBc::Periodic, speed, 0.5 * dt, grid.dx, &mut buf);
            for i in 0..n {
                f.set(i as isize, j as isize, buf[i]);
            }
        }
        if step % 5 == 4 {
            println!("after {} x-half-sweeps: drift {:+.3e}", step + 1, (mass(&f) - m0) / m0);
        }
    }

    // fresh f: p-advections only with a modest constant force profile
    let mut f = init_distribution(&grid, &params);
    let force: Vec<f64> = (0..n)
        .map(|i| 0.2 * (2.0 * std::f64::consts::PI * 2.0 * i as f64 / n as f64).cos())
        .collect();
    let mut col = vec![0.0; n];
    let mut out = vec![0.0; n];
    for step in 0..20 {
        let mut clamped = 0;
        for i in 0..n {
            for j in 0..n {
                col[j] = f.get(i as isize, j as isize);
            }
            clamped += dsl_advect_into(&col, LineBc::NeumannClamp, force[i], dt, grid.dp, &mut out);
            for j in 0..n {
                f.set(i as isize, j as isize, out[j]);
            }
        }
        if step % 5 == 4 {
            println!(
                "after {} p-sweeps: drift {:+.3e} (clamped {clamped})",
                step + 1,
                (mass(&f) - m0) / m0
            );
        }
    }
}
