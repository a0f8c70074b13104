// Scratch probe: criterion-3 quantities at the stated operating point.

use qrvm::grid::build_grid;
use qrvm::init::default_params;
use qrvm::integrators::{Scheme, Simulation};

fn main() {
    let grid = build_grid(64, 64, 8.0, 3).unwrap();
    let params = default_params();

    for (scheme, dt_frac, cfl) in [
        (Scheme::RkFdwenoRk, 0.0, 0.9),
        (Scheme::RkFdwenoRk, 0.0, 0.45),
        (Scheme::TsCslwenoLf, 0.5, 0.9),
        (Scheme::TsCslwenoLf, 0.25, 0.9),
        (Scheme::TsDslwenoLf, 0.5, 0.9),
    ] {
        let fixed = if scheme.uses_cfl() { None } else { Some(dt_frac * grid.dx) };
        let mut sim = Simulation::new(grid, params, scheme, cfl, fixed).unwrap();
        let base = sim.diagnostics_record();
        print!("{:<14} cfl/dtf={:.2}:", sim.scheme.name(), if scheme.uses_cfl() { cfl } else { dt_frac });
        for checkpoint in [2.0, 4.0, 6.0, 8.0, 10.0] {
            while sim.state.t < checkpoint - 1e-9 {
                sim.step_auto(checkpoint - sim.state.t).unwrap();
            }
            let rec = sim.diagnostics_record().with_reference(&base);
            print!("  t={checkpoint}: dm={:+.2e} dW={:+.3}", rec.rel_mass, rec.rel_energy);
        }
        println!();
    }
}
