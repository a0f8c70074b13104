//! Conserved and monitored quantities: density, mass, L2-norm, and the
//! five-component total energy
//!
//!   W = WTK + WTP + WLK + WLP
//!
//! with WTK = 1/2 int A^2 rho dx (transverse kinetic),
//! WTP = eta^2/2 int (E_perp^2 + B^2) dx (transverse potential),
//! WLK = int int (sqrt(1+p^2) - 1) f dp dx (longitudinal kinetic),
//! WLP = eta^2/2 int E^2 dx (longitudinal potential).
//!
//! All integrals use the midpoint rule on the physical cells, matching the
//! scheme's own discrete density, so the conservation statements are exact
//! with respect to the discretization.

use crate::grid::DistributionField;

/// Per-record diagnostics, with relative variations against the t = 0
/// record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub l2: f64,
    pub wtk: f64,
    pub wtp: f64,
    pub wlk: f64,
    pub wlp: f64,
    pub w_total: f64,
    pub rel_mass: f64,
    pub rel_l2: f64,
    pub rel_energy: f64,
}

/// Charge density rho_i = dp * sum_j f_ij over physical p-cells.
pub fn density(f: &DistributionField) -> Vec<f64> {
    let grid = *f.grid();
    let mut sums = vec![0.0; grid.n_x];
    for j in 0..grid.n_p {
        let row = f.row(j);
        let phys = &row[grid.n_ghost..grid.n_ghost + grid.n_x];
        for (s, &v) in sums.iter_mut().zip(phys) {
            *s += v;
        }
    }
    for s in sums.iter_mut() {
        *s *= grid.dp;
    }
    sums
}

/// Total mass dx * sum_i rho_i, routed through [`density`] so the reduction
/// order is shared with the per-node densities.
pub fn total_mass(f: &DistributionField) -> f64 {
    let rho = density(f);
    rho.iter().sum::<f64>() * f.grid().dx
}

/// Diagnostics of a synchronized state snapshot. All field arrays are
/// node-collocated and share the record time; `rel_*` are zero (use
/// [`DiagnosticsRecord::with_reference`] against the t = 0 record).
#[allow(clippy::too_many_arguments)]
pub fn compute_record(
    f: &DistributionField,
    a: &[f64],
    b_nodal: &[f64],
    e_perp: &[f64],
    e_long: &[f64],
    eta: f64,
    t: f64,
) -> DiagnosticsRecord {
    let grid = *f.grid();
    let (dx, dp) = (grid.dx, grid.dp);
    let g = grid.n_ghost;

    let rho = density(f);
    let mass = rho.iter().sum::<f64>() * dx;

    let mut sq = 0.0;
    let mut wlk = 0.0;
    for j in 0..grid.n_p {
        let p = grid.p_node(j);
        let gamma_minus_1 = (1.0 + p * p).sqrt() - 1.0;
        let row = f.row(j);
        let phys = &row[g..g + grid.n_x];
        let mut row_sq = 0.0;
        let mut row_sum = 0.0;
        for &v in phys {
            row_sq += v * v;
            row_sum += v;
        }
        sq += row_sq;
        wlk += gamma_minus_1 * row_sum;
    }
    let l2 = (sq * dx * dp).sqrt();
    let wlk = wlk * dx * dp;

    let mut wtk = 0.0;
    let mut wtp = 0.0;
    let mut wlp = 0.0;
    for i in 0..grid.n_x {
        wtk += a[i] * a[i] * rho[i];
        wtp += e_perp[i] * e_perp[i] + b_nodal[i] * b_nodal[i];
        wlp += e_long[i] * e_long[i];
    }
    let eta2_half = 0.5 * eta * eta;
    let wtk = 0.5 * wtk * dx;
    let wtp = eta2_half * wtp * dx;
    let wlp = eta2_half * wlp * dx;

    let w_total = wtk + wtp + wlk + wlp;
    DiagnosticsRecord {
        t,
        mass,
        l2,
        wtk,
        wtp,
        wlk,
        wlp,
        w_total,
        rel_mass: 0.0,
        rel_l2: 0.0,
        rel_energy: 0.0,
    }
}

impl DiagnosticsRecord {
    /// Fills the relative-variation fields against the reference record.
    pub fn with_reference(mut self, base: &DiagnosticsRecord) -> Self {
        self.rel_mass = (self.mass - base.mass) / base.mass;
        self.rel_l2 = (self.l2 - base.l2) / base.l2;
        self.rel_energy = (self.w_total - base.w_total) / base.w_total;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, DistributionField};
    use crate::init::{default_params, init_distribution, initial_density, pump_fields, Maxwellian};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn density_of_zero_field_is_zero() {
        let grid = build_grid(16, 16, 4.0, 3).unwrap();
        let f = DistributionField::zeros(grid);
        assert!(density(&f).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn density_of_maxwellian_is_unity() {
        let params = default_params();
        let grid = build_grid(8, 256, 8.0, 3).unwrap();
        let m = Maxwellian::new(&params);
        let mut f = DistributionField::zeros(grid);
        for j in 0..grid.n_p {
            let v = m.eval(grid.p_node(j));
            for i in 0..grid.n_x {
                f.set(i as isize, j as isize, v);
            }
        }
        for r in density(&f) {
            assert_relative_eq!(r, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn density_matches_initial_closed_form() {
        let params = default_params();
        let grid = build_grid(64, 256, 8.0, 3).unwrap();
        let f = init_distribution(&grid, &params);
        let rho = density(&f);
        for i in 0..grid.n_x {
            let expect = initial_density(grid.x_node(i), &params);
            assert_relative_eq!(rho[i], expect, epsilon = 1e-6);
        }
    }

    #[test]
    fn mass_shares_reduction_order_with_density() {
        let params = default_params();
        let grid = build_grid(32, 64, 8.0, 3).unwrap();
        let f = init_distribution(&grid, &params);
        // manual mass with the identical reduction order
        let mut sums = vec![0.0; grid.n_x];
        for j in 0..grid.n_p {
            for i in 0..grid.n_x {
                sums[i] += f.get(i as isize, j as isize);
            }
        }
        let manual: f64 = sums.iter().map(|s| s * grid.dp).sum::<f64>() * grid.dx;
        assert_eq!(total_mass(&f), manual);
    }

    #[test]
    fn zero_state_has_zero_record() {
        let grid = build_grid(16, 16, 4.0, 3).unwrap();
        let f = DistributionField::zeros(grid);
        let z = vec![0.0; 16];
        let rec = compute_record(&f, &z, &z, &z, &z, 0.1, 0.0);
        assert_eq!(rec.mass, 0.0);
        assert_eq!(rec.l2, 0.0);
        assert_eq!(rec.w_total, 0.0);
    }

    #[test]
    fn pump_only_energy_closed_form() {
        // f = 0, pure pump at t = 0 on nodes: wtp has a closed form because
        // the node average of cos^2 is exactly 1/2 for integer wavenumbers
        let params = default_params();
        let grid = build_grid(64, 16, 8.0, 3).unwrap();
        let f = DistributionField::zeros(grid);
        let n = grid.n_x;
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut e = vec![0.0; n];
        for i in 0..n {
            let (ai, bi, ei) = pump_fields(0.0, grid.x_node(i), &params);
            a[i] = ai;
            b[i] = bi;
            e[i] = ei;
        }
        let rec = compute_record(&f, &a, &b, &e, &vec![0.0; n], params.eta, 0.0);
        let expect = params.eta * params.eta / 2.0
            * (params.a0 * params.a0 * params.omega0 * params.omega0
                + 4.0 * PI * PI * params.a0 * params.a0 * (params.k_pump * params.k_pump) as f64)
            * 0.5;
        assert_relative_eq!(rec.wtp, expect, max_relative = 1e-12);
        assert_relative_eq!(rec.wtp, 0.085868833713938875, max_relative = 1e-12);
        assert_eq!(rec.wtk, 0.0);
        assert_eq!(rec.wlk, 0.0);
        assert_eq!(rec.wlp, 0.0);
        assert_eq!(rec.w_total, rec.wtk + rec.wtp + rec.wlk + rec.wlp);
    }

    #[test]
    fn longitudinal_kinetic_energy_against_fine_quadrature() {
        // f = G(p), fields zero: wlk equals the independent high-resolution
        // quadrature of (sqrt(1+p^2) - 1) G(p)
        let params = default_params();
        let grid = build_grid(8, 256, 8.0, 3).unwrap();
        let m = Maxwellian::new(&params);
        let mut f = DistributionField::zeros(grid);
        for j in 0..grid.n_p {
            let v = m.eval(grid.p_node(j));
            for i in 0..grid.n_x {
                f.set(i as isize, j as isize, v);
            }
        }
        let z = vec![0.0; grid.n_x];
        let rec = compute_record(&f, &z, &z, &z, &z, params.eta, 0.0);
        // reference: 2^20-point midpoint quadrature over [-8, 8]
        let nq = 1 << 20;
        let h = 16.0 / nq as f64;
        let mut reference = 0.0;
        for k in 0..nq {
            let p = -8.0 + (k as f64 + 0.5) * h;
            reference += ((1.0 + p * p).sqrt() - 1.0) * m.eval(p);
        }
        reference *= h;
        assert_relative_eq!(rec.wlk, reference, epsilon = 1e-6);
        assert_relative_eq!(rec.wlk, 0.019153709047106825, epsilon = 1e-6);
    }

    #[test]
    fn energy_components_nonnegative_for_nonnegative_f() {
        let params = default_params();
        let grid = build_grid(32, 64, 8.0, 3).unwrap();
        let f = init_distribution(&grid, &params);
        let n = grid.n_x;
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut e = vec![0.0; n];
        for i in 0..n {
            let (ai, bi, ei) = pump_fields(0.3, grid.x_node(i), &params);
            a[i] = ai;
            b[i] = bi;
            e[i] = ei;
        }
        let rec = compute_record(&f, &a, &b, &e, &vec![0.1; n], params.eta, 0.0);
        assert!(rec.wtk >= 0.0 && rec.wtp >= 0.0 && rec.wlk >= 0.0 && rec.wlp >= 0.0);
        assert_eq!(rec.w_total, rec.wtk + rec.wtp + rec.wlk + rec.wlp);
    }

    #[test]
    fn relative_fields_zero_at_reference() {
        let params = default_params();
        let grid = build_grid(16, 32, 8.0, 3).unwrap();
        let f = init_distribution(&grid, &params);
        let z = vec![0.1; grid.n_x];
        let rec = compute_record(&f, &z, &z, &z, &z, params.eta, 0.0);
        let reffed = rec.with_reference(&rec.clone());
        assert_eq!(reffed.rel_mass, 0.0);
        assert_eq!(reffed.rel_l2, 0.0);
        assert_eq!(reffed.rel_energy, 0.0);
    }
}
