//! Uniform phase-space mesh and the distribution function stored on it.
//!
//! The (x, p) domain is [0, 1] x [-p_max, p_max], meshed by `n_x` and `n_p`
//! uniform cells. Node coordinates double as cell centers for the
//! conservative (cell-average) view; cell faces sit at the half-offsets.
//! Ghost layers carry the boundary conditions: periodic in x, zero-order
//! replication (Neumann) in p.

use crate::error::{QrvmError, Result};

/// Minimum ghost width required by the fifth-order stencils.
pub const MIN_GHOST: usize = 3;

/// Descriptor of the uniform phase-space mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    pub n_x: usize,
    pub n_p: usize,
    pub p_max: f64,
    pub dx: f64,
    pub dp: f64,
    pub n_ghost: usize,
}

/// Builds the mesh descriptor, with dx = 1/n_x and dp = 2 p_max / n_p.
pub fn build_grid(n_x: usize, n_p: usize, p_max: f64, n_ghost: usize) -> Result<PhaseGrid> {
    if n_x < 8 || n_p < 8 {
        return Err(QrvmError::InvalidGrid(format!(
            "mesh too small: {n_x} x {n_p} (need at least 8 x 8)"
        )));
    }
    if !(p_max > 0.0) || !p_max.is_finite() {
        return Err(QrvmError::InvalidGrid(format!("p_max must be positive, got {p_max}")));
    }
    if n_ghost < MIN_GHOST {
        return Err(QrvmError::InvalidGrid(format!(
            "ghost width {n_ghost} below minimum {MIN_GHOST}"
        )));
    }
    Ok(PhaseGrid {
        n_x,
        n_p,
        p_max,
        dx: 1.0 / n_x as f64,
        dp: 2.0 * p_max / n_p as f64,
        n_ghost,
    })
}

impl PhaseGrid {
    /// x-coordinate of node i (periodic: i = 0..n_x-1, x in [0, 1)).
    #[inline]
    pub fn x_node(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    /// p-coordinate of node j (j = 0..n_p-1, p in [-p_max, p_max - dp]).
    /// When n_p is even, p = 0 lies on node j = n_p/2.
    #[inline]
    pub fn p_node(&self, j: usize) -> f64 {
        -self.p_max + j as f64 * self.dp
    }

    /// Relativistic velocity v(p) = p / sqrt(1 + p^2) at node j.
    #[inline]
    pub fn v_node(&self, j: usize) -> f64 {
        let p = self.p_node(j);
        p / (1.0 + p * p).sqrt()
    }

    /// Max |v(p)| over the physical p-nodes.
    pub fn v_max(&self) -> f64 {
        // |v| is monotone in |p|; the extreme node is j = 0 (p = -p_max).
        self.v_node(0).abs()
    }
}

/// f(t, x_i, p_j) on the grid, ghost layers included.
///
/// Storage is row-major with one row per p-index, so fixed-p lines
/// (x-sweeps) are contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionField {
    grid: PhaseGrid,
    values: Vec<f64>,
}

impl DistributionField {
    pub fn zeros(grid: PhaseGrid) -> Self {
        let len = (grid.n_x + 2 * grid.n_ghost) * (grid.n_p + 2 * grid.n_ghost);
        DistributionField {
            grid,
            values: vec![0.0; len],
        }
    }

    #[inline]
    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    /// Row stride of the storage (x extent including ghosts).
    #[inline]
    pub fn stride(&self) -> usize {
        self.grid.n_x + 2 * self.grid.n_ghost
    }

    #[inline]
    fn storage_index(&self, i: isize, j: isize) -> usize {
        let g = self.grid.n_ghost as isize;
        debug_assert!(i >= -g && i < self.grid.n_x as isize + g);
        debug_assert!(j >= -g && j < self.grid.n_p as isize + g);
        ((j + g) as usize) * self.stride() + (i + g) as usize
    }

    /// Value at physical (or ghost) indices; i < 0 / i >= n_x address x-ghosts.
    #[inline]
    pub fn get(&self, i: isize, j: isize) -> f64 {
        self.values[self.storage_index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, v: f64) {
        let idx = self.storage_index(i, j);
        self.values[idx] = v;
    }

    /// Full storage row for p-index j, ghosts included.
    #[inline]
    pub fn row(&self, j: usize) -> &[f64] {
        let s = self.stride();
        let start = (j + self.grid.n_ghost) * s;
        &self.values[start..start + s]
    }

    #[inline]
    pub fn row_mut(&mut self, j: usize) -> &mut [f64] {
        let s = self.stride();
        let start = (j + self.grid.n_ghost) * s;
        &mut self.values[start..start + s]
    }

    /// Raw storage (tests and kernels that sweep rows in parallel).
    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Copies the physical region of `self` into a flat n_p * n_x buffer
    /// (row per p-index).
    pub fn physical_to_flat(&self, out: &mut [f64]) {
        let (n_x, n_p, g) = (self.grid.n_x, self.grid.n_p, self.grid.n_ghost);
        assert_eq!(out.len(), n_x * n_p);
        let s = self.stride();
        for j in 0..n_p {
            let start = (j + g) * s + g;
            out[j * n_x..(j + 1) * n_x].copy_from_slice(&self.values[start..start + n_x]);
        }
    }

    /// Overwrites the physical region from a flat n_p * n_x buffer.
    pub fn flat_to_physical(&mut self, flat: &[f64]) {
        let (n_x, n_p, g) = (self.grid.n_x, self.grid.n_p, self.grid.n_ghost);
        assert_eq!(flat.len(), n_x * n_p);
        let s = self.stride();
        for j in 0..n_p {
            let start = (j + g) * s + g;
            self.values[start..start + n_x].copy_from_slice(&flat[j * n_x..(j + 1) * n_x]);
        }
    }

    /// Fills ghost layers: periodic copies in x, replication of the nearest
    /// physical row in p. Idempotent; ghosts are fully determined by the
    /// physical region.
    pub fn fill_ghosts(&mut self) {
        let (n_x, n_p, g) = (self.grid.n_x, self.grid.n_p, self.grid.n_ghost);
        let s = self.stride();
        // x-ghosts of every physical row, periodic wrap
        for j in 0..n_p {
            let row = {
                let start = (j + g) * s;
                &mut self.values[start..start + s]
            };
            for k in 0..g {
                row[g - 1 - k] = row[g + n_x - 1 - k];
                row[g + n_x + k] = row[g + k];
            }
        }
        // p-ghost rows replicate the nearest physical row (x-ghosts included)
        let bottom = g * s;
        let top = (g + n_p - 1) * s;
        for k in 0..g {
            self.values.copy_within(bottom..bottom + s, (g - 1 - k) * s);
            self.values.copy_within(top..top + s, (g + n_p + k) * s);
        }
    }

    /// Max |f| over the physical region.
    pub fn max_abs(&self) -> f64 {
        let (n_x, n_p, g) = (self.grid.n_x, self.grid.n_p, self.grid.n_ghost);
        let s = self.stride();
        let mut m = 0.0f64;
        for j in 0..n_p {
            let start = (j + g) * s + g;
            for &v in &self.values[start..start + n_x] {
                m = m.max(v.abs());
            }
        }
        m
    }

    /// True if any physical value is NaN or infinite.
    pub fn has_non_finite(&self) -> bool {
        let (n_x, n_p, g) = (self.grid.n_x, self.grid.n_p, self.grid.n_ghost);
        let s = self.stride();
        for j in 0..n_p {
            let start = (j + g) * s + g;
            if self.values[start..start + n_x].iter().any(|v| !v.is_finite()) {
                return true;
            }
        }
        false
    }
}
