//! Test-only helpers: a deterministic RNG and independent polynomial
//! oracles used to cross-check the WENO kernels.

/// Deterministic xorshift64* generator for reproducible test data.
pub struct Xorshift(u64);

impl Xorshift {
    pub fn new(seed: u64) -> Self {
        Xorshift(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = self.next_u64() as f64 / u64::MAX as f64;
        lo + (hi - lo) * u
    }
}

/// Lagrange interpolation of (nodes, vals) evaluated at `t`, product form.
pub fn lagrange_eval(nodes: &[f64], vals: &[f64], t: f64) -> f64 {
    let n = nodes.len();
    let mut out = 0.0;
    for m in 0..n {
        let mut term = vals[m];
        for k in 0..n {
            if k != m {
                term *= (t - nodes[k]) / (nodes[m] - nodes[k]);
            }
        }
        out += term;
    }
    out
}

/// Monomial coefficients of the cubic through four (node, value) pairs,
/// by Vandermonde solve with partial pivoting.
fn cubic_coefficients(nodes: &[f64], vals: &[f64]) -> [f64; 4] {
    assert_eq!(nodes.len(), 4);
    assert_eq!(vals.len(), 4);
    let mut m = [[0.0f64; 5]; 4];
    for r in 0..4 {
        let x = nodes[r];
        m[r] = [1.0, x, x * x, x * x * x, vals[r]];
    }
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        m.swap(col, piv);
        for r in col + 1..4 {
            let factor = m[r][col] / m[col][col];
            for c in col..5 {
                m[r][c] -= factor * m[col][c];
            }
        }
    }
    let mut coeff = [0.0f64; 4];
    for r in (0..4).rev() {
        let mut acc = m[r][4];
        for c in r + 1..4 {
            acc -= m[r][c] * coeff[c];
        }
        coeff[r] = acc / m[r][r];
    }
    coeff
}

fn poly_derivative_eval(coeff: &[f64; 4], order: usize, x: f64) -> f64 {
    match order {
        0 => coeff[0] + coeff[1] * x + coeff[2] * x * x + coeff[3] * x * x * x,
        1 => coeff[1] + 2.0 * coeff[2] * x + 3.0 * coeff[3] * x * x,
        2 => 2.0 * coeff[2] + 6.0 * coeff[3] * x,
        3 => 6.0 * coeff[3],
        _ => 0.0,
    }
}

/// Jiang-Shu smoothness measure of the cubic through (nodes, vals) on the
/// interval [-1/2, 1/2] with unit spacing: sum over `orders` of the
/// integral of the squared derivative of that order (three-point
/// Gauss-Legendre, exact for these degrees).
pub fn sigma_by_quadrature(nodes: &[f64], vals: &[f64], orders: &[usize]) -> f64 {
    let coeff = cubic_coefficients(nodes, vals);
    let gx = (0.6f64).sqrt() * 0.5;
    let points = [(-gx, 5.0 / 18.0), (0.0, 8.0 / 18.0), (gx, 5.0 / 18.0)];
    let mut sigma = 0.0;
    for &k in orders {
        let mut integral = 0.0;
        for (x, w) in points {
            let d = poly_derivative_eval(&coeff, k, x);
            integral += w * d * d;
        }
        sigma += integral;
    }
    sigma
}
