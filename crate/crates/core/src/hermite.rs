//! Hermite polynomials (physicists' convention), their orthonormal scaled
//! functions, the zeros of `H_N` and the associated Christoffel weights.
//!
//! Everything that sums `H_l(x)^2 / (2^l l!)` goes through the orthonormal
//! Hermite functions
//!
//! ```text
//! h_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi))
//! ```
//!
//! which satisfy `h_{n+1} = sqrt(2/(n+1)) x h_n - sqrt(n/(n+1)) h_{n-1}` and
//! never overflow. Raw `H_n` and `n!` overflow near `n = 150`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest order accepted by [`hermite_roots`].
pub const MAX_ORDER: usize = 512;

/// Absolute bound on the scaled residual `|h_N(q_k)|` after polishing.
pub const ROOT_TOLERANCE: f64 = 1e-13;

const MAX_NEWTON_STEPS: usize = 16;
const RESCALE_THRESHOLD: f64 = 1e150;

/// `H_n(x)` by the three-term recurrence `H_{n+1} = 2x H_n - 2n H_{n-1}`.
///
/// Overflows to infinity for large `n` and `|x|`; use [`hermite_function`]
/// when the scaled value is what is needed.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The orthonormal Hermite function `h_n(x)`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_functions(n + 1, x)[n]
}

/// `[h_0(x), h_1(x), ..., h_{count-1}(x)]`.
///
/// The recurrence is run on the polynomial part with a running power-of-ten
/// rescale, and the Gaussian is applied in the log domain at the end, so the
/// result is accurate wherever the true value is representable.
pub fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let gauss = -0.5 * x * x;
    let mut log_scale = 0.0_f64;
    let mut prev = 0.0_f64;
    let mut cur = PI.powf(-0.25);
    out.push(cur * gauss.exp());
    for n in 1..count {
        let k = (n - 1) as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * x * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_THRESHOLD {
            cur /= RESCALE_THRESHOLD;
            prev /= RESCALE_THRESHOLD;
            log_scale += RESCALE_THRESHOLD.ln();
        }
        out.push(cur * (log_scale + gauss).exp());
    }
    out
}

/// `sum_{l < n} h_l(x)^2`, the diagonal of the reproducing kernel of the
/// first `n` Hermite functions.
pub fn kernel_diagonal(n: usize, x: f64) -> f64 {
    hermite_functions(n, x).iter().map(|h| h * h).sum()
}

/// Christoffel weight `[sum_{l<n} H_l(x)^2 / (2^l l!)]^{-1}`.
pub fn christoffel_weight(n: usize, x: f64) -> f64 {
    // sum H_l^2/(2^l l!) = sqrt(pi) e^{x^2} sum h_l^2
    let log_w = -x * x - 0.5 * PI.ln() - kernel_diagonal(n, x).ln();
    log_w.exp()
}

/// Zeros of `H_N` with their Christoffel weights.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteRootSet {
    pub order: usize,
    /// Strictly increasing, symmetric about zero.
    pub roots: Vec<f64>,
    /// Sum to one. Weights of the outermost roots underflow to zero above
    /// roughly `N = 350`, where their true value is below `f64::MIN_POSITIVE`.
    pub weights: Vec<f64>,
}

impl HermiteRootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Largest `|h_N(q_k)| / |h_N'(q_k)|` over the set, i.e. the Newton
    /// correction that would still be applied to each root.
    pub fn max_relative_residual(&self) -> f64 {
        self.roots
            .iter()
            .map(|&x| {
                let (value, slope) = scaled_value_and_slope(self.order, x);
                (value / slope).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `(h_n(x), h_n'(x))` using `h_n' = sqrt(2n) h_{n-1} - x h_n`.
fn scaled_value_and_slope(n: usize, x: f64) -> (f64, f64) {
    let hs = hermite_functions(n + 1, x);
    let value = hs[n];
    let slope = (2.0 * n as f64).sqrt() * hs[n - 1] - x * value;
    (value, slope)
}

/// All `N` real zeros of `H_N` in increasing order.
///
/// Initial guesses are the eigenvalues of the symmetric tridiagonal Jacobi
/// matrix (zero diagonal, off-diagonal `sqrt(i/2)`); each is then polished by
/// Newton iteration on `h_N`, and the set is symmetrized about zero.
pub fn hermite_roots(n: usize) -> Result<HermiteRootSet> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "Hermite root order must be at least 1".into(),
        ));
    }
    if n > MAX_ORDER {
        return Err(Error::DimensionTooLarge {
            requested: n,
            max: MAX_ORDER,
        });
    }

    let jacobi = DMatrix::<f64>::from_fn(n, n, |r, c| {
        if r + 1 == c || c + 1 == r {
            (r.max(c) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut roots: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
    roots.sort_by(f64::total_cmp);

    for root in roots.iter_mut() {
        *root = polish(n, *root);
    }

    for k in 0..n / 2 {
        let half = 0.5 * (roots[n - 1 - k] - roots[k]);
        roots[k] = -half;
        roots[n - 1 - k] = half;
    }
    if n % 2 == 1 {
        roots[n / 2] = 0.0;
    }

    let weights = roots.iter().map(|&x| christoffel_weight(n, x)).collect();
    Ok(HermiteRootSet {
        order: n,
        roots,
        weights,
    })
}

fn polish(n: usize, mut x: f64) -> f64 {
    for _ in 0..MAX_NEWTON_STEPS {
        let (value, slope) = scaled_value_and_slope(n, x);
        if slope == 0.0 {
            break;
        }
        let step = value / slope;
        x -= step;
        if value.abs() < ROOT_TOLERANCE && step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Large-order approximation of the zero of `H_N` with central label `k`.
///
/// For odd `N` the label `k = 0` is the central zero at the origin and
/// `k = ±1, ±2, ...` count outwards. For even `N` the label is shifted by one
/// half, so `k = 1` is the first positive zero and `k = 0` the first negative.
pub fn asymptotic_root(n: usize, k: i64) -> f64 {
    let label = if n % 2 == 1 { k as f64 } else { k as f64 - 0.5 };
    let a = 2.0 * n as f64 + 3.0;
    let correction = (PI * PI * label * label - 1.5) / (3.0 * a * a);
    PI * label / a.sqrt() * (1.0 + correction).sqrt()
}

/// Index into [`HermiteRootSet::roots`] of the zero that [`asymptotic_root`]
/// labels `k`, or `None` when the label falls outside the set.
pub fn central_label_index(n: usize, k: i64) -> Option<usize> {
    let centre = (n / 2) as i64;
    let index = if n % 2 == 1 {
        centre + k
    } else {
        centre + k - 1
    };
    (0..n as i64).contains(&index).then_some(index as usize)
}

/// Root label scaled with the order: `k = sqrt(2N)/pi * q + b`.
pub fn scaled_label(q: f64, b: f64, n: usize) -> f64 {
    (2.0 * n as f64).sqrt() / PI * q + b
}
