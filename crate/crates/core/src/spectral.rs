//! Eigenstates `|q_k(t)>` of the relational observable `q1(t)`.
//!
//! In the `|m>` basis, with `n = j + m`,
//!
//! ```text
//! <m|q_k(t)> = N_k (2^n n!)^{-1/2} H_n(q_k) e^{-q_k^2/2} e^{i n t}
//!            = h_n(q_k) e^{i n t} / sqrt(K(q_k)),     K(x) = sum_{n<N} h_n(x)^2
//! ```
//!
//! where `q_k` is the `k`-th zero of `H_N` and `N_k = pi^{-1/4} K(q_k)^{-1/2}`
//! is the normalization factor. All amplitudes go through the scaled Hermite
//! functions so nothing overflows for any supported `N`.
//!
//! Root indices `k` are 1-based and follow increasing root order.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermite::{hermite_functions, hermite_roots, HermiteRootSet};
use crate::hilbert::{constraint_operator, embed_state, ModelSpec, StateVector};
use crate::linalg::{vector_max_abs_diff, CMatrix, CVector, Operator, I};
use crate::phase_ops::{number_op, q1_op};

/// An eigenstate of `q1(t)` together with its eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationalEigenstate {
    pub spec: ModelSpec,
    /// 1-based root index.
    pub index: usize,
    pub root: f64,
    pub time: f64,
    pub state: StateVector,
}

/// `<q_l(t)|q_k(t)>` evaluated two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap {
    /// Sum over the `|m>` components.
    pub direct: Complex64,
    /// Christoffel–Darboux closed form (its confluent limit when `k = l`).
    pub christoffel_darboux: Complex64,
}

/// The zeros of `H_N` and the Hermite-function tables evaluated at them,
/// shared by every eigenstate of one model.
#[derive(Debug, Clone)]
pub struct RelationalBasis {
    pub spec: ModelSpec,
    pub roots: HermiteRootSet,
    /// `functions[k][n] = h_n(q_k)` for `n = 0..=N`; the last entry is `h_N`,
    /// which vanishes up to the root residual.
    functions: Vec<Vec<f64>>,
    /// `K(q_k) = sum_{n<N} h_n(q_k)^2`.
    kernel: Vec<f64>,
}

impl RelationalBasis {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        let n = spec.dimension();
        let roots = hermite_roots(n)?;
        let functions: Vec<Vec<f64>> = roots
            .roots
            .iter()
            .map(|&x| hermite_functions(n + 1, x))
            .collect();
        let kernel = functions
            .iter()
            .map(|hs| hs[..n].iter().map(|h| h * h).sum())
            .collect();
        Ok(RelationalBasis {
            spec: *spec,
            roots,
            functions,
            kernel,
        })
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    fn slot(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.dimension() {
            return Err(Error::IndexOutOfRange {
                index: k,
                dimension: self.dimension(),
            });
        }
        Ok(k - 1)
    }

    pub fn root(&self, k: usize) -> Result<f64> {
        Ok(self.roots.roots[self.slot(k)?])
    }

    /// `N_k = e^{q_k^2/2} (sum_{m<N} H_m(q_k)^2 / (2^m m!))^{-1/2}`.
    pub fn normalization(&self, k: usize) -> Result<f64> {
        let s = self.slot(k)?;
        Ok(PI.powf(-0.25) / self.kernel[s].sqrt())
    }

    fn amplitudes(&self, s: usize, t: f64) -> CVector {
        let norm = self.kernel[s].sqrt();
        CVector::from_fn(self.dimension(), |n, _| {
            Complex64::from_polar(self.functions[s][n] / norm, n as f64 * t)
        })
    }

    pub fn eigenstate(&self, k: usize, t: f64) -> Result<RelationalEigenstate> {
        let s = self.slot(k)?;
        Ok(RelationalEigenstate {
            spec: self.spec,
            index: k,
            root: self.roots.roots[s],
            time: t,
            state: StateVector::new(self.spec, self.amplitudes(s, t)),
        })
    }

    /// Matrix whose `k`-th column is `|q_{k+1}(t)>`.
    pub fn eigenvector_matrix(&self, t: f64) -> CMatrix {
        let n = self.dimension();
        let columns: Vec<CVector> = (0..n).map(|s| self.amplitudes(s, t)).collect();
        CMatrix::from_columns(&columns)
    }

    pub fn overlap(&self, k: usize, l: usize, t: f64) -> Result<Overlap> {
        let (sk, sl) = (self.slot(k)?, self.slot(l)?);
        let direct = self.amplitudes(sl, t).dotc(&self.amplitudes(sk, t));

        let n = self.dimension();
        let a_n = (n as f64 / 2.0).sqrt();
        let (hk, hl) = (&self.functions[sk], &self.functions[sl]);
        let (x, y) = (self.roots.roots[sk], self.roots.roots[sl]);
        let kernel = if sk == sl {
            // confluent form: a_N (h_N' h_{N-1} - h_{N-1}' h_N)
            let d_top = (2.0 * n as f64).sqrt() * hk[n - 1] - x * hk[n];
            let d_below = if n >= 2 {
                (2.0 * (n - 1) as f64).sqrt() * hk[n - 2] - x * hk[n - 1]
            } else {
                -x * hk[0]
            };
            a_n * (d_top * hk[n - 1] - d_below * hk[n])
        } else {
            a_n * (hk[n] * hl[n - 1] - hk[n - 1] * hl[n]) / (x - y)
        };
        let cd = kernel / (self.kernel[sk] * self.kernel[sl]).sqrt();
        Ok(Overlap {
            direct,
            christoffel_darboux: Complex64::new(cd, 0.0),
        })
    }

    /// Transition amplitude `<q_l(t_to)|q_k(t_from)>`.
    pub fn propagator(&self, k: usize, l: usize, t_from: f64, t_to: f64) -> Result<Complex64> {
        let (sk, sl) = (self.slot(k)?, self.slot(l)?);
        Ok(self.propagator_unchecked(sk, sl, t_from - t_to))
    }

    fn propagator_unchecked(&self, sk: usize, sl: usize, delta: f64) -> Complex64 {
        let (hk, hl) = (&self.functions[sk], &self.functions[sl]);
        let sum: Complex64 = (0..self.dimension())
            .map(|m| Complex64::from_polar(hk[m] * hl[m], m as f64 * delta))
            .sum();
        sum / (self.kernel[sk] * self.kernel[sl]).sqrt()
    }

    /// Full table `T[(l, k)] = <q_{l+1}(t_to)|q_{k+1}(t_from)>`, rows in parallel.
    pub fn propagator_matrix(&self, t_from: f64, t_to: f64) -> Operator {
        let n = self.dimension();
        let delta = t_from - t_to;
        let rows: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|sl| {
                (0..n)
                    .map(|sk| self.propagator_unchecked(sk, sl, delta))
                    .collect()
            })
            .collect();
        Operator(CMatrix::from_fn(n, n, |r, c| rows[r][c]))
    }

    /// Basis change `U[(k, m)] = <q_k(t)|m>` from the energy basis to the
    /// eigenbasis of `q1(t)`.
    pub fn m_to_q_matrix(&self, t: f64) -> Operator {
        Operator(self.eigenvector_matrix(t).adjoint())
    }

    /// Energy basis rebuilt as `|m> = sum_k |q_k(t)> <q_k(t)|m>`; column
    /// `m` holds the reconstructed `|m>`.
    pub fn reconstructed_energy_basis(&self, t: f64) -> Operator {
        let v = self.eigenvector_matrix(t);
        let u = v.adjoint();
        Operator(v * u)
    }

    /// `max |sum_k |q_k(t)><q_k(t)| - I|`.
    pub fn completeness_defect(&self, t: f64) -> f64 {
        let v = self.eigenvector_matrix(t);
        let sum = Operator(&v * v.adjoint());
        sum.max_abs_diff(&Operator::identity(self.dimension()))
    }

    /// `max |q1(t)|q_k> - q_k |q_k>|` over all roots.
    pub fn eigen_residual(&self, t: f64) -> f64 {
        let q = q1_op(&self.spec, t);
        (0..self.dimension())
            .map(|s| {
                let v = self.amplitudes(s, t);
                let lhs = q.apply(&v);
                let rhs = &v * Complex64::new(self.roots.roots[s], 0.0);
                vector_max_abs_diff(&lhs, &rhs)
            })
            .fold(0.0, f64::max)
    }

    /// `max |i d/dt |q_k(t)> + N1 |q_k(t)>|` with the derivative by central
    /// differences. The eigenstate phases `e^{+int}` make `-N1` the generator.
    pub fn schrodinger_residual(&self, t: f64, dt: f64) -> f64 {
        let n1 = number_op(&self.spec);
        (0..self.dimension())
            .map(|s| {
                let forward = self.amplitudes(s, t + dt);
                let backward = self.amplitudes(s, t - dt);
                let lhs = (forward - backward) * (I / (2.0 * dt));
                let rhs = -n1.apply(&self.amplitudes(s, t));
                vector_max_abs_diff(&lhs, &rhs)
            })
            .fold(0.0, f64::max)
    }

    /// `max |amplitude(t + 2 pi) - amplitude(t)|`.
    pub fn cyclicity_defect(&self, t: f64) -> f64 {
        let later = t + 2.0 * PI;
        (0..self.dimension())
            .map(|s| vector_max_abs_diff(&self.amplitudes(s, t), &self.amplitudes(s, later)))
            .fold(0.0, f64::max)
    }

    /// Largest entry of the quantum constraint applied to the embedded
    /// eigenstates. Zero when every eigenstate is physical.
    pub fn wheeler_dewitt_residual(&self, t: f64, n_trunc: usize) -> Result<f64> {
        let constraint = constraint_operator(&self.spec, n_trunc);
        let mut worst = 0.0_f64;
        for s in 0..self.dimension() {
            let state = StateVector::new(self.spec, self.amplitudes(s, t));
            let image = constraint.apply(&embed_state(&state, n_trunc)?);
            worst = image.iter().map(|z| z.norm()).fold(worst, f64::max);
        }
        Ok(worst)
    }

    /// Deviations `sum_k (2^{n+m} m! n!)^{-1/2} H_m H_n / sum_l (H_l^2 / 2^l l!) - delta_{mn}`
    /// for `0 <= m, n <= 2j`.
    pub fn identity_a1(&self) -> DMatrix<f64> {
        let n = self.dimension();
        DMatrix::from_fn(n, n, |a, b| {
            let sum: f64 = (0..n)
                .map(|s| self.functions[s][a] * self.functions[s][b] / self.kernel[s])
                .sum();
            sum - if a == b { 1.0 } else { 0.0 }
        })
    }

    /// `sum_k [sum_l H_l(q_k)^2 / (2^l l!)]^{-1}`; equals one.
    pub fn identity_a2(&self) -> f64 {
        self.roots.weights.iter().sum()
    }

    /// `sum_k (2^m m!)^{-1/2} H_m(q_k) / sum_l (H_l(q_k)^2 / 2^l l!)` for
    /// `m = 1..=2j`. These are the `n = 0` column of the `m != n` block of
    /// [`identity_a1`](Self::identity_a1) and therefore vanish.
    pub fn identity_a3_sums(&self) -> Vec<f64> {
        let n = self.dimension();
        let h0_scale = PI.powf(-0.25);
        (1..n)
            .map(|m| {
                (0..n)
                    .map(|s| {
                        // (2^m m!)^{-1/2} H_m e^{-x^2} / (sqrt(pi) K) = h_m h_0 / K
                        let x = self.roots.roots[s];
                        let h0 = h0_scale * (-0.5 * x * x).exp();
                        self.functions[s][m] * h0 / self.kernel[s]
                    })
                    .sum()
            })
            .collect()
    }
}

pub fn eigenstate(spec: &ModelSpec, k: usize, t: f64) -> Result<RelationalEigenstate> {
    RelationalBasis::new(spec)?.eigenstate(k, t)
}

pub fn normalization(spec: &ModelSpec, k: usize) -> Result<f64> {
    RelationalBasis::new(spec)?.normalization(k)
}

pub fn overlap(spec: &ModelSpec, k: usize, l: usize, t: f64) -> Result<Overlap> {
    RelationalBasis::new(spec)?.overlap(k, l, t)
}

pub fn propagator(
    spec: &ModelSpec,
    k: usize,
    l: usize,
    t_from: f64,
    t_to: f64,
) -> Result<Complex64> {
    RelationalBasis::new(spec)?.propagator(k, l, t_from, t_to)
}

pub fn m_to_q_matrix(spec: &ModelSpec, t: f64) -> Result<Operator> {
    Ok(RelationalBasis::new(spec)?.m_to_q_matrix(t))
}

pub fn identity_a1(spec: &ModelSpec) -> Result<DMatrix<f64>> {
    Ok(RelationalBasis::new(spec)?.identity_a1())
}
