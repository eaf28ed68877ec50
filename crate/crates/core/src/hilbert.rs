//! Physical Hilbert space of the constrained pair of oscillators.
//!
//! The quantum constraint `N1 + N2 + 1 - M` selects the states `|n1, n2>`
//! with `n1 + n2 = M - 1`. They are labelled by `m = (n1 - n2)/2` running
//! over `-j..=j`, `j = (M - 1)/2`, with the convention `n1 = j + m`,
//! `n2 = j - m` throughout the crate. Vectors and matrices are indexed by
//! `n1 = j + m`, so index 0 is `m = -j` and index `N - 1` is `m = +j`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::hermite_function;
use crate::linalg::{CVector, Operator};

/// The constraint constant `M` (with `hbar = 1`), which is also the
/// dimension of the physical space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelSpec {
    m: usize,
}

impl ModelSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidModel(0));
        }
        Ok(ModelSpec { m })
    }

    /// The constraint constant `M`.
    pub fn constraint(&self) -> usize {
        self.m
    }

    /// `N = 2j + 1 = M`.
    pub fn dimension(&self) -> usize {
        self.m
    }

    /// `j = (M - 1)/2`, possibly half-integer.
    pub fn j(&self) -> f64 {
        (self.m as f64 - 1.0) / 2.0
    }

    /// `2j`, the total excitation number `n1 + n2` of every physical state.
    pub fn two_j(&self) -> usize {
        self.m - 1
    }

    /// Vector index (`n1 = j + m`) of the basis label `m`.
    pub fn index_of(&self, label: f64) -> Result<usize> {
        let n1 = label + self.j();
        let rounded = n1.round();
        if (n1 - rounded).abs() > 1e-9 || rounded < 0.0 || rounded > self.two_j() as f64 {
            return Err(Error::LabelOutOfRange { label, j: self.j() });
        }
        Ok(rounded as usize)
    }

    /// Basis label `m = n1 - j` of a vector index.
    pub fn label_of(&self, index: usize) -> f64 {
        index as f64 - self.j()
    }

    /// Occupations `(n1, n2)` of the basis vector at `index`.
    pub fn occupations(&self, index: usize) -> (usize, usize) {
        (index, self.two_j() - index)
    }
}

/// Builds the model for a positive integer constraint constant `M`.
pub fn build_model(m: i64) -> Result<ModelSpec> {
    if m < 1 {
        return Err(Error::InvalidModel(m));
    }
    ModelSpec::new(m as usize)
}

/// Amplitudes in the `|m>` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub spec: ModelSpec,
    pub amplitudes: CVector,
}

impl StateVector {
    pub fn new(spec: ModelSpec, amplitudes: CVector) -> Self {
        assert_eq!(amplitudes.len(), spec.dimension(), "amplitude count");
        StateVector { spec, amplitudes }
    }

    /// The basis vector `|m>` at vector index `index`.
    pub fn basis(spec: ModelSpec, index: usize) -> Self {
        let mut amplitudes = CVector::zeros(spec.dimension());
        amplitudes[index] = Complex64::new(1.0, 0.0);
        StateVector { spec, amplitudes }
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Coordinate-space wavefunction `psi_m(q1, q2) = h_{j+m}(q1) h_{j-m}(q2)`.
pub fn wavefunction(spec: &ModelSpec, label: f64, q1: f64, q2: f64) -> Result<f64> {
    let (n1, n2) = spec.occupations(spec.index_of(label)?);
    Ok(hermite_function(n1, q1) * hermite_function(n2, q2))
}

/// Index of `|n1, n2>` in the truncated tensor basis of side `n_trunc`.
pub fn kinematical_index(n1: usize, n2: usize, n_trunc: usize) -> usize {
    n1 * n_trunc + n2
}

/// Quantum constraint `diag(n1 + n2 + 1 - M)` on the truncated tensor space.
pub fn constraint_operator(spec: &ModelSpec, n_trunc: usize) -> Operator {
    let mut diag = vec![0.0; n_trunc * n_trunc];
    for n1 in 0..n_trunc {
        for n2 in 0..n_trunc {
            diag[kinematical_index(n1, n2, n_trunc)] =
                n1 as f64 + n2 as f64 + 1.0 - spec.constraint() as f64;
        }
    }
    Operator::from_real_diagonal(&diag)
}

/// Orthogonal projector onto `span{|n1, n2> : n1 + n2 = M - 1}` within the
/// truncated tensor space of `n_trunc^2` states.
pub fn projector(spec: &ModelSpec, n_trunc: usize) -> Result<Operator> {
    check_truncation(spec, n_trunc)?;
    let mut diag = vec![0.0; n_trunc * n_trunc];
    for index in 0..spec.dimension() {
        let (n1, n2) = spec.occupations(index);
        diag[kinematical_index(n1, n2, n_trunc)] = 1.0;
    }
    Ok(Operator::from_real_diagonal(&diag))
}

/// Isometric embedding of a physical-space operator into the truncated tensor
/// space, zero outside the physical block.
pub fn embed(spec: &ModelSpec, op: &Operator, n_trunc: usize) -> Result<Operator> {
    check_truncation(spec, n_trunc)?;
    assert_eq!(op.dim(), spec.dimension(), "operator dimension");
    let mut out = Operator::zeros(n_trunc * n_trunc);
    for r in 0..spec.dimension() {
        let (r1, r2) = spec.occupations(r);
        for c in 0..spec.dimension() {
            let (c1, c2) = spec.occupations(c);
            out.0[(
                kinematical_index(r1, r2, n_trunc),
                kinematical_index(c1, c2, n_trunc),
            )] = op.0[(r, c)];
        }
    }
    Ok(out)
}

/// Embeds a physical state into the truncated tensor space.
pub fn embed_state(state: &StateVector, n_trunc: usize) -> Result<CVector> {
    let spec = &state.spec;
    check_truncation(spec, n_trunc)?;
    let mut out = CVector::zeros(n_trunc * n_trunc);
    for (index, amp) in state.amplitudes.iter().enumerate() {
        let (n1, n2) = spec.occupations(index);
        out[kinematical_index(n1, n2, n_trunc)] = *amp;
    }
    Ok(out)
}

fn check_truncation(spec: &ModelSpec, n_trunc: usize) -> Result<()> {
    if n_trunc < spec.dimension() {
        return Err(Error::TruncationTooSmall {
            n_trunc,
            dimension: spec.dimension(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use std::f64::consts::PI;

    /// Gauss-Hermite nodes and weights for `int e^{-x^2} f` straight from the
    /// Golub-Welsch eigenproblem, independent of the Newton-polished roots.
    fn golub_welsch(n: usize) -> Vec<(f64, f64)> {
        let jacobi = DMatrix::<f64>::from_fn(n, n, |r, c| {
            if r.abs_diff(c) == 1 {
                (r.max(c) as f64 / 2.0).sqrt()
            } else {
                0.0
            }
        });
        let eig = jacobi.symmetric_eigen();
        (0..n)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], PI.sqrt() * v0 * v0)
            })
            .collect()
    }

    #[test]
    fn model_parameters() {
        let s = build_model(2).unwrap();
        assert_eq!((s.dimension(), s.j()), (2, 0.5));
        let s = build_model(5).unwrap();
        assert_eq!((s.dimension(), s.j()), (5, 2.0));
        let s = build_model(1).unwrap();
        assert_eq!((s.dimension(), s.j(), s.occupations(0)), (1, 0.0, (0, 0)));
        assert_eq!(build_model(0), Err(Error::InvalidModel(0)));
        assert_eq!(build_model(-3), Err(Error::InvalidModel(-3)));
    }

    #[test]
    fn labels_round_trip() {
        let s = build_model(4).unwrap();
        for index in 0..4 {
            assert_eq!(s.index_of(s.label_of(index)).unwrap(), index);
        }
        assert_eq!(s.index_of(-1.5).unwrap(), 0);
        assert!(s.index_of(2.5).is_err());
        assert!(s.index_of(0.0).is_err());
    }

    #[test]
    fn constraint_annihilates_physical_basis() {
        for m in 1..=8 {
            let s = build_model(m).unwrap();
            let n_trunc = m as usize + 2;
            let c = constraint_operator(&s, n_trunc);
            for index in 0..s.dimension() {
                let v = embed_state(&StateVector::basis(s, index), n_trunc).unwrap();
                assert!(c.apply(&v).iter().all(|z| *z == Complex64::new(0.0, 0.0)));
            }
        }
    }

    #[test]
    fn ground_state_and_nodes() {
        let s = build_model(1).unwrap();
        assert!((wavefunction(&s, 0.0, 0.0, 0.0).unwrap() - PI.powf(-0.5)).abs() < 1e-15);
        let s = build_model(2).unwrap();
        for &q2 in &[-1.0, 0.2, 3.0] {
            assert_eq!(wavefunction(&s, 0.5, 0.0, q2).unwrap(), 0.0);
        }
        assert!(wavefunction(&s, 1.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn wavefunctions_orthonormal_on_plane() {
        let grid = golub_welsch(24);
        for m in 1..=8 {
            let s = build_model(m).unwrap();
            for a in 0..s.dimension() {
                for b in 0..s.dimension() {
                    let (la, lb) = (s.label_of(a), s.label_of(b));
                    let mut integral = 0.0;
                    for &(x, wx) in &grid {
                        for &(y, wy) in &grid {
                            let absorbed = wx * wy * (x * x + y * y).exp();
                            integral += absorbed
                                * wavefunction(&s, la, x, y).unwrap()
                                * wavefunction(&s, lb, x, y).unwrap();
                        }
                    }
                    let expected = if a == b { 1.0 } else { 0.0 };
                    assert!(
                        (integral - expected).abs() < 1e-10,
                        "M={m} {a} {b}: {integral}"
                    );
                }
            }
        }
    }

    #[test]
    fn wavefunction_parity() {
        for m in 1..=6 {
            let s = build_model(m).unwrap();
            let sign = if s.two_j().is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            for index in 0..s.dimension() {
                let l = s.label_of(index);
                let (a, b) = (0.37, -1.21);
                let lhs = wavefunction(&s, l, -a, -b).unwrap();
                let rhs = sign * wavefunction(&s, l, a, b).unwrap();
                assert!((lhs - rhs).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn projector_examples() {
        let s = build_model(2).unwrap();
        let p = projector(&s, 3).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(
            p.0[(kinematical_index(0, 1, 3), kinematical_index(0, 1, 3))],
            one
        );
        assert_eq!(
            p.0[(kinematical_index(1, 0, 3), kinematical_index(1, 0, 3))],
            one
        );
        assert_eq!(p.trace(), Complex64::new(2.0, 0.0));

        let s = build_model(1).unwrap();
        let p = projector(&s, 2).unwrap();
        assert_eq!(p.0[(0, 0)], one);
        assert_eq!(p.trace(), one);

        // n1 + n2 = 3 with both below 6: (0,3) (1,2) (2,1) (3,0)
        let s = build_model(4).unwrap();
        let count = (0..6)
            .flat_map(|a| (0..6).map(move |b| (a, b)))
            .filter(|(a, b)| a + b == 3)
            .count();
        assert_eq!(
            projector(&s, 6).unwrap().trace(),
            Complex64::new(count as f64, 0.0)
        );

        assert_eq!(
            projector(&s, 3),
            Err(Error::TruncationTooSmall {
                n_trunc: 3,
                dimension: 4
            })
        );
    }

    #[test]
    fn projector_is_orthogonal_projection() {
        for m in 1..=8 {
            let s = build_model(m).unwrap();
            let p = projector(&s, m as usize + 1).unwrap();
            assert!((&p * &p).max_abs_diff(&p) < 1e-14);
            assert!(p.hermiticity_defect() < 1e-14);
            assert_eq!(p.trace().re, m as f64);
        }
    }
}
