//! Dense square complex matrices and state vectors.
//!
//! Everything downstream (projectors, effects, states, candidate POVMs) is
//! carried by [`ComplexMatrix`]. Storage is row-major, dimensions are small,
//! and all operations are plain loops; no attempt is made at large-dimension
//! performance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::DEFAULT_TOL;

/// Norm below which a vector counts as zero.
pub const VECTOR_NORM_FLOOR: f64 = 1e-12;

/// Dense square matrix over `Complex64`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from rows, validating squareness and finiteness.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
        }
        let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
        for (idx, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(idx));
            }
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix entry by entry; `f(i, j)` fills row `i`, column `j`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }

    /// Diagonal matrix from real entries.
    pub fn diag(entries: &[f64]) -> Self {
        Self::from_fn(entries.len(), |i, j| {
            if i == j {
                Complex64::new(entries[i], 0.0)
            } else {
                Complex64::ZERO
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.dim + j] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance to `other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    /// Hermiticity test: `||A - A*||_F <= tol * max(1, ||A||_F)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol * self.frobenius_norm().max(1.0)
    }

    /// `||A - A*||_F`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                sum += (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// `(A + A*) / 2`, which strips round-off asymmetry.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

/// Hilbert-Schmidt pairing `Tr(A* B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mut sum = Complex64::ZERO;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            sum += a.get(i, j).conj() * b.get(i, j);
        }
    }
    Ok(sum)
}

/// Complex column vector; guaranteed nonzero and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    data: Vec<Complex64>,
}

impl StateVector {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        for (idx, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(idx));
            }
        }
        let norm = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= VECTOR_NORM_FLOOR {
            return Err(Error::ZeroVector { norm });
        }
        Ok(Self { data })
    }

    pub fn from_re(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Standard basis vector `|k>`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut data = vec![Complex64::ZERO; dim];
        data[k] = Complex64::ONE;
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product, conjugate-linear in `self`: sum of `conj(self_k) * other_k`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        StateVector::new(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scale(Complex64::new(1.0 / n, 0.0))
    }

    /// Whether each entry agrees with `other` within `tol` in absolute value.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

/// Outer product `|left><right|`.
pub fn outer(left: &StateVector, right: &StateVector) -> Result<ComplexMatrix> {
    if left.dim() != right.dim() {
        return Err(Error::DimMismatch {
            left: left.dim(),
            right: right.dim(),
        });
    }
    Ok(ComplexMatrix::from_fn(left.dim(), |i, j| {
        left.entries()[i] * right.entries()[j].conj()
    }))
}

/// Outer product of raw coefficient slices, `|left><right|`; lengths must agree.
pub(crate) fn outer_raw(left: &[Complex64], right: &[Complex64]) -> ComplexMatrix {
    debug_assert_eq!(left.len(), right.len());
    ComplexMatrix::from_fn(left.len(), |i, j| left[i] * right[j].conj())
}

/// Checks two matrices for entrywise agreement within `tol`.
pub fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    a.dim() == b.dim()
        && a.entries()
            .iter()
            .zip(b.entries())
            .all(|(x, y)| (x - y).norm() <= tol)
}

/// Shared default for "is this residual negligible" checks, relative to
/// `max(1, scale)`.
pub fn within_default_tol(residual: f64, scale: f64) -> bool {
    residual <= DEFAULT_TOL * scale.max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adjoint_of_nilpotent_transposes() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let expected = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(a.adjoint(), expected);
    }

    #[test]
    fn adjoint_fixes_identity() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(id.adjoint(), id);
    }

    #[test]
    fn adjoint_conjugates() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(a.adjoint().get(1, 0), c(0.0, -1.0));
        assert_eq!(a.adjoint().get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn adjoint_is_an_involution() {
        let mut rng = Rng::seeded(7);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 4);
            assert_eq!(a.adjoint().adjoint(), a);
        }
    }

    #[test]
    fn trace_examples() {
        assert_eq!(ComplexMatrix::identity(3).trace(), c(3.0, 0.0));
        assert_eq!(ComplexMatrix::diag(&[0.5, 0.5]).trace(), c(1.0, 0.0));
        // trace of 2|0><0| is 2
        let e0 = ComplexMatrix::diag(&[2.0, 0.0]);
        assert_eq!(e0.trace(), c(2.0, 0.0));
    }

    #[test]
    fn trace_is_cyclic() {
        let mut rng = Rng::seeded(11);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 3);
            let b = random_matrix(&mut rng, 3);
            let ab = a.mul(&b).unwrap().trace();
            let ba = b.mul(&a).unwrap().trace();
            let scale = ab.norm().max(1.0);
            assert!((ab - ba).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn hermitian_checks() {
        let pauli_y = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(pauli_y.is_hermitian(DEFAULT_TOL));

        let nilpotent = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(!nilpotent.is_hermitian(DEFAULT_TOL));
    }

    #[test]
    fn hs_inner_examples() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(hs_inner(&id, &id).unwrap(), c(2.0, 0.0));

        let pauli_x = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let pauli_z = ComplexMatrix::diag(&[1.0, -1.0]);
        assert_eq!(hs_inner(&pauli_x, &pauli_z).unwrap(), c(0.0, 0.0));

        let mut rng = Rng::seeded(3);
        let a = random_matrix(&mut rng, 3);
        let self_pair = hs_inner(&a, &a).unwrap();
        assert!(self_pair.im.abs() <= 1e-12 * self_pair.re.max(1.0));
        assert!((self_pair.re - a.frobenius_norm().powi(2)).abs() <= 1e-10);
        assert!(self_pair.re >= 0.0);
    }

    #[test]
    fn hs_inner_rejects_dim_mismatch() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(
            hs_inner(&a, &b),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        let err = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap_err();
        assert!(err.to_string().contains("square"));

        let err =
            ComplexMatrix::from_rows(&[vec![c(f64::NAN, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0); 2]])
                .unwrap_err();
        assert!(matches!(err, Error::NonFinite(0)));
    }

    #[test]
    fn state_vector_rejects_zero() {
        assert!(matches!(
            StateVector::new(vec![c(0.0, 0.0), c(1e-13, 0.0)]),
            Err(Error::ZeroVector { .. })
        ));
    }

    pub(crate) fn random_matrix(rng: &mut Rng, dim: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, |_, _| rng.complex_gaussian())
    }
}
