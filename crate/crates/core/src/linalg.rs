//! Small dense complex linear algebra.
//!
//! Only what the state and Bell-operator code needs: construction, products,
//! Kronecker products, traces, and Hermitian eigenvalues for PSD checks.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::{Error, Result};

pub type C64 = num_complex::Complex64;

/// Tolerance on `max |M_ij - conj(M_ji)|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Smallest eigenvalue allowed below zero for a PSD verdict.
pub const PSD_TOL: f64 = 1e-9;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::BadShape {
                dim,
                len: entries.len(),
            });
        }
        Ok(ComplexMatrix { dim, entries })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::BadShape {
                    dim,
                    len: row.len() * dim,
                });
            }
            entries.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self::from_entries(dim, entries)
    }

    /// Outer product |v⟩⟨v|.
    pub fn outer(v: &[C64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `max |M_ij - conj(M_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = self[(i, j)] - self[(j, i)].conj();
                worst = worst.max(abs(d));
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self, other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| abs(a - b))
            .fold(0.0, f64::max))
    }

    /// Conjugation `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        check_dims(self, u)?;
        Ok(&(u * self) * &u.adjoint())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on a dimension mismatch.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

pub fn pauli(axis: Axis) -> ComplexMatrix {
    let i = C64::new(0.0, 1.0);
    let entries = match axis {
        Axis::X => vec![ZERO, ONE, ONE, ZERO],
        Axis::Y => vec![ZERO, -i, i, ZERO],
        Axis::Z => vec![ONE, ZERO, ZERO, -ONE],
    };
    ComplexMatrix { dim: 2, entries }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (n, m) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            let aij = a[(i, j)];
            for k in 0..m {
                for l in 0..m {
                    out[(i * m + k, j * m + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `Tr(a·b)` as `Σ_ij a_ij b_ji`, without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    check_dims(a, b)?;
    let n = a.dim;
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a.entries[i * n + j] * b.entries[j * n + i];
        }
    }
    Ok(acc)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Runs cyclic Jacobi on the real symmetric embedding `[[Re, -Im], [Im, Re]]`,
/// whose spectrum is that of the input with every eigenvalue doubled.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let deviation = m.hermiticity_defect();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim;
    let size = 2 * n;
    let mut s = vec![0.0f64; size * size];
    for i in 0..n {
        for j in 0..n {
            // symmetrize to remove round-off asymmetry
            let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            s[i * size + j] = z.re;
            s[(i + n) * size + (j + n)] = z.re;
            s[i * size + (j + n)] = -z.im;
            s[(i + n) * size + j] = z.im;
        }
    }
    let mut doubled = symmetric_jacobi_eigenvalues(&mut s, size);
    doubled.sort_by(f64::total_cmp);
    Ok(doubled
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect())
}

/// True iff the smallest eigenvalue is at least `-tol`.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    let eig = hermitian_eigenvalues(m)?;
    Ok(eig.first().is_none_or(|&min| min >= -tol))
}

fn symmetric_jacobi_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    const MAX_SWEEPS: usize = 100;
    let scale = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

pub(crate) fn abs(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

fn check_dims(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn pauli_matrices() {
        assert_eq!(
            pauli(Axis::X),
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
        );
        assert_eq!(pauli(Axis::Z), ComplexMatrix::diagonal(&[1.0, -1.0]));
        let y = pauli(Axis::Y);
        assert_eq!(y[(0, 1)], C64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], C64::new(0.0, 1.0));
        assert_eq!(y[(0, 0)], ZERO);
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        assert_eq!(
            kron(&pauli(Axis::Z), &pauli(Axis::Z)),
            ComplexMatrix::diagonal(&[1.0, -1.0, -1.0, 1.0])
        );
        let xx = kron(&pauli(Axis::X), &pauli(Axis::X));
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { ONE } else { ZERO };
                assert_eq!(xx[(i, j)], expected);
            }
        }
    }

    #[test]
    fn trace_product_examples() {
        let mixed = ComplexMatrix::identity(8).scale(1.0 / 8.0);
        let t = trace_product(&mixed, &ComplexMatrix::identity(8)).unwrap();
        assert!((t - ONE).norm() < 1e-15);
        assert_eq!(
            trace_product(&pauli(Axis::Z), &pauli(Axis::X)).unwrap(),
            ZERO
        );

        let mut ghz = vec![ZERO; 8];
        ghz[0] = c(core::f64::consts::FRAC_1_SQRT_2);
        ghz[7] = c(core::f64::consts::FRAC_1_SQRT_2);
        let proj = ComplexMatrix::outer(&ghz);
        let x = pauli(Axis::X);
        let xxx = kron(&kron(&x, &x), &x);
        let t = trace_product(&proj, &xxx).unwrap();
        assert!((t - ONE).norm() < 1e-15);
    }

    #[test]
    fn trace_product_dimension_mismatch() {
        let err = trace_product(&ComplexMatrix::identity(2), &ComplexMatrix::identity(4));
        assert_eq!(err, Err(Error::DimensionMismatch { left: 2, right: 4 }));
    }

    #[test]
    fn psd_examples() {
        let mixed = ComplexMatrix::identity(8).scale(1.0 / 8.0);
        assert!(is_psd(&mixed, PSD_TOL).unwrap());
        let mut d = [0.0; 8];
        d[0] = 1.0;
        d[1] = -0.1;
        assert!(!is_psd(&ComplexMatrix::diagonal(&d), 1e-9).unwrap());
    }

    #[test]
    fn psd_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            is_psd(&m, PSD_TOL),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigenvalues_of_pauli_y() {
        let eig = hermitian_eigenvalues(&pauli(Axis::Y)).unwrap();
        assert!((eig[0] + 1.0).abs() < 1e-14 && (eig[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bad_shape() {
        assert!(matches!(
            ComplexMatrix::from_entries(2, vec![ONE; 3]),
            Err(Error::BadShape { dim: 2, len: 3 })
        ));
    }

    fn int_matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-3i32..=3, -3i32..=3), dim * dim).prop_map(move |v| {
            ComplexMatrix::from_entries(
                dim,
                v.into_iter()
                    .map(|(r, i)| C64::new(r as f64, i as f64))
                    .collect(),
            )
            .unwrap()
        })
    }

    fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
            ComplexMatrix::from_entries(dim, v.into_iter().map(|(r, i)| C64::new(r, i)).collect())
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn kron_is_associative_on_integers(a in int_matrix(2), b in int_matrix(2), c in int_matrix(2)) {
            prop_assert_eq!(kron(&kron(&a, &b), &c), kron(&a, &kron(&b, &c)));
        }

        #[test]
        fn trace_product_adjoint_symmetry(a in matrix(4), b in matrix(4)) {
            let lhs = trace_product(&a, &b).unwrap();
            let rhs = trace_product(&b.adjoint(), &a.adjoint()).unwrap().conj();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn jacobi_trace_and_gram_psd(a in matrix(8)) {
            // A†A is PSD and its eigenvalues sum to its trace.
            let g = &a.adjoint() * &a;
            let eig = hermitian_eigenvalues(&g).unwrap();
            let sum: f64 = eig.iter().sum();
            prop_assert!((sum - g.trace().re).abs() < 1e-9);
            prop_assert!(is_psd(&g, PSD_TOL).unwrap());
        }
    }
}
