//! GHZ-symmetric three-qubit states ρ(p,q) and their X-state structure.
//!
//! ρ(p,q) = (2q/√3 + p)|GHZ₊⟩⟨GHZ₊| + (2q/√3 − p)|GHZ₋⟩⟨GHZ₋| + (1 − 4q/√3)·𝟙/8
//! with |GHZ±⟩ = (|000⟩ ± |111⟩)/√2. Basis order is big-endian: qubit 1 is
//! the most significant bit, so |abc⟩ has index 4a + 2b + c.

use alloc::vec::Vec;

use crate::linalg::{self, ComplexMatrix, C64, HERMITIAN_TOL, PSD_TOL};
use crate::{ConstraintViolation, Error, Result, SQRT_3};

/// Lower edge of the triangle, q = −1/(4√3).
pub const Q_MIN: f64 = -1.0 / (4.0 * SQRT_3);
/// Upper edge of the triangle, q = √3/4.
pub const Q_MAX: f64 = SQRT_3 / 4.0;
/// Slack on both state constraints, absorbs parsing round-off.
pub const VALIDATE_SLACK: f64 = 1e-12;

const TRACE_TOL: f64 = 1e-12;

/// A point (p,q) of the GHZ-symmetric triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzParams {
    pub p: f64,
    pub q: f64,
}

impl GhzParams {
    pub const fn new(p: f64, q: f64) -> Self {
        GhzParams { p, q }
    }

    /// The GHZ₊ corner (1/2, √3/4).
    pub const GHZ_PLUS: GhzParams = GhzParams::new(0.5, Q_MAX);
    /// The maximally mixed state at the origin.
    pub const MAXIMALLY_MIXED: GhzParams = GhzParams::new(0.0, 0.0);

    /// Largest admissible |p| at this q, `1/8 + (√3/2)q`.
    pub fn p_limit(q: f64) -> f64 {
        0.125 + 0.5 * SQRT_3 * q
    }

    /// Checks both positivity constraints, boundary included.
    pub fn check(&self) -> core::result::Result<(), ConstraintViolation> {
        let GhzParams { p, q } = *self;
        if !p.is_finite() || !q.is_finite() {
            return Err(ConstraintViolation::NotFinite);
        }
        if q < Q_MIN - VALIDATE_SLACK {
            return Err(ConstraintViolation::QBelowMinimum { q });
        }
        if q > Q_MAX + VALIDATE_SLACK {
            return Err(ConstraintViolation::QAboveMaximum { q });
        }
        let limit = Self::p_limit(q);
        if p.abs() > limit + VALIDATE_SLACK {
            return Err(ConstraintViolation::PTooLarge {
                abs_p: p.abs(),
                limit,
            });
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    /// Weights of |GHZ₊⟩⟨GHZ₊|, |GHZ₋⟩⟨GHZ₋| and 𝟙/8.
    pub fn mixture_weights(&self) -> (f64, f64, f64) {
        let g = 2.0 * self.q / SQRT_3;
        (g + self.p, g - self.p, 1.0 - 4.0 * self.q / SQRT_3)
    }

    /// Closed-form spectrum: `1/8 + √3q/2 ± p` and six copies of `1/8 − q/(2√3)`.
    pub fn spectrum(&self) -> [f64; 8] {
        let top = 0.125 + 0.5 * SQRT_3 * self.q;
        let rest = 0.125 - self.q / (2.0 * SQRT_3);
        [
            top + self.p,
            top - self.p,
            rest,
            rest,
            rest,
            rest,
            rest,
            rest,
        ]
    }
}

pub fn validate(params: GhzParams) -> bool {
    params.is_valid()
}

/// A unit-trace, Hermitian, positive-semidefinite 8×8 operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    ghz: Option<GhzParams>,
}

impl DensityMatrix {
    /// Validates an arbitrary three-qubit operator as a state.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != 8 {
            return Err(Error::DimensionMismatch {
                left: matrix.dim(),
                right: 8,
            });
        }
        let deviation = matrix.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix("trace is not 1"));
        }
        if !linalg::is_psd(&matrix, PSD_TOL)? {
            return Err(Error::NotDensityMatrix("not positive semidefinite"));
        }
        Ok(DensityMatrix { matrix, ghz: None })
    }

    pub fn maximally_mixed() -> Self {
        density_matrix(GhzParams::MAXIMALLY_MIXED).expect("origin is a valid state")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// The (p,q) this state was built from, if it came from [`density_matrix`].
    pub fn ghz_params(&self) -> Option<GhzParams> {
        self.ghz
    }

    /// Eigenvalues, ascending. Uses the closed form for tagged GHZ-symmetric
    /// states and the generic Hermitian solver otherwise.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self.ghz {
            Some(params) => {
                let mut eig = params.spectrum().to_vec();
                eig.sort_by(f64::total_cmp);
                eig
            }
            None => linalg::hermitian_eigenvalues(&self.matrix)
                .expect("density matrices are Hermitian by construction"),
        }
    }
}

/// Builds ρ(p,q); fails with the violated constraint for points outside the triangle.
pub fn density_matrix(params: GhzParams) -> Result<DensityMatrix> {
    params.check()?;
    let (w_plus, w_minus, w_mixed) = params.mixture_weights();
    let mut m = ComplexMatrix::zeros(8);
    // |GHZ±⟩⟨GHZ±| = (|000⟩⟨000| + |111⟩⟨111| ± |000⟩⟨111| ± |111⟩⟨000|)/2
    let corner_diag = 0.5 * (w_plus + w_minus);
    let corner_off = 0.5 * (w_plus - w_minus);
    for i in 0..8 {
        m[(i, i)] = C64::new(w_mixed / 8.0, 0.0);
    }
    m[(0, 0)] += corner_diag;
    m[(7, 7)] += corner_diag;
    m[(0, 7)] = C64::new(corner_off, 0.0);
    m[(7, 0)] = C64::new(corner_off, 0.0);
    Ok(DensityMatrix {
        matrix: m,
        ghz: Some(params),
    })
}

/// Diagonal and anti-diagonal entries of an X-shaped 8×8 state.
///
/// Index `j` of each array is the conventional 1-based label `j + 1`: `a[j]` sits at
/// `(j, j)`, `b[j]` at `(7 − j, 7 − j)` and `z[j]` at `(j, 7 − j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateElements {
    pub a: [f64; 4],
    pub b: [f64; 4],
    pub z: [C64; 4],
}

/// Off-X entries above this magnitude make [`x_elements`] fail.
pub const X_STATE_TOL: f64 = 1e-10;

pub fn x_elements(rho: &DensityMatrix) -> Result<XStateElements> {
    let m = rho.matrix();
    for row in 0..8 {
        for col in 0..8 {
            if row == col || row + col == 7 {
                continue;
            }
            let magnitude = linalg::abs(m[(row, col)]);
            if magnitude > X_STATE_TOL {
                return Err(Error::NotXState {
                    row,
                    col,
                    magnitude,
                });
            }
        }
    }
    let mut out = XStateElements {
        a: [0.0; 4],
        b: [0.0; 4],
        z: [C64::new(0.0, 0.0); 4],
    };
    for j in 0..4 {
        out.a[j] = m[(j, j)].re;
        out.b[j] = m[(7 - j, 7 - j)].re;
        out.z[j] = m[(j, 7 - j)];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, pauli, Axis};
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn validate_examples() {
        assert!(validate(GhzParams::new(0.5, SQRT_3 / 4.0)));
        assert!(!validate(GhzParams::new(0.2, 0.0)));
        assert!(validate(GhzParams::new(0.0, -1.0 / (4.0 * SQRT_3))));
    }

    #[test]
    fn constraint_reported() {
        assert_eq!(
            GhzParams::new(0.0, 0.5).check(),
            Err(ConstraintViolation::QAboveMaximum { q: 0.5 })
        );
        assert_eq!(
            GhzParams::new(0.0, -0.2).check(),
            Err(ConstraintViolation::QBelowMinimum { q: -0.2 })
        );
        assert!(matches!(
            density_matrix(GhzParams::new(0.2, 0.0)),
            Err(Error::InvalidParams(ConstraintViolation::PTooLarge { .. }))
        ));
        assert_eq!(
            GhzParams::new(f64::NAN, 0.0).check(),
            Err(ConstraintViolation::NotFinite)
        );
    }

    #[test]
    fn ghz_corner_is_pure_projector() {
        let rho = density_matrix(GhzParams::GHZ_PLUS).unwrap();
        let m = rho.matrix();
        for i in 0..8 {
            for j in 0..8 {
                let expected = if (i == 0 || i == 7) && (j == 0 || j == 7) {
                    0.5
                } else {
                    0.0
                };
                assert!(close(m[(i, j)].re, expected, 1e-15), "({i},{j})");
                assert_eq!(m[(i, j)].im, 0.0);
            }
        }
    }

    #[test]
    fn origin_is_maximally_mixed() {
        let rho = density_matrix(GhzParams::new(0.0, 0.0)).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::identity(8).scale(0.125));
    }

    #[test]
    fn entrywise_example() {
        // Independent evaluation of the three-term sum from explicit projectors.
        let (p, q) = (0.1, 0.2);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let mut plus = [C64::new(0.0, 0.0); 8];
        plus[0] = C64::new(h, 0.0);
        plus[7] = C64::new(h, 0.0);
        let mut minus = plus;
        minus[7] = C64::new(-h, 0.0);
        let oracle = &(&ComplexMatrix::outer(&plus).scale(2.0 * q / SQRT_3 + p)
            + &ComplexMatrix::outer(&minus).scale(2.0 * q / SQRT_3 - p))
            + &ComplexMatrix::identity(8).scale((1.0 - 4.0 * q / SQRT_3) / 8.0);
        let rho = density_matrix(GhzParams::new(p, q)).unwrap();
        assert!(rho.matrix().max_abs_diff(&oracle).unwrap() < 1e-15);

        let m = rho.matrix();
        assert!(close(m[(0, 0)].re, 0.298_205_080_756_887_7, 1e-15));
        assert!(close(m[(7, 7)].re, 0.298_205_080_756_887_7, 1e-15));
        for i in 1..7 {
            assert!(close(m[(i, i)].re, 0.067_264_973_081_037_42, 1e-15));
        }
        assert!(close(m[(0, 7)].re, 0.1, 1e-15));
        assert!(close(m[(7, 0)].re, 0.1, 1e-15));
    }

    #[test]
    fn psd_example_and_spectrum() {
        let params = GhzParams::new(0.3, Q_MAX);
        let rho = density_matrix(params).unwrap();
        assert!(linalg::is_psd(rho.matrix(), PSD_TOL).unwrap());
        let generic = linalg::hermitian_eigenvalues(rho.matrix()).unwrap();
        let closed = rho.eigenvalues();
        for (g, c) in generic.iter().zip(&closed) {
            assert!(close(*g, *c, 1e-10));
        }
    }

    #[test]
    fn from_matrix_checks() {
        let rho = DensityMatrix::from_matrix(ComplexMatrix::identity(8).scale(0.125)).unwrap();
        assert_eq!(rho.ghz_params(), None);
        assert_eq!(rho.eigenvalues(), alloc::vec![0.125; 8]);
        assert_eq!(
            DensityMatrix::from_matrix(ComplexMatrix::identity(8)),
            Err(Error::NotDensityMatrix("trace is not 1"))
        );
        let mut d = [0.0; 8];
        d[0] = 1.1;
        d[1] = -0.1;
        assert_eq!(
            DensityMatrix::from_matrix(ComplexMatrix::diagonal(&d)),
            Err(Error::NotDensityMatrix("not positive semidefinite"))
        );
    }

    #[test]
    fn x_elements_examples() {
        let e = x_elements(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(e.a, [0.125; 4]);
        assert_eq!(e.b, [0.125; 4]);
        assert!(e.z.iter().all(|z| z.norm() == 0.0));

        let e = x_elements(&density_matrix(GhzParams::GHZ_PLUS).unwrap()).unwrap();
        assert!(close(e.a[0], 0.5, 1e-15) && close(e.b[0], 0.5, 1e-15));
        assert!(close(e.z[0].re, 0.5, 1e-15));
        for j in 1..4 {
            assert!(e.a[j].abs() < 1e-15 && e.b[j].abs() < 1e-15 && e.z[j].norm() < 1e-15);
        }
    }

    #[test]
    fn x_elements_rejects_non_x() {
        let mut m = ComplexMatrix::identity(8).scale(0.125);
        m[(1, 2)] = C64::new(0.01, 0.0);
        m[(2, 1)] = C64::new(0.01, 0.0);
        let rho = DensityMatrix::from_matrix(m).unwrap();
        assert!(matches!(
            x_elements(&rho),
            Err(Error::NotXState { row: 1, col: 2, .. })
        ));
    }

    fn flip_all() -> ComplexMatrix {
        let x = pauli(Axis::X);
        kron(&kron(&x, &x), &x)
    }

    /// Permutation matrix sending qubit k to position perm[k].
    fn qubit_permutation(perm: [usize; 3]) -> ComplexMatrix {
        let mut u = ComplexMatrix::zeros(8);
        for idx in 0..8usize {
            let bits = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
            let mut out = [0usize; 3];
            for k in 0..3 {
                out[perm[k]] = bits[k];
            }
            let target = out[0] << 2 | out[1] << 1 | out[2];
            u[(target, idx)] = C64::new(1.0, 0.0);
        }
        u
    }

    fn valid_params() -> impl Strategy<Value = GhzParams> {
        (0.0f64..=1.0, -1.0f64..=1.0).prop_map(|(t, s)| {
            let q = Q_MIN + t * (Q_MAX - Q_MIN);
            GhzParams::new(s * GhzParams::p_limit(q), q)
        })
    }

    proptest! {
        #[test]
        fn invariant_under_triple_flip(params in valid_params()) {
            let rho = density_matrix(params).unwrap();
            let flipped = rho.matrix().conjugate_by(&flip_all()).unwrap();
            prop_assert!(rho.matrix().max_abs_diff(&flipped).unwrap() < 1e-12);
        }

        #[test]
        fn invariant_under_qubit_permutations(params in valid_params()) {
            let rho = density_matrix(params).unwrap();
            for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                let moved = rho.matrix().conjugate_by(&qubit_permutation(perm)).unwrap();
                prop_assert!(rho.matrix().max_abs_diff(&moved).unwrap() < 1e-12);
            }
        }

        #[test]
        fn spectrum_matches_eigensolver(params in valid_params()) {
            let rho = density_matrix(params).unwrap();
            let generic = linalg::hermitian_eigenvalues(rho.matrix()).unwrap();
            let closed = rho.eigenvalues();
            for (g, c) in generic.iter().zip(&closed) {
                prop_assert!((g - c).abs() < 1e-10);
            }
            prop_assert!(linalg::is_psd(rho.matrix(), PSD_TOL).unwrap());
        }

        #[test]
        fn invalid_points_are_not_psd(t in 0.0f64..=1.0, excess in 1e-6f64..0.2, sign in prop::bool::ANY) {
            // Build the matrix directly from the formula, bypassing validation.
            let q = Q_MIN + t * (Q_MAX - Q_MIN);
            let p = (GhzParams::p_limit(q) + excess) * if sign { 1.0 } else { -1.0 };
            let (wp, wm, wi) = GhzParams::new(p, q).mixture_weights();
            let mut m = ComplexMatrix::identity(8).scale(wi / 8.0);
            m[(0, 0)] += 0.5 * (wp + wm);
            m[(7, 7)] += 0.5 * (wp + wm);
            m[(0, 7)] = C64::new(0.5 * (wp - wm), 0.0);
            m[(7, 0)] = C64::new(0.5 * (wp - wm), 0.0);
            prop_assert!(!linalg::is_psd(&m, PSD_TOL).unwrap());
            prop_assert!(!validate(GhzParams::new(p, q)));
        }

        #[test]
        fn x_elements_round_trip(params in valid_params()) {
            let e = x_elements(&density_matrix(params).unwrap()).unwrap();
            let top = 0.125 + SQRT_3 * params.q / 2.0;
            let rest = 0.125 - params.q / (2.0 * SQRT_3);
            prop_assert!((e.a[0] - top).abs() < 1e-14 && (e.b[0] - top).abs() < 1e-14);
            prop_assert!((e.z[0].re - params.p).abs() < 1e-14);
            for j in 1..4 {
                prop_assert!((e.a[j] - rest).abs() < 1e-14 && (e.b[j] - rest).abs() < 1e-14);
                prop_assert!(e.z[j].norm() == 0.0);
            }
            let total: f64 = e.a.iter().chain(&e.b).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
