//! Entanglement classes of ρ(p,q) and genuine multipartite concurrence.

use core::fmt;

use crate::state::{GhzParams, XStateElements};
use crate::{Error, Result, SQRT_3};

/// Points this close to a class boundary take the lower class.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// Ordered from weakest to strongest entanglement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntanglementClass {
    Separable,
    Biseparable,
    W,
    Ghz,
}

impl EntanglementClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EntanglementClass::Separable => "Separable",
            EntanglementClass::Biseparable => "Biseparable",
            EntanglementClass::W => "W",
            EntanglementClass::Ghz => "GHZ",
        }
    }

    /// W and GHZ classes.
    pub fn is_genuinely_entangled(self) -> bool {
        self >= EntanglementClass::W
    }
}

impl fmt::Display for EntanglementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Membership in the separable quadrilateral with corners (0,−1/(4√3)),
/// (1/8,0), (0,√3/4), (−1/8,0), tested as four half-planes folded by |p|.
pub fn in_separable_polygon(params: GhzParams) -> bool {
    let p = params.p.abs();
    let q = params.q;
    let lower = 8.0 * p - 4.0 * SQRT_3 * q;
    let upper = 8.0 * p + 4.0 * q / SQRT_3;
    lower <= 1.0 + BOUNDARY_SLACK && upper <= 1.0 + BOUNDARY_SLACK
}

/// Right-hand side of the biseparability bound, `3/8 − (√3/2)q`.
pub fn biseparable_limit(q: f64) -> f64 {
    0.375 - 0.5 * SQRT_3 * q
}

pub fn is_at_most_biseparable(params: GhzParams) -> bool {
    params.p.abs() <= biseparable_limit(params.q) + BOUNDARY_SLACK
}

/// `lhs − rhs` of the W-type polynomial inequality, with the total term
/// magnitude for scaling the tie tolerance.
///
/// lhs = 9216p⁴ + p²(−6768 + 17856√3q − 34560q² − 1024√3q³)
/// rhs = 1521 − 5148√3q + 13536q² + 2432√3q³ − 13056q⁴ − 3072√3q⁵
pub fn w_polynomial_margin(params: GhzParams) -> (f64, f64) {
    let (p, q) = (params.p, params.q);
    let p2 = p * p;
    let (q2, q3) = (q * q, q * q * q);
    let (q4, q5) = (q2 * q2, q2 * q3);
    let terms = [
        9216.0 * p2 * p2,
        -6768.0 * p2,
        17856.0 * SQRT_3 * q * p2,
        -34560.0 * q2 * p2,
        -1024.0 * SQRT_3 * q3 * p2,
        -1521.0,
        5148.0 * SQRT_3 * q,
        -13536.0 * q2,
        -2432.0 * SQRT_3 * q3,
        13056.0 * q4,
        3072.0 * SQRT_3 * q5,
    ];
    let magnitude = terms.iter().map(|t| t.abs()).sum();
    (neumaier_sum(&terms), magnitude)
}

/// Compensated summation; the coefficients span four orders of magnitude.
fn neumaier_sum(terms: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for &t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            carry += (sum - s) + t;
        } else {
            carry += (t - s) + sum;
        }
        sum = s;
    }
    sum + carry
}

pub fn classify(params: GhzParams) -> Result<EntanglementClass> {
    params.check()?;
    if in_separable_polygon(params) {
        return Ok(EntanglementClass::Separable);
    }
    if is_at_most_biseparable(params) {
        return Ok(EntanglementClass::Biseparable);
    }
    let (margin, magnitude) = w_polynomial_margin(params);
    if margin <= BOUNDARY_SLACK * magnitude.max(1.0) {
        Ok(EntanglementClass::W)
    } else {
        Ok(EntanglementClass::Ghz)
    }
}

/// Genuine multipartite concurrence of an X state, `2·maxᵢ(0, |zᵢ| − wᵢ)`
/// with `wᵢ = Σ_{j≠i} √(aⱼbⱼ)`.
pub fn cgm_x(elems: &XStateElements) -> Result<f64> {
    const TOL: f64 = 1e-12;
    let mut roots = [0.0f64; 4];
    for j in 0..4 {
        let prod = elems.a[j] * elems.b[j];
        if prod < -TOL {
            return Err(Error::NegativeBlock {
                index: j + 1,
                value: prod,
            });
        }
        roots[j] = libm::sqrt(prod.max(0.0));
    }
    let total: f64 = roots.iter().sum();
    let mut best = 0.0f64;
    for i in 0..4 {
        let w = total - roots[i];
        let z = libm::hypot(elems.z[i].re, elems.z[i].im);
        best = best.max(z - w);
    }
    Ok(2.0 * best)
}

/// `2|p| − 3/4 + √3q`, negative for weakly entangled states.
pub fn cgm_unclamped(params: GhzParams) -> Result<f64> {
    params.check()?;
    Ok(2.0 * params.p.abs() - 0.75 + SQRT_3 * params.q)
}

/// Closed-form C_GM of ρ(p,q), clamped at zero.
pub fn cgm_closed_form(params: GhzParams) -> Result<f64> {
    Ok(cgm_unclamped(params)?.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{density_matrix, x_elements, Q_MAX, Q_MIN};
    use crate::C64;

    fn p(p: f64, q: f64) -> GhzParams {
        GhzParams::new(p, q)
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(p(0.0, Q_MAX)).unwrap(),
            EntanglementClass::Separable
        );
        assert_eq!(classify(p(0.5, Q_MAX)).unwrap(), EntanglementClass::Ghz);
        // W polynomial: lhs ≈ 74.65, rhs ≈ 0 on the q = √3/4 edge.
        let (margin, _) = w_polynomial_margin(p(0.3, Q_MAX));
        assert!((margin - 74.6496).abs() < 1e-9);
        assert_eq!(classify(p(0.3, Q_MAX)).unwrap(), EntanglementClass::Ghz);
    }

    #[test]
    fn classify_interior_points() {
        assert_eq!(classify(p(0.0, 0.0)).unwrap(), EntanglementClass::Separable);
        assert_eq!(
            classify(p(0.0, Q_MIN)).unwrap(),
            EntanglementClass::Separable
        );
        assert_eq!(
            classify(p(0.125, 0.0)).unwrap(),
            EntanglementClass::Separable
        );
        assert_eq!(
            classify(p(0.2, 0.1)).unwrap(),
            EntanglementClass::Biseparable
        );
        // (0.2,0.3) has W-polynomial margin −70.49 (mpmath).
        assert_eq!(classify(p(0.2, 0.3)).unwrap(), EntanglementClass::W);
        assert_eq!(classify(p(0.25, 0.15)).unwrap(), EntanglementClass::W);
        assert_eq!(classify(p(0.4, 0.35)).unwrap(), EntanglementClass::Ghz);
        assert!(classify(p(0.2, 0.0)).is_err());
    }

    #[test]
    fn boundary_takes_lower_class() {
        // Corner (1/8, 0) of the polygon and the biseparable line.
        assert_eq!(
            classify(p(-0.125, 0.0)).unwrap(),
            EntanglementClass::Separable
        );
        let q = 0.2;
        let edge = biseparable_limit(q);
        assert_eq!(
            classify(p(edge, q)).unwrap(),
            EntanglementClass::Biseparable
        );
        assert_ne!(
            classify(p(edge + 1e-9, q)).unwrap(),
            EntanglementClass::Biseparable
        );
    }

    #[test]
    fn cgm_x_examples() {
        let e = x_elements(&density_matrix(p(0.0, 0.0)).unwrap()).unwrap();
        assert_eq!(cgm_x(&e).unwrap(), 0.0);
        let e = x_elements(&density_matrix(GhzParams::GHZ_PLUS).unwrap()).unwrap();
        assert!((cgm_x(&e).unwrap() - 1.0).abs() < 1e-15);
        // 2·(0.3 − 3·(1/8 − 0.3/(2√3))), evaluated with mpmath.
        let e = x_elements(&density_matrix(p(0.3, 0.3)).unwrap()).unwrap();
        assert!((cgm_x(&e).unwrap() - 0.369_615_242_270_663_2).abs() < 1e-14);
    }

    #[test]
    fn cgm_x_rejects_negative_block() {
        let e = XStateElements {
            a: [0.5, 0.5, 0.0, 0.0],
            b: [-0.1, 0.1, 0.0, 0.0],
            z: [C64::new(0.0, 0.0); 4],
        };
        assert_eq!(
            cgm_x(&e),
            Err(Error::NegativeBlock {
                index: 1,
                value: -0.05
            })
        );
    }

    #[test]
    fn cgm_closed_form_examples() {
        assert!((cgm_closed_form(GhzParams::GHZ_PLUS).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(cgm_closed_form(p(0.0, 0.0)).unwrap(), 0.0);
        assert!(cgm_unclamped(p(0.0, 0.0)).unwrap() < 0.0);
        for &pv in &[0.05, -0.2, 0.37, 0.5] {
            let c = cgm_closed_form(p(pv, Q_MAX)).unwrap();
            assert!((c - 2.0 * f64::abs(pv)).abs() < 1e-15);
        }
    }

    fn grid(n: usize) -> impl Iterator<Item = GhzParams> {
        (0..n).flat_map(move |i| {
            (0..n).filter_map(move |j| {
                let q = Q_MIN + (Q_MAX - Q_MIN) * i as f64 / (n - 1) as f64;
                let pv = -0.5 + j as f64 / (n - 1) as f64;
                let params = p(pv, q);
                params.is_valid().then_some(params)
            })
        })
    }

    #[test]
    fn classification_properties_on_grid() {
        for params in grid(120) {
            let class = classify(params).unwrap();
            assert_eq!(class, classify(p(-params.p, params.q)).unwrap());
            if class == EntanglementClass::Separable {
                assert!(params.p.abs() <= 0.125 + 1e-12);
            }
            if class == EntanglementClass::Ghz {
                assert!(params.p.abs() > biseparable_limit(params.q));
            }
            // C_GM vanishes exactly on the biseparable line, up to the tie slack.
            if cgm_closed_form(params).unwrap() > 2.0 * BOUNDARY_SLACK {
                assert!(class.is_genuinely_entangled(), "{params:?}");
            }
        }
    }

    #[test]
    fn cgm_routes_agree_on_grid() {
        for params in grid(200) {
            let e = x_elements(&density_matrix(params).unwrap()).unwrap();
            let via_x = cgm_x(&e).unwrap();
            let closed = cgm_closed_form(params).unwrap();
            assert!(
                (via_x - closed).abs() < 1e-10,
                "{params:?}: {via_x} vs {closed}"
            );
        }
    }
}
