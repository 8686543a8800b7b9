//! Maximization of Bell expressions over projective qubit measurements.
//!
//! Each party measures `n⃗·σ⃗` for a unit Bloch vector `n⃗`. With the other five
//! observables fixed, the expression is affine in one Bloch vector,
//! `v⃗·n⃗ + c`, so that observable's best choice is `v⃗/‖v⃗‖`. The see-saw cycles
//! through the six observables until a full sweep stops improving, and a
//! multi-start loop keeps the best local maximum.
//!
//! Expressions are maximized as signed quantities. For facets whose negation
//! has a different local bound (Śliwa #15, Bancal #99) this is the only
//! meaningful reading; for Mermin and Svetlichny it coincides with maximizing
//! the absolute value because every term contains party A.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bell::{BellExpression, CorrelationTensor, Slot, Term};
use crate::linalg::{self, kron, pauli, Axis, ComplexMatrix};
use crate::state::DensityMatrix;

/// Gradients shorter than this leave the observable unchanged.
pub const STALL_NORM: f64 = 1e-14;

/// A ±1-valued qubit observable given by its Bloch-sphere angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableDirection {
    /// Polar angle in `[0, π]`.
    pub theta: f64,
    /// Azimuth in `[0, 2π)`.
    pub phi: f64,
}

impl ObservableDirection {
    pub fn new(theta: f64, phi: f64) -> Self {
        ObservableDirection { theta, phi }
    }

    /// Angles of a nonzero 3-vector (normalized first).
    pub fn from_bloch(v: [f64; 3]) -> Self {
        let norm = libm::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        let z = (v[2] / norm).clamp(-1.0, 1.0);
        let mut phi = libm::atan2(v[1], v[0]);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        ObservableDirection {
            theta: libm::acos(z),
            phi,
        }
    }

    pub fn bloch(&self) -> [f64; 3] {
        let (st, ct) = (libm::sin(self.theta), libm::cos(self.theta));
        [st * libm::cos(self.phi), st * libm::sin(self.phi), ct]
    }

    /// Uniform on the sphere: cos θ uniform in [−1,1], φ uniform in [0,2π).
    pub fn random(rng: &mut impl Rng) -> Self {
        let cos_theta: f64 = 2.0 * rng.random::<f64>() - 1.0;
        let phi: f64 = 2.0 * PI * rng.random::<f64>();
        ObservableDirection {
            theta: libm::acos(cos_theta),
            phi,
        }
    }
}

/// `sinθcosφ·σx + sinθsinφ·σy + cosθ·σz`.
pub fn observable(d: ObservableDirection) -> ComplexMatrix {
    let [x, y, z] = d.bloch();
    let sx = pauli(Axis::X).scale(x);
    let sy = pauli(Axis::Y).scale(y);
    let sz = pauli(Axis::Z).scale(z);
    &(&sx + &sy) + &sz
}

/// Observables for A0, A1, B0, B1, C0, C1, indexed `2·party + setting`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementScenario {
    pub directions: [ObservableDirection; 6],
}

impl MeasurementScenario {
    pub const LABELS: [&'static str; 6] = ["A0", "A1", "B0", "B1", "C0", "C1"];

    pub fn new(directions: [ObservableDirection; 6]) -> Self {
        MeasurementScenario { directions }
    }

    pub fn uniform(d: ObservableDirection) -> Self {
        MeasurementScenario { directions: [d; 6] }
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        let mut directions = [ObservableDirection::new(0.0, 0.0); 6];
        for d in directions.iter_mut() {
            *d = ObservableDirection::random(rng);
        }
        MeasurementScenario { directions }
    }

    pub fn direction(&self, party: usize, setting: usize) -> ObservableDirection {
        self.directions[2 * party + setting]
    }

    fn blochs(&self) -> [[f64; 3]; 6] {
        self.directions.map(|d| d.bloch())
    }
}

/// Re Tr[ρ·(O_A ⊗ O_B ⊗ O_C)] for every term, by explicit 8×8 traces.
pub fn correlations(rho: &DensityMatrix, s: &MeasurementScenario) -> CorrelationTensor {
    let id = ComplexMatrix::identity(2);
    let ops: Vec<ComplexMatrix> = s.directions.iter().map(|&d| observable(d)).collect();
    let op = |party: usize, slot: Slot| match slot.setting() {
        None => &id,
        Some(setting) => &ops[2 * party + setting],
    };
    CorrelationTensor::from_fn(|term| {
        let [a, b, c] = term.slots;
        let full = kron(&kron(op(0, a), op(1, b)), op(2, c));
        linalg::trace_product(rho.matrix(), &full)
            .expect("both operators are 8x8")
            .re
    })
}

/// `T[a][b][c] = Re Tr[ρ σa⊗σb⊗σc]` with `σ0 = 𝟙`, flattened as `16a + 4b + c`.
///
/// Every correlator is a contraction of this tensor with the parties'
/// `(1, 0, 0, 0)` (identity) or `(0, n⃗)` (observable) vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTensor {
    t: [f64; 64],
}

impl PauliTensor {
    pub fn new(rho: &DensityMatrix) -> Self {
        let basis = [
            ComplexMatrix::identity(2),
            pauli(Axis::X),
            pauli(Axis::Y),
            pauli(Axis::Z),
        ];
        let mut t = [0.0; 64];
        for a in 0..4 {
            let ab: Vec<ComplexMatrix> = (0..4).map(|b| kron(&basis[a], &basis[b])).collect();
            for b in 0..4 {
                for c in 0..4 {
                    let full = kron(&ab[b], &basis[c]);
                    t[16 * a + 4 * b + c] = linalg::trace_product(rho.matrix(), &full)
                        .expect("both operators are 8x8")
                        .re;
                }
            }
        }
        PauliTensor { t }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.t[16 * a + 4 * b + c]
    }

    fn full(&self, u: &[f64; 4], v: &[f64; 4], w: &[f64; 4]) -> f64 {
        let mut acc = 0.0;
        for a in 0..4 {
            if u[a] == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for b in 0..4 {
                if v[b] == 0.0 {
                    continue;
                }
                let row = &self.t[16 * a + 4 * b..16 * a + 4 * b + 4];
                inner += v[b] * (row[0] * w[0] + row[1] * w[1] + row[2] * w[2] + row[3] * w[3]);
            }
            acc += u[a] * inner;
        }
        acc
    }

    /// Contracts every party except `party`, returning the free 4-vector.
    fn contract_except(&self, party: usize, vecs: &[[f64; 4]; 3]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let idx = [a, b, c];
                    let mut w = self.t[16 * a + 4 * b + c];
                    if w == 0.0 {
                        continue;
                    }
                    for (k, v) in vecs.iter().enumerate() {
                        if k != party {
                            w *= v[idx[k]];
                        }
                    }
                    out[idx[party]] += w;
                }
            }
        }
        out
    }

    /// Same values as [`correlations`], via the Pauli tensor.
    pub fn correlations(&self, s: &MeasurementScenario) -> CorrelationTensor {
        let blochs = s.blochs();
        CorrelationTensor::from_fn(|term| {
            let [u, v, w] = slot_vectors(term, &blochs);
            self.full(&u, &v, &w)
        })
    }
}

fn slot_vector(slot: Slot, party: usize, blochs: &[[f64; 3]; 6]) -> [f64; 4] {
    match slot.setting() {
        None => [1.0, 0.0, 0.0, 0.0],
        Some(s) => {
            let n = blochs[2 * party + s];
            [0.0, n[0], n[1], n[2]]
        }
    }
}

fn slot_vectors(term: Term, blochs: &[[f64; 3]; 6]) -> [[f64; 4]; 3] {
    [
        slot_vector(term.slots[0], 0, blochs),
        slot_vector(term.slots[1], 1, blochs),
        slot_vector(term.slots[2], 2, blochs),
    ]
}

/// Tuning knobs for [`seesaw`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawConfig {
    pub starts: usize,
    /// A start stops once a full sweep improves the value by less than this.
    pub tol: f64,
    pub seed: u64,
    pub max_sweeps: usize,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        SeesawConfig {
            starts: 50,
            tol: 1e-12,
            seed: 0,
            max_sweeps: 500,
        }
    }
}

impl SeesawConfig {
    pub fn with_seed(seed: u64) -> Self {
        SeesawConfig {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub value: f64,
    pub scenario: MeasurementScenario,
    pub starts_used: usize,
    /// Whether the best start stopped on the tolerance rather than the sweep cap.
    pub converged: bool,
}

/// Outcome of one see-saw start.
#[derive(Debug, Clone, PartialEq)]
pub struct StartOutcome {
    pub value: f64,
    pub scenario: MeasurementScenario,
    pub sweeps: usize,
    pub converged: bool,
}

/// Precomputed state/expression pair for repeated ascents.
#[derive(Debug, Clone)]
pub struct Objective {
    tensor: PauliTensor,
    terms: Vec<(Term, f64)>,
}

impl Objective {
    pub fn new(rho: &DensityMatrix, expr: &BellExpression) -> Self {
        Self::from_tensor(PauliTensor::new(rho), expr)
    }

    pub fn from_tensor(tensor: PauliTensor, expr: &BellExpression) -> Self {
        Objective {
            tensor,
            terms: expr.terms().collect(),
        }
    }

    pub fn value(&self, blochs: &[[f64; 3]; 6]) -> f64 {
        self.terms
            .iter()
            .map(|&(term, coeff)| {
                let [u, v, w] = slot_vectors(term, blochs);
                coeff * self.tensor.full(&u, &v, &w)
            })
            .sum()
    }

    /// `v⃗` of the affine form in the Bloch vector of observable `k = 2·party + setting`.
    fn local_field(&self, k: usize, blochs: &[[f64; 3]; 6]) -> [f64; 3] {
        let (party, setting) = (k / 2, k % 2);
        let own = Slot::from_setting(setting);
        let mut field = [0.0; 3];
        for &(term, coeff) in &self.terms {
            if term.slots[party] != own {
                continue;
            }
            let vecs = slot_vectors(term, blochs);
            let r = self.tensor.contract_except(party, &vecs);
            for i in 0..3 {
                field[i] += coeff * r[i + 1];
            }
        }
        field
    }

    /// Runs one start from the scenario drawn by `rng`. `on_update` sees the
    /// value after every single-observable update.
    pub fn ascend(
        &self,
        initial: MeasurementScenario,
        tol: f64,
        max_sweeps: usize,
        mut on_update: impl FnMut(f64),
    ) -> StartOutcome {
        let mut blochs = initial.blochs();
        let mut value = self.value(&blochs);
        let mut converged = false;
        let mut sweeps = 0;
        while sweeps < max_sweeps {
            sweeps += 1;
            for k in 0..6 {
                let field = self.local_field(k, &blochs);
                let norm =
                    libm::sqrt(field[0] * field[0] + field[1] * field[1] + field[2] * field[2]);
                if norm >= STALL_NORM {
                    blochs[k] = [field[0] / norm, field[1] / norm, field[2] / norm];
                }
                on_update(self.value(&blochs));
            }
            let next = self.value(&blochs);
            debug_assert!(next >= value - 1e-9, "see-saw sweep decreased the value");
            let improvement = next - value;
            value = next;
            if improvement < tol {
                converged = true;
                break;
            }
        }
        let scenario = MeasurementScenario {
            directions: blochs.map(ObservableDirection::from_bloch),
        };
        StartOutcome {
            value,
            scenario,
            sweeps,
            converged,
        }
    }

    /// Start number `start` of the multi-start loop. The initial scenario comes
    /// from ChaCha8 seeded with `seed` on stream `start`, so starts are
    /// independent of evaluation order.
    pub fn run_start(&self, seed: u64, start: u64, tol: f64, max_sweeps: usize) -> StartOutcome {
        let mut rng = start_rng(seed, start);
        let initial = MeasurementScenario::random(&mut rng);
        self.ascend(initial, tol, max_sweeps, |_| {})
    }
}

fn start_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Folds start outcomes in start order; ties keep the earlier start.
pub fn merge_starts(
    outcomes: impl IntoIterator<Item = StartOutcome>,
) -> Option<OptimizationResult> {
    let mut best: Option<StartOutcome> = None;
    let mut count = 0;
    for outcome in outcomes {
        count += 1;
        if best.as_ref().is_none_or(|b| outcome.value > b.value) {
            best = Some(outcome);
        }
    }
    best.map(|b| OptimizationResult {
        value: b.value,
        scenario: b.scenario,
        starts_used: count,
        converged: b.converged,
    })
}

/// Maximizes the signed value of `expr` on `rho`.
pub fn seesaw(
    rho: &DensityMatrix,
    expr: &BellExpression,
    config: &SeesawConfig,
) -> OptimizationResult {
    let objective = Objective::new(rho, expr);
    seesaw_objective(&objective, config)
}

pub fn seesaw_objective(objective: &Objective, config: &SeesawConfig) -> OptimizationResult {
    let starts = config.starts.max(1) as u64;
    merge_starts(
        (0..starts).map(|s| objective.run_start(config.seed, s, config.tol, config.max_sweeps)),
    )
    .expect("at least one start")
}

/// `max(seesaw(expr), seesaw(−expr))`: the maximum of `|expr|`.
pub fn seesaw_abs(
    rho: &DensityMatrix,
    expr: &BellExpression,
    config: &SeesawConfig,
) -> OptimizationResult {
    let plus = seesaw(rho, expr, config);
    let minus = seesaw(rho, &expr.negated(), config);
    if minus.value > plus.value {
        OptimizationResult {
            value: minus.value,
            ..minus
        }
    } else {
        plus
    }
}

/// Stream reserved for the random-search oracle, disjoint from see-saw starts.
const ORACLE_STREAM: u64 = u64::MAX;

/// Best signed value over `samples` uniformly random scenarios: a lower bound
/// on the see-saw maximum.
pub fn random_search_oracle(
    rho: &DensityMatrix,
    expr: &BellExpression,
    samples: usize,
    seed: u64,
) -> f64 {
    let objective = Objective::new(rho, expr);
    let mut rng = start_rng(seed, ORACLE_STREAM);
    (0..samples.max(1))
        .map(|_| objective.value(&MeasurementScenario::random(&mut rng).blochs()))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Value after every observable update of start `start`, for monotonicity checks.
pub fn ascent_trace(rho: &DensityMatrix, expr: &BellExpression, seed: u64, start: u64) -> Vec<f64> {
    let objective = Objective::new(rho, expr);
    let mut rng = start_rng(seed, start);
    let initial = MeasurementScenario::random(&mut rng);
    let mut trace = Vec::new();
    trace.push(objective.value(&initial.blochs()));
    let defaults = SeesawConfig::default();
    objective.ascend(initial, defaults.tol, defaults.max_sweeps, |v| {
        trace.push(v)
    });
    trace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::builtin;
    use crate::state::{density_matrix, GhzParams, Q_MAX, Q_MIN};
    use crate::SQRT_3;
    use core::f64::consts::FRAC_PI_2;
    use proptest::prelude::*;

    fn rho(p: f64, q: f64) -> DensityMatrix {
        density_matrix(GhzParams::new(p, q)).unwrap()
    }

    #[test]
    fn observable_examples() {
        let z = observable(ObservableDirection::new(0.0, 0.0));
        assert!(z.max_abs_diff(&pauli(Axis::Z)).unwrap() < 1e-16);
        let x = observable(ObservableDirection::new(FRAC_PI_2, 0.0));
        assert!(x.max_abs_diff(&pauli(Axis::X)).unwrap() < 1e-16);
        let y = observable(ObservableDirection::new(FRAC_PI_2, FRAC_PI_2));
        assert!(y.max_abs_diff(&pauli(Axis::Y)).unwrap() < 1e-16);
    }

    #[test]
    fn bloch_angle_round_trip() {
        let mut rng = start_rng(9, 0);
        for _ in 0..100 {
            let d = ObservableDirection::random(&mut rng);
            let back = ObservableDirection::from_bloch(d.bloch());
            let (a, b) = (d.bloch(), back.bloch());
            for i in 0..3 {
                assert!((a[i] - b[i]).abs() < 1e-14);
            }
            assert!((0.0..=PI).contains(&back.theta));
            assert!((0.0..2.0 * PI).contains(&back.phi));
        }
    }

    #[test]
    fn correlations_examples() {
        let mixed = DensityMatrix::maximally_mixed();
        let mut rng = start_rng(1, 0);
        let s = MeasurementScenario::random(&mut rng);
        for (_, v) in correlations(&mixed, &s).entries() {
            assert!(v.abs() < 1e-15);
        }

        let sx = MeasurementScenario::uniform(ObservableDirection::new(FRAC_PI_2, 0.0));
        let corr = correlations(&rho(0.5, Q_MAX), &sx);
        let xxx = Term::new(Slot::S0, Slot::S0, Slot::S0);
        assert!((corr.get(xxx).unwrap() - 1.0).abs() < 1e-15);

        let corr = correlations(&rho(0.1, 0.2), &sx);
        assert!((corr.get(xxx).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn pauli_tensor_matches_direct_traces() {
        let mut rng = start_rng(2, 0);
        for &(p, q) in &[(0.1, 0.2), (-0.3, 0.4), (0.0, Q_MIN), (0.05, -0.05)] {
            let r = rho(p, q);
            let tensor = PauliTensor::new(&r);
            for _ in 0..5 {
                let s = MeasurementScenario::random(&mut rng);
                let direct = correlations(&r, &s);
                let fast = tensor.correlations(&s);
                for term in Term::all() {
                    assert!((direct.get(term).unwrap() - fast.get(term).unwrap()).abs() < 1e-14);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn correlators_match_trigonometric_form(
            t in 0.0f64..=1.0, s in -1.0f64..=1.0,
            angles in proptest::array::uniform12(0.0f64..(2.0 * PI)),
        ) {
            // ⟨A_x B_y C_z⟩ = 2p·cos(φ + β + η)·sinθ·sinα·sinζ and
            // ⟨A_x B_y⟩ = (4q/√3)·cosθ·cosα for ρ(p,q).
            let q = Q_MIN + t * (Q_MAX - Q_MIN);
            let p = s * GhzParams::p_limit(q);
            let mut dirs = [ObservableDirection::new(0.0, 0.0); 6];
            for (k, d) in dirs.iter_mut().enumerate() {
                *d = ObservableDirection::new(angles[2 * k] / 2.0, angles[2 * k + 1]);
            }
            let scenario = MeasurementScenario::new(dirs);
            let corr = correlations(&rho(p, q), &scenario);
            for x in 0..2 {
                for y in 0..2 {
                    for z in 0..2 {
                        let (a, b, c) = (dirs[x], dirs[2 + y], dirs[4 + z]);
                        let expected = 2.0 * p * libm::cos(a.phi + b.phi + c.phi)
                            * libm::sin(a.theta) * libm::sin(b.theta) * libm::sin(c.theta);
                        let term = Term::new(Slot::from_setting(x), Slot::from_setting(y), Slot::from_setting(z));
                        prop_assert!((corr.get(term).unwrap() - expected).abs() < 1e-12);
                    }
                    let (a, b) = (dirs[x], dirs[2 + y]);
                    let expected = 4.0 * q / SQRT_3 * libm::cos(a.theta) * libm::cos(b.theta);
                    let term = Term::new(Slot::from_setting(x), Slot::from_setting(y), Slot::Id);
                    prop_assert!((corr.get(term).unwrap() - expected).abs() < 1e-12);
                }
            }
            for (_, v) in corr.entries() {
                prop_assert!(v.abs() <= 1.0 + 1e-10);
            }
        }
    }

    #[test]
    fn seesaw_ghz_mermin_is_four() {
        let cfg = SeesawConfig::default();
        let res = seesaw(&rho(0.5, Q_MAX), &builtin("mermin").unwrap(), &cfg);
        assert!((res.value - 4.0).abs() < 1e-9, "{}", res.value);
        assert!(res.converged);
        assert_eq!(res.starts_used, 50);
    }

    #[test]
    fn seesaw_result_consistent_with_correlations() {
        let r = rho(0.3, 0.35);
        for b in crate::Builtin::ALL {
            let expr = b.expression();
            let res = seesaw(
                &r,
                &expr,
                &SeesawConfig {
                    starts: 5,
                    ..Default::default()
                },
            );
            let recomputed = expr.evaluate(&correlations(&r, &res.scenario)).unwrap();
            assert!((res.value - recomputed).abs() < 1e-9);
        }
    }

    #[test]
    fn seesaw_zero_p_mermin() {
        for &q in &[Q_MIN, 0.0, 0.2, Q_MAX] {
            let res = seesaw(
                &rho(0.0, q),
                &builtin("mermin").unwrap(),
                &SeesawConfig::default(),
            );
            assert!(res.value.abs() < 1e-9);
            assert!(res.converged);
        }
    }

    #[test]
    fn seesaw_svetlichny_example() {
        let res = seesaw(
            &rho(0.35, Q_MAX),
            &builtin("svetlichny").unwrap(),
            &SeesawConfig::default(),
        );
        assert!((res.value - 8.0 * crate::SQRT_2 * 0.35).abs() < 1e-7);
    }

    #[test]
    fn seesaw_is_reproducible() {
        let r = rho(0.2, 0.3);
        let expr = builtin("sliwa15").unwrap();
        let cfg = SeesawConfig {
            starts: 8,
            seed: 77,
            ..Default::default()
        };
        let a = seesaw(&r, &expr, &cfg);
        let b = seesaw(&r, &expr, &cfg);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a, b);
    }

    #[test]
    fn abs_variant_takes_the_larger_sign() {
        // At the separable state (0, √3/4) the negated Śliwa expression reaches 12.
        let r = rho(0.0, Q_MAX);
        let expr = builtin("sliwa15").unwrap();
        let cfg = SeesawConfig {
            starts: 10,
            ..Default::default()
        };
        assert!((seesaw(&r, &expr, &cfg).value - 4.0).abs() < 1e-9);
        assert!((seesaw_abs(&r, &expr, &cfg).value - 12.0).abs() < 1e-9);
    }

    #[test]
    fn sweeps_are_monotone() {
        for b in crate::Builtin::ALL {
            for start in 0..4 {
                let trace = ascent_trace(&rho(0.3, 0.38), &b.expression(), 5, start);
                for w in trace.windows(2) {
                    assert!(w[1] >= w[0] - 1e-12, "{}: {} -> {}", b.name(), w[0], w[1]);
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let r = rho(0.5, Q_MAX);
        let mermin = builtin("mermin").unwrap();
        let single = random_search_oracle(&r, &mermin, 1, 3);
        let best = seesaw(&r, &mermin, &SeesawConfig::default()).value;
        assert!(single <= best + 1e-9);
        // Pinned seed: over seeds 0..20 this sample size lands in [3.29, 3.54].
        assert!(random_search_oracle(&r, &mermin, 100_000, 15) >= 3.5);
        for b in crate::Builtin::ALL {
            let v = random_search_oracle(&DensityMatrix::maximally_mixed(), &b.expression(), 50, 1);
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_never_beats_seesaw() {
        for &(p, q, seed) in &[
            (0.1, 0.1, 1u64),
            (0.3, 0.3, 2),
            (-0.25, 0.4, 3),
            (0.02, -0.1, 4),
        ] {
            let r = rho(p, q);
            for b in crate::Builtin::ALL {
                let expr = b.expression();
                let lower = random_search_oracle(&r, &expr, 2000, seed);
                let best = seesaw(
                    &r,
                    &expr,
                    &SeesawConfig {
                        starts: 20,
                        seed,
                        ..Default::default()
                    },
                );
                assert!(lower <= best.value + 1e-9, "{} at ({p},{q})", b.name());
            }
        }
    }
}
