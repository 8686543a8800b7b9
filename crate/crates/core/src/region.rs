//! Closed-form maxima of the built-in facets on ρ(p,q), nonlocality
//! predicates, and the (p,q) grid scanner.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bell::Builtin;
use crate::entanglement::{self, EntanglementClass};
use crate::optimizer::{seesaw_objective, Objective, PauliTensor, SeesawConfig};
use crate::state::{density_matrix, GhzParams, Q_MAX, Q_MIN};
use crate::{Error, Result, SQRT_2, SQRT_3};

/// Lower q limit of Mermin detection, 1/(4√3).
pub const Q_MERMIN: f64 = 0.144_337_567_297_406_44;
/// Lower q limit of Śliwa #15 detection, (3/148)(8 + 3√3).
pub const Q_SLIWA15: f64 = 0.267_489_576_135_945_24;
/// Lower q limit of Svetlichny detection, (1/√3)(1/√2 − 1/4).
pub const Q_SVETLICHNY: f64 = 0.263_910_723_166_456_6;
/// Lower q limit of Bancal #99 detection, (8√5 − 5√3)/28.
pub const Q_BANCAL99: f64 = 0.329_581_777_934_068_97;
/// Where states with |p| ≤ 1/4 start violating Śliwa #15, (√15 + √3)/16.
pub const Q_SLIWA15_BEYOND_MERMIN: f64 = 0.350_314_634_611_018_4;
/// Where states with |p| ≤ 1/(2√2) start violating Bancal #99, (√10 − √3)/4.
pub const Q_BANCAL99_BEYOND_SVETLICHNY: f64 = 0.357_556_713_149_875_5;

/// |p| above which Mermin is violated.
pub const P_MERMIN: f64 = 0.25;
/// |p| above which Svetlichny is violated, 1/(2√2).
pub const P_SVETLICHNY: f64 = 0.353_553_390_593_273_8;

/// Half-width of the window around 9p² = 12q² where the Śliwa branch is
/// replaced by its limit 12|p|.
pub const L15_WINDOW: f64 = 1e-9;

/// `8|p|`.
pub fn mermin_max(params: GhzParams) -> Result<f64> {
    params.check()?;
    Ok(8.0 * params.p.abs())
}

/// `8√2|p|`.
pub fn svetlichny_max(params: GhzParams) -> Result<f64> {
    params.check()?;
    Ok(8.0 * SQRT_2 * params.p.abs())
}

/// `4q/√3 + 2√(16q²/3 + 4p²)`.
pub fn ns99_max(params: GhzParams) -> Result<f64> {
    params.check()?;
    Ok(ns99_formula(params.p, params.q))
}

fn ns99_formula(p: f64, q: f64) -> f64 {
    4.0 * q / SQRT_3 + 2.0 * libm::sqrt(16.0 * q * q / 3.0 + 4.0 * p * p)
}

/// `8(9|p|³ − 8√3|q|³)/(9p² − 12q²)`, or `12|p|` inside the singular window.
/// No validity check; usable for any real (p,q).
pub fn l15_branch1(p: f64, q: f64) -> f64 {
    let (ap, aq) = (p.abs(), q.abs());
    let den = 9.0 * p * p - 12.0 * q * q;
    if den.abs() < L15_WINDOW {
        return 12.0 * ap;
    }
    8.0 * (9.0 * ap * ap * ap - 8.0 * SQRT_3 * aq * aq * aq) / den
}

/// `−16√3q`.
pub fn l15_branch2(q: f64) -> f64 {
    -16.0 * SQRT_3 * q
}

/// Larger of the two Śliwa #15 branches.
pub fn l15_max(params: GhzParams) -> Result<f64> {
    params.check()?;
    Ok(l15_branch1(params.p, params.q).max(l15_branch2(params.q)))
}

/// Where the first branch is the active maximum, is positive, and its
/// denominator is outside the singular window: the points at which the
/// closed form is compared against numerics.
pub fn l15_formula_applicable(params: GhzParams) -> bool {
    let (p, q) = (params.p, params.q);
    let b1 = l15_branch1(p, q);
    (9.0 * p * p - 12.0 * q * q).abs() >= L15_WINDOW && b1 > 0.0 && b1 >= l15_branch2(q)
}

/// Outcome of a nonlocality predicate with the facets that certify it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verdict {
    pub nonlocal: bool,
    pub witnesses: Vec<&'static str>,
}

impl Verdict {
    fn from_conditions(conditions: &[(bool, &'static str)]) -> Self {
        let witnesses: Vec<&'static str> = conditions.iter().filter(|c| c.0).map(|c| c.1).collect();
        Verdict {
            nonlocal: !witnesses.is_empty(),
            witnesses,
        }
    }
}

fn mermin_condition(params: GhzParams) -> bool {
    4.0 * params.p.abs() > 1.0 && params.q > Q_MERMIN
}

fn sliwa15_condition(params: GhzParams) -> bool {
    l15_branch1(params.p, params.q) > 4.0 && params.q > Q_SLIWA15
}

fn svetlichny_condition(params: GhzParams) -> bool {
    params.p.abs() > P_SVETLICHNY && params.q > Q_SVETLICHNY
}

fn bancal99_condition(params: GhzParams) -> bool {
    ns99_formula(params.p, params.q) > 3.0 && params.q > Q_BANCAL99
}

/// Violation of Mermin (|p| > 1/4, q > 1/(4√3)) or of Śliwa #15
/// (branch > 4, q > (3/148)(8 + 3√3)).
pub fn standard_nonlocal(params: GhzParams) -> Result<Verdict> {
    params.check()?;
    Ok(Verdict::from_conditions(&[
        (mermin_condition(params), "mermin"),
        (sliwa15_condition(params), "sliwa15"),
    ]))
}

/// Violation of Svetlichny (|p| > 1/(2√2), q > (1/√3)(1/√2 − 1/4)) or of
/// Bancal #99 (NS value > 3, q > (8√5 − 5√3)/28).
pub fn genuine_nonlocal(params: GhzParams) -> Result<Verdict> {
    params.check()?;
    Ok(Verdict::from_conditions(&[
        (svetlichny_condition(params), "svetlichny"),
        (bancal99_condition(params), "bancal99"),
    ]))
}

/// W- or GHZ-class and violating neither standard condition.
pub fn genuinely_entangled_local(params: GhzParams) -> Result<bool> {
    let class = entanglement::classify(params)?;
    Ok(class.is_genuinely_entangled() && !standard_nonlocal(params)?.nonlocal)
}

/// W- or GHZ-class with |p| ≤ 1/(2√2), NS value ≤ 3 and q ≤ (8√5 − 5√3)/28.
pub fn genuinely_entangled_not_genuinely_nonlocal(params: GhzParams) -> Result<bool> {
    let class = entanglement::classify(params)?;
    Ok(class.is_genuinely_entangled()
        && params.p.abs() <= P_SVETLICHNY
        && ns99_formula(params.p, params.q) <= 3.0
        && params.q <= Q_BANCAL99)
}

/// q range over which the biseparable boundary |p| = 3/8 − (√3/2)q lies
/// inside the triangle. Below it every state is at most biseparable.
pub const BISEPARABLE_EDGE_Q: (f64, f64) = (Q_MERMIN, Q_MAX);

/// Śliwa #15 branch on the line |p| = 3/8 − (√3/2)q. Defined for any q of
/// the triangle; the line holds states only on [`BISEPARABLE_EDGE_Q`].
pub fn biseparable_l15_bound(q: f64) -> Result<f64> {
    if !(Q_MIN..=Q_MAX).contains(&q) {
        return Err(Error::OutOfRange(q));
    }
    Ok(l15_branch1(entanglement::biseparable_limit(q), q))
}

/// RNG stream for [`sample_at_most_biseparable`], apart from see-saw starts.
const SAMPLER_STREAM: u64 = u64::MAX - 1;

/// `n` points drawn uniformly from the valid states with
/// |p| ≤ 3/8 − (√3/2)q (separable or biseparable), by rejection from the
/// bounding box.
pub fn sample_at_most_biseparable(n: usize, seed: u64) -> Vec<GhzParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SAMPLER_STREAM);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = rng.random::<f64>() - 0.5;
        let q = Q_MIN + (Q_MAX - Q_MIN) * rng.random::<f64>();
        let params = GhzParams::new(p, q);
        if params.is_valid() && entanglement::is_at_most_biseparable(params) {
            out.push(params);
        }
    }
    out
}

/// The four single-facet detection regions with a published lower q limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorRegion {
    /// Standard nonlocality seen by Śliwa #15.
    Sliwa15,
    /// Genuine nonlocality seen by Bancal #99.
    Bancal99,
    /// Śliwa #15 violation with |p| ≤ 1/4.
    Sliwa15BeyondMermin,
    /// Bancal #99 violation with |p| ≤ 1/(2√2).
    Bancal99BeyondSvetlichny,
}

impl DetectorRegion {
    pub const ALL: [DetectorRegion; 4] = [
        DetectorRegion::Sliwa15,
        DetectorRegion::Bancal99,
        DetectorRegion::Sliwa15BeyondMermin,
        DetectorRegion::Bancal99BeyondSvetlichny,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DetectorRegion::Sliwa15 => "sliwa15",
            DetectorRegion::Bancal99 => "bancal99",
            DetectorRegion::Sliwa15BeyondMermin => "sliwa15 with |p|<=1/4",
            DetectorRegion::Bancal99BeyondSvetlichny => "bancal99 with |p|<=1/(2sqrt2)",
        }
    }

    pub fn expected_infimum(self) -> f64 {
        match self {
            DetectorRegion::Sliwa15 => Q_SLIWA15,
            DetectorRegion::Bancal99 => Q_BANCAL99,
            DetectorRegion::Sliwa15BeyondMermin => Q_SLIWA15_BEYOND_MERMIN,
            DetectorRegion::Bancal99BeyondSvetlichny => Q_BANCAL99_BEYOND_SVETLICHNY,
        }
    }

    fn p_cap(self) -> f64 {
        match self {
            DetectorRegion::Sliwa15BeyondMermin => P_MERMIN,
            DetectorRegion::Bancal99BeyondSvetlichny => P_SVETLICHNY,
            _ => 0.5,
        }
    }

    /// Membership, ignoring the region's own lower q limit so that the
    /// estimate is not circular.
    pub fn contains(self, params: GhzParams) -> bool {
        if params.p.abs() > self.p_cap() || !params.is_valid() {
            return false;
        }
        match self {
            DetectorRegion::Sliwa15 | DetectorRegion::Sliwa15BeyondMermin => {
                l15_branch1(params.p, params.q) > 4.0
            }
            DetectorRegion::Bancal99 | DetectorRegion::Bancal99BeyondSvetlichny => {
                ns99_formula(params.p, params.q) > 3.0
            }
        }
    }

    /// Smallest q with some member point, by a `steps`-point q grid followed
    /// by a second `steps`-point grid inside the bracketing cell. Each row is
    /// sampled at `steps` values of |p| up to its limit.
    pub fn infimum_q(self, steps: usize) -> Option<f64> {
        let steps = steps.max(2);
        let row_hit = |q: f64| {
            let cap = GhzParams::p_limit(q).min(self.p_cap());
            (0..steps)
                .any(|j| self.contains(GhzParams::new(cap * j as f64 / (steps - 1) as f64, q)))
        };
        let first_hit = |lo: f64, hi: f64| {
            (0..steps)
                .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
                .position(row_hit)
                .map(|i| (i, (hi - lo) / (steps - 1) as f64))
        };
        let (i, h) = first_hit(Q_MIN, Q_MAX)?;
        if i == 0 {
            return Some(Q_MIN);
        }
        let lo = Q_MIN + h * (i - 1) as f64;
        let (k, h2) = first_hit(lo, lo + h)?;
        Some(lo + h2 * k as f64)
    }
}

/// The q at which `l15_max(p, ·)` crosses 4 from below, by bisection on the
/// uppermost sign change of a 1000-point scan of the valid q range.
pub fn l15_threshold_q(p: f64) -> Option<f64> {
    let q_lo = ((p.abs() - 0.125) * 2.0 / SQRT_3).max(Q_MIN);
    if q_lo > Q_MAX {
        return None;
    }
    let g = |q: f64| l15_branch1(p, q).max(l15_branch2(q)) - 4.0;
    const SCAN: usize = 1000;
    let at = |i: usize| q_lo + (Q_MAX - q_lo) * i as f64 / SCAN as f64;
    let cell = (0..SCAN)
        .rev()
        .find(|&i| g(at(i)) <= 0.0 && g(at(i + 1)) > 0.0)?;
    let (mut lo, mut hi) = (at(cell), at(cell + 1));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Which maxima a report carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Analytic,
    Numeric,
    Both,
}

impl ScanMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanMode::Analytic => "analytic",
            ScanMode::Numeric => "numeric",
            ScanMode::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Option<ScanMode> {
        match s {
            "analytic" => Some(ScanMode::Analytic),
            "numeric" => Some(ScanMode::Numeric),
            "both" => Some(ScanMode::Both),
            _ => None,
        }
    }

    fn numeric(self) -> bool {
        self != ScanMode::Analytic
    }
}

/// See-saw maxima of the four built-ins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericMaxima {
    pub mermin: f64,
    pub sliwa15: f64,
    pub svetlichny: f64,
    pub bancal99: f64,
    /// Every optimization stopped on tolerance.
    pub converged: bool,
}

impl NumericMaxima {
    pub fn compute(params: GhzParams, config: &SeesawConfig) -> Result<NumericMaxima> {
        let tensor = PauliTensor::new(&density_matrix(params)?);
        let mut values = [0.0; 4];
        let mut converged = true;
        for (slot, b) in values.iter_mut().zip(Builtin::ALL) {
            let objective = Objective::from_tensor(tensor.clone(), &b.expression());
            let result = seesaw_objective(&objective, config);
            *slot = result.value;
            converged &= result.converged;
        }
        Ok(NumericMaxima {
            mermin: values[0],
            sliwa15: values[1],
            svetlichny: values[2],
            bancal99: values[3],
            converged,
        })
    }
}

/// Everything known about one point of the triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlocalityReport {
    pub params: GhzParams,
    pub ent_class: EntanglementClass,
    pub cgm: f64,
    pub cgm_unclamped: f64,
    pub mermin_max: f64,
    pub l15_max: f64,
    pub svet_max: f64,
    pub ns99_max: f64,
    pub numeric: Option<NumericMaxima>,
    pub standard: Verdict,
    pub genuine: Verdict,
}

impl NonlocalityReport {
    pub fn new(params: GhzParams, mode: ScanMode, config: &SeesawConfig) -> Result<Self> {
        let ent_class = entanglement::classify(params)?;
        let standard = standard_nonlocal(params)?;
        let genuine = genuine_nonlocal(params)?;
        let numeric = if mode.numeric() {
            Some(NumericMaxima::compute(params, config)?)
        } else {
            None
        };
        let cgm_unclamped = entanglement::cgm_unclamped(params)?;
        Ok(NonlocalityReport {
            params,
            ent_class,
            cgm: cgm_unclamped.max(0.0),
            cgm_unclamped,
            mermin_max: mermin_max(params)?,
            l15_max: l15_max(params)?,
            svet_max: svetlichny_max(params)?,
            ns99_max: ns99_max(params)?,
            numeric,
            standard,
            genuine,
        })
    }

    pub fn standard_nonlocal(&self) -> bool {
        self.standard.nonlocal
    }

    pub fn genuine_nonlocal(&self) -> bool {
        self.genuine.nonlocal
    }

    /// Standard witnesses followed by genuine ones.
    pub fn witnesses(&self) -> Vec<&'static str> {
        self.standard
            .witnesses
            .iter()
            .chain(&self.genuine.witnesses)
            .copied()
            .collect()
    }

    /// Built-ins whose numeric maximum differs from the closed form by more
    /// than `tol`. Śliwa #15 is compared only where its formula applies.
    pub fn discrepancies(&self, tol: f64) -> Vec<&'static str> {
        let Some(n) = self.numeric else {
            return Vec::new();
        };
        let mut out = Vec::new();
        if (n.mermin - self.mermin_max).abs() > tol {
            out.push("mermin");
        }
        if l15_formula_applicable(self.params) && (n.sliwa15 - self.l15_max).abs() > tol {
            out.push("sliwa15");
        }
        if (n.svetlichny - self.svet_max).abs() > tol {
            out.push("svetlichny");
        }
        if (n.bancal99 - self.ns99_max).abs() > tol {
            out.push("bancal99");
        }
        out
    }
}

/// One node of a scan grid; `report` is `None` outside the triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub p: f64,
    pub q: f64,
    pub report: Option<NonlocalityReport>,
}

/// Node `(row, col)` of a `p_steps × q_steps` grid over the bounding box
/// p ∈ [−1/2, 1/2], q ∈ [Q_MIN, Q_MAX]. Rows run over q, columns over p.
pub fn grid_params(row: usize, col: usize, p_steps: usize, q_steps: usize) -> GhzParams {
    let p = -0.5 + col as f64 / (p_steps - 1) as f64;
    let q = Q_MIN + (Q_MAX - Q_MIN) * row as f64 / (q_steps - 1) as f64;
    GhzParams::new(p, q)
}

pub fn scan_point(params: GhzParams, mode: ScanMode, config: &SeesawConfig) -> Result<ScanPoint> {
    let report = if params.is_valid() {
        Some(NonlocalityReport::new(params, mode, config)?)
    } else {
        None
    };
    Ok(ScanPoint {
        p: params.p,
        q: params.q,
        report,
    })
}

/// All grid nodes in (row, column) order.
pub fn scan(
    p_steps: usize,
    q_steps: usize,
    mode: ScanMode,
    config: &SeesawConfig,
) -> Result<Vec<ScanPoint>> {
    if p_steps < 2 || q_steps < 2 {
        return Err(Error::InvalidGrid("at least 2 steps per axis"));
    }
    let mut out = Vec::with_capacity(p_steps * q_steps);
    for row in 0..q_steps {
        for col in 0..p_steps {
            out.push(scan_point(
                grid_params(row, col, p_steps, q_steps),
                mode,
                config,
            )?);
        }
    }
    Ok(out)
}
