//! The acceptance suite: thirteen numbered checks of the closed forms,
//! region constants and numerics, each with a pass/fail verdict.

use std::fmt;

use ghzsym_core::bell::Builtin;
use ghzsym_core::entanglement::{cgm_closed_form, cgm_x};
use ghzsym_core::optimizer::{seesaw_objective, Objective, PauliTensor, SeesawConfig};
use ghzsym_core::region::{
    self, biseparable_l15_bound, genuinely_entangled_local,
    genuinely_entangled_not_genuinely_nonlocal, grid_params, l15_formula_applicable,
    l15_threshold_q, sample_at_most_biseparable, standard_nonlocal, DetectorRegion,
    NonlocalityReport, NumericMaxima, ScanMode, BISEPARABLE_EDGE_Q,
};
use ghzsym_core::state::{density_matrix, x_elements, GhzParams, Q_MAX};
use ghzsym_core::SQRT_2;
use rayon::prelude::*;

use crate::output::fmt_num;

/// Grid edge length for the closed-form comparisons.
pub const AGREEMENT_GRID: usize = 50;
/// Absolute tolerance for Mermin, Svetlichny and Bancal #99 agreement.
pub const AGREEMENT_TOL: f64 = 1e-6;
/// Absolute tolerance for Śliwa #15 agreement.
pub const SLIWA_TOL: f64 = 1e-5;
/// A numeric value counts as a violation only above `bound + VIOLATION_TOL`.
pub const VIOLATION_TOL: f64 = 1e-7;
pub const BISEPARABLE_SAMPLES: usize = 10_000;
pub const BOUNDARY_SAMPLES: usize = 1_000;
pub const CGM_GRID: usize = 200;
pub const REFINEMENT_STEPS: usize = 500;
/// Published crossing of the Śliwa #15 maximum through 4 at p = 0.2.
pub const PUBLISHED_THRESHOLD_Q: f64 = 0.37861;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {:>2} {verdict}: {} | {}",
            self.id, self.title, self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub results: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, id: u8) -> Option<&CriterionResult> {
        self.results.iter().find(|r| r.id == id)
    }

    pub fn lines(&self) -> Vec<String> {
        self.results.iter().map(ToString::to_string).collect()
    }
}

/// Runs criteria 1–12, then reruns them for the determinism check (13).
pub fn run(config: &SeesawConfig) -> VerifyReport {
    let mut results = run_seeded(config);
    let again = run_seeded(config);
    let differing: Vec<String> = results
        .iter()
        .zip(&again)
        .filter(|(a, b)| a != b)
        .map(|(a, _)| a.id.to_string())
        .collect();
    results.push(CriterionResult {
        id: 13,
        title: "determinism: a second run with the same seed gives an identical report",
        passed: differing.is_empty(),
        detail: if differing.is_empty() {
            format!("seed {}: criteria 1-12 reproduced exactly", config.seed)
        } else {
            format!(
                "seed {}: criteria {} differ between runs",
                config.seed,
                differing.join(",")
            )
        },
    });
    VerifyReport { results }
}

/// Criteria 1–12.
pub fn run_seeded(config: &SeesawConfig) -> Vec<CriterionResult> {
    let grid = NumericGrid::compute(AGREEMENT_GRID, config);
    vec![
        mermin_agreement(&grid),
        svetlichny_agreement(&grid),
        bancal_agreement(&grid),
        sliwa_agreement(&grid),
        ghz_corner(config),
        threshold_bisection(),
        region_constants(),
        biseparable_locality(config),
        cgm_equivalence(),
        entangled_local_exists(config),
        entangled_not_genuinely_nonlocal_exists(),
        subclass_identities(),
    ]
}

/// See-saw maxima of the four built-ins at every valid node of an n×n grid.
pub struct NumericGrid {
    pub n: usize,
    /// Row-major over (q, p); `None` outside the triangle.
    pub nodes: Vec<Option<(GhzParams, NumericMaxima)>>,
}

impl NumericGrid {
    pub fn compute(n: usize, config: &SeesawConfig) -> NumericGrid {
        let nodes = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let params = grid_params(k / n, k % n, n, n);
                params.is_valid().then(|| {
                    (
                        params,
                        NumericMaxima::compute(params, config).expect("valid grid node"),
                    )
                })
            })
            .collect();
        NumericGrid { n, nodes }
    }

    fn valid(&self) -> impl Iterator<Item = &(GhzParams, NumericMaxima)> {
        self.nodes.iter().flatten()
    }

    /// Indices of valid nodes within one cell of `k`, including `k`.
    fn neighbourhood(&self, k: usize) -> impl Iterator<Item = &(GhzParams, NumericMaxima)> {
        let n = self.n as isize;
        let (row, col) = ((k / self.n) as isize, (k % self.n) as isize);
        (-1..=1)
            .flat_map(move |dr| (-1..=1).map(move |dc| (row + dr, col + dc)))
            .filter(move |&(r, c)| (0..n).contains(&r) && (0..n).contains(&c))
            .filter_map(move |(r, c)| self.nodes[(r * n + c) as usize].as_ref())
    }
}

/// Largest |numeric − closed form| over `points`, with its location.
struct Worst {
    delta: f64,
    at: Option<GhzParams>,
    count: usize,
    failures: usize,
    failures_negative_q: usize,
}

impl Worst {
    fn over(points: impl Iterator<Item = (GhzParams, f64, f64)>, tol: f64) -> Worst {
        let mut w = Worst {
            delta: 0.0,
            at: None,
            count: 0,
            failures: 0,
            failures_negative_q: 0,
        };
        for (params, numeric, closed) in points {
            let d = (numeric - closed).abs();
            w.count += 1;
            if d >= tol {
                w.failures += 1;
                if params.q < 0.0 {
                    w.failures_negative_q += 1;
                }
            }
            if d > w.delta || w.at.is_none() {
                w.delta = d.max(w.delta);
                w.at = Some(params);
            }
        }
        w
    }

    fn describe(&self, tol: f64) -> String {
        let at = self.at.map_or(String::from("-"), |p| {
            format!("({}, {})", fmt_num(p.p), fmt_num(p.q))
        });
        let mut text = format!(
            "max |numeric - closed| = {} at {at}; {}/{} points beyond {}",
            fmt_num(self.delta),
            self.failures,
            self.count,
            fmt_num(tol)
        );
        if self.failures > 0 {
            text.push_str(&format!(" ({} of them at q < 0)", self.failures_negative_q));
        }
        text
    }
}

fn agreement(id: u8, title: &'static str, w: Worst, tol: f64) -> CriterionResult {
    CriterionResult {
        id,
        title,
        passed: w.count > 0 && w.failures == 0,
        detail: w.describe(tol),
    }
}

fn mermin_agreement(grid: &NumericGrid) -> CriterionResult {
    let w = Worst::over(
        grid.valid().map(|(x, n)| (*x, n.mermin, 8.0 * x.p.abs())),
        AGREEMENT_TOL,
    );
    agreement(
        1,
        "Mermin maximum equals 8|p| on the 50x50 grid",
        w,
        AGREEMENT_TOL,
    )
}

fn svetlichny_agreement(grid: &NumericGrid) -> CriterionResult {
    let w = Worst::over(
        grid.valid()
            .map(|(x, n)| (*x, n.svetlichny, 8.0 * SQRT_2 * x.p.abs())),
        AGREEMENT_TOL,
    );
    agreement(
        2,
        "Svetlichny maximum equals 8*sqrt2*|p| on the 50x50 grid",
        w,
        AGREEMENT_TOL,
    )
}

fn bancal_agreement(grid: &NumericGrid) -> CriterionResult {
    let w = Worst::over(
        grid.valid()
            .map(|(x, n)| (*x, n.bancal99, region::ns99_max(*x).expect("valid"))),
        AGREEMENT_TOL,
    );
    agreement(
        3,
        "Bancal #99 maximum equals 4q/sqrt3 + 2sqrt(16q^2/3 + 4p^2) on the 50x50 grid",
        w,
        AGREEMENT_TOL,
    )
}

fn sliwa_agreement(grid: &NumericGrid) -> CriterionResult {
    let w = Worst::over(
        grid.valid()
            .filter(|(x, _)| l15_formula_applicable(*x))
            .map(|(x, n)| (*x, n.sliwa15, region::l15_max(*x).expect("valid"))),
        SLIWA_TOL,
    );
    // Numeric standard nonlocality against the analytic conditions, away
    // from the analytic boundary.
    let mut mismatches = 0;
    let mut excused = 0;
    let mut first: Option<GhzParams> = None;
    for (k, node) in grid.nodes.iter().enumerate() {
        let Some((x, n)) = node else { continue };
        let numeric = n.mermin > 2.0 + VIOLATION_TOL || n.sliwa15 > 4.0 + VIOLATION_TOL;
        let analytic = standard_nonlocal(*x).expect("valid").nonlocal;
        if numeric == analytic {
            continue;
        }
        let on_boundary = grid
            .neighbourhood(k)
            .any(|(y, _)| standard_nonlocal(*y).expect("valid").nonlocal != analytic);
        if on_boundary {
            excused += 1;
        } else {
            mismatches += 1;
            first.get_or_insert(*x);
        }
    }
    let first = first.map_or(String::new(), |p| {
        format!(", first at ({}, {})", fmt_num(p.p), fmt_num(p.q))
    });
    CriterionResult {
        id: 4,
        title: "Sliwa #15 maximum matches its formula where it applies; numeric violation matches the analytic standard/genuine conditions",
        passed: w.count > 0 && w.failures == 0 && mismatches == 0,
        detail: format!(
            "{}; region mismatches: {mismatches} outside the one-cell band{first} ({excused} inside)",
            w.describe(SLIWA_TOL)
        ),
    }
}

fn ghz_corner(config: &SeesawConfig) -> CriterionResult {
    let report = NonlocalityReport::new(GhzParams::GHZ_PLUS, ScanMode::Numeric, config)
        .expect("corner is valid");
    let n = report.numeric.expect("numeric mode");
    let checks = [
        ("mermin", n.mermin, 4.0, 1e-9),
        ("svetlichny", n.svetlichny, 4.0 * SQRT_2, 1e-7),
        ("bancal99", n.bancal99, 1.0 + 2.0 * SQRT_2, 1e-7),
    ];
    let passed = checks.iter().all(|&(_, v, e, tol)| (v - e).abs() <= tol);
    let detail = checks
        .iter()
        .map(|&(name, v, e, _)| format!("{name} {} (expected {})", fmt_num(v), fmt_num(e)))
        .collect::<Vec<_>>()
        .join(", ");
    CriterionResult {
        id: 5,
        title: "GHZ corner maxima",
        passed,
        detail,
    }
}

fn threshold_bisection() -> CriterionResult {
    let q = l15_threshold_q(0.2);
    let passed = q.is_some_and(|q| (q - PUBLISHED_THRESHOLD_Q).abs() <= 5e-4);
    CriterionResult {
        id: 6,
        title: "Sliwa #15 threshold at p = 0.2",
        passed,
        detail: match q {
            Some(q) => format!("q* = {} (published {PUBLISHED_THRESHOLD_Q})", fmt_num(q)),
            None => "no crossing found".into(),
        },
    }
}

fn region_constants() -> CriterionResult {
    let mut passed = true;
    let mut parts = Vec::new();
    for region in DetectorRegion::ALL {
        let found = region.infimum_q(REFINEMENT_STEPS);
        let expected = region.expected_infimum();
        let ok = found.is_some_and(|q| (q - expected).abs() <= 1e-3);
        passed &= ok;
        parts.push(format!(
            "{}: {} vs {}",
            region.name(),
            found.map_or("none".into(), fmt_num),
            fmt_num(expected)
        ));
    }
    CriterionResult {
        id: 7,
        title: "infimum q of the four detector regions",
        passed,
        detail: parts.join("; "),
    }
}

fn biseparable_locality(config: &SeesawConfig) -> CriterionResult {
    let points = sample_at_most_biseparable(BISEPARABLE_SAMPLES, config.seed);
    let mermin = Builtin::Mermin.expression();
    let sliwa = Builtin::Sliwa15.expression();
    let maxima: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&params| {
            let tensor =
                PauliTensor::new(&density_matrix(params).expect("sampled points are valid"));
            let m =
                seesaw_objective(&Objective::from_tensor(tensor.clone(), &mermin), config).value;
            let s = seesaw_objective(&Objective::from_tensor(tensor, &sliwa), config).value;
            (m, s)
        })
        .collect();
    let flagged = points
        .iter()
        .filter(|&&x| standard_nonlocal(x).expect("valid").nonlocal)
        .count();
    let worst_m = maxima.iter().map(|m| m.0).fold(f64::NEG_INFINITY, f64::max);
    let worst_s = maxima.iter().map(|m| m.1).fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = BISEPARABLE_EDGE_Q;
    let worst_f = (0..BOUNDARY_SAMPLES)
        .map(|i| lo + (hi - lo) * i as f64 / (BOUNDARY_SAMPLES - 1) as f64)
        .map(|q| biseparable_l15_bound(q).expect("in range"))
        .fold(f64::NEG_INFINITY, f64::max);
    let passed = flagged == 0
        && worst_m <= 2.0 + VIOLATION_TOL
        && worst_s <= 4.0 + VIOLATION_TOL
        && worst_f <= 4.0 + 1e-12;
    CriterionResult {
        id: 8,
        title: "biseparable states are local",
        passed,
        detail: format!(
            "{} samples: {flagged} flagged nonlocal, max Mermin {}, max Sliwa #15 {}; boundary max f = {} over {BOUNDARY_SAMPLES} points",
            points.len(),
            fmt_num(worst_m),
            fmt_num(worst_s),
            fmt_num(worst_f)
        ),
    }
}

fn cgm_equivalence() -> CriterionResult {
    let n = CGM_GRID;
    let (worst, count) = (0..n * n)
        .into_par_iter()
        .filter_map(|k| {
            let params = grid_params(k / n, k % n, n, n);
            params.is_valid().then(|| {
                let rho = density_matrix(params).expect("valid");
                let via_x = cgm_x(&x_elements(&rho).expect("X state")).expect("PSD blocks");
                (via_x - cgm_closed_form(params).expect("valid")).abs()
            })
        })
        .map(|d| (d, 1usize))
        .reduce(|| (0.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    CriterionResult {
        id: 9,
        title: "C_GM from X-state elements equals the closed form on the 200x200 grid",
        passed: count > 0 && worst < 1e-10,
        detail: format!("max difference {} over {count} points", fmt_num(worst)),
    }
}

fn search_grid(pred: impl Fn(GhzParams) -> bool + Sync) -> Vec<GhzParams> {
    let n = AGREEMENT_GRID;
    (0..n * n)
        .into_par_iter()
        .map(|k| grid_params(k / n, k % n, n, n))
        .filter(|x| x.is_valid() && pred(*x))
        .collect()
}

fn entangled_local_exists(config: &SeesawConfig) -> CriterionResult {
    let found = search_grid(|x| genuinely_entangled_local(x).expect("valid"));
    let mermin = Builtin::Mermin.expression();
    let sliwa = Builtin::Sliwa15.expression();
    let verified: Vec<bool> = found
        .par_iter()
        .map(|&params| {
            let tensor = PauliTensor::new(&density_matrix(params).expect("valid"));
            let m =
                seesaw_objective(&Objective::from_tensor(tensor.clone(), &mermin), config).value;
            let s = seesaw_objective(&Objective::from_tensor(tensor, &sliwa), config).value;
            m <= 2.0 + VIOLATION_TOL && s <= 4.0 + VIOLATION_TOL
        })
        .collect();
    let ok = verified.iter().filter(|&&v| v).count();
    let example = found
        .iter()
        .zip(&verified)
        .find(|(_, &v)| v)
        .map_or(String::new(), |(x, _)| {
            format!("; e.g. ({}, {})", fmt_num(x.p), fmt_num(x.q))
        });
    CriterionResult {
        id: 10,
        title: "genuinely entangled local states exist",
        passed: ok >= 1,
        detail: format!(
            "{} grid points are W/GHZ-class and satisfy neither condition; {ok} stay within both L3 bounds numerically{example}",
            found.len()
        ),
    }
}

fn entangled_not_genuinely_nonlocal_exists() -> CriterionResult {
    let found = search_grid(|x| genuinely_entangled_not_genuinely_nonlocal(x).expect("valid"));
    let example = found.first().map_or(String::new(), |x| {
        format!("; e.g. ({}, {})", fmt_num(x.p), fmt_num(x.q))
    });
    CriterionResult {
        id: 11,
        title: "genuinely entangled states without genuine nonlocality exist",
        passed: !found.is_empty(),
        detail: format!("{} grid points{example}", found.len()),
    }
}

fn subclass_identities() -> CriterionResult {
    let mut worst: f64 = 0.0;
    for p in [0.1, 0.2, 0.3, 0.4] {
        let params = GhzParams::new(p, Q_MAX);
        let l = 4.0 * (8.0 * p * p * p - 1.0) / (4.0 * p * p - 1.0);
        let ns = 1.0 + 2.0 * (1.0 + 4.0 * p * p).sqrt();
        worst = worst
            .max((region::l15_max(params).expect("valid") - l).abs())
            .max((region::ns99_max(params).expect("valid") - ns).abs());
    }
    CriterionResult {
        id: 12,
        title: "top-edge identities for the Sliwa #15 and Bancal #99 maxima",
        passed: worst <= 1e-10,
        detail: format!(
            "max deviation {} at p in {{0.1, 0.2, 0.3, 0.4}}",
            fmt_num(worst)
        ),
    }
}
