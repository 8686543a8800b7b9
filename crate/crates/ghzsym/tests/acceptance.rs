//! Runs every acceptance criterion at its stated tolerance and prints one
//! pass/fail line per criterion.

use std::sync::OnceLock;

use ghzsym::verify::{self, VerifyReport};
use ghzsym_core::optimizer::SeesawConfig;

fn report() -> &'static VerifyReport {
    static REPORT: OnceLock<VerifyReport> = OnceLock::new();
    REPORT.get_or_init(|| verify::run(&SeesawConfig::with_seed(42)))
}

fn check(id: u8) {
    let result = report()
        .get(id)
        .unwrap_or_else(|| panic!("criterion {id} missing"));
    println!("{result}");
    assert!(result.passed, "{result}");
}

macro_rules! criteria {
    ($($name:ident = $id:expr;)*) => {
        $(#[test] fn $name() { check($id); })*
    };
}

criteria! {
    criterion_01_mermin_closed_form = 1;
    criterion_02_svetlichny_closed_form = 2;
    criterion_03_bancal_closed_form = 3;
    criterion_04_sliwa_closed_form_and_regions = 4;
    criterion_05_ghz_corner = 5;
    criterion_06_sliwa_threshold = 6;
    criterion_07_detector_infima = 7;
    criterion_08_biseparable_local = 8;
    criterion_09_concurrence = 9;
    criterion_10_entangled_local = 10;
    criterion_11_entangled_not_genuinely_nonlocal = 11;
    criterion_12_top_edge_identities = 12;
    criterion_13_determinism = 13;
}

#[test]
fn summary() {
    let r = report();
    for line in r.lines() {
        println!("{line}");
    }
    assert_eq!(r.results.len(), 13);
}
