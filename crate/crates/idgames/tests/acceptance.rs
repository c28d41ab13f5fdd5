//! The acceptance gate: one test per criterion, each printing one line per
//! sub-check (run with `-- --nocapture` to see them on success) and failing
//! if any sub-check fails.
//!
//! Five sub-checks across three criteria are expected to fail against the
//! published figures and are left red deliberately; the census integration tests in
//! `census_counts.rs` pin the computed ground truth with independent
//! oracles (group-free brute force and a Burnside count):
//!
//! * criterion 2: the published (2,3,2) table claims 2162 classes / 256
//!   nontrivial / 196992 functions; the relabelling group that reproduces
//!   every (3,2,2) statistic yields 85 / 10 / 34176, and exhaustive
//!   strategy enumeration over all 262144 functions confirms exactly 34176
//!   have a classical optimum below 1/2 (the published function counts for
//!   the two scenarios are transposed);
//! * criterion 3: same transposition, (3,2,2) truly has 196992;
//! * criterion 6: the dimension-witness table as printed admits a
//!   two-qubit strategy at its claimed three-dimensional optimum
//!   4.1547005/9 (re-verified outside this crate from the strategy dump),
//!   so its two-dimensional value is not capped by 4/9.

use idgames::census::verify::{self, CheckResult};
use idgames::census::{run_census, CensusReport};
use idgames::exact::rat;
use idgames::game::Scenario;
use std::sync::OnceLock;
use std::time::Instant;

fn census_222() -> &'static CensusReport {
    static CELL: OnceLock<CensusReport> = OnceLock::new();
    CELL.get_or_init(|| {
        let t0 = Instant::now();
        let r = run_census(&Scenario::symmetric(2, 2, 2).unwrap(), 2).unwrap();
        assert!(
            t0.elapsed().as_secs_f64() < 1.0,
            "criterion 1 budget: < 1 s"
        );
        r
    })
}

fn census_232() -> &'static CensusReport {
    static CELL: OnceLock<CensusReport> = OnceLock::new();
    CELL.get_or_init(|| {
        let t0 = Instant::now();
        let r = run_census(&Scenario::symmetric(2, 3, 2).unwrap(), 2).unwrap();
        assert!(
            t0.elapsed().as_secs_f64() < 120.0,
            "criterion 2 budget: < 2 min"
        );
        r
    })
}

fn census_322() -> &'static CensusReport {
    static CELL: OnceLock<CensusReport> = OnceLock::new();
    CELL.get_or_init(|| {
        let t0 = Instant::now();
        let r = run_census(&Scenario::symmetric(3, 2, 2).unwrap(), 2).unwrap();
        assert!(
            t0.elapsed().as_secs_f64() < 600.0,
            "criterion 3 budget: < 10 min"
        );
        r
    })
}

fn report(checks: &[CheckResult]) {
    for c in checks {
        println!("{}", c.line());
    }
    let failed: Vec<&CheckResult> = checks.iter().filter(|c| !c.passed).collect();
    assert!(
        failed.is_empty(),
        "failed sub-checks:\n{}",
        failed
            .iter()
            .map(|c| c.line())
            .collect::<Vec<_>>()
            .join("\n")
    );
}

#[test]
fn criterion_1_census_222() {
    report(&verify::criterion1(census_222()));
}

#[test]
fn criterion_2_census_232() {
    report(&verify::criterion2(census_232()));
}

#[test]
fn criterion_3_census_322() {
    report(&verify::criterion3(census_322()));
}

#[test]
fn criterion_4_named_game_exact_bounds() {
    report(&verify::criterion4().unwrap());
}

#[test]
fn criterion_5_explicit_quantum_strategies() {
    report(&verify::criterion5().unwrap());
}

#[test]
fn criterion_6_seesaw_reproductions() {
    let t0 = Instant::now();
    let checks = verify::criterion6(2).unwrap();
    // Each named seesaw run must stay well inside its 30 s budget; the
    // whole group comfortably bounds each one.
    assert!(t0.elapsed().as_secs_f64() < 180.0, "criterion 6 budget");
    report(&checks);
}

#[test]
fn criterion_7_facet_checks() {
    report(&verify::criterion7().unwrap());
}

#[test]
fn criterion_8_class25_box() {
    report(&verify::criterion8().unwrap());
}

#[test]
fn criterion_9_counting_module() {
    report(&verify::criterion9().unwrap());
}

#[test]
fn criterion_10_property_suites() {
    report(&verify::criterion10(2).unwrap());
}

/// Census invariant beyond the numbered criteria: bounds recomputed from
/// scratch on non-representative members of nontrivial (2,3,2) classes
/// agree with the table values.
#[test]
fn census_232_cross_member_consistency() {
    use idgames::classical::optimal_classical;
    use idgames::ns::{optimal_ns_with, NsConstraintSystem};
    use idgames::symmetry::{apply, orbit};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    let report_data = census_232();
    let nontrivial: Vec<_> = report_data
        .bounds
        .iter()
        .filter(|b| b.no_signaling > b.classical)
        .collect();
    assert!(!nontrivial.is_empty());
    let s = Scenario::symmetric(2, 3, 2).unwrap();
    let sys = NsConstraintSystem::build(&s);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let class = nontrivial[rng.gen_range(0..nontrivial.len())];
        let members = orbit(&class.class.representative).unwrap();
        let member = members.choose(&mut rng).unwrap();
        assert_eq!(optimal_classical(member).unwrap().value, rat(4, 9));
        assert_eq!(optimal_ns_with(member, &sys).unwrap().value, rat(1, 2));
        // Also via a random element applied to the representative.
        let g = idgames::symmetry::RelabellingElement::random(&s, &mut rng);
        let moved = apply(&g, &class.class.representative).unwrap();
        assert_eq!(optimal_classical(&moved).unwrap().value, rat(4, 9));
    }
}
