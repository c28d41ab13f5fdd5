//! The reproduction suite: every headline number the crate is expected to
//! reproduce, checked at an explicit tolerance, with one report line per
//! check. Exact criteria admit zero tolerance; seesaw checks are stochastic
//! (seeded here, so deterministic in practice) and flagged as such.

use super::{run_census, CensusReport};
use crate::classical::optimal_classical;
use crate::exact::{rat, render_decimal, to_f64, Rational};
use crate::game::{winning_probability, GameFunction, InputDistribution, Scenario};
use crate::games;
use crate::ns::{facet_check, is_decomposable, is_extremal, is_no_signaling, optimal_ns};
use crate::quantum::seesaw::{seesaw, seesaw_fixed_state, SeesawOptions};
use crate::quantum::strategies;
use crate::quantum::transform_strategy;
use crate::symmetry;
use crate::Result;
use std::time::Instant;

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: String,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub tolerance: String,
    pub passed: bool,
    /// Stochastic-retry checks depend on seeded random restarts; with the
    /// bundled seeds they are deterministic, but an adversarial seed or a
    /// single restart may miss the target without indicating a bug.
    pub stochastic: bool,
    pub seconds: f64,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {}: expected {}, actual {} (tol {}{}) [{:.2}s]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.expected,
            self.actual,
            self.tolerance,
            if self.stochastic {
                ", stochastic-retry"
            } else {
                ""
            },
            self.seconds
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.line());
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            failed
        ));
        out
    }
}

struct Checker {
    id: String,
    checks: Vec<CheckResult>,
    started: Instant,
    stochastic: bool,
}

impl Checker {
    fn new(id: &str) -> Self {
        Checker {
            id: id.to_string(),
            checks: Vec::new(),
            started: Instant::now(),
            stochastic: false,
        }
    }

    fn stochastic(mut self) -> Self {
        self.stochastic = true;
        self
    }

    fn push(&mut self, name: &str, expected: String, actual: String, tol: &str, passed: bool) {
        self.checks.push(CheckResult {
            id: self.id.clone(),
            name: name.to_string(),
            expected,
            actual,
            tolerance: tol.to_string(),
            passed,
            stochastic: self.stochastic,
            seconds: self.started.elapsed().as_secs_f64(),
        });
        self.started = Instant::now();
    }

    fn exact_u64(&mut self, name: &str, expected: u64, actual: u64) {
        self.push(
            name,
            expected.to_string(),
            actual.to_string(),
            "exact",
            expected == actual,
        );
    }

    fn exact_rat(&mut self, name: &str, expected: &Rational, actual: &Rational) {
        self.push(
            name,
            render_decimal(expected),
            render_decimal(actual),
            "exact",
            expected == actual,
        );
    }

    fn close(&mut self, name: &str, expected: f64, actual: f64, tol: f64) {
        self.push(
            name,
            format!("{expected:.7}"),
            format!("{actual:.7}"),
            &format!("{tol:.0e}"),
            (expected - actual).abs() <= tol,
        );
    }

    fn at_most(&mut self, name: &str, bound: f64, actual: f64, tol: f64) {
        self.push(
            name,
            format!("<= {bound:.7}"),
            format!("{actual:.7}"),
            &format!("{tol:.0e}"),
            actual <= bound + tol,
        );
    }

    fn boolean(&mut self, name: &str, expected: bool, actual: bool) {
        self.push(
            name,
            expected.to_string(),
            actual.to_string(),
            "exact",
            expected == actual,
        );
    }
}

/// Criterion 1: the (2,2,2) census is trivial.
pub fn criterion1(report: &CensusReport) -> Vec<CheckResult> {
    let mut c = Checker::new("1");
    c.exact_u64("census(2,2,2) functions", 256, report.total_functions);
    c.exact_u64(
        "census(2,2,2) nontrivial classes",
        0,
        report.nontrivial_class_count,
    );
    c.checks
}

/// Criterion 2: the (2,3,2) census.
pub fn criterion2(report: &CensusReport) -> Vec<CheckResult> {
    let mut c = Checker::new("2");
    c.exact_u64("census(2,3,2) classes", 2162, report.class_count);
    c.exact_u64(
        "census(2,3,2) nontrivial classes",
        256,
        report.nontrivial_class_count,
    );
    c.exact_u64(
        "census(2,3,2) nontrivial functions",
        196_992,
        report.nontrivial_function_count,
    );
    let all_expected = report
        .bounds
        .iter()
        .filter(|b| b.no_signaling > b.classical)
        .all(|b| b.classical == rat(4, 9) && b.no_signaling == rat(1, 2));
    c.boolean("every nontrivial class has (4/9, 1/2)", true, all_expected);
    c.checks
}

/// Criterion 3: the (3,2,2) census statistics tables.
pub fn criterion3(report: &CensusReport) -> Vec<CheckResult> {
    let mut c = Checker::new("3");
    c.exact_u64("census(3,2,2) classes", 5876, report.class_count);
    c.exact_u64(
        "census(3,2,2) nontrivial classes",
        68,
        report.nontrivial_class_count,
    );
    c.exact_u64(
        "census(3,2,2) nontrivial functions",
        34_176,
        report.nontrivial_function_count,
    );

    let expected_cl: Vec<(Rational, u64)> = vec![(rat(1, 4), 45), (rat(3, 8), 23)];
    let actual_cl: Vec<(Rational, u64)> = report
        .histogram_cl
        .iter()
        .map(|(k, &v)| (k.clone(), v))
        .collect();
    c.push(
        "omega_cl histogram",
        format!("{:?}", render_hist(&expected_cl)),
        format!("{:?}", render_hist(&actual_cl)),
        "exact",
        expected_cl == actual_cl,
    );

    let expected_ns: Vec<(&str, u64)> = vec![
        ("0.275", 1),
        ("0.28125", 1),
        ("0.291667", 11),
        ("0.3", 1),
        ("0.3125", 30),
        ("0.333333", 1),
        ("0.4375", 21),
        ("0.5", 2),
    ];
    let actual_ns: Vec<(String, u64)> = report
        .histogram_ns
        .iter()
        .map(|(k, &v)| (render_decimal(k), v))
        .collect();
    let ns_match = expected_ns.len() == actual_ns.len()
        && expected_ns
            .iter()
            .zip(&actual_ns)
            .all(|((ek, ev), (ak, av))| ek == ak && ev == av);
    c.push(
        "omega_ns histogram (rendered decimals)",
        format!("{expected_ns:?}"),
        format!("{actual_ns:?}"),
        "exact",
        ns_match,
    );

    let gap_total: u64 = report.histogram_abs_gap.values().sum();
    c.exact_u64("delta_a histogram total", 68, gap_total);
    c.checks
}

fn render_hist(h: &[(Rational, u64)]) -> Vec<(String, u64)> {
    h.iter().map(|(k, v)| (render_decimal(k), *v)).collect()
}

/// Criterion 4: exact classical and no-signaling bounds of the named games.
pub fn criterion4() -> Result<Vec<CheckResult>> {
    let mut c = Checker::new("4");
    let cases: Vec<(&str, GameFunction, Rational, Option<Rational>)> = vec![
        ("addition", games::addition(), rat(3, 8), Some(rat(1, 2))),
        (
            "three_input_example",
            games::three_input_example(),
            rat(4, 9),
            Some(rat(1, 2)),
        ),
        (
            "partial_entanglement",
            games::partial_entanglement(),
            rat(4, 9),
            Some(rat(1, 2)),
        ),
        (
            "dimension_witness",
            games::dimension_witness(),
            rat(4, 9),
            Some(rat(1, 2)),
        ),
        (
            "symmetric_five_input",
            games::symmetric_five_input(),
            rat(10, 25),
            None,
        ),
        (
            "tripartite",
            games::tripartite(),
            rat(3, 8),
            Some(rat(1, 2)),
        ),
        ("class25", games::class25(), rat(1, 4), Some(rat(1, 3))),
    ];
    for (name, f, expect_cl, expect_ns) in cases {
        let cl = optimal_classical(&f)?.value;
        c.exact_rat(&format!("{name} omega_cl"), &expect_cl, &cl);
        if let Some(expect) = expect_ns {
            let ns = optimal_ns(&f)?;
            c.exact_rat(&format!("{name} omega_ns"), &expect, &ns.value);
            c.boolean(
                &format!("{name} LP certificate"),
                true,
                ns.certificate.verified,
            );
        }
    }
    Ok(c.checks)
}

/// Criterion 5: the explicit quantum strategies hit their closed forms.
pub fn criterion5() -> Result<Vec<CheckResult>> {
    let mut c = Checker::new("5");
    let v = strategies::addition_strategy().value(&games::addition())?;
    c.close("addition strategy", (2.0 + SQRT2) / 8.0, v, 1e-12);
    let v = strategies::tripartite_strategy().value(&games::tripartite())?;
    c.close(
        "tripartite strategy",
        0.5 * (std::f64::consts::PI / 8.0).cos().powi(2),
        v,
        1e-12,
    );
    let v = strategies::three_input_strategy().value(&games::three_input_example())?;
    c.close(
        "three-input strategy",
        (1.0 + 1.5 + (SQRT2 + 2.0) / 2.0) / 9.0,
        v,
        1e-12,
    );
    Ok(c.checks)
}

/// Criterion 6: seesaw reproduces the published quantum values from below.
pub fn criterion6(threads: usize) -> Result<Vec<CheckResult>> {
    let mut c = Checker::new("6").stochastic();
    let opts = |dims: Vec<usize>, restarts: usize| {
        SeesawOptions::new(dims)
            .restarts(restarts)
            .seed(0)
            .threads(threads)
    };

    let out = seesaw(&games::facet(), &opts(vec![2, 2], 50))?;
    c.close("facet seesaw (2,2)", 0.403093, out.value, 1e-4);
    c.boolean("facet seesaw monotone", true, out.monotone);

    let out = seesaw(&games::dimension_witness(), &opts(vec![3, 3], 50))?;
    c.close(
        "dimension witness seesaw (3,3)",
        4.154_700_5 / 9.0,
        out.value,
        1e-4,
    );
    let out22 = seesaw(&games::dimension_witness(), &opts(vec![2, 2], 50))?;
    c.at_most(
        "dimension witness seesaw (2,2)",
        4.0 / 9.0,
        out22.value,
        1e-6,
    );

    let out = seesaw(&games::partial_entanglement(), &opts(vec![2, 2], 50))?;
    c.close(
        "partial entanglement seesaw (2,2)",
        4.1224 / 9.0,
        out.value,
        1e-4,
    );
    let fixed = seesaw_fixed_state(
        &games::partial_entanglement(),
        &strategies::phi_plus(),
        &opts(vec![2, 2], 50),
    )?;
    c.close(
        "partial entanglement, maximally entangled qubits fixed",
        4.0178 / 9.0,
        fixed.value,
        1e-3,
    );

    let out = seesaw(&games::symmetric_five_input(), &opts(vec![2, 2], 50))?;
    c.close(
        "symmetric five-input seesaw (2,2)",
        10.295_084_9 / 25.0,
        out.value,
        1e-4,
    );

    let out = seesaw(&games::class25(), &opts(vec![2, 2, 2], 50))?;
    c.at_most(
        "class25 seesaw below the SDP bound",
        0.260746,
        out.value,
        1e-6,
    );
    Ok(c.checks)
}

/// Criterion 7: the facet game defines a facet; the first example does not.
pub fn criterion7() -> Result<Vec<CheckResult>> {
    let mut c = Checker::new("7");
    c.boolean("facet_check(facet)", true, facet_check(&games::facet())?);
    c.boolean(
        "facet_check(three_input_example)",
        false,
        facet_check(&games::three_input_example())?,
    );
    Ok(c.checks)
}

/// Criterion 8: the printed class-25 box is a non-decomposable extremal
/// no-signaling box winning exactly 1/3.
pub fn criterion8() -> Result<Vec<CheckResult>> {
    let mut c = Checker::new("8");
    let b = games::class25_box();
    let f = games::class25();
    c.boolean("class25 box no-signaling", true, is_no_signaling(&b));
    let w = winning_probability(&f, &b, &InputDistribution::uniform(f.scenario()))?;
    c.exact_rat("class25 box winning probability", &rat(1, 3), &w);
    c.boolean("class25 box extremal", true, is_extremal(&b)?);
    c.boolean(
        "class25 box decomposable",
        false,
        is_decomposable(&b)?.is_some(),
    );
    Ok(c.checks)
}

/// Criterion 9: the counting module.
pub fn criterion9() -> Result<Vec<CheckResult>> {
    let mut c = Checker::new("9");
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let mut all_exact = true;
    for n in [2usize, 3] {
        let s = Scenario::symmetric(n, if n == 2 { 3 } else { 2 }, 2)?;
        let q = InputDistribution::uniform(&s);
        let target = rat(1, 1 << (n - 1));
        for _ in 0..50 {
            let table: Vec<u32> = (0..s.joint_inputs())
                .map(|_| rng.gen_range(0..s.joint_outputs() as u32))
                .collect();
            let f = GameFunction::from_table(s.clone(), table)?;
            let b = crate::counting::parity_box(&f)?;
            if winning_probability(&f, &b, &q)? != target {
                all_exact = false;
            }
        }
    }
    c.boolean(
        "parity box wins exactly 2^(1-n) on 100 random games",
        true,
        all_exact,
    );

    let mut hstar_ok = true;
    for n in 1..=4usize {
        let v = crate::counting::hstar(1.0 / (1u64 << n) as f64, n)?;
        if (v - n as f64).abs() > 1e-12 {
            hstar_ok = false;
        }
    }
    c.boolean("hstar(2^-n, n) = n for n <= 4", true, hstar_ok);

    let b64 = crate::counting::encoding_bound(2, 64, 0.375)?;
    c.close(
        "log fraction bound at (n=2, m=64, 3/8)",
        -97.0,
        b64.log_fraction_bound,
        0.5,
    );
    let mut decreasing = true;
    let mut prev = f64::INFINITY;
    for m in 40..=80 {
        let b = crate::counting::encoding_bound(2, m, 0.375)?;
        if b.log_fraction_bound >= prev {
            decreasing = false;
        }
        prev = b.log_fraction_bound;
    }
    c.boolean("bound strictly decreasing for m >= 40", true, decreasing);
    Ok(c.checks)
}

/// Criterion 10: the cross-cutting property suites.
pub fn criterion10(threads: usize) -> Result<Vec<CheckResult>> {
    let mut c = Checker::new("10");

    // LP duality certificates: optimal_ns verifies every call internally;
    // surface the flags for the bundled games here.
    let mut certs = true;
    for (_, f) in games::all_named() {
        certs &= optimal_ns(&f)?.certificate.verified;
    }
    c.boolean("LP duality certificates on bundled games", true, certs);

    // Symmetry invariance of the exact bounds at (2,3,2), 100 random pairs.
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
    let s = Scenario::symmetric(2, 3, 2)?;
    let sys = crate::ns::NsConstraintSystem::build(&s);
    let mut invariant = true;
    for _ in 0..100 {
        let table: Vec<u32> = (0..9).map(|_| rng.gen_range(0..4)).collect();
        let f = GameFunction::from_table(s.clone(), table)?;
        let g = symmetry::RelabellingElement::random(&s, &mut rng);
        let fg = symmetry::apply(&g, &f)?;
        if optimal_classical(&f)?.value != optimal_classical(&fg)?.value {
            invariant = false;
        }
        if crate::ns::optimal_ns_with(&f, &sys)?.value
            != crate::ns::optimal_ns_with(&fg, &sys)?.value
        {
            invariant = false;
        }
    }
    c.boolean(
        "classical/NS bounds invariant on 100 random (g,f) pairs",
        true,
        invariant,
    );

    // Quantum relabelling covariance: transformed strategies evaluate
    // identically on transformed games.
    let mut covariant = true;
    let s4 = Scenario::symmetric(2, 4, 2)?;
    let mut rng4 = rand_chacha::ChaCha8Rng::seed_from_u64(29);
    for _ in 0..10 {
        let g = symmetry::RelabellingElement::random(&s4, &mut rng4);
        let qs = strategies::addition_strategy();
        let f = games::addition();
        let fg = symmetry::apply(&g, &f)?;
        let qsg = transform_strategy(&g, &qs)?;
        if (qs.value(&f)? - qsg.value(&fg)?).abs() > 1e-12 {
            covariant = false;
        }
    }
    c.boolean("quantum value covariant under relabelling", true, covariant);

    // Ordering omega_cl <= seesaw lower bound (within noise) and
    // seesaw <= omega_ns on every bundled game.
    let mut ordered = true;
    for (name, f) in games::all_named() {
        let dims = vec![2; f.scenario().players()];
        let out = seesaw(
            &f,
            &SeesawOptions::new(dims)
                .restarts(12)
                .seed(1)
                .threads(threads),
        )?;
        let cl = to_f64(&optimal_classical(&f)?.value);
        let ns = to_f64(&optimal_ns(&f)?.value);
        if !(out.value >= cl - 1e-7 && out.value <= ns + 1e-9) {
            eprintln!(
                "ordering violated for {name}: cl={cl} q={} ns={ns}",
                out.value
            );
            ordered = false;
        }
        if !out.monotone {
            eprintln!("seesaw non-monotone on {name}");
            ordered = false;
        }
    }
    c.boolean(
        "omega_cl <= omega_q_lower <= omega_ns on bundled games",
        true,
        ordered,
    );
    Ok(c.checks)
}

/// Runs every acceptance check; failures are report content, not errors.
pub fn verify_paper(threads: usize) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();

    let census222 = run_census(&Scenario::symmetric(2, 2, 2)?, threads)?;
    report.checks.extend(criterion1(&census222));
    let census232 = run_census(&Scenario::symmetric(2, 3, 2)?, threads)?;
    report.checks.extend(criterion2(&census232));
    let census322 = run_census(&Scenario::symmetric(3, 2, 2)?, threads)?;
    report.checks.extend(criterion3(&census322));
    report.checks.extend(criterion4()?);
    report.checks.extend(criterion5()?);
    report.checks.extend(criterion6(threads)?);
    report.checks.extend(criterion7()?);
    report.checks.extend(criterion8()?);
    report.checks.extend(criterion9()?);
    report.checks.extend(criterion10(threads)?);
    Ok(report)
}
