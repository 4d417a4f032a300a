use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cherednik_core::{
    gr_comparison, is_good, run_suite, BoundMode, CheckReport, CheckStatus, Error, GrOptions, Param, RatFunc,
    Side, SuiteOptions, SUITES,
};

fn failing(report: &CheckReport) -> Vec<String> {
    report
        .checks
        .iter()
        .filter(|c| c.status == CheckStatus::Fail)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect()
}

fn random_good_rational(rng: &mut StdRng, n: usize) -> BigRational {
    loop {
        let r = BigRational::new(rng.gen_range(-12i64..=12).into(), rng.gen_range(1i64..=7).into());
        if is_good(&r, n) {
            return r;
        }
    }
}

#[test]
fn every_suite_passes_formally_for_rank_two() {
    for name in SUITES {
        let report = run_suite(name, 2, &SuiteOptions::default()).unwrap();
        assert!(report.passed(), "{name}: {:?}", failing(&report));
        assert!(!report.checks.is_empty());
    }
}

#[test]
fn every_suite_passes_at_a_random_good_rational() {
    let mut rng = StdRng::seed_from_u64(20);
    for name in SUITES {
        let r = random_good_rational(&mut rng, 2);
        let opts = SuiteOptions {
            param: Param::Rational(r.clone()),
            ..SuiteOptions::default()
        };
        let report = run_suite(name, 2, &opts).unwrap();
        assert!(report.passed(), "{name} at c = {r}: {:?}", failing(&report));
        assert_eq!(report.param.value.as_deref(), Some(r.to_string().as_str()));
    }
}

#[test]
fn identity_suites_hold_at_rank_three_for_a_good_rational() {
    let mut rng = StdRng::seed_from_u64(30);
    for name in ["dunkl_commute", "heckman", "cm_appendix", "sc5_radial"] {
        let r = random_good_rational(&mut rng, 3);
        let opts = SuiteOptions {
            param: Param::Rational(r.clone()),
            ..SuiteOptions::default()
        };
        let report = run_suite(name, 3, &opts).unwrap();
        assert!(report.passed(), "{name} at c = {r}: {:?}", failing(&report));
    }
}

#[test]
fn identities_also_hold_at_a_bad_rational() {
    // Identity suites hold for every c; goodness only matters for the gr suites.
    let opts = SuiteOptions {
        param: Param::Rational(BigRational::new((-1).into(), 2.into())),
        ..SuiteOptions::default()
    };
    for name in ["dunkl_commute", "heckman", "cm_appendix", "twist_lemma"] {
        let report = run_suite(name, 2, &opts).unwrap();
        assert!(report.passed(), "{name}: {:?}", failing(&report));
    }
}

#[test]
fn reports_are_deterministic() {
    for name in ["heckman", "qgr_main", "good_values"] {
        let a = run_suite(name, 2, &SuiteOptions::default()).unwrap();
        let b = run_suite(name, 2, &SuiteOptions::default()).unwrap();
        assert_eq!(a.to_json_without_timing(), b.to_json_without_timing());
    }
}

#[test]
fn report_json_follows_the_schema() {
    let report = run_suite("heckman", 2, &SuiteOptions::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(v["suite"], "heckman");
    assert_eq!(v["n"], 2);
    assert_eq!(v["param"]["mode"], "formal");
    assert!(v["param"].get("value").is_none());
    let check = &v["checks"][0];
    assert_eq!(check["status"], "pass");
    assert!(check["name"].is_string() && check["detail"].is_string() && check["ms"].is_u64());
    let back: CheckReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, report);
}

#[test]
fn unknown_suite_and_small_rank_are_errors() {
    assert_eq!(
        run_suite("nope", 2, &SuiteOptions::default()),
        Err(Error::UnknownSuite("nope".into()))
    );
    assert!(run_suite("heckman", 1, &SuiteOptions::default()).is_err());
}

#[test]
fn base_case_is_skipped_for_composites() {
    let opts = SuiteOptions {
        m: 2,
        bounds: (2, 2),
        ..SuiteOptions::default()
    };
    let report = run_suite("qgr_main", 2, &opts).unwrap();
    assert!(report.passed(), "{:?}", failing(&report));
    assert!(report.checks.iter().any(|c| c.status == CheckStatus::Skip));
}

#[test]
fn factorwise_and_merged_filtrations_agree_on_trusted_region() {
    let mut merged = GrOptions::new(2, 2, Side::Q, 3, 3, RatFunc::param());
    merged.slack = 0;
    let mut factorwise = merged.clone();
    factorwise.bound_mode = BoundMode::Factorwise;
    let a = gr_comparison(&merged).unwrap();
    let b = gr_comparison(&factorwise).unwrap();
    assert_eq!(a.overflows() + b.overflows(), 0);
    for row in a.rows.iter().filter(|r| r.trusted) {
        let other = b.row(row.i, row.j).expect("same trusted bidegrees");
        assert_eq!((row.span_dim, row.target_dim), (other.span_dim, other.target_dim), "at ({},{})", row.i, row.j);
    }
}

#[test]
fn both_sides_at_rank_three() {
    // deg δ = 3 here, so degree shifts and δ powers differ.
    for side in [Side::Q, Side::P] {
        let mut opts = GrOptions::new(3, 1, side, 4, 1, RatFunc::param());
        opts.slack = 1;
        let cmp = gr_comparison(&opts).unwrap();
        assert!(cmp.passes(), "{side}: {:?}", cmp.rows);
        assert!(cmp.rows.iter().any(|r| r.trusted && r.span_dim > 0));
    }
}
