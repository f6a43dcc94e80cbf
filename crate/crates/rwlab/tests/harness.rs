use rwlab::harness::{
    connection_reports, default_fixtures, exercises, run_suite, CheckName, FixtureSpec, Status, SuiteSpec,
};
use rwlab_core::analysis::Grid;

fn coarse(mut fixtures: Vec<FixtureSpec>) -> Vec<FixtureSpec> {
    for f in &mut fixtures {
        f.grid = Some(Grid::inset(&f.family.domain(), 8, 0.02));
    }
    fixtures
}

fn fixture(name: &str) -> FixtureSpec {
    default_fixtures().into_iter().find(|f| f.name == name).expect(name)
}

fn spec(fixtures: Vec<FixtureSpec>, checks: &[CheckName]) -> SuiteSpec {
    SuiteSpec {
        fixtures: coarse(fixtures),
        checks: checks.to_vec(),
        samples: 50,
        ..SuiteSpec::default()
    }
}

#[test]
fn every_check_has_a_fixture() {
    let fixtures = default_fixtures();
    for c in CheckName::ALL {
        if c == CheckName::Connection {
            continue;
        }
        assert!(fixtures.iter().any(|f| exercises(c, f)), "{c}");
    }
}

#[test]
fn check_names_round_trip() {
    for c in CheckName::ALL {
        assert_eq!(c.as_str().parse::<CheckName>().unwrap(), c);
        assert_eq!(serde_json::to_value(c).unwrap(), c.as_str());
        assert!(!c.statement().is_empty());
        assert!(c.default_tolerance() > 0.0);
    }
    assert!("prop32".parse::<CheckName>().is_err());
}

#[test]
fn default_suite_passes_and_serializes() {
    let report = run_suite(&spec(default_fixtures(), &CheckName::ALL));
    for c in &report.checks {
        assert_eq!(c.status, Status::Pass, "{} {:?}", c.name, c.failures().collect::<Vec<_>>());
        assert!(!c.reports.is_empty());
    }
    assert!(report.passed());
    let text = serde_json::to_string(&report).unwrap();
    let back: rwlab::harness::SuiteReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.checks.len(), CheckName::ALL.len());
    assert_eq!(back.status, Status::Pass);
}

#[test]
fn empty_check_set_passes() {
    let report = run_suite(&spec(default_fixtures(), &[]));
    assert_eq!(report.status, Status::Pass);
    assert!(report.checks.is_empty());
}

#[test]
fn build_errors_block_instead_of_failing() {
    let mut bad = fixture("minimal_cylinder_exp");
    bad.name = "bad_c3".into();
    let mut doc = serde_json::to_value(&bad).unwrap();
    doc["family"]["c3"] = serde_json::json!(0.1);
    let bad: FixtureSpec = serde_json::from_value(doc).unwrap();

    let report = run_suite(&spec(vec![bad.clone()], &[CheckName::MinimalCylinder]));
    let c = report.check(CheckName::MinimalCylinder).unwrap();
    assert_eq!(c.status, Status::Blocked);
    assert_eq!(c.blocked[0].fixture, "bad_c3");
    assert!(c.blocked[0].error.contains("c3"));
    assert_eq!(report.status, Status::Blocked);

    // a failing check outranks a blocked one
    let mut control = fixture("perturbed_cylinder");
    control.negative_control = false;
    let report = run_suite(&spec(vec![bad, control], &[CheckName::ClassA, CheckName::MinimalCylinder]));
    assert_eq!(report.check(CheckName::ClassA).unwrap().status, Status::Fail);
    assert_eq!(report.status, Status::Fail);
}

#[test]
fn unexercised_check_is_blocked() {
    let report = run_suite(&spec(vec![fixture("cylinder_exp")], &[CheckName::MinimalRotation]));
    let c = report.check(CheckName::MinimalRotation).unwrap();
    assert_eq!(c.status, Status::Blocked);
    assert!(c.reports.is_empty());
}

#[test]
fn injected_perturbation_fails_only_class_a() {
    let mut fixtures = default_fixtures();
    let mut p = fixture("perturbed_cylinder");
    p.name = "injected".into();
    p.negative_control = false;
    fixtures.push(p);
    let report = run_suite(&spec(fixtures, &CheckName::ALL));
    for c in &report.checks {
        let failed: Vec<_> = c.failures().map(|r| r.fixture.as_str()).collect();
        if c.name == CheckName::ClassA {
            assert_eq!(failed, ["injected"]);
        } else {
            assert!(failed.is_empty(), "{}: {failed:?}", c.name);
        }
    }
    assert_eq!(report.status, Status::Fail);
}

#[test]
fn per_check_tolerance_overrides_the_global_one() {
    let mut s = spec(
        vec![fixture("cylinder_exp"), fixture("revolution_cosh")],
        &[CheckName::FrameIdentities, CheckName::ClassA],
    );
    s.tolerance = Some(1e-3);
    s.tolerances.insert(CheckName::FrameIdentities, 1e-30);
    let report = run_suite(&s);
    assert_eq!(report.check(CheckName::FrameIdentities).unwrap().status, Status::Fail);
    let class_a = report.check(CheckName::ClassA).unwrap();
    assert_eq!(class_a.status, Status::Pass);
    assert!(class_a.reports.iter().all(|r| r.report.tolerance == 1e-3));
}

#[test]
fn reports_are_deterministic() {
    let s = spec(default_fixtures(), &CheckName::ALL);
    let a = serde_json::to_string(&run_suite(&s)).unwrap();
    let b = serde_json::to_string(&run_suite(&s)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn connection_holds_for_other_seeds() {
    for seed in [1, 2, 99] {
        let reports = connection_reports(seed, 200, 1e-8);
        assert_eq!(reports.len(), 15);
        for r in &reports {
            assert!(r.report.verdict, "{} {:?}", r.fixture, r.report.summaries);
            assert_eq!(r.report.evaluated, 200);
        }
    }
}
