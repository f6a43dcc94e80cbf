//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::process::Command;
use std::time::Instant;

use rwlab::harness::{
    self, connection_reports, default_fixtures, run_suite, CheckName, Status, SuiteReport, SuiteSpec, DEFAULT_SEED,
};
use rwlab_core::analysis::Expectation;
use rwlab_core::ambient::WarpingFunction;
use rwlab_core::families::functions::{Integrand, Profile};
use rwlab_core::families::sphere_curve::{constant_curvature_curve, SphereCurve, SphereFrame};
use rwlab_core::families::ScalarFn;

const AC1_TOL: f64 = 1e-8;
const AC1_SECONDS: f64 = 5.0;
const AC2_TOL: f64 = 1e-6;
const AC2_SECONDS: f64 = 10.0;
const AC3_TOL: f64 = 1e-5;
const AC4_TOL: f64 = 1e-5;
const CONTROL: f64 = 1e-3;
const AC5_TOL: f64 = 1e-5;
const AC6_ETA_TOL: f64 = 1e-6;
const AC6_THETA_TOL: f64 = 1e-7;
const AC7_RATIO: f64 = 16.0;
const AC7_FACTOR: f64 = 2.0;
const AC8_SECONDS: f64 = 60.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn check(s: &SuiteReport, c: CheckName) -> &harness::CheckResult {
    s.check(c).expect("check present")
}

/// Largest residual over the reports of `c` with `name` and expectation `Below`.
fn worst(s: &SuiteReport, c: CheckName, name: &str) -> (f64, usize, bool) {
    let rs: Vec<_> = check(s, c)
        .reports
        .iter()
        .filter(|r| r.report.name == name && r.report.expectation == Expectation::Below)
        .collect();
    let max = rs.iter().map(|r| r.report.max()).fold(0.0, f64::max);
    let ok = rs.iter().all(|r| r.report.verdict);
    (max, rs.len(), ok)
}

fn ac1() -> Outcome {
    let t = Instant::now();
    let reports = connection_reports(DEFAULT_SEED, 1000, AC1_TOL);
    let secs = t.elapsed().as_secs_f64();
    let max = reports.iter().map(|r| r.report.max()).fold(0.0, f64::max);
    let full = reports.iter().all(|r| r.report.evaluated == 1000 && r.report.failures == 0);
    let pass = reports.len() == 15 && full && max < AC1_TOL && secs < AC1_SECONDS;
    outcome(
        pass,
        format!(
            "{} warping/curvature cases x 1000 points, max residual {max:.2e} (tol {AC1_TOL:.0e}), {secs:.2} s",
            reports.len()
        ),
    )
}

fn ac2() -> Outcome {
    let t = Instant::now();
    let spec = SuiteSpec {
        checks: vec![CheckName::CylinderTable, CheckName::RotationTable],
        ..SuiteSpec::default()
    };
    let s = run_suite(&spec);
    let secs = t.elapsed().as_secs_f64();
    let (cmax, cn, cok) = worst(&s, CheckName::CylinderTable, "closed_form");
    let (rmax, rn, rok) = worst(&s, CheckName::RotationTable, "closed_form");
    let grids = spec
        .fixtures
        .iter()
        .all(|f| f.grid().n_u == 32 && f.grid().n_v == 32);
    let pass = cn >= 3 && rn >= 3 && cok && rok && cmax < AC2_TOL && rmax < AC2_TOL && grids && secs < AC2_SECONDS;
    outcome(
        pass,
        format!(
            "cylinder {cn} fixtures max {cmax:.2e}, rotation {rn} fixtures max {rmax:.2e} (tol {AC2_TOL:.0e}), {secs:.2} s"
        ),
    )
}

fn ac3(s: &SuiteReport) -> Outcome {
    let (max, n, ok) = worst(s, CheckName::FrameIdentities, "frame_identities");
    let all = n == default_fixtures().len();
    outcome(
        ok && all && n >= 5 && max < AC3_TOL,
        format!("{n} fixtures, six identities, max residual {max:.2e} (tol {AC3_TOL:.0e})"),
    )
}

fn ac4(s: &SuiteReport) -> Outcome {
    let c = check(s, CheckName::ClassA);
    let fams = ["cylinder", "spherical"];
    let fixtures = default_fixtures();
    let family_of = |name: &str| {
        fixtures
            .iter()
            .find(|f| f.name == name)
            .map(|f| f.family.name())
            .unwrap_or("")
    };
    let generated: Vec<_> = c
        .reports
        .iter()
        .filter(|r| r.report.expectation == Expectation::Below && fams.contains(&family_of(&r.fixture)))
        .collect();
    let gmax = generated.iter().map(|r| r.report.max()).fold(0.0, f64::max);
    let gok = generated.iter().all(|r| r.report.verdict) && gmax < AC4_TOL;
    let control: Vec<_> = c
        .reports
        .iter()
        .filter(|r| r.report.expectation == Expectation::Above)
        .collect();
    let cmin = control.iter().map(|r| r.report.max()).fold(f64::INFINITY, f64::min);
    let cok = !control.is_empty() && cmin > CONTROL;
    outcome(
        gok && cok && generated.len() >= 4,
        format!(
            "{} cylinder/spherical patches max {gmax:.2e} (tol {AC4_TOL:.0e}); perturbed residual {cmin:.2e} (> {CONTROL:.0e})",
            generated.len()
        ),
    )
}

fn ac5(s: &SuiteReport) -> Outcome {
    let (cmax, cn, cok) = worst(s, CheckName::MinimalCylinder, "minimality");
    let (rmax, rn, rok) = worst(s, CheckName::MinimalRotation, "minimality");
    let injected: Vec<_> = check(s, CheckName::MinimalSpherical)
        .reports
        .iter()
        .filter(|r| r.report.name == "minimality_with_kappa_1")
        .collect();
    let imin = injected.iter().map(|r| r.report.max()).fold(f64::INFINITY, f64::min);
    let pass = cn >= 1 && rn >= 1 && cok && rok && cmax < AC5_TOL && rmax < AC5_TOL && !injected.is_empty() && imin > CONTROL;
    outcome(
        pass,
        format!(
            "|H| minimal cylinder {cmax:.2e} ({cn}), minimal rotation {rmax:.2e} ({rn}) (tol {AC5_TOL:.0e}); kappa = 1 injection {imin:.2e} (> {CONTROL:.0e})"
        ),
    )
}

fn ac6(s: &SuiteReport) -> Outcome {
    let (emax, en, eok) = worst(s, CheckName::EtaFamilies, "eta_parallel");
    let (tmax, tn, tok) = worst(s, CheckName::EtaFamilies, "theta_constancy");
    let implication = check(s, CheckName::EtaClassA);
    let iok = implication.status == Status::Pass
        && implication
            .reports
            .iter()
            .filter(|r| r.report.name == "class_a_given_eta_parallel")
            .count()
            >= en;
    let pass = en == 2 && tn == 2 && eok && tok && emax < AC6_ETA_TOL && tmax < AC6_THETA_TOL && iok;
    outcome(
        pass,
        format!(
            "eta residual {emax:.2e} (tol {AC6_ETA_TOL:.0e}), max|theta - mean| {tmax:.2e} (tol {AC6_THETA_TOL:.0e}), eta parallel => class A on every eta-parallel fixture: {iok}"
        ),
    )
}

fn ratios(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[0] / w[1]).collect()
}

fn ratios_ok(r: &[f64]) -> bool {
    r.len() == 3 && r.iter().all(|x| *x > AC7_RATIO / AC7_FACTOR && *x < AC7_RATIO * AC7_FACTOR)
}

fn ac7() -> Outcome {
    let frame = SphereFrame::default();
    let v1 = 3.0;
    let rk4: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|&h| {
            let c = SphereCurve::from_curvature(ScalarFn::Constant(1.0), frame, 0.0, v1, h).expect("curve");
            let a = c.state(v1).expect("state").alpha;
            let e = constant_curvature_curve(1.0, &frame, v1);
            (0..3).map(|i| (a[i] - e[i]).abs()).fold(0.0, f64::max)
        })
        .collect();
    let w = WarpingFunction::exponential(1.0).expect("warping");
    let g = Integrand::MinimalCylinder {
        c1: 0.5,
        c3: -(-4.0f64).exp(),
    };
    let value = |panels: usize| {
        Profile::integral(g, &w, 1.0, 0.0, 0.0, 0.0, 1.0, panels)
            .expect("quadrature")
            .jet(1.0)
            .value
    };
    let reference = value(1 << 14);
    let simpson: Vec<f64> = [16, 32, 64, 128].iter().map(|&n| (value(n) - reference).abs()).collect();
    let (r1, r2) = (ratios(&rk4), ratios(&simpson));
    let fmt = |r: &[f64]| r.iter().map(|x| format!("{x:.1}")).collect::<Vec<_>>().join(", ");
    outcome(
        ratios_ok(&r1) && ratios_ok(&r2),
        format!(
            "error ratios per halving: RK4 sphere curve [{}], Simpson minimal-cylinder quadrature [{}] (expect 16 within x{AC7_FACTOR})",
            fmt(&r1),
            fmt(&r2)
        ),
    )
}

fn ac8() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let bin = env!("CARGO_BIN_EXE_rwlab");
    let mut outputs = Vec::new();
    let mut secs = 0.0f64;
    let mut codes = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("run{k}.json"));
        let t = Instant::now();
        let st = Command::new(bin)
            .args(["verify", "--output"])
            .arg(&path)
            .output()
            .expect("run rwlab");
        secs = secs.max(t.elapsed().as_secs_f64());
        codes.push(st.status.code());
        outputs.push(std::fs::read(&path).unwrap_or_default());
    }
    let same = !outputs[0].is_empty() && outputs[0] == outputs[1];
    let ok = codes.iter().all(|c| *c == Some(0));
    outcome(
        same && ok && secs < AC8_SECONDS,
        format!(
            "two verify runs byte-identical: {same} ({} bytes), exit codes {codes:?}, slowest {secs:.2} s (< {AC8_SECONDS} s)",
            outputs[0].len()
        ),
    )
}

fn main() {
    let suite = run_suite(&SuiteSpec::default());
    let results = [
        ("AC1 connection correctness", ac1()),
        ("AC2 closed-form oracle equivalence", ac2()),
        ("AC3 frame identities", ac3(&suite)),
        ("AC4 class A certification", ac4(&suite)),
        ("AC5 minimality", ac5(&suite)),
        ("AC6 eta-parallel families", ac6(&suite)),
        ("AC7 convergence orders", ac7()),
        ("AC8 determinism", ac8()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
