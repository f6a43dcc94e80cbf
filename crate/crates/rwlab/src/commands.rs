//! The `generate`, `check`, `verify` and `list-families` subcommands.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rwlab_core::analysis::{
    class_a_from_sweep, eigen_from_sweep, eta_parallel_from_sweep, frame_identities_from_sweep,
    minimality_from_sweep, Expectation, Grid, NormalChoice, ResidualReport, DEFAULT_TOLERANCE,
};
use rwlab_core::families::FAMILY_NAMES;
use rwlab_core::Immersion;
use serde::Serialize;

use crate::config::{Predicate, RunConfig};
use crate::harness::{self, run_suite, CheckName, Status, SuiteReport, SuiteSpec, DEFAULT_SEED, SCHEMA_VERSION};
use crate::mesh::{sample, write_atomic, Mesh};
use crate::{exit, RunError};

pub const DEFAULT_MESH: &str = "mesh.csv";
pub const DEFAULT_CHECK_REPORT: &str = "check_report.json";
pub const DEFAULT_SUITE_REPORT: &str = "verify_report.json";

fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("report serializes");
    s.push('\n');
    s
}

/// `mesh.csv` → `mesh.meta.json`.
pub fn metadata_path(mesh: &Path) -> PathBuf {
    mesh.with_extension("meta.json")
}

#[derive(Serialize)]
pub struct MeshMetadata<'a> {
    pub schema_version: u32,
    pub family: &'static str,
    pub columns: &'a [String],
    pub rows: usize,
    pub finite_rows: usize,
    pub grid: Grid,
    pub config: &'a RunConfig,
}

/// Samples the configured family. Without a `grid` the full domain is
/// covered with 32 × 32 points.
pub fn build_mesh(cfg: &RunConfig, projection: Option<[usize; 3]>) -> Result<(Mesh, Grid), RunError> {
    let family = cfg.build_family()?;
    let grid = cfg.grid.unwrap_or_else(|| Grid::inset(&family.domain(), 32, 0.0));
    Ok((sample(&family, &grid, &cfg.geometry, cfg.forms, projection), grid))
}

pub fn generate(cfg: &RunConfig, projection: Option<[usize; 3]>) -> Result<u8, RunError> {
    let (mesh, grid) = build_mesh(cfg, projection)?;
    let path = cfg.output.mesh.clone().unwrap_or_else(|| DEFAULT_MESH.into());
    let meta_path = cfg.output.metadata.clone().unwrap_or_else(|| metadata_path(&path));
    let meta = MeshMetadata {
        schema_version: SCHEMA_VERSION,
        family: cfg.family_spec()?.name(),
        columns: &mesh.columns,
        rows: mesh.rows.len(),
        finite_rows: mesh.finite_rows(),
        grid,
        config: cfg,
    };
    write_atomic(&path, mesh.to_csv().as_bytes())?;
    write_atomic(&meta_path, to_json(&meta).as_bytes())?;
    println!(
        "wrote {} rows ({} finite) to {} and metadata to {}",
        meta.rows,
        meta.finite_rows,
        path.display(),
        meta_path.display()
    );
    Ok(exit::PASS)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub family: String,
    pub grid: Option<Grid>,
    pub tolerance: f64,
    pub verdict: bool,
    pub reports: Vec<ResidualReport>,
}

/// Runs the configured predicates. Without a `grid` the domain shrunk by 2%
/// is covered with 32 × 32 points.
pub fn run_check(cfg: &RunConfig) -> Result<CheckReport, RunError> {
    let tol = cfg.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    let family_name = cfg.family_spec()?.name().to_string();
    if cfg.predicates.is_empty() {
        return Ok(CheckReport {
            schema_version: SCHEMA_VERSION,
            family: family_name,
            grid: cfg.grid,
            tolerance: tol,
            verdict: true,
            reports: Vec::new(),
        });
    }
    let family = cfg.build_family()?;
    let grid = cfg.grid.unwrap_or_else(|| Grid::inset(&family.domain(), 32, 0.02));
    let sweep = harness::parallel_sweep(&family, &grid, &cfg.geometry);
    if let Some(e) = sweep.iter().find_map(|p| p.geometry.as_ref().err()) {
        if sweep.iter().all(|p| p.geometry.is_err()) {
            return Err(e.clone().into());
        }
    }
    let below = Expectation::Below;
    let reports: Vec<ResidualReport> = cfg
        .predicates
        .iter()
        .map(|p| match p {
            Predicate::ClassA => class_a_from_sweep(&sweep, tol, below),
            Predicate::Minimality => minimality_from_sweep(&sweep, tol, below),
            Predicate::EtaParallel => eta_parallel_from_sweep(&sweep, tol, below),
            Predicate::EigenE3 => eigen_from_sweep(&sweep, NormalChoice::E3, tol, below),
            Predicate::EigenE4 => eigen_from_sweep(&sweep, NormalChoice::E4, tol, below),
            Predicate::EigenEta => eigen_from_sweep(&sweep, NormalChoice::Eta, tol, below),
            Predicate::FrameIdentities => frame_identities_from_sweep(&sweep, tol, below),
        })
        .map(|r| r.summarized())
        .collect();
    Ok(CheckReport {
        schema_version: SCHEMA_VERSION,
        family: family_name,
        grid: Some(grid),
        tolerance: tol,
        verdict: reports.iter().all(|r| r.verdict),
        reports,
    })
}

pub fn check(cfg: &RunConfig) -> Result<u8, RunError> {
    let report = run_check(cfg)?;
    let path = cfg.output.report.clone().unwrap_or_else(|| DEFAULT_CHECK_REPORT.into());
    write_atomic(&path, to_json(&report).as_bytes())?;
    for r in &report.reports {
        let worst = r.summaries.iter().max_by(|a, b| a.max.total_cmp(&b.max));
        let at = worst
            .and_then(|s| s.argmax.map(|[u, v]| format!(" {} at (u, v) = ({u:.4}, {v:.4})", s.name)))
            .unwrap_or_default();
        println!(
            "{:<18} {}  max {:.3e}{at}  evaluation failures {}",
            r.name,
            if r.verdict { "PASS" } else { "FAIL" },
            r.max(),
            r.failures
        );
    }
    println!("report written to {}", path.display());
    Ok(if report.verdict { exit::PASS } else { exit::VERDICT_FAILURE })
}

pub fn suite_spec(cfg: &RunConfig) -> SuiteSpec {
    let mut fixtures = cfg.fixtures.clone().unwrap_or_else(harness::default_fixtures);
    fixtures.extend(cfg.extra_fixtures.iter().cloned());
    SuiteSpec {
        fixtures,
        checks: cfg.checks.clone().unwrap_or_else(|| CheckName::ALL.to_vec()),
        tolerances: cfg.tolerances.clone(),
        tolerance: cfg.tolerance,
        seed: cfg.seed.unwrap_or(DEFAULT_SEED),
        samples: harness::CONNECTION_SAMPLES,
        geometry: cfg.geometry,
        integrator: cfg.integrator,
    }
}

pub fn suite_json(report: &SuiteReport) -> String {
    to_json(report)
}

/// Human-readable summary of a suite run.
pub fn suite_summary(report: &SuiteReport) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let worst = c
            .reports
            .iter()
            .filter(|r| r.report.expectation == Expectation::Below)
            .map(|r| r.report.max())
            .fold(0.0, f64::max);
        let _ = writeln!(
            s,
            "{:<24} {:<8} reports {:>3}  max residual {:.2e}  {:>8.1} ms",
            c.name.as_str(),
            format!("{:?}", c.status).to_uppercase(),
            c.reports.len(),
            worst,
            c.elapsed.as_secs_f64() * 1e3
        );
        for f in c.failures() {
            let _ = writeln!(
                s,
                "    failed: {} / {} (max {:.3e}, tolerance {:.1e}, {:?})",
                f.fixture,
                f.report.name,
                f.report.max(),
                f.report.tolerance,
                f.report.expectation
            );
        }
        for b in &c.blocked {
            let _ = writeln!(s, "    blocked: {} ({})", b.fixture, b.error);
        }
    }
    let _ = writeln!(
        s,
        "overall: {}  ({:.2} s)",
        format!("{:?}", report.status).to_uppercase(),
        report.elapsed.as_secs_f64()
    );
    s
}

pub fn verify(cfg: &RunConfig) -> Result<u8, RunError> {
    let report = run_suite(&suite_spec(cfg));
    let path = cfg.output.report.clone().unwrap_or_else(|| DEFAULT_SUITE_REPORT.into());
    write_atomic(&path, suite_json(&report).as_bytes())?;
    print!("{}", suite_summary(&report));
    println!("report written to {}", path.display());
    Ok(match report.status {
        Status::Pass => exit::PASS,
        Status::Fail => exit::VERDICT_FAILURE,
        Status::Blocked => exit::CONFIG_OR_DOMAIN,
    })
}

pub fn list_families() -> String {
    let about = |name: &str| match name {
        "cylinder" => "(u, x1(u), x2(u), v); fields domain, x1, x2 (function records)",
        "revolution" => "(u, zeta1 cos v, zeta1 sin v, zeta2); fields domain, zeta1, zeta2",
        "spherical" => {
            "(u, R(u) curve on S² rotated by tau0(u) + K(v)); fields domain, kappa, phi1, radius, tau0, psi, frame?, u0?, v0?"
        }
        "minimal_cylinder" => "minimal cylinder by quadrature; fields domain, c1, c2, c3 (< 0), u0",
        "minimal_revolution" => "minimal rotation surface from the profile ODE; fields domain, initial [zeta1, zeta2, zeta1', zeta2']",
        "eta_parallel" => "parallel eta; variant cylinder (c1, c2, c3, u0) or spherical (c, u0, tau0, kappa, phi1, psi)",
        "perturbed" => "negative control: base family plus amplitude sin(u + v); fields base, amplitude, component?",
        _ => "",
    };
    let mut s = String::new();
    for n in FAMILY_NAMES {
        let _ = writeln!(s, "{n:<20} {}", about(n));
    }
    s.push_str("\nfunction kinds: constant, polynomial, sin, exp, cosh, sinh, inverse_warp_integral, minimal_cylinder_integral, warp_power\n");
    s.push_str("warping kinds: constant, exponential, cosh_plus, power, linear\n");
    s.push_str("checks:");
    for c in CheckName::ALL {
        let _ = write!(s, " {c}");
    }
    s.push('\n');
    s
}
