//! The verification suite: named checks run over a list of family fixtures.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rwlab_core::analysis::{
    class_a_from_sweep, eigen_from_sweep, eta_parallel_from_sweep, frame_identities_from_sweep,
    minimality_from_sweep, Expectation, Grid, NormalChoice, PointRecord, ResidualReport, SweepPoint,
};
use rwlab_core::families::{EtaParallelSpec, Family, FamilySpec, IntegratorSettings, ScalarFn};
use rwlab_core::surface::{analyze_point, pointwise_forms};
use rwlab_core::{
    fd, AmbientPoint, AmbientSpec, AmbientVector, BaseCurvature, FrameRoute, GeometryOptions, Immersion,
    Interval, VectorFieldJet, WarpingFunction, WarpingKind,
};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 0x5eed_2024;
/// Random ambient points per warping kind and base curvature.
pub const CONNECTION_SAMPLES: usize = 1000;
/// Threshold a negative control must exceed.
pub const CONTROL_THRESHOLD: f64 = 1e-3;
const GRID_SIZE: usize = 32;
const GRID_INSET: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Connection,
    WarpRestriction,
    FrameIdentities,
    ClassA,
    Eigenvector,
    AdaptedFrame,
    CylinderTable,
    RotationTable,
    Classification,
    MinimalCylinder,
    MinimalSpherical,
    MinimalRotation,
    MinimalClassification,
    EtaClassA,
    EtaFamilies,
}

impl CheckName {
    pub const ALL: [CheckName; 15] = [
        CheckName::Connection,
        CheckName::WarpRestriction,
        CheckName::FrameIdentities,
        CheckName::ClassA,
        CheckName::Eigenvector,
        CheckName::AdaptedFrame,
        CheckName::CylinderTable,
        CheckName::RotationTable,
        CheckName::Classification,
        CheckName::MinimalCylinder,
        CheckName::MinimalSpherical,
        CheckName::MinimalRotation,
        CheckName::MinimalClassification,
        CheckName::EtaClassA,
        CheckName::EtaFamilies,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Connection => "connection",
            CheckName::WarpRestriction => "warp_restriction",
            CheckName::FrameIdentities => "frame_identities",
            CheckName::ClassA => "class_a",
            CheckName::Eigenvector => "eigenvector",
            CheckName::AdaptedFrame => "adapted_frame",
            CheckName::CylinderTable => "cylinder_table",
            CheckName::RotationTable => "rotation_table",
            CheckName::Classification => "classification",
            CheckName::MinimalCylinder => "minimal_cylinder",
            CheckName::MinimalSpherical => "minimal_spherical",
            CheckName::MinimalRotation => "minimal_rotation",
            CheckName::MinimalClassification => "minimal_classification",
            CheckName::EtaClassA => "eta_class_a",
            CheckName::EtaFamilies => "eta_families",
        }
    }

    /// The statement the check certifies.
    pub fn statement(self) -> &'static str {
        match self {
            CheckName::Connection => {
                "Christoffel symbols equal the product connection plus the warping correction \
                 (ln f)'(g(X̄,Ȳ)∂t + X₀Ȳ + Y₀X̄), are symmetric, and match the Koszul formula \
                 and metric compatibility"
            }
            CheckName::WarpRestriction => "along the surface e₁(f) = -f' sinh θ and e₂(f) = 0, so the tangent part of ∇̃f is -f' T",
            CheckName::FrameIdentities => {
                "ω₁₂, the normal connection and dθ expressed through h, θ and (ln f)'"
            }
            CheckName::ClassA => {
                "class A holds exactly when h³₁₂ = h⁴₁₂ = 0, e₂(θ) = 0 and ∇⊥_{e₂}e₄ = 0; \
                 a perturbed patch violates it"
            }
            CheckName::Eigenvector => "on class A surfaces T is an eigenvector of A_{e₃}, A_{e₄} and A_η",
            CheckName::AdaptedFrame => {
                "canonical adapted frame is orthonormal with ∂t = sinh θ e₁ + cosh θ e₃, sinh θ < 0, \
                 agrees with the projection frame, and h⁴₁₂ = f g₀(φ̃_uv, Ñ)/√(EG)"
            }
            CheckName::CylinderTable => "closed-form h and θ of the cylinder family",
            CheckName::RotationTable => "closed-form h and θ of the rotation family",
            CheckName::Classification => {
                "cylinder and spherical-curve families are canonical class A surfaces; \
                 spherical θ = -asinh(1/√(f²R² - 1))"
            }
            CheckName::MinimalCylinder => {
                "the quadrature cylinder is minimal and its profile solves \
                 f x₁'' = 2f²(1 + c₁²) f' x₁'³ - 3f' x₁'"
            }
            CheckName::MinimalSpherical => {
                "a spherical-curve surface is minimal only when κ = 0; \
                 h⁴₁₁ + h⁴₂₂ and ē₁(k₂) follow the base-surface curvatures"
            }
            CheckName::MinimalRotation => "solutions of the rotation profile ODE are minimal",
            CheckName::MinimalClassification => "the minimal members are class A and minimal",
            CheckName::EtaClassA => "η parallel implies class A",
            CheckName::EtaFamilies => "the two η-parallel families have ∇⊥η = 0 and constant θ",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            CheckName::Connection => 1e-8,
            CheckName::WarpRestriction => 1e-7,
            CheckName::AdaptedFrame => 1e-8,
            CheckName::Eigenvector
            | CheckName::CylinderTable
            | CheckName::RotationTable
            | CheckName::Classification
            | CheckName::EtaFamilies => 1e-6,
            _ => 1e-5,
        }
    }
}

impl std::fmt::Display for CheckName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CheckName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

/// A family patch the suite runs on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureSpec {
    pub name: String,
    pub ambient: AmbientSpec,
    pub family: FamilySpec,
    /// Default: 32 × 32 on the domain shrunk by 2% on each side.
    #[serde(default)]
    pub grid: Option<Grid>,
    /// Expected to fail the class-A predicate.
    #[serde(default)]
    pub negative_control: bool,
    /// Expected to be minimal (implied for the minimal-cylinder and
    /// minimal-rotation records).
    #[serde(default)]
    pub minimal: bool,
}

impl FixtureSpec {
    pub fn grid(&self) -> Grid {
        self.grid
            .unwrap_or_else(|| Grid::inset(&self.family.domain(), GRID_SIZE, GRID_INSET))
    }

    pub fn expects_minimal(&self) -> bool {
        self.minimal
            || matches!(
                self.family,
                FamilySpec::MinimalCylinder { .. } | FamilySpec::MinimalRevolution { .. }
            )
    }

    fn is_eta_parallel(&self) -> bool {
        matches!(self.family, FamilySpec::EtaParallel(_))
    }

    fn is_perturbed(&self) -> bool {
        matches!(self.family, FamilySpec::Perturbed { .. })
    }
}

/// The fixtures shipped with the suite.
pub fn default_fixtures() -> Vec<FixtureSpec> {
    serde_json::from_str(include_str!("../fixtures/default_suite.json")).expect("shipped fixtures parse")
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteSpec {
    pub fixtures: Vec<FixtureSpec>,
    pub checks: Vec<CheckName>,
    pub tolerances: BTreeMap<CheckName, f64>,
    /// Replaces every upper-bound tolerance without a per-check entry.
    pub tolerance: Option<f64>,
    pub seed: u64,
    pub samples: usize,
    pub geometry: GeometryOptions,
    pub integrator: IntegratorSettings,
}

impl Default for SuiteSpec {
    fn default() -> Self {
        Self {
            fixtures: default_fixtures(),
            checks: CheckName::ALL.to_vec(),
            tolerances: BTreeMap::new(),
            tolerance: None,
            seed: DEFAULT_SEED,
            samples: CONNECTION_SAMPLES,
            geometry: GeometryOptions::default(),
            integrator: IntegratorSettings::default(),
        }
    }
}

impl SuiteSpec {
    fn tol(&self, check: CheckName, default: f64) -> f64 {
        self.tolerances.get(&check).copied().or(self.tolerance).unwrap_or(default)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Blocked,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub fixture: String,
    pub report: ResidualReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockedFixture {
    pub fixture: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: CheckName,
    pub statement: String,
    pub status: Status,
    pub reports: Vec<FixtureReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocked: Vec<BlockedFixture>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckResult {
    /// Reports whose verdict is false.
    pub fn failures(&self) -> impl Iterator<Item = &FixtureReport> {
        self.reports.iter().filter(|r| !r.report.verdict)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub seed: u64,
    pub status: Status,
    pub checks: Vec<CheckResult>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn check(&self, name: CheckName) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// A built fixture with its analysed grid.
pub struct Prepared {
    pub spec: FixtureSpec,
    pub built: Result<Built, String>,
}

pub struct Built {
    pub family: Family,
    pub grid: Grid,
    pub sweep: Vec<SweepPoint>,
}

/// Analyses every grid point, in parallel, in grid order.
pub fn parallel_sweep<I: Immersion + Sync + ?Sized>(imm: &I, grid: &Grid, opts: &GeometryOptions) -> Vec<SweepPoint> {
    (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (u, v) = grid.point(k);
            SweepPoint {
                u,
                v,
                geometry: analyze_point(imm, u, v, opts),
            }
        })
        .collect()
}

pub fn prepare(spec: &FixtureSpec, opts: &GeometryOptions, settings: &IntegratorSettings) -> Prepared {
    let built = Family::build(spec.ambient, &spec.family, settings)
        .map_err(|e| e.to_string())
        .and_then(|family| {
            let grid = spec.grid();
            grid.validate().map_err(|e| e.to_string())?;
            let sweep = parallel_sweep(&family, &grid, opts);
            Ok(Built { family, grid, sweep })
        });
    Prepared {
        spec: spec.clone(),
        built,
    }
}

pub fn run_suite(spec: &SuiteSpec) -> SuiteReport {
    let start = Instant::now();
    let needs_fixtures = spec.checks.iter().any(|c| *c != CheckName::Connection);
    let prepared: Vec<Prepared> = if needs_fixtures {
        spec.fixtures
            .par_iter()
            .map(|f| prepare(f, &spec.geometry, &spec.integrator))
            .collect()
    } else {
        Vec::new()
    };
    let checks: Vec<CheckResult> = spec
        .checks
        .par_iter()
        .map(|&c| run_check(c, spec, &prepared))
        .collect();
    let status = overall(checks.iter().map(|c| c.status));
    SuiteReport {
        schema_version: SCHEMA_VERSION,
        seed: spec.seed,
        status,
        checks,
        elapsed: start.elapsed(),
    }
}

fn overall(statuses: impl Iterator<Item = Status>) -> Status {
    let mut out = Status::Pass;
    for s in statuses {
        match s {
            Status::Fail => return Status::Fail,
            Status::Blocked => out = Status::Blocked,
            Status::Pass => {}
        }
    }
    out
}

/// Per-fixture outcome of one check: reports, a blocking error, or nothing
/// when the fixture does not exercise the check.
enum Outcome {
    Reports(Vec<ResidualReport>),
    Blocked(String),
    Skip,
}

pub fn run_check(name: CheckName, spec: &SuiteSpec, prepared: &[Prepared]) -> CheckResult {
    let start = Instant::now();
    let mut reports = Vec::new();
    let mut blocked = Vec::new();
    if name == CheckName::Connection {
        reports = connection_reports(spec.seed, spec.samples, spec.tol(name, name.default_tolerance()));
    } else {
        let outcomes: Vec<Outcome> = prepared
            .par_iter()
            .map(|p| {
                if !exercises(name, &p.spec) {
                    return Outcome::Skip;
                }
                match &p.built {
                    Err(e) => Outcome::Blocked(e.clone()),
                    Ok(b) => fixture_check(name, spec, &p.spec, b),
                }
            })
            .collect();
        for (p, o) in prepared.iter().zip(outcomes) {
            match o {
                Outcome::Reports(rs) => reports.extend(rs.into_iter().map(|r| FixtureReport {
                    fixture: p.spec.name.clone(),
                    report: r.summarized(),
                })),
                Outcome::Blocked(error) => blocked.push(BlockedFixture {
                    fixture: p.spec.name.clone(),
                    error,
                }),
                Outcome::Skip => {}
            }
        }
    }
    let status = if reports.iter().any(|r| !r.report.verdict) {
        Status::Fail
    } else if !blocked.is_empty() || reports.is_empty() {
        if reports.is_empty() && blocked.is_empty() {
            blocked.push(BlockedFixture {
                fixture: String::new(),
                error: "no fixture exercises this check".into(),
            });
        }
        Status::Blocked
    } else {
        Status::Pass
    };
    CheckResult {
        name,
        statement: name.statement().to_string(),
        status,
        reports,
        blocked,
        elapsed: start.elapsed(),
    }
}

fn is_kind(spec: &FixtureSpec, kinds: &[&str]) -> bool {
    let name = match &spec.family {
        FamilySpec::Cylinder { .. } | FamilySpec::MinimalCylinder { .. } => "cylinder",
        FamilySpec::EtaParallel(EtaParallelSpec::Cylinder { .. }) => "cylinder",
        FamilySpec::Revolution { .. } | FamilySpec::MinimalRevolution { .. } => "revolution",
        FamilySpec::Spherical { .. } | FamilySpec::EtaParallel(EtaParallelSpec::Spherical { .. }) => "spherical",
        FamilySpec::Perturbed { .. } => "perturbed",
    };
    kinds.contains(&name)
}

/// Whether fixture `f` takes part in check `c`.
pub fn exercises(c: CheckName, f: &FixtureSpec) -> bool {
    let plain = !f.is_perturbed();
    match c {
        CheckName::Connection => false,
        CheckName::WarpRestriction | CheckName::FrameIdentities | CheckName::ClassA => true,
        CheckName::Eigenvector => plain || f.negative_control,
        CheckName::AdaptedFrame => true,
        CheckName::CylinderTable => is_kind(f, &["cylinder"]),
        CheckName::RotationTable => is_kind(f, &["revolution"]),
        CheckName::Classification => is_kind(f, &["cylinder", "spherical"]),
        CheckName::MinimalCylinder => matches!(f.family, FamilySpec::MinimalCylinder { .. }),
        CheckName::MinimalSpherical => is_kind(f, &["spherical"]),
        CheckName::MinimalRotation => matches!(f.family, FamilySpec::MinimalRevolution { .. }),
        CheckName::MinimalClassification => f.expects_minimal(),
        CheckName::EtaClassA => true,
        CheckName::EtaFamilies => f.is_eta_parallel(),
    }
}

fn expectation(f: &FixtureSpec) -> Expectation {
    if f.negative_control {
        Expectation::Above
    } else {
        Expectation::Below
    }
}

fn fixture_check(name: CheckName, spec: &SuiteSpec, f: &FixtureSpec, b: &Built) -> Outcome {
    let tol = |default: f64| spec.tol(name, default);
    let t0 = name.default_tolerance();
    let sw = &b.sweep;
    let below = Expectation::Below;
    let reports = match name {
        CheckName::Connection => unreachable!(),
        CheckName::WarpRestriction => vec![ResidualReport::from_sweep(
            "warp_restriction",
            &["e1_f", "e2_f"],
            sw,
            tol(t0),
            below,
            |g| Ok(vec![g.warp_residual, g.dwarp[1].abs()]),
        )],
        CheckName::FrameIdentities => vec![frame_identities_from_sweep(sw, tol(t0), below)],
        CheckName::ClassA => match expectation(f) {
            Expectation::Below => vec![class_a_from_sweep(sw, tol(t0), below)],
            Expectation::Above => vec![class_a_from_sweep(sw, CONTROL_THRESHOLD, Expectation::Above)],
        },
        CheckName::Eigenvector => {
            if f.negative_control {
                vec![eigen_from_sweep(sw, NormalChoice::E4, CONTROL_THRESHOLD, Expectation::Above)]
            } else {
                [NormalChoice::E3, NormalChoice::E4, NormalChoice::Eta]
                    .into_iter()
                    .map(|n| eigen_from_sweep(sw, n, tol(t0), below))
                    .collect()
            }
        }
        CheckName::AdaptedFrame => adapted_frame_reports(b, spec, tol(t0), tol(1e-6)),
        CheckName::CylinderTable | CheckName::RotationTable => vec![closed_form_report(b, tol(t0))],
        CheckName::Classification => classification_reports(b, tol(1e-5), tol(t0), tol(1e-7)),
        CheckName::MinimalCylinder => {
            let c1 = match f.family {
                FamilySpec::MinimalCylinder { c1, .. } => c1,
                _ => 0.0,
            };
            vec![minimality_from_sweep(sw, tol(t0), below), cylinder_ode_report(b, c1, tol(1e-6))]
        }
        CheckName::MinimalSpherical => {
            let mut out = Vec::new();
            if f.expects_minimal() {
                out.push(minimality_from_sweep(sw, tol(t0), below));
                match kappa_injection(f, spec) {
                    Ok(r) => out.push(r),
                    Err(e) => return Outcome::Blocked(e),
                }
            }
            out.extend(base_surface_reports(b, tol(t0)));
            out
        }
        CheckName::MinimalRotation => vec![minimality_from_sweep(sw, tol(t0), below)],
        CheckName::MinimalClassification => vec![
            class_a_from_sweep(sw, tol(t0), below),
            minimality_from_sweep(sw, tol(t0), below),
        ],
        CheckName::EtaClassA => {
            let eta = eta_parallel_from_sweep(sw, CheckName::EtaFamilies.default_tolerance(), below);
            if f.is_eta_parallel() {
                vec![eta, renamed(class_a_from_sweep(sw, tol(t0), below), "class_a_given_eta_parallel")]
            } else if eta.verdict {
                vec![renamed(class_a_from_sweep(sw, tol(t0), below), "class_a_given_eta_parallel")]
            } else {
                return Outcome::Skip;
            }
        }
        CheckName::EtaFamilies => vec![
            eta_parallel_from_sweep(sw, tol(t0), below),
            theta_constancy_report(sw, tol(1e-7)),
            class_a_from_sweep(sw, tol(1e-5), below),
        ],
    };
    Outcome::Reports(reports)
}

fn renamed(mut r: ResidualReport, name: &str) -> ResidualReport {
    r.name = name.to_string();
    r
}

fn record(u: f64, v: f64, r: Result<Vec<f64>, String>) -> PointRecord {
    match r {
        Ok(values) => PointRecord {
            u,
            v,
            values: Some(values),
            error: None,
        },
        Err(e) => PointRecord {
            u,
            v,
            values: None,
            error: Some(e),
        },
    }
}

fn sample_warpings() -> Vec<(&'static str, WarpingFunction)> {
    let iv = Interval::new(-1.5, 1.5).expect("valid interval");
    let w = |k| WarpingFunction::new(k, iv).expect("valid warping");
    vec![
        ("constant", w(WarpingKind::Constant { a: 1.5 })),
        ("exponential", w(WarpingKind::Exponential { a: 0.7 })),
        ("cosh_plus", w(WarpingKind::CoshPlus { a: 1.0, b: 0.5 })),
        ("power", w(WarpingKind::Power { a: 2.0, p: 1.5 })),
        ("linear", w(WarpingKind::Linear { a: 0.5, b: 2.0 })),
    ]
}

pub const CONNECTION_RESIDUALS: [&str; 4] = ["decomposition", "koszul", "metric_compatibility", "torsion"];

/// Residuals at one ambient point:
///
/// - `decomposition`: Christoffel derivative minus the product-plus-warping form
/// - `koszul`: Christoffel symbols minus the Koszul formula on a
///   finite-difference metric derivative
/// - `metric_compatibility`: `∂_λ g_{μν} - Γ^ρ_{λμ} g_{ρν} - Γ^ρ_{λν} g_{μρ}` with
///   the analytic metric derivative
/// - `torsion`: `Γ^λ_{μν} - Γ^λ_{νμ}`
pub fn connection_residuals(amb: &AmbientSpec, p: &AmbientPoint, rng: &mut impl Rng) -> Result<Vec<f64>, String> {
    let e = |x: rwlab_core::GeometryError| x.to_string();
    let mut rv = || AmbientVector::new(rng.random_range(-1.0..1.0), std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
    let field = VectorFieldJet {
        value: rv(),
        derivative: rv(),
    };
    let dir = rv();
    let a = amb.covariant_derivative(p, &field, &dir).map_err(e)?.to_array();
    let b = amb.covariant_derivative_decomposed(p, &field, &dir).map_err(e)?.to_array();
    let decomposition = (0..4).map(|l| (a[l] - b[l]).abs()).fold(0.0, f64::max);

    let gamma = amb.christoffel(p).map_err(e)?.gamma;
    let g = amb.metric_tensor(p).map_err(e)?;
    let dg = amb.metric_derivatives(p).map_err(e)?;
    let x = p.to_array();
    let h = 1e-3;
    let mut dg_fd = [[[0.0; 4]; 4]; 4];
    for (mu, slot) in dg_fd.iter_mut().enumerate() {
        let d = fd::derivative::<16, _>(
            |s| {
                let mut y = x;
                y[mu] += s;
                let m = amb.metric_tensor(&AmbientPoint::from_array(y))?;
                Ok(std::array::from_fn(|k| m[k / 4][k % 4]))
            },
            0.0,
            h,
        )
        .map_err(e)?;
        for k in 0..16 {
            slot[k / 4][k % 4] = d[k];
        }
    }
    // diagonal metric: Γ^λ_{μν} = (∂_μ g_{νλ} + ∂_ν g_{μλ} - ∂_λ g_{μν}) / (2 g_{λλ})
    let mut koszul = 0.0f64;
    let mut compat = 0.0f64;
    let mut torsion = 0.0f64;
    for l in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                let k = (dg_fd[m][n][l] + dg_fd[n][m][l] - dg_fd[l][m][n]) / (2.0 * g[l][l]);
                koszul = koszul.max((gamma[l][m][n] - k).abs());
                torsion = torsion.max((gamma[l][m][n] - gamma[l][n][m]).abs());
                let mut rhs = 0.0;
                for r in 0..4 {
                    rhs += gamma[r][l][m] * g[r][n] + gamma[r][l][n] * g[m][r];
                }
                compat = compat.max((dg[l][m][n] - rhs).abs());
            }
        }
    }
    Ok(vec![decomposition, koszul, compat, torsion])
}

/// One report per warping kind and base curvature, each over `samples`
/// random points with `t ∈ [-1, 1]` and `q ∈ [-0.5, 0.5]³`.
pub fn connection_reports(seed: u64, samples: usize, tol: f64) -> Vec<FixtureReport> {
    let mut cases = Vec::new();
    for (name, w) in sample_warpings() {
        for c in [BaseCurvature::Hyperbolic, BaseCurvature::Flat, BaseCurvature::Spherical] {
            cases.push((format!("{name}/c={}", i8::from(c)), AmbientSpec::new(w, c)));
        }
    }
    cases
        .into_par_iter()
        .enumerate()
        .map(|(i, (label, amb))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let records = (0..samples)
                .map(|_| {
                    let t = rng.random_range(-1.0..1.0);
                    let q: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.5..0.5));
                    let p = AmbientPoint::new(t, q);
                    record(t, q[0], connection_residuals(&amb, &p, &mut rng))
                })
                .collect();
            let r = ResidualReport::from_records("connection", &CONNECTION_RESIDUALS, records, tol, Expectation::Below);
            FixtureReport {
                fixture: label,
                report: r.summarized(),
            }
        })
        .collect()
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn spatial(x: &[f64; 4]) -> [f64; 3] {
    [x[1], x[2], x[3]]
}

fn adapted_frame_reports(b: &Built, spec: &SuiteSpec, tol_frame: f64, tol_route: f64) -> Vec<ResidualReport> {
    let amb = *b.family.ambient();
    let frame = ResidualReport::from_sweep(
        "frame",
        &["gram", "dt_decomposition", "sinh_theta_sign"],
        &b.sweep,
        tol_frame,
        Expectation::Below,
        |g| {
            let p = AmbientPoint::from_array(g.forms.jet.position);
            let e = &g.forms.frame.e;
            let mut gram = 0.0f64;
            for a in 0..4 {
                for c in 0..4 {
                    let want = match (a == c, a) {
                        (false, _) => 0.0,
                        (true, 2) => -1.0,
                        (true, _) => 1.0,
                    };
                    let x = amb
                        .metric(&p, &AmbientVector::from_array(e[a]), &AmbientVector::from_array(e[c]))
                        .map_err(|x| x.to_string())?;
                    gram = gram.max((x - want).abs());
                }
            }
            let th = g.theta();
            let dt = (0..4)
                .map(|l| {
                    let want = if l == 0 { 1.0 } else { 0.0 };
                    (want - th.sinh() * e[0][l] - th.cosh() * e[2][l]).abs()
                })
                .fold(0.0, f64::max);
            let sign = if th.sinh() < 0.0 { 0.0 } else { 1.0 };
            Ok(vec![gram, dt, sign])
        },
    );
    if !b.family.is_canonical() {
        return vec![frame];
    }
    let proj_opts = GeometryOptions {
        route: FrameRoute::Projection,
        ..spec.geometry
    };
    let projected: Vec<_> = b
        .sweep
        .par_iter()
        .map(|p| pointwise_forms(&b.family, p.u, p.v, &proj_opts))
        .collect();
    let records = b
        .sweep
        .iter()
        .zip(projected)
        .map(|(p, proj)| {
            let r = match (&p.geometry, proj) {
                (Ok(g), Ok(q)) => {
                    let diff = |x: &[[f64; 2]; 2], y: &[[f64; 2]; 2]| {
                        (0..4).map(|k| (x[k / 2][k % 2] - y[k / 2][k % 2]).abs()).fold(0.0, f64::max)
                    };
                    let jet = &g.forms.jet;
                    let (pu, pv, puv) = (spatial(&jet.phi_u), spatial(&jet.phi_v), spatial(&jet.phi_uv));
                    let n = cross(&pu, &pv);
                    let nn = dot(&n, &n).sqrt();
                    let m = &g.forms.metric;
                    let h412 = g.f * dot(&puv, &n) / nn / (m.g11 * m.g22).sqrt();
                    Ok(vec![
                        (g.theta() - q.frame.theta).abs(),
                        diff(&g.data.h3, &q.h3),
                        diff(&g.data.h4, &q.h4),
                        (g.data.h4[0][1] - h412).abs(),
                    ])
                }
                (Err(e), _) => Err(e.to_string()),
                (_, Err(e)) => Err(e.to_string()),
            };
            record(p.u, p.v, r)
        })
        .collect();
    let routes = ResidualReport::from_records(
        "canonical_vs_projection",
        &["theta", "h3", "h4", "h4_12_formula"],
        records,
        tol_route,
        Expectation::Below,
    );
    vec![frame, routes]
}

const TABLE_RESIDUALS: [&str; 7] = ["theta", "h3_11", "h3_12", "h3_22", "h4_11", "h4_12", "h4_22"];

fn closed_form_report(b: &Built, tol: f64) -> ResidualReport {
    ResidualReport::from_sweep("closed_form", &TABLE_RESIDUALS, &b.sweep, tol, Expectation::Below, |g| {
        let c = b
            .family
            .closed_form(g.u())
            .ok_or_else(|| "family has no closed form".to_string())?
            .map_err(|e| e.to_string())?;
        let d = &g.data;
        Ok(vec![
            (c.theta - g.theta()).abs(),
            (c.h3[0][0] - d.h3[0][0]).abs(),
            (c.h3[0][1] - d.h3[0][1]).abs(),
            (c.h3[1][1] - d.h3[1][1]).abs(),
            (c.h4[0][0] - d.h4[0][0]).abs(),
            (c.h4[0][1] - d.h4[0][1]).abs(),
            (c.h4[1][1] - d.h4[1][1]).abs(),
        ])
    })
}

fn classification_reports(b: &Built, tol_a: f64, tol_canon: f64, tol_theta: f64) -> Vec<ResidualReport> {
    let amb = *b.family.ambient();
    let mut out = vec![class_a_from_sweep(&b.sweep, tol_a, Expectation::Below)];
    let canonical = ResidualReport::from_sweep(
        "canonical_chart",
        &["base_orthogonality", "dv_E"],
        &b.sweep,
        tol_canon,
        Expectation::Below,
        |g| {
            let jet = &g.forms.jet;
            let q = spatial(&jet.position);
            let (pu, pv, puv) = (spatial(&jet.phi_u), spatial(&jet.phi_v), spatial(&jet.phi_uv));
            let s = amb.base_scale(&q);
            let lambda = s.sqrt();
            let c = amb.curvature.value();
            // ∂_v of λ²|φ̃_u|² with ∂_k λ = -c λ² q_k
            let ds = -2.0 * c * lambda * lambda * lambda * dot(&q, &pv);
            let dv_e = 2.0 * s * dot(&puv, &pu) + ds * dot(&pu, &pu);
            Ok(vec![amb.base_metric(&q, &pu, &pv).abs(), dv_e.abs()])
        },
    );
    if !b.family.is_canonical() {
        out.push(canonical.with_flag("patch is not canonical"));
        return out;
    }
    out.push(canonical);
    if let Family::Spherical(_) = &b.family {
        out.push(ResidualReport::from_sweep(
            "theta_closed_form",
            &["theta"],
            &b.sweep,
            tol_theta,
            Expectation::Below,
            |g| {
                let t = b.family.closed_form_theta(g.u()).ok_or("no closed-form theta")?;
                Ok(vec![(t - g.theta()).abs()])
            },
        ));
    }
    out
}

fn cylinder_ode_report(b: &Built, c1: f64, tol: f64) -> ResidualReport {
    let Family::Cylinder(cyl) = &b.family else {
        return ResidualReport::from_records("profile_ode", &["profile_ode"], Vec::new(), tol, Expectation::Below)
            .with_flag("not a cylinder");
    };
    let w = b.family.ambient().warping;
    let records = b
        .sweep
        .iter()
        .map(|p| {
            let (x1, _) = cyl.profiles(p.u);
            let (f, df) = (w.value(p.u), w.derivative(p.u));
            let y = x1.d1;
            let r = f * x1.d2 - 2.0 * f * f * (1.0 + c1 * c1) * df * y * y * y + 3.0 * df * y;
            record(p.u, p.v, Ok(vec![r.abs()]))
        })
        .collect();
    ResidualReport::from_records("profile_ode", &["profile_ode"], records, tol, Expectation::Below)
}

/// The same spherical record with `κ ≡ 1`; expected to fail minimality.
fn kappa_injection(f: &FixtureSpec, spec: &SuiteSpec) -> Result<ResidualReport, String> {
    let mut fam = f.family.clone();
    match &mut fam {
        FamilySpec::Spherical { kappa, .. } => *kappa = ScalarFn::Constant(1.0),
        _ => return Err("kappa injection needs a spherical record".into()),
    }
    let family = Family::build(f.ambient, &fam, &spec.integrator).map_err(|e| e.to_string())?;
    let sweep = parallel_sweep(&family, &f.grid(), &spec.geometry);
    Ok(renamed(
        minimality_from_sweep(&sweep, CONTROL_THRESHOLD, Expectation::Above),
        "minimality_with_kappa_1",
    ))
}

/// `h⁴₁₁ + h⁴₂₂ = fR²k₁/(f²R² - 1) + k₂/f` and `ē₁(k₂) = sin τ (k₂ - k₁)/W`
/// for the principal curvatures `k₁, k₂` of the base surface.
fn base_surface_reports(b: &Built, tol: f64) -> Vec<ResidualReport> {
    let Family::Spherical(s) = &b.family else {
        return Vec::new();
    };
    let w = b.family.ambient().warping;
    let r = ResidualReport::from_sweep(
        "base_surface",
        &["h4_trace", "e1_k2"],
        &b.sweep,
        tol,
        Expectation::Below,
        |g| {
            let (u, v) = (g.u(), g.v());
            let e = |x: rwlab_core::GeometryError| x.to_string();
            let (k1, k2) = s.base_surface_principals(u, v).map_err(e)?;
            let p = s.point(u, v).map_err(e)?;
            let f = w.value(u);
            let rr = p.radius.value;
            let trace = g.data.h4[0][0] + g.data.h4[1][1];
            let want = f * rr * rr * k1 / (-1.0 + f * f * rr * rr) + k2 / f;
            let dk2 = fd::derivative::<1, _>(|x| Ok([s.base_surface_principals(x, v)?.1]), u, 1e-3).map_err(e)?[0];
            let rel = p.tau.sin() / p.orthogonal_speed() * (k2 - k1);
            Ok(vec![(trace - want).abs(), (dk2 / rr - rel).abs()])
        },
    );
    vec![r]
}

fn theta_constancy_report(sweep: &[SweepPoint], tol: f64) -> ResidualReport {
    let thetas: Vec<f64> = sweep
        .iter()
        .filter_map(|p| p.geometry.as_ref().ok().map(|g| g.theta()))
        .collect();
    let mean = if thetas.is_empty() {
        0.0
    } else {
        thetas.iter().sum::<f64>() / thetas.len() as f64
    };
    let records = sweep
        .iter()
        .map(|p| {
            record(
                p.u,
                p.v,
                p.geometry
                    .as_ref()
                    .map(|g| vec![(g.theta() - mean).abs()])
                    .map_err(|e| e.to_string()),
            )
        })
        .collect();
    ResidualReport::from_records("theta_constancy", &["theta_minus_mean"], records, tol, Expectation::Below)
}
