//! Grid sweeps and residual reports for the surface predicates.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use libm::{cosh, fabs, sinh, sqrt, tanh};
use serde::{Deserialize, Serialize};

use crate::surface::{analyze_point, GeometryOptions, Immersion, PointGeometry, Rect};
use crate::{GeometryError, Result};

/// Default verdict tolerance for the residual predicates.
pub const DEFAULT_TOLERANCE: f64 = 1e-5;

/// `n_u × n_v` tensor grid with inclusive endpoints, traversed with `u`
/// as the outer index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub u0: f64,
    pub u1: f64,
    pub n_u: usize,
    pub v0: f64,
    pub v1: f64,
    pub n_v: usize,
}

impl Grid {
    pub fn new(u0: f64, u1: f64, n_u: usize, v0: f64, v1: f64, n_v: usize) -> Result<Self> {
        let g = Self {
            u0,
            u1,
            n_u,
            v0,
            v1,
            n_v,
        };
        g.validate()?;
        Ok(g)
    }

    /// `n × n` grid on `rect` shrunk by `inset` of each side.
    pub fn inset(rect: &Rect, n: usize, inset: f64) -> Self {
        let r = rect.inset(inset);
        Self {
            u0: r.u0,
            u1: r.u1,
            n_u: n,
            v0: r.v0,
            v1: r.v1,
            n_v: n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.u0, self.u1, self.v0, self.v1].iter().all(|x| x.is_finite());
        if !finite || self.n_u < 1 || self.n_v < 1 || self.u0 > self.u1 || self.v0 > self.v1 {
            return Err(GeometryError::InvalidInput(format!(
                "grid [{}, {}] x [{}, {}] with {} x {} points is invalid",
                self.u0, self.u1, self.v0, self.v1, self.n_u, self.n_v
            )));
        }
        Ok(())
    }

    fn coord(a: f64, b: f64, n: usize, i: usize) -> f64 {
        if n <= 1 {
            a
        } else if i + 1 == n {
            b
        } else {
            a + (b - a) * i as f64 / (n - 1) as f64
        }
    }

    pub fn len(&self) -> usize {
        self.n_u * self.n_v
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `k`-th point in row-major order.
    pub fn point(&self, k: usize) -> (f64, f64) {
        let (i, j) = (k / self.n_v, k % self.n_v);
        (
            Self::coord(self.u0, self.u1, self.n_u, i),
            Self::coord(self.v0, self.v1, self.n_v, j),
        )
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len()).map(move |k| self.point(k))
    }

    /// Same box with twice as many intervals in each direction.
    pub fn refined(&self) -> Self {
        Self {
            n_u: 2 * self.n_u - 1,
            n_v: 2 * self.n_v - 1,
            ..*self
        }
    }
}

/// Result of analysing one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub u: f64,
    pub v: f64,
    pub geometry: Result<PointGeometry>,
}

/// Analyses every grid point in order.
pub fn sweep<I: Immersion + ?Sized>(imm: &I, grid: &Grid, opts: &GeometryOptions) -> Vec<SweepPoint> {
    grid.points()
        .map(|(u, v)| SweepPoint {
            u,
            v,
            geometry: analyze_point(imm, u, v, opts),
        })
        .collect()
}

/// Whether a report passes when its residuals are small or when they are
/// large (the latter for negative controls).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    #[default]
    Below,
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub u: f64,
    pub v: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub name: String,
    pub max: f64,
    pub mean: f64,
    /// `(u, v)` of the maximum, absent when no point succeeded.
    pub argmax: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub name: String,
    pub tolerance: f64,
    pub expectation: Expectation,
    pub verdict: bool,
    pub evaluated: usize,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    pub summaries: Vec<ResidualSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointRecord>,
}

/// Compensated (Neumaier) running sum.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if fabs(self.sum) >= fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl ResidualReport {
    /// Assembles summaries and the verdict from per-point records.
    ///
    /// With [`Expectation::Below`] the verdict needs every point evaluated
    /// and every maximum strictly below `tolerance`; with
    /// [`Expectation::Above`] some maximum must exceed it.
    pub fn from_records(
        name: &str,
        residuals: &[&str],
        points: Vec<PointRecord>,
        tolerance: f64,
        expectation: Expectation,
    ) -> Self {
        let mut summaries = Vec::with_capacity(residuals.len());
        for (k, r) in residuals.iter().enumerate() {
            let mut acc = Neumaier::default();
            let mut max = 0.0f64;
            let mut argmax = None;
            let mut n = 0usize;
            for p in &points {
                if let Some(vals) = &p.values {
                    let x = fabs(vals[k]);
                    acc.add(x);
                    n += 1;
                    if argmax.is_none() || x > max || x.is_nan() {
                        max = x;
                        argmax = Some([p.u, p.v]);
                    }
                }
            }
            let mean = if n == 0 { 0.0 } else { (acc.total() / n as f64).min(max) };
            summaries.push(ResidualSummary {
                name: r.to_string(),
                max,
                mean,
                argmax,
            });
        }
        let failures = points.iter().filter(|p| p.values.is_none()).count();
        let evaluated = points.len() - failures;
        let verdict = match expectation {
            Expectation::Below => {
                failures == 0 && evaluated > 0 && summaries.iter().all(|s| s.max < tolerance)
            }
            Expectation::Above => summaries.iter().any(|s| s.max > tolerance),
        };
        let verdict = verdict || (residuals.is_empty() && failures == 0);
        let mut flags = Vec::new();
        if failures > 0 {
            flags.push(format!("{failures} point(s) failed"));
        }
        Self {
            name: name.to_string(),
            tolerance,
            expectation,
            verdict,
            evaluated,
            failures,
            flags,
            summaries,
            points,
        }
    }

    /// Builds a report by applying `f` to every successful sweep point.
    /// `f` may return `Err` to mark an individual point as failed.
    pub fn from_sweep<F>(
        name: &str,
        residuals: &[&str],
        sweep: &[SweepPoint],
        tolerance: f64,
        expectation: Expectation,
        f: F,
    ) -> Self
    where
        F: Fn(&PointGeometry) -> core::result::Result<Vec<f64>, String>,
    {
        let records = sweep
            .iter()
            .map(|p| {
                let res = match &p.geometry {
                    Ok(g) => f(g),
                    Err(e) => Err(e.to_string()),
                };
                match res {
                    Ok(values) => PointRecord {
                        u: p.u,
                        v: p.v,
                        values: Some(values),
                        error: None,
                    },
                    Err(e) => PointRecord {
                        u: p.u,
                        v: p.v,
                        values: None,
                        error: Some(e),
                    },
                }
            })
            .collect();
        Self::from_records(name, residuals, records, tolerance, expectation)
    }

    pub fn summary(&self, residual: &str) -> Option<&ResidualSummary> {
        self.summaries.iter().find(|s| s.name == residual)
    }

    /// Largest maximum over all residuals.
    pub fn max(&self) -> f64 {
        self.summaries.iter().map(|s| s.max).fold(0.0, f64::max)
    }

    /// Copy without the per-point records.
    pub fn summarized(&self) -> Self {
        Self {
            points: Vec::new(),
            ..self.clone()
        }
    }

    pub fn with_flag(mut self, flag: &str) -> Self {
        self.flags.push(flag.to_string());
        self
    }
}

const THETA_ZERO: f64 = 1e-12;

fn theta_guard(g: &PointGeometry) -> core::result::Result<(), String> {
    if fabs(g.theta()) < THETA_ZERO {
        Err("excluded case: theta = 0 (T vanishes)".to_string())
    } else {
        Ok(())
    }
}

fn flag_excluded(report: ResidualReport) -> ResidualReport {
    let excluded = report
        .points
        .iter()
        .any(|p| p.error.as_deref().is_some_and(|e| e.starts_with("excluded case")));
    if excluded {
        report.with_flag("excluded case theta = 0 encountered")
    } else {
        report
    }
}

pub const CLASS_A_RESIDUALS: [&str; 4] = ["h3_12", "h4_12", "e2_theta", "normal43_e2"];

/// `|h³₁₂|, |h⁴₁₂|, |e₂(θ)|, |g̃(∇⊥_{e₂} e₄, e₃)|`.
pub fn class_a_values(g: &PointGeometry) -> Vec<f64> {
    alloc::vec![
        fabs(g.data.h3[0][1]),
        fabs(g.data.h4[0][1]),
        fabs(g.dtheta[1]),
        fabs(g.normal43()[1]),
    ]
}

pub fn class_a_from_sweep(sweep: &[SweepPoint], tol: f64, exp: Expectation) -> ResidualReport {
    ResidualReport::from_sweep("class_a", &CLASS_A_RESIDUALS, sweep, tol, exp, |g| {
        Ok(class_a_values(g))
    })
}

pub fn class_a_residuals<I: Immersion + ?Sized>(
    imm: &I,
    grid: &Grid,
    opts: &GeometryOptions,
    tol: f64,
) -> ResidualReport {
    class_a_from_sweep(&sweep(imm, grid, opts), tol, Expectation::Below)
}

pub const MINIMALITY_RESIDUALS: [&str; 3] = ["norm_H", "H3", "H4"];

/// `√(H₃² + H₄²), |H₃|, |H₄|`.
pub fn minimality_values(g: &PointGeometry) -> Vec<f64> {
    let (a, b) = (g.data.mean3, g.data.mean4);
    alloc::vec![sqrt(a * a + b * b), fabs(a), fabs(b)]
}

pub fn minimality_from_sweep(sweep: &[SweepPoint], tol: f64, exp: Expectation) -> ResidualReport {
    ResidualReport::from_sweep("minimality", &MINIMALITY_RESIDUALS, sweep, tol, exp, |g| {
        Ok(minimality_values(g))
    })
}

pub fn minimality_residual<I: Immersion + ?Sized>(
    imm: &I,
    grid: &Grid,
    opts: &GeometryOptions,
    tol: f64,
) -> ResidualReport {
    minimality_from_sweep(&sweep(imm, grid, opts), tol, Expectation::Below)
}

pub const ETA_PARALLEL_RESIDUALS: [&str; 6] = [
    "e1_theta",
    "e2_theta",
    "normal34_e1",
    "normal34_e2",
    "eta_e1",
    "eta_e2",
];

/// `|e_i(θ)|`, `|n₃₄(e_i)|` and the component norm of
/// `∇⊥_{e_i} η = sinh θ e_i(θ) e₃ + cosh θ n₃₄(e_i) e₄`.
pub fn eta_parallel_values(g: &PointGeometry) -> core::result::Result<Vec<f64>, String> {
    theta_guard(g)?;
    let (s, c) = (sinh(g.theta()), cosh(g.theta()));
    let eta = |i: usize| {
        let a = s * g.dtheta[i];
        let b = c * g.data.normal34[i];
        sqrt(a * a + b * b)
    };
    Ok(alloc::vec![
        fabs(g.dtheta[0]),
        fabs(g.dtheta[1]),
        fabs(g.data.normal34[0]),
        fabs(g.data.normal34[1]),
        eta(0),
        eta(1),
    ])
}

pub fn eta_parallel_from_sweep(sweep: &[SweepPoint], tol: f64, exp: Expectation) -> ResidualReport {
    flag_excluded(ResidualReport::from_sweep(
        "eta_parallel",
        &ETA_PARALLEL_RESIDUALS,
        sweep,
        tol,
        exp,
        eta_parallel_values,
    ))
}

pub fn eta_parallel_residuals<I: Immersion + ?Sized>(
    imm: &I,
    grid: &Grid,
    opts: &GeometryOptions,
    tol: f64,
) -> ResidualReport {
    eta_parallel_from_sweep(&sweep(imm, grid, opts), tol, Expectation::Below)
}

/// Normal direction for the eigenvector test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalChoice {
    E3,
    E4,
    Eta,
}

impl NormalChoice {
    pub fn name(self) -> &'static str {
        match self {
            NormalChoice::E3 => "e3",
            NormalChoice::E4 => "e4",
            NormalChoice::Eta => "eta",
        }
    }
}

/// `‖A_ξT − (g(A_ξT, T)/g(T, T)) T‖` with `T = sinh θ e₁`.
pub fn eigen_value(g: &PointGeometry, normal: NormalChoice) -> core::result::Result<f64, String> {
    theta_guard(g)?;
    let (h, scale) = match normal {
        NormalChoice::E3 => (g.data.h3, 1.0),
        NormalChoice::E4 => (g.data.h4, 1.0),
        NormalChoice::Eta => (g.data.h3, cosh(g.theta())),
    };
    let s = sinh(g.theta());
    let t = [s, 0.0];
    // g(A_ξ e_i, e_j) = h^ξ_ij in the orthonormal tangent frame
    let at = [
        scale * (h[0][0] * t[0] + h[0][1] * t[1]),
        scale * (h[1][0] * t[0] + h[1][1] * t[1]),
    ];
    let tt = t[0] * t[0] + t[1] * t[1];
    let lambda = (at[0] * t[0] + at[1] * t[1]) / tt;
    let r = [at[0] - lambda * t[0], at[1] - lambda * t[1]];
    Ok(sqrt(r[0] * r[0] + r[1] * r[1]))
}

pub fn eigen_from_sweep(
    sweep: &[SweepPoint],
    normal: NormalChoice,
    tol: f64,
    exp: Expectation,
) -> ResidualReport {
    let name = format!("eigen_{}", normal.name());
    let residual = format!("eigen_{}", normal.name());
    flag_excluded(ResidualReport::from_sweep(
        &name,
        &[residual.as_str()],
        sweep,
        tol,
        exp,
        |g| eigen_value(g, normal).map(|x| alloc::vec![x]),
    ))
}

pub fn eigen_residual<I: Immersion + ?Sized>(
    imm: &I,
    grid: &Grid,
    opts: &GeometryOptions,
    normal: NormalChoice,
    tol: f64,
) -> ResidualReport {
    eigen_from_sweep(&sweep(imm, grid, opts), normal, tol, Expectation::Below)
}

pub const FRAME_IDENTITY_RESIDUALS: [&str; 6] = [
    "omega12_e1",
    "omega12_e2",
    "normal34_e1",
    "normal34_e2",
    "e1_theta",
    "e2_theta",
];

/// Differences between the numerically differentiated frame quantities and
/// their expressions through `h`, `θ` and `(ln f)'`:
///
/// - `ω₁₂(e₁) = h³₁₂ coth θ`
/// - `ω₁₂(e₂) = (ln f)' csch θ + h³₂₂ coth θ`
/// - `n₃₄(e₁) = -h⁴₁₁ tanh θ`
/// - `n₃₄(e₂) = -h⁴₁₂ tanh θ`
/// - `e₁(θ) = (ln f)' cosh θ + h³₁₁`
/// - `e₂(θ) = h³₁₂`
pub fn frame_identity_values(g: &PointGeometry) -> core::result::Result<Vec<f64>, String> {
    theta_guard(g)?;
    let th = g.theta();
    let (s, c, t) = (sinh(th), cosh(th), tanh(th));
    let coth = c / s;
    let h3 = &g.data.h3;
    let h4 = &g.data.h4;
    let d = &g.data;
    Ok(alloc::vec![
        fabs(d.omega12[0] - h3[0][1] * coth),
        fabs(d.omega12[1] - (g.dlnf / s + h3[1][1] * coth)),
        fabs(d.normal34[0] + h4[0][0] * t),
        fabs(d.normal34[1] + h4[0][1] * t),
        fabs(g.dtheta[0] - g.dlnf * c - h3[0][0]),
        fabs(g.dtheta[1] - h3[0][1]),
    ])
}

pub fn frame_identities_from_sweep(sweep: &[SweepPoint], tol: f64, exp: Expectation) -> ResidualReport {
    flag_excluded(ResidualReport::from_sweep(
        "frame_identities",
        &FRAME_IDENTITY_RESIDUALS,
        sweep,
        tol,
        exp,
        frame_identity_values,
    ))
}

pub fn frame_identity_residuals<I: Immersion + ?Sized>(
    imm: &I,
    grid: &Grid,
    opts: &GeometryOptions,
    tol: f64,
) -> ResidualReport {
    frame_identities_from_sweep(&sweep(imm, grid, opts), tol, Expectation::Below)
}
