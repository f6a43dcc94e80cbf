//! The Robertson-Walker ambient `L⁴₁(f, c)`.
//!
//! Points are written in coordinates `(t, q¹, q², q³)`; the base `Q³_c` uses
//! Cartesian coordinates for `c = 0` and the conformal chart
//! `g_c = λ(q)² δ`, `λ = 2 / (1 + c|q|²)` for `c = ±1` (stereographic
//! projection of the sphere, Poincaré ball for hyperbolic space).
//!
//! Index 0 is always the `t` direction.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use libm::{cosh, exp, fabs, pow, sinh, sqrt};
use serde::{Deserialize, Serialize};

use crate::{GeometryError, Result};

/// Open interval `(lo, hi)`; either bound may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(GeometryError::InvalidWarping(format!(
                "interval ({lo}, {hi}) is empty"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub const fn unbounded() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }

    /// `n` evenly spaced interior points of the interval clipped to `[-20, 20]`.
    fn samples(&self, n: usize) -> impl Iterator<Item = f64> {
        let lo = self.lo.max(-20.0);
        let hi = self.hi.min(20.0);
        let step = (hi - lo) / (n + 1) as f64;
        (1..=n).map(move |i| lo + step * i as f64)
    }
}

/// Analytic families available for the warping function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WarpingKind {
    /// `f = a`
    Constant { a: f64 },
    /// `f = e^{a t}`
    Exponential { a: f64 },
    /// `f = cosh(a t) + b`
    CoshPlus { a: f64, b: f64 },
    /// `f = (t + a)^p`
    Power { a: f64, p: f64 },
    /// `f = a t + b`
    Linear { a: f64, b: f64 },
}

impl WarpingKind {
    fn name(&self) -> &'static str {
        match self {
            WarpingKind::Constant { .. } => "constant",
            WarpingKind::Exponential { .. } => "exponential",
            WarpingKind::CoshPlus { .. } => "cosh_plus",
            WarpingKind::Power { .. } => "power",
            WarpingKind::Linear { .. } => "linear",
        }
    }

    fn coefficients(&self) -> Vec<f64> {
        match *self {
            WarpingKind::Constant { a } | WarpingKind::Exponential { a } => alloc::vec![a],
            WarpingKind::CoshPlus { a, b } | WarpingKind::Linear { a, b } => alloc::vec![a, b],
            WarpingKind::Power { a, p } => alloc::vec![a, p],
        }
    }
}

/// The scale factor `f` with exact first and second derivatives.
///
/// Only strictly positive warping functions are accepted. The metric depends
/// on `f²` alone, so a negative `f` describes the same spacetime as `-f`, but
/// the adapted frame formulas are written for `f > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WarpingRecord", into = "WarpingRecord")]
pub struct WarpingFunction {
    kind: WarpingKind,
    interval: Interval,
}

impl WarpingFunction {
    pub fn new(kind: WarpingKind, interval: Interval) -> Result<Self> {
        let w = Self { kind, interval };
        w.check_sign()?;
        for t in interval.samples(101) {
            let v = w.value(t);
            if !v.is_finite() || v <= 0.0 {
                return Err(GeometryError::InvalidWarping(format!(
                    "f({t}) = {v} is not positive"
                )));
            }
        }
        Ok(w)
    }

    pub fn constant(a: f64) -> Result<Self> {
        Self::new(WarpingKind::Constant { a }, Interval::unbounded())
    }

    pub fn exponential(a: f64) -> Result<Self> {
        Self::new(WarpingKind::Exponential { a }, Interval::unbounded())
    }

    pub fn cosh_plus(a: f64, b: f64) -> Result<Self> {
        Self::new(WarpingKind::CoshPlus { a, b }, Interval::unbounded())
    }

    pub fn kind(&self) -> WarpingKind {
        self.kind
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    fn check_sign(&self) -> Result<()> {
        let Interval { lo, hi } = self.interval;
        let bad = |why: String| Err(GeometryError::InvalidWarping(why));
        match self.kind {
            WarpingKind::Constant { a } if a <= 0.0 => bad(format!("constant {a} is not positive")),
            WarpingKind::CoshPlus { a, b } if b <= -1.0 => {
                if a == 0.0 {
                    return bad(format!("cosh(0) + {b} is not positive"));
                }
                // cosh(a t) > -b  <=>  |t| > acosh(-b) / |a|
                let r = libm::acosh(-b) / fabs(a);
                if hi <= -r || lo >= r {
                    Ok(())
                } else {
                    bad(format!("cosh(at) + b vanishes inside ({lo}, {hi})"))
                }
            }
            WarpingKind::Power { a, .. } if !(lo + a >= 0.0) => {
                bad(format!("t + {a} must stay positive on ({lo}, {hi})"))
            }
            WarpingKind::Linear { a, b } => {
                let ok = if a > 0.0 {
                    lo >= -b / a
                } else if a < 0.0 {
                    hi <= -b / a
                } else {
                    b > 0.0
                };
                if ok {
                    Ok(())
                } else {
                    bad(format!("{a} t + {b} is not positive on ({lo}, {hi})"))
                }
            }
            _ => Ok(()),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self.kind {
            WarpingKind::Constant { a } => a,
            WarpingKind::Exponential { a } => exp(a * t),
            WarpingKind::CoshPlus { a, b } => cosh(a * t) + b,
            WarpingKind::Power { a, p } => pow(t + a, p),
            WarpingKind::Linear { a, b } => a * t + b,
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self.kind {
            WarpingKind::Constant { .. } => 0.0,
            WarpingKind::Exponential { a } => a * exp(a * t),
            WarpingKind::CoshPlus { a, .. } => a * sinh(a * t),
            WarpingKind::Power { a, p } => {
                if p == 0.0 {
                    0.0
                } else {
                    p * pow(t + a, p - 1.0)
                }
            }
            WarpingKind::Linear { a, .. } => a,
        }
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        match self.kind {
            WarpingKind::Constant { .. } | WarpingKind::Linear { .. } => 0.0,
            WarpingKind::Exponential { a } => a * a * exp(a * t),
            WarpingKind::CoshPlus { a, .. } => a * a * cosh(a * t),
            WarpingKind::Power { a, p } => {
                if p == 0.0 || p == 1.0 {
                    0.0
                } else {
                    p * (p - 1.0) * pow(t + a, p - 2.0)
                }
            }
        }
    }

    /// `(ln f)'(t)`.
    pub fn log_derivative(&self, t: f64) -> f64 {
        self.derivative(t) / self.value(t)
    }
}

/// Serialized form `{kind, coefficients, interval}`; `null` bounds are infinite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WarpingRecord {
    pub kind: String,
    pub coefficients: Vec<f64>,
    #[serde(default = "unbounded_record")]
    pub interval: [Option<f64>; 2],
}

fn unbounded_record() -> [Option<f64>; 2] {
    [None, None]
}

impl TryFrom<WarpingRecord> for WarpingFunction {
    type Error = GeometryError;

    fn try_from(rec: WarpingRecord) -> Result<Self> {
        let c = &rec.coefficients;
        let want = |n: usize| -> Result<()> {
            if c.len() == n {
                Ok(())
            } else {
                Err(GeometryError::InvalidWarping(format!(
                    "kind {} takes {n} coefficients, got {}",
                    rec.kind,
                    c.len()
                )))
            }
        };
        let kind = match rec.kind.as_str() {
            "constant" => {
                want(1)?;
                WarpingKind::Constant { a: c[0] }
            }
            "exponential" => {
                want(1)?;
                WarpingKind::Exponential { a: c[0] }
            }
            "cosh_plus" => {
                want(2)?;
                WarpingKind::CoshPlus { a: c[0], b: c[1] }
            }
            "power" => {
                want(2)?;
                WarpingKind::Power { a: c[0], p: c[1] }
            }
            "linear" => {
                want(2)?;
                WarpingKind::Linear { a: c[0], b: c[1] }
            }
            other => {
                return Err(GeometryError::InvalidWarping(format!(
                    "unknown warping kind `{other}`"
                )))
            }
        };
        let interval = Interval::new(
            rec.interval[0].unwrap_or(f64::NEG_INFINITY),
            rec.interval[1].unwrap_or(f64::INFINITY),
        )?;
        WarpingFunction::new(kind, interval)
    }
}

impl From<WarpingFunction> for WarpingRecord {
    fn from(w: WarpingFunction) -> Self {
        let b = |x: f64| if x.is_finite() { Some(x) } else { None };
        WarpingRecord {
            kind: String::from(w.kind.name()),
            coefficients: w.kind.coefficients(),
            interval: [b(w.interval.lo), b(w.interval.hi)],
        }
    }
}

/// Sectional curvature of the base space form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum BaseCurvature {
    Hyperbolic,
    Flat,
    Spherical,
}

impl BaseCurvature {
    pub fn value(self) -> f64 {
        match self {
            BaseCurvature::Hyperbolic => -1.0,
            BaseCurvature::Flat => 0.0,
            BaseCurvature::Spherical => 1.0,
        }
    }
}

impl TryFrom<i8> for BaseCurvature {
    type Error = GeometryError;

    fn try_from(c: i8) -> Result<Self> {
        match c {
            -1 => Ok(BaseCurvature::Hyperbolic),
            0 => Ok(BaseCurvature::Flat),
            1 => Ok(BaseCurvature::Spherical),
            _ => Err(GeometryError::InvalidInput(format!(
                "base curvature must be -1, 0 or 1, got {c}"
            ))),
        }
    }
}

impl From<BaseCurvature> for i8 {
    fn from(c: BaseCurvature) -> i8 {
        c.value() as i8
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmbientPoint {
    pub t: f64,
    pub q: [f64; 3],
}

impl AmbientPoint {
    pub fn new(t: f64, q: [f64; 3]) -> Self {
        Self { t, q }
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self {
            t: c[0],
            q: [c[1], c[2], c[3]],
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.q[0], self.q[1], self.q[2]]
    }
}

/// Tangent vector `X = X₀ ∂t + X̄` in chart components.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AmbientVector {
    /// `X₀`, the `∂t` coefficient.
    pub t: f64,
    /// `X̄`, the base part in chart components.
    pub base: [f64; 3],
}

impl AmbientVector {
    pub const DT: AmbientVector = AmbientVector {
        t: 1.0,
        base: [0.0; 3],
    };

    pub fn new(t: f64, base: [f64; 3]) -> Self {
        Self { t, base }
    }

    /// Coordinate field `∂_μ`.
    pub fn coordinate(mu: usize) -> Self {
        let mut c = [0.0; 4];
        c[mu] = 1.0;
        Self::from_array(c)
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self {
            t: c[0],
            base: [c[1], c[2], c[3]],
        }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.base[0], self.base[1], self.base[2]]
    }

    /// The `∂t`-free part `X̄` as a 4-vector.
    pub fn bar(self) -> Self {
        Self { t: 0.0, ..self }
    }

    pub fn is_zero(self) -> bool {
        self.to_array().iter().all(|&x| x == 0.0)
    }
}

impl core::ops::Add for AmbientVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (self.to_array(), o.to_array());
        Self::from_array(core::array::from_fn(|i| a[i] + b[i]))
    }
}

impl core::ops::Sub for AmbientVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let (a, b) = (self.to_array(), o.to_array());
        Self::from_array(core::array::from_fn(|i| a[i] - b[i]))
    }
}

impl core::ops::Mul<AmbientVector> for f64 {
    type Output = AmbientVector;
    fn mul(self, v: AmbientVector) -> AmbientVector {
        AmbientVector::from_array(v.to_array().map(|x| self * x))
    }
}

/// Christoffel symbols `Γ^λ_{μν}` stored as `gamma[λ][μ][ν]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChristoffelTable {
    pub gamma: [[[f64; 4]; 4]; 4],
}

impl ChristoffelTable {
    /// `Γ^λ_{μν} a^μ b^ν` for each `λ`.
    pub fn contract(&self, a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
        core::array::from_fn(|l| {
            let g = &self.gamma[l];
            let mut s = 0.0;
            for m in 0..4 {
                if a[m] == 0.0 {
                    continue;
                }
                for n in 0..4 {
                    s += g[m][n] * a[m] * b[n];
                }
            }
            s
        })
    }
}

/// A vector field known at one point through its value and the derivative
/// of its components along some direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VectorFieldJet {
    pub value: AmbientVector,
    /// `dir(X^λ)` for the direction the jet was taken along.
    pub derivative: AmbientVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Null,
}

impl fmt::Display for CausalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CausalCharacter::Spacelike => "spacelike",
            CausalCharacter::Timelike => "timelike",
            CausalCharacter::Null => "null",
        })
    }
}

/// `L⁴₁(f, c)` with its chart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbientSpec {
    pub warping: WarpingFunction,
    #[serde(rename = "c")]
    pub curvature: BaseCurvature,
}

impl AmbientSpec {
    pub fn new(warping: WarpingFunction, curvature: BaseCurvature) -> Self {
        Self { warping, curvature }
    }

    pub fn flat(warping: WarpingFunction) -> Self {
        Self::new(warping, BaseCurvature::Flat)
    }

    pub fn f(&self, t: f64) -> f64 {
        self.warping.value(t)
    }

    pub fn check_point(&self, p: &AmbientPoint) -> Result<()> {
        if !p.t.is_finite() || p.q.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::NonFinite("ambient point"));
        }
        let iv = self.warping.interval();
        if !iv.contains(p.t) {
            return Err(GeometryError::OutsideInterval {
                t: p.t,
                lo: iv.lo,
                hi: iv.hi,
            });
        }
        if 1.0 + self.curvature.value() * norm2(&p.q) <= 1e-12 {
            return Err(GeometryError::ChartBoundary);
        }
        Ok(())
    }

    /// Conformal factor `λ` of the base chart and its gradient.
    fn conformal(&self, q: &[f64; 3]) -> (f64, [f64; 3]) {
        let c = self.curvature.value();
        if c == 0.0 {
            return (1.0, [0.0; 3]);
        }
        let lambda = 2.0 / (1.0 + c * norm2(q));
        // ∂_k λ = -c q_k λ²
        (lambda, q.map(|x| -c * x * lambda * lambda))
    }

    /// Base metric factor: `g_c = base_scale(q) · δ`.
    pub fn base_scale(&self, q: &[f64; 3]) -> f64 {
        let (l, _) = self.conformal(q);
        l * l
    }

    /// `g_c(a, b)` at base point `q`.
    pub fn base_metric(&self, q: &[f64; 3], a: &[f64; 3], b: &[f64; 3]) -> f64 {
        self.base_scale(q) * dot3(a, b)
    }

    /// Base Christoffel symbols `Γ̄^k_{ij}` (indices 0..3 in the base).
    pub fn base_christoffel(&self, q: &[f64; 3]) -> [[[f64; 3]; 3]; 3] {
        let (lambda, grad) = self.conformal(q);
        let mut g = [[[0.0; 3]; 3]; 3];
        if self.curvature == BaseCurvature::Flat {
            return g;
        }
        // g_c = e^{2σ} δ with σ = ln λ:  Γ^k_ij = δ_ik σ_j + δ_jk σ_i - δ_ij σ_k
        let s = grad.map(|d| d / lambda);
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut v = 0.0;
                    if i == k {
                        v += s[j];
                    }
                    if j == k {
                        v += s[i];
                    }
                    if i == j {
                        v -= s[k];
                    }
                    g[k][i][j] = v;
                }
            }
        }
        g
    }

    /// Unchecked `g̃(X, Y)` on raw components.
    pub(crate) fn metric_raw(&self, t: f64, q: &[f64; 3], x: &[f64; 4], y: &[f64; 4]) -> f64 {
        let f = self.f(t);
        let s = self.base_scale(q);
        -x[0] * y[0] + f * f * s * (x[1] * y[1] + x[2] * y[2] + x[3] * y[3])
    }

    /// `g̃(X, Y) = -X₀Y₀ + f(t)² g_c(X̄, Ȳ)`.
    pub fn metric(&self, p: &AmbientPoint, x: &AmbientVector, y: &AmbientVector) -> Result<f64> {
        self.check_point(p)?;
        Ok(self.metric_raw(p.t, &p.q, &x.to_array(), &y.to_array()))
    }

    /// Component matrix `g̃_{μν}`.
    pub fn metric_tensor(&self, p: &AmbientPoint) -> Result<[[f64; 4]; 4]> {
        self.check_point(p)?;
        let w = self.f(p.t);
        let s = w * w * self.base_scale(&p.q);
        let mut g = [[0.0; 4]; 4];
        g[0][0] = -1.0;
        for i in 1..4 {
            g[i][i] = s;
        }
        Ok(g)
    }

    /// Analytic first derivatives `d[μ][ν][λ] = ∂_μ g̃_{νλ}`.
    pub fn metric_derivatives(&self, p: &AmbientPoint) -> Result<[[[f64; 4]; 4]; 4]> {
        self.check_point(p)?;
        let f = self.f(p.t);
        let df = self.warping.derivative(p.t);
        let (lambda, grad) = self.conformal(&p.q);
        let mut d = [[[0.0; 4]; 4]; 4];
        for i in 1..4 {
            d[0][i][i] = 2.0 * f * df * lambda * lambda;
            for k in 1..4 {
                d[k][i][i] = f * f * 2.0 * lambda * grad[k - 1];
            }
        }
        Ok(d)
    }

    /// Christoffel symbols of the warped metric.
    ///
    /// `Γᵗ_{ij} = f f' (g_c)_{ij}`, `Γⁱ_{tj} = Γⁱ_{jt} = (ln f)' δⁱⱼ`, the
    /// base block is the base connection, every other entry vanishes.
    pub fn christoffel(&self, p: &AmbientPoint) -> Result<ChristoffelTable> {
        self.check_point(p)?;
        Ok(self.christoffel_raw(p.t, &p.q))
    }

    pub(crate) fn christoffel_raw(&self, t: f64, q: &[f64; 3]) -> ChristoffelTable {
        let f = self.f(t);
        let df = self.warping.derivative(t);
        let s = self.base_scale(q);
        let base = self.base_christoffel(q);
        let mut gamma = [[[0.0; 4]; 4]; 4];
        for i in 1..4 {
            gamma[0][i][i] = f * df * s;
            gamma[i][0][i] = df / f;
            gamma[i][i][0] = df / f;
            for j in 1..4 {
                for k in 1..4 {
                    gamma[i][j][k] = base[i - 1][j - 1][k - 1];
                }
            }
        }
        ChristoffelTable { gamma }
    }

    /// `(∇̃_dir X)^λ = dir(X^λ) + Γ^λ_{μν} dir^μ X^ν`.
    pub fn covariant_derivative(
        &self,
        p: &AmbientPoint,
        field: &VectorFieldJet,
        dir: &AmbientVector,
    ) -> Result<AmbientVector> {
        let gamma = self.christoffel(p)?;
        let corr = gamma.contract(&dir.to_array(), &field.value.to_array());
        let d = field.derivative.to_array();
        Ok(AmbientVector::from_array(core::array::from_fn(|l| {
            d[l] + corr[l]
        })))
    }

    /// Same derivative assembled as the product connection `∇⁰` plus the
    /// warping correction
    /// `(ln f)' ( g̃(X̄, Ȳ) ∂t + X₀ Ȳ + Y₀ X̄ )` with `X = dir`, `Y = field`.
    pub fn covariant_derivative_decomposed(
        &self,
        p: &AmbientPoint,
        field: &VectorFieldJet,
        dir: &AmbientVector,
    ) -> Result<AmbientVector> {
        self.check_point(p)?;
        let x = *dir;
        let y = field.value;
        // product connection: flat in t, base connection on the Q³ block
        let base = self.base_christoffel(&p.q);
        let mut product = field.derivative;
        for k in 0..3 {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += base[k][i][j] * x.base[i] * y.base[j];
                }
            }
            product.base[k] += s;
        }
        let lf = self.warping.log_derivative(p.t);
        let xb = x.bar();
        let yb = y.bar();
        let g_bar = self.metric_raw(p.t, &p.q, &xb.to_array(), &yb.to_array());
        let correction = g_bar * AmbientVector::DT + x.t * yb + y.t * xb;
        Ok(product + lf * correction)
    }

    /// Causal character of `X` with a dead band around zero.
    ///
    /// The default band is `1e-10 · (1 + X₀² + f² g_c(X̄, X̄))`.
    pub fn causal_character(
        &self,
        p: &AmbientPoint,
        x: &AmbientVector,
        tol: Option<f64>,
    ) -> Result<CausalCharacter> {
        if x.is_zero() {
            return Err(GeometryError::ZeroVector);
        }
        let g = self.metric(p, x, x)?;
        let tol = tol.unwrap_or_else(|| {
            let f = self.f(p.t);
            let scale = x.t * x.t + f * f * self.base_metric(&p.q, &x.base, &x.base);
            1e-10 * (1.0 + scale)
        });
        Ok(if fabs(g) <= tol {
            CausalCharacter::Null
        } else if g > 0.0 {
            CausalCharacter::Spacelike
        } else {
            CausalCharacter::Timelike
        })
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm2(a: &[f64; 3]) -> f64 {
    dot3(a, a)
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn normalize3(a: &[f64; 3]) -> [f64; 3] {
    let n = sqrt(norm2(a));
    a.map(|x| x / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(w: WarpingFunction) -> AmbientSpec {
        AmbientSpec::flat(w)
    }

    const ORIGIN: AmbientPoint = AmbientPoint {
        t: 0.0,
        q: [0.0; 3],
    };

    #[test]
    fn metric_examples() {
        let dt = AmbientVector::DT;
        let dx = AmbientVector::coordinate(1);
        let m = flat(WarpingFunction::exponential(0.7).unwrap());
        assert_eq!(m.metric(&ORIGIN, &dt, &dt).unwrap(), -1.0);

        let two = flat(WarpingFunction::constant(2.0).unwrap());
        assert_eq!(two.metric(&ORIGIN, &dx, &dx).unwrap(), 4.0);

        let e = flat(WarpingFunction::exponential(1.0).unwrap());
        let p = AmbientPoint::new(1.0, [0.3, -0.2, 0.5]);
        let g = e.metric(&p, &(dt + dx), &(dt - dx)).unwrap();
        let expected = -1.0 - libm::exp(2.0);
        assert!((g - expected).abs() < 1e-12 * expected.abs());
    }

    #[test]
    fn christoffel_examples() {
        let one = flat(WarpingFunction::constant(1.0).unwrap());
        let g = one.christoffel(&ORIGIN).unwrap();
        assert!(g.gamma.iter().flatten().flatten().all(|&x| x == 0.0));

        let e = flat(WarpingFunction::exponential(1.0).unwrap());
        let g = e.christoffel(&ORIGIN).unwrap();
        assert_eq!(g.gamma[0][1][1], 1.0);
        assert_eq!(g.gamma[1][0][1], 1.0);
        assert_eq!(g.gamma[1][1][0], 1.0);
        assert_eq!(g.gamma[0][0][0], 0.0);
        assert_eq!(g.gamma[0][1][2], 0.0);

        let c = flat(WarpingFunction::cosh_plus(1.0, 0.0).unwrap());
        let g = c.christoffel(&ORIGIN).unwrap();
        assert_eq!(g.gamma[1][0][1], 0.0);
    }

    #[test]
    fn covariant_derivative_examples() {
        let e = flat(WarpingFunction::exponential(1.0).unwrap());
        let dx = AmbientVector::coordinate(1);
        let coord = |v| VectorFieldJet {
            value: v,
            derivative: AmbientVector::default(),
        };
        let r = e
            .covariant_derivative(&ORIGIN, &coord(AmbientVector::DT), &dx)
            .unwrap();
        assert_eq!(r, dx);
        let r = e.covariant_derivative(&ORIGIN, &coord(dx), &dx).unwrap();
        assert_eq!(r, AmbientVector::DT);

        // f ≡ 1 reduces to the component-wise directional derivative
        let one = flat(WarpingFunction::constant(1.0).unwrap());
        let jet = VectorFieldJet {
            value: AmbientVector::new(0.3, [1.0, -2.0, 0.5]),
            derivative: AmbientVector::new(0.1, [0.2, 0.3, -0.4]),
        };
        let dir = AmbientVector::new(1.0, [0.5, 0.5, 0.5]);
        let r = one.covariant_derivative(&ORIGIN, &jet, &dir).unwrap();
        assert_eq!(r, jet.derivative);
    }

    #[test]
    fn causal_examples() {
        let one = flat(WarpingFunction::constant(1.0).unwrap());
        let dt = AmbientVector::DT;
        let dx = AmbientVector::coordinate(1);
        assert_eq!(
            one.causal_character(&ORIGIN, &dt, None).unwrap(),
            CausalCharacter::Timelike
        );
        assert_eq!(
            one.causal_character(&ORIGIN, &dx, None).unwrap(),
            CausalCharacter::Spacelike
        );
        assert_eq!(
            one.causal_character(&ORIGIN, &(dt + dx), None).unwrap(),
            CausalCharacter::Null
        );
        assert_eq!(
            one.causal_character(&ORIGIN, &AmbientVector::default(), None),
            Err(GeometryError::ZeroVector)
        );
    }

    #[test]
    fn rejects_points_outside_domain() {
        let w = WarpingFunction::new(
            WarpingKind::Power { a: 0.0, p: 1.5 },
            Interval::new(0.0, 4.0).unwrap(),
        )
        .unwrap();
        let m = flat(w);
        let p = AmbientPoint::new(-1.0, [0.0; 3]);
        assert!(matches!(
            m.metric(&p, &AmbientVector::DT, &AmbientVector::DT),
            Err(GeometryError::OutsideInterval { .. })
        ));

        let hyp = AmbientSpec::new(WarpingFunction::constant(1.0).unwrap(), BaseCurvature::Hyperbolic);
        let p = AmbientPoint::new(0.0, [1.0, 0.0, 0.0]);
        assert_eq!(hyp.christoffel(&p), Err(GeometryError::ChartBoundary));
    }

    #[test]
    fn warping_sign_analysis() {
        assert!(WarpingFunction::constant(-1.0).is_err());
        assert!(WarpingFunction::cosh_plus(1.0, -2.0).is_err());
        assert!(WarpingFunction::new(
            WarpingKind::CoshPlus { a: 1.0, b: -2.0 },
            Interval::new(1.5, 3.0).unwrap()
        )
        .is_ok());
        assert!(WarpingFunction::new(
            WarpingKind::Linear { a: 1.0, b: 1.0 },
            Interval::unbounded()
        )
        .is_err());
        assert!(WarpingFunction::new(
            WarpingKind::Linear { a: 1.0, b: 1.0 },
            Interval::new(-1.0, 5.0).unwrap()
        )
        .is_ok());
        assert!(WarpingFunction::new(
            WarpingKind::Power { a: 1.0, p: 0.5 },
            Interval::new(-2.0, 5.0).unwrap()
        )
        .is_err());
    }

    #[test]
    fn warping_record_roundtrip() {
        let w = WarpingFunction::new(
            WarpingKind::CoshPlus { a: 0.5, b: 0.25 },
            Interval::new(-3.0, f64::INFINITY).unwrap(),
        )
        .unwrap();
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"cosh_plus","coefficients":[0.5,0.25],"interval":[-3.0,null]}"#
        );
        let back: WarpingFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
        let bad = r#"{"kind":"linear","coefficients":[1.0],"interval":[null,null]}"#;
        assert!(serde_json::from_str::<WarpingFunction>(bad).is_err());
    }
}
