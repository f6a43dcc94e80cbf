//! Catalog of scalar functions referenced by name and coefficients.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use libm::{cos, cosh, exp, pow, sin, sinh, sqrt};
use serde::{Deserialize, Serialize};

use crate::ambient::WarpingFunction;
use crate::quadrature::CumulativeSimpson;
use crate::{GeometryError, Result};

/// Value with first and second derivative.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet1 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// `{kind, coefficients}` as it appears in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionRecord {
    pub kind: String,
    #[serde(default)]
    pub coefficients: Vec<f64>,
}

impl FunctionRecord {
    pub fn new(kind: &str, coefficients: &[f64]) -> Self {
        Self {
            kind: String::from(kind),
            coefficients: coefficients.to_vec(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new("constant", &[c])
    }
}

/// Closed-form scalar functions of one variable.
///
/// | kind         | coefficients      | value                    |
/// |--------------|-------------------|--------------------------|
/// | `constant`   | `[c]`             | `c`                      |
/// | `polynomial` | `[c0, c1, ...]`   | `Σ c_k x^k`              |
/// | `sin`        | `[A, ω, φ, c]`    | `A sin(ωx + φ) + c`      |
/// | `exp`        | `[A, r, c]`       | `A e^{rx} + c`           |
/// | `cosh`       | `[A, r, s, c]`    | `A cosh(rx + s) + c`     |
/// | `sinh`       | `[A, r, s, c]`    | `A sinh(rx + s) + c`     |
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionRecord", into = "FunctionRecord")]
pub enum ScalarFn {
    Constant(f64),
    Polynomial(Vec<f64>),
    Sin { a: f64, w: f64, phase: f64, c: f64 },
    Exp { a: f64, r: f64, c: f64 },
    Cosh { a: f64, r: f64, s: f64, c: f64 },
    Sinh { a: f64, r: f64, s: f64, c: f64 },
}

pub const SCALAR_KINDS: [&str; 6] = ["constant", "polynomial", "sin", "exp", "cosh", "sinh"];

fn arity(kind: &str, c: &[f64], n: usize) -> Result<()> {
    if c.len() != n {
        return Err(GeometryError::InvalidInput(format!(
            "function kind `{kind}` takes {n} coefficients, got {}",
            c.len()
        )));
    }
    Ok(())
}

impl TryFrom<FunctionRecord> for ScalarFn {
    type Error = GeometryError;

    fn try_from(r: FunctionRecord) -> Result<Self> {
        let c = &r.coefficients;
        if c.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::InvalidInput(format!(
                "function `{}` has non-finite coefficients",
                r.kind
            )));
        }
        let k = r.kind.as_str();
        Ok(match k {
            "constant" => {
                arity(k, c, 1)?;
                ScalarFn::Constant(c[0])
            }
            "polynomial" => {
                if c.is_empty() {
                    return Err(GeometryError::InvalidInput(String::from(
                        "polynomial needs at least one coefficient",
                    )));
                }
                ScalarFn::Polynomial(c.clone())
            }
            "sin" => {
                arity(k, c, 4)?;
                ScalarFn::Sin {
                    a: c[0],
                    w: c[1],
                    phase: c[2],
                    c: c[3],
                }
            }
            "exp" => {
                arity(k, c, 3)?;
                ScalarFn::Exp {
                    a: c[0],
                    r: c[1],
                    c: c[2],
                }
            }
            "cosh" | "sinh" => {
                arity(k, c, 4)?;
                let (a, r, s, c) = (c[0], c[1], c[2], c[3]);
                if k == "cosh" {
                    ScalarFn::Cosh { a, r, s, c }
                } else {
                    ScalarFn::Sinh { a, r, s, c }
                }
            }
            other => {
                return Err(GeometryError::InvalidInput(format!(
                    "unknown function kind `{other}`"
                )))
            }
        })
    }
}

impl From<ScalarFn> for FunctionRecord {
    fn from(f: ScalarFn) -> Self {
        match f {
            ScalarFn::Constant(c) => FunctionRecord::new("constant", &[c]),
            ScalarFn::Polynomial(c) => FunctionRecord {
                kind: String::from("polynomial"),
                coefficients: c,
            },
            ScalarFn::Sin { a, w, phase, c } => FunctionRecord::new("sin", &[a, w, phase, c]),
            ScalarFn::Exp { a, r, c } => FunctionRecord::new("exp", &[a, r, c]),
            ScalarFn::Cosh { a, r, s, c } => FunctionRecord::new("cosh", &[a, r, s, c]),
            ScalarFn::Sinh { a, r, s, c } => FunctionRecord::new("sinh", &[a, r, s, c]),
        }
    }
}

impl ScalarFn {
    pub fn jet(&self, x: f64) -> Jet1 {
        match *self {
            ScalarFn::Constant(c) => Jet1 {
                value: c,
                d1: 0.0,
                d2: 0.0,
            },
            ScalarFn::Polynomial(ref c) => {
                let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
                for &ck in c.iter().rev() {
                    d2 = d2 * x + 2.0 * d1;
                    d1 = d1 * x + v;
                    v = v * x + ck;
                }
                Jet1 { value: v, d1, d2 }
            }
            ScalarFn::Sin { a, w, phase, c } => {
                let arg = w * x + phase;
                Jet1 {
                    value: a * sin(arg) + c,
                    d1: a * w * cos(arg),
                    d2: -a * w * w * sin(arg),
                }
            }
            ScalarFn::Exp { a, r, c } => {
                let e = exp(r * x);
                Jet1 {
                    value: a * e + c,
                    d1: a * r * e,
                    d2: a * r * r * e,
                }
            }
            ScalarFn::Cosh { a, r, s, c } => {
                let arg = r * x + s;
                Jet1 {
                    value: a * cosh(arg) + c,
                    d1: a * r * sinh(arg),
                    d2: a * r * r * cosh(arg),
                }
            }
            ScalarFn::Sinh { a, r, s, c } => {
                let arg = r * x + s;
                Jet1 {
                    value: a * sinh(arg) + c,
                    d1: a * r * cosh(arg),
                    d2: a * r * r * sinh(arg),
                }
            }
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.jet(x).value
    }
}

/// Integrands `g(ξ)` of the quadrature-defined profiles, with exact `g'`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Integrand {
    /// `1 / f`
    InverseWarp,
    /// `1 / (f √(c₃ f⁴ + c₁² + 1))`
    MinimalCylinder { c1: f64, c3: f64 },
}

impl Integrand {
    pub fn radicand(&self, f: f64) -> f64 {
        match *self {
            Integrand::InverseWarp => 1.0,
            Integrand::MinimalCylinder { c1, c3 } => c3 * f * f * f * f + c1 * c1 + 1.0,
        }
    }

    fn eval(&self, w: &WarpingFunction, x: f64) -> (f64, f64) {
        let f = w.value(x);
        let df = w.derivative(x);
        match *self {
            Integrand::InverseWarp => (1.0 / f, -df / (f * f)),
            Integrand::MinimalCylinder { c3, .. } => {
                let d = self.radicand(f);
                let sd = sqrt(d);
                let f4 = f * f * f * f;
                (1.0 / (f * sd), -df * (d + 2.0 * c3 * f4) / (f * f * d * sd))
            }
        }
    }
}

/// A coordinate function of `u`: closed form, a quadrature of a
/// warping-dependent integrand, or a power of the warping function.
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    Analytic(ScalarFn),
    /// `scale · ∫_{u0}^u g + offset`.
    Integral {
        integrand: Integrand,
        warping: WarpingFunction,
        scale: f64,
        u0: f64,
        offset: f64,
        table: CumulativeSimpson,
        base: f64,
    },
    /// `scale · f(u)^power`.
    WarpPower {
        warping: WarpingFunction,
        scale: f64,
        power: f64,
    },
}

pub const PROFILE_KINDS: [&str; 3] = ["inverse_warp_integral", "minimal_cylinder_integral", "warp_power"];

impl Profile {
    /// Resolves a record against the warping function. Quadrature tables
    /// cover `u0` and `[lo, hi]`.
    pub fn resolve(
        record: &FunctionRecord,
        warping: &WarpingFunction,
        lo: f64,
        hi: f64,
        panels: usize,
    ) -> Result<Self> {
        let c = &record.coefficients;
        let k = record.kind.as_str();
        match k {
            "inverse_warp_integral" => {
                arity(k, c, 3)?;
                Self::integral(Integrand::InverseWarp, warping, c[0], c[1], c[2], lo, hi, panels)
            }
            "minimal_cylinder_integral" => {
                arity(k, c, 5)?;
                let g = Integrand::MinimalCylinder { c1: c[0], c3: c[1] };
                Self::integral(g, warping, c[3], c[2], c[4], lo, hi, panels)
            }
            "warp_power" => {
                arity(k, c, 2)?;
                Ok(Profile::WarpPower {
                    warping: *warping,
                    scale: c[0],
                    power: c[1],
                })
            }
            _ => Ok(Profile::Analytic(ScalarFn::try_from(record.clone())?)),
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn integral(
        integrand: Integrand,
        warping: &WarpingFunction,
        scale: f64,
        u0: f64,
        offset: f64,
        lo: f64,
        hi: f64,
        panels: usize,
    ) -> Result<Self> {
        let a = lo.min(u0);
        let b = hi.max(u0);
        let iv = warping.interval();
        if !(iv.contains(a) && iv.contains(b)) {
            return Err(GeometryError::ParameterDomain(format!(
                "quadrature range [{a}, {b}] leaves the warping interval ({}, {})",
                iv.lo, iv.hi
            )));
        }
        for i in 0..=256 {
            let x = a + (b - a) * i as f64 / 256.0;
            let d = integrand.radicand(warping.value(x));
            if !(d > 0.0) {
                return Err(GeometryError::ParameterDomain(format!(
                    "c3 f^4 + c1^2 + 1 = {d} <= 0 at u = {x}; the quadrature needs a positive radicand"
                )));
            }
        }
        let g = |x: f64| integrand.eval(warping, x).0;
        let n = libm::ceil(panels as f64 * (b - a).max(1.0)) as usize;
        let table = CumulativeSimpson::new(g, a, b, n.max(1));
        let base = table.eval(u0, g);
        Ok(Profile::Integral {
            integrand,
            warping: *warping,
            scale,
            u0,
            offset,
            table,
            base,
        })
    }

    pub fn jet(&self, u: f64) -> Jet1 {
        match self {
            Profile::Analytic(f) => f.jet(u),
            Profile::Integral {
                integrand,
                warping,
                scale,
                offset,
                table,
                base,
                ..
            } => {
                let g = |x: f64| integrand.eval(warping, x).0;
                let (gv, dg) = integrand.eval(warping, u);
                Jet1 {
                    value: scale * (table.eval(u, g) - base) + offset,
                    d1: scale * gv,
                    d2: scale * dg,
                }
            }
            Profile::WarpPower {
                warping,
                scale,
                power,
            } => {
                let (f, df, ddf) = (
                    warping.value(u),
                    warping.derivative(u),
                    warping.second_derivative(u),
                );
                let p = *power;
                Jet1 {
                    value: scale * pow(f, p),
                    d1: scale * p * pow(f, p - 1.0) * df,
                    d2: scale * p * ((p - 1.0) * pow(f, p - 2.0) * df * df + pow(f, p - 1.0) * ddf),
                }
            }
        }
    }
}
