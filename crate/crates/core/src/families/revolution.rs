//! Rotation surfaces `φ(u, v) = (u, ζ₁(u) cos v, ζ₁(u) sin v, ζ₂(u))`.

use alloc::format;
use libm::{asinh, cos, sin, sqrt};

use super::functions::{Jet1, Profile};
use super::minimal::MinimalRevolutionOde;
use super::{check_flat, ClosedForm};
use crate::ambient::AmbientSpec;
use crate::ode::{OdeSystem, Trajectory};
use crate::surface::{Immersion, Rect};
use crate::{GeometryError, Result};

/// Where the profile curve `(ζ₁, ζ₂)` comes from.
#[derive(Clone, Debug)]
pub enum RevolutionSource {
    Profiles { zeta1: Profile, zeta2: Profile },
    /// Numerical solution with state `(ζ₁, ζ₂, ζ₁', ζ₂')`.
    Ode(Trajectory<MinimalRevolutionOde, 4>),
}

#[derive(Clone, Debug)]
pub struct RevolutionFamily {
    ambient: AmbientSpec,
    domain: Rect,
    source: RevolutionSource,
}

impl RevolutionFamily {
    /// Validates `ζ₁ > 0` and `-1 + f²V² > 0` at 257 points across `u`.
    pub fn new(ambient: AmbientSpec, domain: Rect, source: RevolutionSource) -> Result<Self> {
        check_flat(&ambient)?;
        let fam = Self {
            ambient,
            domain,
            source,
        };
        for i in 0..=256 {
            let u = domain.u0 + (domain.u1 - domain.u0) * i as f64 / 256.0;
            if !ambient.warping.interval().contains(u) {
                return Err(GeometryError::ParameterDomain(format!(
                    "u = {u} lies outside the warping interval"
                )));
            }
            let (a, b) = fam.profiles(u)?;
            if !(a.value > 0.0) {
                return Err(GeometryError::ParameterDomain(format!(
                    "zeta1 = {} must be positive, fails at u = {u}",
                    a.value
                )));
            }
            let f = ambient.f(u);
            let s = -1.0 + f * f * (a.d1 * a.d1 + b.d1 * b.d1);
            if !(s > crate::FRAME_EPSILON) {
                return Err(GeometryError::ParameterDomain(format!(
                    "-1 + f^2 (zeta1'^2 + zeta2'^2) = {s} is not positive at u = {u}; the surface is not space-like"
                )));
            }
        }
        Ok(fam)
    }

    pub fn source(&self) -> &RevolutionSource {
        &self.source
    }

    pub fn profiles(&self, u: f64) -> Result<(Jet1, Jet1)> {
        match &self.source {
            RevolutionSource::Profiles { zeta1, zeta2 } => Ok((zeta1.jet(u), zeta2.jet(u))),
            RevolutionSource::Ode(tr) => {
                let y = tr.eval(u).ok_or_else(|| {
                    GeometryError::ParameterDomain(format!(
                        "u = {u} lies beyond the integrated range [{}, {}]",
                        tr.start(),
                        tr.end()
                    ))
                })?;
                let d = tr.system().rhs(u, &y);
                Ok((
                    Jet1 {
                        value: y[0],
                        d1: y[2],
                        d2: d[2],
                    },
                    Jet1 {
                        value: y[1],
                        d1: y[3],
                        d2: d[3],
                    },
                ))
            }
        }
    }

    /// Second fundamental form in closed form, `e₄` oriented by
    /// `φ̃_u × φ̃_v`. With `W = f²V² - 1`:
    ///
    /// - `h³₁₁ = (V(2 - f²V²) f' + f V') / W^{3/2}`
    /// - `h³₂₂ = -V f' / √W - ζ₁' / (f ζ₁ V √W)`
    /// - `h⁴₁₁ = f (ζ₁'ζ₂'' - ζ₂'ζ₁'') / (V W)`
    /// - `h⁴₂₂ = ζ₂' / (f ζ₁ V)`
    pub fn closed_form(&self, u: f64) -> Result<ClosedForm> {
        let (a, b) = self.profiles(u)?;
        let w = &self.ambient.warping;
        let (f, df) = (w.value(u), w.derivative(u));
        let v = sqrt(a.d1 * a.d1 + b.d1 * b.d1);
        let dv = (a.d1 * a.d2 + b.d1 * b.d2) / v;
        let ww = f * f * v * v - 1.0;
        let sw = sqrt(ww);
        let h3_11 = (v * (2.0 - f * f * v * v) * df + f * dv) / (ww * sw);
        let h3_22 = -v * df / sw - a.d1 / (f * a.value * v * sw);
        let h4_11 = f * (a.d1 * b.d2 - b.d1 * a.d2) / (v * ww);
        let h4_22 = b.d1 / (f * a.value * v);
        Ok(ClosedForm {
            h3: [[h3_11, 0.0], [0.0, h3_22]],
            h4: [[h4_11, 0.0], [0.0, h4_22]],
            theta: -asinh(1.0 / sw),
        })
    }
}

impl Immersion for RevolutionFamily {
    fn ambient(&self) -> &AmbientSpec {
        &self.ambient
    }

    fn domain(&self) -> Rect {
        self.domain
    }

    fn position(&self, u: f64, v: f64) -> Result<[f64; 4]> {
        let (a, b) = self.profiles(u)?;
        Ok([u, a.value * cos(v), a.value * sin(v), b.value])
    }

    fn tangents(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 2]>> {
        let (a, b) = self.profiles(u)?;
        let (c, s) = (cos(v), sin(v));
        Ok(Some([
            [1.0, a.d1 * c, a.d1 * s, b.d1],
            [0.0, -a.value * s, a.value * c, 0.0],
        ]))
    }

    fn second_derivatives(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 3]>> {
        let (a, b) = self.profiles(u)?;
        let (c, s) = (cos(v), sin(v));
        Ok(Some([
            [0.0, a.d2 * c, a.d2 * s, b.d2],
            [0.0, -a.d1 * s, a.d1 * c, 0.0],
            [0.0, -a.value * c, -a.value * s, 0.0],
        ]))
    }

    fn is_canonical(&self) -> bool {
        true
    }
}
