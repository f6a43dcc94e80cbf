//! Cylinders `φ(u, v) = (u, x₁(u), x₂(u), v)` over a plane curve.

use alloc::format;
use libm::{asinh, sqrt};

use super::functions::{Jet1, Profile};
use super::{check_flat, ClosedForm};
use crate::ambient::AmbientSpec;
use crate::surface::{Immersion, Rect};
use crate::{GeometryError, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CylinderFamily {
    ambient: AmbientSpec,
    domain: Rect,
    x1: Profile,
    x2: Profile,
}

impl CylinderFamily {
    /// Validates `-1 + f²V² > 0` at 257 points across the `u` range.
    pub fn new(ambient: AmbientSpec, domain: Rect, x1: Profile, x2: Profile) -> Result<Self> {
        check_flat(&ambient)?;
        let fam = Self {
            ambient,
            domain,
            x1,
            x2,
        };
        for i in 0..=256 {
            let u = domain.u0 + (domain.u1 - domain.u0) * i as f64 / 256.0;
            if !ambient.warping.interval().contains(u) {
                return Err(GeometryError::ParameterDomain(format!(
                    "u = {u} lies outside the warping interval"
                )));
            }
            let (a, b) = fam.profiles(u);
            let f = ambient.f(u);
            let s = -1.0 + f * f * (a.d1 * a.d1 + b.d1 * b.d1);
            if !(s > crate::FRAME_EPSILON) {
                return Err(GeometryError::ParameterDomain(format!(
                    "-1 + f^2 (x1'^2 + x2'^2) = {s} is not positive at u = {u}; the cylinder is not space-like"
                )));
            }
        }
        Ok(fam)
    }

    pub fn profiles(&self, u: f64) -> (Jet1, Jet1) {
        (self.x1.jet(u), self.x2.jet(u))
    }

    /// Second fundamental form in closed form, with `e₄` oriented by
    /// `φ̃_u × φ̃_v`. With `W = f²V² - 1`:
    ///
    /// - `h³₁₁ = (f V' - V(f²V² - 2) f') / W^{3/2}`
    /// - `h³₂₂ = -V f' / √W`
    /// - `h⁴₁₁ = f (x₂'x₁'' - x₁'x₂'') / (V W)`
    /// - `h⁴₂₂ = h³₁₂ = h⁴₁₂ = 0`
    pub fn closed_form(&self, u: f64) -> ClosedForm {
        let (a, b) = self.profiles(u);
        let w = &self.ambient.warping;
        let (f, df) = (w.value(u), w.derivative(u));
        let v = sqrt(a.d1 * a.d1 + b.d1 * b.d1);
        let dv = (a.d1 * a.d2 + b.d1 * b.d2) / v;
        let ww = f * f * v * v - 1.0;
        let sw = sqrt(ww);
        let h3_11 = (f * dv - v * (f * f * v * v - 2.0) * df) / (ww * sw);
        let h3_22 = -v * df / sw;
        let h4_11 = f * (b.d1 * a.d2 - a.d1 * b.d2) / (v * ww);
        ClosedForm {
            h3: [[h3_11, 0.0], [0.0, h3_22]],
            h4: [[h4_11, 0.0], [0.0, 0.0]],
            theta: -asinh(1.0 / sw),
        }
    }
}

impl Immersion for CylinderFamily {
    fn ambient(&self) -> &AmbientSpec {
        &self.ambient
    }

    fn domain(&self) -> Rect {
        self.domain
    }

    fn position(&self, u: f64, v: f64) -> Result<[f64; 4]> {
        let (a, b) = self.profiles(u);
        Ok([u, a.value, b.value, v])
    }

    fn tangents(&self, u: f64, _v: f64) -> Result<Option<[[f64; 4]; 2]>> {
        let (a, b) = self.profiles(u);
        Ok(Some([[1.0, a.d1, b.d1, 0.0], [0.0, 0.0, 0.0, 1.0]]))
    }

    fn second_derivatives(&self, u: f64, _v: f64) -> Result<Option<[[f64; 4]; 3]>> {
        let (a, b) = self.profiles(u);
        Ok(Some([[0.0, a.d2, b.d2, 0.0], [0.0; 4], [0.0; 4]]))
    }

    fn is_canonical(&self) -> bool {
        true
    }
}
