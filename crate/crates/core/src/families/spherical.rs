//! Surfaces `φ(u, v) = (u, φ₁α + φ₂α' + φ₃n)` built over a spherical curve
//! `α` with
//!
//! - `φ₂ = ∫_{u0}^u R sin τ + ψ₁(v)`, `φ₃ = ∫_{u0}^u R cos τ + ψ₂(v)`
//! - `τ(u, v) = τ₀(u) + K(v)`, `K' = κ`
//! - `ψ₁' = κψ₂ - φ₁`, `ψ₂' = -κψ₁`.

use alloc::format;
use libm::{asinh, cos, sin, sqrt};

use super::functions::{Jet1, Profile, ScalarFn};
use super::sphere_curve::{CurveState, SphereCurve, SphereFrame};
use super::{check_flat, IntegratorSettings};
use crate::ambient::AmbientSpec;
use crate::quadrature::CumulativeSimpson;
use crate::surface::{Immersion, Rect};
use crate::{GeometryError, Result};

/// Everything needed to build a [`SphericalFamily`].
#[derive(Clone, Debug)]
pub struct SphericalData {
    pub kappa: ScalarFn,
    pub phi1: ScalarFn,
    pub radius: Profile,
    pub tau0: Profile,
    pub psi: [f64; 2],
    pub frame: SphereFrame,
    /// Base point of the `u` quadratures.
    pub u0: f64,
    /// Where the curve frame and `ψ` are prescribed.
    pub v_start: f64,
}

#[derive(Clone, Debug)]
pub struct SphericalFamily {
    ambient: AmbientSpec,
    domain: Rect,
    data: SphericalData,
    curve: SphereCurve,
    sin_table: CumulativeSimpson,
    cos_table: CumulativeSimpson,
}

/// Values of the construction at one parameter point.
#[derive(Clone, Copy, Debug)]
pub struct SphericalPoint {
    pub curve: CurveState,
    pub radius: Jet1,
    pub tau0: Jet1,
    pub tau: f64,
    pub phi1: Jet1,
    pub phi2: f64,
    pub phi3: f64,
    pub kappa: f64,
}

impl SphericalPoint {
    /// `φ₁' - φ₂`, the length of `φ̃_v`.
    pub fn orthogonal_speed(&self) -> f64 {
        self.phi1.d1 - self.phi2
    }
}

impl SphericalFamily {
    /// Integrates the curve over the `v` range (padded slightly) and
    /// tabulates `∫ R sin τ₀` and `∫ R cos τ₀`, then checks on a 65×65
    /// lattice that `R ≠ 0`, `-1 + f²R² > 0` and `φ₁' - φ₂ > 0`.
    pub fn new(ambient: AmbientSpec, domain: Rect, data: SphericalData, settings: &IntegratorSettings) -> Result<Self> {
        check_flat(&ambient)?;
        let pad = 0.01 * (domain.v1 - domain.v0) + 0.01;
        let lo = domain.v0.min(data.v_start) - pad;
        let hi = domain.v1.max(data.v_start) + pad;
        let curve = SphereCurve::integrate(
            data.kappa.clone(),
            data.phi1.clone(),
            data.frame,
            data.psi,
            data.v_start,
            lo,
            hi,
            settings.rk4_step,
        )?;
        let a = domain.u0.min(data.u0);
        let b = domain.u1.max(data.u0);
        let n = libm::ceil(settings.simpson_panels as f64 * (b - a).max(1.0)) as usize;
        let (r, t) = (&data.radius, &data.tau0);
        let gs = |x: f64| r.jet(x).value * sin(t.jet(x).value);
        let gc = |x: f64| r.jet(x).value * cos(t.jet(x).value);
        let sin_table = CumulativeSimpson::new(gs, a, b, n.max(1));
        let cos_table = CumulativeSimpson::new(gc, a, b, n.max(1));
        let fam = Self {
            ambient,
            domain,
            data,
            curve,
            sin_table,
            cos_table,
        };
        fam.validate()?;
        Ok(fam)
    }

    fn validate(&self) -> Result<()> {
        let d = self.domain;
        let iv = self.ambient.warping.interval();
        for i in 0..=64 {
            let u = d.u0 + (d.u1 - d.u0) * i as f64 / 64.0;
            if !iv.contains(u) {
                return Err(GeometryError::ParameterDomain(format!(
                    "u = {u} lies outside the warping interval"
                )));
            }
            let r = self.data.radius.jet(u).value;
            let f = self.ambient.f(u);
            let s = -1.0 + f * f * r * r;
            if !(s > crate::FRAME_EPSILON) {
                return Err(GeometryError::ParameterDomain(format!(
                    "-1 + f^2 R^2 = {s} is not positive at u = {u}; the surface is not space-like"
                )));
            }
            for j in 0..=64 {
                let v = d.v0 + (d.v1 - d.v0) * j as f64 / 64.0;
                let w = self.point(u, v)?.orthogonal_speed();
                if !(w > crate::FRAME_EPSILON) {
                    return Err(GeometryError::ParameterDomain(format!(
                        "phi1' - phi2 = {w} at ({u}, {v}); orthogonality degeneracy, e2 is undefined"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn data(&self) -> &SphericalData {
        &self.data
    }

    pub fn curve(&self) -> &SphereCurve {
        &self.curve
    }

    fn integrals(&self, u: f64) -> (f64, f64) {
        let (r, t) = (&self.data.radius, &self.data.tau0);
        let gs = |x: f64| r.jet(x).value * sin(t.jet(x).value);
        let gc = |x: f64| r.jet(x).value * cos(t.jet(x).value);
        let u0 = self.data.u0;
        (
            self.sin_table.eval(u, gs) - self.sin_table.eval(u0, gs),
            self.cos_table.eval(u, gc) - self.cos_table.eval(u0, gc),
        )
    }

    pub fn point(&self, u: f64, v: f64) -> Result<SphericalPoint> {
        let curve = self.curve.state(v)?;
        let radius = self.data.radius.jet(u);
        let tau0 = self.data.tau0.jet(u);
        let (is, ic) = self.integrals(u);
        let (ck, sk) = (cos(curve.k), sin(curve.k));
        Ok(SphericalPoint {
            curve,
            radius,
            tau0,
            tau: tau0.value + curve.k,
            phi1: self.data.phi1.jet(v),
            phi2: ck * is + sk * ic + curve.psi1,
            phi3: ck * ic - sk * is + curve.psi2,
            kappa: self.data.kappa.value(v),
        })
    }

    /// Principal curvatures of the base surface `φ̃` in `E³`:
    /// `k₁ = τ_u / R`, `k₂ = cos τ / (φ₁' - φ₂)`.
    pub fn base_surface_principals(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        let p = self.point(u, v)?;
        let w = p.orthogonal_speed();
        if !(w.abs() > crate::FRAME_EPSILON) || p.radius.value == 0.0 {
            return Err(GeometryError::ParameterDomain(format!(
                "phi1' - phi2 = {w} or R vanishes at ({u}, {v})"
            )));
        }
        Ok((p.tau0.d1 / p.radius.value, cos(p.tau) / w))
    }

    /// `θ` with `sinh θ = -1/√(-1 + f²R²)`.
    pub fn closed_form_theta(&self, u: f64) -> f64 {
        let f = self.ambient.f(u);
        let r = self.data.radius.jet(u).value;
        -asinh(1.0 / sqrt(-1.0 + f * f * r * r))
    }
}

fn lift(x: [f64; 3]) -> [f64; 4] {
    [0.0, x[0], x[1], x[2]]
}

fn comb(a: f64, x: &[f64; 3], b: f64, y: &[f64; 3]) -> [f64; 3] {
    core::array::from_fn(|i| a * x[i] + b * y[i])
}

impl Immersion for SphericalFamily {
    fn ambient(&self) -> &AmbientSpec {
        &self.ambient
    }

    fn domain(&self) -> Rect {
        self.domain
    }

    fn position(&self, u: f64, v: f64) -> Result<[f64; 4]> {
        let p = self.point(u, v)?;
        let c = &p.curve;
        let x: [f64; 3] = core::array::from_fn(|i| {
            p.phi1.value * c.alpha[i] + p.phi2 * c.tangent[i] + p.phi3 * c.normal[i]
        });
        Ok([u, x[0], x[1], x[2]])
    }

    fn tangents(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 2]>> {
        let p = self.point(u, v)?;
        let c = &p.curve;
        let r = p.radius.value;
        let mut pu = lift(comb(r * sin(p.tau), &c.tangent, r * cos(p.tau), &c.normal));
        pu[0] = 1.0;
        let w = p.orthogonal_speed();
        let pv = lift(c.alpha.map(|a| w * a));
        Ok(Some([pu, pv]))
    }

    fn second_derivatives(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 3]>> {
        let p = self.point(u, v)?;
        let c = &p.curve;
        let (st, ct) = (sin(p.tau), cos(p.tau));
        let (r, dr, dt) = (p.radius.value, p.radius.d1, p.tau0.d1);
        let along = comb(st, &c.tangent, ct, &c.normal);
        let across = comb(ct, &c.tangent, -st, &c.normal);
        let uu = lift(comb(dr, &along, r * dt, &across));
        let uv = lift(c.alpha.map(|a| -r * st * a));
        let w = p.orthogonal_speed();
        let dw = p.phi1.d2 + p.phi1.value - p.kappa * p.phi3;
        let vv = lift(comb(dw, &c.alpha, w, &c.tangent));
        Ok(Some([uu, uv, vv]))
    }

    fn is_canonical(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::WarpingFunction;
    use crate::surface::{jet, numeric_jet, FdConfig};
    use core::f64::consts::FRAC_PI_2;

    fn generic() -> SphericalFamily {
        let w = WarpingFunction::cosh_plus(0.3, 1.0).unwrap();
        let data = SphericalData {
            kappa: ScalarFn::Constant(1.0),
            phi1: ScalarFn::Constant(0.5),
            radius: Profile::Analytic(ScalarFn::Sin { a: 1.0, w: 1.0, phase: 0.0, c: 2.0 }),
            tau0: Profile::Analytic(ScalarFn::Polynomial(alloc::vec![0.1, 0.4])),
            psi: [-6.0, 0.2],
            frame: SphereFrame::default(),
            u0: 0.0,
            v_start: 0.0,
        };
        let domain = Rect::new(0.0, 1.0, 0.0, 0.5).unwrap();
        SphericalFamily::new(AmbientSpec::flat(w), domain, data, &IntegratorSettings::default()).unwrap()
    }

    #[test]
    fn analytic_jet_matches_finite_differences() {
        let fam = generic();
        let fd = FdConfig::default();
        for &(u, v) in &[(0.3, 0.2), (0.7, 0.4), (0.5, 0.1)] {
            let a = jet(&fam, u, v, &fd).unwrap();
            let n = numeric_jet(&fam, u, v, &fd).unwrap();
            for (x, y) in [
                (a.phi_u, n.phi_u),
                (a.phi_v, n.phi_v),
                (a.phi_uu, n.phi_uu),
                (a.phi_uv, n.phi_uv),
                (a.phi_vv, n.phi_vv),
            ] {
                for k in 0..4 {
                    assert!((x[k] - y[k]).abs() < 1e-6, "({u}, {v}): {x:?} vs {y:?}");
                }
            }
        }
    }

    #[test]
    fn reduces_to_rotation_surface() {
        let data = SphericalData {
            kappa: ScalarFn::Constant(0.0),
            phi1: ScalarFn::Constant(0.0),
            radius: Profile::Analytic(ScalarFn::Cosh { a: 1.0, r: 1.0, s: 0.0, c: 0.0 }),
            tau0: Profile::Analytic(ScalarFn::Constant(-FRAC_PI_2)),
            psi: [-sinh(0.5), 0.0],
            frame: SphereFrame::default(),
            u0: 0.5,
            v_start: 0.0,
        };
        let w = WarpingFunction::constant(1.0).unwrap();
        let fam = SphericalFamily::new(
            AmbientSpec::flat(w),
            Rect::new(0.5, 1.5, 0.0, 1.0).unwrap(),
            data,
            &IntegratorSettings::default(),
        )
        .unwrap();
        for &(u, v) in &[(0.5, 0.0), (1.0, 0.5), (1.5, 1.0)] {
            let p = fam.position(u, v).unwrap();
            assert!((p[1] + sinh(u) * -sin(v)).abs() < 1e-9);
            assert!((p[2] + sinh(u) * cos(v)).abs() < 1e-9);
            assert!(p[3].abs() < 1e-12);
        }
    }

    fn sinh(x: f64) -> f64 {
        libm::sinh(x)
    }

    #[test]
    fn rejects_degenerate_speed() {
        let mut data = generic().data;
        data.psi = [1.5, 0.2];
        let w = WarpingFunction::cosh_plus(0.3, 1.0).unwrap();
        let err = SphericalFamily::new(
            AmbientSpec::flat(w),
            Rect::new(0.0, 1.0, 0.0, 0.5).unwrap(),
            data,
            &IntegratorSettings::default(),
        )
        .unwrap_err();
        assert!(format!("{err}").contains("orthogonality"));
    }
}
