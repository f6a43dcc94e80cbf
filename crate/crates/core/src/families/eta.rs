//! Surfaces carrying a parallel normal field `η = sinh θ e₃ + cosh θ e₄`.

use alloc::format;

use super::cylinder::CylinderFamily;
use super::functions::{FunctionRecord, Integrand, Profile, ScalarFn};
use super::sphere_curve::SphereFrame;
use super::spherical::{SphericalData, SphericalFamily};
use super::IntegratorSettings;
use crate::ambient::AmbientSpec;
use crate::surface::Rect;
use crate::{GeometryError, Result};

/// Cylinder `(u, c₁∫dξ/f, c₂∫dξ/f + c₃, v)`, so that `fV = √(c₁² + c₂²)`.
pub fn eta_parallel_cylinder(
    ambient: AmbientSpec,
    domain: Rect,
    [c1, c2, c3]: [f64; 3],
    u0: f64,
    settings: &IntegratorSettings,
) -> Result<CylinderFamily> {
    let m = c1 * c1 + c2 * c2;
    if !(m > 1.0) {
        return Err(GeometryError::ParameterDomain(format!(
            "c1^2 + c2^2 = {m} must exceed 1; otherwise the cylinder is not space-like"
        )));
    }
    let w = &ambient.warping;
    let n = settings.simpson_panels;
    let g = Integrand::InverseWarp;
    let x1 = Profile::integral(g, w, c1, u0, 0.0, domain.u0, domain.u1, n)?;
    let x2 = Profile::integral(g, w, c2, u0, c3, domain.u0, domain.u1, n)?;
    CylinderFamily::new(ambient, domain, x1, x2)
}

/// Parameters of the spherical variant: `R = c/f` and `τ = τ₀ + K(v)` with
/// a constant `τ₀`.
#[derive(Clone, Debug)]
pub struct EtaSphericalData {
    pub c: f64,
    pub u0: f64,
    pub tau0: f64,
    pub kappa: ScalarFn,
    pub phi1: ScalarFn,
    pub psi: [f64; 2],
    pub frame: SphereFrame,
    pub v_start: f64,
}

pub fn eta_parallel_spherical(
    ambient: AmbientSpec,
    domain: Rect,
    d: EtaSphericalData,
    settings: &IntegratorSettings,
) -> Result<SphericalFamily> {
    if !(d.c * d.c > 1.0) {
        return Err(GeometryError::ParameterDomain(format!(
            "c^2 = {} must exceed 1; otherwise -1 + f^2 R^2 = c^2 - 1 leaves the surface not space-like",
            d.c * d.c
        )));
    }
    let w = &ambient.warping;
    let radius = Profile::resolve(&FunctionRecord::new("warp_power", &[d.c, -1.0]), w, domain.u0, domain.u1, 1)?;
    let data = SphericalData {
        kappa: d.kappa,
        phi1: d.phi1,
        radius,
        tau0: Profile::Analytic(ScalarFn::Constant(d.tau0)),
        psi: d.psi,
        frame: d.frame,
        u0: d.u0,
        v_start: d.v_start,
    };
    SphericalFamily::new(ambient, domain, data, settings)
}
