//! Space-like surface patches `φ(u, v) = (𝒯(u, v), φ̃(u, v))` and their
//! pointwise extrinsic geometry.

mod forms;
mod frame;

use alloc::boxed::Box;
use alloc::format;
use serde::{Deserialize, Serialize};

use crate::ambient::AmbientSpec;
use crate::{fd, GeometryError, Result};

pub use forms::{analyze_point, pointwise_forms, FundamentalData, PointForms, PointGeometry};
pub use frame::{adapted_frame, AdaptedFrame};

/// Parameter rectangle `[u0, u1] × [v0, v1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RectRecord", into = "RectRecord")]
pub struct Rect {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

#[derive(Serialize, Deserialize)]
struct RectRecord {
    u: [f64; 2],
    v: [f64; 2],
}

impl TryFrom<RectRecord> for Rect {
    type Error = GeometryError;
    fn try_from(r: RectRecord) -> Result<Self> {
        Rect::new(r.u[0], r.u[1], r.v[0], r.v[1])
    }
}

impl From<Rect> for RectRecord {
    fn from(r: Rect) -> Self {
        RectRecord {
            u: [r.u0, r.u1],
            v: [r.v0, r.v1],
        }
    }
}

impl Rect {
    pub fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Result<Self> {
        let ok = |a: f64, b: f64| a.is_finite() && b.is_finite() && a < b;
        if !ok(u0, u1) || !ok(v0, v1) {
            return Err(GeometryError::InvalidInput(format!(
                "domain [{u0}, {u1}] x [{v0}, {v1}] is empty or unbounded"
            )));
        }
        Ok(Self { u0, u1, v0, v1 })
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        let tol = 1e-12 * (1.0 + u.abs().max(v.abs()));
        u >= self.u0 - tol && u <= self.u1 + tol && v >= self.v0 - tol && v <= self.v1 + tol
    }

    /// Distance from `(u, v)` to the nearest edge (negative outside).
    pub fn margin(&self, u: f64, v: f64) -> f64 {
        (u - self.u0).min(self.u1 - u).min(v - self.v0).min(self.v1 - v)
    }

    /// Shrinks each side by `fraction` of the side length.
    pub fn inset(&self, fraction: f64) -> Self {
        let du = (self.u1 - self.u0) * fraction;
        let dv = (self.v1 - self.v0) * fraction;
        Self {
            u0: self.u0 + du,
            u1: self.u1 - du,
            v0: self.v0 + dv,
            v1: self.v1 - dv,
        }
    }
}

/// An immersed patch in a Robertson-Walker ambient.
///
/// Only [`Immersion::position`] is required; families that know their
/// partial derivatives in closed form override the jet hooks.
pub trait Immersion {
    fn ambient(&self) -> &AmbientSpec;

    fn domain(&self) -> Rect;

    /// `φ(u, v)` as `(t, q¹, q², q³)`.
    fn position(&self, u: f64, v: f64) -> Result<[f64; 4]>;

    /// `(φ_u, φ_v)` when known analytically.
    fn tangents(&self, _u: f64, _v: f64) -> Result<Option<[[f64; 4]; 2]>> {
        Ok(None)
    }

    /// `(φ_uu, φ_uv, φ_vv)` when known analytically.
    fn second_derivatives(&self, _u: f64, _v: f64) -> Result<Option<[[f64; 4]; 3]>> {
        Ok(None)
    }

    /// True when the parametrization has `𝒯 = u` with base coordinate curves
    /// orthogonal, so the closed-form frame applies.
    fn is_canonical(&self) -> bool {
        false
    }
}

impl<T: Immersion + ?Sized> Immersion for &T {
    fn ambient(&self) -> &AmbientSpec {
        (**self).ambient()
    }
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn position(&self, u: f64, v: f64) -> Result<[f64; 4]> {
        (**self).position(u, v)
    }
    fn tangents(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 2]>> {
        (**self).tangents(u, v)
    }
    fn second_derivatives(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 3]>> {
        (**self).second_derivatives(u, v)
    }
    fn is_canonical(&self) -> bool {
        (**self).is_canonical()
    }
}

impl<T: Immersion + ?Sized> Immersion for Box<T> {
    fn ambient(&self) -> &AmbientSpec {
        (**self).ambient()
    }
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn position(&self, u: f64, v: f64) -> Result<[f64; 4]> {
        (**self).position(u, v)
    }
    fn tangents(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 2]>> {
        (**self).tangents(u, v)
    }
    fn second_derivatives(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 3]>> {
        (**self).second_derivatives(u, v)
    }
    fn is_canonical(&self) -> bool {
        (**self).is_canonical()
    }
}

/// A patch given only by its coordinate map; every derivative is numeric.
#[derive(Clone, Debug)]
pub struct MapPatch<F> {
    pub ambient: AmbientSpec,
    pub domain: Rect,
    pub map: F,
    pub canonical: bool,
}

impl<F: Fn(f64, f64) -> [f64; 4]> MapPatch<F> {
    pub fn new(ambient: AmbientSpec, domain: Rect, map: F) -> Self {
        Self {
            ambient,
            domain,
            map,
            canonical: false,
        }
    }
}

impl<F: Fn(f64, f64) -> [f64; 4]> Immersion for MapPatch<F> {
    fn ambient(&self) -> &AmbientSpec {
        &self.ambient
    }
    fn domain(&self) -> Rect {
        self.domain
    }
    fn position(&self, u: f64, v: f64) -> Result<[f64; 4]> {
        Ok((self.map)(u, v))
    }
    fn is_canonical(&self) -> bool {
        self.canonical
    }
}

/// Finite-difference steps, scaled by `max(1, |u|, |v|)` at each point.
///
/// `first_step` differentiates positions, `second_step` is used for second
/// derivatives and for differentiating frame fields.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    pub first_step: f64,
    pub second_step: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        Self {
            first_step: 1e-4,
            second_step: 1e-3,
        }
    }
}

impl FdConfig {
    pub fn scale(u: f64, v: f64) -> f64 {
        1.0f64.max(u.abs()).max(v.abs())
    }

    /// Clearance from the domain edge needed by any stencil at `(u, v)`.
    pub fn margin(&self, u: f64, v: f64) -> f64 {
        2.0 * self.second_step * Self::scale(u, v)
    }
}

/// Which construction of the adapted frame to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameRoute {
    /// Closed form on canonical patches, projection otherwise.
    #[default]
    Auto,
    Canonical,
    Projection,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GeometryOptions {
    pub fd: FdConfig,
    pub route: FrameRoute,
}

/// Position with first and second partials at one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceJet2 {
    pub u: f64,
    pub v: f64,
    pub position: [f64; 4],
    pub phi_u: [f64; 4],
    pub phi_v: [f64; 4],
    pub phi_uu: [f64; 4],
    pub phi_uv: [f64; 4],
    pub phi_vv: [f64; 4],
}

impl SurfaceJet2 {
    pub fn tangent(&self, i: usize) -> &[f64; 4] {
        if i == 0 {
            &self.phi_u
        } else {
            &self.phi_v
        }
    }

    /// `φ_ij` for `i, j ∈ {0, 1}`.
    pub fn second(&self, i: usize, j: usize) -> &[f64; 4] {
        match i + j {
            0 => &self.phi_uu,
            1 => &self.phi_uv,
            _ => &self.phi_vv,
        }
    }
}

/// Pullback metric `g_ij = g̃(φ_i, φ_j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InducedMetric {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl InducedMetric {
    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.g11, self.g12], [self.g12, self.g22]]
    }

    pub fn inverse(&self) -> [[f64; 2]; 2] {
        let d = self.det();
        [[self.g22 / d, -self.g12 / d], [-self.g12 / d, self.g11 / d]]
    }
}

fn check_domain<I: Immersion + ?Sized>(imm: &I, u: f64, v: f64) -> Result<()> {
    if !u.is_finite() || !v.is_finite() {
        return Err(GeometryError::NonFinite("parameter point"));
    }
    let d = imm.domain();
    if !d.contains(u, v) {
        return Err(GeometryError::ParameterDomain(format!(
            "({u}, {v}) lies outside [{}, {}] x [{}, {}]",
            d.u0, d.u1, d.v0, d.v1
        )));
    }
    Ok(())
}

fn check_margin<I: Immersion + ?Sized>(imm: &I, u: f64, v: f64, fdc: &FdConfig) -> Result<()> {
    if imm.domain().margin(u, v) < fdc.margin(u, v) {
        return Err(GeometryError::BoundaryProximity { u, v });
    }
    Ok(())
}

/// Position and tangents without any domain checks.
pub(crate) fn first_jet<I: Immersion + ?Sized>(
    imm: &I,
    u: f64,
    v: f64,
    fdc: &FdConfig,
) -> Result<([f64; 4], [[f64; 4]; 2])> {
    let p = imm.position(u, v)?;
    let t = match imm.tangents(u, v)? {
        Some(t) => t,
        None => numeric_tangents(imm, u, v, fdc)?,
    };
    Ok((p, t))
}

fn numeric_tangents<I: Immersion + ?Sized>(
    imm: &I,
    u: f64,
    v: f64,
    fdc: &FdConfig,
) -> Result<[[f64; 4]; 2]> {
    let h = fdc.first_step * FdConfig::scale(u, v);
    let pu = fd::derivative(|x| imm.position(x, v), u, h)?;
    let pv = fd::derivative(|y| imm.position(u, y), v, h)?;
    Ok([pu, pv])
}

fn numeric_seconds<I: Immersion + ?Sized>(
    imm: &I,
    u: f64,
    v: f64,
    fdc: &FdConfig,
    analytic_tangents: bool,
) -> Result<[[f64; 4]; 3]> {
    let h = fdc.second_step * FdConfig::scale(u, v);
    if analytic_tangents {
        let tan = |x: f64, y: f64| -> Result<[[f64; 4]; 2]> {
            imm.tangents(x, y)?.ok_or(GeometryError::NonFinite("tangents"))
        };
        let du = fd::derivative(|x| tan(x, v).map(flatten2), u, h)?;
        let dv = fd::derivative(|y| tan(u, y).map(flatten2), v, h)?;
        let uu = core::array::from_fn(|i| du[i]);
        let vv = core::array::from_fn(|i| dv[4 + i]);
        let uv = core::array::from_fn(|i| 0.5 * (du[4 + i] + dv[i]));
        Ok([uu, uv, vv])
    } else {
        let uu = fd::second_derivative(|x| imm.position(x, v), u, h)?;
        let vv = fd::second_derivative(|y| imm.position(u, y), v, h)?;
        let uv = fd::mixed_derivative(|x, y| imm.position(x, y), u, v, h)?;
        Ok([uu, uv, vv])
    }
}

fn flatten2(t: [[f64; 4]; 2]) -> [f64; 8] {
    core::array::from_fn(|i| t[i / 4][i % 4])
}

/// Second-order jet, analytic where the patch provides it.
///
/// Numeric partials need the point to be at least
/// [`FdConfig::margin`] inside the domain.
pub fn jet<I: Immersion + ?Sized>(imm: &I, u: f64, v: f64, fdc: &FdConfig) -> Result<SurfaceJet2> {
    check_domain(imm, u, v)?;
    let position = imm.position(u, v)?;
    let analytic = imm.tangents(u, v)?;
    let seconds = imm.second_derivatives(u, v)?;
    if analytic.is_none() || seconds.is_none() {
        check_margin(imm, u, v, fdc)?;
    }
    let [phi_u, phi_v] = match analytic {
        Some(t) => t,
        None => numeric_tangents(imm, u, v, fdc)?,
    };
    let [phi_uu, phi_uv, phi_vv] = match seconds {
        Some(s) => s,
        None => numeric_seconds(imm, u, v, fdc, analytic.is_some())?,
    };
    let j = SurfaceJet2 {
        u,
        v,
        position,
        phi_u,
        phi_v,
        phi_uu,
        phi_uv,
        phi_vv,
    };
    let all = [position, phi_u, phi_v, phi_uu, phi_uv, phi_vv];
    if all.iter().flatten().any(|x| !x.is_finite()) {
        return Err(GeometryError::NonFinite("surface jet"));
    }
    Ok(j)
}

/// Jet with every partial taken by finite differences, ignoring any
/// analytic hooks.
pub fn numeric_jet<I: Immersion + ?Sized>(
    imm: &I,
    u: f64,
    v: f64,
    fdc: &FdConfig,
) -> Result<SurfaceJet2> {
    check_domain(imm, u, v)?;
    check_margin(imm, u, v, fdc)?;
    let position = imm.position(u, v)?;
    let [phi_u, phi_v] = numeric_tangents(imm, u, v, fdc)?;
    let [phi_uu, phi_uv, phi_vv] = numeric_seconds(imm, u, v, fdc, false)?;
    Ok(SurfaceJet2 {
        u,
        v,
        position,
        phi_u,
        phi_v,
        phi_uu,
        phi_uv,
        phi_vv,
    })
}

pub(crate) fn metric_of(
    ambient: &AmbientSpec,
    u: f64,
    v: f64,
    p: &[f64; 4],
    tangents: &[[f64; 4]; 2],
) -> Result<InducedMetric> {
    let q = [p[1], p[2], p[3]];
    let g = |a: &[f64; 4], b: &[f64; 4]| ambient.metric_raw(p[0], &q, a, b);
    let m = InducedMetric {
        g11: g(&tangents[0], &tangents[0]),
        g12: g(&tangents[0], &tangents[1]),
        g22: g(&tangents[1], &tangents[1]),
    };
    if !(m.g11 > 0.0 && m.det() > 0.0) {
        return Err(GeometryError::CausalDegeneracy {
            u,
            v,
            g11: m.g11,
            det: m.det(),
        });
    }
    Ok(m)
}

/// `(g₁₁, g₁₂, g₂₂)`; fails unless the tangent plane is space-like.
pub fn induced_metric(ambient: &AmbientSpec, jet: &SurfaceJet2) -> Result<InducedMetric> {
    ambient.check_point(&crate::AmbientPoint::from_array(jet.position))?;
    metric_of(ambient, jet.u, jet.v, &jet.position, &[jet.phi_u, jet.phi_v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::WarpingFunction;

    fn flat_one() -> AmbientSpec {
        AmbientSpec::flat(WarpingFunction::constant(1.0).unwrap())
    }

    #[test]
    fn plane_jet() {
        let a = 1.7;
        let patch = MapPatch::new(
            flat_one(),
            Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap(),
            move |u, v| [u, a * u, 0.3, v],
        );
        let j = jet(&patch, 0.2, 0.1, &FdConfig::default()).unwrap();
        for (x, y) in j.phi_u.iter().zip([1.0, a, 0.0, 0.0]) {
            assert!((x - y).abs() < 1e-10);
        }
        assert!(j.phi_uu.iter().all(|x| x.abs() < 1e-7));
        assert!(matches!(
            jet(&patch, 0.9999, 0.0, &FdConfig::default()),
            Err(GeometryError::BoundaryProximity { .. })
        ));
        assert!(matches!(
            jet(&patch, 2.0, 0.0, &FdConfig::default()),
            Err(GeometryError::ParameterDomain(_))
        ));
    }

    #[test]
    fn metric_of_flat_cylinder() {
        let patch = MapPatch::new(
            flat_one(),
            Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(),
            |u, v| [u, libm::sqrt(2.0) * u, 0.0, v],
        );
        let j = jet(&patch, 0.5, 0.5, &FdConfig::default()).unwrap();
        let m = induced_metric(patch.ambient(), &j).unwrap();
        assert!((m.g11 - 1.0).abs() < 1e-9 && m.g12.abs() < 1e-9 && (m.g22 - 1.0).abs() < 1e-9);

        let timelike = MapPatch::new(
            flat_one(),
            Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(),
            |u, v| [u, 0.5 * u, 0.0, v],
        );
        let j = jet(&timelike, 0.5, 0.5, &FdConfig::default()).unwrap();
        assert!(matches!(
            induced_metric(timelike.ambient(), &j),
            Err(GeometryError::CausalDegeneracy { .. })
        ));
    }

    #[test]
    fn rect_serde() {
        let r: Rect = serde_json::from_str(r#"{"u":[0,1],"v":[-2,2]}"#).unwrap();
        assert_eq!(r, Rect::new(0.0, 1.0, -2.0, 2.0).unwrap());
        assert!(serde_json::from_str::<Rect>(r#"{"u":[1,0],"v":[0,1]}"#).is_err());
    }
}
