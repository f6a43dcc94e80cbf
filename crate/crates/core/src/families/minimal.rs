//! Minimal members of the cylinder and rotation families.

use alloc::format;

use super::cylinder::CylinderFamily;
use super::functions::{Integrand, Profile};
use super::revolution::{RevolutionFamily, RevolutionSource};
use super::{check_flat, IntegratorSettings};
use crate::ambient::{AmbientSpec, WarpingFunction};
use crate::ode::{OdeSystem, Trajectory};
use crate::surface::Rect;
use crate::{GeometryError, Result};

/// Profile equations of minimal rotation surfaces, state
/// `(ζ₁, ζ₂, ζ₁', ζ₂')`, with `V² = ζ₁'² + ζ₂'²`:
///
/// - `f ζ₁'' = f'ζ₁'(2f²V² - 3) + (f²V² - 1)/(f ζ₁)`
/// - `f ζ₂'' = f'ζ₂'(2f²V² - 3)`
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimalRevolutionOde {
    pub warping: WarpingFunction,
}

impl MinimalRevolutionOde {
    pub fn radicand(&self, u: f64, y: &[f64; 4]) -> f64 {
        let f = self.warping.value(u);
        f * f * (y[2] * y[2] + y[3] * y[3]) - 1.0
    }
}

impl OdeSystem<4> for MinimalRevolutionOde {
    fn rhs(&self, u: f64, y: &[f64; 4]) -> [f64; 4] {
        let f = self.warping.value(u);
        let df = self.warping.derivative(u);
        let s = self.radicand(u, y);
        let k = 2.0 * (s + 1.0) - 3.0;
        [
            y[2],
            y[3],
            (df * y[2] * k + s / (f * y[0])) / f,
            df * y[3] * k / f,
        ]
    }

    fn admissible(&self, u: f64, y: &[f64; 4]) -> bool {
        self.warping.interval().contains(u) && y[0] > 0.0 && self.radicand(u, y) > crate::FRAME_EPSILON
    }
}

/// Solution of the minimal rotation profile equations.
#[derive(Clone, Debug)]
pub struct MinimalRevolution {
    pub family: RevolutionFamily,
    /// Set when the solution left the admissible region before the end of
    /// the requested `u` range; the family's domain is cut there.
    pub exited_at: Option<f64>,
}

/// Integrates from `domain.u0` with initial data `(ζ₁, ζ₂, ζ₁', ζ₂')`.
pub fn solve_minimal_revolution(
    ambient: AmbientSpec,
    domain: Rect,
    initial: [f64; 4],
    settings: &IntegratorSettings,
) -> Result<MinimalRevolution> {
    check_flat(&ambient)?;
    let sys = MinimalRevolutionOde {
        warping: ambient.warping,
    };
    if !ambient.warping.interval().contains(domain.u0) {
        return Err(GeometryError::ParameterDomain(format!(
            "u = {} lies outside the warping interval",
            domain.u0
        )));
    }
    let s = sys.radicand(domain.u0, &initial);
    if !(initial[0] > 0.0 && s > crate::FRAME_EPSILON) {
        return Err(GeometryError::InvalidInput(format!(
            "invalid initial data: need zeta1 > 0 and f^2 (zeta1'^2 + zeta2'^2) - 1 > 0, got zeta1 = {}, radicand = {s}",
            initial[0]
        )));
    }
    let tr = Trajectory::integrate(sys, domain.u0, initial, domain.u1, settings.rk4_step);
    let exited_at = tr.exited_domain();
    let mut dom = domain;
    if exited_at.is_some() {
        dom = Rect::new(domain.u0, tr.end(), domain.v0, domain.v1).map_err(|_| {
            GeometryError::ParameterDomain(format!(
                "the minimal profile leaves the admissible region immediately after u = {}",
                domain.u0
            ))
        })?;
    }
    let family = RevolutionFamily::new(ambient, dom, RevolutionSource::Ode(tr))?;
    Ok(MinimalRevolution { family, exited_at })
}

/// Minimal cylinder with `x₁ = ∫_{u0}^u dξ / (f √(c₃f⁴ + c₁² + 1))` and
/// `x₂ = c₁x₁ + c₂`.
///
/// Space-likeness needs `f²V² - 1 = -c₃f⁴ / (c₃f⁴ + c₁² + 1) > 0`, which
/// together with a positive radicand forces `c₃ < 0`.
pub fn solve_minimal_cylinder(
    ambient: AmbientSpec,
    domain: Rect,
    [c1, c2, c3]: [f64; 3],
    u0: f64,
    settings: &IntegratorSettings,
) -> Result<CylinderFamily> {
    check_flat(&ambient)?;
    if !(c3 < 0.0) {
        return Err(GeometryError::ParameterDomain(format!(
            "c3 = {c3} violates c3 < 0; space-likeness needs f^2 V^2 - 1 = -c3 f^4 / (c3 f^4 + c1^2 + 1) > 0"
        )));
    }
    let g = Integrand::MinimalCylinder { c1, c3 };
    let n = settings.simpson_panels;
    let w = &ambient.warping;
    let x1 = Profile::integral(g, w, 1.0, u0, 0.0, domain.u0, domain.u1, n)?;
    let x2 = Profile::integral(g, w, c1, u0, c2, domain.u0, domain.u1, n)?;
    CylinderFamily::new(ambient, domain, x1, x2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::{sinh, sqrt};

    fn flat(w: WarpingFunction) -> AmbientSpec {
        AmbientSpec::flat(w)
    }

    #[test]
    fn initial_second_derivatives() {
        let sys = MinimalRevolutionOde {
            warping: WarpingFunction::constant(1.0).unwrap(),
        };
        let d = sys.rhs(0.0, &[sqrt(2.0), 0.0, sqrt(2.0), 1.0]);
        assert!((d[2] - sqrt(2.0)).abs() < 1e-14);
        assert_eq!(d[3], 0.0);
    }

    #[test]
    fn flat_solution_is_hyperbolic_sine() {
        let (a, b) = (1.3, 0.4);
        let init = [sinh(b) / a, 0.0, libm::cosh(b), 0.0];
        let dom = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let m = solve_minimal_revolution(
            flat(WarpingFunction::constant(1.0).unwrap()),
            dom,
            init,
            &IntegratorSettings::default(),
        )
        .unwrap();
        assert!(m.exited_at.is_none());
        for &u in &[0.0, 0.25, 0.6, 1.0] {
            let (z1, z2) = m.family.profiles(u).unwrap();
            assert!((z1.value - sinh(a * u + b) / a).abs() < 1e-10);
            assert!(z2.value.abs() < 1e-15);
        }
    }

    #[test]
    fn zeta2_slope_is_conserved_for_constant_warping() {
        let dom = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let m = solve_minimal_revolution(
            flat(WarpingFunction::constant(1.0).unwrap()),
            dom,
            [sqrt(2.0), 0.0, sqrt(2.0), 1.0],
            &IntegratorSettings::default(),
        )
        .unwrap();
        for &u in &[0.1, 0.5, 0.9] {
            assert!((m.family.profiles(u).unwrap().1.d1 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_initial_data() {
        let dom = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let w = flat(WarpingFunction::constant(1.0).unwrap());
        let s = IntegratorSettings::default();
        assert!(solve_minimal_revolution(w, dom, [1.0, 0.0, 0.5, 0.0], &s).is_err());
        assert!(solve_minimal_revolution(w, dom, [-1.0, 0.0, 2.0, 0.0], &s).is_err());
    }

    #[test]
    fn flat_minimal_cylinder_is_a_plane() {
        let dom = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let w = flat(WarpingFunction::constant(1.0).unwrap());
        let cyl = solve_minimal_cylinder(w, dom, [0.0, 0.5, -0.75], 0.0, &IntegratorSettings::default()).unwrap();
        for &u in &[0.0, 0.3, 1.0] {
            let (x1, x2) = cyl.profiles(u);
            assert!((x1.value - 2.0 * u).abs() < 1e-12);
            assert!((x1.d1 - 2.0).abs() < 1e-12);
            assert!((x2.value - 0.5).abs() < 1e-12);
        }
        let err = solve_minimal_cylinder(w, dom, [0.0, 0.0, 0.1], 0.0, &IntegratorSettings::default()).unwrap_err();
        assert!(format!("{err}").contains("c3"));
    }
}
