//! Constructors for the class 𝒜 families, their minimal and `η`-parallel
//! members, and the configuration records that describe them.

pub mod cylinder;
pub mod eta;
pub mod functions;
pub mod minimal;
pub mod perturb;
pub mod revolution;
pub mod sphere_curve;
pub mod spherical;

use alloc::boxed::Box;
use alloc::format;
use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientSpec, BaseCurvature};
use crate::surface::{Immersion, Rect};
use crate::{GeometryError, Result};

pub use cylinder::CylinderFamily;
pub use eta::{eta_parallel_cylinder, eta_parallel_spherical, EtaSphericalData};
pub use functions::{FunctionRecord, Jet1, Profile, ScalarFn};
pub use minimal::{solve_minimal_cylinder, solve_minimal_revolution, MinimalRevolution, MinimalRevolutionOde};
pub use perturb::PerturbedFamily;
pub use revolution::{RevolutionFamily, RevolutionSource};
pub use sphere_curve::{SphereCurve, SphereFrame};
pub use spherical::{SphericalData, SphericalFamily};

/// Second fundamental form and angle in closed form, frame indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedForm {
    pub h3: [[f64; 2]; 2],
    pub h4: [[f64; 2]; 2],
    pub theta: f64,
}

pub(crate) fn check_flat(ambient: &AmbientSpec) -> Result<()> {
    if ambient.curvature != BaseCurvature::Flat {
        return Err(GeometryError::InvalidInput(format!(
            "family constructors need a flat base (c = 0), got c = {}",
            ambient.curvature.value()
        )));
    }
    Ok(())
}

/// Step sizes for the RK4 and Simpson machinery. `simpson_panels` is per
/// unit length of the integration range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorSettings {
    pub rk4_step: f64,
    pub simpson_panels: usize,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            rk4_step: 1e-3,
            simpson_panels: 512,
        }
    }
}

impl IntegratorSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rk4_step > 0.0 && self.rk4_step.is_finite()) || self.simpson_panels == 0 {
            return Err(GeometryError::InvalidInput(format!(
                "integrator settings need rk4_step > 0 and simpson_panels >= 1, got {} and {}",
                self.rk4_step, self.simpson_panels
            )));
        }
        Ok(())
    }

    pub fn halved(&self) -> Self {
        Self {
            rk4_step: 0.5 * self.rk4_step,
            simpson_panels: 2 * self.simpson_panels,
        }
    }
}

/// Surfaces with a parallel `η`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum EtaParallelSpec {
    Cylinder {
        domain: Rect,
        c1: f64,
        c2: f64,
        c3: f64,
        u0: f64,
    },
    Spherical {
        domain: Rect,
        c: f64,
        u0: f64,
        tau0: f64,
        kappa: ScalarFn,
        phi1: ScalarFn,
        psi: [f64; 2],
        #[serde(default)]
        frame: Option<SphereFrame>,
        #[serde(default)]
        v0: Option<f64>,
    },
}

fn first_component() -> usize {
    1
}

/// Configuration record of a family, tagged by `family`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Cylinder {
        domain: Rect,
        x1: FunctionRecord,
        x2: FunctionRecord,
    },
    Revolution {
        domain: Rect,
        zeta1: FunctionRecord,
        zeta2: FunctionRecord,
    },
    Spherical {
        domain: Rect,
        kappa: ScalarFn,
        phi1: ScalarFn,
        radius: FunctionRecord,
        tau0: FunctionRecord,
        psi: [f64; 2],
        #[serde(default)]
        frame: Option<SphereFrame>,
        /// Base point of the `u` quadratures (default: lower `u` edge).
        #[serde(default)]
        u0: Option<f64>,
        /// Where the curve frame and `ψ` are given (default: lower `v` edge).
        #[serde(default)]
        v0: Option<f64>,
    },
    MinimalCylinder {
        domain: Rect,
        c1: f64,
        c2: f64,
        c3: f64,
        u0: f64,
    },
    MinimalRevolution {
        domain: Rect,
        /// `(ζ₁, ζ₂, ζ₁', ζ₂')` at the lower `u` edge.
        initial: [f64; 4],
    },
    EtaParallel(EtaParallelSpec),
    /// Negative control: a family plus `amplitude · sin(u + v)` on one
    /// spatial coordinate.
    Perturbed {
        base: Box<FamilySpec>,
        amplitude: f64,
        #[serde(default = "first_component")]
        component: usize,
    },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Cylinder { .. } => "cylinder",
            FamilySpec::Revolution { .. } => "revolution",
            FamilySpec::Spherical { .. } => "spherical",
            FamilySpec::MinimalCylinder { .. } => "minimal_cylinder",
            FamilySpec::MinimalRevolution { .. } => "minimal_revolution",
            FamilySpec::EtaParallel(EtaParallelSpec::Cylinder { .. }) => "eta_parallel/cylinder",
            FamilySpec::EtaParallel(EtaParallelSpec::Spherical { .. }) => "eta_parallel/spherical",
            FamilySpec::Perturbed { .. } => "perturbed",
        }
    }

    pub fn domain(&self) -> Rect {
        match self {
            FamilySpec::Cylinder { domain, .. }
            | FamilySpec::Revolution { domain, .. }
            | FamilySpec::Spherical { domain, .. }
            | FamilySpec::MinimalCylinder { domain, .. }
            | FamilySpec::MinimalRevolution { domain, .. }
            | FamilySpec::EtaParallel(EtaParallelSpec::Cylinder { domain, .. })
            | FamilySpec::EtaParallel(EtaParallelSpec::Spherical { domain, .. }) => *domain,
            FamilySpec::Perturbed { base, .. } => base.domain(),
        }
    }
}

/// Family names accepted in the `family` tag.
pub const FAMILY_NAMES: [&str; 7] = [
    "cylinder",
    "revolution",
    "spherical",
    "minimal_cylinder",
    "minimal_revolution",
    "eta_parallel",
    "perturbed",
];

/// A constructed family patch.
#[derive(Clone, Debug)]
pub enum Family {
    Cylinder(CylinderFamily),
    Revolution(RevolutionFamily),
    Spherical(SphericalFamily),
    Perturbed(PerturbedFamily),
}

impl Family {
    pub fn build(ambient: AmbientSpec, spec: &FamilySpec, settings: &IntegratorSettings) -> Result<Self> {
        settings.validate()?;
        let w = &ambient.warping;
        let n = settings.simpson_panels;
        Ok(match spec {
            FamilySpec::Cylinder { domain, x1, x2 } => {
                let p1 = Profile::resolve(x1, w, domain.u0, domain.u1, n)?;
                let p2 = Profile::resolve(x2, w, domain.u0, domain.u1, n)?;
                Family::Cylinder(CylinderFamily::new(ambient, *domain, p1, p2)?)
            }
            FamilySpec::Revolution { domain, zeta1, zeta2 } => {
                let p1 = Profile::resolve(zeta1, w, domain.u0, domain.u1, n)?;
                let p2 = Profile::resolve(zeta2, w, domain.u0, domain.u1, n)?;
                let src = RevolutionSource::Profiles { zeta1: p1, zeta2: p2 };
                Family::Revolution(RevolutionFamily::new(ambient, *domain, src)?)
            }
            FamilySpec::Spherical {
                domain,
                kappa,
                phi1,
                radius,
                tau0,
                psi,
                frame,
                u0,
                v0,
            } => {
                let data = SphericalData {
                    kappa: kappa.clone(),
                    phi1: phi1.clone(),
                    radius: Profile::resolve(radius, w, domain.u0, domain.u1, n)?,
                    tau0: Profile::resolve(tau0, w, domain.u0, domain.u1, n)?,
                    psi: *psi,
                    frame: frame.unwrap_or_default(),
                    u0: u0.unwrap_or(domain.u0),
                    v_start: v0.unwrap_or(domain.v0),
                };
                Family::Spherical(SphericalFamily::new(ambient, *domain, data, settings)?)
            }
            FamilySpec::MinimalCylinder { domain, c1, c2, c3, u0 } => {
                Family::Cylinder(solve_minimal_cylinder(ambient, *domain, [*c1, *c2, *c3], *u0, settings)?)
            }
            FamilySpec::MinimalRevolution { domain, initial } => {
                Family::Revolution(solve_minimal_revolution(ambient, *domain, *initial, settings)?.family)
            }
            FamilySpec::EtaParallel(EtaParallelSpec::Cylinder { domain, c1, c2, c3, u0 }) => {
                Family::Cylinder(eta_parallel_cylinder(ambient, *domain, [*c1, *c2, *c3], *u0, settings)?)
            }
            FamilySpec::EtaParallel(EtaParallelSpec::Spherical {
                domain,
                c,
                u0,
                tau0,
                kappa,
                phi1,
                psi,
                frame,
                v0,
            }) => {
                let d = EtaSphericalData {
                    c: *c,
                    u0: *u0,
                    tau0: *tau0,
                    kappa: kappa.clone(),
                    phi1: phi1.clone(),
                    psi: *psi,
                    frame: frame.unwrap_or_default(),
                    v_start: v0.unwrap_or(domain.v0),
                };
                Family::Spherical(eta_parallel_spherical(ambient, *domain, d, settings)?)
            }
            FamilySpec::Perturbed {
                base,
                amplitude,
                component,
            } => {
                let inner = Family::build(ambient, base, settings)?;
                Family::Perturbed(PerturbedFamily::new(inner, *amplitude, *component)?)
            }
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Family::Cylinder(_) => "cylinder",
            Family::Revolution(_) => "revolution",
            Family::Spherical(_) => "spherical",
            Family::Perturbed(_) => "perturbed",
        }
    }

    /// Closed-form `h` and `θ` where the family has them.
    pub fn closed_form(&self, u: f64) -> Option<Result<ClosedForm>> {
        match self {
            Family::Cylinder(c) => Some(Ok(c.closed_form(u))),
            Family::Revolution(r) => Some(r.closed_form(u)),
            _ => None,
        }
    }

    pub fn closed_form_theta(&self, u: f64) -> Option<f64> {
        match self {
            Family::Spherical(s) => Some(s.closed_form_theta(u)),
            _ => self.closed_form(u).and_then(|r| r.ok()).map(|c| c.theta),
        }
    }

    fn inner(&self) -> &dyn Immersion {
        match self {
            Family::Cylinder(x) => x,
            Family::Revolution(x) => x,
            Family::Spherical(x) => x,
            Family::Perturbed(x) => x,
        }
    }
}

impl Immersion for Family {
    fn ambient(&self) -> &AmbientSpec {
        self.inner().ambient()
    }

    fn domain(&self) -> Rect {
        self.inner().domain()
    }

    fn position(&self, u: f64, v: f64) -> Result<[f64; 4]> {
        self.inner().position(u, v)
    }

    fn tangents(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 2]>> {
        self.inner().tangents(u, v)
    }

    fn second_derivatives(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 3]>> {
        self.inner().second_derivatives(u, v)
    }

    fn is_canonical(&self) -> bool {
        self.inner().is_canonical()
    }
}
