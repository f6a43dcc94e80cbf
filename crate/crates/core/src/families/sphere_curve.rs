//! Arc-length spherical curves from their geodesic curvature, integrated
//! together with the auxiliary functions `K` and `ψ₁, ψ₂`.

use alloc::format;
use libm::{fabs, sqrt};
use serde::{Deserialize, Serialize};

use super::functions::ScalarFn;
use crate::ambient::{cross, dot3, normalize3};
use crate::ode::{OdeSystem, Trajectory};
use crate::{GeometryError, Result};

/// Initial spherical frame `(α, α', n)` with `n = α × α'`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereFrame {
    pub alpha: [f64; 3],
    pub tangent: [f64; 3],
    pub normal: [f64; 3],
}

impl Default for SphereFrame {
    fn default() -> Self {
        Self {
            alpha: [1.0, 0.0, 0.0],
            tangent: [0.0, 1.0, 0.0],
            normal: [0.0, 0.0, 1.0],
        }
    }
}

impl SphereFrame {
    pub fn validate(&self) -> Result<()> {
        let (a, t, n) = (&self.alpha, &self.tangent, &self.normal);
        let tol = 1e-10;
        let unit = |x: &[f64; 3]| fabs(dot3(x, x) - 1.0) <= tol;
        let ortho = fabs(dot3(a, t)) <= tol && fabs(dot3(a, n)) <= tol && fabs(dot3(t, n)) <= tol;
        let handed = dot3(&cross(a, t), n) > 0.0;
        if !(unit(a) && unit(t) && unit(n) && ortho && handed) {
            return Err(GeometryError::InvalidInput(format!(
                "initial sphere frame {:?} is not a right-handed orthonormal triple",
                self
            )));
        }
        Ok(())
    }
}

/// State `(α, T = α', n, K, ψ₁, ψ₂)` with
/// `α' = T`, `T' = κn - α`, `n' = -κT`, `K' = κ`,
/// `ψ₁' = κψ₂ - φ₁`, `ψ₂' = -κψ₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereCurveSystem {
    pub kappa: ScalarFn,
    pub phi1: ScalarFn,
}

impl OdeSystem<12> for SphereCurveSystem {
    fn rhs(&self, v: f64, y: &[f64; 12]) -> [f64; 12] {
        let k = self.kappa.value(v);
        let p = self.phi1.value(v);
        let mut d = [0.0; 12];
        for i in 0..3 {
            d[i] = y[3 + i];
            d[3 + i] = k * y[6 + i] - y[i];
            d[6 + i] = -k * y[3 + i];
        }
        d[9] = k;
        d[10] = k * y[11] - p;
        d[11] = -k * y[10];
        d
    }

    fn project(&self, y: &mut [f64; 12]) {
        let a = normalize3(&[y[0], y[1], y[2]]);
        let t0 = [y[3], y[4], y[5]];
        let c = dot3(&t0, &a);
        let t = normalize3(&[t0[0] - c * a[0], t0[1] - c * a[1], t0[2] - c * a[2]]);
        let n = cross(&a, &t);
        y[..3].copy_from_slice(&a);
        y[3..6].copy_from_slice(&t);
        y[6..9].copy_from_slice(&n);
    }
}

/// Sphere curve data at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveState {
    pub alpha: [f64; 3],
    pub tangent: [f64; 3],
    pub normal: [f64; 3],
    /// `K(v) = ∫_{v0}^v κ`.
    pub k: f64,
    pub psi1: f64,
    pub psi2: f64,
}

/// Integrated curve on `[lo, hi]` from initial data at `v0 ∈ [lo, hi]`.
#[derive(Clone, Debug)]
pub struct SphereCurve {
    v0: f64,
    forward: Trajectory<SphereCurveSystem, 12>,
    backward: Trajectory<SphereCurveSystem, 12>,
}

impl SphereCurve {
    /// Integrates the frame system with RK4, re-orthonormalizing the triple
    /// after every step.
    #[allow(clippy::too_many_arguments)]
    pub fn integrate(
        kappa: ScalarFn,
        phi1: ScalarFn,
        frame: SphereFrame,
        psi: [f64; 2],
        v0: f64,
        lo: f64,
        hi: f64,
        step: f64,
    ) -> Result<Self> {
        frame.validate()?;
        if !(step > 0.0) || !(lo <= v0 && v0 <= hi) {
            return Err(GeometryError::InvalidInput(format!(
                "sphere curve range [{lo}, {hi}] must contain v0 = {v0} and the step must be positive"
            )));
        }
        let mut y0 = [0.0; 12];
        y0[..3].copy_from_slice(&frame.alpha);
        y0[3..6].copy_from_slice(&frame.tangent);
        y0[6..9].copy_from_slice(&frame.normal);
        y0[10] = psi[0];
        y0[11] = psi[1];
        let sys = SphereCurveSystem { kappa, phi1 };
        let forward = Trajectory::integrate(sys.clone(), v0, y0, hi, step);
        let backward = Trajectory::integrate(sys, v0, y0, lo, step);
        if forward.exited_domain().is_some() || backward.exited_domain().is_some() {
            return Err(GeometryError::NonFinite("sphere curve integration"));
        }
        Ok(Self {
            v0,
            forward,
            backward,
        })
    }

    /// Curve only: `φ₁ ≡ 0` and `ψ ≡ 0`.
    pub fn from_curvature(kappa: ScalarFn, frame: SphereFrame, v0: f64, v1: f64, step: f64) -> Result<Self> {
        Self::integrate(kappa, ScalarFn::Constant(0.0), frame, [0.0; 2], v0, v0, v1, step)
    }

    pub fn system(&self) -> &SphereCurveSystem {
        self.forward.system()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.backward.end(), self.forward.end())
    }

    pub fn raw(&self, v: f64) -> Result<[f64; 12]> {
        let tr = if v >= self.v0 { &self.forward } else { &self.backward };
        tr.eval(v).ok_or_else(|| {
            let (lo, hi) = self.range();
            GeometryError::ParameterDomain(format!("v = {v} lies outside the integrated range [{lo}, {hi}]"))
        })
    }

    pub fn state(&self, v: f64) -> Result<CurveState> {
        let y = self.raw(v)?;
        Ok(CurveState {
            alpha: [y[0], y[1], y[2]],
            tangent: [y[3], y[4], y[5]],
            normal: [y[6], y[7], y[8]],
            k: y[9],
            psi1: y[10],
            psi2: y[11],
        })
    }

    /// Maximum deviation from orthonormality over the stored nodes.
    pub fn frame_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for y in self.forward.nodes().iter().chain(self.backward.nodes()) {
            let a = [y[0], y[1], y[2]];
            let t = [y[3], y[4], y[5]];
            let n = [y[6], y[7], y[8]];
            for d in [
                dot3(&a, &a) - 1.0,
                dot3(&t, &t) - 1.0,
                dot3(&n, &n) - 1.0,
                dot3(&a, &t),
                dot3(&a, &n),
                dot3(&t, &n),
            ] {
                worst = worst.max(fabs(d));
            }
        }
        worst
    }
}

/// Closed-form curve of constant curvature `κ`: a circle whose axis is
/// `(κα₀ + n₀)/ω`, `ω = √(1 + κ²)`.
pub fn constant_curvature_curve(kappa: f64, frame: &SphereFrame, v: f64) -> [f64; 3] {
    let w = sqrt(1.0 + kappa * kappa);
    let axis: [f64; 3] = core::array::from_fn(|i| (kappa * frame.alpha[i] + frame.normal[i]) / w);
    let (c, s) = (libm::cos(w * v), libm::sin(w * v));
    core::array::from_fn(|i| {
        let center = kappa / w * axis[i];
        let p0 = frame.alpha[i] - center;
        center + p0 * c + frame.tangent[i] / w * s
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn great_circle() {
        let c = SphereCurve::from_curvature(ScalarFn::Constant(0.0), SphereFrame::default(), 0.0, PI, 1e-3).unwrap();
        let s = c.state(PI).unwrap();
        assert!((s.alpha[0] + 1.0).abs() < 1e-8);
        assert!(s.alpha[1].abs() < 1e-8 && s.alpha[2].abs() < 1e-8);
    }

    #[test]
    fn unit_curvature_circle() {
        let fr = SphereFrame::default();
        let c = SphereCurve::from_curvature(ScalarFn::Constant(1.0), fr, 0.0, 6.0, 1e-3).unwrap();
        let axis = normalize3(&[1.0, 0.0, 1.0]);
        for i in 0..=60 {
            let v = 0.1 * i as f64;
            let a = c.state(v).unwrap().alpha;
            let along = dot3(&a, &axis);
            let perp = [a[0] - along * axis[0], a[1] - along * axis[1], a[2] - along * axis[2]];
            assert!((sqrt(dot3(&perp, &perp)) - 1.0 / sqrt(2.0)).abs() < 1e-6);
            let exact = constant_curvature_curve(1.0, &fr, v);
            for k in 0..3 {
                assert!((a[k] - exact[k]).abs() < 1e-9);
            }
        }
        assert!(c.frame_defect() < 1e-8);
    }

    #[test]
    fn psi_system_decouples_without_curvature() {
        let c = SphereCurve::integrate(
            ScalarFn::Constant(0.0),
            ScalarFn::Polynomial(alloc::vec![1.0, 2.0]),
            SphereFrame::default(),
            [0.5, -0.25],
            0.0,
            -1.0,
            1.0,
            1e-3,
        )
        .unwrap();
        for &v in &[-1.0, -0.3, 0.0, 0.7, 1.0] {
            let s = c.state(v).unwrap();
            assert!((s.psi2 + 0.25).abs() < 1e-12);
            assert!((s.psi1 - (0.5 - v - v * v)).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_frames() {
        let fr = SphereFrame {
            alpha: [1.0, 0.0, 0.0],
            tangent: [0.0, 1.0, 0.0],
            normal: [0.0, 0.0, -1.0],
        };
        assert!(SphereCurve::from_curvature(ScalarFn::Constant(0.0), fr, 0.0, 1.0, 1e-3).is_err());
    }
}
