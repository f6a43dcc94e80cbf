//! Bump `a sin(u + v)` added to one spatial coordinate of a patch.

use alloc::boxed::Box;
use alloc::format;
use libm::{cos, sin};

use super::Family;
use crate::ambient::AmbientSpec;
use crate::surface::{Immersion, Rect};
use crate::{GeometryError, Result};

#[derive(Clone, Debug)]
pub struct PerturbedFamily {
    base: Box<Family>,
    amplitude: f64,
    component: usize,
}

impl PerturbedFamily {
    /// `component` is a spatial index `1..=3`.
    pub fn new(base: Family, amplitude: f64, component: usize) -> Result<Self> {
        if !(1..=3).contains(&component) || !amplitude.is_finite() {
            return Err(GeometryError::InvalidInput(format!(
                "perturbation needs a spatial component in 1..=3 and a finite amplitude, got {component} and {amplitude}"
            )));
        }
        Ok(Self {
            base: Box::new(base),
            amplitude,
            component,
        })
    }

    pub fn base(&self) -> &Family {
        &self.base
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
}

impl Immersion for PerturbedFamily {
    fn ambient(&self) -> &AmbientSpec {
        self.base.ambient()
    }

    fn domain(&self) -> Rect {
        self.base.domain()
    }

    fn position(&self, u: f64, v: f64) -> Result<[f64; 4]> {
        let mut p = self.base.position(u, v)?;
        p[self.component] += self.amplitude * sin(u + v);
        Ok(p)
    }

    fn tangents(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 2]>> {
        Ok(self.base.tangents(u, v)?.map(|mut t| {
            let d = self.amplitude * cos(u + v);
            t[0][self.component] += d;
            t[1][self.component] += d;
            t
        }))
    }

    fn second_derivatives(&self, u: f64, v: f64) -> Result<Option<[[f64; 4]; 3]>> {
        Ok(self.base.second_derivatives(u, v)?.map(|mut s| {
            let d = -self.amplitude * sin(u + v);
            for row in s.iter_mut() {
                row[self.component] += d;
            }
            s
        }))
    }
}
