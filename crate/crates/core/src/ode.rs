//! Fixed-step classical Runge-Kutta integration with dense evaluation.

use alloc::vec::Vec;

/// A first-order system `y' = F(x, y)` on `ℝᴺ`.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, x: f64, y: &[f64; N]) -> [f64; N];

    /// Map the state back onto its constraint manifold after each step.
    fn project(&self, _y: &mut [f64; N]) {}

    /// `false` once the state has left the region where the system is valid.
    fn admissible(&self, _x: f64, _y: &[f64; N]) -> bool {
        true
    }
}

impl<const N: usize, S: OdeSystem<N> + ?Sized> OdeSystem<N> for &S {
    fn rhs(&self, x: f64, y: &[f64; N]) -> [f64; N] {
        (**self).rhs(x, y)
    }
    fn project(&self, y: &mut [f64; N]) {
        (**self).project(y)
    }
    fn admissible(&self, x: f64, y: &[f64; N]) -> bool {
        (**self).admissible(x, y)
    }
}

fn axpy<const N: usize>(y: &[f64; N], a: f64, k: &[f64; N]) -> [f64; N] {
    core::array::from_fn(|i| y[i] + a * k[i])
}

/// One RK4 step of size `h` (no projection).
pub fn rk4_step<const N: usize, S: OdeSystem<N>>(sys: &S, x: f64, y: &[f64; N], h: f64) -> [f64; N] {
    let k1 = sys.rhs(x, y);
    let k2 = sys.rhs(x + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = sys.rhs(x + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = sys.rhs(x + h, &axpy(y, h, &k3));
    core::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Solution of an initial value problem stored at the RK4 nodes. Values
/// between nodes come from a partial step off the preceding node.
#[derive(Clone, Debug)]
pub struct Trajectory<S, const N: usize> {
    system: S,
    x0: f64,
    h: f64,
    nodes: Vec<[f64; N]>,
    exited: Option<f64>,
}

impl<S: OdeSystem<N>, const N: usize> Trajectory<S, N> {
    /// Integrates from `(x0, y0)` to `x1` (either direction) with a step no
    /// larger than `|step|`. Integration stops early at the first node where
    /// [`OdeSystem::admissible`] fails.
    pub fn integrate(system: S, x0: f64, y0: [f64; N], x1: f64, step: f64) -> Self {
        let span = x1 - x0;
        let n = if span != 0.0 && span.is_finite() {
            libm::ceil(span.abs() / step.abs()).max(1.0) as usize
        } else {
            0
        };
        let h = if n == 0 { 0.0 } else { span / n as f64 };
        let mut nodes = Vec::with_capacity(n + 1);
        let mut y = y0;
        system.project(&mut y);
        nodes.push(y);
        let mut exited = None;
        for i in 0..n {
            let x = x0 + h * i as f64;
            let mut next = rk4_step(&system, x, &y, h);
            system.project(&mut next);
            let xn = x0 + h * (i + 1) as f64;
            if !next.iter().all(|v| v.is_finite()) || !system.admissible(xn, &next) {
                exited = Some(x);
                break;
            }
            nodes.push(next);
            y = next;
        }
        Self {
            system,
            x0,
            h,
            nodes,
            exited,
        }
    }

    pub fn system(&self) -> &S {
        &self.system
    }

    pub fn start(&self) -> f64 {
        self.x0
    }

    /// Last point the solution reached.
    pub fn end(&self) -> f64 {
        self.x0 + self.h * (self.nodes.len() - 1) as f64
    }

    /// Where integration stopped because the state left the valid region.
    pub fn exited_domain(&self) -> Option<f64> {
        self.exited
    }

    pub fn nodes(&self) -> &[[f64; N]] {
        &self.nodes
    }

    /// State at `x`, or `None` outside the integrated range.
    pub fn eval(&self, x: f64) -> Option<[f64; N]> {
        let tol = 1e-12 * (1.0 + x.abs());
        let (lo, hi) = if self.h >= 0.0 {
            (self.x0, self.end())
        } else {
            (self.end(), self.x0)
        };
        if !(x >= lo - tol && x <= hi + tol) {
            return None;
        }
        if self.h == 0.0 {
            return Some(self.nodes[0]);
        }
        let last = self.nodes.len() - 1;
        let k = libm::floor((x - self.x0) / self.h).max(0.0) as usize;
        let k = k.min(last);
        let xk = self.x0 + self.h * k as f64;
        let d = x - xk;
        if d == 0.0 {
            return Some(self.nodes[k]);
        }
        let mut y = rk4_step(&self.system, xk, &self.nodes[k], d);
        self.system.project(&mut y);
        Some(y)
    }
}

/// Final-state error estimate `max |y_h - y_{h/2}| / 15` from one step halving.
pub fn halving_error_estimate<const N: usize, S: OdeSystem<N>>(
    system: &S,
    x0: f64,
    y0: [f64; N],
    x1: f64,
    step: f64,
) -> f64 {
    let a = Trajectory::integrate(system, x0, y0, x1, step);
    let b = Trajectory::integrate(system, x0, y0, x1, 0.5 * step);
    let ya = a.nodes().last().copied().unwrap_or(y0);
    let yb = b.nodes().last().copied().unwrap_or(y0);
    ya.iter()
        .zip(yb.iter())
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
        / 15.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::{cos, exp, sin};

    struct Oscillator;
    impl OdeSystem<2> for Oscillator {
        fn rhs(&self, _x: f64, y: &[f64; 2]) -> [f64; 2] {
            [y[1], -y[0]]
        }
    }

    struct Growth;
    impl OdeSystem<1> for Growth {
        fn rhs(&self, _x: f64, y: &[f64; 1]) -> [f64; 1] {
            [y[0]]
        }
        fn admissible(&self, _x: f64, y: &[f64; 1]) -> bool {
            y[0] < 2.0
        }
    }

    #[test]
    fn oscillator_accuracy_and_dense_output() {
        let tr = Trajectory::integrate(Oscillator, 0.0, [0.0, 1.0], 3.0, 1e-2);
        let end = tr.nodes().last().unwrap();
        assert!((end[0] - sin(3.0)).abs() < 1e-9);
        for &x in &[0.0, 0.0137, 1.5, 2.999, 3.0] {
            let y = tr.eval(x).unwrap();
            assert!((y[0] - sin(x)).abs() < 1e-9);
            assert!((y[1] - cos(x)).abs() < 1e-9);
        }
        assert!(tr.eval(3.1).is_none());
    }

    #[test]
    fn backward_integration() {
        let tr = Trajectory::integrate(Oscillator, 1.0, [sin(1.0), cos(1.0)], -0.5, 1e-2);
        assert!((tr.end() + 0.5).abs() < 1e-12);
        for &x in &[1.0, 0.3, 0.0, -0.4999, -0.5] {
            let y = tr.eval(x).unwrap();
            assert!((y[0] - sin(x)).abs() < 1e-9, "x = {x}");
        }
        assert!(tr.eval(1.1).is_none());
        assert!(tr.eval(-0.6).is_none());
    }

    #[test]
    fn fourth_order_ratio() {
        let err = |h| {
            let tr = Trajectory::integrate(Oscillator, 0.0, [0.0, 1.0], 2.0, h);
            (tr.nodes().last().unwrap()[0] - sin(2.0)).abs()
        };
        let r = err(0.1) / err(0.05);
        assert!((14.0..18.0).contains(&r), "ratio {r}");
        let est = halving_error_estimate(&Oscillator, 0.0, [0.0, 1.0], 2.0, 0.1);
        assert!(est > 0.0 && est < 1e-5);
    }

    #[test]
    fn stops_on_domain_exit() {
        let tr = Trajectory::integrate(Growth, 0.0, [1.0], 2.0, 1e-3);
        let stop = tr.exited_domain().unwrap();
        assert!((stop - core::f64::consts::LN_2).abs() < 2e-3);
        assert!(tr.end() <= core::f64::consts::LN_2);
        assert!((tr.eval(0.5).unwrap()[0] - exp(0.5)).abs() < 1e-12);
    }
}
