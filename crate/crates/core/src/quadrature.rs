//! Composite Simpson quadrature.

use alloc::vec::Vec;

/// Composite Simpson rule with `panels` panels (each panel uses its two
/// endpoints and midpoint).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(1);
    let h = (b - a) / n as f64;
    let mut ends = f(a) + f(b);
    let mut mids = 0.0;
    for i in 0..n {
        let x = a + h * i as f64;
        mids += f(x + 0.5 * h);
        if i > 0 {
            ends += 2.0 * f(x);
        }
    }
    h / 6.0 * (ends + 4.0 * mids)
}

/// Simpson value on `2 · panels` panels with the error estimate
/// `|I_n - I_2n| / 15`.
pub fn simpson_with_estimate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> (f64, f64) {
    let coarse = simpson(&f, a, b, panels);
    let fine = simpson(&f, a, b, 2 * panels);
    (fine, (fine - coarse).abs() / 15.0)
}

/// Running integral `x ↦ ∫_a^x g` tabulated on panel boundaries.
///
/// Between nodes the remainder is one Simpson panel from the nearest lower
/// node, so the integrand must be supplied again at evaluation time.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulativeSimpson {
    a: f64,
    h: f64,
    cumulative: Vec<f64>,
}

impl CumulativeSimpson {
    pub fn new<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, panels: usize) -> Self {
        let n = panels.max(1);
        let h = (b - a) / n as f64;
        let mut cumulative = Vec::with_capacity(n + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        let mut left = g(a);
        for i in 0..n {
            let x = a + h * i as f64;
            let right = g(x + h);
            acc += h / 6.0 * (left + 4.0 * g(x + 0.5 * h) + right);
            cumulative.push(acc);
            left = right;
        }
        Self { a, h, cumulative }
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.a + self.h * (self.cumulative.len() - 1) as f64
    }

    /// `∫_a^x g`. Points outside the table are reached by a single partial
    /// panel from the nearest end.
    pub fn eval<F: Fn(f64) -> f64>(&self, x: f64, g: F) -> f64 {
        let last = self.cumulative.len() - 1;
        let idx = if self.h == 0.0 {
            0
        } else {
            let k = libm::floor((x - self.a) / self.h);
            if k < 0.0 {
                0
            } else {
                (k as usize).min(last)
            }
        };
        let x0 = self.a + self.h * idx as f64;
        let d = x - x0;
        if d == 0.0 {
            return self.cumulative[idx];
        }
        self.cumulative[idx] + d / 6.0 * (g(x0) + 4.0 * g(x0 + 0.5 * d) + g(x))
    }
}
