//! Central finite differences with one Richardson step.
//!
//! Each routine combines the step-`h` and step-`h/2` stencils as
//! `(4 D(h/2) - D(h)) / 3`, which removes the `h²` error term and leaves an
//! `O(h⁴)` method. Functions are vector valued and fallible so that chart or
//! interval violations inside a stencil propagate.

use crate::Result;

fn combine<const N: usize>(coarse: [f64; N], fine: [f64; N]) -> [f64; N] {
    core::array::from_fn(|i| (4.0 * fine[i] - coarse[i]) / 3.0)
}

fn central<const N: usize, F>(f: &F, x: f64, h: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let a = f(x + h)?;
    let b = f(x - h)?;
    Ok(core::array::from_fn(|i| (a[i] - b[i]) / (2.0 * h)))
}

fn central2<const N: usize, F>(f: &F, x: f64, fx: &[f64; N], h: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let a = f(x + h)?;
    let b = f(x - h)?;
    Ok(core::array::from_fn(|i| (a[i] - 2.0 * fx[i] + b[i]) / (h * h)))
}

fn cross_stencil<const N: usize, F>(f: &F, u: f64, v: f64, h: f64) -> Result<[f64; N]>
where
    F: Fn(f64, f64) -> Result<[f64; N]>,
{
    let pp = f(u + h, v + h)?;
    let pm = f(u + h, v - h)?;
    let mp = f(u - h, v + h)?;
    let mm = f(u - h, v - h)?;
    Ok(core::array::from_fn(|i| {
        (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h * h)
    }))
}

/// `f'(x)`; evaluates `f` at `x ± h` and `x ± h/2`.
pub fn derivative<const N: usize, F>(f: F, x: f64, h: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let coarse = central(&f, x, h)?;
    let fine = central(&f, x, 0.5 * h)?;
    Ok(combine(coarse, fine))
}

/// `f''(x)`; evaluates `f` at `x`, `x ± h` and `x ± h/2`.
pub fn second_derivative<const N: usize, F>(f: F, x: f64, h: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let fx = f(x)?;
    let coarse = central2(&f, x, &fx, h)?;
    let fine = central2(&f, x, &fx, 0.5 * h)?;
    Ok(combine(coarse, fine))
}

/// `∂²f/∂u∂v` from the four-corner stencil.
pub fn mixed_derivative<const N: usize, F>(f: F, u: f64, v: f64, h: f64) -> Result<[f64; N]>
where
    F: Fn(f64, f64) -> Result<[f64; N]>,
{
    let coarse = cross_stencil(&f, u, v, h)?;
    let fine = cross_stencil(&f, u, v, 0.5 * h)?;
    Ok(combine(coarse, fine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::{cos, exp, sin};

    #[test]
    fn first_derivative_is_fourth_order() {
        let f = |x: f64| Ok([sin(x), exp(2.0 * x)]);
        let x = 0.7;
        let err = |h| {
            let d = derivative(f, x, h).unwrap();
            (d[0] - cos(x)).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
        let d = derivative(f, x, 1e-3).unwrap();
        assert!((d[1] - 2.0 * exp(2.0 * x)).abs() < 1e-10);
    }

    #[test]
    fn second_and_mixed() {
        let f = |x: f64| Ok([sin(x)]);
        let d = second_derivative(f, 0.3, 1e-3).unwrap();
        assert!((d[0] + sin(0.3)).abs() < 1e-8);

        let g = |u: f64, v: f64| Ok([sin(u) * exp(v), u * u * v]);
        let m = mixed_derivative(g, 0.4, -0.2, 1e-3).unwrap();
        assert!((m[0] - cos(0.4) * exp(-0.2)).abs() < 1e-9);
        assert!((m[1] - 0.8).abs() < 1e-9);
    }

    #[test]
    fn errors_propagate() {
        let f = |x: f64| {
            if x > 1.0 {
                Err(crate::GeometryError::ChartBoundary)
            } else {
                Ok([x])
            }
        };
        assert!(derivative(f, 0.99, 0.1).is_err());
    }
}
