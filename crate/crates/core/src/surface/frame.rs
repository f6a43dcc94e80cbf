use libm::{asinh, fabs, sqrt};

use super::{metric_of, FrameRoute};
use crate::ambient::{cross, norm2, AmbientSpec};
use crate::{GeometryError, Result, FRAME_EPSILON};

/// Orthonormal frame `{e₁, e₂; e₃, e₄}` along the surface with
/// `∂t = sinh θ e₁ + cosh θ e₃`, `sinh θ < 0`, `e₃` timelike.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptedFrame {
    /// `e[a]` holds the chart components of `e_{a+1}`.
    pub e: [[f64; 4]; 4],
    pub theta: f64,
    /// `e_{a+1} = coeffs[a][0] φ_u + coeffs[a][1] φ_v` for the two tangent
    /// vectors.
    pub coeffs: [[f64; 2]; 2],
    /// Route that produced the frame (never `Auto`).
    pub route: FrameRoute,
}

/// Builds the adapted frame at a point from position and tangents.
pub fn adapted_frame(
    ambient: &AmbientSpec,
    p: &[f64; 4],
    tangents: &[[f64; 4]; 2],
    route: FrameRoute,
    canonical_patch: bool,
) -> Result<AdaptedFrame> {
    match route {
        FrameRoute::Canonical => canonical(ambient, p, tangents),
        FrameRoute::Projection => projection(ambient, p, tangents),
        FrameRoute::Auto => {
            if canonical_patch {
                match canonical(ambient, p, tangents) {
                    Err(GeometryError::NotCanonical(_)) => projection(ambient, p, tangents),
                    r => r,
                }
            } else {
                projection(ambient, p, tangents)
            }
        }
    }
}

fn bar(x: &[f64; 4]) -> [f64; 3] {
    [x[1], x[2], x[3]]
}

fn canonical(ambient: &AmbientSpec, p: &[f64; 4], tangents: &[[f64; 4]; 2]) -> Result<AdaptedFrame> {
    let [pu, pv] = tangents;
    if fabs(pu[0] - 1.0) > 1e-9 || fabs(pv[0]) > 1e-9 {
        return Err(GeometryError::NotCanonical("time coordinate is not the u parameter"));
    }
    let q = bar(p);
    let f = ambient.f(p[0]);
    let (ub, vb) = (bar(pu), bar(pv));
    let e_t = ambient.base_metric(&q, &ub, &ub);
    let g_t = ambient.base_metric(&q, &vb, &vb);
    let f_t = ambient.base_metric(&q, &ub, &vb);
    if fabs(f_t) > 1e-8 * sqrt(e_t * g_t) {
        return Err(GeometryError::NotCanonical("base coordinate curves are not orthogonal"));
    }
    let val = -1.0 + f * f * e_t;
    if !(val > FRAME_EPSILON) {
        return Err(GeometryError::DegenerateFrame {
            value: val,
            threshold: FRAME_EPSILON,
        });
    }
    if !(g_t > 0.0) {
        return Err(GeometryError::CausalDegeneracy {
            u: p[0],
            v: f64::NAN,
            g11: val,
            det: val * f * f * g_t,
        });
    }
    let s1 = 1.0 / sqrt(val);
    let s2 = 1.0 / (f * sqrt(g_t));
    let e1 = pu.map(|x| x * s1);
    let e2 = pv.map(|x| x * s2);
    let k = 1.0 / sqrt(e_t * val);
    let e3 = [f * e_t * k, ub[0] * k / f, ub[1] * k / f, ub[2] * k / f];
    let n = cross(&ub, &vb);
    // Euclidean unit normal divided by the conformal factor is g_c-unit
    let n_len = sqrt(norm2(&n) * ambient.base_scale(&q));
    let e4 = [0.0, n[0] / (n_len * f), n[1] / (n_len * f), n[2] / (n_len * f)];
    Ok(AdaptedFrame {
        e: [e1, e2, e3, e4],
        theta: -asinh(s1),
        coeffs: [[s1, 0.0], [0.0, s2]],
        route: FrameRoute::Canonical,
    })
}

fn projection(ambient: &AmbientSpec, p: &[f64; 4], tangents: &[[f64; 4]; 2]) -> Result<AdaptedFrame> {
    let [pu, pv] = tangents;
    let m = metric_of(ambient, f64::NAN, f64::NAN, p, tangents)?;
    let gi = m.inverse();
    let g = m.matrix();
    // g̃(∂t, φ_j) = -φ_j⁰
    let a = [-pu[0], -pv[0]];
    let w = [
        gi[0][0] * a[0] + gi[0][1] * a[1],
        gi[1][0] * a[0] + gi[1][1] * a[1],
    ];
    let t2 = w[0] * a[0] + w[1] * a[1];
    if !(t2 > 1e-24) {
        return Err(GeometryError::SliceSurface);
    }
    let t_len = sqrt(t2);
    let c1 = [-w[0] / t_len, -w[1] / t_len];
    let gc = [
        g[0][0] * c1[0] + g[0][1] * c1[1],
        g[1][0] * c1[0] + g[1][1] * c1[1],
    ];
    let sd = sqrt(m.det());
    let c2 = [-gc[1] / sd, gc[0] / sd];
    let comb = |c: [f64; 2]| -> [f64; 4] { core::array::from_fn(|i| c[0] * pu[i] + c[1] * pv[i]) };
    let e1 = comb(c1);
    let e2 = comb(c2);
    let tvec = comb(w);
    let k = 1.0 / sqrt(1.0 + t2);
    let e3 = [(1.0 - tvec[0]) * k, -tvec[1] * k, -tvec[2] * k, -tvec[3] * k];
    let e4 = complement(ambient, p, &e1, &e2, &e3)?;
    Ok(AdaptedFrame {
        e: [e1, e2, e3, e4],
        theta: -asinh(t_len),
        coeffs: [c1, c2],
        route: FrameRoute::Projection,
    })
}

/// Unit space-like vector orthogonal to `a, b, c`, oriented so that
/// `det[a, b, c, n] > 0`.
fn complement(
    ambient: &AmbientSpec,
    p: &[f64; 4],
    a: &[f64; 4],
    b: &[f64; 4],
    c: &[f64; 4],
) -> Result<[f64; 4]> {
    let q = bar(p);
    let f = ambient.f(p[0]);
    let s = f * f * ambient.base_scale(&q);
    // lowered components n_μ = det[δ_μ, a, b, c]
    let low: [f64; 4] = core::array::from_fn(|mu| {
        let mut e = [0.0; 4];
        e[mu] = 1.0;
        det4(&[e, *a, *b, *c])
    });
    let mut n = [-low[0], low[1] / s, low[2] / s, low[3] / s];
    let len2 = ambient.metric_raw(p[0], &q, &n, &n);
    if !(len2 > 0.0) {
        return Err(GeometryError::NonFinite("normal complement"));
    }
    let len = sqrt(len2);
    n = n.map(|x| x / len);
    if det4(&[*a, *b, *c, n]) < 0.0 {
        n = n.map(|x| -x);
    }
    Ok(n)
}

/// Determinant of the matrix whose columns are `cols`.
pub(crate) fn det4(cols: &[[f64; 4]; 4]) -> f64 {
    let m = |r: usize, c: usize| cols[c][r];
    let mut d = 0.0;
    for j in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for r in 1..4 {
            let mut cc = 0;
            for c in 0..4 {
                if c == j {
                    continue;
                }
                minor[r - 1][cc] = m(r, c);
                cc += 1;
            }
        }
        let d3 = minor[0][0] * (minor[1][1] * minor[2][2] - minor[1][2] * minor[2][1])
            - minor[0][1] * (minor[1][0] * minor[2][2] - minor[1][2] * minor[2][0])
            + minor[0][2] * (minor[1][0] * minor[2][1] - minor[1][1] * minor[2][0]);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        d += sign * m(0, j) * d3;
    }
    d
}
