use libm::{fabs, sinh};

use super::frame::{adapted_frame, AdaptedFrame};
use super::{check_domain, check_margin, first_jet, jet, metric_of};
use super::{FdConfig, GeometryOptions, Immersion, InducedMetric, SurfaceJet2};
use crate::ambient::{AmbientPoint, AmbientSpec, ChristoffelTable};
use crate::{fd, GeometryError, Result};

/// Pointwise extrinsic data that needs no derivative of the frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointForms {
    pub jet: SurfaceJet2,
    pub metric: InducedMetric,
    pub frame: AdaptedFrame,
    /// `h³_ab = g̃(h(e_a, e_b), e₃)`, frame indices from 0.
    pub h3: [[f64; 2]; 2],
    /// `h⁴_ab = g̃(h(e_a, e_b), e₄)`.
    pub h4: [[f64; 2]; 2],
    /// `e₃` coefficient of `H`: `-(h³₁₁ + h³₂₂)/2`.
    pub mean3: f64,
    /// `e₄` coefficient of `H`: `(h⁴₁₁ + h⁴₂₂)/2`.
    pub mean4: f64,
}

/// Second fundamental form together with the tangent and normal connection
/// coefficients of the adapted frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalData {
    pub h3: [[f64; 2]; 2],
    pub h4: [[f64; 2]; 2],
    pub mean3: f64,
    pub mean4: f64,
    /// `ω₁₂(e₁), ω₁₂(e₂)` with `ω₁₂(X) = g(∇_X e₁, e₂)`.
    pub omega12: [f64; 2],
    /// `g̃(∇⊥_{e_i} e₃, e₄)` for `i = 1, 2`.
    pub normal34: [f64; 2],
}

/// Everything the residual predicates need at one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointGeometry {
    pub forms: PointForms,
    pub data: FundamentalData,
    /// `conn[i][j][β] = g̃(∇̃_{e_i} e_j, e_β)` for tangent `e_i`, any `j, β`.
    pub conn: [[[f64; 4]; 4]; 2],
    /// `e₁(θ), e₂(θ)`.
    pub dtheta: [f64; 2],
    /// `e₁(f∘𝒯), e₂(f∘𝒯)`.
    pub dwarp: [f64; 2],
    /// `|f'(𝒯) + e₁(f∘𝒯) / sinh θ|`.
    pub warp_residual: f64,
    /// `f(𝒯)`.
    pub f: f64,
    /// `(ln f)'(𝒯)`.
    pub dlnf: f64,
}

impl PointGeometry {
    pub fn u(&self) -> f64 {
        self.forms.jet.u
    }

    pub fn v(&self) -> f64 {
        self.forms.jet.v
    }

    pub fn theta(&self) -> f64 {
        self.forms.frame.theta
    }

    /// `g̃(∇⊥_{e_i} e₄, e₃)` for `i = 1, 2`.
    pub fn normal43(&self) -> [f64; 2] {
        [self.conn[0][3][2], self.conn[1][3][2]]
    }

    /// `g(A_{e_α} e_i, e_j)` from the Weingarten formula, `alpha ∈ {2, 3}`.
    pub fn shape_operator(&self, alpha: usize) -> [[f64; 2]; 2] {
        core::array::from_fn(|i| core::array::from_fn(|j| -self.conn[i][alpha][j]))
    }
}

fn locate(e: GeometryError, u: f64, v: f64) -> GeometryError {
    match e {
        GeometryError::CausalDegeneracy { g11, det, .. } => {
            GeometryError::CausalDegeneracy { u, v, g11, det }
        }
        other => other,
    }
}

fn point_of(p: &[f64; 4]) -> AmbientPoint {
    AmbientPoint::from_array(*p)
}

fn second_fundamental_form(
    ambient: &AmbientSpec,
    gamma: &ChristoffelTable,
    jet: &SurfaceJet2,
    frame: &AdaptedFrame,
) -> [[[f64; 2]; 2]; 2] {
    let p = &jet.position;
    let q = [p[1], p[2], p[3]];
    let mut coord = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in i..2 {
            let corr = gamma.contract(jet.tangent(i), jet.tangent(j));
            let phi = jet.second(i, j);
            let d: [f64; 4] = core::array::from_fn(|l| phi[l] + corr[l]);
            for a in 0..2 {
                let x = ambient.metric_raw(p[0], &q, &d, &frame.e[2 + a]);
                coord[a][i][j] = x;
                coord[a][j][i] = x;
            }
        }
    }
    let c = &frame.coeffs;
    core::array::from_fn(|alpha| {
        core::array::from_fn(|a| {
            core::array::from_fn(|b| {
                let mut s = 0.0;
                for i in 0..2 {
                    for j in 0..2 {
                        s += c[a][i] * c[b][j] * coord[alpha][i][j];
                    }
                }
                s
            })
        })
    })
}

/// Jet, metric, frame and second fundamental form at `(u, v)`.
pub fn pointwise_forms<I: Immersion + ?Sized>(
    imm: &I,
    u: f64,
    v: f64,
    opts: &GeometryOptions,
) -> Result<PointForms> {
    let ambient = imm.ambient();
    let jet = jet(imm, u, v, &opts.fd)?;
    let p = jet.position;
    ambient.check_point(&point_of(&p))?;
    let tangents = [jet.phi_u, jet.phi_v];
    let metric = metric_of(ambient, u, v, &p, &tangents)?;
    let frame = adapted_frame(ambient, &p, &tangents, opts.route, imm.is_canonical())
        .map_err(|e| locate(e, u, v))?;
    let gamma = ambient.christoffel_raw(p[0], &[p[1], p[2], p[3]]);
    let [h3, h4] = second_fundamental_form(ambient, &gamma, &jet, &frame);
    let sym = |h: [[f64; 2]; 2]| {
        let m = 0.5 * (h[0][1] + h[1][0]);
        [[h[0][0], m], [m, h[1][1]]]
    };
    let (h3, h4) = (sym(h3), sym(h4));
    let out = PointForms {
        jet,
        metric,
        frame,
        h3,
        h4,
        mean3: -0.5 * (h3[0][0] + h3[1][1]),
        mean4: 0.5 * (h4[0][0] + h4[1][1]),
    };
    let vals = h3.iter().chain(h4.iter()).flatten();
    if vals.clone().any(|x| !x.is_finite()) || frame.e.iter().flatten().any(|x| !x.is_finite()) {
        return Err(GeometryError::NonFinite("second fundamental form"));
    }
    Ok(out)
}

const PACK: usize = 18;

/// Frame components, θ and `f∘𝒯` at a nearby point, flattened.
fn packed_frame<I: Immersion + ?Sized>(
    imm: &I,
    u: f64,
    v: f64,
    fdc: &FdConfig,
    route: super::FrameRoute,
) -> Result<[f64; PACK]> {
    let ambient = imm.ambient();
    let (p, t) = first_jet(imm, u, v, fdc)?;
    ambient.check_point(&point_of(&p))?;
    let fr = adapted_frame(ambient, &p, &t, route, imm.is_canonical())?;
    let mut out = [0.0; PACK];
    for a in 0..4 {
        out[4 * a..4 * a + 4].copy_from_slice(&fr.e[a]);
    }
    out[16] = fr.theta;
    out[17] = ambient.f(p[0]);
    Ok(out)
}

/// Full point analysis: forms plus connection coefficients obtained by
/// differentiating the frame over the chart.
pub fn analyze_point<I: Immersion + ?Sized>(
    imm: &I,
    u: f64,
    v: f64,
    opts: &GeometryOptions,
) -> Result<PointGeometry> {
    check_domain(imm, u, v)?;
    check_margin(imm, u, v, &opts.fd)?;
    let forms = pointwise_forms(imm, u, v, opts)?;
    let ambient = imm.ambient();
    let frame = &forms.frame;
    let route = frame.route;
    let h = opts.fd.second_step * FdConfig::scale(u, v);
    let du = fd::derivative(|x| packed_frame(imm, x, v, &opts.fd, route), u, h)
        .map_err(|e| locate(e, u, v))?;
    let dv = fd::derivative(|y| packed_frame(imm, u, y, &opts.fd, route), v, h)
        .map_err(|e| locate(e, u, v))?;
    let dir: [[f64; PACK]; 2] =
        core::array::from_fn(|i| core::array::from_fn(|k| frame.coeffs[i][0] * du[k] + frame.coeffs[i][1] * dv[k]));

    let p = &forms.jet.position;
    let q = [p[1], p[2], p[3]];
    let gamma = ambient.christoffel_raw(p[0], &q);
    let mut conn = [[[0.0; 4]; 4]; 2];
    for i in 0..2 {
        for j in 0..4 {
            let corr = gamma.contract(&frame.e[i], &frame.e[j]);
            let nabla: [f64; 4] = core::array::from_fn(|l| dir[i][4 * j + l] + corr[l]);
            for b in 0..4 {
                conn[i][j][b] = ambient.metric_raw(p[0], &q, &nabla, &frame.e[b]);
            }
        }
    }
    let t = p[0];
    let fval = ambient.f(t);
    let df = ambient.warping.derivative(t);
    let dwarp = [dir[0][17], dir[1][17]];
    let data = FundamentalData {
        h3: forms.h3,
        h4: forms.h4,
        mean3: forms.mean3,
        mean4: forms.mean4,
        omega12: [conn[0][0][1], conn[1][0][1]],
        normal34: [conn[0][2][3], conn[1][2][3]],
    };
    let out = PointGeometry {
        forms,
        data,
        conn,
        dtheta: [dir[0][16], dir[1][16]],
        dwarp,
        warp_residual: fabs(df + dwarp[0] / sinh(frame.theta)),
        f: fval,
        dlnf: df / fval,
    };
    if conn.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(GeometryError::NonFinite("connection coefficients"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{BaseCurvature, WarpingFunction};
    use crate::surface::{FrameRoute, MapPatch, Rect};
    use libm::{cos, exp, sin, sqrt};

    #[test]
    fn totally_geodesic_plane() {
        let amb = AmbientSpec::flat(WarpingFunction::constant(1.0).unwrap());
        let patch = MapPatch::new(amb, Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(), |u, v| {
            [u, 2.0 * u, 0.0, v]
        });
        let g = analyze_point(&patch, 0.5, 0.5, &GeometryOptions::default()).unwrap();
        for x in g.data.h3.iter().chain(g.data.h4.iter()).flatten() {
            assert!(x.abs() < 1e-7);
        }
        assert!(g.data.mean3.abs() < 1e-7 && g.data.mean4.abs() < 1e-7);
        assert!(g.warp_residual < 1e-12);
    }

    /// Generic patch in a curved base: checks Gauss, Weingarten and
    /// orthonormality consistency of the connection table.
    #[test]
    fn connection_table_consistency() {
        for c in [BaseCurvature::Hyperbolic, BaseCurvature::Flat, BaseCurvature::Spherical] {
            let amb = AmbientSpec::new(WarpingFunction::exponential(0.4).unwrap(), c);
            let patch = MapPatch::new(amb, Rect::new(-0.5, 0.5, -0.5, 0.5).unwrap(), |u, v| {
                [
                    0.3 * u + 0.1 * v * v,
                    0.6 * u + 0.1 * sin(v),
                    0.5 * v + 0.05 * u * u,
                    0.1 * cos(u + v),
                ]
            });
            let g = analyze_point(&patch, 0.1, -0.2, &GeometryOptions::default()).unwrap();
            for i in 0..2 {
                for j in 0..4 {
                    for b in 0..4 {
                        // metric compatibility
                        let s = g.conn[i][j][b] + g.conn[i][b][j];
                        assert!(s.abs() < 1e-7, "c={c:?} i={i} j={j} b={b} s={s}");
                    }
                }
                for j in 0..2 {
                    assert!((g.conn[i][j][2] - g.data.h3[i][j]).abs() < 1e-7);
                    assert!((g.conn[i][j][3] - g.data.h4[i][j]).abs() < 1e-7);
                }
            }
            for a in [2, 3] {
                let s = g.shape_operator(a);
                let h = if a == 2 { g.data.h3 } else { g.data.h4 };
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((s[i][j] - h[i][j]).abs() < 1e-7);
                    }
                }
            }
        }
    }

    #[test]
    fn routes_agree_on_canonical_patch() {
        let amb = AmbientSpec::flat(WarpingFunction::exponential(1.0).unwrap());
        let mut patch = MapPatch::new(amb, Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(), |u, v| {
            [u, -2.0 * exp(-u), 0.5 * sin(u), v]
        });
        patch.canonical = true;
        let mk = |route| GeometryOptions {
            route,
            ..Default::default()
        };
        let a = analyze_point(&patch, 0.4, 0.6, &mk(FrameRoute::Canonical)).unwrap();
        let b = analyze_point(&patch, 0.4, 0.6, &mk(FrameRoute::Projection)).unwrap();
        assert!((a.theta() - b.theta()).abs() < 1e-8);
        for i in 0..2 {
            for j in 0..2 {
                assert!((a.data.h3[i][j] - b.data.h3[i][j]).abs() < 1e-6);
                assert!((a.data.h4[i][j] - b.data.h4[i][j]).abs() < 1e-6);
            }
        }
        let fv = exp(0.4);
        let v2 = 4.0 * exp(-0.8) + 0.25 * cos(0.4) * cos(0.4);
        let want_theta = -libm::asinh(1.0 / sqrt(-1.0 + fv * fv * v2));
        assert!((a.theta() - want_theta).abs() < 1e-10);
    }
}
