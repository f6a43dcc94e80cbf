use proptest::prelude::*;
use rwlab_core::ambient::VectorFieldJet;
use rwlab_core::{
    AmbientPoint, AmbientSpec, AmbientVector, BaseCurvature, CausalCharacter, GeometryError, Interval,
    WarpingFunction, WarpingKind,
};

fn flat(w: WarpingFunction) -> AmbientSpec {
    AmbientSpec::flat(w)
}

fn e(mu: usize) -> AmbientVector {
    AmbientVector::coordinate(mu)
}

/// `-dt² + f² (2 / (1 + c|q|²))² δ`, written out without the library.
fn oracle_metric(w: &WarpingFunction, c: f64, x: &[f64; 4]) -> [[f64; 4]; 4] {
    let f = w.value(x[0]);
    let l = 2.0 / (1.0 + c * (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]));
    let s = if c == 0.0 { f * f } else { f * f * l * l };
    let mut g = [[0.0; 4]; 4];
    g[0][0] = -1.0;
    for i in 1..4 {
        g[i][i] = s;
    }
    g
}

/// Christoffel symbols from the Koszul formula with centred differences of
/// the oracle metric.
fn koszul(w: &WarpingFunction, c: f64, x: &[f64; 4]) -> [[[f64; 4]; 4]; 4] {
    let h = 1e-5;
    let dg: Vec<[[f64; 4]; 4]> = (0..4)
        .map(|mu| {
            let (mut a, mut b) = (*x, *x);
            a[mu] += h;
            b[mu] -= h;
            let (ga, gb) = (oracle_metric(w, c, &a), oracle_metric(w, c, &b));
            core::array::from_fn(|i| core::array::from_fn(|j| (ga[i][j] - gb[i][j]) / (2.0 * h)))
        })
        .collect();
    let g = oracle_metric(w, c, x);
    core::array::from_fn(|l| {
        core::array::from_fn(|m| {
            core::array::from_fn(|n| 0.5 / g[l][l] * (dg[m][l][n] + dg[n][l][m] - dg[l][m][n]))
        })
    })
}

fn curvature(c: i8) -> BaseCurvature {
    BaseCurvature::try_from(c).unwrap()
}

#[test]
fn metric_values() {
    let p = AmbientPoint::new(0.3, [0.1, -0.2, 0.4]);
    let a = flat(WarpingFunction::exponential(1.0).unwrap());
    assert_eq!(a.metric(&p, &e(0), &e(0)).unwrap(), -1.0);

    let two = flat(WarpingFunction::constant(2.0).unwrap());
    assert!((two.metric(&p, &e(1), &e(1)).unwrap() - 4.0).abs() < 1e-15);

    let at1 = AmbientPoint::new(1.0, [0.0; 3]);
    let x = AmbientVector::new(1.0, [1.0, 0.0, 0.0]);
    let y = AmbientVector::new(1.0, [-1.0, 0.0, 0.0]);
    let expected = -1.0 - 1f64.exp().powi(2);
    assert!((a.metric(&at1, &x, &y).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn christoffel_values() {
    let p = AmbientPoint::new(0.0, [0.2, 0.1, -0.3]);
    let one = flat(WarpingFunction::constant(1.0).unwrap()).christoffel(&p).unwrap();
    assert!(one.gamma.iter().flatten().flatten().all(|x| *x == 0.0));

    let ex = flat(WarpingFunction::exponential(1.0).unwrap()).christoffel(&p).unwrap();
    assert!((ex.gamma[0][1][1] - 1.0).abs() < 1e-14);
    assert!((ex.gamma[1][0][1] - 1.0).abs() < 1e-14);
    assert!((ex.gamma[1][1][0] - 1.0).abs() < 1e-14);
    assert_eq!(ex.gamma[0][0][0], 0.0);
    assert_eq!(ex.gamma[1][2][2], 0.0);

    let ch = flat(WarpingFunction::cosh_plus(1.0, 0.0).unwrap()).christoffel(&p).unwrap();
    assert_eq!(ch.gamma[1][0][1], 0.0);
}

#[test]
fn covariant_derivative_values() {
    let a = flat(WarpingFunction::exponential(1.0).unwrap());
    let p = AmbientPoint::new(0.0, [0.0; 3]);
    let constant = |v: AmbientVector| VectorFieldJet {
        value: v,
        derivative: AmbientVector::new(0.0, [0.0; 3]),
    };
    let dx_dt = a.covariant_derivative(&p, &constant(e(0)), &e(1)).unwrap();
    assert!((dx_dt.to_array()[1] - 1.0).abs() < 1e-14);
    assert!(dx_dt.to_array().iter().enumerate().all(|(i, x)| i == 1 || x.abs() < 1e-14));
    let dx_dx = a.covariant_derivative(&p, &constant(e(1)), &e(1)).unwrap();
    assert!((dx_dx.t - 1.0).abs() < 1e-14);
    assert!(dx_dx.base.iter().all(|x| x.abs() < 1e-14));
}

#[test]
fn causal_values() {
    let a = flat(WarpingFunction::constant(1.0).unwrap());
    let p = AmbientPoint::new(0.0, [0.0; 3]);
    assert_eq!(a.causal_character(&p, &e(0), None).unwrap(), CausalCharacter::Timelike);
    assert_eq!(a.causal_character(&p, &e(1), None).unwrap(), CausalCharacter::Spacelike);
    let null = AmbientVector::new(1.0, [1.0, 0.0, 0.0]);
    assert_eq!(a.causal_character(&p, &null, None).unwrap(), CausalCharacter::Null);
    assert!(matches!(
        a.causal_character(&p, &AmbientVector::new(0.0, [0.0; 3]), None),
        Err(GeometryError::ZeroVector)
    ));
}

#[test]
fn outside_interval_is_rejected() {
    let w = WarpingFunction::new(WarpingKind::Linear { a: 1.0, b: 1.0 }, Interval::new(-1.0, f64::INFINITY).unwrap())
        .unwrap();
    let a = flat(w);
    let p = AmbientPoint::new(-2.0, [0.0; 3]);
    assert!(a.metric(&p, &e(0), &e(0)).is_err());
    assert!(a.christoffel(&p).is_err());
}

fn warping() -> impl Strategy<Value = WarpingFunction> {
    prop_oneof![
        (0.5f64..3.0).prop_map(|a| WarpingFunction::constant(a).unwrap()),
        (-1.5f64..1.5).prop_map(|a| WarpingFunction::exponential(a).unwrap()),
        (0.2f64..2.0, 0.0f64..2.0).prop_map(|(a, b)| WarpingFunction::cosh_plus(a, b).unwrap()),
    ]
}

fn point() -> impl Strategy<Value = AmbientPoint> {
    (-1.0f64..1.0, prop::array::uniform3(-0.5f64..0.5)).prop_map(|(t, q)| AmbientPoint::new(t, q))
}

fn vector() -> impl Strategy<Value = AmbientVector> {
    prop::array::uniform4(-2.0f64..2.0).prop_map(AmbientVector::from_array)
}

proptest! {
    #[test]
    fn christoffel_matches_koszul(w in warping(), c in -1i8..=1, p in point()) {
        let a = AmbientSpec::new(w, curvature(c));
        let gamma = a.christoffel(&p).unwrap().gamma;
        let oracle = koszul(&w, f64::from(c), &p.to_array());
        for l in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    prop_assert!((gamma[l][m][n] - oracle[l][m][n]).abs() < 1e-7,
                        "Γ[{l}][{m}][{n}] {} vs {}", gamma[l][m][n], oracle[l][m][n]);
                    prop_assert_eq!(gamma[l][m][n], gamma[l][n][m]);
                }
            }
        }
    }

    #[test]
    fn metric_is_symmetric_and_bilinear(
        w in warping(), c in -1i8..=1, p in point(),
        x in vector(), y in vector(), z in vector(), s in -3.0f64..3.0,
    ) {
        let a = AmbientSpec::new(w, curvature(c));
        let g = |u: &AmbientVector, v: &AmbientVector| a.metric(&p, u, v).unwrap();
        let scale = 1.0 + g(&x, &x).abs() + g(&y, &y).abs() + g(&z, &z).abs();
        prop_assert!((g(&x, &y) - g(&y, &x)).abs() < 1e-12 * scale);
        let sx_plus_z = AmbientVector::from_array(core::array::from_fn(|i| s * x.to_array()[i] + z.to_array()[i]));
        prop_assert!((g(&sx_plus_z, &y) - (s * g(&x, &y) + g(&z, &y))).abs() < 1e-11 * scale * (1.0 + s.abs()));
        let tensor = a.metric_tensor(&p).unwrap();
        let oracle = oracle_metric(&w, f64::from(c), &p.to_array());
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((tensor[i][j] - oracle[i][j]).abs() < 1e-12 * (1.0 + oracle[i][j].abs()));
            }
        }
    }

    #[test]
    fn decomposed_derivative_agrees(
        w in warping(), c in -1i8..=1, p in point(),
        dir in vector(), value in vector(), derivative in vector(),
    ) {
        let a = AmbientSpec::new(w, curvature(c));
        let jet = VectorFieldJet { value, derivative };
        let direct = a.covariant_derivative(&p, &jet, &dir).unwrap().to_array();
        let split = a.covariant_derivative_decomposed(&p, &jet, &dir).unwrap().to_array();
        for i in 0..4 {
            prop_assert!((direct[i] - split[i]).abs() < 1e-11 * (1.0 + direct[i].abs()));
        }
    }

    #[test]
    fn connection_is_metric_compatible(w in warping(), c in -1i8..=1, p in point()) {
        // ∂_μ g_{νλ} = Γ^σ_{μν} g_{σλ} + Γ^σ_{μλ} g_{νσ}
        let a = AmbientSpec::new(w, curvature(c));
        let gamma = a.christoffel(&p).unwrap().gamma;
        let g = a.metric_tensor(&p).unwrap();
        let dg = a.metric_derivatives(&p).unwrap();
        for m in 0..4 {
            for n in 0..4 {
                for l in 0..4 {
                    let rhs: f64 = (0..4).map(|s| gamma[s][m][n] * g[s][l] + gamma[s][m][l] * g[n][s]).sum();
                    prop_assert!((dg[m][n][l] - rhs).abs() < 1e-11 * (1.0 + rhs.abs()));
                }
            }
        }
    }
}
