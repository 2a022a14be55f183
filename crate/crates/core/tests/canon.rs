mod common;

use common::{naive_cross, nonsymmetric_spectrum, normal_matrix, random_walk, rng};
use hdcoint::canon::{difference_and_lag, moments, residualize, squared_ccs};
use hdcoint::{analyze, DeterministicSpec, Error, TimeSeriesPanel};
use nalgebra::DMatrix;

const SPECS: [DeterministicSpec; 3] = [
    DeterministicSpec::NoDet,
    DeterministicSpec::Constant,
    DeterministicSpec::RestrictedTrend,
];

#[test]
fn moments_match_triple_loop() {
    let mut g = rng(11);
    for (p, t) in [(1, 10), (3, 40), (7, 25), (12, 60)] {
        let r0 = normal_matrix(p, t, &mut g);
        let r1 = normal_matrix(p, t, &mut g);
        let m = moments(&r0, &r1).unwrap();
        for (got, want) in [
            (&m.s00, naive_cross(&r0, &r0)),
            (&m.s01, naive_cross(&r0, &r1)),
            (&m.s11, naive_cross(&r1, &r1)),
        ] {
            assert!((got - &want).amax() < 1e-12, "p = {p}, T = {t}");
        }
    }
}

#[test]
fn spectrum_matches_nonsymmetric_eigensolver() {
    let mut g = rng(5);
    for k in 0..20 {
        let p = 1 + (k * 7) % 20;
        let t = 3 * p + 10 + k;
        let panel = TimeSeriesPanel::new(random_walk(p, t, &mut g)).unwrap();
        let spec = SPECS[k % 3];
        let (dx, xlag) = difference_and_lag(&panel);
        let (r0, r1) = residualize(&dx, &xlag, spec).unwrap();
        let m = moments(&r0, &r1).unwrap();
        let got = squared_ccs(&m).unwrap().ascending();
        let mut want = nonsymmetric_spectrum(&m.s00, &m.s01, &m.s11);
        // with a restricted trend S11 is (p+1)x(p+1) but the product is p x p
        want.truncate(p);
        assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "instance {k} (p = {p}): {a} vs {b}");
        }
    }
}

#[test]
fn scalar_case_is_squared_correlation() {
    let mut g = rng(3);
    for (t, spec) in [
        (1000, DeterministicSpec::NoDet),
        (50, DeterministicSpec::NoDet),
        (200, DeterministicSpec::Constant),
    ] {
        let x = random_walk(1, t, &mut g);
        let panel = TimeSeriesPanel::new(x.clone()).unwrap();
        let lambda = analyze(&panel, spec).unwrap().lambdas()[0];
        let d: Vec<f64> = (1..=t).map(|j| x[(0, j)] - x[(0, j - 1)]).collect();
        let l: Vec<f64> = (0..t).map(|j| x[(0, j)]).collect();
        let centre = |v: &[f64]| -> Vec<f64> {
            if spec == DeterministicSpec::Constant {
                let m = v.iter().sum::<f64>() / v.len() as f64;
                v.iter().map(|a| a - m).collect()
            } else {
                v.to_vec()
            }
        };
        let (d, l) = (centre(&d), centre(&l));
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let want = dot(&d, &l).powi(2) / (dot(&d, &d) * dot(&l, &l));
        assert!((lambda - want).abs() < 1e-12, "T = {t}: {lambda} vs {want}");
        if t == 1000 {
            assert!(lambda < 0.05);
        }
    }
}

#[test]
fn invariant_under_nonsingular_premultiplication() {
    let mut g = rng(17);
    for (p, t) in [(2, 30), (5, 80), (10, 150)] {
        let panel = TimeSeriesPanel::new(random_walk(p, t, &mut g)).unwrap();
        let mut a = normal_matrix(p, p, &mut g);
        for i in 0..p {
            a[(i, i)] += 3.0;
        }
        let moved = panel.premultiply(&a).unwrap();
        for spec in SPECS {
            let x = analyze(&panel, spec).unwrap();
            let y = analyze(&moved, spec).unwrap();
            for (u, v) in x.lambdas().iter().zip(y.lambdas()) {
                assert!((u - v).abs() < 1e-8, "p = {p}, {spec:?}");
            }
        }
    }
}

#[test]
fn singular_premultiplier_fails_analysis() {
    let panel = TimeSeriesPanel::new(random_walk(3, 20, &mut rng(1))).unwrap();
    let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
    let moved = panel.premultiply(&a).unwrap();
    let err = analyze(&moved, DeterministicSpec::NoDet).unwrap_err();
    assert!(matches!(err, Error::Singular { .. }), "{err:?}");
    assert!(panel.premultiply(&DMatrix::identity(2, 2)).is_err());
}

#[test]
fn white_noise_components_separate_from_bulk() {
    let (p, t) = (20, 200);
    let mut g = rng(2024);
    let mut x = random_walk(p, t, &mut g);
    let e = normal_matrix(3, t + 1, &mut g);
    for i in 0..3 {
        for j in 0..=t {
            x[(i, j)] = e[(i, j)];
        }
    }
    let s = analyze(&TimeSeriesPanel::new(x).unwrap(), DeterministicSpec::Constant).unwrap();
    let l = s.lambdas();
    // stationary components give squared correlations near 1/2 and above,
    // the random-walk bulk stays well below
    assert!(l[2] > 0.3, "{l:?}");
    assert!(l[2] - l[3] > 0.1, "{l:?}");
}

#[test]
fn collinear_levels_are_singular() {
    let mut x = random_walk(3, 40, &mut rng(9));
    for j in 0..=40 {
        x[(2, j)] = x[(0, j)] - 2.0 * x[(1, j)];
    }
    let err = analyze(&TimeSeriesPanel::new(x).unwrap(), DeterministicSpec::NoDet).unwrap_err();
    assert!(matches!(err, Error::Singular { .. }), "{err:?}");
}

#[test]
fn constant_series_is_singular_after_demeaning() {
    let mut x = random_walk(2, 30, &mut rng(4));
    for j in 0..=30 {
        x[(1, j)] = 5.0;
    }
    let err = analyze(&TimeSeriesPanel::new(x).unwrap(), DeterministicSpec::Constant).unwrap_err();
    assert!(matches!(err, Error::Singular { .. }), "{err:?}");
}

#[test]
fn trend_is_projected_out_of_both_sides() {
    let mut g = rng(8);
    let panel = TimeSeriesPanel::new(random_walk(4, 50, &mut g)).unwrap();
    let (dx, xlag) = difference_and_lag(&panel);
    let (r0, r1) = residualize(&dx, &xlag, DeterministicSpec::RestrictedTrend).unwrap();
    assert_eq!(r1.nrows(), 5);
    for row in r0.row_iter().chain(r1.row_iter()) {
        assert!(row.sum().abs() < 1e-9);
    }
}
