use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;

use super::*;
use crate::exact::raney_exact;
use crate::params::{make_params, Rational};

fn model(p: (i64, i64), r: (i64, i64)) -> CurveModel {
    let params = make_params(Rational::new(p.0, p.1).unwrap(), Rational::new(r.0, r.1).unwrap()).unwrap();
    CurveModel::new(params).unwrap()
}

fn mp(x: f64) -> f64 {
    ((4.0 - x) / x).sqrt() / (2.0 * PI)
}

#[test]
fn exponents_in_lowest_terms() {
    assert_eq!(model((2, 1), (1, 1)).exponents(), (2, 1, 1));
    assert_eq!(model((3, 2), (1, 2)).exponents(), (3, 2, 1));
    assert_eq!(model((2, 1), (3, 2)).exponents(), (4, 2, 3));
    assert_eq!(model((3, 1), (2, 1)).exponents(), (3, 1, 2));
}

#[test]
fn quadratic_branch() {
    let m = model((2, 1), (1, 1));
    let w = m.physical_root(Complex64::new(8.0, 0.0)).unwrap();
    assert!((w - (4.0 - 2.0 * 2f64.sqrt())).norm() < 1e-12);
    let w = m.physical_root(Complex64::new(4.0, 0.0)).unwrap();
    assert!((w - 2.0).norm() < 1e-6, "{w}");
    // closed form off the axis
    let z = Complex64::new(1.3, 0.7);
    let closed = (z - (z * z - 4.0 * z).sqrt()) / 2.0;
    let other = (z + (z * z - 4.0 * z).sqrt()) / 2.0;
    let w = m.physical_root(z).unwrap();
    let want = if (closed / z).im < 0.0 { closed } else { other };
    assert!((w - want).norm() < 1e-12, "{w} vs {want}");
}

#[test]
fn far_field_is_one() {
    for m in [model((2, 1), (1, 1)), model((3, 1), (1, 1)), model((3, 2), (1, 2)), model((5, 2), (3, 2))] {
        let l = m.support_edge();
        let w = m.physical_root(Complex64::new(1e6 * l, 0.0)).unwrap();
        assert!((w - 1.0).norm() < 1e-5);
    }
}

#[test]
fn residual_at_returned_roots() {
    let m = model((3, 1), (1, 1));
    for z in [Complex64::new(-2.0, 0.5), Complex64::new(3.0, 1e-7), Complex64::new(0.01, -0.01)] {
        let v = physical_v(&m, z).unwrap();
        let co = m.coefficients(z);
        let res = roots::eval_with_derivative(&co, v).0.norm();
        assert!(res <= 1e-10 * (1.0 + z.norm()), "z={z}: {res}");
    }
}

#[test]
fn marchenko_pastur_values() {
    let m = model((2, 1), (1, 1));
    assert_relative_eq!(m.density(2.0).unwrap(), 1.0 / (2.0 * PI), epsilon = 1e-10);
    assert_relative_eq!(m.density(1.0).unwrap(), 3f64.sqrt() / (2.0 * PI), epsilon = 1e-10);
    assert!(m.density(5.0).unwrap().abs() < 1e-8);
    for k in 0..40 {
        let x = 4.0 * (k as f64 + 0.5) / 40.0;
        assert!((m.density(x).unwrap() - mp(x)).abs() < 1e-8, "x={x}");
    }
    assert!(m.density(0.0).is_err());
}

#[test]
fn branch_coherence() {
    let m = model((3, 1), (1, 1));
    for x in [0.5, 2.0, 6.0] {
        let up = m.physical_root(Complex64::new(x, 1e-6)).unwrap();
        let down = m.physical_root(Complex64::new(x, -1e-6)).unwrap();
        assert!((up - down.conj()).norm() < 1e-9, "x={x}");
    }
}

#[test]
fn first_coefficient_at_infinity() {
    for m in [model((2, 1), (1, 1)), model((3, 1), (1, 1)), model((3, 2), (1, 2)), model((2, 1), (3, 2))] {
        let l = m.support_edge();
        let fit = |s: f64| (m.physical_root(Complex64::new(s, 0.0)).unwrap() - 1.0).re * s;
        let (a, b) = (fit(1e2 * l), fit(1e3 * l));
        // remove the 1/z correction
        let r1 = (10.0 * b - a) / 9.0;
        let want = raney_exact(m.params(), 1).to_f64();
        assert!((r1 - want).abs() < 0.01 * want, "{r1} vs {want}");
    }
}

#[test]
fn profile_mass_and_exponents() {
    let m = model((2, 1), (1, 1));
    let prof = m.sample_density(200).unwrap();
    assert!((prof.mass() - 1.0).abs() < 1e-6, "mass {}", prof.mass());
    assert!((prof.endpoint_exponent_at_zero() + 0.5).abs() < 0.02);
    assert!((prof.endpoint_exponent_at_edge() - 0.5).abs() < 0.02);
    assert!(prof.values().iter().all(|&v| v >= 0.0));
    assert!(prof.grid().windows(2).all(|w| w[0] < w[1]));
    // interpolation reproduces ρ(2)
    assert!((prof.density(2.0) - 1.0 / (2.0 * PI)).abs() < 1e-6);
    let m3 = model((3, 1), (1, 1));
    let prof3 = m3.sample_density(200).unwrap();
    assert!((prof3.endpoint_exponent_at_zero() + 2.0 / 3.0).abs() < 0.02);
    assert!((prof3.mass() - 1.0).abs() < 1e-6);
    assert!(matches!(m.sample_density(8), Err(Error::Domain(_))));
}

#[test]
fn profile_moments_and_cdf() {
    let m = model((3, 2), (1, 2));
    let prof = m.sample_density(200).unwrap();
    for n in 0..4 {
        let want = raney_exact(m.params(), n).to_f64();
        assert!((prof.moment(n) - want).abs() < 1e-5 * want.max(1.0), "n={n}");
        let via_rule = prof.integrate_against(|x| x.powi(n as i32), None);
        assert!((via_rule - want).abs() < 1e-4 * want.max(1.0), "n={n}: {via_rule}");
    }
    let cdf = m.sample_density(200).unwrap().cdf();
    assert!((cdf.eval(m.support_edge()) - 1.0).abs() < 1e-12);
    let mp_prof = model((2, 1), (1, 1)).sample_density(200).unwrap();
    let cdf = mp_prof.cdf();
    // F(2) for MP = 1/2 + 1/π·(asin(0) ...) computed by quadrature oracle
    let want = crate::quad::integrate(mp, 0.0, 2.0, 1e-12, (-0.5, 0.0)).unwrap().value;
    assert!((cdf.eval(2.0) - want).abs() < 1e-6);
}

#[test]
fn unit_scaling_keeps_mass() {
    let prof = model((3, 1), (1, 1)).sample_density(120).unwrap();
    let unit = prof.scaled_to_unit();
    assert_eq!(unit.edge(), 1.0);
    assert!((unit.mass() - prof.mass()).abs() < 1e-12);
    assert!((unit.density(0.3) - prof.edge() * prof.density(0.3 * prof.edge())).abs() < 1e-9);
}

#[test]
fn jacobi_arcsine() {
    let j = JacobiCurveModel::new(1).unwrap();
    assert_relative_eq!(j.density(0.5).unwrap(), 2.0 / PI, epsilon = 1e-10);
    assert_relative_eq!(j.density(0.9).unwrap(), 1.0 / (PI * 0.09f64.sqrt()), epsilon = 1e-9);
    for k in 1..20 {
        let x = k as f64 / 20.0;
        let want = 1.0 / (PI * (x * (1.0 - x)).sqrt());
        assert!((j.density(x).unwrap() - want).abs() < 1e-8, "x={x}");
    }
    assert!(j.density(1.2).is_err());
}

#[test]
fn jacobi_normalization() {
    let j = JacobiCurveModel::new(2).unwrap();
    let prof = j.sample_density(200).unwrap();
    assert!((prof.mass() - 1.0).abs() < 1e-6, "{}", prof.mass());
    let e0 = prof.endpoint_exponent_at_zero();
    assert!((e0 + 2.0 / 3.0).abs() < 0.02, "{e0}");
    assert!((prof.endpoint_exponent_at_edge() + 0.5).abs() < 0.02);
}
