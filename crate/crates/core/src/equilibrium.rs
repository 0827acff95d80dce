//! Energy functionals and their integral equations, evaluated on sampled
//! densities.
//!
//! Profiles passed here live on `[0, 1]` with unit mass (see
//! `DensityProfile::scaled_to_unit`). The integral equations are written
//! for the density with mass `1/L`, so residuals divide by `L`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curve::DensityProfile;
use crate::error::{Error, Result};
use crate::wienerhopf::PotentialSpec;

/// `k(y, y') = log|y - y'| + Re Σ_p ω^p Log(y^{1/θ} - ω^p y'^{1/θ})`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairKernel {
    pub theta: f64,
    pub q: u32,
}

impl PairKernel {
    pub fn new(theta: f64, q: u32) -> Result<Self> {
        if !(theta > 0.0) || q == 0 {
            return Err(Error::InvalidParams(format!("need theta > 0 and q >= 1, got {theta}, {q}")));
        }
        Ok(Self { theta, q })
    }

    /// The root-of-unity sum `Σ_p ω^p Log(a - ω^p b)` before taking the real part.
    pub fn root_sum(&self, y: f64, yp: f64) -> Complex64 {
        let a = Complex64::new(y.powf(1.0 / self.theta), 0.0);
        let b = yp.powf(1.0 / self.theta);
        (0..self.q)
            .map(|p| {
                let w = Complex64::from_polar(1.0, 2.0 * PI * p as f64 / self.q as f64);
                w * (a - w * b).ln()
            })
            .sum()
    }

    pub fn eval(&self, y: f64, yp: f64) -> f64 {
        (y - yp).abs().ln() + self.root_sum(y, yp).re
    }
}

/// Residuals of an integral equation at a set of points.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub y: Vec<f64>,
    pub residuals: Vec<f64>,
    pub tolerance: f64,
}

impl ResidualReport {
    pub fn max_abs(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|r| r.abs() <= self.tolerance)
    }
}

/// `PV ∫ ρ(y') y/(y - y') dy' + (q/θ) PV ∫ (y'/y)^{(q-1)/θ} ρ(y') / (1 - (y'/y)^{q/θ}) dy'`
/// for the profile as given (unit mass).
///
/// The first term is `-y` times the Cauchy integral, computed as
/// `∫ (ρ(y') - ρ(y))/(y' - y) + ρ(y) log((b - y)/y)`. In the second,
/// `ρ(y) y/(y - y')` is subtracted and its principal value
/// `ρ(y) y log(y/(b - y))` added back.
fn two_kernel_lhs(profile: &DensityProfile, theta: f64, q: u32, y: f64) -> f64 {
    let b = profile.edge();
    let rho_y = profile.density(y);
    let cauchy = profile.integrate_flux(|x, g, jac| (g - rho_y * jac) / (x - y), Some(y))
        + rho_y * ((b - y) / y).ln();
    let first = -y * cauchy;
    let qt = q as f64 / theta;
    let shift = (q as f64 - 1.0) / theta;
    let second_regular = profile.integrate_flux(
        |x, g, jac| {
            // 1 - (x/y)^{q/θ} without cancellation next to x = y
            let ratio = x / y;
            let log_r = if ratio < 0.5 { ratio.ln() } else { ((x - y) / y).ln_1p() };
            let pow = if shift == 0.0 { 1.0 } else { (shift * log_r).exp() };
            let k2 = qt * pow / -(qt * log_r).exp_m1();
            k2 * g - rho_y * y / (y - x) * jac
        },
        Some(y),
    );
    let second = second_regular + rho_y * y * (y / (b - y)).ln();
    first + second
}

fn check_interior(y: f64, edge: f64) -> Result<()> {
    if !(y > 0.0 && y < edge) {
        return Err(Error::Domain(format!("y = {y} must lie strictly inside (0, {edge})")));
    }
    Ok(())
}

/// Left minus right side of the equation whose solution is the
/// `(θ/q + 1, m + 1/q)` density, at `0 < y < 1`.
pub fn equilibrium_residual(profile: &DensityProfile, spec: &PotentialSpec, y: f64) -> Result<f64> {
    check_interior(y, 1.0)?;
    let lhs = two_kernel_lhs(profile, spec.theta, spec.q, y) / spec.edge();
    Ok(lhs - spec.equation_rhs(y))
}

/// Field-free residual: the two-kernel principal values divided by `y`,
/// which vanish for the Jacobi-type equilibrium density on `[0, 1]`.
pub fn jacobi_residual(profile: &DensityProfile, theta: f64, q: u32, y: f64) -> Result<f64> {
    check_interior(y, 1.0)?;
    Ok(two_kernel_lhs(profile, theta, q, y) / y)
}

pub fn residual_report(
    profile: &DensityProfile,
    spec: &PotentialSpec,
    ys: &[f64],
    tolerance: f64,
) -> Result<ResidualReport> {
    let residuals = ys
        .iter()
        .map(|&y| equilibrium_residual(profile, spec, y))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport { y: ys.to_vec(), residuals, tolerance })
}

/// `E = ∫ V ρ - ½ ∬ ρ ρ' k` on `[0, 1]`, with `V(y) = Σ c_l (L y)^{(1+lq)/θ}`
/// from `spec`, or no potential when `spec` is `None`.
pub fn energy(profile: &DensityProfile, kernel: &PairKernel, spec: Option<&PotentialSpec>) -> f64 {
    let potential = |y: f64| spec.map_or(0.0, |s| s.potential(s.edge() * y));
    let interaction = |y: f64| profile.integrate_against(|yp| kernel.eval(y, yp), Some(y));
    profile.integrate_against(|y| potential(y) - 0.5 * interaction(y), None)
}

/// Bump `(1 - ((y - c)/w)²)^4` on `|y - c| < w`.
fn bump(y: f64, c: f64, w: f64) -> f64 {
    let u = (y - c) / w;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - u * u).powi(4)
    }
}

/// Move mass `amplitude` from one random smooth bump to another.
///
/// Bump masses are measured with the profile's own mass rule, so the
/// total changes only by rounding. If the result would go negative
/// somewhere, the whole perturbation is scaled down (not clipped), which
/// keeps the mass balance exact.
pub fn perturb(profile: &DensityProfile, amplitude: f64, seed: u64) -> Result<DensityProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edge = profile.edge();
    let w = 0.1 * edge;
    let c1 = rng.gen_range(0.25..0.75) * edge;
    let c2 = rng.gen_range(0.25..0.75) * edge;
    let grid = profile.grid();
    let b1: Vec<f64> = grid.iter().map(|&x| bump(x, c1, w)).collect();
    let b2: Vec<f64> = grid.iter().map(|&x| bump(x, c2, w)).collect();
    let m1 = profile.with_values(b1.clone()).mass();
    let m2 = profile.with_values(b2.clone()).mass();
    if !(m1 > 0.0 && m2 > 0.0) {
        return Err(Error::Domain("perturbation bump falls between grid points".into()));
    }
    let delta: Vec<f64> = b1.iter().zip(&b2).map(|(a, b)| a / m1 - b / m2).collect();
    let mut scale = amplitude;
    for (&r, &d) in profile.values().iter().zip(&delta) {
        if d < 0.0 && r + scale * d < 0.0 {
            scale = scale.min(r / -d);
        }
    }
    let values = profile.values().iter().zip(&delta).map(|(r, d)| r + scale * d).collect();
    Ok(profile.with_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{CurveModel, JacobiCurveModel, ProfileSource};
    use crate::params::{make_params, Rational};
    use crate::wienerhopf::potential_coefficients;

    fn mp_unit(stretch: f64, n: usize) -> DensityProfile {
        // MP on [0, 4] rescaled to [0, 1], optionally stretched
        let f = move |y: f64| {
            let u = y / stretch;
            4.0 * ((1.0 - u) / u).sqrt() / (2.0 * PI) / stretch
        };
        DensityProfile::from_fn(f, stretch, 2.0, n, ProfileSource::Custom("mp".into())).unwrap()
    }

    fn raney_unit(p: (i64, i64), r: (i64, i64), n: usize) -> DensityProfile {
        let params = make_params(Rational::new(p.0, p.1).unwrap(), Rational::new(r.0, r.1).unwrap()).unwrap();
        CurveModel::new(params).unwrap().sample_density(n).unwrap().scaled_to_unit()
    }

    #[test]
    fn kernel_special_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for theta in [1.0, 2.0, 0.7] {
            let k1 = PairKernel::new(theta, 1).unwrap();
            let k2 = PairKernel::new(theta, 2).unwrap();
            for _ in 0..100 {
                let (y, yp): (f64, f64) = (rng.gen_range(0.01..1.0), rng.gen_range(0.01..1.0));
                let (a, b) = (y.powf(1.0 / theta), yp.powf(1.0 / theta));
                let want1 = ((a - b).abs() * (y - yp).abs()).ln();
                assert!((k1.eval(y, yp) - want1).abs() < 1e-12);
                let want2 = ((a - b).abs() / (a + b) * (y - yp).abs()).ln();
                assert!((k2.eval(y, yp) - want2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_symmetry_and_realness() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for q in 1..=4u32 {
            let k = PairKernel::new(1.5, q).unwrap();
            for _ in 0..50 {
                let (y, yp): (f64, f64) = (rng.gen_range(0.01..1.0), rng.gen_range(0.01..1.0));
                if q <= 2 {
                    assert!((k.eval(y, yp) - k.eval(yp, y)).abs() < 1e-12);
                }
                // conjugate pairs p and q - p cancel in the imaginary part
                let a = Complex64::new(y.powf(1.0 / 1.5), 0.0);
                let b = yp.powf(1.0 / 1.5);
                let im: f64 = (1..q)
                    .map(|p| {
                        let w = Complex64::from_polar(1.0, 2.0 * PI * p as f64 / q as f64);
                        (w * (a - w * b).ln()).im
                    })
                    .sum();
                assert!(im.abs() < 1e-12, "q={q}");
            }
        }
    }

    #[test]
    fn mp_residuals() {
        let spec = potential_coefficients(1.0, 1, 0).unwrap();
        let prof = mp_unit(1.0, 200);
        let r = equilibrium_residual(&prof, &spec, 0.5).unwrap();
        assert!(r.abs() < 1e-3, "{r}");
        let wrong = mp_unit(1.05, 200);
        let rw = equilibrium_residual(&wrong, &spec, 0.5).unwrap();
        assert!(rw.abs() > 10.0 * r.abs(), "{r} vs {rw}");
        assert!(equilibrium_residual(&prof, &spec, 1.5).is_err());
    }

    #[test]
    fn curve_density_residuals() {
        let spec = potential_coefficients(2.0, 1, 0).unwrap();
        let prof = raney_unit((3, 1), (1, 1), 200);
        for y in [0.25, 0.5, 0.75] {
            let r = equilibrium_residual(&prof, &spec, y).unwrap();
            assert!(r.abs() < 1e-3, "y={y}: {r}");
        }
        let spec = potential_coefficients(1.0, 2, 0).unwrap();
        let prof = raney_unit((3, 2), (1, 2), 200);
        let r = equilibrium_residual(&prof, &spec, 0.5).unwrap();
        assert!(r.abs() < 1e-3, "{r}");
        let spec = potential_coefficients(1.0, 1, 1).unwrap();
        let prof = raney_unit((2, 1), (2, 1), 200);
        for y in [0.25, 0.5, 0.75] {
            let r = equilibrium_residual(&prof, &spec, y).unwrap();
            assert!(r.abs() < 1e-3, "m=1 y={y}: {r}");
        }
    }

    #[test]
    fn arcsine_residuals() {
        let arcsine = |x: f64| 1.0 / (PI * (x * (1.0 - x)).sqrt());
        let closed = DensityProfile::from_fn(arcsine, 1.0, 1.0, 200, ProfileSource::Custom("arcsine".into())).unwrap();
        assert!((closed.mass() - 1.0).abs() < 1e-12);
        assert!(jacobi_residual(&closed, 1.0, 1, 0.5).unwrap().abs() < 1e-6);
        assert!(jacobi_residual(&closed, 1.0, 1, 0.3).unwrap().abs() < 1e-6);
        let prof = JacobiCurveModel::new(1).unwrap().sample_density(200).unwrap();
        assert!(jacobi_residual(&prof, 1.0, 1, 0.3).unwrap().abs() < 1e-3);
        let prof2 = JacobiCurveModel::new(2).unwrap().sample_density(200).unwrap();
        let r = jacobi_residual(&prof2, 2.0, 1, 0.6).unwrap();
        assert!(r.abs() < 1e-2, "{r}");
    }

    #[test]
    fn perturbation_properties() {
        let prof = mp_unit(1.0, 120);
        let same = perturb(&prof, 0.0, 1).unwrap();
        assert_eq!(same.values(), prof.values());
        for seed in 0..5 {
            let p = perturb(&prof, 0.05, seed).unwrap();
            assert!((p.mass() - prof.mass()).abs() < 1e-12);
            assert!(p.values().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn mp_is_energy_minimal() {
        let prof = mp_unit(1.0, 120);
        let spec = potential_coefficients(1.0, 1, 0).unwrap();
        let k = PairKernel::new(1.0, 1).unwrap();
        let e0 = energy(&prof, &k, Some(&spec));
        for seed in 0..3 {
            let e = energy(&perturb(&prof, 0.05, seed).unwrap(), &k, Some(&spec));
            assert!(e - e0 > 0.0, "seed {seed}: {e} vs {e0}");
        }
    }
}
