//! Wiener–Hopf kernel `K = K₊/K₋`, its gamma-function factors, and the
//! moment formulas that follow from them.

mod potential;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{support_edge_family, JacobiParams, SupportEdge};
use crate::quad;
use crate::specfun::log_gamma;

pub use potential::{potential_coefficients, PotentialSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WHFactorization {
    theta: f64,
    q: u32,
    c: f64,
    edge: SupportEdge,
}

impl WHFactorization {
    pub fn new(theta: f64, q: u32) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) || q == 0 {
            return Err(Error::InvalidParams(format!("need theta > 0 and q >= 1, got theta = {theta}, q = {q}")));
        }
        let t = theta / q as f64;
        let c = -((1.0 + t) * (1.0 + t).ln() - t * t.ln());
        let edge = SupportEdge(support_edge_family(theta, q));
        Ok(Self { theta, q, c, edge })
    }

    pub fn from_jacobi(jp: &JacobiParams) -> Result<Self> {
        Self::new(jp.theta().to_f64(), jp.q())
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// `c = -((1+t) log(1+t) - t log t)`, `t = θ/q`.
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn edge(&self) -> f64 {
        self.edge.value()
    }

    fn t(&self) -> f64 {
        self.theta / self.q as f64
    }

    fn shift(&self) -> f64 {
        (self.q as f64 - 1.0) / self.q as f64
    }

    /// `K(z) = -πi sinh(π(z(1+t) - iσ)) / (sinh(πz) sinh(π(zt - iσ)))`,
    /// `σ = (q-1)/q`.
    pub fn kernel(&self, z: Complex64) -> Result<Complex64> {
        let t = self.t();
        let s = self.shift();
        let num = (PI * (z * (1.0 + t) - I * s)).sinh();
        let den = (PI * z).sinh() * (PI * (z * t - I * s)).sinh();
        if den.norm() <= 1e-14 * num.norm().max(1.0) {
            return Err(Error::Pole(z));
        }
        Ok(-PI * I * num / den)
    }

    /// `log K₊(z)`.
    pub fn log_factor_plus(&self, z: Complex64) -> Result<Complex64> {
        let t = self.t();
        let iq = 1.0 / self.q as f64;
        Ok(log_gamma(1.0 - I * z)? + log_gamma(iq - I * z * t)? - log_gamma(iq - I * z * (1.0 + t))? + I * self.c * z)
    }

    /// `K₊(z) = Γ(1-iz) Γ(1/q - izt) / Γ(1/q - iz(1+t)) e^{icz}`.
    pub fn factor_plus(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.log_factor_plus(z)?.exp())
    }

    /// `log K₋(z)`.
    pub fn log_factor_minus(&self, z: Complex64) -> Result<Complex64> {
        let t = self.t();
        let s = self.shift();
        let inv = log_gamma(I * z)? + log_gamma(I * z * t + s)? - log_gamma(I * z * (1.0 + t) + s)? - I * self.c * z;
        Ok(-inv)
    }

    /// `K₋(z)`, from `1/K₋(z) = Γ(iz) Γ(izt + σ) / Γ(iz(1+t) + σ) e^{-icz}`.
    pub fn factor_minus(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.log_factor_minus(z)?.exp())
    }

    /// `K₊(z) / K₋(z)`.
    pub fn kernel_from_factors(&self, z: Complex64) -> Result<Complex64> {
        Ok((self.log_factor_plus(z)? - self.log_factor_minus(z)?).exp())
    }

    /// `A = -(L^{1/θ-1}/i) K₋(-i/θ)`.
    pub fn residue_a(&self) -> Result<Complex64> {
        let l = self.edge();
        let km = self.factor_minus(c(0.0, -1.0 / self.theta))?;
        Ok(-(l.powf(1.0 / self.theta - 1.0) / I) * km)
    }

    /// `Lⁿ / ((1 + θn) K₊(in))`, the `n`-th moment of the `(θ/q + 1, 1/q)`
    /// Raney density on `[0, L]`.
    pub fn moment_wh(&self, n: u32) -> Result<f64> {
        let nf = n as f64;
        let lk = self.log_factor_plus(c(0.0, nf))?;
        Ok((nf * self.edge().ln() - (1.0 + self.theta * nf).ln() - lk).exp().re)
    }

    /// Jacobi moment `1/K₊(in)`.
    pub fn jacobi_moment_wh(&self, n: u32) -> Result<f64> {
        Ok((-self.log_factor_plus(c(0.0, n as f64))?).exp().re)
    }

    /// Ratios of `K∓` to their large-`|z|` forms along a ray.
    ///
    /// `K₋(z) ~ z (2π)^{-1/2} κ √(i/z)` and `K₊(z) ~ z (2π)^{1/2} κ √(-i/z)`,
    /// with `κ = (t/(1+t))^{1/q - 1/2}`, which is `√(θ/(1+θ))` at `q = 1`.
    pub fn asymptotic_check(&self, ray_angle: f64, radii: &[f64]) -> Result<Vec<AsymptoticRatio>> {
        let t = self.t();
        let kappa = (t / (1.0 + t)).powf(1.0 / self.q as f64 - 0.5);
        radii
            .iter()
            .map(|&r| {
                let z = Complex64::from_polar(r, ray_angle);
                let minus = self.factor_minus(z)? / (z * kappa / (2.0 * PI).sqrt() * (I / z).sqrt());
                let plus = self.factor_plus(z)? / (z * kappa * (2.0 * PI).sqrt() * (-I / z).sqrt());
                Ok(AsymptoticRatio { radius: r, minus, plus })
            })
            .collect()
    }

    /// The two principal-value Fourier integrals whose sum is `K(z)`,
    /// evaluated by quadrature; `z` must lie in `-min(1, 1/θ) < Im z < 0`.
    pub fn fourier_kernel(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        let lo = -(1.0f64).min(1.0 / self.theta);
        if !(z.im > lo && z.im < 0.0) {
            return Err(Error::Domain(format!("Im z = {} outside the strip ({lo}, 0)", z.im)));
        }
        let qf = self.q as f64;
        let th = self.theta;
        let first = |t: f64| (I * t * z).exp() / (1.0 - t.exp());
        let second =
            |t: f64| qf / th * ((qf - 1.0) * t / th + I * t * z).exp() / (1.0 - (qf * t / th).exp());
        // symmetric pairing removes the simple pole at t = 0
        let pair = |t: f64| first(t) + first(-t) + second(t) + second(-t);
        let decay = (-z.im).min(z.im - lo);
        let upper = 40.0 / decay;
        let re = quad::integrate(|t| pair(t).re, 0.0, upper, tol, (0.0, 0.0))?;
        let im = quad::integrate(|t| pair(t).im, 0.0, upper, tol, (0.0, 0.0))?;
        Ok(c(re.value, im.value))
    }

    /// `|fourier_kernel(z) - kernel(z)|`.
    pub fn fourier_kernel_check(&self, z: Complex64) -> Result<f64> {
        Ok((self.fourier_kernel(z, 1e-10)? - self.kernel(z)?).norm())
    }

    /// Largest `|K - K₊/K₋| / max(|K|, 1)` over `points` seeded draws from
    /// `|Re z| < 3` in the lower half of the strip.
    pub fn factorization_check(&self, points: usize, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let depth = 0.5 * (1.0f64).min(1.0 / self.theta);
        let mut worst = 0.0f64;
        for _ in 0..points {
            let z = c(rng.gen_range(-3.0..3.0), -rng.gen_range(0.01..0.99) * depth);
            let k = self.kernel(z)?;
            worst = worst.max((k - self.kernel_from_factors(z)?).norm() / k.norm().max(1.0));
        }
        Ok(worst)
    }

    /// A point of the common strip `-min(1, 1/θ)/2 < Im z < 0` shifted to
    /// half the strip depth, for real part `x`.
    pub fn strip_point(&self, x: f64) -> Complex64 {
        c(x, -0.5 * (1.0f64).min(1.0 / self.theta))
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AsymptoticRatio {
    pub radius: f64,
    pub minus: Complex64,
    pub plus: Complex64,
}

/// `L^{n+1} ∫ρ xⁿ = L^{n+1} Q(in) / K₊(in)` for the `(θ/q + 1, m + 1/q)`
/// density on `[0, L]`.
pub fn raney_moment_general(spec: &PotentialSpec, n: u32) -> Result<f64> {
    let wh = spec.factorization();
    let z = c(0.0, n as f64);
    let lk = wh.log_factor_plus(z)?;
    let qv = spec.q_function(z);
    Ok(((n as f64 + 1.0) * wh.edge().ln() - lk).exp().re * qv.re)
}

/// `m_n = 1/K₊(in)`.
pub fn jacobi_moment_wh(jp: &JacobiParams, n: u32) -> Result<f64> {
    WHFactorization::from_jacobi(jp)?.jacobi_moment_wh(n)
}
