//! Coefficients of the one-body potential `V(x) = Σ c_l x^{(1+lq)/θ}` that
//! produces the `(θ/q + 1, m + 1/q)` Raney density.

use num_complex::Complex64;
use serde::Serialize;

use super::WHFactorization;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct PotentialSpec {
    pub theta: f64,
    pub q: u32,
    pub m: u32,
    /// `c_{l,q}^{(m)}`, `l = 0..=m`.
    pub coefficients: Vec<f64>,
    /// `α_l`, `l = 0..=m`.
    pub alphas: Vec<f64>,
    /// Set when `m > (θ-1)/q + 1`; the formulas are still evaluated.
    pub warnings: Vec<String>,
    #[serde(skip)]
    wh: WHFactorization,
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Build the potential for `(θ, q, m)`.
pub fn potential_coefficients(theta: f64, q: u32, m: u32) -> Result<PotentialSpec> {
    let wh = WHFactorization::new(theta, q)?;
    let qf = q as f64;
    let mut warnings = Vec::new();
    if m as f64 > (theta - 1.0) / qf + 1.0 {
        warnings.push(format!(
            "m = {m} exceeds (theta - 1)/q + 1 = {}; moment agreement is not guaranteed",
            (theta - 1.0) / qf + 1.0
        ));
    }
    let mut coefficients = Vec::with_capacity(m as usize + 1);
    let mut alphas = Vec::with_capacity(m as usize + 1);
    let l_edge = wh.edge();
    for l in 0..=m {
        let s = (1.0 + l as f64 * qf) / theta;
        let lower = 1.0 + l as f64 - m as f64 + s;
        if lower <= 0.0 && lower == lower.round() {
            return Err(Error::Pole(Complex64::new(lower, 0.0)));
        }
        let sign = if (m - l) % 2 == 0 { 1.0 } else { -1.0 };
        // Γ(s)/Γ(s + d) with integer d = 1 + l - m, as one fraction so that
        // integer θ and q give correctly rounded values
        let a = 1.0 + l as f64 * qf;
        let d = 1 + l as i64 - m as i64;
        let (mut num, mut den) = (sign * (1.0 + m as f64 * qf), a * factorial(m - l));
        if d >= 0 {
            for k in 0..d {
                num *= theta;
                den *= a + k as f64 * theta;
            }
        } else {
            for k in 1..=-d {
                num *= a - k as f64 * theta;
                den *= theta;
            }
        }
        coefficients.push(num / den);
        // α_l: the residue form at z = -i(1+lq)/θ, where iθz/(qu+1) = (1+lq)/(1+qu)
        let mut num = 1.0;
        for u in 0..m {
            num *= 1.0 - (theta + qf) * s / (qf * u as f64 + 1.0);
        }
        let mut den = 1.0;
        for u in (0..=m).filter(|&u| u != l) {
            den *= 1.0 - (1.0 + qf * l as f64) / (1.0 + qf * u as f64);
        }
        alphas.push(num / den / l_edge);
    }
    Ok(PotentialSpec { theta, q, m, coefficients, alphas, warnings, wh })
}

impl PotentialSpec {
    pub fn factorization(&self) -> &WHFactorization {
        &self.wh
    }

    pub fn edge(&self) -> f64 {
        self.wh.edge()
    }

    fn exponent(&self, l: usize) -> f64 {
        (1.0 + l as f64 * self.q as f64) / self.theta
    }

    /// `V(x) = Σ c_l x^{(1+lq)/θ}` on the natural support `[0, L]`.
    pub fn potential(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(l, c)| c * x.powf(self.exponent(l)))
            .sum()
    }

    /// `x V'(x)` at `x = L y`, divided by `L`: the right-hand side of the
    /// integral equation on `[0, 1]`.
    pub fn equation_rhs(&self, y: f64) -> f64 {
        let l_edge = self.edge();
        self.coefficients
            .iter()
            .enumerate()
            .map(|(l, c)| self.exponent(l) * c * (l_edge * y).powf(self.exponent(l)))
            .sum::<f64>()
            / l_edge
    }

    /// `Q(z) = (1/L) Π_{u<m}(1 - i(θ+q)z/(qu+1)) / Π_{u≤m}(1 - iθz/(qu+1))`.
    pub fn q_function(&self, z: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        let qf = self.q as f64;
        let mut num = Complex64::new(1.0, 0.0);
        for u in 0..self.m {
            num *= 1.0 - i * (self.theta + qf) * z / (qf * u as f64 + 1.0);
        }
        let mut den = Complex64::new(1.0, 0.0);
        for u in 0..=self.m {
            den *= 1.0 - i * self.theta * z / (qf * u as f64 + 1.0);
        }
        num / den / self.edge()
    }

    /// `Σ α_l / (1 - iθz/(1+lq))`.
    pub fn partial_fractions(&self, z: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        self.alphas
            .iter()
            .enumerate()
            .map(|(l, a)| a / (1.0 - i * self.theta * z / (1.0 + l as f64 * self.q as f64)))
            .sum()
    }

    /// Poles of `Q`: `z = -i(1+lq)/θ`.
    pub fn pole_locations(&self) -> Vec<Complex64> {
        (0..=self.m as usize).map(|l| Complex64::new(0.0, -self.exponent(l))).collect()
    }

    /// `α_l` recomputed from `c_l L^{(1+lq)/θ}/L · K₋(-i(1+lq)/θ)`.
    pub fn alpha_from_kminus(&self, l: usize) -> Result<f64> {
        let s = self.exponent(l);
        let km = self.wh.factor_minus(Complex64::new(0.0, -s))?;
        Ok(self.coefficients[l] * self.edge().powf(s - 1.0) * km.re)
    }
}
