//! Complex gamma and log-gamma.
//!
//! Lanczos approximation (g = 7, nine coefficients) on `Re z >= 1/2`.
//! `gamma` uses the reflection formula on the left half-plane; `log_gamma`
//! shifts with `log Γ(z) = log Γ(z + n) - Σ log(z + k)` there instead, which
//! keeps it on the principal branch (continuous off the negative real axis).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `0.5 * ln(2π)`
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Largest `Re log Γ` accepted before `gamma` reports overflow.
pub const MAX_LOG_MAGNITUDE: f64 = 700.0;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn lanczos_log_gamma(z: Complex64) -> Complex64 {
    debug_assert!(z.re >= 0.5);
    let zm1 = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (zm1 + k as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (zm1 + 0.5) * t.ln() - t + series.ln()
}

/// Principal branch of `log Γ(z)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.re >= 0.5 {
        return Ok(lanczos_log_gamma(z));
    }
    let shift = (0.5 - z.re).ceil();
    let mut acc = lanczos_log_gamma(z + shift);
    for k in 0..shift as usize {
        acc -= (z + k as f64).ln();
    }
    Ok(acc)
}

/// `Γ(z)`; errors at poles and when `|Γ(z)|` would exceed `e^700`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    if z.re >= 0.5 {
        let lg = lanczos_log_gamma(z);
        if lg.re > MAX_LOG_MAGNITUDE {
            return Err(Error::Overflow(lg.re));
        }
        return Ok(lg.exp());
    }
    // Γ(z) Γ(1 - z) = π / sin(πz)
    let sin = (z * PI).sin();
    let lg = lanczos_log_gamma(1.0 - z);
    let log_mag = PI.ln() - sin.norm().ln() - lg.re;
    if log_mag > MAX_LOG_MAGNITUDE {
        return Err(Error::Overflow(log_mag));
    }
    Ok(PI / (sin * lg.exp()))
}

/// `1/Γ(z)`, zero at the poles.
pub fn recip_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((-log_gamma(z)?).exp())
}
