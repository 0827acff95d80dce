//! Polynomial roots from companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Horner evaluation of `Σ c[k] v^k` and its derivative.
pub fn eval_with_derivative(coeffs: &[Complex64], v: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * v + p;
        p = p * v + c;
    }
    (p, dp)
}

/// All roots of `Σ c[k] v^k` (ascending coefficients), Newton-polished.
///
/// The variable is rescaled by `(|c0|/|cn|)^(1/n)` before forming the
/// companion matrix so that root magnitudes are near one.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if lead.norm() == 0.0 || n == 0 {
        return Err(Error::Domain("degenerate polynomial".into()));
    }
    let c0 = coeffs[0].norm();
    let scale = if c0 > 0.0 { (c0 / lead.norm()).powf(1.0 / n as f64) } else { 1.0 };
    let scale = if scale.is_finite() && scale > 0.0 { scale } else { 1.0 };
    // monic coefficients in u = v / scale
    let mut b = Vec::with_capacity(n);
    let mut sk = 1.0;
    let sn = scale.powi(n as i32);
    for &c in &coeffs[..n] {
        b.push(c * sk / (lead * sn));
        sk *= scale;
    }
    let mut comp = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        comp[(0, j)] = -b[n - 1 - j];
    }
    for i in 1..n {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    let eig = comp
        .eigenvalues()
        .ok_or_else(|| Error::NoConvergence(n))?;
    let mut out: Vec<Complex64> = eig.iter().map(|u| u * scale).collect();
    for v in out.iter_mut() {
        polish(coeffs, v);
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoConvergence(n));
    }
    Ok(out)
}

/// Up to three Newton steps, each kept only if it lowers the residual.
fn polish(coeffs: &[Complex64], v: &mut Complex64) {
    let (mut p, mut dp) = eval_with_derivative(coeffs, *v);
    for _ in 0..3 {
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            return;
        }
        let cand = *v - p / dp;
        let (pc, dpc) = eval_with_derivative(coeffs, cand);
        if pc.norm() < p.norm() {
            *v = cand;
            p = pc;
            dp = dpc;
        } else {
            return;
        }
    }
}
