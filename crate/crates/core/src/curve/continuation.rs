//! Root tracking along polygonal paths in the `z` plane.

use num_complex::Complex64;

use super::roots::eval_with_derivative;
use super::AlgebraicCurve;
use crate::error::{Error, Result};

/// Waypoints visited in order after the starting point.
#[derive(Debug, Clone)]
pub struct Path(pub Vec<Complex64>);

impl Path {
    pub fn straight(target: Complex64) -> Self {
        Path(vec![target])
    }

    /// From `start` (on the positive axis beyond the cut) to `target`
    /// without touching `[0, edge]`: straight when `Re target > edge`,
    /// otherwise up (or down) to height `2 edge`, across, then vertically.
    pub fn avoiding_cut(start: Complex64, target: Complex64, edge: f64) -> Self {
        if target.re > edge {
            return Path(vec![target]);
        }
        let sigma = if target.im < 0.0 { -1.0 } else { 1.0 };
        let h = Complex64::new(0.0, sigma * 2.0 * edge);
        Path(vec![start + h, Complex64::new(target.re, 0.0) + h, target])
    }
}

const GAP_FACTOR: f64 = 10.0;
const SNAP: f64 = 1e-10;
const MIN_STEP: f64 = 1e-15;
const MAX_STEPS: usize = 100_000;

/// Follow root `v0` of `curve` at `z0` along `path`; returns the root at
/// the final waypoint.
///
/// A step is accepted when the nearest other root is at least ten times
/// farther away than the tracked root moved, and the root agrees with the
/// first-order prediction `v - P_z/P_v Δz` to within half the predicted
/// motion; otherwise the step is halved.
pub fn track<C: AlgebraicCurve + ?Sized>(
    curve: &C,
    z0: Complex64,
    v0: Complex64,
    path: &Path,
) -> Result<Complex64> {
    let mut z = z0;
    let mut v = v0;
    let mut steps = 0usize;
    for &target in &path.0 {
        let seg = (target - z).norm();
        if seg == 0.0 {
            continue;
        }
        let mut step = 0.25 * seg;
        loop {
            let remaining = (target - z).norm();
            if remaining <= SNAP * target.norm().max(1e-300) {
                let roots = curve.roots_at(target)?;
                v = nearest(&roots, v).1;
                z = target;
                break;
            }
            let h = step.min(remaining);
            let z_new = if h == remaining { target } else { z + (target - z) * (h / remaining) };
            let roots = curve.roots_at(z_new)?;
            let pred = predict(curve, z, v, z_new - z);
            let (idx, cand) = nearest(&roots, pred);
            let motion = (cand - v).norm();
            let miss = (cand - pred).norm();
            let gap = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != idx)
                .map(|(_, r)| (r - cand).norm())
                .fold(f64::INFINITY, f64::min);
            let tiny = 1e-12 * (1.0 + v.norm());
            if gap < GAP_FACTOR * motion || miss > 0.5 * (pred - v).norm() + tiny {
                step *= 0.5;
                if step < MIN_STEP * z.norm().max(target.norm()) {
                    return Err(Error::Continuation {
                        z,
                        reason: format!("root collision unresolved (gap {gap:e}, motion {motion:e})"),
                    });
                }
                continue;
            }
            z = z_new;
            v = cand;
            step *= 2.0;
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::Continuation { z, reason: "step budget exhausted".into() });
            }
            if z == target {
                break;
            }
        }
    }
    Ok(v)
}

fn predict<C: AlgebraicCurve + ?Sized>(curve: &C, z: Complex64, v: Complex64, dz: Complex64) -> Complex64 {
    let c0 = curve.coefficients(z);
    let c1 = curve.coefficients(z + 1.0);
    let dz_coeffs: Vec<Complex64> = c1.iter().zip(&c0).map(|(a, b)| a - b).collect();
    let (_, pv) = eval_with_derivative(&c0, v);
    let (pz, _) = eval_with_derivative(&dz_coeffs, v);
    if pv.norm() == 0.0 {
        return v;
    }
    let next = v - pz / pv * dz;
    if next.is_finite() {
        next
    } else {
        v
    }
}

fn nearest(roots: &[Complex64], v: Complex64) -> (usize, Complex64) {
    roots
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| (a.1 - v).norm().total_cmp(&(b.1 - v).norm()))
        .expect("nonempty root set")
}
