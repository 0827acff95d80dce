//! Algebraic equations for the Green's function, branch tracking and
//! Stieltjes inversion.

mod continuation;
mod profile;
pub mod roots;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::{JacobiParams, RaneyParams};

pub use continuation::{track, Path};
pub use profile::{DensityProfile, ProfileSource};

/// A polynomial equation in `v` whose coefficients depend on `z`, with a
/// distinguished root that behaves like `zG(z) -> 1` at infinity.
pub trait AlgebraicCurve: Sync {
    /// Coefficients in ascending powers of `v`; must be affine in `z`.
    fn coefficients(&self, z: Complex64) -> Vec<Complex64>;
    /// Map a root `v` to `w = zG(z)`.
    fn to_w(&self, v: Complex64) -> Complex64;
    /// Root value the physical branch approaches at the reference point.
    fn reference_value(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    /// Right end of the density support.
    fn support_edge(&self) -> f64;
    /// Consistency check on a full root set (debug builds only).
    fn check_roots(&self, _z: Complex64, _roots: &[Complex64]) {}

    fn roots_at(&self, z: Complex64) -> Result<Vec<Complex64>> {
        let r = roots::roots(&self.coefficients(z))?;
        if cfg!(debug_assertions) {
            self.check_roots(z, &r);
        }
        Ok(r)
    }
}

/// Things that can report a density on `(0, edge)`.
pub trait DensitySource: Sync {
    fn density_at(&self, x: f64) -> Result<f64>;
    fn edge(&self) -> f64;
    /// Exponent `j` of the clustering map `x = edge * sin^(2j)(φ/2)`.
    fn grid_power(&self) -> f64;
}

/// `v^A - z v^B + z = 0` with `w = v^d`.
#[derive(Debug, Clone)]
pub struct CurveModel {
    params: RaneyParams,
    a: u32,
    b: u32,
    d: u32,
    edge: f64,
}

impl CurveModel {
    pub fn new(params: RaneyParams) -> Result<Self> {
        let p = params.p().as_big().clone();
        let r = params.r().as_big().clone();
        let pr = &p / &r;
        let ir = r.recip();
        let d = pr.denom().lcm(ir.denom());
        let a = (pr * num_rational::BigRational::from_integer(d.clone())).to_integer();
        let b = (ir * num_rational::BigRational::from_integer(d.clone())).to_integer();
        let conv = |x: &num_bigint::BigInt, what: &str| {
            x.to_u32()
                .filter(|&v| v <= 400)
                .ok_or_else(|| Error::InvalidParams(format!("{what} exponent {x} too large for the curve solver")))
        };
        let (a, b, d) = (conv(&a, "A")?, conv(&b, "B")?, conv(&d, "d")?);
        debug_assert!(!d.is_zero() && a > b && b >= 1);
        let edge = params.support_edge().value();
        Ok(Self { params, a, b, d, edge })
    }

    pub fn params(&self) -> &RaneyParams {
        &self.params
    }

    /// `(A, B, d)`.
    pub fn exponents(&self) -> (u32, u32, u32) {
        (self.a, self.b, self.d)
    }

    /// Physical `w = zG(z)`.
    pub fn physical_root(&self, z: Complex64) -> Result<Complex64> {
        physical_root(self, z)
    }

    /// `ρ(x) = -Im G(x + i0) / π`.
    pub fn density(&self, x: f64) -> Result<f64> {
        stieltjes_density(self, x)
    }

    pub fn sample_density(&self, npoints: usize) -> Result<DensityProfile> {
        DensityProfile::sample(self, npoints, ProfileSource::Raney(self.params.clone()))
    }
}

impl AlgebraicCurve for CurveModel {
    fn coefficients(&self, z: Complex64) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); self.a as usize + 1];
        c[0] = z;
        c[self.b as usize] -= z;
        c[self.a as usize] += 1.0;
        c
    }

    fn to_w(&self, v: Complex64) -> Complex64 {
        v.powu(self.d)
    }

    fn support_edge(&self) -> f64 {
        self.edge
    }

    fn check_roots(&self, z: Complex64, roots: &[Complex64]) {
        if self.a - self.b >= 2 {
            let sum: Complex64 = roots.iter().sum();
            let scale: f64 = roots.iter().map(|r| r.norm()).sum::<f64>().max(1e-300);
            debug_assert!(sum.norm() <= 1e-8 * scale, "Vieta sum {sum} at z = {z}");
        }
    }
}

impl DensitySource for CurveModel {
    fn density_at(&self, x: f64) -> Result<f64> {
        self.density(x)
    }
    fn edge(&self) -> f64 {
        self.edge
    }
    fn grid_power(&self) -> f64 {
        self.a.min(16) as f64
    }
}

/// `z(w-1)(w+1/θ)^θ - w^(θ+1) = 0`, support edge 1.
#[derive(Debug, Clone)]
pub struct JacobiCurveModel {
    theta: u32,
}

impl JacobiCurveModel {
    pub fn new(theta: u32) -> Result<Self> {
        if theta == 0 {
            return Err(Error::InvalidParams("theta must be a positive integer".into()));
        }
        Ok(Self { theta })
    }

    /// Requires an integer θ and `q = 1`.
    pub fn from_params(jp: &JacobiParams) -> Result<Self> {
        let t = jp.theta();
        if jp.q() != 1 || !t.is_integer() {
            return Err(Error::InvalidParams(format!(
                "Jacobi curve needs integer theta and q = 1, got theta = {t}, q = {}",
                jp.q()
            )));
        }
        let theta = t
            .numer()
            .to_u32()
            .ok_or_else(|| Error::InvalidParams(format!("theta {t} out of range")))?;
        Self::new(theta)
    }

    pub fn theta(&self) -> u32 {
        self.theta
    }

    pub fn physical_root(&self, z: Complex64) -> Result<Complex64> {
        physical_root(self, z)
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::Domain(format!("Jacobi density needs 0 < x < 1, got {x}")));
        }
        stieltjes_density(self, x)
    }

    pub fn sample_density(&self, npoints: usize) -> Result<DensityProfile> {
        DensityProfile::sample(self, npoints, ProfileSource::Jacobi(self.theta))
    }
}

impl AlgebraicCurve for JacobiCurveModel {
    fn coefficients(&self, z: Complex64) -> Vec<Complex64> {
        let t = self.theta as usize;
        let inv = 1.0 / self.theta as f64;
        // (w + 1/θ)^θ
        let mut binom = vec![0.0; t + 1];
        let mut c = 1.0;
        for k in 0..=t {
            binom[k] = c * inv.powi((t - k) as i32);
            c = c * (t - k) as f64 / (k + 1) as f64;
        }
        let mut out = vec![Complex64::new(0.0, 0.0); t + 2];
        for (k, &bk) in binom.iter().enumerate() {
            out[k + 1] += z * bk;
            out[k] -= z * bk;
        }
        out[t + 1] -= 1.0;
        out
    }

    fn to_w(&self, v: Complex64) -> Complex64 {
        v
    }

    fn support_edge(&self) -> f64 {
        1.0
    }
}

impl DensitySource for JacobiCurveModel {
    fn density_at(&self, x: f64) -> Result<f64> {
        if x >= 1.0 {
            return Ok(0.0);
        }
        self.density(x)
    }
    fn edge(&self) -> f64 {
        1.0
    }
    fn grid_power(&self) -> f64 {
        (self.theta + 1).min(16) as f64
    }
}

/// Reference point `10 L` on the positive axis.
pub fn reference_point<C: AlgebraicCurve + ?Sized>(curve: &C) -> Complex64 {
    Complex64::new(10.0 * curve.support_edge(), 0.0)
}

/// Physical root at the reference point: the root nearest `reference_value`.
pub fn reference_root<C: AlgebraicCurve + ?Sized>(curve: &C) -> Result<(Complex64, Complex64)> {
    let z = reference_point(curve);
    let target = curve.reference_value();
    let roots = curve.roots_at(z)?;
    let v = roots
        .into_iter()
        .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
        .expect("nonempty root set");
    Ok((z, v))
}

/// Tracked physical root `v` at `z`, returned with `z`.
pub fn physical_v<C: AlgebraicCurve + ?Sized>(curve: &C, z: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 || !z.is_finite() {
        return Err(Error::Domain(format!("physical root needs finite z != 0, got {z}")));
    }
    let (z0, v0) = reference_root(curve)?;
    let path = Path::avoiding_cut(z0, z, curve.support_edge());
    track(curve, z0, v0, &path)
}

/// `w = zG(z)` on the branch with `w -> 1` as `z -> ∞`.
pub fn physical_root<C: AlgebraicCurve + ?Sized>(curve: &C, z: Complex64) -> Result<Complex64> {
    Ok(curve.to_w(physical_v(curve, z)?))
}

/// Relative Stieltjes offsets; Richardson extrapolation assumes halving.
pub const STIELTJES_OFFSETS: [f64; 3] = [1e-6, 5e-7, 2.5e-7];

fn stieltjes_density<C: AlgebraicCurve + ?Sized>(curve: &C, x: f64) -> Result<f64> {
    let edge = curve.support_edge();
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("density needs x > 0, got {x}")));
    }
    if x >= edge {
        return Ok(0.0);
    }
    let scale = edge.min(x).min(edge - x);
    let mut z = Complex64::new(x, STIELTJES_OFFSETS[0] * scale);
    let mut v = physical_v(curve, z)?;
    let mut rho = [0.0; 3];
    for (k, off) in STIELTJES_OFFSETS.iter().enumerate() {
        if k > 0 {
            let next = Complex64::new(x, off * scale);
            v = track(curve, z, v, &Path::straight(next))?;
            z = next;
        }
        let g = curve.to_w(v) / z;
        rho[k] = -g.im / std::f64::consts::PI;
    }
    let r1a = 2.0 * rho[1] - rho[0];
    let r1b = 2.0 * rho[2] - rho[1];
    Ok((4.0 * r1b - r1a) / 3.0)
}

#[cfg(test)]
mod tests;
