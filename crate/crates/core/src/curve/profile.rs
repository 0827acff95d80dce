//! Sampled densities on a grid clustered at both ends of the support.
//!
//! Nodes are `x_k = L sin^(2j)(φ_k/2)` with midpoint angles
//! `φ_k = π(k + 1/2)/n`. In the angle variable the flux
//! `g(φ) = ρ(x(φ)) x'(φ)` is bounded at both ends, so interpolation and
//! quadrature are done on `g`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::DensitySource;
use crate::error::{Error, Result};
use crate::params::RaneyParams;
use crate::quad::{gl8, snap_rational};

/// Where a profile came from.
#[derive(Debug, Clone, Serialize)]
pub enum ProfileSource {
    Raney(RaneyParams),
    Jacobi(u32),
    Custom(String),
}

#[derive(Debug, Clone)]
pub struct DensityProfile {
    source: ProfileSource,
    edge: f64,
    power: f64,
    phi: Vec<f64>,
    grid: Vec<f64>,
    values: Vec<f64>,
    flux: Vec<f64>,
    slopes: Vec<f64>,
    exponent_at_zero: f64,
    exponent_at_edge: f64,
    tail_zero: f64,
    tail_edge: f64,
}

/// Minimum number of grid points.
pub const MIN_POINTS: usize = 16;
const FIT_POINTS: usize = 8;

impl DensityProfile {
    pub fn sample(src: &(impl DensitySource + ?Sized), npoints: usize, source: ProfileSource) -> Result<Self> {
        if npoints < MIN_POINTS {
            return Err(Error::Domain(format!("need at least {MIN_POINTS} grid points, got {npoints}")));
        }
        let edge = src.edge();
        let power = src.grid_power();
        let phi = angles(npoints);
        let grid: Vec<f64> = phi.iter().map(|&f| x_of_phi(edge, power, f)).collect();
        let values = grid
            .par_iter()
            .map(|&x| src.density_at(x).map(|r| r.max(0.0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::build(source, edge, power, phi, grid, values))
    }

    /// Profile of a closed-form density.
    pub fn from_fn(
        f: impl Fn(f64) -> f64 + Sync,
        edge: f64,
        power: f64,
        npoints: usize,
        source: ProfileSource,
    ) -> Result<Self> {
        struct Closure<F>(F, f64, f64);
        impl<F: Fn(f64) -> f64 + Sync> DensitySource for Closure<F> {
            fn density_at(&self, x: f64) -> Result<f64> {
                Ok((self.0)(x))
            }
            fn edge(&self) -> f64 {
                self.1
            }
            fn grid_power(&self) -> f64 {
                self.2
            }
        }
        Self::sample(&Closure(f, edge, power), npoints, source)
    }

    fn build(source: ProfileSource, edge: f64, power: f64, phi: Vec<f64>, grid: Vec<f64>, values: Vec<f64>) -> Self {
        let flux: Vec<f64> = phi
            .iter()
            .zip(&values)
            .map(|(&f, &r)| r * dx_dphi(edge, power, f))
            .collect();
        let slopes = pchip_slopes(&phi, &flux);
        let n = grid.len();
        let exponent_at_zero = loglog_slope(&grid[..FIT_POINTS], &values[..FIT_POINTS]);
        let gaps: Vec<f64> = grid[n - FIT_POINTS..].iter().map(|x| edge - x).collect();
        let exponent_at_edge = loglog_slope(&gaps, &values[n - FIT_POINTS..]);
        let tail_zero = snap_rational(exponent_at_zero, 12, 3e-3);
        let tail_edge = snap_rational(exponent_at_edge, 12, 3e-3);
        Self {
            source,
            edge,
            power,
            phi,
            grid,
            values,
            flux,
            slopes,
            exponent_at_zero,
            exponent_at_edge,
            tail_zero,
            tail_edge,
        }
    }

    /// Same grid, new node values.
    pub fn with_values(&self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.grid.len());
        Self::build(self.source.clone(), self.edge, self.power, self.phi.clone(), self.grid.clone(), values)
    }

    pub fn source(&self) -> &ProfileSource {
        &self.source
    }
    pub fn edge(&self) -> f64 {
        self.edge
    }
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.grid.len()
    }
    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
    /// Least-squares log–log slope over the first grid points.
    pub fn endpoint_exponent_at_zero(&self) -> f64 {
        self.exponent_at_zero
    }
    /// Same at the upper edge, in the variable `L - x`.
    pub fn endpoint_exponent_at_edge(&self) -> f64 {
        self.exponent_at_edge
    }

    /// The same density on `[0, 1]`: `y ↦ L ρ(L y)`.
    pub fn scaled_to_unit(&self) -> Self {
        let l = self.edge;
        let grid = self.grid.iter().map(|x| x / l).collect();
        let values = self.values.iter().map(|r| r * l).collect();
        Self::build(self.source.clone(), 1.0, self.power, self.phi.clone(), grid, values)
    }

    pub fn phi_of_x(&self, x: f64) -> f64 {
        2.0 * (x / self.edge).powf(0.5 / self.power).min(1.0).asin()
    }

    pub fn x_of_phi(&self, phi: f64) -> f64 {
        x_of_phi(self.edge, self.power, phi)
    }

    /// Interpolated density; zero outside `(0, L)`.
    pub fn density(&self, x: f64) -> f64 {
        if !(x > 0.0 && x < self.edge) {
            return 0.0;
        }
        let n = self.grid.len();
        if x < self.grid[0] {
            return self.values[0] * (x / self.grid[0]).powf(self.tail_zero);
        }
        if x > self.grid[n - 1] {
            let e0 = self.edge - self.grid[n - 1];
            return self.values[n - 1] * ((self.edge - x) / e0).powf(self.tail_edge);
        }
        let phi = self.phi_of_x(x);
        self.flux_at(phi) / dx_dphi(self.edge, self.power, phi)
    }

    /// `g(φ) = ρ(x(φ)) x'(φ)`.
    pub fn flux_at(&self, phi: f64) -> f64 {
        let n = self.phi.len();
        if phi <= self.phi[0] || phi >= self.phi[n - 1] {
            let x = self.x_of_phi(phi);
            if !(x > 0.0 && x < self.edge) {
                return 0.0;
            }
            let rho = if phi <= self.phi[0] {
                self.values[0] * (x / self.grid[0]).powf(self.tail_zero)
            } else {
                let e0 = self.edge - self.grid[n - 1];
                self.values[n - 1] * ((self.edge - x) / e0).powf(self.tail_edge)
            };
            return rho * dx_dphi(self.edge, self.power, phi);
        }
        let k = match self.phi.binary_search_by(|p| p.total_cmp(&phi)) {
            Ok(k) => return self.flux[k],
            Err(k) => k - 1,
        };
        let h = self.phi[k + 1] - self.phi[k];
        let t = (phi - self.phi[k]) / h;
        let (y0, y1) = (self.flux[k], self.flux[k + 1]);
        let (d0, d1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1
    }

    /// Node rule for `∫ h(x) ρ(x) dx`. The flux of a curve density is odd
    /// in `φ` at 0 and even at `π`, so a smooth partition of unity
    /// `P(sin²(φ/2))` splits the work between Fejér's first rule in
    /// `t = cos φ` (left part) and the midpoint rule in `φ` (right part).
    /// When the flux is even at 0 as well (leading power `φ^e` with `e`
    /// even), the midpoint rule is used throughout.
    fn node_sum(&self, h: impl Fn(f64) -> f64) -> f64 {
        let n = self.phi.len();
        let mid = PI / n as f64;
        let lead = 2.0 * self.power * (self.tail_zero + 1.0) - 1.0;
        let even_at_zero = (lead.round() - lead).abs() < 0.05 && (lead.round() as i64) % 2 == 0;
        self.phi
            .iter()
            .zip(&self.flux)
            .zip(&self.grid)
            .map(|((&phi, &g), &x)| {
                let mut s = 0.0;
                for j in 1..=n / 2 {
                    let jf = j as f64;
                    s += (2.0 * jf * phi).cos() / (4.0 * jf * jf - 1.0);
                }
                let fejer = 2.0 / n as f64 * (1.0 - 2.0 * s);
                let part = if even_at_zero { 1.0 } else { blend((0.5 * phi).sin().powi(2)) };
                (fejer * (1.0 - part) / phi.sin() + mid * part) * h(x) * g
            })
            .sum()
    }

    /// `∫ ρ` from the node values.
    pub fn mass(&self) -> f64 {
        self.node_sum(|_| 1.0)
    }

    /// `∫ xⁿ ρ` from the node values.
    pub fn moment(&self, n: u32) -> f64 {
        self.node_sum(|x| x.powi(n as i32))
    }

    /// Interval breakpoints in φ: 0, the nodes, π.
    fn knots(&self) -> Vec<f64> {
        let mut k = Vec::with_capacity(self.phi.len() + 2);
        k.push(0.0);
        k.extend_from_slice(&self.phi);
        k.push(PI);
        k
    }

    /// `∫ h(x) ρ(x) dx` with eight-point Gauss rules between knots. When
    /// `h` has an integrable singularity at `singular`, the neighbouring
    /// intervals are refined geometrically toward it.
    pub fn integrate_against(&self, h: impl Fn(f64) -> f64, singular: Option<f64>) -> f64 {
        self.integrate_flux(|x, g, _| h(x) * g, singular)
    }

    /// `∫_0^π F(x(φ), g(φ), x'(φ)) dφ`, the general form behind
    /// `integrate_against`; lets callers subtract singular parts that are
    /// not proportional to `ρ`.
    pub fn integrate_flux(&self, f: impl Fn(f64, f64, f64) -> f64, singular: Option<f64>) -> f64 {
        let knots = self.knots();
        let rule = gl8();
        let panel = |a: f64, b: f64| -> f64 {
            let c = 0.5 * (a + b);
            let r = 0.5 * (b - a);
            let mut s = 0.0;
            for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                let phi = c + r * t;
                let x = self.x_of_phi(phi);
                if x > 0.0 && x < self.edge {
                    s += w * f(x, self.flux_at(phi), dx_dphi(self.edge, self.power, phi));
                }
            }
            s * r
        };
        let Some(xs) = singular else {
            return knots.windows(2).map(|w| panel(w[0], w[1])).sum();
        };
        let ps = self.phi_of_x(xs);
        knots
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let width = b - a;
                if ps > a && ps < b {
                    graded(&panel, a, ps, true) + graded(&panel, ps, b, false)
                } else if ps >= b && ps - b < 2.0 * width {
                    graded(&panel, a, b, true)
                } else if ps <= a && a - ps < 2.0 * width {
                    graded(&panel, a, b, false)
                } else {
                    panel(a, b)
                }
            })
            .sum()
    }

    /// Normalized cumulative distribution.
    pub fn cdf(&self) -> Cdf {
        let knots = self.knots();
        let rule = gl8();
        let panel = |a: f64, b: f64| -> f64 {
            let c = 0.5 * (a + b);
            let r = 0.5 * (b - a);
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(|(t, w)| w * self.flux_at(c + r * t))
                .sum::<f64>()
                * r
        };
        let mut cum = vec![0.0];
        for w in knots.windows(2) {
            let last = *cum.last().unwrap();
            cum.push(last + panel(w[0], w[1]));
        }
        Cdf { profile: self.clone(), knots, cum }
    }
}

/// Cumulative distribution of a profile, `F(L) = 1`.
#[derive(Debug, Clone)]
pub struct Cdf {
    profile: DensityProfile,
    knots: Vec<f64>,
    cum: Vec<f64>,
}

impl Cdf {
    pub fn eval(&self, x: f64) -> f64 {
        let p = &self.profile;
        if x <= 0.0 {
            return 0.0;
        }
        if x >= p.edge {
            return 1.0;
        }
        let phi = p.phi_of_x(x);
        let k = match self.knots.binary_search_by(|v| v.total_cmp(&phi)) {
            Ok(k) => return self.cum[k] / self.total(),
            Err(k) => k - 1,
        };
        let a = self.knots[k];
        let c = 0.5 * (a + phi);
        let r = 0.5 * (phi - a);
        let rule = gl8();
        let part: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(t, w)| w * p.flux_at(c + r * t))
            .sum::<f64>()
            * r;
        ((self.cum[k] + part) / self.total()).clamp(0.0, 1.0)
    }

    pub fn total(&self) -> f64 {
        *self.cum.last().unwrap()
    }
}

/// Geometric refinement of `[a, b]` toward `b` (`toward_end`) or toward `a`.
fn graded(panel: &impl Fn(f64, f64) -> f64, a: f64, b: f64, toward_end: bool) -> f64 {
    const LEVELS: usize = 40;
    const RATIO: f64 = 0.25;
    if b <= a {
        return 0.0;
    }
    let mut total = 0.0;
    let mut width = b - a;
    let mut outer = if toward_end { a } else { b };
    for _ in 0..LEVELS {
        let inner_width = width * RATIO;
        let inner = if toward_end { b - inner_width } else { a + inner_width };
        total += if toward_end { panel(outer, inner) } else { panel(inner, outer) };
        outer = inner;
        width = inner_width;
        if width < 1e-12 * (1.0 + b.abs()) {
            break;
        }
    }
    total
}

/// Degree-7 step: `P(0) = 0`, `P(1) = 1`, flat to third order at both ends.
fn blend(s: f64) -> f64 {
    let s4 = s.powi(4);
    s4 * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s)
}

fn angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| PI * (k as f64 + 0.5) / n as f64).collect()
}

fn x_of_phi(edge: f64, power: f64, phi: f64) -> f64 {
    edge * (0.5 * phi).sin().powf(2.0 * power)
}

fn dx_dphi(edge: f64, power: f64, phi: f64) -> f64 {
    let (s, c) = (0.5 * phi).sin_cos();
    edge * power * s.powf(2.0 * power - 1.0) * c
}

fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    let n = pts.len() as f64;
    if n < 2.0 {
        return 0.0;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Fritsch–Carlson monotone cubic slopes.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() {
            0.0
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}
