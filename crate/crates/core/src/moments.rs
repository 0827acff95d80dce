//! Interchangeable ways of computing integer moments of a Raney density.

use std::collections::BTreeMap;

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::exact::raney_exact;
use crate::params::RaneyParams;
use crate::quad::density_moment;
use crate::wienerhopf::{potential_coefficients, raney_moment_general, WHFactorization};

pub trait MomentSource: Send + Sync {
    fn name(&self) -> &'static str;

    fn moment(&self, params: &RaneyParams, n: u32) -> Result<f64>;

    /// Moments `0..=nmax`.
    fn moments(&self, params: &RaneyParams, nmax: u32) -> Result<Vec<f64>> {
        (0..=nmax).map(|n| self.moment(params, n)).collect()
    }
}

pub struct ExactMoments;

impl MomentSource for ExactMoments {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn moment(&self, params: &RaneyParams, n: u32) -> Result<f64> {
        Ok(raney_exact(params, n).to_f64())
    }
}

/// Closed forms through `K₊(in)`; needs `(p, r) = (θ/q + 1, m + 1/q)`.
pub struct WienerHopfMoments;

impl MomentSource for WienerHopfMoments {
    fn name(&self) -> &'static str {
        "wh"
    }

    fn moment(&self, params: &RaneyParams, n: u32) -> Result<f64> {
        let fam = params
            .family()
            .ok_or_else(|| Error::Domain(format!("{params} has no (theta, q, m) coordinates")))?;
        let theta = fam.theta.to_f64();
        if fam.m == 0 {
            WHFactorization::new(theta, fam.q)?.moment_wh(n)
        } else {
            raney_moment_general(&potential_coefficients(theta, fam.q, fam.m)?, n)
        }
    }

    fn moments(&self, params: &RaneyParams, nmax: u32) -> Result<Vec<f64>> {
        let fam = params
            .family()
            .ok_or_else(|| Error::Domain(format!("{params} has no (theta, q, m) coordinates")))?;
        let spec = potential_coefficients(fam.theta.to_f64(), fam.q, fam.m)?;
        (0..=nmax).map(|n| raney_moment_general(&spec, n)).collect()
    }
}

/// Adaptive quadrature of `xⁿ ρ(x)` against the curve density.
pub struct QuadratureMoments {
    pub tol: f64,
}

impl Default for QuadratureMoments {
    fn default() -> Self {
        Self { tol: 1e-11 }
    }
}

impl MomentSource for QuadratureMoments {
    fn name(&self) -> &'static str {
        "quad"
    }

    fn moment(&self, params: &RaneyParams, n: u32) -> Result<f64> {
        let model = CurveModel::new(params.clone())?;
        density_moment(&model, n, self.tol * params.support_edge().value().powi(n as i32))
    }

    fn moments(&self, params: &RaneyParams, nmax: u32) -> Result<Vec<f64>> {
        let model = CurveModel::new(params.clone())?;
        let edge = params.support_edge().value();
        (0..=nmax).map(|n| density_moment(&model, n, self.tol * edge.powi(n as i32))).collect()
    }
}

pub struct MomentRegistry {
    sources: BTreeMap<&'static str, Box<dyn MomentSource>>,
}

impl MomentRegistry {
    pub fn empty() -> Self {
        Self { sources: BTreeMap::new() }
    }

    pub fn register(&mut self, source: Box<dyn MomentSource>) {
        self.sources.insert(source.name(), source);
    }

    pub fn get(&self, name: &str) -> Result<&dyn MomentSource> {
        self.sources.get(name).map(|s| s.as_ref()).ok_or_else(|| Error::UnknownStrategy {
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.sources.keys().copied().collect()
    }
}

impl Default for MomentRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(ExactMoments));
        reg.register(Box::new(WienerHopfMoments));
        reg.register(Box::new(QuadratureMoments::default()));
        reg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{make_params, Rational};

    fn params(p: (i64, i64), r: (i64, i64)) -> RaneyParams {
        make_params(Rational::new(p.0, p.1).unwrap(), Rational::new(r.0, r.1).unwrap()).unwrap()
    }

    #[test]
    fn names_and_unknown() {
        let reg = MomentRegistry::default();
        assert_eq!(reg.names(), vec!["exact", "quad", "wh"]);
        assert!(matches!(reg.get("series"), Err(Error::UnknownStrategy { .. })));
    }

    #[test]
    fn catalan_exact() {
        let m = MomentRegistry::default().get("exact").unwrap().moments(&params((2, 1), (1, 1)), 5).unwrap();
        assert_eq!(m, vec![1.0, 1.0, 2.0, 5.0, 14.0, 42.0]);
    }

    #[test]
    fn sources_agree() {
        let reg = MomentRegistry::default();
        let exact = reg.get("exact").unwrap();
        for (p, r) in [((3, 1), (1, 1)), ((2, 1), (3, 2)), ((3, 2), (1, 2)), ((3, 1), (2, 1))] {
            let pr = params(p, r);
            let want = exact.moments(&pr, 4).unwrap();
            for name in ["wh", "quad"] {
                let src = reg.get(name).unwrap();
                let got = src.moments(&pr, 4).unwrap();
                for (n, (g, w)) in got.iter().zip(&want).enumerate() {
                    assert!((g - w).abs() <= 1e-8 * w, "{name} {p:?} {r:?} n={n}: {g} vs {w}");
                    assert!((src.moment(&pr, n as u32).unwrap() - g).abs() <= 1e-12 * w);
                }
            }
        }
    }

    #[test]
    fn wh_needs_family() {
        // r = 2/3 is not of the form m + 1/q
        let pr = params((2, 1), (2, 3));
        assert!(pr.family().is_none());
        assert!(matches!(WienerHopfMoments.moment(&pr, 1), Err(Error::Domain(_))));
    }
}
