//! Exact rational Raney numbers and binomial moments.
//!
//! Everything here is computed with big rationals through the finite product
//! form of the generalized binomial coefficient, so these values serve as the
//! reference for all floating-point routes.

use std::collections::HashMap;
use std::sync::RwLock;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::params::{JacobiParams, RaneyParams, Rational};

/// Generalized binomial `C(top, k) = prod_{j=1..k} (top - k + j) / j`.
pub fn generalized_binomial(top: &BigRational, k: u32) -> BigRational {
    let kb = BigRational::from_integer(k.into());
    let mut acc = BigRational::one();
    for j in 1..=k {
        let jb = BigRational::from_integer(j.into());
        acc *= (top - &kb + &jb) / jb;
    }
    acc
}

/// `R_{p,r}(k) = r / (pk + r) * C(pk + r, k)`.
pub fn raney_exact(params: &RaneyParams, k: u32) -> Rational {
    let p = params.p().as_big();
    let r = params.r().as_big();
    let top = p * BigRational::from_integer(k.into()) + r;
    let value = r / &top * generalized_binomial(&top, k);
    Rational::from_big(value)
}

#[derive(Clone, Debug, Serialize)]
pub struct BinomialMoment {
    pub binomial: Rational,
    pub moment: f64,
}

/// `C(pn + r, n)` and `A^{-n} C(pn + r, n)` for the Jacobi family.
pub fn binomial_moment(jp: &JacobiParams, n: u32) -> BinomialMoment {
    let p = jp.p();
    let r = jp.r();
    let top = p.as_big() * BigRational::from_integer(n.into()) + r.as_big();
    let binomial = generalized_binomial(&top, n);
    let log_a = jp.growth_constant().ln();
    let moment = big_ratio_to_f64(&binomial) * (-(n as f64) * log_a).exp();
    BinomialMoment {
        binomial: Rational::from_big(binomial),
        moment,
    }
}

pub(crate) fn big_ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// The exact sequence `R_{p,r}(0..=kmax)`.
#[derive(Clone, Debug)]
pub struct RaneySequence {
    pub params: RaneyParams,
    pub values: Vec<Rational>,
}

impl RaneySequence {
    pub fn new(params: &RaneyParams, kmax: u32) -> Self {
        let values = (0..=kmax).map(|k| raney_exact(params, k)).collect();
        RaneySequence {
            params: params.clone(),
            values,
        }
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(Rational::to_f64).collect()
    }
}

/// Memoizes sequences by `(p, r)`; readers share the lock.
#[derive(Default)]
pub struct RaneyCache {
    inner: RwLock<HashMap<(Rational, Rational), Vec<Rational>>>,
}

impl RaneyCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, params: &RaneyParams, k: u32) -> Rational {
        let key = (params.p().clone(), params.r().clone());
        if let Some(v) = self
            .inner
            .read()
            .expect("cache lock poisoned")
            .get(&key)
            .and_then(|seq| seq.get(k as usize))
        {
            return v.clone();
        }
        let mut guard = self.inner.write().expect("cache lock poisoned");
        let seq = guard.entry(key).or_default();
        while seq.len() <= k as usize {
            let next = raney_exact(params, seq.len() as u32);
            seq.push(next);
        }
        seq[k as usize].clone()
    }
}
