//! Parameter records for the Raney family.
//!
//! A Raney pair `(p, r)` with `p > 1` and `0 < r <= p` is stored as exact
//! rationals. When `r = m + 1/q` for integers `m >= 0`, `q >= 1` the record
//! also carries the family coordinates `(theta, q, m)` with
//! `theta = q (p - 1)`, which is how the Wiener-Hopf formulas are indexed.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidParams("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(value: BigRational) -> Self {
        Rational(value)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Always `num/den`, also for integers.
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_fraction_string())
    }
}

impl std::str::FromStr for Rational {
    type Err = Error;

    /// Accepts `a`, `a/b` and finite decimals such as `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParams(format!("cannot parse '{s}' as a rational"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Rational(BigRational::new(n, d)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            return Ok(Rational(BigRational::new(digits, scale)));
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational(BigRational::from_integer(n)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_fraction_string())
    }
}

/// `(theta, q, m)` with `p = theta/q + 1` and `r = m + 1/q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyCoords {
    pub theta: Rational,
    pub q: u32,
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RaneyParams {
    p: Rational,
    r: Rational,
    family: Option<FamilyCoords>,
}

impl RaneyParams {
    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn family(&self) -> Option<&FamilyCoords> {
        self.family.as_ref()
    }

    pub fn p_f64(&self) -> f64 {
        self.p.to_f64()
    }

    pub fn r_f64(&self) -> f64 {
        self.r.to_f64()
    }

    /// Builds `(theta/q + 1, m + 1/q)`.
    pub fn from_family(theta: Rational, q: u32, m: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParams("q must be a positive integer".into()));
        }
        if !theta.as_big().is_positive() {
            return Err(Error::InvalidParams("theta must be positive".into()));
        }
        let qb = BigRational::from_integer(q.into());
        let p = theta.as_big() / &qb + BigRational::one();
        let r = BigRational::from_integer(m.into()) + qb.recip();
        make_params(Rational(p), Rational(r))
    }

    pub fn support_edge(&self) -> SupportEdge {
        support_edge(self)
    }
}

impl fmt::Display for RaneyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, r={})", self.p, self.r)
    }
}

/// Validates `(p, r)` and derives the family coordinates when they exist.
pub fn make_params(p: Rational, r: Rational) -> Result<RaneyParams> {
    let one = BigRational::one();
    if p.as_big() <= &one {
        return Err(Error::InvalidParams(format!("p must exceed 1, got {p}")));
    }
    if !r.as_big().is_positive() {
        return Err(Error::InvalidParams(format!("r must be positive, got {r}")));
    }
    if r.as_big() > p.as_big() {
        return Err(Error::InvalidParams(format!("r must not exceed p, got r={r} > p={p}")));
    }
    let family = family_coords(&p, &r);
    Ok(RaneyParams { p, r, family })
}

fn family_coords(p: &Rational, r: &Rational) -> Option<FamilyCoords> {
    let r = r.as_big();
    let floor = r.floor();
    let frac = r - &floor;
    let (q, m) = if frac.is_zero() {
        // r = (r - 1) + 1/1
        (BigInt::one(), floor.to_integer() - BigInt::one())
    } else if frac.numer().is_one() {
        (frac.denom().clone(), floor.to_integer())
    } else {
        return None;
    };
    let q32 = q.to_u32()?;
    let m32 = m.to_u32()?;
    let theta = (p.as_big() - BigRational::one()) * BigRational::from_integer(q);
    Some(FamilyCoords {
        theta: Rational(theta),
        q: q32,
        m: m32,
    })
}

/// Parameters of the Jacobi-type binomial-moment family:
/// `(p, r) = (theta/q + 1, 1/q - 1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiParams {
    theta: Rational,
    q: u32,
}

impl JacobiParams {
    pub fn new(theta: Rational, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParams("q must be a positive integer".into()));
        }
        if !theta.as_big().is_positive() {
            return Err(Error::InvalidParams("theta must be positive".into()));
        }
        Ok(JacobiParams { theta, q })
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn p(&self) -> Rational {
        let qb = BigRational::from_integer(self.q.into());
        Rational(self.theta.as_big() / qb + BigRational::one())
    }

    pub fn r(&self) -> Rational {
        let qb = BigRational::from_integer(self.q.into());
        Rational(qb.recip() - BigRational::one())
    }

    /// Growth constant `A = p^p (p-1)^{-(p-1)}` of the binomial moments.
    pub fn growth_constant(&self) -> f64 {
        edge_from_p(self.p().to_f64())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupportEdge(pub f64);

impl SupportEdge {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// `L = p^p (p-1)^{-(p-1)}`, the location of the square-root branch point of
/// the resolvent curve; independent of `r`.
pub fn support_edge(params: &RaneyParams) -> SupportEdge {
    SupportEdge(edge_from_p(params.p_f64()))
}

pub(crate) fn edge_from_p(p: f64) -> f64 {
    let t = p - 1.0;
    (p * p.ln() - t * t.ln()).exp()
}

/// `(t)(1 + 1/t)^{1+t}` with `t = theta/q`; the family form of the edge.
pub fn support_edge_family(theta: f64, q: u32) -> f64 {
    let t = theta / q as f64;
    t * (1.0 + 1.0 / t).powf(1.0 + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn fuss_catalan_pair() {
        let params = make_params(rat(2, 1), rat(1, 1)).unwrap();
        let fam = params.family().unwrap();
        assert_eq!(fam.theta, rat(1, 1));
        assert_eq!((fam.q, fam.m), (1, 0));
    }

    #[test]
    fn half_integer_pair() {
        let params = make_params(rat(3, 2), rat(1, 2)).unwrap();
        let fam = params.family().unwrap();
        assert_eq!(fam.theta, rat(1, 1));
        assert_eq!((fam.q, fam.m), (2, 0));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(make_params(rat(1, 1), rat(1, 1)), Err(Error::InvalidParams(_))));
        assert!(make_params(rat(1, 2), rat(1, 4)).is_err());
        assert!(make_params(rat(2, 1), rat(0, 1)).is_err());
        assert!(make_params(rat(2, 1), rat(-1, 3)).is_err());
        assert!(make_params(rat(2, 1), rat(5, 2)).is_err());
        assert!(make_params(rat(2, 1), rat(2, 1)).is_ok());
    }

    #[test]
    fn no_family_for_generic_r() {
        let params = make_params(rat(3, 1), rat(2, 3)).unwrap();
        assert!(params.family().is_none());
    }

    #[test]
    fn integer_r_maps_to_q_one() {
        let params = make_params(rat(3, 1), rat(2, 1)).unwrap();
        let fam = params.family().unwrap();
        assert_eq!((fam.q, fam.m), (1, 1));
        assert_eq!(fam.theta, rat(2, 1));
    }

    #[test]
    fn from_family_round_trip() {
        let params = RaneyParams::from_family(rat(2, 1), 2, 1).unwrap();
        assert_eq!(params.p(), &rat(2, 1));
        assert_eq!(params.r(), &rat(3, 2));
    }

    #[test]
    fn support_edges() {
        let l2 = support_edge(&make_params(rat(2, 1), rat(1, 1)).unwrap()).value();
        assert_relative_eq!(l2, 4.0, max_relative = 1e-15);
        let l3 = support_edge(&make_params(rat(3, 1), rat(1, 1)).unwrap()).value();
        assert_relative_eq!(l3, 6.75, max_relative = 1e-15);
        let l32 = support_edge(&make_params(rat(3, 2), rat(1, 2)).unwrap()).value();
        assert_relative_eq!(l32, 3.0 * 3f64.sqrt() / 2.0, max_relative = 1e-14);
        assert_relative_eq!(support_edge_family(1.0, 2), l32, max_relative = 1e-14);
    }

    /// Brute-force: the edge is where two roots of w^3 - z w + z collide.
    #[test]
    fn edge_is_root_collision_for_p3() {
        // discriminant of w^3 + a w + b is -4a^3 - 27 b^2 with a = -z, b = z
        let disc = |z: f64| 4.0 * z.powi(3) - 27.0 * z * z;
        let (mut lo, mut hi) = (1.0, 20.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if disc(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_relative_eq!(0.5 * (lo + hi), 6.75, max_relative = 1e-12);
    }

    #[test]
    fn parse_rationals() {
        assert_eq!("3/2".parse::<Rational>().unwrap(), rat(3, 2));
        assert_eq!("1.5".parse::<Rational>().unwrap(), rat(3, 2));
        assert_eq!("4".parse::<Rational>().unwrap(), rat(4, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert_eq!(rat(4, 2).to_fraction_string(), "2/1");
    }

    #[test]
    fn jacobi_params() {
        let jp = JacobiParams::new(rat(1, 1), 1).unwrap();
        assert_eq!(jp.p(), rat(2, 1));
        assert_eq!(jp.r(), rat(0, 1));
        assert_relative_eq!(jp.growth_constant(), 4.0, max_relative = 1e-15);
        assert!(JacobiParams::new(rat(0, 1), 1).is_err());
    }

    proptest::proptest! {
        #[test]
        fn edge_formulas_agree(num in 1i64..40, den in 1i64..12, q in 1u32..6) {
            let theta = num as f64 / den as f64;
            let p = theta / q as f64 + 1.0;
            let a = edge_from_p(p);
            let b = support_edge_family(theta, q);
            proptest::prop_assert!((a - b).abs() <= 1e-13 * a);
        }

        #[test]
        fn make_params_is_total(pn in -20i64..20, pd in 1i64..9, rn in -20i64..20, rd in 1i64..9) {
            let res = make_params(rat(pn, pd), rat(rn, rd));
            let p = pn as f64 / pd as f64;
            let r = rn as f64 / rd as f64;
            let valid = p > 1.0 && r > 0.0 && r <= p;
            proptest::prop_assert_eq!(res.is_ok(), valid);
            if let Ok(params) = res {
                if let Some(f) = params.family() {
                    let p_back = f.theta.to_f64() / f.q as f64 + 1.0;
                    let r_back = f.m as f64 + 1.0 / f.q as f64;
                    proptest::prop_assert!((p_back - p).abs() < 1e-12);
                    proptest::prop_assert!((r_back - r).abs() < 1e-12);
                }
            }
        }
    }
}
