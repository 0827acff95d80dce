//! Gauss–Legendre quadrature: adaptive panels with endpoint maps for
//! algebraic singularities, and principal-value integrals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::curve::DensitySource;
use crate::error::{Error, Result};

/// Outcome of a quadrature call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Default evaluation budget for `integrate`.
pub const DEFAULT_BUDGET: usize = 400_000;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub(crate) struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn cached(slot: &'static OnceLock<Rule>, n: usize) -> &'static Rule {
    slot.get_or_init(|| {
        let (nodes, weights) = gauss_legendre(n);
        Rule { nodes, weights }
    })
}

pub(crate) fn gl8() -> &'static Rule {
    static R: OnceLock<Rule> = OnceLock::new();
    cached(&R, 8)
}

fn gl10() -> &'static Rule {
    static R: OnceLock<Rule> = OnceLock::new();
    cached(&R, 10)
}

fn gl20() -> &'static Rule {
    static R: OnceLock<Rule> = OnceLock::new();
    cached(&R, 20)
}

/// Fixed-rule integral of `f` over [a, b].
pub(crate) fn fixed_rule<F: Fn(f64) -> f64>(rule: &Rule, f: &F, a: f64, b: f64) -> f64 {
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(x, w)| w * f(c + h * x))
        .sum::<f64>()
        * h
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn eval_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let hi = fixed_rule(gl20(), f, a, b);
    let lo = fixed_rule(gl10(), f, a, b);
    if !hi.is_finite() {
        return Err(Error::Domain(format!("integrand not finite on [{a}, {b}]")));
    }
    Ok(Panel { a, b, value: hi, error: (hi - lo).abs() })
}

/// Adaptive integral of a regular integrand over [a, b] (absolute tolerance).
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, budget: usize) -> Result<QuadResult> {
    adaptive_from(&f, &[a, b], tol, budget)
}

/// Adaptive integration seeded with the given breakpoints.
pub fn adaptive_from<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], tol: f64, budget: usize) -> Result<QuadResult> {
    const PER_PANEL: usize = 30;
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(eval_panel(f, w[0], w[1])?);
            evaluations += PER_PANEL;
        }
    }
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let floor = 64.0 * f64::EPSILON * heap.iter().map(|p| p.value.abs()).sum::<f64>();
        if error <= tol.max(floor) {
            return Ok(QuadResult { value, error_estimate: error, evaluations });
        }
        if evaluations + 2 * PER_PANEL > budget {
            return Err(Error::Quadrature { tol, estimate: error, evaluations });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further; accept this panel as is
            let mut frozen = worst;
            frozen.error = 0.0;
            heap.push(frozen);
            continue;
        }
        heap.push(eval_panel(f, worst.a, mid)?);
        heap.push(eval_panel(f, mid, worst.b)?);
        evaluations += 2 * PER_PANEL;
    }
}

fn map_exponent(gamma: f64) -> f64 {
    if gamma < 0.0 {
        1.0 / (1.0 + gamma)
    } else if gamma > 0.0 {
        2.0
    } else {
        1.0
    }
}

/// `∫_a^b f` where `f ~ (x-a)^γa` and `f ~ (b-x)^γb` at the ends (γ > -1).
///
/// Each half is mapped by `x = a + (m-a) u^β` so that the weight becomes
/// bounded, then integrated adaptively. Mapped nodes that round onto an
/// endpoint are dropped, so a strong singularity at a nonzero `b` loses
/// roughly `∫` over the last ulp; reflect such integrands to put it at 0.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    endpoint_exponents: (f64, f64),
) -> Result<QuadResult> {
    integrate_with_budget(f, a, b, tol, endpoint_exponents, DEFAULT_BUDGET)
}

pub fn integrate_with_budget<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    (ga, gb): (f64, f64),
    budget: usize,
) -> Result<QuadResult> {
    if !(a < b) {
        return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
    }
    if ga <= -1.0 || gb <= -1.0 {
        return Err(Error::Domain(format!("non-integrable endpoint exponents ({ga}, {gb})")));
    }
    let m = 0.5 * (a + b);
    let ha = m - a;
    let hb = b - m;
    let ba = map_exponent(ga);
    let bb = map_exponent(gb);
    let g = |t: f64| -> f64 {
        // t in [0, 2): [0,1] covers the left half, [1,2] the right half
        if t < 1.0 {
            let u = t;
            if u <= 0.0 {
                return 0.0;
            }
            let x = a + ha * u.powf(ba);
            if x <= a {
                return 0.0;
            }
            f(x) * ha * ba * u.powf(ba - 1.0)
        } else {
            let u = 2.0 - t;
            if u <= 0.0 {
                return 0.0;
            }
            let x = b - hb * u.powf(bb);
            if x >= b {
                return 0.0;
            }
            f(x) * hb * bb * u.powf(bb - 1.0)
        }
    };
    adaptive_from(&g, &[0.0, 0.5, 1.0, 1.5, 2.0], tol, budget)
}

/// Principal value `PV ∫_a^b f(y)/(y-s) dy` for regular `f`.
pub fn pv_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, s: f64, tol: f64) -> Result<QuadResult> {
    pv_integrate_with(f, a, b, s, tol, (0.0, 0.0))
}

/// Principal value with algebraic endpoint behaviour of `f` at `a` and `b`.
///
/// The window `[s-h, s+h]`, `h = min(s-a, b-s)`, is folded onto
/// `∫_0^h (f(s+u) - f(s-u))/u du`, which is regular at `u = 0`; the rest of
/// the interval is an ordinary integral.
pub fn pv_integrate_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    s: f64,
    tol: f64,
    (ga, gb): (f64, f64),
) -> Result<QuadResult> {
    if !(a < s && s < b) {
        return Err(Error::Domain(format!("PV point {s} not inside ({a}, {b})")));
    }
    let left_short = s - a <= b - s;
    let h = (s - a).min(b - s);
    let near_exp = if left_short { ga } else { gb };
    let folded = |u: f64| (f(s + u) - f(s - u)) / u;
    let core = integrate(folded, 0.0, h, 0.5 * tol, (0.0, near_exp))?;
    let tail = if left_short && s + h < b {
        Some(integrate(|y| f(y) / (y - s), s + h, b, 0.5 * tol, (0.0, gb))?)
    } else if !left_short && a < s - h {
        Some(integrate(|y| f(y) / (y - s), a, s - h, 0.5 * tol, (ga, 0.0))?)
    } else {
        None
    };
    let (tv, te, tn) = tail.map_or((0.0, 0.0, 0), |t| (t.value, t.error_estimate, t.evaluations));
    Ok(QuadResult {
        value: core.value + tv,
        error_estimate: core.error_estimate + te,
        evaluations: core.evaluations + tn,
    })
}

/// `∫_0^L xⁿ ρ(x) dx` for a density source (absolute tolerance `tol`).
///
/// Integrates in the clustering angle `x = L sin^(2j)(φ/2)`, which absorbs
/// the algebraic endpoint behaviour of the density at both ends.
pub fn density_moment(src: &(impl DensitySource + ?Sized), n: u32, tol: f64) -> Result<f64> {
    let edge = src.edge();
    let j = src.grid_power();
    let failure = std::sync::Mutex::new(None);
    let f = |phi: f64| -> f64 {
        let (s, c) = (0.5 * phi).sin_cos();
        let x = edge * s.powf(2.0 * j);
        if !(x > 0.0 && x < edge) {
            return 0.0;
        }
        let jac = edge * j * s.powf(2.0 * j - 1.0) * c;
        match src.density_at(x) {
            Ok(rho) => rho * x.powi(n as i32) * jac,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                0.0
            }
        }
    };
    let r = integrate(f, 0.0, PI, tol, (0.0, 0.0))?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(r.value)
}

/// Closest `n/d` with `d <= max_den` when within `snap` of `x`.
pub fn snap_rational(x: f64, max_den: u32, snap: f64) -> f64 {
    let mut best = x;
    let mut best_err = snap;
    for d in 1..=max_den {
        let n = (x * d as f64).round();
        let err = (x - n / d as f64).abs();
        if err < best_err {
            best_err = err;
            best = n / d as f64;
        }
    }
    best
}
