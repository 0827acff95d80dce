//! Squared singular values of products of complex Gaussian matrices.

pub mod eigen;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::exact::raney_exact;
use crate::params::{make_params, Rational};

pub use eigen::{CyclicJacobi, HermitianEigensolver, SolverRegistry, Tridiagonal};

/// Solver used when none is named.
pub const DEFAULT_SOLVER: &str = "jacobi";

/// Standard complex Gaussian with `E|z|^2 = 1` (Box–Muller).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    Complex64::from_polar((-u1.ln()).sqrt(), std::f64::consts::TAU * u2)
}

pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

fn check_shape(n: usize, m: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("matrix size N = {n} must be at least 2")));
    }
    if m < 1 {
        return Err(Error::InvalidParams("number of factors M must be at least 1".into()));
    }
    Ok(())
}

/// Random stream for one trial; streams of the same seed are independent.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One draw of `N` scaled squared singular values from the rng.
pub fn sample_product_with<R: Rng + ?Sized>(
    n: usize,
    m: u32,
    rng: &mut R,
    solver: &dyn HermitianEigensolver,
) -> Result<Vec<f64>> {
    check_shape(n, m)?;
    let mut product = ginibre(n, rng);
    for _ in 1..m {
        product = &product * ginibre(n, rng);
    }
    let w = &product * product.adjoint();
    let scale = (n as f64).powi(m as i32);
    Ok(solver.eigenvalues(&w)?.into_iter().map(|v| v / scale).collect())
}

/// Scaled squared singular values (ascending) of one product draw.
pub fn sample_product(n: usize, m: u32, seed: u64) -> Result<Vec<f64>> {
    let reg = SolverRegistry::default();
    sample_product_with(n, m, &mut trial_rng(seed, 0), reg.get(DEFAULT_SOLVER)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct MCRun {
    pub n: usize,
    pub m: u32,
    pub trials: usize,
    pub seed: u64,
    pub solver: String,
    pub scaled_values: Vec<f64>,
}

impl MCRun {
    pub fn new(n: usize, m: u32, trials: usize, seed: u64) -> Result<Self> {
        check_shape(n, m)?;
        Ok(Self { n, m, trials, seed, solver: DEFAULT_SOLVER.into(), scaled_values: Vec::new() })
    }

    pub fn with_solver(mut self, name: &str) -> Self {
        self.solver = name.to_string();
        self
    }

    /// Runs all trials in parallel; trial `t` draws from stream `t` of the seed.
    pub fn run(&mut self, registry: &SolverRegistry) -> Result<()> {
        let solver = registry.get(&self.solver)?;
        let (n, m, seed) = (self.n, self.m, self.seed);
        let per_trial: Vec<Vec<f64>> = (0..self.trials as u64)
            .into_par_iter()
            .map(|t| sample_product_with(n, m, &mut trial_rng(seed, t), solver))
            .collect::<Result<_>>()?;
        self.scaled_values = per_trial.concat();
        Ok(())
    }

    pub fn execute(n: usize, m: u32, trials: usize, seed: u64) -> Result<Self> {
        let mut run = Self::new(n, m, trials, seed)?;
        run.run(&SolverRegistry::default())?;
        Ok(run)
    }

    pub fn edge(&self) -> f64 {
        let m = self.m as f64;
        (m + 1.0).powf(m + 1.0) / m.powf(m)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentCheck {
    pub n: u32,
    pub exact: String,
    pub exact_f64: f64,
    pub empirical: f64,
    pub std_error: f64,
    pub rel_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
    pub density_est: f64,
    pub density_model: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub m: u32,
    pub trials: usize,
    pub seed: u64,
    pub samples: usize,
    pub edge: f64,
    pub moments: Vec<MomentCheck>,
    pub histogram: Vec<HistogramBin>,
    /// Samples beyond the edge, left out of the histogram.
    pub overflow: usize,
    pub ks_distance: f64,
}

/// Profile resolution used for the model CDF.
pub const MODEL_POINTS: usize = 400;

/// Moments, histogram and KS distance of the run against the Fuss–Catalan model.
pub fn compare_to_density(run: &MCRun, model: &CurveModel, nbins: usize, max_moment: u32) -> Result<ComparisonReport> {
    if run.scaled_values.is_empty() {
        return Err(Error::EmptyRun);
    }
    if nbins == 0 {
        return Err(Error::Domain("histogram needs at least one bin".into()));
    }
    let target = make_params(Rational::integer(run.m as i64 + 1), Rational::integer(1))?;
    if model.params() != &target {
        return Err(Error::Domain(format!(
            "model ({}, {}) does not describe products of M = {} factors",
            model.params().p().to_fraction_string(),
            model.params().r().to_fraction_string(),
            run.m
        )));
    }

    let mut values = run.scaled_values.clone();
    values.sort_by(f64::total_cmp);
    let count = values.len() as f64;

    let moments = (1..=max_moment)
        .map(|k| {
            let exact = raney_exact(&target, k);
            let exact_f64 = exact.to_f64();
            let (sum, sum_sq) = values.iter().fold((0.0, 0.0), |(s, s2), v| {
                let p = v.powi(k as i32);
                (s + p, s2 + p * p)
            });
            let empirical = sum / count;
            let var = (sum_sq / count - empirical * empirical).max(0.0) * count / (count - 1.0).max(1.0);
            MomentCheck {
                n: k,
                exact: exact.to_fraction_string(),
                exact_f64,
                empirical,
                std_error: (var / count).sqrt(),
                rel_deviation: (empirical - exact_f64).abs() / exact_f64,
            }
        })
        .collect();

    let edge = run.edge();
    let cdf = model.sample_density(MODEL_POINTS)?.cdf();
    let width = edge / nbins as f64;
    let mut counts = vec![0usize; nbins];
    let mut overflow = 0;
    for &v in &values {
        if v >= edge {
            overflow += 1;
        } else {
            counts[((v / width) as usize).min(nbins - 1)] += 1;
        }
    }
    let histogram = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let left = i as f64 * width;
            let right = if i + 1 == nbins { edge } else { left + width };
            HistogramBin {
                left,
                right,
                count: c,
                density_est: c as f64 / (count * (right - left)),
                density_model: (cdf.eval(right) - cdf.eval(left)) / (right - left),
            }
        })
        .collect();

    let ks_distance = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf.eval(v);
            (f - i as f64 / count).abs().max(((i + 1) as f64 / count - f).abs())
        })
        .fold(0.0, f64::max);

    Ok(ComparisonReport {
        n: run.n,
        m: run.m,
        trials: run.trials,
        seed: run.seed,
        samples: values.len(),
        edge,
        moments,
        histogram,
        overflow,
        ks_distance,
    })
}
