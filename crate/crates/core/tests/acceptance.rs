//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always appear in `cargo test` output.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use raney_core::curve::{CurveModel, JacobiCurveModel};
use raney_core::equilibrium::{energy, equilibrium_residual, jacobi_residual, perturb, PairKernel};
use raney_core::exact::{binomial_moment, raney_exact};
use raney_core::quad::density_moment;
use raney_core::rmt::{compare_to_density, MCRun};
use raney_core::wienerhopf::{jacobi_moment_wh, potential_coefficients, raney_moment_general, WHFactorization};
use raney_core::{make_params, JacobiParams, RaneyParams, Rational, Result};

struct Check {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: String) -> Result<Check> {
    Ok(Check { passed, detail })
}

fn family(theta: i64, q: u32, m: u32) -> RaneyParams {
    RaneyParams::from_family(Rational::integer(theta), q, m).expect("valid family")
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn wh_moments() -> Result<Check> {
    let mut worst = 0.0f64;
    for theta in 1..=3 {
        for q in 1..=3 {
            let wh = WHFactorization::new(theta as f64, q)?;
            let params = family(theta, q, 0);
            for n in 0..=10 {
                worst = worst.max(rel(wh.moment_wh(n)?, raney_exact(&params, n).to_f64()));
            }
        }
    }
    check(worst <= 1e-10, format!("max rel dev {worst:.2e} (tol 1e-10)"))
}

fn general_moments() -> Result<Check> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for theta in 1..=2 {
        for q in 1..=2u32 {
            for m in 0..=2u32 {
                if m as f64 > (theta as f64 - 1.0) / q as f64 + 1.0 {
                    continue;
                }
                cases += 1;
                let spec = potential_coefficients(theta as f64, q, m)?;
                let params = family(theta, q, m);
                for n in 0..=8 {
                    worst = worst.max(rel(raney_moment_general(&spec, n)?, raney_exact(&params, n).to_f64()));
                }
            }
        }
    }
    check(worst <= 1e-9, format!("{cases} valid cases, max rel dev {worst:.2e} (tol 1e-9)"))
}

fn factorization() -> Result<Check> {
    let (mut fact, mut fourier) = (0.0f64, 0.0f64);
    for theta in 1..=3 {
        for q in 1..=3 {
            let wh = WHFactorization::new(theta as f64, q)?;
            fact = fact.max(wh.factorization_check(20, 1000 + 10 * theta as u64 + q as u64)?);
            for x in [-1.5, 0.5, 2.0] {
                fourier = fourier.max(wh.fourier_kernel_check(wh.strip_point(x))?);
            }
        }
    }
    check(
        fact <= 1e-10 && fourier <= 1e-6,
        format!("K vs K+/K- {fact:.2e} (tol 1e-10), Fourier {fourier:.2e} (tol 1e-6)"),
    )
}

fn density() -> Result<Check> {
    let mp = CurveModel::new(make_params(Rational::integer(2), Rational::integer(1))?)?;
    let mut grid_err = 0.0f64;
    for k in 0..200 {
        let x = 4.0 * (k as f64 + 0.5) / 200.0;
        let closed = (x * (4.0 - x)).sqrt() / (2.0 * PI * x);
        grid_err = grid_err.max((mp.density(x)? - closed).abs());
    }
    let mut mom_err = 0.0f64;
    for (p, r) in [((2, 1), (1, 1)), ((3, 1), (1, 1)), ((3, 2), (1, 2))] {
        let params = make_params(Rational::new(p.0, p.1)?, Rational::new(r.0, r.1)?)?;
        let edge = params.support_edge().value();
        let model = CurveModel::new(params.clone())?;
        for n in 0..=6 {
            let got = density_moment(&model, n, 1e-10 * edge.powi(n as i32))?;
            mom_err = mom_err.max(rel(got, raney_exact(&params, n).to_f64()));
        }
    }
    check(
        grid_err <= 1e-8 && mom_err <= 1e-6,
        format!("MP grid max abs err {grid_err:.2e} (tol 1e-8), moments max rel dev {mom_err:.2e} (tol 1e-6)"),
    )
}

fn residuals() -> Result<Check> {
    let ys = [0.25, 0.5, 0.75];
    let mut worst = 0.0f64;
    for (theta, q, m) in [(1, 1, 0), (2, 1, 0), (1, 2, 0), (1, 1, 1)] {
        let spec = potential_coefficients(theta as f64, q, m)?;
        let profile = CurveModel::new(family(theta, q, m))?.sample_density(400)?.scaled_to_unit();
        for y in ys {
            worst = worst.max(equilibrium_residual(&profile, &spec, y)?.abs());
        }
    }
    let arcsine = JacobiCurveModel::new(1)?.sample_density(400)?;
    let mut free = 0.0f64;
    for y in ys {
        free = free.max(jacobi_residual(&arcsine, 1.0, 1, y)?.abs());
    }
    check(
        worst <= 1e-3 && free <= 1e-3,
        format!("potential cases {worst:.2e}, field-free arcsine {free:.2e} (tol 1e-3)"),
    )
}

fn energy_minimality() -> Result<Check> {
    let mut least = f64::INFINITY;
    for (theta, q) in [(1, 1), (2, 1), (1, 2)] {
        let profile = CurveModel::new(family(theta, q, 0))?.sample_density(200)?.scaled_to_unit();
        let spec = potential_coefficients(theta as f64, q, 0)?;
        let kernel = PairKernel::new(theta as f64, q)?;
        let e0 = energy(&profile, &kernel, Some(&spec));
        for seed in 0..10 {
            let e = energy(&perturb(&profile, 0.05, seed)?, &kernel, Some(&spec));
            least = least.min(e - e0);
        }
    }
    check(least >= -1e-6, format!("30 perturbations, min dE {least:.2e} (tol -1e-6)"))
}

fn coefficients() -> Result<Check> {
    let mut exact = true;
    for theta in 1..=3 {
        for q in 1..=3u32 {
            let s = potential_coefficients(theta as f64, q, 1)?;
            let qf = q as f64;
            exact &= s.coefficients[0] == -(1.0 + qf) && s.coefficients[1] == theta as f64 / (1.0 + qf);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst = 0.0f64;
    for (theta, q, m) in [(1.0, 1, 1), (2.0, 1, 2), (2.0, 2, 1), (3.0, 1, 3), (2.5, 3, 2)] {
        let s = potential_coefficients(theta, q, m)?;
        for _ in 0..10 {
            let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.0..1.0));
            let direct = s.q_function(z);
            worst = worst.max((direct - s.partial_fractions(z)).norm() / direct.norm());
        }
    }
    check(
        exact && worst <= 1e-12,
        format!("m=1 coefficients exact: {exact}, Q partial fractions max rel dev {worst:.2e} (tol 1e-12)"),
    )
}

fn jacobi() -> Result<Check> {
    let mut worst = 0.0f64;
    for theta in 1..=3 {
        for q in 1..=3 {
            let jp = JacobiParams::new(Rational::integer(theta), q)?;
            for n in 0..=10 {
                worst = worst.max(rel(jacobi_moment_wh(&jp, n)?, binomial_moment(&jp, n).moment));
            }
        }
    }
    let model = JacobiCurveModel::new(1)?;
    let mut dens = 0.0f64;
    for k in 0..=90 {
        let x = 0.05 + 0.01 * k as f64;
        dens = dens.max((model.density(x)? - 1.0 / (PI * (x * (1.0 - x)).sqrt())).abs());
    }
    check(
        worst <= 1e-10 && dens <= 1e-6,
        format!("moments max rel dev {worst:.2e} (tol 1e-10), arcsine max abs err {dens:.2e} (tol 1e-6)"),
    )
}

fn monte_carlo() -> Result<Check> {
    let mut passed = true;
    let mut parts = Vec::new();
    for m in [1u32, 2] {
        let run = MCRun::execute(150, m, 667, 20_240 + m as u64)?;
        let model = CurveModel::new(make_params(Rational::integer(m as i64 + 1), Rational::integer(1))?)?;
        let report = compare_to_density(&run, &model, 50, 4)?;
        let worst = report.moments.iter().map(|c| c.rel_deviation).fold(0.0, f64::max);
        passed &= report.samples >= 100_000 && worst <= 0.02;
        if m == 1 {
            passed &= report.ks_distance < 0.02;
        }
        parts.push(format!(
            "M={m}: {} values, moments max rel dev {worst:.2e}, KS {:.2e}",
            report.samples, report.ks_distance
        ));
    }
    check(passed, format!("{} (tol 2e-2)", parts.join("; ")))
}

fn asymptotics() -> Result<Check> {
    let mut worst = 0.0f64;
    for theta in [1.0, 3.0] {
        for r in WHFactorization::new(theta, 1)?.asymptotic_check(-PI / 4.0, &[1e3])? {
            worst = worst.max((r.minus - 1.0).norm()).max((r.plus - 1.0).norm());
        }
    }
    check(worst <= 1e-2, format!("max |ratio - 1| {worst:.2e} (tol 1e-2)"))
}

type Criterion = (u32, &'static str, Duration, fn() -> Result<Check>);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        (1, "exact vs Wiener-Hopf moments", secs(1), wh_moments),
        (2, "general-r moments", secs(1), general_moments),
        (3, "factorization identity", secs(10), factorization),
        (4, "density correctness", secs(30), density),
        (5, "equilibrium residuals", secs(120), residuals),
        (6, "energy minimality", secs(120), energy_minimality),
        (7, "potential coefficients", secs(1), coefficients),
        (8, "Jacobi moments and density", secs(10), jacobi),
        (9, "Monte Carlo", secs(300), monte_carlo),
        (10, "asymptotics", secs(1), asymptotics),
    ];
    let mut failures = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(c) => (c.passed && elapsed <= budget, c.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "{} criterion {id:>2} {name}: {detail}; {:.2}s of {}s",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
