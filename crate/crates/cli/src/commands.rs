use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde_json::{json, Value};

use raney_core::curve::{CurveModel, JacobiCurveModel};
use raney_core::equilibrium::{equilibrium_residual, jacobi_residual};
use raney_core::exact::raney_exact;
use raney_core::moments::MomentRegistry;
use raney_core::rmt::{compare_to_density, MCRun, SolverRegistry};
use raney_core::wienerhopf::{potential_coefficients, WHFactorization};
use raney_core::{make_params, Error, RaneyParams, Rational};

use crate::output::{emit, json_text, number, Format, Metadata, Table};
use crate::Io;

/// Minimum number of density sample points.
pub const MIN_POINTS: usize = 16;
/// Largest accepted Fourier-integral deviation.
pub const FOURIER_TOL: f64 = 1e-6;
/// Largest accepted `|ratio - 1|` at `|z| = ASYMPTOTIC_RADIUS`.
pub const ASYMPTOTIC_TOL: f64 = 1e-2;
pub const ASYMPTOTIC_RADIUS: f64 = 1e3;
const FOURIER_POINTS: [f64; 3] = [-1.5, 0.5, 2.0];

#[derive(Debug)]
pub enum Failure {
    /// A computed check exceeded its tolerance.
    Check(String),
    Args(String),
    Numeric(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Args(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Check(s) => write!(f, "check failed: {s}"),
            Failure::Args(s) => write!(f, "invalid argument: {s}"),
            Failure::Numeric(s) => write!(f, "numerical failure: {s}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::Domain(_) | Error::UnknownStrategy { .. } | Error::EmptyRun => {
                Failure::Args(e.to_string())
            }
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Args(format!("cannot write output: {e}"))
    }
}

type Outcome = std::result::Result<(), Failure>;

fn write_table(table: &Table, meta: &Metadata, io: &Io, default: Format) -> Outcome {
    emit(io.out.as_deref(), &table.render(meta, io.format.unwrap_or(default)))?;
    Ok(())
}

fn params_meta(meta: &mut Metadata, params: &RaneyParams) {
    meta.set("p", params.p().to_fraction_string()).set("r", params.r().to_fraction_string());
    if let Some(fam) = params.family() {
        meta.set("theta", fam.theta.to_fraction_string()).set("q", fam.q).set("m", fam.m);
    }
}

pub fn moments(p: Rational, r: Rational, nmax: u32, mode: &str, tol: f64, io: &Io) -> Outcome {
    let params = make_params(p, r)?;
    let registry = MomentRegistry::default();
    let source = registry.get(mode)?;
    let values = source.moments(&params, nmax)?;

    let mut meta = Metadata::new("moments");
    params_meta(&mut meta, &params);
    meta.set("n", nmax).set("mode", mode).set("tol", tol);

    let mut table = Table::new(vec!["n", "exact", "float", "mode", "value", "abs_dev", "rel_dev"]);
    let mut worst = 0.0f64;
    for (n, &value) in values.iter().enumerate() {
        let exact = raney_exact(&params, n as u32);
        let float = exact.to_f64();
        let abs_dev = (value - float).abs();
        let rel_dev = abs_dev / float.abs();
        worst = worst.max(rel_dev);
        table.push(vec![
            (n as i64).into(),
            exact.to_fraction_string().into(),
            float.into(),
            mode.into(),
            value.into(),
            abs_dev.into(),
            rel_dev.into(),
        ]);
    }
    write_table(&table, &meta, io, Format::Csv)?;
    if !(worst <= tol) {
        return Err(Failure::Check(format!("relative deviation {worst:e} exceeds {tol:e}")));
    }
    Ok(())
}

pub fn density(p: Rational, r: Rational, points: usize, io: &Io) -> Outcome {
    if points < MIN_POINTS {
        return Err(Failure::Args(format!("--points {points} is below the minimum of {MIN_POINTS}")));
    }
    let params = make_params(p, r)?;
    let profile = CurveModel::new(params.clone())?.sample_density(points)?;

    let mut meta = Metadata::new("density");
    params_meta(&mut meta, &params);
    meta.set("points", points);

    let mut table = Table::new(vec!["x", "rho"]);
    for (&x, &rho) in profile.grid().iter().zip(profile.values()) {
        table.push(vec![x.into(), rho.into()]);
    }
    table.trailer = vec![("L", number(profile.edge())), ("mass", number(profile.mass()))];
    write_table(&table, &meta, io, Format::Csv)
}

#[allow(clippy::too_many_arguments)]
pub fn equilibrium(theta: Rational, q: u32, m: u32, ys: &[f64], points: usize, tol: f64, jacobi: bool, io: &Io) -> Outcome {
    if let Some(y) = ys.iter().find(|&&y| !(y > 0.0 && y < 1.0)) {
        return Err(Failure::Args(format!("y = {y} must lie strictly inside (0, 1)")));
    }
    if points < MIN_POINTS {
        return Err(Failure::Args(format!("--points {points} is below the minimum of {MIN_POINTS}")));
    }
    let theta_f = theta.to_f64();
    let mut meta = Metadata::new("equilibrium");
    meta.set("theta", theta.to_fraction_string()).set("q", q).set("points", points).set("tol", tol);

    let residuals: Vec<f64> = if jacobi {
        if !theta.is_integer() {
            return Err(Failure::Args("--jacobi needs an integer theta".into()));
        }
        meta.set("equation", "field-free");
        let profile = JacobiCurveModel::new(theta_f as u32)?.sample_density(points)?;
        ys.iter().map(|&y| jacobi_residual(&profile, theta_f, q, y)).collect::<Result<_, _>>()?
    } else {
        meta.set("m", m).set("equation", "potential");
        let spec = potential_coefficients(theta_f, q, m)?;
        if !spec.warnings.is_empty() {
            meta.set("warnings", spec.warnings.clone());
        }
        let params = RaneyParams::from_family(theta.clone(), q, m)?;
        let profile = CurveModel::new(params)?.sample_density(points)?.scaled_to_unit();
        ys.iter().map(|&y| equilibrium_residual(&profile, &spec, y)).collect::<Result<_, _>>()?
    };

    let mut table = Table::new(vec!["y", "residual"]);
    for (&y, &res) in ys.iter().zip(&residuals) {
        table.push(vec![y.into(), res.into()]);
    }
    write_table(&table, &meta, io, Format::Csv)?;
    let worst = residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
    if !(worst <= tol) {
        return Err(Failure::Check(format!("residual {worst:e} exceeds {tol:e}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum WhCheck {
    Factorization,
    Asymptotic,
    Residue,
    Fourier,
}

pub fn wh(theta: Rational, q: u32, checks: &[WhCheck], points: usize, seed: u64, tol: f64, io: &Io) -> Outcome {
    let w = WHFactorization::new(theta.to_f64(), q)?;
    let mut meta = Metadata::new("wh");
    meta.set("theta", theta.to_fraction_string())
        .set("q", q)
        .set("points", points)
        .set("seed", seed)
        .set("tol", tol)
        .set("fourier_tol", FOURIER_TOL)
        .set("asymptotic_tol", ASYMPTOTIC_TOL);

    let mut report = serde_json::Map::new();
    report.insert("c".into(), number(w.c()));
    report.insert("edge".into(), number(w.edge()));
    let mut rows: Vec<(&'static str, f64, bool)> = Vec::new();
    let mut failed = Vec::new();

    for check in checks {
        match check {
            WhCheck::Factorization => {
                let dev = w.factorization_check(points, seed)?;
                let passed = dev <= tol;
                report.insert("factorization".into(), json!({ "max_dev": number(dev), "passed": passed }));
                rows.push(("factorization", dev, passed));
            }
            WhCheck::Asymptotic => {
                let ratios = w.asymptotic_check(-PI / 4.0, &[ASYMPTOTIC_RADIUS])?;
                let dev = ratios.iter().map(|a| (a.minus - 1.0).norm().max((a.plus - 1.0).norm())).fold(0.0, f64::max);
                let passed = dev <= ASYMPTOTIC_TOL;
                report.insert(
                    "asymptotic".into(),
                    json!({ "radius": ASYMPTOTIC_RADIUS, "angle": -PI / 4.0, "max_dev": number(dev), "passed": passed }),
                );
                rows.push(("asymptotic", dev, passed));
            }
            WhCheck::Residue => {
                let a = w.residue_a()?;
                report.insert("residue".into(), json!({ "re": number(a.re), "im": number(a.im) }));
                rows.push(("residue_re", a.re, true));
                rows.push(("residue_im", a.im, true));
            }
            WhCheck::Fourier => {
                let mut dev = 0.0f64;
                for x in FOURIER_POINTS {
                    dev = dev.max(w.fourier_kernel_check(w.strip_point(x))?);
                }
                let passed = dev <= FOURIER_TOL;
                report.insert("fourier".into(), json!({ "points": FOURIER_POINTS, "max_dev": number(dev), "passed": passed }));
                rows.push(("fourier", dev, passed));
            }
        }
    }
    for (name, value, passed) in &rows {
        if !passed {
            failed.push(format!("{name} = {value:e}"));
        }
    }

    match io.format.unwrap_or(Format::Json) {
        Format::Json => {
            report.insert("metadata".into(), meta.to_value());
            emit(io.out.as_deref(), &json_text(&Value::Object(report)))?;
        }
        Format::Csv => {
            let mut table = Table::new(vec!["check", "value", "passed"]);
            table.push(vec!["c".into(), w.c().into(), "true".into()]);
            table.push(vec!["edge".into(), w.edge().into(), "true".into()]);
            for (name, value, passed) in rows {
                table.push(vec![name.into(), value.into(), passed.to_string().into()]);
            }
            write_table(&table, &meta, io, Format::Csv)?;
        }
    }
    if !failed.is_empty() {
        return Err(Failure::Check(failed.join(", ")));
    }
    Ok(())
}

pub struct McConfig {
    pub n: usize,
    pub m: u32,
    pub trials: usize,
    pub seed: u64,
    pub bins: usize,
    pub max_moment: u32,
    pub tol: f64,
    pub solver: String,
}

pub fn mc(cfg: McConfig, io: &Io) -> Outcome {
    if cfg.m == 0 {
        return Err(Failure::Args("--m must be at least 1".into()));
    }
    if cfg.trials == 0 {
        return Err(Failure::Args("--trials must be at least 1".into()));
    }
    if cfg.bins == 0 {
        return Err(Failure::Args("--bins must be at least 1".into()));
    }
    let registry = SolverRegistry::default();
    let mut run = MCRun::new(cfg.n, cfg.m, cfg.trials, cfg.seed)?.with_solver(&cfg.solver);
    registry.get(&cfg.solver)?;
    run.run(&registry)?;
    let model = CurveModel::new(make_params(Rational::integer(cfg.m as i64 + 1), Rational::integer(1))?)?;
    let report = compare_to_density(&run, &model, cfg.bins, cfg.max_moment)?;

    let mut meta = Metadata::new("mc");
    meta.set("N", cfg.n)
        .set("M", cfg.m)
        .set("trials", cfg.trials)
        .set("seed", cfg.seed)
        .set("bins", cfg.bins)
        .set("max_moment", cfg.max_moment)
        .set("tol", cfg.tol)
        .set("solver", cfg.solver.as_str());

    let mut table = Table::new(vec!["bin_left", "bin_right", "count", "density_est", "density_model"]);
    for b in &report.histogram {
        table.push(vec![b.left.into(), b.right.into(), (b.count as i64).into(), b.density_est.into(), b.density_model.into()]);
    }
    let summary = json!({
        "metadata": meta.to_value(),
        "samples": report.samples,
        "edge": number(report.edge),
        "overflow": report.overflow,
        "ks_distance": number(report.ks_distance),
        "moments": report.moments,
    });

    match &io.out {
        Some(path) => {
            emit(Some(path), &table.render(&meta, Format::Csv))?;
            emit(Some(&moments_path(path)), &json_text(&summary))?;
        }
        None => match io.format.unwrap_or(Format::Csv) {
            Format::Csv => emit(None, &table.render(&meta, Format::Csv))?,
            Format::Json => {
                let mut full = summary;
                full["histogram"] = serde_json::to_value(&report.histogram).expect("histogram serializes");
                emit(None, &json_text(&full))?;
            }
        },
    }
    if !(report.ks_distance <= cfg.tol) {
        return Err(Failure::Check(format!("KS distance {:e} exceeds {:e}", report.ks_distance, cfg.tol)));
    }
    Ok(())
}

/// `hist.csv` -> `hist.moments.json`.
pub fn moments_path(out: &Path) -> std::path::PathBuf {
    out.with_extension("moments.json")
}

pub fn coeffs(theta: Rational, q: u32, m: u32, io: &Io) -> Outcome {
    let spec = potential_coefficients(theta.to_f64(), q, m)?;
    let mut meta = Metadata::new("coeffs");
    meta.set("theta", theta.to_fraction_string()).set("q", q).set("m", m).set("L", number(spec.edge()));
    if !spec.warnings.is_empty() {
        meta.set("warnings", spec.warnings.clone());
    }
    let mut table = Table::new(vec!["l", "c_l", "alpha_l_L"]);
    for (l, (c, a)) in spec.coefficients.iter().zip(&spec.alphas).enumerate() {
        table.push(vec![(l as i64).into(), (*c).into(), (a * spec.edge()).into()]);
    }
    write_table(&table, &meta, io, Format::Csv)
}
