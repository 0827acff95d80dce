mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use raney_core::Rational;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "raney", version, about = "Raney densities, Wiener–Hopf moments and random-matrix checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Io {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integer moments from exact arithmetic, Wiener–Hopf formulas or quadrature.
    Moments {
        #[arg(long)]
        p: Rational,
        #[arg(long)]
        r: Rational,
        /// Largest moment order.
        #[arg(long, default_value_t = 10)]
        n: u32,
        #[arg(long, default_value = "exact")]
        mode: String,
        /// Largest accepted relative deviation from the exact value.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        io: Io,
    },
    /// Sampled density on its support.
    Density {
        #[arg(long)]
        p: Rational,
        #[arg(long)]
        r: Rational,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Residuals of the integral equation at interior points of [0, 1].
    Equilibrium {
        #[arg(long)]
        theta: Rational,
        #[arg(long, default_value_t = 1)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
        y: Vec<f64>,
        /// Profile resolution.
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Field-free equation for the Jacobi-type density (integer theta, m ignored).
        #[arg(long)]
        jacobi: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Factorization, asymptotic, residue and Fourier checks of the kernel.
    Wh {
        #[arg(long)]
        theta: Rational,
        #[arg(long, default_value_t = 1)]
        q: u32,
        #[arg(long, value_delimiter = ',', default_value = "factorization,asymptotic,residue,fourier")]
        checks: Vec<commands::WhCheck>,
        /// Number of seeded factorization points.
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Largest accepted factorization deviation.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        io: Io,
    },
    /// Monte Carlo over products of M complex Gaussian N×N matrices.
    Mc {
        /// Matrix size N.
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Number of factors M.
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        bins: usize,
        #[arg(long, default_value_t = 4)]
        max_moment: u32,
        /// Largest accepted Kolmogorov–Smirnov distance.
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
        #[arg(long, default_value = raney_core::rmt::DEFAULT_SOLVER)]
        solver: String,
        #[command(flatten)]
        io: Io,
    },
    /// Potential coefficients c_l and alpha_l·L.
    Coeffs {
        #[arg(long)]
        theta: Rational,
        #[arg(long, default_value_t = 1)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[command(flatten)]
        io: Io,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Moments { p, r, n, mode, tol, io } => commands::moments(p, r, n, &mode, tol, &io),
        Command::Density { p, r, points, io } => commands::density(p, r, points, &io),
        Command::Equilibrium { theta, q, m, y, points, tol, jacobi, io } => {
            commands::equilibrium(theta, q, m, &y, points, tol, jacobi, &io)
        }
        Command::Wh { theta, q, checks, points, seed, tol, io } => {
            commands::wh(theta, q, &checks, points, seed, tol, &io)
        }
        Command::Mc { n, m, trials, seed, bins, max_moment, tol, solver, io } => {
            commands::mc(commands::McConfig { n, m, trials, seed, bins, max_moment, tol, solver }, &io)
        }
        Command::Coeffs { theta, q, m, io } => commands::coeffs(theta, q, m, &io),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("raney: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
