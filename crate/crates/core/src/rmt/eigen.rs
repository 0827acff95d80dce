use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigen-decomposition of a dense Hermitian matrix.
pub trait HermitianEigensolver: Send + Sync {
    fn name(&self) -> &'static str;

    /// Eigenvalues in ascending order.
    fn eigenvalues(&self, a: &DMatrix<Complex64>) -> Result<Vec<f64>>;

    /// Eigenvalues (ascending) and the matching unitary eigenvector matrix.
    fn decompose(&self, a: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)>;
}

/// Cyclic complex Jacobi rotations with a sweep cap.
#[derive(Debug, Clone)]
pub struct CyclicJacobi {
    pub max_sweeps: usize,
    pub tol: f64,
}

impl Default for CyclicJacobi {
    fn default() -> Self {
        Self { max_sweeps: 60, tol: 1e-15 }
    }
}

impl CyclicJacobi {
    fn run(&self, a: &DMatrix<Complex64>, vectors: bool) -> Result<(Vec<f64>, Option<DMatrix<Complex64>>)> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::Domain(format!("matrix is {}x{}, expected square", n, a.ncols())));
        }
        let mut w = a.clone();
        // force exact Hermitian symmetry so rotations stay consistent
        for j in 0..n {
            w[(j, j)] = Complex64::new(w[(j, j)].re, 0.0);
            for i in 0..j {
                let avg = 0.5 * (w[(i, j)] + w[(j, i)].conj());
                w[(i, j)] = avg;
                w[(j, i)] = avg.conj();
            }
        }
        let mut v = vectors.then(|| DMatrix::<Complex64>::identity(n, n));
        let scale = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if scale == 0.0 || n < 2 {
            return Ok(finish(&w, v));
        }

        let mut scratch_p = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch_q = scratch_p.clone();
        for _ in 0..self.max_sweeps {
            let off: f64 = (0..n)
                .flat_map(|j| (0..j).map(move |i| (i, j)))
                .map(|(i, j)| w[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= self.tol * scale {
                return Ok(finish(&w, v));
            }
            for q in 1..n {
                for p in 0..q {
                    let b = w[(p, q)];
                    let mag = b.norm();
                    if mag <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let app = w[(p, p)].re;
                    let aqq = w[(q, q)].re;
                    if mag < 1e-3 * self.tol * (app.abs().min(aqq.abs()) + f64::MIN_POSITIVE) {
                        w[(p, q)] = Complex64::new(0.0, 0.0);
                        w[(q, p)] = Complex64::new(0.0, 0.0);
                        continue;
                    }
                    // phase on column q makes the pivot real and positive
                    let phase = b.conj() / mag;
                    let theta = (aqq - app) / (2.0 * mag);
                    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                    let c = 1.0 / t.hypot(1.0);
                    let s = t * c;

                    rotate_columns(w.as_mut_slice(), n, p, q, phase, c, s);
                    // Hermitian mirror: row p and row q are the conjugated columns
                    let data = w.as_mut_slice();
                    scratch_p.copy_from_slice(&data[p * n..(p + 1) * n]);
                    scratch_q.copy_from_slice(&data[q * n..(q + 1) * n]);
                    for (dst, src) in data[p..].iter_mut().step_by(n).zip(&scratch_p) {
                        *dst = src.conj();
                    }
                    for (dst, src) in data[q..].iter_mut().step_by(n).zip(&scratch_q) {
                        *dst = src.conj();
                    }
                    w[(p, p)] = Complex64::new(app - t * mag, 0.0);
                    w[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
                    w[(p, q)] = Complex64::new(0.0, 0.0);
                    w[(q, p)] = Complex64::new(0.0, 0.0);

                    if let Some(v) = v.as_mut() {
                        rotate_columns(v.as_mut_slice(), n, p, q, phase, c, s);
                    }
                }
            }
        }
        Err(Error::NoConvergence(self.max_sweeps))
    }
}

/// Columns `p < q` of a column-major `n x n` array become
/// `(col_p c - phase col_q s, col_p s + phase col_q c)`.
fn rotate_columns(data: &mut [Complex64], n: usize, p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let (left, right) = data.split_at_mut(q * n);
    let col_p = &mut left[p * n..(p + 1) * n];
    let col_q = &mut right[..n];
    for (a, b) in col_p.iter_mut().zip(col_q.iter_mut()) {
        let x = *a;
        let y = *b * phase;
        *a = x * c - y * s;
        *b = x * s + y * c;
    }
}

fn finish(w: &DMatrix<Complex64>, v: Option<DMatrix<Complex64>>) -> (Vec<f64>, Option<DMatrix<Complex64>>) {
    let n = w.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].re.total_cmp(&w[(j, j)].re));
    let values = order.iter().map(|&i| w[(i, i)].re).collect();
    let v = v.map(|v| DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]));
    (values, v)
}

impl HermitianEigensolver for CyclicJacobi {
    fn name(&self) -> &'static str {
        "jacobi"
    }

    fn eigenvalues(&self, a: &DMatrix<Complex64>) -> Result<Vec<f64>> {
        Ok(self.run(a, false)?.0)
    }

    fn decompose(&self, a: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
        let (values, v) = self.run(a, true)?;
        Ok((values, v.expect("vectors requested")))
    }
}

/// Householder tridiagonalization followed by implicit QR, from nalgebra.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub max_iter: usize,
}

impl Default for Tridiagonal {
    fn default() -> Self {
        Self { max_iter: 0 }
    }
}

impl Tridiagonal {
    fn solve(&self, a: &DMatrix<Complex64>) -> Result<nalgebra::SymmetricEigen<Complex64, nalgebra::Dyn>> {
        if a.nrows() != a.ncols() {
            return Err(Error::Domain(format!("matrix is {}x{}, expected square", a.nrows(), a.ncols())));
        }
        nalgebra::SymmetricEigen::try_new(a.clone(), f64::EPSILON, self.max_iter)
            .ok_or(Error::NoConvergence(self.max_iter))
    }
}

impl HermitianEigensolver for Tridiagonal {
    fn name(&self) -> &'static str {
        "tridiagonal"
    }

    fn eigenvalues(&self, a: &DMatrix<Complex64>) -> Result<Vec<f64>> {
        let mut values: Vec<f64> = self.solve(a)?.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    fn decompose(&self, a: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
        let eig = self.solve(a)?;
        let n = a.nrows();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok((values, vectors))
    }
}

/// Named eigensolvers.
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Box<dyn HermitianEigensolver>>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        Self { solvers: BTreeMap::new() }
    }

    pub fn register(&mut self, solver: Box<dyn HermitianEigensolver>) {
        self.solvers.insert(solver.name(), solver);
    }

    pub fn get(&self, name: &str) -> Result<&dyn HermitianEigensolver> {
        self.solvers.get(name).map(|s| s.as_ref()).ok_or_else(|| Error::UnknownStrategy {
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.keys().copied().collect()
    }
}

impl Default for SolverRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(CyclicJacobi::default()));
        reg.register(Box::new(Tridiagonal::default()));
        reg
    }
}
