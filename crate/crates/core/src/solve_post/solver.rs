use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::assembly::{LinearSystem, SparseMatrix};
use crate::error::{Error, Result};

/// Required relative residual `||A x - b|| / ||b||`.
pub const RESIDUAL_LIMIT: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Fall back to Jacobi-preconditioned BiCGSTAB if the direct solve fails
    /// or misses the residual limit.
    pub iterative_fallback: bool,
    pub iterative_tolerance: f64,
    /// Defaults to `10 * n`.
    pub max_iterations: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { iterative_fallback: true, iterative_tolerance: 1e-12, max_iterations: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    SparseLu,
    Bicgstab,
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub x: Vec<f64>,
    pub relative_residual: f64,
    pub method: SolveMethod,
    pub iterations: usize,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `||A x - b|| / ||b||`, or the absolute residual when `b = 0`.
pub fn relative_residual(a: &SparseMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.matvec(x);
    let r: Vec<f64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    let nb = norm2(b);
    if nb > 0.0 {
        norm2(&r) / nb
    } else {
        norm2(&r)
    }
}

fn direct(system: &LinearSystem) -> Result<Vec<f64>> {
    let n = system.dof_count();
    let a = system.matrix.to_faer()?;
    let lu = a.sp_lu().map_err(|e| Error::Solver(format!("sparse LU failed: {e:?}")))?;
    let rhs = Mat::<f64>::from_fn(n, 1, |i, _| system.rhs[i]);
    let sol = lu.solve(rhs.as_ref());
    let mut x: Vec<f64> = (0..n).map(|i| sol[(i, 0)]).collect();
    // one step of iterative refinement
    let ax = system.matrix.matvec(&x);
    let r = Mat::<f64>::from_fn(n, 1, |i, _| system.rhs[i] - ax[i]);
    let dx = lu.solve(r.as_ref());
    for (i, xi) in x.iter_mut().enumerate() {
        *xi += dx[(i, 0)];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver("sparse LU produced non-finite values (singular matrix)".into()));
    }
    Ok(x)
}

/// Jacobi-preconditioned BiCGSTAB from a zero initial guess.
pub fn bicgstab(a: &SparseMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<(Vec<f64>, usize)> {
    let n = a.n;
    let mut diag = vec![1.0; n];
    for &(r, c, v) in &a.entries {
        if r == c && v != 0.0 {
            diag[r] = v;
        }
    }
    let prec = |v: &[f64]| v.iter().zip(&diag).map(|(x, d)| x / d).collect::<Vec<f64>>();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let nb = norm2(b);
    if nb == 0.0 {
        return Ok((vec![0.0; n], 0));
    }
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let r0 = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for it in 1..=max_iter {
        let rho_new = dot(&r0, &r);
        if rho_new == 0.0 {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        let ph = prec(&p);
        v = a.matvec(&ph);
        alpha = rho / dot(&r0, &v);
        let s: Vec<f64> = r.iter().zip(&v).map(|(ri, vi)| ri - alpha * vi).collect();
        if norm2(&s) <= tol * nb {
            for i in 0..n {
                x[i] += alpha * ph[i];
            }
            return Ok((x, it));
        }
        let sh = prec(&s);
        let t = a.matvec(&sh);
        omega = dot(&t, &s) / dot(&t, &t);
        for i in 0..n {
            x[i] += alpha * ph[i] + omega * sh[i];
            r[i] = s[i] - omega * t[i];
        }
        if norm2(&r) <= tol * nb {
            return Ok((x, it));
        }
        if !omega.is_finite() || omega == 0.0 {
            break;
        }
    }
    Err(Error::Solver(format!("BiCGSTAB did not reach relative residual {tol:e} in {max_iter} iterations")))
}

/// Solves `A x = b` by sparse LU, falling back to BiCGSTAB if allowed.
pub fn solve(system: &LinearSystem, options: &SolveOptions) -> Result<SolveReport> {
    let n = system.dof_count();
    let direct_result = direct(system).map(|x| {
        let res = relative_residual(&system.matrix, &x, &system.rhs);
        (x, res)
    });
    match direct_result {
        Ok((x, res)) if res < RESIDUAL_LIMIT => {
            return Ok(SolveReport { x, relative_residual: res, method: SolveMethod::SparseLu, iterations: 0 })
        }
        Ok((_, res)) => log::warn!("sparse LU residual {res:.3e} above {RESIDUAL_LIMIT:e}"),
        Err(ref e) => log::warn!("{e}"),
    }
    if !options.iterative_fallback {
        return match direct_result {
            Ok((_, res)) => Err(Error::Solver(format!("relative residual {res:.3e} above {RESIDUAL_LIMIT:e}"))),
            Err(e) => Err(e),
        };
    }
    let max_iter = options.max_iterations.unwrap_or(10 * n);
    let (x, iterations) = bicgstab(&system.matrix, &system.rhs, options.iterative_tolerance, max_iter)?;
    let res = relative_residual(&system.matrix, &x, &system.rhs);
    if !(res < RESIDUAL_LIMIT) {
        return Err(Error::Solver(format!("iterative residual {res:.3e} above {RESIDUAL_LIMIT:e}")));
    }
    Ok(SolveReport { x, relative_residual: res, method: SolveMethod::Bicgstab, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spd(n: usize, seed: u64) -> (SparseMatrix, Mat<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = Mat::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let a = &b * b.transpose() + Mat::<f64>::identity(n, n) * faer::Scale(n as f64);
        let trip = (0..n * n).map(|k| (k / n, k % n, a[(k / n, k % n)])).collect();
        (SparseMatrix::from_triplets(n, trip), a)
    }

    #[test]
    fn identity_system() {
        let n = 5;
        let sys = LinearSystem {
            matrix: SparseMatrix::from_triplets(n, (0..n).map(|i| (i, i, 1.0)).collect()),
            rhs: vec![1.0, 0.0, 0.0, 0.0, 0.0],
        };
        let r = solve(&sys, &SolveOptions::default()).unwrap();
        assert_eq!(r.x, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(r.method, SolveMethod::SparseLu);
    }

    #[test]
    fn random_spd_against_dense_oracle() {
        let n = 50;
        let (a, dense) = spd(n, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let oracle = dense.llt(faer::Side::Lower).unwrap().solve(Mat::<f64>::from_fn(n, 1, |i, _| b[i]).as_ref());
        let sys = LinearSystem { matrix: a.clone(), rhs: b.clone() };
        let x = solve(&sys, &SolveOptions::default()).unwrap().x;
        let err = (0..n).map(|i| (x[i] - oracle[(i, 0)]).powi(2)).sum::<f64>().sqrt();
        let scale = (0..n).map(|i| oracle[(i, 0)].powi(2)).sum::<f64>().sqrt();
        assert!(err < 1e-10 * scale);
        let (xi, _) = bicgstab(&a, &b, 1e-12, 500).unwrap();
        let err = (0..n).map(|i| (xi[i] - oracle[(i, 0)]).powi(2)).sum::<f64>().sqrt();
        assert!(err < 1e-9 * scale);
    }

    #[test]
    fn singular_system_is_reported() {
        let sys = LinearSystem { matrix: SparseMatrix::from_triplets(2, vec![(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)]), rhs: vec![1.0, 0.0] };
        let opts = SolveOptions { max_iterations: Some(20), ..Default::default() };
        assert!(solve(&sys, &opts).is_err());
    }
}
