//! Real dense helpers: singular-value rank decisions and an active-set
//! nonnegative least-squares solver.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Singular-value summary of a real matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankInfo {
    pub rank: usize,
    pub largest: f64,
    pub smallest: f64,
}

/// Rank counted as singular values above `rel_cutoff · σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_cutoff: f64) -> RankInfo {
    let sv = m.clone().singular_values();
    let largest = sv.iter().cloned().fold(0.0, f64::max);
    let smallest = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let rank = if largest == 0.0 {
        0
    } else {
        sv.iter().filter(|s| **s > rel_cutoff * largest).count()
    };
    RankInfo {
        rank,
        largest,
        smallest: if sv.is_empty() { 0.0 } else { smallest },
    }
}

/// Iteration cap for the active-set loop, in multiples of the column count.
const NNLS_ITER_FACTOR: usize = 6;

/// Solution of `min ‖A x − b‖` subject to `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct NnlsSolution {
    pub x: DVector<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Lawson–Hanson active-set NNLS.
///
/// Each inner step solves the unconstrained least-squares problem on the
/// passive columns through an SVD, so rank-deficient passive sets still
/// produce the minimal-norm subproblem solution.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> NnlsSolution {
    let n = a.ncols();
    let scale = a.amax().max(b.amax()).max(1.0);
    let tol = 10.0 * f64::EPSILON * scale * (a.nrows().max(n) as f64);
    let max_iter = NNLS_ITER_FACTOR * n.max(1);

    let mut x = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    let mut iterations = 0;

    loop {
        let resid = b - a * &x;
        let w = a.transpose() * &resid;
        let candidate = (0..n)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(enter) = candidate else { break };
        if iterations >= max_iter {
            break;
        }
        passive[enter] = true;

        loop {
            iterations += 1;
            let z = solve_passive(a, b, &passive);
            let infeasible: Vec<usize> = (0..n).filter(|&j| passive[j] && z[j] <= 0.0).collect();
            if infeasible.is_empty() {
                x = z;
                break;
            }
            let alpha = infeasible
                .iter()
                .map(|&j| x[j] / (x[j] - z[j]))
                .fold(f64::INFINITY, f64::min);
            for j in 0..n {
                if passive[j] {
                    x[j] += alpha * (z[j] - x[j]);
                }
            }
            for j in 0..n {
                if passive[j] && x[j] <= tol {
                    passive[j] = false;
                    x[j] = 0.0;
                }
            }
            if iterations >= max_iter {
                break;
            }
        }
        if iterations >= max_iter {
            break;
        }
    }

    let residual = (b - a * &x).norm();
    NnlsSolution {
        x,
        residual,
        iterations,
    }
}

fn solve_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let cols: Vec<usize> = (0..a.ncols()).filter(|&j| passive[j]).collect();
    let mut sub = DMatrix::<f64>::zeros(a.nrows(), cols.len());
    for (dst, &src) in cols.iter().enumerate() {
        sub.set_column(dst, &a.column(src));
    }
    let svd = sub.svd(true, true);
    let eps = svd.singular_values.amax() * 1e-14;
    let y = svd.solve(b, eps).expect("SVD computed with both factors");
    let mut z = DVector::zeros(a.ncols());
    for (src, &dst) in cols.iter().enumerate() {
        z[dst] = y[src];
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_deficient_matrix() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        let info = numerical_rank(&m, 1e-8);
        assert_eq!(info.rank, 2);
        assert_eq!(numerical_rank(&DMatrix::identity(4, 4), 1e-8).rank, 4);
        assert_eq!(numerical_rank(&DMatrix::zeros(2, 2), 1e-8).rank, 0);
    }

    #[test]
    fn nnls_interior_solution_matches_solve() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let x_true = DVector::from_vec(vec![0.5, 0.25]);
        let b = &a * &x_true;
        let sol = nnls(&a, &b);
        assert!((sol.x - x_true).norm() < 1e-12);
        assert!(sol.residual < 1e-12);
    }

    #[test]
    fn nnls_clamps_negative_direction() {
        // Unconstrained solution (1, -1); constrained optimum puts x2 = 0.
        let a = DMatrix::identity(2, 2);
        let b = DVector::from_vec(vec![1.0, -1.0]);
        let sol = nnls(&a, &b);
        assert_eq!(sol.x[1], 0.0);
        assert!((sol.x[0] - 1.0).abs() < 1e-14);
        assert!((sol.residual - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nnls_matches_brute_force_on_small_problem() {
        // Enumerate all 2^3 active sets; the feasible KKT point with
        // smallest residual is the optimum.
        let a = DMatrix::from_row_slice(
            4,
            3,
            &[
                1.0, 0.2, -0.3, 0.5, 1.0, 0.1, -0.4, 0.3, 1.0, 0.2, -0.6, 0.4,
            ],
        );
        let b = DVector::from_vec(vec![0.3, -0.8, 0.9, -0.2]);
        let mut best = f64::INFINITY;
        for mask in 0u32..8 {
            let cols: Vec<usize> = (0..3).filter(|j| mask & (1 << j) != 0).collect();
            let mut x = DVector::zeros(3);
            if !cols.is_empty() {
                let mut sub = DMatrix::zeros(4, cols.len());
                for (d, &s) in cols.iter().enumerate() {
                    sub.set_column(d, &a.column(s));
                }
                let y = sub.svd(true, true).solve(&b, 1e-14).unwrap();
                if y.iter().any(|v| *v < 0.0) {
                    continue;
                }
                for (d, &s) in cols.iter().enumerate() {
                    x[s] = y[d];
                }
            }
            best = best.min((&b - &a * &x).norm());
        }
        let sol = nnls(&a, &b);
        assert!(sol.x.iter().all(|v| *v >= 0.0));
        assert!((sol.residual - best).abs() < 1e-12);
    }
}
