//! Max-margin feasibility programs over polyhedral cones.
//!
//! Both programs keep the free direction inside the box `[-1, 1]^d` and the
//! margin in `[-1, 1]`, so they are always feasible and bounded.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};
use crate::linalg::norm;

/// Maximizes `t` subject to `sign_i * <r_i/|r_i|, c> >= t` over `c` in the box.
/// Returns the optimal margin and the maximizing direction.
pub fn max_margin<'a, I>(dim: usize, rows: I) -> Result<(f64, Vec<f64>)>
where
    I: IntoIterator<Item = (&'a [f64], f64)>,
{
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let c: Vec<_> = (0..dim).map(|_| problem.add_var(0.0, (-1.0, 1.0))).collect();
    let t = problem.add_var(1.0, (-1.0, 1.0));
    for (row, sign) in rows {
        let s = sign / norm(row);
        let mut expr: Vec<_> = c.iter().zip(row).map(|(&v, &a)| (v, s * a)).collect();
        expr.push((t, -1.0));
        problem.add_constraint(&expr[..], ComparisonOp::Ge, 0.0);
    }
    let solution = problem.solve().map_err(|e| Error::Lp(e.to_string()))?;
    let dir = c.iter().map(|&v| solution[v]).collect();
    Ok((solution.objective(), dir))
}

/// Margin by which `target` can be separated from the cone spanned by
/// `others`: maximizes `t` subject to `<y, p> >= 0` for every `p` in `others`
/// and `<y, target/|target|> <= -t`. A positive optimum certifies that
/// `target` is not in the conical hull of `others`.
pub fn separation_margin<'a, I>(dim: usize, target: &[f64], others: I) -> Result<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let y: Vec<_> = (0..dim).map(|_| problem.add_var(0.0, (-1.0, 1.0))).collect();
    let t = problem.add_var(1.0, (-1.0, 1.0));
    for p in others {
        let s = 1.0 / norm(p);
        let expr: Vec<_> = y.iter().zip(p).map(|(&v, &a)| (v, s * a)).collect();
        problem.add_constraint(&expr[..], ComparisonOp::Ge, 0.0);
    }
    let s = 1.0 / norm(target);
    let mut expr: Vec<_> = y.iter().zip(target).map(|(&v, &a)| (v, s * a)).collect();
    expr.push((t, 1.0));
    problem.add_constraint(&expr[..], ComparisonOp::Le, 0.0);
    let solution = problem.solve().map_err(|e| Error::Lp(e.to_string()))?;
    Ok(solution.objective())
}
