//! A small dense simplex solver over exact rationals.
//!
//! Problems are given in standard form: minimize `c.x` subject to
//! `A x = b`, `x >= 0`. Bland's rule is used throughout, so the solver
//! terminates on every input. Problem sizes in this crate are tiny
//! (tens of variables), which makes the dense exact tableau the right
//! tool.

use crate::scalar::Scalar;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// Optimal solution and objective value.
    Optimal(Vec<Scalar>, Scalar),
    Infeasible,
    Unbounded,
}

pub struct StandardForm {
    /// Row-major constraint matrix, `rows x cols`.
    pub a: Vec<Vec<Scalar>>,
    pub b: Vec<Scalar>,
    pub c: Vec<Scalar>,
}

impl StandardForm {
    pub fn num_rows(&self) -> usize {
        self.a.len()
    }

    pub fn num_cols(&self) -> usize {
        self.c.len()
    }
}

/// Minimize `c.x` s.t. `Ax = b`, `x >= 0` via two-phase simplex.
pub fn solve(problem: &StandardForm) -> LpOutcome {
    let m = problem.num_rows();
    let n = problem.num_cols();
    debug_assert!(problem.a.iter().all(|r| r.len() == n));

    // Normalize rows so b >= 0, then add one artificial variable per row.
    let mut a: Vec<Vec<Scalar>> = Vec::with_capacity(m);
    let mut b: Vec<Scalar> = Vec::with_capacity(m);
    for i in 0..m {
        if problem.b[i].is_negative() {
            a.push(problem.a[i].iter().map(|v| -v.clone()).collect());
            b.push(-problem.b[i].clone());
        } else {
            a.push(problem.a[i].clone());
            b.push(problem.b[i].clone());
        }
    }

    let total = n + m;
    let mut tableau: Vec<Vec<Scalar>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(total + 1);
        row.extend(a[i].iter().cloned());
        for j in 0..m {
            row.push(if i == j { Scalar::one() } else { Scalar::zero() });
        }
        row.push(b[i].clone());
        tableau.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials.
    let mut cost: Vec<Scalar> = vec![Scalar::zero(); total];
    for j in n..total {
        cost[j] = Scalar::one();
    }
    let phase1 = run_simplex(&mut tableau, &mut basis, &cost, total);
    debug_assert!(phase1 != SimplexEnd::Unbounded, "phase 1 is bounded");
    let obj1 = objective_value(&tableau, &basis, &cost);
    if !obj1.is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive any artificial variables out of the basis.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !tableau[i][j].is_zero()) {
                pivot(&mut tableau, &mut basis, i, j);
            }
            // A row with no nonzero structural entry is redundant; its
            // artificial stays basic at value zero, which is harmless.
        }
    }

    // Phase 2 on the original objective, artificials pinned at zero cost
    // but forbidden from entering.
    let mut cost2: Vec<Scalar> = vec![Scalar::zero(); total];
    cost2[..n].clone_from_slice(&problem.c);
    let phase2 = run_simplex(&mut tableau, &mut basis, &cost2, n);
    if phase2 == SimplexEnd::Unbounded {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Scalar::zero(); n];
    for (i, &bj) in basis.iter().enumerate() {
        if bj < n {
            x[bj] = tableau[i].last().unwrap().clone();
        }
    }
    let val = objective_value(&tableau, &basis, &cost2);
    LpOutcome::Optimal(x, val)
}

/// Feasibility of `Ax = b, x >= 0`: a point if one exists.
pub fn feasible_point(a: Vec<Vec<Scalar>>, b: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let n = a.first().map_or(0, |r| r.len());
    let problem = StandardForm {
        a,
        b,
        c: vec![Scalar::zero(); n],
    };
    match solve(&problem) {
        LpOutcome::Optimal(x, _) => Some(x),
        _ => None,
    }
}

#[derive(PartialEq, Eq)]
enum SimplexEnd {
    Optimal,
    Unbounded,
}

fn objective_value(tableau: &[Vec<Scalar>], basis: &[usize], cost: &[Scalar]) -> Scalar {
    basis
        .iter()
        .enumerate()
        .map(|(i, &j)| &cost[j] * tableau[i].last().unwrap())
        .sum()
}

/// Bland's rule simplex over columns `0..allowed_cols`.
fn run_simplex(
    tableau: &mut Vec<Vec<Scalar>>,
    basis: &mut Vec<usize>,
    cost: &[Scalar],
    allowed_cols: usize,
) -> SimplexEnd {
    let m = tableau.len();
    loop {
        // Reduced costs: c_j - c_B . B^-1 A_j, computed from the tableau.
        let mut entering = None;
        for j in 0..allowed_cols {
            if basis.contains(&j) {
                continue;
            }
            let mut reduced = cost[j].clone();
            for i in 0..m {
                if !tableau[i][j].is_zero() {
                    reduced -= &cost[basis[i]] * &tableau[i][j];
                }
            }
            if reduced.is_negative() {
                entering = Some(j);
                break; // Bland: smallest index
            }
        }
        let Some(col) = entering else {
            return SimplexEnd::Optimal;
        };
        // Ratio test, Bland tie-break on basis index.
        let mut leave: Option<(usize, Scalar)> = None;
        for i in 0..m {
            if tableau[i][col].is_positive() {
                let ratio = tableau[i].last().unwrap() / &tableau[i][col];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return SimplexEnd::Unbounded;
        };
        pivot(tableau, basis, row, col);
    }
}

fn pivot(tableau: &mut [Vec<Scalar>], basis: &mut [usize], row: usize, col: usize) {
    let piv = tableau[row][col].clone();
    debug_assert!(!piv.is_zero());
    for v in tableau[row].iter_mut() {
        *v /= &piv;
    }
    let pivot_row = tableau[row].clone();
    for (i, r) in tableau.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let factor = r[col].clone();
        for (v, pv) in r.iter_mut().zip(pivot_row.iter()) {
            *v -= &factor * pv;
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{s_frac, s_int};

    fn lp(a: Vec<Vec<i64>>, b: Vec<i64>, c: Vec<i64>) -> StandardForm {
        StandardForm {
            a: a.into_iter()
                .map(|r| r.into_iter().map(s_int).collect())
                .collect(),
            b: b.into_iter().map(s_int).collect(),
            c: c.into_iter().map(s_int).collect(),
        }
    }

    #[test]
    fn solves_a_textbook_lp() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6  (slacks s1, s2)
        // => min -x - y s.t. x + 2y + s1 = 4, 3x + y + s2 = 6.
        let p = lp(
            vec![vec![1, 2, 1, 0], vec![3, 1, 0, 1]],
            vec![4, 6],
            vec![-1, -1, 0, 0],
        );
        match solve(&p) {
            LpOutcome::Optimal(x, val) => {
                assert_eq!(val, s_frac(-14, 5));
                assert_eq!(x[0], s_frac(8, 5));
                assert_eq!(x[1], s_frac(6, 5));
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible() {
        // x = 1 and x = 2 simultaneously.
        let p = lp(vec![vec![1], vec![1]], vec![1, 2], vec![0]);
        assert_eq!(solve(&p), LpOutcome::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        // min -x s.t. x - y = 0: x can grow forever.
        let p = lp(vec![vec![1, -1]], vec![0], vec![-1, 0]);
        assert_eq!(solve(&p), LpOutcome::Unbounded);
    }

    #[test]
    fn feasibility_of_convex_combination() {
        // Is (1,1) in the convex hull of (0,0),(2,0),(0,2)?
        // lambda >= 0, sum lambda = 1, sum lambda v = (1,1).
        let a = vec![
            vec![s_int(0), s_int(2), s_int(0)],
            vec![s_int(0), s_int(0), s_int(2)],
            vec![s_int(1), s_int(1), s_int(1)],
        ];
        let b = vec![s_int(1), s_int(1), s_int(1)];
        let x = feasible_point(a, b).expect("inside");
        assert_eq!(x[1], s_frac(1, 2));
        assert_eq!(x[2], s_frac(1, 2));

        // (2,2) is outside.
        let a = vec![
            vec![s_int(0), s_int(2), s_int(0)],
            vec![s_int(0), s_int(0), s_int(2)],
            vec![s_int(1), s_int(1), s_int(1)],
        ];
        let b = vec![s_int(2), s_int(2), s_int(1)];
        assert!(feasible_point(a, b).is_none());
    }

    #[test]
    fn degenerate_redundant_rows() {
        // Duplicate constraint rows must not break phase 2.
        let p = lp(
            vec![vec![1, 1], vec![1, 1], vec![2, 2]],
            vec![2, 2, 4],
            vec![1, 0],
        );
        match solve(&p) {
            LpOutcome::Optimal(_, val) => assert_eq!(val, s_int(0)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }
}
