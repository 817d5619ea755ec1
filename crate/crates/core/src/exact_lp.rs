//! Exact feasibility of `M x = b, x >= 0` over the rationals.
//!
//! Phase-1 simplex with Bland's rule. Every answer carries a certificate:
//! a witness `x`, or a Farkas vector `y` with `y^T M <= 0` and `y^T b > 0`.

use num_traits::{One, Signed, Zero};

use crate::error::LpError;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLinearSystem {
    pub cols: usize,
    pub m: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityResult {
    Feasible(Vec<Rational>),
    Infeasible(Vec<Rational>),
}

impl RationalLinearSystem {
    pub fn new(cols: usize, m: Vec<Vec<Rational>>, b: Vec<Rational>) -> Result<Self, LpError> {
        if m.len() != b.len() {
            return Err(LpError::DimensionMismatch {
                rows: m.len(),
                rhs: b.len(),
            });
        }
        for (row, r) in m.iter().enumerate() {
            if r.len() != cols {
                return Err(LpError::Ragged {
                    row,
                    found: r.len(),
                    expected: cols,
                });
            }
        }
        Ok(Self { cols, m, b })
    }

    pub fn from_i64(m: &[Vec<i64>], b: &[i64]) -> Result<Self, LpError> {
        let cols = m.first().map_or(0, |r| r.len());
        let conv = |x: &i64| Rational::from_integer((*x).into());
        Self::new(
            cols,
            m.iter().map(|r| r.iter().map(conv).collect()).collect(),
            b.iter().map(conv).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.m.len()
    }

    pub fn push_row(&mut self, row: Vec<Rational>, rhs: Rational) {
        assert_eq!(row.len(), self.cols, "row width");
        self.m.push(row);
        self.b.push(rhs);
    }
}

pub fn verify_witness(sys: &RationalLinearSystem, x: &[Rational]) -> bool {
    x.len() == sys.cols
        && x.iter().all(|v| !v.is_negative())
        && sys.m.iter().zip(&sys.b).all(|(row, bi)| {
            let lhs: Rational = row.iter().zip(x).map(|(a, v)| a * v).sum();
            &lhs == bi
        })
}

pub fn verify_farkas(sys: &RationalLinearSystem, y: &[Rational]) -> bool {
    if y.len() != sys.rows() {
        return false;
    }
    let yb: Rational = y.iter().zip(&sys.b).map(|(a, b)| a * b).sum();
    if !yb.is_positive() {
        return false;
    }
    (0..sys.cols).all(|j| {
        let s: Rational = y.iter().zip(&sys.m).map(|(yi, row)| yi * &row[j]).sum();
        !s.is_positive()
    })
}

/// Phase-1 simplex. Artificial variables start basic; the objective row
/// holds reduced costs for every column, so at the optimum the dual vector
/// is read off the artificial columns.
pub fn feasible_nonnegative(sys: &RationalLinearSystem) -> FeasibilityResult {
    let rows = sys.rows();
    let n = sys.cols;
    if rows == 0 {
        return FeasibilityResult::Feasible(vec![Rational::zero(); n]);
    }
    let width = n + rows;
    let mut flipped = vec![false; rows];
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    let mut rhs: Vec<Rational> = Vec::with_capacity(rows);
    for i in 0..rows {
        let neg = sys.b[i].is_negative();
        flipped[i] = neg;
        let mut row: Vec<Rational> = sys.m[i]
            .iter()
            .map(|a| if neg { -a.clone() } else { a.clone() })
            .collect();
        row.extend((0..rows).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        t.push(row);
        rhs.push(if neg { -sys.b[i].clone() } else { sys.b[i].clone() });
    }
    let mut basis: Vec<usize> = (n..width).collect();
    // Reduced costs of minimizing the sum of artificials.
    let mut cost: Vec<Rational> = (0..width)
        .map(|j| {
            if j < n {
                -(0..rows).map(|i| t[i][j].clone()).sum::<Rational>()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let mut value: Rational = rhs.iter().sum();

    loop {
        let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &rhs[i] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // The phase-1 objective is bounded below by zero, so a pivot row
        // always exists.
        let (r, _) = leave.expect("phase-1 objective is bounded");
        let p = t[r][enter].clone();
        for x in t[r].iter_mut() {
            *x /= &p;
        }
        rhs[r] /= &p;
        let pivot_row = t[r].clone();
        let pivot_rhs = rhs[r].clone();
        for i in 0..rows {
            if i == r || t[i][enter].is_zero() {
                continue;
            }
            let f = t[i][enter].clone();
            for (x, pr) in t[i].iter_mut().zip(&pivot_row) {
                *x -= &f * pr;
            }
            rhs[i] -= &f * &pivot_rhs;
        }
        let f = cost[enter].clone();
        for (x, pr) in cost.iter_mut().zip(&pivot_row) {
            *x -= &f * pr;
        }
        value += &f * &pivot_rhs;
        basis[r] = enter;
    }

    if value.is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = rhs[i].clone();
            }
        }
        FeasibilityResult::Feasible(x)
    } else {
        // y_i = c_{a_i} - d_{a_i} = 1 - d_{a_i}, then undo the row flips.
        let y = (0..rows)
            .map(|i| {
                let yi = Rational::one() - &cost[n + i];
                if flipped[i] {
                    -yi
                } else {
                    yi
                }
            })
            .collect();
        FeasibilityResult::Infeasible(y)
    }
}

/// Rank by exact Gaussian elimination.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &piv;
            for k in c..cols {
                let d = &f * &a[r][k];
                a[i][k] -= d;
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// A basis of the right null space.
pub fn null_space(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for k in 0..cols {
            a[r][k] /= &piv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..cols {
                    let d = &f * &a[r][k];
                    a[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn x_equals_2x_infeasible() {
        // x - 2x = 0, x = 1
        let sys = RationalLinearSystem::from_i64(&[vec![-1], vec![1]], &[0, 1]).unwrap();
        match feasible_nonnegative(&sys) {
            FeasibilityResult::Infeasible(y) => assert!(verify_farkas(&sys, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn half_half() {
        let sys = RationalLinearSystem::from_i64(&[vec![1, -1], vec![1, 1]], &[0, 1]).unwrap();
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(
            feasible_nonnegative(&sys),
            FeasibilityResult::Feasible(vec![half.clone(), half])
        );
    }

    #[test]
    fn negative_rhs_flip() {
        // -x = -3
        let sys = RationalLinearSystem::from_i64(&[vec![-1]], &[-3]).unwrap();
        assert_eq!(feasible_nonnegative(&sys), FeasibilityResult::Feasible(vec![q(3)]));
        // x = -3 has no nonnegative solution
        let sys = RationalLinearSystem::from_i64(&[vec![1]], &[-3]).unwrap();
        match feasible_nonnegative(&sys) {
            FeasibilityResult::Infeasible(y) => assert!(verify_farkas(&sys, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(
            RationalLinearSystem::new(1, vec![vec![q(1)]], vec![]),
            Err(LpError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            RationalLinearSystem::new(2, vec![vec![q(1)]], vec![q(0)]),
            Err(LpError::Ragged { .. })
        ));
    }

    #[test]
    fn rank_and_null_space() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        assert_eq!(rank(&rows), 1);
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for r in &rows {
                let s: Rational = r.iter().zip(&v).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
    }
}
