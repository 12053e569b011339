//! Exact feasibility for `{x >= 0 : A x = b}` by a phase-one simplex with
//! Bland's rule, so termination does not depend on degeneracy.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A nonnegative solution of `a x = b`, or `None` if the system is infeasible.
pub fn feasible_point(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = Vec::with_capacity(width);
        for j in 0..n {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { BigRational::one() } else { BigRational::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let mut cost = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    t.push(cost);
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let lhs = &t[i][width - 1] * &t[l][enter];
                        let rhs = &t[l][width - 1] * &t[i][enter];
                        lhs < rhs || (lhs == rhs && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let Some(p) = leave else {
            // Phase one is bounded below by zero.
            unreachable!("unbounded phase-one objective");
        };
        pivot(&mut t, p, enter);
        basis[p] = enter;
    }
    if !t[m][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], p: usize, q: usize) {
    let inv = BigRational::one() / &t[p][q];
    for x in t[p].iter_mut() {
        *x *= &inv;
    }
    let prow = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == p || row[q].is_zero() {
            continue;
        }
        let f = row[q].clone();
        for (x, y) in row.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}

/// Whether `target` is a nonnegative combination of `gens`.
pub fn in_cone(gens: &[Vec<BigRational>], target: &[BigRational]) -> bool {
    let rows = target.len();
    let a: Vec<Vec<BigRational>> =
        (0..rows).map(|i| gens.iter().map(|g| g[i].clone()).collect()).collect();
    feasible_point(&a, target).is_some()
}

/// Whether `target` is a convex combination of `pts`.
pub fn in_convex_hull(pts: &[Vec<BigRational>], target: &[BigRational]) -> bool {
    if pts.is_empty() {
        return false;
    }
    let rows = target.len();
    let mut a: Vec<Vec<BigRational>> =
        (0..rows).map(|i| pts.iter().map(|g| g[i].clone()).collect()).collect();
    a.push(vec![BigRational::one(); pts.len()]);
    let mut b = target.to_vec();
    b.push(BigRational::one());
    feasible_point(&a, &b).is_some()
}
