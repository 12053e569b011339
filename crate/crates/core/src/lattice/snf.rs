//! Smith normal form with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `left * a * right == diag(diagonal)` with `left`, `right` unimodular.
///
/// `diagonal` has length `min(rows, cols)`, is nonnegative, and each entry
/// divides the next; zeros come last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub rows: usize,
    pub cols: usize,
    pub left: IntMatrix,
    pub diagonal: Vec<BigInt>,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }
}

pub fn int_identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn int_mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn int_mat_vec(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn row_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let (s, d) = if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    };
    for (x, y) in d.iter_mut().zip(s) {
        *x -= q * y;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let delta = q * &row[src];
        row[dst] -= delta;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn smith_normal_form(a: &[Vec<BigInt>], cols: usize) -> SmithDecomposition {
    let rows = a.len();
    let mut d: IntMatrix = a.to_vec();
    let mut left = int_identity(rows);
    let mut right = int_identity(cols);
    let steps = rows.min(cols);
    'outer: for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            d.swap(t, pi);
            left.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut right, t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut left, i, t, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut right, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !d[i][j].is_multiple_of(&d[t][t]))
            });
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut left, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in left[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let diagonal = (0..steps).map(|t| d[t][t].clone()).collect();
    SmithDecomposition { rows, cols, left, diagonal, right }
}

/// An integer solution of `a x = b`, if one exists.
pub fn solve_integer(a: &[Vec<BigInt>], cols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith_normal_form(a, cols);
    let lb = int_mat_vec(&s.left, b);
    let mut y = vec![BigInt::zero(); cols];
    for (i, v) in lb.iter().enumerate() {
        match s.diagonal.get(i) {
            Some(di) if !di.is_zero() => {
                if !v.is_multiple_of(di) {
                    return None;
                }
                y[i] = v / di;
            }
            _ => {
                if !v.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(int_mat_vec(&s.right, &y))
}

/// A basis of the integer kernel `{x in Z^cols : a x = 0}`.
pub fn integer_kernel(a: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(a, cols);
    let r = s.rank();
    (r..cols).map(|j| s.right.iter().map(|row| row[j].clone()).collect()).collect()
}
