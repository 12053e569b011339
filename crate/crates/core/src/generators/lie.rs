use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::linalg;
use crate::roots::RootDatum;
use crate::Rational;

type Matrix = Vec<Vec<Rational>>;

/// The Lie algebra generated by a set of matrices: its dimension and a basis
/// made of the generators and iterated brackets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieClosure {
    pub dimension: usize,
    #[serde(with = "basis_serde")]
    pub basis: Vec<Matrix>,
}

mod basis_serde {
    use super::Matrix;
    use crate::serial::Rat;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(b: &[Matrix], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<Vec<Rat>>> =
            b.iter().map(|m| m.iter().map(|r| r.iter().cloned().map(Rat).collect()).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Matrix>, D::Error> {
        let v: Vec<Vec<Vec<Rat>>> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|m| m.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect()).collect())
    }
}

fn bracket(a: &Matrix, b: &Matrix) -> Matrix {
    let ab = linalg::mat_mul(a, b);
    let ba = linalg::mat_mul(b, a);
    ab.into_iter().zip(ba).map(|(r, s)| r.into_iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

/// Incrementally row-reduced span of flattened matrices.
struct Span {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Span {
    /// Reduces `v` against the span; adds and returns true if independent.
    fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let k = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x = x.clone() - k.clone() * y.clone();
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Rational::one() / v[p].clone();
        for x in v.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let k = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x = x.clone() - k.clone() * y.clone();
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Closes the span of `mats` under commutators.
pub fn lie_closure(mats: &[Matrix]) -> Result<LieClosure> {
    let Some(n) = mats.first().map(Vec::len) else {
        return Ok(LieClosure { dimension: 0, basis: Vec::new() });
    };
    for m in mats {
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: m.len() });
        }
    }
    let mut span = Span { rows: Vec::new() };
    let mut basis: Vec<Matrix> = Vec::new();
    for m in mats {
        if span.insert(m.concat()) {
            basis.push(m.clone());
        }
    }
    let mut i = 0;
    while i < basis.len() {
        for j in 0..i {
            let c = bracket(&basis[i], &basis[j]);
            if span.insert(c.concat()) {
                basis.push(c);
            }
        }
        i += 1;
    }
    Ok(LieClosure { dimension: basis.len(), basis })
}

pub fn matrix_is_nilpotent(y: &Matrix) -> bool {
    let n = y.len();
    let mut p = y.clone();
    for _ in 1..n {
        p = linalg::mat_mul(&p, y);
    }
    p.iter().flatten().all(Zero::is_zero)
}

/// The infinitesimal generator `E_ij` of the linear root subgroup
/// `x_i -> x_i + t x_j`, for roots `-eps_i + eps_j` of the octant.
pub fn linear_generator(root: &RootDatum) -> Option<Matrix> {
    let e = root.e.entries();
    let n = e.len();
    let i = e.iter().position(|x| *x == -num_bigint::BigInt::one())?;
    let positive: Vec<usize> = (0..n).filter(|&j| e[j].is_positive()).collect();
    if positive.len() != 1 || !e[positive[0]].is_one() || e.iter().filter(|x| !x.is_zero()).count() != 2 {
        return None;
    }
    let mut m = vec![vec![Rational::zero(); n]; n];
    m[i][positive[0]] = Rational::one();
    Some(m)
}
