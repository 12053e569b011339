use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::vector::LatticeVector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Eq,
    Ge,
    Gt,
}

/// `<normal, m> (relation) rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub normal: LatticeVector,
    pub relation: Relation,
    #[serde(with = "crate::serial::bigint")]
    pub rhs: BigInt,
}

impl Constraint {
    pub fn new(normal: LatticeVector, relation: Relation, rhs: i64) -> Self {
        Constraint { normal, relation, rhs: BigInt::from(rhs) }
    }

    pub fn holds(&self, m: &LatticeVector) -> bool {
        let v = self.normal.pairing(m) - &self.rhs;
        match self.relation {
            Relation::Eq => v.is_zero(),
            Relation::Ge => !v.is_negative(),
            Relation::Gt => v.is_positive(),
        }
    }
}

/// Every integer point of sup norm at most `bound` satisfying all constraints,
/// in lexicographic order.
pub fn lattice_points_in(
    dim: usize,
    constraints: &[Constraint],
    bound: u32,
) -> Result<Vec<LatticeVector>> {
    for c in constraints {
        if c.normal.rank() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: c.normal.rank() });
        }
    }
    let b = i64::from(bound);
    let mut out = Vec::new();
    let mut cur = vec![-b; dim];
    loop {
        let v = LatticeVector::from_i64(&cur);
        if constraints.iter().all(|c| c.holds(&v)) {
            out.push(v);
        }
        let mut k = dim;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if cur[k] < b {
                cur[k] += 1;
                cur[k + 1..].iter_mut().for_each(|x| *x = -b);
                break;
            }
        }
    }
}
