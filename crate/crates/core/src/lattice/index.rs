use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::linalg;
use super::snf::smith_normal_form;
use super::vector::LatticeVector;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeIndex {
    Finite(#[serde(with = "crate::serial::bigint")] BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn is_one(&self) -> bool {
        matches!(self, LatticeIndex::Finite(d) if d.is_one())
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(d) => Some(d),
            LatticeIndex::Infinite => None,
        }
    }
}

/// A basis of the subgroup generated by `gens`.
pub fn lattice_basis(gens: &[LatticeVector], dim: usize) -> Vec<LatticeVector> {
    if gens.is_empty() {
        return Vec::new();
    }
    let a: Vec<Vec<BigInt>> = gens.iter().map(|g| g.entries().to_vec()).collect();
    let s = smith_normal_form(&a, dim);
    let right_q: Vec<Vec<BigRational>> = s
        .right
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let inv = linalg::inverse(&right_q).expect("unimodular");
    let inv_int: Vec<Vec<BigInt>> =
        inv.iter().map(|row| row.iter().map(|q| q.to_integer()).collect()).collect();
    let scaled: Vec<Vec<BigInt>> = (0..s.rank())
        .map(|i| inv_int[i].iter().map(|x| x * &s.diagonal[i]).collect())
        .collect();
    scaled.into_iter().map(LatticeVector::new).collect()
}

/// Index of the subgroup generated by `generators` in the one generated by
/// `ambient`; the generators must lie in the latter.
pub fn lattice_index(generators: &[LatticeVector], ambient: &[LatticeVector]) -> Result<LatticeIndex> {
    let Some(dim) = ambient.first().or(generators.first()).map(LatticeVector::rank) else {
        return Ok(LatticeIndex::Finite(BigInt::one()));
    };
    for v in generators.iter().chain(ambient) {
        if v.rank() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.rank() });
        }
    }
    let basis = lattice_basis(ambient, dim);
    let r = basis.len();
    let bt: Vec<Vec<BigRational>> =
        (0..dim).map(|i| basis.iter().map(|b| BigRational::from_integer(b[i].clone())).collect()).collect();
    let mut coords: Vec<Vec<BigInt>> = Vec::with_capacity(generators.len());
    for g in generators {
        let x = linalg::solve(&bt, &g.to_rational()).ok_or(Error::NotContained)?;
        if x.iter().any(|q| !q.is_integer()) {
            return Err(Error::NotContained);
        }
        coords.push(x.iter().map(|q| q.to_integer()).collect());
    }
    if r == 0 {
        return Ok(LatticeIndex::Finite(BigInt::one()));
    }
    let s = smith_normal_form(&coords, r);
    if s.rank() < r {
        return Ok(LatticeIndex::Infinite);
    }
    Ok(LatticeIndex::Finite(s.diagonal.iter().fold(BigInt::one(), |acc, d| acc * d)))
}

/// A basis of `{m : <rho, m> = 0}` in the integer lattice.
pub fn orthogonal_lattice(rho: &[LatticeVector], dim: usize) -> Vec<LatticeVector> {
    let a: Vec<Vec<BigInt>> = rho.iter().map(|r| r.entries().to_vec()).collect();
    if a.is_empty() {
        return (0..dim).map(|i| LatticeVector::unit(dim, i)).collect();
    }
    super::snf::integer_kernel(&a, dim).into_iter().map(LatticeVector::new).collect()
}
