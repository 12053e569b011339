//! Demazure roots: lattice points `e` of `M` with `<rho_i, e> = -1` for one
//! ray and `<rho_j, e> >= 0` for the rest.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{lattice_points_in, Cone, Constraint, LatticeVector, Relation};

/// A root `e` of the cone together with its distinguished ray (1-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RootDatum {
    pub ray_index: usize,
    pub e: LatticeVector,
}

impl RootDatum {
    pub fn new(sigma: &Cone, ray_index: usize, e: LatticeVector) -> Result<Self> {
        match is_demazure_root(sigma, &e)? {
            Some(i) if i == ray_index => Ok(RootDatum { ray_index, e }),
            _ => Err(Error::NotARoot(format!("{e} for ray {ray_index}"))),
        }
    }

    /// The distinguished ray.
    pub fn rho<'a>(&self, sigma: &'a Cone) -> &'a LatticeVector {
        &sigma.rays()[self.ray_index - 1]
    }
}

/// The constraint system cutting out `S_i` inside `M`.
pub fn demazure_facet(sigma: &Cone, i: usize) -> Result<Vec<Constraint>> {
    sigma.ray(i)?;
    Ok(sigma
        .rays()
        .iter()
        .enumerate()
        .map(|(j, r)| {
            if j + 1 == i {
                Constraint::new(r.clone(), Relation::Eq, -1)
            } else {
                Constraint::new(r.clone(), Relation::Ge, 0)
            }
        })
        .collect())
}

/// The distinguished ray of `e` if it is a root, else `None`.
pub fn is_demazure_root(sigma: &Cone, e: &LatticeVector) -> Result<Option<usize>> {
    if e.rank() != sigma.rank() {
        return Err(Error::DimensionMismatch { expected: sigma.rank(), found: e.rank() });
    }
    let minus_one = -BigInt::one();
    let mut distinguished = None;
    for (j, r) in sigma.rays().iter().enumerate() {
        let p = r.pairing(e);
        if p == minus_one && distinguished.is_none() {
            distinguished = Some(j + 1);
        } else if p.is_negative() {
            return Ok(None);
        }
    }
    Ok(distinguished)
}

/// Roots of sup norm at most `bound`, grouped by ray index, each group in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEnumeration {
    pub bound: u32,
    pub roots: Vec<RootDatum>,
}

impl RootEnumeration {
    pub fn for_ray(&self, i: usize) -> impl Iterator<Item = &LatticeVector> {
        self.roots.iter().filter(move |r| r.ray_index == i).map(|r| &r.e)
    }
}

pub fn enumerate_roots(sigma: &Cone, bound: u32) -> Result<RootEnumeration> {
    let box_points = lattice_points_in(sigma.rank(), &[], bound)?;
    let mut roots = Vec::new();
    for e in box_points {
        if let Some(i) = is_demazure_root(sigma, &e)? {
            roots.push(RootDatum { ray_index: i, e });
        }
    }
    roots.sort();
    Ok(RootEnumeration { bound, roots })
}

/// Whether `m` lies in the dual cone.
pub fn in_dual(sigma: &Cone, m: &LatticeVector) -> bool {
    sigma.rays().iter().all(|r| !r.pairing(m).is_negative())
}

/// Whether `m` lies in the facet `tau_i` of the dual cone orthogonal to ray `i`.
pub fn in_dual_facet(sigma: &Cone, i: usize, m: &LatticeVector) -> bool {
    in_dual(sigma, m) && sigma.rays()[i - 1].pairing(m).is_zero()
}
