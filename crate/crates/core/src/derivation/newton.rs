use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::Derivation;
use crate::error::{Error, Result};
use crate::lattice::simplex::in_convex_hull;
use crate::lattice::LatticeVector;
use crate::scalar::Field;

/// Convex hull of the degrees of a derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolytope {
    pub support: Vec<LatticeVector>,
    pub vertices: Vec<LatticeVector>,
}

impl NewtonPolytope {
    /// Whether the polytope is the lattice segment between two points.
    pub fn is_segment(&self, a: &LatticeVector, b: &LatticeVector) -> bool {
        let mut v = self.vertices.clone();
        v.sort();
        let mut w = vec![a.clone(), b.clone()];
        w.sort();
        v == w
    }
}

/// Vertices are the support points outside the hull of the remaining ones.
pub fn newton_polytope<F: Field>(d: &Derivation<F>) -> Result<NewtonPolytope> {
    if d.is_zero() {
        return Err(Error::InvalidArgument("zero derivation has no Newton polytope".into()));
    }
    let support = d.support();
    let q: Vec<Vec<BigRational>> = support.iter().map(LatticeVector::to_rational).collect();
    let vertices = (0..q.len())
        .filter(|&i| {
            let others: Vec<Vec<BigRational>> =
                q.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
            !in_convex_hull(&others, &q[i])
        })
        .map(|i| support[i].clone())
        .collect();
    Ok(NewtonPolytope { support, vertices })
}

/// The sum of components on the face `{<l, e> = k}`, which must support the
/// polytope: `<l, e> <= k` everywhere with equality somewhere.
pub fn face_restriction<F: Field>(d: &Derivation<F>, l: &LatticeVector, k: &BigInt) -> Result<Derivation<F>> {
    if l.rank() != d.rank() {
        return Err(Error::DimensionMismatch { expected: d.rank(), found: l.rank() });
    }
    let vals: Vec<BigInt> = d.support().iter().map(|e| l.pairing(e)).collect();
    match vals.iter().max() {
        Some(max) if max == k => Ok(d.filter(|e| &l.pairing(e) == k)),
        Some(_) => Err(Error::NotSupporting(format!("<{l}, .> = {k}"))),
        None => Err(Error::InvalidArgument("zero derivation".into())),
    }
}

/// The face of the Newton polytope on which `<rho_t, .>` is maximal, with that
/// maximum.
pub fn principal_part<F: Field>(d: &Derivation<F>, rho_t: &LatticeVector) -> Result<(Derivation<F>, BigInt)> {
    if rho_t.rank() != d.rank() {
        return Err(Error::DimensionMismatch { expected: d.rank(), found: rho_t.rank() });
    }
    let Some(max) = d.support().iter().map(|e| rho_t.pairing(e)).max() else {
        return Err(Error::InvalidArgument("zero derivation".into()));
    };
    Ok((d.filter(|e| rho_t.pairing(e) == max), max))
}
