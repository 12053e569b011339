#![allow(dead_code)]

use demazure::lattice::{Cone, LatticeTag};
use demazure::{BigRational, LatticeVector};

pub fn cone(rays: &[&[i64]]) -> Cone {
    let rank = rays[0].len();
    Cone::new(rank, LatticeTag::N, rays.iter().map(|r| LatticeVector::from_i64(r)).collect()).unwrap()
}

pub fn quadrant() -> Cone {
    Cone::octant(2)
}

/// Rays e1, e2, e3, e1 + e2 - e3: smooth in codimension 2, class group Z.
pub fn singular_threefold() -> Cone {
    cone(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, -1]])
}

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

pub fn qi(p: i64) -> BigRational {
    BigRational::from_integer(p.into())
}

pub fn v(x: &[i64]) -> LatticeVector {
    LatticeVector::from_i64(x)
}

