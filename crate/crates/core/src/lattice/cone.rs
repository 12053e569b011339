use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg;
use super::simplex;
use super::vector::LatticeVector;
use crate::error::{Error, Result};

/// Which of the two dual lattices a vector lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LatticeTag {
    N,
    M,
}

impl LatticeTag {
    pub fn dual(self) -> Self {
        match self {
            LatticeTag::N => LatticeTag::M,
            LatticeTag::M => LatticeTag::N,
        }
    }
}

impl fmt::Display for LatticeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeTag::N => "N",
            LatticeTag::M => "M",
        })
    }
}

/// A rational polyhedral cone given by primitive ray generators, none of which
/// is a nonnegative combination of the others.
///
/// Ray order is the caller's; ray indices in the public API are 1-based.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    rank: usize,
    lattice: LatticeTag,
    rays: Vec<LatticeVector>,
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone[{}^{}](", self.lattice, self.rank)?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeProperties {
    pub dimension: usize,
    pub pointed: bool,
    pub full_dimensional: bool,
}

/// A pair of rays spanning a 2-dimensional face, with a functional `m` that
/// vanishes on both and is positive on every other ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoFace {
    pub i: usize,
    pub j: usize,
    pub witness: LatticeVector,
}

fn check_rank(rank: usize, v: &LatticeVector) -> Result<()> {
    if v.rank() != rank {
        return Err(Error::DimensionMismatch { expected: rank, found: v.rank() });
    }
    Ok(())
}

impl Cone {
    /// Reduces every generator to its primitive vector and rejects zero or
    /// redundant generators.
    pub fn new(rank: usize, lattice: LatticeTag, rays: Vec<LatticeVector>) -> Result<Self> {
        let mut prim = Vec::with_capacity(rays.len());
        for r in &rays {
            check_rank(rank, r)?;
            if r.is_zero() {
                return Err(Error::ZeroRay);
            }
            prim.push(r.primitive());
        }
        let redundant = match extreme_generators(rank, &prim) {
            Some(extreme) => (0..prim.len())
                .find(|&i| !extreme[i] || prim.iter().enumerate().any(|(j, p)| j != i && *p == prim[i])),
            None => {
                let q: Vec<Vec<BigRational>> = prim.iter().map(LatticeVector::to_rational).collect();
                (0..q.len()).find(|&i| {
                    let others: Vec<Vec<BigRational>> =
                        q.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
                    simplex::in_cone(&others, &q[i])
                })
            }
        };
        match redundant {
            Some(i) => Err(Error::RedundantRay(i + 1)),
            None => Ok(Cone { rank, lattice, rays: prim }),
        }
    }

    /// Drops zero and redundant generators, scanning in order.
    pub fn from_generators(
        rank: usize,
        lattice: LatticeTag,
        gens: Vec<LatticeVector>,
    ) -> Result<Self> {
        let mut kept: Vec<LatticeVector> = Vec::new();
        for g in gens {
            check_rank(rank, &g)?;
            if g.is_zero() {
                continue;
            }
            let p = g.primitive();
            if !kept.contains(&p) {
                kept.push(p);
            }
        }
        let mut i = 0;
        while i < kept.len() {
            let others: Vec<Vec<BigRational>> = kept
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.to_rational())
                .collect();
            if simplex::in_cone(&others, &kept[i].to_rational()) {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(Cone { rank, lattice, rays: kept })
    }

    /// The positive orthant of `N_Q`, rays in standard order.
    pub fn octant(rank: usize) -> Self {
        Cone {
            rank,
            lattice: LatticeTag::N,
            rays: (0..rank).map(|i| LatticeVector::unit(rank, i)).collect(),
        }
    }

    /// `{x : <a, x> >= 0 for every a}` in canonical form.
    pub fn from_inequalities(
        rank: usize,
        lattice: LatticeTag,
        normals: &[LatticeVector],
    ) -> Result<Self> {
        for a in normals {
            check_rank(rank, a)?;
        }
        let (lin, rays) = double_description(rank, normals);
        Ok(Cone { rank, lattice, rays: canonical_generators(lin, rays) })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn lattice(&self) -> LatticeTag {
        self.lattice
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// The `i`-th ray, 1-based.
    pub fn ray(&self, i: usize) -> Result<&LatticeVector> {
        if i == 0 || i > self.rays.len() {
            return Err(Error::RayIndexOutOfRange { index: i, count: self.rays.len() });
        }
        Ok(&self.rays[i - 1])
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        let gens: Vec<Vec<BigRational>> = self.rays.iter().map(LatticeVector::to_rational).collect();
        v.rank() == self.rank && simplex::in_cone(&gens, &v.to_rational())
    }

    pub fn properties(&self) -> ConeProperties {
        let q: Vec<Vec<BigRational>> = self.rays.iter().map(LatticeVector::to_rational).collect();
        let dimension = linalg::rank(&q);
        ConeProperties {
            dimension,
            pointed: is_pointed(self.rank, &self.rays),
            full_dimensional: dimension == self.rank,
        }
    }

    /// Error unless the cone is pointed and full-dimensional.
    pub fn require_strongly_convex(&self) -> Result<()> {
        let p = self.properties();
        if !p.pointed {
            return Err(Error::NotPointed);
        }
        if !p.full_dimensional {
            return Err(Error::NotFullDimensional);
        }
        Ok(())
    }

    /// Whether the rays are exactly the canonical generators of the cone they span.
    pub fn is_saturated(&self) -> bool {
        let mut mine = self.rays.clone();
        mine.sort();
        mine == saturate(self).rays
    }

    /// The integer matrix whose rows are the rays.
    pub fn ray_matrix(&self) -> Vec<Vec<BigInt>> {
        self.rays.iter().map(|r| r.entries().to_vec()).collect()
    }
}

fn rational_rank<'a>(vs: impl Iterator<Item = &'a LatticeVector>) -> usize {
    linalg::rank(&vs.map(LatticeVector::to_rational).collect::<Vec<_>>())
}

/// A cone is pointed exactly when its dual is full-dimensional.
fn is_pointed(rank: usize, gens: &[LatticeVector]) -> bool {
    let (lin, rays) = double_description(rank, gens);
    rational_rank(lin.iter().chain(&rays)) == rank
}

/// For a pointed cone, whether each generator spans an extreme ray: exactly
/// when the dual generators vanishing on it have rank `rank - 1`. `None` when
/// the cone is not pointed.
fn extreme_generators(rank: usize, gens: &[LatticeVector]) -> Option<Vec<bool>> {
    let (lin, rays) = double_description(rank, gens);
    if rational_rank(lin.iter().chain(&rays)) < rank {
        return None;
    }
    Some(
        gens.iter()
            .map(|g| rational_rank(lin.iter().chain(rays.iter().filter(|r| g.pairing(r).is_zero()))) + 1 == rank)
            .collect(),
    )
}

/// The dual cone in the dual lattice, with canonical generators.
pub fn dual_cone(c: &Cone) -> Cone {
    let (lin, rays) = double_description(c.rank, &c.rays);
    Cone { rank: c.rank, lattice: c.lattice.dual(), rays: canonical_generators(lin, rays) }
}

/// The canonical generating set of the cone spanned by `c`: lineality basis in
/// reduced echelon form with both signs, plus extreme rays projected
/// orthogonally to the lineality space, sorted.
pub fn saturate(c: &Cone) -> Cone {
    dual_cone(&dual_cone(c))
}

pub fn cone_properties(c: &Cone) -> ConeProperties {
    c.properties()
}

/// All pairs of rays spanning a 2-face, 1-based, in lexicographic order.
pub fn two_faces(c: &Cone) -> Result<Vec<TwoFace>> {
    c.require_strongly_convex()?;
    let facets = dual_cone(c).rays;
    let k = c.rays.len();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let mut m = LatticeVector::zero(c.rank);
            for f in &facets {
                if c.rays[i].pairing(f).is_zero() && c.rays[j].pairing(f).is_zero() {
                    m = &m + f;
                }
            }
            let vanishing: Vec<usize> =
                (0..k).filter(|&l| c.rays[l].pairing(&m).is_zero()).collect();
            if vanishing == [i, j] {
                out.push(TwoFace { i: i + 1, j: j + 1, witness: m });
            }
        }
    }
    Ok(out)
}

/// gcd of the 2x2 minors of the two vectors.
pub fn minor_gcd(a: &LatticeVector, b: &LatticeVector) -> BigInt {
    let n = a.rank();
    let mut g = BigInt::zero();
    for s in 0..n {
        for t in s + 1..n {
            let minor = &a[s] * &b[t] - &a[t] * &b[s];
            g = g.gcd(&minor);
        }
    }
    g
}

/// Every 2-face is spanned by part of a lattice basis.
pub fn is_smooth_in_codim2(c: &Cone) -> Result<bool> {
    Ok(singular_two_faces(c)?.is_empty())
}

/// The 2-faces whose generators do not extend to a lattice basis.
pub fn singular_two_faces(c: &Cone) -> Result<Vec<TwoFace>> {
    Ok(two_faces(c)?
        .into_iter()
        .filter(|f| !minor_gcd(&c.rays[f.i - 1], &c.rays[f.j - 1]).is_one())
        .collect())
}

#[derive(Clone)]
struct DdRay {
    v: LatticeVector,
    zeros: Vec<bool>,
}

fn combine(a: &BigInt, x: &LatticeVector, b: &BigInt, y: &LatticeVector) -> LatticeVector {
    LatticeVector(x.0.iter().zip(&y.0).map(|(p, q)| a * p - b * q).collect()).primitive()
}

/// Double description for `{x : <a_j, x> >= 0}`; returns a lineality basis and
/// the extreme rays of the quotient, both integral.
fn double_description(
    rank: usize,
    normals: &[LatticeVector],
) -> (Vec<LatticeVector>, Vec<LatticeVector>) {
    let k = normals.len();
    let mut lin: Vec<LatticeVector> = (0..rank).map(|i| LatticeVector::unit(rank, i)).collect();
    let mut rays: Vec<DdRay> = Vec::new();
    for (idx, a) in normals.iter().enumerate() {
        if let Some(p) = lin.iter().position(|l| !a.pairing(l).is_zero()) {
            let mut l0 = lin.remove(p);
            let mut s0 = a.pairing(&l0);
            if s0.is_negative() {
                l0 = -&l0;
                s0 = -s0;
            }
            for l in lin.iter_mut() {
                let s = a.pairing(l);
                if !s.is_zero() {
                    *l = combine(&s0, l, &s, &l0);
                }
            }
            for r in rays.iter_mut() {
                let s = a.pairing(&r.v);
                if !s.is_zero() {
                    r.v = combine(&s0, &r.v, &s, &l0);
                }
                r.zeros[idx] = true;
            }
            let mut zeros = vec![false; k];
            zeros[..idx].iter_mut().for_each(|z| *z = true);
            rays.push(DdRay { v: l0, zeros });
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| a.pairing(&r.v)).collect();
        let mut next: Vec<DdRay> = Vec::new();
        for (r, s) in rays.iter().zip(&vals) {
            if !s.is_negative() {
                let mut r = r.clone();
                if s.is_zero() {
                    r.zeros[idx] = true;
                }
                next.push(r);
            }
        }
        for (pi, p) in rays.iter().enumerate() {
            if !vals[pi].is_positive() {
                continue;
            }
            for (ni, n) in rays.iter().enumerate() {
                if !vals[ni].is_negative() {
                    continue;
                }
                let common: Vec<bool> = p.zeros.iter().zip(&n.zeros).map(|(x, y)| *x && *y).collect();
                let adjacent = rays.iter().enumerate().all(|(oi, o)| {
                    oi == pi
                        || oi == ni
                        || common.iter().zip(&o.zeros).any(|(c, z)| *c && !*z)
                });
                if adjacent {
                    let v = combine(&vals[pi], &n.v, &vals[ni], &p.v);
                    let mut zeros = common;
                    zeros[idx] = true;
                    next.push(DdRay { v, zeros });
                }
            }
        }
        rays = next;
    }
    (lin, rays.into_iter().map(|r| r.v).collect())
}

fn canonical_generators(
    lin: Vec<LatticeVector>,
    rays: Vec<LatticeVector>,
) -> Vec<LatticeVector> {
    let mut out: Vec<LatticeVector> = Vec::new();
    if lin.is_empty() {
        out = rays.into_iter().map(|r| r.primitive()).collect();
    } else {
        let mut basis: Vec<Vec<BigRational>> = lin.iter().map(LatticeVector::to_rational).collect();
        let piv = linalg::rref(&mut basis);
        basis.truncate(piv.len());
        let basis_int: Vec<LatticeVector> =
            basis.iter().map(|b| LatticeVector::primitive_from_rational(b)).collect();
        let gram: Vec<Vec<BigRational>> = basis
            .iter()
            .map(|x| basis.iter().map(|y| dot(x, y)).collect())
            .collect();
        let gram_inv = linalg::inverse(&gram).expect("lineality basis is independent");
        for r in rays {
            let rq = r.to_rational();
            let coeffs = linalg::mat_vec(&gram_inv, &basis.iter().map(|b| dot(b, &rq)).collect::<Vec<_>>());
            let mut proj = rq.clone();
            for (c, b) in coeffs.iter().zip(&basis) {
                for (x, y) in proj.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
            if proj.iter().any(|x| !x.is_zero()) {
                out.push(LatticeVector::primitive_from_rational(&proj));
            }
        }
        for b in basis_int {
            out.push(-&b);
            out.push(b);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn dot(x: &[BigRational], y: &[BigRational]) -> BigRational {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
