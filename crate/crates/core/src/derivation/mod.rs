//! Homogeneous derivations `d_{rho,e}(chi^m) = <rho, m> chi^{m+e}` and finite
//! sums of them.

mod algebra;
pub(crate) mod lnd;
mod newton;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use algebra::{evaluate_monomial, AlgebraElement};
pub use lnd::{
    algebra_generators, GeneratingMonomials,
    certify_lnd, is_lnd_homogeneous, kernel_facet, nilpotency_steps, preserves_algebra, replica,
    LndStatus,
};
pub use newton::{face_restriction, newton_polytope, principal_part, NewtonPolytope};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::scalar::Field;
use crate::Rational;

/// `lambda * d_{rho,e}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousComponent<F> {
    pub lambda: F,
    pub rho: LatticeVector,
    pub e: LatticeVector,
}

impl<F: Field> HomogeneousComponent<F> {
    pub fn new(lambda: F, rho: LatticeVector, e: LatticeVector) -> Self {
        HomogeneousComponent { lambda, rho, e }
    }

    /// `d_{rho,e}`.
    pub fn unit(rho: LatticeVector, e: LatticeVector) -> Self {
        HomogeneousComponent { lambda: F::one(), rho, e }
    }

    /// The coefficient form `lambda * rho`.
    pub fn form(&self) -> Vec<F> {
        self.rho.entries().iter().map(|r| F::from_integer(r) * self.lambda.clone()).collect()
    }
}

/// A finite sum of homogeneous derivations of the Laurent ring `K[M]`.
///
/// Each degree `e` carries one coefficient form `w` in `F (x) N`, so that the
/// component acts as `chi^m -> <w, m> chi^{m+e}`; forms are never zero.
#[derive(Clone, PartialEq)]
pub struct Derivation<F> {
    rank: usize,
    parts: BTreeMap<LatticeVector, Vec<F>>,
}

pub(crate) fn pair_form<F: Field>(w: &[F], m: &LatticeVector) -> F {
    m.pair_with(w)
}

fn form_is_zero<F: Field>(w: &[F]) -> bool {
    w.iter().all(Zero::is_zero)
}

impl<F: Field> Derivation<F> {
    pub fn zero(rank: usize) -> Self {
        Derivation { rank, parts: BTreeMap::new() }
    }

    pub fn from_component(c: &HomogeneousComponent<F>) -> Self {
        let mut d = Self::zero(c.e.rank());
        d.add_form(c.e.clone(), c.form());
        d
    }

    pub fn from_components<'a>(
        rank: usize,
        cs: impl IntoIterator<Item = &'a HomogeneousComponent<F>>,
    ) -> Result<Self> {
        let mut d = Self::zero(rank);
        for c in cs {
            if c.e.rank() != rank || c.rho.rank() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: c.e.rank() });
            }
            d.add_form(c.e.clone(), c.form());
        }
        Ok(d)
    }

    /// The component of degree `e` with coefficient form `w`.
    pub fn from_form(e: LatticeVector, w: Vec<F>) -> Self {
        let mut d = Self::zero(e.rank());
        d.add_form(e, w);
        d
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parts.len() <= 1
    }

    /// Degrees with a nonzero component, in lexicographic order.
    pub fn support(&self) -> Vec<LatticeVector> {
        self.parts.keys().cloned().collect()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&LatticeVector, &Vec<F>)> {
        self.parts.iter()
    }

    pub fn form(&self, e: &LatticeVector) -> Option<&Vec<F>> {
        self.parts.get(e)
    }

    pub fn add_form(&mut self, e: LatticeVector, w: Vec<F>) {
        if form_is_zero(&w) {
            return;
        }
        match self.parts.get_mut(&e) {
            Some(x) => {
                for (a, b) in x.iter_mut().zip(w) {
                    *a = a.clone() + b;
                }
                if form_is_zero(x) {
                    self.parts.remove(&e);
                }
            }
            None => {
                self.parts.insert(e, w);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, w) in &other.parts {
            out.add_form(e.clone(), w.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, k: &F) -> Self {
        let mut out = Self::zero(self.rank);
        for (e, w) in &self.parts {
            out.add_form(e.clone(), w.iter().map(|x| x.clone() * k.clone()).collect());
        }
        out
    }

    /// The sub-sum of components whose degree satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&LatticeVector) -> bool) -> Self {
        Derivation {
            rank: self.rank,
            parts: self.parts.iter().filter(|(e, _)| keep(e)).map(|(e, w)| (e.clone(), w.clone())).collect(),
        }
    }

    /// Action on the Laurent ring; no membership checks.
    pub fn apply(&self, f: &AlgebraElement<F>) -> AlgebraElement<F> {
        let mut out = AlgebraElement::zero(self.rank);
        for (m, c) in f.terms() {
            for (e, w) in &self.parts {
                let p = pair_form(w, m);
                if !p.is_zero() {
                    out.add_term(m + e, c.clone() * p);
                }
            }
        }
        out
    }

    /// `d^k(f)`.
    pub fn apply_power(&self, f: &AlgebraElement<F>, k: usize) -> AlgebraElement<F> {
        let mut g = f.clone();
        for _ in 0..k {
            if g.is_zero() {
                break;
            }
            g = self.apply(&g);
        }
        g
    }

    /// Multiplication by a Laurent polynomial `a`: `(a d)(f) = a * d(f)`.
    pub fn left_multiply(&self, a: &AlgebraElement<F>) -> Self {
        let mut out = Self::zero(self.rank);
        for (n, c) in a.terms() {
            for (e, w) in &self.parts {
                out.add_form(n + e, w.iter().map(|x| x.clone() * c.clone()).collect());
            }
        }
        out
    }
}

/// `[d1, d2] = d1 d2 - d2 d1`, computed componentwise by
/// `[d_{w,e}, d_{w',e'}] = d_{<w,e'> w' - <w',e> w, e+e'}`.
pub fn commutator<F: Field>(a: &Derivation<F>, b: &Derivation<F>) -> Result<Derivation<F>> {
    if a.rank != b.rank {
        return Err(Error::DimensionMismatch { expected: a.rank, found: b.rank });
    }
    let mut out = Derivation::zero(a.rank);
    for (e, w) in &a.parts {
        for (f, v) in &b.parts {
            let we = pair_form(w, f);
            let ve = pair_form(v, e);
            let form: Vec<F> = v
                .iter()
                .zip(w)
                .map(|(vi, wi)| we.clone() * vi.clone() - ve.clone() * wi.clone())
                .collect();
            out.add_form(e + f, form);
        }
    }
    Ok(out)
}

/// `ad_U^m(V)`.
pub fn ad_power<F: Field>(u: &Derivation<F>, v: &Derivation<F>, m: usize) -> Result<Derivation<F>> {
    let mut acc = v.clone();
    for _ in 0..m {
        if acc.is_zero() {
            break;
        }
        acc = commutator(u, &acc)?;
    }
    Ok(acc)
}

impl Derivation<Rational> {
    /// Components in canonical form: `rho` primitive with its first nonzero
    /// entry positive, all scaling carried by `lambda`.
    pub fn homogeneous_components(&self) -> Vec<HomogeneousComponent<Rational>> {
        self.parts
            .iter()
            .map(|(e, w)| {
                let rho = LatticeVector::primitive_from_rational(w);
                let rho = if rho.entries().iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
                    -&rho
                } else {
                    rho
                };
                let k = rho.entries().iter().position(|x| !x.is_zero()).expect("nonzero form");
                let lambda = &w[k] / BigRational::from_integer(rho[k].clone());
                HomogeneousComponent { lambda, rho, e: e.clone() }
            })
            .collect()
    }

    /// The least common denominator of all coefficients.
    pub fn denominator(&self) -> BigInt {
        self.parts
            .values()
            .flatten()
            .fold(BigInt::one(), |l, q| l.lcm(q.denom()))
    }
}

impl<F: fmt::Debug> fmt::Debug for Derivation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.parts.iter()).finish()
    }
}
