use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{Cone, LatticeVector};
use crate::roots::in_dual;
use crate::scalar::Field;

/// A finite linear combination of characters `chi^m`, `m` in `M`.
///
/// Zero coefficients are never stored. Membership in `A = K[sigma^v cap M]`
/// is a property checked against a cone, not an invariant of the type.
#[derive(Clone, PartialEq)]
pub struct AlgebraElement<F> {
    rank: usize,
    terms: BTreeMap<LatticeVector, F>,
}

impl<F: Field> AlgebraElement<F> {
    pub fn zero(rank: usize) -> Self {
        AlgebraElement { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(LatticeVector::zero(rank), F::one())
    }

    pub fn monomial(m: LatticeVector, c: F) -> Self {
        let rank = m.rank();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        AlgebraElement { rank, terms }
    }

    pub fn character(m: LatticeVector) -> Self {
        Self::monomial(m, F::one())
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (LatticeVector, F)>) -> Self {
        let mut out = Self::zero(rank);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &F)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &LatticeVector) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: LatticeVector, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = x.clone() + c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &F) -> Self {
        if k.is_zero() {
            return Self::zero(self.rank);
        }
        AlgebraElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * k.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rank);
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m + n, c.clone() * d.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.rank);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies every exponent shift by `m`.
    pub fn shift(&self, m: &LatticeVector) -> Self {
        AlgebraElement {
            rank: self.rank,
            terms: self.terms.iter().map(|(n, c)| (n + m, c.clone())).collect(),
        }
    }

    /// Whether every exponent lies in the dual cone of `sigma`.
    pub fn in_algebra(&self, sigma: &Cone) -> bool {
        self.terms.keys().all(|m| in_dual(sigma, m))
    }

    pub fn require_in_algebra(&self, sigma: &Cone) -> Result<()> {
        match self.terms.keys().find(|m| !in_dual(sigma, m)) {
            Some(m) => Err(Error::OutsideCone(m.to_string())),
            None => Ok(()),
        }
    }

    /// Value at a point of the torus with coordinates `x`, reading `chi^m` as
    /// `prod x_j^{m_j}`; negative exponents need nonzero coordinates.
    pub fn evaluate(&self, x: &[F]) -> Result<F> {
        if x.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: x.len() });
        }
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            acc = acc + c.clone() * evaluate_monomial(m, x)?;
        }
        Ok(acc)
    }
}

/// `prod x_j^{m_j}`.
pub fn evaluate_monomial<F: Field>(m: &LatticeVector, x: &[F]) -> Result<F> {
    use num_traits::ToPrimitive;
    let mut acc = F::one();
    for (e, xj) in m.entries().iter().zip(x) {
        let k = e.to_i64().ok_or_else(|| Error::Unsupported("exponent too large".into()))?;
        if k == 0 {
            continue;
        }
        if k < 0 && xj.is_zero() {
            return Err(Error::InvalidArgument("negative power of zero coordinate".into()));
        }
        acc = acc * xj.powi(k);
    }
    Ok(acc)
}

impl<F: Field + fmt::Display> fmt::Display for AlgebraElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*chi^{m}")?;
        }
        Ok(())
    }
}

impl<F: fmt::Debug> fmt::Debug for AlgebraElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}
