use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// An integer vector in `N` or `M`; ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticeVector(pub(crate) Vec<BigInt>);

impl LatticeVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        LatticeVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        LatticeVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    /// The `i`-th standard basis vector, 0-based.
    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::one();
        v
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn pairing(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn checked_pairing(&self, other: &LatticeVector) -> Result<BigInt> {
        if self.rank() != other.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: other.rank() });
        }
        Ok(self.pairing(other))
    }

    /// Pairing with a coefficient vector over `F`.
    pub fn pair_with<F: Field>(&self, form: &[F]) -> F {
        let mut acc = F::zero();
        for (a, w) in self.0.iter().zip(form) {
            if !a.is_zero() {
                acc = acc + F::from_integer(a) * w.clone();
            }
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    /// Divides by the content; the zero vector is returned unchanged.
    pub fn primitive(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        LatticeVector(self.0.iter().map(|a| a / &g).collect())
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Sup norm.
    pub fn norm_inf(&self) -> BigInt {
        self.0.iter().map(|a| a.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|a| BigRational::from_integer(a.clone())).collect()
    }

    pub fn to_field<F: Field>(&self) -> Vec<F> {
        self.0.iter().map(F::from_integer).collect()
    }

    /// The primitive integer vector on the ray through a nonzero rational vector.
    pub fn primitive_from_rational(v: &[BigRational]) -> Self {
        let den = v.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        LatticeVector(ints).primitive()
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.0.iter().map(|a| a.to_i64()).collect()
    }
}

impl Index<usize> for LatticeVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl<'a> Add<&'a LatticeVector> for &'a LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a LatticeVector> for &'a LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector::from_i64(&v)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shorthand for a lattice vector with small entries.
#[macro_export]
macro_rules! lv {
    ($($x:expr),* $(,)?) => {
        $crate::LatticeVector::from_i64(&[$($x as i64),*])
    };
}
