//! Coefficient fields.
//!
//! Lattice data is always integral; coefficients of polynomials, derivations
//! and point coordinates live in a field implementing [`Field`]. The rational
//! numbers are the default, and [`crate::Cyclotomic`] supplies the number fields
//! needed to write down finite invariant sets.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An exact field of characteristic zero containing the rationals.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(q: &BigRational) -> Self;

    fn from_integer(n: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_integer(&BigInt::from(n))
    }

    /// `self^k` for any integer `k`; panics on `0^k` with `k < 0`.
    fn powi(&self, k: i64) -> Self {
        let base = if k < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * sq;
            }
        }
        acc
    }
}

impl Field for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

/// Polynomial arithmetic over `Q`, coefficients from the constant term up,
/// with no trailing zeros.
mod poly {
    use num_rational::BigRational;
    use num_traits::Zero;

    pub type Poly = Vec<BigRational>;

    pub fn trim(mut p: Poly) -> Poly {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    pub fn add(a: &[BigRational], b: &[BigRational]) -> Poly {
        let n = a.len().max(b.len());
        let z = BigRational::zero();
        trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
    }

    pub fn neg(a: &[BigRational]) -> Poly {
        a.iter().map(|x| -x).collect()
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
        let mut r: Poly = trim(a.to_vec());
        let db = b.len() - 1;
        let lead = b[db].clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![BigRational::zero(); r.len() - db];
        while r.len() > db {
            let k = r.len() - 1 - db;
            let c = r[r.len() - 1].clone() / lead.clone();
            for (i, y) in b.iter().enumerate() {
                r[k + i] -= &c * y;
            }
            q[k] = c;
            r = trim(r);
        }
        (trim(q), r)
    }
}

fn cyclotomic_polynomial(d: u32) -> Vec<BigRational> {
    use std::cell::RefCell;
    use std::collections::HashMap;
    thread_local! {
        static CACHE: RefCell<HashMap<u32, Vec<BigRational>>> = RefCell::new(HashMap::new());
    }
    if let Some(p) = CACHE.with(|c| c.borrow().get(&d).cloned()) {
        return p;
    }
    let mut num = vec![BigRational::zero(); d as usize + 1];
    num[0] = -BigRational::one();
    num[d as usize] = BigRational::one();
    for k in (1..d).filter(|k| d % k == 0) {
        num = poly::divrem(&num, &cyclotomic_polynomial(k)).0;
    }
    CACHE.with(|c| c.borrow_mut().insert(d, num.clone()));
    num
}

/// The cyclotomic field `Q(omega)`, `omega` a primitive `D`-th root of unity,
/// as polynomials in `omega` reduced modulo the `D`-th cyclotomic polynomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic<const D: u32> {
    coeffs: Vec<BigRational>,
}

impl<const D: u32> Cyclotomic<D> {
    fn reduce(p: Vec<BigRational>) -> Self {
        assert!(D >= 1, "cyclotomic order must be positive");
        let (_, r) = poly::divrem(&p, &cyclotomic_polynomial(D));
        Cyclotomic { coeffs: r }
    }

    pub fn from_coefficients(c: Vec<BigRational>) -> Self {
        Self::reduce(poly::trim(c))
    }

    /// The generator `omega`.
    pub fn omega() -> Self {
        Self::reduce(vec![BigRational::zero(), BigRational::one()])
    }

    /// Coefficients in the power basis `1, omega, omega^2, ...`.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree() -> usize {
        cyclotomic_polynomial(D).len() - 1
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.coeffs.is_empty() {
            return None;
        }
        let (mut r0, mut r1) = (cyclotomic_polynomial(D), self.coeffs.clone());
        let (mut s0, mut s1): (poly::Poly, poly::Poly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly::divrem(&r0, &r1);
            let s = poly::add(&s0, &poly::neg(&poly::mul(&q, &s1)));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let c = r0[0].clone();
        Some(Self::reduce(s0.iter().map(|x| x / &c).collect()))
    }
}

impl<const D: u32> std::fmt::Display for Cyclotomic<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("({c})w"),
                _ => format!("({c})w^{k}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl<const D: u32> Debug for Cyclotomic<D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

impl<const D: u32> Add for Cyclotomic<D> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Cyclotomic { coeffs: poly::add(&self.coeffs, &o.coeffs) }
    }
}

impl<const D: u32> Sub for Cyclotomic<D> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Cyclotomic { coeffs: poly::add(&self.coeffs, &poly::neg(&o.coeffs)) }
    }
}

impl<const D: u32> Neg for Cyclotomic<D> {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclotomic { coeffs: poly::neg(&self.coeffs) }
    }
}

impl<const D: u32> Mul for Cyclotomic<D> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::reduce(poly::mul(&self.coeffs, &o.coeffs))
    }
}

impl<const D: u32> Div for Cyclotomic<D> {
    type Output = Self;
    /// Panics on division by zero.
    fn div(self, o: Self) -> Self {
        self * o.inverse().expect("division by zero in a cyclotomic field")
    }
}

impl<const D: u32> Zero for Cyclotomic<D> {
    fn zero() -> Self {
        Cyclotomic { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<const D: u32> One for Cyclotomic<D> {
    fn one() -> Self {
        Self::reduce(vec![BigRational::one()])
    }
}

impl<const D: u32> Field for Cyclotomic<D> {
    fn from_rational(q: &BigRational) -> Self {
        Self::reduce(poly::trim(vec![q.clone()]))
    }
}
