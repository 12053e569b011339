use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::derivation::{AlgebraElement, HomogeneousComponent};
use crate::error::{Error, Result};
use crate::lattice::linalg;
use crate::lattice::LatticeVector;
use crate::scalar::Field;
use crate::Rational;

/// Whether coordinates are those of `A^n` itself or total coordinates of a
/// toric variety.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointSpace {
    Affine,
    Total,
}

#[derive(Clone, PartialEq)]
pub struct Point<F> {
    pub space: PointSpace,
    pub coords: Vec<F>,
}

impl<F: Field> Point<F> {
    pub fn affine(coords: Vec<F>) -> Self {
        Point { space: PointSpace::Affine, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl<F: fmt::Debug> fmt::Debug for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

/// One generator instance. Flow times are rational; letters act on points
/// over any field containing the rationals.
#[derive(Clone, Debug, PartialEq)]
pub enum AutLetter {
    /// `exp(t * lambda d_{rho,e})` for a root component of the octant.
    RootFlow { component: HomogeneousComponent<Rational>, t: Rational },
    /// `exp(t * a * lambda d_{rho,e})` with `a` in the kernel.
    ReplicaFlow {
        component: HomogeneousComponent<Rational>,
        kernel: AlgebraElement<Rational>,
        t: Rational,
    },
    /// The one-parameter subgroup `rho_t` evaluated at `lambda`:
    /// `x_j -> lambda^{rho_t[j]} x_j`.
    Torus { rho: LatticeVector, lambda: Rational },
    /// Coordinate `j` moves to position `perm[j]` (0-based).
    Permutation(Vec<usize>),
    Linear(Vec<Vec<Rational>>),
    Translation(Vec<Rational>),
}

/// The coordinate index `i` (0-based) and scalar `mu` with `lambda rho = mu eps_i`
/// for a root component of the octant.
pub fn octant_root_index(c: &HomogeneousComponent<Rational>) -> Result<(usize, Rational)> {
    let e = c.e.entries();
    let minus_one = -num_bigint::BigInt::one();
    let negative: Vec<usize> = (0..e.len()).filter(|&j| e[j].is_negative()).collect();
    if negative.len() != 1 || e[negative[0]] != minus_one {
        return Err(Error::NotARoot(format!("{} is not a root of the octant", c.e)));
    }
    let i = negative[0];
    if c.rho.entries().iter().enumerate().any(|(j, r)| j != i && !r.is_zero()) || c.rho[i].is_zero() {
        return Err(Error::NotLocallyNilpotent(format!("rho {} is not along coordinate {}", c.rho, i + 1)));
    }
    let mu = c.lambda.clone() * Rational::from_integer(c.rho[i].clone());
    Ok((i, mu))
}

fn check_dim<F>(p: &Point<F>, n: usize) -> Result<()> {
    if p.coords.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.coords.len() });
    }
    Ok(())
}

fn kernel_value<F: Field>(kernel: &AlgebraElement<Rational>, i: usize, x: &[F]) -> Result<F> {
    let mut acc = F::zero();
    for (m, c) in kernel.terms() {
        if m.rank() != x.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), found: m.rank() });
        }
        if !m[i].is_zero() || m.entries().iter().any(Signed::is_negative) {
            return Err(Error::OutsideCone(format!("kernel exponent {m} for coordinate {}", i + 1)));
        }
        acc = acc + F::from_rational(c) * crate::derivation::evaluate_monomial(m, x)?;
    }
    Ok(acc)
}

fn shifted_root<F: Field>(e: &LatticeVector, i: usize, x: &[F]) -> Result<F> {
    let mut shifted = e.clone();
    shifted.0[i] += 1;
    crate::derivation::evaluate_monomial(&shifted, x)
}

/// Image of `p` under one letter.
pub fn act_on_point<F: Field>(letter: &AutLetter, p: &Point<F>) -> Result<Point<F>> {
    let n = p.dim();
    let mut x = p.coords.clone();
    match letter {
        AutLetter::RootFlow { component, t } => {
            check_dim(p, component.e.rank())?;
            let (i, mu) = octant_root_index(component)?;
            let rate = shifted_root(&component.e, i, &p.coords)?;
            x[i] = x[i].clone() + F::from_rational(&(t * mu)) * rate;
        }
        AutLetter::ReplicaFlow { component, kernel, t } => {
            check_dim(p, component.e.rank())?;
            let (i, mu) = octant_root_index(component)?;
            let rate = shifted_root(&component.e, i, &p.coords)? * kernel_value(kernel, i, &p.coords)?;
            x[i] = x[i].clone() + F::from_rational(&(t * mu)) * rate;
        }
        AutLetter::Torus { rho, lambda } => {
            check_dim(p, rho.rank())?;
            if lambda.is_zero() {
                return Err(Error::InvalidArgument("torus parameter must be nonzero".into()));
            }
            use num_traits::ToPrimitive;
            for (xj, r) in x.iter_mut().zip(rho.entries()) {
                let k = r.to_i64().ok_or_else(|| Error::Unsupported("torus weight too large".into()))?;
                *xj = xj.clone() * F::from_rational(lambda).powi(k);
            }
        }
        AutLetter::Permutation(perm) => {
            check_dim(p, perm.len())?;
            validate_permutation(perm)?;
            for (j, &pj) in perm.iter().enumerate() {
                x[pj] = p.coords[j].clone();
            }
        }
        AutLetter::Linear(a) => {
            check_dim(p, a.len())?;
            let af: Vec<Vec<F>> = a.iter().map(|r| r.iter().map(F::from_rational).collect()).collect();
            if af.iter().any(|r| r.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, found: af[0].len() });
            }
            x = linalg::mat_vec(&af, &p.coords);
        }
        AutLetter::Translation(v) => {
            check_dim(p, v.len())?;
            for (xj, vj) in x.iter_mut().zip(v) {
                *xj = xj.clone() + F::from_rational(vj);
            }
        }
    }
    Ok(Point { space: p.space, coords: x })
}

fn validate_permutation(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &j in perm {
        if j >= perm.len() || seen[j] {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
        }
        seen[j] = true;
    }
    Ok(())
}

impl AutLetter {
    pub fn root_flow(e: LatticeVector, t: Rational) -> Result<Self> {
        let n = e.rank();
        let i = (0..n)
            .find(|&j| e[j].is_negative())
            .ok_or_else(|| Error::NotARoot(e.to_string()))?;
        let c = HomogeneousComponent::unit(LatticeVector::unit(n, i), e);
        octant_root_index(&c)?;
        Ok(AutLetter::RootFlow { component: c, t })
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(match self {
            AutLetter::RootFlow { component, t } => {
                AutLetter::RootFlow { component: component.clone(), t: -t.clone() }
            }
            AutLetter::ReplicaFlow { component, kernel, t } => AutLetter::ReplicaFlow {
                component: component.clone(),
                kernel: kernel.clone(),
                t: -t.clone(),
            },
            AutLetter::Torus { rho, lambda } => {
                if lambda.is_zero() {
                    return Err(Error::InvalidArgument("torus parameter must be nonzero".into()));
                }
                AutLetter::Torus { rho: rho.clone(), lambda: Rational::one() / lambda }
            }
            AutLetter::Permutation(perm) => {
                validate_permutation(perm)?;
                let mut inv = vec![0; perm.len()];
                for (j, &pj) in perm.iter().enumerate() {
                    inv[pj] = j;
                }
                AutLetter::Permutation(inv)
            }
            AutLetter::Linear(a) => AutLetter::Linear(
                linalg::inverse(a).ok_or_else(|| Error::InvalidArgument("singular linear map".into()))?,
            ),
            AutLetter::Translation(v) => AutLetter::Translation(v.iter().map(|x| -x.clone()).collect()),
        })
    }
}

/// Letters applied left to right: the first letter acts first.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Word(pub Vec<AutLetter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[AutLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: AutLetter) {
        self.0.push(l);
    }

    pub fn extend(&mut self, other: &Word) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn act<F: Field>(&self, p: &Point<F>) -> Result<Point<F>> {
        let mut q = p.clone();
        for l in &self.0 {
            q = act_on_point(l, &q)?;
        }
        Ok(q)
    }

    pub fn inverse(&self) -> Result<Word> {
        self.0.iter().rev().map(AutLetter::inverse).collect::<Result<Vec<_>>>().map(Word)
    }
}
