use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::derivation::lnd::lnd_ray;
use crate::derivation::{commutator, AlgebraElement, Derivation, HomogeneousComponent};
use crate::error::{Error, Result};
use crate::lattice::{Cone, LatticeVector};
use crate::scalar::Field;

fn certified_ray<F: Field>(c: &HomogeneousComponent<F>, sigma: &Cone) -> Result<usize> {
    lnd_ray(sigma, &c.e, &c.form())?
        .ok_or_else(|| Error::NotLocallyNilpotent(format!("component of degree {}", c.e)))
}

/// Upper bound on the number of applications of a root derivation of ray `i`
/// needed to kill `f`: each application lowers `<rho_i, .>` by one.
fn kill_bound<F: Field>(sigma: &Cone, i: usize, f: &AlgebraElement<F>) -> usize {
    let rho = &sigma.rays()[i - 1];
    f.terms()
        .map(|(m, _)| rho.pairing(m).to_usize().unwrap_or(0))
        .max()
        .unwrap_or(0)
        + 1
}

fn taylor<F: Field>(d: &Derivation<F>, t: &F, f: &AlgebraElement<F>, steps: usize) -> AlgebraElement<F> {
    let mut out = f.clone();
    let mut term = f.clone();
    let mut coeff = F::one();
    for l in 1..=steps {
        term = d.apply(&term);
        if term.is_zero() {
            break;
        }
        coeff = coeff * t.clone() / F::from_i64(l as i64);
        out = out.add(&term.scale(&coeff));
    }
    out
}

/// `exp(t d)(f) = sum t^l d^l(f) / l!` for a locally nilpotent root component.
pub fn exp_on_algebra<F: Field>(
    c: &HomogeneousComponent<F>,
    sigma: &Cone,
    t: &F,
    f: &AlgebraElement<F>,
) -> Result<AlgebraElement<F>> {
    let i = certified_ray(c, sigma)?;
    f.require_in_algebra(sigma)?;
    let d = Derivation::from_component(c);
    Ok(taylor(&d, t, f, kill_bound(sigma, i, f)))
}

/// `exp(t a d)(f)` with `a` in the kernel of `d`, so `(a d)^l = a^l d^l`.
pub fn exp_replica_on_algebra<F: Field>(
    c: &HomogeneousComponent<F>,
    kernel: &AlgebraElement<F>,
    sigma: &Cone,
    t: &F,
    f: &AlgebraElement<F>,
) -> Result<AlgebraElement<F>> {
    let i = certified_ray(c, sigma)?;
    f.require_in_algebra(sigma)?;
    let rho = &sigma.rays()[i - 1];
    if kernel.terms().any(|(m, _)| !rho.pairing(m).is_zero()) || !kernel.in_algebra(sigma) {
        return Err(Error::OutsideCone("replica coefficient is not in the kernel".into()));
    }
    let d = Derivation::from_component(c).left_multiply(kernel);
    Ok(taylor(&d, t, f, kill_bound(sigma, i, f)))
}

/// `chi^m (1 + t mu chi^e)^{<rho_i, m>}` where the component is `mu d_{rho_i,e}`.
pub fn closed_form_exp<F: Field>(
    c: &HomogeneousComponent<F>,
    sigma: &Cone,
    t: &F,
    m: &LatticeVector,
) -> Result<AlgebraElement<F>> {
    let i = certified_ray(c, sigma)?;
    let rho = &sigma.rays()[i - 1];
    let w = c.form();
    let a = rho.entries().iter().position(|x| !x.is_zero()).expect("rays are nonzero");
    let mu = w[a].clone() / F::from_integer(&rho[a]);
    let p = rho.pairing(m);
    if p < BigInt::zero() {
        return Err(Error::OutsideCone(m.to_string()));
    }
    let p = p.to_u32().ok_or_else(|| Error::Unsupported("exponent too large".into()))?;
    let mut base = AlgebraElement::one(m.rank());
    base.add_term(c.e.clone(), t.clone() * mu);
    Ok(base.pow(p).shift(m))
}

pub const ADJOINT_BUDGET: usize = 64;

/// `Ad_{exp U}(V) = sum_m ad_U^m(V) / m!`; fails if the series has not
/// terminated after `budget` terms.
pub fn adjoint<F: Field>(u: &Derivation<F>, v: &Derivation<F>, budget: usize) -> Result<Derivation<F>> {
    let mut out = v.clone();
    let mut term = v.clone();
    let mut fact = F::one();
    for m in 1..=budget {
        term = commutator(u, &term)?;
        if term.is_zero() {
            return Ok(out);
        }
        fact = fact * F::from_i64(m as i64);
        out = out.add(&term.scale(&(F::one() / fact.clone())));
    }
    Err(Error::BudgetExhausted(format!("adjoint series did not terminate within {budget} terms")))
}

/// Conjugation by the one-parameter subgroup `rho_t`: the part of
/// `<rho_t, .>`-degree `s` is scaled by `lambda^{-s}`.
pub fn torus_conjugate<F: Field>(d: &Derivation<F>, rho_t: &LatticeVector, lambda: &F) -> Result<Derivation<F>> {
    if lambda.is_zero() {
        return Err(Error::InvalidArgument("torus parameter must be nonzero".into()));
    }
    let mut out = Derivation::zero(d.rank());
    for (e, w) in d.parts() {
        let s = rho_t.pairing(e).to_i64().ok_or_else(|| Error::Unsupported("degree too large".into()))?;
        let k = lambda.powi(-s);
        out.add_form(e.clone(), w.iter().map(|x| x.clone() * k.clone()).collect());
    }
    Ok(out)
}

/// `lambda^{l_max} * torus_conjugate(d, rho_t, lambda)` as a polynomial in
/// `lambda` with derivation coefficients; the constant term is the principal
/// part.
#[derive(Clone, Debug)]
pub struct DegenerationPolynomial<F> {
    pub l_max: BigInt,
    /// `coefficients[k]` multiplies `lambda^k`.
    pub coefficients: Vec<Derivation<F>>,
}

impl<F: Field> DegenerationPolynomial<F> {
    pub fn evaluate(&self, lambda: &F) -> Derivation<F> {
        let rank = self.coefficients.first().map_or(0, Derivation::rank);
        let mut out = Derivation::zero(rank);
        let mut pow = F::one();
        for c in &self.coefficients {
            out = out.add(&c.scale(&pow));
            pow = pow * lambda.clone();
        }
        out
    }

    pub fn at_zero(&self) -> &Derivation<F> {
        &self.coefficients[0]
    }
}

pub fn degeneration_polynomial<F: Field>(d: &Derivation<F>, rho_t: &LatticeVector) -> Result<DegenerationPolynomial<F>> {
    let Some(l_max) = d.support().iter().map(|e| rho_t.pairing(e)).max() else {
        return Err(Error::InvalidArgument("zero derivation".into()));
    };
    let mut coefficients: Vec<Derivation<F>> = Vec::new();
    for (e, w) in d.parts() {
        let k = (&l_max - rho_t.pairing(e)).to_usize().ok_or_else(|| Error::Unsupported("degree too large".into()))?;
        while coefficients.len() <= k {
            coefficients.push(Derivation::zero(d.rank()));
        }
        coefficients[k].add_form(e.clone(), w.clone());
    }
    Ok(DegenerationPolynomial { l_max, coefficients })
}
