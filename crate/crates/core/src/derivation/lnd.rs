use std::collections::HashSet;

use num_traits::Zero;

use super::{newton_polytope, AlgebraElement, Derivation, HomogeneousComponent};
use crate::error::{Error, Result};
use crate::lattice::{dual_cone, lattice_points_in, Cone, Constraint, LatticeVector, Relation};
use crate::roots::{in_dual, in_dual_facet, is_demazure_root};
use crate::scalar::Field;

/// Whether the form `w` is a scalar multiple of the integer vector `rho`.
pub(crate) fn proportional<F: Field>(w: &[F], rho: &LatticeVector) -> bool {
    let Some(a) = rho.entries().iter().position(|x| !x.is_zero()) else {
        return w.iter().all(Zero::is_zero);
    };
    let k = w[a].clone() / F::from_integer(&rho[a]);
    w.iter().zip(rho.entries()).all(|(wi, ri)| *wi == k.clone() * F::from_integer(ri))
}

/// The distinguished ray if the component `(e, w)` is locally nilpotent and
/// nonzero.
pub(crate) fn lnd_ray<F: Field>(sigma: &Cone, e: &LatticeVector, w: &[F]) -> Result<Option<usize>> {
    match is_demazure_root(sigma, e)? {
        Some(i) if proportional(w, &sigma.rays()[i - 1]) => Ok(Some(i)),
        _ => Ok(None),
    }
}

/// Every component maps `A = K[sigma^v cap M]` into itself.
pub fn preserves_algebra<F: Field>(d: &Derivation<F>, sigma: &Cone) -> Result<bool> {
    if d.rank() != sigma.rank() {
        return Err(Error::DimensionMismatch { expected: sigma.rank(), found: d.rank() });
    }
    for (e, w) in d.parts() {
        if in_dual(sigma, e) {
            continue;
        }
        if lnd_ray(sigma, e, w)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A homogeneous derivation is locally nilpotent on `A` exactly when it is
/// zero or a multiple of `d_{rho_i,e}` with `e` a root for ray `i`.
pub fn is_lnd_homogeneous<F: Field>(c: &HomogeneousComponent<F>, sigma: &Cone) -> Result<bool> {
    if c.e.rank() != sigma.rank() || c.rho.rank() != sigma.rank() {
        return Err(Error::DimensionMismatch { expected: sigma.rank(), found: c.e.rank() });
    }
    let w = c.form();
    if w.iter().all(Zero::is_zero) {
        return Ok(true);
    }
    Ok(lnd_ray(sigma, &c.e, &w)?.is_some())
}

/// The facet `tau_i` of the dual cone, which spans the kernel of every
/// nonzero root derivation of ray `i`.
pub fn kernel_facet(sigma: &Cone, i: usize) -> Result<Vec<Constraint>> {
    sigma.ray(i)?;
    Ok(sigma
        .rays()
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let rel = if j + 1 == i { Relation::Eq } else { Relation::Ge };
            Constraint::new(r.clone(), rel, 0)
        })
        .collect())
}

/// `chi^f d_{rho_i,e} = d_{rho_i,e+f}` for `f` in `tau_i cap M`.
pub fn replica<F: Field>(
    c: &HomogeneousComponent<F>,
    sigma: &Cone,
    f: &LatticeVector,
) -> Result<HomogeneousComponent<F>> {
    let Some(i) = lnd_ray(sigma, &c.e, &c.form())? else {
        return Err(Error::NotLocallyNilpotent(format!("component of degree {}", c.e)));
    };
    if f.rank() != sigma.rank() {
        return Err(Error::DimensionMismatch { expected: sigma.rank(), found: f.rank() });
    }
    if !in_dual_facet(sigma, i, f) {
        return Err(Error::OutsideCone(format!("{f} is not in the kernel facet of ray {i}")));
    }
    Ok(HomogeneousComponent { lambda: c.lambda.clone(), rho: c.rho.clone(), e: &c.e + f })
}

/// Three-valued answer to local nilpotency of a (possibly inhomogeneous)
/// derivation of `A`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum LndStatus {
    Certified,
    Refuted(String),
    Unknown(String),
}

/// Number of applications of `d` needed to kill `f`, if at most `budget`.
pub fn nilpotency_steps<F: Field>(d: &Derivation<F>, f: &AlgebraElement<F>, budget: usize) -> Option<usize> {
    let mut g = f.clone();
    for k in 0..=budget {
        if g.is_zero() {
            return Some(k);
        }
        g = d.apply(&g);
    }
    None
}

/// Minimal generators of `sigma^v cap M` inside a box large enough to hold the
/// Hilbert basis when `complete` is set.
#[derive(Clone, Debug)]
pub struct GeneratingMonomials {
    pub exponents: Vec<LatticeVector>,
    pub complete: bool,
}

const GENERATOR_BOX_CAP: u32 = 8;

/// Hilbert basis elements lie in the half-open zonotope spanned by the dual
/// rays, whose sup norm is at most the sum of the rays' sup norms.
pub fn algebra_generators(sigma: &Cone) -> Result<GeneratingMonomials> {
    use num_traits::ToPrimitive;
    let dual = dual_cone(sigma);
    let needed: u64 = dual.rays().iter().map(|r| r.norm_inf().to_u64().unwrap_or(u64::MAX)).sum();
    let complete = sigma.properties().full_dimensional && needed <= u64::from(GENERATOR_BOX_CAP);
    let bound = needed.min(u64::from(GENERATOR_BOX_CAP)) as u32;
    let constraints: Vec<Constraint> =
        sigma.rays().iter().map(|r| Constraint::new(r.clone(), Relation::Ge, 0)).collect();
    let pts = lattice_points_in(sigma.rank(), &constraints, bound)?;
    let set: HashSet<&LatticeVector> = pts.iter().collect();
    let exponents = pts
        .iter()
        .filter(|p| !p.is_zero())
        .filter(|p| {
            !pts.iter().any(|q| !q.is_zero() && q != *p && set.contains(&(*p - q)))
        })
        .cloned()
        .collect();
    Ok(GeneratingMonomials { exponents, complete })
}

/// Decides local nilpotency when the structure allows, else reports `Unknown`.
pub fn certify_lnd<F: Field>(d: &Derivation<F>, sigma: &Cone, budget: usize) -> Result<LndStatus> {
    if d.is_zero() {
        return Ok(LndStatus::Certified);
    }
    if !preserves_algebra(d, sigma)? {
        return Ok(LndStatus::Refuted("does not preserve the algebra".into()));
    }
    if d.is_homogeneous() {
        let (e, w) = d.parts().next().expect("nonzero");
        return Ok(match lnd_ray(sigma, e, w)? {
            Some(_) => LndStatus::Certified,
            None => LndStatus::Refuted(format!("degree {e} is not a root carrying its ray")),
        });
    }
    let poly = newton_polytope(d)?;
    for v in &poly.vertices {
        let w = d.form(v).expect("vertex is in the support");
        if lnd_ray(sigma, v, w)?.is_none() {
            return Ok(LndStatus::Refuted(format!("vertex component of degree {v} is not locally nilpotent")));
        }
    }
    let gens = algebra_generators(sigma)?;
    for g in &gens.exponents {
        if nilpotency_steps(d, &AlgebraElement::character(g.clone()), budget).is_none() {
            return Ok(LndStatus::Unknown(format!("no nilpotency witness for chi^{g} within {budget} steps")));
        }
    }
    if gens.complete {
        Ok(LndStatus::Certified)
    } else {
        Ok(LndStatus::Unknown("generating set not certified complete".into()))
    }
}
