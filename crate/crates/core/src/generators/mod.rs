//! Finite generating collections of automorphism groups acting infinitely
//! transitively, with machine-checked root-production witnesses.

mod affine;
mod lie;
mod toric;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::automorphism::{adjoint, ADJOINT_BUDGET};
use crate::derivation::{certify_lnd, newton_polytope, principal_part, Derivation, HomogeneousComponent, LndStatus};
use crate::error::{Error, Result};
use crate::lattice::{Cone, LatticeVector};
use crate::roots::RootDatum;
use crate::transitivity::{ConditionReport, SpecDerivation, TransitivitySpec};
use crate::Rational;

pub use affine::{
    chain_root, first_chain_step, permutation_generators, saff_generators, saff_plus_root_generators,
    three_subgroup_generators, ChainRoot, NILPOTENT_SEARCH_BUDGET,
};
pub use lie::{lie_closure, linear_generator, matrix_is_nilpotent, LieClosure};
pub use toric::{minus_one_form, strict_support, toric_generators, RayConstruction, B1Data, B1Status};

/// Which construction produced a package.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// The special affine group from `n + 1` root subgroups.
    Saff,
    /// One root subgroup together with the coordinate permutations.
    Permutations,
    /// The special affine group plus one non-affine root subgroup.
    SaffPlusRoot,
    /// Three one-parameter unipotent subgroups.
    ThreeSubgroups,
    /// Roots of a toric variety smooth in codimension two.
    Toric,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::Saff => "saff",
            Construction::Permutations => "permutations",
            Construction::SaffPlusRoot => "saff-plus-root",
            Construction::ThreeSubgroups => "three-subgroups",
            Construction::Toric => "toric",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Construction::Saff,
            Construction::Permutations,
            Construction::SaffPlusRoot,
            Construction::ThreeSubgroups,
            Construction::Toric,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

/// A named family of automorphisms contributing to a generating set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorFamily {
    /// The root subgroup `exp(K d_{rho_i,e})`.
    Root { name: String, root: RootDatum },
    /// The coordinate permutations of `A^n`.
    Permutations { name: String, n: usize },
    /// `exp(K y)` acting linearly, for a nilpotent matrix `y`.
    LieGenerator {
        name: String,
        #[serde(with = "crate::serial::rational_matrix")]
        matrix: Vec<Vec<Rational>>,
    },
}

impl GeneratorFamily {
    pub fn name(&self) -> &str {
        match self {
            GeneratorFamily::Root { name, .. }
            | GeneratorFamily::Permutations { name, .. }
            | GeneratorFamily::LieGenerator { name, .. } => name,
        }
    }

    pub fn root(&self) -> Option<&RootDatum> {
        match self {
            GeneratorFamily::Root { root, .. } => Some(root),
            _ => None,
        }
    }
}

/// Evidence that `H_{e2 + delta e1}` lies in the closure of `<H_{e1}, H_{e2}>`:
/// the adjoint `Ad_{exp U}(V)` has the segment `[e2, e2 + delta e1]` as
/// Newton polytope and its principal part along `e1` is a nonzero multiple of
/// the derivation of the produced root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoRootWitness {
    pub first: RootDatum,
    pub second: RootDatum,
    pub delta: u64,
    pub produced: RootDatum,
    /// `lambda` with principal part `lambda d_{rho,produced}`.
    #[serde(with = "crate::serial::rational")]
    pub coefficient: Rational,
    pub segment: bool,
    pub principal_part_lnd: bool,
}

impl TwoRootWitness {
    pub fn holds(&self) -> bool {
        self.segment && self.principal_part_lnd && !self.coefficient.is_zero()
    }
}

/// Builds and checks the witness for `first in S_a`, `second in S_b` with
/// `a != b` and `<rho_b, first> >= 1`.
pub fn two_root_witness(sigma: &Cone, first: &RootDatum, second: &RootDatum) -> Result<TwoRootWitness> {
    let first = RootDatum::new(sigma, first.ray_index, first.e.clone())?;
    let second = RootDatum::new(sigma, second.ray_index, second.e.clone())?;
    if first.ray_index == second.ray_index {
        return Err(Error::InvalidArgument(format!("{} and {} share their ray", first.e, second.e)));
    }
    let c = second.rho(sigma).pairing(&first.e);
    if c < BigInt::one() {
        return Err(Error::InvalidArgument(format!(
            "<rho_{}, {}> = {c} must be positive",
            second.ray_index, first.e
        )));
    }
    let delta_int = first.rho(sigma).pairing(&second.e) + BigInt::one();
    let delta = delta_int.to_u64().ok_or_else(|| Error::Unsupported("delta too large".into()))?;
    let produced_e = &second.e + &first.e.scale(&delta_int);
    let produced = RootDatum::new(sigma, first.ray_index, produced_e)?;

    let u: Derivation<Rational> =
        Derivation::from_component(&HomogeneousComponent::unit(first.rho(sigma).clone(), first.e.clone()));
    let v = Derivation::from_component(&HomogeneousComponent::unit(second.rho(sigma).clone(), second.e.clone()));
    let ad = adjoint(&u, &v, ADJOINT_BUDGET)?;
    let segment = newton_polytope(&ad)?.is_segment(&second.e, &produced.e);
    let (top, _) = principal_part(&ad, &first.e)?;
    let rho = produced.rho(sigma);
    let coefficient = match (top.is_homogeneous(), top.form(&produced.e)) {
        (true, Some(w)) => proportionality(w, rho).unwrap_or_else(Rational::zero),
        _ => Rational::zero(),
    };
    let principal_part_lnd = !coefficient.is_zero() && certify_lnd(&top, sigma, 64)? == LndStatus::Certified;
    Ok(TwoRootWitness { first, second, delta, produced, coefficient, segment, principal_part_lnd })
}

fn proportionality(w: &[Rational], rho: &LatticeVector) -> Option<Rational> {
    let k = rho.entries().iter().position(|r| !r.is_zero())?;
    let lambda = w[k].clone() / Rational::from_integer(rho[k].clone());
    let ok = w.iter().zip(rho.entries()).all(|(x, r)| *x == lambda.clone() * Rational::from_integer(r.clone()));
    ok.then_some(lambda)
}

/// A generating collection with the data feeding the transitivity criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorPackage {
    pub construction: Construction,
    pub cone: Cone,
    pub letters: Vec<GeneratorFamily>,
    /// Derivations and kernel algebras certifying infinite transitivity;
    /// absent for `SAff_n` alone.
    pub spec: Option<TransitivitySpec>,
    pub condition: Option<ConditionReport>,
    pub witnesses: Vec<TwoRootWitness>,
    /// Present for the three-subgroup construction: the Lie algebra generated
    /// by the two linear generators.
    pub lie_certificate: Option<LieClosure>,
    /// Present for toric packages.
    pub toric: Vec<RayConstruction>,
    pub notes: Vec<String>,
}

impl GeneratorPackage {
    pub fn roots(&self) -> impl Iterator<Item = &RootDatum> {
        self.letters.iter().filter_map(GeneratorFamily::root)
    }

    pub fn derivation_specs(&self) -> &[SpecDerivation] {
        self.spec.as_ref().map_or(&[], TransitivitySpec::derivations)
    }

    /// Rechecks every stored root against the cone and every witness.
    pub fn validate(&self) -> Result<()> {
        for r in self.roots().chain(self.spec.iter().flat_map(TransitivitySpec::movers)) {
            RootDatum::new(&self.cone, r.ray_index, r.e.clone())?;
        }
        for w in &self.witnesses {
            let again = two_root_witness(&self.cone, &w.first, &w.second)?;
            if again != *w || !w.holds() {
                return Err(Error::InvalidArgument(format!("witness producing {} does not hold", w.produced.e)));
            }
        }
        Ok(())
    }
}

pub(crate) fn octant_root(n: usize, e: &[i64]) -> Result<RootDatum> {
    let v = LatticeVector::from_i64(e);
    let i = v
        .entries()
        .iter()
        .position(Signed::is_negative)
        .ok_or_else(|| Error::NotARoot(v.to_string()))?;
    RootDatum::new(&Cone::octant(n), i + 1, v)
}

pub(crate) fn root_letter(name: impl Into<String>, root: RootDatum) -> GeneratorFamily {
    GeneratorFamily::Root { name: name.into(), root }
}

pub(crate) fn require_witness(sigma: &Cone, first: &RootDatum, second: &RootDatum) -> Result<TwoRootWitness> {
    let w = two_root_witness(sigma, first, second)?;
    if !w.holds() {
        return Err(Error::InvalidArgument(format!("production of {} failed its check", w.produced.e)));
    }
    Ok(w)
}
