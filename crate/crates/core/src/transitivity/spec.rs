use std::fmt;

use serde::{Deserialize, Serialize};

use num_traits::Zero;

use crate::automorphism::Point;
use crate::derivation::{algebra_generators, evaluate_monomial, AlgebraElement, Derivation, HomogeneousComponent};
use crate::error::{Error, Result};
use crate::lattice::{lattice_index, linalg, orthogonal_lattice, Cone, LatticeIndex, LatticeVector};
use crate::roots::{in_dual_facet, RootDatum};
use crate::{QDerivation, Rational};

/// Which hypothesis of the transitivity criterion a collection satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionTag {
    /// The fraction fields of the kernel algebras together generate the
    /// function field.
    Alpha,
    /// Some kernel algebra has the same fraction field as its kernel.
    Beta,
    /// Every kernel algebra has finite index, and one extra kernel element
    /// completes the first.
    Gamma,
}

impl fmt::Display for ConditionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionTag::Alpha => "alpha",
            ConditionTag::Beta => "beta",
            ConditionTag::Gamma => "gamma",
        })
    }
}

/// Whether the words a solver may emit lie in the group generated by the
/// root subgroups themselves, or only in its closure (replica flows).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupLevel {
    Generated,
    Closure,
}

/// A root derivation `d_{rho_i,e}` with generators of a subalgebra
/// `A_i = K[chi^m : m in kernel_generators]` of its kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDerivation {
    pub root: RootDatum,
    pub kernel_generators: Vec<LatticeVector>,
}

/// A finite family of locally nilpotent derivations with kernel subalgebras,
/// as the input of the infinite transitivity criterion.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitivitySpec {
    cone: Cone,
    derivations: Vec<SpecDerivation>,
    b1: Option<AlgebraElement<Rational>>,
    movers: Vec<RootDatum>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub tag: ConditionTag,
    /// Index of `Frac(A_i)`'s exponent lattice in that of `ker d_i`, per derivation.
    pub indices: Vec<LatticeIndex>,
    /// Index of the lattice generated by all kernel exponents in `M`.
    pub union_index: LatticeIndex,
    /// Index after adding the exponents of `b_1` to `A_1`'s, when present.
    pub b1_index: Option<LatticeIndex>,
}

impl TransitivitySpec {
    /// Validates that kernels lie in the right facets, that no two
    /// derivations are proportional, and that the distinguished rays span `N`
    /// (equivalently, `n` of the derivations are independent over `Frac(A)`).
    pub fn new(
        cone: Cone,
        derivations: Vec<SpecDerivation>,
        b1: Option<AlgebraElement<Rational>>,
        movers: Vec<RootDatum>,
    ) -> Result<Self> {
        cone.require_strongly_convex()?;
        if derivations.is_empty() {
            return Err(Error::InvalidArgument("empty derivation family".into()));
        }
        for (k, d) in derivations.iter().enumerate() {
            RootDatum::new(&cone, d.root.ray_index, d.root.e.clone())?;
            for m in &d.kernel_generators {
                if !in_dual_facet(&cone, d.root.ray_index, m) {
                    return Err(Error::OutsideCone(format!("kernel generator {m} of derivation {}", k + 1)));
                }
            }
            if derivations[..k].iter().any(|o| o.root == d.root) {
                return Err(Error::InvalidArgument(format!("derivation {} repeats an earlier one", k + 1)));
            }
        }
        for r in &movers {
            RootDatum::new(&cone, r.ray_index, r.e.clone())?;
        }
        let rays: Vec<Vec<Rational>> =
            derivations.iter().map(|d| cone.rays()[d.root.ray_index - 1].to_rational()).collect();
        if linalg::rank(&rays) < cone.rank() {
            return Err(Error::InvalidArgument("fewer than rank-many independent derivations".into()));
        }
        if let Some(b) = &b1 {
            let i = derivations[0].root.ray_index;
            if b.is_zero() || b.terms().any(|(m, _)| !in_dual_facet(&cone, i, m)) {
                return Err(Error::OutsideCone("b1 is not a nonzero kernel element of the first derivation".into()));
            }
        }
        Ok(TransitivitySpec { cone, derivations, b1, movers })
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn derivations(&self) -> &[SpecDerivation] {
        &self.derivations
    }

    pub fn b1(&self) -> Option<&AlgebraElement<Rational>> {
        self.b1.as_ref()
    }

    /// Root subgroups of the group itself, used to move points into general
    /// position.
    pub fn movers(&self) -> &[RootDatum] {
        &self.movers
    }

    pub fn rank(&self) -> usize {
        self.cone.rank()
    }

    pub fn component(&self, k: usize) -> HomogeneousComponent<Rational> {
        let d = &self.derivations[k];
        HomogeneousComponent::unit(d.root.rho(&self.cone).clone(), d.root.e.clone())
    }

    pub fn derivation(&self, k: usize) -> QDerivation {
        Derivation::from_component(&self.component(k))
    }

    /// Whether the data describe affine space with its standard coordinates.
    pub fn is_affine_space(&self) -> bool {
        self.cone == Cone::octant(self.cone.rank())
    }
}

/// Computes the indices and picks the strongest tag that holds, in the order
/// beta, alpha, gamma.
pub fn check_condition(spec: &TransitivitySpec) -> Result<ConditionReport> {
    let cone = spec.cone();
    let n = cone.rank();
    let mut indices = Vec::new();
    let mut all_gens = Vec::new();
    for d in spec.derivations() {
        let kernel_lattice = orthogonal_lattice(&[d.root.rho(cone).clone()], n);
        indices.push(lattice_index(&d.kernel_generators, &kernel_lattice)?);
        all_gens.extend(d.kernel_generators.iter().cloned());
    }
    let full: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    let union_index = lattice_index(&all_gens, &full)?;
    let b1_index = match spec.b1() {
        None => None,
        Some(b) => {
            let d = &spec.derivations()[0];
            let mut gens = d.kernel_generators.clone();
            gens.extend(b.terms().map(|(m, _)| m.clone()));
            let kernel_lattice = orthogonal_lattice(&[d.root.rho(cone).clone()], n);
            Some(lattice_index(&gens, &kernel_lattice)?)
        }
    };
    let tag = if indices.iter().any(LatticeIndex::is_one) {
        ConditionTag::Beta
    } else if union_index.is_one() {
        ConditionTag::Alpha
    } else if indices.iter().all(|i| i.finite().is_some()) && b1_index.as_ref().is_some_and(LatticeIndex::is_one) {
        ConditionTag::Gamma
    } else {
        return Err(Error::NoSolution("none of the three transitivity hypotheses holds".into()));
    };
    Ok(ConditionReport { tag, indices, union_index, b1_index })
}

/// Whether the vector fields of the given root derivations span the tangent
/// space at `x`, tested on the images of the algebra generators.
pub fn fields_span_at(sigma: &Cone, roots: &[RootDatum], x: &[Rational]) -> Result<bool> {
    let n = sigma.rank();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len() });
    }
    let gens = algebra_generators(sigma)?.exponents;
    let mut rows = Vec::with_capacity(roots.len());
    for r in roots {
        let rho = r.rho(sigma);
        let mut row = Vec::with_capacity(gens.len());
        for m in &gens {
            let p = rho.pairing(m);
            row.push(if p.is_zero() {
                Rational::zero()
            } else {
                Rational::from_integer(p) * evaluate_monomial(&(m + &r.e), x)?
            });
        }
        rows.push(row);
    }
    Ok(linalg::rank(&rows) == n)
}

/// Whether the spec's derivations span the tangent space at `p`.
pub fn tangent_span_at(spec: &TransitivitySpec, p: &Point<Rational>) -> Result<bool> {
    let roots: Vec<RootDatum> = spec.derivations().iter().map(|d| d.root.clone()).collect();
    fields_span_at(spec.cone(), &roots, &p.coords)
}
