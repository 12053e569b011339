//! Total coordinates: `X_sigma` as the quotient of an open subset of `A^k`,
//! one coordinate per ray, by the group with character group `Cl(X)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::automorphism::{exp_on_algebra, exp_replica_on_algebra, octant_root_index, AutLetter, Point, PointSpace};
use crate::derivation::{evaluate_monomial, AlgebraElement, HomogeneousComponent};
use crate::error::{Error, Result};
use crate::lattice::snf::{int_mat_vec, smith_normal_form, solve_integer, SmithDecomposition};
use crate::lattice::{lattice_points_in, Cone, LatticeVector};
use crate::roots::RootDatum;
use crate::scalar::Field;
use crate::Rational;

/// `Cl(X) = Z^free_rank + sum Z/torsion_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    pub free_rank: usize,
    #[serde(with = "crate::serial::bigint_vec")]
    pub torsion: Vec<BigInt>,
}

impl ClassGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for ClassGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `Phi : M -> Z^k`, `m -> (<rho_i, m>)_i`, with `Cl(X) = coker Phi`.
#[derive(Clone, Debug)]
pub struct CoxPresentation {
    sigma: Cone,
    phi: Vec<Vec<BigInt>>,
    snf: SmithDecomposition,
}

impl CoxPresentation {
    /// Needs a full-dimensional pointed cone, so that `X` has no torus factor.
    pub fn new(sigma: &Cone) -> Result<Self> {
        sigma.require_strongly_convex()?;
        let phi = sigma.ray_matrix();
        let snf = smith_normal_form(&phi, sigma.rank());
        Ok(CoxPresentation { sigma: sigma.clone(), phi, snf })
    }

    pub fn cone(&self) -> &Cone {
        &self.sigma
    }

    /// Number of total coordinates.
    pub fn k(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[Vec<BigInt>] {
        &self.phi
    }

    pub fn total_coordinates(&self, m: &LatticeVector) -> Result<LatticeVector> {
        if m.rank() != self.sigma.rank() {
            return Err(Error::DimensionMismatch { expected: self.sigma.rank(), found: m.rank() });
        }
        Ok(LatticeVector::new(int_mat_vec(&self.phi, m.entries())))
    }

    pub fn class_group(&self) -> ClassGroup {
        ClassGroup { free_rank: self.k() - self.snf.rank(), torsion: self.snf.torsion() }
    }

    /// The `m` with `Phi(m) = v` when `x^v` has degree zero in `Cl(X)`.
    pub fn degree_is_zero(&self, v: &LatticeVector) -> Result<Option<LatticeVector>> {
        if v.rank() != self.k() {
            return Err(Error::DimensionMismatch { expected: self.k(), found: v.rank() });
        }
        Ok(solve_integer(&self.phi, self.sigma.rank(), v.entries()).map(LatticeVector::new))
    }

    /// A root of the octant descends to a root of `sigma` exactly when it has
    /// degree zero.
    pub fn descend_root(&self, e_hat: &LatticeVector) -> Result<Option<RootDatum>> {
        let c = HomogeneousComponent::<Rational>::unit(LatticeVector::zero(e_hat.rank()), e_hat.clone());
        let minus_one = -BigInt::one();
        let neg: Vec<usize> = (0..e_hat.rank()).filter(|&j| e_hat[j].is_negative()).collect();
        if e_hat.rank() != self.k() || neg.len() != 1 || e_hat[neg[0]] != minus_one {
            return Err(Error::NotARoot(format!("{} is not a root of the octant", c.e)));
        }
        match self.degree_is_zero(e_hat)? {
            Some(m) => Ok(Some(RootDatum::new(&self.sigma, neg[0] + 1, m)?)),
            None => Ok(None),
        }
    }

    pub fn lift_root(&self, root: &RootDatum) -> LatticeVector {
        LatticeVector::new(int_mat_vec(&self.phi, root.e.entries()))
    }

    /// Exponents `a` in the octant of sup norm at most `bound` with `x^a`
    /// invariant, paired with their preimages in `sigma^v cap M`.
    pub fn invariant_probes(&self, bound: u32) -> Result<Vec<(LatticeVector, LatticeVector)>> {
        let k = self.k();
        let constraints: Vec<_> = (0..k)
            .map(|j| crate::lattice::Constraint::new(LatticeVector::unit(k, j), crate::lattice::Relation::Ge, 0))
            .collect();
        let mut out = Vec::new();
        for a in lattice_points_in(k, &constraints, bound)? {
            if let Some(m) = self.degree_is_zero(&a)? {
                out.push((a, m));
            }
        }
        Ok(out)
    }

    /// `chi^m` at a point given in total coordinates, i.e. `x^{Phi(m)}`.
    pub fn evaluate_character<F: Field>(&self, m: &LatticeVector, x: &[F]) -> Result<F> {
        evaluate_monomial(&self.total_coordinates(m)?, x)
    }

    pub fn evaluate<F: Field>(&self, f: &AlgebraElement<F>, x: &[F]) -> Result<F> {
        let mut acc = F::zero();
        for (m, c) in f.terms() {
            acc = acc + c.clone() * self.evaluate_character(m, x)?;
        }
        Ok(acc)
    }

    /// The derivation on `A` that a flow letter in total coordinates induces,
    /// with its replica coefficient, or `None` if it does not descend.
    pub fn descend_letter(
        &self,
        letter: &AutLetter,
    ) -> Result<Option<(HomogeneousComponent<Rational>, Option<AlgebraElement<Rational>>, Rational)>> {
        let (component, kernel, t) = match letter {
            AutLetter::RootFlow { component, t } => (component, None, t),
            AutLetter::ReplicaFlow { component, kernel, t } => (component, Some(kernel), t),
            _ => return Err(Error::Unsupported("only flow letters descend to derivations".into())),
        };
        let (i, mu) = octant_root_index(component)?;
        let Some(e) = self.degree_is_zero(&component.e)? else {
            return Ok(None);
        };
        let down = HomogeneousComponent::new(mu, self.sigma.rays()[i].clone(), e);
        let kernel_down = match kernel {
            None => None,
            Some(a) => {
                let mut out = AlgebraElement::zero(self.sigma.rank());
                for (ah, c) in a.terms() {
                    match self.degree_is_zero(ah)? {
                        Some(m) => out.add_term(m, c.clone()),
                        None => return Ok(None),
                    }
                }
                Some(out)
            }
        };
        Ok(Some((down, kernel_down, t.clone())))
    }
}

/// Whether the flow letter, acting on total coordinates, matches the flow of
/// the induced derivation on invariant functions at every sample point.
pub fn letter_as_derivation_flow_check(
    letter: &AutLetter,
    cp: &CoxPresentation,
    samples: &[Vec<Rational>],
    probe_bound: u32,
) -> Result<bool> {
    let Some((c, kernel, t)) = (match cp.descend_letter(letter) {
        Ok(x) => x,
        Err(Error::NotARoot(_)) | Err(Error::NotLocallyNilpotent(_)) => return Ok(false),
        Err(e) => return Err(e),
    }) else {
        return Ok(false);
    };
    let probes = cp.invariant_probes(probe_bound)?;
    for x in samples {
        let p = Point { space: PointSpace::Total, coords: x.clone() };
        let moved = match crate::automorphism::act_on_point(letter, &p) {
            Ok(q) => q,
            Err(_) => return Ok(false),
        };
        for (_, m) in &probes {
            let f = AlgebraElement::character(m.clone());
            let image = match &kernel {
                None => exp_on_algebra(&c, cp.cone(), &t, &f)?,
                Some(a) => exp_replica_on_algebra(&c, a, cp.cone(), &t, &f)?,
            };
            if cp.evaluate(&image, x)? != cp.evaluate_character(m, &moved.coords)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A small deterministic grid of rational sample points in `Q^k`.
pub fn sample_grid(k: usize) -> Vec<Vec<Rational>> {
    let values = [Rational::new((-1).into(), 1.into()), Rational::new(1.into(), 2.into()), Rational::from_integer(2.into())];
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                values.iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
    }
    out.retain(|v| !v.iter().all(Zero::is_zero));
    out
}
