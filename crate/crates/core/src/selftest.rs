//! A fast invariant suite over every module, run by `demazure selftest`.

use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automorphism::degeneration_polynomial;
use crate::cox::CoxPresentation;
use crate::derivation::{commutator, newton_polytope, principal_part, AlgebraElement, Derivation, HomogeneousComponent};
use crate::error::Result;
use crate::generators::{
    permutation_generators, saff_plus_root_generators, three_subgroup_generators, toric_generators, two_root_witness,
};
use crate::lattice::{is_smooth_in_codim2, lattice_points_in, Cone, LatticeTag, LatticeVector};
use crate::roots::{enumerate_roots, is_demazure_root};
use crate::transitivity::{obstruction_invariant_set, solve_cortege, two_subgroup_spec, Cortege, SolveOptions};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

fn singular_threefold() -> Cone {
    let rays = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]];
    Cone::new(3, LatticeTag::N, rays.iter().map(|r| LatticeVector::from_i64(r)).collect()).expect("fixed cone")
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> LatticeVector {
    LatticeVector::from_i64(&(0..n).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>())
}

fn random_derivation(rng: &mut ChaCha8Rng, n: usize) -> Derivation<Rational> {
    let mut rho = random_vector(rng, n);
    if rho.is_zero() {
        rho.0[0] = BigInt::from(1);
    }
    let lambda = Rational::new(rng.gen_range(1..=5).into(), rng.gen_range(1..=3).into());
    Derivation::from_component(&HomogeneousComponent::new(lambda, rho, random_vector(rng, n)))
}

fn monomials(n: usize, bound: u32) -> Result<Vec<AlgebraElement<Rational>>> {
    Ok(lattice_points_in(n, &[], bound)?.into_iter().map(AlgebraElement::character).collect())
}

fn commutators_compose() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let probes = monomials(2, 2)?;
    for _ in 0..30 {
        let a = random_derivation(&mut rng, 2);
        let b = random_derivation(&mut rng, 2);
        let c = commutator(&a, &b)?;
        for f in &probes {
            if c.apply(f) != a.apply(&b.apply(f)).sub(&b.apply(&a.apply(f))) {
                return Err(crate::Error::InvalidArgument(format!("[a,b] differs from ab - ba on {f:?}")));
            }
        }
        let j = commutator(&a, &commutator(&b, &c)?)?
            .add(&commutator(&b, &commutator(&c, &a)?)?)
            .add(&commutator(&c, &commutator(&a, &b)?)?);
        if !j.is_zero() {
            return Err(crate::Error::InvalidArgument("Jacobi identity fails".into()));
        }
    }
    Ok("30 random pairs, 25 probes each".into())
}

fn two_root_segments() -> Result<String> {
    let sigma = Cone::octant(2);
    let roots = enumerate_roots(&sigma, 3)?;
    let mut count = 0;
    for a in &roots.roots {
        for b in &roots.roots {
            if a.ray_index == b.ray_index || b.rho(&sigma).pairing(&a.e) < BigInt::from(1) {
                continue;
            }
            let w = two_root_witness(&sigma, a, b)?;
            let expected = &b.e + &a.e.scale(&BigInt::from(w.delta));
            if !w.holds() || w.produced.e != expected {
                return Err(crate::Error::InvalidArgument(format!("two-root step fails for {} and {}", a.e, b.e)));
            }
            count += 1;
        }
    }
    Ok(format!("{count} root pairs on the quadrant"))
}

fn degenerations() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let d = random_derivation(&mut rng, 3)
            .add(&random_derivation(&mut rng, 3))
            .add(&random_derivation(&mut rng, 3));
        if d.is_zero() {
            continue;
        }
        let rho_t = random_vector(&mut rng, 3);
        let (pp, _) = principal_part(&d, &rho_t)?;
        if degeneration_polynomial(&d, &rho_t)?.at_zero() != &pp {
            return Err(crate::Error::InvalidArgument("degeneration at 0 is not the principal part".into()));
        }
        newton_polytope(&d)?;
    }
    Ok("10 random three-term derivations".into())
}

fn cox_descent() -> Result<String> {
    let cp = CoxPresentation::new(&singular_threefold())?;
    let mut checked = 0;
    for e_hat in lattice_points_in(4, &[], 2)? {
        let neg: Vec<usize> = (0..4).filter(|&j| e_hat[j] < BigInt::from(0)).collect();
        if neg.len() != 1 || e_hat[neg[0]] != BigInt::from(-1) {
            continue;
        }
        let zero = cp.degree_is_zero(&e_hat)?;
        let down = cp.descend_root(&e_hat)?;
        let valid = zero.as_ref().map(|m| is_demazure_root(cp.cone(), m)).transpose()?.flatten();
        if zero.is_some() != down.is_some() || down.as_ref().map(|r| r.ray_index) != valid {
            return Err(crate::Error::InvalidArgument(format!("descent disagrees at {e_hat}")));
        }
        checked += 1;
    }
    let groups = [
        CoxPresentation::new(&singular_threefold())?.class_group().to_string(),
        CoxPresentation::new(&Cone::octant(3))?.class_group().to_string(),
        CoxPresentation::new(&Cone::new(2, LatticeTag::N, vec![LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[1, 2])])?)?
            .class_group()
            .to_string(),
    ];
    if groups != ["Z", "0", "Z/2"] {
        return Err(crate::Error::InvalidArgument(format!("class groups {groups:?}")));
    }
    Ok(format!("{checked} octant roots; class groups Z, 0, Z/2"))
}

fn packages() -> Result<String> {
    let mut ps = vec![
        permutation_generators(3)?,
        saff_plus_root_generators(2, None)?,
        saff_plus_root_generators(3, Some(&LatticeVector::from_i64(&[-1, 2, 0])))?,
        three_subgroup_generators(3, 0)?,
        toric_generators(&singular_threefold())?,
    ];
    ps.push(toric_generators(&Cone::octant(3))?);
    for p in &ps {
        p.validate()?;
        let back: crate::generators::GeneratorPackage = crate::json::from_str(&crate::json::to_string(p)?)?;
        if &back != p {
            return Err(crate::Error::InvalidArgument(format!("{} package does not round-trip", p.construction.name())));
        }
    }
    Ok(format!("{} packages validated and round-tripped", ps.len()))
}

fn solver() -> Result<String> {
    let spec = two_subgroup_spec(2, 1)?;
    let q = |p: i64, d: i64| Rational::new(p.into(), d.into());
    let src = Cortege::from_rationals(vec![vec![q(1, 1), q(0, 1)], vec![q(-1, 2), q(3, 1)]])?;
    let tgt = Cortege::from_rationals(vec![vec![q(2, 1), q(1, 3)], vec![q(1, 1), q(-5, 4)]])?;
    let s = solve_cortege(&spec, &src, &tgt, SolveOptions::default())?;
    let spec3 = permutation_generators(3)?.spec.expect("permutation package has a spec");
    let a = Cortege::from_rationals(vec![vec![q(1, 1), q(0, 1), q(0, 1)], vec![q(0, 1), q(1, 2), q(-1, 1)], vec![q(2, 1), q(2, 1), q(2, 1)]])?;
    let b = Cortege::from_rationals(vec![vec![q(0, 1), q(0, 1), q(1, 1)], vec![q(1, 3), q(1, 1), q(1, 1)], vec![q(-1, 1), q(3, 1), q(1, 8)]])?;
    let t = solve_cortege(&spec3, &a, &b, SolveOptions::default())?;
    Ok(format!("plane pair in {} letters, 3 points in 3-space in {}", s.word.len(), t.word.len()))
}

fn obstruction() -> Result<String> {
    let r = obstruction_invariant_set(2, 2, 20, 0)?;
    if !r.preserved {
        return Err(crate::Error::InvalidArgument("invariant set broken for (2,2)".into()));
    }
    Ok("invariant set for (2,2) over 20 words".into())
}

fn smoothness() -> Result<String> {
    let crafted = Cone::new(
        3,
        LatticeTag::N,
        vec![LatticeVector::from_i64(&[1, 0, 0]), LatticeVector::from_i64(&[1, 2, 0]), LatticeVector::from_i64(&[0, 0, 1])],
    )?;
    if !is_smooth_in_codim2(&singular_threefold())? || is_smooth_in_codim2(&crafted)? {
        return Err(crate::Error::InvalidArgument("codimension-2 smoothness misjudged".into()));
    }
    Ok("singular threefold smooth in codimension 2, crafted cone not".into())
}

/// Runs every check; a check that errors counts as failed.
pub fn run() -> Vec<SelfCheck> {
    let checks: [(&'static str, fn() -> Result<String>); 8] = [
        ("commutator", commutators_compose),
        ("two-root", two_root_segments),
        ("degeneration", degenerations),
        ("cox", cox_descent),
        ("generators", packages),
        ("solver", solver),
        ("obstruction", obstruction),
        ("smoothness", smoothness),
    ];
    checks
        .iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(e) => (false, e.to_string()),
            };
            SelfCheck { name, passed, detail, millis: start.elapsed().as_millis() }
        })
        .collect()
}
