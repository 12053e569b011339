use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::solver::{solve_cortege, Cortege, Solution, SolveOptions};
use super::spec::{SpecDerivation, TransitivitySpec};
use crate::automorphism::{AutLetter, Point, Word};
use crate::error::{Error, Result};
use crate::lattice::{Cone, LatticeVector};
use crate::roots::RootDatum;
use crate::scalar::{Cyclotomic, Field};
use crate::Rational;

/// Outcome of testing an invariant over random words.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub preserved: bool,
    pub samples: usize,
    /// A word breaking the invariant, when one was found.
    pub witness: Option<Word>,
}

fn roots(a: u32, b: u32) -> Result<(RootDatum, RootDatum)> {
    let sigma = Cone::octant(2);
    Ok((
        RootDatum::new(&sigma, 1, LatticeVector::from_i64(&[-1, i64::from(a)]))?,
        RootDatum::new(&sigma, 2, LatticeVector::from_i64(&[i64::from(b), -1]))?,
    ))
}

/// `d_1 = y^a d/dx` and `d_2 = x^b d/dy` with `A_1 = K[y]`, `A_2 = K[x]`; the
/// two root subgroups are the movers.
pub fn two_subgroup_spec(a: u32, b: u32) -> Result<TransitivitySpec> {
    let (h1, h2) = roots(a, b)?;
    TransitivitySpec::new(
        Cone::octant(2),
        vec![
            SpecDerivation { root: h1.clone(), kernel_generators: vec![LatticeVector::from_i64(&[0, 1])] },
            SpecDerivation { root: h2.clone(), kernel_generators: vec![LatticeVector::from_i64(&[1, 0])] },
        ],
        None,
        vec![h1, h2],
    )
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut num: i64 = rng.gen_range(-5..=4);
    if num >= 0 {
        num += 1;
    }
    Rational::new(BigInt::from(num), BigInt::from(rng.gen_range(1..=8)))
}

fn random_point(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    vec![small_rational(rng), small_rational(rng)]
}

/// A random word of length `1..=6` in `H_1 = exp(t y^a d/dx)` and
/// `H_2 = exp(t x^b d/dy)`, alternating.
pub fn random_pair_word(a: u32, b: u32, rng: &mut ChaCha8Rng) -> Result<Word> {
    let (h1, h2) = roots(a, b)?;
    let len = rng.gen_range(1..=6);
    let mut first = rng.gen_bool(0.5);
    let mut w = Word::new();
    for _ in 0..len {
        let e = if first { &h1 } else { &h2 };
        w.push(AutLetter::root_flow(e.e.clone(), small_rational(rng))?);
        first = !first;
    }
    Ok(w)
}

/// For `a = 0` every word preserves `x(P) - x(Q)`; for other `a` a breaking
/// word is reported.
pub fn obstruction_x_difference(a: u32, b: u32, samples: usize, seed: u64) -> Result<ObstructionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let w = random_pair_word(a, b, &mut rng)?;
        let p = random_point(&mut rng);
        let mut q = random_point(&mut rng);
        if q == p {
            q[1] += Rational::from_integer(1.into());
        }
        let gp = w.act(&Point::affine(p.clone()))?;
        let gq = w.act(&Point::affine(q.clone()))?;
        if gp.coords[0].clone() - gq.coords[0].clone() != p[0].clone() - q[0].clone() {
            return Ok(ObstructionReport { preserved: false, samples, witness: Some(w) });
        }
    }
    Ok(ObstructionReport { preserved: true, samples, witness: None })
}

fn invariant_in<const D: u32>(a: u32, b: u32, samples: usize, seed: u64) -> Result<ObstructionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = Cyclotomic::<D>::omega();
    let omega_b = omega.powi(i64::from(b));
    let pair = |x: &[Cyclotomic<D>]| vec![omega.clone() * x[0].clone(), omega_b.clone() * x[1].clone()];
    for _ in 0..samples {
        let w = random_pair_word(a, b, &mut rng)?;
        let p: Vec<Cyclotomic<D>> = random_point(&mut rng).iter().map(Cyclotomic::from_rational).collect();
        let q = pair(&p);
        let gp = w.act(&Point::affine(p))?;
        let gq = w.act(&Point::affine(q))?;
        if gq.coords != pair(&gp.coords) {
            return Ok(ObstructionReport { preserved: false, samples, witness: Some(w) });
        }
    }
    Ok(ObstructionReport { preserved: true, samples, witness: None })
}

macro_rules! dispatch_order {
    ($d:expr, $a:expr, $b:expr, $s:expr, $seed:expr; $($k:literal),*) => {
        match $d {
            $($k => invariant_in::<$k>($a, $b, $s, $seed),)*
            other => Err(Error::Unsupported(format!("cyclotomic order {other} outside 2..=12"))),
        }
    };
}

/// For `ab > 2` the set of pairs `(P, Q)` with `Q = (omega x, omega^b y)`,
/// `omega` a primitive `(ab - 1)`-th root of unity, is invariant under every
/// word; checked exactly in the cyclotomic field.
pub fn obstruction_invariant_set(a: u32, b: u32, samples: usize, seed: u64) -> Result<ObstructionReport> {
    let ab = a * b;
    if ab <= 2 {
        return Err(Error::InvalidArgument(format!("ab = {ab} leaves no invariant set; it must exceed 2")));
    }
    dispatch_order!(ab - 1, a, b, samples, seed; 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12)
}

/// Seeded transports of random 2-point corteges by the pair family, for
/// exponents with no known invariant set.
pub fn pair_transports(a: u32, b: u32, count: usize, seed: u64) -> Result<Vec<(Cortege, Cortege, Solution)>> {
    let spec = two_subgroup_spec(a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let src = Cortege::from_rationals(vec![random_point(&mut rng), random_point(&mut rng)]);
        let tgt = Cortege::from_rationals(vec![random_point(&mut rng), random_point(&mut rng)]);
        let (Ok(src), Ok(tgt)) = (src, tgt) else {
            continue;
        };
        let opts = SolveOptions { seed: seed.wrapping_add(out.len() as u64), ..SolveOptions::default() };
        let s = solve_cortege(&spec, &src, &tgt, opts)?;
        out.push((src, tgt, s));
    }
    Ok(out)
}
