use std::collections::BTreeSet;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lie::{lie_closure, linear_generator, matrix_is_nilpotent};
use super::{octant_root, require_witness, root_letter, Construction, GeneratorFamily, GeneratorPackage, TwoRootWitness};
use crate::error::{Error, Result};
use crate::lattice::{Cone, LatticeVector};
use crate::roots::RootDatum;
use crate::transitivity::{check_condition, SpecDerivation, TransitivitySpec};
use crate::Rational;

/// Candidates tried by the nilpotent partner search before giving up.
pub const NILPOTENT_SEARCH_BUDGET: usize = 1000;

fn combo(n: usize, terms: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; n];
    for &(i, c) in terms {
        v[i] += c;
    }
    v
}

fn saff_roots(n: usize) -> Result<Vec<(String, RootDatum)>> {
    let mut out = vec![("H_1".to_string(), octant_root(n, &combo(n, &[(0, -1)]))?)];
    for i in 0..n - 1 {
        out.push((format!("H({},{})", i + 1, i + 2), octant_root(n, &combo(n, &[(i + 1, 1), (i, -1)]))?));
    }
    out.push((format!("H({n},1)"), octant_root(n, &combo(n, &[(0, 1), (n - 1, -1)]))?));
    Ok(out)
}

/// `SAff_n` as generated by the translation root `-eps_1` and the cycle of
/// elementary roots `eps_{i+1} - eps_i`, `eps_1 - eps_n`.
pub fn saff_generators(n: usize) -> Result<GeneratorPackage> {
    if n < 2 {
        return Err(Error::InvalidArgument("SAff_n needs n >= 2".into()));
    }
    let letters = saff_roots(n)?.into_iter().map(|(name, r)| root_letter(name, r)).collect();
    Ok(GeneratorPackage {
        construction: Construction::Saff,
        cone: Cone::octant(n),
        letters,
        spec: None,
        condition: None,
        witnesses: Vec::new(),
        lie_certificate: None,
        toric: Vec::new(),
        notes: Vec::new(),
    })
}

/// `(-1, 1, ..., 1, 2)` rotated so that the `-1` sits at coordinate `i` (0-based).
fn basic_root(n: usize, i: usize) -> Vec<i64> {
    let mut w0 = vec![1; n];
    w0[0] = -1;
    w0[n - 1] = 2;
    let mut out = vec![0; n];
    for (k, x) in w0.into_iter().enumerate() {
        out[(k + i) % n] = x;
    }
    out
}

fn basic_kernel(n: usize, i: usize) -> Vec<LatticeVector> {
    let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    let mut gens = Vec::new();
    for (a, &j) in others.iter().enumerate() {
        gens.push(LatticeVector::from_i64(&combo(n, &[(j, 3)])));
        for &l in &others[a + 1..] {
            gens.push(LatticeVector::from_i64(&combo(n, &[(j, 1), (l, 1)])));
        }
    }
    gens
}

/// The derivations `x^{w_i + eps_i} d/dx_i` with `w_i` the rotated basic root
/// and `A_i` generated by `x_j^3` and `x_j x_l` off coordinate `i`.
fn basic_spec(n: usize, movers: Vec<RootDatum>) -> Result<TransitivitySpec> {
    let sigma = Cone::octant(n);
    let derivations = (0..n)
        .map(|i| {
            Ok(SpecDerivation {
                root: RootDatum::new(&sigma, i + 1, LatticeVector::from_i64(&basic_root(n, i)))?,
                kernel_generators: basic_kernel(n, i),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    TransitivitySpec::new(sigma, derivations, None, movers)
}

/// Adds `v_k = -eps_k + 2 eps_{k+1}` (0-based `k >= 1`) to a root of `S_1`.
fn chain_step(u: &RootDatum, k: usize) -> Result<TwoRootWitness> {
    let n = u.e.rank();
    let v = octant_root(n, &combo(n, &[(k, -1), (k + 1, 2)]))?;
    require_witness(&Cone::octant(n), u, &v)
}

fn require_first_ray(u: &RootDatum, n_min: usize) -> Result<usize> {
    let n = u.e.rank();
    if n < n_min {
        return Err(Error::InvalidArgument(format!("needs n >= {n_min}")));
    }
    if u.ray_index != 1 {
        return Err(Error::InvalidArgument(format!("{} is not a root of the first ray", u.e)));
    }
    RootDatum::new(&Cone::octant(n), 1, u.e.clone())?;
    Ok(n)
}

/// `u + (0, -1, 2, 0, ..., 0)` for `u = (-1, c_2, ..., c_n)` with `c_2 >= 1`,
/// with its production witness.
pub fn first_chain_step(u: &RootDatum) -> Result<(RootDatum, TwoRootWitness)> {
    require_first_ray(u, 3)?;
    if u.e[1].is_zero() {
        return Err(Error::InvalidArgument(format!("second coordinate of {} must be positive", u.e)));
    }
    let w = chain_step(u, 1)?;
    Ok((w.produced.clone(), w))
}

/// A root of `S_1` together with the production steps leading to it from
/// `(-1, 2, 0, ..., 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainRoot {
    pub root: RootDatum,
    pub chain: Vec<TwoRootWitness>,
}

fn add_pair(w: &RootDatum, i: usize, j: usize, chain: &mut Vec<TwoRootWitness>) -> Result<RootDatum> {
    let n = w.e.rank();
    let sigma = Cone::octant(n);
    let a = require_witness(&sigma, w, &octant_root(n, &combo(n, &[(i, -1), (j, 2)]))?)?;
    let b = require_witness(&sigma, &a.produced, &octant_root(n, &combo(n, &[(i, 2), (j, -1)]))?)?;
    let out = b.produced.clone();
    chain.push(a);
    chain.push(b);
    Ok(out)
}

/// `(-1, 1, ..., 1, 2) + sum 3 k_s eps_s + sum k_ij (eps_i + eps_j)` with
/// 1-based indices in `2..=n`; each addition is realized by two production
/// steps against the roots `-eps_i + 2 eps_j`.
pub fn chain_root(n: usize, singles: &[(usize, u32)], pairs: &[((usize, usize), u32)]) -> Result<ChainRoot> {
    if n < 3 {
        return Err(Error::InvalidArgument("needs n >= 3".into()));
    }
    let check = |i: usize| {
        if (2..=n).contains(&i) {
            Ok(i - 1)
        } else {
            Err(Error::InvalidArgument(format!("index {i} outside 2..={n}")))
        }
    };
    let mut chain = Vec::new();
    let mut w = octant_root(n, &combo(n, &[(0, -1), (1, 2)]))?;
    for k in 1..n - 1 {
        let step = chain_step(&w, k)?;
        w = step.produced.clone();
        chain.push(step);
    }
    for &((i, j), times) in pairs {
        let (i, j) = (check(i)?, check(j)?);
        if i == j {
            return Err(Error::InvalidArgument(format!("pair ({}, {}) repeats an index", i + 1, j + 1)));
        }
        for _ in 0..times {
            w = add_pair(&w, i, j, &mut chain)?;
        }
    }
    for &(s, times) in singles {
        let s = check(s)?;
        let j = (1..n).find(|&j| j != s).expect("n >= 3");
        for _ in 0..times {
            w = add_pair(&w, s, j, &mut chain)?;
            let sigma = Cone::octant(n);
            let step = require_witness(&sigma, &w, &octant_root(n, &combo(n, &[(s, 2), (j, -1)]))?)?;
            w = step.produced.clone();
            chain.push(step);
        }
    }
    Ok(ChainRoot { root: w, chain })
}

fn mover_roots_h(n: usize) -> Result<Vec<RootDatum>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(octant_root(n, &combo(n, &[(i, -1), (j, 2)]))?);
            }
        }
    }
    Ok(out)
}

fn package(
    construction: Construction,
    n: usize,
    letters: Vec<GeneratorFamily>,
    spec: TransitivitySpec,
    witnesses: Vec<TwoRootWitness>,
) -> Result<GeneratorPackage> {
    let condition = check_condition(&spec)?;
    Ok(GeneratorPackage {
        construction,
        cone: Cone::octant(n),
        letters,
        spec: Some(spec),
        condition: Some(condition),
        witnesses,
        lie_certificate: None,
        toric: Vec::new(),
        notes: Vec::new(),
    })
}

/// `<H_{1,2}, S(n)>` with `H_{1,2}` the root subgroup of `(-1, 2, 0, ..., 0)`.
pub fn permutation_generators(n: usize) -> Result<GeneratorPackage> {
    if n < 3 {
        return Err(Error::InvalidArgument("needs n >= 3".into()));
    }
    let h12 = octant_root(n, &combo(n, &[(0, -1), (1, 2)]))?;
    let letters = vec![
        root_letter("H_{1,2}", h12),
        GeneratorFamily::Permutations { name: format!("S({n})"), n },
    ];
    let spec = basic_spec(n, mover_roots_h(n)?)?;
    let mut witnesses = chain_root(n, &[(2, 1)], &[])?.chain;
    for w in chain_root(n, &[], &[((2, 3), 1)])?.chain {
        if !witnesses.contains(&w) {
            witnesses.push(w);
        }
    }
    package(Construction::Permutations, n, letters, spec, witnesses)
}

fn two_dim_triple() -> Result<(Vec<GeneratorFamily>, TransitivitySpec, Vec<TwoRootWitness>)> {
    let sigma = Cone::octant(2);
    let e2 = octant_root(2, &[0, -1])?;
    let v = octant_root(2, &[1, -1])?;
    let u = octant_root(2, &[-1, 2])?;
    let mut witnesses = vec![require_witness(&sigma, &u, &e2)?];
    let u3 = require_witness(&sigma, &u, &v)?;
    let u5 = require_witness(&sigma, &u3.produced, &v)?;
    let u4 = require_witness(&sigma, &u5.produced, &e2)?;
    witnesses.extend([u3, u5, u4]);
    let spec = TransitivitySpec::new(
        sigma,
        vec![
            SpecDerivation { root: u.clone(), kernel_generators: vec![LatticeVector::from_i64(&[0, 1])] },
            SpecDerivation { root: e2.clone(), kernel_generators: vec![LatticeVector::from_i64(&[1, 0])] },
            SpecDerivation { root: v.clone(), kernel_generators: vec![LatticeVector::from_i64(&[1, 0])] },
        ],
        None,
        vec![u.clone(), e2.clone(), v.clone()],
    )?;
    let letters = vec![root_letter("H_{e_2}", e2), root_letter("H_v", v), root_letter("H_u", u)];
    Ok((letters, spec, witnesses))
}

/// `<SAff_n, H_u>` for a non-affine root `u = (-1, c_2, ..., c_n)`; for
/// `n = 2` the three roots `(0,-1)`, `(1,-1)`, `(-1,2)`.
pub fn saff_plus_root_generators(n: usize, u: Option<&LatticeVector>) -> Result<GeneratorPackage> {
    if n < 2 {
        return Err(Error::InvalidArgument("needs n >= 2".into()));
    }
    if n == 2 {
        if let Some(u) = u {
            if *u != LatticeVector::from_i64(&[-1, 2]) {
                return Err(Error::Unsupported(format!("the planar triple uses u = (-1,2), not {u}")));
            }
        }
        let (letters, spec, witnesses) = two_dim_triple()?;
        return package(Construction::SaffPlusRoot, 2, letters, spec, witnesses);
    }
    let u = match u {
        Some(u) => u.clone(),
        None => LatticeVector::from_i64(&combo(n, &[(0, -1), (1, 2)])),
    };
    if u.rank() != n {
        return Err(Error::DimensionMismatch { expected: n, found: u.rank() });
    }
    let sigma = Cone::octant(n);
    let u = RootDatum::new(&sigma, 1, u)?;
    let total: num_bigint::BigInt = u.e.entries()[1..].iter().sum();
    if total < num_bigint::BigInt::from(2) {
        return Err(Error::InvalidArgument(format!("{} is an affine root", u.e)));
    }
    let mut witnesses = Vec::new();
    for i in 1..n {
        if u.e[i].is_zero() {
            continue;
        }
        witnesses.push(require_witness(&sigma, &u, &octant_root(n, &combo(n, &[(i, -1)]))?)?);
        for j in (1..n).filter(|&j| j != i) {
            witnesses.push(require_witness(&sigma, &u, &octant_root(n, &combo(n, &[(i, -1), (j, 1)]))?)?);
        }
        witnesses.push(require_witness(&sigma, &u, &octant_root(n, &combo(n, &[(i, -1), (0, 1)]))?)?);
    }
    let mut letters: Vec<GeneratorFamily> =
        saff_roots(n)?.into_iter().map(|(name, r)| root_letter(name, r)).collect();
    letters.push(root_letter("H_u", u.clone()));
    let mut movers = BTreeSet::new();
    for i in 0..n {
        movers.insert(octant_root(n, &combo(n, &[(i, -1)]))?);
        for j in (0..n).filter(|&j| j != i) {
            movers.insert(octant_root(n, &combo(n, &[(i, -1), (j, 1)]))?);
        }
    }
    movers.insert(u);
    let spec = basic_spec(n, movers.into_iter().collect())?;
    package(Construction::SaffPlusRoot, n, letters, spec, witnesses)
}

fn random_sparse_nilpotent(n: usize, rng: &mut ChaCha8Rng, lower: bool) -> Vec<Vec<Rational>> {
    const ENTRIES: [i64; 4] = [-2, -1, 1, 2];
    let mut y = vec![vec![Rational::zero(); n]; n];
    for (i, row) in y.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let strict = if lower { i > j } else { i < j };
            if strict && rng.gen_bool(0.5) {
                *x = Rational::from_integer(ENTRIES[rng.gen_range(0..ENTRIES.len())].into());
            }
        }
    }
    if lower {
        return y;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            out[perm[i]][perm[j]] = y[i][j].clone();
        }
    }
    out
}

/// `<U_y, H_{e_2}, H_u>` with `u = (-1, 2, 0, ..., 0)` and `y` a sparse
/// integer nilpotent matrix such that `y` and the generator `x` of
/// `H_{u + e_2}` generate `sl(n)`; `n = 2` falls back to the planar triple.
pub fn three_subgroup_generators(n: usize, seed: u64) -> Result<GeneratorPackage> {
    if n < 2 {
        return Err(Error::InvalidArgument("needs n >= 2".into()));
    }
    if n == 2 {
        let (letters, spec, witnesses) = two_dim_triple()?;
        return package(Construction::ThreeSubgroups, 2, letters, spec, witnesses);
    }
    let sigma = Cone::octant(n);
    let u = octant_root(n, &combo(n, &[(0, -1), (1, 2)]))?;
    let e2 = octant_root(n, &combo(n, &[(1, -1)]))?;
    let w = require_witness(&sigma, &u, &e2)?;
    let x = linear_generator(&w.produced).expect("u + e_2 is an elementary root");
    let target = n * n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for candidate in 0..NILPOTENT_SEARCH_BUDGET {
        let y = random_sparse_nilpotent(n, &mut rng, candidate % 2 == 0);
        if y.iter().flatten().all(Zero::is_zero) || !matrix_is_nilpotent(&y) {
            continue;
        }
        let closure = lie_closure(&[x.clone(), y.clone()])?;
        if closure.dimension == target {
            let letters = vec![
                GeneratorFamily::LieGenerator { name: "U_y".into(), matrix: y },
                root_letter("H_{e_2}", e2.clone()),
                root_letter("H_u", u.clone()),
            ];
            let spec = basic_spec(n, vec![e2, u])?;
            let mut pkg = package(Construction::ThreeSubgroups, n, letters, spec, vec![w])?;
            pkg.lie_certificate = Some(closure);
            pkg.notes.push(format!("nilpotent partner found at candidate {} with seed {seed}", candidate + 1));
            return Ok(pkg);
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no nilpotent partner among {NILPOTENT_SEARCH_BUDGET} candidates with seed {seed}"
    )))
}
