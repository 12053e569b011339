//! One line per acceptance criterion. Each check compares the library with
//! an oracle written here from the definitions, in exact arithmetic.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{cone, q, qi, quadrant, singular_threefold, v};
use demazure::automorphism::{adjoint, degeneration_polynomial, torus_conjugate, AutLetter, Point, Word, ADJOINT_BUDGET};
use demazure::cox::CoxPresentation;
use demazure::derivation::{ad_power, certify_lnd, commutator, newton_polytope, principal_part, LndStatus};
use demazure::generators::{
    permutation_generators, saff_plus_root_generators, three_subgroup_generators, toric_generators, GeneratorPackage,
};
use demazure::lattice::{is_smooth_in_codim2, LatticeIndex, LatticeTag};
use demazure::roots::is_demazure_root;
use demazure::transitivity::{
    obstruction_invariant_set, obstruction_x_difference, pair_transports, random_pair_word, solve_cortege, Cortege,
    SolveOptions,
};
use demazure::{Cone, Cyclotomic, Error, Field, LatticeVector, QComponent, QDerivation, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: demazure::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ints(x: &LatticeVector) -> Vec<i64> {
    x.to_i64().expect("small entries")
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-3..=3)).collect()
}

fn random_component(rng: &mut ChaCha8Rng, n: usize) -> QComponent {
    let mut rho = random_vec(rng, n);
    if rho.iter().all(|&x| x == 0) {
        rho[rng.gen_range(0..n)] = 1;
    }
    let mut num = rng.gen_range(-4..=4);
    if num == 0 {
        num = 1;
    }
    QComponent::new(q(num, rng.gen_range(1..=3)), v(&rho), v(&random_vec(rng, n)))
}

fn homogeneous(c: &QComponent) -> QDerivation {
    QDerivation::from_component(c)
}

/// Monomials of `sigma^v cap M` with sup norm at most `bound`.
fn dual_monomials(sigma: &Cone, bound: i64) -> Vec<Vec<i64>> {
    let n = sigma.rank();
    let rays: Vec<Vec<i64>> = sigma.rays().iter().map(ints).collect();
    let mut out = Vec::new();
    let mut m = vec![-bound; n];
    loop {
        if rays.iter().all(|r| dot(r, &m) >= 0) {
            out.push(m.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if m[k] < bound {
                m[k] += 1;
                break;
            }
            m[k] = -bound;
            k += 1;
        }
    }
}

type Poly = BTreeMap<Vec<i64>, Rational>;

/// `sum lambda <rho, m> c chi^{m+e}` over components, from the definition.
fn oracle_apply(cs: &[QComponent], f: &Poly) -> Poly {
    let mut out = Poly::new();
    for c in cs {
        let (rho, e) = (ints(&c.rho), ints(&c.e));
        for (m, coef) in f {
            let k = c.lambda.clone() * qi(dot(&rho, m)) * coef.clone();
            *out.entry(add(m, &e)).or_insert_with(Rational::zero) += k;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (m, c) in b {
        *out.entry(m.clone()).or_insert_with(Rational::zero) -= c.clone();
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn c1_commutator() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let cones = [quadrant(), singular_threefold()];
    let mut probes_checked = 0;
    for k in 0..200 {
        let sigma = &cones[k % 2];
        let n = sigma.rank();
        let (a, b) = (random_component(&mut rng, n), random_component(&mut rng, n));
        let c = lib(commutator(&homogeneous(&a), &homogeneous(&b)))?;
        let parts = c.homogeneous_components();
        for m in dual_monomials(sigma, 3) {
            let f: Poly = [(m.clone(), Rational::one())].into();
            let ab = oracle_apply(std::slice::from_ref(&a), &oracle_apply(std::slice::from_ref(&b), &f));
            let ba = oracle_apply(std::slice::from_ref(&b), &oracle_apply(std::slice::from_ref(&a), &f));
            let lhs = oracle_apply(&parts, &f);
            ensure(lhs == poly_sub(&ab, &ba), || format!("pair {k}: [a, b] differs on chi^{m:?}"))?;
            probes_checked += 1;
        }
    }
    Ok(format!("200 pairs, {probes_checked} monomial probes"))
}

fn c2_jacobi() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for k in 0..100 {
        let n = 2 + k % 2;
        let [a, b, c] = [0; 3].map(|_| homogeneous(&random_component(&mut rng, n)));
        let j = lib(commutator(&a, &lib(commutator(&b, &c))?))?
            .add(&lib(commutator(&b, &lib(commutator(&c, &a))?))?)
            .add(&lib(commutator(&c, &lib(commutator(&a, &b))?))?);
        ensure(j.is_zero(), || format!("triple {k}: Jacobi sum {j:?}"))?;
    }
    Ok("100 triples".into())
}

fn fact(k: i64) -> i64 {
    (1..=k).product()
}

/// `ad_U^m(V)` for `U = d_{rho1,e1}`, `V = d_{rho2,e2}` on the quadrant, from
/// iterating the bracket by hand with `c2 = <rho2, e1>`, `d1 = <rho1, e2>`.
fn ad_oracle(e1: &[i64], e2: &[i64], m: i64) -> QDerivation {
    let c2 = e1[1];
    let d1 = e2[0];
    let f = [e2[0] + m * e1[0], e2[1] + m * e1[1]];
    if m <= d1 {
        let a = fact(d1) / fact(d1 - m);
        let b = if m == 0 { 0 } else { m * c2 * fact(d1) / fact(d1 - m + 1) };
        QDerivation::from_component(&QComponent::unit(v(&[-b, a]), v(&f)))
    } else if m == d1 + 1 {
        QDerivation::from_component(&QComponent::new(qi(-c2 * fact(d1 + 1)), v(&[1, 0]), v(&f)))
    } else {
        QDerivation::zero(2)
    }
}

fn root_pairs() -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut out = Vec::new();
    for c2 in 1..=3 {
        for d1 in 0..=3 {
            out.push((vec![-1, c2], vec![d1, -1]));
        }
    }
    out
}

fn c3_ad_closed_form() -> Check {
    let mut checked = 0;
    for (e1, e2) in root_pairs() {
        let u = homogeneous(&QComponent::unit(v(&[1, 0]), v(&e1)));
        let w = homogeneous(&QComponent::unit(v(&[0, 1]), v(&e2)));
        let delta = e2[0] + 1;
        for m in 0..=delta + 2 {
            let got = lib(ad_power(&u, &w, m as usize))?;
            ensure(got == ad_oracle(&e1, &e2, m), || format!("e1={e1:?} e2={e2:?} m={m}"))?;
            ensure((m > delta) == got.is_zero(), || format!("vanishing wrong at e1={e1:?} e2={e2:?} m={m}"))?;
            checked += 1;
        }
    }
    Ok(format!("12 root pairs, {checked} powers"))
}

fn c4_bch_segment() -> Check {
    let sigma = quadrant();
    for (e1, e2) in root_pairs() {
        let u = homogeneous(&QComponent::unit(v(&[1, 0]), v(&e1)));
        let w = homogeneous(&QComponent::unit(v(&[0, 1]), v(&e2)));
        let ad = lib(adjoint(&u, &w, ADJOINT_BUDGET))?;
        // Ad_{exp U}(V) = sum ad_U^m(V) / m!, from the closed form.
        let mut oracle = QDerivation::zero(2);
        for m in 0..=e2[0] + 1 {
            oracle = oracle.add(&ad_oracle(&e1, &e2, m).scale(&q(1, fact(m))));
        }
        ensure(ad == oracle, || format!("adjoint differs for e1={e1:?} e2={e2:?}"))?;
        let top = add(&e2, &e1.iter().map(|x| x * (e2[0] + 1)).collect::<Vec<_>>());
        ensure(lib(newton_polytope(&ad))?.is_segment(&v(&e2), &v(&top)), || format!("not the segment to {top:?}"))?;
        for dir in [e1.clone(), e1.iter().map(|x| -x).collect()] {
            let (end, _) = lib(principal_part(&ad, &v(&dir)))?;
            ensure(end.is_homogeneous(), || format!("endpoint along {dir:?} is not homogeneous"))?;
            ensure(lib(certify_lnd(&end, &sigma, 64))? == LndStatus::Certified, || format!("endpoint along {dir:?} not certified"))?;
        }
    }
    Ok("12 root pairs, both endpoints certified".into())
}

fn c5_degeneration() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut checked = 0;
    for _ in 0..50 {
        let parts: Vec<QComponent> = (0..rng.gen_range(2..=4)).map(|_| random_component(&mut rng, 3)).collect();
        let d = lib(QDerivation::from_components(3, parts.iter()))?;
        if d.is_zero() {
            continue;
        }
        for _ in 0..10 {
            let mut rho_t = random_vec(&mut rng, 3);
            if rho_t.iter().all(|&x| x == 0) {
                rho_t[0] = 1;
            }
            let l_max = d.support().iter().map(|e| dot(&rho_t, &ints(e))).max().unwrap();
            // Only the degrees with <rho_t, e> = l_max survive lambda -> 0.
            let oracle = d.filter(|e| dot(&rho_t, &ints(e)) == l_max);
            let poly = lib(degeneration_polynomial(&d, &v(&rho_t)))?;
            ensure(poly.at_zero() == &oracle, || format!("constant term differs along {rho_t:?}"))?;
            ensure(lib(principal_part(&d, &v(&rho_t)))?.0 == oracle, || format!("principal part differs along {rho_t:?}"))?;
            for lambda in [q(1, 2), q(-3, 1), q(2, 5)] {
                let conj = lib(torus_conjugate(&d, &v(&rho_t), &lambda))?.scale(&lambda.powi(l_max));
                ensure(poly.evaluate(&lambda) == conj, || format!("polynomial differs at {lambda} along {rho_t:?}"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} derivation and direction pairs"))
}

fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    q(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

fn monomial_at(m: &[i64], x: &[Rational]) -> Rational {
    m.iter().zip(x).fold(Rational::one(), |acc, (&k, xi)| acc * xi.powi(k))
}

fn c6_cox_descent() -> Check {
    let sigma = singular_threefold();
    let cp = lib(CoxPresentation::new(&sigma))?;
    let rays: Vec<Vec<i64>> = sigma.rays().iter().map(ints).collect();
    // Phi(m) = (<rho_j, m>); its image is {a : a_4 = a_1 + a_2 - a_3}.
    let phi = |m: &[i64]| -> Vec<i64> { rays.iter().map(|r| dot(r, m)).collect() };
    let mut roots = 0;
    let mut descended = Vec::new();
    for i in 0..4 {
        let mut e = vec![0i64; 4];
        e[i] = -1;
        let others: Vec<usize> = (0..4).filter(|&j| j != i).collect();
        for code in 0..64 {
            for (k, &j) in others.iter().enumerate() {
                e[j] = (code >> (2 * k)) & 3;
            }
            roots += 1;
            let oracle = (e[3] == e[0] + e[1] - e[2]).then(|| e[..3].to_vec());
            let zero = lib(cp.degree_is_zero(&v(&e)))?.map(|m| ints(&m));
            let down = lib(cp.descend_root(&v(&e)))?;
            ensure(zero == oracle, || format!("degree-zero test wrong at {e:?}"))?;
            ensure(down.is_some() == oracle.is_some(), || format!("descent disagrees at {e:?}"))?;
            if let (Some(m), Some(r)) = (oracle, down) {
                // The pairings of m with the rays are e itself: one -1 at ray i.
                ensure(phi(&m) == e && ints(&r.e) == m && r.ray_index == i + 1, || format!("descended root wrong at {e:?}"))?;
                ensure(lib(is_demazure_root(&sigma, &r.e))? == Some(i + 1), || format!("descended {m:?} fails validation"))?;
                descended.push((i, e.clone(), m));
            }
        }
    }

    // Diagram: the flow of x_i += t x^{e+eps_i} on total coordinates against
    // exp(t d_{rho_i, m_e}) on invariant characters chi^m = x^{Phi(m)}.
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let probes = dual_monomials(&sigma, 2);
    let mut checks = 0;
    for _ in 0..20 {
        let x: Vec<Rational> = (0..4).map(|_| {
            let mut r = random_rational(&mut rng, 5, 5);
            if r.is_zero() {
                r = qi(1);
            }
            r
        }).collect();
        let (i, e, m_e) = &descended[rng.gen_range(0..descended.len())];
        let t = random_rational(&mut rng, 4, 3);
        let mut rate_exp = e.clone();
        rate_exp[*i] += 1;
        let mut moved = x.clone();
        moved[*i] += t.clone() * monomial_at(&rate_exp, &x);
        let letter = lib(AutLetter::root_flow(v(e), t.clone()))?;
        let lib_moved = lib(Word(vec![letter.clone()]).act(&Point::affine(x.clone())))?;
        ensure(lib_moved.coords == moved, || format!("flow of {e:?} differs on total coordinates"))?;
        for m in &probes {
            // exp(t d)(chi^m) = sum_k t^k / k! prod_{j<k} <rho_i, m + j m_e> chi^{m + k m_e}.
            let mut lhs = Rational::zero();
            let mut coef = Rational::one();
            let mut cur = m.clone();
            for k in 0.. {
                lhs += coef.clone() * monomial_at(&phi(&cur), &x);
                let p = dot(&rays[*i], &cur);
                if p == 0 {
                    break;
                }
                coef = coef * t.clone() * qi(p) / qi(k + 1);
                cur = add(&cur, m_e);
            }
            ensure(lhs == monomial_at(&phi(m), &moved), || format!("diagram fails for root {e:?} on chi^{m:?}"))?;
            checks += 1;
        }
        lib(demazure::cox::letter_as_derivation_flow_check(&letter, &cp, &[x], 2))?
            .then_some(())
            .ok_or_else(|| format!("library flow check rejects {e:?}"))?;
    }
    Ok(format!("{roots} octant roots, {} descend; {checks} diagram probes at 20 points", descended.len()))
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// gcd of the maximal minors of the rows in `gens` (all `r` columns).
fn minor_gcd(gens: &[Vec<i64>], r: usize) -> i64 {
    let mut g = 0;
    let k = gens.len();
    for mask in 0u32..(1 << k) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let rows: Vec<Vec<i64>> = (0..k).filter(|&j| mask >> j & 1 == 1).map(|j| gens[j].clone()).collect();
        g = gcd(g, det(&rows));
    }
    g
}

/// `Z^k / Phi(Z^n)` from the gcd of maximal minors: free rank `k - n`, and
/// torsion of that order (cyclic here since the order is squarefree).
fn class_group_oracle(sigma: &Cone) -> String {
    let rays: Vec<Vec<i64>> = sigma.rays().iter().map(ints).collect();
    let (k, n) = (rays.len(), sigma.rank());
    let t = minor_gcd(&rays, n);
    let mut parts = Vec::new();
    if k > n {
        parts.push(if k - n == 1 { "Z".to_string() } else { format!("Z^{}", k - n) });
    }
    if t > 1 {
        parts.push(format!("Z/{t}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn c7_class_groups() -> Check {
    let cases = [(singular_threefold(), "Z"), (Cone::octant(3), "0"), (Cone::octant(5), "0"), (cone(&[&[1, 0], &[1, 2]]), "Z/2")];
    let mut out = Vec::new();
    for (sigma, want) in cases {
        let got = lib(CoxPresentation::new(&sigma))?.class_group().to_string();
        ensure(got == want && class_group_oracle(&sigma) == want, || format!("{sigma:?}: got {got}, want {want}"))?;
        out.push(got);
    }
    Ok(format!("class groups {}", out.join(", ")))
}

/// Index of the kernel generators of a root of ray `i` in the octant kernel
/// lattice `{m : m_i = 0}`.
fn octant_kernel_index(i: usize, gens: &[LatticeVector], n: usize) -> i64 {
    let rows: Vec<Vec<i64>> = gens.iter().map(|g| ints(g).into_iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x).collect()).collect();
    minor_gcd(&rows, n - 1)
}

fn is_octant_root(e: &[i64]) -> bool {
    e.iter().filter(|&&x| x == -1).count() == 1 && e.iter().all(|&x| x >= -1)
}

/// Every witness is an honest two-root step: the produced exponent is a root
/// and `ad_U^delta(V)` is a nonzero multiple of its derivation.
fn check_witnesses(p: &GeneratorPackage) -> Result<(), String> {
    lib(p.validate())?;
    for r in p.roots() {
        ensure(is_octant_root(&ints(&r.e)) || p.cone != Cone::octant(p.cone.rank()), || format!("{} is not a root", r.e))?;
    }
    for w in &p.witnesses {
        let (a, b) = (&w.first, &w.second);
        let u = homogeneous(&QComponent::unit(a.rho(&p.cone).clone(), a.e.clone()));
        let x = homogeneous(&QComponent::unit(b.rho(&p.cone).clone(), b.e.clone()));
        let delta = dot(&ints(a.rho(&p.cone)), &ints(&b.e)) + 1;
        let expected = add(&ints(&b.e), &ints(&a.e).iter().map(|y| y * delta).collect::<Vec<_>>());
        ensure(w.delta as i64 == delta && ints(&w.produced.e) == expected, || format!("witness for {} miscomputed", w.produced.e))?;
        ensure(lib(is_demazure_root(&p.cone, &w.produced.e))? == Some(a.ray_index), || format!("{} is not a root", w.produced.e))?;
        let top = lib(ad_power(&u, &x, delta as usize))?;
        ensure(top.is_homogeneous() && top.support() == vec![w.produced.e.clone()], || format!("ad^delta misses {}", w.produced.e))?;
        ensure(lib(ad_power(&u, &x, delta as usize + 1))?.is_zero(), || format!("ad^(delta+1) nonzero for {}", w.produced.e))?;
    }
    Ok(())
}

fn c8_packages() -> Check {
    use demazure::transitivity::ConditionTag;
    let p3 = lib(permutation_generators(3))?;
    let c3 = p3.condition.clone().ok_or("no condition report")?;
    ensure(c3.tag == ConditionTag::Alpha, || format!("n=3 tag {}", c3.tag))?;
    for (d, idx) in p3.derivation_specs().iter().zip(&c3.indices) {
        let oracle = octant_kernel_index(d.root.ray_index - 1, &d.kernel_generators, 3);
        ensure(oracle == 3 && *idx == LatticeIndex::Finite(3.into()), || format!("n=3 index {idx:?}, oracle {oracle}"))?;
    }
    for n in [4, 5] {
        let p = lib(permutation_generators(n))?;
        let c = p.condition.clone().ok_or("no condition report")?;
        ensure(c.tag == ConditionTag::Beta, || format!("n={n} tag {}", c.tag))?;
        let any_one = p.derivation_specs().iter().any(|d| octant_kernel_index(d.root.ray_index - 1, &d.kernel_generators, n) == 1);
        ensure(any_one && c.indices.iter().any(LatticeIndex::is_one), || format!("n={n} has no index-1 kernel"))?;
    }

    let triple = lib(saff_plus_root_generators(2, None))?;
    ensure(triple.letters.len() == 3, || format!("n=2 package has {} letters", triple.letters.len()))?;
    check_witnesses(&triple)?;
    let five = lib(saff_plus_root_generators(3, Some(&v(&[-1, 2, 0]))))?;
    ensure(five.letters.len() == 5, || format!("n=3 package has {} letters", five.letters.len()))?;
    check_witnesses(&five)?;

    let mut dims = Vec::new();
    for n in [3, 4] {
        let p = lib(three_subgroup_generators(n, 0))?;
        let lie = p.lie_certificate.clone().ok_or("no Lie certificate")?;
        ensure(lie.dimension == n * n - 1, || format!("n={n}: Lie dimension {}", lie.dimension))?;
        // Independently: the basis is linearly independent and traceless.
        let flat: Vec<Vec<Rational>> = lie.basis.iter().map(|m| m.iter().flatten().cloned().collect()).collect();
        ensure(rank_q(flat) == n * n - 1, || format!("n={n}: basis is dependent"))?;
        ensure(
            lie.basis.iter().all(|m| (0..n).map(|i| m[i][i].clone()).fold(Rational::zero(), |a, b| a + b).is_zero()),
            || format!("n={n}: basis leaves sl(n)"),
        )?;
        check_witnesses(&p)?;
        dims.push(lie.dimension);
    }

    for sigma in [Cone::octant(3), singular_threefold()] {
        let p = lib(toric_generators(&sigma))?;
        ensure(p.toric.len() == sigma.rank(), || format!("{sigma:?}: {} ray constructions", p.toric.len()))?;
        check_witnesses(&p)?;
    }
    let crafted = cone(&[&[1, 0, 0], &[1, 2, 0], &[0, 0, 1]]);
    ensure(matches!(toric_generators(&crafted), Err(Error::Unsupported(_))), || "crafted cone accepted".into())?;
    Ok(format!("alpha index 3 at n=3, beta at n=4,5; 3 and 5 letter packages; sl dims {dims:?}; toric ok, crafted rejected"))
}

fn rank_q(mut rows: Vec<Vec<Rational>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone() / rows[rank][c].clone();
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x -= f.clone() * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Applies a word of flow and permutation letters by the explicit formulas.
fn oracle_act<F: Field>(w: &Word, mut x: Vec<F>) -> Result<Vec<F>, String> {
    let mono = |m: &[i64], x: &[F]| m.iter().zip(x).fold(F::one(), |acc, (&k, xi)| acc * xi.powi(k));
    for letter in w.letters() {
        match letter {
            AutLetter::RootFlow { component, t } | AutLetter::ReplicaFlow { component, t, .. } => {
                let rho = ints(&component.rho);
                let i = rho.iter().position(|&r| r != 0).ok_or("zero rho")?;
                ensure(rho.iter().filter(|&&r| r != 0).count() == 1, || "rho off the octant rays".into())?;
                let mut rate = ints(&component.e);
                rate[i] += 1;
                let mut speed = F::from_rational(&(t.clone() * component.lambda.clone() * qi(rho[i]))) * mono(&rate, &x);
                if let AutLetter::ReplicaFlow { kernel, .. } = letter {
                    let mut a = F::zero();
                    for (m, c) in kernel.terms() {
                        let m = ints(m);
                        ensure(m[i] == 0, || "kernel element depends on the moving coordinate".into())?;
                        a = a + F::from_rational(c) * mono(&m, &x);
                    }
                    speed = speed * a;
                }
                x[i] = x[i].clone() + speed;
            }
            AutLetter::Permutation(p) => {
                let old = x.clone();
                for (j, &pj) in p.iter().enumerate() {
                    x[pj] = old[j].clone();
                }
            }
            other => return Err(format!("unexpected letter {other:?}")),
        }
    }
    Ok(x)
}

fn random_cortege(rng: &mut ChaCha8Rng, points: usize, n: usize) -> Cortege {
    loop {
        let pts: Vec<Vec<Rational>> = (0..points).map(|_| (0..n).map(|_| random_rational(rng, 8, 8)).collect()).collect();
        if pts.iter().any(|p| p.iter().all(Zero::is_zero)) {
            continue;
        }
        if let Ok(c) = Cortege::from_rationals(pts) {
            return c;
        }
    }
}

fn transports(spec: &demazure::transitivity::TransitivitySpec, src: &Cortege, tgt: &Cortege, seed: u64) -> Result<usize, String> {
    let s = lib(solve_cortege(spec, src, tgt, SolveOptions { seed, ..SolveOptions::default() }))?;
    for (p, t) in src.points().iter().zip(tgt.points()) {
        ensure(oracle_act(&s.word, p.coords.clone())? == t.coords, || format!("word misses {:?}", t.coords))?;
    }
    Ok(s.word.len())
}

fn c9_solver() -> Check {
    let spec = lib(permutation_generators(3))?.spec.ok_or("no spec")?;
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut letters = 0;
    for k in 0..20 {
        let (src, tgt) = (random_cortege(&mut rng, 4, 3), random_cortege(&mut rng, 4, 3));
        letters += transports(&spec, &src, &tgt, k).map_err(|e| format!("pair {k}: {e}"))?;
    }
    let plane = lib(saff_plus_root_generators(2, None))?.spec.ok_or("no spec")?;
    let from = lib(Cortege::from_rationals(vec![vec![qi(1), qi(0)]]))?;
    let to = lib(Cortege::from_rationals(vec![vec![qi(1), qi(1)]]))?;
    let one = transports(&plane, &from, &to, 0)?;
    ensure(one == 1, || format!("plane demo took {one} letters"))?;
    Ok(format!("20 of 20 pairs, {letters} letters in total; plane demo in 1 letter"))
}

fn invariant_oracle<const D: u32>(a: u32, b: u32, words: usize) -> Result<(), String> {
    let omega = Cyclotomic::<D>::omega();
    ensure(omega.powi(D as i64).is_one(), || format!("omega^{D} != 1"))?;
    for k in 1..D {
        ensure(D % k != 0 || !omega.powi(k as i64).is_one(), || format!("omega has order {k} < {D}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + D as u64);
    for _ in 0..words {
        let w = lib(random_pair_word(a, b, &mut rng))?;
        let p: Vec<Cyclotomic<D>> = (0..2).map(|_| Cyclotomic::from_rational(&random_rational(&mut rng, 6, 6))).collect();
        let pair = |x: &[Cyclotomic<D>]| vec![omega.clone() * x[0].clone(), omega.powi(b as i64) * x[1].clone()];
        let (gp, gq) = (oracle_act(&w, p.clone())?, oracle_act(&w, pair(&p))?);
        ensure(gq == pair(&gp), || format!("({a},{b}): invariant set broken"))?;
    }
    lib(obstruction_invariant_set(a, b, words, 7))?.preserved.then_some(()).ok_or_else(|| format!("({a},{b}): library reports a break"))
}

fn c10_obstructions() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    for b in [1, 2, 3] {
        for _ in 0..100 {
            let w = lib(random_pair_word(0, b, &mut rng))?;
            let (p, r): (Vec<Rational>, Vec<Rational>) =
                ((0..2).map(|_| random_rational(&mut rng, 6, 6)).collect(), (0..2).map(|_| random_rational(&mut rng, 6, 6)).collect());
            let (gp, gr) = (oracle_act(&w, p.clone())?, oracle_act(&w, r.clone())?);
            ensure(gp[0].clone() - gr[0].clone() == p[0].clone() - r[0].clone(), || format!("x-difference broken for b={b}"))?;
        }
        ensure(lib(obstruction_x_difference(0, b, 100, 3))?.preserved, || format!("library reports a break for b={b}"))?;
    }
    invariant_oracle::<3>(2, 2, 100)?;
    invariant_oracle::<2>(3, 1, 100)?;
    let ts = lib(pair_transports(2, 1, 10, 21))?;
    ensure(ts.len() == 10, || format!("{} transports", ts.len()))?;
    for (src, tgt, s) in &ts {
        for (p, t) in src.points().iter().zip(tgt.points()) {
            ensure(oracle_act(&s.word, p.coords.clone())? == t.coords, || "transport misses its target".into())?;
        }
    }
    Ok("x-difference for a=0 and S for (2,2), (3,1) over 100 words; 10 transports for (2,1)".into())
}

fn cross(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: &[i64; 3], b: &[i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Pairs of rays spanning 2-faces of a full-dimensional cone, or `None` when
/// the rays are not the extremal rays of a pointed full-dimensional cone.
fn faces(rays: &[[i64; 3]]) -> Option<Vec<(usize, usize)>> {
    let k = rays.len();
    let mut out = Vec::new();
    let mut degree = vec![0; k];
    for i in 0..k {
        for j in i + 1..k {
            let c = cross(&rays[i], &rays[j]);
            if c == [0, 0, 0] {
                return None;
            }
            let s: Vec<i64> = (0..k).filter(|&l| l != i && l != j).map(|l| dot3(&c, &rays[l])).collect();
            if s.iter().all(|&x| x > 0) || s.iter().all(|&x| x < 0) {
                out.push((i, j));
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    (out.len() == k && degree.iter().all(|&d| d == 2)).then_some(out)
}

/// Searches a box for `v` with `det(a, b, v) = +-1`.
fn has_unimodular_completion(a: &[i64; 3], b: &[i64; 3]) -> bool {
    let c = cross(a, b);
    (-4..=4).any(|x| (-4..=4).any(|y| (-4..=4).any(|z| dot3(&c, &[x, y, z]).abs() == 1)))
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = idx.clone();
        match (0..k).rev().find(|&p| idx[p] < n - k + p) {
            Some(p) => {
                idx[p] += 1;
                for s in p + 1..k {
                    idx[s] = idx[s - 1] + 1;
                }
            }
            None => done = true,
        }
        Some(out)
    })
}

fn c11_smoothness() -> Check {
    let mut gens: Vec<[i64; 3]> = Vec::new();
    for x in -1..=2 {
        for y in -1..=2 {
            for z in -1..=2 {
                if gcd(gcd(x, y), z) == 1 {
                    gens.push([x, y, z]);
                }
            }
        }
    }
    let g = gens.len();
    let (mut cones, mut singular) = (0usize, 0usize);
    for k in 3..=5 {
        for subset in combinations(g, k) {
            let rays: Vec<[i64; 3]> = subset.iter().map(|&i| gens[i]).collect();
            let Some(fs) = faces(&rays) else { continue };
            let oracle = fs.iter().all(|&(i, j)| has_unimodular_completion(&rays[i], &rays[j]));
            let sigma =
                Cone::new(3, LatticeTag::N, rays.iter().map(|r| v(r)).collect()).map_err(|e| format!("{rays:?} rejected: {e}"))?;
            let got = lib(is_smooth_in_codim2(&sigma))?;
            ensure(got == oracle, || format!("{rays:?}: checker says {got}, oracle {oracle}"))?;
            cones += 1;
            singular += usize::from(!oracle);
        }
    }
    Ok(format!("{cones} cones over {g} primitive rays, {singular} not smooth in codimension 2"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 11] = [
        ("commutator oracle", Duration::from_secs(10), c1_commutator),
        ("Jacobi identity", Duration::from_secs(5), c2_jacobi),
        ("ad-power closed form", Duration::from_secs(5), c3_ad_closed_form),
        ("BCH segment and endpoints", Duration::from_secs(5), c4_bch_segment),
        ("degeneration polynomial", Duration::from_secs(5), c5_degeneration),
        ("Cox descent", Duration::from_secs(20), c6_cox_descent),
        ("class groups", Duration::from_secs(1), c7_class_groups),
        ("generator packages", Duration::from_secs(60), c8_packages),
        ("solver end to end", Duration::from_secs(120), c9_solver),
        ("obstructions", Duration::from_secs(60), c10_obstructions),
        ("codim-2 smoothness", Duration::from_secs(60), c11_smoothness),
    ];
    let mut failed = 0;
    for (k, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {limit:?} budget")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("{} {:>2} {name}: {detail} ({} ms)", if ok { "PASS" } else { "FAIL" }, k + 1, took.as_millis());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
