use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{require_witness, root_letter, Construction, GeneratorFamily, GeneratorPackage, TwoRootWitness};
use crate::cox::sample_grid;
use crate::derivation::AlgebraElement;
use crate::error::{Error, Result};
use crate::lattice::{
    dual_cone, lattice_index, lattice_points_in, linalg, orthogonal_lattice, singular_two_faces, smith_normal_form,
    solve_integer, two_faces, Cone, Constraint, LatticeIndex, LatticeVector, Relation,
};
use crate::roots::{enumerate_roots, RootDatum};
use crate::transitivity::{check_condition, fields_span_at, SpecDerivation, TransitivitySpec};
use crate::Rational;

/// Largest box searched for supporting functionals.
const SUPPORT_BOX: u32 = 16;
/// Sup-norm bound of the base root collection.
pub const BASE_BOUND: u32 = 3;

/// `m` with `<rho_k, m> = 0` for `k` in `zero` (1-based) and `> 0` on the
/// remaining rays, from the smallest box containing one.
fn face_support(sigma: &Cone, zero: &[usize]) -> Result<LatticeVector> {
    let constraints: Vec<Constraint> = (1..=sigma.num_rays())
        .map(|k| {
            let rel = if zero.contains(&k) { Relation::Eq } else { Relation::Gt };
            Constraint::new(sigma.rays()[k - 1].clone(), rel, 0)
        })
        .collect();
    for bound in 1..=SUPPORT_BOX {
        if let Some(m) = lattice_points_in(sigma.rank(), &constraints, bound)?.into_iter().next() {
            return Ok(m);
        }
    }
    Err(Error::BudgetExhausted(format!("no supporting functional for rays {zero:?} within box {SUPPORT_BOX}")))
}

/// `m` with `<rho_i, m> = 0` and `<rho_j, m> > 0` for `j != i`.
pub fn strict_support(sigma: &Cone, i: usize) -> Result<LatticeVector> {
    sigma.ray(i)?;
    face_support(sigma, &[i])
}

/// `m` with `<rho, m> = -1`, from extended gcds of the coordinates.
pub fn minus_one_form(rho: &LatticeVector) -> Result<LatticeVector> {
    let mut g = BigInt::zero();
    let mut coeffs = vec![BigInt::zero(); rho.rank()];
    for (k, r) in rho.entries().iter().enumerate() {
        let e = g.extended_gcd(r);
        for c in coeffs[..k].iter_mut() {
            *c = &*c * &e.x;
        }
        coeffs[k] = e.y;
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        coeffs.iter_mut().for_each(|c| *c = -&*c);
    }
    if !g.is_one() {
        return Err(Error::InvalidArgument(format!("{rho} is not primitive")));
    }
    Ok(LatticeVector::new(coeffs.into_iter().map(|c| -c).collect()))
}

/// Least `r` with `<rho_j, r m_bar + m_breve> >= 2` for all rays not in
/// `skip`; `m_bar` must be positive on those rays.
fn least_r(sigma: &Cone, m_bar: &LatticeVector, m_breve: &LatticeVector, skip: &[usize]) -> BigInt {
    let two = BigInt::from(2);
    let mut r: Option<BigInt> = None;
    for (j, rho) in sigma.rays().iter().enumerate() {
        if skip.contains(&(j + 1)) {
            continue;
        }
        let p = rho.pairing(m_bar);
        let q = rho.pairing(m_breve);
        let need = (&two - q).div_ceil(&p);
        r = Some(match r {
            Some(cur) if cur >= need => cur,
            _ => need,
        });
    }
    r.unwrap_or_else(BigInt::zero)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum B1Status {
    /// `A_i` already has the fraction field of the kernel.
    NotNeeded,
    /// The exponent quotient is cyclic and `b_1` generates it.
    Certified,
    /// The quotient is not cyclic; `b_1` is the sum of coset representatives
    /// and its field generation is assumed, not verified.
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct B1Data {
    pub status: B1Status,
    /// `b_1` is the sum of the characters with these exponents.
    pub exponents: Vec<LatticeVector>,
    /// Orders of the cyclic factors of the exponent quotient.
    #[serde(with = "crate::serial::bigint_vec")]
    pub quotient: Vec<BigInt>,
}

impl B1Data {
    pub fn element(&self) -> Option<AlgebraElement<Rational>> {
        let n = self.exponents.first()?.rank();
        Some(AlgebraElement::from_terms(n, self.exponents.iter().map(|m| (m.clone(), Rational::one()))))
    }
}

/// Every intermediate quantity of the construction for one distinguished ray.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayConstruction {
    pub ray_index: usize,
    pub m_bar: LatticeVector,
    pub m_breve: LatticeVector,
    #[serde(with = "crate::serial::bigint")]
    pub r: BigInt,
    pub e1: RootDatum,
    /// The rays completing the two chosen 2-faces through `ray_index`.
    pub second_ray: usize,
    pub third_ray: usize,
    pub e2: RootDatum,
    pub e3: RootDatum,
    pub eta: Vec<LatticeVector>,
    pub u: Vec<RootDatum>,
    pub v: Vec<LatticeVector>,
    pub kernel_index: LatticeIndex,
    pub b1: B1Data,
    pub witnesses: Vec<TwoRootWitness>,
}

/// Root of ray `j` vanishing on ray `i` and `>= 2` on the rest.
fn face_root(sigma: &Cone, i: usize, j: usize) -> Result<RootDatum> {
    let n = sigma.rank();
    let a = vec![sigma.rays()[i - 1].entries().to_vec(), sigma.rays()[j - 1].entries().to_vec()];
    let m_breve = solve_integer(&a, n, &[BigInt::zero(), -BigInt::one()])
        .map(LatticeVector::new)
        .ok_or_else(|| Error::NoSolution(format!("rays {i} and {j} do not extend to a lattice basis")))?;
    let m_bar = face_support(sigma, &[i, j])?;
    let r = least_r(sigma, &m_bar, &m_breve, &[i, j]);
    RootDatum::new(sigma, j, &m_bar.scale(&r) + &m_breve)
}

fn b1_data(sigma: &Cone, i: usize, v: &[LatticeVector]) -> Result<B1Data> {
    let n = sigma.rank();
    let basis = orthogonal_lattice(&[sigma.rays()[i - 1].clone()], n);
    let bt: Vec<Vec<Rational>> =
        (0..n).map(|r| basis.iter().map(|b| Rational::from_integer(b[r].clone())).collect()).collect();
    let coords: Vec<Vec<BigInt>> = v
        .iter()
        .map(|g| {
            linalg::solve(&bt, &g.to_rational())
                .map(|x| x.iter().map(|q| q.to_integer()).collect())
                .ok_or(Error::NotContained)
        })
        .collect::<Result<_>>()?;
    let s = smith_normal_form(&coords, basis.len());
    let right_q: Vec<Vec<Rational>> =
        s.right.iter().map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let inv = linalg::inverse(&right_q).expect("unimodular");
    let total = v.iter().skip(1).fold(v[0].clone(), |acc, x| &acc + x);
    let quotient: Vec<BigInt> = s.diagonal.iter().filter(|d| !d.is_one()).cloned().collect();
    let mut exponents = Vec::new();
    for (k, d) in s.diagonal.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let mut m = LatticeVector::zero(n);
        for (c, b) in inv[k].iter().zip(&basis) {
            m = &m + &b.scale(&c.to_integer());
        }
        let mut shift = BigInt::zero();
        for rho in sigma.rays() {
            let p = rho.pairing(&m);
            if p.is_negative() {
                let need = (-p).div_ceil(&rho.pairing(&total));
                if need > shift {
                    shift = need;
                }
            }
        }
        exponents.push(&m + &total.scale(&shift));
    }
    let status = match exponents.len() {
        0 => B1Status::NotNeeded,
        1 => B1Status::Certified,
        _ => B1Status::Assumed,
    };
    Ok(B1Data { status, exponents, quotient })
}

fn construct_for_ray(sigma: &Cone, i: usize, faces: &[(usize, usize)]) -> Result<RayConstruction> {
    let n = sigma.rank();
    let rho = sigma.rays()[i - 1].clone();
    let m_bar = strict_support(sigma, i)?;
    let m_breve = minus_one_form(&rho)?;
    let r = least_r(sigma, &m_bar, &m_breve, &[i]);
    let e1 = RootDatum::new(sigma, i, &m_bar.scale(&r) + &m_breve)?;
    RootDatum::new(sigma, i, &m_bar.scale(&(&r + 1)) + &m_breve)?;

    let mut partners: Vec<usize> = faces
        .iter()
        .filter_map(|&(a, b)| if a == i { Some(b) } else if b == i { Some(a) } else { None })
        .collect();
    partners.sort_unstable();
    let (second_ray, third_ray) = match partners[..] {
        [a, b, ..] => (a, b),
        _ => return Err(Error::NoSolution(format!("ray {i} lies on fewer than two 2-faces"))),
    };
    let e2 = face_root(sigma, i, second_ray)?;
    let e3 = face_root(sigma, i, third_ray)?;

    let rho2 = &sigma.rays()[second_ray - 1];
    let mut eta: Vec<LatticeVector> = Vec::new();
    for m in dual_cone(sigma).rays() {
        if eta.len() == n - 2 {
            break;
        }
        if rho.pairing(m).is_zero() && rho2.pairing(m).is_zero() {
            let mut trial: Vec<Vec<Rational>> = eta.iter().map(LatticeVector::to_rational).collect();
            trial.push(m.to_rational());
            if linalg::rank(&trial) == trial.len() {
                eta.push(m.clone());
            }
        }
    }
    if eta.len() != n - 2 {
        return Err(Error::NoSolution(format!("dual face of rays ({i}, {second_ray}) has too few rays")));
    }
    let mut u = vec![e2.clone()];
    for h in &eta {
        u.push(RootDatum::new(sigma, second_ray, &e2.e + h)?);
    }
    let v: Vec<LatticeVector> = u.iter().map(|x| &x.e + &e3.e).collect();
    if linalg::rank(&v.iter().map(LatticeVector::to_rational).collect::<Vec<_>>()) != n - 1 {
        return Err(Error::NoSolution("kernel exponents are linearly dependent".into()));
    }
    let kernel_index = lattice_index(&v, &orthogonal_lattice(&[rho.clone()], n))?;
    if kernel_index.finite().is_none() {
        return Err(Error::NoSolution("kernel exponents have infinite index".into()));
    }
    let b1 = b1_data(sigma, i, &v)?;

    let mut witnesses = Vec::new();
    for ul in &u {
        let a = require_witness(sigma, &e1, ul)?;
        let b = require_witness(sigma, &a.produced, &e3)?;
        witnesses.push(a);
        witnesses.push(b);
    }
    Ok(RayConstruction {
        ray_index: i,
        m_bar,
        m_breve,
        r,
        e1,
        second_ray,
        third_ray,
        e2,
        e3,
        eta,
        u,
        v,
        kernel_index,
        b1,
        witnesses,
    })
}

/// Generators for a cone of rank at least three that is smooth in codimension
/// two: for each of `rank` independent rays, a root `e_1` whose replicas by
/// the kernel exponents `v_l` are produced from roots of the two 2-faces
/// through that ray.
pub fn toric_generators(sigma: &Cone) -> Result<GeneratorPackage> {
    sigma.require_strongly_convex()?;
    let n = sigma.rank();
    if n < 3 {
        return Err(Error::InvalidArgument("needs rank >= 3".into()));
    }
    if let Some(f) = singular_two_faces(sigma)?.first() {
        return Err(Error::Unsupported(format!(
            "not smooth in codimension two: rays ({}, {}) do not extend to a lattice basis",
            f.i, f.j
        )));
    }
    let faces: Vec<(usize, usize)> = two_faces(sigma)?.into_iter().map(|f| (f.i, f.j)).collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut span: Vec<Vec<Rational>> = Vec::new();
    for (k, rho) in sigma.rays().iter().enumerate() {
        span.push(rho.to_rational());
        if linalg::rank(&span) == span.len() {
            chosen.push(k + 1);
        } else {
            span.pop();
        }
    }
    let toric: Vec<RayConstruction> =
        chosen.iter().map(|&i| construct_for_ray(sigma, i, &faces)).collect::<Result<_>>()?;

    let mut letters: Vec<GeneratorFamily> = Vec::new();
    for c in &toric {
        let i = c.ray_index;
        letters.push(root_letter(format!("e1[{i}]"), c.e1.clone()));
        for (l, u) in c.u.iter().enumerate() {
            letters.push(root_letter(format!("u{}[{i}]", l + 1), u.clone()));
        }
        letters.push(root_letter(format!("e3[{i}]"), c.e3.clone()));
    }
    let base: Vec<RootDatum> = enumerate_roots(sigma, BASE_BOUND)?.roots;
    let mut notes = Vec::new();
    let samples: Vec<Vec<Rational>> = sample_grid(n).into_iter().take(4).collect();
    let mut spanned = true;
    for x in &samples {
        spanned &= fields_span_at(sigma, &base, x)?;
    }
    if spanned {
        notes.push(format!("base roots of sup norm <= {BASE_BOUND} span the tangent space at {} torus points", samples.len()));
    } else {
        notes.push(format!("base roots of sup norm <= {BASE_BOUND} fail to span the tangent space at a sample point"));
    }
    if toric.iter().any(|c| c.b1.status == B1Status::Assumed) {
        notes.push("b1 field generation assumed for a non-cyclic exponent quotient".into());
    }
    let derivations: Vec<SpecDerivation> = toric
        .iter()
        .map(|c| SpecDerivation { root: c.e1.clone(), kernel_generators: c.v.clone() })
        .collect();
    let spec = TransitivitySpec::new(sigma.clone(), derivations, toric[0].b1.element(), base)?;
    let condition = check_condition(&spec)?;
    let witnesses = toric.iter().flat_map(|c| c.witnesses.iter().cloned()).collect();
    Ok(GeneratorPackage {
        construction: Construction::Toric,
        cone: sigma.clone(),
        letters,
        spec: Some(spec),
        condition: Some(condition),
        witnesses,
        lie_certificate: None,
        toric,
        notes,
    })
}
