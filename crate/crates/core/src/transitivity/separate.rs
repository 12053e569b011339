use num_bigint::BigInt;
use num_traits::Zero;

use super::spec::TransitivitySpec;
use super::solver::Cortege;
use crate::automorphism::{act_on_point, AutLetter, Point, Word};
use crate::derivation::{evaluate_monomial, AlgebraElement};
use crate::error::{Error, Result};
use crate::Rational;

/// Triples `(k, a, b)` (0-based) such that no generator of `A_k` takes
/// different values at points `a < b`.
pub fn unseparated_pairs(spec: &TransitivitySpec, pts: &[Point<Rational>]) -> Result<Vec<(usize, usize, usize)>> {
    let mut out = Vec::new();
    for (k, d) in spec.derivations().iter().enumerate() {
        let values: Vec<Vec<Rational>> = pts
            .iter()
            .map(|p| d.kernel_generators.iter().map(|m| evaluate_monomial(m, &p.coords)).collect())
            .collect::<Result<_>>()?;
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                if values[a] == values[b] {
                    out.push((k, a, b));
                }
            }
        }
    }
    Ok(out)
}

fn scan_times() -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 1..=4i64 {
        for p in 1..=4i64 {
            for s in [1, -1] {
                let t = Rational::new(BigInt::from(s * p), BigInt::from(q));
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// A word after which every kernel algebra separates every pair of points.
/// Each letter strictly lowers the number of unseparated pairs; its time is
/// the first small rational doing so, which avoids the finitely many roots
/// of the separation polynomials.
pub fn separate_cortege(spec: &TransitivitySpec, c: &Cortege) -> Result<Word> {
    if !spec.is_affine_space() {
        return Err(Error::Unsupported("separation flows are implemented on affine space".into()));
    }
    let mut pts: Vec<Point<Rational>> = c.points().to_vec();
    let mut bad = unseparated_pairs(spec, &pts)?;
    let initial = bad.len();
    let mut word = Word::new();
    let times = scan_times();
    while !bad.is_empty() {
        let mut families: Vec<Box<dyn Fn(&Rational) -> AutLetter>> = Vec::new();
        if let Some(b1) = spec.b1() {
            let component = spec.component(0);
            let shift = b1.evaluate(&pts[0].coords)?;
            let kernel = b1.sub(&AlgebraElement::monomial(crate::LatticeVector::zero(spec.rank()), shift));
            if !kernel.is_zero() {
                families.push(Box::new(move |t| AutLetter::ReplicaFlow {
                    component: component.clone(),
                    kernel: kernel.clone(),
                    t: t.clone(),
                }));
            }
        }
        for k in 0..spec.derivations().len() {
            let component = spec.component(k);
            families.push(Box::new(move |t| AutLetter::RootFlow { component: component.clone(), t: t.clone() }));
        }
        for r in spec.movers() {
            if let Ok(base) = AutLetter::root_flow(r.e.clone(), Rational::zero()) {
                families.push(Box::new(move |t| match &base {
                    AutLetter::RootFlow { component, .. } => {
                        AutLetter::RootFlow { component: component.clone(), t: t.clone() }
                    }
                    other => other.clone(),
                }));
            }
        }
        let mut step = None;
        'search: for fam in &families {
            for t in &times {
                let l = fam(t);
                let moved: Vec<Point<Rational>> = pts.iter().map(|p| act_on_point(&l, p)).collect::<Result<_>>()?;
                let now = unseparated_pairs(spec, &moved)?;
                if now.len() < bad.len() {
                    step = Some((l, moved, now));
                    break 'search;
                }
            }
        }
        let Some((l, moved, now)) = step else {
            let (k, a, b) = bad[0];
            return Err(Error::NoSolution(format!(
                "points {} and {} stay unseparated by the kernel algebra of derivation {}",
                a + 1,
                b + 1,
                k + 1
            )));
        };
        word.push(l);
        pts = moved;
        bad = now;
        if word.len() > 4 * initial + 8 {
            return Err(Error::BudgetExhausted("separation did not converge".into()));
        }
    }
    let check: Vec<Point<Rational>> = c.points().iter().map(|p| word.act(p)).collect::<Result<_>>()?;
    if !unseparated_pairs(spec, &check)?.is_empty() {
        return Err(Error::InvalidArgument("internal: separation failed verification".into()));
    }
    Ok(word)
}
