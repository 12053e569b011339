use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::spec::{GroupLevel, TransitivitySpec};
use crate::automorphism::{AutLetter, Point, Word};
use crate::derivation::{evaluate_monomial, AlgebraElement, HomogeneousComponent};
use crate::error::{Error, Result};
use crate::lattice::{linalg, LatticeVector};
use crate::roots::RootDatum;
use crate::Rational;

pub const DEFAULT_DETOUR_BUDGET: usize = 200;
/// Passes of the kernel search; the degree box doubles after each.
const DEGREE_BOXES: [u32; 4] = [1, 2, 4, 8];

/// An ordered tuple of pairwise distinct points of one affine space.
#[derive(Clone, Debug, PartialEq)]
pub struct Cortege {
    points: Vec<Point<Rational>>,
}

impl Cortege {
    pub fn new(points: Vec<Point<Rational>>) -> Result<Self> {
        if let Some(p) = points.first() {
            if let Some(q) = points.iter().find(|q| q.dim() != p.dim()) {
                return Err(Error::DimensionMismatch { expected: p.dim(), found: q.dim() });
            }
        }
        for (a, p) in points.iter().enumerate() {
            if points[..a].contains(p) {
                return Err(Error::InvalidArgument(format!("point {} repeats an earlier point", a + 1)));
            }
        }
        Ok(Cortege { points })
    }

    pub fn from_rationals(points: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(points.into_iter().map(Point::affine).collect())
    }

    pub fn points(&self) -> &[Point<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub seed: u64,
    /// Randomized detours tried per point before giving up.
    pub detour_budget: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { seed: 0, detour_budget: DEFAULT_DETOUR_BUDGET }
    }
}

/// A verified word with the group level of each letter.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub word: Word,
    pub levels: Vec<GroupLevel>,
    /// Intermediate positions at which the orbit and distinctness checks ran.
    pub waypoints: usize,
}

struct Field {
    component: HomogeneousComponent<Rational>,
    coordinate: usize,
    /// `e + eps_i`, the exponent of the rate.
    rate: LatticeVector,
    kernel: Vec<LatticeVector>,
}

struct Solver {
    n: usize,
    fields: Vec<Field>,
    movers: Vec<(RootDatum, LatticeVector)>,
    generated: BTreeSet<LatticeVector>,
    rng: ChaCha8Rng,
    budget: usize,
    waypoints: usize,
}

fn rate_exponent(root: &RootDatum) -> LatticeVector {
    let mut v = root.e.clone();
    v.0[root.ray_index - 1] += 1;
    v
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut num: i64 = rng.gen_range(-6..=5);
    if num >= 0 {
        num += 1;
    }
    Rational::new(BigInt::from(num), BigInt::from(rng.gen_range(1..=16)))
}

/// Monomials `sum k_l g_l` with `sum k_l <= degree`.
fn kernel_monomials(gens: &[LatticeVector], n: usize, degree: u32) -> Vec<LatticeVector> {
    let mut layer: BTreeSet<LatticeVector> = BTreeSet::from([LatticeVector::zero(n)]);
    let mut all = layer.clone();
    for _ in 0..degree {
        let mut next = BTreeSet::new();
        for m in &layer {
            for g in gens {
                let s = m + g;
                if !all.contains(&s) {
                    next.insert(s);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.into_iter().collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

impl Solver {
    fn new(spec: &TransitivitySpec, opts: SolveOptions) -> Result<Self> {
        if !spec.is_affine_space() {
            return Err(Error::Unsupported("the solver handles affine space with coordinate derivations".into()));
        }
        let n = spec.rank();
        let fields: Vec<Field> = (0..spec.derivations().len())
            .map(|k| {
                let d = &spec.derivations()[k];
                Field {
                    component: spec.component(k),
                    coordinate: d.root.ray_index - 1,
                    rate: rate_exponent(&d.root),
                    kernel: d.kernel_generators.clone(),
                }
            })
            .collect();
        let movers = spec.movers().iter().map(|r| (r.clone(), rate_exponent(r))).collect();
        let generated = spec.movers().iter().map(|r| r.e.clone()).collect();
        Ok(Solver {
            n,
            fields,
            movers,
            generated,
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            budget: opts.detour_budget,
            waypoints: 0,
        })
    }

    fn in_omega(&self, x: &[Rational]) -> bool {
        self.fields.iter().all(|f| !evaluate_monomial(&f.rate, x).expect("nonnegative exponent").is_zero())
    }

    /// Nonzero rates, then nonzero coordinates; every rate is a monomial, so
    /// the second count can always grow until the first is full.
    fn omega_score(&self, pts: &[Vec<Rational>]) -> (usize, usize) {
        let rates = pts
            .iter()
            .map(|x| {
                self.fields
                    .iter()
                    .filter(|f| !evaluate_monomial(&f.rate, x).expect("nonnegative exponent").is_zero())
                    .count()
            })
            .sum();
        let coords = pts.iter().flatten().filter(|c| !c.is_zero()).count();
        (rates, coords)
    }

    /// Not a common zero of every field and mover.
    fn in_orbit(&self, x: &[Rational]) -> bool {
        self.fields.iter().map(|f| &f.rate).chain(self.movers.iter().map(|(_, r)| r)).any(|r| {
            !evaluate_monomial(r, x).expect("nonnegative exponent").is_zero()
        })
    }

    fn check_waypoint(&mut self, pts: &[Vec<Rational>]) -> Result<()> {
        self.waypoints += 1;
        for (a, x) in pts.iter().enumerate() {
            if !self.in_orbit(x) || pts[..a].contains(x) {
                return Err(Error::InvalidArgument("internal: waypoint left the orbit or merged points".into()));
            }
        }
        Ok(())
    }

    /// `a` in `A_k` vanishing on `fixed` with `a(x) = 1`.
    fn kernel_element(&self, k: usize, fixed: &[Vec<Rational>], x: &[Rational]) -> Option<AlgebraElement<Rational>> {
        if fixed.is_empty() {
            return Some(AlgebraElement::one(self.n));
        }
        for degree in DEGREE_BOXES {
            let monos = kernel_monomials(&self.fields[k].kernel, self.n, degree);
            let mut rows: Vec<Vec<Rational>> = fixed
                .iter()
                .map(|p| monos.iter().map(|m| evaluate_monomial(m, p).expect("kernel exponents")).collect())
                .collect();
            rows.push(monos.iter().map(|m| evaluate_monomial(m, x).expect("kernel exponents")).collect());
            let mut rhs = vec![Rational::zero(); fixed.len()];
            rhs.push(Rational::one());
            if let Some(c) = linalg::solve(&rows, &rhs) {
                return Some(AlgebraElement::from_terms(
                    self.n,
                    monos.into_iter().zip(c).filter(|(_, c)| !c.is_zero()),
                ));
            }
        }
        None
    }

    /// A kernel element equal to 1 at `pts[j]` that vanishes at every other
    /// point, or failing that at `pts[..j]`.
    fn stabilizer_element(&self, k: usize, pts: &[Vec<Rational>], j: usize) -> Option<AlgebraElement<Rational>> {
        let others: Vec<Vec<Rational>> =
            pts.iter().enumerate().filter(|&(a, _)| a != j).map(|(_, x)| x.clone()).collect();
        self.kernel_element(k, &others, &pts[j]).or_else(|| self.kernel_element(k, &pts[..j], &pts[j]))
    }

    fn letter(&self, k: usize, a: AlgebraElement<Rational>, t: Rational) -> AutLetter {
        let component = self.fields[k].component.clone();
        if a == AlgebraElement::one(self.n) {
            AutLetter::RootFlow { component, t }
        } else {
            AutLetter::ReplicaFlow { component, kernel: a, t }
        }
    }

    fn apply_all(letter: &AutLetter, pts: &mut [Vec<Rational>]) -> Result<()> {
        for x in pts.iter_mut() {
            *x = crate::automorphism::act_on_point(letter, &Point::affine(std::mem::take(x)))?.coords;
        }
        Ok(())
    }

    /// Moves `pts[j]` to `target` coordinate by coordinate in `order`, keeping
    /// `pts[..j]` fixed; returns the letters or `None` when a rate vanishes.
    fn direct(&self, pts: &[Vec<Rational>], j: usize, target: &[Rational], order: &[usize]) -> Result<Option<(Word, Vec<Vec<Rational>>)>> {
        let mut cur = pts.to_vec();
        let mut word = Word::new();
        for &i in order {
            if cur[j][i] == target[i] {
                continue;
            }
            let mut moved = false;
            for k in (0..self.fields.len()).filter(|&k| self.fields[k].coordinate == i) {
                let rate = evaluate_monomial(&self.fields[k].rate, &cur[j])?;
                if rate.is_zero() {
                    continue;
                }
                let Some(a) = self.stabilizer_element(k, &cur, j) else {
                    continue;
                };
                let t = (target[i].clone() - cur[j][i].clone()) / rate;
                let l = self.letter(k, a, t);
                Self::apply_all(&l, &mut cur)?;
                if cur[..j] != pts[..j] {
                    return Err(Error::InvalidArgument("internal: stabilizing letter moved a fixed point".into()));
                }
                word.push(l);
                moved = true;
                break;
            }
            if !moved {
                return Ok(None);
            }
        }
        Ok((cur[j] == target).then_some((word, cur)))
    }

    /// A random flow fixing `fixed` and moving `x`.
    fn random_detour(&mut self, pts: &[Vec<Rational>], j: usize) -> Option<AutLetter> {
        let k = self.rng.gen_range(0..self.fields.len());
        if evaluate_monomial(&self.fields[k].rate, &pts[j]).ok()?.is_zero() {
            return None;
        }
        let a = self.stabilizer_element(k, pts, j)?;
        let t = small_rational(&mut self.rng);
        Some(self.letter(k, a, t))
    }

    /// Moves `pts[j]` to `target` fixing `pts[..j]`.
    fn place(&mut self, pts: &[Vec<Rational>], j: usize, target: &[Rational], keep_omega: bool) -> Result<Option<(Word, Vec<Vec<Rational>>)>> {
        let orders = permutations(self.n);
        let later_ok = |s: &Self, cur: &[Vec<Rational>]| !keep_omega || cur[j + 1..].iter().all(|x| s.in_omega(x));
        for order in &orders {
            if let Some((w, cur)) = self.direct(pts, j, target, order)? {
                if later_ok(self, &cur) {
                    return Ok(Some((w, cur)));
                }
            }
        }
        if !keep_omega {
            return Ok(None);
        }
        for _ in 0..self.budget {
            let mut src = pts.to_vec();
            let mut pre = Word::new();
            for _ in 0..self.rng.gen_range(1..=2) {
                if let Some(l) = self.random_detour(&src, j) {
                    Self::apply_all(&l, &mut src)?;
                    pre.push(l);
                }
            }
            let mut tgt = pts.to_vec();
            tgt[j] = target.to_vec();
            let mut post = Word::new();
            if self.rng.gen_bool(0.5) && !pts[..j].contains(&tgt[j]) {
                if let Some(l) = self.random_detour(&tgt, j) {
                    Self::apply_all(&l, &mut tgt)?;
                    post.push(l);
                }
            }
            if !self.in_omega(&src[j]) || !self.in_omega(&tgt[j]) {
                continue;
            }
            let undo = post.inverse()?;
            for order in &orders {
                if let Some((w, mut cur)) = self.direct(&src, j, &tgt[j], order)? {
                    for l in undo.letters() {
                        Self::apply_all(l, &mut cur)?;
                    }
                    if cur[j] == target && later_ok(self, &cur) {
                        let mut word = pre.clone();
                        word.extend(&w);
                        word.extend(&undo);
                        return Ok(Some((word, cur)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Greedy flows moving every point into the locus where all fields are
    /// nonzero; movers come before plain derivation flows.
    fn into_omega(&mut self, pts: &mut [Vec<Rational>]) -> Result<Word> {
        let times: Vec<Rational> = [(1, 1), (-1, 1), (2, 1), (1, 2), (-2, 1), (3, 1), (-1, 2), (1, 3)]
            .iter()
            .map(|&(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
            .collect();
        let full = pts.len() * self.fields.len();
        let mut word = Word::new();
        let mut score = self.omega_score(pts);
        let mut candidates: Vec<AutLetter> = Vec::new();
        for (r, _) in &self.movers {
            for t in &times {
                candidates.push(AutLetter::root_flow(r.e.clone(), t.clone())?);
            }
        }
        for k in 0..self.fields.len() {
            for t in &times {
                candidates.push(AutLetter::RootFlow { component: self.fields[k].component.clone(), t: t.clone() });
            }
        }
        while score.0 < full {
            let mut progressed = false;
            for l in &candidates {
                let mut trial = pts.to_vec();
                Self::apply_all(l, &mut trial)?;
                let s = self.omega_score(&trial);
                if s > score {
                    pts.clone_from_slice(&trial);
                    self.check_waypoint(pts)?;
                    word.push(l.clone());
                    score = s;
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                return Err(Error::NoSolution("could not move the points to where every field is nonzero".into()));
            }
        }
        Ok(word)
    }

    fn solve_all(&mut self, src: &[Vec<Rational>], tgt: &[Vec<Rational>], keep_omega: bool) -> Result<Option<Word>> {
        let mut cur = src.to_vec();
        let mut word = Word::new();
        for j in 0..cur.len() {
            match self.place(&cur, j, &tgt[j], keep_omega)? {
                Some((w, next)) => {
                    let mut replay = cur.clone();
                    for l in w.letters() {
                        Self::apply_all(l, &mut replay)?;
                        self.check_waypoint(&replay)?;
                    }
                    debug_assert_eq!(replay, next);
                    cur = next;
                    word.extend(&w);
                }
                None => return Ok(None),
            }
        }
        Ok(Some(word))
    }

    fn level(&self, l: &AutLetter) -> GroupLevel {
        match l {
            AutLetter::RootFlow { component, .. } if self.generated.contains(&component.e) => GroupLevel::Generated,
            _ => GroupLevel::Closure,
        }
    }
}

fn coords(c: &Cortege) -> Vec<Vec<Rational>> {
    c.points().iter().map(|p| p.coords.clone()).collect()
}

/// A word mapping `source[j]` to `target[j]` for every `j`, built point by
/// point with replica flows that fix the points already placed.
pub fn solve_cortege(spec: &TransitivitySpec, source: &Cortege, target: &Cortege, opts: SolveOptions) -> Result<Solution> {
    if source.len() != target.len() {
        return Err(Error::DimensionMismatch { expected: source.len(), found: target.len() });
    }
    let mut s = Solver::new(spec, opts)?;
    let src = coords(source);
    let tgt = coords(target);
    for x in src.iter().chain(&tgt) {
        if x.len() != s.n {
            return Err(Error::DimensionMismatch { expected: s.n, found: x.len() });
        }
        if !s.in_orbit(x) {
            return Err(Error::InvalidArgument(format!("{x:?} is fixed by every field")));
        }
    }
    let word = match s.solve_all(&src, &tgt, false)? {
        Some(w) => w,
        None => {
            let mut src_moved = src.clone();
            let g_src = s.into_omega(&mut src_moved)?;
            let mut tgt_moved = tgt.clone();
            let g_tgt = s.into_omega(&mut tgt_moved)?;
            let middle = s
                .solve_all(&src_moved, &tgt_moved, true)?
                .ok_or_else(|| Error::BudgetExhausted(format!("no placement within {} detours", s.budget)))?;
            let mut w = g_src;
            w.extend(&middle);
            w.extend(&g_tgt.inverse()?);
            w
        }
    };
    for (x, y) in source.points().iter().zip(target.points()) {
        if word.act(x)? != *y {
            return Err(Error::InvalidArgument("internal: solution failed verification".into()));
        }
    }
    let levels = word.letters().iter().map(|l| s.level(l)).collect();
    Ok(Solution { word, levels, waypoints: s.waypoints })
}
