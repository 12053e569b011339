mod common;

use common::*;
use demazure::lattice::{
    dual_cone, is_smooth_in_codim2, lattice_index, lattice_points_in, saturate,
    smith_normal_form, two_faces, Cone, Constraint, LatticeIndex, LatticeTag, Relation,
};
use demazure::lattice::snf::int_mat_mul;
use demazure::{BigInt, Error, LatticeVector};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Determinantal divisors: d_1 ... d_k = gcd of the k x k minors.
fn invariant_factors_oracle(a: &[Vec<i64>]) -> Vec<i64> {
    let rows = a.len();
    let cols = a[0].len();
    fn det(m: Vec<Vec<i64>>) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(minor)
            })
            .sum()
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }
    let mut divisors = vec![1i64];
    for k in 1..=rows.min(cols) {
        let mut g = 0i64;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let m: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c]).collect()).collect();
                g = g.gcd(&det(m));
            }
        }
        divisors.push(g);
    }
    (1..divisors.len())
        .map(|k| if divisors[k] == 0 { 0 } else { divisors[k] / divisors[k - 1] })
        .collect()
}

#[test]
fn snf_of_index_three_lattice() {
    let a = mat(&[&[3, 0, 1], &[0, 3, 1]]);
    let s = smith_normal_form(&a, 3);
    assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(3)]);
    let prod = int_mat_mul(&int_mat_mul(&s.left, &a, 3), &s.right, 3);
    assert_eq!(prod, mat(&[&[1, 0, 0], &[0, 3, 0]]));
}

#[test]
fn snf_edge_cases() {
    assert!(smith_normal_form(&mat(&[&[0, 0], &[0, 0]]), 2).diagonal.iter().all(Zero::is_zero));
    assert_eq!(smith_normal_form(&mat(&[&[-4]]), 1).diagonal, vec![BigInt::from(4)]);
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..4, 1usize..4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..7, c), r))
}

proptest! {
    #[test]
    fn snf_transforms_and_divisibility(a in small_matrix()) {
        let cols = a[0].len();
        let big: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let s = smith_normal_form(&big, cols);
        let d = int_mat_mul(&int_mat_mul(&s.left, &big, cols), &s.right, cols);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i == j { prop_assert_eq!(x, &s.diagonal[i]); } else { prop_assert!(x.is_zero()); }
            }
        }
        for w in s.diagonal.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        let oracle: Vec<BigInt> = invariant_factors_oracle(&a).into_iter().map(BigInt::from).collect();
        prop_assert_eq!(&s.diagonal, &oracle);
    }
}

#[test]
fn lattice_index_examples() {
    let gens = vec![v(&[3, 0]), v(&[0, 3]), v(&[1, 1])];
    let amb = vec![v(&[1, 0]), v(&[0, 1])];
    assert_eq!(lattice_index(&gens, &amb).unwrap(), LatticeIndex::Finite(BigInt::from(3)));
    assert_eq!(lattice_index(&[v(&[1, 1])], &amb).unwrap(), LatticeIndex::Infinite);
    assert_eq!(lattice_index(&amb, &amb).unwrap(), LatticeIndex::Finite(BigInt::one()));
    assert_eq!(lattice_index(&[v(&[1, 0])], &[v(&[2, 0])]), Err(Error::NotContained));
}

#[test]
fn dual_examples() {
    let d = dual_cone(&quadrant());
    assert_eq!(d.rays(), &[v(&[0, 1]), v(&[1, 0])]);
    assert_eq!(d.lattice(), LatticeTag::M);
    let c = cone(&[&[1, 0], &[1, 2]]);
    assert_eq!(dual_cone(&c).rays(), &[v(&[0, 1]), v(&[2, -1])]);
    let ray = cone(&[&[2, 1]]);
    assert_eq!(dual_cone(&ray).rays(), &[v(&[-1, 2]), v(&[1, -2]), v(&[2, 1])]);
    let zero = Cone::new(3, LatticeTag::N, vec![]).unwrap();
    let whole = dual_cone(&zero);
    assert_eq!(whole.num_rays(), 6);
    assert_eq!(dual_cone(&whole).num_rays(), 0);
}

#[test]
fn two_face_examples() {
    let pairs = |c: &Cone| two_faces(c).unwrap().into_iter().map(|f| (f.i, f.j)).collect::<Vec<_>>();
    assert_eq!(pairs(&Cone::octant(3)), vec![(1, 2), (1, 3), (2, 3)]);
    assert_eq!(pairs(&quadrant()), vec![(1, 2)]);
    assert_eq!(pairs(&singular_threefold()), vec![(1, 3), (1, 4), (2, 3), (2, 4)]);
    assert!(is_smooth_in_codim2(&singular_threefold()).unwrap());
    let bad = cone(&[&[1, 0, 0], &[1, 2, 0], &[0, 0, 1]]);
    assert!(!is_smooth_in_codim2(&bad).unwrap());
    assert_eq!(two_faces(&cone(&[&[1, 0], &[-1, 0]])), Err(Error::NotPointed));
}

#[test]
fn constructor_rejects_redundant_rays() {
    let r = Cone::new(2, LatticeTag::N, vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]);
    assert_eq!(r, Err(Error::RedundantRay(3)));
    let c = Cone::from_generators(2, LatticeTag::N, vec![v(&[2, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap();
    assert_eq!(c.rays(), &[v(&[1, 0]), v(&[0, 1])]);
}

#[test]
fn lattice_points_order_and_empty_system() {
    assert_eq!(lattice_points_in(2, &[], 0).unwrap(), vec![v(&[0, 0])]);
    let s = vec![
        Constraint::new(v(&[1, 0]), Relation::Eq, -1),
        Constraint::new(v(&[0, 1]), Relation::Ge, 0),
    ];
    assert_eq!(lattice_points_in(2, &s, 2).unwrap(), vec![v(&[-1, 0]), v(&[-1, 1]), v(&[-1, 2])]);
}

/// Primitive vectors in a box that lie in the dual and are orthogonal to a
/// corank-one set of rays.
fn extreme_dual_rays_oracle(c: &Cone, bound: i64) -> Vec<LatticeVector> {
    let n = c.rank();
    let rays: Vec<Vec<i64>> = c.rays().iter().map(|r| r.to_i64().unwrap()).collect();
    let mut out = Vec::new();
    let pts = lattice_points_in(n, &[], bound as u32).unwrap();
    for p in pts {
        if p.is_zero() || !p.is_primitive() {
            continue;
        }
        let x = p.to_i64().unwrap();
        let vals: Vec<i64> = rays.iter().map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
        if vals.iter().any(|&s| s < 0) {
            continue;
        }
        let tight: Vec<Vec<demazure::BigRational>> =
            c.rays().iter().zip(&vals).filter(|(_, &s)| s == 0).map(|(r, _)| r.to_rational()).collect();
        if demazure::lattice::linalg::rank(&tight) == n - 1 {
            out.push(p);
        }
    }
    out
}

fn pointed_cone(rank: usize) -> impl Strategy<Value = Cone> {
    prop::collection::vec(prop::collection::vec(-2i64..3, rank), rank..rank + 3).prop_filter_map(
        "pointed full-dimensional",
        move |gens| {
            let c = Cone::from_generators(rank, LatticeTag::N, gens.iter().map(|g| LatticeVector::from_i64(g)).collect()).ok()?;
            c.require_strongly_convex().ok()?;
            Some(c)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_matches_brute_force_and_is_an_involution(c in pointed_cone(3)) {
        let d = dual_cone(&c);
        let oracle = extreme_dual_rays_oracle(&c, 8);
        for r in d.rays() {
            if r.norm_inf() <= BigInt::from(8) {
                prop_assert!(oracle.contains(r), "{:?} not extreme in oracle", r);
            }
        }
        for r in &oracle {
            prop_assert!(d.rays().contains(r));
        }
        let mut original = c.rays().to_vec();
        original.sort();
        prop_assert_eq!(dual_cone(&d).rays().to_vec(), original.clone());
        prop_assert_eq!(saturate(&c).rays().to_vec(), original);
        prop_assert!(c.is_saturated());
    }

    #[test]
    fn two_face_witnesses_certify(c in pointed_cone(3)) {
        for f in two_faces(&c).unwrap() {
            for (l, r) in c.rays().iter().enumerate() {
                let p = r.pairing(&f.witness);
                if l + 1 == f.i || l + 1 == f.j { prop_assert!(p.is_zero()); } else { prop_assert!(p > BigInt::zero()); }
            }
        }
    }

    #[test]
    fn constructor_agrees_with_sequential_pruning(gens in prop::collection::vec(prop::collection::vec(-2i64..3, 3), 1..6)) {
        prop_assume!(gens.iter().all(|g| g.iter().any(|&x| x != 0)));
        let vs: Vec<LatticeVector> = gens.iter().map(|g| LatticeVector::from_i64(g)).collect();
        let pruned = Cone::from_generators(3, LatticeTag::N, vs.clone()).unwrap();
        prop_assert_eq!(Cone::new(3, LatticeTag::N, vs.clone()).is_ok(), pruned.num_rays() == vs.len());
    }
}
