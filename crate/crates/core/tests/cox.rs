mod common;

use common::{cone, q, qi, singular_threefold, v};
use demazure::automorphism::{AutLetter, Point, PointSpace};
use demazure::cox::{letter_as_derivation_flow_check, sample_grid, ClassGroup, CoxPresentation};
use demazure::derivation::AlgebraElement;
use demazure::lattice::Cone;

#[test]
fn class_groups() {
    let z = CoxPresentation::new(&singular_threefold()).unwrap().class_group();
    assert_eq!(z, ClassGroup { free_rank: 1, torsion: vec![] });
    assert_eq!(z.to_string(), "Z");
    assert!(CoxPresentation::new(&Cone::octant(3)).unwrap().class_group().is_trivial());
    let a1 = CoxPresentation::new(&cone(&[&[1, 0], &[1, 2]])).unwrap().class_group();
    assert_eq!(a1, ClassGroup { free_rank: 0, torsion: vec![2.into()] });
    assert_eq!(a1.to_string(), "Z/2");
}

#[test]
fn roots_descend_exactly_in_degree_zero() {
    let cp = CoxPresentation::new(&singular_threefold()).unwrap();
    let r = cp.descend_root(&v(&[-1, 1, 0, 0])).unwrap().unwrap();
    assert_eq!((r.ray_index, r.e.clone()), (1, v(&[-1, 1, 0])));
    assert_eq!(cp.lift_root(&r), v(&[-1, 1, 0, 0]));
    assert!(cp.descend_root(&v(&[-1, 0, 0, 0])).unwrap().is_none());
    assert!(cp.descend_root(&v(&[1, 1, 0, 0])).is_err());

    let a1 = CoxPresentation::new(&cone(&[&[1, 0], &[1, 2]])).unwrap();
    assert_eq!(a1.descend_root(&v(&[-1, 1])).unwrap().unwrap().e, v(&[-1, 1]));
    assert!(a1.descend_root(&v(&[-1, 0])).unwrap().is_none());
}

#[test]
fn invariants_are_characters() {
    let cp = CoxPresentation::new(&singular_threefold()).unwrap();
    for (a, m) in cp.invariant_probes(2).unwrap() {
        assert_eq!(cp.total_coordinates(&m).unwrap(), a);
    }
    let x = [qi(2), q(1, 2), qi(-1), qi(3)];
    // chi^m = prod x_i^{<rho_i, m>}.
    assert_eq!(cp.evaluate_character(&v(&[1, 0, 1]), &x).unwrap(), qi(-2));
    let f = AlgebraElement::character(v(&[1, 1, 0]));
    assert_eq!(cp.evaluate(&f, &x).unwrap(), qi(9));
}

#[test]
fn total_coordinate_flows_match_the_induced_derivation() {
    let cp = CoxPresentation::new(&singular_threefold()).unwrap();
    let samples = sample_grid(4);
    let good = AutLetter::root_flow(v(&[-1, 1, 0, 0]), qi(2)).unwrap();
    assert!(letter_as_derivation_flow_check(&good, &cp, &samples, 2).unwrap());
    let replica = AutLetter::ReplicaFlow {
        component: match &good {
            AutLetter::RootFlow { component, .. } => component.clone(),
            _ => unreachable!(),
        },
        kernel: AlgebraElement::monomial(v(&[0, 1, 1, 0]), q(1, 3)),
        t: q(-1, 2),
    };
    assert!(letter_as_derivation_flow_check(&replica, &cp, &samples, 2).unwrap());
    let mut not_invariant = replica.clone();
    if let AutLetter::ReplicaFlow { kernel, .. } = &mut not_invariant {
        *kernel = AlgebraElement::monomial(v(&[0, 1, 1, 1]), qi(1));
    }
    assert!(!letter_as_derivation_flow_check(&not_invariant, &cp, &samples, 2).unwrap());
    let off_degree = AutLetter::root_flow(v(&[-1, 0, 0, 0]), qi(1)).unwrap();
    assert!(!letter_as_derivation_flow_check(&off_degree, &cp, &samples, 2).unwrap());

    let p = Point { space: PointSpace::Total, coords: vec![qi(1), qi(2), qi(3), qi(4)] };
    let moved = demazure::automorphism::act_on_point(&good, &p).unwrap();
    assert_eq!(moved.coords, vec![qi(5), qi(2), qi(3), qi(4)]);
}
