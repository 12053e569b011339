//! Automorphisms built from root subgroups: letters, words, their action on
//! points of affine space and the flows they induce on the algebra.

mod flow;
mod word;

pub use flow::{
    adjoint, closed_form_exp, degeneration_polynomial, exp_on_algebra, exp_replica_on_algebra,
    torus_conjugate, DegenerationPolynomial, ADJOINT_BUDGET,
};
pub use word::{act_on_point, octant_root_index, AutLetter, Point, PointSpace, Word};
