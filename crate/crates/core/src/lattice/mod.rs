//! Lattices, cones and integer linear algebra.

pub mod cone;
pub mod index;
pub mod linalg;
pub mod points;
pub mod simplex;
pub mod snf;
pub mod vector;

pub use cone::{
    cone_properties, dual_cone, is_smooth_in_codim2, minor_gcd, saturate, singular_two_faces,
    two_faces, Cone, ConeProperties, LatticeTag, TwoFace,
};
pub use index::{lattice_basis, lattice_index, orthogonal_lattice, LatticeIndex};
pub use points::{lattice_points_in, Constraint, Relation};
pub use snf::{integer_kernel, smith_normal_form, solve_integer, IntMatrix, SmithDecomposition};
pub use vector::LatticeVector;
