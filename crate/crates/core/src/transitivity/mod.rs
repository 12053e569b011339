//! The infinite transitivity criterion made constructive: condition checks,
//! separation of points by kernel algebras, a cortege solver on affine space,
//! and the obstructions to 2-transitivity for pairs of root subgroups.

mod obstruction;
mod separate;
mod solver;
mod spec;

pub use obstruction::{
    obstruction_invariant_set, pair_transports, obstruction_x_difference, random_pair_word, two_subgroup_spec, ObstructionReport,
};
pub use separate::{separate_cortege, unseparated_pairs};
pub use solver::{solve_cortege, Cortege, Solution, SolveOptions, DEFAULT_DETOUR_BUDGET};
pub use spec::{
    check_condition, fields_span_at, tangent_span_at, ConditionReport, ConditionTag, GroupLevel, SpecDerivation,
    TransitivitySpec,
};
