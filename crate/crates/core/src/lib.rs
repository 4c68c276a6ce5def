//! Biquasile colorings of marked graph diagrams.
//!
//! A marked graph diagram presents an oriented surface-link (or a cobordism
//! between classical links). Colorings of its regions by a finite biquasile
//! give a counting invariant, and a Boltzmann weight refines each count into
//! a multiset of weights.

pub mod algebra;
pub mod boltzmann;
pub mod corpus;
pub mod diagram;
mod dsu;
pub mod invariants;
pub mod solver;

pub use algebra::{
    alexander_biquasile, enumerate_biquasiles, make_biquasile, parse_matrix, serialize_matrix,
    validate_latin, AlexanderParams, AlgebraError, Biquasile, OpTable,
};
pub use boltzmann::{
    check_weight, enhanced_invariant, parse_weight, serialize_weight, weight_of_coloring,
    BoltzmannWeight, WeightError, WeightViolation, WeightedInvariant,
};
pub use diagram::{
    constraints, euler_check, parse_diagram, resolve, serialize_diagram, ClassicalDiagram,
    DiagramError, Equation, MarkedGraphDiagram, MarkedSchema, Relation, Sign, Vertex, VertexKind,
};
pub use dsu::UnionFind;
pub use invariants::{
    cobordism_inclusion_check, compare, counting_invariant, counting_invariant_with,
    invariant_table, InvariantTable, NamedAlgebra, NamedWeight, Verdict,
};
pub use solver::{
    build_linear_system, count_colorings, count_solutions_linear, list_colorings, oracle_count,
    Coloring, LinearSystem, SolverError, DEFAULT_ORACLE_BUDGET,
};
