//! Cost representations, benchmark cost generators and cost-based evaluation.

mod eval;
mod matrix;
mod proportional;
mod tree;

pub use eval::{evaluate, EvalReport};
pub use matrix::{cast_matrix_to_vectors, CostMatrix, CostVector};
pub use proportional::{
    proportional_bound, randomized_proportional, randomized_proportional_from_counts,
    PROPORTIONAL_SCALE,
};
pub use tree::{tree_distance_costs, HierarchyTree, ROOT_TOKEN};
