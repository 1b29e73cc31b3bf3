//! The objective `F`, the feasible sets `X(γ)`, compressions, the closed
//! forms behind the norm bound, the optimal sets `O` and `O*`, and a numeric
//! oracle for the maximum norm.

mod compression;
mod constraints;
mod kkt;
mod objective;
mod optimal;
mod oracle;
mod vector;

pub use compression::{
    compress, compress_to_fixpoint, compression_digraph, compression_digraph_with, star_decomposition, star_form_f,
    CompressionDigraph, CompressionStep, Fixpoint, Star, StarDecomposition,
};
pub use constraints::{check_graph_constraints, Conclusions, GraphConstraintReport, Hypotheses, CONCLUSION_SLACK};
pub use kkt::{
    convex_bound, kkt_solve, sample_convex_point, shift_check, KktBranch, KktInstance, KktSolution, ShiftReport,
    MAX_SHIFT_ALPHA,
};
pub use objective::{f_value, grad_f, is_member, membership, quadratic_form_f, ConstraintReport};
pub use optimal::{
    enumerate_decompositions, enumerate_o, enumerate_o_star, nearest_o_point, nearest_o_star_point, o_point,
    optimal_norm, Nearest, MAX_O_K,
};
pub use oracle::{numeric_max_norm, project_simplex, OracleResult, DEFAULT_RESTARTS};
pub use vector::{table, PatternTable, ProfileVector, MAX_OPT_K};
