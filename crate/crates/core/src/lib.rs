//! Hypercube colourings and the optimisation problem behind the multicolour
//! Ramsey numbers of odd cycles.
//!
//! Patterns `τ ∈ {0,1,*}^k` index everything: perfect matchings of `Q_k`
//! build extremal colourings, profile partitions map coloured graphs to
//! vectors over patterns, and the [`optimizer`] module studies the feasible
//! sets `X(γ)` those vectors live in.

pub mod colourings;
pub mod cube;
pub mod error;
pub mod graph;
pub mod labelling;
pub mod matchings;
pub mod optimizer;
pub mod scalar;
pub mod structures;

pub use colourings::{
    BipartitionChoice, CrossChoice, HypercubeColouring, KColouredGraph, Profile, ProfilePartition,
};
pub use cube::{Pattern, PatternSet, Trit};
pub use error::{Error, Result};
pub use graph::SimpleGraph;
pub use labelling::{ColouredMultigraph, Labelling};
pub use matchings::PerfectMatching;
pub use optimizer::ProfileVector;
pub use scalar::{Real, Scalar};

/// Exact rationals.
pub type Rational = num_rational::Rational64;

pub type ProfileVector64 = ProfileVector<f64>;
pub type ProfileVector32 = ProfileVector<f32>;
pub type ExactProfileVector = ProfileVector<Rational>;
