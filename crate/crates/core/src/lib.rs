//! Second-order stochastic dominance for order statistics.
//!
//! Rank conditions certify X_{i:n} ≥₂ X_{j:m} from the convexity class of
//! the parent CDF; a Monte Carlo test checks membership of a sample's parent
//! in such a class; numerical routines cross-check both.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod conditions;
pub mod convexity;
pub mod dominance;
pub mod error;
pub mod quadrature;
mod real;
pub mod reference;
pub mod special;

pub use catalog::{ConvexityClass, Distribution, Family, Membership, MembershipBasis};
pub use conditions::{
    corollary1, corollary2, min_rank, param_range_search, Candidate, CandidateStatus,
    DominanceVerdict, MinRank, ParamRange, RankStep, SearchOptions,
};
pub use convexity::{
    ConvexityTestResult, GcmResult, NodeConvention, NullDistribution, PowerRow, Table2,
    TransformedEmpirical,
};
pub use dominance::{
    dominance_degree, maxima_mean, order_stat_mean, ssd_numeric, Continuous, CrossingReport,
    Degree, DominanceDegree, MaximaComparison, OrderStatistic, Sign, SsdOutcome, SsdVerdict,
};
pub use error::{Error, Result};
pub use reference::{expected_transformed_beta, OrderStatSpec, ReferenceTransform};
pub use special::Accuracy;
