//! Rate regions of two-user broadcast channels with a one-way cooperation
//! link from the stronger receiver to the weaker one.
//!
//! The crate provides parametric inner and outer bounds with their threshold
//! (diamond) point, closed forms for the scalar Gaussian and the BEC/BSC
//! pairs, a brute-force grid oracle over auxiliary laws, and a Monte Carlo
//! simulator for superposition coding with decode-and-forward cooperation.

// `!(x >= 0.0)` is the NaN-rejecting form of every range check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod becbsc;
pub mod channel;
pub mod dnfsim;
pub mod error;
pub mod export;
pub mod figures;
pub mod frontier;
pub mod gaussian;
pub mod numerics;
pub mod oracle;
pub mod regions;

pub use becbsc::BecBscBC;
pub use channel::{
    capacity, is_more_capable, make_bec, make_bsc, mutual_information, AuxiliaryJoint, ChannelPair,
    DiscreteChannel, InputDistribution, MoreCapableCheck, MoreCapableReport, MoreCapableVerdict,
};
pub use dnfsim::{simulate, CodeConfig, InputLaw, SimChannel, SimReport};
pub use error::{Error, Result};
pub use export::{DiamondRow, Format, Record};
pub use frontier::{frontier_deviation, BoundaryPoint, Frontier, RatePair, Segment};
pub use gaussian::GaussianBC;
pub use numerics::{LogBase, Tolerance};
pub use oracle::{oracle_inner, oracle_outer, oracle_regions, GridSpec, OracleFrontiers};
pub use regions::{
    boundary_r2star, coincidence_check, inner_boundary, outer_boundary, r1_threshold,
    sweep_thresholds, threshold_alpha, ParametricFamily, ThresholdRow,
};
