//! Intersection information and two-predictor partial information
//! decomposition over finite discrete distributions.
//!
//! Three redundancy measures are provided:
//!
//! * [`measures::imin`]: expected minimum specific information,
//! * [`common_rv::iwedge`]: information the common random variable of the
//!   predictors carries about the target,
//! * [`ialpha::ialpha`]: the best `I(Q:Y)` over channels `Pr(Q|Y)` that
//!   every single predictor screens off from the target, found numerically.
//!
//! [`pid::decompose2`] turns any of them into redundant, unique and
//! synergistic components, and [`axioms`] checks the usual desiderata on
//! given or random distributions.

pub mod axioms;
pub mod cli;
pub mod common_rv;
pub mod corpus;
pub mod error;
pub mod ialpha;
pub mod measures;
pub mod pid;
pub mod prob;

pub use error::{Error, Result};
pub use measures::{intersection, MeasureConfig, MeasureKind};
pub use prob::{JointTable, VarSet, Variable};
