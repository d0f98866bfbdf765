//! Finite joint distributions and the Shannon primitives every measure uses.

mod channel;
mod info;
mod json;
mod table;

pub use channel::{attach_variable, numbered_labels, AttachRole, Channel};
pub use info::{
    conditional_entropy, conditional_mutual_information, entropy, entropy_of_masses,
    mutual_information, specific_information,
};
pub(crate) use info::specific_informations;
pub use json::{read_table, write_table, DistributionFile, MassEntry, VariableSpec};
pub use table::{marginal, validate, JointTable, Marginal, VarSet, Variable, MASS_TOLERANCE};
