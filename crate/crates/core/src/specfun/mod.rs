//! Special functions and random variates used by every distribution formula.

mod beta;
mod gamma;
mod random;

pub use beta::{inc_beta, log_beta, reg_inc_beta};
pub use gamma::log_gamma;
pub use random::{sample_beta, sample_gamma, RandomStream};

pub(crate) use beta::{ln_beta_plus_ln2, ln_beta_unchecked, ln_inc_beta_lower, reg_inc_beta_pair};
pub(crate) use random::beta_log_odds;
