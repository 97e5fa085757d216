//! Competitor screeners sharing the [`UtilityVector`](crate::UtilityVector)
//! interface.

mod ccsis;
mod dcsis;
mod sirs;

pub use ccsis::{ccsis_utility_all, ccsis_utility_all_with_table};
pub use dcsis::dcsis_utility_all;
pub use sirs::sirs_utility_all;
