//! Limit algorithms with error certificates: extremal eigenpairs, spectra with
//! one-sided inclusion, and dominant invariant subspaces.

pub mod delta1;
pub mod growth;
pub mod report;
pub mod sigma1;
pub mod zconst;

pub use delta1::{delta1_extremal, delta1_invariant_subspace, Delta1Input, Delta1Output};
pub use growth::{growth_constants, GrowthConstants, IndexStructure};
pub use report::{BoundStep, TowerReport};
pub use sigma1::{h_value, sigma1_spectrum, GFunction, Sigma1Input};
pub use zconst::{z_constant, z_constant_from};
