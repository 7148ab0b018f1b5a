//! Infinite matrices as column oracles, the Z-to-N fold, and the operator gallery.

pub mod fold;
pub mod gallery;
pub mod oracle;
pub mod random;
pub mod registry;
pub mod sets;

pub use fold::{fold_operator, fold_z_to_n, unfold_n_to_z};
pub use oracle::{BandProfile, ColumnOracle, DecaySchedule, GalleryMetadata, Structure, DEFAULT_WINDOW_CAP};
pub use random::{sample_bernoulli_signs, DistributionRole, RandomEnsemble};
pub use registry::{build_operator, operator_from_id, parse_operator_id, OperatorSpec};
pub use sets::ReferenceSet;
