pub mod eigen;
pub mod estimate;
pub mod localization;
pub mod metrics;
pub mod pseudospectrum;
pub mod svd;
pub mod tridiag;

pub use eigen::{eig_order, eigenpairs, hessenberg_reduce, schur, schur_eigenvalues, sort_eigenvalues};
pub use estimate::{finite_section_spectrum, SpectrumEstimate, SpectrumSource};
pub use localization::{inverse_participation_ratio, lyapunov_exponent, LyapunovEstimate};
pub use metrics::{
    hausdorff_distance, one_sided_distance, subspace_angle, subspace_delta, subspace_delta_hat, SubspaceFrame,
};
pub use pseudospectrum::{
    pseudospectrum_grid, pseudospectrum_grid_with, section_sigma_min, PseudospecGrid, PseudospecOptions, Region,
    EPSILON_FLOOR,
};
pub use svd::{singular_values, smallest_singular_value};
pub use tridiag::tridiagonal_eigenvalues;
