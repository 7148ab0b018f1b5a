//! Householder reflections and the infinite QR iteration.

pub mod householder;
pub mod invertible;
pub mod power;
pub mod window;

pub use householder::{householder_vector, qr_positive, qr_window, HouseholderReflector, WindowQr};
pub use invertible::{iqr_invertible, ledger_recursion, ErrorLedger, LedgerOptions};
pub use power::power_qr_equivalence_check;
pub use window::{giant_window_iterate, iqr_truncation, iqr_truncation_with, q_columns, IqrOptions, IqrWindow};
