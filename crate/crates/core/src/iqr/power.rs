use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::iqr::householder::thin_q;
use crate::iqr::window::{iqr_truncation, q_columns};
use crate::operator::oracle::ColumnOracle;
use crate::spectra::metrics::{subspace_delta_hat, SubspaceFrame};

/// `δ̂(span{T^n e_1..e_m}, span{Q̂_n e_1..e_m})`; both spans live in the first `f_n(m)` rows.
pub fn power_qr_equivalence_check(t: &ColumnOracle, m: usize, n: usize) -> Result<f64> {
    let band = t.profile().ok_or_else(|| Error::InvalidInput("power check needs a quasi-banded oracle".into()))?;
    let h = band.iterate(m, n).max(m);
    let a = t.window(h, h);
    let mut x = CMatrix::from_fn(h, m, |i, k| if i == k { 1.0.into() } else { 0.0.into() });
    for _ in 0..n {
        x = a.matmul(&x);
    }
    let pf = SubspaceFrame::from_columns(&thin_q(&x))?;
    let (_, win) = iqr_truncation(t, m, n)?;
    let qf = SubspaceFrame::new(q_columns(&win, m, h)?, h)?;
    subspace_delta_hat(&pf, &qf)
}
