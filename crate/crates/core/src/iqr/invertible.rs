use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::iqr::householder::reflector_or_identity;
use crate::iqr::window::{iqr_truncation_with, IqrOptions, IqrWindow};
use crate::operator::oracle::{ColumnOracle, Structure, DEFAULT_WINDOW_CAP};

/// Error bookkeeping of the column-truncated iteration at one value of `j`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ErrorLedger {
    pub j: u64,
    /// `(C + 1)^n`.
    pub c_tilde: f64,
    /// `δ_1(j), ..., δ_m(j)`.
    pub deltas: Vec<f64>,
    /// Gram-Schmidt residual norms `||ṽ_k||` of the columns of `T_(j)^n`.
    pub v_norms: Vec<f64>,
    pub final_bound: f64,
    /// Every `(j, bound)` evaluated by the search, in order.
    pub tried: Vec<(u64, f64)>,
}

/// Evaluates the δ recursion. `v_norms[0]` is `||t̃_1||`.
pub fn ledger_recursion(c: f64, n: usize, j: u64, v_norms: &[f64]) -> ErrorLedger {
    let m = v_norms.len();
    let c_tilde = (c + 1.0).powi(n as i32);
    let jf = j as f64;
    let mut deltas = Vec::with_capacity(m);
    for (k, &v) in v_norms.iter().enumerate() {
        let d = if k == 0 {
            2.0 * c_tilde / (jf * v)
        } else {
            let prev = deltas[k - 1];
            let step = 2.0 * (c_tilde / jf + 2.0 * k as f64 * prev * c_tilde) / v;
            f64::max(prev, step)
        };
        deltas.push(if d.is_nan() { f64::INFINITY } else { d });
    }
    let dm = deltas.last().copied().unwrap_or(0.0);
    let final_bound = 2.0 * (m as f64).sqrt() * dm * c + 1.0 / jf;
    ErrorLedger { j, c_tilde, deltas, v_norms: v_norms.to_vec(), final_bound, tried: vec![(j, final_bound)] }
}

/// `|R_kk|` of a Householder QR of the tall matrix `x`, i.e. the Gram-Schmidt residuals.
pub fn residual_norms(x: &CMatrix) -> Vec<f64> {
    let (rows, cols) = (x.rows(), x.cols());
    let mut a = x.clone();
    let mut out = Vec::with_capacity(cols);
    for j in 0..cols.min(rows) {
        let h = reflector_or_identity(&a.col(j)[j..rows], j);
        out.push(if h.is_identity() { 0.0 } else { h.beta.norm() });
        if !h.is_identity() {
            for c in j + 1..cols {
                h.apply_segment(&mut a.col_mut(c)[j..rows]);
            }
        }
    }
    out.resize(cols, 0.0);
    out
}

#[derive(Clone, Debug)]
pub struct LedgerOptions {
    /// Largest `j` tried by the doubling search.
    pub max_j: u64,
    pub window_cap: usize,
    pub keep_reflectors: bool,
}

impl Default for LedgerOptions {
    fn default() -> Self {
        LedgerOptions { max_j: 1 << 62, window_cap: DEFAULT_WINDOW_CAP, keep_reflectors: true }
    }
}

/// Ledger for `T_(j)`, `m` columns and `n` steps.
pub fn ledger_at(t: &ColumnOracle, m: usize, n: usize, j: u64, cap: usize) -> Result<ErrorLedger> {
    let c = match t.structure() {
        Structure::ColumnDecay(s) => s.norm_bound,
        Structure::QuasiBanded(_) => return Err(Error::InvalidInput("ledger needs a column-decay oracle".into())),
    };
    let tj = t.decay_truncation(j)?;
    let w = tj.profile().expect("truncations are banded").iterate_capped(m, n, cap)?;
    let a = tj.window(w, w);
    let mut x = CMatrix::from_fn(w, m, |i, k| if i == k { 1.0.into() } else { 0.0.into() });
    for _ in 0..n {
        x = a.matmul(&x);
    }
    Ok(ledger_recursion(c, n, j, &residual_norms(&x)))
}

/// Error-controlled iteration for invertible column-decay operators: searches
/// `j = 1, 2, 4, ...` for the first certified bound `<= eps` and returns
/// `P_m T_(j),n P_m` with its ledger.
pub fn iqr_invertible(
    t: &ColumnOracle,
    m: usize,
    n: usize,
    eps: f64,
    opts: &LedgerOptions,
) -> Result<(CMatrix, ErrorLedger, IqrWindow)> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput(format!("eps = {eps} must be positive")));
    }
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    let mut tried = Vec::new();
    let mut best = f64::INFINITY;
    let mut j: u64 = 1;
    loop {
        let mut ledger = ledger_at(t, m, n, j, opts.window_cap)?;
        tried.push((j, ledger.final_bound));
        best = best.min(ledger.final_bound);
        if ledger.final_bound <= eps {
            let tj = t.decay_truncation(j)?;
            let iopts =
                IqrOptions { window_cap: opts.window_cap, keep_reflectors: opts.keep_reflectors, ..Default::default() };
            let (block, win) = iqr_truncation_with(&tj, m, n, &iopts, |_, _| {})?;
            ledger.tried = tried;
            return Ok((block, ledger, win));
        }
        if j >= opts.max_j || j > u64::MAX / 2 {
            return Err(Error::BoundNotReached { best, requested: eps, max_j: j });
        }
        j *= 2;
    }
}
