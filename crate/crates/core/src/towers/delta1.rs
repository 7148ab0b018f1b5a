use serde_json::json;

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::iqr::invertible::{iqr_invertible, LedgerOptions};
use crate::iqr::window::{iqr_truncation, q_columns, IqrWindow};
use crate::operator::oracle::{ColumnOracle, Structure};
use crate::scalar::C64;
use crate::spectra::estimate::{SpectrumEstimate, SpectrumSource};
use crate::spectra::metrics::SubspaceFrame;
use crate::towers::growth::{growth_constants, IndexStructure};
use crate::towers::report::{pairs, BoundStep, TowerReport};

/// Caller-asserted class data for the extremal eigenpair tower: `r(T) <= t`,
/// `||T|| <= L` and `tan Φ <= L`.
#[derive(Clone, Debug)]
pub struct Delta1Input {
    pub t: ColumnOracle,
    pub k: usize,
    pub rate: f64,
    pub l: f64,
    pub n: u32,
}

#[derive(Clone, Debug)]
pub struct Delta1Output {
    pub eigenvalues: SpectrumEstimate,
    pub eigenvectors: Vec<Vec<C64>>,
    pub report: TowerReport,
}

fn check_rate(t: f64, l: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidInput(format!("rate t = {t} must lie in (0, 1)")));
    }
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::InvalidInput(format!("L = {l} must be positive")));
    }
    Ok(())
}

/// Smallest `m >= 0` with `c * t^m <= eps`.
fn iterations_for(c: f64, t: f64, eps: f64) -> usize {
    if c <= eps {
        return 0;
    }
    let mut m = ((eps / c).ln() / t.ln()).ceil().max(0.0) as usize;
    while m > 0 && c * t.powi(m as i32 - 1) <= eps {
        m -= 1;
    }
    while c * t.powi(m as i32) > eps {
        m += 1;
    }
    m
}

/// Runs `m` steps on the principal `k` block: exact windows for quasi-banded
/// oracles, the error-controlled path (to `eps`) for column-decay oracles.
fn run_iqr(t: &ColumnOracle, k: usize, m: usize, eps: f64) -> Result<(CMatrix, IqrWindow, serde_json::Value)> {
    match t.structure() {
        Structure::QuasiBanded(_) => {
            let (block, win) = iqr_truncation(t, k, m)?;
            Ok((block, win, json!({"path": "banded"})))
        }
        Structure::ColumnDecay(_) => {
            let (block, ledger, win) = iqr_invertible(t, k, m, eps, &LedgerOptions::default())?;
            Ok((block, win, json!({"path": "error_controlled", "j": ledger.j, "ledger_bound": ledger.final_bound})))
        }
    }
}

/// The `k` largest eigenvalues and eigenvectors to within `2^-n`.
pub fn delta1_extremal(input: &Delta1Input) -> Result<Delta1Output> {
    let Delta1Input { t, k, rate, l, n } = input;
    let (k, rate, l, n) = (*k, *rate, *l, *n);
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    check_rate(rate, l)?;
    let eps = 2f64.powi(-(n as i32 + 2)) / k as f64;
    let g = growth_constants(k, &IndexStructure::identity(k), l)?;
    let beta = g.beta;
    let c = beta * (2.0 * l).max(1.0);
    let m = iterations_for(c, rate, eps);
    let (block, win, path) = run_iqr(t, k, m, eps)?;
    let lambdas = block.diag();
    let vectors = q_columns(&win, k, win.window_size.max(k))?;
    let radius = 2f64.powi(-(n as i32));
    let radii = vec![radius; k];
    let report = TowerReport {
        algorithm: "delta1_extremal".into(),
        inputs: json!({"operator": t.name(), "k": k, "t": rate, "L": l, "n": n, "eps": eps, "beta": beta,
                       "B": g.b, "C": g.c, "run": path}),
        m_used: m,
        bound_trace: vec![BoundStep { m, bound: c * rate.powi(m as i32), target: eps }],
        points: pairs(&lambdas),
        radii: radii.clone(),
    };
    Ok(Delta1Output {
        eigenvalues: SpectrumEstimate::with_radii(lambdas, radii, SpectrumSource::Delta1Tower)?,
        eigenvectors: vectors,
        report,
    })
}

/// Orthonormal frame within `2^-n` (in `δ̂`) of the dominant `M`-dimensional invariant subspace,
/// under the asserted bounds `β/α < t` and the angle/coupling bound `<= L`.
pub fn delta1_invariant_subspace(
    t: &ColumnOracle,
    dim: usize,
    rate: f64,
    l: f64,
    n: u32,
) -> Result<(SubspaceFrame, TowerReport)> {
    if dim == 0 {
        return Err(Error::InvalidInput("subspace dimension must be at least 1".into()));
    }
    check_rate(rate, l)?;
    let half = 2f64.powi(-(n as i32 + 1));
    let m = iterations_for(l, rate, half);
    // strict inequality t^m L < 2^-(n+1)
    let m = if l * rate.powi(m as i32) >= half { m + 1 } else { m };
    let eps = half / (dim as f64).sqrt();
    let (_, win, path) = run_iqr(t, dim, m, eps)?;
    let h = win.window_size.max(dim);
    let vectors = q_columns(&win, dim, h)?;
    let frame = SubspaceFrame::new(vectors, h)?;
    let report = TowerReport {
        algorithm: "delta1_invariant_subspace".into(),
        inputs: json!({"operator": t.name(), "M": dim, "t": rate, "L": l, "n": n, "eps": eps, "run": path}),
        m_used: m,
        bound_trace: vec![BoundStep { m, bound: l * rate.powi(m as i32), target: half }],
        points: Vec::new(),
        radii: vec![2f64.powi(-(n as i32))],
    };
    Ok((frame, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_count_is_minimal() {
        let m = iterations_for(10.0, 0.5, 0.01);
        assert!(10.0 * 0.5f64.powi(m as i32) <= 0.01);
        assert!(10.0 * 0.5f64.powi(m as i32 - 1) > 0.01);
        assert_eq!(iterations_for(0.001, 0.5, 0.01), 0);
    }
}
