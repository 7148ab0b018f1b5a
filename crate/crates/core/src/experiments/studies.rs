use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::experiments::fit::{log_linear_fit, LinearFit};
use crate::iqr::window::{iqr_truncation_with, IqrOptions};
use crate::operator::gallery::toeplitz;
use crate::operator::oracle::ColumnOracle;
use crate::operator::sets::ReferenceSet;
use crate::scalar::C64;
use crate::spectra::eigen::{eigenpairs, schur_eigenvalues};
use crate::spectra::estimate::{SpectrumEstimate, SpectrumSource};
use crate::spectra::localization::inverse_participation_ratio;
use crate::spectra::metrics::one_sided_distance;
use crate::spectra::svd::singular_values;

/// Samples of two-dimensional reference sets used for the reverse Hausdorff direction.
pub const REFERENCE_SAMPLES: usize = 1024;
/// `|Im z|` at or below this counts as real.
pub const REAL_TOL: f64 = 1e-6;
/// Enlargement of analytic sets in membership statistics.
pub const MEMBERSHIP_SLACK: f64 = 0.05;

pub type CellKey = (usize, usize, usize);

#[derive(Clone, Debug, Default)]
pub struct SweepResult {
    /// `(m, n, sample)` → spectrum of `P_m T_n P_m`.
    pub table: BTreeMap<CellKey, SpectrumEstimate>,
    /// Participation ratios of the block eigenvectors, when computed.
    pub ipr: BTreeMap<CellKey, Vec<f64>>,
    /// `(m, n)` → (Hausdorff distance, one-sided pollution distance).
    pub distances: BTreeMap<(usize, usize), (f64, f64)>,
    pub fits: Option<LinearFit>,
}

/// `(d_H, sup_{z ∈ points} dist(z, set))`.
pub fn reference_distances(points: &[C64], set: &ReferenceSet) -> (f64, f64) {
    let one = points.iter().map(|&z| set.dist(z)).fold(0.0, f64::max);
    let back = one_sided_distance(&set.sample(REFERENCE_SAMPLES), points);
    (one.max(back), one)
}

fn spectrum_of(block: &CMatrix, shift: C64) -> Result<Vec<C64>> {
    let mut ev = schur_eigenvalues(block)?;
    for z in &mut ev {
        *z -= shift;
    }
    Ok(ev)
}

/// Spectra of `P_m (T + shift)_n P_m − shift` at every requested `n`, one run per `m`.
fn spectra_grid(
    t: &ColumnOracle,
    m: usize,
    n_values: &[usize],
    shift: C64,
    with_vectors: bool,
) -> Result<Vec<(usize, Vec<C64>, Option<Vec<f64>>)>> {
    let ts = t.shifted(shift);
    let n_max = n_values.iter().copied().max().unwrap_or(0);
    let opts = IqrOptions { keep_reflectors: false, ..Default::default() };
    let mut out = Vec::new();
    let mut failure = None;
    iqr_truncation_with(&ts, m, n_max, &opts, |l, block| {
        if failure.is_some() || !n_values.contains(&l) {
            return;
        }
        let res = if with_vectors {
            eigenpairs(block).and_then(|pairs| {
                let pts: Vec<C64> = pairs.iter().map(|(z, _)| z - shift).collect();
                let ipr: Result<Vec<f64>> = pairs.iter().map(|(_, v)| inverse_participation_ratio(v)).collect();
                Ok((pts, Some(ipr?)))
            })
        } else {
            spectrum_of(block, shift).map(|p| (p, None))
        };
        match res {
            Ok((p, ipr)) => out.push((l, p, ipr)),
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(out)
}

/// Distances of `σ(P_m Q_n* T Q_n P_m)` to a reference set over the (m, n) grid.
pub fn pollution_sweep(
    t: &ColumnOracle,
    m_values: &[usize],
    n_values: &[usize],
    shift: C64,
    reference: &ReferenceSet,
) -> Result<SweepResult> {
    let rows: Result<Vec<_>> =
        m_values.par_iter().map(|&m| Ok((m, spectra_grid(t, m, n_values, shift, false)?))).collect();
    let mut res = SweepResult::default();
    for (m, cells) in rows? {
        for (n, pts, _) in cells {
            res.distances.insert((m, n), reference_distances(&pts, reference));
            res.table.insert((m, n, 0), SpectrumEstimate::new(pts, SpectrumSource::IqrTruncation));
        }
    }
    Ok(res)
}

/// Approximation of the limit set of Toeplitz sections by the spectrum of one large section.
/// Not certified: large non-normal sections are sensitive to rounding.
pub fn schmidt_spitzer_reference(symbol: &[(i64, C64)], m_large: usize) -> Result<Vec<C64>> {
    let t = toeplitz(symbol)?;
    schur_eigenvalues(&t.truncation(m_large))
}

pub const DEFAULT_SCHMIDT_SPITZER_M: usize = 2000;

#[derive(Clone, Debug, Serialize)]
pub struct RateResult {
    pub ns: Vec<usize>,
    /// Planted eigenvalues used as targets.
    pub targets: Vec<C64>,
    /// `j` → `||P_j T_n P_j − diag(λ_1..λ_j)||` for each `n`.
    pub block_errors: BTreeMap<usize, Vec<f64>>,
    /// `i` → `|⟨T_n e_i, e_i⟩ − λ_i|`.
    pub entry_errors: Vec<Vec<f64>>,
    pub block_fits: BTreeMap<usize, Option<LinearFit>>,
    pub entry_fits: Vec<Option<LinearFit>>,
    /// Predicted per-entry rates `r_i = max{|λ_{k+1}/λ_k| : k <= i}`, including `ρ/|λ_N|` for the last.
    pub predicted_rates: Vec<f64>,
}

/// Rates `r_i` for simple planted eigenvalues in descending modulus with essential radius `rho`.
pub fn predicted_rates(values: &[C64], rho: f64) -> Vec<f64> {
    let n = values.len();
    let mut ratios: Vec<f64> = values.windows(2).map(|w| w[1].norm() / w[0].norm()).collect();
    if let Some(last) = values.last() {
        ratios.push(rho / last.norm());
    }
    (0..n)
        .map(|i| {
            let upto = if i + 1 == n { n } else { i + 1 };
            ratios[..upto].iter().cloned().fold(0.0, f64::max)
        })
        .collect()
}

/// Convergence of the leading blocks to the planted diagonal, recorded for `n = 0..=n_max`.
pub fn rate_experiment(t: &ColumnOracle, block_sizes: &[usize], n_max: usize) -> Result<RateResult> {
    let unsupported = |why: &str| Error::UnknownOperator { id: t.name().to_string(), reason: why.to_string() };
    let meta = t.metadata().ok_or_else(|| unsupported("no metadata"))?;
    let targets = meta.eigenvalues();
    let jmax = block_sizes.iter().copied().max().unwrap_or(0);
    if targets.is_empty() || jmax == 0 || jmax > targets.len() {
        return Err(unsupported("metadata lacks enough planted eigenvalues"));
    }
    let rho = meta.essential_bound.ok_or_else(|| unsupported("no essential bound"))?;
    let mut block_errors: BTreeMap<usize, Vec<f64>> = block_sizes.iter().map(|&j| (j, Vec::new())).collect();
    let mut entry_errors = vec![Vec::new(); jmax];
    let opts = IqrOptions { keep_reflectors: false, ..Default::default() };
    iqr_truncation_with(t, jmax, n_max, &opts, |_, block| {
        for (&j, errs) in block_errors.iter_mut() {
            let d = CMatrix::from_fn(j, j, |r, c| {
                let v = block[(r, c)];
                if r == c {
                    v - targets[r]
                } else {
                    v
                }
            });
            errs.push(singular_values(&d)[0]);
        }
        for (i, e) in entry_errors.iter_mut().enumerate() {
            e.push((block[(i, i)] - targets[i]).norm());
        }
    })?;
    let ns: Vec<usize> = (0..=n_max).collect();
    let scale = meta.norm_bound.unwrap_or(1.0).max(1.0);
    let floor = 1e3 * f64::EPSILON * scale;
    let block_fits = block_errors.iter().map(|(&j, e)| (j, log_linear_fit(&ns, e, floor))).collect();
    let entry_fits = entry_errors.iter().map(|e| log_linear_fit(&ns, e, floor)).collect();
    Ok(RateResult {
        ns,
        predicted_rates: predicted_rates(&targets[..jmax], rho),
        targets: targets[..jmax].to_vec(),
        block_errors,
        entry_errors,
        block_fits,
        entry_fits,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    pub set: String,
    pub slack: f64,
    pub inside: usize,
    pub total: usize,
}

impl Membership {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.inside as f64 / self.total as f64
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct EnsembleResult {
    pub sweep: SweepResult,
    /// `(m, n)` → membership of the pooled points in each analytic set.
    pub membership: BTreeMap<(usize, usize), Vec<Membership>>,
    /// `(m, n)` → (real points, all points).
    pub real_counts: BTreeMap<(usize, usize), (usize, usize)>,
}

impl EnsembleResult {
    pub fn pooled(&self, m: usize, n: usize) -> Vec<C64> {
        self.sweep.table.range((m, n, 0)..=(m, n, usize::MAX)).flat_map(|(_, s)| s.points.iter().copied()).collect()
    }

    pub fn real_fraction(&self, m: usize, n: usize) -> f64 {
        match self.real_counts.get(&(m, n)) {
            Some(&(r, t)) if t > 0 => r as f64 / t as f64,
            _ => 1.0,
        }
    }
}

/// Random-ensemble spectra: per sample, per (m, n), eigenvalues and IPRs of `P_m T_n P_m`.
/// `build(s)` returns the operator for sample `s`.
pub fn ensemble_study(
    build: impl Fn(usize) -> Result<ColumnOracle> + Sync,
    samples: usize,
    m_values: &[usize],
    n_values: &[usize],
    shift: C64,
) -> Result<EnsembleResult> {
    let jobs: Vec<(usize, usize)> = (0..samples).flat_map(|s| m_values.iter().map(move |&m| (s, m))).collect();
    let done: Result<Vec<_>> = jobs
        .par_iter()
        .map(|&(s, m)| {
            let t = build(s)?;
            let cells = spectra_grid(&t, m, n_values, shift, true)?;
            Ok((s, m, t, cells))
        })
        .collect();
    let mut res = EnsembleResult::default();
    let mut sets: Vec<(String, ReferenceSet)> = Vec::new();
    for (s, m, t, cells) in done? {
        if sets.is_empty() {
            if let Some(meta) = t.metadata() {
                sets = meta.analytic_sets.clone();
            }
        }
        for (n, pts, ipr) in cells {
            res.sweep.ipr.insert((m, n, s), ipr.unwrap_or_default());
            res.sweep.table.insert((m, n, s), SpectrumEstimate::new(pts, SpectrumSource::IqrTruncation));
        }
    }
    for &m in m_values {
        for &n in n_values {
            let pts = res.pooled(m, n);
            let real = pts.iter().filter(|z| z.im.abs() <= REAL_TOL).count();
            res.real_counts.insert((m, n), (real, pts.len()));
            let mem = sets
                .iter()
                .map(|(name, set)| Membership {
                    set: name.clone(),
                    slack: MEMBERSHIP_SLACK,
                    inside: pts.iter().filter(|&&z| set.contains(z, MEMBERSHIP_SLACK)).count(),
                    total: pts.len(),
                })
                .collect();
            res.membership.insert((m, n), mem);
        }
    }
    Ok(res)
}
