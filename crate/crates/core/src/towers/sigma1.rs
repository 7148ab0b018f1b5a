use std::fmt;
use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::iqr::window::iqr_truncation;
use crate::operator::oracle::ColumnOracle;
use crate::spectra::estimate::{SpectrumEstimate, SpectrumSource};
use crate::towers::report::{pairs, BoundStep, TowerReport};

/// Lower bound `g(dist(z, σ(T))) <= ||(T − z)^{-1}||^{-1}`, consumed by pointwise evaluation.
#[derive(Clone)]
pub struct GFunction {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GFunction({})", self.name)
    }
}

impl GFunction {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        GFunction { name: name.into(), f: Arc::new(f) }
    }

    pub fn identity() -> Self {
        GFunction::new("identity", |x| x)
    }

    /// `g(x) = c x`, `0 < c <= 1`.
    pub fn scaled(c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::InvalidInput(format!("scaled g needs 0 < c <= 1, got {c}")));
        }
        Ok(GFunction::new(format!("scaled:{c}"), move |x| c * x))
    }

    /// `identity` or `scaled:<c>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "identity" => Ok(Self::identity()),
            other => match other.strip_prefix("scaled:") {
                Some(c) => {
                    Self::scaled(c.parse().map_err(|_| Error::InvalidInput(format!("bad constant in g = `{s}`")))?)
                }
                None => Err(Error::InvalidInput(format!("unknown g `{s}` (expected identity or scaled:<c>)"))),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

#[derive(Clone, Debug)]
pub struct Sigma1Input {
    pub t: ColumnOracle,
    pub g: GFunction,
    pub n: u32,
    /// Largest iteration count tried.
    pub guard: usize,
}

/// Linear scan cap for `min{l : g(l/m) >= x}`.
const SCAN_CAP: u64 = 1 << 40;

/// `min{l >= 1 : g(l/m) >= x} / m`.
pub fn h_value(g: &GFunction, x: f64, m: usize) -> Result<f64> {
    let mf = m as f64;
    // g(y) <= y, so no l below x m can succeed
    let mut l = ((x * mf).floor() as u64).max(1);
    while g.eval(l as f64 / mf) < x {
        l += 1;
        if l > SCAN_CAP {
            return Err(Error::GuardExceeded { guard: SCAN_CAP as usize, what: format!("g never reaches {x}") });
        }
    }
    Ok(l as f64 / mf)
}

/// Points `α_{j,m}` (`j <= n`) with `h_{j,m} <= 2^-n`, each within `2^-n` of `σ(T)`.
pub fn sigma1_spectrum(input: &Sigma1Input) -> Result<(SpectrumEstimate, TowerReport)> {
    let Sigma1Input { t, g, n, guard } = input;
    let n_pts = (*n).max(1) as usize;
    let profile = t.profile().ok_or_else(|| {
        Error::InvalidInput(
            "sigma1 needs a quasi-banded oracle: column residuals are bounded exactly only there".into(),
        )
    })?;
    if *guard == 0 {
        return Err(Error::InvalidInput("guard must be at least 1".into()));
    }
    let target = 2f64.powi(-(*n as i32));
    let rows = (1..=n_pts).map(|j| profile.apply(j)).max().unwrap_or(n_pts).max(n_pts);
    let mut trace = Vec::new();
    let mut best = f64::INFINITY;
    for m in 1..=*guard {
        let (block, _) = iqr_truncation(t, rows, m)?;
        let slack = 64.0 * f64::EPSILON * block.max_abs().max(1.0) * (rows as f64).sqrt();
        let mut alphas = Vec::with_capacity(n_pts);
        let mut hmax: f64 = 0.0;
        for j in 0..n_pts {
            let col = block.col(j);
            let alpha = col[j];
            let off: f64 = col.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, z)| z.norm_sqr()).sum();
            let x = off.sqrt() + slack;
            hmax = hmax.max(h_value(g, x, m)?);
            alphas.push(alpha);
        }
        trace.push(BoundStep { m, bound: hmax, target });
        best = best.min(hmax);
        if hmax <= target {
            let radii = vec![target; n_pts];
            let report = TowerReport {
                algorithm: "sigma1_spectrum".into(),
                inputs: json!({"operator": t.name(), "g": g.name(), "n": n, "guard": guard, "block_rows": rows}),
                m_used: m,
                bound_trace: trace,
                points: pairs(&alphas),
                radii: radii.clone(),
            };
            return Ok((SpectrumEstimate::with_radii(alphas, radii, SpectrumSource::Sigma1Tower)?, report));
        }
    }
    Err(Error::GuardExceeded { guard: *guard, what: format!("sigma1: smallest max h = {best:.3e} > 2^-{n}") })
}
