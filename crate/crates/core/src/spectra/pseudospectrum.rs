use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::operator::oracle::ColumnOracle;
use crate::scalar::C64;

/// Double precision squares the conditioning in the Gram matrices, so
/// `sqrt(eps_mach)` is the smallest meaningful threshold.
pub const EPSILON_FLOOR: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn square(half: f64) -> Self {
        Region { re_min: -half, re_max: half, im_min: -half, im_max: half }
    }

    fn validate(&self) -> Result<()> {
        let ok = [self.re_min, self.re_max, self.im_min, self.im_max].iter().all(|v| v.is_finite())
            && self.re_min <= self.re_max
            && self.im_min <= self.im_max;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("bad region {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PseudospecOptions {
    pub floor: f64,
    /// Accept epsilon below the floor.
    pub allow_unsafe: bool,
}

impl Default for PseudospecOptions {
    fn default() -> Self {
        PseudospecOptions { floor: EPSILON_FLOOR, allow_unsafe: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudospecGrid {
    pub region: Region,
    /// `(nx, ny)`: points along the real and imaginary axes.
    pub resolution: (usize, usize),
    pub epsilon: f64,
    pub truncation: usize,
    /// Row-major: `values[iy * nx + ix]`.
    pub values: Vec<f64>,
}

fn axis(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
    if n <= 1 {
        0.5 * (lo + hi)
    } else {
        lo + (hi - lo) * k as f64 / (n - 1) as f64
    }
}

impl PseudospecGrid {
    pub fn point(&self, ix: usize, iy: usize) -> C64 {
        let r = &self.region;
        C64::new(axis(r.re_min, r.re_max, self.resolution.0, ix), axis(r.im_min, r.im_max, self.resolution.1, iy))
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.resolution.0 + ix]
    }

    pub fn points(&self) -> impl Iterator<Item = (C64, f64)> + '_ {
        let (nx, ny) = self.resolution;
        (0..ny).flat_map(move |iy| (0..nx).map(move |ix| (self.point(ix, iy), self.value(ix, iy))))
    }

    /// Membership in the ε-pseudospectrum at an arbitrary threshold.
    pub fn mask_at(&self, eps: f64) -> Vec<bool> {
        self.values.iter().map(|&v| v <= eps).collect()
    }

    pub fn mask(&self) -> Vec<bool> {
        self.mask_at(self.epsilon)
    }

    pub fn cell(&self) -> (f64, f64) {
        let r = &self.region;
        let d = |lo: f64, hi: f64, n: usize| if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
        (d(r.re_min, r.re_max, self.resolution.0), d(r.im_min, r.im_max, self.resolution.1))
    }

    /// Value at the grid point nearest to `z`.
    pub fn nearest_value(&self, z: C64) -> f64 {
        let (nx, ny) = self.resolution;
        let r = &self.region;
        let idx = |v: f64, lo: f64, hi: f64, n: usize| -> usize {
            if n <= 1 || hi == lo {
                return 0;
            }
            (((v - lo) / (hi - lo) * (n - 1) as f64).round().max(0.0) as usize).min(n - 1)
        };
        self.value(idx(z.re, r.re_min, r.re_max, nx), idx(z.im, r.im_min, r.im_max, ny))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "re,im,sigma_min")?;
        for (z, v) in self.points() {
            writeln!(f, "{},{},{}", z.re, z.im, v)?;
        }
        f.flush()?;
        Ok(())
    }
}

pub fn check_epsilon(eps: f64, opts: &PseudospecOptions) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidInput(format!("epsilon must be positive, got {eps}")));
    }
    if eps < opts.floor && !opts.allow_unsafe {
        return Err(Error::EpsilonFloor { eps, floor: opts.floor });
    }
    Ok(())
}

/// A rectangular section with the shift placed on entries `(k, k)`, `k < cols`,
/// together with per-column nonzero ranges and the Gram half-bandwidth.
struct Section {
    a: CMatrix,
    ranges: Vec<(usize, usize)>,
    half_band: usize,
}

impl Section {
    fn new(a: CMatrix) -> Self {
        let cols = a.cols();
        let ranges: Vec<(usize, usize)> = (0..cols)
            .map(|j| {
                let c = a.col(j);
                let zero = C64::new(0.0, 0.0);
                let first = c.iter().position(|z| *z != zero).unwrap_or(j).min(j);
                let last = c.iter().rposition(|z| *z != zero).unwrap_or(j).max(j).min(a.rows() - 1);
                (first, last + 1)
            })
            .collect();
        let mut half_band = 0;
        for i in 0..cols {
            for j in 0..i {
                if ranges[j].1 > ranges[i].0 && ranges[i].1 > ranges[j].0 {
                    half_band = half_band.max(i - j);
                    break;
                }
            }
        }
        Section { a, ranges, half_band }
    }

    /// Lower band of `(A − zE)*(A − zE)` as rows of length `half_band + 1`; entry `k` of row `i` is `G[i][i−k]`.
    fn gram(&self, z: C64) -> Vec<Vec<C64>> {
        let cols = self.a.cols();
        let w = self.half_band;
        let shifted: Vec<Vec<C64>> = (0..cols)
            .map(|j| {
                let (lo, hi) = self.ranges[j];
                let mut c = self.a.col(j)[lo..hi].to_vec();
                if j < self.a.rows() {
                    c[j - lo] -= z;
                }
                c
            })
            .collect();
        (0..cols)
            .map(|i| {
                let mut row = vec![C64::new(0.0, 0.0); w + 1];
                for k in 0..=w.min(i) {
                    let j = i - k;
                    let (li, hi_i) = self.ranges[i];
                    let (lj, hj) = self.ranges[j];
                    let lo = li.max(lj);
                    let hi = hi_i.min(hj);
                    let mut s = C64::new(0.0, 0.0);
                    for r in lo..hi {
                        s += shifted[i][r - li] * shifted[j][r - lj].conj();
                    }
                    row[k] = s;
                }
                row
            })
            .collect()
    }

    fn sigma_min(&self, z: C64) -> f64 {
        let g = self.gram(z);
        banded_lambda_min(&g, self.half_band).max(0.0).sqrt()
    }
}

/// Banded Cholesky of `G − μI`; false on a non-positive pivot.
fn banded_cholesky_ok(g: &[Vec<C64>], w: usize, mu: f64, l: &mut [Vec<C64>]) -> bool {
    let n = g.len();
    for i in 0..n {
        let kmax = w.min(i);
        for k in (1..=kmax).rev() {
            let j = i - k;
            // G[i][j] − Σ_p L[i][p] conj(L[j][p]); p ranges over i−w..j
            let mut s = g[i][k];
            let pstart = i.saturating_sub(w);
            for p in pstart..j {
                s -= l[i][i - p] * l[j][j - p].conj();
            }
            l[i][k] = s / l[j][0].re;
        }
        let mut d = g[i][0].re - mu;
        for k in 1..=kmax {
            d -= l[i][k].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        l[i][0] = C64::new(d.sqrt(), 0.0);
    }
    true
}

/// Smallest eigenvalue of a Hermitian positive semi-definite band matrix by Cholesky bisection.
pub(crate) fn banded_lambda_min(g: &[Vec<C64>], w: usize) -> f64 {
    let n = g.len();
    if n == 0 {
        return 0.0;
    }
    let mut l = vec![vec![C64::new(0.0, 0.0); w + 1]; n];
    let top = g.iter().map(|r| r[0].re).fold(f64::INFINITY, f64::min).max(0.0);
    // bisection in σ = sqrt(λ) to a fixed absolute resolution
    let mut lo = 0.0f64;
    let mut hi = top.sqrt();
    let scale = g.iter().map(|r| r[0].re).fold(0.0, f64::max).sqrt().max(1.0);
    if !banded_cholesky_ok(g, w, 0.0, &mut l) {
        return 0.0;
    }
    while hi - lo > 1e-12 * scale {
        let mid = 0.5 * (lo + hi);
        if banded_cholesky_ok(g, w, mid * mid, &mut l) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    s * s
}

/// The two sections whose Gram matrices give both branches of the resolvent estimate.
fn sections(t: &ColumnOracle, m: usize) -> (Section, Section) {
    match (t.profile(), t.upper_bandwidth()) {
        (Some(p), Some(ub)) => {
            let rows = (1..=m).map(|j| p.apply(j)).max().unwrap_or(m).max(m);
            let b1 = t.window(rows, m);
            let b2 = t.window(m, m + ub).adjoint();
            (Section::new(b1), Section::new(b2))
        }
        _ => {
            let sq = t.truncation(m);
            let adj = sq.adjoint();
            (Section::new(sq), Section::new(adj))
        }
    }
}

/// `min(σ_min((T − z)P_m), σ_min(P_m(T − z)))`, evaluated on the exact rectangular sections
/// when the oracle has a band profile and known upper bandwidth.
pub fn section_sigma_min(t: &ColumnOracle, m: usize, z: C64) -> f64 {
    let (s1, s2) = sections(t, m);
    s1.sigma_min(z).min(s2.sigma_min(z.conj()))
}

pub fn pseudospectrum_grid(
    t: &ColumnOracle,
    region: Region,
    resolution: (usize, usize),
    epsilon: f64,
    m: usize,
) -> Result<PseudospecGrid> {
    pseudospectrum_grid_with(t, region, resolution, epsilon, m, &PseudospecOptions::default())
}

pub fn pseudospectrum_grid_with(
    t: &ColumnOracle,
    region: Region,
    resolution: (usize, usize),
    epsilon: f64,
    m: usize,
    opts: &PseudospecOptions,
) -> Result<PseudospecGrid> {
    check_epsilon(epsilon, opts)?;
    region.validate()?;
    if m == 0 || resolution.0 == 0 || resolution.1 == 0 {
        return Err(Error::InvalidInput("truncation and resolution must be positive".into()));
    }
    let (s1, s2) = sections(t, m);
    let mut grid = PseudospecGrid { region, resolution, epsilon, truncation: m, values: Vec::new() };
    let nx = resolution.0;
    let pts: Vec<C64> = (0..nx * resolution.1).map(|k| grid.point(k % nx, k / nx)).collect();
    grid.values = pts.par_iter().map(|&z| s1.sigma_min(z).min(s2.sigma_min(z.conj()))).collect();
    if grid.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("pseudospectrum grid".into()));
    }
    Ok(grid)
}
