use crate::dense::{CMatrix, Matrix};
use crate::error::{Error, Result};
use crate::iqr::householder::{phase_fixer, reflector_or_identity, HouseholderReflector};
use crate::operator::oracle::{BandProfile, ColumnOracle, DEFAULT_WINDOW_CAP};
use crate::scalar::{Scalar, C64};

/// Tuning and bookkeeping switches for the windowed iteration.
#[derive(Clone, Debug)]
pub struct IqrOptions {
    pub window_cap: usize,
    /// Keep every sweep's reflectors (needed for [`q_columns`]).
    pub keep_reflectors: bool,
    /// Reflectors applied together in one pass over the window.
    pub block: usize,
}

impl Default for IqrOptions {
    fn default() -> Self {
        IqrOptions { window_cap: DEFAULT_WINDOW_CAP, keep_reflectors: true, block: 32 }
    }
}

/// State of a finished windowed run.
#[derive(Clone, Debug)]
pub struct IqrWindow {
    /// `P_m T_n P_m`.
    pub block: CMatrix,
    pub m: usize,
    /// `f_n(m)`, the size of the first window.
    pub window_size: usize,
    /// Sweep `l` (index `l - 1`) holds `U^l_1, U^l_2, ...`; empty when not kept.
    pub reflectors: Vec<Vec<HouseholderReflector<C64>>>,
    pub sweeps_done: usize,
    /// Sweep `l` holds the diagonal `D` with `T_l = D (R''Q'') D*`.
    pub phase_fixers: Vec<Vec<C64>>,
    /// `(sweep, 1-based column)` of every zero pivot met.
    pub zero_pivots: Vec<(usize, usize)>,
}

struct SweepOut<S> {
    reflectors: Vec<HouseholderReflector<S>>,
    phases: Vec<S>,
    zero_pivots: Vec<usize>,
}

/// One QR step on the `w x w` window `a`, keeping the leading `r x r` block of `R Q`.
/// Column `j` (0-based) has its reflector on rows `j..ends[j]`.
fn sweep<S: Scalar>(a: &mut Matrix<S>, r: usize, ends: &[usize], nb: usize) -> SweepOut<S> {
    let w = a.rows();
    debug_assert!(a.is_square() && r <= w && ends.len() >= r);
    let nb = nb.max(1);
    let mut reflectors: Vec<HouseholderReflector<S>> = Vec::with_capacity(r);
    let mut zero_pivots = Vec::new();

    // R = U_r* ⋯ U_1* A, blocked over consecutive reflectors
    let mut jb = 0;
    while jb < r {
        let je = (jb + nb).min(r);
        for j in jb..je {
            let end = ends[j];
            let refl = reflector_or_identity(&a.col(j)[j..end], j);
            if refl.is_identity() {
                zero_pivots.push(j);
            } else {
                let col = a.col_mut(j);
                col[j] = refl.beta;
                for v in &mut col[j + 1..end] {
                    *v = S::zero();
                }
                for c in j + 1..je {
                    refl.apply_segment(&mut a.col_mut(c)[j..end]);
                }
            }
            reflectors.push(refl);
        }
        let blk = &reflectors[jb..je];
        for c in je..w {
            let col = a.col_mut(c);
            for refl in blk {
                if !refl.is_identity() {
                    refl.apply_segment(&mut col[refl.start..refl.start + refl.xi.len()]);
                }
            }
        }
        jb = je;
    }

    // R Q'' on the first r rows; column block j touches rows < min(r, ends[j])
    const RB: usize = 256;
    let mut y = vec![S::zero(); RB];
    let mut jb = 0;
    while jb < r {
        let je = (jb + nb).min(r);
        let rmax = ends[je - 1].min(r);
        let mut r0 = 0;
        while r0 < rmax {
            for refl in &reflectors[jb..je] {
                if refl.is_identity() {
                    continue;
                }
                let r1 = (r0 + RB).min(ends[refl.start].min(r));
                if r1 <= r0 {
                    continue;
                }
                let len = r1 - r0;
                let yv = &mut y[..len];
                yv.fill(S::zero());
                for (k, &x) in refl.xi.iter().enumerate() {
                    if x == S::zero() {
                        continue;
                    }
                    let col = &a.col(refl.start + k)[r0..r1];
                    for (d, &v) in yv.iter_mut().zip(col) {
                        *d += v * x;
                    }
                }
                for (k, &x) in refl.xi.iter().enumerate() {
                    let s = x.conj().scale(refl.tau);
                    if s == S::zero() {
                        continue;
                    }
                    let col = &mut a.col_mut(refl.start + k)[r0..r1];
                    for (d, &v) in col.iter_mut().zip(yv.iter()) {
                        *d -= v * s;
                    }
                }
            }
            r0 += RB;
        }
        jb = je;
    }

    a.truncate(r, r);
    let phases: Vec<S> = reflectors.iter().map(|h| phase_fixer(h.beta)).collect();
    let uniform = phases.iter().all(|&t| t == S::one());
    if !uniform {
        for c in 0..r {
            let tc = phases[c].conj();
            for (i, v) in a.col_mut(c).iter_mut().enumerate() {
                *v *= phases[i] * tc;
            }
        }
    }
    SweepOut { reflectors, phases, zero_pivots }
}

/// Upper-left `m x m` block of `T_n`, exact for quasi-banded `T`: the first window has size
/// `f_n(m)` and sweep `l` only needs reflectors on columns `1..=f_{n-l}(m)`.
pub fn iqr_truncation(t: &ColumnOracle, m: usize, n: usize) -> Result<(CMatrix, IqrWindow)> {
    iqr_truncation_with(t, m, n, &IqrOptions::default(), |_, _| {})
}

/// As [`iqr_truncation`]; `observe(l, P_m T_l P_m)` is called for every `l = 0..=n`.
pub fn iqr_truncation_with(
    t: &ColumnOracle,
    m: usize,
    n: usize,
    opts: &IqrOptions,
    mut observe: impl FnMut(usize, &CMatrix),
) -> Result<(CMatrix, IqrWindow)> {
    let band =
        t.profile().ok_or_else(|| Error::InvalidInput("iqr_truncation needs a quasi-banded oracle".into()))?.clone();
    // sizes[l] = f_l(m)
    let mut sizes = Vec::with_capacity(n + 1);
    sizes.push(m);
    for _ in 0..n {
        let next = band.apply(*sizes.last().unwrap());
        if next > opts.window_cap {
            return Err(Error::WindowTooLarge { needed: band.iterate(m, n), cap: opts.window_cap });
        }
        sizes.push(next);
    }
    let w0 = sizes[n];
    let window = t.window(w0, w0);
    if window.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite(format!("window of {}", t.name())));
    }
    let mut observer = |l: usize, block: CMatrix| observe(l, &block);
    if window.is_real() {
        run(window.re_part(), &band, &sizes, m, n, opts, &mut observer)
    } else {
        run(window, &band, &sizes, m, n, opts, &mut observer)
    }
}

fn run<S: Scalar>(
    mut a: Matrix<S>,
    band: &BandProfile,
    sizes: &[usize],
    m: usize,
    n: usize,
    opts: &IqrOptions,
    observe: &mut dyn FnMut(usize, CMatrix),
) -> Result<(CMatrix, IqrWindow)> {
    let w0 = sizes[n];
    let ends: Vec<usize> = (0..sizes[n.saturating_sub(1)].max(m)).map(|j| band.apply(j + 1)).collect();
    observe(0, a.leading(m.min(a.rows())).to_c64());
    let mut reflectors = Vec::new();
    let mut phase_fixers = Vec::with_capacity(n);
    let mut zero_pivots = Vec::new();
    for l in 1..=n {
        let w = sizes[n - l + 1];
        let r = sizes[n - l];
        let e: Vec<usize> = ends[..r].iter().map(|&x| x.min(w)).collect();
        let out = sweep(&mut a, r, &e, opts.block);
        zero_pivots.extend(out.zero_pivots.iter().map(|&j| (l, j + 1)));
        phase_fixers.push(out.phases.iter().map(|p| p.to_c64()).collect());
        if opts.keep_reflectors {
            reflectors.push(out.reflectors.iter().map(|h| h.map(|v| v.to_c64())).collect());
        }
        observe(l, a.leading(m).to_c64());
    }
    // a non-finite entry of the kept block persists through later sweeps
    if a.as_slice().iter().any(|v| !v.to_c64().re.is_finite() || !v.to_c64().im.is_finite()) {
        return Err(Error::NonFinite(format!("after {n} sweeps")));
    }
    let block = a.leading(m).to_c64();
    let win =
        IqrWindow { block: block.clone(), m, window_size: w0, reflectors, sweeps_done: n, phase_fixers, zero_pivots };
    Ok((block, win))
}

/// First `count` columns of `Q̂_n = Q_1 ⋯ Q_n`, truncated to `height` rows.
pub fn q_columns(window: &IqrWindow, count: usize, height: usize) -> Result<Vec<Vec<C64>>> {
    if count > window.m {
        return Err(Error::InvalidInput(format!("count {count} exceeds m = {}", window.m)));
    }
    if height > window.window_size.max(window.m) {
        return Err(Error::InvalidInput(format!("height {height} exceeds the computed window {}", window.window_size)));
    }
    if window.sweeps_done > 0 && window.reflectors.len() != window.sweeps_done {
        return Err(Error::InvalidInput("reflectors were not kept for this run".into()));
    }
    let full = window.window_size.max(window.m);
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let mut x = vec![C64::new(0.0, 0.0); full];
        x[j] = C64::new(1.0, 0.0);
        for l in (0..window.sweeps_done).rev() {
            for (i, t) in window.phase_fixers[l].iter().enumerate() {
                x[i] *= t.conj();
            }
            for h in window.reflectors[l].iter().rev() {
                h.apply(&mut x);
            }
        }
        x.truncate(height);
        out.push(x);
    }
    Ok(out)
}

/// Reference evaluation: `n` full QR steps on the single truncation `P_N T P_N`.
pub fn giant_window_iterate(t: &ColumnOracle, big: usize, n: usize) -> CMatrix {
    let mut a = t.window(big, big);
    let full: Vec<usize> = vec![big; big];
    for _ in 0..n {
        sweep(&mut a, big, &full, 32);
    }
    a
}
