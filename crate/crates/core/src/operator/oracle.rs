use std::fmt;
use std::sync::Arc;

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::operator::sets::ReferenceSet;
use crate::scalar::C64;

/// Default ceiling on window sizes, in rows.
pub const DEFAULT_WINDOW_CAP: usize = 1_000_000;

type ProfileFn = Arc<dyn Fn(usize) -> usize + Send + Sync>;
type ScheduleFn = Arc<dyn Fn(u64, usize) -> usize + Send + Sync>;
type ColumnFn = Arc<dyn Fn(usize, usize) -> Vec<C64> + Send + Sync>;

/// Lower profile `f` of a quasi-banded matrix: entry `(i, j)` vanishes for `i > f(j)`.
/// Indices are 1-based.
#[derive(Clone)]
pub enum BandProfile {
    /// `f(n) = n + k`.
    Offset(usize),
    Custom(ProfileFn),
}

impl BandProfile {
    pub fn custom(f: impl Fn(usize) -> usize + Send + Sync + 'static) -> Self {
        BandProfile::Custom(Arc::new(f))
    }

    pub fn apply(&self, n: usize) -> usize {
        match self {
            BandProfile::Offset(k) => n.saturating_add(*k),
            BandProfile::Custom(f) => f(n),
        }
    }

    /// `f_a(m)`, the `a`-fold iterate, with `f_0(m) = m`.
    pub fn iterate(&self, m: usize, a: usize) -> usize {
        match self {
            BandProfile::Offset(k) => m.saturating_add(k.saturating_mul(a)),
            BandProfile::Custom(f) => (0..a).fold(m, |x, _| f(x)),
        }
    }

    /// Iterate with a ceiling; reports the first value beyond `cap`.
    pub fn iterate_capped(&self, m: usize, a: usize, cap: usize) -> Result<usize> {
        let mut x = m;
        for _ in 0..a {
            x = self.apply(x);
            if x > cap {
                return Err(Error::WindowTooLarge { needed: self.iterate(m, a), cap });
            }
        }
        if x > cap {
            return Err(Error::WindowTooLarge { needed: x, cap });
        }
        Ok(x)
    }

    /// Checks `f(n) >= n` and monotonicity on `1..=upto`.
    pub fn validate(&self, upto: usize) -> Result<()> {
        let mut prev = 0;
        for n in 1..=upto {
            let v = self.apply(n);
            if v < n {
                return Err(Error::InvalidProfile(format!("f({n}) = {v} < {n}")));
            }
            if v < prev {
                return Err(Error::InvalidProfile(format!("f decreases at n = {n}")));
            }
            prev = v;
        }
        Ok(())
    }
}

impl fmt::Debug for BandProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandProfile::Offset(k) => write!(f, "Offset({k})"),
            BandProfile::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Column-decay data: `g(j, n)` rows of column `n` carry all but `1/j` of the operator,
/// and `norm_bound >= ||T||`.
#[derive(Clone)]
pub struct DecaySchedule {
    g: ScheduleFn,
    pub norm_bound: f64,
}

impl DecaySchedule {
    pub fn new(norm_bound: f64, g: impl Fn(u64, usize) -> usize + Send + Sync + 'static) -> Self {
        DecaySchedule { g: Arc::new(g), norm_bound }
    }

    pub fn g(&self, j: u64, n: usize) -> usize {
        (self.g)(j, n)
    }

    /// The profile of the truncated operator `T_(j)`.
    pub fn profile(&self, j: u64) -> BandProfile {
        let g = self.g.clone();
        BandProfile::Custom(Arc::new(move |n| g(j, n)))
    }
}

impl fmt::Debug for DecaySchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DecaySchedule {{ norm_bound: {} }}", self.norm_bound)
    }
}

#[derive(Clone, Debug)]
pub enum Structure {
    QuasiBanded(BandProfile),
    ColumnDecay(DecaySchedule),
}

/// Known spectral data attached to gallery operators.
#[derive(Clone, Debug, Default)]
pub struct GalleryMetadata {
    pub known_eigenvalues: Vec<(C64, usize)>,
    /// Eigenvectors matching `known_eigenvalues`, for planted operators.
    pub eigenvectors: Option<Vec<Vec<C64>>>,
    pub essential_bound: Option<f64>,
    pub rate: Option<f64>,
    pub norm_bound: Option<f64>,
    pub analytic_sets: Vec<(String, ReferenceSet)>,
}

impl GalleryMetadata {
    pub fn eigenvalues(&self) -> Vec<C64> {
        let mut out = Vec::new();
        for &(z, mult) in &self.known_eigenvalues {
            out.extend(std::iter::repeat(z).take(mult));
        }
        out
    }

    pub fn set(&self, name: &str) -> Option<&ReferenceSet> {
        self.analytic_sets.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

/// An infinite matrix on l2(N) given column by column.
#[derive(Clone)]
pub struct ColumnOracle {
    name: String,
    column: ColumnFn,
    structure: Structure,
    upper_bandwidth: Option<usize>,
    metadata: Option<GalleryMetadata>,
}

impl fmt::Debug for ColumnOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColumnOracle")
            .field("name", &self.name)
            .field("structure", &self.structure)
            .field("upper_bandwidth", &self.upper_bandwidth)
            .finish()
    }
}

impl ColumnOracle {
    /// `column(j, height)` must return exactly `height` entries (rows `1..=height`).
    pub fn new(
        name: impl Into<String>,
        structure: Structure,
        column: impl Fn(usize, usize) -> Vec<C64> + Send + Sync + 'static,
    ) -> Self {
        ColumnOracle { name: name.into(), column: Arc::new(column), structure, upper_bandwidth: None, metadata: None }
    }

    /// Quasi-banded oracle from an entry function; rows beyond `f(j)` are never queried.
    pub fn from_entries(
        name: impl Into<String>,
        profile: BandProfile,
        entry: impl Fn(usize, usize) -> C64 + Send + Sync + 'static,
    ) -> Self {
        let p = profile.clone();
        ColumnOracle::new(name, Structure::QuasiBanded(profile), move |j, h| {
            let top = h.min(p.apply(j));
            let mut v = Vec::with_capacity(h);
            v.extend((1..=top).map(|i| entry(i, j)));
            v.resize(h, C64::new(0.0, 0.0));
            v
        })
    }

    /// Diagonal operator with entries `d(1), d(2), ...`.
    pub fn diagonal(name: impl Into<String>, d: impl Fn(usize) -> C64 + Send + Sync + 'static) -> Self {
        ColumnOracle::from_entries(
            name,
            BandProfile::Offset(0),
            move |i, j| if i == j { d(j) } else { C64::new(0.0, 0.0) },
        )
        .with_upper_bandwidth(0)
    }

    pub fn with_upper_bandwidth(mut self, b: usize) -> Self {
        self.upper_bandwidth = Some(b);
        self
    }

    pub fn with_metadata(mut self, meta: GalleryMetadata) -> Self {
        self.metadata = Some(meta);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn profile(&self) -> Option<&BandProfile> {
        match &self.structure {
            Structure::QuasiBanded(p) => Some(p),
            Structure::ColumnDecay(_) => None,
        }
    }

    pub fn upper_bandwidth(&self) -> Option<usize> {
        self.upper_bandwidth
    }

    pub fn metadata(&self) -> Option<&GalleryMetadata> {
        self.metadata.as_ref()
    }

    /// Rows `1..=height` of column `j` (1-based).
    pub fn column(&self, j: usize, height: usize) -> Vec<C64> {
        assert!(j >= 1, "columns are 1-based");
        let v = (self.column)(j, height);
        debug_assert_eq!(v.len(), height);
        v
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.column(j, i)[i - 1]
    }

    /// Dense `P_rows T P_cols` with 0-based storage.
    pub fn window(&self, rows: usize, cols: usize) -> CMatrix {
        let mut w = CMatrix::zeros(rows, cols);
        for j in 1..=cols {
            let c = self.column(j, rows);
            w.col_mut(j - 1).copy_from_slice(&c);
        }
        w
    }

    /// Square truncation `P_m T P_m`.
    pub fn truncation(&self, m: usize) -> CMatrix {
        self.window(m, m)
    }

    /// `T x` for finitely supported `x`, truncated to `height` rows.
    pub fn apply(&self, x: &[C64], height: usize) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); height];
        for (k, &a) in x.iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            let c = self.column(k + 1, height);
            for (d, v) in y.iter_mut().zip(c) {
                *d += v * a;
            }
        }
        y
    }

    /// `T + s I`.
    pub fn shifted(&self, s: C64) -> ColumnOracle {
        if s == C64::new(0.0, 0.0) {
            return self.clone();
        }
        let inner = self.column.clone();
        let mut out = self.clone();
        out.column = Arc::new(move |j, h| {
            let mut c = inner(j, h);
            if j <= h {
                c[j - 1] += s;
            }
            c
        });
        out.metadata = self.metadata.as_ref().map(|m| GalleryMetadata {
            known_eigenvalues: m.known_eigenvalues.iter().map(|&(z, k)| (z + s, k)).collect(),
            eigenvectors: m.eigenvectors.clone(),
            essential_bound: None,
            rate: m.rate,
            norm_bound: m.norm_bound.map(|b| b + s.norm()),
            analytic_sets: m.analytic_sets.iter().map(|(n, set)| (n.clone(), set.translated(s))).collect(),
        });
        out.name = format!("{}+({},{})", self.name, s.re, s.im);
        out
    }

    /// The column-truncated operator `T_(j)` of a column-decay oracle, as a quasi-banded oracle.
    pub fn decay_truncation(&self, j: u64) -> Result<ColumnOracle> {
        let sched = match &self.structure {
            Structure::ColumnDecay(s) => s.clone(),
            Structure::QuasiBanded(_) => {
                return Err(Error::InvalidInput("decay_truncation needs a column-decay oracle".into()))
            }
        };
        let inner = self.column.clone();
        let g = sched.clone();
        let mut out = ColumnOracle::new(
            format!("{}[j={j}]", self.name),
            Structure::QuasiBanded(sched.profile(j)),
            move |col, h| {
                let top = h.min(g.g(j, col));
                let mut c = inner(col, top);
                c.resize(h, C64::new(0.0, 0.0));
                c
            },
        );
        out.upper_bandwidth = self.upper_bandwidth;
        out.metadata = self.metadata.clone();
        Ok(out)
    }

    /// Reinterprets a quasi-banded oracle as column-decay data with `g^j = f` for all `j`.
    pub fn as_column_decay(&self, norm_bound: f64) -> Result<ColumnOracle> {
        let p = self.profile().ok_or_else(|| Error::InvalidInput("already a column-decay oracle".into()))?.clone();
        let mut out = self.clone();
        out.structure = Structure::ColumnDecay(DecaySchedule::new(norm_bound, move |_, n| p.apply(n)));
        Ok(out)
    }

    /// Structural check of the quasi-banded claim on columns `1..=cols`, looking `extra` rows below `f(j)`.
    pub fn check_band(&self, cols: usize, extra: usize) -> Result<()> {
        let p = match self.profile() {
            Some(p) => p,
            None => return Ok(()),
        };
        for j in 1..=cols {
            let fj = p.apply(j);
            let c = self.column(j, fj + extra);
            if let Some(i) = c[fj..].iter().position(|z| *z != C64::new(0.0, 0.0)) {
                return Err(Error::InvalidProfile(format!("entry ({}, {j}) nonzero beyond f({j}) = {fj}", fj + i + 1)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn offset_iterates() {
        let p = BandProfile::Offset(3);
        assert_eq!(p.iterate(10, 4), 22);
        assert_eq!(p.iterate(10, 0), 10);
        let q = BandProfile::custom(|n| 2 * n);
        assert_eq!(q.iterate(3, 3), 24);
        assert!(matches!(q.iterate_capped(3, 30, 1000), Err(Error::WindowTooLarge { cap: 1000, .. })));
    }

    #[test]
    fn bad_profile_rejected() {
        assert!(BandProfile::custom(|n| n.saturating_sub(1)).validate(5).is_err());
        assert!(BandProfile::custom(|n| if n == 3 { 10 } else { n + 1 }).validate(5).is_err());
        assert!(BandProfile::Offset(2).validate(50).is_ok());
    }

    #[test]
    fn prefix_consistency() {
        let t = ColumnOracle::from_entries("t", BandProfile::Offset(2), |i, j| c64(i as f64, j as f64));
        for j in 1..6 {
            let a = t.column(j, 3);
            let b = t.column(j, 9);
            assert_eq!(&a[..], &b[..3]);
        }
        assert!(t.check_band(20, 5).is_ok());
    }

    #[test]
    fn shifted_moves_diagonal() {
        let t = ColumnOracle::diagonal("d", |j| c64(1.0 / j as f64, 0.0));
        let s = t.shifted(c64(0.5, 1.0));
        assert_eq!(s.entry(2, 2), c64(1.0, 1.0));
        assert_eq!(s.entry(1, 2), c64(0.0, 0.0));
    }
}
