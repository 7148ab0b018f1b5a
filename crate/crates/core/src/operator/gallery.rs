use std::collections::BTreeMap;

use crate::dense::CMatrix;
use crate::error::{Error, Result};
use crate::iqr::householder::qr_positive;
use crate::operator::fold::{fold_operator, fold_z_to_n, unfold_n_to_z};
use crate::operator::oracle::{BandProfile, ColumnOracle, GalleryMetadata, Structure};
use crate::operator::random::{ginibre, DistributionRole, RandomEnsemble};
use crate::operator::sets::ReferenceSet;
use crate::scalar::{c64, C64};
use crate::spectra::tridiag::{kth_eigenvalue, sturm_count};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Laurent coefficients `(power, value)` of a symbol `a(t) = Σ a_k t^k`.
pub type Symbol = Vec<(i64, C64)>;

/// `a(t) = (t^3 + t^{-1}) / 2`.
pub fn symbol_a3() -> Symbol {
    vec![(3, c64(0.5, 0.0)), (-1, c64(0.5, 0.0))]
}

/// `ã(t) = t + i t^{-2}`.
pub fn symbol_atilde() -> Symbol {
    vec![(1, ONE), (-2, c64(0.0, 1.0))]
}

fn symbol_coeff(sym: &BTreeMap<i64, C64>, k: i64) -> C64 {
    sym.get(&k).copied().unwrap_or(ZERO)
}

fn normalized(symbol: &[(i64, C64)]) -> Result<BTreeMap<i64, C64>> {
    let mut map = BTreeMap::new();
    for &(k, c) in symbol {
        *map.entry(k).or_insert(ZERO) += c;
    }
    map.retain(|_, c| *c != ZERO);
    if map.is_empty() {
        return Err(Error::InvalidInput("symbol has no nonzero coefficient".into()));
    }
    Ok(map)
}

fn potential_t1(j: usize) -> f64 {
    if j <= 10 {
        5.0 * (j as f64).sin().powi(2) / (j as f64).sqrt()
    } else {
        0.0
    }
}

/// Section size used to locate the discrete eigenvalues of T1; they are
/// isolated and their eigenvectors decay geometrically, so the section error is negligible.
const T1_SECTION: usize = 2000;

/// Eigenvalues of T1 above 2, descending.
fn t1_discrete_eigenvalues() -> Vec<f64> {
    let d: Vec<f64> = (1..=T1_SECTION).map(potential_t1).collect();
    let e = vec![1.0; T1_SECTION - 1];
    let above = T1_SECTION - sturm_count(&d, &e, 2.0 + 1e-6);
    (0..above).map(|k| kth_eigenvalue(&d, &e, T1_SECTION - 1 - k)).collect()
}

/// Discrete Schrodinger operator with unit off-diagonals and potential
/// `v_j = 5 sin(j)^2 / sqrt(j)` for `j <= 10`, zero afterwards.
pub fn schrodinger_t1() -> ColumnOracle {
    let meta = GalleryMetadata {
        known_eigenvalues: t1_discrete_eigenvalues().into_iter().map(|x| (c64(x, 0.0), 1)).collect(),
        essential_bound: Some(2.0),
        norm_bound: Some(2.0 + (1..=10).map(potential_t1).fold(0.0, f64::max)),
        analytic_sets: vec![("essential".into(), ReferenceSet::Segment(c64(-2.0, 0.0), c64(2.0, 0.0)))],
        ..Default::default()
    };
    ColumnOracle::from_entries("schrodinger_t1", BandProfile::Offset(1), |i, j| {
        if i == j {
            c64(potential_t1(j), 0.0)
        } else if i.abs_diff(j) == 1 {
            ONE
        } else {
            ZERO
        }
    })
    .with_upper_bandwidth(1)
    .with_metadata(meta)
}

/// Seeded 9x9 unitary: Householder QR of a Ginibre sample with positive `R` diagonal.
pub fn random_unitary(seed: u64, n: usize) -> CMatrix {
    qr_positive(&ginibre(seed, n)).0
}

/// `W* T0 W` with `T0 = diag(2, 1.5i, -1.25, -1.125i) ⊕ U1` (the bilateral shift folded
/// behind the first four coordinates) and `W` a seeded unitary on `span{e1..e9}`.
pub fn mixed_diag_t2(seed: u64) -> ColumnOracle {
    let d = [c64(2.0, 0.0), c64(0.0, 1.5), c64(-1.25, 0.0), c64(0.0, -1.125)];
    let w = random_unitary(seed, 9);
    let shift_image = |r: usize| 4 + fold_z_to_n(unfold_n_to_z(r - 4) + 1);

    let eigenvectors: Vec<Vec<C64>> = (0..4).map(|i| (0..9).map(|r| w[(i, r)].conj()).collect()).collect();
    let meta = GalleryMetadata {
        known_eigenvalues: d.iter().map(|&z| (z, 1)).collect(),
        eigenvectors: Some(eigenvectors),
        essential_bound: Some(1.0),
        rate: Some(1.0 / 1.125),
        norm_bound: Some(2.0),
        analytic_sets: vec![(
            "spectrum".into(),
            ReferenceSet::Union(vec![ReferenceSet::Points(d.to_vec()), ReferenceSet::symbol_curve(&[(1, ONE)], 1024)]),
        )],
    };
    let profile = BandProfile::custom(|j| (j + 3).max(12));
    ColumnOracle::new("mixed_diag_t2", Structure::QuasiBanded(profile), move |j, h| {
        // v = W e_j, y = T0 v, out = W* y
        let len = h.max(j + 3).max(12);
        let mut v = vec![ZERO; len + 1];
        if j <= 9 {
            for r in 1..=9 {
                v[r] = w[(r - 1, j - 1)];
            }
        } else {
            v[j] = ONE;
        }
        let mut y = vec![ZERO; len + 1];
        for r in 1..=len {
            if v[r] == ZERO {
                continue;
            }
            if r <= 4 {
                y[r] += d[r - 1] * v[r];
            } else {
                y[shift_image(r)] += v[r];
            }
        }
        let mut out = vec![ZERO; h];
        for (i, o) in out.iter_mut().enumerate() {
            let row = i + 1;
            if row <= 9 {
                *o = (1..=9).map(|r| w[(r - 1, row - 1)].conj() * y[r]).fold(ZERO, |a, b| a + b);
            } else if row <= len {
                *o = y[row];
            }
        }
        out
    })
    .with_upper_bandwidth(12)
    .with_metadata(meta)
}

/// Tridiagonal operator with `a_j = 5 cos(j)/4 + 2i sin(j)` on the diagonal, `i` above and
/// `1` below it.
pub fn bidiagonal_a() -> ColumnOracle {
    let meta = GalleryMetadata { norm_bound: Some((1.5625f64 + 4.0).sqrt() + 2.0), ..Default::default() };
    ColumnOracle::from_entries("bidiagonal_a", BandProfile::Offset(1), |i, j| {
        if i == j {
            let x = j as f64;
            c64(1.25 * x.cos(), 2.0 * x.sin())
        } else if i + 1 == j {
            c64(0.0, 1.0)
        } else if i == j + 1 {
            ONE
        } else {
            ZERO
        }
    })
    .with_upper_bandwidth(1)
    .with_metadata(meta)
}

fn t_tail(j: usize) -> C64 {
    let x = j as f64;
    c64(1.0 + 0.5 * x.sin(), 0.5 * x.cos())
}

/// A 4x4 block followed by a lower bidiagonal tail with diagonal
/// `t_j = 1 + 0.5(sin j + i cos j)`.
pub fn blockdiag_t() -> ColumnOracle {
    let t4 = t_tail(4);
    let mid = (c64(1.7, 0.0) + t4) * 0.5;
    let disc = ((c64(1.7, 0.0) - t4) * 0.5).powi(2) + c64(0.0025, 0.0);
    let block_eigs = vec![c64(2.5, 0.5), c64(3.0, -0.5), mid + disc.sqrt(), mid - disc.sqrt()];
    let meta = GalleryMetadata {
        known_eigenvalues: vec![(c64(2.5, 0.5), 1), (c64(3.0, -0.5), 1)],
        norm_bound: Some(3.1 + 2.0),
        analytic_sets: vec![(
            "spectrum".into(),
            ReferenceSet::Union(vec![
                ReferenceSet::Points(block_eigs),
                ReferenceSet::Disc { center: ONE, radius: 1.0 },
            ]),
        )],
        ..Default::default()
    };
    ColumnOracle::from_entries("blockdiag_t", BandProfile::Offset(1), move |i, j| match (i, j) {
        (1, 1) => c64(2.5, 0.5),
        (2, 1) => ONE,
        (2, 2) => c64(3.0, -0.5),
        (3, 2) => ONE,
        (3, 3) => c64(1.7, 0.0),
        (3, 4) | (4, 3) => c64(0.05, 0.0),
        (4, 4) => t4,
        _ if i == j => t_tail(j),
        _ if j >= 5 && i == j + 1 => ONE,
        _ => ZERO,
    })
    .with_upper_bandwidth(1)
    .with_metadata(meta)
}

/// Toeplitz operator `T(a)` on `l2(N)`, entry `(i, j) = a_{i-j}`.
pub fn toeplitz(symbol: &[(i64, C64)]) -> Result<ColumnOracle> {
    let sym = normalized(symbol)?;
    let lower = (*sym.keys().next_back().unwrap()).max(0) as usize;
    let upper = (-*sym.keys().next().unwrap()).max(0) as usize;
    let coeffs: Symbol = sym.iter().map(|(&k, &c)| (k, c)).collect();
    let meta = GalleryMetadata {
        norm_bound: Some(sym.values().map(|c| c.norm()).sum()),
        analytic_sets: vec![("symbol_curve".into(), ReferenceSet::symbol_curve(&coeffs, 1024))],
        ..Default::default()
    };
    Ok(ColumnOracle::from_entries("toeplitz", BandProfile::Offset(lower), move |i, j| {
        symbol_coeff(&sym, i as i64 - j as i64)
    })
    .with_upper_bandwidth(upper)
    .with_metadata(meta))
}

/// Laurent operator `L(a)` on `l2(Z)`, folded onto `l2(N)`.
pub fn laurent(symbol: &[(i64, C64)]) -> Result<ColumnOracle> {
    let sym = normalized(symbol)?;
    let b = sym.keys().map(|k| k.abs()).max().unwrap();
    let coeffs: Symbol = sym.iter().map(|(&k, &c)| (k, c)).collect();
    let curve = ReferenceSet::symbol_curve(&coeffs, 1024);
    let meta = GalleryMetadata {
        norm_bound: Some(sym.values().map(|c| c.norm()).sum()),
        analytic_sets: vec![("symbol_curve".into(), curve.clone()), ("spectrum".into(), curve)],
        ..Default::default()
    };
    Ok(fold_operator("laurent", b, move |i, j| symbol_coeff(&sym, i - j))?.with_metadata(meta))
}

/// Unilateral shift `S e_j = e_{j+1}`.
pub fn unilateral_shift() -> ColumnOracle {
    let mut t = toeplitz(&[(1, ONE)]).expect("nonempty symbol").with_name("shift");
    let mut meta = t.metadata().cloned().unwrap_or_default();
    meta.analytic_sets.push(("spectrum".into(), ReferenceSet::Disc { center: ZERO, radius: 1.0 }));
    meta.essential_bound = Some(1.0);
    t = t.with_metadata(meta);
    t
}

pub fn bilateral_shift() -> ColumnOracle {
    laurent(&[(1, ONE)]).expect("nonempty symbol").with_name("bilateral_shift")
}

/// `diag(1, 1/2, 1/3, ...)`.
pub fn diag_harmonic() -> ColumnOracle {
    let meta = GalleryMetadata {
        norm_bound: Some(1.0),
        analytic_sets: vec![(
            "spectrum".into(),
            ReferenceSet::Points((1..=4096).map(|k| c64(1.0 / k as f64, 0.0)).chain([ZERO]).collect()),
        )],
        ..Default::default()
    };
    ColumnOracle::diagonal("diag_harmonic", |j| c64(1.0 / j as f64, 0.0)).with_metadata(meta)
}

/// Diagonal operator listing `values`, the last value repeated forever.
pub fn diag_values(values: &[C64]) -> Result<ColumnOracle> {
    if values.is_empty() {
        return Err(Error::InvalidInput("diagonal needs at least one value".into()));
    }
    let v = values.to_vec();
    let last = *v.last().unwrap();
    let mut eigs: Vec<(C64, usize)> = Vec::new();
    for &z in values {
        match eigs.iter_mut().find(|(w, _)| *w == z) {
            Some(e) => e.1 += 1,
            None => eigs.push((z, 1)),
        }
    }
    let meta = GalleryMetadata {
        norm_bound: Some(v.iter().map(|z| z.norm()).fold(0.0, f64::max)),
        // the repeated last value is the whole essential spectrum
        essential_bound: Some(last.norm()),
        analytic_sets: vec![("spectrum".into(), ReferenceSet::Points(eigs.iter().map(|e| e.0).collect()))],
        known_eigenvalues: eigs,
        ..Default::default()
    };
    Ok(ColumnOracle::diagonal("diag", move |j| if j <= v.len() { v[j - 1] } else { last }).with_metadata(meta))
}

/// Jacobi operator with zero diagonal and off-diagonals `3, 1, 3, 1, ...`.
pub fn jacobi_t3() -> ColumnOracle {
    let meta = GalleryMetadata {
        norm_bound: Some(4.0),
        analytic_sets: vec![(
            "spectrum".into(),
            ReferenceSet::Union(vec![
                ReferenceSet::Segment(c64(-4.0, 0.0), c64(-2.0, 0.0)),
                ReferenceSet::Segment(c64(2.0, 0.0), c64(4.0, 0.0)),
            ]),
        )],
        ..Default::default()
    };
    ColumnOracle::from_entries("jacobi_t3", BandProfile::Offset(1), |i, j| {
        if i.abs_diff(j) == 1 {
            if i.min(j) % 2 == 1 {
                c64(3.0, 0.0)
            } else {
                ONE
            }
        } else {
            ZERO
        }
    })
    .with_upper_bandwidth(1)
    .with_metadata(meta)
}

/// `(H1 x)_n = x_{n-1} + x_{n+1} + V_n x_n` on `Z`, `V_n = cos n + iγ sin n` for even `n`
/// and zero for odd `n`.
pub fn pt_h1(gamma: f64) -> ColumnOracle {
    let meta = GalleryMetadata { norm_bound: Some(2.0 + (1.0 + gamma * gamma).sqrt()), ..Default::default() };
    fold_operator("pt_h1", 1, move |i, j| {
        if i == j {
            if i.rem_euclid(2) == 1 {
                ZERO
            } else {
                let x = i as f64;
                c64(x.cos(), gamma * x.sin())
            }
        } else if (i - j).abs() == 1 {
            ONE
        } else {
            ZERO
        }
    })
    .expect("bandwidth 1")
    .with_metadata(meta)
}

/// Random hopping model `(H3 x)_n = s-_{n-1} e^{-g} x_{n-1} + s+_n e^{g} x_{n+1}` on `Z`.
pub fn feinberg_zee_h3(g: f64, p: f64, seed: u64) -> Result<ColumnOracle> {
    let plus = RandomEnsemble::new(seed, p, DistributionRole::SignsOffDiagonal)?;
    let minus = plus.with_substream(1);
    let (ep, em) = (g.exp(), (-g).exp());
    let meta = GalleryMetadata {
        norm_bound: Some(ep + em),
        analytic_sets: vec![
            (
                "annulus".into(),
                ReferenceSet::Annulus { center: ZERO, inner: 2.0 * g.sinh().abs(), outer: 2.0 * g.cosh() },
            ),
            ("ellipse".into(), ReferenceSet::hopping_ellipse(g, 1024)),
        ],
        ..Default::default()
    };
    Ok(fold_operator("feinberg_zee", 1, move |i, j| {
        if i == j + 1 {
            c64(minus.sign_z(j) * em, 0.0)
        } else if i + 1 == j {
            c64(plus.sign_z(i) * ep, 0.0)
        } else {
            ZERO
        }
    })?
    .with_metadata(meta))
}

/// `(H4 x)_n = e^{-g} x_{n-1} + e^{g} x_{n+1} + V_n x_n` on `Z` with `V_n = ±1`, `P(+1) = p`.
pub fn hatano_nelson_h4(g: f64, p: f64, seed: u64) -> Result<ColumnOracle> {
    let pot = RandomEnsemble::new(seed, p, DistributionRole::SignsDiagonal)?;
    let (ep, em) = (g.exp(), (-g).exp());
    let meta = GalleryMetadata {
        norm_bound: Some(ep + em + 1.0),
        analytic_sets: vec![
            (
                "inclusion".into(),
                ReferenceSet::EllipseBand {
                    center: ZERO,
                    a: 2.0 * g.cosh(),
                    b: 2.0 * g.sinh().abs(),
                    dilation: 1.0,
                    band: 1.0,
                },
            ),
            ("ellipse".into(), ReferenceSet::hopping_ellipse(g, 1024)),
        ],
        ..Default::default()
    };
    Ok(fold_operator("hatano_nelson", 1, move |i, j| {
        if i == j {
            c64(pot.sign_z(i), 0.0)
        } else if i == j + 1 {
            c64(em, 0.0)
        } else if i + 1 == j {
            c64(ep, 0.0)
        } else {
            ZERO
        }
    })?
    .with_metadata(meta))
}
