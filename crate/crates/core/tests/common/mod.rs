//! Independent oracles shared by the integration tests. Nothing here calls the
//! library's numerical kernels; only container types are borrowed.
#![allow(dead_code)]

use iqr::operator::oracle::{BandProfile, ColumnOracle, Structure};
use iqr::{c64, CMatrix, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Deterministic uniform in [-1, 1) from a seed and two indices (splitmix64).
pub fn hash_unit(seed: u64, a: u64, b: u64) -> f64 {
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(a.wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .wrapping_add(b.wrapping_mul(0x94D0_49BB_1331_11EB))
        .wrapping_add(0x2545_F491_4F6C_DD1D);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

pub fn hash_complex(seed: u64, a: u64, b: u64) -> C64 {
    c64(hash_unit(seed, 2 * a, b), hash_unit(seed, 2 * a + 1, b))
}

fn cdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Classical Gram-Schmidt with reorthogonalisation; R has a positive diagonal.
pub fn cgs2_qr(a: &CMatrix) -> (CMatrix, CMatrix) {
    let (rows, cols) = (a.rows(), a.cols());
    let mut q = CMatrix::zeros(rows, cols);
    let mut r = CMatrix::zeros(cols, cols);
    for j in 0..cols {
        let mut v = a.col(j).to_vec();
        for _ in 0..2 {
            let coeffs: Vec<C64> = (0..j).map(|k| cdot(q.col(k), &v)).collect();
            for (k, c) in coeffs.iter().enumerate() {
                r[(k, j)] += *c;
                for (x, y) in v.iter_mut().zip(q.col(k)) {
                    *x -= *c * y;
                }
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        r[(j, j)] = c64(nrm, 0.0);
        for (x, y) in q.col_mut(j).iter_mut().zip(&v) {
            *x = y / nrm;
        }
    }
    (q, r)
}

pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    CMatrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum())
}

pub fn adjoint(a: &CMatrix) -> CMatrix {
    CMatrix::from_fn(a.cols(), a.rows(), |i, j| a[(j, i)].conj())
}

/// `n` unshifted QR steps `A <- R Q` on the dense truncation `P_N T P_N`.
pub fn giant_reference(t: &ColumnOracle, big: usize, n: usize) -> CMatrix {
    let mut a = CMatrix::from_fn(big, big, |i, j| t.entry(i + 1, j + 1));
    for _ in 0..n {
        let (q, r) = cgs2_qr(&a);
        a = matmul(&r, &q);
    }
    a
}

pub fn random_unitary(seed: u64, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |i, j| hash_complex(seed, i as u64, j as u64 + 1000));
    cgs2_qr(&g).0
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            m = m.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    m
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Monic characteristic polynomial by Faddeev-LeVerrier; `c[k]` multiplies `z^k`.
pub fn charpoly(a: &CMatrix) -> Vec<C64> {
    let n = a.rows();
    let mut c = vec![ZERO; n + 1];
    c[n] = c64(1.0, 0.0);
    let mut m = CMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = matmul(a, &m);
        for i in 0..n {
            next[(i, i)] += c[n - k + 1];
        }
        m = next;
        let am = matmul(a, &m);
        let tr: C64 = (0..n).map(|i| am[(i, i)]).sum();
        c[n - k] = -tr / k as f64;
    }
    c
}

fn horner(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Roots of a monic polynomial: Durand-Kerner, then Newton polishing.
pub fn poly_roots(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    let bound = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let seed = c64(0.4, 0.9);
    let mut z: Vec<C64> = (0..n).map(|k| seed.powu(k as u32) * (0.5 * bound)).collect();
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let (p, _) = horner(c, z[i]);
            let mut den = c64(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            let step = p / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * bound {
            break;
        }
    }
    for r in &mut z {
        for _ in 0..5 {
            let (p, dp) = horner(c, *r);
            if dp.norm() == 0.0 {
                break;
            }
            *r -= p / dp;
        }
    }
    z
}

/// Largest distance under the best pairing of two equal-size point sets (exhaustive for n <= 8).
pub fn matched_error(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    let mut used = vec![false; n];
    let mut best = f64::INFINITY;
    fn go(k: usize, a: &[C64], b: &[C64], used: &mut [bool], cur: f64, best: &mut f64) {
        if cur >= *best {
            return;
        }
        if k == a.len() {
            *best = cur;
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(k + 1, a, b, used, cur.max((a[k] - b[j]).norm()), best);
                used[j] = false;
            }
        }
    }
    go(0, a, b, &mut used, 0.0, &mut best);
    best
}

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix (diag `d`, off-diagonal `e`).
pub fn sturm_below(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] };
        q = d[i] - x - if i == 0 { 0.0 } else { off / q };
        if q == 0.0 {
            q = -f64::EPSILON * (1.0 + x.abs());
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues, ascending, by bisection on the Sturm count.
pub fn sturm_eigenvalues(d: &[f64], e: &[f64]) -> Vec<f64> {
    let n = d.len();
    let r = (0..n)
        .map(|i| d[i].abs() + if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 })
        .fold(0.0, f64::max);
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (-r - 1.0, r + 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_below(d, e, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo < 1e-15 * (1.0 + r) {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Eigenvalues of a small Hermitian matrix as the real parts of its characteristic roots.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    poly_roots(&charpoly(h)).into_iter().map(|z| z.re).collect()
}

/// Largest eigenvalue of a Hermitian positive semidefinite matrix by power iteration.
fn psd_lambda_max(g: &CMatrix) -> f64 {
    let n = g.rows();
    let mut v: Vec<C64> = (0..n).map(|i| c64(1.0, 0.1 * i as f64)).collect();
    let mut lam = 0.0;
    for _ in 0..2000 {
        let w: Vec<C64> = (0..n).map(|i| (0..n).map(|k| g[(i, k)] * v[k]).sum()).collect();
        let nrm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm == 0.0 {
            return 0.0;
        }
        lam = nrm / v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v = w.into_iter().map(|z| z / nrm).collect();
    }
    lam
}

/// `δ̂` between subspaces with orthonormal frames (as columns): the larger of
/// `||(I - BB*)A||` and `||(I - AA*)B||`.
pub fn gap_oracle(a: &CMatrix, b: &CMatrix) -> f64 {
    let h = a.rows().max(b.rows());
    let pad = |x: &CMatrix| CMatrix::from_fn(h, x.cols(), |i, j| if i < x.rows() { x[(i, j)] } else { ZERO });
    let (a, b) = (pad(a), pad(b));
    let one = |a: &CMatrix, b: &CMatrix| {
        let proj = matmul(b, &matmul(&adjoint(b), a));
        let r = CMatrix::from_fn(h, a.cols(), |i, j| a[(i, j)] - proj[(i, j)]);
        psd_lambda_max(&matmul(&adjoint(&r), &r)).sqrt()
    };
    one(&a, &b).max(one(&b, &a))
}

/// Brute-force Hausdorff distance.
pub fn hausdorff_oracle(a: &[C64], b: &[C64]) -> f64 {
    let one = |x: &[C64], y: &[C64]| {
        x.iter().map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Distance to `[-4, -2] ∪ [2, 4]`.
pub fn dist_to_t3_spectrum(z: C64) -> f64 {
    let x = z.re.abs();
    let dx = if x < 2.0 {
        2.0 - x
    } else if x > 4.0 {
        x - 4.0
    } else {
        0.0
    };
    dx.hypot(z.im)
}

/// Seeded quasi-banded operator: `f(j) = j + k`, entries above the diagonal damped by `2^-(j-i)`.
pub fn random_quasi_banded(seed: u64, k: usize) -> ColumnOracle {
    ColumnOracle::from_entries(format!("random_qb_{seed}_{k}"), BandProfile::Offset(k), move |i, j| {
        let z = hash_complex(seed, i as u64, j as u64);
        if i <= j {
            z * 0.5f64.powi((j - i) as i32)
        } else {
            z
        }
    })
}

/// `W* D W` on the first `d.len()` coordinates, followed by the diagonal `tail(j)`.
pub fn planted_normal(
    seed: u64,
    d: &[C64],
    tail: impl Fn(usize) -> C64 + Send + Sync + 'static,
) -> (ColumnOracle, CMatrix) {
    let k = d.len();
    let w = random_unitary(seed, k);
    let dm = CMatrix::from_fn(k, k, |i, j| if i == j { d[i] } else { ZERO });
    let block = matmul(&adjoint(&w), &matmul(&dm, &w));
    let t = planted_block(&block, tail);
    (t, w)
}

/// Dense `block` on the leading coordinates, then the diagonal `tail(j)`.
pub fn planted_block(block: &CMatrix, tail: impl Fn(usize) -> C64 + Send + Sync + 'static) -> ColumnOracle {
    let k = block.rows();
    let b = block.clone();
    let profile = BandProfile::custom(move |j| j.max(k));
    let t = ColumnOracle::new("planted", Structure::QuasiBanded(profile), move |j, h| {
        let mut col = vec![ZERO; h];
        if j <= k {
            for i in 0..k.min(h) {
                col[i] = b[(i, j - 1)];
            }
        } else if j <= h {
            col[j - 1] = tail(j);
        }
        col
    });
    t.with_upper_bandwidth(k.saturating_sub(1))
}
