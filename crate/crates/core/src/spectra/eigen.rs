use std::cmp::Ordering;

use crate::dense::{norm2, CMatrix};
use crate::error::{Error, Result};
use crate::iqr::householder::reflector_or_identity;
use crate::scalar::{Scalar, C64};

const DEFLATE: f64 = 1e-13;

/// `U* M U = H` with `H` upper Hessenberg.
pub fn hessenberg_reduce(m: &CMatrix) -> (CMatrix, CMatrix) {
    assert!(m.is_square(), "hessenberg_reduce needs a square matrix");
    let n = m.rows();
    let mut h = m.clone();
    let mut u = CMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let tail = &h.col(k)[k + 1..n];
        if tail[1..].iter().all(|z| *z == C64::new(0.0, 0.0)) {
            continue;
        }
        let refl = reflector_or_identity(tail, k + 1);
        if refl.is_identity() {
            continue;
        }
        // H <- S H S, U <- U S
        for c in k..n {
            refl.apply_segment(&mut h.col_mut(c)[k + 1..n]);
        }
        h[(k + 1, k)] = refl.beta;
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
        right_apply(&mut h, &refl.xi, refl.tau, k + 1, 0, n);
        right_apply(&mut u, &refl.xi, refl.tau, k + 1, 0, n);
    }
    (h, u)
}

/// `X[r0..r1, s..] <- X S` for the reflector with vector `xi` starting at column `s`.
fn right_apply(x: &mut CMatrix, xi: &[C64], tau: f64, s: usize, r0: usize, r1: usize) {
    let mut y = vec![C64::new(0.0, 0.0); r1 - r0];
    for (k, &v) in xi.iter().enumerate() {
        for (d, &a) in y.iter_mut().zip(&x.col(s + k)[r0..r1]) {
            *d += a * v;
        }
    }
    for (k, &v) in xi.iter().enumerate() {
        let c = v.conj() * tau;
        for (d, &a) in x.col_mut(s + k)[r0..r1].iter_mut().zip(&y) {
            *d -= a * c;
        }
    }
}

#[inline]
fn givens(x: C64, y: C64) -> (f64, C64) {
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    let ax = x.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

/// Complex Schur form `Z* M Z = T`; `Z` is accumulated only when `want_z`.
pub struct Schur {
    pub t: CMatrix,
    pub z: Option<CMatrix>,
    pub steps: usize,
}

pub fn schur(m: &CMatrix, want_z: bool) -> Result<Schur> {
    assert!(m.is_square(), "schur needs a square matrix");
    let n = m.rows();
    if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("eigensolver input".into()));
    }
    let (mut h, u) = if is_hessenberg(m) { (m.clone(), CMatrix::identity(n)) } else { hessenberg_reduce(m) };
    let mut z = if want_z { Some(u) } else { None };
    let cap = 30 * n.max(1);
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let mut steps = 0;
    let mut since = 0;
    let mut hi = n;
    while hi > 1 {
        let top = hi - 1;
        // locate the active block [lo, top]
        let mut lo = top;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= DEFLATE * diag || sub <= f64::EPSILON * 1e-3 * scale {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == top {
            hi -= 1;
            since = 0;
            continue;
        }
        steps += 1;
        since += 1;
        if steps > cap {
            return Err(Error::NoConvergence(steps));
        }
        let mu = if since % 10 == 0 {
            h[(top, top)] + h[(top, top - 1)].norm() * 0.75
        } else {
            wilkinson(h[(top - 1, top - 1)], h[(top - 1, top)], h[(top, top - 1)], h[(top, top)])
        };
        let (c0, c1) = if want_z { (0, n) } else { (lo, hi) };
        let mut x = h[(lo, lo)] - mu;
        let mut y = h[(lo + 1, lo)];
        for k in lo..top {
            if k > lo {
                x = h[(k, k - 1)];
                y = h[(k + 1, k - 1)];
            }
            let (c, s) = givens(x, y);
            let first = if k > lo { k - 1 } else { lo };
            for col in first..c1 {
                let a = h[(k, col)];
                let b = h[(k + 1, col)];
                h[(k, col)] = a * c + s * b;
                h[(k + 1, col)] = -s.conj() * a + b * c;
            }
            if k > lo {
                h[(k + 1, k - 1)] = C64::new(0.0, 0.0);
            }
            let last = (k + 2).min(top);
            for row in c0..=last {
                let a = h[(row, k)];
                let b = h[(row, k + 1)];
                h[(row, k)] = a * c + b * s.conj();
                h[(row, k + 1)] = -a * s + b * c;
            }
            if let Some(zm) = z.as_mut() {
                for row in 0..n {
                    let a = zm[(row, k)];
                    let b = zm[(row, k + 1)];
                    zm[(row, k)] = a * c + b * s.conj();
                    zm[(row, k + 1)] = -a * s + b * c;
                }
            }
        }
    }
    Ok(Schur { t: h, z, steps })
}

fn is_hessenberg(m: &CMatrix) -> bool {
    let n = m.rows();
    (0..n).all(|j| m.col(j).iter().skip(j + 2).all(|z| *z == C64::new(0.0, 0.0)))
}

fn wilkinson(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn principal_arg(z: C64) -> f64 {
    let a = z.arg();
    if a == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}

/// Descending modulus, ties by descending principal argument.
pub fn eig_order(a: &C64, b: &C64) -> Ordering {
    b.norm()
        .partial_cmp(&a.norm())
        .unwrap_or(Ordering::Equal)
        .then_with(|| principal_arg(*b).partial_cmp(&principal_arg(*a)).unwrap_or(Ordering::Equal))
}

pub fn sort_eigenvalues(v: &mut [C64]) {
    v.sort_by(eig_order);
}

/// Eigenvalues with algebraic multiplicity in canonical order.
pub fn schur_eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    let s = schur(m, false)?;
    let mut ev = s.t.diag();
    sort_eigenvalues(&mut ev);
    Ok(ev)
}

/// Eigenpairs in canonical order; vectors normalized to unit length.
pub fn eigenpairs(m: &CMatrix) -> Result<Vec<(C64, Vec<C64>)>> {
    let n = m.rows();
    let s = schur(m, true)?;
    let t = &s.t;
    let z = s.z.as_ref().expect("requested");
    let small = f64::EPSILON * t.max_abs().max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lam = t[(k, k)];
        let mut y = vec![C64::new(0.0, 0.0); n];
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = C64::new(0.0, 0.0);
            for j in i + 1..=k {
                acc += t[(i, j)] * y[j];
            }
            let mut den = t[(i, i)] - lam;
            if den.norm() < small {
                den = C64::new(small, 0.0);
            }
            y[i] = -acc / den;
        }
        let mut x = z.matvec(&y);
        let nx = norm2(&x);
        for v in &mut x {
            *v = v.scale(1.0 / nx);
        }
        out.push((lam, x));
    }
    out.sort_by(|a, b| eig_order(&a.0, &b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn diagonal_input() {
        let d = CMatrix::from_diag(&[c64(2.0, 0.0), c64(0.0, 1.5), c64(-1.25, 0.0)]);
        let ev = schur_eigenvalues(&d).unwrap();
        assert_eq!(ev, vec![c64(2.0, 0.0), c64(0.0, 1.5), c64(-1.25, 0.0)]);
    }

    #[test]
    fn companion_of_z2_minus_1() {
        let c = CMatrix::from_rows(&[vec![c64(0.0, 0.0), c64(1.0, 0.0)], vec![c64(1.0, 0.0), c64(0.0, 0.0)]]);
        let ev = schur_eigenvalues(&c).unwrap();
        // equal moduli: argument π sorts ahead of 0
        assert!((ev[0] - c64(-1.0, 0.0)).norm() < 1e-14, "{ev:?}");
        assert!((ev[1] - c64(1.0, 0.0)).norm() < 1e-14, "{ev:?}");
    }

    #[test]
    fn hessenberg_of_hessenberg_is_identity_transform() {
        let h = CMatrix::from_fn(5, 5, |i, j| if i <= j + 1 { c64((i + 2 * j) as f64, 1.0) } else { c64(0.0, 0.0) });
        let (h2, u) = hessenberg_reduce(&h);
        assert_eq!(h2, h);
        assert_eq!(u, CMatrix::identity(5));
    }

    #[test]
    fn jordan_block_converges() {
        let j = CMatrix::from_fn(6, 6, |i, k| if k == i + 1 { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        let ev = schur_eigenvalues(&j).unwrap();
        assert!(ev.iter().all(|z| z.norm() < 1e-2));
    }

    #[test]
    fn eigenvector_residuals() {
        let a = CMatrix::from_fn(6, 6, |i, k| c64(((i * 7 + k * 3) % 5) as f64 - 2.0, ((i + 2 * k) % 3) as f64));
        for (lam, v) in eigenpairs(&a).unwrap() {
            let av = a.matvec(&v);
            let res: f64 = av.iter().zip(&v).map(|(x, y)| (x - lam * y).norm_sqr()).sum::<f64>().sqrt();
            assert!(res < 1e-10, "residual {res}");
        }
    }
}
