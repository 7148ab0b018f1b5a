use crate::dense::{norm2, Matrix};
use crate::error::{Error, Result};
use crate::operator::oracle::BandProfile;
use crate::scalar::Scalar;

/// `S = I - tau ξ ξ*` with `tau = 2/||ξ||^2`, acting on rows `start..start + ξ.len()`
/// (0-based). `tau = 0` encodes the identity (zero pivot).
#[derive(Clone, Debug, PartialEq)]
pub struct HouseholderReflector<S> {
    pub start: usize,
    pub xi: Vec<S>,
    pub tau: f64,
    /// First entry of `S η`, i.e. `-(η1/|η1|) ||η||`.
    pub beta: S,
}

impl<S: Scalar> HouseholderReflector<S> {
    pub fn identity(start: usize) -> Self {
        HouseholderReflector { start, xi: Vec::new(), tau: 0.0, beta: S::zero() }
    }

    pub fn is_identity(&self) -> bool {
        self.tau == 0.0
    }

    pub fn end(&self) -> usize {
        self.start + self.xi.len()
    }

    /// `x <- S x` where `x` is the segment of the supported rows.
    #[inline]
    pub fn apply_segment(&self, x: &mut [S]) {
        if self.tau == 0.0 {
            return;
        }
        let mut s = S::zero();
        for (&a, &b) in self.xi.iter().zip(x.iter()) {
            s += a.conj() * b;
        }
        let s = s.scale(self.tau);
        for (d, &a) in x.iter_mut().zip(&self.xi) {
            *d -= a * s;
        }
    }

    /// `x <- S x` for a full-length vector.
    pub fn apply(&self, x: &mut [S]) {
        if self.tau == 0.0 || self.start >= x.len() {
            return;
        }
        let end = self.end().min(x.len());
        debug_assert!(self.end() <= x.len() || x[end..].iter().all(|&v| v == S::zero()));
        let seg = &mut x[self.start..end];
        if seg.len() == self.xi.len() {
            self.apply_segment(seg);
        } else {
            let mut tmp = seg.to_vec();
            tmp.resize(self.xi.len(), S::zero());
            self.apply_segment(&mut tmp);
            seg.copy_from_slice(&tmp[..seg.len()]);
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> HouseholderReflector<T> {
        HouseholderReflector {
            start: self.start,
            xi: self.xi.iter().map(|&v| f(v)).collect(),
            tau: self.tau,
            beta: f(self.beta),
        }
    }
}

/// Reflector sending `eta` to a multiple of `e1`, with the cancellation-free sign
/// `ξ = η + (η1/|η1|)||η|| e1` (`ξ = η + ||η|| e1` when `η1 = 0`).
pub fn householder_vector<S: Scalar>(eta: &[S]) -> Result<HouseholderReflector<S>> {
    let nrm = norm2(eta);
    if nrm == 0.0 || eta.is_empty() {
        return Err(Error::InvalidInput("householder vector of a zero vector".into()));
    }
    if !nrm.is_finite() {
        return Err(Error::NonFinite("householder vector".into()));
    }
    Ok(reflector_unchecked(eta, 0, nrm))
}

#[inline]
fn reflector_unchecked<S: Scalar>(eta: &[S], start: usize, nrm: f64) -> HouseholderReflector<S> {
    let ph = eta[0].phase();
    let mut xi = eta.to_vec();
    xi[0] += ph.scale(nrm);
    // ||ξ||^2 = 2||η||(||η|| + |η1|)
    let xn2 = 2.0 * nrm * (nrm + eta[0].abs());
    HouseholderReflector { start, xi, tau: 2.0 / xn2, beta: -ph.scale(nrm) }
}

/// Reflector for `eta` placed at `start`, or the identity when `eta = 0`.
pub fn reflector_or_identity<S: Scalar>(eta: &[S], start: usize) -> HouseholderReflector<S> {
    let nrm = norm2(eta);
    if nrm == 0.0 {
        HouseholderReflector::identity(start)
    } else {
        reflector_unchecked(eta, start, nrm)
    }
}

/// Phase `t` with `t * beta >= 0`; one for a zero pivot.
#[inline]
pub fn phase_fixer<S: Scalar>(beta: S) -> S {
    if beta == S::zero() {
        S::one()
    } else {
        beta.conj().scale(1.0 / beta.abs())
    }
}

/// Output of [`qr_window`]: `block = (U_1 ⋯ U_w) D* R`.
#[derive(Clone, Debug)]
pub struct WindowQr<S> {
    pub reflectors: Vec<HouseholderReflector<S>>,
    pub r: Matrix<S>,
    /// `D`, unit modulus.
    pub phases: Vec<S>,
    /// 0-based columns with a zero pivot.
    pub zero_pivots: Vec<usize>,
}

impl<S: Scalar> WindowQr<S> {
    /// Dense `Q = U_1 ⋯ U_w D*`.
    pub fn q(&self) -> Matrix<S> {
        let n = self.r.rows();
        let mut q = Matrix::zeros(n, n);
        for j in 0..n {
            let col = q.col_mut(j);
            col[j] = self.phases.get(j).copied().unwrap_or(S::one()).conj();
            for refl in self.reflectors.iter().rev() {
                refl.apply(col);
            }
        }
        q
    }
}

/// Householder QR of a square truncation of a quasi-banded operator. The reflector for
/// column `j` (1-based) touches rows `j..=f(j)` only; `R` has a real nonnegative diagonal.
pub fn qr_window<S: Scalar>(block: &Matrix<S>, band: &BandProfile) -> WindowQr<S> {
    assert!(block.is_square(), "qr_window needs a square block");
    let w = block.rows();
    let mut r = block.clone();
    let mut reflectors = Vec::with_capacity(w);
    let mut phases = Vec::with_capacity(w);
    let mut zero_pivots = Vec::new();
    for j in 0..w {
        let end = band.apply(j + 1).min(w);
        let refl = reflector_or_identity(&r.col(j)[j..end], j);
        if refl.is_identity() {
            zero_pivots.push(j);
        } else {
            for c in j..w {
                refl.apply_segment(&mut r.col_mut(c)[j..end]);
            }
            r[(j, j)] = refl.beta;
            for v in &mut r.col_mut(j)[j + 1..end] {
                *v = S::zero();
            }
        }
        let t = phase_fixer(r[(j, j)]);
        for c in j..w {
            r[(j, c)] *= t;
        }
        phases.push(t);
        reflectors.push(refl);
    }
    WindowQr { reflectors, r, phases, zero_pivots }
}

/// Full Householder QR of a dense square matrix with positive `R` diagonal.
pub fn qr_positive<S: Scalar>(a: &Matrix<S>) -> (Matrix<S>, Matrix<S>) {
    let n = a.rows();
    let qr = qr_window(a, &BandProfile::Offset(n));
    (qr.q(), qr.r)
}

/// Orthonormal basis of the column span of a tall matrix (thin `Q` of a Householder QR).
pub fn thin_q<S: Scalar>(x: &Matrix<S>) -> Matrix<S> {
    let (rows, cols) = (x.rows(), x.cols());
    assert!(cols <= rows, "thin_q needs a tall matrix");
    let mut a = x.clone();
    let mut refl = Vec::with_capacity(cols);
    for j in 0..cols {
        let h = reflector_or_identity(&a.col(j)[j..rows], j);
        if !h.is_identity() {
            for c in j + 1..cols {
                h.apply_segment(&mut a.col_mut(c)[j..rows]);
            }
        }
        refl.push(h);
    }
    let mut q = Matrix::zeros(rows, cols);
    for j in 0..cols {
        let col = q.col_mut(j);
        col[j] = S::one();
        for h in refl.iter().rev() {
            h.apply(col);
        }
    }
    q
}
