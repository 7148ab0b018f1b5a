use crate::dense::{dot, CMatrix};
use crate::scalar::C64;

const SWEEPS: usize = 80;

/// One-sided Jacobi on the columns; returns singular values, descending.
/// Wide inputs are transposed first so the result always has `min(rows, cols)` entries.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.rows() < a.cols() {
        return singular_values(&a.adjoint());
    }
    let mut w = a.clone();
    let n = w.cols();
    let tol = f64::EPSILON;
    for _ in 0..SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (cp, cq) = w.col_pair_mut(p, q);
                let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot(cp, cq);
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let ph = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // columns (a_p, a_q e^{-iφ}) rotated by a real Givens pair
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let yq = *y * ph.conj();
                    let np = *x * c - yq * s;
                    let nq = *x * s + yq * c;
                    *x = np;
                    *y = nq * ph;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|j| w.col(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

pub fn sigma_min(a: &CMatrix) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

pub fn sigma_max(a: &CMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// `min(σ_min(M − z), σ_min((M − z)*))` on a square matrix.
pub fn smallest_singular_value(m: &CMatrix, z: C64) -> f64 {
    let s = m.shifted(z);
    sigma_min(&s).min(sigma_min(&s.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn diagonal_values() {
        let d = CMatrix::from_diag(&[c64(3.0, 0.0), c64(0.0, -2.0), c64(0.5, 0.0)]);
        assert_eq!(singular_values(&d), vec![3.0, 2.0, 0.5]);
    }

    #[test]
    fn rank_one() {
        let a = CMatrix::from_fn(4, 3, |i, j| c64((i + 1) as f64, 0.0) * c64(1.0, j as f64));
        let sv = singular_values(&a);
        let fro = a.norm_fro();
        assert!((sv[0] - fro).abs() < 1e-12 * fro);
        assert!(sv[1] < 1e-12 && sv[2] < 1e-12);
    }

    #[test]
    fn shifted_smallest() {
        let d = CMatrix::from_diag(&[c64(1.0, 0.0), c64(2.0, 0.0)]);
        assert!((smallest_singular_value(&d, c64(1.75, 0.0)) - 0.25).abs() < 1e-14);
    }
}
