//! Sturm-sequence bisection for real symmetric tridiagonal matrices.

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    let tiny = f64::MIN_POSITIVE.sqrt();
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - off;
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(d: &[f64], e: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..d.len() {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i < e.len() { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    (lo, hi)
}

/// The `k`-th smallest eigenvalue (0-based).
pub fn kth_eigenvalue(d: &[f64], e: &[f64], k: usize) -> f64 {
    assert!(k < d.len() && e.len() + 1 == d.len());
    let (mut lo, mut hi) = gershgorin(d, e);
    let tol = 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All eigenvalues, ascending.
pub fn tridiagonal_eigenvalues(d: &[f64], e: &[f64]) -> Vec<f64> {
    (0..d.len()).map(|k| kth_eigenvalue(d, e, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian() {
        let n = 12;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let ev = tridiagonal_eigenvalues(&d, &e);
        for (k, v) in ev.iter().enumerate() {
            let want = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((v - want).abs() < 1e-13, "{k}: {v} vs {want}");
        }
    }
}
