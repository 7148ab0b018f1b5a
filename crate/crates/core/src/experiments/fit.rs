use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

/// Ordinary least squares `y ≈ slope x + intercept`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit { slope, intercept: my - slope * mx, r2, points: n })
}

/// Fit of `log(err)` against `n` over the middle 80% of the n-range, skipping
/// errors at or below `floor` (the floating-point plateau).
pub fn log_linear_fit(ns: &[usize], errs: &[f64], floor: f64) -> Option<LinearFit> {
    let (lo, hi) = match (ns.iter().min(), ns.iter().max()) {
        (Some(&a), Some(&b)) => (a as f64, b as f64),
        _ => return None,
    };
    let cut = 0.1 * (hi - lo);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (&n, &e) in ns.iter().zip(errs) {
        let x = n as f64;
        if x < lo + cut || x > hi - cut || !(e > floor) || !e.is_finite() {
            continue;
        }
        xs.push(x);
        ys.push(e.ln());
    }
    least_squares(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = least_squares(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15 && (f.intercept - 1.0).abs() < 1e-15 && (f.r2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn geometric_decay() {
        let ns: Vec<usize> = (0..=100).collect();
        let errs: Vec<f64> = ns.iter().map(|&n| 3.0 * 0.8f64.powi(n as i32)).collect();
        let f = log_linear_fit(&ns, &errs, 0.0).unwrap();
        assert!((f.slope - 0.8f64.ln()).abs() < 1e-12);
        assert_eq!(f.points, 81);
    }
}
