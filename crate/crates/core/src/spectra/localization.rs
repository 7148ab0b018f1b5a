use crate::error::{Error, Result};
use crate::scalar::C64;

/// `Σ|ψ_i|⁴ / (Σ|ψ_i|²)²`.
pub fn inverse_participation_ratio(psi: &[C64]) -> Result<f64> {
    let s2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if !(s2 > 0.0) {
        return Err(Error::InvalidInput("participation ratio of a zero vector".into()));
    }
    let s4: f64 = psi.iter().map(|z| z.norm_sqr() * z.norm_sqr()).sum();
    Ok(s4 / (s2 * s2))
}

pub const LYAPUNOV_BURN_IN: usize = 1000;
const CLAMP: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LyapunovEstimate {
    pub kappa: f64,
    /// Some `y_j` hit zero and was clamped.
    pub clamped: bool,
}

/// Transfer-matrix estimate `(1/(2N+1)) Σ_{j=−N}^{N} (log|y_j| − g)` with
/// `y_{n+1} = −(s⁻_{n−1}/s⁺_n)/y_n + z/s⁺_n`, started from `y = 1` and burned in
/// for `LYAPUNOV_BURN_IN` steps before `j = −N`.
pub fn lyapunov_exponent(
    s_plus: impl Fn(i64) -> f64,
    s_minus: impl Fn(i64) -> f64,
    z: C64,
    g: f64,
    n: usize,
) -> Result<LyapunovEstimate> {
    if n == 0 {
        return Err(Error::InvalidInput("lyapunov_exponent needs N >= 1".into()));
    }
    let n = n as i64;
    let start = -n - LYAPUNOV_BURN_IN as i64;
    let mut y = C64::new(1.0, 0.0);
    let mut clamped = false;
    let mut acc = 0.0;
    let mut j = start;
    loop {
        if j >= -n {
            acc += y.norm().ln() - g;
        }
        if j == n {
            break;
        }
        let sp = s_plus(j);
        if sp == 0.0 {
            return Err(Error::InvalidInput(format!("s+ vanishes at {j}")));
        }
        if y.norm() < CLAMP {
            y = C64::new(CLAMP, 0.0);
            clamped = true;
        }
        y = -(s_minus(j - 1) / sp) / y + z / sp;
        j += 1;
    }
    Ok(LyapunovEstimate { kappa: acc / (2 * n + 1) as f64, clamped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    #[test]
    fn ipr_examples() {
        let e1 = [c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)];
        assert_eq!(inverse_participation_ratio(&e1).unwrap(), 1.0);
        let flat = vec![c64(1.0, 0.0); 8];
        assert!((inverse_participation_ratio(&flat).unwrap() - 0.125).abs() < 1e-15);
        let half = [c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)];
        assert!((inverse_participation_ratio(&half).unwrap() - 0.5).abs() < 1e-15);
        assert!(inverse_participation_ratio(&[c64(0.0, 0.0)]).is_err());
    }

    #[test]
    fn constant_signs_closed_orbit() {
        let est = lyapunov_exponent(|_| 1.0, |_| 1.0, c64(0.0, 0.0), 0.3, 50).unwrap();
        assert!((est.kappa + 0.3).abs() < 1e-14);
        assert!(!est.clamped);
    }
}
