use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Positions `p_1 < p_2 < ...` (1-based) of the basis vectors that carry new
/// dominant directions, and the indices `m` whose vectors add none.
#[derive(Clone, Debug, Default)]
pub struct IndexStructure {
    pub positions: Vec<usize>,
    pub degenerate: Vec<usize>,
}

impl IndexStructure {
    /// `p_j = j`, no degenerate indices.
    pub fn identity(k: usize) -> Self {
        IndexStructure { positions: (1..=k).collect(), degenerate: Vec::new() }
    }

    fn validate(&self, k: usize) -> Result<()> {
        if self.positions.len() < k {
            return Err(Error::InvalidInput(format!("{} positions for k = {k}", self.positions.len())));
        }
        if self.positions.windows(2).any(|w| w[0] >= w[1]) || self.positions.first() == Some(&0) {
            return Err(Error::InvalidInput("positions must be increasing and 1-based".into()));
        }
        if self.degenerate.iter().any(|m| self.positions.contains(m)) {
            return Err(Error::InvalidInput("a position cannot also be degenerate".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthConstants {
    /// `B(1..=k)`.
    pub b: Vec<f64>,
    /// `C(1..=k)`.
    pub c: Vec<f64>,
    /// `A(m)` for the degenerate indices below `p_k`.
    pub a: BTreeMap<usize, f64>,
    /// `max B · sqrt(k) · L`.
    pub beta: f64,
}

/// Evaluates the `A`, `B`, `C` recursions of the eigenvector convergence bounds.
pub fn growth_constants(k: usize, index: &IndexStructure, l: f64) -> Result<GrowthConstants> {
    if k == 0 {
        return Err(Error::InvalidInput("growth constants need k >= 1".into()));
    }
    index.validate(k)?;
    let p = &index.positions;
    let mut deg = index.degenerate.clone();
    deg.sort_unstable();
    let mut a: BTreeMap<usize, f64> = BTreeMap::new();
    for &m in deg.iter().filter(|&&m| m < p[0]) {
        a.insert(m, 0.0);
    }
    let mut b: Vec<f64> = vec![1.0];
    let mut c: Vec<f64> = vec![1.0];
    for mu in 1..k {
        // A(m) for degenerate m with p_mu < m < p_{mu+1}
        let cm = c[mu - 1];
        let am = b.iter().map(|&bj| (cm + bj).powi(2)).sum::<f64>().sqrt() + cm;
        for &m in deg.iter().filter(|&&m| m > p[mu - 1] && m < p[mu]) {
            a.insert(m, am);
        }
        let sa: f64 = a.range(..p[mu]).map(|(_, &v)| (v + 1.0).powi(2)).sum();
        let sb: f64 = b.iter().map(|&bj| (bj + 1.0).powi(2)).sum();
        b.push(1.0 + (sa + sb).sqrt());
        c.push(b.iter().map(|x| x * x).sum::<f64>().sqrt());
    }
    let bmax = b.iter().cloned().fold(0.0, f64::max);
    Ok(GrowthConstants { beta: bmax * (k as f64).sqrt() * l, b, c, a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_two_levels() {
        let g = growth_constants(1, &IndexStructure::identity(1), 1.0).unwrap();
        assert_eq!((g.b.clone(), g.c.clone()), (vec![1.0], vec![1.0]));
        let g = growth_constants(2, &IndexStructure::identity(2), 2.0).unwrap();
        assert_eq!(g.b[1], 3.0);
        assert!((g.c[1] - 10f64.sqrt()).abs() < 1e-15);
        assert!((g.beta - 3.0 * 2f64.sqrt() * 2.0).abs() < 1e-14);
    }
}
