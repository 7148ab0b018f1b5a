use crate::dense::{dot, CMatrix};
use crate::error::{Error, Result};
use crate::scalar::C64;
use crate::spectra::svd::singular_values;

/// Orthonormal basis of a finite-dimensional subspace of ℓ²(ℕ), stored as
/// vectors padded to a common ambient height.
#[derive(Clone, Debug)]
pub struct SubspaceFrame {
    vectors: Vec<Vec<C64>>,
    ambient_height: usize,
}

const GRAM_TOL: f64 = 1e-8;

impl SubspaceFrame {
    pub fn new(vectors: Vec<Vec<C64>>, ambient_height: usize) -> Result<Self> {
        let mut padded = Vec::with_capacity(vectors.len());
        for (k, mut v) in vectors.into_iter().enumerate() {
            if v.len() > ambient_height {
                if v[ambient_height..].iter().any(|z| z.norm() > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "frame vector {k} has support beyond ambient height {ambient_height}"
                    )));
                }
                v.truncate(ambient_height);
            }
            v.resize(ambient_height, C64::new(0.0, 0.0));
            padded.push(v);
        }
        for i in 0..padded.len() {
            for j in 0..=i {
                let g = dot(&padded[i], &padded[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                if (g - want).norm() > GRAM_TOL {
                    return Err(Error::InvalidInput(format!("frame is not orthonormal: gram[{i}][{j}] = {g}")));
                }
            }
        }
        Ok(SubspaceFrame { vectors: padded, ambient_height })
    }

    pub fn from_columns(q: &CMatrix) -> Result<Self> {
        Self::new((0..q.cols()).map(|j| q.col(j).to_vec()).collect(), q.rows())
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn ambient_height(&self) -> usize {
        self.ambient_height
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    fn padded(&self, h: usize) -> CMatrix {
        CMatrix::from_fn(h, self.dim(), |i, j| self.vectors[j].get(i).copied().unwrap_or_default())
    }
}

/// `‖(I − P_N) P_M‖` for orthonormal frames.
pub fn subspace_delta(m: &SubspaceFrame, n: &SubspaceFrame) -> Result<f64> {
    if m.dim() == 0 {
        return Ok(0.0);
    }
    let h = m.ambient_height.max(n.ambient_height);
    let a = m.padded(h);
    let b = n.padded(h);
    let proj = b.matmul(&b.adjoint().matmul(&a));
    let resid = a.sub(&proj);
    let sv = singular_values(&resid);
    Ok(sv.iter().cloned().fold(0.0, f64::max))
}

pub fn subspace_delta_hat(m: &SubspaceFrame, n: &SubspaceFrame) -> Result<f64> {
    Ok(subspace_delta(m, n)?.max(subspace_delta(n, m)?))
}

/// Largest principal angle proxy `asin(min(δ̂, 1))`.
pub fn subspace_angle(m: &SubspaceFrame, n: &SubspaceFrame) -> Result<f64> {
    Ok(subspace_delta_hat(m, n)?.min(1.0).asin())
}

/// `sup_{a ∈ A} dist(a, B)`.
pub fn one_sided_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if b.is_empty() {
        return f64::INFINITY;
    }
    a.iter().map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
}

pub fn hausdorff_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_sided_distance(a, b).max(one_sided_distance(b, a))
}
