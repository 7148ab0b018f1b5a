use crate::dense::dot;
use crate::error::{Error, Result};
use crate::operator::oracle::ColumnOracle;
use crate::scalar::C64;
use crate::spectra::eigen::eig_order;

const DEPENDENCE_TOL: f64 = 1e-12;

/// `Z(T, {e_1..e_l})` for an operator with planted orthonormal eigenvectors.
///
/// Each `e_i` is reduced against the earlier vectors group by group (descending
/// eigenvalue modulus) until it has a component in some eigenspace not already
/// spanned there, then scaled so that component has unit norm; `Z² = Σ(||ξ̃_i||² − 1)`.
pub fn z_constant(t: &ColumnOracle, l: usize) -> Result<f64> {
    let unsupported = |why: &str| Error::UnknownOperator { id: t.name().to_string(), reason: why.to_string() };
    let meta = t.metadata().ok_or_else(|| unsupported("no metadata"))?;
    let vecs = meta.eigenvectors.as_ref().ok_or_else(|| unsupported("no planted eigenvectors"))?;
    let vals = meta.eigenvalues();
    if vals.len() != vecs.len() {
        return Err(unsupported("eigenvector count does not match multiplicities"));
    }
    z_constant_from(&vals, vecs, l)
}

/// As [`z_constant`] from explicit eigenpairs (orthonormal eigenvectors).
pub fn z_constant_from(values: &[C64], vectors: &[Vec<C64>], l: usize) -> Result<f64> {
    let height = vectors.iter().map(|v| v.len()).max().unwrap_or(0).max(l);
    let pad = |v: &[C64]| {
        let mut w = v.to_vec();
        w.resize(height, C64::new(0.0, 0.0));
        w
    };
    // group eigenvectors by eigenvalue, groups in canonical order
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| eig_order(&values[a], &values[b]));
    let mut groups: Vec<(C64, Vec<Vec<C64>>)> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some((z, g)) if *z == values[i] => g.push(pad(&vectors[i])),
            _ => groups.push((values[i], vec![pad(&vectors[i])])),
        }
    }
    let coords = |x: &[C64], g: usize| -> Vec<C64> { groups[g].1.iter().map(|q| dot(q, x)).collect() };
    // processed vectors with their pivot group and orthonormal pivot coordinates
    let mut done: Vec<(Vec<C64>, usize, Vec<C64>)> = Vec::new();
    let mut z2 = 0.0;
    for i in 0..l {
        let mut xi = vec![C64::new(0.0, 0.0); height];
        xi[i] = C64::new(1.0, 0.0);
        let mut pivot = None;
        for g in 0..groups.len() {
            let comp = coords(&xi, g);
            let mut res = comp.clone();
            for (v, pg, u) in done.iter().filter(|d| d.1 == g) {
                debug_assert_eq!(*pg, g);
                let a = dot(u, &comp);
                for (r, uu) in res.iter_mut().zip(u) {
                    *r -= a * uu;
                }
                for (x, vv) in xi.iter_mut().zip(v) {
                    *x -= a * vv;
                }
            }
            let nr = res.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nr > DEPENDENCE_TOL {
                for x in xi.iter_mut() {
                    *x /= nr;
                }
                let u: Vec<C64> = res.iter().map(|z| z / nr).collect();
                pivot = Some((g, u));
                break;
            }
        }
        let (g, u) = pivot.ok_or_else(|| {
            Error::InvalidInput(format!("spectral components of e_1..e_{} are linearly dependent", i + 1))
        })?;
        z2 += xi.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0;
        done.push((xi, g, u));
    }
    Ok(z2.max(0.0).sqrt())
}
