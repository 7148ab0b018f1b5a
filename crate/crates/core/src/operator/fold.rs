use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operator::oracle::{BandProfile, ColumnOracle, Structure};
use crate::scalar::C64;

/// Interleaving `Z -> N`: `0 -> 1`, `z > 0 -> 2z`, `z < 0 -> 2|z| + 1`.
pub fn fold_z_to_n(z: i64) -> usize {
    match z {
        0 => 1,
        z if z > 0 => 2 * z as usize,
        z => 2 * z.unsigned_abs() as usize + 1,
    }
}

/// Inverse of [`fold_z_to_n`].
pub fn unfold_n_to_z(n: usize) -> i64 {
    assert!(n >= 1, "basis of N starts at 1");
    if n == 1 {
        0
    } else if n % 2 == 0 {
        (n / 2) as i64
    } else {
        -(((n - 1) / 2) as i64)
    }
}

/// Folds a banded operator on `l2(Z)`, given by `entry(i, j) = <T e_j, e_i>` and vanishing
/// for `|i - j| > b`, into a quasi-banded oracle on `l2(N)` with `f(n) = n + 2b + 1`.
pub fn fold_operator(
    name: impl Into<String>,
    b: i64,
    entry: impl Fn(i64, i64) -> C64 + Send + Sync + 'static,
) -> Result<ColumnOracle> {
    if b < 0 {
        return Err(Error::InvalidInput(format!("bandwidth {b} < 0")));
    }
    let entry = Arc::new(entry);
    let width = (2 * b + 1) as usize;
    let oracle = ColumnOracle::new(name, Structure::QuasiBanded(BandProfile::Offset(width)), move |j, h| {
        let z = unfold_n_to_z(j);
        let mut col = vec![C64::new(0.0, 0.0); h];
        for zi in (z - b)..=(z + b) {
            let i = fold_z_to_n(zi);
            if i <= h {
                col[i - 1] = entry(zi, z);
            }
        }
        col
    });
    Ok(oracle.with_upper_bandwidth(width))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_values() {
        assert_eq!(fold_z_to_n(0), 1);
        assert_eq!(fold_z_to_n(1), 2);
        assert_eq!(fold_z_to_n(-1), 3);
        assert_eq!(fold_z_to_n(-5), 11);
        for n in 1..500 {
            assert_eq!(fold_z_to_n(unfold_n_to_z(n)), n);
        }
    }

    #[test]
    fn folded_bilateral_shift() {
        let u =
            fold_operator("u1", 1, |i, j| if i == j + 1 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).unwrap();
        assert_eq!(u.entry(fold_z_to_n(1), fold_z_to_n(0)), C64::new(1.0, 0.0));
        assert_eq!(u.profile().unwrap().apply(10), 13);
        assert!(u.check_band(200, 6).is_ok());
        assert!(fold_operator("bad", -1, |_, _| C64::new(0.0, 0.0)).is_err());
    }
}
