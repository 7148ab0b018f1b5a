mod common;

use common::*;
use iqr::iqr::{iqr_invertible, iqr_truncation, power_qr_equivalence_check, q_columns, qr_window, LedgerOptions};
use iqr::operator::gallery;
use iqr::operator::oracle::{BandProfile, ColumnOracle};
use iqr::operator::registry::operator_from_id;
use iqr::spectra::{
    finite_section_spectrum, hessenberg_reduce, schur_eigenvalues, smallest_singular_value, tridiagonal_eigenvalues,
};
use iqr::{c64, CMatrix, C64};

fn t2() -> ColumnOracle {
    gallery::mixed_diag_t2(7)
}

#[test]
fn qr_window_reconstructs_banded_block() {
    let t = random_quasi_banded(11, 2);
    let a = t.truncation(8);
    let qr = qr_window(&a, &BandProfile::Offset(2));
    let q = qr.q();
    assert!(max_abs_diff(&matmul(&q, &qr.r), &a) < 1e-12);
    assert!(max_abs_diff(&matmul(&adjoint(&q), &q), &CMatrix::identity(8)) < 1e-12);
    for j in 0..8 {
        assert!(qr.r[(j, j)].im.abs() < 1e-14 && qr.r[(j, j)].re >= 0.0);
        for i in j + 1..8 {
            assert!(qr.r[(i, j)].norm() < 1e-13);
        }
    }
}

#[test]
fn t2_block_converges_to_planted_diagonal() {
    let t = t2();
    let (block, _) = iqr_truncation(&t, 4, 200).unwrap();
    let want = [c64(2.0, 0.0), c64(0.0, 1.5), c64(-1.25, 0.0), c64(0.0, -1.125)];
    for i in 0..4 {
        assert!((block[(i, i)] - want[i]).norm() < 1e-6, "{i}: {}", block[(i, i)]);
        for j in 0..4 {
            if i != j {
                assert!(block[(i, j)].norm() < 1e-6, "({i},{j}) = {}", block[(i, j)]);
            }
        }
    }
}

#[test]
fn q_columns_are_eigenvectors_of_t2() {
    let t = t2();
    let (_, win) = iqr_truncation(&t, 2, 200).unwrap();
    let h = win.window_size;
    let q = q_columns(&win, 1, h).unwrap();
    let tq = t.apply(&q[0], h + 2);
    let mut qq = q[0].clone();
    qq.resize(h + 2, c64(0.0, 0.0));
    let res: f64 = tq.iter().zip(&qq).map(|(a, b)| (a - b * 2.0).norm_sqr()).sum::<f64>().sqrt();
    assert!(res < 1e-5, "residual {res}");

    let (_, win0) = iqr_truncation(&t, 3, 0).unwrap();
    let q0 = q_columns(&win0, 3, 3).unwrap();
    for (j, col) in q0.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            let e = if i == j { 1.0 } else { 0.0 };
            assert!((z - e).norm() < 1e-15);
        }
    }
}

#[test]
fn power_iteration_spans_match_qr_spans() {
    assert!(power_qr_equivalence_check(&t2(), 4, 10).unwrap() <= 1e-8);
    assert!(power_qr_equivalence_check(&random_quasi_banded(3, 1), 3, 5).unwrap() <= 1e-8);
    let d = gallery::diag_harmonic();
    assert!(power_qr_equivalence_check(&d, 3, 6).unwrap() < 1e-14);
}

#[test]
fn column_decay_view_of_banded_operator_is_exact() {
    let t = gallery::schrodinger_t1();
    let nb = t.metadata().unwrap().norm_bound.unwrap();
    let d = t.as_column_decay(nb).unwrap();
    let (want, _) = iqr_truncation(&t, 6, 12).unwrap();
    let (got, _) = iqr_truncation(&d.decay_truncation(1).unwrap(), 6, 12).unwrap();
    assert!(max_abs_diff(&want, &got) < 1e-12);
    // the certified search only pays off for few steps: the ledger grows like (C + 1)^n
    let (want, _) = iqr_truncation(&t, 3, 2).unwrap();
    let (got, ledger, _) = iqr_invertible(&d, 3, 2, 1e-3, &LedgerOptions::default()).unwrap();
    assert!(max_abs_diff(&want, &got) < 1e-12);
    assert!(ledger.final_bound <= 1e-3);
}

#[test]
fn gallery_operators_match_dense_qr() {
    let ids = [
        "schrodinger_t1",
        "bidiagonal_a",
        "blockdiag_t",
        "jacobi_t3",
        "pt_h1:gamma=0.5",
        "toeplitz:a3",
        "laurent:a3",
        "feinberg_zee:g=0.1,seed=4",
        "hatano_nelson:g=0.5,seed=4",
    ];
    for id in ids {
        let t = operator_from_id(id).unwrap();
        let (m, n) = (5, 4);
        let big = t.profile().unwrap().iterate(m, n) + 40;
        let want = giant_reference(&t, big, n);
        let (got, _) = iqr_truncation(&t, m, n).unwrap();
        let want = CMatrix::from_fn(m, m, |i, j| want[(i, j)]);
        let err = max_abs_diff(&want, &got);
        assert!(err < 1e-10, "{id}: {err}");
    }
}

fn random_dense(seed: u64, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| hash_complex(seed, i as u64, j as u64))
}

#[test]
fn hessenberg_reduction_is_a_unitary_similarity() {
    let a = random_dense(5, 6);
    let (h, u) = hessenberg_reduce(&a);
    assert!(max_abs_diff(&matmul(&adjoint(&u), &matmul(&a, &u)), &h) < 1e-12);
    assert!(max_abs_diff(&matmul(&adjoint(&u), &u), &CMatrix::identity(6)) < 1e-12);
    for j in 0..6 {
        for i in j + 2..6 {
            assert!(h[(i, j)].norm() < 1e-13);
        }
    }
}

#[test]
fn schur_eigenvalues_match_characteristic_roots() {
    let a = random_dense(9, 5);
    let got = schur_eigenvalues(&a).unwrap();
    let want = poly_roots(&charpoly(&a));
    assert!(matched_error(&got, &want) < 1e-9);
}

#[test]
fn smallest_singular_value_matches_gram_eigenvalue() {
    let a = random_dense(13, 4);
    let z = c64(0.3, 0.1);
    let s = CMatrix::from_fn(4, 4, |i, j| if i == j { a[(i, j)] - z } else { a[(i, j)] });
    let gram = matmul(&adjoint(&s), &s);
    let lam = hermitian_eigenvalues(&gram).into_iter().fold(f64::INFINITY, f64::min);
    let got = smallest_singular_value(&a, z);
    assert!((got - lam.max(0.0).sqrt()).abs() < 1e-9, "{got} vs {}", lam.sqrt());
}

#[test]
fn finite_sections_of_shift_and_t3() {
    let s = finite_section_spectrum(&gallery::unilateral_shift(), 30).unwrap();
    assert!(s.points.iter().all(|z| z.norm() == 0.0));
    for m in [5, 11, 21] {
        let e = finite_section_spectrum(&gallery::jacobi_t3(), m).unwrap();
        let nearest = e.points.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-10, "m = {m}: {nearest}");
    }
}

#[test]
fn tridiagonal_eigenvalues_match_sturm_bisection() {
    let n = 30;
    let d: Vec<f64> = (0..n).map(|i| 2.0 * hash_unit(21, i as u64, 0)).collect();
    let e: Vec<f64> = (0..n - 1).map(|i| hash_unit(21, i as u64, 1)).collect();
    let got = tridiagonal_eigenvalues(&d, &e);
    let want = sturm_eigenvalues(&d, &e);
    for (a, b) in got.iter().zip(&want) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn window_growth_follows_band_profile() {
    let t = random_quasi_banded(2, 3);
    let (_, win) = iqr_truncation(&t, 4, 5).unwrap();
    assert_eq!(win.window_size, 4 + 3 * 5);
    let zero: C64 = c64(0.0, 0.0);
    assert_eq!(t.entry(10, 6), zero);
}
