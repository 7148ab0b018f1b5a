mod common;

use common::*;
use iqr::operator::gallery;
use iqr::spectra::SubspaceFrame;
use iqr::towers::{
    delta1_extremal, delta1_invariant_subspace, growth_constants, sigma1_spectrum, z_constant, z_constant_from,
    Delta1Input, GFunction, IndexStructure, Sigma1Input,
};
use iqr::{c64, CMatrix, C64};

fn overlap(u: &[C64], v: &[C64]) -> f64 {
    let n = u.len().max(v.len());
    let at = |x: &[C64], i: usize| x.get(i).copied().unwrap_or(c64(0.0, 0.0));
    (0..n).map(|i| at(u, i).conj() * at(v, i)).sum::<C64>().norm()
}

/// `sin` of the angle between two unit vectors.
fn sin_angle(u: &[C64], v: &[C64]) -> f64 {
    (1.0 - overlap(u, v).powi(2)).max(0.0).sqrt()
}

#[test]
fn delta1_dominant_pair_of_t2() {
    let t = gallery::mixed_diag_t2(7);
    let u = t.metadata().unwrap().eigenvectors.clone().unwrap()[0].clone();
    let n = 10;
    let out = delta1_extremal(&Delta1Input { t, k: 1, rate: 0.8, l: 4.0, n }).unwrap();
    let r = 2f64.powi(-(n as i32));
    assert!((out.eigenvalues.points[0] - c64(2.0, 0.0)).norm() <= r);
    assert!(sin_angle(&out.eigenvectors[0], &u) <= r);
    assert_eq!(out.eigenvalues.radii.as_deref(), Some(&[r][..]));
}

#[test]
fn delta1_two_largest_of_a_diagonal() {
    let t = gallery::diag_values(&[c64(3.0, 0.0), c64(2.0, 0.0), c64(1.0, 0.0)]).unwrap();
    let n = 8;
    let out = delta1_extremal(&Delta1Input { t, k: 2, rate: 0.7, l: 3.0, n }).unwrap();
    let r = 2f64.powi(-(n as i32));
    for (i, want) in [3.0, 2.0].iter().enumerate() {
        assert!((out.eigenvalues.points[i] - want).norm() <= r);
        let mut e = vec![c64(0.0, 0.0); i + 1];
        e[i] = c64(1.0, 0.0);
        assert!(sin_angle(&out.eigenvectors[i], &e) <= r);
    }
}

#[test]
fn delta1_top_eigenvalue_of_t1_matches_sturm() {
    let m = 2000;
    let d: Vec<f64> =
        (1..=m).map(|j| if j <= 10 { 5.0 * (j as f64).sin().powi(2) / (j as f64).sqrt() } else { 0.0 }).collect();
    let e = vec![1.0; m - 1];
    let ev = sturm_eigenvalues(&d, &e);
    let (top, second) = (ev[m - 1], ev[m - 2]);
    let rate = (second / top) * 1.05;
    let t = gallery::schrodinger_t1();
    let l = t.metadata().unwrap().norm_bound.unwrap();
    let n = 6;
    let out = delta1_extremal(&Delta1Input { t, k: 1, rate, l, n }).unwrap();
    assert!((out.eigenvalues.points[0].re - top).abs() <= 2f64.powi(-(n as i32)));
}

#[test]
fn sigma1_points_lie_near_the_spectrum() {
    let planted = [c64(1.0, 0.0), c64(0.5, 0.0), c64(0.25, 0.0)];
    let (t, _) = planted_normal(3, &planted, |j| c64(2f64.powi(-(j as i32)), 0.0));
    let n = 5;
    let (est, report) = sigma1_spectrum(&Sigma1Input { t, g: GFunction::identity(), n, guard: 400 }).unwrap();
    let r = 2f64.powi(-(n as i32));
    // spectrum: the planted values, the tail 2^-j (j >= 4) and 0
    let dist = |z: C64| (0..60).map(|k| (z - 2f64.powi(-k)).norm()).fold(z.norm(), f64::min);
    for z in &est.points {
        assert!(dist(*z) <= r, "{z}");
    }
    assert_eq!(report.radii, vec![r; n as usize]);

    let (est, _) =
        sigma1_spectrum(&Sigma1Input { t: gallery::diag_harmonic(), g: GFunction::identity(), n, guard: 50 }).unwrap();
    for (k, z) in est.points.iter().enumerate() {
        assert!((z - 1.0 / (k + 1) as f64).norm() < 1e-15);
    }
}

#[test]
fn sigma1_rejects_column_decay_input() {
    let t = gallery::diag_harmonic().as_column_decay(1.0).unwrap();
    assert!(sigma1_spectrum(&Sigma1Input { t, g: GFunction::identity(), n: 3, guard: 10 }).is_err());
}

fn frame_matrix(f: &SubspaceFrame, h: usize) -> CMatrix {
    CMatrix::from_fn(h, f.dim(), |i, j| f.vectors()[j].get(i).copied().unwrap_or(c64(0.0, 0.0)))
}

#[test]
fn invariant_subspace_of_diagonal_operators() {
    let t = gallery::diag_values(&[c64(3.0, 0.0), c64(3.0, 0.0), c64(0.5, 0.0)]).unwrap();
    let n = 10;
    let (f, report) = delta1_invariant_subspace(&t, 2, 0.2, 1.0, n).unwrap();
    let h = f.ambient_height();
    let e12 = CMatrix::from_fn(h, 2, |i, j| if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
    assert!(gap_oracle(&frame_matrix(&f, h), &e12) <= 2f64.powi(-(n as i32)));
    assert_eq!(report.radii, vec![2f64.powi(-(n as i32))]);

    let t = gallery::diag_values(&[c64(2.0, 0.0), c64(1.0, 0.0)]).unwrap();
    let (f, _) = delta1_invariant_subspace(&t, 1, 0.55, 1.0, 12).unwrap();
    assert!(sin_angle(&f.vectors()[0], &[c64(1.0, 0.0)]) <= 2f64.powi(-12));
}

#[test]
fn invariant_subspace_of_a_mixed_operator() {
    let d = [c64(3.0, 0.0), c64(3.0, 0.0), c64(1.0, 0.0), c64(0.5, 0.0)];
    let (t, w) = planted_normal(17, &d, |_| c64(0.25, 0.0));
    let n = 10;
    let (f, _) = delta1_invariant_subspace(&t, 2, 0.35, 100.0, n).unwrap();
    let h = f.ambient_height();
    // eigenvectors of W* D W are the columns of W*
    let truth = CMatrix::from_fn(h, 2, |i, j| if i < 4 { w[(j, i)].conj() } else { c64(0.0, 0.0) });
    assert!(gap_oracle(&frame_matrix(&f, h), &truth) <= 2f64.powi(-(n as i32)));
}

#[test]
fn z_constant_behaviour() {
    let t = gallery::mixed_diag_t2(7);
    let zs: Vec<f64> = (1..=4).map(|l| z_constant(&t, l).unwrap()).collect();
    assert!(zs.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{zs:?}");
    assert!(zs.iter().all(|z| z.is_finite() && *z >= 0.0));
    // standard basis eigenvectors need no correction
    let vals = [c64(3.0, 0.0), c64(2.0, 0.0), c64(1.0, 0.0)];
    let vecs: Vec<Vec<C64>> =
        (0..3).map(|i| (0..3).map(|r| c64(if r == i { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    assert!(z_constant_from(&vals, &vecs, 3).unwrap().abs() < 1e-15);
    assert!(z_constant(&gallery::schrodinger_t1(), 1).is_err());
}

#[test]
fn growth_constants_recursion() {
    let g = growth_constants(1, &IndexStructure::identity(1), 2.0).unwrap();
    assert_eq!((g.b.clone(), g.c.clone()), (vec![1.0], vec![1.0]));
    assert_eq!(g.beta, 2.0);
    let g = growth_constants(4, &IndexStructure::identity(4), 1.0).unwrap();
    // B(2) = 1 + sqrt((B(1) + 1)^2), C(2) = sqrt(B(1)^2 + B(2)^2)
    assert!((g.b[1] - 3.0).abs() < 1e-15);
    assert!((g.c[1] - 10f64.sqrt()).abs() < 1e-15);
    assert!(g.b.windows(2).all(|w| w[1] >= w[0]));
    assert!(g.c.windows(2).all(|w| w[1] >= w[0]));
    assert!((g.beta - g.b[3] * 2.0).abs() < 1e-12);
}

#[test]
fn tower_report_serializes_every_field() {
    let (_, report) =
        sigma1_spectrum(&Sigma1Input { t: gallery::diag_harmonic(), g: GFunction::identity(), n: 4, guard: 50 })
            .unwrap();
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    for key in ["algorithm", "inputs", "m_used", "bound_trace", "points", "radii"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["algorithm"], "sigma1_spectrum");
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    let last = v["bound_trace"].as_array().unwrap().last().unwrap();
    assert!(last["bound"].as_f64().unwrap() <= last["target"].as_f64().unwrap());
}
