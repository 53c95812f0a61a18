mod common;

use common::*;
use proptest::prelude::*;
use quasiproj::diffraction::*;
use quasiproj::Vec2;
use std::f64::consts::TAU;

fn lattice5() -> Vec<Vec2> {
    (0..25).map(|i| Vec2::new((i / 5) as f64, (i % 5) as f64)).collect()
}

#[test]
fn square_lattice_matches_dirichlet_closed_form() {
    let m = intensity_map(&lattice5(), TAU, 41).unwrap();
    for iy in 0..41 {
        for ix in 0..41 {
            let q = m.q_at(ix, iy);
            let want = dirichlet(5, q.x) * dirichlet(5, q.y);
            let got = m.get(ix, iy);
            assert!((got - want).abs() <= 1e-9 * want.max(1.0), "({ix},{iy}): {got} vs {want}");
        }
    }
}

#[test]
fn intensity_is_even_and_nonnegative() {
    let pts: Vec<Vec2> = (0..40).map(|i| Vec2::new((i as f64 * 1.7).sin() * 4.0, (i as f64 * 0.9).cos() * 3.0)).collect();
    let m = intensity_map(&pts, 6.0, 61).unwrap();
    let n = m.res - 1;
    for iy in 0..m.res {
        for ix in 0..m.res {
            let a = m.get(ix, iy);
            let b = m.get(n - ix, n - iy);
            assert!(a >= 0.0);
            assert!((a - b).abs() <= 1e-9 * a.max(b).max(1.0));
        }
    }
}

#[test]
fn packing_peaks_show_twelvefold_symmetry() {
    let (c, e) = one_shell(12);
    let delta = quasiproj::cluster::min_intersite_distance(&c);
    let q = quasiproj::packing::greedy_pack(&e, &quasiproj::packing::PackingConfig::new(c, 3.0, delta)).unwrap();
    let m = intensity_map(&q.positions(), 16.0, 129).unwrap();
    let tol = 2.0 * m.step();
    let peaks: Vec<Peak> = peak_list(&m, 0.05).into_iter().filter(|p| p.q.norm() <= m.qmax - tol).collect();
    assert!(peaks.len() > 1);
    assert!(symmetry_score(&peaks, 12, tol) >= 0.9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn translation_invariance(
        raw in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..30),
        sx in -10.0f64..10.0,
        sy in -10.0f64..10.0,
    ) {
        let pts: Vec<Vec2> = raw.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
        let moved: Vec<Vec2> = pts.iter().map(|p| *p + Vec2::new(sx, sy)).collect();
        let a = intensity_map(&pts, 3.0, 21).unwrap();
        let b = intensity_map(&moved, 3.0, 21).unwrap();
        let scale = a.peak_scale();
        for (x, y) in a.intensity.iter().zip(&b.intensity) {
            prop_assert!((x - y).abs() <= 1e-9 * scale);
        }
        let centre = a.get(10, 10);
        prop_assert!((centre - scale).abs() <= 1e-9 * scale);
    }
}
