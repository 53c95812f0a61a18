mod common;

use common::*;
use proptest::prelude::*;
use quasiproj::cluster::min_intersite_distance;
use quasiproj::export::write_packing_csv;
use quasiproj::packing::*;
use quasiproj::spatial::GridIndex;

#[test]
fn candidate_d_values_match_brute_force() {
    let (c, e) = one_shell(8);
    let cfg = PackingConfig::new(c, 3.5, 0.7);
    let l = candidate_list(&e, &cfg).unwrap();
    let mut brute: Vec<(f64, Vec<i64>)> = lattice_box(4, -3, 3)
        .into_iter()
        .filter(|x| x.iter().map(|&v| (v * v) as f64).sum::<f64>() < 3.5 * 3.5)
        .map(|x| {
            let y: Vec<f64> = x.iter().map(|&v| v as f64).collect();
            (plane_distance(e.w1(), e.w2(), &y), x)
        })
        .collect();
    brute.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert_eq!(l.len(), brute.len());
    for (got, (want, _)) in l.iter().zip(&brute) {
        assert!((got.d - want).abs() < 1e-12);
    }
    let mut lifts: Vec<Vec<i64>> = l.iter().map(|c| c.lift.clone()).collect();
    let mut blifts: Vec<Vec<i64>> = brute.into_iter().map(|b| b.1).collect();
    lifts.sort();
    blifts.sort();
    assert_eq!(lifts, blifts);
}

#[test]
fn cluster_members_sit_on_cluster_sites() {
    let (c, e) = one_shell(10);
    let cfg = PackingConfig::new(c.clone(), 3.0, min_intersite_distance(&c));
    let q = greedy_pack(&e, &cfg).unwrap();
    for p in &q.points {
        let parent = &q.points[p.parent];
        assert_eq!(parent.kind, PointKind::Seed);
        assert_eq!(p.d_seed, parent.d_seed);
        match p.kind {
            PointKind::Seed => assert_eq!(q.points[p.parent].pos, p.pos),
            PointKind::ClusterMember => assert!(c.find(p.pos - parent.pos, 1e-9).is_some()),
        }
    }
    assert_eq!(q.outcomes.len(), candidate_list(&e, &cfg).unwrap().len());
    assert_eq!(q.outcomes.iter().filter(|o| **o == Outcome::Seed).count(), q.seeds().count());
}

#[test]
fn first_candidate_is_a_seed() {
    for n in [8, 10, 12] {
        let (c, e) = one_shell(n);
        let cfg = PackingConfig::new(c.clone(), 2.5, min_intersite_distance(&c));
        let q = greedy_pack(&e, &cfg).unwrap();
        assert_eq!(q.points[0].kind, PointKind::Seed);
        assert_eq!(q.points[0].pos, quasiproj::Vec2::ZERO);
        assert_eq!(q.points[0].d_seed, 0.0);
    }
}

#[test]
fn greedy_pass_respects_explicit_order() {
    let (c, e) = one_shell(12);
    let cfg = PackingConfig::new(c, 2.0, 0.9);
    let mut l = candidate_list(&e, &cfg).unwrap();
    let forward = greedy_pack_candidates(&e, &cfg, &l);
    l.reverse();
    let backward = greedy_pack_candidates(&e, &cfg, &l);
    assert!(min_pairwise_distance(&backward).unwrap() >= 0.9 - 1e-9);
    assert_eq!(forward.points, greedy_pack(&e, &cfg).unwrap().points);
}

#[test]
fn min_distance_via_grid_matches_scan() {
    let (c, e) = one_shell(12);
    let q = greedy_pack(&e, &PackingConfig::new(c.clone(), 3.0, min_intersite_distance(&c))).unwrap();
    assert_eq!(min_pairwise_distance(&q).unwrap(), brute_min_pair(&q.positions()));
}

#[test]
fn shell_occupancy_counts_sites() {
    let (c, e) = one_shell(12);
    let q = greedy_pack(&e, &PackingConfig::new(c.clone(), 0.5, min_intersite_distance(&c))).unwrap();
    let index = GridIndex::from_points(1.0, q.positions());
    assert_eq!(q.shell_occupancy(0, &index), vec![12]);
}

fn export(q: &Packing) -> Vec<u8> {
    let mut buf = Vec::new();
    write_packing_csv(&mut buf, q).unwrap();
    buf
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn separation_and_thread_independence(
        n in prop::sample::select(vec![8u32, 10, 12]),
        radius in 1.0f64..2.6,
        delta_scale in 0.5f64..1.5,
        t in prop::collection::vec(-0.5f64..0.5, 6),
        threads in 1usize..5,
    ) {
        let (c, e) = one_shell(n);
        let delta = delta_scale * min_intersite_distance(&c);
        let cfg = PackingConfig::new(c.clone(), radius, delta).with_t(t[..c.k()].to_vec());
        let q = greedy_pack(&e, &cfg).unwrap();
        if q.len() >= 2 {
            let m = min_pairwise_distance(&q).unwrap();
            prop_assert!(m >= delta - 1e-9, "min {} < delta {}", m, delta);
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let other = pool.install(|| greedy_pack(&e, &cfg).unwrap());
        prop_assert_eq!(export(&q), export(&other));
    }
}
