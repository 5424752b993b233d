//! Property tests for the model, statistics and embedding invariants.

mod common;

use proptest::prelude::*;

use common::*;
use kpartite::linalg::HermitianMatrix;
use kpartite::matrices::{build_g, observe, ModelKind};
use kpartite::model::{
    apply_cycle, canonical_representative, distance_omega, distance_theta, find_cycle, is_equivalent,
    Assignment, EquivalenceMode,
};
use kpartite::sdp::{extract, real_embed};
use kpartite::statistics::{score_with, separation, ScoreKind, SeparationKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn colors(max_n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..k, 2..=max_n)
}

/// Three color vectors of one common length.
fn triple(max_n: usize, k: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<usize>)> {
    (2..=max_n).prop_flat_map(move |n| {
        (
            prop::collection::vec(0..k, n),
            prop::collection::vec(0..k, n),
            prop::collection::vec(0..k, n),
        )
    })
}

/// `x` together with a rearrangement of it.
fn same_counts(max_n: usize, k: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    colors(max_n, k).prop_flat_map(|x| {
        let y = Just(x.clone()).prop_shuffle();
        (Just(x), y)
    })
}

proptest! {
    #[test]
    fn distance_omega_is_a_metric((a, b, c) in triple(20, 4)) {
        let p = real_palette(&[0.0, 1.0, 2.0, 3.0]);
        let (x, y, z) = (assignment(&a, &p), assignment(&b, &p), assignment(&c, &p));
        let d = |u: &Assignment, v: &Assignment| distance_omega(u, v).unwrap();
        prop_assert_eq!(d(&x, &x), 0);
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert_eq!(d(&x, &y) == 0, a == b);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
    }

    #[test]
    fn distance_theta_matches_hamming((a, b, _c) in triple(20, 3)) {
        let p = roots_palette(3);
        let hamming = a.iter().zip(&b).filter(|(u, v)| u != v).count();
        prop_assert_eq!(distance_theta(&assignment(&a, &p), &assignment(&b, &p)).unwrap(), hamming);
    }

    #[test]
    fn equivalence_is_an_equivalence_relation((a, b, c) in triple(8, 3), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let p = roots_palette(3);
        for mode in [EquivalenceMode::Partition, EquivalenceMode::Phase] {
            let (x, y, z) = (assignment(&a, &p), assignment(&b, &p), assignment(&c, &p));
            let eq = |u: &Assignment, v: &Assignment| is_equivalent(u, v, mode).unwrap();
            prop_assert!(eq(&x, &x));
            prop_assert_eq!(eq(&x, &y), eq(&y, &x));
            if eq(&x, &y) && eq(&y, &z) {
                prop_assert!(eq(&x, &z));
            }
            let cx = canonical_representative(&x, mode).unwrap();
            prop_assert_eq!(eq(&x, &y), cx == canonical_representative(&y, mode).unwrap());
        }
        let relabeled: Vec<usize> = a.iter().map(|&i| perm[i]).collect();
        prop_assert!(is_equivalent(&assignment(&a, &p), &assignment(&relabeled, &p), EquivalenceMode::Partition).unwrap());
        let rotated: Vec<usize> = a.iter().map(|&i| (i + perm[0]) % 3).collect();
        prop_assert!(is_equivalent(&assignment(&a, &p), &assignment(&rotated, &p), EquivalenceMode::Phase).unwrap());
    }

    #[test]
    fn cycle_walk_terminates((a, b) in same_counts(24, 5)) {
        let p = real_palette(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let x = assignment(&a, &p);
        let mut y = assignment(&b, &p);
        let mut steps = 0;
        while distance_omega(&x, &y).unwrap() > 0 {
            let c = find_cycle(&x, &y).unwrap();
            prop_assert!(c.len() >= 2 && c.len() <= 5);
            let before = distance_omega(&x, &y).unwrap();
            y = apply_cycle(&y, &c).unwrap();
            prop_assert_eq!(before - distance_omega(&x, &y).unwrap(), c.len());
            prop_assert_eq!(y.group_sizes(), x.group_sizes());
            steps += 1;
        }
        prop_assert!(steps <= a.len() / 2);
    }

    #[test]
    fn embedding_round_trips(n in 1usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = assignment(&vec![0; n], &roots_palette(3));
        let v = observe(&y, ModelKind::GueU, 1.3, &mut rng).unwrap();
        let h: &HermitianMatrix = v.hermitian().unwrap();
        let back = extract(&real_embed(h).unwrap()).unwrap();
        prop_assert_eq!(back.re(), h.re());
        prop_assert_eq!(back.im(), h.im());
    }

    #[test]
    fn l_and_u_are_invariant_under_vertex_permutation((a, b) in same_counts(10, 3), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let p = real_palette(&[0.0, 1.0, 2.0]);
        let mut order: Vec<usize> = (0..a.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let pa: Vec<usize> = order.iter().map(|&i| a[i]).collect();
        let pb: Vec<usize> = order.iter().map(|&i| b[i]).collect();
        for kind in [SeparationKind::L, SeparationKind::U] {
            let s1 = separation(&assignment(&a, &p), &assignment(&b, &p), kind).unwrap().mean_gap;
            let s2 = separation(&assignment(&pa, &p), &assignment(&pb, &p), kind).unwrap().mean_gap;
            prop_assert_eq!(s1, s2);
        }
        let u = separation(&assignment(&a, &p), &assignment(&b, &p), SeparationKind::U).unwrap().mean_gap;
        let l = separation(&assignment(&a, &p), &assignment(&b, &p), SeparationKind::L).unwrap().mean_gap;
        prop_assert_eq!(2.0 * u, l);
    }

    #[test]
    fn d_equals_norm_minus_twice_f(x in colors(12, 3), truth in colors(12, 3), seed in any::<u64>()) {
        let n = x.len().min(truth.len());
        let p = real_palette(&[0.0, 1.0, -1.5]);
        let (x, y) = (assignment(&x[..n], &p), assignment(&truth[..n], &p));
        let obs = observe(&y, ModelKind::VectorT, 0.7, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let f = score_with(&x, &obs, ScoreKind::F).unwrap().value;
        let d = score_with(&x, &obs, ScoreKind::D).unwrap().value;
        let g = build_g(&x).unwrap();
        let norm = g.inner(&g);
        prop_assert!((d - (norm - 2.0 * f)).abs() <= 1e-9 * (1.0 + norm + f.abs()));
        let t = obs.real().unwrap();
        prop_assert!((f - g.inner(t)).abs() <= 1e-9 * (1.0 + f.abs()));
    }
}

/// `|C(y)| = k!/(k−m)!` for `m` used colors, `|θ(y)| = k`.
#[test]
fn equivalence_class_sizes() {
    let k = 3;
    let p = roots_palette(k);
    let all: Vec<Assignment> = all_colorings(5, k).iter().map(|c| assignment(c, &p)).collect();
    for y in all.iter().step_by(7) {
        let used = y.group_sizes().iter().filter(|&&s| s > 0).count();
        let falling: usize = (0..used).map(|i| k - i).product();
        let part = all.iter().filter(|x| is_equivalent(x, y, EquivalenceMode::Partition).unwrap()).count();
        let phase = all.iter().filter(|x| is_equivalent(x, y, EquivalenceMode::Phase).unwrap()).count();
        assert_eq!(part, falling, "{y}");
        assert_eq!(phase, k, "{y}");
    }
}
