use proptest::prelude::*;
use socnav::pareto::{dominates, paccet_fitness, select_best, ObjectivePoint, ParetoArchive};

fn points(dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0f64..10.0, dim), 1..max)
}

fn non_dominated(points: &[ObjectivePoint], i: usize) -> bool {
    !points.iter().any(|q| dominates(q, &points[i]))
}

proptest! {
    #[test]
    fn archive_stays_mutually_non_dominated(dim in 2usize..5, raw in points(4, 60)) {
        let mut archive = ParetoArchive::new();
        for v in &raw {
            archive.insert(ObjectivePoint::new(v.iter().cycle().take(dim).copied().collect()));
            let pts = archive.points();
            for a in pts {
                for b in pts {
                    prop_assert!(!dominates(a, b));
                }
            }
        }
    }

    #[test]
    fn bounds_cover_every_insertion(raw in points(3, 40)) {
        let mut archive = ParetoArchive::new();
        for v in &raw {
            archive.insert(ObjectivePoint::new(v.clone()));
        }
        let (lo, hi) = archive.bounds().unwrap();
        for v in &raw {
            for i in 0..3 {
                prop_assert!(lo[i] <= v[i] && v[i] <= hi[i]);
            }
        }
    }

    #[test]
    fn dominance_implies_no_worse_fitness(
        raw in points(3, 30),
        a in prop::collection::vec(0.0f64..10.0, 3),
        delta in prop::collection::vec(0.0f64..3.0, 3),
        bump in 0usize..3,
    ) {
        let archive = ParetoArchive::from_points(&raw.iter().map(|v| ObjectivePoint::new(v.clone())).collect::<Vec<_>>());
        let mut b = a.clone();
        for i in 0..3 {
            b[i] += delta[i];
        }
        b[bump] += 0.5;
        let (pa, pb) = (ObjectivePoint::new(a), ObjectivePoint::new(b));
        prop_assert!(dominates(&pa, &pb));
        prop_assert!(paccet_fitness(&archive, &pa) <= paccet_fitness(&archive, &pb));
    }

    #[test]
    fn fitness_at_least_one_iff_weakly_dominated(raw in points(2, 20), p in prop::collection::vec(0.0f64..10.0, 2)) {
        let archive = ParetoArchive::from_points(&raw.iter().map(|v| ObjectivePoint::new(v.clone())).collect::<Vec<_>>());
        let p = ObjectivePoint::new(p);
        let floor = |v: &ObjectivePoint| -> Vec<f64> { archive.normalize(v).0.iter().map(|x| x.max(1e-9)).collect() };
        let ph = floor(&p);
        let weakly = archive.points().iter().any(|a| floor(a).iter().zip(&ph).all(|(x, y)| x <= y));
        prop_assert_eq!(paccet_fitness(&archive, &p) >= 1.0, weakly);
    }

    #[test]
    fn select_best_is_non_dominated(raw in points(3, 200)) {
        let pts: Vec<ObjectivePoint> = raw.into_iter().map(ObjectivePoint::new).collect();
        let sel = select_best(&pts, &vec![0.0; pts.len()]);
        prop_assert!(non_dominated(&pts, sel.index));
    }

    #[test]
    fn select_best_follows_a_permutation(raw in points(3, 40), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let pts: Vec<ObjectivePoint> = raw.into_iter().map(ObjectivePoint::new).collect();
        let mut order: Vec<usize> = (0..pts.len()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let shuffled: Vec<ObjectivePoint> = order.iter().map(|&i| pts[i].clone()).collect();
        let a = select_best(&pts, &vec![0.0; pts.len()]).index;
        let b = select_best(&shuffled, &vec![0.0; pts.len()]).index;
        // Equal points may trade places; the chosen value may not change.
        prop_assert_eq!(&pts[a], &shuffled[b]);
    }
}
