use proptest::prelude::*;
use socnav::context::{ContextLabel, Posterior};
use socnav::objectives::{
    personal_space_cost, right_side_cost, select_objectives, social_goal_cost, traditional_terms, ActivationTable,
    ObjectiveId, ProxemicZones, TraditionalWeights, DEFAULT_DROP_THRESHOLD,
};
use socnav::world::{CorridorAxis, Human, Point2, Pose};

fn pose() -> impl Strategy<Value = Pose> {
    (-5.0f64..5.0, -5.0f64..5.0, -3.2f64..3.2).prop_map(|(x, y, t)| Pose::new(x, y, t))
}

fn poses() -> impl Strategy<Value = Vec<Pose>> {
    prop::collection::vec(pose(), 2..12)
}

fn humans() -> impl Strategy<Value = Vec<Human>> {
    prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0).prop_map(|(x, y)| Human::standing(x, y, 0.0)), 0..5)
}

fn posterior() -> impl Strategy<Value = Posterior> {
    prop::collection::vec(0.0f64..1.0, 6).prop_filter_map("non-zero mass", |v| {
        let s: f64 = v.iter().sum();
        (s > 1e-6).then(|| {
            let mut p = [0.0; 6];
            for (i, x) in v.iter().enumerate() {
                p[i] = x / s;
            }
            Posterior(p)
        })
    })
}

/// A smooth made-up cost field standing in for the grid.
fn field(p: &Pose) -> Result<f64, socnav::world::Infeasible> {
    Ok((p.x.sin() * p.y.cos()).abs())
}

proptest! {
    #[test]
    fn social_objectives_stay_in_range(ps in poses(), hs in humans(), goal in pose()) {
        let z = ProxemicZones::default();
        let axis = CorridorAxis::new(Point2::new(0.0, 0.0), Point2::new(1.0, 0.3), 2.0).unwrap();
        let psc = personal_space_cost(&ps, &hs, &z);
        prop_assert!(psc.is_finite() && (0.0..=hs.len() as f64).contains(&psc));
        let rs = right_side_cost(&ps, &axis);
        prop_assert!((0.0..=1.0).contains(&rs));
        let sg = social_goal_cost(&ps, &goal);
        prop_assert!((0.0..=2.0).contains(&sg));
    }

    #[test]
    fn traditional_terms_are_finite_and_non_negative(ps in poses(), path in poses(), goal in pose()) {
        let t = traditional_terms(&ps, &path, &goal, field).unwrap();
        for v in [t.path, t.goal, t.heading, t.occupancy] {
            prop_assert!(v.is_finite() && v >= 0.0);
        }
        prop_assert!(t.weighted(&TraditionalWeights::default()) >= 0.0);
    }

    #[test]
    fn traditional_terms_ignore_resampling(ps in poses(), path in poses(), goal in pose(), dup in any::<prop::sample::Index>()) {
        // Reorder and repeat interior poses: the endpoint and the worst pose stay.
        let last = *ps.last().unwrap();
        let mut inner: Vec<Pose> = ps[..ps.len() - 1].to_vec();
        inner.reverse();
        inner.push(inner[dup.index(inner.len())]);
        inner.push(last);
        let a = traditional_terms(&ps, &path, &goal, field).unwrap();
        let b = traditional_terms(&inner, &path, &goal, field).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn personal_space_falls_as_people_recede(ps in poses(), hx in -2.0f64..2.0, hy in -2.0f64..2.0, k in 1.05f64..3.0) {
        let h = [Human::standing(hx, hy, 0.0)];
        prop_assume!(ps.iter().all(|p| (p.x - hx).hypot(p.y - hy) > 1e-3));
        let pushed: Vec<Pose> = ps.iter().map(|p| Pose::new(hx + k * (p.x - hx), hy + k * (p.y - hy), p.theta)).collect();
        let z = ProxemicZones::default();
        let (near, far) = (personal_space_cost(&ps, &h, &z), personal_space_cost(&pushed, &h, &z));
        // Far away both underflow to zero; otherwise the drop is strict.
        prop_assert!(far < near || near == 0.0);
    }

    #[test]
    fn selection_keeps_the_traditional_cost(post in posterior(), with_axis in any::<bool>()) {
        let axis = CorridorAxis::new(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), 1.0).unwrap();
        let axis = with_axis.then_some(&axis);
        let table = ActivationTable::default();
        let a = select_objectives(Some(&post), axis, &table, DEFAULT_DROP_THRESHOLD);
        let b = select_objectives(Some(&post), axis, &table, DEFAULT_DROP_THRESHOLD);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.0[0].0, ObjectiveId::TraditionalCost);
        prop_assert!(with_axis || !a.contains(ObjectiveId::RightSide));
    }
}

#[test]
fn no_people_means_traditional_only() {
    let sel = select_objectives(None, None, &ActivationTable::default(), DEFAULT_DROP_THRESHOLD);
    assert_eq!(sel.ids().collect::<Vec<_>>(), vec![ObjectiveId::TraditionalCost]);
    let queue = select_objectives(
        Some(&Posterior::one_hot(ContextLabel::QueueWaiting)),
        None,
        &ActivationTable::default(),
        DEFAULT_DROP_THRESHOLD,
    );
    assert!(queue.contains(ObjectiveId::SocialGoalDistance));
}
