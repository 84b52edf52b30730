use adjtele_core::geometry::{
    adjust_destination, clamp_magnitude, proxemic_correction, AdjustmentDirection, Position2, ProxemicZone, RangeKind,
};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Position2> {
    (-20.0f64..20.0, -20.0f64..20.0).prop_map(|(x, y)| Position2::new(x, y))
}

fn direction() -> impl Strategy<Value = AdjustmentDirection> {
    prop_oneof![Just(AdjustmentDirection::Forward), Just(AdjustmentDirection::Backward)]
}

fn range() -> impl Strategy<Value = RangeKind> {
    prop_oneof![Just(RangeKind::Small), Just(RangeKind::Large)]
}

fn rotate(p: Position2, angle: f64) -> Position2 {
    let (s, c) = angle.sin_cos();
    Position2::new(c * p.x - s * p.y, s * p.x + c * p.y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn adjustment_invariants(origin in point(), selected in point(), dir in direction(), m in 0.0f64..6.0, range in range()) {
        prop_assume!(origin.distance(selected) > 1e-3);
        let clamped = clamp_magnitude(origin, selected, dir, m, range);
        prop_assert!(clamped >= 0.0 && clamped <= m && clamped <= range.max_adjustment());
        let adj = adjust_destination(origin, selected, dir, clamped).unwrap();
        prop_assert!((adj.effective_magnitude - clamped).abs() <= 1e-12);

        let u = selected - origin;
        let v = adj.position - origin;
        prop_assert!(u.cross(v).abs() <= 1e-9 * u.norm().max(1.0) * v.norm().max(1.0));
        prop_assert!((adj.position.distance(selected) - clamped).abs() <= 1e-9);

        let before = selected.distance(origin);
        let after = adj.position.distance(origin);
        match dir {
            AdjustmentDirection::Forward => prop_assert!((after - (before + clamped)).abs() <= 1e-9),
            AdjustmentDirection::Backward => {
                prop_assert!((after - (before - clamped)).abs() <= 1e-9);
                // never behind the origin
                prop_assert!(v.dot(u) >= -1e-9);
            }
        }
        if clamped > 0.0 {
            match dir {
                AdjustmentDirection::Forward => prop_assert!(after > before),
                AdjustmentDirection::Backward => prop_assert!(after < before),
            }
        }
    }

    #[test]
    fn backward_clamps_at_origin(origin in point(), selected in point(), extra in 0.0f64..5.0) {
        prop_assume!(origin.distance(selected) > 1e-3);
        let d = origin.distance(selected);
        let adj = adjust_destination(origin, selected, AdjustmentDirection::Backward, d + extra).unwrap();
        prop_assert_eq!(adj.position, origin);
        prop_assert!((adj.effective_magnitude - d).abs() <= 1e-12);
    }

    #[test]
    fn rigid_motion_equivariance(
        origin in point(), selected in point(), partner in point(),
        dir in direction(), m in 0.0f64..4.0, angle in 0.0f64..std::f64::consts::TAU, shift in point(), budget in 0.0f64..3.0,
    ) {
        prop_assume!(origin.distance(selected) > 1e-3);
        let t = |p: Position2| rotate(p, angle) + shift;
        let a = adjust_destination(origin, selected, dir, m).unwrap();
        let b = adjust_destination(t(origin), t(selected), dir, m).unwrap();
        prop_assert!(t(a.position).distance(b.position) <= 1e-9);
        prop_assert!((a.effective_magnitude - b.effective_magnitude).abs() <= 1e-9);

        let c1 = proxemic_correction(origin, selected, partner, budget, ProxemicZone::Personal).unwrap();
        let c2 = proxemic_correction(t(origin), t(selected), t(partner), budget, ProxemicZone::Personal).unwrap();
        prop_assert!(t(c1.position).distance(c2.position) <= 1e-8);
        prop_assert!((c1.magnitude - c2.magnitude).abs() <= 1e-8);
    }

    #[test]
    fn proxemic_correction_is_minimal(origin in point(), selected in point(), partner in point(), budget in 0.0f64..3.0) {
        prop_assume!(origin.distance(selected) > 1e-3);
        let zone = ProxemicZone::Social;
        let c = proxemic_correction(origin, selected, partner, budget, zone).unwrap();
        prop_assert!(c.magnitude <= budget + 1e-12);
        if c.attained {
            prop_assert!(c.position.distance(partner) >= zone.inner_boundary() - 1e-9);
            // a slightly smaller move would not be enough
            if c.magnitude > 1e-6 {
                let less = adjust_destination(origin, selected, AdjustmentDirection::Backward, c.magnitude - 1e-6).unwrap();
                prop_assert!(less.position.distance(partner) < zone.inner_boundary());
            }
        } else {
            // nothing within budget reaches the boundary (1 mm grid)
            let cap = budget.min(origin.distance(selected));
            let steps = (cap * 1000.0) as usize;
            for k in 0..=steps {
                let p = adjust_destination(origin, selected, AdjustmentDirection::Backward, k as f64 / 1000.0).unwrap();
                prop_assert!(p.position.distance(partner) < zone.inner_boundary() + 1e-9);
            }
        }
    }
}
