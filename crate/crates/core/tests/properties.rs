//! Randomized invariants of the exact arithmetic and the frame engines.

use proptest::prelude::*;

use frame_forge::wavelet::{calderon, tq};
use frame_forge::{
    Cval, Dyadic, Interval, LineSet, Piece, StepFunction, DEFAULT_WINDOW_EXP as W,
};

fn arb_dyadic() -> impl Strategy<Value = Dyadic> {
    (-1024i64..1024, 0u32..=6).prop_map(|(num, exp)| Dyadic::new(num, exp))
}

/// Union of cells of the 2^{-3} grid inside ±[1/4, 4).
fn arb_grid_set() -> impl Strategy<Value = LineSet> {
    proptest::collection::vec(any::<bool>(), 60).prop_map(|bits| {
        let mut ivs = Vec::new();
        for (i, bit) in bits.iter().enumerate() {
            if !bit {
                continue;
            }
            let k = if i < 30 { i as i64 + 2 } else { -(i as i64 - 30) - 3 };
            ivs.push(Interval {
                a: Dyadic::new(k, 3),
                b: Dyadic::new(k + 1, 3),
            });
        }
        LineSet::from_intervals(W, ivs).unwrap()
    })
}

fn arb_grid_fn() -> impl Strategy<Value = StepFunction> {
    (
        arb_grid_set(),
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 60),
    )
        .prop_map(|(set, vals)| {
            let pieces = set
                .intervals()
                .iter()
                .zip(vals)
                .map(|(&iv, (re, im))| Piece {
                    iv,
                    v: Cval::new(re, im),
                })
                .collect();
            StepFunction::from_pieces(Dyadic::ZERO, W, pieces).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dyadic_order_matches_f64(a in arb_dyadic(), b in arb_dyadic()) {
        prop_assert_eq!(a < b, a.to_f64() < b.to_f64());
        prop_assert_eq!(a == b, a.to_f64() == b.to_f64());
        let m = Dyadic::midpoint(a, b);
        prop_assert_eq!(m.to_f64(), (a.to_f64() + b.to_f64()) / 2.0);
    }

    #[test]
    fn dyadic_add_sub_round_trip(a in arb_dyadic(), b in arb_dyadic()) {
        prop_assert_eq!((a + b) - b, a);
        prop_assert_eq!(-(-a), a);
    }

    #[test]
    fn set_algebra_de_morgan(a in arb_grid_set(), b in arb_grid_set()) {
        let lhs = a.union(&b).unwrap().complement_in_window();
        let rhs = a.complement_in_window().intersect(&b.complement_in_window()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn set_measure_inclusion_exclusion(a in arb_grid_set(), b in arb_grid_set()) {
        let both = a.union(&b).unwrap().measure() + a.intersect(&b).unwrap().measure();
        prop_assert_eq!(both, a.measure() + b.measure());
    }

    #[test]
    fn addition_is_pointwise(f in arb_grid_fn(), g in arb_grid_fn(), x in arb_dyadic()) {
        let sum = f.add(&g).unwrap();
        let lhs = sum.eval(x);
        let rhs = f.eval(x) + g.eval(x);
        prop_assert!((lhs - rhs).norm() <= 1e-12);
    }

    #[test]
    fn weight_is_real_and_nonnegative(f in arb_grid_fn()) {
        if f.is_zero() {
            return Ok(());
        }
        for p in f.weight().unwrap().pieces() {
            let v = p.v.to_complex();
            prop_assert!(v.im.abs() <= 1e-12);
            prop_assert!(v.re >= -1e-12);
        }
    }

    #[test]
    fn norm_equals_weight_integral(f in arb_grid_fn()) {
        if f.is_zero() {
            return Ok(());
        }
        let via_weight = f.weight().unwrap().integral().re;
        prop_assert!((f.norm_sq() - via_weight).abs() <= 1e-12);
    }

    #[test]
    fn calderon_is_dilation_invariant(f in arb_grid_fn()) {
        if f.is_zero() {
            return Ok(());
        }
        let (d0, _) = calderon(&f).unwrap();
        let (d1, _) = calderon(&f.dilate_inf(1).unwrap()).unwrap();
        prop_assert!((d0 - d1).abs() <= 1e-12);
    }

    #[test]
    fn tq_vacuous_beyond_support_diameter(f in arb_grid_fn()) {
        if f.is_zero() {
            return Ok(());
        }
        // supp f ⊆ ±[1/4, 4): for |q| > 8 the translated supports never meet
        let (dev, witness) = tq(&f, 11).unwrap();
        prop_assert_eq!(dev, 0.0);
        prop_assert!(witness.is_none());
    }
}
