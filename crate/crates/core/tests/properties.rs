mod common;

use proptest::prelude::*;

use common::medcouple_oracle;
use skewbox::fences::{FenceParams, McEstimator};
use skewbox::robust::{quantile_sorted, skewness_measures};
use skewbox::{classify_outliers, compute_fences, medcouple, quartiles, FenceMethod, QuantileMethod, Sample};

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![-1e3..1e3f64, (0i32..40).prop_map(|v| v as f64 / 4.0)], 4..80)
}

fn method() -> impl Strategy<Value = FenceMethod> {
    prop::sample::select(FenceMethod::ALL.to_vec())
}

proptest! {
    #[test]
    fn fences_bracket_the_box(v in values(), m in method(), k in 0.1..5.0f64) {
        let s = Sample::new(v).unwrap();
        if let Ok(f) = compute_fences(&s, m, &FenceParams::with_k(k)) {
            let q = quartiles(&s).unwrap();
            prop_assert!(f.lower <= q.q1 && q.q3 <= f.upper, "{f:?} {q:?}");
        }
    }

    #[test]
    fn outliers_are_strictly_outside_and_sorted(v in values(), m in method()) {
        let s = Sample::new(v).unwrap();
        if let Ok(f) = compute_fences(&s, m, &FenceParams::default()) {
            let out = classify_outliers(&s, &f);
            prop_assert!(out.windows(2).all(|w| w[0].value <= w[1].value));
            for o in &out {
                prop_assert!(o.value < f.lower || o.value > f.upper);
                prop_assert_eq!(s.values()[o.index], o.value);
            }
            let inside = s.values().iter().filter(|&&x| x >= f.lower && x <= f.upper).count();
            prop_assert_eq!(inside + out.len(), s.len());
        }
    }

    #[test]
    fn outlier_values_ignore_input_order(mut v in values(), m in method(), rot in 0usize..80) {
        let s = Sample::new(v.clone()).unwrap();
        let r = rot % v.len();
        v.rotate_left(r);
        let t = Sample::new(v).unwrap();
        let p = FenceParams::default();
        match (compute_fences(&s, m, &p), compute_fences(&t, m, &p)) {
            (Ok(f), Ok(g)) => {
                let a: Vec<f64> = classify_outliers(&s, &f).iter().map(|o| o.value).collect();
                let b: Vec<f64> = classify_outliers(&t, &g).iter().map(|o| o.value).collect();
                prop_assert_eq!(a, b);
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn skewness_measures_in_range(v in values()) {
        let s = Sample::new(v).unwrap();
        if let Ok(sk) = skewness_measures(&s) {
            prop_assert!((-1.0..=1.0).contains(&sk.medcouple));
            prop_assert!((-1.0..=1.0).contains(&sk.bowley));
            prop_assert!((-3.5..=3.5).contains(&sk.capped_moment_skew));
        }
    }

    #[test]
    fn medcouple_matches_enumeration(v in prop::collection::vec((0i32..12).prop_map(|v| v as f64), 3..30)) {
        let s = Sample::new(v.clone()).unwrap();
        if let Ok(mc) = medcouple(&s) {
            prop_assert_eq!(mc.to_bits(), medcouple_oracle(&v).to_bits());
        }
    }

    #[test]
    fn quantiles_are_monotone(v in values(), a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let mut sorted = v;
        sorted.sort_by(f64::total_cmp);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for method in [QuantileMethod::Linear, QuantileMethod::Weibull] {
            let x = quantile_sorted(&sorted, lo, method).unwrap();
            let y = quantile_sorted(&sorted, hi, method).unwrap();
            prop_assert!(x <= y);
            prop_assert!(sorted[0] <= x && y <= sorted[sorted.len() - 1]);
        }
    }

    #[test]
    fn fences_are_finite_or_rejected(v in values(), m in method(), half in any::<bool>()) {
        let s = Sample::new(v).unwrap();
        let mc_estimator = if half { McEstimator::HalfMedianRatio } else { McEstimator::Kernel };
        let p = FenceParams { mc_estimator, ..FenceParams::default() };
        if let Ok(f) = compute_fences(&s, m, &p) {
            prop_assert!(f.lower.is_finite() && f.upper.is_finite());
        }
    }
}

#[test]
fn overflowing_half_median_factor_is_an_error() {
    let s = Sample::new(vec![0.0, 0.0, 895.5, -858.1, 0.25]).unwrap();
    let p = FenceParams { mc_estimator: McEstimator::HalfMedianRatio, ..FenceParams::default() };
    let err = compute_fences(&s, FenceMethod::Hubert, &p).unwrap_err();
    assert_eq!(err.to_string(), "hubert: non-finite fence");
}

#[test]
fn reflection_mirrors_equivariant_fences() {
    let v = [0.3, 1.1, 1.2, 2.0, 2.2, 3.7, 4.1, 9.5, 15.0, 0.9, 2.6];
    let s = Sample::new(v.to_vec()).unwrap();
    let r = Sample::new(v.iter().map(|x| -x).collect()).unwrap();
    let p = FenceParams::default();
    for m in [FenceMethod::Tukey, FenceMethod::Kimber, FenceMethod::Hubert, FenceMethod::Walker] {
        let f = compute_fences(&s, m, &p).unwrap();
        let g = compute_fences(&r, m, &p).unwrap();
        assert!((f.lower + g.upper).abs() < 1e-12, "{m}");
        assert!((f.upper + g.lower).abs() < 1e-12, "{m}");
    }
}
