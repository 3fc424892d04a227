use bathtub_core::empirical::ks_distance;
use bathtub_core::inference::log_likelihood;
use bathtub_core::models::{Dfr, Ifr, Lcv, Lwb, Mbt, Sbt};
use bathtub_core::{Dataset, GammaProcessDraw, HazardFunction, HazardModel, Record};
use proptest::prelude::*;

fn draw() -> impl Strategy<Value = GammaProcessDraw> {
    prop::collection::vec((0.0f64..5.0, 0.01f64..2.0), 1..8)
        .prop_map(|atoms| GammaProcessDraw::from_atoms(&atoms).unwrap())
}

fn model() -> impl Strategy<Value = HazardModel> {
    (0usize..6, draw(), draw(), 0.01f64..2.0, 0.0f64..3.0, 0.05f64..1.0, -3.0f64..1.0).prop_map(
        |(kind, g1, g2, l0, a, pi, w0)| match kind {
            0 => HazardModel::Ifr(Ifr::new(l0, g1).unwrap()),
            1 => HazardModel::Dfr(Dfr::new(l0, g1).unwrap()),
            2 => HazardModel::Lwb(Lwb::new(l0, a, g1).unwrap()),
            3 => HazardModel::Sbt(Sbt::new(l0, g1, g2).unwrap()),
            4 => HazardModel::Mbt(Mbt::new(pi, Dfr::new(l0, g1).unwrap(), Ifr::new(l0, g2).unwrap()).unwrap()),
            _ => HazardModel::Lcv(Lcv::new(l0, w0, g1).unwrap()),
        },
    )
}

fn records() -> impl Strategy<Value = Vec<Record>> {
    prop::collection::vec((0.01f64..3.0, any::<bool>()), 1..20)
        .prop_map(|v| v.into_iter().map(|(t, obs)| Record { time: t, observed: obs }).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cum_hazard_monotone_from_zero(m in model(), mut ts in prop::collection::vec(0.0f64..10.0, 2..30)) {
        prop_assert_eq!(HazardFunction::cum_hazard(&m, 0.0), 0.0);
        ts.sort_by(f64::total_cmp);
        let cs: Vec<f64> = ts.iter().map(|t| HazardFunction::cum_hazard(&m, *t)).collect();
        for w in cs.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12 * w[0].abs().max(1.0), "{} > {}", w[0], w[1]);
        }
    }

    #[test]
    fn inversion_round_trip(m in model(), frac in 1e-6f64..1.0) {
        let top = HazardFunction::cum_hazard(&m, 10.0);
        let x = frac * top;
        let t = m.invert(x).time().expect("target below Lambda(10) is reachable");
        prop_assert!(t <= 10.0 * (1.0 + 1e-12));
        let back = HazardFunction::cum_hazard(&m, t);
        prop_assert!((back - x).abs() <= 1e-9 * x.max(1.0), "{} vs {}", back, x);
    }

    #[test]
    fn beyond_limit_is_infinite(m in model()) {
        let limit = m.cum_hazard_limit();
        if limit.is_finite() {
            prop_assert!(m.invert(limit * 1.01 + 1e-9).is_infinite());
        }
    }

    #[test]
    fn ks_invariant_under_monotone_maps(xs in prop::collection::vec(0.0f64..1.0, 1..60)) {
        let d = ks_distance(&xs, |x| x);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 2.0).collect();
        let e = ks_distance(&ys, |y| (y - 2.0) / 3.0);
        prop_assert!((d - e).abs() < 1e-12);
    }

    #[test]
    fn likelihood_factorises(m in model(), a in records(), b in records()) {
        let da = Dataset::with_censoring_times(a).unwrap();
        let db = Dataset::with_censoring_times(b).unwrap();
        let joint = log_likelihood(&m, &da.concat(&db).unwrap()).unwrap();
        let sum = log_likelihood(&m, &da).unwrap() + log_likelihood(&m, &db).unwrap();
        if sum.is_finite() {
            prop_assert!((joint - sum).abs() <= 1e-10 * sum.abs().max(1.0));
        } else {
            prop_assert_eq!(joint, sum);
        }
    }

    #[test]
    fn likelihood_non_increasing_in_tau(m in model(), recs in records(), extra in 0.0f64..5.0) {
        let tau = 3.0;
        let lo = log_likelihood(&m, &Dataset::new(recs.clone(), Some(tau)).unwrap()).unwrap();
        let hi = log_likelihood(&m, &Dataset::new(recs, Some(tau + extra)).unwrap()).unwrap();
        prop_assert!(hi <= lo + 1e-12 * lo.abs().max(1.0));
    }
}
