//! Checks against oracles that share no code with the closed forms:
//! statrs distribution functions, brute-force atom sums, adaptive
//! quadrature and bisection.

use bathtub_core::empirical::ks_distance;
use bathtub_core::gamma_process::{BaseMeasure, GammaProcessDraw, GappParams};
use bathtub_core::models::{Dfr, Ifr, Lcv, Lwb, Mbt, Sbt};
use bathtub_core::quadrature::integrate;
use bathtub_core::{HazardFunction, HazardModel, RandomStream};
use statrs::distribution::{Beta, ContinuousCDF, Exp, Gamma, Normal};

// 0.1% two-sided KS critical value.
fn ks_critical(n: usize) -> f64 {
    1.95 / (n as f64).sqrt()
}

fn samples(n: usize, mut f: impl FnMut() -> f64) -> Vec<f64> {
    (0..n).map(|_| f()).collect()
}

#[test]
fn rng_distributions_match_statrs() {
    let n = 20_000;
    let mut s = RandomStream::new(101);
    let g = Gamma::new(2.5, 1.5).unwrap();
    let xs = samples(n, || s.gamma(2.5, 1.5).unwrap());
    assert!(ks_distance(&xs, |x| g.cdf(x)) < ks_critical(n));

    let b = Beta::new(1.0, 3.0).unwrap();
    let xs = samples(n, || s.beta(1.0, 3.0).unwrap());
    assert!(ks_distance(&xs, |x| b.cdf(x)) < ks_critical(n));

    let e = Exp::new(2.0).unwrap();
    let xs = samples(n, || s.exponential(2.0).unwrap());
    assert!(ks_distance(&xs, |x| e.cdf(x)) < ks_critical(n));

    let z = Normal::new(2.0, 1.0).unwrap();
    let xs = samples(n, || s.normal(2.0, 1.0).unwrap());
    assert!(ks_distance(&xs, |x| z.cdf(x)) < ks_critical(n));

    let xs = samples(n, || s.uniform());
    assert!(ks_distance(&xs, |x| x) < ks_critical(n));
}

#[test]
fn categorical_frequencies() {
    let mut s = RandomStream::new(5);
    let w = [1.0, 3.0, 0.0, 4.0];
    let n = 40_000;
    let mut counts = [0usize; 4];
    for _ in 0..n {
        counts[s.categorical(&w).unwrap()] += 1;
    }
    assert_eq!(counts[2], 0);
    for (c, wi) in counts.iter().zip(w) {
        let p = wi / 8.0;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((*c as f64 / n as f64 - p).abs() <= 4.0 * se + 1e-12);
    }
}

#[test]
fn prior_draw_moments() {
    let params = GappParams::new(3.0, 2.0, 50, BaseMeasure::Exponential { rate: 1.0 }).unwrap();
    let mut s = RandomStream::new(77);
    let reps = 3_000;
    let mut gammas = Vec::new();
    let mut first = Vec::new();
    let mut thetas = Vec::new();
    for _ in 0..reps {
        let d = GammaProcessDraw::sample(&params, &mut s).unwrap();
        gammas.push(d.gamma());
        first.push(d.unscaled_weights()[0]);
        thetas.extend_from_slice(&d.thetas()[..5]);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    // gamma ~ Ga(3, 2): mean 1.5, sd sqrt(3)/2.
    let se = (3.0f64).sqrt() / 2.0 / (reps as f64).sqrt();
    assert!((mean(&gammas) - 1.5).abs() < 4.0 * se);
    // v_1 ~ Beta(1, 3): mean 1/4, sd sqrt(3/80).
    let se = (3.0f64 / 80.0).sqrt() / (reps as f64).sqrt();
    assert!((mean(&first) - 0.25).abs() < 4.0 * se);
    let e = Exp::new(1.0).unwrap();
    assert!(ks_distance(&thetas, |x| e.cdf(x)) < ks_critical(thetas.len()));
}

#[test]
fn normal_base_is_truncated_normal() {
    let base = BaseMeasure::Normal { mean: 0.5, sd: 1.0 };
    let mut s = RandomStream::new(3);
    let n = 20_000;
    let xs = samples(n, || base.sample(&mut s).unwrap());
    let z = Normal::new(0.5, 1.0).unwrap();
    let below = z.cdf(0.0);
    let cdf = |x: f64| (z.cdf(x) - below) / (1.0 - below);
    assert!(xs.iter().all(|x| *x >= 0.0));
    assert!(ks_distance(&xs, cdf) < ks_critical(n));
}

fn small_draw(seed: u64, base: BaseMeasure) -> GammaProcessDraw {
    let params = GappParams::new(2.0, 1.0, 8, base).unwrap();
    GammaProcessDraw::sample(&params, &mut RandomStream::new(seed)).unwrap()
}

#[test]
fn draw_integrals_against_quadrature() {
    let g = small_draw(9, BaseMeasure::Exponential { rate: 1.0 });
    let bps = g.thetas().to_vec();
    for t in [0.05, 0.4, 1.0, 2.5, 7.0] {
        let below = integrate(|u| g.integral_below(u).unwrap(), 0.0, t, &bps, 1e-13);
        let above = integrate(|u| g.integral_above(u).unwrap(), 0.0, t, &bps, 1e-13);
        assert!((g.double_integral_below(t).unwrap() - below).abs() < 1e-11, "t = {t}");
        assert!((g.double_integral_above(t).unwrap() - above).abs() < 1e-11, "t = {t}");
        // Away from atoms the two single integrals partition the mass.
        let total = g.integral_below(t).unwrap() + g.integral_above(t).unwrap();
        assert!((total - g.gamma()).abs() < 1e-12 * g.gamma());
    }
}

fn all_models(seed: u64) -> Vec<HazardModel> {
    let g1 = small_draw(seed, BaseMeasure::Exponential { rate: 1.0 });
    let g2 = small_draw(seed + 1, BaseMeasure::Normal { mean: 2.0, sd: 1.0 });
    vec![
        HazardModel::Ifr(Ifr::new(0.2, g1.clone()).unwrap()),
        HazardModel::Dfr(Dfr::new(0.2, g1.clone()).unwrap()),
        HazardModel::Lwb(Lwb::new(0.2, 0.8, g1.clone()).unwrap()),
        HazardModel::Sbt(Sbt::new(0.2, g1.clone(), g2.clone()).unwrap()),
        HazardModel::Mbt(Mbt::new(0.3, Dfr::new(0.2, g1.clone()).unwrap(), Ifr::new(0.5, g2).unwrap()).unwrap()),
        HazardModel::Lcv(Lcv::new(0.7, -0.5, g1).unwrap()),
    ]
}

/// Hazards written straight from the atom sums.
fn brute_hazard(model: &HazardModel, t: f64) -> f64 {
    let inc = |g: &GammaProcessDraw, t: f64| g.atoms().filter(|(th, _)| *th <= t).map(|(_, w)| w).sum::<f64>();
    let dec = |g: &GammaProcessDraw, t: f64| g.atoms().filter(|(th, _)| *th > t).map(|(_, w)| w).sum::<f64>();
    match model {
        HazardModel::Ifr(m) => m.lambda0() + inc(m.draw(), t),
        HazardModel::Dfr(m) => m.lambda0() + dec(m.draw(), t),
        HazardModel::Lwb(m) => {
            let a = m.a();
            let g = m.draw();
            let s = if t < a {
                g.atoms().filter(|(th, _)| *th < a - t).map(|(_, w)| w).sum::<f64>()
            } else {
                inc(g, t - a)
            };
            m.lambda0() + s
        }
        HazardModel::Sbt(m) => m.lambda0() + dec(m.early(), t) + inc(m.late(), t),
        HazardModel::Mbt(m) => {
            let (d, i) = (m.dfr(), m.ifr());
            let sd = (-HazardFunction::cum_hazard(d, t)).exp();
            let si = (-HazardFunction::cum_hazard(i, t)).exp();
            let fd = (d.lambda0() + dec(d.draw(), t)) * sd;
            let fi = (i.lambda0() + inc(i.draw(), t)) * si;
            (m.pi() * fd + (1.0 - m.pi()) * fi) / (m.pi() * sd + (1.0 - m.pi()) * si)
        }
        HazardModel::Lcv(m) => {
            let log = m.lambda0().ln()
                + m.w0() * t
                + m.draw().atoms().map(|(th, w)| w * (t - th).max(0.0)).sum::<f64>();
            log.exp()
        }
    }
}

#[test]
fn hazards_match_atom_sums() {
    for (seed, model) in all_models(21).into_iter().enumerate() {
        let mut s = RandomStream::new(seed as u64);
        for _ in 0..200 {
            let t = s.uniform() * 6.0;
            let h = HazardFunction::hazard(&model, t);
            let want = brute_hazard(&model, t);
            assert!((h - want).abs() <= 1e-12 * want.max(1.0), "{model} at {t}: {h} vs {want}");
        }
    }
}

#[test]
fn cum_hazards_match_quadrature_of_brute_hazard() {
    for model in all_models(31) {
        let bps = model.breakpoints();
        for t in [0.01, 0.3, 0.8, 1.7, 3.0, 6.0] {
            let q = integrate(|u| brute_hazard(&model, u), 0.0, t, &bps, 1e-13);
            let c = HazardFunction::cum_hazard(&model, t);
            assert!((c - q).abs() <= 1e-10 * q.max(1.0), "{model} at {t}: {c} vs {q}");
        }
    }
}

fn bisect(model: &HazardModel, x: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    while HazardFunction::cum_hazard(model, hi) < x {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if HazardFunction::cum_hazard(model, mid) < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[test]
fn inversion_matches_bisection() {
    for model in all_models(41) {
        for x in [0.05, 0.5, 1.0, 2.0, 4.0] {
            if x >= model.cum_hazard_limit() {
                continue;
            }
            let t = model.invert(x).time().unwrap();
            let want = bisect(&model, x);
            assert!((t - want).abs() <= 1e-9 * want.max(1.0), "{model} at {x}: {t} vs {want}");
        }
    }
}

#[test]
fn sampled_failure_times_fit_survival() {
    let n = 5_000;
    for (i, model) in all_models(51).into_iter().enumerate() {
        let mut s = RandomStream::new(600 + i as u64);
        let xs = samples(n, || model.sample_failure(&mut s).time().unwrap_or(f64::INFINITY));
        let limit = model.cum_hazard_limit();
        let d = ks_distance(&xs, |x| {
            if x.is_finite() {
                1.0 - HazardFunction::survival(&model, x)
            } else {
                1.0 - (-limit).exp()
            }
        });
        assert!(d < ks_critical(n), "{model}: {d}");
    }
}
