//! Self-check suite: inversion round trips, quadrature consistency,
//! goodness of fit, truncation mass, model identities, shape invariants,
//! likelihood reductions, Kaplan-Meier agreement and defective tails.
//!
//! Each check reports a measured discrepancy against a fixed tolerance.
//! Oracles here (quadrature, counting ECDFs, direct sums) are computed
//! independently of the closed forms they check.

use std::fmt;

use crate::demo;
use crate::empirical::{kaplan_meier, ks_distance};
use crate::gamma_process::{expected_tail_mass, GammaProcessDraw};
use crate::inference::{log_likelihood, Dataset, Record};
use crate::models::{simulate_dataset, Dfr, HazardFunction, HazardModel, Ifr, Lcv, SampleOutcome};
use crate::quadrature::integrate;
use crate::rng::RandomStream;
use crate::Result;

pub const DEFAULT_SEED: u64 = 20_240_601;

pub const ROUND_TRIP_TARGETS: usize = 10_000;
pub const ROUND_TRIP_TOL: f64 = 1e-9;
pub const QUADRATURE_POINTS: usize = 20;
pub const QUADRATURE_TOL: f64 = 1e-6;
pub const KS_SAMPLES: usize = 10_000;
pub const KS_TOL: f64 = 0.025;
pub const TRUNCATION_REPLICATES: usize = 1_000;
pub const IDENTITY_POINTS: usize = 1_000;
pub const IDENTITY_TOL: f64 = 1e-12;
pub const CONVEXITY_TOL: f64 = 1e-9;
pub const MLE_TOL: f64 = 1e-6;
pub const KM_SAMPLES: usize = 200;
pub const LCV_CLOSED_FORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    pub seed: u64,
    /// Multiplies every tolerance; values below one tighten the suite.
    pub tolerance_scale: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            tolerance_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(criterion: u8, name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] C{:<2} {:<44} measured {:>12.4e}  tol {:>10.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.measured,
            self.tolerance
        )
    }
}

struct Ctx {
    root: RandomStream,
    scale: f64,
    models: Vec<HazardModel>,
    g1: GammaProcessDraw,
}

impl Ctx {
    fn new(opts: &ValidationOptions) -> Result<Self> {
        let (g1, g2) = demo::draws(opts.seed)?;
        let models = demo::MODEL_NAMES
            .iter()
            .map(|n| demo::model(n, &g1, &g2))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            root: RandomStream::new(opts.seed),
            scale: opts.tolerance_scale,
            models,
            g1,
        })
    }

    fn stream(&self, id: u64) -> RandomStream {
        self.root.split(1000 + id)
    }

    fn check(&self, criterion: u8, name: impl Into<String>, measured: f64, tol: f64) -> CheckResult {
        CheckResult::new(criterion, name, measured, tol * self.scale)
    }
}

/// Run every check with the given options.
pub fn run_all(opts: &ValidationOptions) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for criterion in 1..=9 {
        out.extend(run_criterion(criterion, opts)?);
    }
    Ok(out)
}

/// Run the checks belonging to one numbered criterion (1 to 9).
pub fn run_criterion(criterion: u8, opts: &ValidationOptions) -> Result<Vec<CheckResult>> {
    let ctx = Ctx::new(opts)?;
    Ok(match criterion {
        1 => round_trip(&ctx),
        2 => quadrature(&ctx),
        3 => goodness_of_fit(&ctx),
        4 => truncation_mass(&ctx)?,
        5 => identities(&ctx),
        6 => shapes(&ctx),
        7 => likelihood(&ctx)?,
        8 => kaplan_meier_checks(&ctx)?,
        9 => defective(&ctx)?,
        _ => Vec::new(),
    })
}

fn round_trip(ctx: &Ctx) -> Vec<CheckResult> {
    ctx.models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut s = ctx.stream(10 + i as u64);
            let top = HazardFunction::cum_hazard(m, demo::T_MAX);
            let worst = (0..ROUND_TRIP_TARGETS)
                .map(|_| {
                    let x = s.uniform() * top;
                    match m.invert(x) {
                        SampleOutcome::Finite(t) => (HazardFunction::cum_hazard(m, t) - x).abs() / x.max(1.0),
                        SampleOutcome::Infinite => f64::INFINITY,
                    }
                })
                .fold(0.0, f64::max);
            ctx.check(1, format!("{m} inversion round trip"), worst, ROUND_TRIP_TOL)
        })
        .collect()
}

/// `int_0^t lambda` by adaptive quadrature split at the model breakpoints.
pub fn quadrature_cum_hazard(model: &impl HazardFunction, t: f64) -> f64 {
    let bps = model.breakpoints();
    let rough = integrate(|u| HazardFunction::hazard(model, u), 0.0, t, &bps, 1e-6);
    integrate(|u| HazardFunction::hazard(model, u), 0.0, t, &bps, 1e-12 * rough.abs().max(1e-300))
}

fn quadrature(ctx: &Ctx) -> Vec<CheckResult> {
    ctx.models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut s = ctx.stream(20 + i as u64);
            let worst = (0..QUADRATURE_POINTS)
                .map(|_| {
                    let t = s.uniform() * demo::T_MAX;
                    let closed = HazardFunction::cum_hazard(m, t);
                    (quadrature_cum_hazard(m, t) - closed).abs() / closed.abs()
                })
                .fold(0.0, f64::max);
            ctx.check(2, format!("{m} quadrature vs closed form"), worst, QUADRATURE_TOL)
        })
        .collect()
}

fn goodness_of_fit(ctx: &Ctx) -> Vec<CheckResult> {
    ctx.models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut s = ctx.stream(30 + i as u64);
            let samples: Vec<f64> = (0..KS_SAMPLES)
                .map(|_| m.sample_failure(&mut s).time().unwrap_or(f64::INFINITY))
                .collect();
            let limit = m.cum_hazard_limit();
            let d = ks_distance(&samples, |x| {
                if x.is_finite() {
                    1.0 - HazardFunction::survival(m, x)
                } else {
                    1.0 - (-limit).exp()
                }
            });
            ctx.check(3, format!("{m} KS distance, n = {KS_SAMPLES}"), d, KS_TOL)
        })
        .collect()
}

fn truncation_mass(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let params = demo::early_params();
    let mut s = ctx.stream(40);
    let mut tail4 = Vec::with_capacity(TRUNCATION_REPLICATES);
    let mut tail40 = Vec::with_capacity(TRUNCATION_REPLICATES);
    for _ in 0..TRUNCATION_REPLICATES {
        let g = GammaProcessDraw::sample(&params, &mut s)?;
        tail4.push(g.tail_mass(4));
        tail40.push(g.tail_mass(40));
    }
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let m4 = mean(&tail4);
    let var = tail4.iter().map(|x| (x - m4).powi(2)).sum::<f64>() / (tail4.len() as f64 - 1.0);
    let se = (var / tail4.len() as f64).sqrt();
    let mut out = vec![ctx.check(
        4,
        "mean tail mass after 4 atoms (3 SE)",
        (m4 - expected_tail_mass(demo::ALPHA, 4)).abs(),
        3.0 * se,
    )];
    // (3/4)^40 = 1.0057e-5.
    let e40 = expected_tail_mass(demo::ALPHA, 40);
    out.push(ctx.check(4, "expected tail after 40 atoms ~ 1.0e-5", (e40 / 1.0e-5 - 1.0).abs(), 0.01));
    // The tail after 40 atoms is a product of 40 sticks: heavily skewed, so
    // its sample mean is only checked to order of magnitude (log10 gap < 1).
    let m40 = mean(&tail40);
    out.push(ctx.check(4, "mean tail after 40 atoms, order of magnitude", (m40 / e40).log10().abs(), 1.0));
    Ok(out)
}

fn max_rel(pairs: impl Iterator<Item = (f64, f64)>) -> f64 {
    pairs
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn identities(ctx: &Ctx) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let draw_t = |id: u64| {
        let mut s = ctx.stream(id);
        (0..IDENTITY_POINTS).map(move |_| s.uniform() * demo::T_MAX)
    };

    if let HazardModel::Sbt(m) = &ctx.models[3] {
        let dfr = Dfr::new(0.0, m.early().clone()).expect("valid draw");
        let ifr = Ifr::new(0.0, m.late().clone()).expect("valid draw");
        let err = max_rel(draw_t(50).map(|t| (HazardFunction::hazard(m, t), m.lambda0() + HazardFunction::hazard(&dfr, t) + HazardFunction::hazard(&ifr, t))));
        out.push(ctx.check(5, "sbt hazard = lambda0 + DFR + IFR", err, IDENTITY_TOL));
    }
    if let HazardModel::Mbt(m) = &ctx.models[4] {
        let pi = m.pi();
        let err = max_rel(
            draw_t(51).map(|t| (HazardFunction::survival(m, t), pi * m.dfr().survival(t) + (1.0 - pi) * m.ifr().survival(t))),
        );
        out.push(ctx.check(5, "mbt survival mixture identity", err, IDENTITY_TOL));
        let err = max_rel(
            draw_t(52).map(|t| (HazardFunction::density(m, t), pi * m.dfr().density(t) + (1.0 - pi) * m.ifr().density(t))),
        );
        out.push(ctx.check(5, "mbt density mixture identity", err, IDENTITY_TOL));
        let err = max_rel(draw_t(53).map(|t| (HazardFunction::hazard(m, t) * HazardFunction::survival(m, t), HazardFunction::density(m, t))));
        out.push(ctx.check(5, "mbt hazard * survival = density", err, IDENTITY_TOL));
    }
    if let HazardModel::Lwb(m) = &ctx.models[2] {
        let a = m.a();
        let mut s = ctx.stream(54);
        let err = max_rel((0..IDENTITY_POINTS).map(|_| {
            let off = s.uniform() * a;
            (HazardFunction::hazard(m, a - off), HazardFunction::hazard(m, a + off))
        }));
        out.push(ctx.check(5, "lwb reflection symmetry about a", err, IDENTITY_TOL));
    }
    if let HazardModel::Lcv(m) = &ctx.models[5] {
        let err = draw_t(55)
            .map(|t| {
                let direct = m.log_hazard(t);
                (m.segment_log_hazard(t) - direct).abs() / direct.abs().max(1.0)
            })
            .fold(0.0, f64::max);
        out.push(ctx.check(5, "lcv log-hazard slope = w0 + C*_l", err, IDENTITY_TOL));
    }
    out
}

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| demo::T_MAX * i as f64 / n as f64)
}

fn shapes(ctx: &Ctx) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let n = 10_000;
    let drops = |m: &HazardModel, sign: f64| -> f64 {
        let hs: Vec<f64> = grid(n).map(|t| HazardFunction::hazard(m, t)).collect();
        hs.windows(2).map(|w| (sign * (w[0] - w[1])).max(0.0)).fold(0.0, f64::max)
    };
    out.push(ctx.check(6, "ifr hazard non-decreasing", drops(&ctx.models[0], 1.0), 0.0));
    out.push(ctx.check(6, "dfr hazard non-increasing", drops(&ctx.models[1], -1.0), 0.0));
    if let HazardModel::Lwb(m) = &ctx.models[2] {
        let at_a = (HazardFunction::hazard(m, m.a()) - m.lambda0()).abs();
        let below = grid(n).map(|t| (m.lambda0() - HazardFunction::hazard(m, t)).max(0.0)).fold(0.0, f64::max);
        out.push(ctx.check(6, "lwb minimum lambda0 attained at t = a", at_a + below, 0.0));
    }
    if let HazardModel::Lcv(m) = &ctx.models[5] {
        let logs: Vec<f64> = grid(n).map(|t| m.log_hazard(t)).collect();
        let worst = logs
            .windows(3)
            .map(|w| (-(w[2] - 2.0 * w[1] + w[0])).max(0.0))
            .fold(0.0, f64::max);
        out.push(ctx.check(6, "lcv log-hazard convex", worst, CONVEXITY_TOL));
    }
    let worst = ctx
        .models
        .iter()
        .map(|m| {
            let cs: Vec<f64> = grid(n).map(|t| HazardFunction::cum_hazard(m, t)).collect();
            let fall = cs
                .windows(2)
                .map(|w| (w[0] - w[1]).max(0.0) / w[0].abs().max(1.0))
                .fold(0.0, f64::max);
            fall + cs[0].abs()
        })
        .fold(0.0, f64::max);
    out.push(ctx.check(6, "every Lambda non-decreasing, Lambda(0) = 0", worst, 1e-12));
    out
}

/// `argmax` of a unimodal function on `[lo, hi]` by repeated grid refinement.
fn grid_argmax(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let points = 101;
    let mut best = lo;
    while hi - lo > 1e-12 * hi.abs().max(1.0) {
        let step = (hi - lo) / (points - 1) as f64;
        let (i, _) = (0..points)
            .map(|i| (i, f(lo + step * i as f64)))
            .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
        best = lo + step * i as f64;
        lo = (best - step).max(lo);
        hi = (best + step).min(hi);
    }
    best
}

fn likelihood(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let far_atom = || GammaProcessDraw::from_atoms(&[(10.0, 1.0)]);
    let model = HazardModel::Ifr(Ifr::new(1.0, far_atom()?)?);
    let data = Dataset::new(
        vec![Record::observed(1.0), Record::observed(2.0), Record::censored(5.0)],
        Some(5.0),
    )?;
    let ll = log_likelihood(&model, &data)?;
    let mut out = vec![ctx.check(7, "constant-hazard log L = -8", (ll + 8.0).abs(), 0.0)];

    let tau = 2.0;
    let truth = HazardModel::Ifr(Ifr::new(0.8, far_atom()?)?);
    let sample = simulate_dataset(&truth, 500, Some(tau), &mut ctx.stream(70))?;
    let n0 = sample.n_observed() as f64;
    let exposure: f64 = sample.records().iter().map(|r| r.time).sum();
    let closed = n0 / exposure;
    let lik = |l0: f64| {
        let m = HazardModel::Ifr(Ifr::new(l0, far_atom().expect("valid atom")).expect("valid rate"));
        log_likelihood(&m, &sample).unwrap_or(f64::NEG_INFINITY)
    };
    let grid_mle = grid_argmax(lik, 1e-3, 10.0);
    out.push(ctx.check(7, "grid MLE = n0 / (sum t + (n - n0) tau)", (grid_mle - closed).abs(), MLE_TOL));
    Ok(out)
}

fn kaplan_meier_checks(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let model = &ctx.models[0];
    let data = simulate_dataset(model, KM_SAMPLES, None, &mut ctx.stream(80))?;
    let km = kaplan_meier(&data);
    let times = data.times();
    let n = times.len() as f64;
    let ecdf = |t: f64| times.iter().filter(|x| **x <= t).count() as f64 / n;
    let mut probes: Vec<f64> = times.clone();
    probes.extend(times.iter().map(|t| t * 0.999_999));
    probes.push(0.0);
    probes.push(demo::T_MAX * 10.0);
    let worst = probes
        .iter()
        .map(|&t| (km.eval(t) - (1.0 - ecdf(t))).abs())
        .fold(0.0, f64::max);
    let mut out = vec![ctx.check(8, "KM = 1 - ECDF on uncensored data", worst, 1e-12)];

    let hand = Dataset::with_censoring_times(vec![
        Record::observed(1.0),
        Record::censored(2.0),
        Record::observed(3.0),
    ])?;
    let km = kaplan_meier(&hand);
    let err = (km.eval(0.5) - 1.0).abs()
        + (km.eval(1.0) - 2.0 / 3.0).abs()
        + (km.eval(2.5) - 2.0 / 3.0).abs()
        + km.eval(3.0).abs()
        + km.eval(10.0).abs();
    out.push(ctx.check(8, "KM hand example (1 obs, 2 cens, 3 obs)", err, f64::EPSILON));
    Ok(out)
}

fn defective(ctx: &Ctx) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let targets_beyond = |limit: f64| [limit * (1.0 + 1e-9), limit + 1.0, 2.0 * limit];

    // DFR with lambda0 = 0: Lambda(inf) = sum_k w_k theta_k.
    let dfr = HazardModel::Dfr(Dfr::new(0.0, ctx.g1.clone())?);
    let direct: f64 = ctx.g1.atoms().map(|(th, w)| w * th).sum();
    let limit = dfr.cum_hazard_limit();
    let mut misses = ((limit - direct).abs() / direct > 1e-12) as u32 as f64;
    for x in targets_beyond(direct) {
        misses += f64::from(!dfr.invert(x).is_infinite() as u8);
    }
    for frac in [0.1, 0.5, 0.999] {
        misses += f64::from(dfr.invert(frac * direct).is_infinite() as u8);
    }
    out.push(ctx.check(9, "dfr lambda0 = 0: infinite beyond sum w theta", misses, 0.0));

    // LCV with w0 + gamma < 0; limit checked against quadrature to far out.
    let w0 = -ctx.g1.gamma() - 1.0;
    let lcv = Lcv::new(demo::LCV_LAMBDA0, w0, ctx.g1.clone())?;
    let limit = lcv.cum_hazard_limit();
    let far = ctx.g1.thetas().iter().copied().fold(0.0, f64::max) + 60.0;
    let quad = quadrature_cum_hazard(&lcv, far);
    let mut misses = ((limit - quad).abs() / quad > 1e-8) as u32 as f64;
    for x in targets_beyond(limit) {
        misses += f64::from(!lcv.invert(x).is_infinite() as u8);
    }
    for frac in [0.1, 0.5, 0.999] {
        misses += f64::from(lcv.invert(frac * limit).is_infinite() as u8);
    }
    out.push(ctx.check(9, "lcv w0 + gamma < 0: infinite beyond limit", misses, 0.0));

    // Simulation with tau turns never-failing items into censored records.
    let tau = 1e6;
    let n = 2_000;
    let data = simulate_dataset(&dfr, n, Some(tau), &mut ctx.stream(90))?;
    let mut replay = ctx.stream(90);
    let expected_censored = (0..n)
        .filter(|_| match dfr.sample_failure(&mut replay) {
            SampleOutcome::Infinite => true,
            SampleOutcome::Finite(t) => t > tau,
        })
        .count();
    let censored: Vec<&Record> = data.records().iter().filter(|r| !r.observed).collect();
    let mismatch = (censored.len() as f64 - expected_censored as f64).abs()
        + censored.iter().filter(|r| r.time != tau).count() as f64
        + f64::from(expected_censored == 0);
    out.push(ctx.check(9, "simulate censors infinite outcomes at tau", mismatch, 0.0));

    // No atoms: Lambda(t) = lambda0 (e^{w0 t} - 1) / w0.
    let (l0, w0) = (2.0, -1.0);
    let bare = Lcv::new(l0, w0, GammaProcessDraw::empty())?;
    let worst = (1..=10)
        .map(|i| {
            let t = 0.5 * i as f64;
            let closed = l0 * ((w0 * t).exp() - 1.0) / w0;
            (HazardFunction::cum_hazard(&bare, t) - closed).abs() / closed
        })
        .fold(0.0, f64::max);
    out.push(ctx.check(9, "lcv without atoms matches closed form", worst, LCV_CLOSED_FORM_TOL));
    Ok(out)
}
