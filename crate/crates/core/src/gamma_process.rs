//! Truncated stick-breaking draws from the Gamma Process Prior.
//!
//! A draw is a Dirichlet Process draw (stick-breaking weights over atoms
//! drawn iid from the base measure) whose weights are scaled by an
//! independent total mass `gamma ~ Ga(alpha, beta)`. The last of the `K`
//! atoms absorbs the unbroken remainder of the stick, so the unscaled
//! weights sum to one and the scaled weights sum to `gamma`.
//!
//! Integral conventions: [`GammaProcessDraw::integral_below`] counts atoms
//! with `theta < t`, [`GammaProcessDraw::integral_above`] those with
//! `theta > t`. Atoms sitting exactly on `t` are counted by neither.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::RandomStream;

pub const DEFAULT_TRUNCATION: usize = 100;

/// Base probability measure the atom locations are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BaseMeasure {
    Exponential { rate: f64 },
    /// Normal restricted to `[0, inf)` by rejection.
    Normal { mean: f64, sd: f64 },
}

impl Default for BaseMeasure {
    fn default() -> Self {
        BaseMeasure::Exponential { rate: 1.0 }
    }
}

impl BaseMeasure {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BaseMeasure::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => {
                domain(format!("exponential base rate must be positive, got {rate}"))
            }
            BaseMeasure::Normal { mean, sd } if !(sd > 0.0 && sd.is_finite() && mean.is_finite()) => {
                domain(format!("normal base needs finite mean and sd > 0, got ({mean}, {sd})"))
            }
            _ => Ok(()),
        }
    }

    pub fn sample(&self, stream: &mut RandomStream) -> Result<f64> {
        match *self {
            BaseMeasure::Exponential { rate } => stream.exponential(rate),
            BaseMeasure::Normal { mean, sd } => loop {
                let x = stream.normal(mean, sd)?;
                if x >= 0.0 {
                    return Ok(x);
                }
            },
        }
    }
}

/// Parameters of a truncated Gamma Process Prior `GaPP_K(alpha H0, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GappParams {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default)]
    pub base: BaseMeasure,
}

fn default_truncation() -> usize {
    DEFAULT_TRUNCATION
}

impl GappParams {
    pub fn new(alpha: f64, beta: f64, truncation: usize, base: BaseMeasure) -> Result<Self> {
        let params = Self {
            alpha,
            beta,
            truncation,
            base,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return domain(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return domain(format!("beta must be positive, got {}", self.beta));
        }
        if self.truncation == 0 {
            return domain("truncation level K must be at least 1");
        }
        self.base.validate()
    }
}

/// Unscaled stick-breaking weights `v_k prod_{l<k}(1 - v_l)` for the first
/// `K - 1` atoms, closed by `prod_{l<K}(1 - v_l)` for atom `K`.
pub fn stick_weights(sticks: &[f64], truncation: usize) -> Result<Vec<f64>> {
    if truncation == 0 {
        return domain("truncation level K must be at least 1");
    }
    if sticks.len() + 1 != truncation {
        return domain(format!(
            "expected {} stick values for K = {truncation}, got {}",
            truncation - 1,
            sticks.len()
        ));
    }
    if let Some(v) = sticks.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
        return domain(format!("stick values must lie in (0, 1), got {v}"));
    }
    let mut weights = Vec::with_capacity(truncation);
    let mut remaining = 1.0;
    for &v in sticks {
        weights.push(v * remaining);
        remaining *= 1.0 - v;
    }
    weights.push(remaining);
    Ok(weights)
}

/// A truncated atomic random measure `G = gamma * sum_k w~_k delta_{theta_k}`.
///
/// An empty draw (no atoms, zero mass) is allowed for hand-built models; the
/// prior sampler always produces at least one atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DrawRecord", into = "DrawRecord")]
pub struct GammaProcessDraw {
    gamma: f64,
    thetas: Vec<f64>,
    sticks: Vec<f64>,
    unscaled_weights: Vec<f64>,
    weights: Vec<f64>,
}

/// On-disk form of a draw.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct DrawRecord {
    gamma: f64,
    thetas: Vec<f64>,
    sticks: Vec<f64>,
    weights: Vec<f64>,
}

impl From<GammaProcessDraw> for DrawRecord {
    fn from(d: GammaProcessDraw) -> Self {
        DrawRecord {
            gamma: d.gamma,
            thetas: d.thetas,
            sticks: d.sticks,
            weights: d.weights,
        }
    }
}

impl TryFrom<DrawRecord> for GammaProcessDraw {
    type Error = Error;

    fn try_from(r: DrawRecord) -> Result<Self> {
        if r.thetas.len() != r.weights.len() {
            return Err(Error::Config(format!(
                "draw has {} thetas but {} weights",
                r.thetas.len(),
                r.weights.len()
            )));
        }
        if r.thetas.is_empty() {
            return Ok(GammaProcessDraw::empty());
        }
        let unscaled = stick_weights(&r.sticks, r.thetas.len())?;
        check_atoms(r.gamma, &r.thetas, &r.weights)?;
        Ok(GammaProcessDraw {
            gamma: r.gamma,
            thetas: r.thetas,
            sticks: r.sticks,
            unscaled_weights: unscaled,
            weights: r.weights,
        })
    }
}

fn check_atoms(gamma: f64, thetas: &[f64], weights: &[f64]) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return domain(format!("total mass gamma must be positive, got {gamma}"));
    }
    if let Some(t) = thetas.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return domain(format!("atom locations must be finite and >= 0, got {t}"));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
        return domain(format!("atom weights must be finite and >= 0, got {w}"));
    }
    Ok(())
}

impl GammaProcessDraw {
    /// Draw from `GaPP_K(alpha H0, beta)`.
    pub fn sample(params: &GappParams, stream: &mut RandomStream) -> Result<Self> {
        params.validate()?;
        let k = params.truncation;
        let thetas = (0..k)
            .map(|_| params.base.sample(stream))
            .collect::<Result<Vec<_>>>()?;
        let sticks = (0..k - 1)
            .map(|_| stream.beta(1.0, params.alpha))
            .collect::<Result<Vec<_>>>()?;
        let gamma = stream.gamma(params.alpha, params.beta)?;
        Self::from_sticks(gamma, thetas, sticks)
    }

    /// Build a draw from its total mass, locations and `K - 1` stick values.
    pub fn from_sticks(gamma: f64, thetas: Vec<f64>, sticks: Vec<f64>) -> Result<Self> {
        let unscaled = stick_weights(&sticks, thetas.len())?;
        let weights: Vec<f64> = unscaled.iter().map(|w| gamma * w).collect();
        check_atoms(gamma, &thetas, &weights)?;
        Ok(Self {
            gamma,
            thetas,
            sticks,
            unscaled_weights: unscaled,
            weights,
        })
    }

    /// Build a draw from explicit `(theta, weight)` atoms. The total mass is
    /// the sum of the weights; stick values are recovered from the weights,
    /// so every weight must be strictly positive.
    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        if atoms.is_empty() {
            return Ok(Self::empty());
        }
        if let Some((_, w)) = atoms.iter().find(|(_, w)| !(*w > 0.0 && w.is_finite())) {
            return domain(format!("explicit atom weights must be positive, got {w}"));
        }
        let thetas: Vec<f64> = atoms.iter().map(|a| a.0).collect();
        let weights: Vec<f64> = atoms.iter().map(|a| a.1).collect();
        let gamma: f64 = weights.iter().sum();
        check_atoms(gamma, &thetas, &weights)?;
        let mut sticks = Vec::with_capacity(atoms.len() - 1);
        let mut tail: f64 = weights.iter().sum();
        for &w in &weights[..weights.len() - 1] {
            sticks.push((w / tail).min(1.0 - f64::EPSILON / 2.0));
            tail -= w;
        }
        // Same derivation as deserialisation, so a JSON round trip is exact.
        let unscaled = stick_weights(&sticks, thetas.len())?;
        Ok(Self {
            gamma,
            thetas,
            sticks,
            unscaled_weights: unscaled,
            weights,
        })
    }

    /// The zero measure.
    pub fn empty() -> Self {
        Self {
            gamma: 0.0,
            thetas: Vec::new(),
            sticks: Vec::new(),
            unscaled_weights: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn sticks(&self) -> &[f64] {
        &self.sticks
    }

    pub fn unscaled_weights(&self) -> &[f64] {
        &self.unscaled_weights
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of atoms `K`.
    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.thetas.iter().copied().zip(self.weights.iter().copied())
    }

    /// Unscaled mass left after the first `k` atoms, `prod_{l<=k}(1 - v_l)`.
    pub fn tail_mass(&self, k: usize) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        if k >= self.len() {
            return 0.0;
        }
        self.sticks[..k].iter().map(|v| 1.0 - v).product()
    }

    /// `int_0^t G(du)`, counting atoms with `theta < t`.
    pub fn integral_below(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.atoms().filter(|(th, _)| *th < t).map(|(_, w)| w).sum())
    }

    /// `int_t^inf G(du)`, counting atoms with `theta > t`.
    pub fn integral_above(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.atoms().filter(|(th, _)| *th > t).map(|(_, w)| w).sum())
    }

    /// `int_0^t int_0^u G(dv) du = sum_k w_k max(t - theta_k, 0)`.
    pub fn double_integral_below(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.atoms().map(|(th, w)| w * (t - th).max(0.0)).sum())
    }

    /// `int_0^t int_u^inf G(dv) du = sum_k w_k min(t, theta_k)`.
    pub fn double_integral_above(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.atoms().map(|(th, w)| w * t.min(th)).sum())
    }

    pub fn ordered(&self) -> OrderedAtoms {
        OrderedAtoms::new(self)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        domain(format!("time must be >= 0, got {t}"))
    }
}

/// Atoms re-indexed by increasing location, with prefix sums
/// `C*_l = sum_{k<=l} w*_k` and `D*_l = sum_{k<=l} w*_k theta*_k`.
///
/// Index 0 is the origin: `theta*_0 = C*_0 = D*_0 = 0`, so `theta(l)`,
/// `c(l)` and `d(l)` are defined for `l in 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedAtoms {
    theta: Vec<f64>,
    weight: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
    // tail[l] = sum_{k>l} w*_k, accumulated from the right.
    tail: Vec<f64>,
}

impl OrderedAtoms {
    pub fn new(draw: &GammaProcessDraw) -> Self {
        let mut atoms: Vec<(f64, f64)> = draw.atoms().collect();
        // Stable: tied locations stay as separate atoms in draw order.
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let k = atoms.len();
        let mut theta = Vec::with_capacity(k + 1);
        let mut weight = Vec::with_capacity(k + 1);
        let mut c = Vec::with_capacity(k + 1);
        let mut d = Vec::with_capacity(k + 1);
        theta.push(0.0);
        weight.push(0.0);
        c.push(0.0);
        d.push(0.0);
        let (mut cs, mut ds) = (0.0, 0.0);
        for (th, w) in atoms {
            cs += w;
            ds += w * th;
            theta.push(th);
            weight.push(w);
            c.push(cs);
            d.push(ds);
        }
        let mut tail = vec![0.0; k + 1];
        for l in (0..k).rev() {
            tail[l] = tail[l + 1] + weight[l + 1];
        }
        Self {
            theta,
            weight,
            c,
            d,
            tail,
        }
    }

    /// Number of atoms `K`.
    pub fn len(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn thetas_sorted(&self) -> &[f64] {
        &self.theta[1..]
    }

    pub fn weights_sorted(&self) -> &[f64] {
        &self.weight[1..]
    }

    /// `C*_1 ..= C*_K`.
    pub fn cumulative_weights(&self) -> &[f64] {
        &self.c[1..]
    }

    /// `D*_1 ..= D*_K`.
    pub fn cumulative_moments(&self) -> &[f64] {
        &self.d[1..]
    }

    pub fn theta(&self, l: usize) -> f64 {
        self.theta[l]
    }

    pub fn c(&self, l: usize) -> f64 {
        self.c[l]
    }

    pub fn d(&self, l: usize) -> f64 {
        self.d[l]
    }

    /// Mass strictly after position `l`, `sum_{k>l} w*_k`.
    pub fn tail(&self, l: usize) -> f64 {
        self.tail[l]
    }

    /// Number of atoms with `theta < t`.
    pub fn count_below(&self, t: f64) -> usize {
        self.theta[1..].partition_point(|th| *th < t)
    }

    /// Total mass `C*_K`.
    pub fn total(&self) -> f64 {
        self.c[self.len()]
    }

    /// `k*(t) = max { l : theta*_l <= t }`, with `l = 0` for `t < theta*_1`.
    pub fn segment(&self, t: f64) -> usize {
        self.theta[1..].partition_point(|th| *th <= t)
    }
}

/// Expected unscaled weight beyond the first `k` atoms, `(alpha/(1+alpha))^k`.
pub fn expected_tail_mass(alpha: f64, k: u32) -> f64 {
    let ratio = alpha / (1.0 + alpha);
    match i32::try_from(k) {
        Ok(k) => ratio.powi(k),
        Err(_) => ratio.powf(f64::from(k)),
    }
}
