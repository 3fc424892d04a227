//! Censored-data likelihood and the hyperprior on `(alpha, beta, phi)`.

mod dataset;

pub use dataset::{Censoring, Dataset, Record};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error};
use crate::models::HazardModel;
use crate::rng::RandomStream;
use crate::Result;

/// Gamma hyperprior parameters: `alpha ~ Ga(a1, a2)`, `beta ~ Ga(b1, b2)`,
/// `phi ~ Ga(f1, f2)` (shape, rate), plus the scale `nu` of the
/// background-rate priors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub f1: f64,
    pub f2: f64,
    pub nu: f64,
}

impl Default for HyperParams {
    fn default() -> Self {
        Self {
            a1: 1.0,
            a2: 1.0,
            b1: 1.0,
            b2: 1.0,
            f1: 1.0,
            f2: 1.0,
            nu: 1.0,
        }
    }
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("a1", self.a1),
            ("a2", self.a2),
            ("b1", self.b1),
            ("b2", self.b2),
            ("f1", self.f1),
            ("f2", self.f2),
            ("nu", self.nu),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return domain(format!("hyperparameter {name} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// Draw `(alpha, beta, phi)` independently from their Gamma hyperpriors.
pub fn sample_hyperparams(hyper: &HyperParams, stream: &mut RandomStream) -> Result<(f64, f64, f64)> {
    hyper.validate()?;
    let alpha = stream.gamma(hyper.a1, hyper.a2)?;
    let beta = stream.gamma(hyper.b1, hyper.b2)?;
    let phi = stream.gamma(hyper.f1, hyper.f2)?;
    Ok((alpha, beta, phi))
}

/// Log-density of `Ga(shape, rate)` at `x`; `-inf` outside the support.
pub fn gamma_log_density(x: f64, shape: f64, rate: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NEG_INFINITY;
    }
    shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
}

/// Joint log hyperprior density of `(alpha, beta, phi)`.
pub fn log_hyperprior(alpha: f64, beta: f64, phi: f64, hyper: &HyperParams) -> f64 {
    gamma_log_density(alpha, hyper.a1, hyper.a2)
        + gamma_log_density(beta, hyper.b1, hyper.b2)
        + gamma_log_density(phi, hyper.f1, hyper.f2)
}

/// Right-censored log-likelihood
/// `sum_obs [log lambda(t_i) - Lambda(t_i)] - sum_cens Lambda(c_i)`.
///
/// Returns `-inf` when an observed time has zero hazard. Censored records
/// need a censoring time: a common `tau` or per-record times.
pub fn log_likelihood(model: &HazardModel, data: &Dataset) -> Result<f64> {
    let censored_at = |time: f64| -> Result<f64> {
        match data.censoring() {
            Censoring::Common(tau) => Ok(tau),
            Censoring::PerRecord => Ok(time),
            Censoring::Unset => Err(Error::Config(
                "dataset has censored records but no censoring horizon tau".into(),
            )),
        }
    };
    let mut total = 0.0;
    let mut n_censored = 0usize;
    let mut common_tau = None;
    for r in data.records() {
        if r.observed {
            let h = model.hazard(r.time)?;
            if h <= 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            total += h.ln() - model.cum_hazard(r.time)?;
        } else {
            let c = censored_at(r.time)?;
            match data.censoring() {
                Censoring::Common(_) => {
                    n_censored += 1;
                    common_tau = Some(c);
                }
                _ => total -= model.cum_hazard(c)?,
            }
        }
    }
    if let Some(tau) = common_tau {
        total -= n_censored as f64 * model.cum_hazard(tau)?;
    }
    Ok(total)
}
