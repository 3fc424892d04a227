//! Prior draws of the scalar model parameters and failure-time simulation.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error};
use crate::gamma_process::GammaProcessDraw;
use crate::inference::{Dataset, HyperParams, Record};
use crate::models::{Dfr, HazardModel, Ifr, Lcv, Lwb, Mbt, Sbt, SampleOutcome};
use crate::rng::RandomStream;
use crate::Result;

/// How the MBT mixture weight is set. No prior is given for it in the model
/// family, so a fixed value is the default; the uniform prior is an opt-in
/// extension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixtureWeight {
    Fixed(f64),
    UniformPrior,
}

/// Model variant plus the structural inputs that carry no prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    Ifr,
    Dfr,
    Lwb { a: f64 },
    Sbt,
    Mbt { weight: MixtureWeight },
    Lcv,
}

impl ModelKind {
    /// Number of Gamma Process draws the variant consumes.
    pub fn draw_count(&self) -> usize {
        match self {
            ModelKind::Sbt | ModelKind::Mbt { .. } => 2,
            _ => 1,
        }
    }
}

// lambda0 | gamma ~ Exp(nu / gamma), i.e. mean gamma / nu.
fn background_rate(gamma: f64, nu: f64, stream: &mut RandomStream) -> Result<f64> {
    if !(gamma > 0.0) {
        return domain("the background-rate prior needs a draw with positive total mass");
    }
    stream.exponential(nu / gamma)
}

/// Complete a model from its Gamma Process draw(s) by sampling the scalar
/// parameters from their conditional priors:
///
/// - IFR, DFR, LWB: `lambda0 | gamma ~ Exp(nu / gamma)`
/// - SBT: `lambda0 | gamma2 ~ Exp(nu / gamma2)`
/// - MBT: `lambda0j | gammaj ~ Exp(nu / gammaj)` for each component
/// - LCV: `log lambda0 ~ N(0, (gamma/nu)^2)` and `w0 ~ N(0, (gamma/nu)^2)`
pub fn draw_model_params(
    kind: ModelKind,
    draws: Vec<GammaProcessDraw>,
    hyper: &HyperParams,
    stream: &mut RandomStream,
) -> Result<HazardModel> {
    let nu = hyper.nu;
    if !(nu > 0.0 && nu.is_finite()) {
        return domain(format!("nu must be positive, got {nu}"));
    }
    if draws.len() != kind.draw_count() {
        return Err(Error::Config(format!(
            "{kind:?} needs {} Gamma Process draw(s), got {}",
            kind.draw_count(),
            draws.len()
        )));
    }
    let mut draws = draws.into_iter();
    let mut next = || draws.next().expect("draw count checked");
    Ok(match kind {
        ModelKind::Ifr => {
            let g = next();
            let l0 = background_rate(g.gamma(), nu, stream)?;
            HazardModel::Ifr(Ifr::new(l0, g)?)
        }
        ModelKind::Dfr => {
            let g = next();
            let l0 = background_rate(g.gamma(), nu, stream)?;
            HazardModel::Dfr(Dfr::new(l0, g)?)
        }
        ModelKind::Lwb { a } => {
            let g = next();
            let l0 = background_rate(g.gamma(), nu, stream)?;
            HazardModel::Lwb(Lwb::new(l0, a, g)?)
        }
        ModelKind::Sbt => {
            let (g1, g2) = (next(), next());
            let l0 = background_rate(g2.gamma(), nu, stream)?;
            HazardModel::Sbt(Sbt::new(l0, g1, g2)?)
        }
        ModelKind::Mbt { weight } => {
            let (g1, g2) = (next(), next());
            let l01 = background_rate(g1.gamma(), nu, stream)?;
            let l02 = background_rate(g2.gamma(), nu, stream)?;
            let pi = match weight {
                MixtureWeight::Fixed(pi) => pi,
                MixtureWeight::UniformPrior => stream.uniform(),
            };
            HazardModel::Mbt(Mbt::new(pi, Dfr::new(l01, g1)?, Ifr::new(l02, g2)?)?)
        }
        ModelKind::Lcv => {
            let g = next();
            let sd = g.gamma() / nu;
            let lambda0 = stream.normal(0.0, sd)?.exp();
            let w0 = stream.normal(0.0, sd)?;
            HazardModel::Lcv(Lcv::new(lambda0, w0, g)?)
        }
    })
}

/// Draw `n` independent failure times. Times beyond `tau`, and items that
/// never fail, are recorded as censored at `tau`.
///
/// A defective model without a censoring horizon is rejected up front.
pub fn simulate_dataset(
    model: &HazardModel,
    n: usize,
    tau: Option<f64>,
    stream: &mut RandomStream,
) -> Result<Dataset> {
    if n == 0 {
        return domain("dataset size n must be at least 1");
    }
    if let Some(tau) = tau {
        if !(tau > 0.0 && tau.is_finite()) {
            return domain(format!("censoring horizon tau must be positive, got {tau}"));
        }
    } else if model.is_defective() {
        return Err(Error::Defective {
            limit: model.cum_hazard_limit(),
        });
    }
    let mut records = Vec::with_capacity(n);
    for _ in 0..n {
        let outcome = model.sample_failure(stream);
        let record = match (outcome, tau) {
            (SampleOutcome::Finite(t), Some(tau)) if t > tau => Record::censored(tau),
            (SampleOutcome::Finite(t), _) => Record::observed(t),
            (SampleOutcome::Infinite, Some(tau)) => Record::censored(tau),
            (SampleOutcome::Infinite, None) => unreachable!("defective models need tau"),
        };
        records.push(record);
    }
    Dataset::from_simulation(records, tau)
}
