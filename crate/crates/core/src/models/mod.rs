//! The six Gamma-Process hazard-rate models.
//!
//! | variant | hazard |
//! |---|---|
//! | IFR | `lambda0 + G([0, t])` |
//! | DFR | `lambda0 + G((t, inf))` |
//! | LWB | `lambda0 + G((0, abs(t - a)))` |
//! | SBT | `lambda0 + G1((t, inf)) + G2([0, t])` |
//! | MBT | survival `pi S_dfr(t; G1) + (1 - pi) S_ifr(t; G2)` |
//! | LCV | `lambda0 exp(w0 t + int_0^t (t - u) G(du))` |
//!
//! Every model evaluates `lambda`, `Lambda`, `f` and `S` in closed form and
//! samples failure times exactly by solving `Lambda(T) = -log U`.

mod bathtub;
mod log_convex;
mod mixture;
mod monotone;
mod simulate;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use bathtub::{Lwb, Sbt};
pub use log_convex::{expm1_ratio, Lcv, ZERO_SLOPE};
pub use mixture::Mbt;
pub use monotone::{Dfr, Ifr};
pub use simulate::{draw_model_params, simulate_dataset, MixtureWeight, ModelKind};

use crate::error::{domain, Error};
use crate::gamma_process::GammaProcessDraw;
use crate::rng::RandomStream;
use crate::Result;

/// Result of inverting the cumulative hazard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleOutcome {
    Finite(f64),
    /// The target exceeds `Lambda(inf)`: the item never fails.
    Infinite,
}

impl SampleOutcome {
    pub fn time(self) -> Option<f64> {
        match self {
            SampleOutcome::Finite(t) => Some(t),
            SampleOutcome::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, SampleOutcome::Infinite)
    }
}

/// Unchecked evaluation interface shared by the model types. Arguments are
/// assumed to be `>= 0`; [`HazardModel`] validates before dispatching.
pub trait HazardFunction {
    fn hazard(&self, t: f64) -> f64;

    fn cum_hazard(&self, t: f64) -> f64;

    fn survival(&self, t: f64) -> f64 {
        (-self.cum_hazard(t)).exp()
    }

    fn density(&self, t: f64) -> f64 {
        let s = self.survival(t);
        if s == 0.0 {
            0.0
        } else {
            self.hazard(t) * s
        }
    }

    /// Solve `Lambda(T) = target`.
    fn invert(&self, target: f64) -> SampleOutcome;

    /// `Lambda(inf)`; finite for defective distributions.
    fn cum_hazard_limit(&self) -> f64;

    /// Sorted locations where the hazard (or its log-slope) changes.
    fn breakpoints(&self) -> Vec<f64>;
}

pub(crate) fn check_rate(name: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} must be finite and >= 0, got {value}"))
    }
}

fn check_time(t: f64) -> Result<f64> {
    if t >= 0.0 {
        Ok(t)
    } else {
        domain(format!("time must be >= 0, got {t}"))
    }
}

/// A fully parameterised hazard model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelSpec", into = "ModelSpec")]
pub enum HazardModel {
    Ifr(Ifr),
    Dfr(Dfr),
    Lwb(Lwb),
    Sbt(Sbt),
    Mbt(Mbt),
    Lcv(Lcv),
}

/// Serializable parameters of a [`HazardModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelSpec {
    Ifr {
        lambda0: f64,
        draw: GammaProcessDraw,
    },
    Dfr {
        lambda0: f64,
        draw: GammaProcessDraw,
    },
    Lwb {
        lambda0: f64,
        a: f64,
        draw: GammaProcessDraw,
    },
    Sbt {
        lambda0: f64,
        draw1: GammaProcessDraw,
        draw2: GammaProcessDraw,
    },
    Mbt {
        pi: f64,
        lambda01: f64,
        draw1: GammaProcessDraw,
        lambda02: f64,
        draw2: GammaProcessDraw,
    },
    Lcv {
        lambda0: f64,
        w0: f64,
        draw: GammaProcessDraw,
    },
}

impl TryFrom<ModelSpec> for HazardModel {
    type Error = Error;

    fn try_from(spec: ModelSpec) -> Result<Self> {
        Ok(match spec {
            ModelSpec::Ifr { lambda0, draw } => HazardModel::Ifr(Ifr::new(lambda0, draw)?),
            ModelSpec::Dfr { lambda0, draw } => HazardModel::Dfr(Dfr::new(lambda0, draw)?),
            ModelSpec::Lwb { lambda0, a, draw } => HazardModel::Lwb(Lwb::new(lambda0, a, draw)?),
            ModelSpec::Sbt {
                lambda0,
                draw1,
                draw2,
            } => HazardModel::Sbt(Sbt::new(lambda0, draw1, draw2)?),
            ModelSpec::Mbt {
                pi,
                lambda01,
                draw1,
                lambda02,
                draw2,
            } => HazardModel::Mbt(Mbt::new(
                pi,
                Dfr::new(lambda01, draw1)?,
                Ifr::new(lambda02, draw2)?,
            )?),
            ModelSpec::Lcv { lambda0, w0, draw } => HazardModel::Lcv(Lcv::new(lambda0, w0, draw)?),
        })
    }
}

impl From<HazardModel> for ModelSpec {
    fn from(m: HazardModel) -> Self {
        m.spec()
    }
}

impl HazardModel {
    pub fn from_spec(spec: ModelSpec) -> Result<Self> {
        spec.try_into()
    }

    pub fn spec(&self) -> ModelSpec {
        match self {
            HazardModel::Ifr(m) => ModelSpec::Ifr {
                lambda0: m.lambda0(),
                draw: m.draw().clone(),
            },
            HazardModel::Dfr(m) => ModelSpec::Dfr {
                lambda0: m.lambda0(),
                draw: m.draw().clone(),
            },
            HazardModel::Lwb(m) => ModelSpec::Lwb {
                lambda0: m.lambda0(),
                a: m.a(),
                draw: m.draw().clone(),
            },
            HazardModel::Sbt(m) => ModelSpec::Sbt {
                lambda0: m.lambda0(),
                draw1: m.early().clone(),
                draw2: m.late().clone(),
            },
            HazardModel::Mbt(m) => ModelSpec::Mbt {
                pi: m.pi(),
                lambda01: m.dfr().lambda0(),
                draw1: m.dfr().draw().clone(),
                lambda02: m.ifr().lambda0(),
                draw2: m.ifr().draw().clone(),
            },
            HazardModel::Lcv(m) => ModelSpec::Lcv {
                lambda0: m.lambda0(),
                w0: m.w0(),
                draw: m.draw().clone(),
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HazardModel::Ifr(_) => "ifr",
            HazardModel::Dfr(_) => "dfr",
            HazardModel::Lwb(_) => "lwb",
            HazardModel::Sbt(_) => "sbt",
            HazardModel::Mbt(_) => "mbt",
            HazardModel::Lcv(_) => "lcv",
        }
    }

    fn inner(&self) -> &dyn HazardFunction {
        match self {
            HazardModel::Ifr(m) => m,
            HazardModel::Dfr(m) => m,
            HazardModel::Lwb(m) => m,
            HazardModel::Sbt(m) => m,
            HazardModel::Mbt(m) => m,
            HazardModel::Lcv(m) => m,
        }
    }

    pub fn hazard(&self, t: f64) -> Result<f64> {
        Ok(self.inner().hazard(check_time(t)?))
    }

    pub fn cum_hazard(&self, t: f64) -> Result<f64> {
        Ok(self.inner().cum_hazard(check_time(t)?))
    }

    pub fn survival(&self, t: f64) -> Result<f64> {
        Ok(self.inner().survival(check_time(t)?))
    }

    pub fn density(&self, t: f64) -> Result<f64> {
        Ok(self.inner().density(check_time(t)?))
    }

    /// Solve `Lambda(T) = target`; [`SampleOutcome::Infinite`] when the
    /// target exceeds the total cumulative hazard.
    pub fn invert_cum_hazard(&self, target: f64) -> Result<SampleOutcome> {
        if !(target >= 0.0) {
            return domain(format!("inversion target must be >= 0, got {target}"));
        }
        Ok(self.inner().invert(target))
    }

    pub fn cum_hazard_limit(&self) -> f64 {
        self.inner().cum_hazard_limit()
    }

    /// Whether `P(T = inf) > 0`.
    pub fn is_defective(&self) -> bool {
        self.cum_hazard_limit().is_finite()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.inner().breakpoints()
    }

    /// One failure time by inversion of `-log U`; the mixture model first
    /// picks a component.
    pub fn sample_failure(&self, stream: &mut RandomStream) -> SampleOutcome {
        match self {
            HazardModel::Mbt(m) => m.sample(stream),
            _ => self.inner().invert(-stream.uniform().ln()),
        }
    }
}

impl HazardFunction for HazardModel {
    fn hazard(&self, t: f64) -> f64 {
        self.inner().hazard(t)
    }

    fn cum_hazard(&self, t: f64) -> f64 {
        self.inner().cum_hazard(t)
    }

    fn survival(&self, t: f64) -> f64 {
        self.inner().survival(t)
    }

    fn density(&self, t: f64) -> f64 {
        self.inner().density(t)
    }

    fn invert(&self, target: f64) -> SampleOutcome {
        self.inner().invert(target)
    }

    fn cum_hazard_limit(&self) -> f64 {
        self.inner().cum_hazard_limit()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner().breakpoints()
    }
}

impl fmt::Display for HazardModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_arguments_are_domain_errors() {
        let m = HazardModel::Ifr(Ifr::new(1.0, GammaProcessDraw::empty()).unwrap());
        assert!(m.hazard(-1.0).is_err());
        assert!(m.cum_hazard(-1.0).is_err());
        assert!(m.survival(-1.0).is_err());
        assert!(m.density(-1.0).is_err());
        assert!(m.invert_cum_hazard(-1.0).is_err());
        assert!(m.invert_cum_hazard(f64::NAN).is_err());
    }

    #[test]
    fn spec_round_trip_through_json() {
        let g1 = GammaProcessDraw::from_atoms(&[(0.5, 1.0), (1.5, 0.25)]).unwrap();
        let g2 = GammaProcessDraw::from_atoms(&[(2.0, 0.75)]).unwrap();
        let models = [
            ModelSpec::Lwb {
                lambda0: 0.1,
                a: 0.6,
                draw: g1.clone(),
            },
            ModelSpec::Mbt {
                pi: 0.5,
                lambda01: 0.1,
                draw1: g1.clone(),
                lambda02: 0.2,
                draw2: g2.clone(),
            },
            ModelSpec::Lcv {
                lambda0: 1.0,
                w0: -1.0,
                draw: g2,
            },
        ];
        for spec in models {
            let model = HazardModel::from_spec(spec.clone()).unwrap();
            let text = serde_json::to_string(&model).unwrap();
            let back: HazardModel = serde_json::from_str(&text).unwrap();
            assert_eq!(back, model);
            assert_eq!(back.spec(), spec);
        }
    }

    #[test]
    fn json_tag_names_variant() {
        let m = HazardModel::Dfr(Dfr::new(0.5, GammaProcessDraw::empty()).unwrap());
        let v: serde_json::Value = serde_json::to_value(&m).unwrap();
        assert_eq!(v["model"], "dfr");
        assert_eq!(v["lambda0"], 0.5);
    }

    #[test]
    fn invalid_spec_rejected() {
        let text = r#"{"model":"lcv","lambda0":0.0,"w0":1.0,"draw":{"gamma":0,"thetas":[],"sticks":[],"weights":[]}}"#;
        assert!(serde_json::from_str::<HazardModel>(text).is_err());
    }
}
