//! Run configuration: one JSON document, overridden field-by-field by flags.
//!
//! Precedence: command-line flag > config file > built-in demo default.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use bathtub_core::demo;
use bathtub_core::inference::HyperParams;
use bathtub_core::models::{draw_model_params, MixtureWeight};
use bathtub_core::models::{Dfr, Ifr, Lcv, Lwb, Mbt, Sbt};
use bathtub_core::{GammaProcessDraw, GappParams, HazardModel, ModelKind, ModelSpec, RandomStream};
use serde::{Deserialize, Serialize};

// Sub-stream ids under the run seed.
pub const STREAM_EARLY: u64 = 0;
pub const STREAM_LATE: u64 = 1;
pub const STREAM_PARAMS: u64 = 2;
pub const STREAM_SAMPLES: u64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: String,
    pub seed: u64,
    /// Draw `G` (also `G1` for SBT/MBT).
    pub early: GappParams,
    /// Draw `G2` for SBT/MBT.
    pub late: GappParams,
    /// Background rate for IFR, DFR, LWB, SBT and LCV; the default is 1
    /// for LCV and 0.1 otherwise.
    pub lambda0: Option<f64>,
    pub lambda01: f64,
    pub lambda02: f64,
    pub a: f64,
    pub pi: f64,
    pub w0: f64,
    /// Draw the scalar parameters from their priors instead of using the
    /// fixed values above.
    pub sample_params: bool,
    /// With `sample_params`, draw the MBT weight from Uniform(0, 1).
    pub uniform_pi: bool,
    pub hyper: HyperParams,
    pub n: usize,
    pub tau: Option<f64>,
    pub tmax: f64,
    pub points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: "ifr".into(),
            seed: 1,
            early: demo::early_params(),
            late: demo::late_params(),
            lambda0: None,
            lambda01: demo::BACKGROUND_RATE,
            lambda02: demo::BACKGROUND_RATE,
            a: demo::SYMMETRY_POINT,
            pi: demo::MIXTURE_WEIGHT,
            w0: demo::LCV_W0,
            sample_params: false,
            uniform_pi: false,
            hyper: HyperParams::default(),
            n: 1000,
            tau: None,
            tmax: demo::T_MAX,
            points: 201,
        }
    }
}

/// What `simulate` writes next to its dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub config: RunConfig,
    pub model: ModelSpec,
}

impl RunConfig {
    /// Read a config file, or the `config` field of a sidecar.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .with_context(|| format!("invalid JSON in {}", path.display()))?;
        let inner = match value.get("config") {
            Some(c) if value.get("model").is_some_and(|m| m.is_object()) => c.clone(),
            _ => value,
        };
        serde_json::from_value(inner).with_context(|| format!("invalid config in {}", path.display()))
    }

    /// Fill defaults that depend on other fields.
    pub fn resolved(mut self) -> Result<Self> {
        if !demo::MODEL_NAMES.contains(&self.model.as_str()) {
            bail!(
                "unknown model `{}`; expected one of {}",
                self.model,
                demo::MODEL_NAMES.join(", ")
            );
        }
        self.lambda0 = Some(self.lambda0());
        Ok(self)
    }

    fn lambda0(&self) -> f64 {
        self.lambda0.unwrap_or(if self.model == "lcv" {
            demo::LCV_LAMBDA0
        } else {
            demo::BACKGROUND_RATE
        })
    }

    pub fn stream(&self, id: u64) -> RandomStream {
        RandomStream::new(self.seed).split(id)
    }

    pub fn draw(&self, component: u8) -> Result<GammaProcessDraw> {
        let (params, id) = match component {
            1 => (&self.early, STREAM_EARLY),
            2 => (&self.late, STREAM_LATE),
            c => bail!("component must be 1 or 2, got {c}"),
        };
        Ok(GammaProcessDraw::sample(params, &mut self.stream(id))?)
    }

    fn kind(&self) -> ModelKind {
        match self.model.as_str() {
            "ifr" => ModelKind::Ifr,
            "dfr" => ModelKind::Dfr,
            "lwb" => ModelKind::Lwb { a: self.a },
            "sbt" => ModelKind::Sbt,
            "mbt" => ModelKind::Mbt {
                weight: if self.uniform_pi {
                    MixtureWeight::UniformPrior
                } else {
                    MixtureWeight::Fixed(self.pi)
                },
            },
            _ => ModelKind::Lcv,
        }
    }

    pub fn build_model(&self) -> Result<HazardModel> {
        let kind = self.kind();
        let g1 = self.draw(1)?;
        let draws = if kind.draw_count() == 2 {
            vec![g1, self.draw(2)?]
        } else {
            vec![g1]
        };
        if self.sample_params {
            return Ok(draw_model_params(
                kind,
                draws,
                &self.hyper,
                &mut self.stream(STREAM_PARAMS),
            )?);
        }
        let mut draws = draws.into_iter();
        let g1 = draws.next().expect("one draw");
        let l0 = self.lambda0();
        Ok(match kind {
            ModelKind::Ifr => HazardModel::Ifr(Ifr::new(l0, g1)?),
            ModelKind::Dfr => HazardModel::Dfr(Dfr::new(l0, g1)?),
            ModelKind::Lwb { a } => HazardModel::Lwb(Lwb::new(l0, a, g1)?),
            ModelKind::Sbt => HazardModel::Sbt(Sbt::new(l0, g1, draws.next().expect("two draws"))?),
            ModelKind::Mbt { .. } => HazardModel::Mbt(Mbt::new(
                self.pi,
                Dfr::new(self.lambda01, g1)?,
                Ifr::new(self.lambda02, draws.next().expect("two draws"))?,
            )?),
            ModelKind::Lcv => HazardModel::Lcv(Lcv::new(l0, self.w0, g1)?),
        })
    }
}

/// A frozen model file: either a bare model spec or a `simulate` sidecar.
pub fn load_model(path: &Path) -> Result<HazardModel> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read model {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("invalid JSON in {}", path.display()))?;
    let spec = match value.get("model") {
        Some(m) if m.is_object() => m.clone(),
        _ => value,
    };
    let spec: ModelSpec = serde_json::from_value(spec)
        .with_context(|| format!("invalid model in {}", path.display()))?;
    Ok(HazardModel::from_spec(spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build_every_model() {
        for name in demo::MODEL_NAMES {
            let cfg = RunConfig {
                model: name.into(),
                ..RunConfig::default()
            }
            .resolved()
            .unwrap();
            let m = cfg.build_model().unwrap();
            assert_eq!(m.name(), name);
        }
    }

    #[test]
    fn default_draws_match_demo() {
        let cfg = RunConfig {
            seed: 9,
            ..RunConfig::default()
        };
        let (g1, g2) = demo::draws(9).unwrap();
        assert_eq!(cfg.draw(1).unwrap(), g1);
        assert_eq!(cfg.draw(2).unwrap(), g2);
    }

    #[test]
    fn unknown_model_and_fields_rejected() {
        let cfg = RunConfig {
            model: "weibull".into(),
            ..RunConfig::default()
        };
        assert!(cfg.resolved().is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"modle":"ifr"}"#).is_err());
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"model":"lcv","n":5}"#).unwrap();
        let cfg = cfg.resolved().unwrap();
        assert_eq!(cfg.n, 5);
        assert_eq!(cfg.lambda0, Some(demo::LCV_LAMBDA0));
        assert_eq!(cfg.a, demo::SYMMETRY_POINT);
    }

    #[test]
    fn sampled_params_are_reproducible() {
        let cfg = RunConfig {
            model: "mbt".into(),
            sample_params: true,
            uniform_pi: true,
            ..RunConfig::default()
        };
        assert_eq!(cfg.build_model().unwrap(), cfg.build_model().unwrap());
    }
}
