//! The reference configuration used for figures and self-checks:
//! `alpha = 3`, `beta = 1`, `K = 100`, an `Exp(1)` base measure for the
//! shared draw `G` (also used as `G1`) and a `Normal(2, 1)` base for `G2`;
//! LWB symmetry point `a = 0.6` and MBT weight `pi = 0.5`.

use crate::gamma_process::{BaseMeasure, GammaProcessDraw, GappParams};
use crate::models::{Dfr, HazardModel, Ifr, Lcv, Lwb, Mbt, Sbt};
use crate::rng::RandomStream;
use crate::Result;

pub const ALPHA: f64 = 3.0;
pub const BETA: f64 = 1.0;
pub const TRUNCATION: usize = 100;
pub const SYMMETRY_POINT: f64 = 0.6;
pub const MIXTURE_WEIGHT: f64 = 0.5;
pub const BACKGROUND_RATE: f64 = 0.1;
pub const LCV_LAMBDA0: f64 = 1.0;
pub const LCV_W0: f64 = -1.0;
pub const T_MAX: f64 = 5.0;

pub const MODEL_NAMES: [&str; 6] = ["ifr", "dfr", "lwb", "sbt", "mbt", "lcv"];

pub fn early_params() -> GappParams {
    GappParams {
        alpha: ALPHA,
        beta: BETA,
        truncation: TRUNCATION,
        base: BaseMeasure::Exponential { rate: 1.0 },
    }
}

pub fn late_params() -> GappParams {
    GappParams {
        alpha: ALPHA,
        beta: BETA,
        truncation: TRUNCATION,
        base: BaseMeasure::Normal { mean: 2.0, sd: 1.0 },
    }
}

/// `(G, G2)` drawn from independent sub-streams of `seed`.
pub fn draws(seed: u64) -> Result<(GammaProcessDraw, GammaProcessDraw)> {
    let root = RandomStream::new(seed);
    let g1 = GammaProcessDraw::sample(&early_params(), &mut root.split(0))?;
    let g2 = GammaProcessDraw::sample(&late_params(), &mut root.split(1))?;
    Ok((g1, g2))
}

/// Build a named demo model from the shared draws.
pub fn model(name: &str, g1: &GammaProcessDraw, g2: &GammaProcessDraw) -> Result<HazardModel> {
    Ok(match name {
        "ifr" => HazardModel::Ifr(Ifr::new(BACKGROUND_RATE, g1.clone())?),
        "dfr" => HazardModel::Dfr(Dfr::new(BACKGROUND_RATE, g1.clone())?),
        "lwb" => HazardModel::Lwb(Lwb::new(BACKGROUND_RATE, SYMMETRY_POINT, g1.clone())?),
        "sbt" => HazardModel::Sbt(Sbt::new(BACKGROUND_RATE, g1.clone(), g2.clone())?),
        "mbt" => HazardModel::Mbt(Mbt::new(
            MIXTURE_WEIGHT,
            Dfr::new(BACKGROUND_RATE, g1.clone())?,
            Ifr::new(BACKGROUND_RATE, g2.clone())?,
        )?),
        "lcv" => HazardModel::Lcv(Lcv::new(LCV_LAMBDA0, LCV_W0, g1.clone())?),
        other => return Err(crate::Error::Config(format!("unknown model `{other}`"))),
    })
}

/// All six demo models, in [`MODEL_NAMES`] order.
pub fn models(seed: u64) -> Result<Vec<HazardModel>> {
    let (g1, g2) = draws(seed)?;
    MODEL_NAMES.iter().map(|n| model(n, &g1, &g2)).collect()
}
