//! Bayesian nonparametric hazard-rate models built on truncated Gamma
//! Process Prior draws.
//!
//! - [`rng`]: seedable streams and scalar samplers
//! - [`gamma_process`]: stick-breaking prior draws and measure integrals
//! - [`models`]: the six hazard models (IFR, DFR, LWB, SBT, MBT, LCV) with
//!   closed-form curves and exact inverse-transform sampling
//! - [`inference`]: datasets, censored log-likelihood, hyperpriors
//! - [`empirical`]: Kaplan-Meier, Kolmogorov-Smirnov, histograms
//! - [`validation`]: the self-check suite behind `bathtub validate`

pub mod demo;
pub mod empirical;
pub mod error;
pub mod gamma_process;
pub mod inference;
pub mod models;
pub mod quadrature;
pub mod rng;
pub mod validation;

pub use error::{Error, Result};
pub use gamma_process::{BaseMeasure, GammaProcessDraw, GappParams, OrderedAtoms};
pub use inference::{Dataset, HyperParams, Record};
pub use models::{HazardFunction, HazardModel, ModelKind, ModelSpec, SampleOutcome};
pub use rng::RandomStream;
