//! Monotone hazards: increasing (IFR) and decreasing (DFR) failure rates.

use crate::gamma_process::{GammaProcessDraw, OrderedAtoms};
use crate::models::{check_rate, HazardFunction, SampleOutcome};
use crate::Result;

/// Increasing failure rate, `lambda(t) = lambda0 + G([0, t])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ifr {
    lambda0: f64,
    draw: GammaProcessDraw,
    atoms: OrderedAtoms,
    // Lambda at theta*_0 = 0, theta*_1, ..., theta*_K.
    knots: Vec<f64>,
}

impl Ifr {
    pub fn new(lambda0: f64, draw: GammaProcessDraw) -> Result<Self> {
        check_rate("lambda0", lambda0)?;
        let atoms = draw.ordered();
        let mut model = Self {
            lambda0,
            draw,
            atoms,
            knots: Vec::new(),
        };
        model.knots = (0..=model.atoms.len())
            .map(|l| model.cum_hazard(model.atoms.theta(l)))
            .collect();
        Ok(model)
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn draw(&self) -> &GammaProcessDraw {
        &self.draw
    }
}

impl HazardFunction for Ifr {
    fn hazard(&self, t: f64) -> f64 {
        self.lambda0 + self.atoms.c(self.atoms.segment(t))
    }

    fn cum_hazard(&self, t: f64) -> f64 {
        self.lambda0 * t + self.draw.atoms().map(|(th, w)| w * (t - th).max(0.0)).sum::<f64>()
    }

    fn invert(&self, target: f64) -> SampleOutcome {
        if target <= 0.0 {
            return SampleOutcome::Finite(0.0);
        }
        let k = self.knots.partition_point(|l| *l <= target) - 1;
        let slope = self.lambda0 + self.atoms.c(k);
        if slope <= 0.0 {
            return SampleOutcome::Infinite;
        }
        SampleOutcome::Finite((target + self.atoms.d(k)) / slope)
    }

    fn cum_hazard_limit(&self) -> f64 {
        if self.lambda0 + self.atoms.total() > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.atoms.thetas_sorted().to_vec()
    }
}

/// Decreasing failure rate, `lambda(t) = lambda0 + G((t, inf))`.
///
/// With `lambda0 = 0` the total hazard `sum_k w_k theta_k` is finite and the
/// failure-time distribution is defective.
#[derive(Debug, Clone, PartialEq)]
pub struct Dfr {
    lambda0: f64,
    draw: GammaProcessDraw,
    atoms: OrderedAtoms,
    knots: Vec<f64>,
}

impl Dfr {
    pub fn new(lambda0: f64, draw: GammaProcessDraw) -> Result<Self> {
        check_rate("lambda0", lambda0)?;
        let atoms = draw.ordered();
        let mut model = Self {
            lambda0,
            draw,
            atoms,
            knots: Vec::new(),
        };
        model.knots = (0..=model.atoms.len())
            .map(|l| model.cum_hazard(model.atoms.theta(l)))
            .collect();
        Ok(model)
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn draw(&self) -> &GammaProcessDraw {
        &self.draw
    }
}

impl HazardFunction for Dfr {
    fn hazard(&self, t: f64) -> f64 {
        self.lambda0 + self.atoms.tail(self.atoms.segment(t))
    }

    fn cum_hazard(&self, t: f64) -> f64 {
        self.lambda0 * t + self.draw.atoms().map(|(th, w)| w * t.min(th)).sum::<f64>()
    }

    fn invert(&self, target: f64) -> SampleOutcome {
        if target <= 0.0 {
            return SampleOutcome::Finite(0.0);
        }
        let k = self.knots.partition_point(|l| *l <= target) - 1;
        // lambda0 + gamma - C*_k, with the remaining mass summed directly.
        let slope = self.lambda0 + self.atoms.tail(k);
        if slope <= 0.0 {
            // Only reachable past the last atom with lambda0 = 0.
            return if target == self.knots[k] {
                SampleOutcome::Finite(self.atoms.theta(k))
            } else {
                SampleOutcome::Infinite
            };
        }
        SampleOutcome::Finite((target - self.atoms.d(k)) / slope)
    }

    fn cum_hazard_limit(&self) -> f64 {
        if self.lambda0 > 0.0 {
            f64::INFINITY
        } else {
            self.knots[self.atoms.len()]
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.atoms.thetas_sorted().to_vec()
    }
}
