//! Log-convex hazard (LCV): the derivative of `log lambda` is
//! `w0 + G([0, t])`, so
//!
//! ```text
//! lambda(t) = lambda0 * exp(w0 t + sum_k w_k max(0, t - theta_k))
//! ```
//!
//! On segment `l` (between the `l`-th and `(l+1)`-th ordered atoms)
//! `log lambda` is affine with slope `C*_0l = w0 + C*_l` and intercept
//! `log lambda0 - D*_l`, so `Lambda` is a sum of exponential pieces.

use crate::error::domain;
use crate::gamma_process::{GammaProcessDraw, OrderedAtoms};
use crate::models::{HazardFunction, SampleOutcome};
use crate::Result;

/// Slopes smaller than this in magnitude use the linear (zero-slope) branch.
pub const ZERO_SLOPE: f64 = 1e-12;

/// `(e^{c dt} - 1) / c`, continuous through `c = 0`.
pub fn expm1_ratio(c: f64, dt: f64) -> f64 {
    if c.abs() < ZERO_SLOPE {
        dt
    } else {
        (c * dt).exp_m1() / c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lcv {
    lambda0: f64,
    w0: f64,
    draw: GammaProcessDraw,
    atoms: OrderedAtoms,
    // Lambda at theta*_0 = 0, ..., theta*_K.
    knots: Vec<f64>,
}

impl Lcv {
    pub fn new(lambda0: f64, w0: f64, draw: GammaProcessDraw) -> Result<Self> {
        if !(lambda0 > 0.0 && lambda0.is_finite()) {
            return domain(format!("LCV lambda0 must be positive, got {lambda0}"));
        }
        if !w0.is_finite() {
            return domain(format!("LCV w0 must be finite, got {w0}"));
        }
        let atoms = draw.ordered();
        let mut model = Self {
            lambda0,
            w0,
            draw,
            atoms,
            knots: Vec::new(),
        };
        let k = model.atoms.len();
        let mut knots = Vec::with_capacity(k + 1);
        let mut acc = 0.0;
        knots.push(acc);
        for l in 0..k {
            acc += model.increment(l, model.atoms.theta(l + 1) - model.atoms.theta(l));
            knots.push(acc);
        }
        model.knots = knots;
        Ok(model)
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn draw(&self) -> &GammaProcessDraw {
        &self.draw
    }

    pub fn ordered_atoms(&self) -> &OrderedAtoms {
        &self.atoms
    }

    /// Slope of `log lambda` on segment `l`, `w0 + C*_l`.
    pub fn log_slope(&self, l: usize) -> f64 {
        self.w0 + self.atoms.c(l)
    }

    /// `log lambda` from the segment form `log lambda0 + C*_0l t - D*_l`.
    pub fn segment_log_hazard(&self, t: f64) -> f64 {
        let l = self.atoms.segment(t);
        self.lambda0.ln() + self.log_slope(l) * t - self.atoms.d(l)
    }

    /// `log lambda(t)` from the direct sum over atoms.
    pub fn log_hazard(&self, t: f64) -> f64 {
        let drift: f64 = self.draw.atoms().map(|(th, w)| w * (t - th).max(0.0)).sum();
        self.lambda0.ln() + self.w0 * t + drift
    }

    // log lambda at the left end of segment l.
    fn log_level(&self, l: usize) -> f64 {
        self.lambda0.ln() + self.log_slope(l) * self.atoms.theta(l) - self.atoms.d(l)
    }

    // Lambda accumulated over [theta*_l, theta*_l + dt].
    fn increment(&self, l: usize, dt: f64) -> f64 {
        self.log_level(l).exp() * expm1_ratio(self.log_slope(l), dt)
    }
}

impl HazardFunction for Lcv {
    fn hazard(&self, t: f64) -> f64 {
        self.log_hazard(t).exp()
    }

    fn cum_hazard(&self, t: f64) -> f64 {
        let l = self.atoms.segment(t);
        self.knots[l] + self.increment(l, t - self.atoms.theta(l))
    }

    fn invert(&self, target: f64) -> SampleOutcome {
        if target <= 0.0 {
            return SampleOutcome::Finite(0.0);
        }
        let l = self.knots.partition_point(|v| *v <= target) - 1;
        let rest = target - self.knots[l];
        let level = self.log_level(l).exp();
        let slope = self.log_slope(l);
        let dt = if slope.abs() < ZERO_SLOPE {
            rest / level
        } else {
            let z = slope * rest / level;
            if z <= -1.0 {
                if l == self.atoms.len() {
                    return SampleOutcome::Infinite;
                }
                // Rounding at an interior knot; the segment end is the answer.
                self.atoms.theta(l + 1) - self.atoms.theta(l)
            } else {
                z.ln_1p() / slope
            }
        };
        let mut t = self.atoms.theta(l) + dt;
        if l < self.atoms.len() {
            t = t.min(self.atoms.theta(l + 1));
        }
        if t.is_finite() {
            SampleOutcome::Finite(t)
        } else {
            SampleOutcome::Infinite
        }
    }

    /// Finite only when the final log-slope `w0 + gamma` is negative.
    fn cum_hazard_limit(&self) -> f64 {
        let k = self.atoms.len();
        let slope = self.log_slope(k);
        if slope < 0.0 && slope.abs() >= ZERO_SLOPE {
            self.knots[k] + self.log_level(k).exp() / -slope
        } else {
            f64::INFINITY
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.atoms.thetas_sorted().to_vec()
    }
}
