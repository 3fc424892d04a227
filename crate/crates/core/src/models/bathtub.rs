//! Piecewise-constant bathtub hazards: the Lo-Weng reflected bathtub (LWB)
//! and the DFR + IFR superposition (SBT).
//!
//! Both have a piecewise-linear cumulative hazard, so inversion tabulates
//! `Lambda` at every kink and interpolates linearly between knots.

use crate::error::domain;
use crate::gamma_process::{GammaProcessDraw, OrderedAtoms};
use crate::models::{check_rate, HazardFunction, SampleOutcome};
use crate::Result;

/// Knots `(t_j, Lambda(t_j))` of a piecewise-linear cumulative hazard with
/// `t_0 = 0`, extended past the last knot with slope `tail_slope`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LinearKnots {
    times: Vec<f64>,
    values: Vec<f64>,
    tail_slope: f64,
}

impl LinearKnots {
    /// `times` must start at zero and be non-decreasing.
    pub(crate) fn new(mut times: Vec<f64>, tail_slope: f64, cum_hazard: impl Fn(f64) -> f64) -> Self {
        times.sort_by(f64::total_cmp);
        times.dedup();
        let values = times.iter().map(|t| cum_hazard(*t)).collect();
        Self {
            times,
            values,
            tail_slope,
        }
    }

    pub(crate) fn times(&self) -> &[f64] {
        &self.times
    }

    pub(crate) fn invert(&self, target: f64) -> SampleOutcome {
        if target <= 0.0 {
            return SampleOutcome::Finite(0.0);
        }
        let j = self.values.partition_point(|v| *v <= target) - 1;
        let (t0, v0) = (self.times[j], self.values[j]);
        if j + 1 == self.times.len() {
            return if self.tail_slope > 0.0 {
                SampleOutcome::Finite(t0 + (target - v0) / self.tail_slope)
            } else if target == v0 {
                SampleOutcome::Finite(t0)
            } else {
                SampleOutcome::Infinite
            };
        }
        let (t1, v1) = (self.times[j + 1], self.values[j + 1]);
        SampleOutcome::Finite(t0 + (t1 - t0) / (v1 - v0) * (target - v0))
    }

    pub(crate) fn limit(&self) -> f64 {
        if self.tail_slope > 0.0 {
            f64::INFINITY
        } else {
            *self.values.last().expect("knots start at zero")
        }
    }
}

/// Lo-Weng bathtub, `lambda(t) = lambda0 + G((0, |t - a|))`, symmetric about
/// its minimum `lambda0` at `t = a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lwb {
    lambda0: f64,
    a: f64,
    draw: GammaProcessDraw,
    atoms: OrderedAtoms,
    knots: LinearKnots,
}

impl Lwb {
    pub fn new(lambda0: f64, a: f64, draw: GammaProcessDraw) -> Result<Self> {
        check_rate("lambda0", lambda0)?;
        if !(a >= 0.0 && a.is_finite()) {
            return domain(format!("symmetry point a must be finite and >= 0, got {a}"));
        }
        let atoms = draw.ordered();
        let mut grid = vec![0.0, a];
        for &th in atoms.thetas_sorted() {
            if th < a {
                grid.push(a - th);
            }
            grid.push(a + th);
        }
        let mut model = Self {
            lambda0,
            a,
            draw,
            atoms,
            knots: LinearKnots {
                times: Vec::new(),
                values: Vec::new(),
                tail_slope: 0.0,
            },
        };
        model.knots = LinearKnots::new(grid, lambda0 + model.atoms.total(), |t| model.cum_hazard(t));
        Ok(model)
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn draw(&self) -> &GammaProcessDraw {
        &self.draw
    }
}

impl HazardFunction for Lwb {
    fn hazard(&self, t: f64) -> f64 {
        if t < self.a {
            // theta_k < a - t
            self.lambda0 + self.atoms.c(self.atoms.count_below(self.a - t))
        } else {
            // theta_k <= t - a
            self.lambda0 + self.atoms.c(self.atoms.segment(t - self.a))
        }
    }

    fn cum_hazard(&self, t: f64) -> f64 {
        let a = self.a;
        let integral: f64 = if t < a {
            self.draw
                .atoms()
                .filter(|(th, _)| *th < a)
                .map(|(th, w)| w * t.min(a - th))
                .sum()
        } else {
            self.draw
                .atoms()
                .map(|(th, w)| w * ((a - th).max(0.0) + (t - a - th).max(0.0)))
                .sum()
        };
        self.lambda0 * t + integral
    }

    fn invert(&self, target: f64) -> SampleOutcome {
        self.knots.invert(target)
    }

    fn cum_hazard_limit(&self) -> f64 {
        self.knots.limit()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.knots.times()[1..].to_vec()
    }
}

/// Superposition bathtub: `lambda0 + G1((t, inf)) + G2([0, t])`, a DFR part
/// driven by `G1` plus an IFR part driven by `G2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sbt {
    lambda0: f64,
    early: GammaProcessDraw,
    late: GammaProcessDraw,
    early_atoms: OrderedAtoms,
    late_atoms: OrderedAtoms,
    knots: LinearKnots,
}

impl Sbt {
    /// `early` drives the decreasing part, `late` the increasing part.
    pub fn new(lambda0: f64, early: GammaProcessDraw, late: GammaProcessDraw) -> Result<Self> {
        check_rate("lambda0", lambda0)?;
        let early_atoms = early.ordered();
        let late_atoms = late.ordered();
        let grid: Vec<f64> = std::iter::once(0.0)
            .chain(early_atoms.thetas_sorted().iter().copied())
            .chain(late_atoms.thetas_sorted().iter().copied())
            .collect();
        let tail_slope = lambda0 + late_atoms.total();
        let mut model = Self {
            lambda0,
            early,
            late,
            early_atoms,
            late_atoms,
            knots: LinearKnots {
                times: Vec::new(),
                values: Vec::new(),
                tail_slope,
            },
        };
        model.knots = LinearKnots::new(grid, tail_slope, |t| model.cum_hazard(t));
        Ok(model)
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn early(&self) -> &GammaProcessDraw {
        &self.early
    }

    pub fn late(&self) -> &GammaProcessDraw {
        &self.late
    }
}

impl HazardFunction for Sbt {
    fn hazard(&self, t: f64) -> f64 {
        self.lambda0
            + self.early_atoms.tail(self.early_atoms.segment(t))
            + self.late_atoms.c(self.late_atoms.segment(t))
    }

    fn cum_hazard(&self, t: f64) -> f64 {
        let dfr: f64 = self.early.atoms().map(|(th, w)| w * t.min(th)).sum();
        let ifr: f64 = self.late.atoms().map(|(th, w)| w * (t - th).max(0.0)).sum();
        self.lambda0 * t + dfr + ifr
    }

    fn invert(&self, target: f64) -> SampleOutcome {
        self.knots.invert(target)
    }

    fn cum_hazard_limit(&self) -> f64 {
        self.knots.limit()
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.knots.times()[1..].to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lwb_example() -> Lwb {
        let g = GammaProcessDraw::from_atoms(&[(0.5, 1.0), (1.5, 0.5)]).unwrap();
        Lwb::new(0.1, 2.0, g).unwrap()
    }

    #[test]
    fn lwb_hazard_examples() {
        let m = lwb_example();
        assert_relative_eq!(m.hazard(1.8), 0.1, max_relative = 1e-15);
        assert_relative_eq!(m.hazard(0.0), 1.6, max_relative = 1e-15);
        assert_relative_eq!(m.hazard(3.0), 1.1, max_relative = 1e-15);
        assert_relative_eq!(m.hazard(2.0), 0.1, max_relative = 1e-15);
    }

    #[test]
    fn lwb_cum_hazard_matches_piecewise_integration() {
        let m = lwb_example();
        // Step hazard on [0, 3]: 1.6 on [0, 0.5), 1.1 on [0.5, 1.5),
        // 0.1 on [1.5, 2.5), 1.1 on [2.5, 3].
        let oracle = 1.6 * 0.5 + 1.1 * 1.0 + 0.1 * 1.0 + 1.1 * 0.5;
        assert_relative_eq!(oracle, 2.55, max_relative = 1e-15);
        assert_relative_eq!(m.cum_hazard(3.0), 2.55, max_relative = 1e-14);
    }

    #[test]
    fn lwb_grid_has_reflected_atoms() {
        let m = lwb_example();
        assert_eq!(m.breakpoints(), vec![0.5, 1.5, 2.0, 2.5, 3.5]);
    }

    #[test]
    fn lwb_inversion_round_trip() {
        let m = lwb_example();
        for x in [0.01, 0.5, 0.8, 1.9, 2.0, 2.55, 10.0] {
            let t = m.invert(x).time().unwrap();
            assert_relative_eq!(m.cum_hazard(t), x, max_relative = 1e-13);
        }
    }

    #[test]
    fn lwb_zero_background_flat_segment() {
        let g = GammaProcessDraw::from_atoms(&[(0.5, 1.0)]).unwrap();
        let m = Lwb::new(0.0, 2.0, g).unwrap();
        // Hazard vanishes on [1.5, 2.5); Lambda is flat there at 1.5.
        assert_eq!(m.cum_hazard(1.5), 1.5);
        assert_eq!(m.cum_hazard(2.5), 1.5);
        assert_eq!(m.invert(1.5), SampleOutcome::Finite(2.5));
        assert_relative_eq!(m.invert(1.6).time().unwrap(), 2.6, max_relative = 1e-14);
    }

    #[test]
    fn lwb_at_origin_is_ifr() {
        let g = GammaProcessDraw::from_atoms(&[(1.0, 0.6), (2.0, 0.4)]).unwrap();
        let m = Lwb::new(0.5, 0.0, g).unwrap();
        assert_relative_eq!(m.cum_hazard(3.0), 3.1, max_relative = 1e-15);
    }

    #[test]
    fn lwb_rejects_negative_symmetry_point() {
        assert!(Lwb::new(0.1, -1.0, GammaProcessDraw::empty()).is_err());
    }

    #[test]
    fn sbt_hand_example() {
        let early = GammaProcessDraw::from_atoms(&[(0.5, 2.0)]).unwrap();
        let late = GammaProcessDraw::from_atoms(&[(2.0, 1.0)]).unwrap();
        let m = Sbt::new(0.1, early, late).unwrap();
        assert_relative_eq!(m.hazard(0.25), 2.1, max_relative = 1e-15);
        assert_relative_eq!(m.hazard(1.0), 0.1, max_relative = 1e-15);
        assert_relative_eq!(m.hazard(3.0), 1.1, max_relative = 1e-15);
        // 0.1*3 + 2*0.5 + 1*(3-2)
        assert_relative_eq!(m.cum_hazard(3.0), 2.3, max_relative = 1e-15);
        assert_eq!(m.breakpoints(), vec![0.5, 2.0]);
        let t = m.invert(2.3).time().unwrap();
        assert_relative_eq!(t, 3.0, max_relative = 1e-14);
    }
}
