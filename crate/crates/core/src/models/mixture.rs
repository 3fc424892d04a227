//! Two-component mixture of a DFR and an IFR failure-time law (MBT).

use crate::error::domain;
use crate::models::{Dfr, HazardFunction, Ifr, SampleOutcome};
use crate::rng::RandomStream;
use crate::Result;

// Bisection is capped well above the ~64 halvings a double range needs.
const MAX_BISECTIONS: usize = 400;
const MAX_BRACKET_DOUBLINGS: usize = 2100;

/// Survival `pi * S_dfr(t) + (1 - pi) * S_ifr(t)`.
///
/// The resulting hazard is not bathtub-shaped in general, only U-shaped at
/// early times.
#[derive(Debug, Clone, PartialEq)]
pub struct Mbt {
    pi: f64,
    dfr: Dfr,
    ifr: Ifr,
}

impl Mbt {
    pub fn new(pi: f64, dfr: Dfr, ifr: Ifr) -> Result<Self> {
        if !(pi > 0.0 && pi <= 1.0) {
            return domain(format!("mixture weight pi must lie in (0, 1], got {pi}"));
        }
        Ok(Self { pi, dfr, ifr })
    }

    pub fn pi(&self) -> f64 {
        self.pi
    }

    pub fn dfr(&self) -> &Dfr {
        &self.dfr
    }

    pub fn ifr(&self) -> &Ifr {
        &self.ifr
    }

    // log(pi), log(1 - pi) adjusted by each component's cumulative hazard.
    fn log_terms(&self, t: f64) -> (f64, f64) {
        let l1 = self.pi.ln() - self.dfr.cum_hazard(t);
        let l2 = (1.0 - self.pi).ln() - self.ifr.cum_hazard(t);
        (l1, l2)
    }

    /// Pick a component with probability `(pi, 1 - pi)` and invert it.
    pub fn sample(&self, stream: &mut RandomStream) -> SampleOutcome {
        let component = stream
            .categorical(&[self.pi, 1.0 - self.pi])
            .expect("pi validated in (0, 1]");
        let target = -stream.uniform().ln();
        if component == 0 {
            self.dfr.invert(target)
        } else {
            self.ifr.invert(target)
        }
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

impl HazardFunction for Mbt {
    /// Component hazards weighted by each component's share of the survival.
    fn hazard(&self, t: f64) -> f64 {
        let (l1, l2) = self.log_terms(t);
        let total = log_sum_exp(l1, l2);
        let p1 = (l1 - total).exp();
        let p2 = (l2 - total).exp();
        let mut h = 0.0;
        if p1 > 0.0 {
            h += p1 * self.dfr.hazard(t);
        }
        if p2 > 0.0 {
            h += p2 * self.ifr.hazard(t);
        }
        h
    }

    fn cum_hazard(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let (l1, l2) = self.log_terms(t);
        (-log_sum_exp(l1, l2)).max(0.0)
    }

    fn survival(&self, t: f64) -> f64 {
        self.pi * self.dfr.survival(t) + (1.0 - self.pi) * self.ifr.survival(t)
    }

    fn density(&self, t: f64) -> f64 {
        self.pi * self.dfr.density(t) + (1.0 - self.pi) * self.ifr.density(t)
    }

    /// No closed form: the root is bracketed by the component inverses and
    /// refined by bisection until the bracket cannot shrink.
    fn invert(&self, target: f64) -> SampleOutcome {
        if target <= 0.0 {
            return SampleOutcome::Finite(0.0);
        }
        if target > self.cum_hazard_limit() {
            return SampleOutcome::Infinite;
        }
        let t1 = self.dfr.invert(target).time();
        let t2 = if self.pi < 1.0 {
            self.ifr.invert(target).time()
        } else {
            None
        };
        let (mut lo, hi) = match (t1, t2) {
            (Some(a), Some(b)) => (a.min(b), Some(a.max(b))),
            (Some(a), None) => (a, if self.pi < 1.0 { None } else { Some(a) }),
            (None, Some(b)) => (b, None),
            (None, None) => (0.0, None),
        };
        let mut hi = match hi {
            Some(h) => h,
            None => {
                let mut h = lo.max(1.0);
                let mut doublings = 0;
                while self.cum_hazard(h) < target {
                    lo = h;
                    h *= 2.0;
                    doublings += 1;
                    if doublings > MAX_BRACKET_DOUBLINGS || !h.is_finite() {
                        return SampleOutcome::Infinite;
                    }
                }
                h
            }
        };
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cum_hazard(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let err_lo = (self.cum_hazard(lo) - target).abs();
        let err_hi = (self.cum_hazard(hi) - target).abs();
        SampleOutcome::Finite(if err_lo < err_hi { lo } else { hi })
    }

    fn cum_hazard_limit(&self) -> f64 {
        let l1 = self.pi.ln() - self.dfr.cum_hazard_limit();
        let l2 = (1.0 - self.pi).ln() - self.ifr.cum_hazard_limit();
        -log_sum_exp(l1, l2)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.dfr.breakpoints();
        b.extend(self.ifr.breakpoints());
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma_process::GammaProcessDraw;
    use approx::assert_relative_eq;

    fn example(pi: f64) -> Mbt {
        let g1 = GammaProcessDraw::from_atoms(&[(0.5, 2.0), (1.0, 0.5)]).unwrap();
        let g2 = GammaProcessDraw::from_atoms(&[(2.0, 1.5), (3.0, 1.0)]).unwrap();
        Mbt::new(pi, Dfr::new(0.1, g1).unwrap(), Ifr::new(0.2, g2).unwrap()).unwrap()
    }

    #[test]
    fn pi_domain() {
        let m = example(0.5);
        assert!(Mbt::new(0.0, m.dfr.clone(), m.ifr.clone()).is_err());
        assert!(Mbt::new(1.5, m.dfr.clone(), m.ifr.clone()).is_err());
        assert!(Mbt::new(1.0, m.dfr.clone(), m.ifr.clone()).is_ok());
    }

    #[test]
    fn survival_and_cum_hazard_agree() {
        let m = example(0.3);
        for t in [0.0, 0.2, 0.7, 1.5, 2.5, 4.0] {
            assert_relative_eq!(m.survival(t), (-m.cum_hazard(t)).exp(), max_relative = 1e-13);
            assert_relative_eq!(m.hazard(t) * m.survival(t), m.density(t), max_relative = 1e-13);
        }
        assert_eq!(m.cum_hazard(0.0), 0.0);
    }

    #[test]
    fn identical_components_collapse() {
        // With no atoms both components are Exp(0.3).
        let ifr_const = Ifr::new(0.3, GammaProcessDraw::empty()).unwrap();
        let dfr_const = Dfr::new(0.3, GammaProcessDraw::empty()).unwrap();
        let same = Mbt::new(0.4, dfr_const.clone(), ifr_const).unwrap();
        for t in [0.0, 0.5, 1.0, 3.0] {
            assert_relative_eq!(same.survival(t), dfr_const.survival(t), max_relative = 1e-15);
            assert_relative_eq!(same.hazard(t), 0.3, max_relative = 1e-14);
        }
    }

    #[test]
    fn inversion_round_trip() {
        let m = example(0.5);
        for x in [1e-6, 0.1, 0.9, 2.0, 5.0, 20.0] {
            let t = m.invert(x).time().unwrap();
            assert!((m.cum_hazard(t) - x).abs() <= 1e-12 * x.max(1.0), "x={x}");
        }
    }

    #[test]
    fn defective_component_mixture() {
        let g1 = GammaProcessDraw::from_atoms(&[(1.0, 1.0)]).unwrap();
        let dfr = Dfr::new(0.0, g1).unwrap();
        let ifr = Ifr::new(1.0, GammaProcessDraw::empty()).unwrap();
        let m = Mbt::new(0.5, dfr.clone(), ifr).unwrap();
        // Half the mass never fails: S(inf) = 0.5 e^-1.
        assert_relative_eq!(m.cum_hazard_limit(), 1.0 + 2f64.ln(), max_relative = 1e-15);
        assert_eq!(m.invert(3.0), SampleOutcome::Infinite);
        let t = m.invert(1.5).time().unwrap();
        assert_relative_eq!(m.cum_hazard(t), 1.5, max_relative = 1e-12);
        let pure = Mbt::new(1.0, dfr, Ifr::new(1.0, GammaProcessDraw::empty()).unwrap()).unwrap();
        assert_relative_eq!(pure.cum_hazard_limit(), 1.0, max_relative = 1e-15);
        assert_eq!(pure.invert(1.5), SampleOutcome::Infinite);
    }
}
