//! Model-free estimators used to check simulated data: the product-limit
//! (Kaplan-Meier) survival curve, the one-sample Kolmogorov-Smirnov
//! distance and equal-width histograms.

use std::io::Write;

use serde::Serialize;

use crate::error::domain;
use crate::inference::Dataset;
use crate::Result;

/// Right-continuous step function: `initial` before the first breakpoint,
/// `values[i]` on `[breakpoints[i], breakpoints[i+1])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepFunction {
    initial: f64,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(initial: f64, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return domain("step function needs one value per breakpoint");
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return domain("step function breakpoints must be strictly increasing");
        }
        Ok(Self {
            initial,
            breakpoints,
            values,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.breakpoints.partition_point(|b| *b <= t) {
            0 => self.initial,
            i => self.values[i - 1],
        }
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `t,value` rows: the initial level at `t = 0`, then each breakpoint
    /// with the level that starts there.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,value")?;
        writeln!(out, "0,{}", self.initial)?;
        for (t, v) in self.breakpoints.iter().zip(&self.values) {
            writeln!(out, "{t},{v}")?;
        }
        Ok(())
    }
}

/// Product-limit estimate of the survival function.
///
/// Tied event times form one step; records censored at an event time are
/// still at risk at that time.
pub fn kaplan_meier(data: &Dataset) -> StepFunction {
    let mut records: Vec<(f64, bool)> = data
        .records()
        .iter()
        .map(|r| (r.time, r.observed))
        .collect();
    records.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut at_risk = records.len();
    let mut level = 1.0;
    let mut breakpoints = Vec::new();
    let mut values = Vec::new();
    let mut i = 0;
    while i < records.len() {
        let t = records[i].0;
        let mut deaths = 0usize;
        let mut leaving = 0usize;
        while i < records.len() && records[i].0 == t {
            deaths += usize::from(records[i].1);
            leaving += 1;
            i += 1;
        }
        if deaths > 0 {
            level *= 1.0 - deaths as f64 / at_risk as f64;
            breakpoints.push(t);
            values.push(level);
        }
        at_risk -= leaving;
    }
    StepFunction {
        initial: 1.0,
        breakpoints,
        values,
    }
}

/// `sup_x |F_n(x) - F(x)|`, evaluated on both sides of each sample jump.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |acc: f64, (i, &x)| {
        let f = cdf(x);
        let above = ((i + 1) as f64 / n - f).abs();
        let below = (i as f64 / n - f).abs();
        acc.max(above).max(below)
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BinSpec {
    Count(usize),
    Width(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width bins covering `[0, max(samples)]`; the last bin is closed.
pub fn histogram(samples: &[f64], spec: BinSpec) -> Result<Vec<Bin>> {
    if samples.is_empty() {
        return domain("histogram needs at least one sample");
    }
    if let Some(x) = samples.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
        return domain(format!("histogram samples must be finite and >= 0, got {x}"));
    }
    let max = samples.iter().copied().fold(0.0, f64::max);
    let (bins, width) = match spec {
        BinSpec::Count(0) => return domain("bin count must be positive"),
        BinSpec::Count(c) => (c, if max > 0.0 { max / c as f64 } else { 1.0 }),
        BinSpec::Width(w) if !(w > 0.0 && w.is_finite()) => {
            return domain(format!("bin width must be positive, got {w}"))
        }
        BinSpec::Width(w) => (((max / w).ceil() as usize).max(1), w),
    };
    let mut out: Vec<Bin> = (0..bins)
        .map(|i| Bin {
            lo: i as f64 * width,
            hi: (i + 1) as f64 * width,
            count: 0,
        })
        .collect();
    for &x in samples {
        let idx = ((x / width).floor() as usize).min(bins - 1);
        out[idx].count += 1;
    }
    Ok(out)
}
