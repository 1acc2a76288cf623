//! Kolmogorov-Smirnov statistics on probability-integral-transform values,
//! Kolmogorov p-values and Q-Q plot data.

use std::io::Write;

use serde::Serialize;

use crate::data::PairedSample;
use crate::error::{Error, Result};
use crate::fit::MrqParams;
use crate::model::{BivariateParams, Clamp, MarginalParams};
use crate::numeric::NumericConfig;

/// How the empirical distribution function is compared with the PIT values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KsConvention {
    /// `max_i max(i/n - u₍ᵢ₎, u₍ᵢ₎ - (i-1)/n)`, the usual sup over both sides
    /// of each ECDF step.
    #[default]
    TwoSided,
    /// `max_i |i/n - u₍ᵢ₎|`, the ECDF evaluated only at the observations.
    AtObservations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GofMethod {
    Marginal,
    ConditionalPooled,
    ConditionalPerPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionalMode {
    Pooled,
    PerPoint,
}

/// K-S statistic of the whole second column with u₁ fixed at one observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerPointStat {
    pub x1: f64,
    pub u1: f64,
    pub d_stat: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofResult {
    pub method: GofMethod,
    pub convention: KsConvention,
    pub n: usize,
    pub d_stat: f64,
    /// Asymptotic Kolmogorov p-value; parameters estimated from the same data
    /// are ignored, so it is approximate.
    pub p_value: f64,
    pub pit_values: Vec<f64>,
    /// Observations outside the model support.
    pub clamped: usize,
    /// For per-point mode, one entry per observation sorted by x₁; the
    /// headline statistic is the one at the smallest x₁.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_point: Option<Vec<PerPointStat>>,
}

pub fn ks_statistic(pits: &[f64], convention: KsConvention) -> f64 {
    let mut u = pits.to_vec();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    u.iter()
        .enumerate()
        .map(|(i, &ui)| {
            let hi = (i + 1) as f64 / n;
            match convention {
                KsConvention::TwoSided => (hi - ui).max(ui - i as f64 / n),
                KsConvention::AtObservations => (hi - ui).abs(),
            }
        })
        .fold(0.0, f64::max)
}

/// `P(√n D > λ)` from the limiting Kolmogorov distribution.
pub fn kolmogorov_pvalue(n: usize, d: f64) -> f64 {
    kolmogorov_survival((n as f64).sqrt() * d)
}

/// Survival function of the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let p = if lambda < 1.0 {
        // theta-function form converges quickly for small λ
        let f = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let s: f64 = (1..=20).map(|k| (-((2 * k - 1) as f64).powi(2) * f).exp()).sum();
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * (k * k) as f64 * lambda * lambda).exp()
            })
            .sum();
        2.0 * s
    };
    p.clamp(0.0, 1.0)
}

/// Two-sample K-S statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let ne = n * m / (n + m);
    Ok((d, kolmogorov_survival(ne.sqrt() * d)))
}

fn result(method: GofMethod, convention: KsConvention, pits: Vec<f64>, clamped: usize) -> GofResult {
    let d = ks_statistic(&pits, convention);
    GofResult {
        method,
        convention,
        n: pits.len(),
        d_stat: d,
        p_value: kolmogorov_pvalue(pits.len(), d),
        pit_values: pits,
        clamped,
        per_point: None,
    }
}

fn require(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InsufficientData { needed: 1, got: 0 })
    } else {
        Ok(())
    }
}

/// K-S of the first-margin PIT values `F₁(xᵢ)`.
pub fn ks_marginal(data: &[f64], p: &MarginalParams, cfg: &NumericConfig, convention: KsConvention) -> Result<GofResult> {
    require(data.len())?;
    let mut clamped = 0;
    let mut pits = Vec::with_capacity(data.len());
    for &x in data {
        let v = p.cdf(x, cfg)?;
        if v.clamp != Clamp::None {
            clamped += 1;
        }
        pits.push(v.u);
    }
    Ok(result(GofMethod::Marginal, convention, pits, clamped))
}

/// PIT values `F₂(x₂ⱼ / (1 + θu₁))` of the whole second column at one u₁.
fn conditional_pits(s: &PairedSample, u1: f64, bp: &BivariateParams, cfg: &NumericConfig) -> Result<(Vec<f64>, usize)> {
    let mut clamped = 0;
    let mut out = Vec::with_capacity(s.n());
    for &x2 in &s.x2 {
        let v = bp.m2.cdf(x2 / (1.0 + bp.theta * u1), cfg)?;
        if v.clamp != Clamp::None {
            clamped += 1;
        }
        out.push(v.u);
    }
    Ok((out, clamped))
}

/// Conditional K-S through `vᵢ = F₂(x₂ᵢ / (1 + θu₁ᵢ))`, `u₁ᵢ = F₁(x₁ᵢ)`.
pub fn ks_conditional(
    s: &PairedSample,
    bp: &BivariateParams,
    cfg: &NumericConfig,
    mode: ConditionalMode,
    convention: KsConvention,
) -> Result<GofResult> {
    require(s.n())?;
    let u1: Vec<f64> = s.x1.iter().map(|&x| bp.m1.cdf(x, cfg).map(|v| v.u)).collect::<Result<_>>()?;
    match mode {
        ConditionalMode::Pooled => {
            let mut clamped = 0;
            let mut pits = Vec::with_capacity(s.n());
            for (&x2, &u) in s.x2.iter().zip(&u1) {
                let v = bp.m2.cdf(x2 / (1.0 + bp.theta * u), cfg)?;
                if v.clamp != Clamp::None {
                    clamped += 1;
                }
                pits.push(v.u);
            }
            Ok(result(GofMethod::ConditionalPooled, convention, pits, clamped))
        }
        ConditionalMode::PerPoint => {
            let mut order: Vec<usize> = (0..s.n()).collect();
            order.sort_by(|&a, &b| s.x1[a].total_cmp(&s.x1[b]));
            let mut stats = Vec::with_capacity(s.n());
            let mut first = None;
            for &k in &order {
                let (pits, clamped) = conditional_pits(s, u1[k], bp, cfg)?;
                let d = ks_statistic(&pits, convention);
                stats.push(PerPointStat { x1: s.x1[k], u1: u1[k], d_stat: d, p_value: kolmogorov_pvalue(pits.len(), d) });
                if first.is_none() {
                    first = Some((pits, clamped));
                }
            }
            let (pits, clamped) = first.expect("sample is non-empty");
            let mut r = result(GofMethod::ConditionalPerPoint, convention, pits, clamped);
            r.per_point = Some(stats);
            Ok(r)
        }
    }
}

/// K-S of the competitor model's first margin.
pub fn mrq_ks_marginal(data: &[f64], p: &MrqParams, cfg: &NumericConfig, convention: KsConvention) -> Result<GofResult> {
    require(data.len())?;
    let pits = data.iter().map(|&x| p.cdf1(x, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(result(GofMethod::Marginal, convention, pits, 0))
}

/// Pooled conditional K-S of the competitor model: `vᵢ = F₂₁(x₂ᵢ | u₁ᵢ)`.
pub fn mrq_ks_conditional(s: &PairedSample, p: &MrqParams, cfg: &NumericConfig, convention: KsConvention) -> Result<GofResult> {
    require(s.n())?;
    let pits = s
        .pairs()
        .map(|(x1, x2)| p.conditional_cdf(p.cdf1(x1, cfg)?, x2, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(result(GofMethod::ConditionalPooled, convention, pits, 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlottingRule {
    /// `i/(n+1)`
    #[default]
    MeanRank,
    /// `(i - 1/2)/n`
    Hazen,
}

impl PlottingRule {
    pub fn position(self, i: usize, n: usize) -> f64 {
        match self {
            PlottingRule::MeanRank => i as f64 / (n as f64 + 1.0),
            PlottingRule::Hazen => (i as f64 - 0.5) / n as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QQRow {
    pub position: f64,
    pub empirical: f64,
    pub model: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QQData {
    pub rows: Vec<QQRow>,
}

/// Sorted data against model quantiles at the plotting positions.
pub fn qq_data<F: Fn(f64) -> Result<f64>>(data: &[f64], quantile: F, rule: PlottingRule) -> Result<QQData> {
    let n = data.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let mut x = data.to_vec();
    x.sort_by(f64::total_cmp);
    let rows = x
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let p = rule.position(i + 1, n);
            Ok(QQRow { position: p, empirical: e, model: quantile(p)? })
        })
        .collect::<Result<_>>()?;
    Ok(QQData { rows })
}

impl QQData {
    /// Tab-separated with a header line.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "position\tempirical\tmodel")?;
        for r in &self.rows {
            writeln!(w, "{:?}\t{:?}\t{:?}", r.position, r.empirical, r.model)?;
        }
        Ok(())
    }
}
