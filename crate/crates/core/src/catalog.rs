//! Named special cases with their natural parameterizations and closed-form
//! distribution functions.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BivariateParams, MarginalParams};
use crate::numeric::NumericConfig;
use crate::specfun::{beta, inv_reg_inc_beta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseId {
    ComplementaryBeta,
    Power,
    Uniform,
    Exponential,
    RescaledBeta,
    Pareto2,
    Pareto1,
    Loglogistic,
    Govindarajulu,
    Sine,
    ScaledT2,
}

impl CaseId {
    pub const ALL: [CaseId; 11] = [
        CaseId::ComplementaryBeta,
        CaseId::Power,
        CaseId::Uniform,
        CaseId::Exponential,
        CaseId::RescaledBeta,
        CaseId::Pareto2,
        CaseId::Pareto1,
        CaseId::Loglogistic,
        CaseId::Govindarajulu,
        CaseId::Sine,
        CaseId::ScaledT2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::ComplementaryBeta => "complementary-beta",
            CaseId::Power => "power",
            CaseId::Uniform => "uniform",
            CaseId::Exponential => "exponential",
            CaseId::RescaledBeta => "rescaled-beta",
            CaseId::Pareto2 => "pareto2",
            CaseId::Pareto1 => "pareto1",
            CaseId::Loglogistic => "loglogistic",
            CaseId::Govindarajulu => "govindarajulu",
            CaseId::Sine => "sine",
            CaseId::ScaledT2 => "scaled-t2",
        }
    }

    /// Names of the natural parameters of one marginal.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            CaseId::ComplementaryBeta => &["alpha", "beta"],
            CaseId::Power | CaseId::RescaledBeta => &["a", "b"],
            CaseId::Uniform => &["b"],
            CaseId::Exponential | CaseId::ScaledT2 => &["c"],
            CaseId::Pareto2 => &["b", "d"],
            CaseId::Pareto1 => &["sigma", "shape"],
            CaseId::Loglogistic => &["a", "b"],
            CaseId::Govindarajulu => &["sigma", "b"],
            CaseId::Sine => &["sigma"],
        }
    }

    pub fn has_closed_cdf(self) -> bool {
        self != CaseId::Govindarajulu
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown catalog case '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClosedForms {
    pub marginal_cdf: bool,
    pub conditional_survival: bool,
    pub joint_survival: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: CaseId,
    pub natural: [Vec<(&'static str, f64)>; 2],
    pub mapped: BivariateParams,
    pub closed: ClosedForms,
}

fn positive(id: CaseId, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("catalog", format!("{id}: {name} = {v} must be positive")))
    }
}

/// Map one marginal's natural parameters to `(c, α, β, location)`.
pub fn marginal(id: CaseId, p: &[f64]) -> Result<MarginalParams> {
    let names = id.param_names();
    if p.len() != names.len() {
        return Err(Error::InvalidParameter(format!(
            "{id} takes {} parameter(s) ({}), got {}",
            names.len(),
            names.join(", "),
            p.len()
        )));
    }
    if id != CaseId::ComplementaryBeta {
        for (n, &v) in names.iter().zip(p) {
            positive(id, n, v)?;
        }
    }
    let m = match id {
        CaseId::ComplementaryBeta => {
            let (a, b) = (p[0], p[1]);
            if !(a > -1.0 && b > -1.0) {
                return Err(Error::domain("catalog", format!("{id}: need α, β > -1, got {a}, {b}")));
            }
            MarginalParams::new(1.0 / beta(a + 1.0, b + 1.0)?, a, b)?
        }
        CaseId::Power => MarginalParams::new(p[1] / p[0], 1.0 / p[0] - 1.0, 0.0)?,
        CaseId::Uniform => MarginalParams::new(p[0], 0.0, 0.0)?,
        CaseId::Exponential => MarginalParams::new(p[0], 0.0, -1.0)?,
        CaseId::RescaledBeta => MarginalParams::new(p[1] / p[0], 0.0, 1.0 / p[0] - 1.0)?,
        CaseId::Pareto2 => MarginalParams::new(p[0] / p[1], 0.0, -1.0 - 1.0 / p[1])?,
        CaseId::Pareto1 => MarginalParams::new(p[0] / p[1], 0.0, -1.0 / p[1] - 1.0)?.with_location(p[0]),
        CaseId::Loglogistic => MarginalParams::new(p[0] * p[1], p[0] - 1.0, -(p[0] + 1.0))?,
        CaseId::Govindarajulu => MarginalParams::new(p[0] * p[1] * (p[1] + 1.0), p[1] - 1.0, 1.0)?,
        CaseId::Sine => MarginalParams::new(p[0] / PI, -0.5, -0.5)?,
        CaseId::ScaledT2 => MarginalParams::new(p[0], -1.5, -1.5)?,
    };
    Ok(m)
}

/// Recover natural parameters from mapped ones where the mapping is
/// invertible.
pub fn natural_from_marginal(id: CaseId, m: &MarginalParams) -> Result<Vec<f64>> {
    match id {
        CaseId::Power if m.beta == 0.0 => {
            let a = 1.0 / (m.alpha + 1.0);
            Ok(vec![a, m.c * a])
        }
        CaseId::Pareto2 if m.alpha == 0.0 && m.beta < -1.0 => {
            let d = -1.0 / (1.0 + m.beta);
            Ok(vec![m.c * d, d])
        }
        CaseId::Loglogistic if (m.alpha + m.beta + 2.0).abs() < 1e-12 => {
            let a = m.alpha + 1.0;
            Ok(vec![a, m.c / a])
        }
        _ => Err(Error::Unsupported(format!("no inverse mapping for {id} from {m:?}"))),
    }
}

/// Build a bivariate catalog entry from natural parameters of both marginals.
pub fn make_case(id: CaseId, p1: &[f64], p2: &[f64], theta: f64) -> Result<CatalogEntry> {
    let mapped = BivariateParams::new(marginal(id, p1)?, marginal(id, p2)?, theta)?;
    let names = id.param_names();
    let named = |p: &[f64]| names.iter().copied().zip(p.iter().copied()).collect::<Vec<_>>();
    let closed = id.has_closed_cdf();
    Ok(CatalogEntry {
        id,
        natural: [named(p1), named(p2)],
        mapped,
        closed: ClosedForms { marginal_cdf: closed, conditional_survival: closed, joint_survival: closed },
    })
}

impl CatalogEntry {
    fn param(&self, i: usize, k: usize) -> f64 {
        self.natural[i][k].1
    }

    fn component(&self, i: usize) -> Result<()> {
        if i < 2 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("component index {i} must be 0 or 1")))
        }
    }

    /// Exact marginal distribution function of component `i` (0 or 1).
    pub fn closed_marginal_cdf(&self, i: usize, x: f64, cfg: &NumericConfig) -> Result<f64> {
        self.component(i)?;
        let p = |k| self.param(i, k);
        let clamp01 = |v: f64| v.clamp(0.0, 1.0);
        let f = match self.id {
            CaseId::ComplementaryBeta => {
                let (a, b) = (p(0), p(1));
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    inv_reg_inc_beta(x, a + 1.0, b + 1.0, &cfg.special)?
                }
            }
            CaseId::Power => clamp01((x.max(0.0) / p(1)).powf(p(0))),
            CaseId::Uniform => clamp01(x / p(0)),
            CaseId::Exponential => -(-x.max(0.0) / p(0)).exp_m1(),
            CaseId::RescaledBeta => 1.0 - clamp01(1.0 - x / p(1)).powf(p(0)),
            CaseId::Pareto2 => 1.0 - (1.0 + x.max(0.0) / p(0)).powf(-p(1)),
            CaseId::Pareto1 => {
                if x <= p(0) {
                    0.0
                } else {
                    1.0 - (x / p(0)).powf(-p(1))
                }
            }
            CaseId::Loglogistic => {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0 / (1.0 + (x / p(1)).powf(-1.0 / p(0)))
                }
            }
            CaseId::Govindarajulu => {
                return Err(Error::Unsupported(
                    "govindarajulu has no tractable distribution function".into(),
                ))
            }
            CaseId::Sine => {
                let s = p(0);
                if x <= 0.0 {
                    0.0
                } else if x >= s {
                    1.0
                } else {
                    0.5 * (1.0 - (PI * x / s).cos())
                }
            }
            CaseId::ScaledT2 => {
                let c = p(0);
                0.5 * (1.0 + x / (16.0 * c * c + x * x).sqrt())
            }
        };
        Ok(f)
    }

    pub fn closed_marginal_survival(&self, i: usize, x: f64, cfg: &NumericConfig) -> Result<f64> {
        if self.id == CaseId::Exponential {
            self.component(i)?;
            return Ok((-x.max(0.0) / self.param(i, 0)).exp());
        }
        Ok(1.0 - self.closed_marginal_cdf(i, x, cfg)?)
    }

    /// `F̄₂(x₂ / (1 + θu₁))`.
    pub fn closed_conditional_survival(&self, u1: f64, x2: f64, cfg: &NumericConfig) -> Result<f64> {
        self.closed_marginal_survival(1, x2 / (1.0 + self.mapped.theta * u1), cfg)
    }

    /// `F̄₁(x₁) F̄₂(x₂ / (1 + θF₁(x₁)))`.
    pub fn closed_joint_survival(&self, x1: f64, x2: f64, cfg: &NumericConfig) -> Result<f64> {
        let u1 = self.closed_marginal_cdf(0, x1, cfg)?;
        Ok((1.0 - u1) * self.closed_conditional_survival(u1, x2, cfg)?)
    }

    /// A grid of `n` points spanning the bulk of marginal `i`.
    pub fn support_grid(&self, i: usize, n: usize, cfg: &NumericConfig) -> Result<Vec<f64>> {
        self.component(i)?;
        let m = if i == 0 { &self.mapped.m1 } else { &self.mapped.m2 };
        (1..=n)
            .map(|k| m.quantile(0.01 + 0.98 * (k as f64 - 0.5) / n as f64, cfg))
            .collect()
    }
}

/// Default natural parameters used by listings and tests.
pub fn example_params(id: CaseId) -> (Vec<f64>, Vec<f64>) {
    match id {
        CaseId::ComplementaryBeta => (vec![0.5, 1.5], vec![1.2, 0.3]),
        CaseId::Power => (vec![0.5, 2.0], vec![2.0, 1.5]),
        CaseId::Uniform => (vec![1.0], vec![2.0]),
        CaseId::Exponential => (vec![1.0], vec![2.0]),
        CaseId::RescaledBeta => (vec![2.0, 1.0], vec![0.5, 3.0]),
        CaseId::Pareto2 => (vec![1.0, 3.0], vec![2.0, 2.5]),
        CaseId::Pareto1 => (vec![1.0, 2.0], vec![2.0, 3.0]),
        CaseId::Loglogistic => (vec![0.5, 2.0], vec![0.3, 1.0]),
        CaseId::Govindarajulu => (vec![1.0, 2.0], vec![2.0, 0.5]),
        CaseId::Sine => (vec![1.0], vec![2.0]),
        CaseId::ScaledT2 => (vec![0.5], vec![1.0]),
    }
}
