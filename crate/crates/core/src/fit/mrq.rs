//! The bivariate linear mean-residual quantile model
//!
//! `Q₁(u₁) = -(a₁+b₁) ln(1-u₁) - 2b₁u₁`,
//! `Q₂₁(u₂|u₁) = -(a₂ + c + (b₂+d)u₁) ln(1-u₂) - 2(c + du₁)u₂`,
//!
//! used as a competitor in model comparisons.

use serde::{Deserialize, Serialize};

use crate::comoment::sample_lcomoments;
use crate::data::PairedSample;
use crate::error::{Error, Result};
use crate::lmom::sample_lmoments;
use crate::numeric::{brent, try_integrate, try_integrate_unit, NumericConfig};

use super::sample_product_mean;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MrqParams {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MrqFit {
    pub params: MrqParams,
    pub warnings: Vec<String>,
}

/// `-A ln(1-u) - 2Cu` and its inverse.
fn lin_mrq_quantile(a: f64, c: f64, u: f64) -> f64 {
    -a * (-u).ln_1p() - 2.0 * c * u
}

fn lin_mrq_cdf(a: f64, c: f64, x: f64, cfg: &NumericConfig) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let mut hi = 0.5;
    while lin_mrq_quantile(a, c, hi) < x {
        hi = 0.5 * (1.0 + hi);
        if hi >= 1.0 {
            return Ok(1.0);
        }
    }
    brent(|u| lin_mrq_quantile(a, c, u) - x, 0.0, hi, 1e-3 * cfg.root_tol, cfg.root_max_iter)
}

impl MrqParams {
    /// Parameter constraints that fail for these values.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.a1 > 0.0) {
            v.push(format!("a1 = {} must be positive", self.a1));
        }
        if !(self.a1 + self.b1 > 0.0) {
            v.push(format!("a1 + b1 = {} must be positive", self.a1 + self.b1));
        }
        if !(self.a2 > 0.0) {
            v.push(format!("a2 = {} must be positive", self.a2));
        }
        if !(self.a2 + self.c > 0.0) {
            v.push(format!("a2 + c = {} must be positive", self.a2 + self.c));
        }
        if !(self.a2 + self.b2 >= self.c + self.d) {
            v.push(format!("a2 + b2 = {} must be at least c + d = {}", self.a2 + self.b2, self.c + self.d));
        }
        v
    }

    fn check(&self) -> Result<()> {
        match self.violations().first() {
            Some(msg) => Err(Error::InvalidParameter(msg.clone())),
            None => Ok(()),
        }
    }

    fn cond_coeffs(&self, u1: f64) -> (f64, f64) {
        (self.a2 + self.c + (self.b2 + self.d) * u1, self.c + self.d * u1)
    }

    pub fn quantile1(&self, u1: f64) -> f64 {
        lin_mrq_quantile(self.a1 + self.b1, self.b1, u1)
    }

    pub fn conditional_quantile(&self, u1: f64, u2: f64) -> f64 {
        let (a, c) = self.cond_coeffs(u1);
        lin_mrq_quantile(a, c, u2)
    }

    pub fn cdf1(&self, x: f64, cfg: &NumericConfig) -> Result<f64> {
        lin_mrq_cdf(self.a1 + self.b1, self.b1, x, cfg)
    }

    /// `F₂₁(x₂ | u₁)`, the level `u₂` with `Q₂₁(u₂|u₁) = x₂`.
    pub fn conditional_cdf(&self, u1: f64, x2: f64, cfg: &NumericConfig) -> Result<f64> {
        let (a, c) = self.cond_coeffs(u1);
        lin_mrq_cdf(a, c, x2, cfg)
    }

    /// L-covariance of X₁ toward X₂ under the survival construction
    /// `F̄(x₁, x₂) = F̄₁(x₁) F̄₂₁(x₂ | u₁)`.
    pub fn lcov12(&self, cfg: &NumericConfig) -> Result<f64> {
        let q1 = |v: f64| (self.a1 + self.b1) / v - 2.0 * self.b1;
        try_integrate_unit(
            |u1, v1| {
                if u1 == 0.0 {
                    return Ok(0.0);
                }
                let inner = try_integrate(
                    |u2| Ok(2.0 * (u2 - self.conditional_cdf(u1, self.conditional_quantile(0.0, u2), cfg)?)),
                    0.0,
                    1.0,
                    cfg,
                )?;
                Ok(v1 * q1(v1) * inner)
            },
            0.0,
            0.0,
            cfg,
        )
    }
}

/// Both quantile functions of the competitor model.
pub fn mrq_quantile(p: &MrqParams, u1: f64, u2: f64) -> Result<(f64, f64)> {
    p.check()?;
    for u in [u1, u2] {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::domain("mrq_quantile", format!("u = {u} outside [0, 1)")));
        }
    }
    Ok((p.quantile1(u1), p.conditional_quantile(u1, u2)))
}

/// L-moment fit of the competitor.
///
/// `a₁ = l₁(X₁)`, `b₁ = 6l₂(X₁) - 3a₁`, `a₂ = l₁(X₂)`, `c = 6l₂(X₂) - 3a₂`.
/// The product moment is `a₁a₂ + b₂λ₂(X₁)` and the L-covariance of X₂
/// toward X₁ is `b₂/3`; neither involves `d`, so `b₂` comes from the
/// product moment and `d` from the L-covariance of X₁ toward X₂.
pub fn fit_mrq(s: &PairedSample, cfg: &NumericConfig) -> Result<MrqFit> {
    if s.n() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: s.n() });
    }
    let l1 = sample_lmoments(&s.x1, 2)?;
    let l2 = sample_lmoments(&s.x2, 2)?;
    let (a1, a2) = (l1.l1, l2.l1);
    let b1 = 6.0 * l1.l2 - 3.0 * a1;
    let c = 6.0 * l2.l2 - 3.0 * a2;
    let lam2_1 = a1 / 2.0 + b1 / 6.0;
    let b2 = (sample_product_mean(s) - a1 * a2) / lam2_1;
    let mut warnings = Vec::new();
    let mut p = MrqParams { a1, b1, a2, b2, c, d: 0.0 };
    match fit_d(&p, s, cfg) {
        Ok((d, mut w)) => {
            p.d = d;
            warnings.append(&mut w);
        }
        Err(e) => warnings.push(format!("d not identified ({e}); set to 0")),
    }
    warnings.extend(p.violations());
    Ok(MrqFit { params: p, warnings })
}

/// Match the sample L-covariance of X₁ toward X₂ over the range of `d` for
/// which every conditional quantile function stays increasing.
fn fit_d(p: &MrqParams, s: &PairedSample, cfg: &NumericConfig) -> Result<(f64, Vec<String>)> {
    let target = sample_lcomoments(s)?.l2_12;
    let lo = -(p.a2 + p.c + p.b2);
    let hi = p.a2 - p.c + p.b2;
    if !(lo < hi) {
        return Err(Error::Infeasible(format!("empty range for d: ({lo}, {hi})")));
    }
    let g = |d: f64| MrqParams { d, ..*p }.lcov12(cfg).map(|v| v - target);
    const STEPS: usize = 40;
    let pts: Vec<f64> = (0..=STEPS).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / (STEPS as f64 + 1.0)).collect();
    let vals: Vec<f64> = pts.iter().map(|&d| g(d)).collect::<Result<_>>()?;
    for k in 0..STEPS {
        if vals[k] == 0.0 {
            return Ok((pts[k], Vec::new()));
        }
        if vals[k].signum() != vals[k + 1].signum() {
            let err = std::cell::RefCell::new(None);
            let d = brent(
                |d| {
                    g(d).unwrap_or_else(|e| {
                        err.borrow_mut().get_or_insert(e);
                        f64::NAN
                    })
                },
                pts[k],
                pts[k + 1],
                1e-10 * (hi - lo),
                cfg.root_max_iter,
            );
            if let Some(e) = err.into_inner() {
                return Err(e);
            }
            return Ok((d?, Vec::new()));
        }
    }
    let (k, _) = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("grid is non-empty");
    Ok((pts[k], vec![format!("L-covariance {target} not attainable; d chosen to minimize the mismatch")]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> MrqParams {
        MrqParams { a1: 2.798, b1: 0.159, a2: 3.086, b2: 4.628, c: 0.086, d: -7.16 }
    }

    #[test]
    fn quantile_examples() {
        let p = MrqParams { a1: 1.0, b1: 0.0, ..reference() };
        let (q1, _) = mrq_quantile(&p, 0.5, 0.5).unwrap();
        assert!((q1 - 2f64.ln()).abs() < 1e-15);
        let (q1, _) = mrq_quantile(&reference(), 0.5, 0.5).unwrap();
        assert!((q1 - (2.957 * 2f64.ln() - 0.159)).abs() < 1e-12);
        let (_, q21) = mrq_quantile(&reference(), 0.0, 0.5).unwrap();
        assert!((q21 - (3.172 * 2f64.ln() - 0.086)).abs() < 1e-12);
        let bad = MrqParams { a1: -1.0, ..reference() };
        assert!(mrq_quantile(&bad, 0.5, 0.5).is_err());
    }

    #[test]
    fn cdf_inverts_quantile() {
        let cfg = NumericConfig::default();
        let p = reference();
        for &u in &[0.01, 0.2, 0.5, 0.9, 0.999] {
            assert!((p.cdf1(p.quantile1(u), &cfg).unwrap() - u).abs() < 1e-10);
            let x = p.conditional_quantile(0.3, u);
            assert!((p.conditional_cdf(0.3, x, &cfg).unwrap() - u).abs() < 1e-10);
        }
    }

    #[test]
    fn fit_second_dataset() {
        let cfg = NumericConfig::default();
        let s = PairedSample::builtin("components").unwrap();
        let f = fit_mrq(&s, &cfg).unwrap();
        let p = f.params;
        assert_eq!(p.a1, s.x1.iter().sum::<f64>() / 20.0);
        assert!((p.a1 - 2.798).abs() < 1e-3 && (p.b1 - 0.159).abs() < 1e-3);
        assert!((p.a2 - 3.086).abs() < 1e-3 && (p.c - 0.086).abs() < 1e-3);
        // b₂ reproduces the sample product moment exactly
        let lam2 = p.a1 / 2.0 + p.b1 / 6.0;
        assert!((p.a1 * p.a2 + p.b2 * lam2 - sample_product_mean(&s)).abs() < 1e-12);
    }

    #[test]
    fn lcov_is_zero_without_dependence() {
        let cfg = NumericConfig::default();
        let p = MrqParams { b2: 0.0, d: 0.0, ..reference() };
        assert!(p.lcov12(&cfg).unwrap().abs() < 1e-9);
    }
}
