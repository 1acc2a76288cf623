//! L-comoments: directed covariances of one variable with shifted Legendre
//! polynomials of the other's distribution function.

use serde::Serialize;

use crate::data::PairedSample;
use crate::error::{Error, Result};
use crate::lmom::{population_lmoments, sample_lmoments};
use crate::model::BivariateParams;
use crate::numeric::{try_integrate, try_integrate_unit, NumericConfig};
use crate::specfun::gauss_2f1;

/// L-covariance, L-coskewness and L-cokurtosis in both directions, with the
/// L-correlations and normalized ratios. `*_12` is X₁ toward X₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LComomentSet {
    pub l2_12: f64,
    pub l3_12: f64,
    pub l4_12: f64,
    pub l2_21: f64,
    pub l3_21: f64,
    pub l4_21: f64,
    pub rho12: f64,
    pub rho21: f64,
    pub ratio3_12: f64,
    pub ratio4_12: f64,
    pub ratio3_21: f64,
    pub ratio4_21: f64,
}

impl LComomentSet {
    fn build(raw12: [f64; 3], raw21: [f64; 3], lam2_1: f64, lam2_2: f64) -> Self {
        LComomentSet {
            l2_12: raw12[0],
            l3_12: raw12[1],
            l4_12: raw12[2],
            l2_21: raw21[0],
            l3_21: raw21[1],
            l4_21: raw21[2],
            rho12: raw12[0] / lam2_1,
            rho21: raw21[0] / lam2_2,
            ratio3_12: raw12[1] / lam2_1,
            ratio4_12: raw12[2] / lam2_1,
            ratio3_21: raw21[1] / lam2_2,
            ratio4_21: raw21[2] / lam2_2,
        }
    }

    pub fn raw(&self) -> [f64; 6] {
        [self.l2_12, self.l3_12, self.l4_12, self.l2_21, self.l3_21, self.l4_21]
    }
}

/// Derivatives of the shifted Legendre polynomials 2t-1, 6t²-6t+1 and
/// 20t³-30t²+12t-1.
fn legendre_slope(k: usize, t: f64) -> f64 {
    match k {
        0 => 2.0,
        1 => 12.0 * t - 6.0,
        _ => 60.0 * t * t - 60.0 * t + 12.0,
    }
}

/// `∫∫ (1-u₁)(u₂ - u₂₁) P'(u₂) q₁(u₁) du₂ du₁`, the Hoeffding covariance
/// written in probability coordinates.
fn directed_12(bp: &BivariateParams, k: usize, cfg: &NumericConfig) -> Result<f64> {
    let m1 = &bp.m1;
    try_integrate_unit(
        |u1, v1| {
            if u1 == 0.0 || bp.theta == 0.0 {
                return Ok(0.0);
            }
            let inner = try_integrate(
                |u2| Ok((u2 - bp.u21(u1, u2, cfg)?) * legendre_slope(k, u2)),
                0.0,
                1.0,
                cfg,
            )?;
            Ok(v1 * m1.qdf_split(u1, v1) * inner)
        },
        m1.alpha,
        m1.beta + 1.0,
        cfg,
    )
}

/// Population L-comoments.
///
/// The X₁-toward-X₂ quantities are double integrals evaluated by nested
/// adaptive quadrature. In the other direction the x₂-integral of the
/// survival difference is `(1-u₁) θu₁ λ₁(X₂)` for every u₁, which leaves
/// `θλ₁(X₂)/3` for the L-covariance and zero for the two higher orders.
pub fn population_lcomoments(bp: &BivariateParams, cfg: &NumericConfig) -> Result<LComomentSet> {
    let lm1 = population_lmoments(&bp.m1)?;
    let lm2 = population_lmoments(&bp.m2)?;
    let raw12 = [
        directed_12(bp, 0, cfg)?,
        directed_12(bp, 1, cfg)?,
        directed_12(bp, 2, cfg)?,
    ];
    let raw21 = [bp.theta * lm2.l1 / 3.0, 0.0, 0.0];
    Ok(LComomentSet::build(raw12, raw21, lm1.l2, lm2.l2))
}

/// L-covariance of X₁ toward X₂ alone.
pub fn population_lcov12(bp: &BivariateParams, cfg: &NumericConfig) -> Result<f64> {
    population_lmoments(&bp.m1)?;
    population_lmoments(&bp.m2)?;
    directed_12(bp, 0, cfg)
}

/// Hypergeometric closed forms for the power case next to the
/// quadrature values they are supposed to equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFormCheck {
    pub formula_l2_12: f64,
    pub quadrature_l2_12: f64,
    pub l2_discrepancy: f64,
    pub formula_rho12: f64,
    pub quadrature_rho12: f64,
    pub rho_discrepancy: f64,
}

/// Evaluate the hypergeometric power-case expressions
///
/// `L₂(1,2) = -c₁a₁ ₂F₁(1/a₁, a₂; 1+1/a₁; -θ) - (₂F₁(1+1/a₁, a₂; 2+1/a₁; -θ) + a₁)/(1+a₁)`
///
/// `ρ₁₂ = -(6+5α₁+α₁²)/(α₁+1) ₂F₁(α₁+1, 1/(α₂+1); α₁+2; -θ)
///        - (₂F₁(α₁+1, 1/(α₂+1); α₁+3; -θ)(α₁+1) + 1)/(α₁+1)`
///
/// verbatim and compare them with quadrature. They do not agree; the
/// quadrature values are the reference.
pub fn power_case_lcov_closed_form(bp: &BivariateParams, cfg: &NumericConfig) -> Result<PowerFormCheck> {
    let (m1, m2) = (&bp.m1, &bp.m2);
    if m1.beta != 0.0 || m2.beta != 0.0 {
        return Err(Error::InvalidParameter("power case requires β₁ = β₂ = 0".into()));
    }
    let sf = &cfg.special;
    let (a1, a2) = (1.0 / (m1.alpha + 1.0), 1.0 / (m2.alpha + 1.0));
    let z = -bp.theta;
    let formula_l2 = -m1.c * a1 * gauss_2f1(1.0 / a1, a2, 1.0 + 1.0 / a1, z, sf)?
        - (gauss_2f1(1.0 + 1.0 / a1, a2, 2.0 + 1.0 / a1, z, sf)? + a1) / (1.0 + a1);
    let al = m1.alpha;
    let b = 1.0 / (m2.alpha + 1.0);
    let formula_rho = -(6.0 + 5.0 * al + al * al) / (al + 1.0) * gauss_2f1(al + 1.0, b, al + 2.0, z, sf)?
        - (gauss_2f1(al + 1.0, b, al + 3.0, z, sf)? * (al + 1.0) + 1.0) / (al + 1.0);
    let quad_l2 = population_lcov12(bp, cfg)?;
    let quad_rho = quad_l2 / population_lmoments(m1)?.l2;
    Ok(PowerFormCheck {
        formula_l2_12: formula_l2,
        quadrature_l2_12: quad_l2,
        l2_discrepancy: formula_l2 - quad_l2,
        formula_rho12: formula_rho,
        quadrature_rho12: quad_rho,
        rho_discrepancy: formula_rho - quad_rho,
    })
}

/// Mid-ranks scaled to `r/(n+1)`; ties share their average rank.
pub fn plotting_ranks(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank / (n as f64 + 1.0);
        }
        i = j + 1;
    }
    out
}

fn legendre(k: usize, t: f64) -> f64 {
    match k {
        0 => 2.0 * t - 1.0,
        1 => 6.0 * t * t - 6.0 * t + 1.0,
        _ => 20.0 * t * t * t - 30.0 * t * t + 12.0 * t - 1.0,
    }
}

/// `(1/n) Σ yᵢ (P(pᵢ) - mean P)` with `pᵢ` the plotting rank of `xᵢ`.
fn sample_directed(y: &[f64], x: &[f64]) -> [f64; 3] {
    let p = plotting_ranks(x);
    let n = y.len() as f64;
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let w: Vec<f64> = p.iter().map(|&t| legendre(k, t)).collect();
        let wbar = w.iter().sum::<f64>() / n;
        *o = y.iter().zip(&w).map(|(yi, wi)| yi * (wi - wbar)).sum::<f64>() / n;
    }
    out
}

/// Rank plug-in sample L-comoments. Ratios use the sample L-scale of the
/// leading variable.
pub fn sample_lcomoments(s: &PairedSample) -> Result<LComomentSet> {
    if s.n() < 4 {
        return Err(Error::InsufficientData { needed: 4, got: s.n() });
    }
    let raw12 = sample_directed(&s.x1, &s.x2);
    let raw21 = sample_directed(&s.x2, &s.x1);
    let l2_1 = sample_lmoments(&s.x1, 2)?.l2;
    let l2_2 = sample_lmoments(&s.x2, 2)?.l2;
    Ok(LComomentSet::build(raw12, raw21, l2_1, l2_2))
}
