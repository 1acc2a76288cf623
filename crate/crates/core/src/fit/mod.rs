//! Method-of-L-moments estimation: marginals from the first three sample
//! L-moments, then θ from the sample product moment.

pub mod mrq;

use serde::Serialize;

use crate::data::PairedSample;
use crate::error::{Error, Result};
use crate::lmom::{population_lmoments, sample_lmoments, LMomentVector};
use crate::model::{BivariateParams, MarginalParams};
use crate::numeric::{brent, NumericConfig};
use crate::specfun::log_gamma;

pub use mrq::{fit_mrq, MrqFit, MrqParams};

/// Largest θ tried when bracketing the product-moment equation.
pub const THETA_CAP: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResiduals {
    /// Population minus sample `(λ₁, τ₂, τ₃)` for each marginal.
    pub lmoments: [[f64; 3]; 2],
    /// Population minus sample `E(X₁X₂)`.
    pub product_moment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub params: BivariateParams,
    pub sample_lmoments: [LMomentVector; 2],
    pub theta_bracket: [f64; 2],
    pub residuals: FitResiduals,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaFit {
    pub theta: f64,
    pub bracket: [f64; 2],
    pub residual: f64,
    pub warnings: Vec<String>,
}

/// Solve `τ₂ = (α+1)/(α+β+3)`, `τ₃ = (α-β)/(α+β+4)` for `(α, β)` and match
/// `λ₁` for `c`. Both ratio equations are linear in `(α, β)`.
pub fn fit_marginal_from_lmoments(l1: f64, t2: f64, t3: f64) -> Result<MarginalParams> {
    // (1-t2) α - t2 β = 3 t2 - 1
    // (1-t3) α - (1+t3) β = 4 t3
    let (a11, a12, r1) = (1.0 - t2, -t2, 3.0 * t2 - 1.0);
    let (a21, a22, r2) = (1.0 - t3, -(1.0 + t3), 4.0 * t3);
    let det = a11 * a22 - a12 * a21;
    if !det.is_finite() || det.abs() < 1e-12 {
        return Err(Error::Singular(format!("τ₂ = {t2}, τ₃ = {t3} give a degenerate system")));
    }
    let alpha = (r1 * a22 - a12 * r2) / det;
    let beta = (a11 * r2 - r1 * a21) / det;
    if !(alpha > -1.0 && beta > -2.0) {
        return Err(Error::Infeasible(format!(
            "α = {alpha}, β = {beta} outside α > -1, β > -2"
        )));
    }
    if !(l1 > 0.0) {
        return Err(Error::Infeasible(format!("λ₁ = {l1} must be positive")));
    }
    let c = l1 * (log_gamma(alpha + beta + 3.0)? - log_gamma(alpha + 1.0)? - log_gamma(beta + 2.0)?).exp();
    MarginalParams::new(c, alpha, beta)
}

pub fn fit_marginal(data: &[f64]) -> Result<MarginalParams> {
    if data.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: data.len() });
    }
    let l = sample_lmoments(data, 3)?;
    if !(l.l2 > 0.0) {
        return Err(Error::Singular("sample L-scale is zero".into()));
    }
    fit_marginal_from_lmoments(l.l1, l.t2, l.t3)
}

pub fn sample_product_mean(s: &PairedSample) -> f64 {
    s.pairs().map(|(a, b)| a * b).sum::<f64>() / s.n() as f64
}

/// θ with `E_θ(X₁X₂) = target`, by bracketed root finding on `[0, θ_max]`
/// where `θ_max` doubles until the bracket closes.
pub fn fit_theta_from_moment(
    target: f64,
    m1: &MarginalParams,
    m2: &MarginalParams,
    cfg: &NumericConfig,
) -> Result<ThetaFit> {
    let bp = BivariateParams::new(*m1, *m2, 0.0)?;
    let pm = |t: f64| bp.with_theta(t).and_then(|b| b.product_moment(cfg));
    let indep = pm(0.0)?;
    if target <= indep {
        return Ok(ThetaFit {
            theta: 0.0,
            bracket: [0.0, 0.0],
            residual: indep - target,
            warnings: vec![format!(
                "sample product moment {target} does not exceed the independence value {indep}; θ set to 0"
            )],
        });
    }
    let mut hi = 1.0;
    while pm(hi)? < target {
        hi *= 2.0;
        if hi > THETA_CAP {
            return Err(Error::Bracket(format!("θ above {THETA_CAP} needed to reach {target}")));
        }
    }
    let err = std::cell::RefCell::new(None);
    let theta = brent(
        |t| match pm(t) {
            Ok(v) => v - target,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        hi,
        1e-14,
        cfg.root_max_iter,
    );
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let theta = theta?;
    Ok(ThetaFit { theta, bracket: [0.0, hi], residual: pm(theta)? - target, warnings: Vec::new() })
}

pub fn fit_theta(s: &PairedSample, m1: &MarginalParams, m2: &MarginalParams, cfg: &NumericConfig) -> Result<ThetaFit> {
    fit_theta_from_moment(sample_product_mean(s), m1, m2, cfg)
}

/// Marginals first, then θ.
pub fn fit(s: &PairedSample, cfg: &NumericConfig) -> Result<FitResult> {
    let m1 = fit_marginal(&s.x1)?;
    let m2 = fit_marginal(&s.x2)?;
    let th = fit_theta(s, &m1, &m2, cfg)?;
    let params = BivariateParams::new(m1, m2, th.theta)?;
    let sl = [sample_lmoments(&s.x1, 4)?, sample_lmoments(&s.x2, 4)?];
    let resid = |m: &MarginalParams, l: &LMomentVector| -> Result<[f64; 3]> {
        let p = population_lmoments(m)?;
        Ok([p.l1 - l.l1, p.t2 - l.t2, p.t3 - l.t3])
    };
    let mut warnings = th.warnings.clone();
    for (i, m) in [&m1, &m2].iter().enumerate() {
        if m.alpha < 0.0 && m.beta < 0.0 {
            warnings.push(format!("marginal {} has α, β < 0 (U-shaped quantile density)", i + 1));
        }
    }
    Ok(FitResult {
        params,
        sample_lmoments: sl,
        theta_bracket: th.bracket,
        residuals: FitResiduals {
            lmoments: [resid(&m1, &sl[0])?, resid(&m2, &sl[1])?],
            product_moment: th.residual,
        },
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mp(c: f64, a: f64, b: f64) -> MarginalParams {
        MarginalParams::new(c, a, b).unwrap()
    }

    #[test]
    fn round_trip_example() {
        let l = population_lmoments(&mp(3.0, 0.5, 1.0)).unwrap();
        let m = fit_marginal_from_lmoments(l.l1, l.t2, l.t3).unwrap();
        assert!((m.c - 3.0).abs() < 1e-10 && (m.alpha - 0.5).abs() < 1e-10 && (m.beta - 1.0).abs() < 1e-10);
    }

    #[test]
    fn second_dataset_marginals() {
        let s = PairedSample::builtin("components").unwrap();
        let m1 = fit_marginal(&s.x1).unwrap();
        let m2 = fit_marginal(&s.x2).unwrap();
        for (got, want) in [(m1.c, 13.0499), (m1.alpha, 0.8856), (m1.beta, -0.1844), (m2.c, 5.9257), (m2.alpha, 0.3555), (m2.beta, -0.6695)] {
            assert!((got - want).abs() < 1e-3 * want.abs().max(1.0), "{got} vs {want}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(fit_marginal(&[1.0, 2.0]), Err(Error::InsufficientData { .. })));
        assert!(matches!(fit_marginal(&[2.0; 5]), Err(Error::Singular(_))));
        // τ₂ = 1 is outside the region reachable with β > -2
        assert!(matches!(fit_marginal_from_lmoments(1.0, 1.2, 0.0), Err(Error::Infeasible(_))));
    }

    #[test]
    fn theta_zero_when_at_independence() {
        let cfg = NumericConfig::default();
        let (m1, m2) = (mp(2.0, 0.5, 0.5), mp(1.0, 0.0, 0.0));
        let indep = BivariateParams::new(m1, m2, 0.0).unwrap().product_moment(&cfg).unwrap();
        let t = fit_theta_from_moment(indep, &m1, &m2, &cfg).unwrap();
        assert_eq!(t.theta, 0.0);
        assert_eq!(t.warnings.len(), 1);
    }

    #[test]
    fn theta_first_dataset() {
        let cfg = NumericConfig::default();
        let s = PairedSample::builtin("cable").unwrap();
        let f = fit(&s, &cfg).unwrap();
        assert!((f.params.theta - 0.6821).abs() < 5e-4, "{}", f.params.theta);
        assert!(f.residuals.product_moment.abs() < 1e-8);
        for r in f.residuals.lmoments.iter().flatten() {
            assert!(r.abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn marginal_inversion(c in 0.1f64..20.0, a in -0.95f64..4.0, b in -1.95f64..4.0) {
            let l = population_lmoments(&mp(c, a, b)).unwrap();
            let m = fit_marginal_from_lmoments(l.l1, l.t2, l.t3).unwrap();
            prop_assert!((m.c - c).abs() <= 1e-8 * c);
            prop_assert!((m.alpha - a).abs() <= 1e-8 * a.abs().max(1.0));
            prop_assert!((m.beta - b).abs() <= 1e-8 * b.abs().max(1.0));
        }

        #[test]
        fn theta_recovery(th in 0.01f64..5.0, a in -0.5f64..2.0, b in -0.9f64..2.0) {
            let cfg = NumericConfig::precise();
            let (m1, m2) = (mp(1.5, a, b), mp(2.0, b, a));
            let target = BivariateParams::new(m1, m2, th).unwrap().product_moment(&cfg).unwrap();
            let got = fit_theta_from_moment(target, &m1, &m2, &cfg).unwrap().theta;
            prop_assert!((got - th).abs() <= 1e-8 * th.max(1.0), "{} vs {}", got, th);
        }
    }
}
