//! The bivariate quantile-density model.
//!
//! The first component has quantile density `q₁(u) = c₁ u^α₁ (1-u)^β₁`; the
//! second, conditionally on `X₁ > Q₁(u₁)`, has quantile density
//! `(1 + θu₁) q₂(u₂)`, so that `Q₂₁(u₁, u₂) = (1 + θu₁) Q₂(u₂)`.
//!
//! Quantile functions are anchored at `Q(0) = location` when `α > -1` and at
//! `Q(1/2) = location` otherwise (the left tail is then unbounded).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{brent, integrate, integrate_unit, NumericConfig};
use crate::specfun::inc_beta;

/// One marginal `(c, α, β)` plus a location shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalParams {
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub location: f64,
}

/// Support of a marginal and the probability level at which `Q` equals the
/// location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportInfo {
    pub lower: f64,
    pub upper: f64,
    pub anchor: f64,
}

/// Where an inverted value fell relative to the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Clamp {
    None,
    Below,
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfValue {
    pub u: f64,
    pub clamp: Clamp,
}

impl MarginalParams {
    pub fn new(c: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("scale c = {c} must be positive")));
        }
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("shapes α = {alpha}, β = {beta} must be finite")));
        }
        Ok(MarginalParams { c, alpha, beta, location: 0.0 })
    }

    pub fn with_location(mut self, location: f64) -> Self {
        self.location = location;
        self
    }

    /// Mean (and so every L-moment) exists.
    pub fn has_mean(&self) -> bool {
        self.alpha > -1.0 && self.beta > -2.0
    }

    pub(crate) fn require_mean(&self) -> Result<()> {
        if self.has_mean() {
            Ok(())
        } else {
            Err(Error::DivergentMoment(format!(
                "mean requires α > -1 and β > -2, got α = {}, β = {}",
                self.alpha, self.beta
            )))
        }
    }

    pub fn anchor(&self) -> f64 {
        if self.alpha > -1.0 {
            0.0
        } else {
            0.5
        }
    }

    /// Quantile density `c u^α (1-u)^β`.
    pub fn qdf(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain("qdf", format!("u = {u} outside [0, 1]")));
        }
        if (u == 0.0 && self.alpha < 0.0) || (u == 1.0 && self.beta < 0.0) {
            return Err(Error::domain("qdf", format!("q is unbounded at u = {u}")));
        }
        Ok(self.qdf_split(u, 1.0 - u))
    }

    /// `q(u)` given both `u` and `1 - u`.
    pub(crate) fn qdf_split(&self, u: f64, v: f64) -> f64 {
        self.c * u.powf(self.alpha) * v.powf(self.beta)
    }

    /// Quantile function `Q(u)`.
    pub fn quantile(&self, u: f64, cfg: &NumericConfig) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain("quantile", format!("u = {u} outside [0, 1]")));
        }
        let (a, b) = (self.alpha, self.beta);
        if u == 1.0 && b <= -1.0 {
            return Ok(f64::INFINITY);
        }
        if a > -1.0 {
            if u == 0.0 {
                return Ok(self.location);
            }
            return Ok(self.location + self.c * unit_integral(a, b, 0.0, u, cfg)?);
        }
        if u == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let v = if u >= 0.5 {
            unit_integral(a, b, 0.5, u, cfg)?
        } else {
            -unit_integral(a, b, u, 0.5, cfg)?
        };
        Ok(self.location + self.c * v)
    }

    pub fn support(&self, cfg: &NumericConfig) -> Result<SupportInfo> {
        Ok(SupportInfo {
            lower: self.quantile(0.0, cfg)?,
            upper: self.quantile(1.0, cfg)?,
            anchor: self.anchor(),
        })
    }

    /// Distribution function by inverting `Q`. Inputs outside the support
    /// map to 0 or 1 and are flagged.
    pub fn cdf(&self, x: f64, cfg: &NumericConfig) -> Result<CdfValue> {
        if x.is_nan() {
            return Err(Error::domain("cdf", "x is NaN"));
        }
        let sup = self.support(cfg)?;
        if x <= sup.lower {
            let clamp = if x < sup.lower { Clamp::Below } else { Clamp::None };
            return Ok(CdfValue { u: 0.0, clamp });
        }
        if x >= sup.upper {
            let clamp = if x > sup.upper { Clamp::Above } else { Clamp::None };
            return Ok(CdfValue { u: 1.0, clamp });
        }
        let q = |u: f64| self.quantile(u, cfg).unwrap_or(f64::NAN);
        let lo = if sup.lower.is_finite() {
            0.0
        } else {
            let mut t = 0.5;
            while q(t) >= x {
                t *= 0.5;
                if t == 0.0 {
                    return Ok(CdfValue { u: f64::MIN_POSITIVE, clamp: Clamp::None });
                }
            }
            t
        };
        let hi = if sup.upper.is_finite() {
            1.0
        } else {
            let mut s = 0.5;
            loop {
                if q(1.0 - s) > x {
                    break 1.0 - s;
                }
                s *= 0.5;
                if s < f64::EPSILON {
                    return Ok(CdfValue { u: 1.0 - f64::EPSILON / 2.0, clamp: Clamp::None });
                }
            }
        };
        let u = brent(|u| q(u) - x, lo, hi, 1e-3 * cfg.root_tol, cfg.root_max_iter)?;
        Ok(CdfValue { u, clamp: Clamp::None })
    }

    pub fn survival(&self, x: f64, cfg: &NumericConfig) -> Result<f64> {
        Ok(1.0 - self.cdf(x, cfg)?.u)
    }
}

/// ∫ₐᵇ t^α (1-t)^β dt for `0 ≤ a ≤ b ≤ 1`; may be `+∞`.
pub(crate) fn unit_integral(alpha: f64, beta: f64, a: f64, b: f64, cfg: &NumericConfig) -> Result<f64> {
    if a >= b {
        return Ok(0.0);
    }
    if beta == 0.0 {
        if alpha == -1.0 {
            return Ok((b / a).ln());
        }
        let p = alpha + 1.0;
        return Ok((b.powf(p) - a.powf(p)) / p);
    }
    if alpha == 0.0 {
        let (la, lb) = ((-a).ln_1p(), (-b).ln_1p());
        if beta == -1.0 {
            return Ok(la - lb);
        }
        let p = beta + 1.0;
        // ((1-a)^p - (1-b)^p) / p
        return Ok(-(p * la).exp() * (p * (lb - la)).exp_m1() / p);
    }
    if alpha > -1.0 && beta > -1.0 {
        let upper = inc_beta(b, alpha + 1.0, beta + 1.0, &cfg.special)?;
        let lower = if a == 0.0 { 0.0 } else { inc_beta(a, alpha + 1.0, beta + 1.0, &cfg.special)? };
        return Ok(upper - lower);
    }
    let mut total = 0.0;
    let m = b.min(0.5);
    if a < m {
        total += if a == 0.0 {
            piece_from_zero(alpha, beta, m, cfg)?
        } else {
            piece_log(alpha, beta, a, m, cfg)?
        };
    }
    let h = a.max(0.5);
    if h < b {
        // mirror with r = 1 - t
        let (ra, rm) = (1.0 - b, 1.0 - h);
        total += if ra == 0.0 {
            piece_from_zero(beta, alpha, rm, cfg)?
        } else {
            piece_log(beta, alpha, ra, rm, cfg)?
        };
    }
    Ok(total)
}

/// ∫₀ᵐ t^p (1-t)^r dt with `m ≤ 1/2`, via `t = m s^{1/(p+1)}`.
fn piece_from_zero(p: f64, r: f64, m: f64, cfg: &NumericConfig) -> Result<f64> {
    if p <= -1.0 {
        return Ok(f64::INFINITY);
    }
    let k = 1.0 / (p + 1.0);
    let body = integrate(|s: f64| (r * (-m * s.powf(k)).ln_1p()).exp(), 0.0, 1.0, cfg)?;
    Ok(m.powf(p + 1.0) * k * body)
}

/// ∫ₐᵐ t^p (1-t)^r dt with `0 < a < m ≤ 1/2`, via `t = e^{-y}`.
fn piece_log(p: f64, r: f64, a: f64, m: f64, cfg: &NumericConfig) -> Result<f64> {
    integrate(
        |y: f64| (-(p + 1.0) * y + r * (-(-y).exp_m1()).ln()).exp(),
        -m.ln(),
        -a.ln(),
        cfg,
    )
}

/// Two marginals and the dependence parameter θ ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BivariateParams {
    pub m1: MarginalParams,
    pub m2: MarginalParams,
    pub theta: f64,
}

impl BivariateParams {
    pub fn new(m1: MarginalParams, m2: MarginalParams, theta: f64) -> Result<Self> {
        if !(theta >= 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!("θ = {theta} must be finite and ≥ 0")));
        }
        Ok(BivariateParams { m1, m2, theta })
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.m1, self.m2, theta)
    }

    fn scale(&self, u1: f64) -> f64 {
        1.0 + self.theta * u1
    }

    /// `q₂₁(u₁, u₂) = (1 + θu₁) q₂(u₂)`.
    pub fn conditional_qdf(&self, u1: f64, u2: f64) -> Result<f64> {
        check_unit("conditional_qdf", u1)?;
        Ok(self.scale(u1) * self.m2.qdf(u2)?)
    }

    /// `Q₂₁(u₁, u₂) = (1 + θu₁) Q₂(u₂)`.
    pub fn conditional_quantile(&self, u1: f64, u2: f64, cfg: &NumericConfig) -> Result<f64> {
        check_unit("conditional_quantile", u1)?;
        Ok(self.scale(u1) * self.m2.quantile(u2, cfg)?)
    }

    /// Survival of X₂ given `X₁ > Q₁(u₁)`: `1 - F₂(x₂ / (1 + θu₁))`.
    pub fn conditional_survival(&self, u1: f64, x2: f64, cfg: &NumericConfig) -> Result<f64> {
        check_unit("conditional_survival", u1)?;
        self.m2.survival(x2 / self.scale(u1), cfg)
    }

    /// Joint survival `P(X₁ > x₁, X₂ > x₂) = F̄₁(x₁) F̄₂₁(x₂ | x₁)`.
    pub fn joint_survival(&self, x1: f64, x2: f64, cfg: &NumericConfig) -> Result<f64> {
        let u1 = self.m1.cdf(x1, cfg)?.u;
        Ok((1.0 - u1) * self.conditional_survival(u1, x2, cfg)?)
    }

    /// `u₂₁ = F₂(Q₂(u₂) / (1 + θu₁))`, in closed form for the power case.
    pub fn u21(&self, u1: f64, u2: f64, cfg: &NumericConfig) -> Result<f64> {
        check_unit("u21", u1)?;
        check_unit("u21", u2)?;
        if self.theta == 0.0 || u1 == 0.0 {
            return Ok(u2);
        }
        let m2 = &self.m2;
        if m2.beta == 0.0 && m2.alpha > -1.0 && m2.location == 0.0 {
            return Ok(u2 / self.scale(u1).powf(1.0 / (m2.alpha + 1.0)));
        }
        self.u21_numeric(u1, u2, cfg)
    }

    /// `u₂₁` by numerical inversion only.
    pub fn u21_numeric(&self, u1: f64, u2: f64, cfg: &NumericConfig) -> Result<f64> {
        let x2 = self.m2.quantile(u2, cfg)?;
        if !x2.is_finite() {
            return Ok(u2);
        }
        Ok(self.m2.cdf(x2 / self.scale(u1), cfg)?.u)
    }

    /// `P(X₂ > (1+θu₁) Q₂(t) | X₁ = Q₁(u₁))`, obtained by differentiating the
    /// joint survival in x₁:
    ///
    /// `(1 - t) - (1-u₁) θ Q₂(t) / ((1+θu₁) q₂(t))`.
    ///
    /// The value goes negative past the point where the joint survival stops
    /// being a proper distribution; callers that sample from it must stop at
    /// the first crossing.
    pub fn survival_given_x1(&self, u1: f64, t: f64, cfg: &NumericConfig) -> Result<f64> {
        check_unit("survival_given_x1", u1)?;
        check_unit("survival_given_x1", t)?;
        if t == 0.0 {
            return Ok(1.0);
        }
        let k = (1.0 - u1) * self.theta / self.scale(u1);
        if k == 0.0 {
            return Ok(1.0 - t);
        }
        let q = self.m2.qdf_split(t, 1.0 - t);
        let x = self.m2.quantile(t, cfg)?;
        let ratio = if q.is_infinite() || !x.is_finite() && q == 0.0 {
            0.0
        } else if q == 0.0 {
            return Ok(f64::NEG_INFINITY);
        } else {
            x / q
        };
        Ok((1.0 - t) - k * ratio)
    }

    /// Same quantity as a function of `x₂`.
    pub fn survival_given_x1_at(&self, u1: f64, x2: f64, cfg: &NumericConfig) -> Result<f64> {
        let t = self.m2.cdf(x2 / self.scale(u1), cfg)?.u;
        self.survival_given_x1(u1, t, cfg)
    }

    /// `E(X₁X₂) = ∬ F̄(x₁, x₂) dx₁ dx₂` over the positive quadrant.
    ///
    /// For fixed x₁ the x₂-integral of the conditional survival is
    /// `(1+θu₁) E(X₂)`, so the double integral separates into
    /// `E(X₂) · [loc₁ + ∫ (1-u)(1+θu) q₁(u) du]`; both factors are computed by
    /// quadrature.
    pub fn product_moment(&self, cfg: &NumericConfig) -> Result<f64> {
        for m in [&self.m1, &self.m2] {
            m.require_mean()?;
            if m.location < 0.0 {
                return Err(Error::domain("product_moment", "support must be non-negative"));
            }
        }
        let (m1, m2) = (&self.m1, &self.m2);
        let mean2 = m2.location
            + integrate_unit(|u, v| v * m2.qdf_split(u, v), m2.alpha, m2.beta + 1.0, cfg)?;
        let theta = self.theta;
        let weighted = integrate_unit(
            |u, v| v * (1.0 + theta * u) * m1.qdf_split(u, v),
            m1.alpha,
            m1.beta + 1.0,
            cfg,
        )?;
        Ok(mean2 * (m1.location + weighted))
    }
}

fn check_unit(func: &'static str, u: f64) -> Result<()> {
    if (0.0..=1.0).contains(&u) {
        Ok(())
    } else {
        Err(Error::domain(func, format!("probability {u} outside [0, 1]")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    fn mp(c: f64, a: f64, b: f64) -> MarginalParams {
        MarginalParams::new(c, a, b).unwrap()
    }

    #[test]
    fn qdf_examples() {
        assert_eq!(mp(1.0, 0.0, 0.0).qdf(0.5).unwrap(), 1.0);
        let v = mp(9.0819, 0.4864, 0.9946).qdf(0.5).unwrap();
        assert!((v - 9.0819 * 0.5f64.powf(1.481)).abs() < 1e-12);
        assert!((mp(2.0, 0.0, -1.0).qdf(0.5).unwrap() - 4.0).abs() < 1e-15);
        assert!(mp(1.0, -0.5, 0.0).qdf(0.0).is_err());
        assert!(mp(1.0, 0.0, -0.5).qdf(1.0).is_err());
        assert!(MarginalParams::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn quantile_examples() {
        let c = cfg();
        let q = mp(1.0, 0.0, -1.0).quantile(0.5, &c).unwrap();
        assert!((q - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((mp(1.0, 1.0, 0.0).quantile(0.6, &c).unwrap() - 0.18).abs() < 1e-15);
        // sine density: Q(u) = (2/π) asin(√u) with c = 1/π
        let sine = mp(1.0 / std::f64::consts::PI, -0.5, -0.5);
        assert!((sine.quantile(0.25, &c).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(mp(1.0, 0.0, -1.0).quantile(1.0, &c).unwrap(), f64::INFINITY);
        assert!(mp(1.0, 0.0, 0.0).quantile(1.5, &c).is_err());
    }

    #[test]
    fn quantile_numeric_paths() {
        let c = NumericConfig::precise();
        // loglogistic a = 0.5, b = 2: Q(u) = b (u/(1-u))^a, c = ab
        let ll = mp(1.0, -0.5, -1.5);
        for &u in &[0.01f64, 0.3, 0.5, 0.9, 0.999] {
            let want = 2.0 * (u / (1.0 - u)).powf(0.5);
            let got = ll.quantile(u, &c).unwrap();
            assert!((got - want).abs() < 1e-10 * want, "u={u} got={got} want={want}");
        }
        // scaled t with two degrees of freedom: Q(u) = 2c(2u-1)/sqrt(u(1-u))
        let t2 = mp(0.7, -1.5, -1.5);
        for &u in &[1e-6f64, 0.1, 0.5, 0.8, 0.99999] {
            let want = 2.0 * 0.7 * (2.0 * u - 1.0) / (u * (1.0 - u)).sqrt();
            let got = t2.quantile(u, &c).unwrap();
            assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "u={u} got={got} want={want}");
        }
        assert_eq!(t2.quantile(0.0, &c).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn support_rules() {
        let c = cfg();
        let s = mp(1.0, 0.5, 0.5).support(&c).unwrap();
        assert_eq!((s.lower, s.anchor), (0.0, 0.0));
        assert!(s.upper.is_finite());
        assert!(mp(1.0, 0.5, -1.0).support(&c).unwrap().upper.is_infinite());
        let s = mp(1.0, -1.5, 0.5).support(&c).unwrap();
        assert_eq!((s.lower, s.anchor), (f64::NEG_INFINITY, 0.5));
        assert!(s.upper.is_finite());
    }

    #[test]
    fn cdf_examples_and_clamping() {
        let c = cfg();
        let e = mp(1.0, 0.0, -1.0);
        assert!((e.cdf(std::f64::consts::LN_2, &c).unwrap().u - 0.5).abs() < 1e-12);
        let p = mp(2.0, 1.0, 0.0); // power: b = 1, a = 1/2
        for i in 1..20 {
            let x = i as f64 / 20.0;
            let u = p.cdf(x, &c).unwrap();
            assert!((u.u - x.powf(0.5)).abs() < 1e-12);
            assert_eq!(u.clamp, Clamp::None);
        }
        assert_eq!(p.cdf(-1.0, &c).unwrap(), CdfValue { u: 0.0, clamp: Clamp::Below });
        assert_eq!(p.cdf(3.0, &c).unwrap(), CdfValue { u: 1.0, clamp: Clamp::Above });
        assert_eq!(p.cdf(1.0, &c).unwrap(), CdfValue { u: 1.0, clamp: Clamp::None });
    }

    #[test]
    fn conditional_survival_cases() {
        let c = cfg();
        let e = mp(1.0, 0.0, -1.0);
        let bp = BivariateParams::new(e, mp(2.0, 0.0, -1.0), 0.5).unwrap();
        for &(u1, x2) in &[(0.0f64, 1.0f64), (0.3, 0.4), (0.9, 3.0)] {
            let want = (-x2 / (2.0 * (1.0 + 0.5 * u1))).exp();
            assert!((bp.conditional_survival(u1, x2, &c).unwrap() - want).abs() < 1e-10);
        }
        let indep = bp.with_theta(0.0).unwrap();
        assert!((indep.conditional_survival(0.7, 1.3, &c).unwrap() - (-0.65f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn joint_survival_matches_closed_forms() {
        let c = cfg();
        let bp = BivariateParams::new(mp(1.5, 0.0, -1.0), mp(0.8, 0.0, -1.0), 0.7).unwrap();
        assert!((bp.joint_survival(0.0, 0.0, &c).unwrap() - 1.0).abs() < 1e-15);
        for i in 0..5 {
            for j in 0..5 {
                let (x1, x2) = (0.4 * i as f64, 0.3 * j as f64);
                let u1 = 1.0 - (-x1 / 1.5).exp();
                let want = (-x1 / 1.5 - x2 / (0.8 * (1.0 + 0.7 * u1))).exp();
                assert!((bp.joint_survival(x1, x2, &c).unwrap() - want).abs() < 1e-10);
            }
        }
        // power: a = 1/(α+1), b = c/(α+1)
        let bp = BivariateParams::new(mp(2.0, 1.0, 0.0), mp(3.0, 2.0, 0.0), 1.2).unwrap();
        let (a1, b1, a2, b2) = (0.5f64, 1.0f64, 1.0f64 / 3.0, 1.0f64);
        for &(x1, x2) in &[(0.1f64, 0.2f64), (0.5, 0.5), (0.9, 0.3), (0.3, 0.95)] {
            let f1: f64 = (x1 / b1).powf(a1);
            let want = (1.0 - f1) * (1.0 - (1.0 + 1.2 * f1).powf(-a2) * (x2 / b2).powf(a2));
            assert!((bp.joint_survival(x1, x2, &c).unwrap() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn u21_cases() {
        let c = cfg();
        let pw = BivariateParams::new(mp(1.0, 0.0, 0.0), mp(1.0, 0.0, 0.0), 1.0).unwrap();
        assert!((pw.u21(1.0, 0.5, &c).unwrap() - 0.25).abs() < 1e-15);
        assert!((pw.u21_numeric(1.0, 0.5, &c).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(pw.with_theta(0.0).unwrap().u21(0.4, 0.3, &c).unwrap(), 0.3);
        // generic parameters against plain bisection on Q₂
        let bp = BivariateParams::new(mp(2.0, 0.3, 0.6), mp(1.7, 0.4, -0.3), 0.8).unwrap();
        let (u1, u2) = (0.6, 0.7);
        let target = bp.m2.quantile(u2, &c).unwrap() / (1.0 + 0.8 * u1);
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if bp.m2.quantile(mid, &c).unwrap() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((bp.u21(u1, u2, &c).unwrap() - 0.5 * (lo + hi)).abs() < 1e-11);
    }

    #[test]
    fn survival_given_x1_power_case_is_linear() {
        // For β₂ = 0 the conditional survival is 1 - t(1 + k a₂).
        let c = cfg();
        let bp = BivariateParams::new(mp(1.0, 0.0, 0.0), mp(2.0, 1.0, 0.0), 1.0).unwrap();
        let u1 = 0.3;
        let k = 0.7 / 1.3;
        for &t in &[0.1, 0.4, 0.6] {
            let got = bp.survival_given_x1(u1, t, &c).unwrap();
            assert!((got - (1.0 - t * (1.0 + k * 0.5))).abs() < 1e-12);
        }
    }

    #[test]
    fn product_moment_independence_and_monotone() {
        let c = NumericConfig::precise();
        let bp = BivariateParams::new(mp(3.0, 0.5, 1.0), mp(2.0, 0.2, -0.4), 0.0).unwrap();
        let mean = |m: &MarginalParams| {
            integrate_unit(|u, v| v * m.qdf_split(u, v), m.alpha, m.beta + 1.0, &c).unwrap()
        };
        let pm0 = bp.product_moment(&c).unwrap();
        assert!((pm0 - mean(&bp.m1) * mean(&bp.m2)).abs() < 1e-10 * pm0);
        let pm1 = bp.with_theta(1.0).unwrap().product_moment(&c).unwrap();
        assert!(pm1 > pm0);
        let heavy = BivariateParams::new(mp(1.0, 0.0, -2.5), mp(1.0, 0.0, 0.0), 1.0).unwrap();
        assert!(matches!(heavy.product_moment(&c), Err(Error::DivergentMoment(_))));
    }

    #[test]
    fn joint_survival_can_rise_in_x1() {
        // θ > 0 stretches the conditional tail, so far out in x₂ the survival
        // increases with x₁ and the joint law carries negative mass.
        let c = cfg();
        let bp = BivariateParams::new(mp(1.0, 0.0, -1.0), mp(1.0, 0.0, -1.0), 1.0).unwrap();
        let x2 = 8.0;
        assert!(bp.joint_survival(0.5, x2, &c).unwrap() > bp.joint_survival(0.0, x2, &c).unwrap());
        assert!(bp.joint_survival(0.5, 0.1, &c).unwrap() < bp.joint_survival(0.0, 0.1, &c).unwrap());
    }

    proptest! {
        #[test]
        fn cdf_inverts_quantile(a in -0.9f64..3.0, b in -1.9f64..3.0, u in 0.02f64..0.98) {
            let c = cfg();
            let m = mp(1.3, a, b);
            let x = m.quantile(u, &c).unwrap();
            let back = m.cdf(x, &c).unwrap().u;
            prop_assert!((back - u).abs() < 1e-10, "u={} back={}", u, back);
        }

        #[test]
        fn quantile_is_increasing(a in -2.0f64..3.0, b in -2.0f64..3.0, u in 0.01f64..0.98) {
            let c = cfg();
            let m = mp(0.9, a, b);
            prop_assert!(m.quantile(u + 0.01, &c).unwrap() > m.quantile(u, &c).unwrap());
        }

        #[test]
        fn u21_below_u2(th in 0.0f64..3.0, u1 in 0.0f64..1.0, u2 in 0.01f64..0.99) {
            let c = cfg();
            let bp = BivariateParams::new(mp(1.0, 0.3, 0.2), mp(2.0, -0.2, 0.4), th).unwrap();
            let v = bp.u21(u1, u2, &c).unwrap();
            if th == 0.0 || u1 == 0.0 {
                prop_assert_eq!(v, u2);
            } else {
                prop_assert!(v < u2);
            }
        }

        #[test]
        fn joint_survival_monotone_and_factorizes(x1 in 0.0f64..2.0, x2 in 0.0f64..2.0, dx in 0.01f64..0.5) {
            let c = cfg();
            let bp = BivariateParams::new(mp(2.0, 0.4, -0.5), mp(1.0, 0.0, -1.0), 0.9).unwrap();
            let s = bp.joint_survival(x1, x2, &c).unwrap();
            prop_assert!(bp.joint_survival(x1, x2 + dx, &c).unwrap() <= s + 1e-12);
            prop_assert!((bp.joint_survival(x1, 0.0, &c).unwrap() - bp.m1.survival(x1, &c).unwrap()).abs() < 1e-12);
            let ind = bp.with_theta(0.0).unwrap();
            let prod = ind.m1.survival(x1, &c).unwrap() * ind.m2.survival(x2, &c).unwrap();
            prop_assert!((ind.joint_survival(x1, x2, &c).unwrap() - prod).abs() < 1e-12);
        }
    }
}
