//! Population and sample L-moments.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::MarginalParams;
use crate::numeric::{integrate_unit, NumericConfig};
use crate::specfun::log_gamma;

/// First four L-moments and their ratios. Entries that were not computed
/// (a sample too short for the requested order) are NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LMomentVector {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
}

impl LMomentVector {
    pub fn from_lambdas(l1: f64, l2: f64, l3: f64, l4: f64) -> Self {
        LMomentVector { l1, l2, l3, l4, t2: l2 / l1, t3: l3 / l2, t4: l4 / l2 }
    }

    pub fn lambdas(&self) -> [f64; 4] {
        [self.l1, self.l2, self.l3, self.l4]
    }
}

/// Closed-form L-moments from gamma functions.
pub fn population_lmoments(p: &MarginalParams) -> Result<LMomentVector> {
    p.require_mean()?;
    let (c, a, b) = (p.c, p.alpha, p.beta);
    let lg = log_gamma;
    let l1 = c * (lg(a + 1.0)? + lg(b + 2.0)? - lg(a + b + 3.0)?).exp();
    let g = (lg(a + 2.0)? + lg(b + 2.0)?).exp();
    let l2 = c * (lg(a + 2.0)? + lg(b + 2.0)? - lg(a + b + 4.0)?).exp();
    let l3 = c * (a - b) * g * (-lg(a + b + 5.0)?).exp();
    let l4 = l2 * (a * a + b * b - 3.0 * a * b - a - b) / ((a + b + 4.0) * (a + b + 5.0));
    Ok(LMomentVector::from_lambdas(l1 + p.location, l2, l3, l4))
}

/// L-moments as integrals of `q` against the weights `(1-u)`, `u(1-u)`,
/// `u(1-u)(2u-1)` and `u(1-u)(1-5u+5u²)`.
pub fn population_lmoments_quadrature(p: &MarginalParams, cfg: &NumericConfig) -> Result<LMomentVector> {
    p.require_mean()?;
    let (a, b) = (p.alpha, p.beta);
    let q = |u: f64, v: f64| p.c * u.powf(a) * v.powf(b);
    let l1 = integrate_unit(|u, v| v * q(u, v), a, b + 1.0, cfg)?;
    let l2 = integrate_unit(|u, v| u * v * q(u, v), a + 1.0, b + 1.0, cfg)?;
    let l3 = integrate_unit(|u, v| u * v * (u - v) * q(u, v), a + 1.0, b + 1.0, cfg)?;
    let l4 = integrate_unit(|u, v| u * v * (1.0 - 5.0 * u * v) * q(u, v), a + 1.0, b + 1.0, cfg)?;
    Ok(LMomentVector::from_lambdas(l1 + p.location, l2, l3, l4))
}

/// Probability-weighted moments `b_0 … b_{r_max-1}` of sorted data.
pub fn pwm(sorted: &[f64], r_max: usize) -> Vec<f64> {
    let n = sorted.len();
    (0..r_max)
        .map(|r| {
            let mut s = 0.0;
            for (j, &x) in sorted.iter().enumerate() {
                let mut w = 1.0;
                for k in 1..=r {
                    w *= (j as f64 + 1.0 - k as f64) / (n as f64 - k as f64);
                }
                s += w * x;
            }
            s / n as f64
        })
        .collect()
}

/// Unbiased sample L-moments from order statistics, up to order `r_max ≤ 4`.
pub fn sample_lmoments(data: &[f64], r_max: usize) -> Result<LMomentVector> {
    if !(1..=4).contains(&r_max) {
        return Err(Error::InvalidParameter(format!("r_max = {r_max} must be in 1..=4")));
    }
    if data.len() < r_max.max(1) {
        return Err(Error::InsufficientData { needed: r_max, got: data.len() });
    }
    let mut x = data.to_vec();
    x.sort_by(f64::total_cmp);
    let b = pwm(&x, r_max);
    let at = |r: usize| if r < r_max { b[r] } else { f64::NAN };
    let (b0, b1, b2, b3) = (at(0), at(1), at(2), at(3));
    Ok(LMomentVector::from_lambdas(
        b0,
        2.0 * b1 - b0,
        6.0 * b2 - 6.0 * b1 + b0,
        20.0 * b3 - 30.0 * b2 + 12.0 * b1 - b0,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mp(c: f64, a: f64, b: f64) -> MarginalParams {
        MarginalParams::new(c, a, b).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn exponential_and_uniform() {
        let e = population_lmoments(&mp(2.0, 0.0, -1.0)).unwrap();
        assert!(close(e.l1, 2.0, 1e-14) && close(e.l2, 1.0, 1e-14) && close(e.t2, 0.5, 1e-14));
        let u = population_lmoments_quadrature(&mp(1.0, 0.0, 0.0), &NumericConfig::default()).unwrap();
        assert!(close(u.l1, 0.5, 1e-12) && close(u.l2, 1.0 / 6.0, 1e-12), "{u:?}");
        assert!(u.l3.abs() < 1e-14);
    }

    #[test]
    fn symmetric_has_zero_skew() {
        for a in [-0.5, 0.0, 1.3] {
            let l = population_lmoments(&mp(3.0, a, a)).unwrap();
            assert_eq!(l.t3, 0.0);
        }
    }

    #[test]
    fn normalized_case_ratios() {
        // with c = 1/B(α+1, β+1) the ratios take the simple forms
        let (a, b) = (1.2, 0.7);
        let c = 1.0 / crate::specfun::beta(a + 1.0, b + 1.0).unwrap();
        let l = population_lmoments(&mp(c, a, b)).unwrap();
        assert!(close(l.t2, (a + 1.0) / (a + b + 3.0), 1e-13));
        assert!(close(l.t3, (a - b) / (a + b + 4.0), 1e-13));
        let t4 = (a * a + b * b - 3.0 * a * b - a - b) / ((a + b + 4.0) * (a + b + 5.0));
        assert!(close(l.t4, t4, 1e-13));
    }

    #[test]
    fn outside_existence_region() {
        assert!(matches!(population_lmoments(&mp(1.0, -1.0, 0.0)), Err(Error::DivergentMoment(_))));
        assert!(population_lmoments(&mp(1.0, 0.0, -2.0)).is_err());
    }

    #[test]
    fn sample_examples() {
        let l = sample_lmoments(&[5.0; 4], 4).unwrap();
        assert_eq!((l.l1, l.l2), (5.0, 0.0));
        let l = sample_lmoments(&[1.0, 2.0, 3.0, 4.0, 10.0], 4).unwrap();
        assert!((l.l1 - 4.0).abs() < 1e-14);
        // direct definition: l2 = half the mean absolute pairwise difference
        let x = [1.0f64, 2.0, 3.0, 4.0, 10.0];
        let mut g = 0.0f64;
        for i in 0..5 {
            for j in 0..5 {
                g += (x[i] - x[j]).abs();
            }
        }
        assert!((l.l2 - g / 40.0).abs() < 1e-13);
        assert!(sample_lmoments(&[1.0, 2.0], 3).is_err());
        assert!(sample_lmoments(&[1.0, 2.0], 2).unwrap().l3.is_nan());
    }

    #[test]
    fn sample_matches_reference_values() {
        // reference values from an independent PWM implementation
        let x = [0.37, 1.23, 5.44, 2.81, 0.06, 3.9, 1.5, 7.2];
        let l = sample_lmoments(&x, 4).unwrap();
        assert!((l.l1 - 2.81375).abs() < 1e-12);
        let ref_l2 = {
            let mut s = x.to_vec();
            s.sort_by(f64::total_cmp);
            let n = s.len() as f64;
            s.iter().enumerate().map(|(i, v)| (2.0 * i as f64 - (n - 1.0)) * v).sum::<f64>() / (n * (n - 1.0))
        };
        assert!((l.l2 - ref_l2).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn closed_form_matches_quadrature(a in -0.9f64..3.0, b in -1.9f64..3.0, c in 0.5f64..10.0) {
            let p = mp(c, a, b);
            let cf = population_lmoments(&p).unwrap();
            let qd = population_lmoments_quadrature(&p, &NumericConfig::precise()).unwrap();
            for (x, y) in cf.lambdas().iter().zip(qd.lambdas()) {
                prop_assert!((x - y).abs() <= 1e-8 * x.abs().max(cf.l2), "{:?} vs {:?}", cf, qd);
            }
        }

        #[test]
        fn tau4_bounds(a in -0.99f64..5.0, b in -1.99f64..5.0) {
            let l = population_lmoments(&mp(1.0, a, b)).unwrap();
            prop_assert!(l.t4 >= (5.0 * l.t3 * l.t3 - 1.0) / 4.0 - 1e-12);
            prop_assert!(l.t4 < 1.0);
            prop_assert!(l.t2 < 1.0 && l.t2 > 0.0);
        }

        #[test]
        fn sample_equivariance(x in proptest::collection::vec(-50.0f64..50.0, 5..40), a in 0.1f64..10.0, s in -20.0f64..20.0) {
            let l = sample_lmoments(&x, 4).unwrap();
            let y: Vec<f64> = x.iter().map(|v| a * v + s).collect();
            let m = sample_lmoments(&y, 4).unwrap();
            let scale = l.l2.abs().max(1.0) * a;
            prop_assert!((m.l1 - (a * l.l1 + s)).abs() <= 1e-9 * (scale + s.abs() + a * l.l1.abs()));
            prop_assert!((m.l2 - a * l.l2).abs() <= 1e-9 * scale);
            prop_assert!((m.l3 - a * l.l3).abs() <= 1e-9 * scale);
            prop_assert!((m.l4 - a * l.l4).abs() <= 1e-9 * scale);
        }
    }
}
