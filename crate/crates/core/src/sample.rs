//! Seeded random generation from the bivariate model.
//!
//! Two joint laws are on offer. `Transform` pushes independent uniforms
//! through `(Q₁(u₁), (1+θu₁)Q₂(u₂))`. `Exact` draws X₂ given `X₁ = x₁` from
//! the conditional survival obtained by differentiating the joint survival
//! `F̄₁(x₁) F̄₂₁(x₂ | x₁)` in x₁. For θ > 0 the two laws differ.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::data::PairedSample;
use crate::error::{Error, Result};
use crate::model::BivariateParams;
use crate::numeric::{brent, NumericConfig};

/// Draws per independent random stream.
pub const BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMethod {
    Transform,
    Exact,
}

impl SampleMethod {
    pub fn name(self) -> &'static str {
        match self {
            SampleMethod::Transform => "transform",
            SampleMethod::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerSpec {
    pub seed: u64,
    pub n: usize,
    pub method: SampleMethod,
}

/// Generator for block `b`: the seed picks the key, the block the stream.
fn block_rng(seed: u64, block: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Grid used to locate the first crossing of the conditional survival.
const SCAN: usize = 32;

/// Smallest `t` with `S(t) ≤ v`, where `S(t) = P(X₂ > (1+θu₁)Q₂(t) | X₁ = Q₁(u₁))`.
///
/// Where the joint survival carries negative mass `S` is not monotone; taking
/// the first crossing samples from its running minimum.
fn exact_level(bp: &BivariateParams, u1: f64, v: f64, cfg: &NumericConfig) -> Result<f64> {
    let g = |t: f64| bp.survival_given_x1(u1, t, cfg);
    let last = 1.0 - f64::EPSILON / 2.0;
    let mut lo = 0.0;
    for j in 1..=SCAN {
        let t = if j == SCAN { last } else { j as f64 / SCAN as f64 };
        if g(t)? <= v {
            let err = std::cell::RefCell::new(None);
            let r = brent(
                |s| match g(s) {
                    Ok(val) => val - v,
                    Err(e) => {
                        err.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                },
                lo,
                t,
                1e-3 * cfg.root_tol,
                cfg.root_max_iter,
            );
            if let Some(e) = err.into_inner() {
                return Err(e);
            }
            return r;
        }
        lo = t;
    }
    Ok(last)
}

fn draw_one(bp: &BivariateParams, method: SampleMethod, u1: f64, u2: f64, cfg: &NumericConfig) -> Result<(f64, f64)> {
    let x1 = bp.m1.quantile(u1, cfg)?;
    let t = match method {
        SampleMethod::Transform => u2,
        SampleMethod::Exact => exact_level(bp, u1, u2, cfg)?,
    };
    Ok((x1, bp.conditional_quantile(u1, t, cfg)?))
}

/// Generate `spec.n` pairs. Output depends only on `(bp, spec)`.
pub fn draw(bp: &BivariateParams, spec: &SamplerSpec, cfg: &NumericConfig) -> Result<PairedSample> {
    if spec.n == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    let blocks = spec.n.div_ceil(BLOCK);
    let parts: Vec<Vec<(f64, f64)>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(spec.seed, b as u64);
            let start = b * BLOCK;
            let len = BLOCK.min(spec.n - start);
            (0..len)
                .map(|k| {
                    let u1: f64 = rng.sample(Open01);
                    let u2: f64 = rng.sample(Open01);
                    draw_one(bp, spec.method, u1, u2, cfg)
                        .map_err(|e| Error::Draw { index: start + k, source: Box::new(e) })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<(f64, f64)> = parts.into_iter().flatten().collect();
    PairedSample::from_pairs(&pairs, format!("sample:{} seed={} n={}", spec.method.name(), spec.seed, spec.n))
}
