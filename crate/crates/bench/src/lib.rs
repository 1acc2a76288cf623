//! Fixtures shared by the benchmarks.

use qbivar::{BivariateParams, MarginalParams, NumericConfig, PairedSample, SampleMethod, SamplerSpec};

/// A model with interior shapes on both margins, so no closed-form shortcut applies.
pub fn general_model() -> BivariateParams {
    let m1 = MarginalParams::new(2.0, 0.4, -0.3).unwrap();
    let m2 = MarginalParams::new(1.5, -0.2, 0.6).unwrap();
    BivariateParams::new(m1, m2, 0.7).unwrap()
}

pub fn sample(n: usize, method: SampleMethod) -> PairedSample {
    qbivar::sample::draw(&general_model(), &SamplerSpec { seed: 1, n, method }, &NumericConfig::default()).unwrap()
}
