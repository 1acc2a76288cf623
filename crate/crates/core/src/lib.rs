//! Bivariate distributions specified through quantile density functions:
//! special functions, the model itself, a catalog of closed-form special
//! cases, L-moment and L-comoment estimation, goodness of fit and sampling.

pub mod catalog;
pub mod comoment;
pub mod data;
pub mod error;
pub mod fit;
pub mod gof;
pub mod lmom;
pub mod model;
pub mod numeric;
pub mod sample;
pub mod specfun;

pub use comoment::LComomentSet;
pub use data::PairedSample;
pub use error::{Error, Result};
pub use fit::{FitResult, MrqParams};
pub use gof::{GofResult, KsConvention};
pub use lmom::LMomentVector;
pub use model::{BivariateParams, CdfValue, Clamp, MarginalParams, SupportInfo};
pub use numeric::NumericConfig;
pub use sample::{SampleMethod, SamplerSpec};
pub use specfun::SpecFunConfig;
