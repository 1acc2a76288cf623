use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qbivar", version, about = "Fit, test and sample bivariate quantile-density models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit both marginals and θ by L-moments and the product moment.
    Fit(DataArgs),
    /// Kolmogorov-Smirnov tests of the marginal and the conditional law.
    Gof(GofArgs),
    /// Sample L-moments of both columns.
    Lmoments(DataArgs),
    /// Sample L-comoments, and population ones at the fitted parameters.
    Comoments(DataArgs),
    /// Draw a seeded sample and write it as CSV.
    Sample(SampleArgs),
    /// Fit the model and the linear mean-residual competitor side by side.
    Compare(DataArgs),
    /// List catalog cases, or map one case's natural parameters.
    Catalog(CatalogArgs),
    /// Re-run both embedded case studies against their reference values.
    Reproduce(CommonArgs),
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Relative quadrature tolerance.
    #[arg(long, value_name = "TOL")]
    pub quad_tol: Option<f64>,
    /// Absolute quadrature tolerance.
    #[arg(long, value_name = "TOL")]
    pub quad_abs_tol: Option<f64>,
    /// Root-finding tolerance.
    #[arg(long, value_name = "TOL")]
    pub root_tol: Option<f64>,
    /// Write `<STEM>.report.json` (and other artifacts) instead of printing the report.
    #[arg(long, value_name = "STEM")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = KsArg::TwoSided)]
    pub ks: KsArg,
}

#[derive(Debug, Args, Clone)]
pub struct DataArgs {
    /// CSV path or a builtin dataset (`cable`, `components`).
    #[arg(long, value_name = "PATH|NAME")]
    pub data: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Clone)]
pub struct GofArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Pooled)]
    pub conditional: ModeArg,
    /// Use these parameters instead of fitting: `c1,alpha1,beta1,c2,alpha2,beta2,theta`.
    #[arg(long, value_delimiter = ',', value_name = "P", allow_hyphen_values = true)]
    pub params: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = RuleArg::MeanRank)]
    pub plotting: RuleArg,
}

#[derive(Debug, Args, Clone)]
pub struct SampleArgs {
    /// Catalog case; its natural parameters come from `--c1 --d1 --c2 --d2`.
    #[arg(long, value_name = "NAME", conflicts_with_all = ["m1", "m2"])]
    pub catalog: Option<String>,
    /// First natural parameter of marginal 1.
    #[arg(long)]
    pub c1: Option<f64>,
    /// Second natural parameter of marginal 1.
    #[arg(long)]
    pub d1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub d2: Option<f64>,
    /// Marginal 1 as `c,alpha,beta`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "m2")]
    pub m1: Option<Vec<f64>>,
    /// Marginal 2 as `c,alpha,beta`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "m1")]
    pub m2: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Transform)]
    pub method: MethodArg,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Clone)]
pub struct CatalogArgs {
    pub name: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p1: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p2: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KsArg {
    TwoSided,
    AtObservations,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Pooled,
    PerPoint,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RuleArg {
    MeanRank,
    Hazen,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Transform,
    Exact,
}

impl From<KsArg> for qbivar::KsConvention {
    fn from(k: KsArg) -> Self {
        match k {
            KsArg::TwoSided => qbivar::KsConvention::TwoSided,
            KsArg::AtObservations => qbivar::KsConvention::AtObservations,
        }
    }
}

impl From<ModeArg> for qbivar::gof::ConditionalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Pooled => Self::Pooled,
            ModeArg::PerPoint => Self::PerPoint,
        }
    }
}

impl From<RuleArg> for qbivar::gof::PlottingRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::MeanRank => Self::MeanRank,
            RuleArg::Hazen => Self::Hazen,
        }
    }
}

impl From<MethodArg> for qbivar::SampleMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Transform => Self::Transform,
            MethodArg::Exact => Self::Exact,
        }
    }
}
