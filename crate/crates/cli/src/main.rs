mod args;
mod report;
mod reproduce;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use args::{CatalogArgs, Cli, Command, CommonArgs, DataArgs, GofArgs, SampleArgs};
use qbivar::catalog::{self, CaseId};
use qbivar::comoment::{population_lcomoments, sample_lcomoments};
use qbivar::fit::{fit, fit_mrq, MrqParams};
use qbivar::gof::{self, ConditionalMode, GofResult};
use qbivar::lmom::{population_lmoments, sample_lmoments};
use qbivar::sample::draw;
use qbivar::{BivariateParams, Error, FitResult, LComomentSet, LMomentVector, MarginalParams, NumericConfig, SamplerSpec};
use report::{load, with_suffix, InputInfo, Report};

const EXIT_DATA: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_USAGE: u8 = 64;

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn config(c: &CommonArgs) -> std::result::Result<NumericConfig, Failure> {
    let mut cfg = NumericConfig::default();
    if let Some(t) = c.quad_tol {
        cfg.quad_rel_tol = t;
    }
    if let Some(t) = c.quad_abs_tol {
        cfg.quad_abs_tol = t;
    }
    if let Some(t) = c.root_tol {
        cfg.root_tol = t;
    }
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

struct Ctx {
    argv: Vec<String>,
}

impl Ctx {
    fn report<T: Serialize>(&self, input: Option<InputInfo>, cfg: NumericConfig, results: T, warnings: Vec<String>) -> Report<T> {
        Report { command: self.argv.clone(), input, numeric_config: cfg, results, warnings }
    }

    /// Print the report, or write it and print `summary`.
    fn emit<T: Serialize>(&self, r: &Report<T>, common: &CommonArgs, summary: &str) -> Outcome {
        let mut out = io::stdout().lock();
        match &common.out {
            Some(stem) => {
                let path = r.write(stem)?;
                write!(out, "{summary}")?;
                writeln!(out, "report: {}", path.display())?;
            }
            None => writeln!(out, "{}", r.to_json())?,
        }
        for w in &r.warnings {
            eprintln!("warning: {w}");
        }
        Ok(())
    }
}

fn params_line(p: &BivariateParams) -> String {
    format!(
        "x1: c = {:.6}, alpha = {:.6}, beta = {:.6}\nx2: c = {:.6}, alpha = {:.6}, beta = {:.6}\ntheta = {:.6}\n",
        p.m1.c, p.m1.alpha, p.m1.beta, p.m2.c, p.m2.alpha, p.m2.beta, p.theta
    )
}

fn cmd_fit(ctx: &Ctx, a: &DataArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let (s, info) = load(&a.data)?;
    let f: FitResult = fit(&s, &cfg)?;
    let summary = params_line(&f.params);
    let w = f.warnings.clone();
    ctx.emit(&ctx.report(Some(info), cfg, f, w), &a.common, &summary)
}

#[derive(Serialize)]
struct GofOut {
    params: BivariateParams,
    marginal: GofResult,
    conditional: GofResult,
}

fn bivariate_from(v: &[f64]) -> std::result::Result<BivariateParams, Failure> {
    if v.len() != 7 {
        return Err(usage(format!("expected c1,alpha1,beta1,c2,alpha2,beta2,theta; got {} values", v.len())));
    }
    let m1 = MarginalParams::new(v[0], v[1], v[2]).map_err(usage)?;
    let m2 = MarginalParams::new(v[3], v[4], v[5]).map_err(usage)?;
    BivariateParams::new(m1, m2, v[6]).map_err(usage)
}

fn cmd_gof(ctx: &Ctx, a: &GofArgs) -> Outcome {
    let common = &a.data.common;
    let cfg = config(common)?;
    let (s, info) = load(&a.data.data)?;
    let mut warnings = Vec::new();
    let params = match &a.params {
        Some(v) => bivariate_from(v)?,
        None => {
            let f = fit(&s, &cfg)?;
            warnings.extend(f.warnings);
            f.params
        }
    };
    let conv = common.ks.into();
    let marginal = gof::ks_marginal(&s.x1, &params.m1, &cfg, conv)?;
    let conditional = gof::ks_conditional(&s, &params, &cfg, a.conditional.into(), conv)?;
    for (name, r) in [("marginal", &marginal), ("conditional", &conditional)] {
        if r.clamped > 0 {
            warnings.push(format!("{name}: {} observations outside the model support", r.clamped));
        }
    }
    let summary = format!(
        "{}D1 = {:.6} (p = {:.4})\nD21 = {:.6} (p = {:.4})\n",
        params_line(&params),
        marginal.d_stat,
        marginal.p_value,
        conditional.d_stat,
        conditional.p_value
    );
    if let Some(stem) = &common.out {
        let rule = a.plotting.into();
        let q1 = gof::qq_data(&s.x1, |u| params.m1.quantile(u, &cfg), rule)?;
        let q2 = gof::qq_data(&s.x2, |u| params.m2.quantile(u, &cfg), rule)?;
        let mut buf = String::from("margin\tposition\tempirical\tmodel\n");
        for (k, q) in [(1, &q1), (2, &q2)] {
            for r in &q.rows {
                buf += &format!("x{k}\t{:?}\t{:?}\t{:?}\n", r.position, r.empirical, r.model);
            }
        }
        fs::write(with_suffix(stem, ".qq.tsv"), buf)?;
    }
    ctx.emit(&ctx.report(Some(info), cfg, GofOut { params, marginal, conditional }, warnings), common, &summary)
}

#[derive(Serialize)]
struct LmomOut {
    x1: LMomentVector,
    x2: LMomentVector,
}

fn cmd_lmoments(ctx: &Ctx, a: &DataArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let (s, info) = load(&a.data)?;
    let r = s.n().min(4);
    let out = LmomOut { x1: sample_lmoments(&s.x1, r)?, x2: sample_lmoments(&s.x2, r)? };
    let summary = format!(
        "x1: l1 = {:.6}, l2 = {:.6}, t3 = {:.6}, t4 = {:.6}\nx2: l1 = {:.6}, l2 = {:.6}, t3 = {:.6}, t4 = {:.6}\n",
        out.x1.l1, out.x1.l2, out.x1.t3, out.x1.t4, out.x2.l1, out.x2.l2, out.x2.t3, out.x2.t4
    );
    ctx.emit(&ctx.report(Some(info), cfg, out, Vec::new()), &a.common, &summary)
}

#[derive(Serialize)]
struct ComomOut {
    sample: LComomentSet,
    fitted: Option<BivariateParams>,
    population: Option<LComomentSet>,
}

fn cmd_comoments(ctx: &Ctx, a: &DataArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let (s, info) = load(&a.data)?;
    let sample = sample_lcomoments(&s)?;
    let mut warnings = Vec::new();
    let (fitted, population) = match fit(&s, &cfg) {
        Ok(f) => {
            warnings.extend(f.warnings);
            (Some(f.params), Some(population_lcomoments(&f.params, &cfg)?))
        }
        Err(e) => {
            warnings.push(format!("no population comoments: fit failed ({e})"));
            (None, None)
        }
    };
    let mut summary = format!("sample: rho12 = {:.6}, rho21 = {:.6}\n", sample.rho12, sample.rho21);
    if let Some(p) = &population {
        summary += &format!("fitted model: rho12 = {:.6}, rho21 = {:.6}\n", p.rho12, p.rho21);
    }
    ctx.emit(&ctx.report(Some(info), cfg, ComomOut { sample, fitted, population }, warnings), &a.common, &summary)
}

#[derive(Serialize)]
struct SampleOut {
    spec: SamplerSpec,
    catalog: Option<CaseId>,
    params: BivariateParams,
}

fn sample_params(a: &SampleArgs) -> std::result::Result<(Option<CaseId>, BivariateParams), Failure> {
    if let Some(name) = &a.catalog {
        let id: CaseId = name.parse().map_err(usage)?;
        let k = id.param_names().len();
        let pick = |c: Option<f64>, d: Option<f64>, m: usize| -> std::result::Result<Vec<f64>, Failure> {
            let v: Vec<f64> = [c, d].into_iter().flatten().collect();
            if v.len() != k || (k == 1 && d.is_some()) {
                return Err(usage(format!(
                    "{id} takes {} parameter(s) ({}) per marginal: use --c{m}{}",
                    k,
                    id.param_names().join(", "),
                    if k == 2 { format!(" and --d{m}") } else { String::new() }
                )));
            }
            Ok(v)
        };
        let e = catalog::make_case(id, &pick(a.c1, a.d1, 1)?, &pick(a.c2, a.d2, 2)?, a.theta).map_err(usage)?;
        return Ok((Some(id), e.mapped));
    }
    match (&a.m1, &a.m2) {
        (Some(m1), Some(m2)) if m1.len() == 3 && m2.len() == 3 => {
            let v: Vec<f64> = m1.iter().chain(m2).copied().chain([a.theta]).collect();
            Ok((None, bivariate_from(&v)?))
        }
        _ => Err(usage("sample needs --catalog NAME or both --m1 c,alpha,beta and --m2 c,alpha,beta")),
    }
}

fn cmd_sample(ctx: &Ctx, a: &SampleArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let (catalog, params) = sample_params(a)?;
    if a.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let spec = SamplerSpec { seed: a.seed, n: a.n, method: a.method.into() };
    let s = draw(&params, &spec, &cfg)?;
    match &a.common.out {
        Some(stem) => {
            let path = with_suffix(stem, ".csv");
            s.write_csv(fs::File::create(&path)?)?;
            let summary = format!("{} rows: {}\n", s.n(), path.display());
            ctx.emit(&ctx.report(None, cfg, SampleOut { spec, catalog, params }, Vec::new()), &a.common, &summary)
        }
        None => Ok(s.write_csv(io::stdout().lock())?),
    }
}

#[derive(Serialize)]
struct ModelGof {
    d1: f64,
    d21: f64,
}

#[derive(Serialize)]
struct CompareOut {
    proposed: BivariateParams,
    proposed_gof: ModelGof,
    competitor: MrqParams,
    competitor_gof: ModelGof,
    /// `proposed`, `competitor` or `tie`, by the marginal statistic.
    smaller_d1: &'static str,
}

fn cmd_compare(ctx: &Ctx, a: &DataArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let conv = a.common.ks.into();
    let (s, info) = load(&a.data)?;
    let f = fit(&s, &cfg)?;
    let m = fit_mrq(&s, &cfg)?;
    let pg = ModelGof {
        d1: gof::ks_marginal(&s.x1, &f.params.m1, &cfg, conv)?.d_stat,
        d21: gof::ks_conditional(&s, &f.params, &cfg, ConditionalMode::Pooled, conv)?.d_stat,
    };
    let mg = ModelGof {
        d1: gof::mrq_ks_marginal(&s.x1, &m.params, &cfg, conv)?.d_stat,
        d21: gof::mrq_ks_conditional(&s, &m.params, &cfg, conv)?.d_stat,
    };
    let smaller_d1 = match pg.d1.total_cmp(&mg.d1) {
        std::cmp::Ordering::Less => "proposed",
        std::cmp::Ordering::Greater => "competitor",
        std::cmp::Ordering::Equal => "tie",
    };
    let summary = format!(
        "{:<12} {:>10} {:>10}\n{:<12} {:>10.6} {:>10.6}\n{:<12} {:>10.6} {:>10.6}\nsmaller D1: {smaller_d1}\n",
        "model", "D1", "D21", "proposed", pg.d1, pg.d21, "competitor", mg.d1, mg.d21
    );
    let mut warnings = f.warnings.clone();
    warnings.extend(m.warnings.iter().map(|w| format!("competitor: {w}")));
    let out = CompareOut { proposed: f.params, proposed_gof: pg, competitor: m.params, competitor_gof: mg, smaller_d1 };
    ctx.emit(&ctx.report(Some(info), cfg, out, warnings), &a.common, &summary)
}

#[derive(Serialize)]
struct CaseSummary {
    name: &'static str,
    params: &'static [&'static str],
    closed_cdf: bool,
}

#[derive(Serialize)]
struct CaseOut {
    entry: catalog::CatalogEntry,
    lmoments: [Option<LMomentVector>; 2],
}

fn cmd_catalog(ctx: &Ctx, a: &CatalogArgs) -> Outcome {
    let cfg = config(&a.common)?;
    let Some(name) = &a.name else {
        let list: Vec<CaseSummary> = CaseId::ALL
            .iter()
            .map(|&id| CaseSummary { name: id.name(), params: id.param_names(), closed_cdf: id.has_closed_cdf() })
            .collect();
        let summary: String = list.iter().map(|c| format!("{:<20} {}\n", c.name, c.params.join(", "))).collect();
        return ctx.emit(&ctx.report(None, cfg, list, Vec::new()), &a.common, &summary);
    };
    let id: CaseId = name.parse().map_err(usage)?;
    let (d1, d2) = catalog::example_params(id);
    let p1 = a.p1.clone().unwrap_or(d1);
    let p2 = a.p2.clone().unwrap_or(d2);
    let entry = catalog::make_case(id, &p1, &p2, a.theta).map_err(usage)?;
    let lm = |m: &MarginalParams| population_lmoments(m).ok();
    let lmoments = [lm(&entry.mapped.m1), lm(&entry.mapped.m2)];
    let summary = format!("{id}\n{}", params_line(&entry.mapped));
    ctx.emit(&ctx.report(None, cfg, CaseOut { entry, lmoments }, Vec::new()), &a.common, &summary)
}

fn cmd_reproduce(ctx: &Ctx, c: &CommonArgs) -> Outcome {
    let cfg = config(c)?;
    let rows = reproduce::run(&cfg)?;
    let table = reproduce::render(&rows);
    print!("{table}");
    if let Some(stem) = &c.out {
        let path = ctx.report(None, cfg, rows, Vec::new()).write(stem)?;
        println!("report: {}", path.display());
    }
    Ok(())
}

fn run(cli: &Cli, ctx: &Ctx) -> Outcome {
    match &cli.command {
        Command::Fit(a) => cmd_fit(ctx, a),
        Command::Gof(a) => cmd_gof(ctx, a),
        Command::Lmoments(a) => cmd_lmoments(ctx, a),
        Command::Comoments(a) => cmd_comoments(ctx, a),
        Command::Sample(a) => cmd_sample(ctx, a),
        Command::Compare(a) => cmd_compare(ctx, a),
        Command::Catalog(a) => cmd_catalog(ctx, a),
        Command::Reproduce(a) => cmd_reproduce(ctx, a),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let ctx = Ctx { argv: argv.into_iter().skip(1).collect() };
    match run(&cli, &ctx) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_data_error() { EXIT_DATA } else { EXIT_NUMERIC })
        }
    }
}
