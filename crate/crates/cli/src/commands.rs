use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use pointpair_core::bounds::{
    assess_sharpness, catalog, estimate_quasimetric_constant, quasimetric_constant_paper, select, verify_bound,
    BoundRecord, QuasiConstants,
};
use pointpair_core::geometry::{DomainShape, PairSampler};
use pointpair_core::metrics::{parse_metric, MetricId};
use pointpair_core::search::{
    conformal_distortion_check, conjecture_scan, cor57_check, thm56_check, QRMap, RefineOptions, SearchResult,
};
use pointpair_core::specfun::{ell_k, gamma2, lambda2_estimate};
use pointpair_core::{Error, ViolationReport};

use crate::args::*;
use crate::report::*;

/// Id under which `verify` checks the quasi-metric constant.
pub const QUASI_ID: &str = "cor3.4";
/// Slack on the quasi-metric constants.
pub const QUASI_TOL: f64 = 1e-6;

const DEFAULT_ALPHAS: [f64; 6] = [0.5, 1.0, 2.0, 4.0, 9.0, 16.0];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A finished run: the envelope, its table rows, and how it ended.
pub struct Run {
    pub envelope: ReportEnvelope,
    pub rows: Vec<Row>,
    /// Table used instead of `rows` by commands without bound rows.
    pub custom_table: Option<String>,
}

struct Builder {
    env: ReportEnvelope,
    rows: Vec<Row>,
    violation: bool,
    warning: bool,
}

impl Builder {
    fn new(
        argv: &[String],
        sub: &str,
        seed: u64,
        domain: Option<&DomainShape>,
        alphas: Vec<f64>,
        samples: Option<usize>,
    ) -> Self {
        Builder {
            env: ReportEnvelope {
                schema_version: SCHEMA_VERSION,
                command: argv.to_vec(),
                subcommand: sub.into(),
                seed,
                domain: domain.map(|d| d.to_string()),
                domain_spec: domain.map(value),
                alphas,
                samples,
                violation_reports: Vec::new(),
                search_results: Vec::new(),
                skipped: Vec::new(),
                notes: Vec::new(),
                status: Status::Pass,
                wall_time_seconds: 0.0,
            },
            rows: Vec::new(),
            violation: false,
            warning: false,
        }
    }

    fn report(&mut self, r: &ViolationReport, row_id: String) {
        self.violation |= !r.pass;
        self.rows.push(Row {
            bound_id: row_id,
            alpha: r.alpha,
            lower_const: Some(r.constants.lower),
            upper_const: Some(r.constants.upper),
            worst_lower_margin: r.worst_lower.as_ref().map(|w| w.value),
            worst_upper_margin: r.worst_upper.as_ref().map(|w| w.value),
            empirical_max_quotient: r.max_quotient.as_ref().map(|w| w.value),
            pass: Some(r.pass),
        });
        self.env.violation_reports.push(value(r));
    }

    fn finish(mut self, custom_table: Option<String>) -> Run {
        self.env.status = if self.violation {
            Status::Violation
        } else if self.warning {
            Status::ConvergenceWarning
        } else {
            Status::Pass
        };
        Run {
            envelope: self.env,
            rows: self.rows,
            custom_table,
        }
    }
}

pub fn eval(a: &EvalArgs) -> CliResult<String> {
    let d = a.domain.build()?;
    let m = match a.metric.as_str() {
        "rho" => match d {
            DomainShape::HalfSpace { .. } => MetricId::RhoHalfSpace,
            DomainShape::UnitBall { .. } => MetricId::RhoBall,
            _ => {
                return Err(CliError::Usage(format!(
                    "rho is only available on the half-space and the ball, not {d}"
                )))
            }
        },
        name => parse_metric(name, a.alpha).map_err(|e| CliError::Usage(e.to_string()))?,
    };
    Ok(fmt_num(m.eval(&d, &a.x, &a.y)?))
}

#[derive(Serialize)]
struct QuasiCell {
    bound_id: &'static str,
    domain: String,
    alpha: f64,
    samples: usize,
    constants: QuasiConstants,
    estimate: SearchResult,
    /// Against the proof-chain constant.
    pass: bool,
    stated_pass: bool,
}

fn quasi_cell(
    b: &mut Builder,
    d: &DomainShape,
    alpha: f64,
    samples: usize,
    seed: u64,
    refine: Option<&RefineOptions>,
) -> CliResult<()> {
    let c = quasimetric_constant_paper(alpha)?;
    let e = estimate_quasimetric_constant(d, alpha, &PairSampler::new(d.clone(), seed, samples), refine)?;
    let pass = e.best_value <= c.proof_chain + QUASI_TOL;
    let stated_pass = e.best_value <= c.stated + QUASI_TOL;
    b.violation |= !pass;
    b.warning |= refine.is_some() && !e.converged;
    if c.discrepancy {
        b.env.notes.push(format!(
            "{QUASI_ID} a={}: stated constant {} differs from the proof-chain constant {}; the estimate {} is checked \
             against the proof chain{}",
            fmt_num(alpha),
            fmt_num(c.stated),
            fmt_num(c.proof_chain),
            fmt_num(e.best_value),
            if stated_pass {
                ""
            } else {
                " and exceeds the stated constant"
            }
        ));
    }
    b.rows.push(Row {
        bound_id: QUASI_ID.into(),
        alpha,
        lower_const: None,
        upper_const: Some(c.proof_chain),
        worst_lower_margin: None,
        worst_upper_margin: Some(c.proof_chain - e.best_value),
        empirical_max_quotient: Some(e.best_value),
        pass: Some(pass),
    });
    b.env.search_results.push(value(&QuasiCell {
        bound_id: QUASI_ID,
        domain: d.to_string(),
        alpha,
        samples,
        constants: c,
        estimate: e,
        pass,
        stated_pass,
    }));
    Ok(())
}

enum Selected {
    Record(Box<BoundRecord>),
    Quasi,
}

fn selected(all: bool, ids: &[String]) -> CliResult<Vec<Selected>> {
    if all {
        let mut v: Vec<Selected> = catalog().into_iter().map(|r| Selected::Record(Box::new(r))).collect();
        v.push(Selected::Quasi);
        return Ok(v);
    }
    let mut v = Vec::new();
    for id in ids {
        if id == QUASI_ID {
            v.push(Selected::Quasi);
        } else {
            v.extend(
                select(id)
                    .map_err(|e| CliError::Usage(e.to_string()))?
                    .into_iter()
                    .map(|r| Selected::Record(Box::new(r))),
            );
        }
    }
    Ok(v)
}

pub fn verify(a: &VerifyArgs, argv: &[String]) -> CliResult<Run> {
    let d = a.domain.build()?;
    let alphas = a.alphas.grid(&DEFAULT_ALPHAS);
    let seed = a.output.seed;
    let sel = selected(a.all, &a.bound)?;
    let mut b = Builder::new(argv, "verify", seed, Some(&d), alphas.clone(), Some(a.samples));
    let refine = a.refine.refine.then(|| a.refine.options(seed));
    for s in &sel {
        for &alpha in &alphas {
            match s {
                Selected::Quasi => quasi_cell(&mut b, &d, alpha, a.samples, seed, refine.as_ref())?,
                Selected::Record(rec) => {
                    if let Err(e) = rec.check_applicable(&d, alpha) {
                        b.env.skipped.push(Skipped {
                            bound_id: rec.id.clone(),
                            alpha,
                            reason: e.to_string(),
                        });
                        continue;
                    }
                    let r = verify_bound(rec, &d, alpha, &PairSampler::new(d.clone(), seed, a.samples), a.tol)?;
                    if !r.stated_pass && r.pass {
                        b.env.notes.push(format!(
                            "{} a={}: stated constants [{}, {}] violated (margins {}, {}); corrected [{}, {}] hold",
                            rec.id,
                            fmt_num(alpha),
                            fmt_num(r.constants.stated_lower),
                            fmt_num(r.constants.stated_upper),
                            fmt_num(r.stated_worst_lower_margin()),
                            fmt_num(r.stated_worst_upper_margin()),
                            fmt_num(r.constants.lower),
                            fmt_num(r.constants.upper),
                        ));
                    }
                    b.report(&r, rec.id.clone());
                }
            }
        }
    }
    Ok(b.finish(None))
}

pub fn sharpness(a: &SharpnessArgs, argv: &[String]) -> CliResult<Run> {
    let d = a.domain.build()?;
    let alphas = a.alphas.grid(&[1.0]);
    let seed = a.output.seed;
    let records: Vec<BoundRecord> = if a.bound.is_empty() {
        catalog()
            .into_iter()
            .filter(|r| r.sharp_lower || r.sharp_upper)
            .collect()
    } else {
        let mut v = Vec::new();
        for id in &a.bound {
            v.extend(select(id).map_err(|e| CliError::Usage(e.to_string()))?);
        }
        v
    };
    let opts = RefineOptions {
        starts: a.starts,
        pool: a.pool,
        ..RefineOptions::with_seed(seed)
    };
    let mut b = Builder::new(argv, "sharpness", seed, Some(&d), alphas.clone(), None);
    for rec in &records {
        for &alpha in &alphas {
            if let Err(e) = rec.check_applicable(&d, alpha) {
                b.env.skipped.push(Skipped {
                    bound_id: rec.id.clone(),
                    alpha,
                    reason: e.to_string(),
                });
                continue;
            }
            let r = assess_sharpness(rec, &d, alpha, &opts)?;
            let lower_margin = r.achieved_min - r.target_lower;
            let upper_margin = r.target_upper - r.achieved_max;
            let tol = 1e-9 * r.target_upper.max(1.0);
            let holds = lower_margin >= -tol && upper_margin >= -tol;
            b.violation |= !holds;
            let short = (r.sharp_upper_claimed && !r.upper_reached()) || (r.sharp_lower_claimed && !r.lower_reached());
            if short {
                b.warning = true;
                b.env.notes.push(format!(
                    "{} a={}: search reached {} of the upper and {} of the lower constant",
                    rec.id,
                    fmt_num(alpha),
                    fmt_num(r.upper_ratio),
                    fmt_num(r.lower_ratio)
                ));
            }
            b.rows.push(Row {
                bound_id: rec.id.clone(),
                alpha,
                lower_const: Some(r.target_lower),
                upper_const: Some(r.target_upper),
                worst_lower_margin: Some(lower_margin),
                worst_upper_margin: Some(upper_margin),
                empirical_max_quotient: Some(r.achieved_max),
                pass: Some(holds),
            });
            b.env.search_results.push(value(&r));
        }
    }
    Ok(b.finish(None))
}

pub fn quasi(a: &QuasiArgs, argv: &[String]) -> CliResult<Run> {
    let d = a.domain.build()?;
    let alphas = a.alphas.grid(&[4.0]);
    let seed = a.output.seed;
    let refine = a.refine.refine.then(|| a.refine.options(seed));
    let mut b = Builder::new(argv, "quasi", seed, Some(&d), alphas.clone(), Some(a.samples));
    for &alpha in &alphas {
        quasi_cell(&mut b, &d, alpha, a.samples, seed, refine.as_ref())?;
    }
    Ok(b.finish(None))
}

fn a_label(a: Complex64) -> String {
    if a.im == 0.0 {
        fmt_num(a.re)
    } else {
        format!("{};{}", fmt_num(a.re), fmt_num(a.im))
    }
}

pub fn conjecture(a: &ConjectureArgs, argv: &[String]) -> CliResult<Run> {
    let disk = DomainShape::unit_ball(2)?;
    let alphas = a.alphas.grid(&[4.0]);
    let seed = a.output.seed;
    let refine = a.refine.refine.then(|| a.refine.options(seed));
    let mut b = Builder::new(argv, "conjecture", seed, Some(&disk), alphas.clone(), Some(a.samples));
    for &alpha in &alphas {
        for &m in &a.a {
            let s = PairSampler::new(disk.clone(), seed, a.samples);
            let r = conjecture_scan(alpha, m, &s, refine.as_ref())?;
            b.violation |= r.exceeds;
            b.warning |= refine.is_some() && !r.sup.converged;
            if r.below_reciprocal {
                b.env.notes.push(format!(
                    "a={} alpha={}: the sampled infimum {} is below 1/(1+|a|)",
                    a_label(m),
                    fmt_num(alpha),
                    fmt_num(r.campaign.min_quotient_value())
                ));
            }
            b.rows.push(Row {
                bound_id: format!("conjecture[a={}]", a_label(m)),
                alpha,
                lower_const: Some(1.0 / r.bound),
                upper_const: Some(r.bound),
                worst_lower_margin: r.campaign.worst_lower.as_ref().map(|w| w.value),
                worst_upper_margin: Some(r.bound - r.sup.best_value),
                empirical_max_quotient: Some(r.sup.best_value),
                pass: Some(!r.exceeds),
            });
            b.env.search_results.push(value(&r));
            if a.conformal {
                let c = conformal_distortion_check(alpha, m, &s, a.tol)?;
                b.report(&c, format!("cor5.3[a={}]", a_label(m)));
            }
        }
    }
    Ok(b.finish(None))
}

pub fn specfun(a: &SpecfunArgs, argv: &[String]) -> CliResult<Run> {
    let mut b = Builder::new(argv, "specfun", a.output.seed, None, Vec::new(), None);
    let mut table = String::from("function,argument,value\n");
    for &r in &a.ell_k {
        let v = ell_k(r)?;
        table.push_str(&format!("ell_k,{},{}\n", fmt_num(r), fmt_num(v)));
        b.env
            .search_results
            .push(json!({"function": "ell_k", "r": r, "value": v}));
    }
    for &t in &a.gamma2 {
        let v = gamma2(t)?;
        table.push_str(&format!("gamma2,{},{}\n", fmt_num(t), fmt_num(v)));
        b.env
            .search_results
            .push(json!({"function": "gamma2", "t": t, "value": v}));
    }
    if a.lambda2 {
        let e = lambda2_estimate(a.tmax)?;
        b.warning |= !e.converged;
        for (t, v) in e.t_values.iter().zip(&e.estimates) {
            table.push_str(&format!("log_lambda2,{},{}\n", fmt_num(*t), fmt_num(*v)));
        }
        table.push_str(&format!("lambda2,{},{}\n", fmt_num(a.tmax), fmt_num(e.lambda())));
        b.env
            .search_results
            .push(json!({"function": "lambda2", "lambda": e.lambda(), "estimate": value(&e)}));
    }
    if a.ell_k.is_empty() && a.gamma2.is_empty() && !a.lambda2 {
        return Err(CliError::Usage(
            "nothing to compute: pass --lambda2, --ell-k or --gamma2".into(),
        ));
    }
    Ok(b.finish(Some(table)))
}

pub fn qr(a: &QrArgs, argv: &[String]) -> CliResult<Run> {
    let disk = DomainShape::unit_ball(2)?;
    let alphas = a.alphas.grid(&[1.0, 4.0, 9.0]);
    let seed = a.output.seed;
    let mut b = Builder::new(argv, "qr", seed, Some(&disk), alphas.clone(), Some(a.samples));
    let est = lambda2_estimate(a.tmax)?;
    b.warning |= !est.converged;
    let lambda = est.lambda();
    b.env.notes.push(format!(
        "lambda_2 = {} from the capacity limit at t = {}",
        fmt_num(lambda),
        fmt_num(a.tmax)
    ));
    for &k in &a.k {
        let m = QRMap::radial_stretch(k).map_err(|e| CliError::Usage(e.to_string()))?;
        let s = PairSampler::new(disk.clone(), seed, a.samples);
        b.report(
            &thm56_check(&m, &s, lambda, a.tol)?,
            format!("thm5.6[K={}]", fmt_num(k)),
        );
        for &alpha in &alphas {
            b.report(
                &cor57_check(&m, alpha, &s, lambda, a.tol)?,
                format!("cor5.7[K={}]", fmt_num(k)),
            );
        }
    }
    Ok(b.finish(None))
}
