//! Instance files, command dispatch and reports.

pub mod input;
pub mod report;

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use input::{parse_instance, parse_instance_str, FileOptions, InstanceFile, TermEntry};
pub use report::{
    combined_exit, error_verdict, exit_class, render_text, Canonical, CommandResult,
    InstanceSummary, KoszulRow, RecordSummary, ReportDocument, Timings, VERDICTS,
};

use crate::error::{Error, Result};
use crate::jacobian::{Analysis, AnalysisOptions, HypersurfaceInstance, TableRelation};
use crate::koszul::{build_koszul, euler_closed_form, KoszulSetup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Analyze,
    Hilbert,
    Duality,
    Hodge,
    Torelli,
    Koszul,
    Pvalue,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Hilbert => "hilbert",
            Command::Duality => "duality",
            Command::Hodge => "hodge",
            Command::Torelli => "torelli",
            Command::Koszul => "koszul",
            Command::Pvalue => "pvalue",
        }
    }

    /// Commands whose statements need `n` even.
    pub fn needs_even(&self) -> bool {
        matches!(self, Command::Hodge | Command::Torelli)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub degree_range: Option<(i64, i64)>,
    pub degree: Option<i64>,
    pub nmax: Option<u32>,
    pub budget: Option<usize>,
    pub strict_parity: bool,
}

/// Parses `a..b` or `a..=b`, both inclusive.
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Parse(format!("invalid degree range {s:?}, expected a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (i64, i64) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn options(file: &FileOptions, flags: &Flags) -> AnalysisOptions {
    let mut o = AnalysisOptions::default();
    if let Some(n) = flags.nmax.or(file.nmax) {
        o.n_max = n;
    }
    if let Some(b) = flags.budget.or(file.budget) {
        o.budget = b;
    }
    o
}

/// Runs `cmd` on the instance file at `path`.
pub fn run_path(cmd: Command, path: &Path, flags: &Flags) -> ReportDocument {
    let start = Instant::now();
    match parse_instance(path) {
        Ok((h, file)) => run_instance(cmd, h, &file, flags),
        Err(e) => finish(cmd, None, Err(e), Vec::new(), start),
    }
}

pub fn run_instance(
    cmd: Command,
    h: HypersurfaceInstance,
    file: &FileOptions,
    flags: &Flags,
) -> ReportDocument {
    let start = Instant::now();
    let summary = InstanceSummary::of(&h);
    let mut warnings = Vec::new();
    if h.n() % 2 == 1 && !cmd.needs_even() {
        let msg = format!(
            "n = {} is odd; the Hodge-theoretic statements assume n even",
            h.n()
        );
        if flags.strict_parity {
            return finish(cmd, Some(summary), Err(Error::Parse(msg)), warnings, start);
        }
        warnings.push(msg);
    }
    let outcome = Analysis::new(h, options(file, flags)).and_then(|a| execute(cmd, &a, flags));
    finish(cmd, Some(summary), outcome, warnings, start)
}

fn finish(
    cmd: Command,
    instance: Option<InstanceSummary>,
    outcome: Result<(CommandResult, Vec<String>)>,
    warnings: Vec<String>,
    start: Instant,
) -> ReportDocument {
    let (result, verdicts) = match outcome {
        Ok(x) => x,
        Err(e) => (
            CommandResult::Error {
                message: e.to_string(),
            },
            vec![error_verdict(&e).to_string()],
        ),
    };
    let exit_code = combined_exit(&verdicts);
    ReportDocument {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        canonical: Canonical {
            command: cmd.name().to_string(),
            instance,
            result,
            verdicts,
            warnings,
            exit_code,
        },
        timings: Timings {
            total_ms: start.elapsed().as_millis() as u64,
            threads: threads(),
        },
    }
}

fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

fn degrees(flags: &Flags, default: (i64, i64)) -> Vec<i64> {
    if let Some(m) = flags.degree {
        return vec![m];
    }
    let (a, b) = flags.degree_range.unwrap_or(default);
    (a..=b).collect()
}

fn execute(cmd: Command, a: &Analysis, flags: &Flags) -> Result<(CommandResult, Vec<String>)> {
    let s = a.sigma();
    let h = a.instance();
    match cmd {
        Command::Analyze => {
            let records = a
                .records()
                .iter()
                .map(|r| RecordSummary::of(r, h.variables()))
                .collect();
            let certificate = a.completeness_certificate()?;
            let verdict = if certificate.passed {
                "certificate_passed"
            } else {
                "certificate_failed"
            };
            Ok((
                CommandResult::Analyze {
                    records,
                    total_tjurina: a.total_tjurina(),
                    certificate,
                },
                vec![verdict.into()],
            ))
        }
        Command::Hilbert => {
            let rows = a.hilbert_table(degrees(flags, (0, s + 2)))?;
            Ok((CommandResult::Hilbert { rows }, vec!["ok".into()]))
        }
        Command::Duality => {
            let d = a.duality_report()?;
            let verdict = if d.holds() {
                "duality_symmetric"
            } else {
                "duality_violation"
            };
            Ok((CommandResult::Duality(d), vec![verdict.into()]))
        }
        Command::Hodge => Ok((CommandResult::Hodge(a.hodge_graded()?), vec!["ok".into()])),
        Command::Torelli => {
            let out = a.torelli_report()?;
            let verdict = out.report.verdict.as_str().to_string();
            Ok((
                CommandResult::Torelli {
                    report: out.report,
                    generation: out.generation,
                },
                vec![verdict],
            ))
        }
        Command::Koszul => {
            let ms = degrees(flags, (0, s + 3));
            let rows = crate::par::map(ms, |m| -> Result<KoszulRow> {
                let setup = KoszulSetup::jacobian(h.f(), m)?;
                let cols = setup.max_columns();
                if cols > a.options().budget {
                    return Err(Error::BudgetExceeded {
                        cols,
                        budget: a.options().budget,
                    });
                }
                let piece = build_koszul(&setup);
                let cohomology = a.koszul_of(&piece);
                let ev_check = a.koszul_ev_row(m, &cohomology)?;
                Ok(KoszulRow {
                    is_complex: piece.is_complex(),
                    euler_closed_form: euler_closed_form(&setup),
                    a_mod_j: a.quotient_dims(m)?.a_mod_j,
                    cohomology,
                    ev_check,
                })
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            let n = h.n();
            let consistent = rows.iter().all(|r| {
                let c = &r.cohomology;
                r.is_complex
                    && c.euler_cohomology() == r.euler_closed_form
                    && c.h[n + 2] == r.a_mod_j
                    && c.h[..=n].iter().all(|&x| x == 0)
                    && r.ev_check.equal
            });
            let mut verdicts = vec![if consistent {
                "koszul_consistent"
            } else {
                "koszul_violation"
            }
            .to_string()];
            if rows.iter().any(|r| !r.ev_check.vanishing_holds()) {
                verdicts.push("koszul_ev_violation".into());
            }
            Ok((CommandResult::Koszul { rows }, verdicts))
        }
        Command::Pvalue => {
            let p = a.p_value()?;
            let mut verdicts = vec![match p.relation {
                TableRelation::Equal => "p_value_matches_table",
                TableRelation::NotTabulated => "p_value_not_tabulated",
                _ => "p_value_discrepancy_flagged",
            }
            .to_string()];
            if !p.monotone {
                verdicts.push("p_value_not_monotone".into());
            }
            Ok((CommandResult::Pvalue(p), verdicts))
        }
    }
}
