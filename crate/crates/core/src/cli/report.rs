use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::scalar::format_scalar;
use crate::error::Error;
use crate::jacobian::{
    Certificate, DualityReport, GenerationReport, HodgeGraded, HypersurfaceInstance, PValueReport,
    QuotientDims, TorelliReport,
};
use crate::koszul::{KoszulCohomology, KoszulEvRow};
use crate::local::SingularityRecord;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub d: u32,
    pub sigma: i64,
    pub variables: Vec<String>,
    pub f: String,
    pub singular_points: Vec<Vec<String>>,
}

impl InstanceSummary {
    pub fn of(h: &HypersurfaceInstance) -> Self {
        Self {
            n: h.n(),
            d: h.d(),
            sigma: h.sigma(),
            variables: h.variables().to_vec(),
            f: h.f().display_with(h.variables()).to_string(),
            singular_points: h.points().iter().map(|p| p.to_strings()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordSummary {
    pub point: Vec<String>,
    pub chart: String,
    pub ade_type: String,
    pub milnor: usize,
    pub tjurina: usize,
    pub hessian_corank: usize,
    pub determinacy_order: u32,
    pub weights: Vec<String>,
    pub alpha_tilde: String,
    pub alpha_tilde_floor: i64,
    pub local_basis: Vec<String>,
}

impl RecordSummary {
    pub fn of(r: &SingularityRecord, variables: &[String]) -> Self {
        let chart = r.point.chart();
        let local: Vec<String> = variables
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != chart)
            .map(|(_, v)| v.clone())
            .collect();
        let floor = r.alpha_tilde.floor().to_integer();
        Self {
            point: r.point.to_strings(),
            chart: variables[chart].clone(),
            ade_type: r.ade_type.to_string(),
            milnor: r.milnor,
            tjurina: r.tjurina,
            hessian_corank: r.hessian_corank,
            determinacy_order: r.algebra.order(),
            weights: r.weights.iter().map(format_scalar).collect(),
            alpha_tilde: format_scalar(&r.alpha_tilde),
            alpha_tilde_floor: i64::try_from(floor).expect("small weight sum"),
            local_basis: r
                .algebra
                .basis()
                .iter()
                .map(|m| m.display_with(&local).to_string())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulRow {
    pub cohomology: KoszulCohomology,
    pub is_complex: bool,
    pub euler_closed_form: i64,
    pub a_mod_j: usize,
    pub ev_check: KoszulEvRow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CommandResult {
    Analyze {
        records: Vec<RecordSummary>,
        total_tjurina: usize,
        certificate: Certificate,
    },
    Hilbert {
        rows: Vec<QuotientDims>,
    },
    Duality(DualityReport),
    Hodge(HodgeGraded),
    Torelli {
        report: TorelliReport,
        generation: Vec<GenerationReport>,
    },
    Koszul {
        rows: Vec<KoszulRow>,
    },
    Pvalue(PValueReport),
    Error {
        message: String,
    },
}

/// The reproducible part of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Canonical {
    pub command: String,
    pub instance: Option<InstanceSummary>,
    pub result: CommandResult,
    pub verdicts: Vec<String>,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: u64,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub canonical: Canonical,
    pub timings: Timings,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// JSON of the canonical section alone, byte-identical across runs.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.canonical).expect("reports serialize")
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_HYPOTHESES: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Every verdict string, with its exit class.
pub const VERDICTS: &[(&str, i32)] = &[
    ("ok", EXIT_OK),
    ("certificate_passed", EXIT_OK),
    ("certificate_failed", EXIT_CONSISTENCY),
    ("duality_symmetric", EXIT_OK),
    ("duality_violation", EXIT_CONSISTENCY),
    ("injective", EXIT_OK),
    ("kernel_exceeds_J_d", EXIT_CONSISTENCY),
    ("hypotheses_not_satisfied", EXIT_HYPOTHESES),
    ("koszul_consistent", EXIT_OK),
    ("koszul_violation", EXIT_CONSISTENCY),
    ("koszul_ev_violation", EXIT_CONSISTENCY),
    ("p_value_matches_table", EXIT_OK),
    ("p_value_discrepancy_flagged", EXIT_OK),
    ("p_value_not_tabulated", EXIT_OK),
    ("p_value_not_monotone", EXIT_CONSISTENCY),
    ("usage_error", EXIT_USAGE),
    ("hypotheses_error", EXIT_HYPOTHESES),
    ("consistency_error", EXIT_CONSISTENCY),
    ("budget_exceeded", EXIT_BUDGET),
];

pub fn exit_class(verdict: &str) -> i32 {
    VERDICTS
        .iter()
        .find(|(v, _)| *v == verdict)
        .map(|&(_, c)| c)
        .unwrap_or_else(|| panic!("unregistered verdict {verdict}"))
}

/// Verdict string for a library error.
pub fn error_verdict(e: &Error) -> &'static str {
    match e {
        Error::Parse(_)
        | Error::InvalidChart { .. }
        | Error::NotSingular(_)
        | Error::Setup { .. } => "usage_error",
        Error::NoStabilization { .. }
        | Error::NotSimple(_)
        | Error::NotQuasiHomogeneous { .. }
        | Error::Unsupported(_)
        | Error::NonVersal { .. } => "hypotheses_error",
        Error::IncompleteSingularLocus { .. }
        | Error::Consistency(_)
        | Error::NotInIdeal { .. } => "consistency_error",
        Error::BudgetExceeded { .. } => "budget_exceeded",
    }
}

/// The most severe exit class among the verdicts; budget beats
/// consistency beats hypotheses beats usage.
pub fn combined_exit(verdicts: &[String]) -> i32 {
    let rank = |c: i32| match c {
        EXIT_BUDGET => 4,
        EXIT_CONSISTENCY => 3,
        EXIT_HYPOTHESES => 2,
        EXIT_USAGE => 1,
        _ => 0,
    };
    verdicts
        .iter()
        .map(|v| exit_class(v))
        .max_by_key(|&c| rank(c))
        .unwrap_or(EXIT_OK)
}

/// Plain-text rendering for standard output.
pub fn render_text(doc: &ReportDocument) -> String {
    let c = &doc.canonical;
    let mut s = String::new();
    let _ = writeln!(s, "{} {} :: {}", doc.tool, doc.version, c.command);
    if let Some(i) = &c.instance {
        let _ = writeln!(s, "n = {}, d = {}, sigma = {}", i.n, i.d, i.sigma);
        let _ = writeln!(s, "f = {}", i.f);
        let pts: Vec<String> = i.singular_points.iter().map(|p| show_point(p)).collect();
        let _ = writeln!(
            s,
            "declared points: {}",
            if pts.is_empty() {
                "none".into()
            } else {
                pts.join(", ")
            }
        );
    }
    let _ = writeln!(s);
    match &c.result {
        CommandResult::Analyze {
            records,
            total_tjurina,
            certificate,
        } => {
            let _ = writeln!(
                s,
                "{:<24} {:<6} {:>3} {:>3} {:>6} {:>8}  weights",
                "point", "type", "mu", "tau", "corank", "alpha"
            );
            for r in records {
                let _ = writeln!(
                    s,
                    "{:<24} {:<6} {:>3} {:>3} {:>6} {:>8}  ({})",
                    show_point(&r.point),
                    r.ade_type,
                    r.milnor,
                    r.tjurina,
                    r.hessian_corank,
                    r.alpha_tilde,
                    r.weights.join(", ")
                );
            }
            let _ = writeln!(s, "total Tjurina number: {total_tjurina}");
            let _ = writeln!(
                s,
                "certificate: dim (A/J) at {:?} = {:?} vs declared {} -> {}",
                certificate.degrees,
                certificate.stabilized,
                certificate.declared_tau,
                if certificate.passed { "pass" } else { "FAIL" }
            );
        }
        CommandResult::Hilbert { rows } => {
            let _ = writeln!(s, "{:>4} {:>10} {:>10}", "m", "dim(A/J)", "dim(I/J)");
            for r in rows {
                let _ = writeln!(s, "{:>4} {:>10} {:>10}", r.degree, r.a_mod_j, r.i_mod_j);
            }
        }
        CommandResult::Duality(d) => {
            let _ = writeln!(
                s,
                "{:>4} {:>10} {:>14} {:>6}",
                "m", "dim(I/J)_m", "dim(I/J)_s-m", "equal"
            );
            for r in &d.rows {
                let _ = writeln!(
                    s,
                    "{:>4} {:>10} {:>14} {:>6}",
                    r.degree, r.dim, r.dual_dim, r.equal
                );
            }
            for (m, x) in &d.beyond_sigma {
                let _ = writeln!(s, "dim (I/J)_{m} = {x}");
            }
        }
        CommandResult::Hodge(h) => {
            let _ = writeln!(s, "Gr_F^{} = (A/J)_{}: {}", h.n + 1, h.top.0, h.top.1);
            let _ = writeln!(
                s,
                "Gr_F^{} = ({})_{}: {}",
                h.n, h.next_space, h.next.0, h.next.1
            );
        }
        CommandResult::Torelli { report, generation } => {
            let h = &report.hypotheses;
            let _ = writeln!(
                s,
                "d - (n+2) = {} > 0: {}",
                h.degree_margin,
                h.degree_margin > 0
            );
            let _ = writeln!(
                s,
                "ev surjective in degree {}: {}",
                h.ev_degree, h.ev_surjective
            );
            for g in generation {
                let _ = writeln!(
                    s,
                    "{} generated in degrees {}..{}: {}{}",
                    g.quotient,
                    g.window.0,
                    g.window.1,
                    g.passed,
                    if g.failures.is_empty() {
                        String::new()
                    } else {
                        format!(" (fails at {:?})", g.failures)
                    }
                );
            }
            let _ = writeln!(
                s,
                "map (I/J)_{} [{}] -> Hom((A/J)_{} [{}], ({})_{} [{}])",
                report.target_degree - report.source_degree,
                report.domain_dim,
                report.source_degree,
                report.source_dim,
                report.target_space,
                report.target_degree,
                report.target_dim
            );
            let _ = writeln!(s, "kernel dim on (I/J)_d: {}", report.kernel_dim);
            let _ = writeln!(
                s,
                "lifted kernel dim {} vs dim J_d {}",
                report.kernel_lift_dim, report.j_d_dim
            );
        }
        CommandResult::Koszul { rows } => {
            let _ = writeln!(
                s,
                "{:>4}  {:<28} {:>8} {:>10} {:>8}",
                "m", "h^0..h^r", "A/J", "coker ev", "K vs ev"
            );
            for r in rows {
                let h: Vec<String> = r.cohomology.h.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(
                    s,
                    "{:>4}  {:<28} {:>8} {:>10} {:>8}",
                    r.cohomology.degree,
                    h.join(" "),
                    r.a_mod_j,
                    format!("{}@{}", r.ev_check.coker, r.ev_check.ev_degree),
                    r.ev_check.equal && r.ev_check.vanishing_holds()
                );
            }
        }
        CommandResult::Pvalue(p) => {
            for (m, h) in &p.sweep {
                let _ = writeln!(s, "h^1(J(m)) at m = {m}: {h}");
            }
            let _ = writeln!(s, "p = {} (scheme length {})", p.p, p.length);
            match p.tabulated_s_k {
                Some(t) => {
                    let _ = writeln!(
                        s,
                        "tabulated s_{} = {t}; relation: {:?}",
                        p.length, p.relation
                    );
                }
                None => {
                    let _ = writeln!(s, "no tabulated s_{}", p.length);
                }
            }
        }
        CommandResult::Error { message } => {
            let _ = writeln!(s, "error: {message}");
        }
    }
    for w in &c.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    let _ = writeln!(s, "verdicts: {}", c.verdicts.join(", "));
    let _ = writeln!(s, "exit code: {}", c.exit_code);
    s
}

/// `[0:1/2:1]`, dropping unit denominators.
fn show_point(coords: &[String]) -> String {
    let c: Vec<&str> = coords
        .iter()
        .map(|c| c.strip_suffix("/1").unwrap_or(c))
        .collect();
    format!("[{}]", c.join(":"))
}
