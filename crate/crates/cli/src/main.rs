mod inputs;
mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ultragrowth_core::assocfn::{check_weight_condition, classify_triviality, curve_to_tsv, Case, Triviality, WeightCondition};
use ultragrowth_core::config::OutputFormat;
use ultragrowth_core::conjugate::{conjugate_table, lemma_block, matrix_of_weight};
use ultragrowth_core::lambdanorms::{empirical_domination, lambda_norm, matrix_norm, NormMode};
use ultragrowth_core::matrices::{check_matrix_condition, relate_matrices, MatrixCondition, MatrixRelation};
use ultragrowth_core::oscillator::{build, critical_case, plan, verify};
use ultragrowth_core::relations::{oscillation_probe, seq_relate, wf_relate, Relation};
use ultragrowth_core::seqcore::{check_sequence_condition_with, SeqCondition};
use ultragrowth_core::{Error, RunConfig, Status, Verdict};

use inputs::Operand;

const SPEC_HELP: &str = "Weight specs: t^<a> (power), log1p (log(1+t)), logtrunc (max(0, log t)), \
gevrey:<s> (the sequence (p!)^s, or its associated function), assoc:<file> (a sequence stored as JSON). \
Matrices also accept matrix:<file>. Set ULTRAGROWTH_CONFIG to a JSON run configuration.";

#[derive(Parser)]
#[command(name = "ultragrowth", version, about = "Growth conditions for weight sequences, functions and matrices", after_help = SPEC_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a condition (or `all`) on a weight sequence.
    CheckSeq {
        sequence: String,
        #[arg(long, default_value = "all")]
        cond: String,
    },
    /// Check a condition (or `all`) on a weight function.
    CheckWeight {
        spec: String,
        #[arg(long, default_value = "all")]
        cond: String,
        /// Print `t \t w(t)` rows instead of verdicts.
        #[arg(long)]
        emit_curve: bool,
    },
    /// Relate two sequences, weight functions or (with --matrix) matrices.
    Relate {
        a: String,
        b: String,
        #[arg(long)]
        rel: String,
        #[arg(long)]
        matrix: bool,
    },
    /// Young conjugate table, or with --emit the generated weight matrix.
    Conjugate {
        spec: String,
        #[arg(long)]
        emit: bool,
    },
    /// Check a matrix condition, `all`, or `lemma` for the structural block.
    Matrix {
        spec: String,
        #[arg(long)]
        check: String,
    },
    /// Build a sequence whose quotients oscillate around the target's.
    Oscillate {
        #[arg(long)]
        target: String,
        #[arg(long = "Q")]
        q: u32,
        #[arg(long)]
        stages: usize,
        /// Also write `p \t log mu_p \t log nu_p` over the head to this file.
        #[arg(long)]
        head_tsv: Option<PathBuf>,
        /// Run the follow-up checks of the G^(1/2) case.
        #[arg(long)]
        critical: bool,
    },
    /// Weighted sup-norm of a coefficient family (JSON file or inline JSON).
    Norms {
        coeff: String,
        weight: String,
        #[arg(long)]
        mode: String,
        #[arg(long)]
        j: u32,
        /// Treat the weight operand as a matrix.
        #[arg(long)]
        matrix: bool,
    },
    /// Search (l, C) with a witness-norm bound and derive v <= a w + b.
    Dominate { w: String, v: String },
    /// Decide whether the Gelfand-Shilov space of a weight is trivial.
    Classify {
        spec: String,
        #[arg(long)]
        case: String,
    },
    /// Run a registered verification suite.
    Report {
        #[arg(long)]
        suite: String,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Core(e) => match e {
                Error::InvalidSequence(_)
                | Error::InvalidWeight(_)
                | Error::InvalidMatrix(_)
                | Error::InvalidParameter(_)
                | Error::Json(_)
                | Error::Io(_) => 64,
                _ => 1,
            },
        }
    }
}

/// What a subcommand produced.
enum Output {
    Json { value: Value, status: Status, summary: String },
    Text { text: String, status: Status, summary: String },
}

fn json_out(value: impl Serialize, status: Status, summary: String) -> Result<Output, CliError> {
    let value = serde_json::to_value(value).map_err(Error::from)?;
    Ok(Output::Json { value, status, summary })
}

fn load_config() -> Result<RunConfig, CliError> {
    match std::env::var_os("ULTRAGROWTH_CONFIG") {
        Some(p) => Ok(RunConfig::from_path(std::path::Path::new(&p))?),
        None => Ok(RunConfig::default()),
    }
}

fn combine<'a>(vs: impl IntoIterator<Item = &'a Verdict>) -> Status {
    vs.into_iter().fold(Status::Holds, |s, v| s.and(v.status))
}

fn verdict_lines(vs: &BTreeMap<String, Verdict>) -> String {
    vs.iter().map(|(k, v)| format!("{k}: {}", v.status)).collect::<Vec<_>>().join(", ")
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, CliError> {
    s.parse().map_err(|e: Error| CliError::Usage(e.to_string()))
}

fn run(cmd: Command, cfg: &RunConfig) -> Result<Output, CliError> {
    match cmd {
        Command::CheckSeq { sequence, cond } => {
            let m = inputs::sequence(&sequence, cfg)?;
            let conds: Vec<SeqCondition> =
                if cond == "all" { SeqCondition::ALL.to_vec() } else { vec![parse(&cond)?] };
            let mut out = BTreeMap::new();
            for c in conds {
                match check_sequence_condition_with(&m, c, cfg.tolerances.stability) {
                    Ok(v) => {
                        out.insert(c.to_string(), v);
                    }
                    Err(Error::ExoticCondition(_)) if cond == "all" => {}
                    Err(e) => return Err(e.into()),
                }
            }
            let summary = format!("{}: {}", m.name(), verdict_lines(&out));
            json_out(json!({ "sequence": m.name(), "verdicts": out }), combine(out.values()), summary)
        }
        Command::CheckWeight { spec, cond, emit_curve } => {
            let w = inputs::weight(&spec, cfg)?;
            if emit_curve {
                let text = curve_to_tsv(&w.curve(cfg));
                return Ok(Output::Text { text, status: Status::Holds, summary: format!("curve of {}", w.label()) });
            }
            let conds: Vec<WeightCondition> =
                if cond == "all" { WeightCondition::ALL.to_vec() } else { vec![parse(&cond)?] };
            let out: BTreeMap<String, Verdict> =
                conds.into_iter().map(|c| (c.to_string(), check_weight_condition(&w, c, cfg))).collect();
            let summary = format!("{}: {}", w.label(), verdict_lines(&out));
            json_out(json!({ "weight": w.label(), "verdicts": out }), combine(out.values()), summary)
        }
        Command::Relate { a, b, rel, matrix } => {
            if matrix {
                let r: MatrixRelation = parse(&rel)?;
                let (ma, mb) = (inputs::matrix(&a, cfg)?, inputs::matrix(&b, cfg)?);
                let v = relate_matrices(&ma, &mb, r, cfg)?;
                let summary = format!("{a} {rel} {b}: {}", v.status);
                return json_out(json!({ "a": a, "b": b, "relation": rel, "verdict": v }), v.status, summary);
            }
            let r: Relation = parse(&rel)?;
            let report = match (inputs::operand(&a, cfg)?, inputs::operand(&b, cfg)?) {
                (Operand::Sequence(x), Operand::Sequence(y)) if r == Relation::IncomparableProbe => oscillation_probe(&x, &y)?,
                (Operand::Sequence(x), Operand::Sequence(y)) => seq_relate(&x, &y, r, cfg.tolerances.stability)?,
                (x, y) => {
                    let w = |o: Operand| match o {
                        Operand::Sequence(s) => ultragrowth_core::assocfn::WeightFn::associated(s),
                        Operand::Weight(w) => w,
                    };
                    wf_relate(&w(x), &w(y), r, cfg)?
                }
            };
            let status = report.verdict.status;
            let summary = format!("{a} {rel} {b}: {status}");
            json_out(json!({ "a": a, "b": b, "report": report }), status, summary)
        }
        Command::Conjugate { spec, emit } => {
            let w = inputs::weight(&spec, cfg)?;
            if emit {
                let m = matrix_of_weight(&w, &cfg.lambdas, cfg.truncation, cfg)?;
                let summary = format!("matrix of {} on {} parameters", w.label(), m.len());
                return json_out(m, Status::Holds, summary);
            }
            let s_grid: Vec<f64> = (0..=256).map(|i| i as f64 * 0.25).collect();
            let table = conjugate_table(&w, &s_grid, cfg)?;
            let shape = table.check_shape(cfg.tolerances.log_tol);
            let summary = format!("conjugate of {}: shape {}", w.label(), shape.status);
            if cfg.output == OutputFormat::Tsv {
                return Ok(Output::Text { text: table.to_tsv(), status: shape.status, summary });
            }
            let status = shape.status;
            json_out(json!({ "table": table, "shape": shape }), status, summary)
        }
        Command::Matrix { spec, check } => {
            if check == "lemma" {
                let w = inputs::weight(&spec, cfg)?;
                let r = lemma_block(&w, cfg)?;
                let summary = format!("{}: {}", r.weight, verdict_lines(&r.checks));
                let status = combine(r.checks.values());
                return json_out(r, status, summary);
            }
            let m = inputs::matrix(&spec, cfg)?;
            let conds: Vec<MatrixCondition> =
                if check == "all" { MatrixCondition::ALL.to_vec() } else { vec![parse(&check)?] };
            let out: BTreeMap<String, Verdict> =
                conds.into_iter().map(|c| (c.to_string(), check_matrix_condition(&m, c, cfg))).collect();
            let summary = format!("{}: {}", m.name(), verdict_lines(&out));
            json_out(json!({ "matrix": m.name(), "verdicts": out }), combine(out.values()), summary)
        }
        Command::Oscillate { target, q, stages, head_tsv, critical } => {
            if critical {
                let r = critical_case(stages, cfg)?;
                let status = combine(r.checks.values()).and(r.verify.status());
                let summary = format!("critical case: {}", verdict_lines(&r.checks));
                return json_out(r, status, summary);
            }
            let t = inputs::target(&target, cfg)?;
            let p = plan(&t, q, stages, cfg)?;
            let r = build(&p, cfg.truncation)?;
            let report = verify(&r);
            if let Some(path) = head_tsv {
                std::fs::write(&path, r.head_tsv()).map_err(Error::from)?;
            }
            let anchors: Vec<Value> = r
                .trace
                .iter()
                .map(|t| json!({ "j": t.j, "k": t.k.to_string(), "ratio": (t.log_mu - t.log_nu).exp() }))
                .collect();
            let mut summary = String::from("j\tratio mu_k/nu_k\n");
            for a in &anchors {
                summary.push_str(&format!("{}\t{}\n", a["j"], a["ratio"]));
            }
            summary.push_str(&format!("verification: {}", verdict_lines(&report.checks)));
            if cfg.output == OutputFormat::Tsv {
                return Ok(Output::Text { text: r.head_tsv(), status: report.status(), summary });
            }
            let status = report.status();
            json_out(json!({ "plan": p, "trace": r.trace, "anchors": anchors, "verify": report }), status, summary)
        }
        Command::Norms { coeff, weight, mode, j, matrix } => {
            let c = inputs::coefficients(&coeff, cfg)?;
            let m = NormMode::new(parse::<Case>(&mode)?, j).map_err(|e| CliError::Usage(e.to_string()))?;
            let v = if matrix {
                matrix_norm(&c, &inputs::matrix(&weight, cfg)?, m)?
            } else {
                lambda_norm(&c, &inputs::weight(&weight, cfg)?, m, cfg)
            };
            let summary = format!("norm {m}: {}{}", v.value, if v.tail_increasing { " (still rising at the support bound)" } else { "" });
            json_out(v, Status::Holds, summary)
        }
        Command::Dominate { w, v } => {
            let r = empirical_domination(&inputs::weight(&w, cfg)?, &inputs::weight(&v, cfg)?, cfg);
            let status = r.verdict.status;
            let summary = format!("{v} <= a {w} + b: {status}");
            json_out(r, status, summary)
        }
        Command::Classify { spec, case } => {
            let r = classify_triviality(&inputs::weight(&spec, cfg)?, parse(&case)?, cfg);
            let status = if r.verdict == Triviality::Unknown { Status::Inconclusive } else { Status::Holds };
            let summary = format!("{spec} ({case}): {:?}", r.verdict).to_lowercase();
            json_out(r, status, summary)
        }
        Command::Report { suite } => {
            let r = report::run(&suite, cfg).ok_or_else(|| {
                CliError::Usage(format!("unknown suite {suite:?} (known: {})", report::SUITES.join(", ")))
            })?;
            let summary = r.entries.iter().map(|e| format!("{}: {}", e.id, e.status)).collect::<Vec<_>>().join("\n");
            let status = r.status;
            json_out(r, status, summary)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = load_config().and_then(|cfg| run(cli.command, &cfg));
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match result {
        Ok(Output::Json { value, status, summary }) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
            let _ = writeln!(out, "{text}");
            eprintln!("{summary}");
            ExitCode::from(status.exit_code() as u8)
        }
        Ok(Output::Text { text, status, summary }) => {
            let _ = write!(out, "{text}");
            eprintln!("{summary}");
            ExitCode::from(status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
