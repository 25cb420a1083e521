//! The `gl` command-line tool.
//!
//! Exit codes: 0 theorem / check passed, 1 non-theorem / check failed,
//! 2 usage or input error, 3 size guard.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::bisim::{covers, largest_bisimulation, PairsFile};
use crate::calculus::{check_proof, lemma, lemma_info, LemmaError, ProofFile, CATALOGUE};
use crate::completeness::{decide, CompletenessError, Verdict};
use crate::kripke::{frame_report, is_itf, KripkeError, Model, ModelFile, WorldNames};
use crate::syntax::{atoms, parse, subformulas, Formula};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "gl",
    version,
    about = "Provability logic GL: decide formulas, check models and proofs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula and print it in canonical syntax.
    Parse {
        /// Formula text, or @FILE to read it from a file.
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide GL theoremhood; non-theorems come with a countermodel.
    Decide {
        formula: String,
        /// Write the countermodel certificate (model JSON) to FILE.
        #[arg(long, value_name = "FILE")]
        cert: Option<PathBuf>,
        /// Write the countermodel as Graphviz DOT to FILE.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a formula at every world of a model.
    CheckModel {
        model: PathBuf,
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Check a Hilbert proof file and print its conclusion.
    CheckProof {
        proof: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build a catalogued lemma's proof at the given formulas.
    Lemma {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        args: Vec<String>,
        /// Write the proof JSON to FILE.
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
        /// List the catalogue.
        #[arg(long, conflicts_with = "name")]
        list: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compute the largest bisimulation between two models.
    Bisim {
        m1: PathBuf,
        m2: PathBuf,
        /// Write the bisimulation pairs JSON to FILE.
        #[arg(long, value_name = "FILE")]
        pairs: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Report the frame properties of a model's frame.
    FrameCheck {
        model: PathBuf,
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Guard(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Guard(_) => EXIT_GUARD,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Guard(m) => m,
        }
    }
}

impl From<CompletenessError> for Failure {
    fn from(e: CompletenessError) -> Self {
        match e {
            CompletenessError::SizeGuard { .. } => Failure::Guard(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<KripkeError> for Failure {
    fn from(e: KripkeError) -> Self {
        match e {
            KripkeError::TooManyValuations { .. } | KripkeError::TooManyWorlds { .. } => {
                Failure::Guard(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<LemmaError> for Failure {
    fn from(e: LemmaError) -> Self {
        match e {
            LemmaError::TooLong { .. } => Failure::Guard(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CmdResult = Result<i32, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

// Output streams are best-effort; a closed pipe is not a logic failure.
macro_rules! say {
    ($w:expr, $($arg:tt)*) => {{ let _ = writeln!($w, $($arg)*); }};
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                say!(err, "{e}");
            } else {
                say!(out, "{e}");
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    let result = match cli.command {
        Command::Parse { formula, json } => cmd_parse(&mut io, &formula, json),
        Command::Decide {
            formula,
            cert,
            dot,
            json,
        } => cmd_decide(&mut io, &formula, cert.as_deref(), dot.as_deref(), json),
        Command::CheckModel {
            model,
            formula,
            json,
        } => cmd_check_model(&mut io, &model, &formula, json),
        Command::CheckProof { proof, json } => cmd_check_proof(&mut io, &proof, json),
        Command::Lemma {
            name,
            args,
            emit,
            list,
            json,
        } => {
            if list {
                cmd_lemma_list(&mut io, json)
            } else {
                let name = name.expect("clap enforces a name without --list");
                cmd_lemma(&mut io, &name, &args, emit.as_deref(), json)
            }
        }
        Command::Bisim {
            m1,
            m2,
            pairs,
            json,
        } => cmd_bisim(&mut io, &m1, &m2, pairs.as_deref(), json),
        Command::FrameCheck { model, dot, json } => {
            cmd_frame_check(&mut io, &model, dot.as_deref(), json)
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            say!(io.err, "error: {}", f.message());
            f.code()
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn to_json_string<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// Inline formula text, or `@path` for a file.
fn formula_arg(arg: &str) -> Result<Formula, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read_file(Path::new(path))?,
        None => arg.to_string(),
    };
    parse(text.trim()).map_err(|e| Failure::Usage(e.to_string()))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_file(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: invalid JSON: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<(Model, WorldNames), Failure> {
    let file: ModelFile = load_json(path)?;
    file.to_model()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_parse(io: &mut Io, arg: &str, json: bool) -> CmdResult {
    let f = formula_arg(arg)?;
    if json {
        let doc = json!({
            "formula": f.to_string(),
            "atoms": atoms(&f),
            "subformulas": subformulas(&f).iter().map(Formula::to_string).collect::<Vec<_>>(),
        });
        say!(io.out, "{doc}");
    } else {
        say!(io.out, "{f}");
    }
    Ok(EXIT_OK)
}

fn cmd_decide(
    io: &mut Io,
    arg: &str,
    cert: Option<&Path>,
    dot: Option<&Path>,
    json: bool,
) -> CmdResult {
    let f = formula_arg(arg)?;
    let verdict = decide(&f)?;
    let cm = match &verdict {
        Verdict::Theorem => {
            if json {
                say!(
                    io.out,
                    "{}",
                    json!({"verdict": "theorem", "formula": f.to_string()})
                );
            } else {
                say!(io.out, "theorem");
            }
            if cert.is_some() || dot.is_some() {
                say!(
                    io.err,
                    "note: theorems have no countermodel; nothing written"
                );
            }
            return Ok(EXIT_OK);
        }
        Verdict::Countermodel(cm) => cm,
    };
    let certificate = cm.to_certificate();
    if let Err(e) = certificate.verify() {
        say!(io.err, "internal error: certificate rejected: {e}");
        return Ok(EXIT_FAILED);
    }
    let file = certificate.to_file();
    if let Some(path) = cert {
        write_file(path, &to_json_string(&file))?;
    }
    if let Some(path) = dot {
        write_file(path, &certificate.model.to_dot(&certificate.names))?;
    }
    if json {
        let doc = json!({
            "verdict": "non-theorem",
            "formula": f.to_string(),
            "worlds": cm.model.worlds.len(),
            "witness": file.witness,
            "certificate": file,
        });
        say!(io.out, "{doc}");
    } else {
        say!(io.out, "non-theorem");
        say!(
            io.err,
            "countermodel: {} worlds; the formula fails at {} = {}",
            cm.model.worlds.len(),
            file.witness,
            cm.witness_world()
        );
    }
    Ok(EXIT_FAILED)
}

fn cmd_check_model(io: &mut Io, path: &Path, arg: &str, json: bool) -> CmdResult {
    let (model, names) = load_model(path)?;
    let f = formula_arg(arg)?;
    let values: Vec<(String, bool)> = model
        .worlds()
        .map(|w| (names.name(w), model.holds(&f, w).expect("loaded world")))
        .collect();
    let all = values.iter().all(|(_, v)| *v);
    if json {
        let per_world: serde_json::Map<String, serde_json::Value> =
            values.iter().map(|(n, v)| (n.clone(), json!(v))).collect();
        say!(io.out, "{}", json!({"holds_in": all, "worlds": per_world}));
    } else {
        for (n, v) in &values {
            say!(io.out, "{n}: {v}");
        }
        if !all {
            let failing: Vec<&str> = values
                .iter()
                .filter(|(_, v)| !v)
                .map(|(n, _)| n.as_str())
                .collect();
            say!(io.err, "`{f}` fails at {}", failing.join(", "));
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_check_proof(io: &mut Io, path: &Path, json: bool) -> CmdResult {
    let file: ProofFile = load_json(path)?;
    let proof = file
        .to_proof()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    match check_proof(&proof) {
        Ok(conclusion) => {
            if json {
                let doc = json!({"valid": true, "conclusion": conclusion.to_string(), "steps": proof.steps.len()});
                say!(io.out, "{doc}");
            } else {
                say!(io.out, "{conclusion}");
            }
            Ok(EXIT_OK)
        }
        Err(e) => {
            if json {
                say!(
                    io.out,
                    "{}",
                    json!({"valid": false, "step": e.step, "error": e.kind.to_string()})
                );
            }
            say!(io.err, "{}: {e}", path.display());
            Ok(EXIT_FAILED)
        }
    }
}

fn cmd_lemma_list(io: &mut Io, json: bool) -> CmdResult {
    if json {
        let entries: Vec<_> = CATALOGUE
            .iter()
            .map(|l| json!({"name": l.name, "statement": l.statement, "arity": l.arity_description()}))
            .collect();
        say!(io.out, "{}", json!(entries));
    } else {
        for l in CATALOGUE {
            say!(
                io.out,
                "{:<20} [{}] {}",
                l.name,
                l.arity_description(),
                l.statement
            );
        }
    }
    Ok(EXIT_OK)
}

fn cmd_lemma(
    io: &mut Io,
    name: &str,
    args: &[String],
    emit: Option<&Path>,
    json: bool,
) -> CmdResult {
    if lemma_info(name).is_none() {
        return Err(Failure::Usage(format!(
            "unknown lemma `{name}`; see `gl lemma --list`"
        )));
    }
    let formulas = args
        .iter()
        .map(|a| formula_arg(a))
        .collect::<Result<Vec<_>, _>>()?;
    let proof = lemma(name, &formulas)?;
    let conclusion = check_proof(&proof).map_err(|e| {
        Failure::Usage(format!(
            "internal error: lemma `{name}` failed to check: {e}"
        ))
    })?;
    if let Some(path) = emit {
        write_file(path, &to_json_string(&ProofFile::from_proof(&proof)))?;
    }
    if json {
        say!(
            io.out,
            "{}",
            json!({"lemma": name, "conclusion": conclusion.to_string(), "steps": proof.steps.len()})
        );
    } else {
        say!(io.out, "{conclusion}");
    }
    Ok(EXIT_OK)
}

fn cmd_bisim(io: &mut Io, p1: &Path, p2: &Path, pairs: Option<&Path>, json: bool) -> CmdResult {
    let (m1, n1) = load_model(p1)?;
    let (m2, n2) = load_model(p2)?;
    let z = largest_bisimulation(&m1, &m2);
    let named = z.to_named_pairs(&n1, &n2);
    let total = covers(&m1, &m2) && covers(&m2, &m1);
    if let Some(path) = pairs {
        write_file(
            path,
            &to_json_string(&PairsFile {
                pairs: named.clone(),
            }),
        )?;
    }
    if json {
        say!(io.out, "{}", json!({"pairs": named, "total": total}));
    } else {
        for [a, b] in &named {
            say!(io.out, "{a} ~ {b}");
        }
        if !total {
            say!(io.err, "some worlds have no bisimilar counterpart");
        }
    }
    Ok(if total { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_frame_check(io: &mut Io, path: &Path, dot: Option<&Path>, json: bool) -> CmdResult {
    let (model, names) = load_model(path)?;
    let report = frame_report(&model.frame)?;
    if let Some(dot_path) = dot {
        write_file(dot_path, &model.to_dot(&names))?;
    }
    let itf = is_itf(&model.frame);
    if json {
        let mut doc = serde_json::to_value(report).expect("serializable");
        doc["itf"] = json!(itf);
        say!(io.out, "{doc}");
    } else {
        let rows = [
            ("nonempty", report.nonempty),
            ("relation_well_typed", report.relation_well_typed),
            ("finite", report.finite),
            ("irreflexive", report.irreflexive),
            ("transitive", report.transitive),
            ("acyclic", report.acyclic),
            ("validates_lob", report.validates_lob),
            ("itf", itf),
        ];
        for (k, v) in rows {
            say!(io.out, "{k}: {v}");
        }
    }
    Ok(if itf { EXIT_OK } else { EXIT_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("gl").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn decide_lob_is_theorem() {
        let (code, out, _) = run_capture(&["decide", "Box(Box p --> p) --> Box p"]);
        assert_eq!((code, out.as_str()), (0, "theorem\n"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["decide", "p -->"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["lemma", "nope"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["lemma", "imp_refl"]).0, EXIT_USAGE);
        assert_eq!(
            run_capture(&["check-proof", "/nonexistent.json"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn size_guard_exits_3() {
        let big = (0..17)
            .map(|i| format!("a{i}"))
            .collect::<Vec<_>>()
            .join(" && ");
        let (code, _, err) = run_capture(&["decide", &big]);
        assert_eq!(code, EXIT_GUARD);
        assert!(err.contains("size guard"));
    }

    #[test]
    fn parse_prints_canonical_syntax() {
        let (code, out, _) = run_capture(&["parse", "((p && q)) || r"]);
        assert_eq!((code, out.as_str()), (0, "p && q || r\n"));
    }
}
