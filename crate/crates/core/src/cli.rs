//! The `semiext` command line.
//!
//! Exit codes: 0 the answer is yes (or the lab suite passed), 1 the answer
//! is no (or a lab assertion failed), 2 nothing was decided within the
//! bounds, 3 the input was rejected.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::document::{parse_extension_document, parse_mode, parse_rank_document};
use crate::lab::{self, LabReport, SuiteBounds};
use crate::numeric::Mode;
use crate::presentation::RewriteBounds;
use crate::rank::{decide, RankProblem, RankVerdict, WitnessBounds, WitnessRelation};
use crate::solver::{extend_homomorphism, NotExistsReason, SolveReport, Verdict};
use crate::target::{Rational, Target, TargetElement, WeakVerdict};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "semiext",
    version,
    about = "Homomorphism extension and projective rank functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a projective rank function exists.
    Rank {
        file: PathBuf,
        /// nonneg or positive; overrides the file.
        #[arg(long, value_parser = mode_arg)]
        mode: Option<Mode>,
        /// Rank values are multiples of 1/N; overrides the file.
        #[arg(long)]
        denominator: Option<u64>,
        #[arg(long, default_value_t = 8)]
        cmax: u64,
        #[arg(long, default_value_t = 30)]
        norm: u64,
        #[arg(long, default_value_t = 100_000)]
        queue_cap: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Decide whether the probe values extend to a homomorphism.
    Extend {
        file: PathBuf,
        /// Longest rewritten word kept when deriving probes.
        #[arg(long)]
        length_bound: Option<usize>,
        #[arg(long, default_value_t = RewriteBounds::DEFAULT_COUNT)]
        count_bound: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Weak divisors of a finite set, or whether one element is one.
    Weakdiv {
        #[arg(long)]
        target: String,
        /// Comma-separated element literals.
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 6)]
        dmax: u64,
        /// Decide this single element instead of listing the set.
        #[arg(long)]
        test: Option<String>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Run a worked-example suite.
    Lab {
        #[arg(value_enum)]
        suite: Suite,
        /// Exponent bound; each suite has its own default.
        #[arg(long)]
        dmax: Option<u64>,
        /// Generator count for rational-growth.
        #[arg(long, default_value_t = 9)]
        k: u64,
        /// Target for ordered-laws.
        #[arg(long, default_value = "nat")]
        target: String,
        /// Sample ceiling for ordered-laws.
        #[arg(long, default_value = "20")]
        bound: String,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    NonIdempotence,
    StructuralClaims,
    FreeClaim,
    CommutativeIdempotence,
    RationalGrowth,
    OrderedLaws,
}

fn mode_arg(s: &str) -> Result<Mode, String> {
    parse_mode(s).ok_or_else(|| format!("expected nonneg or positive, found '{s}'"))
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn input_error(&mut self, msg: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        EXIT_INPUT
    }

    fn emit(&mut self, format: Format, text: &str, value: &Value) {
        let _ = match format {
            Format::Text => writeln!(self.out, "{text}"),
            Format::Json => writeln!(
                self.out,
                "{}",
                serde_json::to_string_pretty(value).expect("json")
            ),
        };
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut io = Io { out, err };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_YES,
                _ => EXIT_INPUT,
            };
            let sink = if code == EXIT_YES {
                &mut io.out
            } else {
                &mut io.err
            };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match cli.command {
        Command::Rank {
            file,
            mode,
            denominator,
            cmax,
            norm,
            queue_cap,
            format,
        } => {
            let bounds = WitnessBounds {
                c_max: cmax,
                norm,
                queue_cap,
            };
            cmd_rank(&mut io, &file, mode, denominator, bounds, format.format)
        }
        Command::Extend {
            file,
            length_bound,
            count_bound,
            format,
        } => cmd_extend(&mut io, &file, length_bound, count_bound, format.format),
        Command::Weakdiv {
            target,
            set,
            dmax,
            test,
            format,
        } => cmd_weakdiv(&mut io, &target, &set, dmax, test.as_deref(), format.format),
        Command::Lab {
            suite,
            dmax,
            k,
            target,
            bound,
            format,
        } => cmd_lab(&mut io, suite, dmax, k, &target, &bound, format.format),
    }
}

fn read(io: &mut Io<'_>, path: &Path) -> Result<String, i32> {
    std::fs::read_to_string(path).map_err(|e| io.input_error(format!("{}: {e}", path.display())))
}

fn cmd_rank(
    io: &mut Io<'_>,
    path: &Path,
    mode: Option<Mode>,
    denominator: Option<u64>,
    bounds: WitnessBounds,
    format: Format,
) -> i32 {
    let text = match read(io, path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let mut prob = match parse_rank_document(&text) {
        Ok(p) => p,
        Err(e) => return io.input_error(format!("{}:{e}", path.display())),
    };
    if let Some(m) = mode {
        prob.mode = m;
    }
    if let Some(n) = denominator {
        prob.denominator = n;
    }
    let verdict = match decide(&prob, bounds) {
        Ok(v) => v,
        Err(e) => return io.input_error(format!("{}: {e}", path.display())),
    };
    let (text, value, code) = rank_report(&prob, &verdict, bounds);
    io.emit(format, &text, &value);
    code
}

fn rank_report(
    prob: &RankProblem,
    verdict: &RankVerdict,
    bounds: WitnessBounds,
) -> (String, Value, i32) {
    let header = json!({
        "modules": prob.modules,
        "mode": prob.mode.as_str(),
        "denominator": prob.denominator,
    });
    match verdict {
        RankVerdict::Exists(f) => {
            let ranks: Vec<(String, String)> = prob
                .modules
                .iter()
                .enumerate()
                .map(|(i, m)| (m.clone(), f.rank(i).to_string()))
                .collect();
            let line: Vec<String> = ranks
                .iter()
                .map(|(m, r)| format!("rank({m})={r}"))
                .collect();
            let text = if line.is_empty() {
                "EXISTS".to_string()
            } else {
                format!("EXISTS {}", line.join(" "))
            };
            // Ranks are strings so that fractions stay exact.
            let ranks: serde_json::Map<String, Value> = ranks
                .into_iter()
                .map(|(m, r)| (m, Value::String(r)))
                .collect();
            let value = json!({
                "problem": header,
                "verdict": "exists",
                "ranks": ranks,
                "values": f.values,
            });
            (text, value, EXIT_YES)
        }
        RankVerdict::NotExists(w) => {
            let mut text = "NOT-EXISTS".to_string();
            let witness = match w {
                Some(w) => {
                    text.push_str(&witness_text(prob, w));
                    witness_json(prob, w)
                }
                None => {
                    text.push_str(&format!(
                        "\nwitness: none found within c_max={}, norm={}, queue={}",
                        bounds.c_max, bounds.norm, bounds.queue_cap
                    ));
                    Value::Null
                }
            };
            let value = json!({
                "problem": header,
                "verdict": "not-exists",
                "witness": witness,
                "bounds": {"c_max": bounds.c_max, "norm": bounds.norm, "queue_cap": bounds.queue_cap},
            });
            (text, value, EXIT_NO)
        }
    }
}

fn witness_steps(prob: &RankProblem, w: &WitnessRelation) -> Vec<(String, String)> {
    let mut cur = w.start(prob);
    w.trace
        .iter()
        .map(|s| {
            cur = s.apply(prob, &cur).expect("witness traces replay");
            let dir = if s.forward { "forward" } else { "backward" };
            (
                prob.format_vector(&cur),
                format!("relation {} {dir}", s.relation + 1),
            )
        })
        .collect()
}

fn witness_reason(prob: &RankProblem, w: &WitnessRelation) -> String {
    let entries: Vec<String> = w.w[1..].iter().map(u64::to_string).collect();
    let kind = prob.mode.as_str();
    if w.w[0] > w.c {
        return format!(
            "the right side has {} copies of R, more than {}",
            w.w[0], w.c
        );
    }
    let target = prob.denominator * (w.c - w.w[0]);
    format!(
        "{target} is not a {kind} integer combination of {}",
        if entries.is_empty() {
            "nothing".to_string()
        } else {
            entries.join(", ")
        }
    )
}

fn witness_text(prob: &RankProblem, w: &WitnessRelation) -> String {
    let mut s = format!(
        "\nwitness: {}\ntrace:\n  {}",
        w.display(prob),
        prob.format_vector(&w.start(prob))
    );
    for (v, how) in witness_steps(prob, w) {
        s.push_str(&format!("\n  -> {v}  ({how})"));
    }
    s.push_str(&format!("\nreason: {}", witness_reason(prob, w)));
    s
}

fn witness_json(prob: &RankProblem, w: &WitnessRelation) -> Value {
    let steps: Vec<Value> = w
        .trace
        .iter()
        .zip(witness_steps(prob, w))
        .map(|(s, (v, _))| json!({"relation": s.relation + 1, "forward": s.forward, "result": v}))
        .collect();
    json!({
        "relation": w.display(prob),
        "c": w.c,
        "w": w.w,
        "trace": steps,
        "reason": witness_reason(prob, w),
    })
}

fn cmd_extend(
    io: &mut Io<'_>,
    path: &Path,
    length_bound: Option<usize>,
    count_bound: usize,
    format: Format,
) -> i32 {
    let text = match read(io, path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let inst = match parse_extension_document(&text) {
        Ok(i) => i,
        Err(e) => return io.input_error(format!("{}:{e}", path.display())),
    };
    let mut bounds = RewriteBounds::for_instance(&inst);
    if let Some(l) = length_bound {
        bounds.length_bound = l;
    }
    bounds.count_bound = count_bound;
    let report = match extend_homomorphism(&inst, bounds) {
        Ok(r) => r,
        Err(e) => return io.input_error(format!("{}: {e}", path.display())),
    };
    let names = inst.presentation.generators();
    let t = &inst.target;
    let (text, value, code) = extend_report(t, names, &report);
    io.emit(format, &text, &value);
    code
}

fn extend_report(t: &Target, names: &[String], report: &SolveReport) -> (String, Value, i32) {
    let stats = json!({"nodes": report.stats.nodes, "checks": report.stats.checks});
    match &report.verdict {
        Verdict::Exists(eta) => {
            let pairs: Vec<(String, String)> = names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), t.format(eta.get(i))))
                .collect();
            let mut text = "EXISTS".to_string();
            for (n, v) in &pairs {
                text.push_str(&format!("\n  {n} -> {v}"));
            }
            let assignment: serde_json::Map<String, Value> = pairs
                .into_iter()
                .map(|(n, v)| (n, Value::String(v)))
                .collect();
            let value = json!({"target": t.to_string(), "verdict": "exists", "assignment": assignment, "stats": stats});
            (text, value, EXIT_YES)
        }
        Verdict::NotExists(reason) => {
            let (line, reason_json) = match reason {
                NotExistsReason::EmptyDomain { generator } => (
                    format!(
                        "no element divides every probe value on {}",
                        names[*generator]
                    ),
                    json!({"kind": "empty-domain", "generator": names[*generator]}),
                ),
                NotExistsReason::RealizationFailed { equation } => {
                    let e = equation.display(t, names);
                    (
                        format!("realization failed: {e}"),
                        json!({"kind": "realization-failed", "equation": e}),
                    )
                }
                NotExistsReason::SearchExhausted { combined } => {
                    let c = combined.as_ref().map(|c| c.display(t, names));
                    let line = match &c {
                        Some(c) => {
                            format!("search exhausted; combined equation {c} has no solution")
                        }
                        None => "search exhausted".to_string(),
                    };
                    (line, json!({"kind": "search-exhausted", "combined": c}))
                }
            };
            let text = format!("NOT-EXISTS\nreason: {line}");
            let value = json!({"target": t.to_string(), "verdict": "not-exists", "reason": reason_json, "stats": stats});
            (text, value, EXIT_NO)
        }
    }
}

fn cmd_weakdiv(
    io: &mut Io<'_>,
    target: &str,
    set: &str,
    dmax: u64,
    test: Option<&str>,
    format: Format,
) -> i32 {
    let t: Target = match target.parse() {
        Ok(t) => t,
        Err(e) => return io.input_error(e),
    };
    let elems = match t.parse_set(set) {
        Ok(s) => s,
        Err(e) => return io.input_error(e),
    };
    let set_text: Vec<String> = elems.iter().map(|e| t.format(e)).collect();
    if let Some(s) = test {
        let s = match t.parse_element(s) {
            Ok(s) => s,
            Err(e) => return io.input_error(e),
        };
        let verdict = match t.is_weak_divisor(&s, &elems, dmax) {
            Ok(v) => v,
            Err(e) => return io.input_error(e),
        };
        let (text, value, code) = weak_test_report(&t, &s, &set_text, &verdict);
        io.emit(format, &text, &value);
        return code;
    }
    let wd = match t.weak_divisors(&elems, dmax) {
        Ok(w) => w,
        Err(e) => return io.input_error(e),
    };
    let items: Vec<String> = wd.elements.iter().map(|e| t.format(e)).collect();
    let note = if wd.exact {
        "exact".to_string()
    } else {
        format!(
            "confirmed with exponents up to {}; more may exist",
            wd.d_max
        )
    };
    let text = format!(
        "{{{}}}\n{} weak divisors ({note})",
        items.join(", "),
        items.len()
    );
    let value = json!({
        "target": t.to_string(),
        "set": set_text,
        "weak_divisors": items,
        "exact": wd.exact,
        "d_max": wd.d_max,
    });
    io.emit(format, &text, &value);
    EXIT_YES
}

fn weak_test_report(
    t: &Target,
    s: &TargetElement,
    set: &[String],
    verdict: &WeakVerdict,
) -> (String, Value, i32) {
    let s_text = t.format(s);
    let base = |answer: &str| json!({"target": t.to_string(), "set": set, "element": s_text, "answer": answer});
    match verdict {
        WeakVerdict::YesWithExponent(w) => {
            let fs: Vec<String> = w.factors.iter().map(|f| t.format(f)).collect();
            let text = format!(
                "YES {s_text}: d={}, {} · ({s_text})^{} · {} = {}",
                w.exponent,
                w.divisor.left,
                w.exponent,
                w.divisor.right,
                fs.join(" · ")
            );
            let mut v = base("yes");
            v["exponent"] = json!(w.exponent);
            v["factors"] = json!(fs);
            v["left"] = json!(w.divisor.left.to_string());
            v["right"] = json!(w.divisor.right.to_string());
            (text, v, EXIT_YES)
        }
        WeakVerdict::No => (format!("NO {s_text}"), base("no"), EXIT_NO),
        WeakVerdict::NoWithinBound(d) => {
            let mut v = base("unknown");
            v["d_max"] = json!(d);
            (
                format!("UNKNOWN {s_text}: no exponent up to {d} works"),
                v,
                EXIT_UNDECIDED,
            )
        }
    }
}

fn cmd_lab(
    io: &mut Io<'_>,
    suite: Suite,
    dmax: Option<u64>,
    k: u64,
    target: &str,
    bound: &str,
    format: Format,
) -> i32 {
    if dmax == Some(0) {
        return io.input_error("--dmax must be positive");
    }
    let bounds = SuiteBounds {
        d_max: dmax.unwrap_or(SuiteBounds::default().d_max),
        ..SuiteBounds::default()
    };
    let report: LabReport = match suite {
        Suite::NonIdempotence => lab::non_idempotence_demo(),
        Suite::StructuralClaims => lab::structural_claims_suite(bounds),
        Suite::FreeClaim => lab::free_claim(bounds),
        Suite::CommutativeIdempotence => lab::commutative_idempotence(bounds),
        Suite::RationalGrowth => {
            if k == 0 {
                return io.input_error("--k must be positive");
            }
            match lab::rational_growth(k, dmax.unwrap_or(12)) {
                Ok(r) => r,
                Err(e) => return io.input_error(e),
            }
        }
        Suite::OrderedLaws => {
            let t: Target = match target.parse() {
                Ok(t) => t,
                Err(e) => return io.input_error(e),
            };
            let b: Rational = match crate::target::parse_rational(bound) {
                Ok(b) => b,
                Err(e) => return io.input_error(e),
            };
            match lab::check_ordered_laws(&t, &b) {
                Ok(r) => r,
                Err(e) => return io.input_error(e),
            }
        }
    };
    let value = serde_json::to_value(&report).expect("json");
    io.emit(format, &report.to_string(), &value);
    if report.passed() {
        EXIT_YES
    } else {
        EXIT_NO
    }
}
