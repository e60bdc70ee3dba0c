//! The `laver` command: table queries, conjecture sweeps and ordinal
//! enumeration, with text, JSON and CSV output.
//!
//! Exit status: 0 on success, 2 when a sweep found a counterexample (the
//! report is still printed), 1 on usage, resource or I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use laver_core::crit::{crit_int, preimage};
use laver_core::omega::{render_tex, render_text, Enumerator, OrdinalRep};
use laver_core::report::Check;
use laver_core::table::DEFAULT_MAX_ENTRIES;
use laver_core::{
    act_on_gamma, in_range, revalidate, verify, verify_upto, BuildLimits, CorruptPolicy, Error,
    LaverTable, Status, SweepOptions, TableStore, Tower, VerificationReport, Word,
};

mod output;
mod selftest;

pub use output::Format;
use output::{ReportDocument, Response};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "laver",
    version,
    about = "Laver tables, critical points and ordinal enumeration"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for sweeps; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Directory holding cached tables.
    #[arg(
        long,
        global = true,
        env = "LAVER_CACHE_DIR",
        default_value = "./laver-cache"
    )]
    cache_dir: PathBuf,

    /// Build every table in memory; never read or write the cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Fail on a corrupt cache file instead of rebuilding it.
    #[arg(long, global = true)]
    strict_cache: bool,

    /// Largest table, in stored entries, that may be built or loaded.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ENTRIES)]
    max_entries: u64,

    /// Report wall time (JSON `timing` field, or stderr for text).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build (or load) A_n and summarize it.
    Build {
        #[arg(long)]
        n: u32,
        /// Include every row in text and JSON output.
        #[arg(long)]
        rows: bool,
    },
    /// a * b in A_n.
    Apply {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// The period p_n(a).
    Period {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u64,
    },
    /// The threshold t_n(a): least c with a * c >= 2^(n-1).
    Threshold {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u64,
    },
    /// a o b = (a * (b + 1)) - 1 in A_n.
    Compose {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Evaluate a word such as "(1*1)*(1*1)" and find its signature.
    Eval {
        #[arg(long)]
        word: String,
        /// Also print the value of the word in A_n.
        #[arg(long)]
        n: Option<u32>,
        /// Highest table searched for the signature.
        #[arg(long, default_value_t = 12)]
        bound: u32,
    },
    /// crit(a) for a positive integer a.
    Crit {
        #[arg(long)]
        a: u64,
    },
    /// a applied to γ_k, using tables through A_bound.
    Act {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        bound: u32,
    },
    /// Whether γ_gamma is in the range of a.
    Range {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        gamma: u32,
    },
    /// Sweep one or more hypotheses or identities at rank n.
    Verify {
        /// Check ids: th wth wth1 wth2 wth3 twin uh wuh lemma53 lemma54
        /// lemma59 twin-upper periods hom ld powers compose top-row crit-below, or `all`.
        #[arg(required = true, num_args = 1..)]
        checks: Vec<String>,
        #[arg(long)]
        n: u32,
        /// Every rank from 0 to n in the check's domain.
        #[arg(long)]
        upto: bool,
        /// Restrict wth1..wth3 to a < 2^(n-1).
        #[arg(long)]
        narrow: bool,
        /// Report every counterexample instead of the first 100.
        #[arg(long)]
        all_counterexamples: bool,
    },
    /// List the ordinals below γ_N.
    Enumerate {
        #[arg(long)]
        below: u32,
        /// Also check the interval invariants (needs A_{N+1}).
        #[arg(long)]
        check: bool,
    },
    /// Run the built-in regression vectors.
    Selftest,
}

impl Cli {
    fn limits(&self) -> BuildLimits {
        BuildLimits {
            max_entries: self.max_entries,
        }
    }

    fn store(&self) -> Option<TableStore> {
        if self.no_cache {
            return None;
        }
        let policy = if self.strict_cache {
            CorruptPolicy::Fail
        } else {
            CorruptPolicy::Rebuild
        };
        Some(TableStore::new(&self.cache_dir, policy))
    }

    fn table(&self, n: u32) -> Result<LaverTable, Error> {
        match self.store() {
            Some(s) => s.load_or_build(n, self.limits()),
            None => LaverTable::build_with(n, self.limits()),
        }
    }

    fn tower(&self, max_rank: u32) -> Result<Tower, Error> {
        Tower::open(max_rank, self.limits(), self.store().as_ref())
    }

    fn config(&self) -> Value {
        json!({
            "cache_dir": if self.no_cache { Value::Null } else { json!(self.cache_dir.display().to_string()) },
            "max_entries": self.max_entries,
            "workers": self.workers,
        })
    }
}

/// Parses `argv` (program name first) and runs the command, writing results
/// to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_ERROR
                }
            };
        }
    };
    let start = Instant::now();
    let response = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let elapsed = start.elapsed();
    let rendered = match cli.format {
        Format::Text => Ok(response.text.clone()),
        Format::Json => {
            let doc = ReportDocument {
                command: json!({
                    "name": command_name(&cli.command),
                    "argv": argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>(),
                }),
                config: cli.config(),
                result: &response.result,
                timing: cli.timing.then(|| output::timing(elapsed)),
            };
            Ok(output::to_json(&doc))
        }
        Format::Csv => output::to_csv(&response.header, &response.rows),
        Format::Tex => response
            .tex
            .clone()
            .ok_or_else(|| "tex output is only available for `enumerate`".to_string()),
    };
    match rendered {
        Ok(s) => {
            if out.write_all(s.as_bytes()).is_err() {
                return EXIT_ERROR;
            }
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_ERROR;
        }
    }
    if cli.timing && cli.format != Format::Json {
        let _ = writeln!(err, "elapsed: {:.3} ms", elapsed.as_secs_f64() * 1e3);
    }
    response.exit
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Build { .. } => "build",
        Command::Apply { .. } => "apply",
        Command::Period { .. } => "period",
        Command::Threshold { .. } => "threshold",
        Command::Compose { .. } => "compose",
        Command::Eval { .. } => "eval",
        Command::Crit { .. } => "crit",
        Command::Act { .. } => "act",
        Command::Range { .. } => "range",
        Command::Verify { .. } => "verify",
        Command::Enumerate { .. } => "enumerate",
        Command::Selftest => "selftest",
    }
}

fn execute(cli: &Cli) -> Result<Response, Error> {
    match &cli.command {
        Command::Build { n, rows } => build(cli, *n, *rows),
        Command::Apply { n, a, b } => {
            let v = cli.table(*n)?.apply(*a, *b)?;
            Ok(Response::new(
                json!({"n": n, "a": a, "b": b, "value": v}),
                format!("{v}\n"),
            )
            .csv_from_result(&["n", "a", "b", "value"]))
        }
        Command::Period { n, a } => {
            let t = cli.table(*n)?;
            let p = t.period(*a)?;
            let k = t.log_period(*a)?;
            Ok(Response::new(
                json!({"n": n, "a": a, "period": p, "log_period": k}),
                format!("{p}\n"),
            )
            .csv_from_result(&["n", "a", "period", "log_period"]))
        }
        Command::Threshold { n, a } => {
            let v = cli.table(*n)?.threshold(*a)?;
            Ok(
                Response::new(json!({"n": n, "a": a, "threshold": v}), format!("{v}\n"))
                    .csv_from_result(&["n", "a", "threshold"]),
            )
        }
        Command::Compose { n, a, b } => {
            let v = cli.table(*n)?.compose(*a, *b)?;
            Ok(Response::new(
                json!({"n": n, "a": a, "b": b, "value": v}),
                format!("{v}\n"),
            )
            .csv_from_result(&["n", "a", "b", "value"]))
        }
        Command::Eval { word, n, bound } => eval(cli, word, *n, *bound),
        Command::Crit { a } => {
            let c = crit_int(*a)?;
            Ok(
                Response::new(json!({"a": a, "crit": c.value.0}), format!("{}\n", c.value))
                    .csv_from_result(&["a", "crit"]),
            )
        }
        Command::Act { a, k, bound } => {
            let tower = cli.tower(*bound)?;
            let r = act_on_gamma(*a, *k, &tower);
            let text = if r.certified {
                format!("{}\n", r.value)
            } else {
                format!(">= {} (uncertified below A_{bound})\n", r.value)
            };
            Ok(Response::new(
                json!({"a": a, "k": k, "bound": bound, "gamma": r.value.0, "certified": r.certified}),
                text,
            )
            .csv_from_result(&["a", "k", "bound", "gamma", "certified"]))
        }
        Command::Range { a, gamma } => {
            let tower = cli.tower(gamma + 1)?;
            let yes = in_range(*a, *gamma, &tower)?;
            let pre = preimage(*a, *gamma, &tower)?;
            let text = match pre {
                Some(k) => format!("yes: {a} γ_{k} = γ_{gamma}\n"),
                None => "no\n".to_string(),
            };
            Ok(Response::new(
                json!({"a": a, "gamma": gamma, "in_range": yes, "preimage": pre}),
                text,
            )
            .csv_from_result(&["a", "gamma", "in_range", "preimage"]))
        }
        Command::Verify {
            checks,
            n,
            upto,
            narrow,
            all_counterexamples,
        } => {
            let opts = SweepOptions {
                workers: cli.workers,
                max_counterexamples: if *all_counterexamples {
                    None
                } else {
                    SweepOptions::default().max_counterexamples
                },
                narrow: *narrow,
            };
            verify_cmd(cli, checks, *n, *upto, &opts)
        }
        Command::Enumerate { below, check } => enumerate(cli, *below, *check),
        Command::Selftest => selftest::run(),
    }
}

fn build(cli: &Cli, n: u32, with_rows: bool) -> Result<Response, Error> {
    let t = cli.table(n)?;
    let path = cli.store().map(|s| s.path_for(n).display().to_string());
    let mut result = json!({
        "n": n,
        "size": t.size(),
        "entries": t.total_entries(),
        "memory_bytes": t.memory_bytes(),
        "cache_file": path,
    });
    let mut text = format!(
        "A_{n}: {} elements, {} stored entries\n",
        t.size(),
        t.total_entries()
    );
    if let Some(p) = &path {
        text.push_str(&format!("cached at {p}\n"));
    }
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for a in 0..t.size() {
        let row = t.row(a)?;
        if with_rows {
            let cells: Vec<String> = row.iter().map(u32::to_string).collect();
            text.push_str(&format!("{a}: {}\n", cells.join(" ")));
            json_rows.push(json!(row));
        }
        for (i, v) in row.iter().enumerate() {
            rows.push(vec![a.to_string(), (i + 1).to_string(), v.to_string()]);
        }
    }
    if with_rows {
        result["rows"] = json!(json_rows);
    }
    Ok(Response::new(result, text).csv(vec!["a", "b", "value"], rows))
}

fn eval(cli: &Cli, expr: &str, n: Option<u32>, bound: u32) -> Result<Response, Error> {
    let w: Word = expr.parse()?;
    let tower = cli.tower(bound)?;
    let sig = w.signature(&tower);
    let value = match n {
        Some(n) if n <= bound => Some(w.eval(tower.table(n)?)),
        Some(n) => Some(w.eval(&cli.table(n)?)),
        None => None,
    };
    let mut text = String::new();
    if let (Some(n), Some(v)) = (n, value) {
        text.push_str(&format!("[w]_{n} = {v}\n"));
    }
    if sig.certified {
        text.push_str(&format!("crit = {}\n", sig.value));
    } else {
        text.push_str(&format!(
            "crit >= {} (uncertified below A_{bound})\n",
            sig.value
        ));
    }
    Ok(Response::new(
        json!({
            "word": w.to_string(),
            "n": n,
            "value": value,
            "bound": bound,
            "crit": sig.value.0,
            "certified": sig.certified,
        }),
        text,
    )
    .csv_from_result(&["word", "n", "value", "bound", "crit", "certified"]))
}

fn parse_checks(ids: &[String]) -> Result<Vec<Check>, Error> {
    let mut out = Vec::new();
    for id in ids {
        if id == "all" {
            out.extend(Check::ALL);
        } else {
            out.push(id.parse()?);
        }
    }
    out.dedup();
    Ok(out)
}

/// 2 if any report holds a counterexample, else 1 if any ran out of
/// tables, else 0.
pub fn exit_status(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Counterexample) {
        EXIT_COUNTEREXAMPLE
    } else if reports.iter().any(|r| r.status == Status::ResourceLimited) {
        EXIT_ERROR
    } else {
        EXIT_OK
    }
}

fn verify_cmd(
    cli: &Cli,
    ids: &[String],
    n: u32,
    upto: bool,
    opts: &SweepOptions,
) -> Result<Response, Error> {
    let checks = parse_checks(ids)?;
    if !upto {
        if let Some(c) = checks.iter().find(|c| !c.accepts_rank(n)) {
            return Err(Error::InvalidArgument(format!(
                "{c} is not defined at n = {n}"
            )));
        }
    }
    let needed = checks.iter().map(|c| c.required_rank(n)).max().unwrap_or(0);
    let tower = Tower::open_within(needed, cli.limits(), cli.store().as_ref())?;

    let mut reports: Vec<VerificationReport> = Vec::new();
    for &c in &checks {
        if upto {
            reports.extend(verify_upto(c, n, &tower, opts)?);
        } else if c.required_rank(n) > tower.max_rank() {
            reports.push(VerificationReport::resource_limited(c, n));
        } else {
            reports.push(verify(c, n, &tower, opts)?);
        }
    }

    let mut text = String::new();
    let mut json_reports = Vec::new();
    let mut rows = Vec::new();
    for r in &reports {
        text.push_str(&format!("{r}\n"));
        let mut revalidated = Vec::new();
        for w in &r.counterexamples {
            let ok = revalidate(r.check, r.rank, w, &tower)?;
            text.push_str(&format!(
                "  counterexample {w} ({})\n",
                if ok {
                    "reproduced from primitives"
                } else {
                    "NOT reproduced"
                }
            ));
            revalidated.push(ok);
        }
        let mut v = serde_json::to_value(r).expect("reports serialize");
        v["revalidated"] = json!(revalidated);
        json_reports.push(v);
        rows.push(vec![
            r.check.to_string(),
            r.rank.to_string(),
            r.status.to_string(),
            r.checked.to_string(),
            r.qualifying.to_string(),
            r.total_counterexamples.to_string(),
        ]);
    }
    let mut resp = Response::new(json!({ "reports": json_reports }), text).csv(
        vec![
            "check",
            "n",
            "status",
            "checked",
            "qualifying",
            "counterexamples",
        ],
        rows,
    );
    resp.exit = exit_status(&reports);
    Ok(resp)
}

fn enumerate(cli: &Cli, below: u32, check: bool) -> Result<Response, Error> {
    let top = if check { below + 1 } else { below };
    let tower = cli.tower(top.max(1))?;
    let mut en = Enumerator::new(&tower);
    let list = en.enumerate_below(below)?;
    let mut problems = Vec::new();
    if check {
        for n in 0..below {
            for msg in en.check_invariants(n)? {
                problems.push(format!("interval {n}: {msg}"));
            }
        }
    }
    let lines: Vec<String> = list.iter().map(OrdinalRep::to_string).collect();
    let rows = list
        .iter()
        .enumerate()
        .map(|(i, x)| match x {
            OrdinalRep::Crit { gamma } => vec![
                i.to_string(),
                "crit".into(),
                String::new(),
                gamma.to_string(),
                String::new(),
                x.to_string(),
            ],
            OrdinalRep::Pair(p) => vec![
                i.to_string(),
                "pair".into(),
                p.coef.to_string(),
                p.cof.to_string(),
                p.interval.to_string(),
                x.to_string(),
            ],
        })
        .collect();
    let mut result = json!({
        "below": below,
        "ordinals": list,
        "lines": lines,
    });
    if check {
        result["invariant_violations"] = json!(problems);
    }
    let mut resp = Response::new(result, render_text(&list)).csv(
        vec!["index", "kind", "coef", "gamma", "interval", "text"],
        rows,
    );
    resp.tex = Some(render_tex(&list));
    if !problems.is_empty() {
        return Err(Error::InvalidRepresentation(problems.join("; ")));
    }
    Ok(resp)
}
