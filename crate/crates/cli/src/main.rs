mod corpus;
mod job;
mod range;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use job::{Failure, JobSpec};

#[derive(Parser, Debug)]
#[command(name = "prescope", version, about = "Telescopers, prescopers and zero-sum annihilators of hypergeometric terms")]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Leave the wall-time field out of the output.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Write the result to a file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default, Clone)]
struct TermArgs {
    /// Hypergeometric term, e.g. "(-1)^k*binomial(2*n+1,k)^2".
    #[arg(long)]
    term: Option<String>,
    /// Shift quotient in n, for terms given by quotients.
    #[arg(long, requires = "gk")]
    gn: Option<String>,
    /// Shift quotient in k, for terms given by quotients.
    #[arg(long, requires = "gn")]
    gk: Option<String>,
    /// Rational factor f: the verb works on f*H.
    #[arg(long)]
    multiplier: Option<String>,
    /// Operator applied first: the verb works on OP(f*H).
    #[arg(long = "pre", value_name = "OP")]
    pre: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct RatArgs {
    /// Rational function in n and k.
    #[arg(long)]
    ratfunc: String,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Minimal telescoper.
    Telescoper(TermArgs),
    /// Minimal prescoper and the residual it leaves.
    Prescoper {
        #[command(flatten)]
        term: TermArgs,
        /// dependence, groups or direct.
        #[arg(long, default_value = "dependence")]
        method: String,
    },
    /// Least-order annihilator of the sum over a range.
    Annihilator {
        #[command(flatten)]
        term: TermArgs,
        /// LO..HI, each an integer-linear form in n or -inf/inf.
        #[arg(long, default_value = "-inf..inf", allow_hyphen_values = true)]
        range: String,
    },
    /// Residual form under the modified Abramov-Petkovsek reduction.
    Reduce(TermArgs),
    /// Discrete residues of a rational function in k.
    Residues(RatArgs),
    /// Rational summability in k with an antidifference.
    Summable(RatArgs),
    /// Vanishing-sum certificate from Nicole's lemma.
    NicoleCheck {
        #[command(flatten)]
        term: TermArgs,
        /// Pair P/Q as JSON; guessed from the term when omitted.
        #[arg(long)]
        pair: Option<String>,
    },
    /// Zero-sum certificate of the complement basis.
    Zerosum {
        #[command(flatten)]
        term: TermArgs,
        #[arg(long, default_value = "-inf..inf", allow_hyphen_values = true)]
        range: String,
    },
    /// Matrices commuting with the shift action on W_K.
    Automorphism {
        #[command(flatten)]
        term: TermArgs,
        /// Degree bound of the numerator ansatz.
        #[arg(long)]
        deg_bound: Option<usize>,
        /// Common denominator of the ansatz, a polynomial in n.
        #[arg(long)]
        denominator: Option<String>,
    },
    /// Least common left multiple of operators in n and Sn.
    Lclm {
        #[arg(long = "op", required = true, num_args = 1, value_name = "OP")]
        ops: Vec<String>,
    },
    /// Value of a term or rational function, or a finite sum of a term.
    Eval {
        #[arg(long)]
        term: Option<String>,
        #[arg(long, conflicts_with = "term")]
        ratfunc: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
    },
    /// Runs a job file.
    Job { file: PathBuf },
    /// Runs every corpus file and compares with the stored results.
    Corpus { dir: Option<PathBuf> },
}

fn with_term(verb: &str, t: TermArgs) -> JobSpec {
    JobSpec {
        term: t.term,
        gn: t.gn,
        gk: t.gk,
        multiplier: t.multiplier,
        pre: t.pre,
        ..JobSpec::new(verb)
    }
}

fn job_of(cmd: Command) -> Result<JobSpec, Failure> {
    Ok(match cmd {
        Command::Telescoper(t) => with_term("telescoper", t),
        Command::Prescoper { term, method } => JobSpec { method: Some(method), ..with_term("prescoper", term) },
        Command::Annihilator { term, range } => JobSpec { range: Some(range), ..with_term("annihilator", term) },
        Command::Reduce(t) => with_term("reduce", t),
        Command::Residues(r) => JobSpec { ratfunc: Some(r.ratfunc), ..JobSpec::new("residues") },
        Command::Summable(r) => JobSpec { ratfunc: Some(r.ratfunc), ..JobSpec::new("summable") },
        Command::NicoleCheck { term, pair } => {
            let pair = match pair {
                Some(p) => Some(serde_json::from_str(&p).map_err(|e| Failure::Usage(format!("--pair: {e}")))?),
                None => None,
            };
            JobSpec { pair, ..with_term("nicole-check", term) }
        }
        Command::Zerosum { term, range } => JobSpec { range: Some(range), ..with_term("zerosum", term) },
        Command::Automorphism { term, deg_bound, denominator } => {
            JobSpec { deg_bound, denominator, ..with_term("automorphism", term) }
        }
        Command::Lclm { ops } => JobSpec { operators: ops, ..JobSpec::new("lclm") },
        Command::Eval { term, ratfunc, n, k, range } => {
            JobSpec { term, ratfunc, n: Some(n), k, range, ..JobSpec::new("eval") }
        }
        Command::Job { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?
        }
        Command::Corpus { .. } => unreachable!("handled before"),
    })
}

/// `key: value` lines, strings unquoted.
fn pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        pretty(x, indent + 2, out);
                    }
                    Value::String(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    other => out.push_str(&format!("{pad}{k}: {other}\n")),
                }
            }
        }
        Value::String(s) => out.push_str(&format!("{pad}{s}\n")),
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

fn emit(cli: &Cli, text: String) -> Result<(), Failure> {
    match &cli.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(cli: &Cli, mut doc: Value, seconds: f64) -> String {
    if !cli.no_timing {
        doc["timing"] = json!({ "wall_seconds": (seconds * 1000.0).round() / 1000.0 });
    }
    if cli.pretty {
        let mut s = String::new();
        pretty(&doc, 0, &mut s);
        s
    } else {
        format!("{doc}\n")
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", f.to_json());
    ExitCode::from(f.exit_code() as u8)
}

fn run_corpus(cli: &Cli, dir: Option<PathBuf>) -> ExitCode {
    let start = Instant::now();
    let dir = dir.unwrap_or_else(corpus::bundled_dir);
    let rows = match corpus::run_corpus(&dir) {
        Ok(r) => r,
        Err(e) => return fail(&Failure::Usage(e)),
    };
    let seconds = start.elapsed().as_secs_f64();
    let text = if cli.pretty {
        corpus::table(&rows)
    } else {
        let doc = json!({ "verb": "corpus", "result": corpus::report(&rows), "version": prescope_core::VERSION });
        render(cli, doc, seconds)
    };
    if let Err(f) = emit(cli, text) {
        return fail(&f);
    }
    if rows.iter().all(|r| r.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Failure::Usage(e.to_string().trim().to_string())),
    };
    if let Command::Corpus { dir } = &cli.command {
        return run_corpus(&cli, dir.clone());
    }
    let job = match job_of(cli.command.clone()) {
        Ok(j) => j,
        Err(f) => return fail(&f),
    };
    let start = Instant::now();
    let result = job::run(&job);
    let seconds = start.elapsed().as_secs_f64();
    match result {
        Ok(payload) => {
            let input = serde_json::to_value(&job).expect("job serializes");
            let doc = json!({ "verb": job.verb, "input": input, "result": payload, "version": prescope_core::VERSION });
            match emit(&cli, render(&cli, doc, seconds)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(f) => fail(&f),
            }
        }
        Err(f) => fail(&f),
    }
}
