mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use theta_core::qdsl::{eval, parse};
use theta_core::relations::{
    generate_ach_rules, load_corpus, run_suite, Corpus, Engine, JsonCorpus, Status, SuiteSettings,
    VerificationReport, DEFAULT_MEM_LIMIT, DEFAULT_N_MAX, DEFAULT_ODD_PAIR_BOUND, DEFAULT_ORDER,
};
use theta_core::seq::{gf, oracle_count, Form, SeqKind, SeqSpec};

use output::{render_reports, Format};

const EXIT_OK: u8 = 0;
const EXIT_MISMATCH: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "theta", version, about = "Exact q-series and representation-count verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first coefficients of a theta expression.
    Coeffs {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count representations of n by a form.
    Count {
        #[arg(long)]
        kind: SeqKind,
        #[arg(long)]
        form: Form,
        #[arg(long)]
        n: u64,
        /// Cross-check the enumeration against the generating function.
        #[arg(long, value_enum)]
        via: Option<Via>,
    },
    /// Check every item of one or more corpus files.
    Verify(RunArgs),
    /// Scan conjectured relations and list findings.
    Scan(RunArgs),
    /// Emit the generated family rules as a JSON corpus.
    GenerateRules {
        /// Exclusive bound on the coefficients of the odd-pair family.
        #[arg(long, default_value_t = DEFAULT_ODD_PAIR_BOUND)]
        bound: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    Series,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Corpus file (.qid or .json); repeatable.
    #[arg(long = "file", required = true)]
    files: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ORDER as u64, value_parser = clap::value_parser!(u64).range(1..))]
    order: u64,
    #[arg(long = "max-n")]
    max_n: Option<u64>,
    #[arg(long, value_enum, default_value_t = EngineArg::Series)]
    engine: EngineArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Memory budget per check, e.g. 512M or 4G.
    #[arg(long = "mem-limit", value_parser = parse_bytes)]
    mem_limit: Option<u64>,
    /// Include per-item wall time in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Series,
    Oracle,
    Both,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Series => Engine::Series,
            EngineArg::Oracle => Engine::Oracle,
            EngineArg::Both => Engine::Both,
        }
    }
}

fn parse_bytes(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let (digits, shift) = match s.char_indices().last() {
        Some((i, 'K' | 'k')) => (&s[..i], 10),
        Some((i, 'M' | 'm')) => (&s[..i], 20),
        Some((i, 'G' | 'g')) => (&s[..i], 30),
        _ => (s, 0),
    };
    let value: u64 = digits.parse().map_err(|_| format!("invalid size {s:?}"))?;
    if value == 0 {
        return Err("memory limit must be positive".into());
    }
    value.checked_shl(shift).filter(|v| v >> shift == value).ok_or_else(|| format!("size {s:?} overflows"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Coeffs { expr, order, format } => cmd_coeffs(&expr, order as usize, format),
        Command::Count { kind, form, n, via } => cmd_count(kind, form, n, via.is_some()),
        Command::Verify(args) => cmd_run(args, DEFAULT_N_MAX, false),
        Command::Scan(args) => cmd_run(args, 5000, true),
        Command::GenerateRules { bound, out } => cmd_generate(bound, out),
    };
    ExitCode::from(code)
}

fn cmd_coeffs(expr: &str, order: usize, format: Format) -> u8 {
    let parsed = match parse(expr) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let series = match eval(&parsed, order) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let coeffs: Vec<String> = series.coeffs().iter().map(|c| c.to_string()).collect();
    let text = match format {
        Format::Text => coeffs.join(" "),
        Format::Csv => {
            let rows: Vec<String> = coeffs.iter().enumerate().map(|(i, c)| format!("{i},{c}")).collect();
            format!("n,coefficient\n{}", rows.join("\n"))
        }
        Format::Json => {
            // exact values: numbers when they fit, strings otherwise
            let values: Vec<serde_json::Value> = series
                .coeffs()
                .iter()
                .map(|c| match i64::try_from(c) {
                    Ok(v) => serde_json::Value::from(v),
                    Err(_) => serde_json::Value::from(c.to_string()),
                })
                .collect();
            serde_json::to_string(&values).expect("json")
        }
    };
    println!("{text}");
    EXIT_OK
}

fn cmd_count(kind: SeqKind, form: Form, n: u64, via_series: bool) -> u8 {
    let spec = SeqSpec::new(kind, form);
    let count = oracle_count(&spec, n);
    if via_series {
        let Ok(order) = usize::try_from(n + 1) else {
            eprintln!("error: n too large for a series");
            return EXIT_ERROR;
        };
        let series = gf(&spec, order);
        let coefficient = &series.coeffs()[n as usize];
        if *coefficient != count.into() {
            eprintln!("mismatch for {spec} at {n}: oracle={count}, series={coefficient}");
            return EXIT_MISMATCH;
        }
    }
    println!("{count}");
    EXIT_OK
}

fn load_all(files: &[PathBuf]) -> Result<Corpus, u8> {
    let mut corpus = Corpus::default();
    let mut failed = false;
    for path in files {
        match load_corpus(path) {
            Ok(c) => corpus.extend(c),
            Err(e) => {
                eprintln!("error: {e}");
                failed = true;
            }
        }
    }
    if failed {
        Err(EXIT_ERROR)
    } else {
        Ok(corpus)
    }
}

fn exit_code(reports: &[VerificationReport]) -> u8 {
    if reports.iter().any(|r| r.status == Status::Error) {
        EXIT_ERROR
    } else if reports.iter().any(|r| r.status == Status::Counterexample) {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    }
}

fn cmd_run(args: RunArgs, default_n_max: u64, findings: bool) -> u8 {
    let corpus = match load_all(&args.files) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let settings = SuiteSettings {
        order: args.order as usize,
        n_max: args.max_n.unwrap_or(default_n_max),
        engine: args.engine.into(),
        jobs: args.jobs,
        mem_limit: args.mem_limit.unwrap_or(DEFAULT_MEM_LIMIT),
        timings: args.timings,
    };
    let start = Instant::now();
    let reports = run_suite(&corpus.items(), &settings);
    let elapsed = start.elapsed();

    let rendered = match render_reports(&reports, args.format) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_ERROR;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(rendered.as_bytes()).is_err() {
                return EXIT_ERROR;
            }
        }
    }

    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    if findings {
        for r in reports.iter().filter(|r| r.status == Status::Counterexample) {
            eprintln!("finding: {r}");
        }
        for r in reports.iter().filter(|r| !r.exceptional.is_empty()) {
            let values: Vec<String> = r.exceptional.iter().map(|e| format!("r({})={}", e.n, e.value)).collect();
            eprintln!("{}: {} nonzero values: {}", r.name, values.len(), values.join(" "));
        }
    }
    eprintln!(
        "{} items: {} verified, {} counterexample, {} error, {} skipped in {:.2}s",
        reports.len(),
        count(Status::Verified),
        count(Status::Counterexample),
        count(Status::Error),
        count(Status::Skipped),
        elapsed.as_secs_f64()
    );
    exit_code(&reports)
}

fn cmd_generate(bound: u64, out: Option<PathBuf>) -> u8 {
    let corpus = JsonCorpus {
        description: Some(format!("Generated family rules, odd-pair bound {bound}.")),
        rules: generate_ach_rules(bound),
        ..JsonCorpus::default()
    };
    let text = serde_json::to_string_pretty(&corpus).expect("json") + "\n";
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_ERROR;
            }
        }
        None => print!("{text}"),
    }
    EXIT_OK
}
