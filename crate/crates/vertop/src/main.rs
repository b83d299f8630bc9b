use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use vertop::config::{self, Format};
use vertop::expr::parse_expr;
use vertop::ope::{identify, OpeOptions, Outcome};
use vertop::report::Report;
use vertop_core::suites::{run_suite, SuiteConfig, SUITES};

#[derive(Parser)]
#[command(
    name = "vertop",
    version,
    about = "Exact checks for linear topological modules over vertex algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Check {
        suite: String,
        #[command(flatten)]
        settings: Settings,
        /// Keep per-entry timings in the report.
        #[arg(long)]
        timings: bool,
        /// Write the report here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate a field expression and identify it.
    Ope {
        #[arg(long)]
        expr: String,
        /// Use the Gaussian twist for free-field expressions.
        #[arg(long)]
        gaussian: bool,
        #[command(flatten)]
        settings: Settings,
    },
    /// Re-render a saved JSON report.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Args, Default)]
struct Settings {
    /// Truncation level: results are exact mod U_N.
    #[arg(short = 'N')]
    precision: Option<String>,
    #[arg(long)]
    degree: Option<String>,
    #[arg(long)]
    depth: Option<String>,
    /// Mode window `lo..hi`.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// A positive rational square, e.g. `4` or `9/4`.
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    margin: Option<String>,
    #[arg(long)]
    generation: Option<String>,
    #[arg(long)]
    probes: Option<String>,
    #[arg(long)]
    words: Option<String>,
    #[arg(long, alias = "max-word-len")]
    max_len: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    level: Option<String>,
    #[arg(long)]
    slack: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Settings {
    fn resolve(&self) -> Result<(SuiteConfig, Format), config::ConfigError> {
        let mut cfg = SuiteConfig::default();
        let mut format = Format::Json;
        if let Some(path) = &self.config {
            config::load_file(path, &mut cfg, &mut format)?;
        }
        let flags = [
            ("N", &self.precision),
            ("degree", &self.degree),
            ("depth", &self.depth),
            ("window", &self.window),
            ("g", &self.g),
            ("n", &self.n),
            ("c", &self.c),
            ("seed", &self.seed),
            ("margin", &self.margin),
            ("generation", &self.generation),
            ("probes", &self.probes),
            ("words", &self.words),
            ("max_len", &self.max_len),
            ("level", &self.level),
            ("slack", &self.slack),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config::set(&mut cfg, &mut format, key, v)?;
            }
        }
        if let Some(f) = self.format {
            format = f;
        }
        config::validate(&cfg)?;
        Ok((cfg, format))
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn emit(text: &str, output: Option<&PathBuf>) -> anyhow::Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn check(
    suite: &str,
    settings: &Settings,
    timings: bool,
    output: Option<&PathBuf>,
) -> anyhow::Result<ExitCode> {
    if !SUITES.contains(&suite) {
        return Ok(usage(format_args!(
            "unknown suite `{suite}`; expected one of {}",
            SUITES.join(", ")
        )));
    }
    let (cfg, format) = match settings.resolve() {
        Ok(x) => x,
        Err(e) => return Ok(usage(e)),
    };
    let start = Instant::now();
    let entries = run_suite(suite, &cfg).map_err(|e| anyhow::anyhow!("{e}"))?;
    log_elapsed(suite, start);
    let pairs = cfg.pairs().into_iter().map(|(k, v)| (k.to_string(), v));
    let report = Report::new(suite, pairs, entries, timings);
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    emit(&text, output)?;
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn log_elapsed(suite: &str, start: Instant) {
    if std::env::var_os("VERTOP_VERBOSE").is_some() {
        eprintln!("{suite}: {:?}", start.elapsed());
    }
}

fn ope(src: &str, gaussian: bool, settings: &Settings) -> anyhow::Result<ExitCode> {
    let expr = match parse_expr(src) {
        Ok(e) => e,
        Err(e) => {
            return Ok(usage(format_args!(
                "{e}\n  {src}\n  {:>width$}",
                "^",
                width = e.offset() + 1
            )))
        }
    };
    let (cfg, _) = match settings.resolve() {
        Ok(x) => x,
        Err(e) => return Ok(usage(e)),
    };
    let opts = OpeOptions {
        precision: cfg.precision,
        window: cfg.window,
        depth: cfg.depth.min(3),
        degree: cfg.degree.min(2),
        generation: cfg.generation,
        probes: cfg.probes,
        seed: cfg.seed,
    };
    match identify(&expr, cfg.g, cfg.n, &cfg.c, gaussian, &opts) {
        Ok(Outcome::Combination(s)) => println!("{s}"),
        Ok(Outcome::Table(t)) => {
            println!("no combination of known fields matches {expr}");
            print!("{t}");
        }
        Err(e) => return Ok(usage(e)),
    }
    Ok(ExitCode::SUCCESS)
}

fn rerender(file: &PathBuf, format: Format) -> anyhow::Result<ExitCode> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let report = match Report::from_json(&text) {
        Ok(r) => r,
        Err(e) => return Ok(usage(format_args!("{}: {e}", file.display()))),
    };
    let out = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    emit(&out, None)?;
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Check {
            suite,
            settings,
            timings,
            output,
        } => check(suite, settings, *timings, output.as_ref()),
        Command::Ope {
            expr,
            gaussian,
            settings,
        } => ope(expr, *gaussian, settings),
        Command::Report { file, format } => rerender(file, *format),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
