use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use steerage::demo::{find_demo, run_demo, DEMOS};
use steerage::formats::{
    emit_protocol_file, emit_state_file, parse_protocol_file, parse_protocol_shorthand,
    parse_state_file,
};
use steerage::report::ReportDocument;
use steerage_core::paradox::{analyze, Verdict};
use steerage_core::states::{builtin, BUILTIN_NAMES};

#[derive(Parser)]
#[command(
    name = "steerage",
    version,
    about = "Decide whether a shared state under a k-setting projective protocol \
             admits a local-hidden-state model or forces a steering paradox"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one state under one protocol and print the verdict report.
    Analyze(AnalyzeArgs),
    /// Run the bundled reference cases and compare with their expected verdicts.
    Demo(DemoArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["state", "builtin"]))]
struct AnalyzeArgs {
    /// Path to a state document.
    #[arg(long, value_name = "FILE")]
    state: Option<PathBuf>,

    /// Name of a built-in state (two_qubit_theta, cluster_mix_theta,
    /// psi_prime, w_state, si_product_example).
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,

    /// Parameters for the built-in state, comma-separated decimal radians.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_name = "LIST")]
    params: Vec<f64>,

    /// Protocol: shorthand like "zz,yx" (one letter per Alice site and one
    /// token per setting) or a path to a protocol document.
    #[arg(long, value_name = "SPEC|FILE")]
    protocol: String,

    /// Override Alice's site indices, comma-separated.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    alice: Option<Vec<usize>>,

    /// Tolerance driving purity, ray-equality and weight consistency.
    #[arg(long, env = "STEERAGE_TOL", default_value_t = 1e-9)]
    tol: f64,

    /// Report format on standard output.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed recorded in structured reports.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct DemoArgs {
    /// Which case to run (example1..example5); all of them when omitted.
    name: Option<String>,

    #[arg(long, env = "STEERAGE_TOL", default_value_t = 1e-9)]
    tol: f64,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed recorded in structured reports.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Analyze(args) => match cmd_analyze(&args) {
            Ok(code) => code,
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::from(1)
            }
        },
        Command::Demo(args) => match cmd_demo(&args) {
            Ok(code) => code,
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::from(1)
            }
        },
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<ExitCode, String> {
    let spec = match (&args.state, &args.builtin) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            parse_state_file(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, Some(name)) => builtin(name, &args.params).map_err(|e| {
            format!("--builtin {name}: {e} (known: {})", BUILTIN_NAMES.join(", "))
        })?,
        _ => unreachable!("clap enforces exactly one source"),
    };
    let spec = match &args.alice {
        Some(sites) => spec.with_alice_sites(sites).map_err(|e| format!("--alice: {e}"))?,
        None => spec,
    };

    let alice_dims = spec.shape().alice_dims();
    let protocol = if Path::new(&args.protocol).exists() {
        let text = std::fs::read_to_string(&args.protocol)
            .map_err(|e| format!("{}: {e}", args.protocol))?;
        parse_protocol_file(&text, &alice_dims).map_err(|e| format!("{}: {e}", args.protocol))?
    } else {
        parse_protocol_shorthand(&args.protocol, &alice_dims)
            .map_err(|e| format!("--protocol {}: {e}", args.protocol))?
    };

    let report = analyze(&spec, &protocol, args.tol).map_err(|e| e.to_string())?;
    let document = ReportDocument::from_report(
        &report,
        args.seed,
        &emit_state_file(&spec),
        &emit_protocol_file(&protocol),
    );
    match args.format {
        Format::Text => print!("{}", document.to_text()),
        Format::Structured => print!("{}", document.to_json()),
    }
    Ok(match report.verdict {
        Verdict::Paradox | Verdict::NoContradiction => ExitCode::from(0),
        Verdict::PremiseViolated => ExitCode::from(2),
    })
}

fn cmd_demo(args: &DemoArgs) -> Result<ExitCode, String> {
    let cases: Vec<_> = match &args.name {
        Some(name) => {
            let case = find_demo(name).ok_or_else(|| {
                let known: Vec<&str> = DEMOS.iter().map(|d| d.name).collect();
                format!("unknown demo '{name}' (known: {})", known.join(", "))
            })?;
            vec![case]
        }
        None => DEMOS.iter().collect(),
    };

    let mut all_match = true;
    let mut structured = Vec::new();
    for case in cases {
        let outcome = run_demo(case, args.tol).map_err(|e| format!("{}: {e}", case.name))?;
        all_match &= outcome.matches;
        match args.format {
            Format::Text => println!("{}", outcome.summary),
            Format::Structured => {
                let spec = builtin(case.builtin, case.params).map_err(|e| e.to_string())?;
                let protocol =
                    parse_protocol_shorthand(case.protocol, &spec.shape().alice_dims())
                        .map_err(|e| e.to_string())?;
                let doc = ReportDocument::from_report(
                    &outcome.report,
                    args.seed,
                    &emit_state_file(&spec),
                    &emit_protocol_file(&protocol),
                );
                structured.push(serde_json::json!({
                    "name": outcome.name,
                    "matches": outcome.matches,
                    "report": doc,
                }));
            }
        }
    }
    if args.format == Format::Structured {
        let body = serde_json::to_string_pretty(&structured).expect("demo doc serializes");
        println!("{body}");
    } else if all_match {
        println!("all expectations matched");
    } else {
        println!("MISMATCH against expected verdicts");
    }
    Ok(ExitCode::from(if all_match { 0 } else { 1 }))
}
