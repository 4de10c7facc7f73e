mod commands;
mod config;

use clap::{Parser, Subcommand};
use commands::{cmd_bessel, cmd_calibrate, cmd_hc, cmd_relations, Outcome, SCHEMA_VERSION};
use config::{ConfigError, RunConfig};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

/// Verification suites and Bessel evaluations for the cyclic-quiver Dunkl operators.
#[derive(Parser)]
#[command(name = "cyclohc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// RNG seed; overrides CYCLOHC_SEED and the config
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for <command>.json and <command>.csv
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report to stdout
    #[arg(long, global = true)]
    json: bool,
    /// Print the CSV table to stdout
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Defining relations under the Dunkl embedding, plus embeddings j and i
    Relations,
    /// Rank-one D' checks: factorization, kernel, radial-part constants
    Hc,
    /// Bessel function by series and by quadrature, with a cross-check
    Bessel,
    /// Select the convention flags from the kernel condition
    Calibrate,
    /// Run every command above
    All,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Relations => "relations",
            Command::Hc => "hc",
            Command::Bessel => "bessel",
            Command::Calibrate => "calibrate",
            Command::All => "all",
        }
    }
}

fn resolve_seed(flag: Option<u64>, cfg: &RunConfig) -> Result<u64, ConfigError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(v) = std::env::var("CYCLOHC_SEED") {
        return v
            .parse()
            .map_err(|_| ConfigError(format!("CYCLOHC_SEED = '{}' is not a u64", v)));
    }
    cfg.get("seed", 0)
}

fn run(cli: &Cli) -> Result<(Outcome, u64, RunConfig), ConfigError> {
    let cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| ConfigError(format!("{}: {}", p.display(), e)))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    let seed = resolve_seed(cli.seed, &cfg)?;
    let out = match cli.command {
        Command::Relations => cmd_relations(&cfg)?,
        Command::Hc => cmd_hc(&cfg)?,
        Command::Bessel => cmd_bessel(&cfg, seed)?,
        Command::Calibrate => cmd_calibrate(&cfg)?,
        Command::All => {
            let parts = [
                ("calibrate", cmd_calibrate(&cfg)?),
                ("relations", cmd_relations(&cfg)?),
                ("hc", cmd_hc(&cfg)?),
                ("bessel", cmd_bessel(&cfg, seed)?),
            ];
            let code = parts.iter().map(|(_, o)| o.code).max().unwrap_or(0);
            let mut report = json!({});
            let mut summary = Vec::new();
            let mut csv = None;
            for (name, o) in parts {
                report[name] = o.report;
                summary.extend(o.summary);
                csv = csv.or(o.csv);
            }
            report["pass"] = json!(code == 0);
            Outcome {
                code,
                report,
                csv,
                summary,
            }
        }
    };
    Ok((out, seed, cfg))
}

fn emit(cli: &Cli, out: &Outcome, seed: u64, cfg: &RunConfig) -> std::io::Result<()> {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": cli.command.name(),
        "config": cfg.entries,
        "seed": seed,
        "exit_code": out.code,
        "report": out.report,
    });
    let text = serde_json::to_string_pretty(&doc).expect("json");
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{}.json", cli.command.name())), format!("{}\n", text))?;
        if let Some(csv) = &out.csv {
            std::fs::write(dir.join(format!("{}.csv", cli.command.name())), csv)?;
        }
    }
    if cli.json {
        println!("{}", text);
    } else if !cli.csv {
        for line in &out.summary {
            println!("{}", line);
        }
    }
    if cli.csv {
        if let Some(csv) = &out.csv {
            print!("{}", csv);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, seed, cfg)) => {
            if let Err(e) = emit(&cli, &out, seed, &cfg) {
                eprintln!("output error: {}", e);
                return ExitCode::from(2);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("{}", e);
            ExitCode::from(2)
        }
    }
}
