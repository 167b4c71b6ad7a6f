use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use levelk_core::experiments::{self, ConfigEntries, OutputFormat};
use levelk_core::{strategies, Error, LevelSpec, MarketParams, RelativeLevel};

#[derive(Parser)]
#[command(name = "levelk", version, about = "Level-k Cournot market sweeps and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a key = value config file. Flags override
    /// file values and accept the same syntax (lists, `lo..hi`, `lo:hi:n`).
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        format: Option<String>,
    },
    /// Analyze a single market instance and level pair.
    Analyze {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 0.25)]
        c: f64,
        #[arg(long, default_value_t = 0.0)]
        m: f64,
        #[arg(long, default_value_t = 0.5)]
        f: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Planner level minus self-interested level, or `inf`.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        delta: RelativeLevel,
        #[arg(long, default_value_t = strategies::DEFAULT_POISSON_MEAN)]
        tau: f64,
        #[arg(long, default_value_t = strategies::DEFAULT_MAX_LEVEL)]
        kmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Args)]
struct Overrides {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    kmax: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> levelk_core::Result<()> {
    match command {
        Command::Run {
            config,
            overrides,
            format,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| io::Error::new(e.kind(), format!("cannot read config {}: {e}", config.display())))?;
            let mut entries = ConfigEntries::parse(&text)?;
            let pairs = [
                ("a", overrides.a),
                ("b", overrides.b),
                ("c", overrides.c),
                ("m", overrides.m),
                ("f", overrides.f),
                ("k", overrides.k),
                ("delta", overrides.delta),
                ("tau", overrides.tau),
                ("kmax", overrides.kmax),
                ("out", overrides.out),
                ("format", format),
            ];
            for (key, value) in pairs {
                if let Some(value) = value {
                    entries.set(key, value)?;
                }
            }
            let config = entries.resolve()?;
            let table = experiments::run_experiment(&config)?;
            match &config.output {
                Some(path) => table.write_to_path(config.format, path),
                None => with_stdout(|w| table.write(config.format, w)),
            }
        }
        Command::Analyze {
            a,
            b,
            c,
            m,
            f,
            k,
            delta,
            tau,
            kmax,
            out,
            format,
        } => {
            let params = MarketParams::new(a, b, c, m, f)?;
            let spec = LevelSpec::new(k, delta)?;
            let report = experiments::analyze(&params, &spec, tau, kmax)?;
            let table = report.to_table();
            let render = |w: &mut dyn Write| match format {
                ReportFormat::Csv => table.write(OutputFormat::Csv, w),
                ReportFormat::Json => table.write(OutputFormat::Json, w),
                ReportFormat::Text => {
                    for (name, cell) in table.columns.iter().zip(&table.rows[0]) {
                        writeln!(w, "{name:<20} {}", cell.render())?;
                    }
                    Ok(())
                }
            };
            match out {
                Some(path) => {
                    let output_error = |source| Error::Output {
                        path: path.clone(),
                        source,
                    };
                    let mut w = BufWriter::new(File::create(&path).map_err(output_error)?);
                    render(&mut w)?;
                    w.flush().map_err(output_error)
                }
                None => with_stdout(render),
            }
        }
    }
}

fn with_stdout<F>(write: F) -> levelk_core::Result<()>
where
    F: FnOnce(&mut dyn Write) -> levelk_core::Result<()>,
{
    let mut w = io::stdout().lock();
    write(&mut w)?;
    w.flush()?;
    Ok(())
}
