use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hetnet_cli::commands::{cmd_coverage, cmd_sweep, run_compare, write_comparison, SweepSpec};
use hetnet_cli::engine::{Engine, ModelName, Settings};
use hetnet_cli::scenario::ScenarioFile;
use hetnet_cli::CliError;

/// Downlink coverage probability of K-tier heterogeneous Poisson networks.
#[derive(Debug, Parser)]
#[command(name = "hetnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coverage probability of one association rule.
    Coverage {
        /// Scenario JSON file.
        scenario: PathBuf,
        #[arg(long, default_value = "maxsinr")]
        model: ModelName,
        #[arg(long, default_value = "auto")]
        engine: Engine,
        #[command(flatten)]
        opts: Options,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coverage over a range of one scenario parameter.
    Sweep {
        scenario: PathBuf,
        /// Field to vary, e.g. `open_tiers[0].threshold_db` or `threshold_db`.
        #[arg(long)]
        param: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Comma-separated rules.
        #[arg(long = "model", alias = "models", value_delimiter = ',', default_value = "maxsinr")]
        models: Vec<ModelName>,
        #[arg(long, default_value = "auto")]
        engine: Engine,
        #[command(flatten)]
        opts: Options,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also draw the coverage curves as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Analytic and simulated coverage side by side, with ordering checks.
    Compare {
        scenario: PathBuf,
        #[arg(
            long = "model",
            alias = "models",
            value_delimiter = ',',
            default_value = "maxsinr,nearest,mirp,mbrp"
        )]
        models: Vec<ModelName>,
        #[command(flatten)]
        opts: Options,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Options {
    /// Simulation trials.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Fixed simulation radius in metres; grown automatically when absent.
    #[arg(long)]
    disk_radius: Option<f64>,
    /// Relative size of the out-of-disk interference the automatic radius allows.
    #[arg(long, default_value_t = 1e-3)]
    edge_tolerance: f64,
    /// Truncation of frequency integrals.
    #[arg(long, default_value_t = 1e4)]
    omega_max: f64,
    /// Absolute tolerance of analytic probabilities.
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    /// Bisection budget of each adaptive integral.
    #[arg(long, default_value_t = 200)]
    max_subdivisions: usize,
}

impl Options {
    fn settings(&self) -> Settings {
        let mut st = Settings {
            trials: self.trials,
            seed: self.seed,
            disk_radius: self.disk_radius,
            edge_tolerance: self.edge_tolerance,
            ..Settings::default()
        };
        st.quad.omega_max = self.omega_max;
        st.quad.radial_rel_tol = self.tolerance;
        st.quad.max_subdivisions = self.max_subdivisions;
        st
    }

    fn check(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Input(m.to_string()));
        if self.trials < 2 {
            return bad("--trials must be at least 2");
        }
        if let Some(r) = self.disk_radius {
            if !(r.is_finite() && r > 0.0) {
                return bad("--disk-radius must be positive");
            }
        }
        if !(self.edge_tolerance > 0.0 && self.edge_tolerance < 1.0) {
            return bad("--edge-tolerance must lie in (0, 1)");
        }
        Ok(())
    }
}

fn with_output(
    out: Option<PathBuf>,
    f: impl FnOnce(&mut dyn std::io::Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match out {
        None => f(&mut std::io::stdout().lock()),
        Some(p) => {
            let mut file = std::fs::File::create(&p)
                .map_err(|e| CliError::Input(format!("cannot create {}: {e}", p.display())))?;
            let res = f(&mut file);
            if res.is_err() {
                drop(file);
                let _ = std::fs::remove_file(&p);
            }
            res
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coverage {
            scenario,
            model,
            engine,
            opts,
            out,
        } => {
            opts.check()?;
            let file = ScenarioFile::load(&scenario)?;
            let st = opts.settings();
            with_output(out, |w| cmd_coverage(&file, model, engine, &st, w))
        }
        Command::Sweep {
            scenario,
            param,
            from,
            to,
            steps,
            models,
            engine,
            opts,
            out,
            svg,
        } => {
            opts.check()?;
            let file = ScenarioFile::load(&scenario)?;
            let spec = SweepSpec {
                parameter: param,
                from,
                to,
                steps,
                models,
                engine,
            };
            cmd_sweep(&file, &spec, &opts.settings(), out.as_deref(), svg.as_deref())
        }
        Command::Compare {
            scenario,
            models,
            opts,
            out,
        } => {
            opts.check()?;
            let file = ScenarioFile::load(&scenario)?;
            let c = run_compare(&file, &models, &opts.settings())?;
            with_output(out, |w| write_comparison(w, &c))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ");
            eprintln!("{}", CliError::Input(first.to_string()).line());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
