use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinmech_harness::{registry, run_scenario, sweep, Integrator, Result, ScenarioConfig};

#[derive(Parser)]
#[command(name = "sim", version, about = "Run spin-mechanical scenarios and write CSV tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario.
    Run(Common),
    /// Run a scenario once per value of one numeric parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to vary, as `key` or `section.key`.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<String>,
    },
    /// List scenarios and their parameters.
    List,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scenario: Option<String>,
    /// TOML configuration or a previous run's manifest.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter override `key=value`; repeatable.
    #[arg(long = "set")]
    set: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use fixed-step RK4 with this step instead of the adaptive integrator.
    #[arg(long)]
    fixed_step: Option<f64>,
}

impl Common {
    fn config(&self) -> Result<ScenarioConfig> {
        let mut config = match (&self.config, &self.scenario) {
            (Some(path), scenario) => {
                let c = ScenarioConfig::from_file(path)?;
                if let Some(id) = scenario {
                    if *id != c.scenario_id {
                        return Err(spinmech_harness::HarnessError::config(format!(
                            "--scenario {id} contradicts {} in {}",
                            c.scenario_id,
                            path.display()
                        )));
                    }
                }
                c
            }
            (None, Some(id)) => ScenarioConfig::new(id)?,
            (None, None) => return Err(spinmech_harness::HarnessError::config("give --scenario or --config")),
        };
        for assignment in &self.set {
            config.set_assignment(assignment)?;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        if let Some(dt) = self.fixed_step {
            config.integrator = Integrator::Fixed { dt };
        }
        Ok(config)
    }
}

fn list() {
    for s in registry::all() {
        println!("{}  {}", s.id, s.description);
        for p in (s.params)() {
            println!("    {}.{} = {}    {}", p.section.name(), p.key, p.default, p.help);
        }
    }
}

fn main_inner(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(common) => {
            let report = run_scenario(&common.config()?)?;
            for o in &report.outputs {
                println!("{}  {} rows", report.output_dir.join(&o.file).display(), o.rows);
            }
            println!("{}", report.manifest.display());
        }
        Command::Sweep { common, axis, values } => {
            let report = sweep(&common.config()?, &axis, &values)?;
            for o in &report.outputs {
                println!("{}  {} rows", report.output_dir.join(&o.file).display(), o.rows);
            }
            println!("{}", report.manifest.display());
        }
        Command::List => list(),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
