use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use prvo::commands::{self, CommandError, SpaceMethod, CANTELLI_HEADER};
use prvo::scenario::ScenarioFile;
use prvo::simulator::Scenario;
use prvo::surrogate::cantelli_k;

/// Probabilistic reciprocal velocity obstacle planner.
#[derive(Parser, Debug)]
#[command(name = "prvo", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Scenario overrides shared by all subcommands.
#[derive(clap::Args, Debug)]
struct Overrides {
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the confidence parameter k.
    #[arg(long, conflicts_with = "eta")]
    k: Option<f64>,
    /// Override the confidence as a probability; converted to k.
    #[arg(long)]
    eta: Option<f64>,
    /// Override the number of candidate directions.
    #[arg(long)]
    candidates: Option<usize>,
    /// Override whether planners account for their own actuation noise.
    #[arg(long, value_name = "BOOL")]
    ego_uncertainty: Option<bool>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario and write trajectory.csv and summary.json.
    Simulate {
        scenario: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Check every planned step with this many Monte Carlo samples (writes eta.csv).
        #[arg(long)]
        validate: Option<usize>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Compare empirical constraint satisfaction with the Cantelli bound over a k sweep.
    ValidateCantelli {
        scenario: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Values of k to test.
        #[arg(long = "k-values", value_delimiter = ',', default_values_t = vec![0.5, 1.0, 1.5, 2.0, 3.0])]
        k_values: Vec<f64>,
        /// Monte Carlo samples per constraint.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Print each robot's feasible time-scale set along its goal-directed candidate.
    SolutionSpace {
        scenario: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// prvo-taylor, prvo-exact, inflation or porca.
        #[arg(long, default_value = "prvo-taylor")]
        method: String,
        /// Velocity horizon of the inflation baseline, in seconds.
        #[arg(long, default_value_t = 1.0)]
        velocity_horizon: f64,
        /// Time horizon of the ORCA baseline; infinite when omitted.
        #[arg(long)]
        time_horizon: Option<f64>,
    },
}

fn load(path: &PathBuf, o: &Overrides) -> Result<Scenario, CommandError> {
    let file = ScenarioFile::load(path)?;
    let mut sc = file.to_scenario();
    if let Some(seed) = o.seed {
        sc.seed = seed;
    }
    if let Some(k) = o.k {
        sc.k = k;
    }
    if let Some(eta) = o.eta {
        sc.k = cantelli_k(eta)?;
    }
    if let Some(n) = o.candidates {
        sc.n_candidates = n;
    }
    if let Some(ego) = o.ego_uncertainty {
        sc.ego_uncertainty_enabled = ego;
    }
    sc.validate()?;
    Ok(sc)
}

fn execute(cli: Cli) -> Result<ExitCode, CommandError> {
    match cli.command {
        Command::Simulate {
            scenario,
            overrides,
            validate,
            out,
        } => {
            let sc = load(&scenario, &overrides)?;
            let result = commands::simulate(&sc, &out, validate)?;
            let s = &result.summary;
            println!(
                "steps={} collisions={} infeasible_steps={} min_distance={:.4} all_reached={}",
                s.steps,
                s.collisions,
                s.infeasible_steps,
                s.min_distance,
                s.all_reached()
            );
            Ok(if result.collided() { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::ValidateCantelli {
            scenario,
            overrides,
            k_values,
            samples,
        } => {
            let sc = load(&scenario, &overrides)?;
            println!("{CANTELLI_HEADER}");
            for row in commands::validate_cantelli(&sc, &k_values, samples)? {
                println!("{}", row.csv());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SolutionSpace {
            scenario,
            overrides,
            method,
            velocity_horizon,
            time_horizon,
        } => {
            let sc = load(&scenario, &overrides)?;
            let k = if overrides.eta.is_some() { None } else { Some(sc.k) };
            let mut m = SpaceMethod::from_name(&method, k, overrides.eta)?;
            match &mut m {
                SpaceMethod::Inflation { velocity_horizon: h, .. } => *h = velocity_horizon,
                SpaceMethod::Porca { time_horizon: h, .. } => *h = time_horizon.unwrap_or(f64::INFINITY),
                _ => {}
            }
            let rows = commands::solution_space(&sc, m)?;
            print!("{}", commands::space_csv(m, &rows));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PRVO_LOG_LEVEL", "warn")).init();
    // Usage errors exit with 1; 2 is reserved for runs that flag collisions.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
