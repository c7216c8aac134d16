//! Command-line front end: simulate the benchmark circuits, run mitigated
//! estimates, print extrapolation weights and reproduce the experiment
//! sweeps as CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zne_core::error::ZneError;
use zne_core::experiment::{
    csv_string, emit_csv, figure3_sweep, figure8_sweep, run_experiment, scenario_parts,
    ExperimentConfig, Method, ResultRow, Scenario,
};
use zne_core::extrapolation::format_rational;
use zne_core::insertion::InsertionPlan;
use zne_core::{richardson_weights, riim_coefficients};

#[derive(Parser)]
#[command(
    name = "zne",
    about = "Zero-noise extrapolation with identity insertions on a density-matrix simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct CommonOpts {
    /// Scenario: simple-2cx, simple-4cx or trotter-sho.
    #[arg(long)]
    scenario: Option<String>,

    /// Depolarizing strength per CNOT.
    #[arg(long)]
    eps: Option<f64>,

    /// Use the full noise model (depolarizing plus thermal relaxation).
    #[arg(long)]
    full_noise: bool,

    /// Highest insertion order used by the mitigation method.
    #[arg(long)]
    nmax: Option<usize>,

    /// Polynomial degree of the fixed-insertion fit (defaults to nmax).
    #[arg(long)]
    nfit: Option<usize>,

    /// Shots per circuit; omit for exact expectation values.
    #[arg(long)]
    shots: Option<u64>,

    /// Base seed for everything stochastic.
    #[arg(long)]
    seed: Option<u64>,

    /// Flat key = value config file; command-line flags win.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Write resulting rows to this CSV file.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Print the executed base circuit as text.
    #[arg(long)]
    dump_circuit: bool,

    /// Evolution time for trotter-sho.
    #[arg(long)]
    time: Option<f64>,

    /// Splitting steps for trotter-sho.
    #[arg(long)]
    steps: Option<usize>,

    /// Position-grid half width for trotter-sho.
    #[arg(long)]
    xmax: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a scenario circuit under noise and report the raw expectation.
    Simulate {
        #[command(flatten)]
        common: CommonOpts,

        /// Replace every CNOT by this odd number of copies.
        #[arg(long)]
        r: Option<u64>,

        /// Explicit comma-separated odd repetition counts, one per CNOT.
        #[arg(long)]
        plan: Option<String>,

        /// Sweep specification `param:v1,v2,...` with param one of
        /// r, eps, t, steps.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Fixed identity insertion with polynomial extrapolation.
    Fiim {
        #[command(flatten)]
        common: CommonOpts,

        #[arg(long)]
        sweep: Option<String>,
    },
    /// Random identity insertion via operator-set combination.
    Riim {
        #[command(flatten)]
        common: CommonOpts,

        #[arg(long)]
        sweep: Option<String>,

        /// Use Poisson-randomized plans and a linear fit instead of the
        /// combinatorial operator sets.
        #[arg(long)]
        poisson: bool,

        /// Poisson means, comma separated (with --poisson).
        #[arg(long)]
        nu: Option<String>,

        /// Random plans per Poisson mean (with --poisson).
        #[arg(long)]
        nplans: Option<usize>,
    },
    /// Print extrapolation weights and operator-set coefficients.
    Weights {
        /// Highest cancelled order.
        #[arg(long, default_value_t = 2)]
        nmax: usize,

        /// CNOT count at which the operator-set coefficients are evaluated.
        #[arg(long)]
        ncnots: Option<usize>,
    },
    /// Run a named experiment sweep and emit CSV.
    Experiment {
        /// simple-2cx, simple-4cx, trotter-sho, figure3 or figure8.
        name: String,

        #[command(flatten)]
        common: CommonOpts,

        #[arg(long)]
        method: Option<String>,

        #[arg(long)]
        sweep: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                ZneError::Config(_) | ZneError::InvalidParameter(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn build_config(common: &CommonOpts, method: Method) -> Result<ExperimentConfig, ZneError> {
    let mut config = ExperimentConfig {
        method,
        ..ExperimentConfig::default()
    };
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)?;
        config.apply_file(&text)?;
        config.method = method;
    }
    if let Some(s) = &common.scenario {
        config.scenario = Scenario::from_name(s)?;
    }
    if common.full_noise {
        config.apply_kv("noise", "full")?;
    }
    if let Some(eps) = common.eps {
        config.noise = config.noise.with_eps(eps);
    }
    if let Some(nmax) = common.nmax {
        config.n_max = nmax;
    }
    if let Some(nfit) = common.nfit {
        config.n_fit = Some(nfit);
    }
    if let Some(shots) = common.shots {
        config.n_meas = Some(shots);
    }
    if let Some(seed) = common.seed {
        config.seed = Some(seed);
    }
    if let Some(t) = common.time {
        config.time = t;
    }
    if let Some(steps) = common.steps {
        config.steps = steps;
    }
    if let Some(xmax) = common.xmax {
        config.x_max = xmax;
    }
    Ok(config)
}

fn finish(
    config: &ExperimentConfig,
    common: &CommonOpts,
    rows: Vec<ResultRow>,
) -> Result<(), ZneError> {
    if common.dump_circuit {
        let parts = scenario_parts(config.scenario, config.time, config.steps, config.x_max)?;
        let circuit = match &config.plan {
            Some(plan) => zne_core::apply_plan(&parts.circuit, plan)?,
            None => zne_core::fiim_transform(&parts.circuit, config.r)?,
        };
        print!("{}", circuit.to_text());
    }
    for row in &rows {
        println!(
            "{} {} {}={} raw={:.10} mitigated={:.10} reference={:.10} error={:.3e} stat_error={:.3e} gates={}",
            row.scenario,
            row.method,
            row.sweep_param,
            row.sweep_value,
            row.raw_value,
            row.mitigated_value,
            row.noiseless_reference,
            row.extrapolation_error,
            row.stat_error,
            row.gate_budget,
        );
    }
    if let Some(path) = &common.out {
        emit_csv(&rows, path)?;
        eprintln!("wrote {} rows to {}", rows.len(), path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), ZneError> {
    match cli.command {
        Command::Simulate { common, r, plan, sweep } => {
            let mut config = build_config(&common, Method::None)?;
            if let Some(r) = r {
                config.r = r;
            }
            if let Some(plan) = plan {
                config.plan = Some(InsertionPlan::from_text(&plan)?);
            }
            if let Some(sweep) = sweep {
                config.apply_kv("sweep", &sweep)?;
            }
            let rows = run_experiment(&config)?;
            finish(&config, &common, rows)
        }
        Command::Fiim { common, sweep } => {
            let mut config = build_config(&common, Method::Fiim)?;
            if let Some(sweep) = sweep {
                config.apply_kv("sweep", &sweep)?;
            }
            let rows = run_experiment(&config)?;
            finish(&config, &common, rows)
        }
        Command::Riim { common, sweep, poisson, nu, nplans } => {
            let method = if poisson { Method::RiimPoisson } else { Method::Riim };
            let mut config = build_config(&common, method)?;
            if let Some(nu) = nu {
                config.apply_kv("nu", &nu)?;
            }
            if let Some(nplans) = nplans {
                config.n_plans = nplans;
            }
            if let Some(sweep) = sweep {
                config.apply_kv("sweep", &sweep)?;
            }
            let rows = run_experiment(&config)?;
            finish(&config, &common, rows)
        }
        Command::Weights { nmax, ncnots } => {
            let w = richardson_weights(nmax);
            println!("combination weights over r = 1, 3, ..., {}:", 1 + 2 * nmax);
            for (n, (exact, approx)) in w.weights().iter().zip(w.as_f64()).enumerate() {
                println!("  a({n}) = {} = {approx:.12}", format_rational(exact));
            }
            if let Some(n_cnots) = ncnots {
                let set = riim_coefficients(nmax.clamp(1, 4), n_cnots)?;
                if nmax != set.n_max() {
                    println!("operator-set coefficients are tabulated for orders 1..4;");
                }
                println!(
                    "operator-set coefficients at order {} with {} CNOTs:",
                    set.n_max(),
                    n_cnots
                );
                println!("  a{{}} = {}", format_rational(set.base()));
                for (opset, coeff) in set.terms() {
                    println!("  a{} = {}", opset.label(), format_rational(coeff));
                }
            }
            Ok(())
        }
        Command::Experiment { name, common, method, sweep } => {
            match name.as_str() {
                "figure3" => {
                    let rows = figure3_sweep()?;
                    let config = build_config(&common, Method::None)?;
                    finish(&config, &common, rows)
                }
                "figure8" => {
                    let rows = figure8_sweep()?;
                    let config = build_config(&common, Method::None)?;
                    finish(&config, &common, rows)
                }
                other => {
                    let mut config = build_config(&common, Method::None)?;
                    config.scenario = Scenario::from_name(other)?;
                    if let Some(m) = method {
                        config.method = Method::from_name(&m)?;
                    }
                    if let Some(sweep) = sweep {
                        config.apply_kv("sweep", &sweep)?;
                    }
                    let rows = run_experiment(&config)?;
                    if common.out.is_none() {
                        // Keep experiment output machine readable by default.
                        print!("{}", csv_string(&rows));
                        if common.dump_circuit {
                            finish(&config, &common, Vec::new())?;
                        }
                        Ok(())
                    } else {
                        finish(&config, &common, rows)
                    }
                }
            }
        }
    }
}
