//! Declarative experiment runner: named scenarios, parameter sweeps and
//! CSV output. This is the layer behind the command-line interface.

use std::fmt;
use std::path::Path;

use crate::circuit::{
    build_double_cnot, build_four_cnot, build_state_prep, build_trotter_step,
    cancel_adjacent_cnots, cnot_count, Circuit,
};
use crate::density::{expectation, Observable};
use crate::error::{Result, ZneError};
use crate::estimators::{
    derive_stream_seed, fiim_estimate, riim_estimate, riim_poisson_estimate, MeasureMode,
    ZneEstimate,
};
use crate::grid::PositionGrid;
use crate::insertion::{apply_plan, fiim_transform, InsertionPlan};
use crate::noise::{evolve, sample_shots, NoiseModel, Relaxation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Simple2cx,
    Simple4cx,
    TrotterSho,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Simple2cx => "simple-2cx",
            Scenario::Simple4cx => "simple-4cx",
            Scenario::TrotterSho => "trotter-sho",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "simple-2cx" => Ok(Scenario::Simple2cx),
            "simple-4cx" => Ok(Scenario::Simple4cx),
            "trotter-sho" => Ok(Scenario::TrotterSho),
            other => Err(ZneError::Config(format!(
                "unknown scenario `{other}`; expected simple-2cx, simple-4cx or trotter-sho"
            ))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    Depolarizing { eps: f64 },
    Full { eps: f64, t1: f64, t2: f64, duration: f64 },
}

impl NoiseKind {
    pub fn eps(&self) -> f64 {
        match *self {
            NoiseKind::Depolarizing { eps } | NoiseKind::Full { eps, .. } => eps,
        }
    }

    pub fn with_eps(&self, eps: f64) -> NoiseKind {
        match *self {
            NoiseKind::Depolarizing { .. } => NoiseKind::Depolarizing { eps },
            NoiseKind::Full { t1, t2, duration, .. } => NoiseKind::Full { eps, t1, t2, duration },
        }
    }

    pub fn model(&self) -> Result<NoiseModel> {
        match *self {
            NoiseKind::Depolarizing { eps } => NoiseModel::depolarizing(eps),
            NoiseKind::Full { eps, t1, t2, duration } => Ok(NoiseModel::depolarizing(eps)?
                .with_relaxation(Relaxation::new(t1, t2, duration)?)),
        }
    }

    /// Relaxation stand-in values used when only `full` is requested:
    /// t1 = 50 us, t2 = 70 us, 300 ns per CNOT.
    pub fn full_default(eps: f64) -> NoiseKind {
        NoiseKind::Full {
            eps,
            t1: 50e-6,
            t2: 70e-6,
            duration: 300e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    None,
    Fiim,
    Riim,
    RiimPoisson,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::None => "none",
            Method::Fiim => "fiim",
            Method::Riim => "riim",
            Method::RiimPoisson => "riim-poisson",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "none" => Ok(Method::None),
            "fiim" => Ok(Method::Fiim),
            "riim" => Ok(Method::Riim),
            "riim-poisson" => Ok(Method::RiimPoisson),
            other => Err(ZneError::Config(format!(
                "unknown method `{other}`; expected none, fiim, riim or riim-poisson"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    R,
    Eps,
    Time,
    Steps,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::R => "r",
            SweepParam::Eps => "eps",
            SweepParam::Time => "t",
            SweepParam::Steps => "steps",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "r" => Ok(SweepParam::R),
            "eps" => Ok(SweepParam::Eps),
            "t" => Ok(SweepParam::Time),
            "steps" => Ok(SweepParam::Steps),
            other => Err(ZneError::Config(format!(
                "unknown sweep parameter `{other}`; expected r, eps, t or steps"
            ))),
        }
    }
}

/// One experiment: a scenario, a noise model, a mitigation method and an
/// optional one-parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub noise: NoiseKind,
    pub method: Method,
    pub n_max: usize,
    pub n_fit: Option<usize>,
    /// Shots per circuit; `None` means exact expectation values.
    pub n_meas: Option<u64>,
    pub seed: Option<u64>,
    pub sweep: Option<(SweepParam, Vec<f64>)>,
    /// Fixed insertion factor for unmitigated runs.
    pub r: u64,
    /// Explicit per-CNOT plan for unmitigated runs (overrides `r`).
    pub plan: Option<InsertionPlan>,
    /// Evolution time for the oscillator scenario.
    pub time: f64,
    /// Splitting steps for the oscillator scenario.
    pub steps: usize,
    pub x_max: f64,
    pub nu_values: Vec<f64>,
    pub n_plans: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: Scenario::Simple4cx,
            noise: NoiseKind::Depolarizing { eps: 0.01 },
            method: Method::None,
            n_max: 2,
            n_fit: None,
            n_meas: None,
            seed: None,
            sweep: None,
            r: 1,
            plan: None,
            time: 0.5,
            steps: 1,
            x_max: PositionGrid::default().x_max(),
            nu_values: vec![0.0, 0.25, 0.5, 1.0],
            n_plans: 1000,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_meas == Some(0) {
            return Err(ZneError::Config("shots must be at least 1".to_string()));
        }
        if self.n_meas.is_some() && self.seed.is_none() {
            return Err(ZneError::Config(
                "a seed is required when running with finite shots (--seed)".to_string(),
            ));
        }
        if self.method == Method::RiimPoisson {
            if self.seed.is_none() {
                return Err(ZneError::Config(
                    "a seed is required for riim-poisson (--seed)".to_string(),
                ));
            }
            let mut distinct = self.nu_values.clone();
            distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
            distinct.dedup();
            if distinct.len() < 2 {
                return Err(ZneError::Config(
                    "riim-poisson needs at least two distinct nu values".to_string(),
                ));
            }
        }
        if self.r == 0 || self.r % 2 == 0 {
            return Err(ZneError::Config(format!(
                "insertion factor r must be odd and positive, got {}",
                self.r
            )));
        }
        if self.plan.is_some() && self.r != 1 {
            return Err(ZneError::Config(
                "--plan and --r are mutually exclusive".to_string(),
            ));
        }
        if matches!(self.method, Method::Fiim | Method::Riim) && self.n_max == 0 {
            return Err(ZneError::Config(
                "mitigation requires n_max >= 1 (--nmax)".to_string(),
            ));
        }
        if let Some(n_fit) = self.n_fit {
            if n_fit > self.n_max {
                return Err(ZneError::Config(format!(
                    "n_fit {} must not exceed n_max {}",
                    n_fit, self.n_max
                )));
            }
        }
        if let Some((param, values)) = &self.sweep {
            if values.is_empty() {
                return Err(ZneError::Config("sweep has no values".to_string()));
            }
            match param {
                SweepParam::R => {
                    if self.method != Method::None {
                        return Err(ZneError::Config(
                            "an r sweep only makes sense without mitigation (method none)"
                                .to_string(),
                        ));
                    }
                    for &v in values {
                        if v < 1.0 || v.fract() != 0.0 || (v as u64) % 2 == 0 {
                            return Err(ZneError::Config(format!(
                                "swept r values must be odd integers, got {v}"
                            )));
                        }
                    }
                }
                SweepParam::Eps => {
                    for &v in values {
                        if !(0.0..=1.0).contains(&v) {
                            return Err(ZneError::Config(format!(
                                "swept eps values must be in [0, 1], got {v}"
                            )));
                        }
                    }
                }
                SweepParam::Time => {
                    if self.scenario != Scenario::TrotterSho {
                        return Err(ZneError::Config(
                            "a time sweep requires the trotter-sho scenario".to_string(),
                        ));
                    }
                }
                SweepParam::Steps => {
                    if self.scenario != Scenario::TrotterSho {
                        return Err(ZneError::Config(
                            "a steps sweep requires the trotter-sho scenario".to_string(),
                        ));
                    }
                    for &v in values {
                        if v < 1.0 || v.fract() != 0.0 {
                            return Err(ZneError::Config(format!(
                                "swept step counts must be positive integers, got {v}"
                            )));
                        }
                    }
                }
            }
        }
        if self.scenario == Scenario::TrotterSho {
            if self.steps == 0 {
                return Err(ZneError::Config("steps must be at least 1".to_string()));
            }
            if !(self.time.is_finite()) {
                return Err(ZneError::Config(format!(
                    "evolution time must be finite, got {}",
                    self.time
                )));
            }
        }
        Ok(())
    }

    /// Apply one `key = value` assignment (config-file line or flag).
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        let bad_num = |k: &str, v: &str| ZneError::Config(format!("bad numeric value for {k}: `{v}`"));
        match key {
            "scenario" => self.scenario = Scenario::from_name(value)?,
            "method" => self.method = Method::from_name(value)?,
            "noise" => match value {
                "depolarizing" => {
                    self.noise = NoiseKind::Depolarizing { eps: self.noise.eps() }
                }
                "full" => self.noise = NoiseKind::full_default(self.noise.eps()),
                other => {
                    return Err(ZneError::Config(format!(
                        "unknown noise kind `{other}`; expected depolarizing or full"
                    )))
                }
            },
            "eps" => {
                let eps: f64 = value.parse().map_err(|_| bad_num(key, value))?;
                self.noise = self.noise.with_eps(eps);
            }
            "t1" | "t2" | "duration" => {
                let v: f64 = value.parse().map_err(|_| bad_num(key, value))?;
                let NoiseKind::Full { eps, t1, t2, duration } =
                    (if let NoiseKind::Full { .. } = self.noise {
                        self.noise
                    } else {
                        NoiseKind::full_default(self.noise.eps())
                    })
                else {
                    unreachable!()
                };
                self.noise = match key {
                    "t1" => NoiseKind::Full { eps, t1: v, t2, duration },
                    "t2" => NoiseKind::Full { eps, t1, t2: v, duration },
                    _ => NoiseKind::Full { eps, t1, t2, duration: v },
                };
            }
            "nmax" => self.n_max = value.parse().map_err(|_| bad_num(key, value))?,
            "nfit" => self.n_fit = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "shots" => {
                self.n_meas = if value == "exact" {
                    None
                } else {
                    Some(value.parse().map_err(|_| bad_num(key, value))?)
                }
            }
            "seed" => self.seed = Some(value.parse().map_err(|_| bad_num(key, value))?),
            "r" => self.r = value.parse().map_err(|_| bad_num(key, value))?,
            "plan" => self.plan = Some(InsertionPlan::from_text(value)?),
            "time" | "t" => self.time = value.parse().map_err(|_| bad_num(key, value))?,
            "steps" => self.steps = value.parse().map_err(|_| bad_num(key, value))?,
            "xmax" => self.x_max = value.parse().map_err(|_| bad_num(key, value))?,
            "nplans" => self.n_plans = value.parse().map_err(|_| bad_num(key, value))?,
            "nu" => {
                self.nu_values = value
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|_| bad_num("nu", s)))
                    .collect::<Result<Vec<_>>>()?;
            }
            "sweep" => {
                let (param, values) = value.split_once(':').ok_or_else(|| {
                    ZneError::Config(format!(
                        "sweep must look like `param:v1,v2,...`, got `{value}`"
                    ))
                })?;
                let param = SweepParam::from_name(param.trim())?;
                let values = values
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|_| bad_num("sweep", s)))
                    .collect::<Result<Vec<_>>>()?;
                self.sweep = Some((param, values));
            }
            other => {
                return Err(ZneError::Config(format!("unknown configuration key `{other}`")))
            }
        }
        Ok(())
    }

    /// Parse a flat key-value config file (`key = value`, `#` comments).
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ZneError::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            self.apply_kv(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

/// Circuit, initial state and observable of one scenario instance.
pub struct ScenarioParts {
    pub circuit: Circuit,
    pub init: usize,
    pub observable: Observable,
}

/// Build the scenario circuit for the given time/step/grid settings.
pub fn scenario_parts(
    scenario: Scenario,
    time: f64,
    steps: usize,
    x_max: f64,
) -> Result<ScenarioParts> {
    match scenario {
        Scenario::Simple2cx => Ok(ScenarioParts {
            circuit: build_double_cnot(),
            init: 0b00,
            observable: Observable::qubit_sum(2),
        }),
        Scenario::Simple4cx => Ok(ScenarioParts {
            circuit: build_four_cnot(),
            init: 0b10,
            observable: Observable::integer_value(2),
        }),
        Scenario::TrotterSho => {
            let grid = PositionGrid::new(2, x_max)?;
            let prep = build_state_prep(&grid)?;
            let mut circuit = prep.clone();
            let dt = time / steps as f64;
            let step = build_trotter_step(dt, &grid)?;
            for _ in 0..steps {
                circuit.extend(&step)?;
            }
            circuit.extend(&prep.adjoint())?;
            Ok(ScenarioParts {
                circuit: cancel_adjacent_cnots(&circuit),
                init: 0b00,
                observable: Observable::zeros_projector(2),
            })
        }
    }
}

/// One emitted data point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scenario: String,
    pub method: String,
    pub sweep_param: String,
    pub sweep_value: f64,
    pub raw_value: f64,
    pub mitigated_value: f64,
    pub noiseless_reference: f64,
    pub extrapolation_error: f64,
    pub stat_error: f64,
    pub gate_budget: u64,
}

/// Run the configured sweep, one row per sweep point, deterministic for a
/// fixed (config, seed) pair. Sweep points get independent derived seeds.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let points: Vec<(String, f64)> = match &config.sweep {
        None => vec![("none".to_string(), 0.0)],
        Some((param, values)) => values
            .iter()
            .map(|&v| (param.name().to_string(), v))
            .collect(),
    };

    let mut rows = Vec::with_capacity(points.len());
    for (index, (param_name, value)) in points.iter().enumerate() {
        let mut point = config.clone();
        if let Some((param, _)) = &config.sweep {
            match param {
                SweepParam::R => point.r = *value as u64,
                SweepParam::Eps => point.noise = config.noise.with_eps(*value),
                SweepParam::Time => point.time = *value,
                SweepParam::Steps => point.steps = *value as usize,
            }
        }
        let point_seed = config.seed.map(|s| derive_stream_seed(s, index as u64));
        rows.push(run_point(&point, param_name, *value, point_seed)?);
    }
    Ok(rows)
}

fn run_point(
    config: &ExperimentConfig,
    sweep_param: &str,
    sweep_value: f64,
    seed: Option<u64>,
) -> Result<ResultRow> {
    let parts = scenario_parts(config.scenario, config.time, config.steps, config.x_max)?;
    let noise = config.noise.model()?;
    let mode = match config.n_meas {
        None => MeasureMode::Exact,
        Some(n_meas) => MeasureMode::Sampled {
            seed: seed.expect("validated: seed required with finite shots"),
            n_meas,
        },
    };

    let noiseless = evolve(&parts.circuit, parts.init, &NoiseModel::noiseless())?;
    let reference = expectation(&noiseless, &parts.observable)?;

    // Unmitigated measurement of the (possibly insertion-scaled) circuit.
    let raw_circuit = match &config.plan {
        Some(plan) => apply_plan(&parts.circuit, plan)?,
        None => fiim_transform(&parts.circuit, config.r)?,
    };
    let raw_rho = evolve(&raw_circuit, parts.init, &noise)?;
    let (raw_value, raw_se) = match mode {
        MeasureMode::Exact => (expectation(&raw_rho, &parts.observable)?, 0.0),
        MeasureMode::Sampled { seed, n_meas } => {
            let stats = sample_shots(&raw_rho, &parts.observable, n_meas, seed)?;
            (stats.mean, stats.std_error)
        }
    };

    let estimate: Option<ZneEstimate> = match config.method {
        Method::None => None,
        Method::Fiim => Some(fiim_estimate(
            &parts.circuit,
            parts.init,
            &parts.observable,
            &noise,
            config.n_max,
            config.n_fit.unwrap_or(config.n_max),
            mode,
        )?),
        Method::Riim => Some(riim_estimate(
            &parts.circuit,
            parts.init,
            &parts.observable,
            &noise,
            config.n_max,
            mode,
        )?),
        Method::RiimPoisson => Some(riim_poisson_estimate(
            &parts.circuit,
            parts.init,
            &parts.observable,
            &noise,
            &config.nu_values,
            config.n_plans,
            seed.expect("validated: seed required for riim-poisson"),
        )?),
    };

    let (mitigated_value, stat_error, gate_budget) = match &estimate {
        Some(e) => (e.value, e.stat_error, e.gate_budget),
        None => (raw_value, raw_se, cnot_count(&raw_circuit) as u64),
    };

    Ok(ResultRow {
        scenario: config.scenario.name().to_string(),
        method: config.method.name().to_string(),
        sweep_param: sweep_param.to_string(),
        sweep_value,
        raw_value,
        mitigated_value,
        noiseless_reference: reference,
        extrapolation_error: (mitigated_value - reference).abs(),
        stat_error,
        gate_budget,
    })
}

/// Exact-simulation comparison of both mitigation methods on the four-CNOT
/// circuit: one row per (method, order) with its error and gate budget.
pub fn figure3_sweep() -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for order in 1..=4usize {
        for method in [Method::Fiim, Method::Riim] {
            let config = ExperimentConfig {
                scenario: Scenario::Simple4cx,
                method,
                n_max: order,
                ..ExperimentConfig::default()
            };
            let mut row = run_point(&config, "order", order as f64, None)?;
            row.sweep_param = "order".to_string();
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Oscillator-circuit comparison: linear fixed-insertion extrapolation at
/// orders 1..4 against the order-2 operator-set estimate, for one and two
/// splitting steps under depolarizing noise. The fixed-insertion fits are
/// linear; on circuits this deep the wide `r` range they require is exactly
/// what pushes them out of the linear regime.
pub fn figure8_sweep() -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    for steps in [1usize, 2] {
        for order in 1..=4usize {
            let config = ExperimentConfig {
                scenario: Scenario::TrotterSho,
                method: Method::Fiim,
                n_max: order,
                n_fit: Some(1),
                steps,
                ..ExperimentConfig::default()
            };
            let mut row = run_point(&config, "nmax", order as f64, None)?;
            row.scenario = format!("trotter-sho-{steps}step");
            rows.push(row);
        }
        let config = ExperimentConfig {
            scenario: Scenario::TrotterSho,
            method: Method::Riim,
            n_max: 2,
            steps,
            ..ExperimentConfig::default()
        };
        let mut row = run_point(&config, "nmax", 2.0, None)?;
        row.scenario = format!("trotter-sho-{steps}step");
        rows.push(row);
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "scenario,method,sweep_param,sweep_value,raw_value,mitigated_value,noiseless_reference,extrapolation_error,stat_error,gate_budget";

/// Format with 17 significant digits, enough to reproduce the exact binary
/// value on parse.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render rows as CSV (header plus one line per row).
pub fn csv_string(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            csv_field(&r.scenario),
            csv_field(&r.method),
            csv_field(&r.sweep_param),
            fmt_float(r.sweep_value),
            fmt_float(r.raw_value),
            fmt_float(r.mitigated_value),
            fmt_float(r.noiseless_reference),
            fmt_float(r.extrapolation_error),
            fmt_float(r.stat_error),
            r.gate_budget,
        ));
    }
    out
}

/// Write rows to a CSV file.
pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(rows))?;
    Ok(())
}

/// Parse a CSV produced by [`csv_string`] back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| ZneError::Config("empty CSV".to_string()))?;
    if header != CSV_HEADER {
        return Err(ZneError::Config(format!("unexpected CSV header `{header}`")));
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields = split_csv_line(line);
        if fields.len() != 10 {
            return Err(ZneError::Config(format!(
                "line {}: expected 10 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let num = |i: usize| -> Result<f64> {
            fields[i]
                .parse::<f64>()
                .map_err(|_| ZneError::Config(format!("line {}: bad float `{}`", lineno + 2, fields[i])))
        };
        rows.push(ResultRow {
            scenario: fields[0].clone(),
            method: fields[1].clone(),
            sweep_param: fields[2].clone(),
            sweep_value: num(3)?,
            raw_value: num(4)?,
            mitigated_value: num(5)?,
            noiseless_reference: num(6)?,
            extrapolation_error: num(7)?,
            stat_error: num(8)?,
            gate_budget: fields[9].parse::<u64>().map_err(|_| {
                ZneError::Config(format!("line {}: bad gate budget `{}`", lineno + 2, fields[9]))
            })?,
        });
    }
    Ok(rows)
}

fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    field.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' => quoted = true,
            ',' if !quoted => {
                fields.push(std::mem::take(&mut field));
            }
            c => field.push(c),
        }
    }
    fields.push(field);
    fields
}
