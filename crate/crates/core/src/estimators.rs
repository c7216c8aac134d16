//! Mitigated estimators: fixed-insertion extrapolation, operator-set
//! combinations and the Poisson-randomized linear fit.

use crate::circuit::{cnot_count, Circuit};
use crate::density::{expectation, Observable};
use crate::error::{Result, ZneError};
use crate::extrapolation::{poly_extrapolation_weights, riim_coefficients, RiimCoefficientSet};
use crate::insertion::{
    apply_plan, enumerate_placements, fiim_transform, plan_gate_count, riim_random_plan,
    sample_placement, InsertionPlan,
};
use crate::noise::{evolve, sample_shots, NoiseModel};
use num_traits::ToPrimitive;

/// How expectation values are obtained: exactly from the final state, or
/// from a finite number of seeded measurement shots per circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureMode {
    Exact,
    Sampled { seed: u64, n_meas: u64 },
}

/// A mitigated expectation value with the combination weights that produced
/// it, the propagated shot-noise uncertainty and the largest CNOT count among
/// the executed circuits.
#[derive(Debug, Clone, PartialEq)]
pub struct ZneEstimate {
    pub value: f64,
    pub weights: Vec<f64>,
    pub stat_error: f64,
    pub gate_budget: u64,
}

/// splitmix64; used to derive independent per-stream seeds from one base
/// seed so results do not depend on execution order.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_stream_seed(seed: u64, stream: u64) -> u64 {
    seed ^ splitmix64(stream)
}

/// Measure one circuit: exact expectation or seeded shots.
fn measure(
    circuit: &Circuit,
    init: usize,
    obs: &Observable,
    noise: &NoiseModel,
    mode: MeasureMode,
    stream: u64,
) -> Result<(f64, f64)> {
    let rho = evolve(circuit, init, noise)?;
    match mode {
        MeasureMode::Exact => Ok((expectation(&rho, obs)?, 0.0)),
        MeasureMode::Sampled { seed, n_meas } => {
            let stats = sample_shots(&rho, obs, n_meas, derive_stream_seed(seed, stream))?;
            Ok((stats.mean, stats.std_error))
        }
    }
}

/// Fixed-insertion estimate: measure at `r = 1, 3, ..., 1+2*n_max`, fit a
/// degree-`n_fit` polynomial in `n` and evaluate it at the zero-noise point
/// `n = -1/2`. The largest executed circuit has `(1+2*n_max) * N_c` CNOTs.
pub fn fiim_estimate(
    circuit: &Circuit,
    init: usize,
    obs: &Observable,
    noise: &NoiseModel,
    n_max: usize,
    n_fit: usize,
    mode: MeasureMode,
) -> Result<ZneEstimate> {
    if n_fit > n_max {
        return Err(ZneError::InvalidParameter(format!(
            "fit degree {n_fit} exceeds n_max {n_max}"
        )));
    }
    let n_cnots = cnot_count(circuit) as u64;
    let mut values = Vec::with_capacity(n_max + 1);
    let mut errors = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let r = 1 + 2 * n as u64;
        let scaled = fiim_transform(circuit, r)?;
        let (y, se) = measure(&scaled, init, obs, noise, mode, n as u64)?;
        values.push(y);
        errors.push(se);
    }
    let ns: Vec<i64> = (0..=n_max as i64).collect();
    let weights: Vec<f64> = poly_extrapolation_weights(&ns, n_fit)?
        .iter()
        .map(|w| w.to_f64().expect("weight out of range"))
        .collect();
    let value = weights.iter().zip(&values).map(|(w, y)| w * y).sum();
    let stat_error = weights
        .iter()
        .zip(&errors)
        .map(|(w, se)| (w * se).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(ZneEstimate {
        value,
        weights,
        stat_error,
        gate_budget: (1 + 2 * n_max as u64) * n_cnots,
    })
}

/// Operator-set estimate of order `n_max`: the weighted combination of the
/// baseline circuit and the placement sums of every excess multiset, using
/// at most `N_c + 2*n_max` CNOTs per executed circuit.
///
/// In exact mode each placement sum runs all placements; in sampled mode it
/// draws as many uniform placements as there are distinct ones, which leaves
/// the combination unbiased with the same per-term sample weight.
pub fn riim_estimate(
    circuit: &Circuit,
    init: usize,
    obs: &Observable,
    noise: &NoiseModel,
    n_max: usize,
    mode: MeasureMode,
) -> Result<ZneEstimate> {
    let n_cnots = cnot_count(circuit);
    let coeffs: RiimCoefficientSet = riim_coefficients(n_max, n_cnots)?;

    let mut stream = 0u64;
    let (base_val, base_se) = measure(circuit, init, obs, noise, mode, stream)?;
    stream += 1;

    let mut value = coeffs.base_f64() * base_val;
    let mut variance = (coeffs.base_f64() * base_se).powi(2);

    for (opset, coeff) in coeffs.terms_f64() {
        if coeff == 0.0 {
            continue;
        }
        let mut term_sum = 0.0;
        let mut term_var = 0.0;
        match mode {
            MeasureMode::Exact => {
                for plan in enumerate_placements(n_cnots, &opset)? {
                    let scaled = apply_plan(circuit, &plan)?;
                    let (y, _) = measure(&scaled, init, obs, noise, mode, stream)?;
                    stream += 1;
                    term_sum += y;
                }
            }
            MeasureMode::Sampled { seed, .. } => {
                let draws = opset.placement_count(n_cnots)? as u64;
                for d in 0..draws {
                    let plan = sample_placement(
                        n_cnots,
                        &opset,
                        derive_stream_seed(seed, (stream << 16) | d),
                    )?;
                    let scaled = apply_plan(circuit, &plan)?;
                    let (y, se) = measure(&scaled, init, obs, noise, mode, stream)?;
                    stream += 1;
                    term_sum += y;
                    term_var += se * se;
                }
            }
        }
        value += coeff * term_sum;
        variance += coeff * coeff * term_var;
    }

    Ok(ZneEstimate {
        value,
        weights: coeffs.flat_weights(),
        stat_error: variance.sqrt(),
        gate_budget: n_cnots as u64 + 2 * n_max as u64,
    })
}

/// Per-noise-level summary of a Poisson-randomized run.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonPoint {
    pub nu: f64,
    /// Fit abscissa `rho = 1 + 2*nu`.
    pub rho: f64,
    pub mean: f64,
    pub std_error: f64,
}

/// Ordinary-least-squares line through the per-level means, with standard
/// errors propagated from the per-level plan scatter.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonStudy {
    pub points: Vec<PoissonPoint>,
    pub intercept: f64,
    pub slope: f64,
    pub intercept_std_error: f64,
    pub slope_std_error: f64,
    pub intercept_weights: Vec<f64>,
    pub slope_weights: Vec<f64>,
    pub gate_budget: u64,
}

/// Average the exact expectation over `n_plans` random plans per Poisson
/// mean, then fit a line in `rho = 1+2*nu` and extrapolate to `rho = 0`.
pub fn riim_poisson_study(
    circuit: &Circuit,
    init: usize,
    obs: &Observable,
    noise: &NoiseModel,
    nu_values: &[f64],
    n_plans: usize,
    seed: u64,
) -> Result<PoissonStudy> {
    let mut distinct = nu_values.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(ZneError::InvalidParameter(
            "need at least two distinct Poisson means".to_string(),
        ));
    }
    if n_plans == 0 {
        return Err(ZneError::InvalidParameter(
            "need at least one plan draw per level".to_string(),
        ));
    }
    let n_cnots = cnot_count(circuit);
    let mut points = Vec::with_capacity(nu_values.len());
    let mut gate_budget = 0u64;
    for (level, &nu) in nu_values.iter().enumerate() {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for p in 0..n_plans {
            let plan_seed = derive_stream_seed(seed, ((level as u64) << 32) | p as u64);
            let plan: InsertionPlan = riim_random_plan(n_cnots, nu, plan_seed)?;
            gate_budget = gate_budget.max(plan_gate_count(&plan));
            let scaled = apply_plan(circuit, &plan)?;
            let rho = evolve(&scaled, init, noise)?;
            let y = expectation(&rho, obs)?;
            sum += y;
            sum_sq += y * y;
        }
        let n = n_plans as f64;
        let mean = sum / n;
        let var = if n_plans > 1 {
            ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        points.push(PoissonPoint {
            nu,
            rho: 1.0 + 2.0 * nu,
            mean,
            std_error: (var / n).sqrt(),
        });
    }

    let xs: Vec<f64> = points.iter().map(|p| p.rho).collect();
    let m = xs.len() as f64;
    let x_bar = xs.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - x_bar).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ZneError::SingularFit(
            "all Poisson means coincide".to_string(),
        ));
    }
    let slope_weights: Vec<f64> = xs.iter().map(|x| (x - x_bar) / sxx).collect();
    let intercept_weights: Vec<f64> = xs
        .iter()
        .map(|x| 1.0 / m - x_bar * (x - x_bar) / sxx)
        .collect();
    let slope = slope_weights
        .iter()
        .zip(&points)
        .map(|(g, p)| g * p.mean)
        .sum();
    let intercept = intercept_weights
        .iter()
        .zip(&points)
        .map(|(h, p)| h * p.mean)
        .sum();
    let slope_std_error = slope_weights
        .iter()
        .zip(&points)
        .map(|(g, p)| (g * p.std_error).powi(2))
        .sum::<f64>()
        .sqrt();
    let intercept_std_error = intercept_weights
        .iter()
        .zip(&points)
        .map(|(h, p)| (h * p.std_error).powi(2))
        .sum::<f64>()
        .sqrt();

    Ok(PoissonStudy {
        points,
        intercept,
        slope,
        intercept_std_error,
        slope_std_error,
        intercept_weights,
        slope_weights,
        gate_budget,
    })
}

/// Poisson-randomized estimate: linear fit over `rho = 1+2*nu` extrapolated
/// to `rho = 0`.
pub fn riim_poisson_estimate(
    circuit: &Circuit,
    init: usize,
    obs: &Observable,
    noise: &NoiseModel,
    nu_values: &[f64],
    n_plans: usize,
    seed: u64,
) -> Result<ZneEstimate> {
    let study = riim_poisson_study(circuit, init, obs, noise, nu_values, n_plans, seed)?;
    Ok(ZneEstimate {
        value: study.intercept,
        weights: study.intercept_weights.clone(),
        stat_error: study.intercept_std_error,
        gate_budget: study.gate_budget,
    })
}

/// Slope of the expectation value in the insertion multiplier at leading
/// order in the channel strength: the sum over CNOTs of `eps` times the gap
/// between the value with that CNOT fully depolarized and the noiseless
/// value. Serves as the analytic reference for the Poisson fit's slope.
pub fn depolarizing_linear_coefficient(
    circuit: &Circuit,
    init: usize,
    obs: &Observable,
    eps: f64,
) -> Result<f64> {
    let noiseless = NoiseModel::noiseless();
    let rho_ex = evolve(circuit, init, &noiseless)?;
    let m_ex = expectation(&rho_ex, obs)?;
    let full_twirl = crate::noise::PauliNoiseSpec::new([[1.0; 4]; 4])?;
    let mut coeff = 0.0;
    for i in 0..cnot_count(circuit) {
        let model = NoiseModel::noiseless().with_cnot_override(i, full_twirl.clone());
        let rho_dep = evolve(circuit, init, &model)?;
        coeff += eps * (expectation(&rho_dep, obs)? - m_ex);
    }
    Ok(coeff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_double_cnot, build_four_cnot};

    #[test]
    fn exact_fiim_estimate_is_noiseless_at_zero_eps() {
        let circuit = build_four_cnot();
        let obs = Observable::integer_value(2);
        let est = fiim_estimate(
            &circuit,
            2,
            &obs,
            &NoiseModel::noiseless(),
            2,
            2,
            MeasureMode::Exact,
        )
        .unwrap();
        assert!((est.value - 3.0).abs() < 1e-12);
        assert_eq!(est.gate_budget, 20);
        assert_eq!(est.stat_error, 0.0);
    }

    #[test]
    fn exact_riim_estimate_is_noiseless_at_zero_eps() {
        let circuit = build_four_cnot();
        let obs = Observable::integer_value(2);
        let est = riim_estimate(
            &circuit,
            2,
            &obs,
            &NoiseModel::noiseless(),
            2,
            MeasureMode::Exact,
        )
        .unwrap();
        assert!((est.value - 3.0).abs() < 1e-12);
        assert_eq!(est.gate_budget, 8);
    }

    #[test]
    fn fiim_rejects_overlong_fit_degree() {
        let circuit = build_double_cnot();
        let obs = Observable::qubit_sum(2);
        assert!(fiim_estimate(
            &circuit,
            0,
            &obs,
            &NoiseModel::noiseless(),
            1,
            2,
            MeasureMode::Exact
        )
        .is_err());
    }

    #[test]
    fn poisson_study_needs_two_levels() {
        let circuit = build_double_cnot();
        let obs = Observable::qubit_sum(2);
        let noise = NoiseModel::depolarizing(0.01).unwrap();
        assert!(riim_poisson_study(&circuit, 0, &obs, &noise, &[0.5, 0.5], 10, 1).is_err());
        assert!(riim_poisson_study(&circuit, 0, &obs, &noise, &[0.0, 0.5], 0, 1).is_err());
    }

    #[test]
    fn poisson_estimate_recovers_noiseless_value_without_noise() {
        let circuit = build_double_cnot();
        let obs = Observable::qubit_sum(2);
        let est = riim_poisson_estimate(
            &circuit,
            0,
            &obs,
            &NoiseModel::noiseless(),
            &[0.0, 0.5],
            50,
            7,
        )
        .unwrap();
        assert!(est.value.abs() < 1e-12);
    }

    #[test]
    fn linear_coefficient_of_double_cnot_qubit_sum() {
        // Both fully depolarized branches sit at the maximally mixed value 1,
        // the noiseless value is 0, so the coefficient is 2*eps.
        let circuit = build_double_cnot();
        let obs = Observable::qubit_sum(2);
        let c = depolarizing_linear_coefficient(&circuit, 0, &obs, 0.01).unwrap();
        assert!((c - 0.02).abs() < 1e-12);
    }

    #[test]
    fn stream_seeds_differ() {
        assert_ne!(derive_stream_seed(1, 0), derive_stream_seed(1, 1));
        assert_ne!(derive_stream_seed(1, 0), derive_stream_seed(2, 0));
    }
}
