//! C ABI over the simulator and the mitigation estimators. Handles are
//! opaque pointers owned by this library; every fallible call returns a
//! status code and writes its result through an out-pointer.
//!
//! The generated header lives at `include/zne.h`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zne_core::circuit::{build_state_prep, build_trotter_step, cancel_adjacent_cnots};
use zne_core::estimators::MeasureMode;
use zne_core::{
    apply_plan, cnot_count, evolve, expectation, fiim_estimate, fiim_transform,
    riim_estimate, riim_poisson_estimate, richardson_weights, sample_shots, Circuit,
    InsertionPlan, NoiseModel, Observable, PositionGrid, Relaxation, ZneError,
};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZneStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was out of range or inconsistent.
    InvalidArgument = 2,
    /// The noise channel is not a valid probability assignment.
    InvalidChannel = 3,
    /// Text input could not be parsed.
    ParseError = 4,
    /// The fit system is singular.
    SingularFit = 5,
    /// An unexpected internal failure.
    Internal = 6,
}

fn status_of(err: &ZneError) -> ZneStatus {
    match err {
        ZneError::InvalidChannel(_) | ZneError::InvalidRelaxation(_) => ZneStatus::InvalidChannel,
        ZneError::CircuitParse(_) => ZneStatus::ParseError,
        ZneError::SingularFit(_) => ZneStatus::SingularFit,
        ZneError::Io(_) => ZneStatus::Internal,
        _ => ZneStatus::InvalidArgument,
    }
}

/// Opaque circuit handle.
pub struct ZneCircuit(Circuit);

/// Opaque noise-model handle.
pub struct ZneNoiseModel(NoiseModel);

/// Observable selector for the measurement entry points.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZneObservable {
    /// Number of qubits measured in state 1.
    QubitSum = 0,
    /// Bitstring read as an unsigned integer.
    IntegerValue = 1,
    /// Projector onto the all-zeros bitstring.
    ZerosProjector = 2,
}

/// Mitigated estimate: value, propagated shot noise and the largest CNOT
/// count among the executed circuits.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZneEstimate {
    pub value: f64,
    pub stat_error: f64,
    pub gate_budget: u64,
}

fn observable_for(kind: ZneObservable, num_qubits: usize) -> Observable {
    match kind {
        ZneObservable::QubitSum => Observable::qubit_sum(num_qubits),
        ZneObservable::IntegerValue => Observable::integer_value(num_qubits),
        ZneObservable::ZerosProjector => Observable::zeros_projector(num_qubits),
    }
}

fn mode_for(n_meas: u64, seed: u64) -> MeasureMode {
    if n_meas == 0 {
        MeasureMode::Exact
    } else {
        MeasureMode::Sampled { seed, n_meas }
    }
}

unsafe fn write_circuit(
    out: *mut *mut ZneCircuit,
    result: Result<Circuit, ZneError>,
) -> ZneStatus {
    if out.is_null() {
        return ZneStatus::NullPointer;
    }
    match result {
        Ok(circuit) => {
            *out = Box::into_raw(Box::new(ZneCircuit(circuit)));
            ZneStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            status_of(&e)
        }
    }
}

/// Two-CNOT benchmark circuit; intended initial state `|00>`.
#[no_mangle]
pub extern "C" fn zne_circuit_double_cnot() -> *mut ZneCircuit {
    Box::into_raw(Box::new(ZneCircuit(zne_core::build_double_cnot())))
}

/// Four-CNOT benchmark circuit; intended initial state `|10>`.
#[no_mangle]
pub extern "C" fn zne_circuit_four_cnot() -> *mut ZneCircuit {
    Box::into_raw(Box::new(ZneCircuit(zne_core::build_four_cnot())))
}

/// Quantum Fourier transform over `num_qubits` qubits.
///
/// # Safety
/// `out` must be a valid pointer to a circuit-handle slot.
#[no_mangle]
pub unsafe extern "C" fn zne_circuit_qft(
    num_qubits: usize,
    out: *mut *mut ZneCircuit,
) -> ZneStatus {
    write_circuit(out, zne_core::build_qft(num_qubits))
}

/// Oscillator evolution circuit: Gaussian preparation, `steps` splitting
/// steps covering total time `time` on a grid of half-width `x_max`, then
/// the inverse preparation, with adjacent CNOT pairs cancelled.
///
/// # Safety
/// `out` must be a valid pointer to a circuit-handle slot.
#[no_mangle]
pub unsafe extern "C" fn zne_circuit_oscillator(
    time: f64,
    steps: usize,
    x_max: f64,
    out: *mut *mut ZneCircuit,
) -> ZneStatus {
    let build = || -> Result<Circuit, ZneError> {
        if steps == 0 {
            return Err(ZneError::InvalidParameter(
                "steps must be at least 1".to_string(),
            ));
        }
        let grid = PositionGrid::new(2, x_max)?;
        let prep = build_state_prep(&grid)?;
        let mut circuit = prep.clone();
        let step = build_trotter_step(time / steps as f64, &grid)?;
        for _ in 0..steps {
            circuit.extend(&step)?;
        }
        circuit.extend(&prep.adjoint())?;
        Ok(cancel_adjacent_cnots(&circuit))
    };
    write_circuit(out, build())
}

/// Parse a circuit from its line-oriented text form.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn zne_circuit_from_text(
    text: *const c_char,
    out: *mut *mut ZneCircuit,
) -> ZneStatus {
    if text.is_null() {
        return ZneStatus::NullPointer;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return ZneStatus::ParseError;
    };
    write_circuit(out, Circuit::from_text(text))
}

/// Render the circuit as text; free the result with [`zne_string_free`].
/// Returns null on a null handle.
///
/// # Safety
/// `circuit` must be a live handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn zne_circuit_to_text(circuit: *const ZneCircuit) -> *mut c_char {
    if circuit.is_null() {
        return ptr::null_mut();
    }
    match CString::new((*circuit).0.to_text()) {
        Ok(s) => s.into_raw(),
        Err(_) => ptr::null_mut(),
    }
}

/// Free a string returned by this library.
///
/// # Safety
/// `text` must have been returned by [`zne_circuit_to_text`] and not yet
/// freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn zne_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Number of CNOT gates; 0 for a null handle.
///
/// # Safety
/// `circuit` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn zne_circuit_cnot_count(circuit: *const ZneCircuit) -> usize {
    if circuit.is_null() {
        0
    } else {
        cnot_count(&(*circuit).0)
    }
}

/// Register size; 0 for a null handle.
///
/// # Safety
/// `circuit` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn zne_circuit_num_qubits(circuit: *const ZneCircuit) -> usize {
    if circuit.is_null() {
        0
    } else {
        (*circuit).0.num_qubits()
    }
}

/// Replace every CNOT by `r` consecutive copies (`r` odd).
///
/// # Safety
/// `circuit` must be a live handle; `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn zne_circuit_fiim(
    circuit: *const ZneCircuit,
    r: u64,
    out: *mut *mut ZneCircuit,
) -> ZneStatus {
    if circuit.is_null() {
        return ZneStatus::NullPointer;
    }
    write_circuit(out, fiim_transform(&(*circuit).0, r))
}

/// Replace the i-th CNOT by `reps[i]` copies (all odd, one per CNOT).
///
/// # Safety
/// `circuit` must be a live handle, `reps` must point to `len` readable
/// values, and `out` must be a valid slot.
#[no_mangle]
pub unsafe extern "C" fn zne_circuit_apply_plan(
    circuit: *const ZneCircuit,
    reps: *const u64,
    len: usize,
    out: *mut *mut ZneCircuit,
) -> ZneStatus {
    if circuit.is_null() || (reps.is_null() && len > 0) {
        return ZneStatus::NullPointer;
    }
    let reps = std::slice::from_raw_parts(reps, len).to_vec();
    let build = InsertionPlan::new(reps).and_then(|plan| apply_plan(&(*circuit).0, &plan));
    write_circuit(out, build)
}

/// Release a circuit handle; null is ignored.
///
/// # Safety
/// `circuit` must be a handle from this library, not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn zne_circuit_free(circuit: *mut ZneCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Noise-free model.
#[no_mangle]
pub extern "C" fn zne_noise_none() -> *mut ZneNoiseModel {
    Box::into_raw(Box::new(ZneNoiseModel(NoiseModel::noiseless())))
}

/// Depolarizing CNOT noise of strength `eps`.
///
/// # Safety
/// `out` must be a valid pointer to a noise-handle slot.
#[no_mangle]
pub unsafe extern "C" fn zne_noise_depolarizing(
    eps: f64,
    out: *mut *mut ZneNoiseModel,
) -> ZneStatus {
    if out.is_null() {
        return ZneStatus::NullPointer;
    }
    match NoiseModel::depolarizing(eps) {
        Ok(model) => {
            *out = Box::into_raw(Box::new(ZneNoiseModel(model)));
            ZneStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            status_of(&e)
        }
    }
}

/// Depolarizing noise plus per-CNOT thermal relaxation.
///
/// # Safety
/// `out` must be a valid pointer to a noise-handle slot.
#[no_mangle]
pub unsafe extern "C" fn zne_noise_full(
    eps: f64,
    t1: f64,
    t2: f64,
    gate_duration: f64,
    out: *mut *mut ZneNoiseModel,
) -> ZneStatus {
    if out.is_null() {
        return ZneStatus::NullPointer;
    }
    let build = || -> Result<NoiseModel, ZneError> {
        Ok(NoiseModel::depolarizing(eps)?
            .with_relaxation(Relaxation::new(t1, t2, gate_duration)?))
    };
    match build() {
        Ok(model) => {
            *out = Box::into_raw(Box::new(ZneNoiseModel(model)));
            ZneStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            status_of(&e)
        }
    }
}

/// Release a noise handle; null is ignored.
///
/// # Safety
/// `noise` must be a handle from this library, not yet freed, or null.
#[no_mangle]
pub unsafe extern "C" fn zne_noise_free(noise: *mut ZneNoiseModel) {
    if !noise.is_null() {
        drop(Box::from_raw(noise));
    }
}

/// Exact expectation value of the observable after evolving `|init>`.
///
/// # Safety
/// `circuit` and `noise` must be live handles; `out` a valid double slot.
#[no_mangle]
pub unsafe extern "C" fn zne_expectation(
    circuit: *const ZneCircuit,
    init: usize,
    observable: ZneObservable,
    noise: *const ZneNoiseModel,
    out: *mut f64,
) -> ZneStatus {
    if circuit.is_null() || noise.is_null() || out.is_null() {
        return ZneStatus::NullPointer;
    }
    let circuit = &(*circuit).0;
    let obs = observable_for(observable, circuit.num_qubits());
    match evolve(circuit, init, &(*noise).0).and_then(|rho| expectation(&rho, &obs)) {
        Ok(v) => {
            *out = v;
            ZneStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Seeded finite-shot measurement: sample mean and its standard error.
///
/// # Safety
/// `circuit` and `noise` must be live handles; both out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn zne_sample_shots(
    circuit: *const ZneCircuit,
    init: usize,
    observable: ZneObservable,
    noise: *const ZneNoiseModel,
    n_meas: u64,
    seed: u64,
    out_mean: *mut f64,
    out_std_error: *mut f64,
) -> ZneStatus {
    if circuit.is_null() || noise.is_null() || out_mean.is_null() || out_std_error.is_null() {
        return ZneStatus::NullPointer;
    }
    let circuit = &(*circuit).0;
    let obs = observable_for(observable, circuit.num_qubits());
    match evolve(circuit, init, &(*noise).0)
        .and_then(|rho| sample_shots(&rho, &obs, n_meas, seed))
    {
        Ok(stats) => {
            *out_mean = stats.mean;
            *out_std_error = stats.std_error;
            ZneStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Fixed-insertion estimate extrapolated to zero noise. `n_meas = 0` runs
/// exact expectation values; otherwise each circuit is measured with
/// `n_meas` seeded shots.
///
/// # Safety
/// `circuit` and `noise` must be live handles; `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn zne_fiim_estimate(
    circuit: *const ZneCircuit,
    init: usize,
    observable: ZneObservable,
    noise: *const ZneNoiseModel,
    n_max: usize,
    n_fit: usize,
    n_meas: u64,
    seed: u64,
    out: *mut ZneEstimate,
) -> ZneStatus {
    if circuit.is_null() || noise.is_null() || out.is_null() {
        return ZneStatus::NullPointer;
    }
    let circuit = &(*circuit).0;
    let obs = observable_for(observable, circuit.num_qubits());
    let model = &(*noise).0;
    let result = catch_unwind(AssertUnwindSafe(|| {
        fiim_estimate(circuit, init, &obs, model, n_max, n_fit, mode_for(n_meas, seed))
    }));
    match result {
        Ok(Ok(est)) => {
            *out = ZneEstimate {
                value: est.value,
                stat_error: est.stat_error,
                gate_budget: est.gate_budget,
            };
            ZneStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => ZneStatus::Internal,
    }
}

/// Operator-set estimate of order `n_max` (1 to 4). `n_meas = 0` runs the
/// exact placement enumeration; otherwise placements and shots are sampled
/// with the given seed.
///
/// # Safety
/// `circuit` and `noise` must be live handles; `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn zne_riim_estimate(
    circuit: *const ZneCircuit,
    init: usize,
    observable: ZneObservable,
    noise: *const ZneNoiseModel,
    n_max: usize,
    n_meas: u64,
    seed: u64,
    out: *mut ZneEstimate,
) -> ZneStatus {
    if circuit.is_null() || noise.is_null() || out.is_null() {
        return ZneStatus::NullPointer;
    }
    let circuit = &(*circuit).0;
    let obs = observable_for(observable, circuit.num_qubits());
    let model = &(*noise).0;
    let result = catch_unwind(AssertUnwindSafe(|| {
        riim_estimate(circuit, init, &obs, model, n_max, mode_for(n_meas, seed))
    }));
    match result {
        Ok(Ok(est)) => {
            *out = ZneEstimate {
                value: est.value,
                stat_error: est.stat_error,
                gate_budget: est.gate_budget,
            };
            ZneStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => ZneStatus::Internal,
    }
}

/// Poisson-randomized estimate: averages exact per-plan values over
/// `n_plans` seeded draws per mean and extrapolates the linear fit to the
/// zero-noise point.
///
/// # Safety
/// `circuit` and `noise` must be live handles, `nu_values` must point to
/// `nu_len` readable doubles, and `out` must be a valid slot.
#[no_mangle]
pub unsafe extern "C" fn zne_riim_poisson_estimate(
    circuit: *const ZneCircuit,
    init: usize,
    observable: ZneObservable,
    noise: *const ZneNoiseModel,
    nu_values: *const f64,
    nu_len: usize,
    n_plans: usize,
    seed: u64,
    out: *mut ZneEstimate,
) -> ZneStatus {
    if circuit.is_null() || noise.is_null() || nu_values.is_null() || out.is_null() {
        return ZneStatus::NullPointer;
    }
    let circuit = &(*circuit).0;
    let obs = observable_for(observable, circuit.num_qubits());
    let nus = std::slice::from_raw_parts(nu_values, nu_len);
    let model = &(*noise).0;
    let result = catch_unwind(AssertUnwindSafe(|| {
        riim_poisson_estimate(circuit, init, &obs, model, nus, n_plans, seed)
    }));
    match result {
        Ok(Ok(est)) => {
            *out = ZneEstimate {
                value: est.value,
                stat_error: est.stat_error,
                gate_budget: est.gate_budget,
            };
            ZneStatus::Ok
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => ZneStatus::Internal,
    }
}

/// Combination weights over noise levels `r = 1, 3, ..., 1+2*n_max`;
/// `len` must equal `n_max + 1`.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn zne_richardson_weights(
    n_max: usize,
    out: *mut f64,
    len: usize,
) -> ZneStatus {
    if out.is_null() {
        return ZneStatus::NullPointer;
    }
    if len != n_max + 1 {
        return ZneStatus::InvalidArgument;
    }
    let weights = richardson_weights(n_max).as_f64();
    let slice = std::slice::from_raw_parts_mut(out, len);
    slice.copy_from_slice(&weights);
    ZneStatus::Ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_lifecycle_and_counts() {
        unsafe {
            let c = zne_circuit_four_cnot();
            assert_eq!(zne_circuit_cnot_count(c), 4);
            assert_eq!(zne_circuit_num_qubits(c), 2);

            let mut scaled: *mut ZneCircuit = ptr::null_mut();
            assert_eq!(zne_circuit_fiim(c, 3, &mut scaled), ZneStatus::Ok);
            assert_eq!(zne_circuit_cnot_count(scaled), 12);
            zne_circuit_free(scaled);

            let mut bad: *mut ZneCircuit = ptr::null_mut();
            assert_eq!(zne_circuit_fiim(c, 2, &mut bad), ZneStatus::InvalidArgument);
            assert!(bad.is_null());
            zne_circuit_free(c);
        }
    }

    #[test]
    fn expectation_matches_closed_form() {
        unsafe {
            let c = zne_circuit_four_cnot();
            let mut noise: *mut ZneNoiseModel = ptr::null_mut();
            assert_eq!(zne_noise_depolarizing(0.01, &mut noise), ZneStatus::Ok);
            let mut value = 0.0;
            assert_eq!(
                zne_expectation(c, 0b10, ZneObservable::IntegerValue, noise, &mut value),
                ZneStatus::Ok
            );
            let want = 3.0 - 1.5 * (1.0 - 0.99f64.powi(4));
            assert!((value - want).abs() < 1e-12);
            zne_noise_free(noise);
            zne_circuit_free(c);
        }
    }

    #[test]
    fn estimates_run_through_the_c_surface() {
        unsafe {
            let c = zne_circuit_double_cnot();
            let mut noise: *mut ZneNoiseModel = ptr::null_mut();
            zne_noise_depolarizing(0.01, &mut noise);

            let mut est = ZneEstimate { value: 0.0, stat_error: 0.0, gate_budget: 0 };
            assert_eq!(
                zne_fiim_estimate(c, 0, ZneObservable::QubitSum, noise, 1, 1, 0, 0, &mut est),
                ZneStatus::Ok
            );
            assert!(est.value.abs() < 1e-3);
            assert_eq!(est.gate_budget, 6);

            assert_eq!(
                zne_riim_estimate(c, 0, ZneObservable::QubitSum, noise, 1, 0, 0, &mut est),
                ZneStatus::Ok
            );
            assert_eq!(est.gate_budget, 4);

            let nus = [0.0, 0.5];
            assert_eq!(
                zne_riim_poisson_estimate(
                    c,
                    0,
                    ZneObservable::QubitSum,
                    noise,
                    nus.as_ptr(),
                    nus.len(),
                    200,
                    7,
                    &mut est
                ),
                ZneStatus::Ok
            );
            assert!(est.value.abs() < 0.05);

            zne_noise_free(noise);
            zne_circuit_free(c);
        }
    }

    #[test]
    fn oscillator_circuit_and_text_round_trip() {
        unsafe {
            let mut c: *mut ZneCircuit = ptr::null_mut();
            assert_eq!(zne_circuit_oscillator(0.5, 1, 2.2, &mut c), ZneStatus::Ok);
            assert_eq!(zne_circuit_cnot_count(c), 14);

            let text = zne_circuit_to_text(c);
            assert!(!text.is_null());
            let mut parsed: *mut ZneCircuit = ptr::null_mut();
            assert_eq!(zne_circuit_from_text(text, &mut parsed), ZneStatus::Ok);
            assert_eq!(zne_circuit_cnot_count(parsed), 14);
            zne_string_free(text);
            zne_circuit_free(parsed);
            zne_circuit_free(c);
        }
    }

    #[test]
    fn weights_and_argument_validation() {
        unsafe {
            let mut w = [0.0f64; 2];
            assert_eq!(zne_richardson_weights(1, w.as_mut_ptr(), 2), ZneStatus::Ok);
            assert!((w[0] - 1.5).abs() < 1e-15);
            assert!((w[1] + 0.5).abs() < 1e-15);
            assert_eq!(
                zne_richardson_weights(1, w.as_mut_ptr(), 1),
                ZneStatus::InvalidArgument
            );
            assert_eq!(
                zne_richardson_weights(1, ptr::null_mut(), 2),
                ZneStatus::NullPointer
            );

            let mut noise: *mut ZneNoiseModel = ptr::null_mut();
            assert_eq!(
                zne_noise_depolarizing(1.5, &mut noise),
                ZneStatus::InvalidChannel
            );
            assert!(noise.is_null());
            assert_eq!(
                zne_noise_full(0.01, -1.0, 1.0, 1.0, &mut noise),
                ZneStatus::InvalidChannel
            );

            let mut value = 0.0;
            assert_eq!(
                zne_expectation(
                    ptr::null(),
                    0,
                    ZneObservable::QubitSum,
                    ptr::null(),
                    &mut value
                ),
                ZneStatus::NullPointer
            );
        }
    }
}
