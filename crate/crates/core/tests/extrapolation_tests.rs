//! Extrapolation weights and coefficient sets checked against their
//! defining cancellation conditions, in exact rational arithmetic.

mod common;

use common::log_log_slope;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use zne_core::circuit::build_four_cnot;
use zne_core::density::Observable;
use zne_core::estimators::{fiim_estimate, MeasureMode};
use zne_core::extrapolation::*;
use zne_core::insertion::OperatorSet;
use zne_core::noise::{evolve, NoiseModel};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn weights_cancel_every_power_law_through_their_order() {
    // sum_n a(n) f_k(1+2n, eps) = 1 + O(eps^(n_max+1)) for all k: the
    // residual's leading power is checked by an exact-rational evaluation
    // followed by a log-log fit.
    let eps_values = [q(1, 1000), q(1, 640), q(1, 400), q(1, 250), q(1, 160), q(1, 100)];
    for n_max in 1..=4usize {
        let weights = richardson_weights(n_max);
        for k in 1..=6u32 {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for eps in &eps_values {
                let u = Q::one() - eps.clone();
                // sum_n a(n) u^(k(1+2n)) = 1 + O(eps^(n_max+1)); the weights
                // sum to one, so the residual against 1 carries the leading
                // uncancelled power.
                let mut residual = -Q::one();
                for (n, a) in weights.weights().iter().enumerate() {
                    let exponent = k * (1 + 2 * n as u32);
                    residual += a * pow_q(&u, exponent);
                }
                xs.push(eps.to_f64().unwrap());
                ys.push(residual.to_f64().unwrap().abs());
            }
            let slope = log_log_slope(&xs, &ys);
            let want = (n_max + 1) as f64;
            assert!(
                (slope - want).abs() < 0.1,
                "n_max {n_max}, k {k}: slope {slope} vs {want}"
            );
        }
    }
}

fn pow_q(base: &Q, exp: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[test]
fn polynomial_weights_are_fixed_points_of_the_full_degree_fit() {
    // Degree n_max over n = 0..n_max reproduces the closed-form weights.
    for n in 1..=4usize {
        let a = poly_weights(n, n).unwrap();
        let b = richardson_weights(n).as_f64();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn fiim_full_degree_fit_equals_the_weighted_sum() {
    let circuit = build_four_cnot();
    let obs = Observable::integer_value(2);
    let noise = NoiseModel::depolarizing(0.01).unwrap();
    let est = fiim_estimate(&circuit, 0b10, &obs, &noise, 2, 2, MeasureMode::Exact).unwrap();
    let weights = richardson_weights(2).as_f64();
    let mut direct = 0.0;
    for (n, w) in weights.iter().enumerate() {
        let scaled = zne_core::fiim_transform(&circuit, 1 + 2 * n as u64).unwrap();
        let rho = evolve(&scaled, 0b10, &noise).unwrap();
        direct += w * zne_core::expectation(&rho, &obs).unwrap();
    }
    assert!((est.value - direct).abs() < 1e-10);
}

/// Exact verification that a coefficient set cancels the depolarizing
/// expansion: for every subset size k of the noisy-gate expansion and every
/// order 1..=n_max in the noise strength, the placement-weighted sums vanish
/// (and the order-0 terms sum to one). Works on the falling-factorial
/// placement combinatorics directly, independent of the simulator.
mod conditions {
    use super::*;

    pub const MAX_ORDER: usize = 5;

    /// Polynomial in the noise strength, truncated beyond MAX_ORDER.
    #[derive(Clone)]
    pub struct Poly(pub [Q; MAX_ORDER + 1]);

    impl Poly {
        fn zero() -> Self {
            Poly(std::array::from_fn(|_| Q::zero()))
        }

        pub fn add_scaled(&mut self, other: &Poly, c: &Q) {
            for i in 0..=MAX_ORDER {
                self.0[i] += &other.0[i] * c;
            }
        }
    }

    fn binom(n: u64, k: u64) -> Q {
        if k > n {
            return Q::zero();
        }
        let mut acc = Q::one();
        for i in 0..k {
            acc *= q((n - i) as i64, 1);
            acc /= q((i + 1) as i64, 1);
        }
        acc
    }

    /// (1 - eps)^m truncated.
    fn u_pow(m: u64) -> Poly {
        let mut p = Poly::zero();
        for i in 0..=MAX_ORDER as u64 {
            let sign = if i % 2 == 0 { Q::one() } else { -Q::one() };
            p.0[i as usize] = sign * binom(m, i);
        }
        p
    }

    fn falling(x: i64, m: usize) -> Q {
        let mut acc = Q::one();
        for i in 0..m {
            acc *= q(x - i as i64, 1);
        }
        acc
    }

    /// Placement sum over a multiset for a marked subset of k gate slots:
    /// sum over placements of u^(k + excess inside the subset).
    pub fn placement_poly(excess: &[u64], n: i64, k: i64) -> Poly {
        let mut groups: Vec<(u64, usize)> = Vec::new();
        let mut sorted = excess.to_vec();
        sorted.sort_unstable();
        for e in sorted {
            match groups.last_mut() {
                Some((v, m)) if *v == e => *m += 1,
                _ => groups.push((e, 1)),
            }
        }
        let s: usize = groups.iter().map(|(_, m)| m).sum();
        let mut idx = vec![0usize; groups.len()];
        let mut total = Poly::zero();
        loop {
            let a: usize = idx.iter().sum();
            let mut ways = Q::one();
            let mut excess_in = 0u64;
            for (g, &(e, m)) in groups.iter().enumerate() {
                ways *= binom(m as u64, idx[g] as u64);
                excess_in += (e - 1) * idx[g] as u64;
            }
            let weight = ways * falling(k, a) * falling(n - k, s - a);
            total.add_scaled(&u_pow(excess_in + k as u64), &weight);

            let mut g = 0;
            loop {
                if g == groups.len() {
                    let mut denom = Q::one();
                    for &(_, m) in &groups {
                        for f in 2..=m {
                            denom *= q(f as i64, 1);
                        }
                    }
                    for v in &mut total.0 {
                        *v /= &denom;
                    }
                    return total;
                }
                idx[g] += 1;
                if idx[g] <= groups[g].1 {
                    break;
                }
                idx[g] = 0;
                g += 1;
            }
        }
    }
}

#[test]
fn operator_set_coefficients_satisfy_the_cancellation_conditions() {
    use conditions::*;
    for n_max in 1..=4usize {
        for n_cnots in [n_max.max(2), 4, 6, 10, 14] {
            if n_cnots < n_max {
                continue;
            }
            let set = riim_coefficients(n_max, n_cnots).unwrap();
            for k in 0..=(n_cnots.min(6) as i64) {
                let mut combined = Poly(std::array::from_fn(|_| Q::zero()));
                // Baseline all-ones operator contributes u^k once.
                let base_poly = placement_poly(&[], n_cnots as i64, k);
                combined.add_scaled(&base_poly, set.base());
                for (opset, coeff) in set.terms() {
                    let p = placement_poly(opset.excess(), n_cnots as i64, k);
                    combined.add_scaled(&p, coeff);
                }
                assert!(
                    combined.0[0].is_one(),
                    "order 0 must be 1: n_max {n_max}, N {n_cnots}, k {k}"
                );
                for order in 1..=n_max {
                    assert!(
                        combined.0[order].is_zero(),
                        "order {order} must vanish: n_max {n_max}, N {n_cnots}, k {k}, got {}",
                        combined.0[order]
                    );
                }
            }
        }
    }
}

#[test]
fn tabulated_closed_forms_at_spot_values() {
    let set = riim_coefficients(1, 7).unwrap();
    assert_eq!(set.terms()[0].1, q(-1, 2));
    assert_eq!(*set.base(), q(9, 2)); // 1 + N/2 at N = 7.

    let set = riim_coefficients(2, 4).unwrap();
    let coeff = |s: &zne_core::RiimCoefficientSet, label: &str| {
        s.terms()
            .iter()
            .find(|(o, _)| o.label() == label)
            .map(|(_, c)| c.clone())
            .unwrap()
    };
    assert_eq!(coeff(&set, "{3}"), q(-2, 1));
    assert_eq!(coeff(&set, "{5}"), q(3, 8));
    assert_eq!(coeff(&set, "{3,3}"), q(1, 4));
    assert_eq!(*set.base(), q(6, 1));

    let set = riim_coefficients(4, 9).unwrap();
    assert_eq!(coeff(&set, "{9}"), q(35, 128));
    assert!(coeff(&set, "{7,3}").is_zero());
    assert_eq!(coeff(&set, "{7}"), q(-45, 32));
}

#[test]
fn gate_budgets_are_monotone_between_methods() {
    for n_cnots in [2u64, 4, 14] {
        for n in 1..=4u64 {
            let riim = n_cnots + 2 * n;
            let fiim = (2 * n + 1) * n_cnots;
            assert!(riim < fiim, "N = {n_cnots}, order {n}");
        }
    }
}

#[test]
fn statistical_error_growth_tracks_the_weight_norm() {
    // sqrt(sum a^2) grows roughly like 2^n/n at large order.
    let norm8 = stat_error(&richardson_weights(8).as_f64(), 1);
    let scaling = 2f64.powi(8) / 8.0;
    assert!(
        norm8 / scaling > 0.5 && norm8 / scaling < 3.0,
        "norm {norm8} vs scaling {scaling}"
    );
    // And it is monotone in the order.
    let mut last = 0.0;
    for n in 0..=8 {
        let norm = stat_error(&richardson_weights(n).as_f64(), 1);
        assert!(norm > last);
        last = norm;
    }
}

#[test]
fn combined_error_regimes() {
    // Large shot counts leave the depolarizing remainder in charge.
    let w1 = richardson_weights(1).as_f64();
    let e = combined_error(0.01, 0.0, 1, &w1, 1 << 60);
    assert!((e - 1e-4).abs() < 1e-12);

    // At order 3 and 10^7 shots the statistical term dominates.
    let w3 = richardson_weights(3).as_f64();
    let stat = stat_error(&w3, 10_000_000);
    let e = combined_error(0.01, 0.0, 3, &w3, 10_000_000);
    assert_eq!(e, stat);
    assert!(stat > 0.01f64.powi(4));

    // A non-depolarizing floor caps everything.
    let e = combined_error(0.01, 0.1, 3, &w3, 10_000_000);
    assert_eq!(e, 0.1);
}

#[test]
fn operator_sets_for_each_order_match_the_budget() {
    // Every tabulated set at order n fits in N_c + 2n gates.
    for n_max in 1..=4usize {
        let set = riim_coefficients(n_max, 10).unwrap();
        for (opset, _) in set.terms() {
            assert!(opset.total_excess() <= 2 * n_max as u64);
        }
        // The maximal sets reach the budget exactly.
        let max_excess = set
            .terms()
            .iter()
            .map(|(o, _)| o.total_excess())
            .max()
            .unwrap();
        assert_eq!(max_excess, 2 * n_max as u64);
    }
}

#[test]
fn single_value_set_labels_match_construction() {
    let opset = OperatorSet::new(vec![3, 5, 3]).unwrap();
    assert_eq!(opset.label(), "{5,3,3}");
    assert_eq!(opset.total_excess(), 8);
}

#[test]
fn poisson_extrapolation_law_against_truncated_enumeration() {
    // Oracle: average the closed-form decay over the Poisson plan weights by
    // direct enumeration (counts truncated at 8, far beyond any mass at
    // these means), fit the line in rho = 1+2nu and extrapolate to rho = 0.
    // The residual of the intercept shrinks quadratically with the noise.
    let nu_values = [0.0f64, 0.5];
    let eps_values = [0.005f64, 0.01, 0.02, 0.04];
    let mut residuals = Vec::new();
    for &eps in &eps_values {
        let u = 1.0 - eps;
        let mean_at = |nu: f64| -> f64 {
            // Two independent Poisson counts; value 1 - u^(2 + 2(k1+k2)).
            let mut acc = 0.0;
            for k1 in 0..=8u32 {
                for k2 in 0..=8u32 {
                    let weight = poisson_pmf(nu, k1) * poisson_pmf(nu, k2);
                    acc += weight * (1.0 - u.powi(2 + 2 * (k1 + k2) as i32));
                }
            }
            acc
        };
        let points: Vec<(f64, f64)> = nu_values
            .iter()
            .map(|&nu| (1.0 + 2.0 * nu, mean_at(nu)))
            .collect();
        let slope = (points[1].1 - points[0].1) / (points[1].0 - points[0].0);
        let intercept = points[0].1 - slope * points[0].0;
        residuals.push(intercept.abs());
    }
    let slope = log_log_slope(&eps_values, &residuals);
    assert!(
        (slope - 2.0).abs() < 0.1,
        "intercept residual should shrink quadratically, got slope {slope:.3}"
    );
}

fn poisson_pmf(nu: f64, k: u32) -> f64 {
    if nu == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let mut p = (-nu).exp();
    for i in 1..=k {
        p *= nu / i as f64;
    }
    p
}

#[test]
fn sampled_poisson_study_matches_the_enumeration_oracle() {
    // The seeded sampler reproduces the enumerated means within its own
    // reported scatter.
    let circuit = build_four_cnot();
    let obs = Observable::integer_value(2);
    let eps = 0.02;
    let noise = NoiseModel::depolarizing(eps).unwrap();
    let study = zne_core::riim_poisson_study(&circuit, 0b10, &obs, &noise, &[0.0, 0.4], 4000, 99)
        .unwrap();
    let u: f64 = 1.0 - eps;
    for point in &study.points {
        // Four independent counts; value 3 - 1.5 (1 - u^(4 + 2 sum k)).
        let mut want = 0.0;
        for k1 in 0..=8u32 {
            for k2 in 0..=8u32 {
                for k3 in 0..=8u32 {
                    for k4 in 0..=8u32 {
                        let w = poisson_pmf(point.nu, k1)
                            * poisson_pmf(point.nu, k2)
                            * poisson_pmf(point.nu, k3)
                            * poisson_pmf(point.nu, k4);
                        if w < 1e-14 {
                            continue;
                        }
                        let total = 4 + 2 * (k1 + k2 + k3 + k4) as i32;
                        want += w * (3.0 - 1.5 * (1.0 - u.powi(total)));
                    }
                }
            }
        }
        let tol = (5.0 * point.std_error).max(1e-9);
        assert!(
            (point.mean - want).abs() < tol,
            "nu {}: sampled {} vs enumerated {want}",
            point.nu,
            point.mean
        );
    }
}
