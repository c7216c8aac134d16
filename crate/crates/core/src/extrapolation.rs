//! Extrapolation weights and coefficient sets, computed in exact rational
//! arithmetic and converted to floating point only when combined with
//! measured values. The alternating-sign products involved lose precision
//! quickly in floating point at higher orders.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, ZneError};
use crate::insertion::OperatorSet;

pub type Rational = BigRational;

fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Combination weights over the noise levels `r = 1+2n`, `n = 0..n_max`,
/// chosen so that the linear combination of measurements cancels the
/// depolarizing contribution through order `n_max` while keeping the
/// noiseless term with coefficient one (the weights sum to one exactly).
#[derive(Debug, Clone, PartialEq)]
pub struct RichardsonWeights {
    weights: Vec<Rational>,
}

impl RichardsonWeights {
    pub fn n_max(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.weights.iter().map(to_f64).collect()
    }

    /// Exact rational sum of the weights.
    pub fn sum(&self) -> Rational {
        self.weights.iter().cloned().sum()
    }
}

/// Weights `a(i) = prod_{j != i} (1+2j) / (2(j-i))` for `i = 0..n_max`.
pub fn richardson_weights(n_max: usize) -> RichardsonWeights {
    let weights = (0..=n_max)
        .map(|i| {
            let mut acc = Rational::one();
            for j in 0..=n_max {
                if j != i {
                    acc *= ratio(1 + 2 * j as i64, 2 * (j as i64 - i as i64));
                }
            }
            acc
        })
        .collect();
    RichardsonWeights { weights }
}

/// Solve `A x = b` over the rationals by Gaussian elimination.
fn solve_rational(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| ZneError::SingularFit("zero pivot in normal equations".to_string()))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for r in 0..n {
            if r == col {
                continue;
            }
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let v = &a[col][c] * &factor;
                a[r][c] -= v;
            }
            let v = &b[col] * &factor;
            b[r] -= v;
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Exact effective weights of a degree-`n_fit` least-squares polynomial in
/// `n` over the given integer abscissas, evaluated at `n = -1/2`. The fit
/// value is the weighted sum of the ordinates with these weights.
pub fn poly_extrapolation_weights(ns: &[i64], n_fit: usize) -> Result<Vec<Rational>> {
    let m = ns.len();
    if m < n_fit + 1 {
        return Err(ZneError::SingularFit(format!(
            "degree-{n_fit} fit needs at least {} points, got {m}",
            n_fit + 1
        )));
    }
    for (i, a) in ns.iter().enumerate() {
        if ns[..i].contains(a) {
            return Err(ZneError::SingularFit(format!(
                "duplicate abscissa n = {a}"
            )));
        }
    }
    let k = n_fit + 1;
    // Vandermonde design matrix V[r][i] = n_r^i.
    let v: Vec<Vec<Rational>> = ns
        .iter()
        .map(|&n| {
            (0..k)
                .map(|i| Rational::from(BigInt::from(n).pow(i as u32)))
                .collect()
        })
        .collect();
    // Normal equations M = V^T V.
    let mut m_mat = vec![vec![Rational::zero(); k]; k];
    for (i, row) in m_mat.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = v.iter().map(|vr| &vr[i] * &vr[j]).sum();
        }
    }
    // Evaluation vector (-1/2)^i.
    let x0: Vec<Rational> = (0..k)
        .map(|i| {
            let mut p = Rational::one();
            for _ in 0..i {
                p *= ratio(-1, 2);
            }
            p
        })
        .collect();
    let u = solve_rational(m_mat, x0)?;
    Ok(v
        .iter()
        .map(|vr| vr.iter().zip(&u).map(|(a, b)| a * b).sum())
        .collect())
}

/// Effective weights of the degree-`n_fit` polynomial extrapolation over
/// `n = 0..n_max`, as floats. With `n_fit = n_max` these reproduce
/// [`richardson_weights`] exactly.
pub fn poly_weights(n_max: usize, n_fit: usize) -> Result<Vec<f64>> {
    if n_fit > n_max {
        return Err(ZneError::InvalidParameter(format!(
            "fit degree {n_fit} exceeds n_max {n_max}"
        )));
    }
    let ns: Vec<i64> = (0..=n_max as i64).collect();
    Ok(poly_extrapolation_weights(&ns, n_fit)?
        .iter()
        .map(to_f64)
        .collect())
}

/// Least-squares polynomial of degree `n_fit` through `(n, y)` points,
/// evaluated at `n = -1/2` (the zero-noise point `r = 0`).
pub fn poly_fit_extrapolate(points: &[(i64, f64)], n_fit: usize) -> Result<f64> {
    let ns: Vec<i64> = points.iter().map(|&(n, _)| n).collect();
    let w = poly_extrapolation_weights(&ns, n_fit)?;
    Ok(points
        .iter()
        .zip(&w)
        .map(|(&(_, y), wi)| to_f64(wi) * y)
        .sum())
}

/// Coefficients of the operator-set combination that cancels depolarizing
/// noise through order `n_max` using at most `n_cnots + 2*n_max` gates.
/// Closed forms are known for `n_max` up to 4; the coefficient of the
/// baseline all-ones operator follows from the weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct RiimCoefficientSet {
    n_max: usize,
    n_cnots: usize,
    base: Rational,
    terms: Vec<(OperatorSet, Rational)>,
}

impl RiimCoefficientSet {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn n_cnots(&self) -> usize {
        self.n_cnots
    }

    /// Coefficient of the baseline (all `r_i = 1`) operator.
    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn base_f64(&self) -> f64 {
        to_f64(&self.base)
    }

    /// Coefficients of the non-trivial operator sets.
    pub fn terms(&self) -> &[(OperatorSet, Rational)] {
        &self.terms
    }

    pub fn terms_f64(&self) -> Vec<(OperatorSet, f64)> {
        self.terms
            .iter()
            .map(|(s, c)| (s.clone(), to_f64(c)))
            .collect()
    }

    /// All weights as floats in evaluation order (baseline first), one per
    /// executed operator set, for uncertainty propagation.
    pub fn flat_weights(&self) -> Vec<f64> {
        let mut w = vec![to_f64(&self.base)];
        w.extend(self.terms.iter().map(|(_, c)| to_f64(c)));
        w
    }
}

/// Polynomial in the CNOT count with rational coefficients, `c0 + c1*N + ...`.
fn poly_in_n(n_cnots: usize, coeffs: &[Rational]) -> Rational {
    let n = Rational::from(BigInt::from(n_cnots));
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * &n + c;
    }
    acc
}

/// Closed-form coefficient sets for `n_max` in 1..=4.
pub fn riim_coefficients(n_max: usize, n_cnots: usize) -> Result<RiimCoefficientSet> {
    if !(1..=4).contains(&n_max) {
        return Err(ZneError::InvalidParameter(format!(
            "no closed-form coefficients beyond order 4, got n_max = {n_max}"
        )));
    }
    if n_cnots < n_max {
        return Err(ZneError::InvalidParameter(format!(
            "need at least {n_max} CNOTs to host the order-{n_max} placements, got {n_cnots}"
        )));
    }
    let set = |e: &[u64]| OperatorSet::new(e.to_vec()).expect("static operator sets");
    let terms: Vec<(OperatorSet, Rational)> = match n_max {
        1 => vec![(set(&[3]), ratio(-1, 2))],
        2 => vec![
            (set(&[3]), poly_in_n(n_cnots, &[ratio(-1, 1), ratio(-1, 4)])),
            (set(&[5]), ratio(3, 8)),
            (set(&[3, 3]), ratio(1, 4)),
        ],
        3 => vec![
            (
                set(&[3]),
                poly_in_n(n_cnots, &[ratio(-24, 16), ratio(-10, 16), ratio(-1, 16)]),
            ),
            (
                set(&[5]),
                poly_in_n(n_cnots, &[ratio(18, 16), ratio(3, 16)]),
            ),
            (
                set(&[3, 3]),
                poly_in_n(n_cnots, &[ratio(6, 8), ratio(1, 8)]),
            ),
            (set(&[7]), ratio(-5, 16)),
            (set(&[5, 3]), ratio(-3, 16)),
            (set(&[3, 3, 3]), ratio(-1, 8)),
        ],
        4 => vec![
            (
                set(&[3]),
                poly_in_n(
                    n_cnots,
                    &[ratio(-192, 96), ratio(-104, 96), ratio(-18, 96), ratio(-1, 96)],
                ),
            ),
            (
                set(&[5]),
                poly_in_n(n_cnots, &[ratio(154, 64), ratio(32, 64), ratio(3, 64)]),
            ),
            (
                set(&[3, 3]),
                poly_in_n(n_cnots, &[ratio(58, 32), ratio(14, 32), ratio(1, 32)]),
            ),
            (set(&[7]), ratio(-45, 32)),
            (
                set(&[5, 3]),
                poly_in_n(n_cnots, &[ratio(-29, 32), ratio(-3, 32)]),
            ),
            (
                set(&[3, 3, 3]),
                poly_in_n(n_cnots, &[ratio(-8, 16), ratio(-1, 16)]),
            ),
            (set(&[9]), ratio(35, 128)),
            (set(&[7, 3]), ratio(0, 1)),
            (set(&[5, 5]), ratio(29, 64)),
            (set(&[5, 3, 3]), ratio(3, 32)),
            (set(&[3, 3, 3, 3]), ratio(1, 16)),
        ],
        _ => unreachable!(),
    };

    let mut base = Rational::one();
    for (opset, coeff) in &terms {
        let count = Rational::from(BigInt::from(opset.placement_count(n_cnots)?));
        base -= coeff * count;
    }
    Ok(RiimCoefficientSet {
        n_max,
        n_cnots,
        base,
        terms,
    })
}

/// Statistical uncertainty of a weighted combination of measurements, each
/// made with `n_meas` shots of unit per-shot variance:
/// `sqrt(sum w^2) / sqrt(n_meas)`. Callers rescale by the observable's
/// per-circuit standard deviation when an absolute number is needed.
pub fn stat_error(weights: &[f64], n_meas: u64) -> f64 {
    let sum_sq: f64 = weights.iter().map(|w| w * w).sum();
    (sum_sq / n_meas as f64).sqrt()
}

/// Scaling heuristic for the total uncertainty of a mitigated result: the
/// largest of the non-depolarizing floor, the uncancelled depolarizing
/// remainder and the statistical term.
pub fn combined_error(eps: f64, delta: f64, n_max: usize, weights: &[f64], n_meas: u64) -> f64 {
    let remainder = eps.powi(n_max as i32 + 1);
    delta.max(remainder).max(stat_error(weights, n_meas))
}

/// Exact check value used by tests and the CLI: sum of weights minus one.
pub fn weight_sum_defect(weights: &RichardsonWeights) -> Rational {
    weights.sum() - Rational::one()
}

/// Render a rational like `-3/2` (or `2` when integral) for display.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else if r.denom().is_negative() {
        let flipped = -r.clone();
        format!("{}/{}", -flipped.numer(), flipped.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
