//! Fixed and random identity insertion: circuit transforms that replace
//! each CNOT by an odd number of consecutive copies. Since CNOT^2 is the
//! identity, the noiseless unitary is unchanged while the gate noise is
//! amplified in a controlled way.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{cnot_count, Circuit};
use crate::error::{Result, ZneError};

/// Per-CNOT repetition counts, one odd positive integer per CNOT in circuit
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InsertionPlan {
    reps: Vec<u64>,
}

impl InsertionPlan {
    pub fn new(reps: Vec<u64>) -> Result<Self> {
        for &r in &reps {
            if r == 0 || r % 2 == 0 {
                return Err(ZneError::InvalidPlan(format!(
                    "repetition counts must be odd and positive, got {r}"
                )));
            }
        }
        Ok(InsertionPlan { reps })
    }

    pub fn uniform(n_cnots: usize, r: u64) -> Result<Self> {
        InsertionPlan::new(vec![r; n_cnots])
    }

    pub fn all_ones(n_cnots: usize) -> Self {
        InsertionPlan {
            reps: vec![1; n_cnots],
        }
    }

    pub fn reps(&self) -> &[u64] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Comma-separated text form, e.g. `3,1,5`.
    pub fn to_text(&self) -> String {
        self.reps
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let reps = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| ZneError::InvalidPlan(format!("bad repetition count `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        InsertionPlan::new(reps)
    }
}

/// Total CNOT count of a circuit after applying the plan.
pub fn plan_gate_count(plan: &InsertionPlan) -> u64 {
    plan.reps().iter().sum()
}

/// Replace the i-th CNOT by `reps[i]` consecutive copies; all other gates
/// are unchanged. The noiseless unitary is identical to the input's.
pub fn apply_plan(circuit: &Circuit, plan: &InsertionPlan) -> Result<Circuit> {
    let n_cnots = cnot_count(circuit);
    if plan.len() != n_cnots {
        return Err(ZneError::InvalidPlan(format!(
            "plan has {} entries but circuit has {n_cnots} CNOTs",
            plan.len()
        )));
    }
    let mut out = Circuit::new(circuit.num_qubits())?;
    let mut idx = 0usize;
    for gate in circuit.gates() {
        if gate.is_cnot() {
            for _ in 0..plan.reps()[idx] {
                out.push(gate.clone())?;
            }
            idx += 1;
        } else {
            out.push(gate.clone())?;
        }
    }
    Ok(out)
}

/// Fixed identity insertion: every CNOT repeated the same odd number of
/// times, multiplying the CNOT count by `r`.
pub fn fiim_transform(circuit: &Circuit, r: u64) -> Result<Circuit> {
    if r == 0 || r % 2 == 0 {
        return Err(ZneError::InvalidPlan(format!(
            "fixed insertion factor must be odd and positive, got {r}"
        )));
    }
    apply_plan(circuit, &InsertionPlan::uniform(cnot_count(circuit), r)?)
}

/// Random plan with `r_i = 1 + 2*n_i`, `n_i` i.i.d. Poisson with mean `nu`,
/// drawn from a deterministic seeded generator.
pub fn riim_random_plan(n_cnots: usize, nu: f64, seed: u64) -> Result<InsertionPlan> {
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(ZneError::InvalidParameter(format!(
            "Poisson mean must be finite and non-negative, got {nu}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reps = (0..n_cnots)
        .map(|_| 1 + 2 * poisson_draw(nu, &mut rng))
        .collect();
    InsertionPlan::new(reps)
}

/// Poisson sampling by inversion with sequential search; exact for the
/// small means used here.
fn poisson_draw<R: Rng>(nu: f64, rng: &mut R) -> u64 {
    if nu == 0.0 {
        return 0;
    }
    let u: f64 = rng.random();
    let mut k = 0u64;
    let mut p = (-nu).exp();
    let mut cdf = p;
    while u > cdf && k < 10_000 {
        k += 1;
        p *= nu / k as f64;
        cdf += p;
    }
    k
}

/// A multiset of excess repetition counts (odd integers >= 3) to be placed
/// on distinct CNOT positions, the remaining positions keeping `r = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperatorSet {
    excess: Vec<u64>,
}

impl OperatorSet {
    /// Build from a list of odd values >= 3; order is irrelevant.
    pub fn new(mut excess: Vec<u64>) -> Result<Self> {
        for &e in &excess {
            if e < 3 || e % 2 == 0 {
                return Err(ZneError::InvalidPlan(format!(
                    "operator-set entries must be odd and >= 3, got {e}"
                )));
            }
        }
        excess.sort_unstable();
        Ok(OperatorSet { excess })
    }

    pub fn empty() -> Self {
        OperatorSet { excess: Vec::new() }
    }

    pub fn excess(&self) -> &[u64] {
        &self.excess
    }

    pub fn size(&self) -> usize {
        self.excess.len()
    }

    /// Total excess repetitions `sum(e_i - 1)`; always even.
    pub fn total_excess(&self) -> u64 {
        self.excess.iter().map(|e| e - 1).sum()
    }

    /// Number of distinct placements over `n_cnots` positions:
    /// `n! / ((n-k)! * prod_e multiplicity(e)!)`.
    pub fn placement_count(&self, n_cnots: usize) -> Result<u128> {
        let k = self.size();
        if k > n_cnots {
            return Err(ZneError::InvalidPlan(format!(
                "operator set of size {k} does not fit on {n_cnots} CNOTs"
            )));
        }
        let mut count: u128 = 1;
        for i in 0..k {
            count *= (n_cnots - i) as u128;
        }
        let mut run = 1usize;
        for i in 1..=k {
            if i < k && self.excess[i] == self.excess[i - 1] {
                run += 1;
            } else {
                for f in 2..=run {
                    count /= f as u128;
                }
                run = 1;
            }
        }
        Ok(count)
    }

    pub fn label(&self) -> String {
        if self.excess.is_empty() {
            "{}".to_string()
        } else {
            let inner = self
                .excess
                .iter()
                .rev()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",");
            format!("{{{inner}}}")
        }
    }
}

/// All distinct assignments of the multiset to distinct CNOT positions.
/// Equal values are indistinguishable; the remaining positions get `r = 1`.
pub fn enumerate_placements(n_cnots: usize, opset: &OperatorSet) -> Result<Vec<InsertionPlan>> {
    if opset.size() > n_cnots {
        return Err(ZneError::InvalidPlan(format!(
            "operator set of size {} does not fit on {n_cnots} CNOTs",
            opset.size()
        )));
    }
    // Group equal values so permuting them does not duplicate plans.
    let mut groups: Vec<(u64, usize)> = Vec::new();
    for &e in opset.excess() {
        match groups.last_mut() {
            Some((v, m)) if *v == e => *m += 1,
            _ => groups.push((e, 1)),
        }
    }

    let mut plans = Vec::new();
    let mut reps = vec![1u64; n_cnots];
    place_group(&groups, 0, &mut reps, &mut plans);
    Ok(plans)
}

fn place_group(
    groups: &[(u64, usize)],
    g: usize,
    reps: &mut Vec<u64>,
    plans: &mut Vec<InsertionPlan>,
) {
    if g == groups.len() {
        plans.push(InsertionPlan { reps: reps.clone() });
        return;
    }
    let (value, mult) = groups[g];
    let free: Vec<usize> = (0..reps.len()).filter(|&i| reps[i] == 1).collect();
    // Choose `mult` of the free positions in increasing order.
    let mut choice = vec![0usize; mult];
    choose_positions(&free, 0, 0, value, &mut choice, groups, g, reps, plans);
}

#[allow(clippy::too_many_arguments)]
fn choose_positions(
    free: &[usize],
    start: usize,
    depth: usize,
    value: u64,
    choice: &mut Vec<usize>,
    groups: &[(u64, usize)],
    g: usize,
    reps: &mut Vec<u64>,
    plans: &mut Vec<InsertionPlan>,
) {
    let mult = choice.len();
    if depth == mult {
        for &pos in choice.iter() {
            reps[pos] = value;
        }
        place_group(groups, g + 1, reps, plans);
        for &pos in choice.iter() {
            reps[pos] = 1;
        }
        return;
    }
    for i in start..free.len() {
        choice[depth] = free[i];
        choose_positions(free, i + 1, depth + 1, value, choice, groups, g, reps, plans);
    }
}

/// Uniform draw from the distinct placements without materializing them:
/// shuffle the multiset padded with ones across all positions. A uniform
/// random permutation of the padded list induces the uniform distribution
/// over distinct plans.
pub fn sample_placement(n_cnots: usize, opset: &OperatorSet, seed: u64) -> Result<InsertionPlan> {
    if opset.size() > n_cnots {
        return Err(ZneError::InvalidPlan(format!(
            "operator set of size {} does not fit on {n_cnots} CNOTs",
            opset.size()
        )));
    }
    let mut reps: Vec<u64> = opset.excess().to_vec();
    reps.resize(n_cnots, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    reps.shuffle(&mut rng);
    Ok(InsertionPlan { reps })
}
