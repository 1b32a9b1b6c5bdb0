//! Exhaustive checks of the classical per-step bound.
//!
//! Every deterministic memoryless strategy pair is a pair of tables
//! `x ↦ u(x) ∈ 𝒰`, `y ↦ v(y) ∈ 𝒱`, i.e. exactly a [`DetGameStrategy`], so
//! there are 4096 of them. Any classical strategy conditioned on the past
//! and on the common randomness is one of these tables, which is why
//! exhausting them bounds every classical strategy.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mermin_peres::{ActionU, ActionV, DetGameStrategy};
use crate::seed::{rng_for, Stream};

use super::model::{check_delta, reward, Kernel, State, StateDistribution, NUM_STATES};

/// A pair of memoryless tables, indexed by Alice's `x` and Bob's `y`.
pub type TablePair = DetGameStrategy;

fn ratio_i64<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[inline]
fn pair_reward(pair: &TablePair, s: State) -> i8 {
    reward(s, pair.alice[s.x as usize - 1], pair.bob[s.y as usize - 1])
}

/// Number of cells `(i, j)` with `u^(j) v^(i) = −1`.
pub fn negative_cells(u: ActionU, v: ActionV) -> u32 {
    State::all().filter(|&s| reward(s, u, v) == -1).count() as u32
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub pairs_checked: usize,
    pub min_negative_cells: u32,
    pub pass: bool,
}

/// Checks over all 16 action pairs that at least one cell multiplies to −1.
pub fn lemma_oneneg_check() -> LemmaReport {
    let mut min_neg = u32::MAX;
    let mut pairs = 0;
    for u in ActionU::all() {
        for v in ActionV::all() {
            pairs += 1;
            min_neg = min_neg.min(negative_cells(u, v));
        }
    }
    LemmaReport {
        pairs_checked: pairs,
        min_negative_cells: min_neg,
        pass: pairs == 16 && min_neg >= 1,
    }
}

/// `Σ_{i,j} p(i,j) · u^(j)(i) · v^(i)(j)`.
pub fn exact_expected_reward_memoryless(
    table_a: &[ActionU; 3],
    table_b: &[ActionV; 3],
    dist: &StateDistribution,
) -> f64 {
    let pair = DetGameStrategy {
        alice: *table_a,
        bob: *table_b,
    };
    State::all()
        .map(|s| dist.prob(s) * pair_reward(&pair, s) as f64)
        .sum()
}

/// Rational counterpart of [`exact_expected_reward_memoryless`].
pub fn expected_reward_rational(
    pair: &TablePair,
    weights: &[Ratio<i64>; NUM_STATES],
) -> Ratio<i64> {
    State::all()
        .map(|s| weights[s.index()] * Ratio::from_integer(pair_reward(pair, s) as i64))
        .sum()
}

/// `P(u^(Y)(X) v^(X)(Y) = −1)` under `dist`.
pub fn prob_negative(pair: &TablePair, dist: &StateDistribution) -> f64 {
    State::all()
        .filter(|&s| pair_reward(pair, s) == -1)
        .map(|s| dist.prob(s))
        .sum()
}

pub fn uniform_weights() -> [Ratio<i64>; NUM_STATES] {
    [Ratio::new(1, 9); NUM_STATES]
}

#[derive(Debug, Clone, Serialize)]
pub struct OneShotReport {
    pub pairs_checked: usize,
    #[serde(serialize_with = "ratio_i64")]
    pub max_expected_reward: Ratio<i64>,
    pub argmax_count: usize,
    /// The entanglement strategy's one-shot expected reward.
    pub quantum_expected_reward: f64,
}

/// Exact best one-shot expected reward under the uniform initial law.
pub fn one_shot_uniform_max() -> OneShotReport {
    let weights = uniform_weights();
    let mut best = Ratio::from_integer(-2);
    let mut count = 0;
    let all = DetGameStrategy::all();
    for pair in &all {
        let r = expected_reward_rational(pair, &weights);
        if r > best {
            best = r;
            count = 0;
        }
        if r == best {
            count += 1;
        }
    }
    OneShotReport {
        pairs_checked: all.len(),
        max_expected_reward: best,
        argmax_count: count,
        quantum_expected_reward: 1.0,
    }
}

/// Minimum over all 4096 table pairs of `P(−1)` under `dist`, after
/// checking that `dist` has floor `delta`.
pub fn min_prob_negative(dist: &StateDistribution, delta: f64) -> Result<f64> {
    if dist.min() < delta {
        return Err(Error::InvalidDistribution(format!(
            "minimum cell probability {} below delta {delta}",
            dist.min()
        )));
    }
    Ok(DetGameStrategy::all()
        .iter()
        .map(|p| prob_negative(p, dist))
        .fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, Serialize)]
pub struct CorollaryReport {
    pub delta: f64,
    pub pairs_per_distribution: usize,
    #[serde(serialize_with = "ratio_i64")]
    pub uniform_min_prob_negative: Ratio<i64>,
    pub floor_distributions: usize,
    pub floor_min_prob_negative: f64,
    pub contexts: usize,
    pub context_min_conditional_prob_negative: f64,
    pub context_min_mixture_prob_negative: f64,
    pub pass: bool,
}

/// Number of seeded floor-δ distributions drawn for the unconditional check.
const FLOOR_DISTRIBUTIONS: usize = 16;
/// Random per-context strategy assignments tried for the mixture check.
const MIXTURE_TRIALS: usize = 256;

/// Exhaustive checks that `P(−1) ≥ δ` for every table pair, unconditionally
/// and conditionally on each of `context_count` context values, each with
/// its own floor-δ law and its own table pair.
pub fn corollary_checks(delta: f64, context_count: usize, seed: u64) -> Result<CorollaryReport> {
    use rand::Rng as _;

    check_delta(delta)?;
    if context_count == 0 {
        return Err(Error::Config("context_count must be positive".into()));
    }
    let all = DetGameStrategy::all();
    let weights = uniform_weights();
    let uniform_min = all
        .iter()
        .map(|p| {
            State::all()
                .filter(|&s| pair_reward(p, s) == -1)
                .map(|s| weights[s.index()])
                .sum::<Ratio<i64>>()
        })
        .min()
        .unwrap();

    let mut rng = rng_for(seed, Stream::Construction);
    let mut floor_min = f64::INFINITY;
    for _ in 0..FLOOR_DISTRIBUTIONS {
        let dist = StateDistribution::random_floor(delta, &mut rng)?;
        floor_min = floor_min.min(min_prob_negative(&dist, delta)?);
    }

    // conditional version: one floor-δ law per context value
    let contexts: Vec<StateDistribution> = (0..context_count)
        .map(|_| StateDistribution::random_floor(delta, &mut rng))
        .collect::<Result<_>>()?;
    let mut cond_min = f64::INFINITY;
    for dist in &contexts {
        cond_min = cond_min.min(min_prob_negative(dist, delta)?);
    }
    let mut mixture_min = f64::INFINITY;
    for _ in 0..MIXTURE_TRIALS {
        let raw: Vec<f64> = (0..context_count)
            .map(|_| rng.gen::<f64>() + 1e-3)
            .collect();
        let total: f64 = raw.iter().sum();
        let p: f64 = contexts
            .iter()
            .zip(&raw)
            .map(|(dist, w)| {
                let pair = &all[rng.gen_range(0..all.len())];
                w / total * prob_negative(pair, dist)
            })
            .sum();
        mixture_min = mixture_min.min(p);
    }

    let tol = 1e-12;
    let pass = uniform_min == Ratio::new(1, 9)
        && floor_min >= delta - tol
        && cond_min >= delta - tol
        && mixture_min >= delta - tol;
    Ok(CorollaryReport {
        delta,
        pairs_per_distribution: all.len(),
        uniform_min_prob_negative: uniform_min,
        floor_distributions: FLOOR_DISTRIBUTIONS,
        floor_min_prob_negative: floor_min,
        contexts: context_count,
        context_min_conditional_prob_negative: cond_min,
        context_min_mixture_prob_negative: mixture_min,
        pass,
    })
}

/// State law and expected reward at one step of a memoryless run.
#[derive(Debug, Clone, Copy)]
pub struct ForwardStep {
    pub dist: StateDistribution,
    pub expected_reward: f64,
}

/// Exact forward recursion of the state law under a memoryless pair.
pub fn memoryless_forward(
    pair: &TablePair,
    kernel: &Kernel,
    initial: &StateDistribution,
    steps: usize,
) -> Vec<ForwardStep> {
    let mut out = Vec::with_capacity(steps);
    let mut dist = *initial;
    for _ in 0..steps {
        let expected_reward = State::all()
            .map(|s| dist.prob(s) * pair_reward(pair, s) as f64)
            .sum();
        out.push(ForwardStep {
            dist,
            expected_reward,
        });
        let mut next = [0.0; NUM_STATES];
        for s in State::all() {
            let p = dist.prob(s);
            if p == 0.0 {
                continue;
            }
            let row = kernel.row(s, pair.alice[s.x as usize - 1], pair.bob[s.y as usize - 1]);
            for (slot, q) in next.iter_mut().zip(row) {
                *slot += p * q;
            }
        }
        dist = StateDistribution(next);
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct PerStepBoundReport {
    pub kernel_id: String,
    pub delta: f64,
    pub bound: f64,
    pub pairs_checked: usize,
    pub horizon: usize,
    pub max_step_expected_reward: f64,
    /// Smallest state probability at steps `n ≥ 1` over all pairs.
    pub min_state_prob_after_start: f64,
    pub pass: bool,
}

/// For every memoryless pair, runs the exact recursion for `horizon` steps
/// and checks each step's expected reward against `1 − 2δ`.
pub fn per_step_bound_memoryless(
    kernel: &Kernel,
    delta: f64,
    initial: &StateDistribution,
    horizon: usize,
) -> Result<PerStepBoundReport> {
    check_delta(delta)?;
    if kernel.min_entry() <= delta {
        return Err(Error::InvalidKernel(format!(
            "kernel minimum entry {} is not above delta {delta}",
            kernel.min_entry()
        )));
    }
    let bound = 1.0 - 2.0 * delta;
    let all = DetGameStrategy::all();
    let mut max_r = f64::NEG_INFINITY;
    let mut min_p = f64::INFINITY;
    for pair in &all {
        let profile = memoryless_forward(pair, kernel, initial, horizon);
        for (n, st) in profile.iter().enumerate() {
            if n >= 1 {
                min_p = min_p.min(st.dist.min());
            }
            // the initial law is not constrained by the kernel floor
            if n >= 1 || initial.min() >= delta {
                max_r = max_r.max(st.expected_reward);
            }
        }
    }
    Ok(PerStepBoundReport {
        kernel_id: kernel.id().to_string(),
        delta,
        bound,
        pairs_checked: all.len(),
        horizon,
        max_step_expected_reward: max_r,
        min_state_prob_after_start: min_p,
        pass: max_r <= bound + 1e-12 && (horizon < 2 || min_p >= delta),
    })
}
