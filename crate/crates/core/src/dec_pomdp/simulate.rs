//! Running two policies against a kernel.

use std::io::Write;

use rand::RngCore;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mermin_peres::{two_bell_pairs, ActionU, ActionV};
use crate::seed::{derive_seed, rng_for, Rng, Stream};

use super::model::{reward, step, Kernel, State, StateDistribution};
use super::policy::{LocalQubits, Observation, Party, Policy, RelaxedObservation};

/// Which information pattern the run enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InfoStructure {
    /// Each agent acts on its own history only; relaxed policies are rejected.
    #[default]
    Decentralized,
    /// Relaxed policies may also read the other agent's past observations.
    Relaxed,
}

/// i.i.d. uniform 64-bit words `W_0, W_1, …` shared by both agents.
#[derive(Debug, Clone)]
pub struct CommonRandomness {
    seed: u64,
    position: u64,
    rng: Rng,
}

impl CommonRandomness {
    pub fn new(seed: u64) -> Self {
        CommonRandomness {
            seed,
            position: 0,
            rng: rng_for(seed, Stream::CommonRandomness),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn position(&self) -> u64 {
        self.position
    }
}

impl Iterator for CommonRandomness {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        self.position += 1;
        Some(self.rng.next_u64())
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub steps: usize,
    pub seed: u64,
    pub initial: StateDistribution,
    pub info: InfoStructure,
    /// Overrides the seed of the common-randomness stream.
    pub common_seed: Option<u64>,
}

impl SimConfig {
    pub fn new(steps: usize, seed: u64) -> Self {
        SimConfig {
            steps,
            seed,
            initial: StateDistribution::uniform(),
            info: InfoStructure::Decentralized,
            common_seed: None,
        }
    }

    pub fn with_initial(mut self, initial: StateDistribution) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_info(mut self, info: InfoStructure) -> Self {
        self.info = info;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord {
    pub n: usize,
    pub state: State,
    pub u: ActionU,
    pub v: ActionV,
    pub reward: i8,
    pub running_avg: f64,
}

/// Full output of one simulation run.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub kernel_id: String,
    pub alice_policy: String,
    pub bob_policy: String,
    pub steps: Vec<StepRecord>,
}

/// JSON summary of a run.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectorySummary {
    pub seed: u64,
    pub kernel_id: String,
    pub alice_policy: String,
    pub bob_policy: String,
    pub steps: usize,
    pub average_reward: f64,
    pub average_reward_from_step_2: Option<f64>,
    pub standard_error: f64,
    pub negative_rewards: usize,
}

impl TrajectoryRecord {
    pub fn rewards(&self) -> impl Iterator<Item = i8> + '_ {
        self.steps.iter().map(|s| s.reward)
    }

    pub fn average(&self) -> f64 {
        self.average_from(0).unwrap_or(f64::NAN)
    }

    /// Mean reward over steps `start..`; `None` if that range is empty.
    pub fn average_from(&self, start: usize) -> Option<f64> {
        let tail = self.steps.get(start..)?;
        if tail.is_empty() {
            return None;
        }
        let total: i64 = tail.iter().map(|s| s.reward as i64).sum();
        Some(total as f64 / tail.len() as f64)
    }

    /// Sample standard deviation of the rewards divided by `√N`.
    pub fn standard_error(&self) -> f64 {
        let n = self.steps.len() as f64;
        if n < 2.0 {
            return 0.0;
        }
        let mean = self.average();
        let var = self
            .rewards()
            .map(|r| (r as f64 - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        (var / n).sqrt()
    }

    pub fn summary(&self) -> TrajectorySummary {
        TrajectorySummary {
            seed: self.seed,
            kernel_id: self.kernel_id.clone(),
            alice_policy: self.alice_policy.clone(),
            bob_policy: self.bob_policy.clone(),
            steps: self.steps.len(),
            average_reward: self.average(),
            average_reward_from_step_2: self.average_from(2),
            standard_error: self.standard_error(),
            negative_rewards: self.rewards().filter(|&r| r < 0).count(),
        }
    }

    /// Per-step rows `n,x,y,u,v,r,running_avg`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,x,y,u,v,r,running_avg")?;
        for s in &self.steps {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.n, s.state.x, s.state.y, s.u, s.v, s.reward, s.running_avg
            )?;
        }
        Ok(())
    }
}

fn act_u(
    policy: &mut Policy<ActionU>,
    n: usize,
    xs: &[u8],
    ys: &[u8],
    ws: &[u64],
    register: &mut Option<crate::quantum::PureState>,
    qrng: &mut Rng,
) -> Result<ActionU> {
    let obs = Observation {
        n,
        own: xs,
        common: ws,
    };
    match policy {
        Policy::Classical(p) => Ok(p.act(&obs)),
        Policy::Relaxed(p) => Ok(p.act(&RelaxedObservation {
            n,
            own: xs,
            other_past: &ys[..n],
            common: ws,
        })),
        Policy::Quantum(p) => {
            let reg = register
                .as_mut()
                .expect("register prepared for quantum policy");
            p.act(&obs, &mut LocalQubits::new(reg, Party::Alice, qrng))
        }
    }
}

fn act_v(
    policy: &mut Policy<ActionV>,
    n: usize,
    xs: &[u8],
    ys: &[u8],
    ws: &[u64],
    register: &mut Option<crate::quantum::PureState>,
    qrng: &mut Rng,
) -> Result<ActionV> {
    let obs = Observation {
        n,
        own: ys,
        common: ws,
    };
    match policy {
        Policy::Classical(p) => Ok(p.act(&obs)),
        Policy::Relaxed(p) => Ok(p.act(&RelaxedObservation {
            n,
            own: ys,
            other_past: &xs[..n],
            common: ws,
        })),
        Policy::Quantum(p) => {
            let reg = register
                .as_mut()
                .expect("register prepared for quantum policy");
            p.act(&obs, &mut LocalQubits::new(reg, Party::Bob, qrng))
        }
    }
}

/// Runs `config.steps` steps.
///
/// At every step both agents receive the same fresh word `W_n`. If either
/// policy is entanglement-assisted, two fresh Bell pairs are prepared and
/// each agent may measure only its own halves; Alice acts before Bob.
pub fn simulate(
    alice: &mut Policy<ActionU>,
    bob: &mut Policy<ActionV>,
    kernel: &Kernel,
    config: &SimConfig,
) -> Result<TrajectoryRecord> {
    if config.steps == 0 {
        return Err(Error::Config("steps must be at least 1".into()));
    }
    if config.info == InfoStructure::Decentralized {
        for (who, flavor) in [("alice", alice.flavor()), ("bob", bob.flavor())] {
            if flavor == "relaxed" {
                return Err(Error::Config(format!(
                    "{who} has a relaxed policy but the run is decentralized"
                )));
            }
        }
    }
    let quantum = matches!(alice, Policy::Quantum(_)) || matches!(bob, Policy::Quantum(_));

    let mut env = rng_for(config.seed, Stream::Environment);
    let mut qrng = rng_for(config.seed, Stream::Measurement);
    let mut common = CommonRandomness::new(config.common_seed.unwrap_or(config.seed));

    let n_steps = config.steps;
    let mut xs = Vec::with_capacity(n_steps);
    let mut ys = Vec::with_capacity(n_steps);
    let mut ws = Vec::with_capacity(n_steps);
    let mut records = Vec::with_capacity(n_steps);
    let mut total: i64 = 0;

    let mut state = config.initial.sample(&mut env);
    for n in 0..n_steps {
        xs.push(state.x);
        ys.push(state.y);
        ws.push(common.next().unwrap());

        let mut register = quantum.then(two_bell_pairs);
        let u = act_u(alice, n, &xs, &ys, &ws, &mut register, &mut qrng)?;
        let v = act_v(bob, n, &xs, &ys, &ws, &mut register, &mut qrng)?;

        let r = reward(state, u, v);
        total += r as i64;
        records.push(StepRecord {
            n,
            state,
            u,
            v,
            reward: r,
            running_avg: total as f64 / (n + 1) as f64,
        });
        state = step(state, u, v, kernel, &mut env);
    }

    Ok(TrajectoryRecord {
        seed: config.seed,
        kernel_id: kernel.id().to_string(),
        alice_policy: alice.id(),
        bob_policy: bob.id(),
        steps: records,
    })
}

/// Seed for trial `index` of a batch started from `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    derive_seed(seed, index)
}
