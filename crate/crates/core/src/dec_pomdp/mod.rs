//! Two-agent decentralized POMDP on `{1,2,3}²`.
//!
//! Alice observes `x` and picks a sign triple with product `+1`; Bob
//! observes `y` and picks one with product `−1`. The reward `u^(y)·v^(x)`
//! is `+1` exactly when they agree on the cell `(x, y)`.

pub mod model;
pub mod oracles;
pub mod policy;
pub mod simulate;

pub use crate::mermin_peres::{ActionU, ActionV};
pub use model::{
    cycle_position, enumerate_actions_u, enumerate_actions_v, reward, step, tau, Kernel, State,
    StateDistribution, CYCLE, NUM_STATES,
};
pub use oracles::{
    corollary_checks, exact_expected_reward_memoryless, lemma_oneneg_check, memoryless_forward,
    one_shot_uniform_max, per_step_bound_memoryless, CorollaryReport, LemmaReport, OneShotReport,
    PerStepBoundReport, TablePair,
};
pub use policy::{
    periodic_sync_policies, quantum_mp_policies, ClassicalPolicy, HashedHistoryPolicy,
    HashedRelaxedPolicy, LocalQubits, MemorylessPolicy, Observation, Party, PeriodicSyncAlice,
    PeriodicSyncBob, Policy, QuantumMpAlice, QuantumMpBob, QuantumPolicy, RelaxedObservation,
    RelaxedPolicy,
};
pub use simulate::{
    simulate, trial_seed, CommonRandomness, InfoStructure, SimConfig, StepRecord, TrajectoryRecord,
    TrajectorySummary,
};
