//! Agent strategies in three flavors.
//!
//! The information an agent may use is fixed by the trait it implements:
//!
//! - [`ClassicalPolicy`]: its own observation history and the common
//!   randomness history.
//! - [`RelaxedPolicy`]: additionally the other agent's observations up to
//!   the previous step.
//! - [`QuantumPolicy`]: like a classical policy, plus its halves of two
//!   fresh Bell pairs for the current step.
//!
//! A classical policy never sees the other agent's history because no
//! argument carries it.

use std::collections::HashMap;

use crate::complexlin::embed_on_factors;
use crate::complexlin::FactorShape;
use crate::error::Result;
use crate::mermin_peres::{
    standard_measurements, ActionU, ActionV, SignTriple, ALICE_FACTORS, BOB_FACTORS,
};
use crate::quantum::{sample_measurement_pure, DichotomicObservable, PureState, Pvm};
use crate::seed::{derive_seed, Rng};

use super::model::CYCLE;

/// What an agent sees at step `n`.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    pub n: usize,
    /// Own observations `0..=n`.
    pub own: &'a [u8],
    /// Common randomness words `W_0..=W_n`.
    pub common: &'a [u64],
}

impl Observation<'_> {
    #[inline]
    pub fn current(&self) -> u8 {
        self.own[self.n]
    }
}

/// What a relaxed agent sees at step `n`.
#[derive(Debug, Clone, Copy)]
pub struct RelaxedObservation<'a> {
    pub n: usize,
    /// Own observations `0..=n`.
    pub own: &'a [u8],
    /// The other agent's observations `0..n` (excluding the current one).
    pub other_past: &'a [u8],
    pub common: &'a [u64],
}

pub trait ClassicalPolicy<A>: Send {
    fn id(&self) -> String;
    fn act(&mut self, obs: &Observation<'_>) -> A;
}

pub trait RelaxedPolicy<A>: Send {
    fn id(&self) -> String;
    fn act(&mut self, obs: &RelaxedObservation<'_>) -> A;
}

pub trait QuantumPolicy<A>: Send {
    fn id(&self) -> String;
    fn act(&mut self, obs: &Observation<'_>, qubits: &mut LocalQubits<'_>) -> Result<A>;
}

/// A policy of any flavor for an agent whose action type is `A`.
pub enum Policy<A> {
    Classical(Box<dyn ClassicalPolicy<A>>),
    Relaxed(Box<dyn RelaxedPolicy<A>>),
    Quantum(Box<dyn QuantumPolicy<A>>),
}

impl<A> Policy<A> {
    pub fn classical(p: impl ClassicalPolicy<A> + 'static) -> Self {
        Policy::Classical(Box::new(p))
    }

    pub fn relaxed(p: impl RelaxedPolicy<A> + 'static) -> Self {
        Policy::Relaxed(Box::new(p))
    }

    pub fn quantum(p: impl QuantumPolicy<A> + 'static) -> Self {
        Policy::Quantum(Box::new(p))
    }

    pub fn id(&self) -> String {
        match self {
            Policy::Classical(p) => p.id(),
            Policy::Relaxed(p) => p.id(),
            Policy::Quantum(p) => p.id(),
        }
    }

    pub fn flavor(&self) -> &'static str {
        match self {
            Policy::Classical(_) => "classical",
            Policy::Relaxed(_) => "relaxed",
            Policy::Quantum(_) => "quantum",
        }
    }
}

/// Which agent holds a set of qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    fn factors(self) -> &'static [usize; 2] {
        match self {
            Party::Alice => &ALICE_FACTORS,
            Party::Bob => &BOB_FACTORS,
        }
    }
}

/// An agent's access to its halves of the step's two Bell pairs: the shared
/// four-qubit register may only be measured on the agent's own factors.
pub struct LocalQubits<'a> {
    register: &'a mut PureState,
    party: Party,
    rng: &'a mut Rng,
}

impl<'a> LocalQubits<'a> {
    pub(crate) fn new(register: &'a mut PureState, party: Party, rng: &'a mut Rng) -> Self {
        LocalQubits {
            register,
            party,
            rng,
        }
    }

    pub fn party(&self) -> Party {
        self.party
    }

    fn measure_pvm(&mut self, pvm: &Pvm) -> Result<f64> {
        let (outcome, post) = sample_measurement_pure(pvm, self.register, self.rng)?;
        *self.register = post;
        Ok(outcome)
    }

    /// Measures a two-qubit ±1 observable on this agent's two halves.
    pub fn measure(&mut self, obs: &DichotomicObservable) -> Result<f64> {
        let lifted = embed_on_factors(obs.matrix(), self.party.factors(), &FactorShape::qubits(4))?;
        let pvm = Pvm::from_dichotomic(&DichotomicObservable::new(lifted)?);
        self.measure_pvm(&pvm)
    }

    /// Measures entry `(row, col)` of the standard magic square.
    pub fn measure_square_entry(&mut self, row: usize, col: usize) -> Result<f64> {
        let meas = standard_measurements();
        let pvm = match self.party {
            Party::Alice => meas.alice(row, col),
            Party::Bob => meas.bob(row, col),
        };
        self.measure_pvm(pvm)
    }
}

/// Acts on the current observation only, through a fixed table.
#[derive(Debug, Clone)]
pub struct MemorylessPolicy<A> {
    table: [A; 3],
}

impl<A: Copy> MemorylessPolicy<A> {
    pub fn new(table: [A; 3]) -> Self {
        MemorylessPolicy { table }
    }

    pub fn table(&self) -> [A; 3] {
        self.table
    }
}

impl<A: Copy + Send + std::fmt::Display> ClassicalPolicy<A> for MemorylessPolicy<A> {
    fn id(&self) -> String {
        let t: Vec<String> = self.table.iter().map(|a| a.to_string()).collect();
        format!("memoryless[{}]", t.join(","))
    }

    fn act(&mut self, obs: &Observation<'_>) -> A {
        self.table[obs.current() as usize - 1]
    }
}

/// Alice's half of the entanglement strategy: on observing `x` she measures
/// row `x` of the square and plays the three outcomes.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuantumMpAlice;

/// Bob's half: on observing `y` he measures column `y`.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuantumMpBob;

impl QuantumPolicy<ActionU> for QuantumMpAlice {
    fn id(&self) -> String {
        "quantum-mp-alice".into()
    }

    fn act(&mut self, obs: &Observation<'_>, qubits: &mut LocalQubits<'_>) -> Result<ActionU> {
        let i = obs.current() as usize;
        let mut out = [0.0; 3];
        for (l, slot) in out.iter_mut().enumerate() {
            *slot = qubits.measure_square_entry(i, l + 1)?;
        }
        ActionU::new(SignTriple::from_outcomes(out)?)
    }
}

impl QuantumPolicy<ActionV> for QuantumMpBob {
    fn id(&self) -> String {
        "quantum-mp-bob".into()
    }

    fn act(&mut self, obs: &Observation<'_>, qubits: &mut LocalQubits<'_>) -> Result<ActionV> {
        let j = obs.current() as usize;
        let mut out = [0.0; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = qubits.measure_square_entry(k + 1, j)?;
        }
        ActionV::new(SignTriple::from_outcomes(out)?)
    }
}

pub fn quantum_mp_policies() -> (Policy<ActionU>, Policy<ActionV>) {
    (
        Policy::quantum(QuantumMpAlice),
        Policy::quantum(QuantumMpBob),
    )
}

/// Maps each agent's last three observations on the 9-cycle to the cycle
/// position of the current state.
fn cycle_lookup(coord: impl Fn((u8, u8)) -> u8) -> HashMap<[u8; 3], usize> {
    (0..9)
        .map(|p| {
            let at = |k: usize| coord(CYCLE[(p + 9 - k) % 9]);
            ([at(2), at(1), at(0)], p)
        })
        .collect()
}

fn last_three(own: &[u8], n: usize) -> [u8; 3] {
    [own[n - 2], own[n - 1], own[n]]
}

/// Alice's synchronizing strategy for the periodic kernel. From step 2 on
/// she reads Bob's current observation `y` off her last three observations
/// and plays `u^(y) = +1` with both free signs `+1`. Before step 2, or off
/// the cycle, she plays the first action of the enumeration.
#[derive(Debug, Clone)]
pub struct PeriodicSyncAlice {
    lookup: HashMap<[u8; 3], usize>,
}

impl Default for PeriodicSyncAlice {
    fn default() -> Self {
        PeriodicSyncAlice {
            lookup: cycle_lookup(|(x, _)| x),
        }
    }
}

impl PeriodicSyncAlice {
    /// Bob's current observation as inferred from Alice's history.
    pub fn infer_other(&self, own: &[u8], n: usize) -> Option<u8> {
        if n < 2 {
            return None;
        }
        self.lookup.get(&last_three(own, n)).map(|&p| CYCLE[p].1)
    }
}

impl ClassicalPolicy<ActionU> for PeriodicSyncAlice {
    fn id(&self) -> String {
        "periodic-sync-alice".into()
    }

    fn act(&mut self, obs: &Observation<'_>) -> ActionU {
        match self.infer_other(obs.own, obs.n) {
            Some(y) => {
                let mut signs = [1i8; 3];
                signs[y as usize - 1] = 1;
                ActionU::new(SignTriple::new(signs).unwrap()).unwrap()
            }
            None => ActionU::all()[0],
        }
    }
}

/// Bob's synchronizing strategy: from step 2 on he infers Alice's `x`, plays
/// `v^(x) = +1`, `+1` at the smaller free index and `−1` at the larger.
#[derive(Debug, Clone)]
pub struct PeriodicSyncBob {
    lookup: HashMap<[u8; 3], usize>,
}

impl Default for PeriodicSyncBob {
    fn default() -> Self {
        PeriodicSyncBob {
            lookup: cycle_lookup(|(_, y)| y),
        }
    }
}

impl PeriodicSyncBob {
    pub fn infer_other(&self, own: &[u8], n: usize) -> Option<u8> {
        if n < 2 {
            return None;
        }
        self.lookup.get(&last_three(own, n)).map(|&p| CYCLE[p].0)
    }
}

impl ClassicalPolicy<ActionV> for PeriodicSyncBob {
    fn id(&self) -> String {
        "periodic-sync-bob".into()
    }

    fn act(&mut self, obs: &Observation<'_>) -> ActionV {
        match self.infer_other(obs.own, obs.n) {
            Some(x) => {
                let x = x as usize - 1;
                let free: Vec<usize> = (0..3).filter(|&k| k != x).collect();
                let mut signs = [0i8; 3];
                signs[x] = 1;
                signs[free[0]] = 1;
                signs[free[1]] = -1;
                ActionV::new(SignTriple::new(signs).unwrap()).unwrap()
            }
            None => ActionV::all()[0],
        }
    }
}

pub fn periodic_sync_policies() -> (Policy<ActionU>, Policy<ActionV>) {
    (
        Policy::classical(PeriodicSyncAlice::default()),
        Policy::classical(PeriodicSyncBob::default()),
    )
}

/// Anything with exactly four admissible actions.
pub trait FourActions: Copy + Send + 'static {
    fn all_four() -> [Self; 4];
}

impl FourActions for ActionU {
    fn all_four() -> [Self; 4] {
        ActionU::all()
    }
}

impl FourActions for ActionV {
    fn all_four() -> [Self; 4] {
        ActionV::all()
    }
}

fn mix(mut h: u64, values: impl IntoIterator<Item = u64>) -> u64 {
    for (k, v) in values.into_iter().enumerate() {
        h = derive_seed(h ^ v, k as u64);
    }
    h
}

/// Seeded history-dependent randomized classical policy: the action is a
/// fixed pseudo-random function of the last `memory` own observations and
/// the current common-randomness word.
#[derive(Debug, Clone)]
pub struct HashedHistoryPolicy<A> {
    seed: u64,
    memory: usize,
    _marker: std::marker::PhantomData<fn() -> A>,
}

impl<A> HashedHistoryPolicy<A> {
    pub fn new(seed: u64, memory: usize) -> Self {
        HashedHistoryPolicy {
            seed,
            memory: memory.max(1),
            _marker: std::marker::PhantomData,
        }
    }
}

fn window(hist: &[u8], end: usize, memory: usize) -> impl Iterator<Item = u64> + '_ {
    let start = end.saturating_sub(memory);
    hist[start..end].iter().map(|&o| o as u64)
}

impl<A: FourActions> ClassicalPolicy<A> for HashedHistoryPolicy<A> {
    fn id(&self) -> String {
        format!("hashed-history(seed={},memory={})", self.seed, self.memory)
    }

    fn act(&mut self, obs: &Observation<'_>) -> A {
        let w = obs.common[obs.n];
        let h = mix(
            self.seed,
            window(obs.own, obs.n + 1, self.memory).chain([w]),
        );
        A::all_four()[(h % 4) as usize]
    }
}

/// Relaxed counterpart of [`HashedHistoryPolicy`] that also hashes the
/// other agent's recent past observations.
#[derive(Debug, Clone)]
pub struct HashedRelaxedPolicy<A> {
    seed: u64,
    memory: usize,
    _marker: std::marker::PhantomData<fn() -> A>,
}

impl<A> HashedRelaxedPolicy<A> {
    pub fn new(seed: u64, memory: usize) -> Self {
        HashedRelaxedPolicy {
            seed,
            memory: memory.max(1),
            _marker: std::marker::PhantomData,
        }
    }
}

impl<A: FourActions> RelaxedPolicy<A> for HashedRelaxedPolicy<A> {
    fn id(&self) -> String {
        format!("hashed-relaxed(seed={},memory={})", self.seed, self.memory)
    }

    fn act(&mut self, obs: &RelaxedObservation<'_>) -> A {
        let w = obs.common[obs.n];
        let own = window(obs.own, obs.n + 1, self.memory);
        let other = window(obs.other_past, obs.n, self.memory).map(|o| o + 8);
        let h = mix(self.seed, own.chain(other).chain([w]));
        A::all_four()[(h % 4) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alice_infers_bob_from_x_triple() {
        let alice = PeriodicSyncAlice::default();
        assert_eq!(alice.infer_other(&[1, 1, 2], 2), Some(3));
        assert_eq!(alice.infer_other(&[1, 1], 1), None);
        // (1,1,1) never occurs on the cycle
        assert_eq!(alice.infer_other(&[1, 1, 1], 2), None);
    }

    #[test]
    fn bob_fill_rule() {
        let mut bob = PeriodicSyncBob::default();
        // y history (2,3,2) ends at state (2,2): x = 2
        let own = [2, 3, 2];
        let a = bob.act(&Observation {
            n: 2,
            own: &own,
            common: &[0, 0, 0],
        });
        assert_eq!(a.to_string(), "++-");
        assert_eq!(bob.infer_other(&own, 2), Some(2));
    }

    #[test]
    fn hashed_policy_is_a_function_of_its_inputs() {
        let mut p = HashedHistoryPolicy::<ActionU>::new(4, 2);
        let own = [1, 2, 3, 1];
        let common = [5, 6, 7, 8];
        let obs = Observation {
            n: 3,
            own: &own,
            common: &common,
        };
        let a = p.act(&obs);
        assert_eq!(p.act(&obs), a);
        let acts: std::collections::HashSet<String> = (0..64u64)
            .map(|w| {
                let common = [5, 6, 7, w];
                p.act(&Observation {
                    n: 3,
                    own: &own,
                    common: &common,
                })
                .to_string()
            })
            .collect();
        assert_eq!(acts.len(), 4, "common randomness should reach every action");
    }
}
