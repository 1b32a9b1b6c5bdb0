//! States, rewards, state distributions and transition kernels.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mermin_peres::{ActionU, ActionV};
use crate::seed::{rng_for, Stream};

/// Number of joint states.
pub const NUM_STATES: usize = 9;

/// Joint state `(x, y)` with `x, y ∈ {1,2,3}`; Alice observes `x`, Bob `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub x: u8,
    pub y: u8,
}

impl State {
    pub fn new(x: u8, y: u8) -> Result<Self> {
        for v in [x, y] {
            if !(1..=3).contains(&v) {
                return Err(Error::IndexOutOfRange(v as usize));
            }
        }
        Ok(State { x, y })
    }

    /// Row-major position in `0..9`.
    #[inline]
    pub fn index(self) -> usize {
        (self.x as usize - 1) * 3 + (self.y as usize - 1)
    }

    pub fn from_index(idx: usize) -> State {
        assert!(idx < NUM_STATES);
        State {
            x: (idx / 3) as u8 + 1,
            y: (idx % 3) as u8 + 1,
        }
    }

    pub fn all() -> impl Iterator<Item = State> {
        (0..NUM_STATES).map(State::from_index)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl FromStr for State {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (x, y) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("state {s:?} must look like \"x,y\"")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u8>()
                .map_err(|e| Error::Parse(format!("state {s:?}: {e}")))
        };
        State::new(parse(x)?, parse(y)?)
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `r((x, y), u, v) = u^(y) · v^(x)`.
#[inline]
pub fn reward(state: State, u: ActionU, v: ActionV) -> i8 {
    u.get(state.y as usize) * v.get(state.x as usize)
}

pub fn enumerate_actions_u() -> [ActionU; 4] {
    ActionU::all()
}

pub fn enumerate_actions_v() -> [ActionV; 4] {
    ActionV::all()
}

/// Probability vector over the nine states, indexed by [`State::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateDistribution(pub [f64; NUM_STATES]);

impl StateDistribution {
    pub fn new(p: [f64; NUM_STATES]) -> Result<Self> {
        if p.iter().any(|&q| q < 0.0 || !q.is_finite()) {
            return Err(Error::InvalidDistribution(format!(
                "negative or non-finite entry in {p:?}"
            )));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDistribution(format!("sums to {total}")));
        }
        Ok(StateDistribution(p))
    }

    pub fn uniform() -> Self {
        StateDistribution([1.0 / 9.0; NUM_STATES])
    }

    pub fn point(s: State) -> Self {
        let mut p = [0.0; NUM_STATES];
        p[s.index()] = 1.0;
        StateDistribution(p)
    }

    /// `δ + (1 − 9δ)·w` with `w` a uniformly random simplex point; every
    /// entry strictly exceeds `δ`.
    pub fn random_floor<R: Rng + ?Sized>(delta: f64, rng: &mut R) -> Result<Self> {
        check_delta(delta)?;
        let w = random_simplex(rng);
        let mut p = [0.0; NUM_STATES];
        for (slot, wi) in p.iter_mut().zip(w) {
            *slot = delta + (1.0 - 9.0 * delta) * wi;
        }
        Ok(StateDistribution(p))
    }

    pub fn prob(&self, s: State) -> f64 {
        self.0[s.index()]
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Inverse-CDF draw over states in row-major order.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> State {
        sample_index(&self.0, rng)
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 / 9.0 {
        Ok(())
    } else {
        Err(Error::InvalidDelta(delta))
    }
}

/// Flat Dirichlet draw via normalized unit exponentials.
fn random_simplex<R: Rng + ?Sized>(rng: &mut R) -> [f64; NUM_STATES] {
    let mut w = [0.0; NUM_STATES];
    for slot in w.iter_mut() {
        let mut e = 0.0;
        while e == 0.0 {
            let u: f64 = rng.gen();
            e = -(1.0 - u).ln();
        }
        *slot = e;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

fn sample_index<R: Rng + ?Sized>(p: &[f64; NUM_STATES], rng: &mut R) -> State {
    let u: f64 = rng.gen();
    let mut cum = 0.0;
    for (idx, &q) in p.iter().enumerate() {
        cum += q;
        if u < cum {
            return State::from_index(idx);
        }
    }
    let last = p.iter().rposition(|&q| q > 0.0).unwrap_or(NUM_STATES - 1);
    State::from_index(last)
}

/// The deterministic 9-cycle through the state space.
pub const CYCLE: [(u8, u8); NUM_STATES] = [
    (1, 1),
    (1, 2),
    (2, 3),
    (2, 2),
    (3, 3),
    (3, 1),
    (1, 3),
    (2, 1),
    (3, 2),
];

/// Position of `s` on [`CYCLE`].
pub fn cycle_position(s: State) -> usize {
    CYCLE
        .iter()
        .position(|&(x, y)| x == s.x && y == s.y)
        .unwrap()
}

/// Successor of `s` along the 9-cycle.
pub fn tau(s: State) -> State {
    let (x, y) = CYCLE[(cycle_position(s) + 1) % NUM_STATES];
    State { x, y }
}

const ROWS: usize = NUM_STATES * 4 * 4;

/// Transition kernel `q(s' | s, u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    id: String,
    declared_delta: f64,
    table: Vec<[f64; NUM_STATES]>,
}

#[inline]
fn row_index(s: State, u: ActionU, v: ActionV) -> usize {
    (s.index() * 4 + u.index()) * 4 + v.index()
}

impl Kernel {
    /// Validates every row and, when `declared_delta > 0`, the strict floor.
    pub fn new(
        id: impl Into<String>,
        declared_delta: f64,
        table: Vec<[f64; NUM_STATES]>,
    ) -> Result<Self> {
        let k = Kernel {
            id: id.into(),
            declared_delta,
            table,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        if self.table.len() != ROWS {
            return Err(Error::InvalidKernel(format!(
                "{} rows, expected {ROWS}",
                self.table.len()
            )));
        }
        if self.declared_delta.is_nan()
            || self.declared_delta < 0.0
            || self.declared_delta >= 1.0 / 9.0
        {
            return Err(Error::InvalidKernel(format!(
                "declared delta {} outside [0, 1/9)",
                self.declared_delta
            )));
        }
        for (r, row) in self.table.iter().enumerate() {
            if row.iter().any(|&p| p < 0.0 || !p.is_finite()) {
                return Err(Error::InvalidKernel(format!(
                    "row {r} has a negative entry"
                )));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidKernel(format!("row {r} sums to {total}")));
            }
            if self.declared_delta > 0.0 && row.iter().any(|&p| p <= self.declared_delta) {
                return Err(Error::InvalidKernel(format!(
                    "row {r} has an entry at or below delta {}",
                    self.declared_delta
                )));
            }
        }
        Ok(())
    }

    /// Every row uniform over the nine states; declared delta 0.
    pub fn uniform() -> Self {
        Kernel {
            id: "uniform".into(),
            declared_delta: 0.0,
            table: vec![[1.0 / 9.0; NUM_STATES]; ROWS],
        }
    }

    /// Rows `δ·1 + (1 − 9δ)·w` with seeded random simplex points `w`.
    pub fn delta_floor(seed: u64, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        let mut rng = rng_for(seed, Stream::Construction);
        let table = (0..ROWS)
            .map(|_| StateDistribution::random_floor(delta, &mut rng).map(|d| d.0))
            .collect::<Result<Vec<_>>>()?;
        Kernel::new(
            format!("delta-floor(delta={delta},seed={seed})"),
            delta,
            table,
        )
    }

    /// Point masses following [`tau`] regardless of the actions.
    pub fn periodic() -> Self {
        let mut table = vec![[0.0; NUM_STATES]; ROWS];
        for s in State::all() {
            let next = tau(s).index();
            for u in ActionU::all() {
                for v in ActionV::all() {
                    table[row_index(s, u, v)][next] = 1.0;
                }
            }
        }
        Kernel {
            id: "periodic".into(),
            declared_delta: 0.0,
            table,
        }
    }

    /// Same table with a different declared floor, re-validated.
    pub fn with_declared_delta(mut self, delta: f64) -> Result<Self> {
        self.declared_delta = delta;
        self.validate()?;
        Ok(self)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn declared_delta(&self) -> f64 {
        self.declared_delta
    }

    pub fn row(&self, s: State, u: ActionU, v: ActionV) -> &[f64; NUM_STATES] {
        &self.table[row_index(s, u, v)]
    }

    /// Smallest transition probability anywhere in the table.
    pub fn min_entry(&self) -> f64 {
        self.table
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&KernelFile::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: KernelFile = serde_json::from_str(s)?;
        file.try_into()
    }
}

/// Next state drawn from `q(· | s, u, v)` by inverse CDF in row-major order.
pub fn step<R: Rng + ?Sized>(
    s: State,
    u: ActionU,
    v: ActionV,
    kernel: &Kernel,
    rng: &mut R,
) -> State {
    sample_index(kernel.row(s, u, v), rng)
}

/// Alice action → Bob action → next state → probability.
type ByAliceAction = BTreeMap<String, BTreeMap<String, BTreeMap<String, f64>>>;

/// On-disk kernel layout: state → Alice action → Bob action → next state → probability.
#[derive(Debug, Serialize, Deserialize)]
struct KernelFile {
    id: String,
    declared_delta: f64,
    transitions: BTreeMap<String, ByAliceAction>,
}

impl From<&Kernel> for KernelFile {
    fn from(k: &Kernel) -> Self {
        let mut transitions = BTreeMap::new();
        for s in State::all() {
            let by_u: &mut BTreeMap<_, BTreeMap<_, _>> =
                transitions.entry(s.to_string()).or_default();
            for u in ActionU::all() {
                let by_v = by_u.entry(u.to_string()).or_default();
                for v in ActionV::all() {
                    let row = k.row(s, u, v);
                    let next = State::all()
                        .map(|t| (t.to_string(), row[t.index()]))
                        .collect();
                    by_v.insert(v.to_string(), next);
                }
            }
        }
        KernelFile {
            id: k.id.clone(),
            declared_delta: k.declared_delta,
            transitions,
        }
    }
}

impl TryFrom<KernelFile> for Kernel {
    type Error = Error;
    fn try_from(f: KernelFile) -> Result<Self> {
        let mut table = vec![[f64::NAN; NUM_STATES]; ROWS];
        let mut filled = [false; ROWS];
        for (s_key, by_u) in &f.transitions {
            let s: State = s_key.parse()?;
            for (u_key, by_v) in by_u {
                let u: ActionU = u_key.parse()?;
                for (v_key, next) in by_v {
                    let v: ActionV = v_key.parse()?;
                    let r = row_index(s, u, v);
                    let mut row = [0.0; NUM_STATES];
                    for (t_key, &p) in next {
                        let t: State = t_key.parse()?;
                        row[t.index()] = p;
                    }
                    table[r] = row;
                    filled[r] = true;
                }
            }
        }
        if let Some(missing) = filled.iter().position(|&f| !f) {
            return Err(Error::InvalidKernel(format!(
                "missing transition row {missing}"
            )));
        }
        Kernel::new(f.id, f.declared_delta, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(s: &str) -> ActionU {
        s.parse().unwrap()
    }
    fn v(s: &str) -> ActionV {
        s.parse().unwrap()
    }

    #[test]
    fn action_sets_by_filtering() {
        let all: Vec<[i8; 3]> = (0..8)
            .map(|n| [0, 1, 2].map(|b| if n >> (2 - b) & 1 == 0 { 1 } else { -1 }))
            .collect();
        let plus: Vec<[i8; 3]> = all
            .iter()
            .copied()
            .filter(|t| t.iter().product::<i8>() == 1)
            .collect();
        let minus: Vec<[i8; 3]> = all
            .iter()
            .copied()
            .filter(|t| t.iter().product::<i8>() == -1)
            .collect();
        let us: Vec<[i8; 3]> = enumerate_actions_u()
            .iter()
            .map(|a| a.triple().signs())
            .collect();
        let vs: Vec<[i8; 3]> = enumerate_actions_v()
            .iter()
            .map(|a| a.triple().signs())
            .collect();
        assert_eq!(us, plus);
        assert_eq!(vs, minus);
    }

    #[test]
    fn reward_examples() {
        let s = State::new(3, 2).unwrap();
        assert_eq!(reward(s, u("+--"), v("++-")), 1);
        for s in State::all() {
            assert_eq!(reward(s, u("+++"), v("---")), -1);
        }
    }

    #[test]
    fn state_parsing() {
        let s: State = "2,3".parse().unwrap();
        assert_eq!(s, State { x: 2, y: 3 });
        assert_eq!(State::from_index(s.index()), s);
        assert!("4,1".parse::<State>().is_err());
        assert!("21".parse::<State>().is_err());
    }

    #[test]
    fn periodic_walk() {
        assert_eq!(tau(State::new(1, 1).unwrap()), State::new(1, 2).unwrap());
        assert_eq!(tau(State::new(1, 2).unwrap()), State::new(2, 3).unwrap());
        assert_eq!(tau(State::new(3, 2).unwrap()), State::new(1, 1).unwrap());
        for s in State::all() {
            let mut t = s;
            for k in 1..=9 {
                t = tau(t);
                assert_eq!(t == s, k == 9);
            }
        }
    }

    #[test]
    fn kernel_constructors_validate() {
        assert!(Kernel::uniform().validate().is_ok());
        assert!(Kernel::uniform().with_declared_delta(0.1).is_ok());
        assert!(Kernel::uniform().with_declared_delta(1.0 / 9.0).is_err());
        assert!(Kernel::periodic().validate().is_ok());
        let k = Kernel::delta_floor(5, 0.05).unwrap();
        assert!(k.min_entry() > 0.05);
        assert!(matches!(
            Kernel::delta_floor(5, 0.2),
            Err(Error::InvalidDelta(_))
        ));
        assert!(matches!(
            Kernel::delta_floor(5, 0.0),
            Err(Error::InvalidDelta(_))
        ));
        assert_eq!(Kernel::delta_floor(5, 0.05).unwrap(), k);
    }

    #[test]
    fn kernel_rejects_bad_rows() {
        let mut table = vec![[1.0 / 9.0; NUM_STATES]; ROWS];
        table[3][0] = 0.5;
        assert!(Kernel::new("bad", 0.0, table.clone()).is_err());
        table[3] = [0.0; NUM_STATES];
        table[3][0] = 1.0;
        assert!(Kernel::new("ok", 0.0, table.clone()).is_ok());
        assert!(Kernel::new("floor", 0.01, table).is_err());
        assert!(Kernel::new("short", 0.0, vec![[1.0 / 9.0; NUM_STATES]; 3]).is_err());
    }

    #[test]
    fn periodic_step_is_deterministic() {
        let k = Kernel::periodic();
        let mut rng = rng_for(3, Stream::Environment);
        let s = State::new(1, 2).unwrap();
        for a in ActionU::all() {
            for b in ActionV::all() {
                assert_eq!(step(s, a, b, &k, &mut rng), State::new(2, 3).unwrap());
            }
        }
    }

    #[test]
    fn uniform_step_frequencies() {
        let k = Kernel::uniform();
        let mut rng = rng_for(11, Stream::Environment);
        let n = 100_000;
        let mut counts = [0usize; NUM_STATES];
        let s = State::new(1, 1).unwrap();
        for _ in 0..n {
            counts[step(s, u("+++"), v("++-"), &k, &mut rng).index()] += 1;
        }
        let p = 1.0 / 9.0;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        for c in counts {
            assert!((c as f64 / n as f64 - p).abs() < 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn kernel_json_roundtrip() {
        let k = Kernel::delta_floor(9, 0.03).unwrap();
        let text = k.to_json().unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["transitions"]["2,3"]["+--"]["-++"]["1,1"]
            .as_f64()
            .is_some());
        assert_eq!(Kernel::from_json(&text).unwrap(), k);

        let mut broken = v.clone();
        broken["transitions"]["2,3"]
            .as_object_mut()
            .unwrap()
            .remove("+--");
        assert!(Kernel::from_json(&broken.to_string()).is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(StateDistribution::new([0.1; 9]).is_err());
        let mut p = [0.0; 9];
        p[0] = 1.0;
        assert!(StateDistribution::new(p).is_ok());
        p[1] = -0.5;
        p[0] = 1.5;
        assert!(StateDistribution::new(p).is_err());
    }
}
