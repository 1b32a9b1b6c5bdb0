//! The Mermin–Peres magic square and the cooperative game played on it.
//!
//! Alice receives a row index `i`, Bob a column index `j`. Alice writes a
//! sign triple for row `i` whose product is `+1`, Bob one for column `j` whose
//! product is `−1`, and they win when they agree on the shared cell `(i, j)`.
//! No classical strategy wins every cell; two shared Bell pairs measured
//! along the square's rows and columns do.
//!
//! Row, column and triple-coordinate indices are 1-based throughout this
//! module, matching the labels of the game.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::Ratio;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::complexlin::{embed_on_factors, CMatrix, FactorShape, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::quantum::{
    bell_pair, collapse, measure_probs, sample_measurement_pure, DensityMatrix,
    DichotomicObservable, PureState, Pvm, COLLAPSE_EPS,
};
use crate::quantum::{sigma_0, sigma_x, sigma_y, sigma_z};

/// Three `±1` entries. Ordered lexicographically with `+` before `−`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignTriple([i8; 3]);

impl SignTriple {
    pub fn new(signs: [i8; 3]) -> Result<Self> {
        if let Some(&bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidSign(bad as i64));
        }
        Ok(SignTriple(signs))
    }

    /// From measurement outcomes, which are exactly `±1.0`.
    pub fn from_outcomes(outcomes: [f64; 3]) -> Result<Self> {
        let mut signs = [0i8; 3];
        for (s, o) in signs.iter_mut().zip(outcomes) {
            *s = if o == 1.0 {
                1
            } else if o == -1.0 {
                -1
            } else {
                return Err(Error::InvalidSign(o as i64));
            };
        }
        Ok(SignTriple(signs))
    }

    /// All eight triples, `+` before `−`, coordinate 1 most significant.
    pub fn all() -> [SignTriple; 8] {
        let mut out = [SignTriple([1; 3]); 8];
        for (n, slot) in out.iter_mut().enumerate() {
            let bit = |b: usize| if n >> b & 1 == 0 { 1 } else { -1 };
            *slot = SignTriple([bit(2), bit(1), bit(0)]);
        }
        out
    }

    /// Coordinate `idx ∈ {1,2,3}`.
    #[inline]
    pub fn get(&self, idx: usize) -> i8 {
        self.0[idx - 1]
    }

    pub fn signs(&self) -> [i8; 3] {
        self.0
    }

    pub fn product(&self) -> i8 {
        self.0.iter().product()
    }
}

impl Ord for SignTriple {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for SignTriple {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            f.write_str(if s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for SignTriple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 3 {
            return Err(Error::Parse(format!(
                "sign triple {s:?} must have 3 characters"
            )));
        }
        let mut signs = [0i8; 3];
        for (slot, ch) in signs.iter_mut().zip(chars) {
            *slot = match ch {
                '+' => 1,
                '-' => -1,
                _ => return Err(Error::Parse(format!("bad sign character {ch:?} in {s:?}"))),
            };
        }
        Ok(SignTriple(signs))
    }
}

impl Serialize for SignTriple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

macro_rules! constrained_triple {
    ($name:ident, $product:expr, $doc:literal) => {
        #[doc = $doc]
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub struct $name(SignTriple);

        impl $name {
            pub const PRODUCT: i8 = $product;

            pub fn new(triple: SignTriple) -> Result<Self> {
                if triple.product() != Self::PRODUCT {
                    return Err(Error::ConstraintViolation(triple.signs()));
                }
                Ok($name(triple))
            }

            /// The four admissible triples in lexicographic order.
            pub fn all() -> [$name; 4] {
                let mut out = [$name(SignTriple([1; 3])); 4];
                let valid = SignTriple::all()
                    .into_iter()
                    .filter(|t| t.product() == Self::PRODUCT);
                for (slot, t) in out.iter_mut().zip(valid) {
                    *slot = $name(t);
                }
                out
            }

            #[inline]
            pub fn get(&self, idx: usize) -> i8 {
                self.0.get(idx)
            }

            pub fn triple(&self) -> SignTriple {
                self.0
            }

            /// Position within [`Self::all`].
            pub fn index(&self) -> usize {
                Self::all().iter().position(|a| a == self).unwrap()
            }
        }

        impl TryFrom<SignTriple> for $name {
            type Error = Error;
            fn try_from(t: SignTriple) -> Result<Self> {
                $name::new(t)
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                $name::new(s.parse()?)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(&self.0, f)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                self.0.serialize(serializer)
            }
        }
    };
}

constrained_triple!(
    ActionU,
    1,
    "Alice's action: a sign triple with product `+1`."
);
constrained_triple!(
    ActionV,
    -1,
    "Bob's action: a sign triple with product `−1`."
);

fn check_index(i: usize) -> Result<()> {
    if (1..=3).contains(&i) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(i))
    }
}

/// 3×3 grid of two-qubit observables. Signs of negated entries are folded
/// into the stored matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MpSquare {
    entries: [[CMatrix; 3]; 3],
}

impl MpSquare {
    /// Arbitrary 4×4 entries, unchecked; see [`validate_square`].
    pub fn from_entries(entries: [[CMatrix; 3]; 3]) -> Result<Self> {
        for m in entries.iter().flatten() {
            if m.dim() != 4 {
                return Err(Error::DimensionMismatch(m.dim(), 4));
            }
        }
        Ok(MpSquare { entries })
    }

    /// Entry at row `i`, column `j`.
    pub fn entry(&self, i: usize, j: usize) -> &CMatrix {
        &self.entries[i - 1][j - 1]
    }

    /// Copy with entry `(i, j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, m: CMatrix) -> Result<Self> {
        check_index(i)?;
        check_index(j)?;
        let mut entries = self.entries.clone();
        entries[i - 1][j - 1] = m;
        MpSquare::from_entries(entries)
    }

    fn row(&self, i: usize) -> [&CMatrix; 3] {
        [self.entry(i, 1), self.entry(i, 2), self.entry(i, 3)]
    }

    fn column(&self, j: usize) -> [&CMatrix; 3] {
        [self.entry(1, j), self.entry(2, j), self.entry(3, j)]
    }
}

/// The standard square:
///
/// ```text
///  σ0⊗σz    σz⊗σ0    σz⊗σz
///  σx⊗σ0    σ0⊗σx    σx⊗σx
/// −σx⊗σz   −σz⊗σx    σy⊗σy
/// ```
pub fn build_square() -> MpSquare {
    let (i, x, y, z) = (sigma_0(), sigma_x(), sigma_y(), sigma_z());
    MpSquare {
        entries: [
            [i.kron(&z), z.kron(&i), z.kron(&z)],
            [x.kron(&i), i.kron(&x), x.kron(&x)],
            [-&x.kron(&z), -&z.kron(&x), y.kron(&y)],
        ],
    }
}

/// Outcome of one check family.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub pass: bool,
    pub max_residual: f64,
    /// Locations that exceeded the tolerance.
    #[serde(skip)]
    pub failing: Vec<String>,
}

/// Per-family results of [`validate_square`], serialized as
/// `{check_name: {pass, max_residual}}`.
#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub checks: BTreeMap<String, CheckResult>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn failing_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, c)| !c.pass)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .values()
            .map(|c| c.max_residual)
            .fold(0.0, f64::max)
    }
}

struct CheckAccumulator {
    max_residual: f64,
    failing: Vec<String>,
}

impl CheckAccumulator {
    fn new() -> Self {
        CheckAccumulator {
            max_residual: 0.0,
            failing: Vec::new(),
        }
    }

    fn record(&mut self, residual: f64, location: impl FnOnce() -> String) {
        self.max_residual = self.max_residual.max(residual);
        if residual.is_nan() || residual > DEFAULT_TOL {
            self.failing.push(location());
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            pass: self.failing.is_empty(),
            max_residual: self.max_residual,
            failing: self.failing,
        }
    }
}

fn product_of(ms: [&CMatrix; 3]) -> CMatrix {
    &(ms[0] * ms[1]) * ms[2]
}

/// Runs every structural check on a square and collects residuals.
pub fn validate_square(sq: &MpSquare) -> ValidationReport {
    let id = CMatrix::identity(4);
    let neg_id = -&id;
    let cells = || (1..=3).flat_map(|i| (1..=3).map(move |j| (i, j)));

    let mut hermitian = CheckAccumulator::new();
    let mut involution = CheckAccumulator::new();
    let mut eigenvalues = CheckAccumulator::new();
    for (i, j) in cells() {
        let m = sq.entry(i, j);
        hermitian.record(m.hermitian_residual(), || format!("entry ({i},{j})"));
        let sq_res = (m * m).max_abs_diff(&id).unwrap();
        involution.record(sq_res, || format!("entry ({i},{j})"));
        let eig_res = match m.hermitian_eigenvalues(1e-15) {
            Ok(eigs) => eigs
                .iter()
                .map(|l| (l - 1.0).abs().min((l + 1.0).abs()))
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        };
        eigenvalues.record(eig_res, || format!("entry ({i},{j})"));
    }

    let mut commutation = CheckAccumulator::new();
    let pairs = [(0, 1), (0, 2), (1, 2)];
    for line in 1..=3 {
        for (label, members) in [("row", sq.row(line)), ("column", sq.column(line))] {
            for (a, b) in pairs {
                let res = members[a].commutator(members[b]).unwrap().max_abs();
                commutation.record(res, || {
                    format!("{label} {line}: positions {} and {}", a + 1, b + 1)
                });
            }
        }
    }

    let mut row_products = CheckAccumulator::new();
    let mut column_products = CheckAccumulator::new();
    for line in 1..=3 {
        let r = product_of(sq.row(line)).max_abs_diff(&id).unwrap();
        row_products.record(r, || format!("row {line}"));
        let c = product_of(sq.column(line)).max_abs_diff(&neg_id).unwrap();
        column_products.record(c, || format!("column {line}"));
    }

    let checks = [
        ("hermitian", hermitian),
        ("involution", involution),
        ("eigenvalues", eigenvalues),
        ("commutation", commutation),
        ("row_products", row_products),
        ("column_products", column_products),
    ]
    .into_iter()
    .map(|(k, acc)| (k.to_string(), acc.finish()))
    .collect();
    ValidationReport { checks }
}

/// Which party performs a measurement, and on which square cell of its line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureStep {
    /// Alice measures entry `(i, l)` of her row.
    Alice(usize),
    /// Bob measures entry `(k, j)` of his column.
    Bob(usize),
}

/// Alice's three measurements followed by Bob's three.
pub const DEFAULT_ORDER: [MeasureStep; 6] = [
    MeasureStep::Alice(1),
    MeasureStep::Alice(2),
    MeasureStep::Alice(3),
    MeasureStep::Bob(1),
    MeasureStep::Bob(2),
    MeasureStep::Bob(3),
];

/// Four-qubit factor positions, ordered `(Alice-1, Bob-1, Alice-2, Bob-2)`.
pub const ALICE_FACTORS: [usize; 2] = [0, 2];
pub const BOB_FACTORS: [usize; 2] = [1, 3];

/// Every square entry lifted to the four-qubit register, once for Alice's
/// factors and once for Bob's, as ready-to-use measurements.
#[derive(Debug, Clone)]
pub struct SquareMeasurements {
    alice: Vec<Pvm>,
    bob: Vec<Pvm>,
}

impl SquareMeasurements {
    pub fn new(sq: &MpSquare) -> Result<Self> {
        let shape = FactorShape::qubits(4);
        let mut alice = Vec::with_capacity(9);
        let mut bob = Vec::with_capacity(9);
        for i in 1..=3 {
            for j in 1..=3 {
                let obs = DichotomicObservable::new(sq.entry(i, j).clone())?;
                for (factors, out) in [(&ALICE_FACTORS, &mut alice), (&BOB_FACTORS, &mut bob)] {
                    let lifted = embed_on_factors(obs.matrix(), factors, &shape)?;
                    out.push(Pvm::from_dichotomic(&DichotomicObservable::new(lifted)?));
                }
            }
        }
        Ok(SquareMeasurements { alice, bob })
    }

    /// Alice's measurement of square entry `(i, l)` on factors 1 and 3.
    pub fn alice(&self, i: usize, l: usize) -> &Pvm {
        &self.alice[(i - 1) * 3 + (l - 1)]
    }

    /// Bob's measurement of square entry `(k, j)` on factors 2 and 4.
    pub fn bob(&self, k: usize, j: usize) -> &Pvm {
        &self.bob[(k - 1) * 3 + (j - 1)]
    }

    fn step_pvm(&self, i: usize, j: usize, step: MeasureStep) -> &Pvm {
        match step {
            MeasureStep::Alice(l) => self.alice(i, l),
            MeasureStep::Bob(k) => self.bob(k, j),
        }
    }
}

/// Measurements for the standard square, built once.
pub fn standard_measurements() -> &'static SquareMeasurements {
    static CELL: OnceLock<SquareMeasurements> = OnceLock::new();
    CELL.get_or_init(|| {
        SquareMeasurements::new(&build_square()).expect("standard square entries are dichotomic")
    })
}

/// `bell ⊗ bell` on `(Alice-1, Bob-1, Alice-2, Bob-2)`.
pub fn two_bell_pairs() -> PureState {
    bell_pair().kron(&bell_pair())
}

fn check_order(order: &[MeasureStep]) -> Result<()> {
    let mut seen = [[false; 3]; 2];
    for step in order {
        let (who, idx) = match *step {
            MeasureStep::Alice(l) => (0, l),
            MeasureStep::Bob(k) => (1, k),
        };
        check_index(idx)?;
        if std::mem::replace(&mut seen[who][idx - 1], true) {
            return Err(Error::Config(format!("measurement {step:?} repeated")));
        }
    }
    if order.len() != 6 {
        return Err(Error::Config("order must list all six measurements".into()));
    }
    Ok(())
}

fn triples_from(outcomes: &[(MeasureStep, f64)]) -> Result<(SignTriple, SignTriple)> {
    let mut a = [0.0; 3];
    let mut b = [0.0; 3];
    for &(step, o) in outcomes {
        match step {
            MeasureStep::Alice(l) => a[l - 1] = o,
            MeasureStep::Bob(k) => b[k - 1] = o,
        }
    }
    Ok((SignTriple::from_outcomes(a)?, SignTriple::from_outcomes(b)?))
}

/// One sampled round of the entanglement strategy with explicit
/// measurements and state.
pub fn quantum_round_with<R: Rng + ?Sized>(
    meas: &SquareMeasurements,
    i: usize,
    j: usize,
    rng: &mut R,
) -> Result<(SignTriple, SignTriple)> {
    check_index(i)?;
    check_index(j)?;
    let mut psi = two_bell_pairs();
    let mut outcomes = Vec::with_capacity(6);
    for step in DEFAULT_ORDER {
        let (o, next) = sample_measurement_pure(meas.step_pvm(i, j, step), &psi, rng)?;
        outcomes.push((step, o));
        psi = next;
    }
    triples_from(&outcomes)
}

/// One round of the entanglement strategy on fresh Bell pairs: Alice
/// measures row `i` on her halves, then Bob measures column `j` on his.
/// Returns Alice's row triple and Bob's column triple.
pub fn quantum_round<R: Rng + ?Sized>(
    i: usize,
    j: usize,
    rng: &mut R,
) -> Result<(SignTriple, SignTriple)> {
    quantum_round_with(standard_measurements(), i, j, rng)
}

/// Exact law of a round's `(alice, bob)` triples.
#[derive(Debug, Clone, Serialize)]
pub struct RoundDistribution {
    pub i: usize,
    pub j: usize,
    pub outcomes: Vec<RoundOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundOutcome {
    pub alice: SignTriple,
    pub bob: SignTriple,
    pub probability: f64,
}

impl RoundDistribution {
    pub fn total(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    /// Every supported outcome agrees on the shared cell.
    pub fn all_winning(&self) -> bool {
        self.outcomes
            .iter()
            .all(|o| o.alice.get(self.j) == o.bob.get(self.i))
    }

    pub fn probability_of(&self, alice: SignTriple, bob: SignTriple) -> f64 {
        self.outcomes
            .iter()
            .find(|o| o.alice == alice && o.bob == bob)
            .map_or(0.0, |o| o.probability)
    }
}

/// Exact distribution for the standard square in the default order.
pub fn exact_round_distribution(i: usize, j: usize) -> Result<RoundDistribution> {
    exact_round_distribution_with(standard_measurements(), i, j, &DEFAULT_ORDER)
}

/// Expands every measurement branch with density matrices, pruning
/// branches of probability at most `COLLAPSE_EPS`.
pub fn exact_round_distribution_with(
    meas: &SquareMeasurements,
    i: usize,
    j: usize,
    order: &[MeasureStep],
) -> Result<RoundDistribution> {
    check_index(i)?;
    check_index(j)?;
    check_order(order)?;
    let rho = DensityMatrix::from_pure(&two_bell_pairs());
    let mut acc: BTreeMap<(SignTriple, SignTriple), f64> = BTreeMap::new();
    let mut path = Vec::with_capacity(6);
    expand(meas, i, j, order, &rho, 1.0, &mut path, &mut acc)?;
    let outcomes = acc
        .into_iter()
        .map(|((alice, bob), probability)| RoundOutcome {
            alice,
            bob,
            probability,
        })
        .collect();
    Ok(RoundDistribution { i, j, outcomes })
}

#[allow(clippy::too_many_arguments)]
fn expand(
    meas: &SquareMeasurements,
    i: usize,
    j: usize,
    order: &[MeasureStep],
    rho: &DensityMatrix,
    weight: f64,
    path: &mut Vec<(MeasureStep, f64)>,
    acc: &mut BTreeMap<(SignTriple, SignTriple), f64>,
) -> Result<()> {
    let Some((&step, rest)) = order.split_first() else {
        let (a, b) = triples_from(path)?;
        *acc.entry((a, b)).or_insert(0.0) += weight;
        return Ok(());
    };
    let pvm = meas.step_pvm(i, j, step);
    for (outcome, p) in measure_probs(pvm, rho)? {
        if p <= COLLAPSE_EPS {
            continue;
        }
        let post = collapse(pvm, rho, outcome)?;
        path.push((step, outcome));
        expand(meas, i, j, rest, &post, weight * p, path, acc)?;
        path.pop();
    }
    Ok(())
}

/// Deterministic classical strategy: a row triple per row index for Alice
/// and a column triple per column index for Bob.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DetGameStrategy {
    pub alice: [ActionU; 3],
    pub bob: [ActionV; 3],
}

impl DetGameStrategy {
    /// Both players agree on cell `(i, j)`.
    pub fn wins_cell(&self, i: usize, j: usize) -> bool {
        self.alice[i - 1].get(j) == self.bob[j - 1].get(i)
    }

    pub fn win_count(&self) -> u32 {
        (1..=3)
            .flat_map(|i| (1..=3).map(move |j| (i, j)))
            .filter(|&(i, j)| self.wins_cell(i, j))
            .count() as u32
    }

    /// Exact win probability under uniform, independent indices.
    pub fn win_probability(&self) -> Ratio<u32> {
        Ratio::new(self.win_count(), 9)
    }

    /// All 64 Alice tables in lexicographic order.
    pub fn alice_tables() -> Vec<[ActionU; 3]> {
        let acts = ActionU::all();
        tables(&acts)
    }

    /// All 64 Bob tables in lexicographic order.
    pub fn bob_tables() -> Vec<[ActionV; 3]> {
        let acts = ActionV::all();
        tables(&acts)
    }

    /// All 4096 strategy pairs, Alice's table most significant.
    pub fn all() -> Vec<DetGameStrategy> {
        let bobs = Self::bob_tables();
        Self::alice_tables()
            .into_iter()
            .flat_map(|alice| bobs.iter().map(move |&bob| DetGameStrategy { alice, bob }))
            .collect()
    }
}

fn tables<T: Copy>(acts: &[T; 4]) -> Vec<[T; 3]> {
    let mut out = Vec::with_capacity(64);
    for a in acts {
        for b in acts {
            for c in acts {
                out.push([*a, *b, *c]);
            }
        }
    }
    out
}

/// Result of enumerating every deterministic classical strategy pair.
#[derive(Debug, Clone, Serialize)]
pub struct BruteForceResult {
    pub pairs_examined: usize,
    #[serde(serialize_with = "ratio_as_string")]
    pub max_win_prob: Ratio<u32>,
    /// Smallest number of losing cells over all pairs.
    pub min_losing_cells: u32,
    pub argmax: Vec<DetGameStrategy>,
}

fn ratio_as_string<S: Serializer>(r: &Ratio<u32>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// Exhaustive search over all 4096 deterministic strategy pairs with
/// integer win counting.
pub fn classical_bruteforce() -> BruteForceResult {
    let all = DetGameStrategy::all();
    let mut best = 0;
    let mut min_losing = 9;
    let mut argmax = Vec::new();
    for s in &all {
        let wins = s.win_count();
        min_losing = min_losing.min(9 - wins);
        if wins > best {
            best = wins;
            argmax.clear();
        }
        if wins == best {
            argmax.push(*s);
        }
    }
    BruteForceResult {
        pairs_examined: all.len(),
        max_win_prob: Ratio::new(best, 9),
        min_losing_cells: min_losing,
        argmax,
    }
}

/// Win probability of a finite mixture `(weight, strategy)`; weights are
/// normalized by their sum.
pub fn mixture_win_probability(mixture: &[(f64, DetGameStrategy)]) -> Result<f64> {
    let total: f64 = mixture.iter().map(|(w, _)| w).sum();
    if mixture.is_empty()
        || mixture.iter().any(|(w, _)| w.is_nan() || *w < 0.0)
        || total.is_nan()
        || total <= 0.0
    {
        return Err(Error::InvalidDistribution("mixture weights".into()));
    }
    Ok(mixture
        .iter()
        .map(|(w, s)| w * s.win_count() as f64 / 9.0)
        .sum::<f64>()
        / total)
}
