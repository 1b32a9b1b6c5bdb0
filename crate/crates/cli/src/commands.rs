use std::collections::BTreeMap;

use clap::ValueEnum;
use num_rational::Ratio;
use serde_json::{json, Value};

use qdpomdp::complexlin::c;
use qdpomdp::dec_pomdp::oracles::{
    corollary_checks, lemma_oneneg_check, memoryless_forward, one_shot_uniform_max,
};
use qdpomdp::dec_pomdp::{
    simulate, ActionU, ActionV, HashedHistoryPolicy, Kernel, MemorylessPolicy, PeriodicSyncAlice,
    PeriodicSyncBob, Policy, QuantumMpAlice, QuantumMpBob, SimConfig, StateDistribution,
};
use qdpomdp::mermin_peres::{
    build_square, classical_bruteforce, exact_round_distribution, quantum_round, validate_square,
    DetGameStrategy,
};
use qdpomdp::quantum::{bell_pair, partial_transpose_spectrum, DensityMatrix, PureState};
use qdpomdp::seed::{derive_seed, rng_for, Stream};

use crate::config::{Format, KernelSel, PolicySel, RunConfig};

/// Failures that are not assertion failures: bad input or I/O.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] qdpomdp::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError::Usage(s)
    }
}

pub struct Report {
    pub results: Value,
    pub claim: &'static str,
    pub pass: bool,
    /// Per-step rows, when CSV output was requested.
    pub csv: Option<String>,
}

const PROB_TOL: f64 = 1e-12;
const EIG_TOL: f64 = 1e-9;
const SIGMA_MULT: f64 = 3.0;
/// Horizon of the exact forward recursion for memoryless pairs.
const EXACT_HORIZON: usize = 50;
const ORACLE_CONTEXTS: usize = 8;

pub fn validate_square_cmd(tamper: bool) -> Result<Report, CliError> {
    let mut sq = build_square();
    if tamper {
        let flipped = -sq.entry(3, 3);
        sq = sq.with_entry(3, 3, flipped)?;
    }
    let report = validate_square(&sq);
    let locations: BTreeMap<&str, &[String]> = report
        .checks
        .iter()
        .filter(|(_, c)| !c.pass)
        .map(|(k, c)| (k.as_str(), c.failing.as_slice()))
        .collect();
    Ok(Report {
        results: json!({
            "checks": report,
            "max_residual": report.max_residual(),
            "failing_checks": report.failing_checks(),
            "failing_locations": locations,
        }),
        claim:
            "Each of the nine square entries is a Hermitian involution; entries in a common row \
                or column commute; every row multiplies to +I and every column to -I.",
        pass: report.all_pass(),
        csv: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GameMode {
    ClassicalBruteforce,
    QuantumMc,
    QuantumExact,
}

const QUANTUM_GAME_CLAIM: &str = "Players sharing two Bell pairs who measure their row and column \
                                  of the square win every round of the magic-square game.";

pub fn game_cmd(mode: GameMode, cfg: &RunConfig) -> Result<Report, CliError> {
    match mode {
        GameMode::ClassicalBruteforce => {
            let r = classical_bruteforce();
            Ok(Report {
                pass: r.pairs_examined == 4096 && r.max_win_prob == Ratio::new(8, 9),
                results: json!({
                    "pairs_examined": r.pairs_examined,
                    "max_win_prob": r.max_win_prob.to_string(),
                    "min_losing_cells": r.min_losing_cells,
                    "argmax_count": r.argmax.len(),
                    "argmax": r.argmax,
                }),
                claim: "No deterministic, hence no randomized, classical strategy pair wins the \
                        magic-square game with probability above 8/9.",
                csv: None,
            })
        }
        GameMode::QuantumMc => {
            let seed = cfg.require_seed()?;
            let mut counts = [[0usize; 3]; 3];
            let mut losses = 0usize;
            for t in 0..cfg.trials {
                let (i, j) = (t % 9 / 3 + 1, t % 3 + 1);
                let mut rng = rng_for(derive_seed(seed, t as u64), Stream::Measurement);
                let (a, b) = quantum_round(i, j, &mut rng)?;
                counts[i - 1][j - 1] += 1;
                if a.get(j) != b.get(i) {
                    losses += 1;
                }
            }
            let wins = cfg.trials - losses;
            Ok(Report {
                pass: losses == 0,
                results: json!({
                    "trials": cfg.trials,
                    "wins": wins,
                    "losses": losses,
                    "win_frequency": wins as f64 / cfg.trials as f64,
                    "rounds_per_cell": counts,
                }),
                claim: QUANTUM_GAME_CLAIM,
                csv: None,
            })
        }
        GameMode::QuantumExact => {
            let mut dists = Vec::with_capacity(9);
            let mut pass = true;
            for i in 1..=3 {
                for j in 1..=3 {
                    let d = exact_round_distribution(i, j)?;
                    pass &= (d.total() - 1.0).abs() <= PROB_TOL && d.all_winning();
                    dists.push(json!({
                        "total": d.total(),
                        "all_winning": d.all_winning(),
                        "distribution": d,
                    }));
                }
            }
            Ok(Report {
                results: json!({ "cells": dists }),
                claim: QUANTUM_GAME_CLAIM,
                pass,
                csv: None,
            })
        }
    }
}

fn load_kernel(cfg: &RunConfig, seed: u64) -> Result<Kernel, CliError> {
    Ok(match &cfg.kernel {
        KernelSel::Uniform => Kernel::uniform(),
        KernelSel::DeltaFloor => Kernel::delta_floor(seed, cfg.delta)?,
        KernelSel::Periodic => Kernel::periodic(),
        KernelSel::File { path } => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read kernel {}: {e}", path.display()))
            })?;
            Kernel::from_json(&text)?
        }
    })
}

fn parse_table<A: std::str::FromStr<Err = qdpomdp::Error>>(
    t: &[String; 3],
) -> Result<[A; 3], CliError> {
    Ok([t[0].parse()?, t[1].parse()?, t[2].parse()?])
}

fn best_pair() -> DetGameStrategy {
    classical_bruteforce().argmax[0]
}

/// Memory window of the `hashed` policy.
const HASHED_MEMORY: usize = 3;

fn alice_policy(sel: &PolicySel, seed: u64) -> Result<Policy<ActionU>, CliError> {
    Ok(match sel {
        PolicySel::QuantumMp => Policy::quantum(QuantumMpAlice),
        PolicySel::PeriodicSync => Policy::classical(PeriodicSyncAlice::default()),
        PolicySel::BestMemoryless => Policy::classical(MemorylessPolicy::new(best_pair().alice)),
        PolicySel::Hashed => Policy::classical(HashedHistoryPolicy::new(
            derive_seed(seed, 1),
            HASHED_MEMORY,
        )),
        PolicySel::Memoryless(t) => Policy::classical(MemorylessPolicy::new(parse_table(t)?)),
    })
}

fn bob_policy(sel: &PolicySel, seed: u64) -> Result<Policy<ActionV>, CliError> {
    Ok(match sel {
        PolicySel::QuantumMp => Policy::quantum(QuantumMpBob),
        PolicySel::PeriodicSync => Policy::classical(PeriodicSyncBob::default()),
        PolicySel::BestMemoryless => Policy::classical(MemorylessPolicy::new(best_pair().bob)),
        PolicySel::Hashed => Policy::classical(HashedHistoryPolicy::new(
            derive_seed(seed, 2),
            HASHED_MEMORY,
        )),
        PolicySel::Memoryless(t) => Policy::classical(MemorylessPolicy::new(parse_table(t)?)),
    })
}

fn memoryless_table_pair(cfg: &RunConfig) -> Result<Option<DetGameStrategy>, CliError> {
    let alice = match &cfg.alice {
        PolicySel::BestMemoryless => best_pair().alice,
        PolicySel::Memoryless(t) => parse_table(t)?,
        _ => return Ok(None),
    };
    let bob = match &cfg.bob {
        PolicySel::BestMemoryless => best_pair().bob,
        PolicySel::Memoryless(t) => parse_table(t)?,
        _ => return Ok(None),
    };
    Ok(Some(DetGameStrategy { alice, bob }))
}

pub fn pomdp_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let seed = cfg.require_seed()?;
    let kernel = load_kernel(cfg, seed)?;
    let mut alice = alice_policy(&cfg.alice, seed)?;
    let mut bob = bob_policy(&cfg.bob, seed)?;

    let mut warnings = Vec::new();
    let sync = cfg.alice == PolicySel::PeriodicSync || cfg.bob == PolicySel::PeriodicSync;
    if sync && cfg.kernel != KernelSel::Periodic {
        warnings.push("periodic-sync policies assume the periodic kernel".to_string());
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }

    let rec = simulate(
        &mut alice,
        &mut bob,
        &kernel,
        &SimConfig::new(cfg.steps, seed),
    )?;
    let summary = rec.summary();
    let quantum = cfg.alice == PolicySel::QuantumMp && cfg.bob == PolicySel::QuantumMp;
    let classical = alice.flavor() == "classical" && bob.flavor() == "classical";

    let mut bound_check = Value::Null;
    let (claim, pass) = if quantum {
        (
            "With fresh entanglement at every step, the decentralized agents earn reward 1 at \
             every step, so the long-run average reward is 1.",
            summary.negative_rewards == 0 && summary.average_reward == 1.0,
        )
    } else if cfg.alice == PolicySel::PeriodicSync
        && cfg.bob == PolicySel::PeriodicSync
        && cfg.kernel == KernelSel::Periodic
    {
        (
            "On the deterministic 9-cycle kernel, classical agents that read the other's \
             observation off their own last three observations earn reward 1 at every step \
             from step 2 on.",
            summary.average_reward_from_step_2 == Some(1.0),
        )
    } else if classical
        && (matches!(cfg.kernel, KernelSel::Uniform) || kernel.declared_delta() > 0.0)
    {
        let (bound, claim) = if cfg.kernel == KernelSel::Uniform {
            (
                7.0 / 9.0,
                "When states are i.i.d. uniform, any classical decentralized policy earns at most \
                 7/9 expected reward per step.",
            )
        } else {
            (
                1.0 - 2.0 * kernel.declared_delta(),
                "When every transition probability exceeds delta, any classical decentralized \
                 policy earns at most 1 - 2*delta expected reward per step.",
            )
        };
        let limit = bound + SIGMA_MULT * summary.standard_error;
        let mut pass = summary.average_reward <= limit;
        let exact = match memoryless_table_pair(cfg)? {
            Some(pair) => {
                let profile = memoryless_forward(
                    &pair,
                    &kernel,
                    &StateDistribution::uniform(),
                    cfg.steps.min(EXACT_HORIZON),
                );
                let max = profile
                    .iter()
                    .map(|s| s.expected_reward)
                    .fold(f64::NEG_INFINITY, f64::max);
                pass &= max <= bound + PROB_TOL;
                Some(max)
            }
            None => None,
        };
        bound_check = json!({
            "bound": bound,
            "monte_carlo_limit": limit,
            "exact_per_step_max": exact,
        });
        (claim, pass)
    } else {
        (
            "No bound applies to this policy and kernel combination; the run is reported \
             for information.",
            true,
        )
    };

    let csv = match cfg.format {
        Format::Csv => {
            let mut buf = Vec::new();
            rec.write_csv(&mut buf)?;
            Some(String::from_utf8(buf).expect("csv is ascii"))
        }
        Format::Json => None,
    };
    Ok(Report {
        results: json!({
            "summary": summary,
            "bound_check": bound_check,
            "warnings": warnings,
        }),
        claim,
        pass,
        csv,
    })
}

/// Seed used by `oracles` when none is given.
const ORACLE_DEFAULT_SEED: u64 = 0;

pub fn oracles_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let seed = cfg.seed.unwrap_or(ORACLE_DEFAULT_SEED);
    let lemma = lemma_oneneg_check();
    let corollary = corollary_checks(cfg.delta, ORACLE_CONTEXTS, seed)?;
    let one_shot = one_shot_uniform_max();
    let pass = lemma.pass
        && corollary.pass
        && corollary.uniform_min_prob_negative == Ratio::new(1, 9)
        && one_shot.max_expected_reward == Ratio::new(7, 9);
    Ok(Report {
        results: json!({
            "seed": seed,
            "lemma": lemma,
            "corollary": corollary,
            "one_shot": one_shot,
        }),
        claim: "Every admissible action pair disagrees on at least one cell, so every classical \
                table pair loses with probability at least delta whenever each state has \
                probability at least delta; under the uniform law the minimum losing \
                probability is 1/9 and the best one-shot expected reward is 7/9.",
        pass,
        csv: None,
    })
}

fn witness(
    name: &str,
    rho: &DensityMatrix,
    expect_entangled: bool,
) -> Result<(Value, bool), CliError> {
    let spectrum = partial_transpose_spectrum(rho)?;
    let min = spectrum.iter().cloned().fold(f64::INFINITY, f64::min);
    let entangled = min < -EIG_TOL;
    Ok((
        json!({
            "state": name,
            "partial_transpose_eigenvalues": spectrum,
            "min_eigenvalue": min,
            "entangled": entangled,
        }),
        entangled == expect_entangled,
    ))
}

pub fn entanglement_cmd() -> Result<Report, CliError> {
    let zero = PureState::basis(2, 0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = PureState::new(vec![c(h, 0.0), c(h, 0.0)])?;
    let cases = [
        ("bell", DensityMatrix::from_pure(&bell_pair()), true),
        (
            "product |00>",
            DensityMatrix::from_pure(&zero.kron(&zero)),
            false,
        ),
        (
            "product |+0>",
            DensityMatrix::from_pure(&plus.kron(&zero)),
            false,
        ),
        ("maximally mixed", DensityMatrix::maximally_mixed(4), false),
    ];
    let mut rows = Vec::new();
    let mut pass = true;
    for (name, rho, expect) in &cases {
        let (row, ok) = witness(name, rho, *expect)?;
        rows.push(row);
        pass &= ok;
    }
    let bell_min = rows[0]["min_eigenvalue"].as_f64().unwrap_or(f64::NAN);
    pass &= (bell_min + 0.5).abs() < EIG_TOL;
    Ok(Report {
        results: json!({ "states": rows }),
        claim: "A Bell pair is entangled: its partial transpose has a negative eigenvalue, while \
                product and maximally mixed states have none.",
        pass,
        csv: None,
    })
}
