use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, LocationClass};
use crate::codes::CodeSpec;
use crate::cosets::EffectiveWeight;
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::gf2::BitVector;

use super::propagate::FaultTable;
use super::{FaultScope, Pauli};

/// Trials drawn from one random stream. Streams are indexed by chunk, so the
/// histogram does not depend on how chunks are spread over threads.
const TRIALS_PER_CHUNK: u64 = 1 << 14;

/// Which Paulis a failing location may apply; the choice is uniform over
/// the non-identity patterns allowed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Channel {
    /// Every non-identity Pauli on the location's qubits.
    #[default]
    Depolarizing,
    /// Patterns made of `I` and `X` only.
    BitFlip,
    /// Patterns made of `I` and `Z` only.
    PhaseFlip,
}

impl Channel {
    fn allows(self, pattern: &[Pauli]) -> bool {
        match self {
            Channel::Depolarizing => true,
            Channel::BitFlip => pattern.iter().all(|&p| matches!(p, Pauli::I | Pauli::X)),
            Channel::PhaseFlip => pattern.iter().all(|&p| matches!(p, Pauli::I | Pauli::Z)),
        }
    }
}

/// Error carried by the ancilla as it enters the circuit. When present it is
/// uniform over all nonzero X errors.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum InputNoise {
    #[default]
    Perfect,
    /// Present with probability `min(1, factor · ε)`.
    Proportional(f64),
    /// Present with a fixed probability, independent of `ε`.
    Fixed(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    /// Failure probability of every enabled location.
    pub epsilon: f64,
    /// Per-class channel; `None` disables the class.
    pub preparation: Option<Channel>,
    pub gate: Option<Channel>,
    pub idle: Option<Channel>,
    /// Measurements fail by flipping their outcome.
    pub measurement: bool,
    pub scope: FaultScope,
    pub input: InputNoise,
}

impl NoiseModel {
    /// Every location fails with probability `epsilon`, depolarizing, perfect input.
    pub fn uniform(epsilon: f64) -> Self {
        NoiseModel {
            epsilon,
            preparation: Some(Channel::Depolarizing),
            gate: Some(Channel::Depolarizing),
            idle: Some(Channel::Depolarizing),
            measurement: true,
            scope: FaultScope::All,
            input: InputNoise::Perfect,
        }
    }

    pub fn with_input(mut self, input: InputNoise) -> Self {
        self.input = input;
        self
    }

    pub fn with_scope(mut self, scope: FaultScope) -> Self {
        self.scope = scope;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if !unit(self.epsilon) {
            return Err(Error::InvalidNoise(format!(
                "ε = {} outside [0, 1]",
                self.epsilon
            )));
        }
        match self.input {
            InputNoise::Proportional(f) if !(f >= 0.0 && f.is_finite()) => Err(
                Error::InvalidNoise(format!("input factor {f} must be finite and ≥ 0")),
            ),
            InputNoise::Fixed(p) if !unit(p) => Err(Error::InvalidNoise(format!(
                "input probability {p} outside [0, 1]"
            ))),
            _ => Ok(()),
        }
    }

    fn input_probability(&self) -> f64 {
        match self.input {
            InputNoise::Perfect => 0.0,
            InputNoise::Proportional(f) => (f * self.epsilon).min(1.0),
            InputNoise::Fixed(p) => p,
        }
    }

    fn channel(&self, class: LocationClass) -> Option<Channel> {
        match class {
            LocationClass::Preparation => self.preparation,
            LocationClass::Gate => self.gate,
            LocationClass::Idle => self.idle,
            LocationClass::Measurement => self.measurement.then_some(Channel::Depolarizing),
        }
    }
}

/// Outcome histogram of a Monte Carlo run.
#[derive(Clone, Debug, PartialEq)]
pub struct McResult {
    pub epsilon: f64,
    pub trials: u64,
    /// Counts keyed by (accepted, effective residual weight).
    pub counts: BTreeMap<(bool, usize), u64>,
}

impl McResult {
    pub fn count(&self, accepted: bool, weight: usize) -> u64 {
        self.counts.get(&(accepted, weight)).copied().unwrap_or(0)
    }

    pub fn accepted(&self) -> u64 {
        self.counts
            .iter()
            .filter(|(&(acc, _), _)| acc)
            .map(|(_, &n)| n)
            .sum()
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted() as f64 / self.trials as f64
    }

    /// Probability of being accepted with the given effective weight.
    pub fn probability(&self, weight: usize) -> f64 {
        self.count(true, weight) as f64 / self.trials as f64
    }

    /// 95% Wilson interval for [`McResult::probability`].
    pub fn interval(&self, weight: usize) -> (f64, f64) {
        wilson_interval(self.count(true, weight), self.trials, 1.959_963_984_540_054)
    }

    /// Largest effective weight seen among accepted trials.
    pub fn max_accepted_weight(&self) -> Option<usize> {
        self.counts
            .keys()
            .filter(|(acc, _)| *acc)
            .map(|&(_, w)| w)
            .max()
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

struct Site {
    location: usize,
    /// Indices into the fault table's pattern list.
    patterns: Vec<usize>,
}

/// Run `trials` independent noisy executions of `circuit` and histogram the
/// verifier verdict against the effective weight of the ancilla residual.
///
/// Trial streams are derived from `(seed, chunk index)`, so the result is a
/// deterministic function of the arguments whatever `exec` is.
pub fn monte_carlo(
    circuit: &Circuit,
    spec: &CodeSpec,
    model: &NoiseModel,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<McResult> {
    model.validate()?;
    if trials == 0 {
        return Err(Error::InvalidNoise("at least one trial is required".into()));
    }
    if circuit.n_ancilla != spec.n {
        return Err(Error::Dimension(format!(
            "circuit has {} ancilla qubits, code has {}",
            circuit.n_ancilla, spec.n
        )));
    }
    let table = FaultTable::new(circuit, model.scope);
    let sites: Vec<Site> = table
        .locations
        .iter()
        .filter_map(|loc| {
            let channel = model.channel(loc.class())?;
            let patterns: Vec<usize> = table.patterns[loc.index]
                .iter()
                .enumerate()
                .filter(|(_, p)| channel.allows(p))
                .map(|(i, _)| i)
                .collect();
            (!patterns.is_empty()).then_some(Site {
                location: loc.index,
                patterns,
            })
        })
        .collect();
    let weights = EffectiveWeight::new(spec)?;
    let input_p = model.input_probability();
    let eps = model.epsilon;
    let log_keep = (1.0 - eps).ln();

    let chunks = trials.div_ceil(TRIALS_PER_CHUNK);
    let run_chunk = |chunk: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        let first = chunk as u64 * TRIALS_PER_CHUNK;
        let count = TRIALS_PER_CHUNK.min(trials - first);
        let mut flips = BitVector::zeros(table.n_verifier);
        let mut residual = BitVector::zeros(table.n_ancilla);
        let mut cache: HashMap<BitVector, usize> = HashMap::new();
        let mut hist: BTreeMap<(bool, usize), u64> = BTreeMap::new();
        for _ in 0..count {
            flips.clear();
            residual.clear();
            if input_p > 0.0 && rng.random::<f64>() < input_p {
                let e = random_nonzero(&mut rng, table.n_ancilla);
                let effect = table.injection_effect(&e);
                flips.xor_assign(&effect.flips);
                residual.xor_assign(&effect.residual_x);
            }
            if eps > 0.0 {
                let mut pos = 0usize;
                loop {
                    if eps < 1.0 {
                        // geometric gap to the next failing site
                        let u: f64 = 1.0 - rng.random::<f64>();
                        let gap = (u.ln() / log_keep).floor();
                        if gap >= (sites.len() - pos) as f64 {
                            break;
                        }
                        pos += gap as usize;
                    }
                    if pos >= sites.len() {
                        break;
                    }
                    let site = &sites[pos];
                    let pick = site.patterns[rng.random_range(0..site.patterns.len())];
                    let effect = &table.effects[site.location][pick];
                    flips.xor_assign(&effect.flips);
                    residual.xor_assign(&effect.residual_x);
                    pos += 1;
                }
            }
            let accepted = flips.is_zero();
            let w = match cache.get(&residual) {
                Some(&w) => w,
                None => {
                    let w = weights.of(&residual);
                    cache.insert(residual.clone(), w);
                    w
                }
            };
            *hist.entry((accepted, w)).or_default() += 1;
        }
        hist
    };

    let parts = map_range(exec, chunks as usize, run_chunk);
    let mut counts = BTreeMap::new();
    for part in parts {
        for (key, n) in part {
            *counts.entry(key).or_default() += n;
        }
    }
    Ok(McResult {
        epsilon: eps,
        trials,
        counts,
    })
}

fn random_nonzero<R: Rng>(rng: &mut R, n: usize) -> BitVector {
    assert!(n > 0, "cannot draw a nonzero error on an empty register");
    loop {
        let v = BitVector::from_bools((0..n).map(|_| rng.random::<bool>()));
        if !v.is_zero() {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{verification_network, Gate, Op};
    use crate::codes::builtin;
    use crate::gf2::BitMatrix;

    #[test]
    fn noiseless_runs_accept_everything() {
        let spec = builtin("rep5").unwrap();
        let c = verification_network(&spec, 1).unwrap();
        let r = monte_carlo(
            &c,
            &spec,
            &NoiseModel::uniform(0.0),
            5000,
            0,
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(r.count(true, 0), 5000);
        assert_eq!(r.counts.len(), 1);
    }

    #[test]
    fn deterministic_across_exec_modes() {
        let spec = builtin("rep5").unwrap();
        let c = verification_network(&spec, 1).unwrap();
        let model = NoiseModel::uniform(0.05).with_input(InputNoise::Fixed(0.3));
        let a = monte_carlo(&c, &spec, &model, 40_000, 7, Exec::Sequential).unwrap();
        let b = monte_carlo(&c, &spec, &model, 40_000, 7, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let other_seed = monte_carlo(&c, &spec, &model, 40_000, 8, Exec::Parallel).unwrap();
        assert_ne!(a, other_seed);
    }

    #[test]
    fn certain_bit_flips_on_a_toy() {
        // One ancilla a, one verifier v: prep_x v @0 | cz v,a @2 | meas_x v @3.
        // Locations: prep(v), idle(a)@1, idle(v)@1, cz@2, meas(v)@3, idle(a)@3.
        // With ε = 1 and bit-flip faults only, every location fails:
        //  - prep, idle v@1: X on the verifier commutes with its readout
        //  - idle a@1: X on a before the CZ becomes Z on v, a flip
        //  - cz: XI, IX or XX after the gate, never seen
        //  - idle a@3: unseen
        //  - measurement: a flip
        // The two flips cancel, so every trial is accepted.
        let gates = vec![
            Gate {
                time: 0,
                op: Op::PrepPlus(1),
            },
            Gate {
                time: 2,
                op: Op::Cz(1, 0),
            },
            Gate {
                time: 3,
                op: Op::MeasX(1),
            },
        ];
        let c = Circuit::new(1, 1, gates, 3, 1).unwrap();
        assert_eq!(c.locations().len(), 6);
        let spec = CodeSpec::new("one", BitMatrix::empty(1), BitMatrix::identity(1), 0).unwrap();
        let model = NoiseModel {
            preparation: Some(Channel::BitFlip),
            gate: Some(Channel::BitFlip),
            idle: Some(Channel::BitFlip),
            ..NoiseModel::uniform(1.0)
        };
        let r = monte_carlo(&c, &spec, &model, 3000, 1, Exec::Sequential).unwrap();
        assert_eq!(r.accepted(), 3000);
        // measurement disabled: single flip from the first idle, always rejected
        let no_meas = NoiseModel {
            measurement: false,
            ..model
        };
        let r = monte_carlo(&c, &spec, &no_meas, 3000, 1, Exec::Sequential).unwrap();
        assert_eq!(r.accepted(), 0);
    }

    #[test]
    fn invalid_models() {
        let spec = builtin("rep5").unwrap();
        let c = verification_network(&spec, 1).unwrap();
        let bad = NoiseModel::uniform(1.5);
        assert!(monte_carlo(&c, &spec, &bad, 10, 0, Exec::Sequential).is_err());
        let bad_input = NoiseModel::uniform(0.1).with_input(InputNoise::Fixed(2.0));
        assert!(monte_carlo(&c, &spec, &bad_input, 10, 0, Exec::Sequential).is_err());
        assert!(monte_carlo(&c, &spec, &NoiseModel::uniform(0.1), 0, 0, Exec::Sequential).is_err());
    }

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(0, 1, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.7);
        let (lo, hi) = wilson_interval(500, 1000, 1.96);
        assert!((lo - 0.469).abs() < 1e-3 && (hi - 0.531).abs() < 1e-3);
    }
}
