use std::collections::{BTreeMap, HashMap};

use crate::circuit::Circuit;
use crate::codes::CodeSpec;
use crate::cosets::EffectiveWeight;
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::gf2::BitVector;

use super::propagate::FaultTable;
use super::{Fault, FaultAssignment, FaultScope};

/// Bound on the number of events one scan may enumerate.
pub const MAX_SCAN_EVENTS: u128 = 100_000_000;

/// Largest ancilla register for which every injected error is swept.
pub const MAX_INJECTION_QUBITS: usize = 20;

/// Events kept verbatim per list; counts are always exact.
pub const MAX_STORED_EVENTS: usize = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanOptions {
    /// Also sweep every X error on the ancilla input. A nonzero input error
    /// counts as one extra fault: one preparation failure may leave an error
    /// of any weight.
    pub inject_arbitrary: bool,
    pub scope: FaultScope,
    pub exec: Exec,
}

/// One enumerated failure scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanEvent {
    pub faults: FaultAssignment,
    /// Nonzero injected input error, if any.
    pub injected: Option<BitVector>,
    pub accepted: bool,
    pub residual_x: BitVector,
    pub effective_weight: usize,
}

impl ScanEvent {
    /// Circuit faults plus one for a nonzero injection.
    pub fn total_faults(&self) -> usize {
        self.faults.len() + usize::from(self.injected.is_some())
    }
}

/// All events with exactly `k` circuit faults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanResult {
    pub k: usize,
    /// Number of events enumerated.
    pub events: u128,
    pub accepted: u128,
    /// Accepted events keyed by (nonzero injection, effective residual weight).
    pub accepted_by_weight: BTreeMap<(bool, usize), u128>,
    /// For injection-free accepted events, the sum over events of
    /// `∏ 1/|patterns(location)|`, keyed by effective weight. Multiplied by
    /// `ε^k (1−ε)^(L−k)` this is the probability of those outcomes under
    /// uniform Pauli noise.
    pub pattern_mass: BTreeMap<usize, f64>,
    /// Accepted events whose effective weight exceeds the total fault count
    /// (circuit faults plus one for a nonzero injection).
    pub violations: Vec<ScanEvent>,
    pub violation_count: u128,
    /// Accepted events whose effective weight exceeds the number of circuit
    /// faults alone, the injected error being free.
    pub strict_violations: Vec<ScanEvent>,
    pub strict_violation_count: u128,
}

impl ScanResult {
    /// Largest effective weight among accepted events.
    pub fn max_accepted_weight(&self) -> Option<usize> {
        self.accepted_by_weight.keys().map(|&(_, w)| w).max()
    }

    /// Accepted events of a given effective weight, with or without injection.
    pub fn accepted_with_weight(&self, w: usize) -> u128 {
        self.accepted_by_weight
            .iter()
            .filter(|(&(_, ew), _)| ew == w)
            .map(|(_, &n)| n)
            .sum()
    }

    fn merge(&mut self, other: ScanResult) {
        self.events += other.events;
        self.accepted += other.accepted;
        for (key, n) in other.accepted_by_weight {
            *self.accepted_by_weight.entry(key).or_default() += n;
        }
        for (w, m) in other.pattern_mass {
            *self.pattern_mass.entry(w).or_default() += m;
        }
        self.violation_count += other.violation_count;
        self.strict_violation_count += other.strict_violation_count;
        for e in other.violations {
            if self.violations.len() < MAX_STORED_EVENTS {
                self.violations.push(e);
            }
        }
        for e in other.strict_violations {
            if self.strict_violations.len() < MAX_STORED_EVENTS {
                self.strict_violations.push(e);
            }
        }
    }
}

/// Number of events a scan would enumerate.
pub fn scan_size(table: &FaultTable, k_max: usize, inject: bool) -> u128 {
    // elementary symmetric polynomials of the pattern counts
    let mut e = vec![0u128; k_max + 1];
    e[0] = 1;
    for pats in &table.patterns {
        let c = pats.len() as u128;
        for j in (1..=k_max).rev() {
            e[j] = e[j].saturating_add(e[j - 1].saturating_mul(c));
        }
    }
    let per_combo: u128 = if inject {
        1u128 << table.n_ancilla.min(127)
    } else {
        1
    };
    e.iter().fold(0u128, |acc, &x| {
        acc.saturating_add(x.saturating_mul(per_combo))
    })
}

struct Injections {
    /// Flip pattern → list of input masks producing it.
    by_flips: HashMap<BitVector, Vec<usize>>,
    masks: Vec<BitVector>,
    residuals: Vec<BitVector>,
}

impl Injections {
    fn sweep(table: &FaultTable) -> Self {
        let n = table.n_ancilla;
        let count = 1usize << n;
        let mut by_flips: HashMap<BitVector, Vec<usize>> = HashMap::new();
        let mut masks = Vec::with_capacity(count);
        let mut residuals = Vec::with_capacity(count);
        for m in 0..count {
            let e =
                BitVector::from_support(n, &(0..n).filter(|j| m >> j & 1 == 1).collect::<Vec<_>>());
            let effect = table.injection_effect(&e);
            by_flips.entry(effect.flips).or_default().push(m);
            masks.push(e);
            residuals.push(effect.residual_x);
        }
        Injections {
            by_flips,
            masks,
            residuals,
        }
    }
}

struct Walker<'a> {
    table: &'a FaultTable,
    eligible: &'a [usize],
    k: usize,
    injections: Option<&'a Injections>,
    weights: &'a EffectiveWeight,
    cache: HashMap<BitVector, usize>,
    chosen: Vec<(usize, usize)>,
    out: ScanResult,
}

impl Walker<'_> {
    fn effective(&mut self, residual: &BitVector) -> usize {
        if let Some(&w) = self.cache.get(residual) {
            return w;
        }
        let w = self.weights.of(residual);
        self.cache.insert(residual.clone(), w);
        w
    }

    fn assignment(&self) -> FaultAssignment {
        FaultAssignment(
            self.chosen
                .iter()
                .map(|&(l, p)| Fault {
                    location: l,
                    pattern: self.table.patterns[l][p].clone(),
                })
                .collect(),
        )
    }

    fn record(&mut self, injected: Option<&BitVector>, residual: BitVector, mass: f64) {
        let ew = self.effective(&residual);
        let inj = injected.is_some();
        self.out.accepted += 1;
        *self.out.accepted_by_weight.entry((inj, ew)).or_default() += 1;
        if !inj {
            *self.out.pattern_mass.entry(ew).or_default() += mass;
        }
        let total = self.k + usize::from(inj);
        let violation = ew > total;
        let strict = ew > self.k;
        if !(violation || strict) {
            return;
        }
        let event = ScanEvent {
            faults: self.assignment(),
            injected: injected.cloned(),
            accepted: true,
            residual_x: residual,
            effective_weight: ew,
        };
        if violation {
            self.out.violation_count += 1;
            if self.out.violations.len() < MAX_STORED_EVENTS {
                self.out.violations.push(event.clone());
            }
        }
        if strict {
            self.out.strict_violation_count += 1;
            if self.out.strict_violations.len() < MAX_STORED_EVENTS {
                self.out.strict_violations.push(event);
            }
        }
    }

    fn leaf(&mut self, flips: &BitVector, residual: &BitVector, mass: f64) {
        match self.injections {
            None => {
                self.out.events += 1;
                if flips.is_zero() {
                    self.record(None, residual.clone(), mass);
                }
            }
            Some(inj) => {
                self.out.events += inj.masks.len() as u128;
                let Some(list) = inj.by_flips.get(flips) else {
                    return;
                };
                for &m in list {
                    let res = residual.xor(&inj.residuals[m]);
                    let injected = (m != 0).then(|| inj.masks[m].clone());
                    self.record(injected.as_ref(), res, mass);
                }
            }
        }
    }

    /// Extend the current partial assignment with locations from
    /// `eligible[start..]`.
    fn descend(&mut self, start: usize, flips: &BitVector, residual: &BitVector, mass: f64) {
        if self.chosen.len() == self.k {
            self.leaf(flips, residual, mass);
            return;
        }
        let remaining = self.k - self.chosen.len();
        let eligible = self.eligible;
        if eligible.len() < start + remaining {
            return;
        }
        let last = eligible.len() - remaining;
        for (pos, &l) in eligible.iter().enumerate().take(last + 1).skip(start) {
            let n_pats = self.table.effects[l].len();
            for p in 0..n_pats {
                let effect = &self.table.effects[l][p];
                let f = flips.xor(&effect.flips);
                let r = residual.xor(&effect.residual_x);
                self.chosen.push((l, p));
                self.descend(pos + 1, &f, &r, mass / n_pats as f64);
                self.chosen.pop();
            }
        }
    }
}

/// Enumerate every fault assignment with `k = 0..=k_max` faults, optionally
/// with every injected input X error, and classify the accepted outcomes by
/// the effective weight of the residual ancilla error.
pub fn exhaustive_scan(
    circuit: &Circuit,
    spec: &CodeSpec,
    k_max: usize,
    opts: ScanOptions,
) -> Result<Vec<ScanResult>> {
    if circuit.n_ancilla != spec.n {
        return Err(Error::Dimension(format!(
            "circuit has {} ancilla qubits, code has {}",
            circuit.n_ancilla, spec.n
        )));
    }
    let table = FaultTable::new(circuit, opts.scope);
    if opts.inject_arbitrary && circuit.n_ancilla > MAX_INJECTION_QUBITS {
        return Err(Error::Infeasible {
            what: "input error sweep",
            required: 1u128 << circuit.n_ancilla.min(127),
            limit: 1u128 << MAX_INJECTION_QUBITS,
        });
    }
    let required = scan_size(&table, k_max, opts.inject_arbitrary);
    if required > MAX_SCAN_EVENTS {
        return Err(Error::Infeasible {
            what: "exhaustive fault scan",
            required,
            limit: MAX_SCAN_EVENTS,
        });
    }
    let weights = EffectiveWeight::new(spec)?;
    let injections = opts.inject_arbitrary.then(|| Injections::sweep(&table));
    let eligible: Vec<usize> = (0..table.locations.len())
        .filter(|&l| !table.effects[l].is_empty())
        .collect();
    let zero_flips = BitVector::zeros(table.n_verifier);
    let zero_res = BitVector::zeros(table.n_ancilla);

    let mut results = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let walker = |first: Option<usize>| {
            let mut w = Walker {
                table: &table,
                eligible: &eligible,
                k,
                injections: injections.as_ref(),
                weights: &weights,
                cache: HashMap::new(),
                chosen: Vec::with_capacity(k),
                out: ScanResult {
                    k,
                    ..ScanResult::default()
                },
            };
            match first {
                None => w.descend(0, &zero_flips, &zero_res, 1.0),
                Some(pos) => {
                    let l = eligible[pos];
                    let n_pats = table.effects[l].len();
                    for p in 0..n_pats {
                        let effect = &table.effects[l][p];
                        w.chosen.push((l, p));
                        w.descend(
                            pos + 1,
                            &effect.flips,
                            &effect.residual_x,
                            1.0 / n_pats as f64,
                        );
                        w.chosen.pop();
                    }
                }
            }
            w.out
        };
        let parts: Vec<ScanResult> = if k == 0 {
            vec![walker(None)]
        } else {
            map_range(opts.exec, eligible.len(), |pos| walker(Some(pos)))
        };
        let mut merged = ScanResult {
            k,
            ..ScanResult::default()
        };
        for part in parts {
            merged.merge(part);
        }
        results.push(merged);
    }
    Ok(results)
}
