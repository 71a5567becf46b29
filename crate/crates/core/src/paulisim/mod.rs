//! Pauli-frame fault analysis.
//!
//! Faults are Pauli operators striking circuit locations. Every gate used
//! here is Clifford, so a fault's effect on the measured verifier outcomes
//! and on the ancilla is a GF(2)-linear function of the fault: the scan and
//! the sampler precompute each single-fault effect once and add effects up.

mod fit;
mod montecarlo;
mod propagate;
mod scan;

pub use fit::{fit_scaling, ScalingPoint, ScalingReport, WeightFit};
pub use montecarlo::{monte_carlo, wilson_interval, Channel, InputNoise, McResult, NoiseModel};
pub use propagate::{propagate, FaultTable, Propagation};
pub use scan::{exhaustive_scan, scan_size, ScanEvent, ScanOptions, ScanResult, MAX_SCAN_EVENTS};

use std::fmt;

use crate::circuit::{Location, LocationClass};
use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NON_IDENTITY: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Accumulated X and Z components per qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    pub x: BitVector,
    pub z: BitVector,
}

impl PauliFrame {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn apply(&mut self, q: usize, p: Pauli) {
        if p.has_x() {
            self.x.flip(q);
        }
        if p.has_z() {
            self.z.flip(q);
        }
    }

    pub fn get(&self, q: usize) -> Pauli {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Composition, i.e. addition of the masks.
    pub fn compose(&mut self, other: &PauliFrame) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// The first `n` qubits.
    pub fn truncated(&self, n: usize) -> PauliFrame {
        PauliFrame {
            x: BitVector::from_bools(self.x.iter().take(n)),
            z: BitVector::from_bools(self.z.iter().take(n)),
        }
    }
}

impl fmt::Display for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len() {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

/// A Pauli applied right after the event at one location.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fault {
    pub location: usize,
    /// One Pauli per qubit of the location, in the location's qubit order.
    pub pattern: Vec<Pauli>,
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.location)?;
        for p in &self.pattern {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A set of faults on distinct locations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FaultAssignment(pub Vec<Fault>);

impl FaultAssignment {
    pub fn none() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Check locations exist and are distinct and patterns fit them.
    pub fn validate(&self, locations: &[Location]) -> Result<()> {
        let mut seen = vec![false; locations.len()];
        for f in &self.0 {
            let loc = locations.get(f.location).ok_or_else(|| {
                Error::InvalidFault(format!(
                    "location {} out of range 0..{}",
                    f.location,
                    locations.len()
                ))
            })?;
            if std::mem::replace(&mut seen[f.location], true) {
                return Err(Error::InvalidFault(format!(
                    "location {} appears twice",
                    f.location
                )));
            }
            if f.pattern.len() != loc.qubits.len() {
                return Err(Error::InvalidFault(format!(
                    "location {} acts on {} qubits, pattern has {}",
                    f.location,
                    loc.qubits.len(),
                    f.pattern.len()
                )));
            }
            if f.pattern.iter().all(|&p| p == Pauli::I) {
                return Err(Error::InvalidFault(format!(
                    "identity pattern at location {}",
                    f.location
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for FaultAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for (i, fault) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{fault}")?;
        }
        Ok(())
    }
}

/// Which qubits faults may touch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FaultScope {
    #[default]
    All,
    /// Only verifier qubits and measurement outcomes; patterns on gates that
    /// also touch the ancilla are restricted to identity on the ancilla.
    VerifierOnly,
}

/// Every non-identity pattern a fault at `loc` can take.
///
/// Measurements fail by flipping their outcome, written as a `Z` just before
/// the X-basis readout. Other locations take every non-identity Pauli on
/// their qubits (3 for one qubit, 15 for two), filtered by `scope`.
pub fn fault_patterns(loc: &Location, n_ancilla: usize, scope: FaultScope) -> Vec<Vec<Pauli>> {
    let allowed = |q: usize| scope == FaultScope::All || q >= n_ancilla;
    if loc.class() == LocationClass::Measurement {
        return if allowed(loc.qubits[0]) {
            vec![vec![Pauli::Z]]
        } else {
            Vec::new()
        };
    }
    let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut out: Vec<Vec<Pauli>> = vec![Vec::new()];
    for &q in &loc.qubits {
        let choices: &[Pauli] = if allowed(q) { &all } else { &all[..1] };
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&p| {
                    let mut next = prefix.clone();
                    next.push(p);
                    next
                })
            })
            .collect();
    }
    out.retain(|pattern| pattern.iter().any(|&p| p != Pauli::I));
    out
}
