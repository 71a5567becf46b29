use crate::circuit::{Circuit, GateKind, Location, LocationKind};
use crate::error::{Error, Result};
use crate::gf2::BitVector;

use super::{fault_patterns, Fault, FaultAssignment, FaultScope, Pauli, PauliFrame};

/// Result of pushing a frame through a circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propagation {
    /// Outcome flips of the X measurements, indexed by verifier.
    pub flips: BitVector,
    /// Final frame restricted to the ancilla register.
    pub residual: PauliFrame,
}

impl Propagation {
    /// All verifier outcomes came out `+`.
    pub fn accepted(&self) -> bool {
        self.flips.is_zero()
    }
}

/// Conjugate `frame` by the gate behind `loc`.
fn apply_gate(frame: &mut PauliFrame, loc: &Location) {
    let LocationKind::Gate(kind) = loc.kind else {
        return;
    };
    match kind {
        GateKind::PrepZero | GateKind::PrepPlus => {
            let q = loc.qubits[0];
            frame.x.set(q, false);
            frame.z.set(q, false);
        }
        GateKind::Cx => {
            let (c, t) = (loc.qubits[0], loc.qubits[1]);
            if frame.x.get(c) {
                frame.x.flip(t);
            }
            if frame.z.get(t) {
                frame.z.flip(c);
            }
        }
        GateKind::Cz => {
            let (a, b) = (loc.qubits[0], loc.qubits[1]);
            let (xa, xb) = (frame.x.get(a), frame.x.get(b));
            if xa {
                frame.z.flip(b);
            }
            if xb {
                frame.z.flip(a);
            }
        }
        GateKind::MeasX => {}
    }
}

fn run(
    circuit: &Circuit,
    locations: &[Location],
    faults_at: &[Option<&Fault>],
    injected: Option<&BitVector>,
) -> Propagation {
    let n = circuit.n_ancilla;
    let mut frame = PauliFrame::identity(circuit.n_qubits());
    if let Some(e) = injected {
        for j in e.ones() {
            frame.x.set(j, true);
        }
    }
    let mut flips = BitVector::zeros(circuit.n_verifier);
    for loc in locations {
        apply_gate(&mut frame, loc);
        if let Some(fault) = faults_at[loc.index] {
            for (&q, &p) in loc.qubits.iter().zip(&fault.pattern) {
                frame.apply(q, p);
            }
        }
        if loc.kind == LocationKind::Gate(GateKind::MeasX) {
            let q = loc.qubits[0];
            if frame.z.get(q) && circuit.is_verifier(q) {
                flips.set(q - n, true);
            }
        }
    }
    Propagation {
        flips,
        residual: frame.truncated(n),
    }
}

/// Push an optional injected X error on the ancilla and a set of faults
/// through `circuit`, step by step.
///
/// CX maps `X_c → X_c X_t` and `Z_t → Z_c Z_t`; CZ maps `X_a → X_a Z_b`;
/// preparations clear the frame on their qubit. Each fault is applied right
/// after the event at its location, and an X measurement reports a flip when
/// the frame carries `Z` on its qubit at that point.
pub fn propagate(
    circuit: &Circuit,
    faults: &FaultAssignment,
    injected: Option<&BitVector>,
) -> Result<Propagation> {
    let locations = circuit.locations();
    faults.validate(&locations)?;
    if let Some(e) = injected {
        if e.len() != circuit.n_ancilla {
            return Err(Error::Dimension(format!(
                "injected error has length {}, ancilla register has {} qubits",
                e.len(),
                circuit.n_ancilla
            )));
        }
    }
    let mut faults_at = vec![None; locations.len()];
    for f in &faults.0 {
        faults_at[f.location] = Some(f);
    }
    Ok(run(circuit, &locations, &faults_at, injected))
}

/// Linear effect of one fault or one injected bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Effect {
    pub flips: BitVector,
    pub residual_x: BitVector,
}

/// Single-fault effects for every location and pattern of a circuit.
#[derive(Clone, Debug)]
pub struct FaultTable {
    pub n_ancilla: usize,
    pub n_verifier: usize,
    pub locations: Vec<Location>,
    /// Allowed patterns per location (may be empty under a restricted scope).
    pub patterns: Vec<Vec<Vec<Pauli>>>,
    /// `effects[l][p]` is the effect of pattern `p` at location `l`.
    pub effects: Vec<Vec<Effect>>,
    /// Effect of an injected `X_j` on ancilla qubit `j`.
    pub injection: Vec<Effect>,
}

impl FaultTable {
    pub fn new(circuit: &Circuit, scope: FaultScope) -> Self {
        let locations = circuit.locations();
        let none: Vec<Option<&Fault>> = vec![None; locations.len()];
        let mut patterns = Vec::with_capacity(locations.len());
        let mut effects = Vec::with_capacity(locations.len());
        for loc in &locations {
            let pats = fault_patterns(loc, circuit.n_ancilla, scope);
            let effs = pats
                .iter()
                .map(|pattern| {
                    let fault = Fault {
                        location: loc.index,
                        pattern: pattern.clone(),
                    };
                    let mut at = none.clone();
                    at[loc.index] = Some(&fault);
                    let p = run(circuit, &locations, &at, None);
                    Effect {
                        flips: p.flips,
                        residual_x: p.residual.x,
                    }
                })
                .collect();
            patterns.push(pats);
            effects.push(effs);
        }
        let injection = (0..circuit.n_ancilla)
            .map(|j| {
                let e = BitVector::unit(circuit.n_ancilla, j);
                let p = run(circuit, &locations, &none, Some(&e));
                Effect {
                    flips: p.flips,
                    residual_x: p.residual.x,
                }
            })
            .collect();
        FaultTable {
            n_ancilla: circuit.n_ancilla,
            n_verifier: circuit.n_verifier,
            locations,
            patterns,
            effects,
            injection,
        }
    }

    /// Effect of an injected X error, by linearity.
    pub fn injection_effect(&self, e: &BitVector) -> Effect {
        let mut out = Effect {
            flips: BitVector::zeros(self.n_verifier),
            residual_x: BitVector::zeros(self.n_ancilla),
        };
        for j in e.ones() {
            out.flips.xor_assign(&self.injection[j].flips);
            out.residual_x.xor_assign(&self.injection[j].residual_x);
        }
        out
    }

    /// Combined effect of a fault assignment whose patterns are drawn from
    /// this table, by linearity.
    pub fn combined(&self, faults: &FaultAssignment) -> Option<Effect> {
        let mut out = Effect {
            flips: BitVector::zeros(self.n_verifier),
            residual_x: BitVector::zeros(self.n_ancilla),
        };
        for f in &faults.0 {
            let p = self
                .patterns
                .get(f.location)?
                .iter()
                .position(|p| *p == f.pattern)?;
            let e = &self.effects[f.location][p];
            out.flips.xor_assign(&e.flips);
            out.residual_x.xor_assign(&e.residual_x);
        }
        Some(out)
    }
}
