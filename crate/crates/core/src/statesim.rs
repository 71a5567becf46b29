//! Dense statevector simulation for small circuits.
//!
//! Qubit `q` is bit `q` of the basis index. Measurements are not sampled:
//! a run records the X expectation of every measured qubit at the moment it
//! is read out, and post-selection onto chosen outcomes is a separate step.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::circuit::{Circuit, GateKind, LocationKind};
use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::paulisim::{FaultAssignment, Pauli, PauliFrame};

pub const MAX_QUBITS: usize = 12;
/// Amplitude comparisons.
pub const STATE_TOL: f64 = 1e-8;
/// Norm checks.
pub const NORM_TOL: f64 = 1e-10;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        let slot = amps
            .get_mut(index)
            .ok_or_else(|| Error::Dimension(format!("basis index {index} on {n} qubits")))?;
        *slot = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Wrap raw amplitudes; they must have length `2^n` and unit norm.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n {
            return Err(Error::Dimension(format!(
                "{} amplitudes is not a power of two",
                amps.len()
            )));
        }
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        let s = StateVector { n, amps };
        if (s.norm_sqr() - 1.0).abs() > NORM_TOL {
            return Err(Error::Dimension(format!(
                "state has squared norm {}",
                s.norm_sqr()
            )));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_x(&mut self, q: usize) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn apply_z(&mut self, q: usize) {
        let bit = 1 << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a = -*a;
            }
        }
    }

    pub fn apply_h(&mut self, q: usize) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = (a + b) * FRAC_1_SQRT_2;
                self.amps[i | bit] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) {
        let (c, t) = (1 << control, 1 << target);
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1 << a) | (1 << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    /// `Y` is applied as `XZ`; the dropped factor `i` is a global phase.
    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        if p.has_z() {
            self.apply_z(q);
        }
        if p.has_x() {
            self.apply_x(q);
        }
    }

    pub fn apply_x_pattern(&mut self, e: &BitVector) {
        for q in e.ones() {
            self.apply_x(q);
        }
    }

    pub fn apply_frame(&mut self, frame: &PauliFrame) {
        for q in 0..frame.len() {
            self.apply_pauli(q, frame.get(q));
        }
    }

    /// `⟨X_q⟩`.
    pub fn expectation_x(&self, q: usize) -> f64 {
        let bit = 1 << q;
        let mut acc = 0.0;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                acc += 2.0 * (self.amps[i].conj() * self.amps[i | bit]).re;
            }
        }
        acc
    }

    /// Project qubit `q` onto `|+⟩` or `|−⟩` and renormalize. Returns the
    /// probability of that outcome; the state is left untouched when it is 0.
    pub fn project_x(&mut self, q: usize, plus: bool) -> f64 {
        let bit = 1 << q;
        let sign = if plus { 1.0 } else { -1.0 };
        let mut projected = self.amps.clone();
        for i in 0..projected.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                let s = (a + b * sign) * 0.5;
                projected[i] = s;
                projected[i | bit] = s * sign;
            }
        }
        let p: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
        if p > NORM_TOL {
            let scale = 1.0 / p.sqrt();
            self.amps = projected.into_iter().map(|a| a * scale).collect();
        }
        p
    }

    /// `self ⊗ other`, with `self` on the low qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n + other.n;
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits(n));
        }
        let mut amps = Vec::with_capacity(1 << n);
        for hi in &other.amps {
            for lo in &self.amps {
                amps.push(lo * hi);
            }
        }
        Ok(StateVector { n, amps })
    }

    /// `index real imag` per line, with the index written as a bit string
    /// (qubit 0 first). Zero amplitudes are skipped.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() < STATE_TOL * STATE_TOL {
                continue;
            }
            let bits: String = (0..self.n)
                .map(|q| if i >> q & 1 == 1 { '1' } else { '0' })
                .collect();
            let _ = writeln!(out, "{bits} {:+.10} {:+.10}", a.re, a.im);
        }
        out
    }
}

/// True iff `a = e^{iθ} b` for some `θ`, amplitude-wise within `tol`.
pub fn equal_up_to_global_phase(a: &StateVector, b: &StateVector, tol: f64) -> bool {
    if a.n != b.n {
        return false;
    }
    let inner: Complex64 = a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum();
    if inner.norm() < tol {
        return a.norm_sqr() < tol && b.norm_sqr() < tol;
    }
    let phase = inner / inner.norm();
    a.amps
        .iter()
        .zip(&b.amps)
        .all(|(x, y)| (x * phase - y).norm() <= tol)
}

/// Uniform superposition over the words of `C_w`.
pub fn reference_codeword(spec: &CodeSpec) -> Result<StateVector> {
    if spec.n > MAX_QUBITS {
        return Err(Error::TooManyQubits(spec.n));
    }
    if spec.k_w() > MAX_QUBITS {
        return Err(Error::Infeasible {
            what: "codeword superposition",
            required: 1u128 << spec.k_w(),
            limit: 1u128 << MAX_QUBITS,
        });
    }
    let words = spec.codewords()?;
    let amp = Complex64::new(1.0 / (words.len() as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << spec.n];
    for w in &words {
        amps[w.to_u64().expect("n ≤ 12") as usize] = amp;
    }
    Ok(StateVector { n: spec.n, amps })
}

/// Outcome of a simulated circuit run.
#[derive(Clone, Debug)]
pub struct StateRun {
    pub n_ancilla: usize,
    /// Final state over all qubits, measured qubits not yet collapsed.
    pub state: StateVector,
    /// `⟨X⟩` of each verifier at its readout, indexed by verifier.
    pub expectations: Vec<f64>,
}

impl StateRun {
    /// Probability that verifier `i` reads `+`.
    pub fn prob_plus(&self, i: usize) -> f64 {
        (1.0 + self.expectations[i]) / 2.0
    }

    /// `Some(true)` for a certain `+`, `Some(false)` for a certain `−`,
    /// `None` when both outcomes are possible.
    pub fn parity(&self, i: usize) -> Option<bool> {
        let e = self.expectations[i];
        if (e - 1.0).abs() < STATE_TOL {
            Some(true)
        } else if (e + 1.0).abs() < STATE_TOL {
            Some(false)
        } else {
            None
        }
    }

    /// Flip pattern when every outcome is deterministic (`1` = read `−`).
    pub fn flips(&self) -> Option<BitVector> {
        let bits: Option<Vec<bool>> = (0..self.expectations.len())
            .map(|i| self.parity(i).map(|plus| !plus))
            .collect();
        bits.map(BitVector::from_bools)
    }

    /// Ancilla state after post-selecting the verifiers on `outcomes`
    /// (`true` = `−`), with the probability of that branch. `None` when the
    /// branch has zero probability.
    pub fn ancilla_given(&self, outcomes: &BitVector) -> Option<(f64, StateVector)> {
        let n_v = self.expectations.len();
        assert_eq!(outcomes.len(), n_v, "one outcome per verifier");
        let mut s = self.state.clone();
        let mut prob = 1.0;
        for i in 0..n_v {
            let q = self.n_ancilla + i;
            let p = s.project_x(q, !outcomes.get(i));
            if p <= NORM_TOL {
                return None;
            }
            prob *= p;
            s.apply_h(q);
        }
        let offset = (0..n_v)
            .filter(|&i| outcomes.get(i))
            .fold(0usize, |acc, i| acc | 1 << (self.n_ancilla + i));
        let amps = s.amps[offset..offset + (1 << self.n_ancilla)].to_vec();
        Some((
            prob,
            StateVector {
                n: self.n_ancilla,
                amps,
            },
        ))
    }
}

/// Simulate `circuit` with Paulis inserted at fault locations.
///
/// `input` is the state of the ancilla register entering the circuit
/// (`|0…0⟩` when absent); verifiers start in `|0⟩`. Preparations act on
/// fresh qubits: `prep_z` checks the qubit is still `|0⟩` and `prep_x`
/// applies a Hadamard. Faults are applied right after their location's
/// event, so a fault at a measurement acts before the readout.
pub fn run_state(
    circuit: &Circuit,
    faults: &FaultAssignment,
    input: Option<&StateVector>,
) -> Result<StateRun> {
    let nq = circuit.n_qubits();
    if nq > MAX_QUBITS {
        return Err(Error::TooManyQubits(nq));
    }
    let locations = circuit.locations();
    faults.validate(&locations)?;
    let ancilla = match input {
        Some(s) if s.n != circuit.n_ancilla => {
            return Err(Error::Dimension(format!(
                "input state has {} qubits, ancilla register has {}",
                s.n, circuit.n_ancilla
            )))
        }
        Some(s) => s.clone(),
        None => StateVector::zero(circuit.n_ancilla)?,
    };
    let mut state = ancilla.tensor(&StateVector::zero(circuit.n_verifier)?)?;
    let mut at: Vec<Option<&[Pauli]>> = vec![None; locations.len()];
    for f in &faults.0 {
        at[f.location] = Some(&f.pattern);
    }
    let mut expectations = vec![0.0; circuit.n_verifier];
    for loc in &locations {
        if let LocationKind::Gate(kind) = loc.kind {
            let q = &loc.qubits;
            match kind {
                GateKind::PrepZero | GateKind::PrepPlus => {
                    let bit = 1 << q[0];
                    let excited: f64 = state
                        .amps
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| i & bit != 0)
                        .map(|(_, a)| a.norm_sqr())
                        .sum();
                    if excited > NORM_TOL {
                        return Err(Error::InvalidCircuit(format!(
                            "qubit {} is not fresh at its preparation",
                            q[0]
                        )));
                    }
                    if kind == GateKind::PrepPlus {
                        state.apply_h(q[0]);
                    }
                }
                GateKind::Cx => state.apply_cx(q[0], q[1]),
                GateKind::Cz => state.apply_cz(q[0], q[1]),
                GateKind::MeasX => {}
            }
        }
        if let Some(pattern) = at[loc.index] {
            for (&q, &p) in loc.qubits.iter().zip(pattern) {
                state.apply_pauli(q, p);
            }
        }
        if loc.kind == LocationKind::Gate(GateKind::MeasX) {
            let q = loc.qubits[0];
            if circuit.is_verifier(q) {
                expectations[q - circuit.n_ancilla] = state.expectation_x(q);
            }
        }
    }
    Ok(StateRun {
        n_ancilla: circuit.n_ancilla,
        state,
        expectations,
    })
}
