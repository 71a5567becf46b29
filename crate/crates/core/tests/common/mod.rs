//! Shared helpers for the integration tests: random inputs and brute-force
//! oracles that do not go through the library's own algorithms.
#![allow(dead_code)]

use ftfilter::circuit::Circuit;
use ftfilter::codes::CodeSpec;
use ftfilter::gf2::{BitMatrix, BitVector};
use ftfilter::paulisim::{fault_patterns, propagate, Fault, FaultAssignment, FaultScope};
use ftfilter::statesim::{equal_up_to_global_phase, reference_codeword, run_state, STATE_TOL};
use rand::seq::index::sample;
use rand::Rng;

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, density: f64) -> BitMatrix {
    let rows: Vec<BitVector> = (0..rows)
        .map(|_| BitVector::from_bools((0..cols).map(|_| rng.random_bool(density))))
        .collect();
    BitMatrix::from_rows_with_cols(rows, cols).unwrap()
}

/// Rejection-sample an `r × n` matrix of full row rank, rank checked by the
/// brute-force oracle.
pub fn random_full_rank<R: Rng>(rng: &mut R, r: usize, n: usize) -> BitMatrix {
    loop {
        let m = random_matrix(rng, r, n, 0.5);
        if brute_rank(&m) == r {
            return m;
        }
    }
}

/// Row rank as `log2 |span|`, the span enumerated over all row subsets.
pub fn brute_rank(m: &BitMatrix) -> usize {
    span(m).len().trailing_zeros() as usize
}

/// Every vector in the row space, each once, as `u64` masks.
pub fn span(m: &BitMatrix) -> Vec<u64> {
    let rows: Vec<u64> = m.rows().iter().map(|r| r.to_u64().unwrap()).collect();
    assert!(rows.len() <= 20, "span oracle limited to 20 rows");
    let mut seen = std::collections::BTreeSet::new();
    for subset in 0u64..1 << rows.len() {
        let mut v = 0;
        for (i, row) in rows.iter().enumerate() {
            if subset >> i & 1 == 1 {
                v ^= row;
            }
        }
        seen.insert(v);
    }
    seen.into_iter().collect()
}

/// Syndrome by direct mod-2 dot products.
pub fn brute_syndrome(h: &BitMatrix, e: u64) -> u64 {
    let mut s = 0;
    for (i, row) in h.rows().iter().enumerate() {
        let parity = (row.to_u64().unwrap() & e).count_ones() & 1;
        s |= (parity as u64) << i;
    }
    s
}

/// Minimum weight of an error with syndrome `s`, over all `2^n` errors.
pub fn brute_leader_weight(h: &BitMatrix, s: u64) -> Option<u32> {
    let n = h.col_count();
    (0u64..1 << n)
        .filter(|&e| brute_syndrome(h, e) == s)
        .map(|e| e.count_ones())
        .min()
}

pub fn mask(v: &BitVector) -> u64 {
    v.to_u64().unwrap()
}

/// Up to `max_faults` faults on distinct random locations with random
/// patterns, plus an optional random X input error on the ancilla.
pub fn random_faults<R: Rng>(
    rng: &mut R,
    circuit: &Circuit,
    max_faults: usize,
    inject: bool,
) -> (FaultAssignment, Option<BitVector>) {
    let locations = circuit.locations();
    let k = rng.random_range(0..=max_faults.min(locations.len()));
    let mut faults = Vec::new();
    for l in sample(rng, locations.len(), k) {
        let pats = fault_patterns(&locations[l], circuit.n_ancilla, FaultScope::All);
        let p = pats[rng.random_range(0..pats.len())].clone();
        faults.push(Fault {
            location: l,
            pattern: p,
        });
    }
    faults.sort_by_key(|f| f.location);
    let injected = (inject && rng.random_bool(0.5))
        .then(|| BitVector::from_bools((0..circuit.n_ancilla).map(|_| rng.random_bool(0.3))));
    (FaultAssignment(faults), injected)
}

/// Compare Pauli-frame propagation against the statevector simulator.
///
/// The ancilla enters as the codeword state (with the injected X error) when
/// the circuit has no preparations of its own, else as `|0…0⟩`. The frame's
/// verdicts must match the simulator's deterministic parities, and the
/// post-selected ancilla must equal the residual Pauli applied to the
/// fault-free output.
pub fn frame_matches_state(
    circuit: &Circuit,
    spec: &CodeSpec,
    faults: &FaultAssignment,
    injected: Option<&BitVector>,
) -> Result<(), String> {
    let prepares = circuit
        .gates()
        .iter()
        .any(|g| g.time == 0 && g.op.qubits()[0] < circuit.n_ancilla);
    let codeword = reference_codeword(spec).map_err(|e| e.to_string())?;
    let clean_input = (!prepares).then(|| codeword.clone());
    let mut input = clean_input.clone();
    if let (Some(s), Some(e)) = (input.as_mut(), injected) {
        s.apply_x_pattern(e);
    }
    let frame = propagate(circuit, faults, if prepares { None } else { injected })
        .map_err(|e| e.to_string())?;
    let run = run_state(circuit, faults, input.as_ref()).map_err(|e| e.to_string())?;
    let flips = run
        .flips()
        .ok_or_else(|| "statevector outcome is not deterministic".to_string())?;
    if flips != frame.flips {
        return Err(format!("flips: frame {} vs state {}", frame.flips, flips));
    }
    for i in 0..circuit.n_verifier {
        let want = if frame.flips.get(i) { -1.0 } else { 1.0 };
        if (run.expectations[i] - want).abs() > STATE_TOL {
            return Err(format!("verifier {i}: ⟨X⟩ = {}", run.expectations[i]));
        }
    }
    let (_, actual) = run
        .ancilla_given(&flips)
        .ok_or_else(|| "observed branch has zero probability".to_string())?;
    let clean = run_state(circuit, &FaultAssignment::none(), clean_input.as_ref())
        .map_err(|e| e.to_string())?;
    let (_, mut expected) = clean
        .ancilla_given(&BitVector::zeros(circuit.n_verifier))
        .ok_or_else(|| "fault-free run rejects".to_string())?;
    expected.apply_frame(&frame.residual);
    if !equal_up_to_global_phase(&actual, &expected, STATE_TOL) {
        return Err(format!(
            "residual {} does not match the simulated ancilla",
            frame.residual
        ));
    }
    Ok(())
}
