//! Timed circuits over an ancilla register and a verifier register.
//!
//! Qubits are numbered globally: ancilla qubit `j` is `j`, verifier `i` is
//! `n_ancilla + i`. Ancilla qubits keep the column order of the code, so a
//! standard-form column permutation only shows up as which ancilla each
//! verifier touches (the permutation itself is kept in [`Circuit::perm`]).

use std::fmt::{self, Write as _};

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::gf2::{to_standard_form, BitMatrix};
use crate::schedule::{schedule, validate, Schedule};

/// Default measurement duration in time steps.
pub const DEFAULT_T_M: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    PrepZero(usize),
    PrepPlus(usize),
    Cx {
        control: usize,
        target: usize,
    },
    /// Symmetric; the first qubit is the verifier in emitted networks.
    Cz(usize, usize),
    MeasX(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    PrepZero,
    PrepPlus,
    Cx,
    Cz,
    MeasX,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::PrepZero => "prep_z",
            GateKind::PrepPlus => "prep_x",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::MeasX => "meas_x",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "prep_z" => GateKind::PrepZero,
            "prep_x" => GateKind::PrepPlus,
            "cx" => GateKind::Cx,
            "cz" => GateKind::Cz,
            "meas_x" => GateKind::MeasX,
            _ => return None,
        })
    }

    fn arity(self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cz => 2,
            _ => 1,
        }
    }
}

impl Op {
    pub fn kind(&self) -> GateKind {
        match self {
            Op::PrepZero(_) => GateKind::PrepZero,
            Op::PrepPlus(_) => GateKind::PrepPlus,
            Op::Cx { .. } => GateKind::Cx,
            Op::Cz(..) => GateKind::Cz,
            Op::MeasX(_) => GateKind::MeasX,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Op::PrepZero(q) | Op::PrepPlus(q) | Op::MeasX(q) => vec![q],
            Op::Cx { control, target } => vec![control, target],
            Op::Cz(a, b) => vec![a, b],
        }
    }

    fn build(kind: GateKind, q: &[usize]) -> Op {
        match kind {
            GateKind::PrepZero => Op::PrepZero(q[0]),
            GateKind::PrepPlus => Op::PrepPlus(q[0]),
            GateKind::Cx => Op::Cx {
                control: q[0],
                target: q[1],
            },
            GateKind::Cz => Op::Cz(q[0], q[1]),
            GateKind::MeasX => Op::MeasX(q[0]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub time: usize,
    pub op: Op,
}

/// A validated, time-ordered gate list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub n_ancilla: usize,
    pub n_verifier: usize,
    gates: Vec<Gate>,
    pub duration: usize,
    /// Steps occupied by each measurement.
    pub t_m: usize,
    /// Column permutation of the standard form the network was built from.
    pub perm: Option<Vec<usize>>,
}

/// Fault-site category, used to select noise per class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocationClass {
    Preparation,
    Gate,
    Measurement,
    Idle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocationKind {
    Gate(GateKind),
    Idle,
}

impl LocationKind {
    pub fn class(self) -> LocationClass {
        match self {
            LocationKind::Idle => LocationClass::Idle,
            LocationKind::Gate(GateKind::PrepZero | GateKind::PrepPlus) => {
                LocationClass::Preparation
            }
            LocationKind::Gate(GateKind::MeasX) => LocationClass::Measurement,
            LocationKind::Gate(_) => LocationClass::Gate,
        }
    }
}

/// A place where a fault may strike: a gate event or a resting qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub index: usize,
    pub time: usize,
    pub kind: LocationKind,
    pub qubits: Vec<usize>,
}

impl Location {
    pub fn class(&self) -> LocationClass {
        self.kind.class()
    }
}

fn sort_key(g: &Gate) -> (usize, usize) {
    (g.time, g.op.qubits()[0])
}

impl Circuit {
    /// Assemble and validate a circuit. Gates are sorted by time and first
    /// qubit; preparations may sit at time 0, everything else in
    /// `1..=duration`, and a measurement started at `τ` holds its qubit
    /// through `τ + t_m − 1`.
    pub fn new(
        n_ancilla: usize,
        n_verifier: usize,
        mut gates: Vec<Gate>,
        duration: usize,
        t_m: usize,
    ) -> Result<Self> {
        gates.sort_by_key(sort_key);
        let c = Circuit {
            n_ancilla,
            n_verifier,
            gates,
            duration,
            t_m,
            perm: None,
        };
        c.check()?;
        Ok(c)
    }

    pub fn empty(n_ancilla: usize) -> Self {
        Circuit {
            n_ancilla,
            n_verifier: 0,
            gates: Vec::new(),
            duration: 0,
            t_m: 0,
            perm: None,
        }
    }

    pub fn with_perm(mut self, perm: Vec<usize>) -> Self {
        self.perm = Some(perm);
        self
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n_qubits(&self) -> usize {
        self.n_ancilla + self.n_verifier
    }

    pub fn verifier(&self, i: usize) -> usize {
        self.n_ancilla + i
    }

    pub fn is_verifier(&self, q: usize) -> bool {
        q >= self.n_ancilla
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.op.kind() == kind).count()
    }

    /// Last step in which any gate acts, measurements counted for their
    /// full span.
    pub fn depth(&self) -> usize {
        self.gates
            .iter()
            .map(|g| self.busy_until(g))
            .max()
            .unwrap_or(0)
    }

    fn busy_until(&self, g: &Gate) -> usize {
        match g.op {
            Op::MeasX(_) => g.time + self.t_m.max(1) - 1,
            _ => g.time,
        }
    }

    fn check(&self) -> Result<()> {
        let nq = self.n_qubits();
        let bad = |msg: String| Err(Error::InvalidCircuit(msg));
        // busy[q] = sorted list of (from, to) spans
        let mut spans: Vec<Vec<(usize, usize, GateKind)>> = vec![Vec::new(); nq];
        for g in &self.gates {
            let qubits = g.op.qubits();
            if qubits.iter().any(|&q| q >= nq) {
                return bad(format!("gate {:?} uses a qubit outside 0..{nq}", g.op));
            }
            if qubits.len() == 2 && qubits[0] == qubits[1] {
                return bad(format!("gate {:?} acts twice on one qubit", g.op));
            }
            let is_prep = matches!(g.op, Op::PrepZero(_) | Op::PrepPlus(_));
            if g.time == 0 && !is_prep {
                return bad(format!(
                    "only preparations may happen at time 0, got {:?}",
                    g.op
                ));
            }
            let end = self.busy_until(g);
            if end > self.duration {
                return bad(format!(
                    "gate {:?} at time {} ends after duration {}",
                    g.op, g.time, self.duration
                ));
            }
            for q in qubits {
                for &(from, to, _) in &spans[q] {
                    if g.time <= to && from <= end {
                        return bad(format!("qubit {q} used twice at time {}", g.time));
                    }
                }
                spans[q].push((g.time, end, g.op.kind()));
            }
        }
        for (q, s) in spans.iter().enumerate() {
            let last = s.iter().map(|&(from, _, _)| from).max();
            for &(from, _, kind) in s {
                if kind == GateKind::MeasX && Some(from) != last {
                    return bad(format!("qubit {q} is used after its measurement"));
                }
            }
        }
        Ok(())
    }

    /// Every gate event plus every idle `(qubit, time)` slot, ordered by
    /// time, then gates before idles, then qubit.
    ///
    /// A qubit exists from the step after its preparation (or from step 1
    /// when it is never prepared) until its measurement ends (or the end of
    /// the circuit).
    pub fn locations(&self) -> Vec<Location> {
        let nq = self.n_qubits();
        let mut born = vec![1usize; nq];
        let mut dies = vec![self.duration; nq];
        let mut busy = vec![vec![false; self.duration + 1]; nq];
        for g in &self.gates {
            let end = self.busy_until(g);
            for q in g.op.qubits() {
                for slot in &mut busy[q][g.time..=end] {
                    *slot = true;
                }
                match g.op {
                    Op::PrepZero(_) | Op::PrepPlus(_) => born[q] = g.time + 1,
                    Op::MeasX(_) => dies[q] = end,
                    _ => {}
                }
            }
        }

        let mut out = Vec::new();
        let mut gi = 0;
        for time in 0..=self.duration {
            while gi < self.gates.len() && self.gates[gi].time == time {
                let g = &self.gates[gi];
                out.push(Location {
                    index: out.len(),
                    time,
                    kind: LocationKind::Gate(g.op.kind()),
                    qubits: g.op.qubits(),
                });
                gi += 1;
            }
            if time == 0 {
                continue;
            }
            for (q, slots) in busy.iter().enumerate() {
                if time >= born[q] && time <= dies[q] && !slots[time] {
                    out.push(Location {
                        index: out.len(),
                        time,
                        kind: LocationKind::Idle,
                        qubits: vec![q],
                    });
                }
            }
        }
        out
    }

    /// Line-oriented serialization with a versioned header.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# ftfilter circuit v1\n");
        let _ = writeln!(out, "n_ancilla {}", self.n_ancilla);
        let _ = writeln!(out, "n_verifier {}", self.n_verifier);
        let _ = writeln!(out, "duration {}", self.duration);
        let _ = writeln!(out, "t_m {}", self.t_m);
        if let Some(perm) = &self.perm {
            let items: Vec<String> = perm.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "perm {}", items.join(" "));
        }
        for g in &self.gates {
            let qs: Vec<String> = g.op.qubits().iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{} {} {}", g.time, g.op.kind().name(), qs.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let mut header = [None::<usize>; 4];
        let mut perm = None;
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::Parse(format!("circuit line {}: {msg}", lineno + 1));
            let num = |s: &str| s.parse::<usize>().map_err(|e| at(format!("{s:?}: {e}")));
            let mut words = line.split_whitespace();
            let first = words.next().unwrap_or_default();
            let slot = match first {
                "n_ancilla" => Some(0),
                "n_verifier" => Some(1),
                "duration" => Some(2),
                "t_m" => Some(3),
                _ => None,
            };
            if let Some(slot) = slot {
                let value = words
                    .next()
                    .ok_or_else(|| at(format!("{first} needs a value")))?;
                header[slot] = Some(num(value)?);
                continue;
            }
            if first == "perm" {
                perm = Some(words.map(num).collect::<Result<Vec<_>>>()?);
                continue;
            }
            let time = num(first)?;
            let kind_name = words.next().ok_or_else(|| at("missing gate kind".into()))?;
            let kind = GateKind::from_name(kind_name)
                .ok_or_else(|| at(format!("unknown gate kind {kind_name:?}")))?;
            let qubits = words.map(num).collect::<Result<Vec<_>>>()?;
            if qubits.len() != kind.arity() {
                return Err(at(format!(
                    "{kind_name} takes {} qubits, got {}",
                    kind.arity(),
                    qubits.len()
                )));
            }
            gates.push(Gate {
                time,
                op: Op::build(kind, &qubits),
            });
        }
        let field = |i: usize, name: &str| {
            header[i].ok_or_else(|| Error::Parse(format!("circuit header lacks {name}")))
        };
        let mut c = Circuit::new(
            field(0, "n_ancilla")?,
            field(1, "n_verifier")?,
            gates,
            field(2, "duration")?,
            field(3, "t_m")?,
        )?;
        c.perm = perm;
        Ok(c)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The standard-form verification network.
///
/// Verifier `i` starts in `|+⟩` at time 0, meets the ancilla columns of row
/// `i` of `A` with CZ gates at the scheduled steps `1..=N`, then meets its
/// identity column at step `N+1` together with every other verifier, and is
/// measured in the X basis for `t_m` steps. Total duration `N + 1 + t_m`.
pub fn emit_verification(spec: &CodeSpec, sched: &Schedule, t_m: usize) -> Result<Circuit> {
    let sf = to_standard_form(&spec.h);
    if sf.r == 0 {
        return Ok(Circuit::empty(spec.n).with_perm(sf.perm));
    }
    if !validate(sched, &sf.a) {
        return Err(Error::InvalidSchedule(
            "schedule does not match the A block of this code".into(),
        ));
    }
    if t_m == 0 {
        return Err(Error::InvalidCircuit(
            "measurement time must be at least 1".into(),
        ));
    }
    let n = spec.n;
    let big_n = sched.n_symbols;
    let mut gates = Vec::new();
    for i in 0..sf.r {
        gates.push(Gate {
            time: 0,
            op: Op::PrepPlus(n + i),
        });
    }
    for &(row, col, time) in &sched.entries {
        gates.push(Gate {
            time,
            op: Op::Cz(n + row, sf.a_column(col)),
        });
    }
    for i in 0..sf.r {
        gates.push(Gate {
            time: big_n + 1,
            op: Op::Cz(n + i, sf.identity_column(i)),
        });
        gates.push(Gate {
            time: big_n + 2,
            op: Op::MeasX(n + i),
        });
    }
    Ok(Circuit::new(n, sf.r, gates, big_n + 1 + t_m, t_m)?.with_perm(sf.perm))
}

/// Schedule `A` and emit the standard-form verification network.
pub fn verification_network(spec: &CodeSpec, t_m: usize) -> Result<Circuit> {
    let sf = to_standard_form(&spec.h);
    emit_verification(spec, &schedule(&sf.a), t_m)
}

/// Encoder for `|0⟩_L`: bring `G_w` to `(I | B)` up to a column
/// permutation, prepare the pivot qubits in `|+⟩` and the rest in `|0⟩`,
/// and fan out with CX gates along the nonzeros of `B`, scheduled as a
/// latin rectangle. Depth `w_max(B)`.
pub fn emit_preparation(spec: &CodeSpec) -> Result<Circuit> {
    let n = spec.n;
    let echelon = spec.gw.rref();
    if echelon.pivots.len() != spec.gw.row_count() {
        return Err(Error::RedundantGenerators(format!(
            "G has {} rows but rank {}",
            spec.gw.row_count(),
            echelon.pivots.len()
        )));
    }
    let pivots = echelon.pivots;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let b = echelon.matrix.select_columns(&free);
    let sched = schedule(&b);

    let mut gates = Vec::new();
    for q in 0..n {
        let op = if pivots.contains(&q) {
            Op::PrepPlus(q)
        } else {
            Op::PrepZero(q)
        };
        gates.push(Gate { time: 0, op });
    }
    for &(row, col, time) in &sched.entries {
        gates.push(Gate {
            time,
            op: Op::Cx {
                control: pivots[row],
                target: free[col],
            },
        });
    }
    let mut perm = pivots;
    perm.extend_from_slice(&free);
    Ok(Circuit::new(n, 0, gates, sched.n_symbols, 0)?.with_perm(perm))
}

/// Rows of `h` measured as given, each with its own verifier and CZ gates in
/// column order, packed as early as qubit availability allows. All verifiers
/// are measured together once the last CZ is done.
pub fn emit_naive_verification(h: &BitMatrix, t_m: usize) -> Result<Circuit> {
    let n = h.col_count();
    let r = h.row_count();
    if r == 0 {
        return Ok(Circuit::empty(n));
    }
    if t_m == 0 {
        return Err(Error::InvalidCircuit(
            "measurement time must be at least 1".into(),
        ));
    }
    let mut ancilla_busy: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut gates = Vec::new();
    let mut last = 0;
    for i in 0..r {
        gates.push(Gate {
            time: 0,
            op: Op::PrepPlus(n + i),
        });
        let mut next = 1;
        for j in h.row(i).ones() {
            let mut time = next;
            while ancilla_busy[j].contains(&time) {
                time += 1;
            }
            ancilla_busy[j].push(time);
            gates.push(Gate {
                time,
                op: Op::Cz(n + i, j),
            });
            next = time + 1;
            last = last.max(time);
        }
    }
    for i in 0..r {
        gates.push(Gate {
            time: last + 1,
            op: Op::MeasX(n + i),
        });
    }
    Circuit::new(n, r, gates, last + t_m, t_m)
}
