//! Brute-force coset analysis.
//!
//! Errors are enumerated by increasing weight, and within one weight by the
//! lexicographic order of their sorted support `(i₁ < i₂ < …)`. The first
//! error seen for a syndrome is its coset leader.

use std::collections::HashMap;

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::gf2::{BitMatrix, BitVector};

/// Upper bound on the number of errors a coset table may enumerate.
pub const MAX_COSET_ENUMERATION: u128 = 10_000_000;

/// `C(n, k)` as a `u128`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Visit every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetEntry {
    pub leader: BitVector,
    pub weight: usize,
}

/// Minimal-weight representatives for every syndrome reachable within
/// `w_max` errors. Syndromes absent from the table need weight `> w_max`.
#[derive(Clone, Debug)]
pub struct CosetTable {
    pub h: BitMatrix,
    pub w_max: usize,
    entries: HashMap<BitVector, CosetEntry>,
}

impl CosetTable {
    pub fn get(&self, syndrome: &BitVector) -> Option<&CosetEntry> {
        self.entries.get(syndrome)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted by (leader weight, syndrome string) for stable output.
    pub fn sorted_entries(&self) -> Vec<(&BitVector, &CosetEntry)> {
        let mut all: Vec<_> = self.entries.iter().collect();
        all.sort_by_key(|(s, e)| (e.weight, s.to_string()));
        all
    }
}

/// Build the coset-leader table of `h` up to error weight `w_max`.
pub fn build_coset_table(h: &BitMatrix, w_max: usize, exec: Exec) -> Result<CosetTable> {
    let n = h.col_count();
    let w_max = w_max.min(n);
    let required: u128 = (0..=w_max).map(|w| binomial(n, w)).sum();
    if required > MAX_COSET_ENUMERATION {
        return Err(Error::Infeasible {
            what: "coset table",
            required,
            limit: MAX_COSET_ENUMERATION,
        });
    }

    let columns: Vec<BitVector> = (0..n).map(|c| h.column(c)).collect();
    let r = h.row_count();

    // One map per weight class, each holding the first error per syndrome.
    let classes: Vec<HashMap<BitVector, BitVector>> = map_range(exec, w_max + 1, |w| {
        let mut first = HashMap::new();
        for_each_combination(n, w, |support| {
            let mut s = BitVector::zeros(r);
            for &c in support {
                s.xor_assign(&columns[c]);
            }
            first
                .entry(s)
                .or_insert_with(|| BitVector::from_support(n, support));
        });
        first
    });

    let mut entries = HashMap::new();
    for (w, class) in classes.into_iter().enumerate() {
        for (s, leader) in class {
            entries.entry(s).or_insert(CosetEntry { leader, weight: w });
        }
    }
    Ok(CosetTable {
        h: h.clone(),
        w_max,
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FtViolation {
    pub syndrome: BitVector,
    pub syndrome_weight: usize,
    /// `None` when no error of weight `≤ t` produces the syndrome.
    pub leader_weight: Option<usize>,
    pub leader: Option<BitVector>,
}

/// Outcome of [`check_ft_condition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FtReport {
    pub t: usize,
    pub pass: bool,
    pub violations: Vec<FtViolation>,
}

/// Check that every syndrome of weight `w_s ≤ t` is produced by some error of
/// weight `≤ w_s`. Syndromes outside the column space of `h` cannot occur and
/// are skipped.
pub fn check_ft_condition(h: &BitMatrix, t: usize, exec: Exec) -> Result<FtReport> {
    let table = build_coset_table(h, t, exec)?;
    let r = h.row_count();
    let column_space = h.transpose();
    let mut violations = Vec::new();
    for ws in 1..=t.min(r) {
        for_each_combination(r, ws, |support| {
            let s = BitVector::from_support(r, support);
            match table.get(&s) {
                Some(entry) if entry.weight <= ws => {}
                Some(entry) => violations.push(FtViolation {
                    syndrome: s,
                    syndrome_weight: ws,
                    leader_weight: Some(entry.weight),
                    leader: Some(entry.leader.clone()),
                }),
                None => {
                    if column_space.row_space_contains(&s) {
                        violations.push(FtViolation {
                            syndrome: s,
                            syndrome_weight: ws,
                            leader_weight: None,
                            leader: None,
                        });
                    }
                }
            }
        });
    }
    Ok(FtReport {
        t,
        pass: violations.is_empty(),
        violations,
    })
}

/// Weight of an X error's action on `|0⟩_L`: the minimum of `wt(e + c)` over
/// codewords `c`. Holds the codeword list so repeated queries are cheap.
#[derive(Clone, Debug)]
pub struct EffectiveWeight {
    words: Vec<BitVector>,
}

impl EffectiveWeight {
    pub fn new(spec: &CodeSpec) -> Result<Self> {
        Ok(Self {
            words: spec.codewords()?,
        })
    }

    pub fn of(&self, e: &BitVector) -> usize {
        if e.is_zero() {
            return 0;
        }
        let mut best = e.weight();
        for c in &self.words {
            let w = e.xor_weight(c);
            if w < best {
                best = w;
            }
        }
        best
    }
}

/// One-shot form of [`EffectiveWeight::of`].
pub fn effective_weight(e: &BitVector, spec: &CodeSpec) -> Result<usize> {
    Ok(EffectiveWeight::new(spec)?.of(e))
}
