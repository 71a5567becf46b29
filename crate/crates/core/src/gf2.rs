//! Dense GF(2) vectors and matrices.
//!
//! Rows are bit-packed into `u64` words. Everything here is sized for
//! desk-scale codes (a few hundred columns at most), so the algorithms are
//! plain Gauss-Jordan elimination without any sparsity tricks.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Unit vector with a single 1 at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones at the given positions.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `mask`, bit `i` of the mask becoming entry `i`.
    pub fn from_u64(len: usize, mask: u64) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            let keep = if len == WORD {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            v.words[0] = mask & keep;
        }
        v
    }

    /// Inverse of [`BitVector::from_u64`]; `None` when longer than 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// Weight of `self + other` without allocating.
    pub fn xor_weight(&self, other: &BitVector) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Set every bit to zero.
    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + bit)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Entries reordered so that entry `j` of the result is entry `perm[j]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> BitVector {
        assert_eq!(perm.len(), self.len);
        BitVector::from_bools(perm.iter().map(|&p| self.get(p)))
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        BitVector::from_bools(self.iter().chain(other.iter()))
    }

    /// Parse a string of `0`/`1` characters; whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bits = Vec::new();
        for c in text.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::Parse(format!(
                        "unexpected character {c:?} in bit string"
                    )))
                }
            }
        }
        Ok(BitVector::from_bools(bits))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A dense matrix over GF(2), stored as a list of packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Output of [`BitMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    /// Nonzero rows of the reduced row echelon form.
    pub matrix: BitMatrix,
    /// Pivot column of each row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    /// An empty (zero-row) matrix with the given column count.
    pub fn empty(cols: usize) -> Self {
        Self::zeros(0, cols)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVector>) -> Result<Self> {
        let cols = rows.first().map(BitVector::len).unwrap_or(0);
        Self::from_rows_with_cols(rows, cols)
    }

    pub fn from_rows_with_cols(rows: Vec<BitVector>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Self { cols, rows })
    }

    /// Build from string rows like `"10110"`; panics on malformed input.
    /// Intended for literals in code and tests.
    pub fn from_strs(rows: &[&str]) -> Self {
        let rows = rows
            .iter()
            .map(|r| BitVector::parse(r).expect("invalid bit-string literal"))
            .collect();
        Self::from_rows(rows).expect("ragged matrix literal")
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bools(self.rows.iter().map(|r| r.get(c)))
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.rows[r].weight()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        self.rows.iter().filter(|r| r.get(c)).count()
    }

    /// Total number of ones.
    pub fn weight(&self) -> usize {
        self.rows.iter().map(BitVector::weight).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `M · vᵀ` over GF(2).
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(BitVector::from_bools(self.rows.iter().map(|r| r.dot(v))))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.row_count() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.row_count(),
                self.cols,
                other.row_count(),
                other.col_count()
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVector::zeros(other.col_count());
                for k in r.ones() {
                    acc.xor_assign(other.row(k));
                }
                acc
            })
            .collect();
        BitMatrix::from_rows_with_cols(rows, other.col_count())
    }

    /// Columns reordered so that column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> BitMatrix {
        assert_eq!(perm.len(), self.cols, "permutation length mismatch");
        let rows = self.rows.iter().map(|r| r.permuted(perm)).collect();
        BitMatrix {
            cols: self.cols,
            rows,
        }
    }

    /// Sub-matrix made of the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| BitVector::from_bools(cols.iter().map(|&c| r.get(c))))
            .collect();
        BitMatrix {
            cols: cols.len(),
            rows,
        }
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.row_count() != other.row_count() {
            return Err(Error::Dimension(format!(
                "cannot place {} rows beside {} rows",
                self.row_count(),
                other.row_count()
            )));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.concat(b))
            .collect();
        BitMatrix::from_rows_with_cols(rows, self.cols + other.cols)
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Reduced row echelon form with zero rows dropped.
    pub fn rref(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            let Some(found) = (next..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(next, found);
            let pivot_row = rows[next].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        rows.truncate(next);
        Echelon {
            matrix: BitMatrix {
                cols: self.cols,
                rows,
            },
            pivots,
        }
    }

    /// Row-reduce so that the listed columns form an identity block, row `i`
    /// carrying its single pivot in `cols[i]`. Returns `None` when those
    /// columns are not independent or do not span the row space.
    pub fn reduce_on_columns(&self, cols: &[usize]) -> Option<BitMatrix> {
        let reduced = self.rref().matrix;
        if reduced.row_count() != cols.len() {
            return None;
        }
        let mut rows = reduced.rows;
        for (i, &col) in cols.iter().enumerate() {
            let found = (i..rows.len()).find(|&k| rows[k].get(col))?;
            rows.swap(i, found);
            let pivot_row = rows[i].clone();
            for (k, row) in rows.iter_mut().enumerate() {
                if k != i && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
        }
        Some(BitMatrix {
            cols: self.cols,
            rows,
        })
    }

    /// Basis of `{v : M·vᵀ = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<BitVector> {
        let Echelon { matrix, pivots } = self.rref();
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|f| {
            let mut v = BitVector::unit(self.cols, f);
            for (row, &p) in matrix.rows.iter().zip(&pivots) {
                if row.get(f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
    }

    /// True when `v` lies in the row space.
    pub fn row_space_contains(&self, v: &BitVector) -> bool {
        let Echelon { matrix, pivots } = self.rref();
        let mut rest = v.clone();
        for (row, &p) in matrix.rows.iter().zip(&pivots) {
            if rest.get(p) {
                rest.xor_assign(row);
            }
        }
        rest.is_zero()
    }

    /// Whether both matrices span the same row space.
    pub fn same_row_space(&self, other: &BitMatrix) -> bool {
        self.cols == other.cols
            && self.rows.iter().all(|r| other.row_space_contains(r))
            && other.rows.iter().all(|r| self.row_space_contains(r))
    }

    /// Parse the shared matrix text format: one row per line made of `0`/`1`
    /// characters, whitespace inside a row ignored, blank lines and `#`
    /// comments skipped.
    pub fn parse_text(text: &str) -> Result<BitMatrix> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let row = BitVector::parse(content)
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse("matrix has no rows".into()));
        }
        BitMatrix::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Render in the shared text format (one row per line, trailing newline).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

/// A check matrix brought to the block form `(A | I_r)` by row operations
/// and a column permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardForm {
    /// The `r × (n−r)` block in front of the identity.
    pub a: BitMatrix,
    /// Column `j` of `(A | I)` is column `perm[j]` of the input.
    pub perm: Vec<usize>,
    pub r: usize,
    pub n: usize,
    /// Set when the input rows were linearly dependent and had to be thinned.
    pub rank_deficient: bool,
}

impl StandardForm {
    /// The block matrix `(A | I_r)` in permuted column order.
    pub fn matrix(&self) -> BitMatrix {
        self.a
            .hstack(&BitMatrix::identity(self.r))
            .expect("A has r rows by construction")
    }

    /// `(A | I_r)` with its columns put back into the input's column order.
    /// Row `i` is the `i`-th check actually measured by the verifier.
    pub fn checks(&self) -> BitMatrix {
        let mut inverse = vec![0; self.n];
        for (j, &p) in self.perm.iter().enumerate() {
            inverse[p] = j;
        }
        self.matrix().permute_columns(&inverse)
    }

    /// Input column that carries the identity entry of row `i`.
    pub fn identity_column(&self, i: usize) -> usize {
        self.perm[self.n - self.r + i]
    }

    /// Input column behind column `j` of `A`.
    pub fn a_column(&self, j: usize) -> usize {
        self.perm[j]
    }
}

/// Bring `h` to standard form.
///
/// When the last `r` columns of `h` are already independent the permutation
/// is the identity; otherwise the pivot columns of the row echelon form are
/// moved to the right, in increasing order, and the remaining columns keep
/// their relative order on the left.
pub fn to_standard_form(h: &BitMatrix) -> StandardForm {
    let n = h.col_count();
    let echelon = h.rref();
    let r = echelon.pivots.len();
    let rank_deficient = r < h.row_count();

    let tail: Vec<usize> = (n - r..n).collect();
    let (reduced, pivots) = match h.reduce_on_columns(&tail) {
        Some(m) => (m, tail),
        None => (echelon.matrix, echelon.pivots),
    };

    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let a = reduced.select_columns(&free);
    let mut perm = free;
    perm.extend_from_slice(&pivots);

    StandardForm {
        a,
        perm,
        r,
        n,
        rank_deficient,
    }
}

/// Syndrome `H·eᵀ`.
pub fn syndrome(h: &BitMatrix, e: &BitVector) -> Result<BitVector> {
    h.mul_vec(e)
}
