//! Codeword-state specifications.
//!
//! A [`CodeSpec`] describes the classical code `C_w` whose equal-weight
//! superposition is the ancilla state `|0⟩_L`, together with a full check
//! matrix `H` of `C_w` (so that `ker H = C_w`).

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest generator count [`CodeSpec::codewords`] will enumerate.
pub const MAX_ENUMERATED_GENERATORS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    pub name: String,
    /// Number of qubits in the codeword state.
    pub n: usize,
    /// Generator of `C_w`, `k_w × n`, independent rows.
    pub gw: BitMatrix,
    /// Full check matrix of `C_w`, `rows ≥ r`, rank `r`.
    pub h: BitMatrix,
    /// Target correctable weight for the verification analysis.
    pub t: usize,
    /// `n − k_w`, the rank of `h`.
    pub r: usize,
    /// Non-fatal issues found while validating.
    pub warnings: Vec<String>,
}

/// Loader policy for dependent generator rows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Reduce dependent rows of `G` (recording a warning) instead of failing.
    pub allow_redundant_generators: bool,
}

impl CodeSpec {
    /// Validate and assemble a specification.
    pub fn new(name: impl Into<String>, gw: BitMatrix, h: BitMatrix, t: usize) -> Result<Self> {
        Self::with_options(name, gw, h, t, LoadOptions::default())
    }

    pub fn with_options(
        name: impl Into<String>,
        gw: BitMatrix,
        h: BitMatrix,
        t: usize,
        opts: LoadOptions,
    ) -> Result<Self> {
        let name = name.into();
        let n = h.col_count();
        if gw.col_count() != n {
            return Err(Error::Dimension(format!(
                "G has {} columns but H has {n}",
                gw.col_count()
            )));
        }
        let mut warnings = Vec::new();

        let product = gw.mul(&h.transpose())?;
        if !product.is_zero() {
            return Err(Error::InconsistentCode(format!(
                "G·Hᵀ ≠ 0 for code {name:?}"
            )));
        }

        let k_w = gw.rank();
        let gw = if k_w < gw.row_count() {
            if !opts.allow_redundant_generators {
                return Err(Error::RedundantGenerators(format!(
                    "G has {} rows but rank {k_w}",
                    gw.row_count()
                )));
            }
            warnings.push(format!(
                "G had {} rows of rank {k_w}; reduced to independent rows",
                gw.row_count()
            ));
            gw.rref().matrix
        } else {
            gw
        };

        let r = h.rank();
        if k_w + r != n {
            return Err(Error::InconsistentCode(format!(
                "rank(G) + rank(H) = {k_w} + {r} ≠ n = {n}; H is not a full check matrix of C_w"
            )));
        }
        if r < h.row_count() {
            warnings.push(format!(
                "H has {} rows but rank {r}; a spanning subset will be measured",
                h.row_count()
            ));
        }

        Ok(CodeSpec {
            name,
            n,
            gw,
            h,
            t,
            r,
            warnings,
        })
    }

    /// Dimension of `C_w`.
    pub fn k_w(&self) -> usize {
        self.gw.row_count()
    }

    /// Every word of `C_w`, indexed by the binary combination of generator rows.
    pub fn codewords(&self) -> Result<Vec<BitVector>> {
        let k = self.k_w();
        if k > MAX_ENUMERATED_GENERATORS {
            return Err(Error::Infeasible {
                what: "codeword enumeration",
                required: 1u128 << k,
                limit: 1u128 << MAX_ENUMERATED_GENERATORS,
            });
        }
        let mut words = Vec::with_capacity(1 << k);
        for combo in 0u64..(1u64 << k) {
            let mut w = BitVector::zeros(self.n);
            for i in 0..k {
                if combo >> i & 1 == 1 {
                    w.xor_assign(self.gw.row(i));
                }
            }
            words.push(w);
        }
        Ok(words)
    }

    /// Serialize in the code file format read by [`load_code`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name {}", self.name);
        let _ = writeln!(out, "t {}", self.t);
        out.push_str("G:\n");
        out.push_str(&self.gw.to_text());
        out.push_str("H:\n");
        out.push_str(&self.h.to_text());
        out
    }

    /// Parse the code file format:
    ///
    /// ```text
    /// name rep5
    /// t 2
    /// G:
    /// 11111
    /// H:
    /// 11000
    /// 01100
    /// 00110
    /// 00011
    /// ```
    ///
    /// An empty `G:` block stands for `k_w = 0`.
    pub fn parse(text: &str, opts: LoadOptions) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            Header,
            G,
            H,
        }
        let mut name = None;
        let mut t = None;
        let mut g_rows = Vec::new();
        let mut h_rows = Vec::new();
        let mut seen_g = false;
        let mut seen_h = false;
        let mut section = Section::Header;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            match line {
                "G:" => {
                    section = Section::G;
                    seen_g = true;
                    continue;
                }
                "H:" => {
                    section = Section::H;
                    seen_h = true;
                    continue;
                }
                _ => {}
            }
            match section {
                Section::Header => {
                    let (key, value) = line
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| at(format!("expected `key value`, got {line:?}")))?;
                    let value = value.trim();
                    match key {
                        "name" => name = Some(value.to_string()),
                        "t" => {
                            t = Some(
                                value
                                    .parse::<usize>()
                                    .map_err(|e| at(format!("bad t {value:?}: {e}")))?,
                            )
                        }
                        other => return Err(at(format!("unknown header key {other:?}"))),
                    }
                }
                Section::G => g_rows.push(BitVector::parse(line).map_err(|e| at(e.to_string()))?),
                Section::H => h_rows.push(BitVector::parse(line).map_err(|e| at(e.to_string()))?),
            }
        }

        let name = name.ok_or_else(|| Error::Parse("missing `name` header".into()))?;
        let t = t.ok_or_else(|| Error::Parse("missing `t` header".into()))?;
        if !seen_g || !seen_h {
            return Err(Error::Parse(
                "code file needs both `G:` and `H:` blocks".into(),
            ));
        }
        let n = h_rows
            .first()
            .or(g_rows.first())
            .map(BitVector::len)
            .ok_or_else(|| Error::Parse("both matrix blocks are empty".into()))?;
        let gw = BitMatrix::from_rows_with_cols(g_rows, n)
            .map_err(|e| Error::Parse(format!("G block: {e}")))?;
        let h = BitMatrix::from_rows_with_cols(h_rows, n)
            .map_err(|e| Error::Parse(format!("H block: {e}")))?;
        CodeSpec::with_options(name, gw, h, t, opts)
    }
}

/// Built-in codeword states.
///
/// * `rep5`: `|00000⟩ + |11111⟩`, checked by the nearest-neighbour chain
///   `q1q2, q2q3, q3q4, q4q5`, `t = 2`.
/// * `steane7`: `|0⟩_L` of the seven-qubit code, i.e. the `[7,3]` simplex
///   code (dual of Hamming) checked by a Hamming generator, `t = 1`.
pub fn builtin(name: &str) -> Result<CodeSpec> {
    match name {
        "rep5" => CodeSpec::new(
            "rep5",
            BitMatrix::from_strs(&["11111"]),
            BitMatrix::from_strs(&["11000", "01100", "00110", "00011"]),
            2,
        ),
        "steane7" => CodeSpec::new(
            "steane7",
            BitMatrix::from_strs(&["1010101", "0110011", "0001111"]),
            BitMatrix::from_strs(&["1000011", "0100101", "0010110", "0001111"]),
            1,
        ),
        other => Err(Error::UnknownCode(other.to_string())),
    }
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &["rep5", "steane7"];

/// Read and validate a code file.
pub fn load_code(path: impl AsRef<Path>, opts: LoadOptions) -> Result<CodeSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    CodeSpec::parse(&text, opts)
}
