//! Synthesis and checking of verification networks for CSS codeword states.
//!
//! A codeword state `|0⟩_L` is filtered by measuring the checks of its code
//! with one `|+⟩` verifier per check and controlled-Z gates. Writing the check
//! matrix in standard form `(A|I)` makes the network fault tolerant; the
//! nonzero entries of `A` are scheduled as a latin rectangle of minimal size.
//!
//! - [`gf2`]: bit vectors and matrices, standard form.
//! - [`codes`]: codeword-state specifications.
//! - [`cosets`]: coset leaders, the fault-tolerance condition, effective weight.
//! - [`schedule`]: latin-rectangle scheduling.
//! - [`circuit`]: circuit IR and network emitters.
//! - [`paulisim`]: Pauli-frame propagation, exhaustive scans, Monte Carlo.
//! - [`statesim`]: small statevector simulator used as a reference.

pub mod circuit;
pub mod codes;
pub mod cosets;
pub mod error;
pub mod exec;
pub mod gf2;
pub mod paulisim;
pub mod report;
pub mod schedule;
pub mod statesim;

pub use error::{Error, Result};
pub use exec::Exec;
