//! Construction, verification and search of maximum weight spectrum (MWS)
//! and quasi-minimal (QM) linear codes over finite fields, together with the
//! length bounds that relate them.
//!
//! * [`gf`]: GF(q) arithmetic.
//! * [`code`]: codes with column multiplicities, weight spectra, predicates.
//! * [`constructions`]: simplex and identity codes, the power-of-two
//!   embedding and the verified QM -> MWS pipeline.
//! * [`search`]: random and exhaustive searches, Monte-Carlo estimates.
//! * [`bounds`]: entropy, rate constants, length bounds and thresholds.
//! * [`cli`]: the `mws` command-line tool.

pub mod bounds;
pub mod cli;
pub mod code;
pub mod constructions;
pub mod error;
pub mod gf;
mod json;
pub mod matrix;
pub mod search;

pub use code::{EnumGuard, LinearCode, SpectrumReport, WeightSpectrum};
pub use error::{Error, Result};
pub use gf::{build_field, FieldElement, FieldSpec};
