//! Diagonal group generators on difference-weighted sequence spaces.
//!
//! The spaces `H_k` and `ℓ_{p,k}` carry the norm `‖Δ^k c‖_p` on coefficient
//! sequences. The generator multiplies coefficient `n` by `i f(n)`; the
//! library evaluates it, its group and its resolvent, and measures their
//! norms on finite truncations.

pub mod banded;
pub mod cli;
pub mod diffseq;
pub mod error;
pub mod generator;
pub mod hkspace;
pub mod numeric;
pub mod lab;
pub mod quad;

pub use diffseq::{CoeffVec, Symbol, SymbolKind};
pub use error::{LabError, Result};
pub use generator::{GeneratorConfig, NormMethod, OperatorKind};
pub use hkspace::{BasisModel, SpaceConfig};
