//! Bimatrix games as a linear space: direct-sum decompositions into
//! cooperative, competitive, and trivial components, strategic-
//! equivalence classification with witnesses, and discrete/continuous
//! fictitious-play dynamics with convergence and cycle diagnostics.
//!
//! Two arithmetic backends are supported throughout: arbitrary-
//! precision rationals ([`scalar::Rational`]) for decomposition,
//! classification, and golden-value work, and `f64` for long dynamics
//! runs. See the `examples/` directory for one runnable walkthrough per
//! capability, and the `cooplab` binary for the file-based interface.
//!
//! Actions are 0-based throughout the API; the CLI and CSV output use
//! the conventional 1-based numbering.

pub mod cfp;
pub mod decompose;
pub mod dfp;
pub mod equivalence;
pub mod error;
pub mod experiments;
pub mod game;
pub mod generate;
pub mod io;
pub mod matrix;
pub mod nash;
pub mod scalar;

pub use error::{Error, Result};
pub use game::{BimatrixGame, EpsilonReport, MixedProfile, Player};
pub use matrix::Matrix;
pub use scalar::{Rational, Scalar};
