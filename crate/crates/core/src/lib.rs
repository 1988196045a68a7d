//! Filter banks, frames of translates and sampling in invariant subspaces
//! for semi-direct products `G = N ⋊_φ H` of a finite abelian group `N` and
//! a finite group `H`.
//!
//! Everything is computed exactly over finite sums: Fourier analysis happens
//! on `N` only, and the non-abelian structure enters through the polyphase
//! matrices `H(γ)`, `G(γ)` indexed by characters `γ ∈ N̂`.

pub mod crystal;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod polyphase;
pub mod sampling;
pub mod signal;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use group::{AbelianGroup, Automorphism, FiniteGroup, GElem, GroupSpec};
pub use polyphase::{
    analysis_matrix, classify_pair, delta_bank, design_dual_pseudoinverse, dual_family,
    frame_bounds, generator_matrix, run_filterbank, run_filterbank_polyphase, synthesis_filters,
    synthesis_matrix, verify_pr, FrameReport, PolyphaseField, PrVerdict, Tolerances,
};

pub use crystal::{CrystalModel, CrystalSpec, DemoMode, DemoReport};
pub use sampling::{GramBounds, Probes, ReconstructionKit, SamplingProblem, UnitaryRep};
pub use signal::{GSignal, NSignal};
