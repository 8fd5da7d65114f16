//! Numerical witnesses for the integrable/obstructed dichotomy of two-body
//! interactions on finite tensor products.
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, span ranks,
//!   Hermitian spectra.
//! * [`embedding`]: placing two-site operators on chosen legs of `V^{⊗n}`.
//! * [`yang_baxter`]: the Yang-Baxter defect and pairwise generation.
//! * [`filtration`]: interaction-depth filtrations and the saturation scan.
//! * [`models`]: the R-matrix and Hamiltonian catalog.
//! * [`transfer_bethe`]: transfer matrices, Bethe roots, exact spectra.
//! * [`report`]: all of the above, one row per model.

pub mod config;
pub mod embedding;
mod error;
pub mod filtration;
pub mod linalg;
pub mod models;
pub mod report;
pub mod transfer_bethe;
pub mod yang_baxter;

pub use config::{max_dim, set_max_dim, Tolerances};
pub use embedding::{embed_adjacent, embed_pair, swap_operator, SitePair};
pub use error::{Error, Result};
pub use filtration::{
    boundary_scan, filtration_dims, finite_presentation_proxy, BoundaryScan, FiltrationMode, FiltrationReport,
    GeneratorSet, ScanVerdict,
};
pub use linalg::{frobenius_norm, hermitian_eigenvalues, kron, span_rank, ComplexMatrix, OperatorSpan, C64};
pub use models::{build_hamiltonian, build_r, ModelId};
pub use report::{dichotomy_report, Classification, DichotomyReport, ReportConfig};
pub use transfer_bethe::{
    bethe_residual, bethe_solve, compare_spectrum, monodromy, transfer_commutator_norm, transfer_matrix,
    BetheSolution, BetheSpectrum, SeedStrategy, SpectrumComparison,
};
pub use yang_baxter::{
    check_boundary_free, pairwise_generation_rank, yb_defect_constant, yb_defect_spectral, RMatrixSpec,
    SpectralFamily, YbeReport,
};
