//! Numerical tolerances and the ambient-dimension ceiling.
//!
//! The ceiling is process-wide: it is read once from `RIGIDITY_MAX_DIM`
//! (falling back to [`DEFAULT_MAX_DIM`]) and can be overridden with
//! [`set_max_dim`].

use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicUsize, Ordering};

/// 2^12: twelve sites of C^2. A dense complex matrix at this size is ~256 MB.
pub const DEFAULT_MAX_DIM: usize = 4096;

pub const MAX_DIM_ENV: &str = "RIGIDITY_MAX_DIM";

static MAX_DIM: AtomicUsize = AtomicUsize::new(0);

/// Current ambient-dimension ceiling.
pub fn max_dim() -> usize {
    match MAX_DIM.load(Ordering::Relaxed) {
        0 => {
            let dim = std::env::var(MAX_DIM_ENV)
                .ok()
                .and_then(|v| v.trim().parse::<usize>().ok())
                .filter(|&v| v > 0)
                .unwrap_or(DEFAULT_MAX_DIM);
            // A concurrent set_max_dim wins over the environment.
            match MAX_DIM.compare_exchange(0, dim, Ordering::Relaxed, Ordering::Relaxed) {
                Ok(_) => dim,
                Err(current) => current,
            }
        }
        dim => dim,
    }
}

pub fn set_max_dim(dim: usize) {
    assert!(dim > 0, "dimension ceiling must be positive");
    MAX_DIM.store(dim, Ordering::Relaxed);
}

pub(crate) fn check_dim(dim: usize) -> crate::Result<()> {
    let max = max_dim();
    if dim > max {
        Err(crate::Error::DimensionCeiling { dim, max })
    } else {
        Ok(())
    }
}

/// Every cutoff used by the library, in one place.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cutoff for numerical rank.
    pub tol_rank: f64,
    /// Relative anti-Hermitian part tolerated by the eigensolver.
    pub tol_herm: f64,
    /// Relative Yang-Baxter defect accepted as zero.
    pub tol_ybe: f64,
    /// Energy mismatch accepted between Bethe and exact spectra.
    pub tol_spec: f64,
    /// Minimum separation between distinct Bethe roots.
    pub tol_sep: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_rank: 1e-9,
            tol_herm: 1e-9,
            tol_ybe: 1e-10,
            tol_spec: 1e-6,
            tol_sep: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            ("tol_rank", self.tol_rank),
            ("tol_herm", self.tol_herm),
            ("tol_ybe", self.tol_ybe),
            ("tol_spec", self.tol_spec),
            ("tol_sep", self.tol_sep),
        ];
        for (name, value) in all {
            if !(value.is_finite() && value > 0.0) {
                return Err(crate::Error::InvalidArgument(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }
}
