//! The dichotomy table: every verdict the library can render, one row per
//! model.

use crate::filtration::{boundary_scan, FiltrationMode, ScanVerdict};
use crate::linalg::C64;
use crate::models::{build_r, ModelId};
use crate::transfer_bethe::{compare_spectrum, max_relative_transfer_commutator, SeedStrategy};
use crate::yang_baxter::{check_boundary_free, RMatrixSpec};
use crate::{Error, Result, Tolerances};
use serde::Serialize;

/// Spectral families are scanned at the first of these parameters where
/// `R(u)` is invertible.
pub const FILTRATION_POINTS: [f64; 3] = [0.5, 0.3, 0.7];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportConfig {
    pub models: Vec<ModelId>,
    pub filtration_n: (usize, usize),
    pub max_depth: usize,
    pub mode: FiltrationMode,
    pub transfer_n: (usize, usize),
    /// Relative commutator accepted as zero.
    pub tol_commute: f64,
    /// `(N, M)` for the Bethe comparison on models that admit one.
    pub spectrum_sector: (usize, usize),
    pub tolerances: Tolerances,
    pub seeds: SeedStrategy,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            models: ModelId::catalog(),
            filtration_n: (2, 4),
            max_depth: 8,
            mode: FiltrationMode::Product,
            transfer_n: (2, 6),
            tol_commute: 1e-8,
            spectrum_sector: (6, 2),
            tolerances: Tolerances::default(),
            seeds: SeedStrategy::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// Every applicable check passes.
    Solvable,
    /// Yang-Baxter fails together with commutation or algebraic confinement.
    Obstructed,
    /// Anything else.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct YbeCell {
    pub passes: bool,
    pub max_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiltrationCell {
    /// Parameter at which a spectral family was evaluated.
    pub point: Option<f64>,
    pub verdict: ScanVerdict,
    /// `(n, stable rank, termination depth)`
    pub sizes: Vec<(usize, usize, Option<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferCell {
    pub passes: bool,
    /// Largest relative commutator for each chain length.
    pub max_relative: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumCell {
    #[serde(rename = "N")]
    pub n_sites: usize,
    #[serde(rename = "M")]
    pub n_magnons: usize,
    pub passes: bool,
    pub max_mismatch: f64,
    pub coverage: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub model: ModelId,
    pub ybe: YbeCell,
    pub filtration: FiltrationCell,
    pub transfer: TransferCell,
    pub spectrum: Option<SpectrumCell>,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DichotomyReport {
    pub config: ReportConfig,
    pub rows: Vec<ReportRow>,
}

/// The constant matrix scanned for `r`, and the parameter it was taken at.
pub fn filtration_representative(r: &RMatrixSpec, tol_rank: f64) -> Result<(Option<f64>, RMatrixSpec)> {
    if !r.is_spectral() {
        return Ok((None, r.clone()));
    }
    let mut last = None;
    for u in FILTRATION_POINTS {
        match RMatrixSpec::constant(r.evaluate(C64::new(u, 0.0))?, r.local_dim(), tol_rank) {
            Ok(spec) => return Ok((Some(u), spec)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one point"))
}

fn row(model: &ModelId, cfg: &ReportConfig) -> Result<ReportRow> {
    let tol = &cfg.tolerances;
    let r = build_r(model)?;

    let ybe_report = check_boundary_free(&r, tol.tol_ybe)?;
    let ybe = YbeCell { passes: ybe_report.passes, max_defect: ybe_report.max_defect };

    let (lo, hi) = cfg.filtration_n;
    let (point, constant) = filtration_representative(&r, tol.tol_rank)?;
    let scan = boundary_scan(&constant, lo, hi, cfg.max_depth, cfg.mode, tol.tol_rank)?;
    let filtration = FiltrationCell {
        point,
        verdict: scan.verdict,
        sizes: scan.reports.iter().map(|s| (s.n, s.report.stable_rank(), s.report.termination_depth)).collect(),
    };

    let (lo, hi) = cfg.transfer_n;
    let max_relative = (lo..=hi)
        .map(|n| Ok((n, max_relative_transfer_commutator(&r, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let transfer = TransferCell {
        passes: max_relative.iter().all(|&(_, x)| x <= cfg.tol_commute),
        max_relative,
    };

    let spectrum = match model {
        ModelId::XxxRational => {
            let (n, m) = cfg.spectrum_sector;
            let cmp = compare_spectrum(n, m, true, tol, &cfg.seeds)?;
            Some(SpectrumCell {
                n_sites: n,
                n_magnons: m,
                passes: cmp.passes(),
                max_mismatch: cmp.max_mismatch,
                coverage: cmp.coverage(),
            })
        }
        _ => None,
    };

    let constrained = filtration.verdict == ScanVerdict::Constrained;
    let spectrum_ok = spectrum.as_ref().is_none_or(|s| s.passes);
    let classification = if ybe.passes && constrained && transfer.passes && spectrum_ok {
        Classification::Solvable
    } else if !ybe.passes && (!transfer.passes || !constrained) {
        Classification::Obstructed
    } else {
        Classification::Mixed
    };

    Ok(ReportRow { model: *model, ybe, filtration, transfer, spectrum, classification })
}

/// Runs every check for each model in `cfg.models`, in order.
pub fn dichotomy_report(cfg: &ReportConfig) -> Result<DichotomyReport> {
    cfg.tolerances.validate()?;
    if !(cfg.tol_commute.is_finite() && cfg.tol_commute > 0.0) {
        return Err(Error::InvalidArgument(format!("tol_commute must be positive, got {}", cfg.tol_commute)));
    }
    if cfg.transfer_n.0 < 1 || cfg.transfer_n.0 > cfg.transfer_n.1 {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n_min <= n_max for transfer matrices, got {}..{}",
            cfg.transfer_n.0, cfg.transfer_n.1
        )));
    }
    let rows = cfg.models.iter().map(|m| row(m, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(DichotomyReport { config: cfg.clone(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_catalog_gives_empty_table() {
        let cfg = ReportConfig { models: vec![], ..Default::default() };
        assert!(dichotomy_report(&cfg).unwrap().rows.is_empty());
    }

    #[test]
    fn swap_row_is_solvable() {
        let cfg = ReportConfig { models: vec![ModelId::Swap], filtration_n: (2, 3), transfer_n: (2, 4), ..Default::default() };
        let rep = dichotomy_report(&cfg).unwrap();
        assert_eq!(rep.rows[0].classification, Classification::Solvable);
        assert!(rep.rows[0].spectrum.is_none());
    }

    #[test]
    fn singular_point_is_skipped() {
        // b = c at u = eta makes R(0.5) singular for eta = 0.5.
        let cfg = ReportConfig { models: vec![ModelId::XxzTrig { eta: 0.5 }], filtration_n: (2, 3), transfer_n: (2, 3), ..Default::default() };
        let rep = dichotomy_report(&cfg).unwrap();
        assert_eq!(rep.rows[0].filtration.point, Some(0.3));
    }
}
