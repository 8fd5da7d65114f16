//! Interaction-depth filtrations of operator algebras.
//!
//! Given generators `S` in End(C^m), two increasing chains of subspaces are
//! computed level by level:
//!
//! * **product**: `P_k` is the span of all words of length at most `k` in
//!   `S` (the empty word is the identity when requested);
//! * **commutator**: `P_0 = span(S ∪ {I?})` and
//!   `P_{k+1} = P_k + span{[a, b] : a, b ∈ P_k}`.
//!
//! Each level only multiplies the directions that were new at the previous
//! level, so the working basis never exceeds `m^2` elements.
//!
//! In a finite ambient dimension every such chain stabilizes. What separates
//! the two sides of the solvable/obstructed dichotomy is therefore *where*
//! it stabilizes: a constrained chain stops strictly below the full matrix
//! algebra, a saturating one fills all of End(C^m). The saturation verdict
//! is a proxy for a structural boundary and is labeled as such.

use crate::embedding::{ambient_dim, embed_adjacent};
use crate::linalg::{frobenius_norm, ComplexMatrix, OperatorSpan};
use crate::yang_baxter::RMatrixSpec;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiltrationMode {
    Product,
    Commutator,
}

impl fmt::Display for FiltrationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FiltrationMode::Product => "product",
            FiltrationMode::Commutator => "commutator",
        })
    }
}

impl FromStr for FiltrationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(FiltrationMode::Product),
            "commutator" => Ok(FiltrationMode::Commutator),
            other => Err(Error::InvalidArgument(format!(
                "unknown filtration mode `{other}` (expected product or commutator)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    ambient_dim: usize,
    generators: Vec<ComplexMatrix>,
    mode: FiltrationMode,
    include_identity: bool,
}

impl GeneratorSet {
    /// Rejects empty sets, mixed dimensions and (numerically) zero generators.
    pub fn new(generators: Vec<ComplexMatrix>, mode: FiltrationMode, include_identity: bool) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidArgument("generator set must be nonempty".into()))?;
        let ambient_dim = first.dim();
        for g in &generators {
            if g.dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: g.dim() });
            }
            if frobenius_norm(g) <= f64::EPSILON {
                return Err(Error::InvalidArgument("generators must be nonzero".into()));
            }
        }
        Ok(Self { ambient_dim, generators, mode, include_identity })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn mode(&self) -> FiltrationMode {
        self.mode
    }

    pub fn include_identity(&self) -> bool {
        self.include_identity
    }

    /// The same set with every generator replaced by `g a g^{-1}`.
    pub fn conjugated(&self, g: &ComplexMatrix) -> Result<Self> {
        let g_inv = g.inverse()?;
        let generators = self.generators.iter().map(|a| g.matmul(a).matmul(&g_inv)).collect();
        Self::new(generators, self.mode, self.include_identity)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiltrationReport {
    pub mode: FiltrationMode,
    /// `d_0 <= d_1 <= ...`, ending at the first repeated value when the
    /// chain terminated.
    pub dims: Vec<usize>,
    /// Smallest `k` with `dims[k] == dims[k + 1]`, confirmed by one more level.
    pub termination_depth: Option<usize>,
    /// `dims[k] - dims[k - 1]`, with `dims[-1] = 0`.
    pub new_counts: Vec<usize>,
    /// Whether the last level is all of End(C^ambient_dim).
    pub saturated: bool,
    /// Matrix size `m`; the algebra has dimension `m^2`.
    pub ambient_dim: usize,
    pub max_depth_searched: usize,
}

impl FiltrationReport {
    pub fn stable_rank(&self) -> usize {
        *self.dims.last().expect("dims always holds level 0")
    }

    pub fn terminated(&self) -> bool {
        self.termination_depth.is_some()
    }
}

fn level_zero(gens: &GeneratorSet, tol_rank: f64) -> Result<OperatorSpan> {
    let m = gens.ambient_dim;
    let mut seed = Vec::new();
    if gens.include_identity {
        seed.push(ComplexMatrix::identity(m));
    }
    if gens.mode == FiltrationMode::Commutator {
        seed.extend(gens.generators.iter().cloned());
    }
    OperatorSpan::from_matrices(m, &seed, tol_rank)
}

/// Candidates for the next level, built from `frontier` (directions new at
/// the previous level) against the full current span.
fn next_candidates(
    gens: &GeneratorSet,
    span: &OperatorSpan,
    frontier: &[ComplexMatrix],
    first_level: bool,
) -> Vec<ComplexMatrix> {
    match gens.mode {
        FiltrationMode::Product => {
            let mut out: Vec<ComplexMatrix> = frontier
                .par_iter()
                .flat_map_iter(|f| gens.generators.iter().map(move |g| f.matmul(g)))
                .collect();
            if first_level {
                out.extend(gens.generators.iter().cloned());
            }
            out
        }
        FiltrationMode::Commutator => {
            // frontier is a suffix of the basis; pairs inside the old part
            // already lie in the current level.
            let basis = span.basis();
            let old = basis.len() - frontier.len();
            frontier
                .par_iter()
                .enumerate()
                .flat_map_iter(|(fi, f)| basis[..old + fi].iter().map(move |b| f.commutator(b)))
                .collect()
        }
    }
}

/// Runs the filtration up to `max_depth` levels past level 0.
pub fn filtration_dims(gens: &GeneratorSet, max_depth: usize, tol_rank: f64) -> Result<FiltrationReport> {
    if max_depth < 1 {
        return Err(Error::InvalidArgument("max_depth must be at least 1".into()));
    }
    let mut span = level_zero(gens, tol_rank)?;
    let mut dims = vec![span.rank()];
    let mut frontier: Vec<ComplexMatrix> = span.basis().to_vec();
    let mut termination_depth = None;

    let mut depth = 0;
    while depth < max_depth {
        depth += 1;
        let candidates = next_candidates(gens, &span, &frontier, depth == 1);
        frontier = span.extend(&candidates, tol_rank)?;
        dims.push(span.rank());

        if frontier.is_empty() {
            // Confirmation: rebuild the next level from the whole basis.
            let all = span.basis().to_vec();
            let recheck = next_candidates(gens, &span, &all, depth == 1);
            let grown = span.extend(&recheck, tol_rank)?;
            if grown.is_empty() {
                termination_depth = Some(depth - 1);
                break;
            }
            // A tie at tolerance: the chain was still growing, and the
            // confirmation level is the next level.
            depth += 1;
            dims.push(span.rank());
            frontier = grown;
        }
    }

    let new_counts = dims
        .iter()
        .scan(0usize, |prev, &d| {
            let diff = d - *prev;
            *prev = d;
            Some(diff)
        })
        .collect();
    let m = gens.ambient_dim;
    Ok(FiltrationReport {
        mode: gens.mode,
        saturated: span.rank() == m * m,
        dims,
        termination_depth,
        new_counts,
        ambient_dim: m,
        max_depth_searched: max_depth,
    })
}

/// The span reached by the product filtration itself, for callers that need
/// the basis rather than just the dimensions.
pub fn word_span(gens: &GeneratorSet, max_word_len: usize, tol_rank: f64) -> Result<OperatorSpan> {
    let product = GeneratorSet { mode: FiltrationMode::Product, ..gens.clone() };
    let mut span = level_zero(&product, tol_rank)?;
    let mut frontier: Vec<ComplexMatrix> = span.basis().to_vec();
    for depth in 1..=max_word_len {
        let candidates = next_candidates(&product, &span, &frontier, depth == 1);
        frontier = span.extend(&candidates, tol_rank)?;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(span)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanVerdict {
    /// No system size reached the full operator algebra.
    Constrained,
    /// Some system size filled the full operator algebra.
    Saturating,
}

impl fmt::Display for ScanVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanVerdict::Constrained => "constrained",
            ScanVerdict::Saturating => "saturating",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SizedReport {
    pub n: usize,
    #[serde(flatten)]
    pub report: FiltrationReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryScan {
    pub reports: Vec<SizedReport>,
    /// Saturation is a proxy for a structural boundary, not a proof of one.
    pub verdict: ScanVerdict,
}

/// Nearest-neighbour generators `{R_{i,i+1}}` on `n` sites.
pub fn chain_generators(r: &ComplexMatrix, n: usize, d: usize) -> Result<Vec<ComplexMatrix>> {
    (1..n).map(|i| embed_adjacent(r, i, n, d)).collect()
}

/// Filtration of `{R_{i,i+1} : 1 <= i < n}` for each `n` in `n_min..=n_max`.
/// Product mode includes the identity; commutator mode does not.
pub fn boundary_scan(
    r: &RMatrixSpec,
    n_min: usize,
    n_max: usize,
    max_depth: usize,
    mode: FiltrationMode,
    tol_rank: f64,
) -> Result<BoundaryScan> {
    let matrix = r.constant_matrix().ok_or_else(|| {
        Error::InvalidArgument("boundary scan needs a constant R-matrix; evaluate the family first".into())
    })?;
    if !(2 <= n_min && n_min <= n_max) {
        return Err(Error::InvalidArgument(format!("need 2 <= n_min <= n_max, got {n_min}..{n_max}")));
    }
    let d = r.local_dim();
    // The flattened operators live in C^(d^2n); check the largest size up front.
    ambient_dim(n_max, d)?;

    let reports = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let generators = chain_generators(matrix, n, d)?;
            let gens = GeneratorSet::new(generators, mode, mode == FiltrationMode::Product)?;
            let report = filtration_dims(&gens, max_depth, tol_rank)?;
            Ok(SizedReport { n, report })
        })
        .collect::<Result<Vec<_>>>()?;

    let verdict = if reports.iter().any(|r| r.report.saturated) {
        ScanVerdict::Saturating
    } else {
        ScanVerdict::Constrained
    };
    Ok(BoundaryScan { reports, verdict })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationWitness {
    /// The filtration terminated within the depth cap.
    pub bounded: bool,
    pub report: FiltrationReport,
}

/// Bounded-depth generation: does the filtration stabilize at depth
/// `<= depth_cap`? One extra level is searched so that stabilization at the
/// cap itself can be observed.
pub fn finite_presentation_proxy(
    gens: &GeneratorSet,
    depth_cap: usize,
    tol_rank: f64,
) -> Result<PresentationWitness> {
    if depth_cap < 1 {
        return Err(Error::InvalidArgument("depth_cap must be at least 1".into()));
    }
    let report = filtration_dims(gens, depth_cap + 1, tol_rank)?;
    let bounded = report.termination_depth.is_some_and(|t| t <= depth_cap);
    Ok(PresentationWitness { bounded, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{C64, ONE};

    #[test]
    fn identity_generator_terminates_immediately() {
        let gens = GeneratorSet::new(vec![ComplexMatrix::identity(2)], FiltrationMode::Product, true).unwrap();
        let rep = filtration_dims(&gens, 5, 1e-9).unwrap();
        assert_eq!(rep.dims, vec![1, 1]);
        assert_eq!(rep.termination_depth, Some(0));
        assert_eq!(rep.new_counts, vec![1, 0]);
        assert!(!rep.saturated);
    }

    #[test]
    fn nilpotent_generator() {
        let e12 = ComplexMatrix::unit(2, 0, 1);
        let gens = GeneratorSet::new(vec![e12], FiltrationMode::Product, true).unwrap();
        let w = finite_presentation_proxy(&gens, 4, 1e-9).unwrap();
        assert!(w.bounded);
        assert_eq!(w.report.dims, vec![1, 2, 2]);
        assert_eq!(w.report.termination_depth, Some(1));
    }

    #[test]
    fn product_without_identity_starts_empty() {
        let gens = GeneratorSet::new(vec![ComplexMatrix::pauli_x()], FiltrationMode::Product, false).unwrap();
        let rep = filtration_dims(&gens, 4, 1e-9).unwrap();
        // X, then X^2 = I
        assert_eq!(rep.dims, vec![0, 1, 2, 2]);
    }

    #[test]
    fn pauli_commutators_generate_su2() {
        let gens = GeneratorSet::new(
            vec![ComplexMatrix::pauli_x(), ComplexMatrix::pauli_y()],
            FiltrationMode::Commutator,
            false,
        )
        .unwrap();
        let rep = filtration_dims(&gens, 4, 1e-9).unwrap();
        assert_eq!(rep.dims, vec![2, 3, 3]);
        assert!(!rep.saturated);

        let with_id = GeneratorSet::new(gens.generators().to_vec(), FiltrationMode::Commutator, true).unwrap();
        let rep = filtration_dims(&with_id, 4, 1e-9).unwrap();
        assert_eq!(rep.dims, vec![3, 4, 4]);
        assert!(rep.saturated);
    }

    #[test]
    fn horizon_without_termination() {
        let shift = ComplexMatrix::from_fn(8, |i, j| if i == (j + 1) % 8 { ONE } else { C64::new(0.0, 0.0) });
        let gens = GeneratorSet::new(vec![shift], FiltrationMode::Product, true).unwrap();
        let rep = filtration_dims(&gens, 3, 1e-9).unwrap();
        assert_eq!(rep.dims, vec![1, 2, 3, 4]);
        assert_eq!(rep.termination_depth, None);
        assert_eq!(rep.max_depth_searched, 3);
        let w = finite_presentation_proxy(&gens, 3, 1e-9).unwrap();
        assert!(!w.bounded);
    }

    #[test]
    fn generator_set_validation() {
        assert!(GeneratorSet::new(vec![], FiltrationMode::Product, true).is_err());
        assert!(GeneratorSet::new(vec![ComplexMatrix::zeros(2)], FiltrationMode::Product, true).is_err());
        assert!(GeneratorSet::new(
            vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)],
            FiltrationMode::Product,
            true
        )
        .is_err());
        assert!(filtration_dims(
            &GeneratorSet::new(vec![ComplexMatrix::identity(2)], FiltrationMode::Product, true).unwrap(),
            0,
            1e-9
        )
        .is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("product".parse::<FiltrationMode>().unwrap(), FiltrationMode::Product);
        assert_eq!("commutator".parse::<FiltrationMode>().unwrap(), FiltrationMode::Commutator);
        assert!("lie".parse::<FiltrationMode>().is_err());
    }

    #[test]
    fn report_json_fields() {
        let gens = GeneratorSet::new(vec![ComplexMatrix::identity(2)], FiltrationMode::Product, true).unwrap();
        let rep = filtration_dims(&gens, 2, 1e-9).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["mode"], "product");
        assert_eq!(v["dims"], serde_json::json!([1, 1]));
        assert_eq!(v["termination_depth"], 0);
        assert_eq!(v["saturated"], false);
        assert_eq!(v["ambient_dim"], 2);
        assert_eq!(v["new_counts"], serde_json::json!([1, 0]));
    }
}
