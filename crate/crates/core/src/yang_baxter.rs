//! The Yang-Baxter defect and the three-body checks built on it.
//!
//! On `V^{⊗3}` with `R_12 = R ⊗ id`, `R_23 = id ⊗ R` and
//! `R_13 = P_23 R_12 P_23`, the two triple assemblies are
//! `T_L = R_12 R_13 R_23` and `T_R = R_23 R_13 R_12`; the defect is
//! `T_L - T_R`. Spectral families use the difference form
//! `R_12(u - v) R_13(u) R_23(v) - R_23(v) R_13(u) R_12(u - v)`.

use crate::embedding::{embed_pair, SitePair};
use crate::filtration::{word_span, FiltrationMode, GeneratorSet};
use crate::linalg::{frobenius_norm, ComplexMatrix, OperatorSpan, C64};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

type FamilyFn = dyn Fn(C64) -> Result<ComplexMatrix> + Send + Sync;

/// A one-parameter family `u -> R(u)` of two-site operators.
#[derive(Clone)]
pub enum SpectralFamily {
    /// `R(u) = u·I + base`. With `base = P` this is the rational XXX family.
    Rational { base: ComplexMatrix },
    /// Six-vertex trigonometric family on `C^2 ⊗ C^2`:
    ///
    /// ```text
    /// a(u) = sinh(u + η),  b(u) = sinh(u),  c = sinh(η)
    /// R(u) = [[a,0,0,0],[0,b,c,0],[0,c,b,0],[0,0,0,a]]
    /// ```
    ///
    /// `R(0) = sinh(η)·P` and the anisotropy is `Δ = cosh(η)`.
    Trigonometric { eta: C64 },
    Custom { label: String, eval: Arc<FamilyFn> },
}

impl fmt::Debug for SpectralFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralFamily::Rational { base } => f.debug_struct("Rational").field("base", base).finish(),
            SpectralFamily::Trigonometric { eta } => f.debug_struct("Trigonometric").field("eta", eta).finish(),
            SpectralFamily::Custom { label, .. } => f.debug_struct("Custom").field("label", label).finish(),
        }
    }
}

impl SpectralFamily {
    pub fn custom(label: impl Into<String>, eval: impl Fn(C64) -> Result<ComplexMatrix> + Send + Sync + 'static) -> Self {
        SpectralFamily::Custom { label: label.into(), eval: Arc::new(eval) }
    }

    pub fn evaluate(&self, u: C64) -> Result<ComplexMatrix> {
        let m = match self {
            SpectralFamily::Rational { base } => {
                let mut m = base.clone();
                for i in 0..m.dim() {
                    m.set(i, i, m.get(i, i) + u);
                }
                m
            }
            SpectralFamily::Trigonometric { eta } => {
                let a = (u + eta).sinh();
                let b = u.sinh();
                let c = eta.sinh();
                let z = C64::new(0.0, 0.0);
                ComplexMatrix::from_parts(4, vec![a, z, z, z, z, b, c, z, z, c, b, z, z, z, z, a])
            }
            SpectralFamily::Custom { eval, .. } => eval(u)?,
        };
        if !m.is_finite() {
            return Err(Error::FamilyEvaluation { re: u.re, im: u.im, reason: "non-finite entries".into() });
        }
        Ok(m)
    }
}

#[derive(Clone, Debug)]
pub enum RKind {
    Constant(ComplexMatrix),
    Spectral { family: SpectralFamily, sample_params: Vec<C64> },
}

/// A two-site operator, either fixed or a spectral-parameter family.
#[derive(Clone, Debug)]
pub struct RMatrixSpec {
    local_dim: usize,
    kind: RKind,
}

/// The four sample parameters; the default grid is all ordered pairs.
pub const DEFAULT_SAMPLE_PARAMS: [f64; 4] = [-1.0, -0.5, 0.5, 1.0];

pub fn default_sample_params() -> Vec<C64> {
    DEFAULT_SAMPLE_PARAMS.iter().map(|&x| C64::new(x, 0.0)).collect()
}

fn check_shape(m: &ComplexMatrix, local_dim: usize) -> Result<()> {
    if m.dim() != local_dim * local_dim {
        return Err(Error::DimensionMismatch { expected: local_dim * local_dim, found: m.dim() });
    }
    Ok(())
}

impl RMatrixSpec {
    /// A constant R-matrix; must be invertible at `tol_rank`.
    pub fn constant(matrix: ComplexMatrix, local_dim: usize, tol_rank: f64) -> Result<Self> {
        check_shape(&matrix, local_dim)?;
        matrix.check_invertible(tol_rank)?;
        Ok(Self { local_dim, kind: RKind::Constant(matrix) })
    }

    /// A spectral family. Each sample parameter must evaluate to a `d^2`
    /// matrix; invertibility is not required at isolated samples (the
    /// rational family is singular at `u = ±1`).
    pub fn spectral(family: SpectralFamily, local_dim: usize, sample_params: Vec<C64>) -> Result<Self> {
        if let SpectralFamily::Trigonometric { .. } = family {
            if local_dim != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: local_dim });
            }
        }
        for &u in &sample_params {
            check_shape(&family.evaluate(u)?, local_dim)?;
        }
        Ok(Self { local_dim, kind: RKind::Spectral { family, sample_params } })
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn kind(&self) -> &RKind {
        &self.kind
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self.kind, RKind::Spectral { .. })
    }

    pub fn constant_matrix(&self) -> Option<&ComplexMatrix> {
        match &self.kind {
            RKind::Constant(m) => Some(m),
            RKind::Spectral { .. } => None,
        }
    }

    pub fn sample_params(&self) -> &[C64] {
        match &self.kind {
            RKind::Constant(_) => &[],
            RKind::Spectral { sample_params, .. } => sample_params,
        }
    }

    /// `R(u)`; a constant R ignores `u`.
    pub fn evaluate(&self, u: C64) -> Result<ComplexMatrix> {
        match &self.kind {
            RKind::Constant(m) => Ok(m.clone()),
            RKind::Spectral { family, .. } => {
                let m = family.evaluate(u)?;
                check_shape(&m, self.local_dim)?;
                Ok(m)
            }
        }
    }

    /// Spectral version of a constant R: `R(u) = u·I + R`. Spectral specs
    /// are returned unchanged. The lift of the swap is the XXX family.
    pub fn spectral_lift(&self) -> Self {
        match &self.kind {
            RKind::Constant(m) => Self {
                local_dim: self.local_dim,
                kind: RKind::Spectral {
                    family: SpectralFamily::Rational { base: m.clone() },
                    sample_params: default_sample_params(),
                },
            },
            RKind::Spectral { .. } => self.clone(),
        }
    }
}

/// Defect together with the norm of the left assembly, used for scaling.
#[derive(Clone, Debug)]
pub struct Defect {
    pub matrix: ComplexMatrix,
    pub left_norm: f64,
}

impl Defect {
    pub fn norm(&self) -> f64 {
        frobenius_norm(&self.matrix)
    }

    /// `||Δ||_F / ||T_L||_F` (zero when both vanish).
    pub fn relative(&self) -> f64 {
        let n = self.norm();
        if n == 0.0 {
            0.0
        } else {
            n / self.left_norm
        }
    }
}

fn three_site_legs(r12: &ComplexMatrix, r13: &ComplexMatrix, r23: &ComplexMatrix, d: usize) -> Result<[ComplexMatrix; 3]> {
    Ok([
        embed_pair(r12, SitePair::new(1, 2, 3, d)?)?,
        embed_pair(r13, SitePair::new(1, 3, 3, d)?)?,
        embed_pair(r23, SitePair::new(2, 3, 3, d)?)?,
    ])
}

fn assemble(r12: &ComplexMatrix, r13: &ComplexMatrix, r23: &ComplexMatrix, d: usize) -> Result<Defect> {
    let [a, b, c] = three_site_legs(r12, r13, r23, d)?;
    let left = a.matmul(&b).matmul(&c);
    let right = c.matmul(&b).matmul(&a);
    Ok(Defect { left_norm: frobenius_norm(&left), matrix: &left - &right })
}

/// `R_12 R_13 R_23 - R_23 R_13 R_12` for a constant R.
pub fn yb_defect_constant(r: &RMatrixSpec) -> Result<Defect> {
    let m = r
        .constant_matrix()
        .ok_or_else(|| Error::InvalidArgument("constant defect needs a constant R-matrix".into()))?;
    assemble(m, m, m, r.local_dim)
}

/// Difference-form defect at `(u, v)`.
pub fn yb_defect_spectral(r: &RMatrixSpec, u: C64, v: C64) -> Result<Defect> {
    if !r.is_spectral() {
        return Err(Error::InvalidArgument("spectral defect needs a spectral family".into()));
    }
    let r12 = r.evaluate(u - v)?;
    let r13 = r.evaluate(u)?;
    let r23 = r.evaluate(v)?;
    assemble(&r12, &r13, &r23, r.local_dim)
}

/// Defect assembled in the opposite order, `T_R - T_L`.
pub fn yb_defect_reversed(r12: &ComplexMatrix, r13: &ComplexMatrix, r23: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    let [a, b, c] = three_site_legs(r12, r13, r23, d)?;
    Ok(&c.matmul(&b).matmul(&a) - &a.matmul(&b).matmul(&c))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectSample {
    #[serde(serialize_with = "ser_opt_complex")]
    pub u: Option<C64>,
    #[serde(serialize_with = "ser_opt_complex")]
    pub v: Option<C64>,
    pub defect_fro: f64,
    /// `defect_fro / ||T_L||_F`
    pub defect_rel: f64,
}

fn ser_opt_complex<S: Serializer>(z: &Option<C64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match z {
        Some(z) => [z.re, z.im].serialize(s),
        None => s.serialize_none(),
    }
}

/// Outcome of the Yang-Baxter check over all samples.
///
/// `max_defect` is the largest *relative* defect; `passes` compares it with
/// `tolerance`.
#[derive(Clone, Debug, PartialEq)]
pub struct YbeReport {
    pub kind: &'static str,
    pub samples: Vec<DefectSample>,
    pub max_defect: f64,
    pub tolerance: f64,
    pub passes: bool,
    /// Whether the caller asserts that the three-site algebra is pairwise
    /// generated at depth 2. `None` until set.
    pub pairwise_generation: Option<bool>,
}

impl YbeReport {
    pub fn checked_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn with_pairwise_generation(mut self, holds: bool) -> Self {
        self.pairwise_generation = Some(holds);
        self
    }

    /// Boundary-free at the first three-body stage: the defect vanishes and
    /// pairwise generation was asserted.
    pub fn boundary_free(&self) -> bool {
        self.passes && self.pairwise_generation == Some(true)
    }
}

impl Serialize for YbeReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("YbeReport", 8)?;
        st.serialize_field("kind", self.kind)?;
        st.serialize_field("samples", &self.samples)?;
        st.serialize_field("max_defect", &self.max_defect)?;
        st.serialize_field("tolerance", &self.tolerance)?;
        st.serialize_field("passes", &self.passes)?;
        st.serialize_field("checked_samples", &self.checked_samples())?;
        st.serialize_field("pairwise_generation", &self.pairwise_generation)?;
        st.serialize_field("boundary_free", &self.boundary_free())?;
        st.end()
    }
}

/// Ordered `(u, v)` pairs from the sample parameters. Pairs with `u == v`
/// are kept only if the family can be evaluated at zero.
pub fn sample_pairs(r: &RMatrixSpec) -> Vec<(C64, C64)> {
    let params = r.sample_params();
    let zero_ok = r.evaluate(C64::new(0.0, 0.0)).is_ok();
    let mut pairs = Vec::new();
    for &u in params {
        for &v in params {
            if u == v && !zero_ok {
                continue;
            }
            pairs.push((u, v));
        }
    }
    pairs
}

/// Evaluates the defect (at the constant R, or over all sample pairs) and
/// compares the largest relative norm against `tolerance`.
pub fn check_boundary_free(r: &RMatrixSpec, tolerance: f64) -> Result<YbeReport> {
    let (kind, samples) = match r.kind() {
        RKind::Constant(_) => {
            let d = yb_defect_constant(r)?;
            let sample = DefectSample { u: None, v: None, defect_fro: d.norm(), defect_rel: d.relative() };
            ("constant", vec![sample])
        }
        RKind::Spectral { sample_params, .. } => {
            if sample_params.is_empty() {
                return Err(Error::InvalidArgument("spectral check needs sample parameters".into()));
            }
            let samples = sample_pairs(r)
                .into_par_iter()
                .map(|(u, v)| {
                    let d = yb_defect_spectral(r, u, v)?;
                    Ok(DefectSample { u: Some(u), v: Some(v), defect_fro: d.norm(), defect_rel: d.relative() })
                })
                .collect::<Result<Vec<_>>>()?;
            ("spectral", samples)
        }
    };
    let max_defect = samples.iter().map(|s| s.defect_rel).fold(0.0, f64::max);
    Ok(YbeReport {
        kind,
        passes: max_defect <= tolerance,
        samples,
        max_defect,
        tolerance,
        pairwise_generation: None,
    })
}

/// The legs `R_12, R_13, R_23` of a constant R on three sites.
pub fn three_site_generators(r: &RMatrixSpec) -> Result<Vec<ComplexMatrix>> {
    let m = r
        .constant_matrix()
        .ok_or_else(|| Error::InvalidArgument("three-site generators need a constant R-matrix".into()))?;
    Ok(three_site_legs(m, m, m, r.local_dim)?.to_vec())
}

/// Span of all words of length `<= max_word_len` in `{R_12, R_13, R_23}`,
/// the empty word included.
pub fn pairwise_generation_rank(r: &RMatrixSpec, max_word_len: usize, tol_rank: f64) -> Result<OperatorSpan> {
    if max_word_len < 1 {
        return Err(Error::InvalidArgument("max_word_len must be at least 1".into()));
    }
    let gens = GeneratorSet::new(three_site_generators(r)?, FiltrationMode::Product, true)?;
    word_span(&gens, max_word_len, tol_rank)
}
