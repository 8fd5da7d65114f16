use super::bethe::{bethe_solve, highest_weight_count, BetheSolution, SeedStrategy};
use crate::linalg::{frobenius_norm, hermitian_eigenvalues, ComplexMatrix};
use crate::models::{build_hamiltonian, ModelId};
use crate::{Error, Result, Tolerances};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Largest chain for which the full Hamiltonian is built densely.
pub const MAX_ED_SITES: usize = 10;

/// Basis indices with exactly `m` flipped spins (set bits).
pub fn sector_indices(n: usize, m: usize) -> Vec<usize> {
    (0..1usize << n).filter(|x| x.count_ones() as usize == m).collect()
}

/// The block of `h` on the `m`-magnon sector. Fails when `h` couples the
/// sector to the rest of the space beyond `tol · ‖h‖_F`.
pub fn sector_block(h: &ComplexMatrix, n: usize, m: usize, tol: f64) -> Result<ComplexMatrix> {
    let idx = sector_indices(n, m);
    let mut leakage = 0.0;
    for &r in &idx {
        for c in 0..h.dim() {
            if c.count_ones() as usize != m {
                leakage += h.get(r, c).norm_sqr();
            }
        }
    }
    let leakage = leakage.sqrt();
    if leakage > tol * frobenius_norm(h).max(1.0) {
        return Err(Error::SectorExtraction { leakage });
    }
    Ok(ComplexMatrix::from_fn(idx.len(), |i, j| h.get(idx[i], idx[j])))
}

/// Exact spectrum of the periodic XXX chain in the `m`-magnon sector.
pub fn sector_spectrum(n: usize, m: usize, tol: &Tolerances) -> Result<Vec<f64>> {
    if !(2..=MAX_ED_SITES).contains(&n) {
        return Err(Error::InvalidArgument(format!("exact diagonalization needs 2 <= N <= {MAX_ED_SITES}, got {n}")));
    }
    if m > n {
        return Err(Error::InvalidArgument(format!("M={m} exceeds N={n}")));
    }
    let h = build_hamiltonian(&ModelId::XxxRational, n, true)?;
    let block = sector_block(&h, n, m, tol.tol_herm)?;
    hermitian_eigenvalues(&block, tol.tol_herm)
}

/// Bethe energies matched against the exact sector spectrum.
///
/// The `M`-magnon sector also holds SU(2) descendants of highest-weight
/// states with fewer magnons, so solutions for every `M' <= M` take part in
/// the matching. Coverage counts distinct ED levels hit by some Bethe energy.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumComparison {
    pub n_sites: usize,
    pub n_magnons: usize,
    pub ed_eigenvalues: Vec<f64>,
    pub bethe: Vec<BetheSolution>,
    /// `(bethe index, ed index, |ΔE|)`
    pub matches: Vec<(usize, usize, f64)>,
    /// Bethe entries left without a distinct ED partner.
    pub unmatched: Vec<usize>,
    /// Bethe energies whose nearest ED value within tolerance was already taken.
    pub collisions: usize,
    pub max_mismatch: f64,
    pub levels_covered: usize,
    pub levels_total: usize,
    /// Highest-weight solutions found at exactly `M` magnons.
    pub highest_weight_found: usize,
    pub highest_weight_expected: usize,
    pub tolerance: f64,
}

impl SpectrumComparison {
    pub fn coverage(&self) -> String {
        format!("{}/{}", self.levels_covered, self.levels_total)
    }

    pub fn coverage_fraction(&self) -> f64 {
        if self.levels_total == 0 {
            1.0
        } else {
            self.levels_covered as f64 / self.levels_total as f64
        }
    }

    /// Every Bethe energy sits on a distinct ED eigenvalue within tolerance.
    pub fn passes(&self) -> bool {
        self.unmatched.is_empty() && self.max_mismatch <= self.tolerance
    }
}

impl Serialize for SpectrumComparison {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpectrumComparison", 12)?;
        st.serialize_field("N", &self.n_sites)?;
        st.serialize_field("M", &self.n_magnons)?;
        st.serialize_field("ed", &self.ed_eigenvalues)?;
        st.serialize_field("bethe", &self.bethe)?;
        st.serialize_field("matches", &self.matches)?;
        st.serialize_field("max_mismatch", &self.max_mismatch)?;
        st.serialize_field("coverage", &self.coverage())?;
        st.serialize_field(
            "highest_weight",
            &format!("{}/{}", self.highest_weight_found, self.highest_weight_expected),
        )?;
        st.serialize_field("unmatched", &self.unmatched)?;
        st.serialize_field("collisions", &self.collisions)?;
        st.serialize_field("tolerance", &self.tolerance)?;
        st.serialize_field("passes", &self.passes())?;
        st.end()
    }
}

/// Group sorted eigenvalues into levels; returns the level index of each.
fn level_labels(sorted: &[f64]) -> (Vec<usize>, usize) {
    let mut labels = Vec::with_capacity(sorted.len());
    let mut level = 0;
    for (k, &e) in sorted.iter().enumerate() {
        if k > 0 && (e - sorted[k - 1]).abs() > 1e-8 * e.abs().max(1.0) {
            level += 1;
        }
        labels.push(level);
    }
    (labels, if sorted.is_empty() { 0 } else { level + 1 })
}

/// Greedy nearest matching of `energies` onto distinct entries of `ed`.
fn greedy_match(energies: &[f64], ed: &[f64], tol: f64) -> (Vec<(usize, usize, f64)>, Vec<usize>, usize) {
    let mut taken = vec![false; ed.len()];
    let mut matches = Vec::new();
    let mut unmatched = Vec::new();
    let mut collisions = 0;
    for (b, &e) in energies.iter().enumerate() {
        let free = (0..ed.len())
            .filter(|&k| !taken[k])
            .min_by(|&x, &y| (ed[x] - e).abs().total_cmp(&(ed[y] - e).abs()));
        let Some(k) = free else {
            unmatched.push(b);
            continue;
        };
        let delta = (ed[k] - e).abs();
        if delta > tol && (0..ed.len()).any(|q| taken[q] && (ed[q] - e).abs() <= tol) {
            // Degeneracy exhausted: the energy is in the spectrum but every
            // copy already has a partner.
            collisions += 1;
            unmatched.push(b);
            continue;
        }
        taken[k] = true;
        matches.push((b, k, delta));
    }
    (matches, unmatched, collisions)
}

/// Compares Bethe energies with exact diagonalization in the `(N, M)`
/// sector of the periodic XXX chain.
pub fn compare_spectrum(
    n: usize,
    m: usize,
    periodic: bool,
    tol: &Tolerances,
    seeds: &SeedStrategy,
) -> Result<SpectrumComparison> {
    if !periodic {
        return Err(Error::InvalidArgument("Bethe equations are set up for periodic chains only".into()));
    }
    if 2 * m > n {
        return Err(Error::InvalidArgument(format!("need M <= N/2, got N={n}, M={m}")));
    }
    let ed = sector_spectrum(n, m, tol)?;

    let mut bethe = Vec::new();
    let mut highest_weight_found = 0;
    for magnons in 0..=m {
        let spec = bethe_solve(n, magnons, seeds)?;
        if magnons == m {
            highest_weight_found = spec.solutions.len();
        }
        bethe.extend(spec.solutions);
    }

    let energies: Vec<f64> = bethe.iter().map(|s| s.energy).collect();
    let (matches, unmatched, collisions) = greedy_match(&energies, &ed, tol.tol_spec);
    let max_mismatch = matches.iter().map(|m| m.2).fold(0.0, f64::max);

    let (labels, levels_total) = level_labels(&ed);
    let mut covered = vec![false; levels_total];
    for &(_, k, delta) in &matches {
        if delta <= tol.tol_spec {
            covered[labels[k]] = true;
        }
    }

    Ok(SpectrumComparison {
        n_sites: n,
        n_magnons: m,
        ed_eigenvalues: ed,
        bethe,
        matches,
        unmatched,
        collisions,
        max_mismatch,
        levels_covered: covered.iter().filter(|&&c| c).count(),
        levels_total,
        highest_weight_found,
        highest_weight_expected: highest_weight_count(n, m),
        tolerance: tol.tol_spec,
    })
}
