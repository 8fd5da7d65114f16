use crate::linalg::C64;
use crate::{Error, Result};
use faer::prelude::*;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::f64::consts::PI;

const HALF_I: C64 = C64::new(0.0, 0.5);
const I: C64 = C64::new(0.0, 1.0);

/// Largest chain the solver accepts.
pub const MAX_BETHE_SITES: usize = 12;

/// Distance below which a root counts as sitting on a pole.
const POLE_GUARD: f64 = 1e-12;

/// `((λ_j + i/2)/(λ_j - i/2))^N - Π_{k≠j} (λ_j - λ_k + i)/(λ_j - λ_k - i)`.
pub fn bethe_residual(roots: &[C64], n: usize) -> Result<Vec<C64>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Bethe equations need N >= 2, got {n}")));
    }
    for (j, &l) in roots.iter().enumerate() {
        if !(l.re.is_finite() && l.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("root {j} is not finite")));
        }
        if (l - HALF_I).norm() < POLE_GUARD || (l + HALF_I).norm() < POLE_GUARD {
            return Err(Error::Pole { index: j });
        }
    }
    let mut out = Vec::with_capacity(roots.len());
    for (j, &lj) in roots.iter().enumerate() {
        let lhs = ((lj + HALF_I) / (lj - HALF_I)).powu(n as u32);
        let mut rhs = C64::new(1.0, 0.0);
        for (k, &lk) in roots.iter().enumerate() {
            if k == j {
                continue;
            }
            let x = lj - lk;
            if x.norm() < POLE_GUARD {
                return Err(Error::InvalidArgument(format!("roots {j} and {k} coincide")));
            }
            if (x - I).norm() < POLE_GUARD {
                return Err(Error::Pole { index: j });
            }
            rhs *= (x + I) / (x - I);
        }
        out.push(lhs - rhs);
    }
    Ok(out)
}

/// Energy of one magnon in the `h = P - I` convention.
pub fn magnon_energy(lambda: C64) -> C64 {
    -1.0 / (lambda * lambda + 0.25)
}

pub fn momentum_phase(roots: &[C64]) -> C64 {
    roots.iter().map(|&l| (l + HALF_I) / (l - HALF_I)).product()
}

/// An accepted solution of the Bethe equations.
#[derive(Clone, Debug, PartialEq)]
pub struct BetheSolution {
    pub n_sites: usize,
    pub n_magnons: usize,
    /// Sorted by real part, then imaginary part.
    pub roots: Vec<C64>,
    /// Largest `|residual_j|` from [`bethe_residual`].
    pub residual: f64,
    pub energy: f64,
    pub momentum_phase: C64,
}

impl BetheSolution {
    /// Validates and packages a root set.
    pub fn from_roots(n: usize, mut roots: Vec<C64>) -> Result<Self> {
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let residual = bethe_residual(&roots, n)?.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let energy: C64 = roots.iter().map(|&l| magnon_energy(l)).sum();
        Ok(Self {
            n_sites: n,
            n_magnons: roots.len(),
            momentum_phase: momentum_phase(&roots),
            residual,
            energy: energy.re,
            roots,
        })
    }

    pub fn vacuum(n: usize) -> Self {
        Self {
            n_sites: n,
            n_magnons: 0,
            roots: Vec::new(),
            residual: 0.0,
            energy: 0.0,
            momentum_phase: C64::new(1.0, 0.0),
        }
    }

    pub fn min_separation(&self) -> f64 {
        let mut min = f64::INFINITY;
        for (j, a) in self.roots.iter().enumerate() {
            for b in &self.roots[j + 1..] {
                min = min.min((a - b).norm());
            }
        }
        min
    }

    /// Whether the root multiset is closed under complex conjugation.
    pub fn is_self_conjugate(&self, tol: f64) -> bool {
        let conj: Vec<C64> = self.roots.iter().map(|z| z.conj()).collect();
        same_multiset(&self.roots, &conj, tol)
    }

    pub fn is_real(&self) -> bool {
        self.roots.iter().all(|z| z.im == 0.0)
    }
}

impl Serialize for BetheSolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let roots: Vec<[f64; 2]> = self.roots.iter().map(|z| [z.re, z.im]).collect();
        let mut st = s.serialize_struct("BetheSolution", 5)?;
        st.serialize_field("roots", &roots)?;
        st.serialize_field("energy", &self.energy)?;
        st.serialize_field("residual", &self.residual)?;
        st.serialize_field("magnons", &self.n_magnons)?;
        st.serialize_field("momentum_phase", &[self.momentum_phase.re, self.momentum_phase.im])?;
        st.end()
    }
}

/// Greedy multiset comparison; inputs are tiny (M <= 6).
fn same_multiset(a: &[C64], b: &[C64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for x in a {
        for (k, y) in b.iter().enumerate() {
            if !used[k] && (x - y).norm() <= tol * (1.0 + x.norm()) {
                used[k] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// How `bethe_solve` seeds and accepts Newton runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedStrategy {
    /// One real run per admissible set of Bethe quantum numbers, started
    /// from free-magnon rapidities `½·cot(k/2)`.
    pub real_quantum_numbers: bool,
    /// Complex pairs `x ± (i/2)(1 + δ)` for each δ, centred on the
    /// single-magnon cotangent grid and 0.
    pub complex_deltas: Vec<f64>,
    pub max_iterations: usize,
    /// Accepted `max_j |residual_j|`.
    pub residual_tol: f64,
    /// Minimum distance between roots, and between a root and a pole.
    pub tol_sep: f64,
}

impl Default for SeedStrategy {
    fn default() -> Self {
        Self {
            real_quantum_numbers: true,
            complex_deltas: vec![0.01, 0.1, 0.3],
            max_iterations: 200,
            residual_tol: 1e-10,
            tol_sep: 1e-6,
        }
    }
}

/// Solutions found for one `(N, M)` sector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetheSpectrum {
    #[serde(rename = "N")]
    pub n_sites: usize,
    #[serde(rename = "M")]
    pub n_magnons: usize,
    pub solutions: Vec<BetheSolution>,
    /// Highest-weight states in the sector, `C(N, M) - C(N, M - 1)`.
    pub expected: usize,
    pub seeds_tried: usize,
    pub seeds: SeedStrategy,
}

impl BetheSpectrum {
    pub fn coverage(&self) -> String {
        format!("{}/{}", self.solutions.len(), self.expected)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of highest-weight states with `M` flipped spins on `N` sites.
pub fn highest_weight_count(n: usize, m: usize) -> usize {
    if m == 0 {
        1
    } else {
        binomial(n, m).saturating_sub(binomial(n, m - 1))
    }
}

/// Twice the admissible quantum numbers: `I ∈ Z + (N - M + 1)/2`,
/// `|I| <= (N - M - 1)/2`.
fn doubled_quantum_numbers(n: usize, m: usize) -> Vec<i64> {
    let bound = n as i64 - m as i64 - 1;
    if bound < 0 {
        return Vec::new();
    }
    (-bound..=bound).step_by(2).collect()
}

fn combinations(pool: &[i64], k: usize) -> Vec<Vec<i64>> {
    fn rec(pool: &[i64], k: usize, start: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for idx in start..pool.len() {
            cur.push(pool[idx]);
            rec(pool, k, idx + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(pool, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Newton on the real logarithmic equations
/// `N·2atan(2λ_j) - Σ_{k≠j} 2atan(λ_j - λ_k) = 2π I_j`.
fn solve_real(n: usize, doubled: &[i64], max_iter: usize) -> Option<Vec<f64>> {
    let m = doubled.len();
    let nf = n as f64;
    let targets: Vec<f64> = doubled.iter().map(|&twice| PI * twice as f64).collect();
    let mut lam: Vec<f64> = doubled.iter().map(|&twice| 0.5 * (PI * twice as f64 / (2.0 * nf)).tan()).collect();

    let eval = |lam: &[f64]| -> Vec<f64> {
        (0..m)
            .map(|j| {
                let scatter: f64 = (0..m).filter(|&k| k != j).map(|k| 2.0 * (lam[j] - lam[k]).atan()).sum();
                nf * 2.0 * (2.0 * lam[j]).atan() - scatter - targets[j]
            })
            .collect()
    };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut f = eval(&lam);
    for _ in 0..max_iter {
        let fnorm = norm(&f);
        if fnorm < 1e-14 {
            return Some(lam);
        }
        let jac = Mat::from_fn(m, m, |j, k| {
            if j == k {
                let own = nf * 4.0 / (1.0 + 4.0 * lam[j] * lam[j]);
                let scatter: f64 = (0..m)
                    .filter(|&q| q != j)
                    .map(|q| 2.0 / (1.0 + (lam[j] - lam[q]).powi(2)))
                    .sum();
                own - scatter
            } else {
                2.0 / (1.0 + (lam[j] - lam[k]).powi(2))
            }
        });
        let rhs = Mat::from_fn(m, 1, |j, _| f[j]);
        let sol = jac.partial_piv_lu().solve(&rhs);
        let step: Vec<f64> = (0..m).map(|j| sol[(j, 0)]).collect();
        if step.iter().any(|s| !s.is_finite()) {
            return None;
        }
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let trial: Vec<f64> = lam.iter().zip(step.iter()).map(|(l, s)| l - t * s).collect();
            let ft = eval(&trial);
            if norm(&ft) < fnorm {
                lam = trial;
                f = ft;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            return (fnorm < 1e-12).then_some(lam);
        }
    }
    (norm(&f) < 1e-12).then_some(lam)
}

fn reduce_log(z: C64) -> C64 {
    let turns = (z.im / (2.0 * PI)).round();
    C64::new(z.re, z.im - 2.0 * PI * turns)
}

/// Newton in C^M on `N·Log a(λ_j) - Σ Log b(λ_j - λ_k) ≡ 0 (mod 2πi)`.
fn solve_complex(n: usize, seed: &[C64], max_iter: usize) -> Option<Vec<C64>> {
    let m = seed.len();
    let nf = n as f64;
    let eval = |lam: &[C64]| -> Option<Vec<C64>> {
        let mut out = Vec::with_capacity(m);
        for j in 0..m {
            let own = ((lam[j] + HALF_I) / (lam[j] - HALF_I)).ln() * nf;
            let mut scatter = C64::new(0.0, 0.0);
            for k in 0..m {
                if k != j {
                    let x = lam[j] - lam[k];
                    scatter += ((x + I) / (x - I)).ln();
                }
            }
            let r = reduce_log(own - scatter);
            if !(r.re.is_finite() && r.im.is_finite()) {
                return None;
            }
            out.push(r);
        }
        Some(out)
    };
    let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let mut lam = seed.to_vec();
    let mut f = eval(&lam)?;
    let mut stalls = 0;
    for _ in 0..max_iter {
        let fnorm = norm(&f);
        if fnorm < 1e-15 {
            break;
        }
        let dlog = |z: C64, shift: C64| 1.0 / (z + shift) - 1.0 / (z - shift);
        let jac = Mat::from_fn(m, m, |j, k| {
            if j == k {
                let mut v = dlog(lam[j], HALF_I) * nf;
                for q in 0..m {
                    if q != j {
                        v -= dlog(lam[j] - lam[q], I);
                    }
                }
                v
            } else {
                dlog(lam[j] - lam[k], I)
            }
        });
        let rhs = Mat::from_fn(m, 1, |j, _| f[j]);
        let sol = jac.partial_piv_lu().solve(&rhs);
        let step: Vec<C64> = (0..m).map(|j| sol[(j, 0)]).collect();
        if step.iter().any(|s| !(s.re.is_finite() && s.im.is_finite())) {
            return None;
        }
        let mut t = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let trial: Vec<C64> = lam.iter().zip(step.iter()).map(|(l, s)| l - s * t).collect();
            if let Some(ft) = eval(&trial) {
                if norm(&ft) < fnorm {
                    lam = trial;
                    f = ft;
                    improved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !improved {
            stalls += 1;
            if stalls > 2 {
                break;
            }
        }
    }
    (norm(&f) < 1e-9).then_some(lam)
}

fn real_grid(n: usize) -> Vec<f64> {
    (1..n).map(|q| 0.5 / (PI * q as f64 / n as f64).tan()).collect()
}

fn complex_seeds(n: usize, m: usize, deltas: &[f64]) -> Vec<Vec<C64>> {
    if m < 2 {
        return Vec::new();
    }
    let grid = real_grid(n);
    let mut centres = vec![0.0];
    centres.extend(grid.iter().copied().filter(|x| x.abs() > 1e-12));
    // A narrow two-string behaves like one particle of momentum
    // 2·atan(1/x), which puts its centre on the doubled grid.
    centres.extend(grid.iter().map(|x| 2.0 * x).filter(|x| x.abs() > 1e-12));
    let rest_sets = if m == 2 {
        vec![Vec::new()]
    } else {
        let idx: Vec<i64> = (0..grid.len() as i64).collect();
        combinations(&idx, m - 2)
            .into_iter()
            .map(|c| c.iter().map(|&q| grid[q as usize]).collect::<Vec<f64>>())
            .collect()
    };
    let mut seeds = Vec::new();
    for &delta in deltas {
        for &x in &centres {
            for rest in &rest_sets {
                let half = 0.5 * (1.0 + delta);
                let mut seed = vec![C64::new(x, half), C64::new(x, -half)];
                seed.extend(rest.iter().map(|&y| C64::new(y, 0.0)));
                seeds.push(seed);
            }
        }
    }
    seeds
}

fn accept(n: usize, roots: Vec<C64>, opts: &SeedStrategy) -> Option<BetheSolution> {
    if roots.iter().any(|z| !(z.re.is_finite() && z.im.is_finite()) || z.norm() > 1e6) {
        return None;
    }
    if roots
        .iter()
        .any(|&z| (z - HALF_I).norm() <= opts.tol_sep || (z + HALF_I).norm() <= opts.tol_sep)
    {
        return None;
    }
    let sol = BetheSolution::from_roots(n, roots).ok()?;
    let energy_imag: f64 = sol.roots.iter().map(|&l| magnon_energy(l).im).sum::<f64>().abs();
    let ok = sol.residual <= opts.residual_tol
        && sol.min_separation() > opts.tol_sep
        && sol.is_self_conjugate(1e-6)
        && energy_imag <= 1e-8;
    ok.then_some(sol)
}

fn same_solution(a: &BetheSolution, b: &BetheSolution) -> bool {
    same_multiset(&a.roots, &b.roots, 1e-7)
}

/// Finds Bethe roots for `M` magnons on a periodic chain of `N` sites.
///
/// Every Newton run is deterministic; runs that fail to converge or land on
/// an unphysical point (coinciding roots, a pole, non-conjugate root set)
/// are dropped. Completeness is not guaranteed: compare
/// `solutions.len()` with `expected`.
pub fn bethe_solve(n: usize, m: usize, seeds: &SeedStrategy) -> Result<BetheSpectrum> {
    if !(2..=MAX_BETHE_SITES).contains(&n) {
        return Err(Error::InvalidArgument(format!("Bethe solver needs 2 <= N <= {MAX_BETHE_SITES}, got {n}")));
    }
    if 2 * m > n {
        return Err(Error::InvalidArgument(format!("need M <= N/2, got N={n}, M={m}")));
    }
    let expected = highest_weight_count(n, m);
    if m == 0 {
        return Ok(BetheSpectrum {
            n_sites: n,
            n_magnons: 0,
            solutions: vec![BetheSolution::vacuum(n)],
            expected,
            seeds_tried: 0,
            seeds: seeds.clone(),
        });
    }

    let real_configs = if seeds.real_quantum_numbers {
        combinations(&doubled_quantum_numbers(n, m), m)
    } else {
        Vec::new()
    };
    let complex = complex_seeds(n, m, &seeds.complex_deltas);
    let seeds_tried = real_configs.len() + complex.len();

    let mut candidates: Vec<Option<Vec<C64>>> = real_configs
        .par_iter()
        .map(|doubled| {
            solve_real(n, doubled, seeds.max_iterations)
                .map(|lam| lam.into_iter().map(|x| C64::new(x, 0.0)).collect())
        })
        .collect();
    candidates.extend(
        complex
            .par_iter()
            .map(|seed| solve_complex(n, seed, seeds.max_iterations))
            .collect::<Vec<_>>(),
    );

    let mut solutions: Vec<BetheSolution> = Vec::new();
    let push = |sol: BetheSolution, solutions: &mut Vec<BetheSolution>| {
        if !solutions.iter().any(|s| same_solution(s, &sol)) {
            solutions.push(sol);
        }
    };
    for roots in candidates.into_iter().flatten() {
        let parity: Vec<C64> = roots.iter().map(|z| -z).collect();
        if let Some(sol) = accept(n, roots, seeds) {
            push(sol, &mut solutions);
        }
        // Parity maps solutions to solutions.
        if let Some(sol) = accept(n, parity, seeds) {
            push(sol, &mut solutions);
        }
    }
    solutions.sort_by(|a, b| a.energy.total_cmp(&b.energy));

    Ok(BetheSpectrum { n_sites: n, n_magnons: m, solutions, expected, seeds_tried, seeds: seeds.clone() })
}
