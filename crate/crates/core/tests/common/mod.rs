#![allow(dead_code)]

use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidity_core::{ComplexMatrix, C64};
use std::collections::HashSet;

pub const SEED: u64 = 0x5eed_2718;

/// Property-test config with a fixed seed and no failure files.
pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

pub fn random_matrix(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ComplexMatrix::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let a = random_matrix(dim, seed);
    &a + &a.adjoint()
}

pub fn rel_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let scale = a.frobenius_norm().max(b.frobenius_norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).frobenius_norm() / scale
    }
}

/// Rank of an integer matrix over F_p, by plain elimination.
pub fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let f = (m[r][col] as i128 * inv as i128 % p as i128) as i64;
                for c in col..ncols {
                    let v = (m[r][c] as i128 - f as i128 * m[rank][c] as i128).rem_euclid(p as i128);
                    m[r][c] = v as i64;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut acc: i128 = 1;
    let mut base = b.rem_euclid(p) as i128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as i128;
        }
        base = base * base % p as i128;
        e >>= 1;
    }
    b = acc as i64;
    b
}

/// Rank by Gaussian elimination with complete pivoting on the flattened
/// matrices; pivots below `tol` times the first pivot count as zero.
pub fn elimination_rank(mats: &[ComplexMatrix], tol: f64) -> usize {
    let mut rows: Vec<Vec<C64>> = mats.iter().map(|m| m.entries().to_vec()).collect();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut used_cols = vec![false; ncols];
    let mut first = None;
    let mut rank = 0;
    while rank < rows.len() {
        let mut best = (0.0, 0, 0);
        for (r, row) in rows.iter().enumerate().skip(rank) {
            for (c, z) in row.iter().enumerate() {
                if !used_cols[c] && z.norm() > best.0 {
                    best = (z.norm(), r, c);
                }
            }
        }
        let (mag, pr, pc) = best;
        let first = *first.get_or_insert(mag);
        if mag <= tol * first || mag == 0.0 {
            break;
        }
        rows.swap(rank, pr);
        used_cols[pc] = true;
        let pivot = rows[rank][pc];
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[pc] / pivot;
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= f * y;
            }
        }
        rank += 1;
    }
    rank
}

pub const PRIMES: [i64; 2] = [2_305_843_009_213_693_951, 1_000_000_007];

fn cycles(p: &[usize]) -> u32 {
    let mut seen = vec![false; p.len()];
    let mut count = 0;
    for s in 0..p.len() {
        if !seen[s] {
            count += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = p[x];
            }
        }
    }
    count
}

/// Oracle for the swap filtration: words of length <= k in adjacent
/// transpositions are the permutations within Cayley distance k, and
/// `tr(P_σ^† P_τ) = d^{cycles(σ^{-1} τ)}`. Returns ranks per level,
/// computed exactly over two large primes.
pub fn permutation_oracle(n: usize, d: i64, levels: usize) -> Vec<usize> {
    let id: Vec<usize> = (0..n).collect();
    let mut ball = vec![id.clone()];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id]);
    let mut frontier = ball.clone();
    let mut out = Vec::new();
    for level in 0..=levels {
        if level > 0 {
            let mut next = Vec::new();
            for p in &frontier {
                for i in 0..n - 1 {
                    let mut q = p.clone();
                    q.swap(i, i + 1);
                    if seen.insert(q.clone()) {
                        next.push(q);
                    }
                }
            }
            ball.extend(next.iter().cloned());
            frontier = next;
        }
        let gram: Vec<Vec<i64>> = ball
            .iter()
            .map(|s| {
                let mut inv = vec![0; n];
                for (i, &x) in s.iter().enumerate() {
                    inv[x] = i;
                }
                ball.iter()
                    .map(|t| {
                        let comp: Vec<usize> = t.iter().map(|&x| inv[x]).collect();
                        d.pow(cycles(&comp))
                    })
                    .collect()
            })
            .collect();
        out.push(PRIMES.iter().map(|&p| rank_mod_p(&gram, p)).max().unwrap());
    }
    out
}

/// Oracle for a generic gate: every word of length <= k, enumerated
/// without pruning, ranked by complete-pivot elimination.
pub fn word_oracle(gens: &[ComplexMatrix], levels: usize) -> Vec<usize> {
    let dim = gens[0].dim();
    let mut words = vec![ComplexMatrix::identity(dim)];
    let mut last = words.clone();
    let mut out = vec![elimination_rank(&words, 1e-9)];
    for _ in 0..levels {
        let next: Vec<ComplexMatrix> = last.iter().flat_map(|w| gens.iter().map(move |g| w.matmul(g))).collect();
        words.extend(next.iter().cloned());
        last = next;
        out.push(elimination_rank(&words, 1e-9));
    }
    out
}

/// Oracle levels cut at the first repeat, as the filtration reports them.
pub fn truncate_at_repeat(levels: &[usize]) -> Vec<usize> {
    let mut out = vec![levels[0]];
    for w in levels.windows(2) {
        out.push(w[1]);
        if w[1] == w[0] {
            break;
        }
    }
    out
}
