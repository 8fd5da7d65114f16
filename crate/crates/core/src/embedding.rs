//! Two-site operators placed on chosen legs of an n-fold tensor product.
//!
//! Sites are 1-based and site 1 is the most significant tensor factor, so
//! `R_{12} = R ⊗ id` and `R_{23} = id ⊗ R` on three sites.

use crate::config::check_dim;
use crate::linalg::{kron, ComplexMatrix, ONE};
use crate::{Error, Result};

/// An ordered pair of sites `1 <= i < j <= n` on n copies of `C^local_dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SitePair {
    i: usize,
    j: usize,
    n: usize,
    local_dim: usize,
}

impl SitePair {
    pub fn new(i: usize, j: usize, n: usize, local_dim: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSites(format!("need at least 2 sites, got {n}")));
        }
        if !(1 <= i && i < j && j <= n) {
            return Err(Error::InvalidSites(format!("need 1 <= i < j <= n, got i={i}, j={j}, n={n}")));
        }
        if local_dim == 0 {
            return Err(Error::InvalidSites("local dimension must be positive".into()));
        }
        Ok(Self { i, j, n, local_dim })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn is_adjacent(&self) -> bool {
        self.j == self.i + 1
    }
}

/// `d^n`, checked against the ambient ceiling.
pub fn ambient_dim(n: usize, d: usize) -> Result<usize> {
    let dim = u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .ok_or(Error::DimensionCeiling { dim: usize::MAX, max: crate::config::max_dim() })?;
    check_dim(dim)?;
    Ok(dim)
}

fn check_two_site(r: &ComplexMatrix, d: usize) -> Result<()> {
    if r.dim() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, found: r.dim() });
    }
    Ok(())
}

/// `id^(i-1) ⊗ r ⊗ id^(n-i-1)`.
pub fn embed_adjacent(r: &ComplexMatrix, i: usize, n: usize, d: usize) -> Result<ComplexMatrix> {
    check_two_site(r, d)?;
    if !(1 <= i && i < n) {
        return Err(Error::InvalidSites(format!("adjacent pair needs 1 <= i <= n-1, got i={i}, n={n}")));
    }
    ambient_dim(n, d)?;
    let left = ComplexMatrix::identity(d.pow((i - 1) as u32));
    let right = ComplexMatrix::identity(d.pow((n - i - 1) as u32));
    kron(&kron(&left, r)?, &right)
}

/// Permutation of tensor factors, stored as `image[site] = new position`
/// (0-based internally).
#[derive(Clone, Debug, PartialEq, Eq)]
struct SitePermutation {
    image: Vec<usize>,
    d: usize,
}

impl SitePermutation {
    fn identity(n: usize, d: usize) -> Self {
        Self { image: (0..n).collect(), d }
    }

    /// Compose with a transposition of positions `a` and `b` (applied after).
    fn then_swap(mut self, a: usize, b: usize) -> Self {
        for pos in &mut self.image {
            if *pos == a {
                *pos = b;
            } else if *pos == b {
                *pos = a;
            }
        }
        self
    }

    /// Basis index reached from `index` when factor `s` moves to `image[s]`.
    fn map_index(&self, index: usize) -> usize {
        let n = self.image.len();
        let mut digits = vec![0; n];
        let mut rest = index;
        for s in (0..n).rev() {
            digits[s] = rest % self.d;
            rest /= self.d;
        }
        let mut moved = vec![0; n];
        for (s, &digit) in digits.iter().enumerate() {
            moved[self.image[s]] = digit;
        }
        moved.iter().fold(0, |acc, &x| acc * self.d + x)
    }

    fn index_map(&self) -> Vec<usize> {
        let dim = self.d.pow(self.image.len() as u32);
        (0..dim).map(|x| self.map_index(x)).collect()
    }

    fn to_matrix(&self) -> ComplexMatrix {
        let map = self.index_map();
        let dim = map.len();
        let mut m = ComplexMatrix::zeros(dim);
        for (col, &row) in map.iter().enumerate() {
            m.set(row, col, ONE);
        }
        m
    }

    /// `W^{-1} a W` for the permutation operator `W`, without dense products.
    fn conjugate(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let map = self.index_map();
        ComplexMatrix::from_fn(a.dim(), |r, c| a.get(map[r], map[c]))
    }
}

/// Permutation matrix exchanging tensor factors `i` and `j`.
pub fn swap_operator(i: usize, j: usize, n: usize, d: usize) -> Result<ComplexMatrix> {
    SitePair::new(i, j, n, d)?;
    ambient_dim(n, d)?;
    Ok(SitePermutation::identity(n, d).then_swap(i - 1, j - 1).to_matrix())
}

/// The cyclic shift sending the factor at site `s` to site `s + 1` (mod n).
pub fn cyclic_shift(n: usize, d: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidSites("need at least one site".into()));
    }
    ambient_dim(n, d)?;
    let perm = SitePermutation { image: (0..n).map(|s| (s + 1) % n).collect(), d };
    Ok(perm.to_matrix())
}

/// The chain `W = P_{i+1,i+2} ⋯ P_{j-1,j}` that carries factor `j` down to
/// position `i + 1` (the rightmost transposition acts first).
fn relocation_chain(pair: &SitePair) -> SitePermutation {
    let mut w = SitePermutation::identity(pair.n, pair.local_dim);
    for pos in (pair.i + 1..pair.j).rev() {
        // positions pos and pos + 1, 1-based
        w = w.then_swap(pos - 1, pos);
    }
    w
}

/// `r` acting on sites `i` and `j`. Non-adjacent pairs are built as
/// `W^{-1} R_{i,i+1} W` with `W` the adjacent-swap chain moving `j` next to
/// `i`; for `(1, 3)` on three sites this is `P_23 R_12 P_23`.
pub fn embed_pair(r: &ComplexMatrix, pair: SitePair) -> Result<ComplexMatrix> {
    check_two_site(r, pair.local_dim)?;
    let adjacent = embed_adjacent(r, pair.i, pair.n, pair.local_dim)?;
    if pair.is_adjacent() {
        return Ok(adjacent);
    }
    Ok(relocation_chain(&pair).conjugate(&adjacent))
}

/// Dense form of the relocation chain `W` used by [`embed_pair`].
pub fn relocation_operator(pair: SitePair) -> Result<ComplexMatrix> {
    ambient_dim(pair.n, pair.local_dim)?;
    Ok(relocation_chain(&pair).to_matrix())
}

/// Single-site operator `g` on site `site` of `n`.
pub fn embed_site(g: &ComplexMatrix, site: usize, n: usize) -> Result<ComplexMatrix> {
    if !(1 <= site && site <= n) {
        return Err(Error::InvalidSites(format!("site {site} outside 1..={n}")));
    }
    let d = g.dim();
    ambient_dim(n, d)?;
    let left = ComplexMatrix::identity(d.pow((site - 1) as u32));
    let right = ComplexMatrix::identity(d.pow((n - site) as u32));
    kron(&kron(&left, g)?, &right)
}

/// `|e_{digits[0]} ⊗ ... ⊗ e_{digits[n-1]}>` as a basis index.
pub fn basis_index(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}
