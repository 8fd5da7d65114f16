//! Catalog of R-matrices and chain Hamiltonians on both sides of the
//! dichotomy: identity, swap, XXX and XXZ satisfy Yang-Baxter; the perturbed
//! swap and random gates do not.

use crate::embedding::{embed_adjacent, embed_pair, embed_site, SitePair};
use crate::linalg::{ComplexMatrix, C64, ONE, ZERO};
use crate::yang_baxter::{default_sample_params, RMatrixSpec, SpectralFamily};
use crate::{Error, Result};
use faer::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_XXZ_ETA: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelId {
    Identity,
    Swap,
    XxxRational,
    XxzTrig { eta: f64 },
    PerturbedSwap { epsilon: f64 },
    RandomGate { seed: u64 },
}

impl ModelId {
    /// The shipped catalog, in report order.
    pub fn catalog() -> Vec<ModelId> {
        vec![
            ModelId::Identity,
            ModelId::Swap,
            ModelId::XxxRational,
            ModelId::XxzTrig { eta: DEFAULT_XXZ_ETA },
            ModelId::PerturbedSwap { epsilon: 0.1 },
            ModelId::RandomGate { seed: 42 },
        ]
    }

    pub fn local_dim(&self) -> usize {
        2
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self, ModelId::XxxRational | ModelId::XxzTrig { .. })
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::Identity => f.write_str("identity"),
            ModelId::Swap => f.write_str("swap"),
            ModelId::XxxRational => f.write_str("xxx"),
            ModelId::XxzTrig { eta } => write!(f, "xxz_trig:{eta}"),
            ModelId::PerturbedSwap { epsilon } => write!(f, "perturbed_swap:{epsilon}"),
            ModelId::RandomGate { seed } => write!(f, "random_gate:{seed}"),
        }
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownModel(s.to_string());
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name.trim(), Some(arg.trim())),
            None => (s.trim(), None),
        };
        let real = |arg: Option<&str>| -> Result<Option<f64>> {
            arg.map(|a| a.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(unknown))
                .transpose()
        };
        match name {
            "identity" if arg.is_none() => Ok(ModelId::Identity),
            "swap" if arg.is_none() => Ok(ModelId::Swap),
            "xxx" | "xxx_rational" if arg.is_none() => Ok(ModelId::XxxRational),
            "xxz" | "xxz_trig" => {
                let eta = real(arg)?.unwrap_or(DEFAULT_XXZ_ETA);
                if eta == 0.0 {
                    return Err(Error::InvalidArgument("xxz_trig needs eta != 0".into()));
                }
                Ok(ModelId::XxzTrig { eta })
            }
            "perturbed_swap" => {
                let epsilon = real(arg)?
                    .ok_or_else(|| Error::InvalidArgument("perturbed_swap needs an epsilon, e.g. perturbed_swap:0.1".into()))?;
                if epsilon == 0.0 {
                    return Err(Error::InvalidArgument("perturbed_swap needs epsilon != 0".into()));
                }
                Ok(ModelId::PerturbedSwap { epsilon })
            }
            "random_gate" => {
                let seed = arg
                    .ok_or_else(|| Error::InvalidArgument("random_gate needs a seed, e.g. random_gate:42".into()))?
                    .parse::<u64>()
                    .map_err(|_| unknown())?;
                Ok(ModelId::RandomGate { seed })
            }
            _ => Err(unknown()),
        }
    }
}

impl Serialize for ModelId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ModelId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Swap `P(e_a ⊗ e_b) = e_b ⊗ e_a` on `C^d ⊗ C^d`.
pub fn swap_matrix(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, |row, col| {
        let (a, b) = (col / d, col % d);
        if row == b * d + a {
            ONE
        } else {
            ZERO
        }
    })
}

/// `P + ε·E_11 ⊗ E_22`: with 0-based basis `|ab>` the extra weight lands on
/// the diagonal entry of `|01>`. The middle block becomes `[[ε, 1], [1, 0]]`
/// with determinant -1, so the matrix stays invertible for every ε.
pub fn perturbed_swap_matrix(epsilon: f64) -> ComplexMatrix {
    let mut m = swap_matrix(2);
    m.set(1, 1, C64::new(epsilon, 0.0));
    m
}

/// A Haar-distributed 4x4 unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal pushed back into `Q`. Deterministic in `seed`.
pub fn random_gate_matrix(seed: u64) -> ComplexMatrix {
    haar_unitary(4, seed)
}

pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = || -> f64 { StandardNormal.sample(&mut rng) };
    let ginibre = Mat::from_fn(dim, dim, |_, _| C64::new(sample(), sample()) / 2f64.sqrt());
    let qr = ginibre.qr();
    let (q, r) = (qr.compute_Q(), qr.R());
    ComplexMatrix::from_fn(dim, |i, j| {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { ONE };
        q[(i, j)] * phase
    })
}

pub fn build_r(model: &ModelId) -> Result<RMatrixSpec> {
    let tol = crate::Tolerances::default().tol_rank;
    match *model {
        ModelId::Identity => RMatrixSpec::constant(ComplexMatrix::identity(4), 2, tol),
        ModelId::Swap => RMatrixSpec::constant(swap_matrix(2), 2, tol),
        ModelId::PerturbedSwap { epsilon } => RMatrixSpec::constant(perturbed_swap_matrix(epsilon), 2, tol),
        ModelId::RandomGate { seed } => RMatrixSpec::constant(random_gate_matrix(seed), 2, tol),
        ModelId::XxxRational => {
            RMatrixSpec::spectral(SpectralFamily::Rational { base: swap_matrix(2) }, 2, default_sample_params())
        }
        ModelId::XxzTrig { eta } => RMatrixSpec::spectral(
            SpectralFamily::Trigonometric { eta: C64::new(eta, 0.0) },
            2,
            default_sample_params(),
        ),
    }
}

/// Two-site bond of the chain Hamiltonian.
///
/// XXX: `h = P - I`, so an aligned pair has energy 0 and the singlet -2.
/// XXZ: `h = (σxσx + σyσy + Δ(σzσz - 1)) / 2` with `Δ = cosh η`, which is
/// `P - I` at `Δ = 1`.
pub fn bond_hamiltonian(model: &ModelId) -> Result<ComplexMatrix> {
    match *model {
        ModelId::XxxRational => Ok(&swap_matrix(2) - &ComplexMatrix::identity(4)),
        ModelId::XxzTrig { eta } => {
            let delta = eta.cosh();
            let mut h = ComplexMatrix::zeros(4);
            h.set(1, 1, C64::new(-delta, 0.0));
            h.set(2, 2, C64::new(-delta, 0.0));
            h.set(1, 2, ONE);
            h.set(2, 1, ONE);
            Ok(h)
        }
        _ => Err(Error::InvalidArgument(format!(
            "no Hamiltonian for model `{model}` (supported: xxx, xxz_trig)"
        ))),
    }
}

/// `H = Σ_i h_{i,i+1}` over bonds `1..n-1`, plus `(n, 1)` when periodic.
/// For `n = 2` the periodic bond repeats `(1, 2)`, giving `H = 2h`.
pub fn build_hamiltonian(model: &ModelId, n: usize, periodic: bool) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::InvalidSites(format!("Hamiltonian needs n >= 2, got {n}")));
    }
    let h = bond_hamiltonian(model)?;
    let mut total = embed_adjacent(&h, 1, n, 2)?;
    for i in 2..n {
        total = &total + &embed_adjacent(&h, i, n, 2)?;
    }
    if periodic {
        // h is symmetric under exchanging its two factors, so (n, 1) and
        // (1, n) give the same operator.
        total = &total + &embed_pair(&h, SitePair::new(1, n, n, 2)?)?;
    }
    Ok(total)
}

/// `Σ_i σz_i` on `n` sites.
pub fn total_sigma_z(n: usize) -> Result<ComplexMatrix> {
    let z = ComplexMatrix::pauli_z();
    let mut total = embed_site(&z, 1, n)?;
    for site in 2..=n {
        total = &total + &embed_site(&z, site, n)?;
    }
    Ok(total)
}
