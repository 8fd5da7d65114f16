use crate::embedding::{ambient_dim, embed_pair, SitePair};
use crate::linalg::{frobenius_norm, ComplexMatrix, C64};
use crate::yang_baxter::RMatrixSpec;
use crate::{Error, Result};

/// `T_a(u) = R_{a,n}(u) ⋯ R_{a,1}(u)` on `aux ⊗ chain`. The auxiliary space
/// is the first tensor factor; chain site `k` is factor `k + 1`.
pub fn monodromy(r: &RMatrixSpec, u: C64, n: usize) -> Result<ComplexMatrix> {
    if n < 1 {
        return Err(Error::InvalidSites("monodromy needs at least one chain site".into()));
    }
    let d = r.local_dim();
    ambient_dim(n + 1, d)?;
    let local = r.evaluate(u)?;
    let mut product = embed_pair(&local, SitePair::new(1, 2, n + 1, d)?)?;
    for k in 2..=n {
        let leg = embed_pair(&local, SitePair::new(1, k + 1, n + 1, d)?)?;
        product = leg.matmul(&product);
    }
    Ok(product)
}

/// Partial trace over the first tensor factor of dimension `d`.
pub fn partial_trace_first(m: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    if d == 0 || !m.dim().is_multiple_of(d) {
        return Err(Error::DimensionMismatch { expected: d, found: m.dim() });
    }
    let rest = m.dim() / d;
    let mut out = ComplexMatrix::zeros(rest);
    for a in 0..d {
        for x in 0..rest {
            for y in 0..rest {
                let v = out.get(x, y) + m.get(a * rest + x, a * rest + y);
                out.set(x, y, v);
            }
        }
    }
    Ok(out)
}

/// `t(u) = tr_a T_a(u)` on the `n`-site chain.
pub fn transfer_matrix(r: &RMatrixSpec, u: C64, n: usize) -> Result<ComplexMatrix> {
    partial_trace_first(&monodromy(r, u, n)?, r.local_dim())
}

/// `‖t(u) t(v) - t(v) t(u)‖_F` together with its scale-free version.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferCommutator {
    pub absolute: f64,
    /// `absolute / (‖t(u)‖_F ‖t(v)‖_F)`
    pub relative: f64,
}

pub fn transfer_commutator(r: &RMatrixSpec, u: C64, v: C64, n: usize) -> Result<TransferCommutator> {
    let tu = transfer_matrix(r, u, n)?;
    let tv = transfer_matrix(r, v, n)?;
    let absolute = frobenius_norm(&tu.commutator(&tv));
    let scale = frobenius_norm(&tu) * frobenius_norm(&tv);
    let relative = if absolute == 0.0 { 0.0 } else { absolute / scale };
    Ok(TransferCommutator { absolute, relative })
}

pub fn transfer_commutator_norm(r: &RMatrixSpec, u: C64, v: C64, n: usize) -> Result<f64> {
    Ok(transfer_commutator(r, u, v, n)?.absolute)
}

/// Largest relative transfer commutator over the sample grid (all ordered
/// pairs with `u != v`) for one chain length.
pub fn max_relative_transfer_commutator(r: &RMatrixSpec, n: usize) -> Result<f64> {
    let r = r.spectral_lift();
    let params = r.sample_params().to_vec();
    // t(u) is reused across pairs.
    let ts = params
        .iter()
        .map(|&u| transfer_matrix(&r, u, n))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for (i, tu) in ts.iter().enumerate() {
        for tv in &ts[i + 1..] {
            let abs = frobenius_norm(&tu.commutator(tv));
            if abs > 0.0 {
                worst = worst.max(abs / (frobenius_norm(tu) * frobenius_norm(tv)));
            }
        }
    }
    Ok(worst)
}
