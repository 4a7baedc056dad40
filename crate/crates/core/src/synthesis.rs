//! Decomposition of an `n`-mode oscillator into a series chain of one-mode
//! oscillators `G_n ◁ … ◁ G_1` plus bilinear direct couplings, and the
//! inverse reassembly.

use crate::error::{Error, Result};
use crate::linalg::{identity_c, max_abs, unitarity_residual, CMat, RMat};
use crate::slh::{
    feedback_coefficient, reduce_network, validate_oscillator, DirectCoupling, NetworkSpec,
    OscillatorParams, SeriesConnection, DEFAULT_TOL,
};

/// Imaginary residue allowed in a computed coupling block.
pub const COUPLING_REALITY_TOL: f64 = 1e-10;

/// One-mode oscillator `G_j = (S_j, K̃_j x_j, ½x_jᵀR_jj x_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneDofBlock {
    pub index: usize,
    pub s: CMat,
    /// `m × 2`
    pub k_tilde: CMat,
    /// `2 × 2`
    pub r: RMat,
}

impl OneDofBlock {
    pub fn oscillator(&self) -> OscillatorParams {
        OscillatorParams {
            s: self.s.clone(),
            k: self.k_tilde.clone(),
            r: self.r.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisPlan {
    /// Chain order: `blocks[0]` is fed by the external inputs.
    pub blocks: Vec<OneDofBlock>,
    /// One entry per pair `j < k`.
    pub couplings: Vec<DirectCoupling>,
    pub m: usize,
}

impl SynthesisPlan {
    pub fn network(&self) -> NetworkSpec {
        NetworkSpec {
            oscillators: self.blocks.iter().map(OneDofBlock::oscillator).collect(),
            series: (1..self.blocks.len())
                .map(|k| SeriesConnection { from: k - 1, to: k })
                .collect(),
            couplings: self.couplings.clone(),
        }
    }

    /// `S_n ⋯ S_1`.
    pub fn total_scattering(&self) -> CMat {
        self.blocks
            .iter()
            .fold(identity_c(self.m), |acc, b| &b.s * acc)
    }
}

/// `S_1 = S`, `S_j = I` for `j ≥ 2`.
pub fn allocate_scattering(s: &CMat, n: usize) -> Result<Vec<CMat>> {
    if n == 0 {
        return Err(Error::InvalidDimension(
            "need at least one oscillator".into(),
        ));
    }
    let residual = unitarity_residual(s);
    if !(residual <= DEFAULT_TOL) {
        return Err(Error::NotUnitary { residual });
    }
    let mut out = vec![s.clone()];
    out.extend((1..n).map(|_| identity_c(s.nrows())));
    Ok(out)
}

pub fn decompose(g: &OscillatorParams) -> Result<SynthesisPlan> {
    let allocation = allocate_scattering(&g.s, g.dof())?;
    decompose_with_allocation(g, &allocation)
}

/// Decomposition for any scattering allocation with `S_n ⋯ S_1 = S`.
pub fn decompose_with_allocation(
    g: &OscillatorParams,
    allocation: &[CMat],
) -> Result<SynthesisPlan> {
    validate_oscillator(g, DEFAULT_TOL).into_result()?;
    let (n, m) = (g.dof(), g.channels());
    if n == 0 {
        return Err(Error::InvalidDimension(
            "oscillator has no degrees of freedom".into(),
        ));
    }
    if allocation.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "allocation has {} factors for {n} oscillators",
            allocation.len()
        )));
    }
    for sj in allocation {
        if sj.shape() != (m, m) {
            return Err(Error::DimensionMismatch(format!(
                "allocation factor is {:?}, expected {:?}",
                sj.shape(),
                (m, m)
            )));
        }
        let residual = unitarity_residual(sj);
        if !(residual <= DEFAULT_TOL) {
            return Err(Error::NotUnitary { residual });
        }
    }
    // S_{k⇠j} = S_k ⋯ S_j, identity when j > k.
    let span = |hi: usize, lo: usize| -> CMat {
        (lo..=hi).fold(identity_c(m), |acc, i| &allocation[i] * acc)
    };
    let product = span(n - 1, 0);
    let mismatch = crate::linalg::max_abs_c(&(&product - &g.s));
    if mismatch > DEFAULT_TOL {
        return Err(Error::Consistency(format!(
            "allocation product differs from S by {mismatch:.3e}"
        )));
    }

    let k_tilde: Vec<CMat> = (0..n)
        .map(|k| {
            let after = if k + 1 < n {
                span(n - 1, k + 1)
            } else {
                identity_c(m)
            };
            after.adjoint() * g.k.columns(2 * k, 2)
        })
        .collect();

    let blocks = (0..n)
        .map(|j| OneDofBlock {
            index: j,
            s: allocation[j].clone(),
            k_tilde: k_tilde[j].clone(),
            r: g.r.view((2 * j, 2 * j), (2, 2)).clone_owned(),
        })
        .collect();

    let mut couplings = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for k in 0..n {
        for j in 0..k {
            let between = span(k, j + 1);
            let f = feedback_coefficient(&k_tilde[k], &between, &k_tilde[j]);
            let f_im = max_abs(&f.map(|z| z.im));
            if f_im > COUPLING_REALITY_TOL * 1f64.max(max_abs(&f.map(|z| z.re))) {
                return Err(Error::Consistency(format!(
                    "coupling ({j}, {k}) has imaginary residue {f_im:.3e}"
                )));
            }
            let r_kj = g.r.view((2 * k, 2 * j), (2, 2)).clone_owned();
            let c = r_kj - f.map(|z| z.re);
            couplings.push(DirectCoupling { j, k, c });
        }
    }
    couplings.sort_by_key(|cp| (cp.j, cp.k));

    Ok(SynthesisPlan {
        blocks,
        couplings,
        m,
    })
}

pub fn reassemble(plan: &SynthesisPlan) -> Result<OscillatorParams> {
    reduce_network(&plan.network())
}
