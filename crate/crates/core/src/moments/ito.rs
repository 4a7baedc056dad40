//! Itô tables `F` with `v vᵀ = F dt` for `v = (dA₁ … dA_m, dA₁^# … dA_m^#)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::optics::devices::squeezed_field_params;

/// Squeezed-vacuum statistics of one channel: `dA² = c dt`,
/// `dA dA* = (n + 1) dt`, `dA* dA = n dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelStats {
    pub n: f64,
    pub c: Complex64,
}

impl ChannelStats {
    pub const VACUUM: ChannelStats = ChannelStats {
        n: 0.0,
        c: Complex64 { re: 0.0, im: 0.0 },
    };

    pub fn squeezed(s: f64, theta: f64) -> Self {
        let p = squeezed_field_params(s, theta);
        ChannelStats { n: p.n, c: p.c }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InputField {
    Vacuum,
    Squeezed(Vec<ChannelStats>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ItoTable {
    pub m: usize,
    pub f: CMat,
}

impl ItoTable {
    pub fn vacuum(m: usize) -> Self {
        let mut f = CMat::zeros(2 * m, 2 * m);
        for j in 0..m {
            f[(j, m + j)] = 1.0.into();
        }
        ItoTable { m, f }
    }

    pub fn squeezed(channels: &[ChannelStats]) -> Result<Self> {
        let m = channels.len();
        let mut f = CMat::zeros(2 * m, 2 * m);
        for (j, ch) in channels.iter().enumerate() {
            if !(ch.n >= 0.0) || !ch.n.is_finite() || !ch.c.re.is_finite() || !ch.c.im.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "channel {j}: n must be finite and nonnegative, got n = {}, c = {}",
                    ch.n, ch.c
                )));
            }
            let lhs = ch.n * (ch.n + 1.0);
            let residual = (lhs - ch.c.norm_sqr()).abs();
            if residual > 1e-9 * lhs.max(1.0) {
                return Err(Error::InvalidParameter(format!(
                    "channel {j}: n(n+1) = |c|² violated by {residual:.3e}"
                )));
            }
            f[(j, j)] = ch.c;
            f[(j, m + j)] = (ch.n + 1.0).into();
            f[(m + j, j)] = ch.n.into();
            f[(m + j, m + j)] = ch.c.conj();
        }
        Ok(ItoTable { m, f })
    }

    /// `F − Fᵀ`, which is `J_f` for every physical table.
    pub fn commutator(&self) -> CMat {
        &self.f - self.f.transpose()
    }

    /// `½(F + Fᵀ)`
    pub fn symmetric(&self) -> CMat {
        (&self.f + self.f.transpose()) * Complex64::from(0.5)
    }
}

pub fn ito_table(kind: &InputField, m: usize) -> Result<ItoTable> {
    match kind {
        InputField::Vacuum => Ok(ItoTable::vacuum(m)),
        InputField::Squeezed(ch) => {
            if ch.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "{} squeezed channels given for {m} inputs",
                    ch.len()
                )));
            }
            ItoTable::squeezed(ch)
        }
    }
}
