//! Generalized open oscillators `G = (S, Kx, ½xᵀRx)` and the network
//! algebra on them: concatenation, series product, direct bilinear
//! interactions and reduction of series-reducible networks.
//!
//! Quadratures are ordered `x = (q₁, p₁, …, qₙ, pₙ)` with `[qⱼ, pⱼ] = 2i`,
//! so the commutation matrix is `Θ = diag(J, …, J)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{
    block_diag, conj, identity_c, max_abs_c, symmetry_residual, unitarity_residual, CMat, RMat, I,
};

/// Default tolerance for unitarity and symmetry checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `Θ = diag(J, …, J)` with `J = [[0, 1], [−1, 0]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutationMatrix {
    n: usize,
    theta: RMat,
}

impl CommutationMatrix {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(
                "commutation matrix needs at least one degree of freedom".into(),
            ));
        }
        Ok(CommutationMatrix { n, theta: theta(n) })
    }

    pub fn dof(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RMat {
        &self.theta
    }

    pub fn into_matrix(self) -> RMat {
        self.theta
    }
}

pub fn make_commutation_matrix(n: usize) -> Result<CommutationMatrix> {
    CommutationMatrix::new(n)
}

/// Unchecked `Θ` for `n ≥ 0` degrees of freedom (empty when `n = 0`).
pub(crate) fn theta(n: usize) -> RMat {
    let mut t = RMat::zeros(2 * n, 2 * n);
    for j in 0..n {
        t[(2 * j, 2 * j + 1)] = 1.0;
        t[(2 * j + 1, 2 * j)] = -1.0;
    }
    t
}

/// Parameters `(S, K, R)` of a generalized open oscillator with `n` degrees
/// of freedom and `m` field channels.
///
/// `n = 0` is allowed and describes a static passive network `(S, 0, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorParams {
    /// `m × m` unitary scattering matrix.
    pub s: CMat,
    /// `m × 2n` coupling matrix, `L = Kx`.
    pub k: CMat,
    /// `2n × 2n` real symmetric Hamiltonian matrix, `H = ½xᵀRx`.
    pub r: RMat,
}

impl OscillatorParams {
    /// Builds the triple after checking that the shapes agree. Unitarity and
    /// symmetry are left to [`validate_oscillator`].
    pub fn new(s: CMat, k: CMat, r: RMat) -> Result<Self> {
        let g = OscillatorParams { s, k, r };
        if let Some(detail) = g.shape_problem() {
            return Err(Error::DimensionMismatch(detail));
        }
        Ok(g)
    }

    /// `(I, 0, 0)` with `n` degrees of freedom and `m` channels.
    pub fn trivial(n: usize, m: usize) -> Self {
        OscillatorParams {
            s: identity_c(m),
            k: CMat::zeros(m, 2 * n),
            r: RMat::zeros(2 * n, 2 * n),
        }
    }

    /// The static passive network `(S, 0, 0)`.
    pub fn static_network(s: CMat) -> Self {
        let m = s.nrows();
        OscillatorParams {
            s,
            k: CMat::zeros(m, 0),
            r: RMat::zeros(0, 0),
        }
    }

    pub fn dof(&self) -> usize {
        self.r.nrows() / 2
    }

    pub fn channels(&self) -> usize {
        self.s.nrows()
    }

    /// Largest entrywise difference over all three parameters; infinite when
    /// the shapes differ.
    pub fn max_difference(&self, other: &OscillatorParams) -> f64 {
        if self.s.shape() != other.s.shape()
            || self.k.shape() != other.k.shape()
            || self.r.shape() != other.r.shape()
        {
            return f64::INFINITY;
        }
        let ds = max_abs_c(&(&self.s - &other.s));
        let dk = max_abs_c(&(&self.k - &other.k));
        let dr = crate::linalg::max_abs(&(&self.r - &other.r));
        ds.max(dk).max(dr)
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        validate_oscillator(self, tol)
    }

    fn shape_problem(&self) -> Option<String> {
        let (sr, sc) = self.s.shape();
        let (kr, kc) = self.k.shape();
        let (rr, rc) = self.r.shape();
        if sr != sc {
            return Some(format!("S is {sr}x{sc}, expected square"));
        }
        if rr != rc {
            return Some(format!("R is {rr}x{rc}, expected square"));
        }
        if rr % 2 != 0 {
            return Some(format!("R has odd size {rr}"));
        }
        if kr != sr || kc != rr {
            return Some(format!("K is {kr}x{kc}, expected {sr}x{rr}"));
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    DimensionMismatch { detail: String },
    NonFinite { parameter: &'static str },
    NonUnitaryScattering { residual: f64 },
    NonSymmetricHamiltonian { residual: f64 },
    ComplexHamiltonian { residual: f64 },
}

impl Violation {
    /// Stable machine-readable name.
    pub fn name(&self) -> &'static str {
        match self {
            Violation::DimensionMismatch { .. } => "dimension_mismatch",
            Violation::NonFinite { .. } => "non_finite",
            Violation::NonUnitaryScattering { .. } => "non_unitary_scattering",
            Violation::NonSymmetricHamiltonian { .. } => "non_symmetric_hamiltonian",
            Violation::ComplexHamiltonian { .. } => "complex_hamiltonian",
        }
    }

    pub fn residual(&self) -> Option<f64> {
        match self {
            Violation::NonUnitaryScattering { residual }
            | Violation::NonSymmetricHamiltonian { residual }
            | Violation::ComplexHamiltonian { residual } => Some(*residual),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionMismatch { detail } => write!(f, "dimension mismatch: {detail}"),
            Violation::NonFinite { parameter } => write!(f, "{parameter} has non-finite entries"),
            Violation::NonUnitaryScattering { residual } => {
                write!(f, "S is not unitary (residual {residual:.3e})")
            }
            Violation::NonSymmetricHamiltonian { residual } => {
                write!(f, "R is not symmetric (residual {residual:.3e})")
            }
            Violation::ComplexHamiltonian { residual } => {
                write!(f, "R has imaginary entries (residual {residual:.3e})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidOscillator(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_oscillator(g: &OscillatorParams, tol: f64) -> ValidationReport {
    let mut report = ValidationReport::default();
    if let Some(detail) = g.shape_problem() {
        report
            .violations
            .push(Violation::DimensionMismatch { detail });
        return report;
    }
    let finite_c = |m: &CMat| m.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    if !finite_c(&g.s) {
        report
            .violations
            .push(Violation::NonFinite { parameter: "S" });
    }
    if !finite_c(&g.k) {
        report
            .violations
            .push(Violation::NonFinite { parameter: "K" });
    }
    if !g.r.iter().all(|x| x.is_finite()) {
        report
            .violations
            .push(Violation::NonFinite { parameter: "R" });
    }
    if !report.is_valid() {
        return report;
    }
    let unitarity = unitarity_residual(&g.s);
    if unitarity > tol {
        report.violations.push(Violation::NonUnitaryScattering {
            residual: unitarity,
        });
    }
    let symmetry = symmetry_residual(&g.r);
    if symmetry > tol {
        report
            .violations
            .push(Violation::NonSymmetricHamiltonian { residual: symmetry });
    }
    report
}

/// `G₁ ⊞ G₂` for independent oscillators: every parameter block-diagonal.
pub fn concatenate(g1: &OscillatorParams, g2: &OscillatorParams) -> OscillatorParams {
    OscillatorParams {
        s: block_diag(&g1.s, &g2.s),
        k: block_diag(&g1.k, &g2.k),
        r: block_diag(&g1.r, &g2.r),
    }
}

/// Coefficient `F` of the feedback Hamiltonian `x₂ᵀ F x₁` produced when the
/// output of a system with coupling `k1` drives a system `(s2, k2)`:
/// `F = (1/2i)(K₂†S₂K₁ − K₂ᵀS₂^#K₁^#)`.
pub(crate) fn feedback_coefficient(k2: &CMat, s2: &CMat, k1: &CMat) -> CMat {
    let direct = k2.adjoint() * s2 * k1;
    let conjugate = k2.transpose() * conj(s2) * conj(k1);
    (direct - conjugate) * (-0.5 * I)
}

/// `G₂ ◁ G₁`: the output of `g1` is fed into `g2`. The joint state is
/// `x = (x₁, x₂)`.
pub fn series(g2: &OscillatorParams, g1: &OscillatorParams) -> Result<OscillatorParams> {
    let m = g1.channels();
    if g2.channels() != m {
        return Err(Error::DimensionMismatch(format!(
            "series product needs equal channel counts, got {} and {}",
            g2.channels(),
            m
        )));
    }
    let (n1, n2) = (g1.dof(), g2.dof());
    let s = &g2.s * &g1.s;

    let mut k = CMat::zeros(m, 2 * (n1 + n2));
    k.view_mut((0, 0), (m, 2 * n1)).copy_from(&(&g2.s * &g1.k));
    k.view_mut((0, 2 * n1), (m, 2 * n2)).copy_from(&g2.k);

    // (1/2i)(X − X^#) is exactly Im X, so the cross block is real by construction.
    let f = feedback_coefficient(&g2.k, &g2.s, &g1.k).map(|z| z.re);
    let mut r = block_diag(&g1.r, &g2.r);
    r.view_mut((2 * n1, 0), (2 * n2, 2 * n1)).copy_from(&f);
    r.view_mut((0, 2 * n1), (2 * n1, 2 * n2))
        .copy_from(&f.transpose());

    Ok(OscillatorParams { s, k, r })
}

/// Bilinear interaction `x_kᵀ C x_j` between oscillators `j < k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectCoupling {
    pub j: usize,
    pub k: usize,
    /// `2·dof(k) × 2·dof(j)` real matrix; `2 × 2` between one-mode oscillators.
    pub c: RMat,
}

impl DirectCoupling {
    pub fn new(j: usize, k: usize, c: RMat) -> Result<Self> {
        if j >= k {
            return Err(Error::IndexOutOfRange(format!(
                "direct coupling needs j < k, got j={j}, k={k}"
            )));
        }
        if !c.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter(
                "coupling matrix has non-finite entries".into(),
            ));
        }
        Ok(DirectCoupling { j, k, c })
    }

    pub fn negated(&self) -> Self {
        DirectCoupling {
            j: self.j,
            k: self.k,
            c: -&self.c,
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        crate::linalg::max_abs(&self.c) <= tol
    }
}

/// Adds each `x_kᵀ C x_j` to the Hamiltonian of `g`. `layout[i]` is the
/// number of degrees of freedom of oscillator `i`, in state order.
pub fn add_direct_interaction(
    g: &OscillatorParams,
    couplings: &[DirectCoupling],
    layout: &[usize],
) -> Result<OscillatorParams> {
    let total: usize = layout.iter().sum();
    if total != g.dof() {
        return Err(Error::DimensionMismatch(format!(
            "layout covers {total} degrees of freedom, oscillator has {}",
            g.dof()
        )));
    }
    let offsets: Vec<usize> = layout
        .iter()
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    add_couplings_at(g, couplings, &offsets, layout)
}

fn add_couplings_at(
    g: &OscillatorParams,
    couplings: &[DirectCoupling],
    offsets: &[usize],
    dofs: &[usize],
) -> Result<OscillatorParams> {
    let mut out = g.clone();
    for cp in couplings {
        if cp.k >= dofs.len() {
            return Err(Error::IndexOutOfRange(format!(
                "coupling ({}, {}) refers to oscillator {} of {}",
                cp.j,
                cp.k,
                cp.k,
                dofs.len()
            )));
        }
        let (rj, rk) = (2 * dofs[cp.j], 2 * dofs[cp.k]);
        if cp.c.shape() != (rk, rj) {
            return Err(Error::DimensionMismatch(format!(
                "coupling ({}, {}) matrix is {:?}, expected {:?}",
                cp.j,
                cp.k,
                cp.c.shape(),
                (rk, rj)
            )));
        }
        let (oj, ok) = (2 * offsets[cp.j], 2 * offsets[cp.k]);
        let mut kj = out.r.view_mut((ok, oj), (rk, rj));
        kj += &cp.c;
        let mut jk = out.r.view_mut((oj, ok), (rj, rk));
        jk += cp.c.transpose();
    }
    Ok(out)
}

/// `G_to ◁ G_from`: the output of oscillator `from` drives oscillator `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesConnection {
    pub from: usize,
    pub to: usize,
}

/// A reducible network: oscillators, series connections without algebraic
/// loops, and direct interactions.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSpec {
    pub oscillators: Vec<OscillatorParams>,
    pub series: Vec<SeriesConnection>,
    pub couplings: Vec<DirectCoupling>,
}

impl NetworkSpec {
    /// The series chains of the network, each listed from its head, chains
    /// ordered by head index.
    pub fn chains(&self) -> Result<Vec<Vec<usize>>> {
        let l = self.oscillators.len();
        let mut next: Vec<Option<usize>> = vec![None; l];
        let mut has_input = vec![false; l];
        for sc in &self.series {
            if sc.from >= l || sc.to >= l {
                return Err(Error::IndexOutOfRange(format!(
                    "series connection {} -> {} with {l} oscillators",
                    sc.from, sc.to
                )));
            }
            if sc.from == sc.to {
                return Err(Error::InvalidNetwork(format!(
                    "oscillator {} is connected to itself",
                    sc.from
                )));
            }
            if next[sc.from].is_some() {
                return Err(Error::InvalidNetwork(format!(
                    "output of oscillator {} has more than one connection",
                    sc.from
                )));
            }
            if has_input[sc.to] {
                return Err(Error::InvalidNetwork(format!(
                    "input of oscillator {} has more than one connection",
                    sc.to
                )));
            }
            next[sc.from] = Some(sc.to);
            has_input[sc.to] = true;
        }
        let mut visited = vec![false; l];
        let mut chains = Vec::new();
        for head in (0..l).filter(|&i| !has_input[i]) {
            let mut chain = vec![head];
            visited[head] = true;
            let mut cur = head;
            while let Some(nx) = next[cur] {
                chain.push(nx);
                visited[nx] = true;
                cur = nx;
            }
            chains.push(chain);
        }
        if visited.iter().any(|v| !v) {
            return Err(Error::InvalidNetwork(
                "series connections contain an algebraic loop".into(),
            ));
        }
        Ok(chains)
    }
}

/// Reduces a network to a single oscillator. Each series chain is folded
/// head first with [`series`]; separate chains are concatenated in order of
/// their head index; direct couplings are applied last. The state of the
/// result lists the oscillators in that chain order, which is plain index
/// order for a single chain `0 → 1 → … → l−1`.
pub fn reduce_network(spec: &NetworkSpec) -> Result<OscillatorParams> {
    if spec.oscillators.is_empty() {
        return Err(Error::InvalidNetwork("network has no oscillators".into()));
    }
    let chains = spec.chains()?;
    let mut order = Vec::with_capacity(spec.oscillators.len());
    let mut reduced: Option<OscillatorParams> = None;
    for chain in &chains {
        let mut joint = spec.oscillators[chain[0]].clone();
        for &idx in &chain[1..] {
            joint = series(&spec.oscillators[idx], &joint)?;
        }
        order.extend_from_slice(chain);
        reduced = Some(match reduced {
            None => joint,
            Some(prev) => concatenate(&prev, &joint),
        });
    }
    let reduced = reduced.expect("at least one chain");

    let dofs: Vec<usize> = spec.oscillators.iter().map(|g| g.dof()).collect();
    let mut offsets = vec![0; dofs.len()];
    let mut acc = 0;
    for &idx in &order {
        offsets[idx] = acc;
        acc += dofs[idx];
    }
    add_couplings_at(&reduced, &spec.couplings, &offsets, &dofs)
}
