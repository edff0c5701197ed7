//! Linear maps on matrices and the quantum channels used throughout the crate.
//!
//! A [`LinearMatrixMap`] is stored in operator-sum form `X ↦ Σ_t A_t X B_t†`.
//! A [`QuantumChannel`] is a Kraus family together with the block structure of
//! its output: a channel of the form `μ_1 N_1(ρ) ⊕ ... ⊕ μ_m N_m(ρ)` lives in
//! one matrix of size `Σ n_j` whose diagonal blocks are listed in
//! `out_blocks`.
//!
//! Choi matrices put the input factor first: `C = Σ_ij E_ij ⊗ Φ(E_ij)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    gaussian_matrix, identity, kron, kron_all, matrix_unit, max_abs_diff, min_eigenvalue,
    partial_trace, real, sample_density, sample_unitary, seeded_rng, ComplexMatrix, ComplexVector, C64,
};
use crate::weyl::{shift_op, WeylIndex};

/// Tolerance for `Σ K†K = I`.
pub const TP_TOL: f64 = 1e-10;
/// Tolerance for the smallest Choi eigenvalue.
pub const CP_TOL: f64 = 1e-10;
/// Tolerance for off-block output entries.
pub const BLOCK_TOL: f64 = 1e-10;
/// Tolerance for the sampled covariance identity.
pub const COVARIANCE_TOL: f64 = 1e-9;
/// Number of Haar unitaries used by [`QuantumChannel::certify`].
pub const COVARIANCE_SAMPLES: usize = 50;

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!("λ must lie in [0, 1], got {lambda}")));
    }
    Ok(())
}

fn check_dim(name: &str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
    }
    Ok(())
}

/// `Σ_i e_i ⊗ A e_i`, the Choi vector of `X ↦ A X`.
fn choi_vector(a: &ComplexMatrix) -> ComplexVector {
    let (m, n) = a.shape();
    let mut v = ComplexVector::zeros(n * m);
    for i in 0..n {
        for r in 0..m {
            v[i * m + r] = a[(r, i)];
        }
    }
    v
}

/// Matrix with the rows of `x` placed at `offset` in a matrix of `total` rows.
fn embed_rows(x: &ComplexMatrix, offset: usize, total: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(total, x.ncols());
    out.view_mut((offset, 0), x.shape()).copy_from(x);
    out
}

/// Nonzero entries `(row, col, value)`.
fn nonzeros(a: &ComplexMatrix) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a[(i, j)];
            if z.re != 0.0 || z.im != 0.0 {
                out.push((i, j, z));
            }
        }
    }
    out
}

/// A linear map `M_in → M_out` in operator-sum form.
#[derive(Debug, Clone)]
pub struct LinearMatrixMap {
    in_dim: usize,
    out_dim: usize,
    terms: Vec<(ComplexMatrix, ComplexMatrix)>,
}

impl LinearMatrixMap {
    /// Builds `X ↦ Σ A X B†`; every `A`, `B` must be `out_dim × in_dim`.
    pub fn new(in_dim: usize, out_dim: usize, terms: Vec<(ComplexMatrix, ComplexMatrix)>) -> Result<Self> {
        for (a, b) in &terms {
            if a.shape() != (out_dim, in_dim) || b.shape() != (out_dim, in_dim) {
                return Err(Error::DimensionMismatch(format!(
                    "operator-sum term of shape {:?}/{:?}, expected {:?}",
                    a.shape(),
                    b.shape(),
                    (out_dim, in_dim)
                )));
            }
        }
        Ok(Self {
            in_dim,
            out_dim,
            terms,
        })
    }

    /// `X ↦ Σ K X K†`.
    pub fn from_kraus(in_dim: usize, out_dim: usize, kraus: &[ComplexMatrix]) -> Result<Self> {
        Self::new(
            in_dim,
            out_dim,
            kraus.iter().map(|k| (k.clone(), k.clone())).collect(),
        )
    }

    /// The transpose map `X ↦ Xᵀ = Σ E_ij X E_ij`, which is positive but not completely positive.
    pub fn transpose(n: usize) -> Self {
        let mut terms = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                terms.push((matrix_unit(n, n, i, j), matrix_unit(n, n, j, i)));
            }
        }
        Self {
            in_dim: n,
            out_dim: n,
            terms,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn terms(&self) -> &[(ComplexMatrix, ComplexMatrix)] {
        &self.terms
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.in_dim, self.in_dim) {
            return Err(Error::DimensionMismatch(format!(
                "map expects {0}x{0} input, got {1}x{2}",
                self.in_dim,
                x.nrows(),
                x.ncols()
            )));
        }
        let (m, n) = (self.out_dim, self.in_dim);
        let mut out = ComplexMatrix::zeros(m, m);
        for (a, b) in &self.terms {
            let (na, nb) = (nonzeros(a), nonzeros(b));
            if na.len() * nb.len() < m * n * (m + n) {
                for &(r, i, ar) in &na {
                    for &(s, j, bs) in &nb {
                        out[(r, s)] += ar * x[(i, j)] * bs.conj();
                    }
                }
            } else {
                out += a * x * b.adjoint();
            }
        }
        Ok(out)
    }

    /// Choi matrix `Σ_ij E_ij ⊗ Φ(E_ij)`, computed as `Σ_t vec(A_t) vec(B_t)†`.
    pub fn choi(&self) -> ComplexMatrix {
        let dim = self.in_dim * self.out_dim;
        let mut c = ComplexMatrix::zeros(dim, dim);
        for (a, b) in &self.terms {
            let va = choi_vector(a);
            let vb = choi_vector(b);
            c.ger(real(1.0), &va, &vb.conjugate(), real(1.0));
        }
        c
    }

    /// `Φ(X) = tr_in[(Xᵀ ⊗ I) C]`, independent of the operator-sum form.
    pub fn apply_via_choi(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.in_dim, self.in_dim) {
            return Err(Error::DimensionMismatch("input shape".into()));
        }
        let c = self.choi();
        let lhs = kron(&x.transpose(), &identity(self.out_dim));
        partial_trace(&(lhs * c), &[self.in_dim, self.out_dim], &[1])
    }

    /// Smallest eigenvalue of the Choi matrix.
    pub fn min_choi_eigenvalue(&self) -> Result<f64> {
        min_eigenvalue(&self.choi())
    }

    /// `max |Σ B†A - I|`; zero exactly when the map is trace preserving.
    pub fn trace_preservation_residual(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.in_dim, self.in_dim);
        for (a, b) in &self.terms {
            acc += b.adjoint() * a;
        }
        max_abs_diff(&acc, &identity(self.in_dim))
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            terms: self.terms.iter().map(|(a, b)| (a * real(c), b.clone())).collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMatrixMap) -> Result<Self> {
        if inner.out_dim != self.in_dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: inner output {} vs outer input {}",
                inner.out_dim, self.in_dim
            )));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * inner.terms.len());
        for (a, b) in &self.terms {
            for (c, d) in &inner.terms {
                terms.push((a * c, b * d));
            }
        }
        Ok(Self {
            in_dim: inner.in_dim,
            out_dim: self.out_dim,
            terms,
        })
    }

    pub fn tensor(&self, other: &LinearMatrixMap) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, b) in &self.terms {
            for (c, d) in &other.terms {
                terms.push((kron(a, c), kron(b, d)));
            }
        }
        Self {
            in_dim: self.in_dim * other.in_dim,
            out_dim: self.out_dim * other.out_dim,
            terms,
        }
    }

    /// `id_d ⊗ self`.
    pub fn ampliate(&self, d: usize) -> Self {
        let id = Self {
            in_dim: d,
            out_dim: d,
            terms: vec![(identity(d), identity(d))],
        };
        id.tensor(self)
    }

    /// `max ‖Φ(αX + βY) - αΦ(X) - βΦ(Y)‖` over random Gaussian probes.
    pub fn linearity_residual(&self, trials: usize, seed: u64) -> Result<f64> {
        let mut rng = seeded_rng(seed);
        let mut worst = 0.0_f64;
        for _ in 0..trials {
            let x = gaussian_matrix(self.in_dim, self.in_dim, &mut rng);
            let y = gaussian_matrix(self.in_dim, self.in_dim, &mut rng);
            let ab = gaussian_matrix(2, 1, &mut rng);
            let (alpha, beta) = (ab[0], ab[1]);
            let lhs = self.apply(&(&x * alpha + &y * beta))?;
            let rhs = self.apply(&x)? * alpha + self.apply(&y)? * beta;
            worst = worst.max(max_abs_diff(&lhs, &rhs));
        }
        Ok(worst)
    }
}

/// One diagonal block of a channel output: dimension and weight `μ_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, f64)", into = "(usize, f64)")]
pub struct OutputBlock {
    pub dim: usize,
    pub weight: f64,
}

impl From<(usize, f64)> for OutputBlock {
    fn from((dim, weight): (usize, f64)) -> Self {
        Self { dim, weight }
    }
}

impl From<OutputBlock> for (usize, f64) {
    fn from(b: OutputBlock) -> Self {
        (b.dim, b.weight)
    }
}

/// Declared unitary covariance.
///
/// The input space is `⊗_i C^{factor_dims[i]}`. For independent unitaries
/// `U_i`, the channel satisfies `N(U ρ U†) = V N(ρ) V†` with `U = ⊗_i U_i` and
/// `V` block diagonal, block `b` being `⊗_{i : acts[b][i]} U_i` (the scalar 1
/// when no factor survives in that block).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Covariance {
    pub factor_dims: Vec<usize>,
    pub acts: Vec<Vec<bool>>,
}

/// Named channel families with closed-form capacities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    Depolarizing { n: usize, lambda: f64 },
    Erasure { n: usize, lambda: f64 },
    Identity { n: usize },
}

/// A completely positive trace-preserving map given by Kraus operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumChannel {
    in_dim: usize,
    #[serde(with = "kraus_serde")]
    kraus: Vec<ComplexMatrix>,
    out_blocks: Vec<OutputBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    covariance: Option<Covariance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<Family>,
}

impl QuantumChannel {
    /// Validates shapes, block weights and trace preservation.
    pub fn new(in_dim: usize, kraus: Vec<ComplexMatrix>, out_blocks: Vec<OutputBlock>) -> Result<Self> {
        let ch = Self {
            in_dim,
            kraus,
            out_blocks,
            covariance: None,
            family: None,
        };
        ch.validate()?;
        Ok(ch)
    }

    fn validate(&self) -> Result<()> {
        check_dim("input dimension", self.in_dim)?;
        if self.kraus.is_empty() {
            return Err(Error::NotCptp("no Kraus operators".into()));
        }
        let out = self.out_dim();
        for k in &self.kraus {
            if k.shape() != (out, self.in_dim) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator of shape {:?}, expected {:?}",
                    k.shape(),
                    (out, self.in_dim)
                )));
            }
        }
        let sum: f64 = self.out_blocks.iter().map(|b| b.weight).sum();
        if (sum - 1.0).abs() > 1e-12 || self.out_blocks.iter().any(|b| b.weight < 0.0 || b.dim == 0) {
            return Err(Error::InvalidParameter(format!(
                "block weights must be nonnegative and sum to 1, got sum {sum}"
            )));
        }
        let tp = self.tp_residual();
        if tp > TP_TOL {
            return Err(Error::NotCptp(format!("Σ K†K deviates from I by {tp:e}")));
        }
        if let Some(cov) = &self.covariance {
            let total: usize = cov.factor_dims.iter().product();
            if total != self.in_dim
                || cov.acts.len() != self.out_blocks.len()
                || cov.acts.iter().any(|a| a.len() != cov.factor_dims.len())
            {
                return Err(Error::DimensionMismatch("covariance declaration does not fit the channel".into()));
            }
            for (acts, block) in cov.acts.iter().zip(&self.out_blocks) {
                let d: usize = cov
                    .factor_dims
                    .iter()
                    .zip(acts)
                    .filter(|(_, &a)| a)
                    .map(|(d, _)| d)
                    .product();
                if d != block.dim {
                    return Err(Error::DimensionMismatch("covariant block dimension mismatch".into()));
                }
            }
        }
        Ok(())
    }

    pub fn with_covariance(mut self, covariance: Covariance) -> Result<Self> {
        self.covariance = Some(covariance);
        self.validate()?;
        Ok(self)
    }

    fn with_family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_blocks.iter().map(|b| b.dim).sum()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn out_blocks(&self) -> &[OutputBlock] {
        &self.out_blocks
    }

    pub fn covariance(&self) -> Option<&Covariance> {
        self.covariance.as_ref()
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    /// Start offsets of the output blocks.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.out_blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.dim;
                o
            })
            .collect()
    }

    pub fn as_map(&self) -> LinearMatrixMap {
        LinearMatrixMap {
            in_dim: self.in_dim,
            out_dim: self.out_dim(),
            terms: self.kraus.iter().map(|k| (k.clone(), k.clone())).collect(),
        }
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.in_dim, self.in_dim) {
            return Err(Error::DimensionMismatch(format!(
                "channel expects {0}x{0} input, got {1}x{2}",
                self.in_dim,
                rho.nrows(),
                rho.ncols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.out_dim(), self.out_dim());
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        Ok(out)
    }

    /// `(id_d ⊗ N)(X)` for `X` on `C^d ⊗ C^n`.
    pub fn apply_ampliated(&self, d: usize, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.as_map().ampliate(d).apply(x)
    }

    pub fn choi(&self) -> ComplexMatrix {
        self.as_map().choi()
    }

    pub fn tp_residual(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            acc += k.adjoint() * k;
        }
        max_abs_diff(&acc, &identity(self.in_dim))
    }

    /// Diagonal blocks of an output matrix, in `out_blocks` order.
    pub fn split_blocks(&self, out: &ComplexMatrix) -> Vec<ComplexMatrix> {
        self.block_offsets()
            .iter()
            .zip(&self.out_blocks)
            .map(|(&o, b)| out.view((o, o), (b.dim, b.dim)).into_owned())
            .collect()
    }

    /// Largest entry of `out` outside the declared diagonal blocks.
    pub fn off_block_residual(&self, out: &ComplexMatrix) -> f64 {
        let mut owner = Vec::with_capacity(out.nrows());
        for (j, b) in self.out_blocks.iter().enumerate() {
            owner.extend(std::iter::repeat_n(j, b.dim));
        }
        let mut worst = 0.0_f64;
        for r in 0..out.nrows() {
            for c in 0..out.ncols() {
                if owner[r] != owner[c] {
                    worst = worst.max(out[(r, c)].norm());
                }
            }
        }
        worst
    }

    /// Largest deviation from the declared covariance over `samples` Haar draws.
    pub fn covariance_residual(&self, samples: usize, seed: u64) -> Result<Option<f64>> {
        let Some(cov) = &self.covariance else {
            return Ok(None);
        };
        let mut rng = seeded_rng(seed);
        let mut worst = 0.0_f64;
        for _ in 0..samples {
            let us: Vec<ComplexMatrix> = cov.factor_dims.iter().map(|&d| sample_unitary(d, &mut rng)).collect();
            let u_in = kron_all(&us);
            let mut v = ComplexMatrix::zeros(self.out_dim(), self.out_dim());
            for ((acts, &o), b) in cov.acts.iter().zip(&self.block_offsets()).zip(&self.out_blocks) {
                let ub = kron_all(us.iter().zip(acts).filter(|(_, &a)| a).map(|(u, _)| u));
                v.view_mut((o, o), (b.dim, b.dim)).copy_from(&ub);
            }
            let rho = sample_density(self.in_dim, self.in_dim, &mut rng)?;
            let lhs = self.apply(&(&u_in * &rho * u_in.adjoint()))?;
            let rhs = &v * self.apply(&rho)? * v.adjoint();
            worst = worst.max(max_abs_diff(&lhs, &rhs));
        }
        Ok(Some(worst))
    }

    /// Checks complete positivity, trace preservation, block structure and declared covariance.
    pub fn certify(&self, seed: u64) -> Result<Certification> {
        certify_map(&self.as_map(), Some(self), seed)
    }
}

/// Outcome of [`QuantumChannel::certify`] or [`certify_map`].
#[derive(Debug, Clone, PartialEq)]
pub struct Certification {
    pub cp: bool,
    pub min_choi_eigenvalue: f64,
    pub tp: bool,
    pub tp_residual: f64,
    pub block_diagonal: bool,
    pub block_residual: f64,
    /// `None` when no covariance is declared.
    pub covariant: Option<bool>,
    pub covariance_residual: Option<f64>,
}

impl Certification {
    pub fn passed(&self) -> bool {
        self.cp && self.tp && self.block_diagonal && self.covariant.unwrap_or(true)
    }
}

/// Certifies an arbitrary linear map; block and covariance checks need a channel.
pub fn certify_map(map: &LinearMatrixMap, channel: Option<&QuantumChannel>, seed: u64) -> Result<Certification> {
    let min_choi_eigenvalue = map.min_choi_eigenvalue()?;
    let tp_residual = map.trace_preservation_residual();
    let mut block_residual = 0.0_f64;
    let mut covariance_residual = None;
    if let Some(ch) = channel {
        let mut rng = seeded_rng(seed);
        for _ in 0..5 {
            let rho = sample_density(ch.in_dim, ch.in_dim, &mut rng)?;
            block_residual = block_residual.max(ch.off_block_residual(&ch.apply(&rho)?));
        }
        covariance_residual = ch.covariance_residual(COVARIANCE_SAMPLES, rng.random())?;
    }
    Ok(Certification {
        cp: min_choi_eigenvalue >= -CP_TOL,
        min_choi_eigenvalue,
        tp: tp_residual <= TP_TOL,
        tp_residual,
        block_diagonal: block_residual <= BLOCK_TOL,
        block_residual,
        covariant: covariance_residual.map(|r| r <= COVARIANCE_TOL),
        covariance_residual,
    })
}

pub fn identity_channel(n: usize) -> Result<QuantumChannel> {
    check_dim("n", n)?;
    Ok(QuantumChannel::new(n, vec![identity(n)], vec![OutputBlock { dim: n, weight: 1.0 }])?
        .with_covariance(Covariance {
            factor_dims: vec![n],
            acts: vec![vec![true]],
        })?
        .with_family(Family::Identity { n }))
}

/// `ρ ↦ tr ρ`, with Kraus operators `⟨e_i|`.
pub fn trace_channel(n: usize) -> Result<QuantumChannel> {
    check_dim("n", n)?;
    let kraus = (0..n).map(|i| matrix_unit(1, n, 0, i)).collect();
    QuantumChannel::new(n, kraus, vec![OutputBlock { dim: 1, weight: 1.0 }])?.with_covariance(Covariance {
        factor_dims: vec![n],
        acts: vec![vec![false]],
    })
}

/// `D_λ(ρ) = λρ + (1 - λ) tr(ρ) I/n`, with Kraus operators `√c_{kl} T_{k,l}`.
pub fn depolarizing(n: usize, lambda: f64) -> Result<QuantumChannel> {
    check_dim("n", n)?;
    check_lambda(lambda)?;
    let nn = (n * n) as f64;
    let mut kraus = Vec::with_capacity(n * n);
    for ix in WeylIndex::all(n) {
        let c = if ix.k == n && ix.l == n {
            lambda + (1.0 - lambda) / nn
        } else {
            (1.0 - lambda) / nn
        };
        kraus.push(shift_op(n, ix.k as i64, ix.l as i64)? * real(c.sqrt()));
    }
    Ok(QuantumChannel::new(n, kraus, vec![OutputBlock { dim: n, weight: 1.0 }])?
        .with_covariance(Covariance {
            factor_dims: vec![n],
            acts: vec![vec![true]],
        })?
        .with_family(Family::Depolarizing { n, lambda }))
}

/// Weighted direct sum `μ_1 N_1(ρ) ⊕ ... ⊕ μ_m N_m(ρ)` of channels with a common input.
///
/// Covariance is kept when every summand declares it over the same factors.
pub fn direct_sum(channels: &[QuantumChannel], weights: &[f64]) -> Result<QuantumChannel> {
    if channels.is_empty() || channels.len() != weights.len() {
        return Err(Error::InvalidParameter("direct sum needs one weight per channel".into()));
    }
    let in_dim = channels[0].in_dim;
    if channels.iter().any(|c| c.in_dim != in_dim) {
        return Err(Error::DimensionMismatch("direct sum summands must share the input".into()));
    }
    let total: usize = channels.iter().map(|c| c.out_dim()).sum();
    let mut kraus = Vec::new();
    let mut blocks = Vec::new();
    let mut offset = 0;
    for (ch, &w) in channels.iter().zip(weights) {
        if w < 0.0 {
            return Err(Error::InvalidParameter(format!("negative weight {w}")));
        }
        for k in &ch.kraus {
            kraus.push(embed_rows(k, offset, total) * real(w.sqrt()));
        }
        blocks.extend(ch.out_blocks.iter().map(|b| OutputBlock {
            dim: b.dim,
            weight: b.weight * w,
        }));
        offset += ch.out_dim();
    }
    let mut out = QuantumChannel::new(in_dim, kraus, blocks)?;
    let covs: Option<Vec<&Covariance>> = channels.iter().map(|c| c.covariance.as_ref()).collect();
    if let Some(covs) = covs {
        if covs.iter().all(|c| c.factor_dims == covs[0].factor_dims) {
            out = out.with_covariance(Covariance {
                factor_dims: covs[0].factor_dims.clone(),
                acts: covs.iter().flat_map(|c| c.acts.iter().cloned()).collect(),
            })?;
        }
    }
    Ok(out)
}

/// `E_λ(ρ) = λρ ⊕ (1 - λ) tr ρ`, output blocks `[(n, λ), (1, 1 - λ)]`.
pub fn erasure(n: usize, lambda: f64) -> Result<QuantumChannel> {
    check_lambda(lambda)?;
    let ch = direct_sum(&[identity_channel(n)?, trace_channel(n)?], &[lambda, 1.0 - lambda])?;
    Ok(ch.with_family(Family::Erasure { n, lambda }))
}

/// `N_1 ⊗ N_2`, with output blocks in lexicographic order of the parent blocks.
pub fn tensor(a: &QuantumChannel, b: &QuantumChannel) -> Result<QuantumChannel> {
    let (ma, mb) = (a.out_dim(), b.out_dim());
    let mut order = Vec::with_capacity(ma * mb);
    let mut blocks = Vec::new();
    for (ba, oa) in a.out_blocks.iter().zip(a.block_offsets()) {
        for (bb, ob) in b.out_blocks.iter().zip(b.block_offsets()) {
            for i in oa..oa + ba.dim {
                for j in ob..ob + bb.dim {
                    order.push(i * mb + j);
                }
            }
            blocks.push(OutputBlock {
                dim: ba.dim * bb.dim,
                weight: ba.weight * bb.weight,
            });
        }
    }
    let mut kraus = Vec::with_capacity(a.kraus.len() * b.kraus.len());
    for ka in &a.kraus {
        for kb in &b.kraus {
            let k = kron(ka, kb);
            kraus.push(ComplexMatrix::from_fn(k.nrows(), k.ncols(), |r, c| k[(order[r], c)]));
        }
    }
    let mut out = QuantumChannel::new(a.in_dim * b.in_dim, kraus, blocks)?;
    if let (Some(ca), Some(cb)) = (&a.covariance, &b.covariance) {
        let mut acts = Vec::new();
        for xa in &ca.acts {
            for xb in &cb.acts {
                acts.push(xa.iter().chain(xb).copied().collect());
            }
        }
        out = out.with_covariance(Covariance {
            factor_dims: ca.factor_dims.iter().chain(&cb.factor_dims).copied().collect(),
            acts,
        })?;
    }
    Ok(out)
}

/// `N^{⊗k}`, `k >= 1`.
pub fn tensor_power(ch: &QuantumChannel, k: usize) -> Result<QuantumChannel> {
    check_dim("k", k)?;
    let mut out = ch.clone();
    for _ in 1..k {
        out = tensor(&out, ch)?;
    }
    Ok(out)
}

/// Every subset of `{0..k}` of size `s`, each sorted, in lexicographic order.
pub fn subsets(k: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if s <= k {
        rec(0, k, s, &mut Vec::with_capacity(s), &mut out);
    }
    out
}

/// `N_A(ρ) = (id_A ⊗ tr_{A^c})(ρ)` on `(C^n)^{⊗k}`; factors in `subset` are 0-based.
pub fn erasure_component(k: usize, subset: &[usize], n: usize) -> Result<QuantumChannel> {
    check_dim("n", n)?;
    let mut kept = subset.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != subset.len() || kept.iter().any(|&a| a >= k) {
        return Err(Error::InvalidParameter(format!("{subset:?} is not a subset of 0..{k}")));
    }
    let traced: Vec<usize> = (0..k).filter(|i| !kept.contains(i)).collect();
    let in_dim = n.pow(k as u32);
    let out_dim = n.pow(kept.len() as u32);
    let digits = |mut x: usize| {
        let mut d = vec![0; k];
        for i in (0..k).rev() {
            d[i] = x % n;
            x /= n;
        }
        d
    };
    let pack = |d: &[usize], idx: &[usize]| idx.iter().fold(0, |acc, &i| acc * n + d[i]);
    let mut kraus = vec![ComplexMatrix::zeros(out_dim, in_dim); n.pow(traced.len() as u32)];
    for x in 0..in_dim {
        let d = digits(x);
        kraus[pack(&d, &traced)][(pack(&d, &kept), x)] = real(1.0);
    }
    QuantumChannel::new(in_dim, kraus, vec![OutputBlock { dim: out_dim, weight: 1.0 }])?.with_covariance(
        Covariance {
            factor_dims: vec![n; k],
            acts: vec![(0..k).map(|i| kept.contains(&i)).collect()],
        },
    )
}

/// `N_s = binom(k, s)^{-1} ⊕_{|A| = s} N_A`.
pub fn erasure_average(k: usize, s: usize, n: usize) -> Result<QuantumChannel> {
    let sets = subsets(k, s);
    if sets.is_empty() {
        return Err(Error::InvalidParameter(format!("need s <= k, got s = {s}, k = {k}")));
    }
    let parts = sets
        .iter()
        .map(|a| erasure_component(k, a, n))
        .collect::<Result<Vec<_>>>()?;
    let w = 1.0 / parts.len() as f64;
    direct_sum(&parts, &vec![w; parts.len()])
}

/// `θ(ρ) = (λρ + (1-λ)/n tr(ρ) I_d) ⊕ (1-λ)/n tr(ρ) ((n-d)/d)^{1/p} I_d`, from `M_d` to `M_{2d}`.
pub fn theta_map(n: usize, d: usize, lambda: f64, p: f64) -> Result<LinearMatrixMap> {
    check_dim("d", d)?;
    check_lambda(lambda)?;
    if d > n {
        return Err(Error::InvalidParameter(format!("need d <= n, got d = {d}, n = {n}")));
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let c = (1.0 - lambda) / n as f64;
    let tail = c * ((n - d) as f64 / d as f64).powf(1.0 / p);
    let mut terms = Vec::new();
    let top = embed_rows(&identity(d), 0, 2 * d) * real(lambda.sqrt());
    terms.push((top.clone(), top));
    for i in 0..d {
        for j in 0..d {
            let a = matrix_unit(2 * d, d, i, j) * real(c.sqrt());
            terms.push((a.clone(), a));
            let b = matrix_unit(2 * d, d, d + i, j) * real(tail.sqrt());
            terms.push((b.clone(), b));
        }
    }
    LinearMatrixMap::new(d, 2 * d, terms)
}

mod kraus_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    type Entries = Vec<Vec<(f64, f64)>>;

    pub fn serialize<S: Serializer>(kraus: &[ComplexMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Entries = kraus
            .iter()
            .map(|k| {
                let mut v = Vec::with_capacity(k.len());
                for r in 0..k.nrows() {
                    for c in 0..k.ncols() {
                        v.push((k[(r, c)].re, k[(r, c)].im));
                    }
                }
                v
            })
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<ComplexMatrix>, D::Error> {
        // Shapes are restored in `from_json` once the block dimensions are known.
        let rows = Entries::deserialize(d)?;
        Ok(rows
            .into_iter()
            .map(|v| ComplexMatrix::from_iterator(1, v.len(), v.into_iter().map(|(re, im)| crate::linalg::c64(re, im))))
            .collect())
    }
}

impl QuantumChannel {
    /// `{in_dim, kraus: [[[re, im], ...row-major], ...], out_blocks: [[dim, weight], ...]}`.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut ch: QuantumChannel = serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        let (rows, cols) = (ch.out_dim(), ch.in_dim);
        for k in ch.kraus.iter_mut() {
            if k.len() != rows * cols {
                return Err(Error::Serialization(format!(
                    "Kraus operator has {} entries, expected {}",
                    k.len(),
                    rows * cols
                )));
            }
            *k = ComplexMatrix::from_row_iterator(rows, cols, k.iter().copied());
        }
        ch.validate()?;
        Ok(ch)
    }
}
