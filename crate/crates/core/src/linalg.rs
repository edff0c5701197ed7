//! Dense complex linear algebra on small matrices.
//!
//! Everything here works on [`ComplexMatrix`] (a `nalgebra` dense matrix of
//! `Complex<f64>`). Tensor factors are always ordered left to right, so the
//! basis vector `e_i ⊗ e_j` of `C^a ⊗ C^b` sits at flat index `i * b + j`.
//! Factor indices passed to [`partial_trace`] and [`permute_factors`] are
//! 0-based.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Absolute tolerance for Hermiticity, relative to `max(1, max |x_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues above `-PSD_TOL` count as nonnegative.
pub const PSD_TOL: f64 = 1e-10;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Exponent of a Schatten or `ℓ_p` norm, `1 <= p <= ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);

    /// `f64::INFINITY` maps to [`Exponent::Infinity`]; anything below 1 or NaN is rejected.
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            Ok(Exponent::Infinity)
        } else {
            Ok(Exponent::Finite(p))
        }
    }

    /// Builds the exponent whose reciprocal is `inv` (`inv = 0` gives ∞).
    pub fn from_inverse(inv: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&inv) {
            return Err(Error::InvalidExponent(1.0 / inv));
        }
        if inv == 0.0 {
            Ok(Exponent::Infinity)
        } else {
            Ok(Exponent::Finite(1.0 / inv))
        }
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn inv(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// Hölder conjugate `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::ONE,
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse exponent {other:?}")))?;
                Exponent::new(p)
            }
        }
    }
}

/// `ℓ_p` norm of a list of magnitudes; negative entries are taken in absolute value.
pub fn lp_norm<I>(values: I, p: Exponent) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let abs: Vec<f64> = values.into_iter().map(f64::abs).collect();
    let max = abs.iter().copied().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    match p {
        Exponent::Infinity => max,
        Exponent::Finite(1.0) => abs.iter().sum(),
        Exponent::Finite(p) => {
            // Scale by the largest entry so large p cannot overflow.
            let s: f64 = abs.iter().map(|v| (v / max).powf(p)).sum();
            max * s.powf(1.0 / p)
        }
    }
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Matrix unit `|i><j|` of size `rows × cols`.
pub fn matrix_unit(rows: usize, cols: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    m[(i, j)] = real(1.0);
    m
}

/// Standard basis vector `e_i` of `C^n`.
pub fn basis_vector(n: usize, i: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(n);
    v[i] = real(1.0);
    v
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list, left to right. The empty product is the 1×1 identity.
pub fn kron_all<'a, I>(factors: I) -> ComplexMatrix
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    factors
        .into_iter()
        .fold(identity(1), |acc, f| acc.kronecker(f))
}

pub fn outer(u: &ComplexVector, v: &ComplexVector) -> ComplexMatrix {
    u * v.adjoint()
}

pub fn trace(x: &ComplexMatrix) -> C64 {
    x.trace()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Flat offsets of every multi-index over `factors` (row-major in the listed order).
fn offsets(dims: &[usize], strides: &[usize], factors: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &f in factors {
        let mut next = Vec::with_capacity(out.len() * dims[f]);
        for &base in &out {
            for i in 0..dims[f] {
                next.push(base + i * strides[f]);
            }
        }
        out = next;
    }
    out
}

fn check_square(x: &ComplexMatrix, dims: &[usize]) -> Result<usize> {
    let total: usize = dims.iter().product();
    if x.nrows() != x.ncols() || x.nrows() != total {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{} but factor dimensions {:?} multiply to {}",
            x.nrows(),
            x.ncols(),
            dims,
            total
        )));
    }
    Ok(total)
}

/// Traces out every factor not listed in `keep`.
///
/// The kept factors appear in the result in ascending index order.
pub fn partial_trace(x: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_square(x, dims)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "invalid kept factors {keep:?} for {} factors",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let st = strides(dims);
    let rows = offsets(dims, &st, &kept);
    let inner = offsets(dims, &st, &traced);
    let n = rows.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (a, &ra) in rows.iter().enumerate() {
        for (b, &rb) in rows.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &inner {
                acc += x[(ra + t, rb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Index map taking a flat index of the permuted space to the original one.
fn permutation_map(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "permutation {perm:?} does not match {} factors",
            dims.len()
        )));
    }
    for &p in perm {
        if p >= dims.len() || seen[p] {
            return Err(Error::DimensionMismatch(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    let st = strides(dims);
    Ok(offsets(dims, &st, perm))
}

/// Reorders tensor factors: factor `i` of the result is factor `perm[i]` of `x`.
pub fn permute_factors(x: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    check_square(x, dims)?;
    let map = permutation_map(dims, perm)?;
    let n = map.len();
    Ok(ComplexMatrix::from_fn(n, n, |a, b| x[(map[a], map[b])]))
}

/// Vector counterpart of [`permute_factors`].
pub fn permute_vector(v: &ComplexVector, dims: &[usize], perm: &[usize]) -> Result<ComplexVector> {
    let total: usize = dims.iter().product();
    if v.len() != total {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} vs factor dimensions {dims:?}",
            v.len()
        )));
    }
    let map = permutation_map(dims, perm)?;
    Ok(ComplexVector::from_fn(map.len(), |a, _| v[map[a]]))
}

/// Largest entrywise deviation `|x_ij - conj(x_ji)|`.
pub fn hermitian_deviation(x: &ComplexMatrix) -> f64 {
    let n = x.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((x[(i, j)] - x[(j, i)].conj()).norm());
        }
    }
    dev
}

fn max_entry(x: &ComplexMatrix) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `(x + x†)/2` after checking that `x` is Hermitian within [`HERMITIAN_TOL`].
pub fn symmetrized(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.nrows() != x.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    let dev = hermitian_deviation(x);
    if dev > HERMITIAN_TOL * max_entry(x).max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    Ok((x + x.adjoint()) * real(0.5))
}

/// Real spectrum of a Hermitian matrix, sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum {
    eigenvalues: Vec<f64>,
}

impl HermitianSpectrum {
    pub fn from_values(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

pub fn hermitian_eigenvalues(x: &ComplexMatrix) -> Result<HermitianSpectrum> {
    let h = symmetrized(x)?;
    Ok(eigenvalues_unchecked(&h))
}

/// Eigenvalues of a matrix already known to be Hermitian (no tolerance check).
pub(crate) fn eigenvalues_unchecked(h: &ComplexMatrix) -> HermitianSpectrum {
    if h.nrows() == 0 {
        return HermitianSpectrum::from_values(Vec::new());
    }
    if h.nrows() == 1 {
        return HermitianSpectrum::from_values(vec![h[(0, 0)].re]);
    }
    HermitianSpectrum::from_values(h.clone().symmetric_eigenvalues().iter().copied().collect())
}

/// Applies a real function to a Hermitian matrix through its eigendecomposition.
pub fn hermitian_function<F>(x: &ComplexMatrix, f: F) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> f64,
{
    let h = symmetrized(x)?;
    let eig = SymmetricEigen::new(h);
    let v = &eig.eigenvectors;
    let d = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|&l| real(f(l))));
    Ok(v * ComplexMatrix::from_diagonal(&d) * v.adjoint())
}

/// Smallest eigenvalue of a Hermitian matrix, computed block by block.
///
/// The matrix is split into the connected components of its nonzero pattern
/// (a permuted block-diagonal form) and each component is diagonalized on its
/// own. Choi matrices of the teleportation maps are block diagonal in this
/// sense, which keeps their certification cheap.
pub fn min_eigenvalue(x: &ComplexMatrix) -> Result<f64> {
    let h = symmetrized(x)?;
    let n = h.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if h[(i, j)].norm_sqr() > 0.0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut min = f64::INFINITY;
    for idx in groups.values() {
        let block = ComplexMatrix::from_fn(idx.len(), idx.len(), |a, b| h[(idx[a], idx[b])]);
        min = min.min(eigenvalues_unchecked(&block).min());
    }
    Ok(if n == 0 { 0.0 } else { min })
}

/// Schatten `p`-norm from singular values.
pub fn schatten_norm(x: &ComplexMatrix, p: Exponent) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    lp_norm(x.clone().singular_values().iter().copied(), p)
}

/// Schatten `p`-norm of a Hermitian matrix via `|eigenvalues|`.
pub fn schatten_norm_hermitian(x: &ComplexMatrix, p: Exponent) -> Result<f64> {
    let spec = hermitian_eigenvalues(x)?;
    Ok(lp_norm(spec.eigenvalues().iter().copied(), p))
}

/// Checks that `x` is a density matrix: Hermitian, PSD within [`PSD_TOL`], trace one within `trace_tol`.
pub fn validate_density(x: &ComplexMatrix, trace_tol: f64) -> Result<()> {
    let spec = hermitian_eigenvalues(x)?;
    if spec.min() < -PSD_TOL {
        return Err(Error::NotPositive(spec.min()));
    }
    let tr = x.trace();
    if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
        return Err(Error::InvalidTrace(tr.re));
    }
    Ok(())
}

/// Unit vector in a tensor product space with declared factor dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateVector {
    factor_dims: Vec<usize>,
    amplitudes: ComplexVector,
}

impl PureStateVector {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(factor_dims: Vec<usize>, amplitudes: ComplexVector) -> Result<Self> {
        let total: usize = factor_dims.iter().product();
        if total != amplitudes.len() {
            return Err(Error::DimensionMismatch(format!(
                "factor dimensions {factor_dims:?} multiply to {total}, got {} amplitudes",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::InvalidParameter(format!("state has norm {norm}, expected 1")));
        }
        Ok(Self {
            factor_dims,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes`; fails on the zero vector.
    pub fn normalized(factor_dims: Vec<usize>, amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("cannot normalize a zero or non-finite vector".into()));
        }
        Self::new(factor_dims, amplitudes / real(norm))
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Rank-one projector `|ψ><ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        outer(&self.amplitudes, &self.amplitudes)
    }
}

/// Deterministic generator for a seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent deterministic generator for sub-task `stream` of a master seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn sample_pure_state<R: Rng + ?Sized>(factor_dims: &[usize], rng: &mut R) -> PureStateVector {
    let n: usize = factor_dims.iter().product();
    loop {
        let g = gaussian_matrix(n, 1, rng);
        let v = ComplexVector::from_iterator(n, g.iter().copied());
        if let Ok(s) = PureStateVector::normalized(factor_dims.to_vec(), v) {
            return s;
        }
    }
}

/// Haar-random pure state on `⊗ C^{d_i}`, deterministic per seed.
pub fn random_pure_state(factor_dims: &[usize], seed: u64) -> PureStateVector {
    sample_pure_state(factor_dims, &mut seeded_rng(seed))
}

pub fn sample_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidParameter(format!("rank must lie in 1..={dim}, got {rank}")));
    }
    let w = gaussian_matrix(dim, rank, rng);
    let rho = &w * w.adjoint();
    let tr = rho.trace().re;
    Ok(rho / real(tr))
}

/// Density matrix `W W† / tr(W W†)` with `W` a `dim × rank` Gaussian matrix.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<ComplexMatrix> {
    sample_density(dim, rank, &mut seeded_rng(seed))
}

/// Haar-random unitary (QR of a Gaussian matrix with the phase of `R` removed).
pub fn sample_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let qr = gaussian_matrix(dim, dim, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DVector::from_fn(dim, |i, _| {
        let d = r[(i, i)];
        if d.norm() == 0.0 {
            real(1.0)
        } else {
            d / real(d.norm())
        }
    });
    q * ComplexMatrix::from_diagonal(&phases)
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn sample_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    (&g + g.adjoint()) * real(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&DVector::from_iterator(
            values.len(),
            values.iter().map(|&v| real(v)),
        ))
    }

    #[test]
    fn kron_of_identities_is_identity() {
        assert_eq!(kron(&identity(2), &identity(3)), identity(6));
    }

    #[test]
    fn kron_of_matrix_units() {
        let e11 = matrix_unit(2, 2, 0, 0);
        let e22 = matrix_unit(2, 2, 1, 1);
        // e_1 ⊗ e_2 is flat index 0 * 2 + 1.
        assert_eq!(kron(&e11, &e22), matrix_unit(4, 4, 1, 1));
    }

    #[test]
    fn kron_trace_is_product_of_traces() {
        let mut rng = seeded_rng(11);
        let a = gaussian_matrix(3, 3, &mut rng);
        let b = gaussian_matrix(3, 3, &mut rng);
        let k = kron(&a, &b);
        // Oracle: the diagonal of A ⊗ B is a_ii * b_jj.
        let mut tr = C64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                tr += a[(i, i)] * b[(j, j)];
            }
        }
        assert!((k.trace() - tr).norm() < 1e-12);
        assert!((k.trace() - a.trace() * b.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_by_elementwise_sums() {
        let mut rng = seeded_rng(5);
        let a = gaussian_matrix(2, 2, &mut rng);
        let b = gaussian_matrix(3, 3, &mut rng);
        let x = kron(&a, &b);
        let got = partial_trace(&x, &[2, 3], &[0]).unwrap();
        // Oracle: sum x[(i*3+k, j*3+k)] over k by hand.
        let mut oracle = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..3 {
                    oracle[(i, j)] += x[(i * 3 + k, j * 3 + k)];
                }
            }
        }
        assert!(max_abs_diff(&got, &oracle) < 1e-12);
        assert!(max_abs_diff(&got, &(&a * b.trace())) < 1e-12);
        let other = partial_trace(&x, &[2, 3], &[1]).unwrap();
        assert!(max_abs_diff(&other, &(&b * a.trace())) < 1e-12);
    }

    #[test]
    fn partial_trace_keep_everything_is_noop() {
        let rho = random_density(3, 2, 9).unwrap();
        assert_eq!(partial_trace(&rho, &[3], &[0]).unwrap(), rho);
    }

    #[test]
    fn partial_trace_of_maximally_entangled_state() {
        let n = 3;
        let mut v = ComplexVector::zeros(n * n);
        for i in 0..n {
            v[i * n + i] = real(1.0 / (n as f64).sqrt());
        }
        let m = partial_trace(&outer(&v, &v), &[n, n], &[0]).unwrap();
        assert!(max_abs_diff(&m, &(identity(n) / real(n as f64))) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let x = identity(6);
        assert!(matches!(
            partial_trace(&x, &[2, 2], &[0]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(partial_trace(&x, &[2, 3], &[2]).is_err());
        assert!(partial_trace(&x, &[2, 3], &[0, 0]).is_err());
    }

    #[test]
    fn permute_swaps_kron_factors() {
        let mut rng = seeded_rng(2);
        let a = gaussian_matrix(2, 2, &mut rng);
        let b = gaussian_matrix(3, 3, &mut rng);
        let swapped = permute_factors(&kron(&a, &b), &[2, 3], &[1, 0]).unwrap();
        assert!(max_abs_diff(&swapped, &kron(&b, &a)) < 1e-15);
    }

    #[test]
    fn schatten_norm_basic_values() {
        for n in 1..5 {
            for p in [1.0, 1.5, 2.0, 4.0] {
                let v = schatten_norm(&identity(n), Exponent::new(p).unwrap());
                assert!((v - (n as f64).powf(1.0 / p)).abs() < 1e-12);
            }
            assert!((schatten_norm(&identity(n), Exponent::Infinity) - 1.0).abs() < 1e-12);
        }
        assert!((schatten_norm(&diag(&[3.0, 4.0]), Exponent::TWO) - 5.0).abs() < 1e-12);
        let rho = random_density(4, 3, 1).unwrap();
        assert!((schatten_norm(&rho, Exponent::ONE) - 1.0).abs() < 1e-12);
        assert!((schatten_norm_hermitian(&rho, Exponent::ONE).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exponent_rejects_below_one() {
        assert_eq!(Exponent::new(0.5), Err(Error::InvalidExponent(0.5)));
        assert!(Exponent::new(f64::NAN).is_err());
        assert_eq!(Exponent::new(f64::INFINITY).unwrap(), Exponent::Infinity);
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!(Exponent::ONE.conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::TWO.conjugate(), Exponent::TWO);
    }

    #[test]
    fn eigenvalues_of_identity_and_projector() {
        let spec = hermitian_eigenvalues(&identity(4)).unwrap();
        assert!(spec.eigenvalues().iter().all(|&l| (l - 1.0).abs() < 1e-14));
        let mut v = ComplexVector::zeros(4);
        v[0] = real(0.5_f64.sqrt());
        v[3] = real(0.5_f64.sqrt());
        let spec = hermitian_eigenvalues(&outer(&v, &v)).unwrap();
        let expect = [1.0, 0.0, 0.0, 0.0];
        for (l, e) in spec.eigenvalues().iter().zip(expect) {
            assert!((l - e).abs() < 1e-14);
        }
    }

    #[test]
    fn eigenvalues_sum_to_trace_and_reconstruct() {
        let mut rng = seeded_rng(3);
        let h = sample_hermitian(5, &mut rng);
        let spec = hermitian_eigenvalues(&h).unwrap();
        assert!((spec.sum() - h.trace().re).abs() < 1e-10);
        assert!(spec.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
        let eig = SymmetricEigen::new(h.clone());
        let rebuilt = eig.recompose();
        let scale = schatten_norm(&h, Exponent::Infinity);
        assert!(max_abs_diff(&rebuilt, &h) <= 1e-10 * scale);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut x = identity(2);
        x[(0, 1)] = real(1.0);
        assert!(matches!(hermitian_eigenvalues(&x), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn blockwise_min_eigenvalue_matches_dense() {
        let mut rng = seeded_rng(8);
        let a = sample_hermitian(3, &mut rng);
        let b = sample_hermitian(2, &mut rng);
        let mut m = ComplexMatrix::zeros(5, 5);
        m.view_mut((0, 0), (3, 3)).copy_from(&a);
        m.view_mut((3, 3), (2, 2)).copy_from(&b);
        let dense = hermitian_eigenvalues(&m).unwrap().min();
        assert!((min_eigenvalue(&m).unwrap() - dense).abs() < 1e-12);
    }

    #[test]
    fn random_objects_are_valid_and_deterministic() {
        let rho = random_density(4, 4, 17).unwrap();
        validate_density(&rho, 1e-12).unwrap();
        let psi = random_pure_state(&[2, 3], 4);
        assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-12);
        assert_eq!(psi, random_pure_state(&[2, 3], 4));
        assert_eq!(rho, random_density(4, 4, 17).unwrap());
        assert!(random_density(3, 0, 1).is_err());
        let u = sample_unitary(4, &mut seeded_rng(1));
        assert!(max_abs_diff(&(u.adjoint() * &u), &identity(4)) < 1e-12);
    }

    #[test]
    fn pure_state_checks_dimensions_and_norm() {
        let v = ComplexVector::from_element(4, real(0.5));
        assert!(PureStateVector::new(vec![2, 2], v.clone()).is_ok());
        assert!(PureStateVector::new(vec![2, 3], v.clone()).is_err());
        assert!(PureStateVector::new(vec![4], v * real(2.0)).is_err());
    }
}
