//! Mixed Schatten norms of positive matrices, channel d-norms and entropy derivatives.
//!
//! A positive `X` on `C^N ⊗ C^M` is measured in `S_p^N[S_q^M]`, the outer
//! factor first. With `1/r = |1/p - 1/q|`:
//!
//! * `p >= q`: `‖X‖ = sup { ‖(A⊗I) X (A⊗I)‖_q : A >= 0, ‖A‖_{2r} = 1 }`;
//! * `p <= q`: `‖X‖ = inf { ‖A‖_{2r}² ‖(A⁻¹⊗I) X (A⁻¹⊗I)‖_q : A > 0 }`.
//!
//! Both are searched over `A = exp(H)` with `H` Hermitian, so the reported
//! values are one-sided bounds unless `p = q`.

use crate::channels::QuantumChannel;
use crate::entropy::{eta_ln, ProbabilityVector};
use crate::error::{Error, Result};
use crate::linalg::{
    c64, eigenvalues_unchecked, identity, kron, lp_norm, min_eigenvalue, partial_trace, real, schatten_norm, ComplexMatrix,
    ComplexVector, Exponent, PureStateVector,
};
use crate::optimize::{multistart_minimize, OptimizerOptions};

/// The norm `S_p^N[S_q^M]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedNormSpec {
    pub outer_p: Exponent,
    pub inner_q: Exponent,
    pub outer_dim: usize,
    pub inner_dim: usize,
}

impl MixedNormSpec {
    pub fn new(outer_p: Exponent, inner_q: Exponent, outer_dim: usize, inner_dim: usize) -> Self {
        Self {
            outer_p,
            inner_q,
            outer_dim,
            inner_dim,
        }
    }

    /// `1/r = |1/p - 1/q|`.
    pub fn r_inv(&self) -> f64 {
        (self.outer_p.inv() - self.inner_q.inv()).abs()
    }

    /// The exponent `2r` used to normalize `A`.
    pub fn normalization_exponent(&self) -> Exponent {
        // r_inv <= 1, so 2r >= 2.
        Exponent::from_inverse(self.r_inv() / 2.0).unwrap_or(Exponent::Infinity)
    }

    pub fn outer_conjugate(&self) -> Exponent {
        self.outer_p.conjugate()
    }
}

/// How a reported value relates to the true optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Exact,
    LowerBound,
    UpperBound,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Normalized positive matrix `A` of a mixed-norm search.
    Matrix(ComplexMatrix),
    State(PureStateVector),
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationReport {
    pub value: f64,
    pub kind: BoundKind,
    pub witness: Witness,
    /// Objective at the canonical starting point (warm start or maximally entangled state).
    pub canonical_value: Option<f64>,
    /// Final value of each random restart.
    pub restart_values: Vec<f64>,
    pub restarts_used: usize,
    pub converged: bool,
    pub iterations: usize,
}

impl OptimizationReport {
    fn exact(value: f64) -> Self {
        Self {
            value,
            kind: BoundKind::Exact,
            witness: Witness::None,
            canonical_value: Some(value),
            restart_values: Vec::new(),
            restarts_used: 0,
            converged: true,
            iterations: 0,
        }
    }

    /// Best value over the random restarts alone.
    pub fn best_restart(&self) -> Option<f64> {
        let it = self.restart_values.iter().copied();
        match self.kind {
            BoundKind::UpperBound => it.reduce(f64::min),
            _ => it.reduce(f64::max),
        }
    }
}

/// Hermitian `N × N` matrix from `N²` reals: diagonal, then upper-triangle real and imaginary parts.
fn hermitian_from_params(x: &[f64], n: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    let mut k = n;
    for i in 0..n {
        h[(i, i)] = real(x[i]);
        for j in (i + 1)..n {
            let z = c64(x[k], x[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

fn params_from_hermitian(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.nrows();
    let mut x = Vec::with_capacity(n * n);
    for i in 0..n {
        x.push(h[(i, i)].re);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            x.push(h[(i, j)].re);
            x.push(h[(i, j)].im);
        }
    }
    x
}

/// `f(H)` through the eigendecomposition; returns `(f(H), eigenvalues of H)`.
fn hermitian_apply(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> (ComplexMatrix, Vec<f64>) {
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let v = &eig.eigenvectors;
    let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let d = ComplexVector::from_iterator(vals.len(), vals.iter().map(|&l| real(f(l))));
    (v * ComplexMatrix::from_diagonal(&d) * v.adjoint(), vals)
}

/// `‖Z‖_q` for Hermitian `Z`, symmetrizing away roundoff.
fn hermitian_norm(z: &ComplexMatrix, q: Exponent) -> f64 {
    let h = (z + z.adjoint()) * real(0.5);
    lp_norm(eigenvalues_unchecked(&h).eigenvalues().iter().copied(), q)
}

/// Largest exponent used for the warm start; larger ones only sharpen an already rank-one start.
const MAX_WARM_POWER: f64 = 50.0;

/// `(A ⊗ I_M) X (A ⊗ I_M)`.
fn sandwich(a: &ComplexMatrix, x: &ComplexMatrix, m: usize) -> ComplexMatrix {
    let big = kron(a, &identity(m));
    &big * x * &big
}

fn check_psd(x: &ComplexMatrix) -> Result<()> {
    let scale = schatten_norm(x, Exponent::Infinity).max(1.0);
    let min = min_eigenvalue(x)?;
    if min < -1e-10 * scale {
        return Err(Error::NotPositive(min));
    }
    Ok(())
}

/// Evaluates `‖X‖_{S_p^N[S_q^M]}` for positive `X`.
///
/// `p = q` is computed exactly. Otherwise the search starts from
/// `A ∝ Y^{(p/q-1)/2}` (`Y` the partial trace over the inner factor, inverted
/// for the infimum form), which is optimal when `q = 1`, and adds
/// `options.restarts` random starts.
pub fn mixed_norm_positive(x: &ComplexMatrix, spec: &MixedNormSpec, options: &OptimizerOptions) -> Result<OptimizationReport> {
    let (n, m) = (spec.outer_dim, spec.inner_dim);
    if x.shape() != (n * m, n * m) {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, spec expects {}",
            x.nrows(),
            x.ncols(),
            n * m
        )));
    }
    check_psd(x)?;
    let (p, q) = (spec.outer_p, spec.inner_q);
    if p == q {
        return Ok(OptimizationReport::exact(schatten_norm(x, p)));
    }
    let sup_type = p.inv() <= q.inv();
    let norm_exp = spec.normalization_exponent();
    let x = (x + x.adjoint()) * real(0.5);

    // Returns the objective and the normalized A.
    let evaluate = |params: &[f64]| -> (f64, ComplexMatrix) {
        let h = hermitian_from_params(params, n);
        let eig = nalgebra::SymmetricEigen::new(h);
        let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let top = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let v = &eig.eigenvectors;
        let rebuild = |f: &dyn Fn(f64) -> f64| {
            let d = ComplexVector::from_iterator(n, vals.iter().map(|&l| real(f(l))));
            v * ComplexMatrix::from_diagonal(&d) * v.adjoint()
        };
        let a = rebuild(&|l| (l - top).exp());
        let a_norm = lp_norm(vals.iter().map(|l| (l - top).exp()), norm_exp);
        let a_hat = &a / real(a_norm);
        if sup_type {
            (hermitian_norm(&sandwich(&a_hat, &x, m), q), a_hat)
        } else {
            let a_inv = rebuild(&|l| (top - l).exp());
            // ‖A‖² ‖(A⁻¹⊗I)X(A⁻¹⊗I)‖ is invariant under scaling A.
            let v = a_norm * a_norm * hermitian_norm(&sandwich(&a_inv, &x, m), q);
            (v, a_hat)
        }
    };
    let objective = |params: &[f64]| {
        let v = evaluate(params).0;
        if sup_type {
            -v
        } else {
            v
        }
    };

    let y = partial_trace(&x, &[n, m], &[0])?;
    // Y^{(p/q-1)/2}, written with reciprocals so that p = ∞ is covered.
    let power = if q.inv() == 0.0 { -0.5 } else { ((q.inv() / p.inv().max(1e-3) - 1.0) / 2.0).min(MAX_WARM_POWER) };
    let y_max = eigenvalues_unchecked(&((&y + y.adjoint()) * real(0.5))).max().max(f64::MIN_POSITIVE);
    let floor = 1e-12 * y_max;
    let sign = if sup_type { 1.0 } else { -1.0 };
    let (warm_h, _) = hermitian_apply(&((&y + y.adjoint()) * real(0.5)), |l| sign * power * l.max(floor).ln());
    let warm = params_from_hermitian(&warm_h);

    let run = multistart_minimize(&objective, n * n, std::slice::from_ref(&warm), options);
    let canonical = run.seeded_values[0];
    let (value, witness) = evaluate(&run.best.x);
    let sgn = |v: f64| if sup_type { -v } else { v };
    Ok(OptimizationReport {
        value,
        kind: if sup_type { BoundKind::LowerBound } else { BoundKind::UpperBound },
        witness: Witness::Matrix(witness),
        canonical_value: Some(sgn(canonical)),
        restart_values: run.restart_values.iter().map(|&v| sgn(v)).collect(),
        restarts_used: run.restart_values.len(),
        converged: run.best.converged,
        iterations: run.total_iterations,
    })
}

/// Pure-state objective for `id_d ⊗ N`.
struct PureStateProblem {
    d: usize,
    n: usize,
    m: usize,
    kraus_t: Vec<ComplexMatrix>,
}

impl PureStateProblem {
    fn new(ch: &QuantumChannel, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        let tp = ch.tp_residual();
        if tp > crate::channels::TP_TOL {
            return Err(Error::NotCptp(format!("trace preservation residual {tp:e}")));
        }
        Ok(Self {
            d,
            n: ch.in_dim(),
            m: ch.out_dim(),
            kraus_t: ch.kraus().iter().map(|k| k.transpose()).collect(),
        })
    }

    fn dim(&self) -> usize {
        2 * self.d * self.n
    }

    /// Coefficient matrix `Ψ` (`d × n`, unit Frobenius norm) of `ψ = Σ Ψ_ij e_i ⊗ e_j`.
    fn state(&self, x: &[f64]) -> Option<ComplexMatrix> {
        let dn = self.d * self.n;
        let psi = ComplexMatrix::from_fn(self.d, self.n, |i, j| c64(x[i * self.n + j], x[dn + i * self.n + j]));
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            None
        } else {
            Some(psi / real(norm))
        }
    }

    /// Maximally entangled `ψ̄_{min(d,n)}` in coordinates.
    fn canonical_start(&self) -> Vec<f64> {
        let k = self.d.min(self.n);
        let mut x = vec![0.0; self.dim()];
        for i in 0..k {
            x[i * self.n + i] = 1.0 / (k as f64).sqrt();
        }
        x
    }

    /// Nonzero spectra of `(id_d ⊗ N)(ψψ*)` and `(id_d ⊗ tr)(ψψ*)`.
    fn spectra(&self, psi: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
        let rows = self.d * self.m;
        let mut v = ComplexMatrix::zeros(rows, self.kraus_t.len());
        for (c, kt) in self.kraus_t.iter().enumerate() {
            let w = psi * kt;
            for i in 0..self.d {
                for r in 0..self.m {
                    v[(i * self.m + r, c)] = w[(i, r)];
                }
            }
        }
        let gram = if rows <= v.ncols() { &v * v.adjoint() } else { v.adjoint() * &v };
        let out = eigenvalues_unchecked(&((&gram + gram.adjoint()) * real(0.5)));
        let marg = psi * psi.adjoint();
        let marg = eigenvalues_unchecked(&((&marg + marg.adjoint()) * real(0.5)));
        (out.eigenvalues().to_vec(), marg.eigenvalues().to_vec())
    }

    fn witness(&self, psi: &ComplexMatrix) -> Result<PureStateVector> {
        let amps = ComplexVector::from_iterator(self.d * self.n, psi.transpose().iter().copied());
        PureStateVector::normalized(vec![self.d, self.n], amps)
    }

    fn maximize<F>(&self, f: F, options: &OptimizerOptions) -> Result<OptimizationReport>
    where
        F: Fn(&ComplexMatrix) -> f64 + Sync,
    {
        let objective = |x: &[f64]| match self.state(x) {
            Some(psi) => -f(&psi),
            None => f64::INFINITY,
        };
        let start = self.canonical_start();
        let run = multistart_minimize(&objective, self.dim(), &[start], options);
        let psi = self.state(&run.best.x).ok_or(Error::NonFinite(f64::NAN))?;
        let value = f(&psi);
        if !value.is_finite() {
            return Err(Error::NonFinite(value));
        }
        Ok(OptimizationReport {
            value,
            kind: BoundKind::LowerBound,
            witness: Witness::State(self.witness(&psi)?),
            canonical_value: Some(-run.seeded_values[0]),
            restart_values: run.restart_values.iter().map(|v| -v).collect(),
            restarts_used: run.restart_values.len(),
            converged: run.best.converged,
            iterations: run.total_iterations,
        })
    }
}

/// `‖N‖_d` in `S_p`: the supremum over unit `ψ ∈ C^d ⊗ C^n` of
/// `‖(id_d ⊗ N)(ψψ*)‖_p / ‖(id_d ⊗ tr)(ψψ*)‖_p`.
///
/// The maximally entangled state is always one of the starting points and
/// its value is reported as `canonical_value`.
pub fn channel_d_norm(ch: &QuantumChannel, d: usize, p: Exponent, options: &OptimizerOptions) -> Result<OptimizationReport> {
    let problem = PureStateProblem::new(ch, d)?;
    problem.maximize(
        |psi| {
            let (out, marg) = problem.spectra(psi);
            lp_norm(out, p) / lp_norm(marg, p)
        },
        options,
    )
}

/// The d-norm ratio at one state; `psi` is a unit vector in `C^d ⊗ C^n`.
pub fn d_norm_ratio(ch: &QuantumChannel, psi: &PureStateVector, p: Exponent) -> Result<f64> {
    let n = ch.in_dim();
    if !psi.dim().is_multiple_of(n) {
        return Err(Error::DimensionMismatch("state does not factor through the channel input".into()));
    }
    let d = psi.dim() / n;
    let problem = PureStateProblem::new(ch, d)?;
    let coeffs = ComplexMatrix::from_row_iterator(d, n, psi.amplitudes().iter().copied());
    let (out, marg) = problem.spectra(&coeffs);
    Ok(lp_norm(out, p) / lp_norm(marg, p))
}

/// `S_d(N) = sup_ψ [S((id_d ⊗ tr)(ψψ*)) - S((id_d ⊗ N)(ψψ*))]` in nats.
pub fn s_d(ch: &QuantumChannel, d: usize, options: &OptimizerOptions) -> Result<OptimizationReport> {
    let problem = PureStateProblem::new(ch, d)?;
    let entropy = |v: &[f64]| v.iter().map(|&l| eta_ln(l)).sum::<f64>();
    problem.maximize(
        |psi| {
            let (out, marg) = problem.spectra(psi);
            entropy(&marg) - entropy(&out)
        },
        options,
    )
}

/// `V_d(N) = S_d(N) + H(μ)` for a channel with output blocks of weights `μ_j`.
///
/// The output entropy splits as `H(μ) + Σ μ_j S(N_j(ρ))`, so the two suprema differ by the constant `H(μ)`.
pub fn v_d(ch: &QuantumChannel, d: usize, options: &OptimizerOptions) -> Result<OptimizationReport> {
    let h = block_entropy(ch)?;
    let mut rep = s_d(ch, d, options)?;
    rep.value += h;
    rep.canonical_value = rep.canonical_value.map(|v| v + h);
    for v in rep.restart_values.iter_mut() {
        *v += h;
    }
    Ok(rep)
}

/// `H(μ)` in nats for the block weights of a channel.
pub fn block_entropy(ch: &QuantumChannel) -> Result<f64> {
    let w: Vec<f64> = ch.out_blocks().iter().map(|b| b.weight).collect();
    Ok(ProbabilityVector::new(w)?.entropy(crate::entropy::Base::Nats))
}

/// `F(ρ, p) = (1 - ‖ρ‖_p)/(p - 1)`, which tends to `S(ρ)` in nats as `p → 1`.
pub fn entropy_quotient_f(rho: &ComplexMatrix, p: f64) -> Result<f64> {
    if p == 1.0 {
        return Err(Error::InvalidParameter(
            "F(ρ, p) is undefined at p = 1; use the von Neumann entropy".into(),
        ));
    }
    let e = Exponent::new(p)?;
    let norm = crate::linalg::schatten_norm_hermitian(rho, e)?;
    Ok((1.0 - norm) / (p - 1.0))
}

/// Steps used by [`derivative_at_one`].
pub const DERIVATIVE_STEPS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];

/// One-sided derivative at `p = 1` by forward differences with two Richardson levels.
pub fn derivative_at_one<F>(mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f1 = f(1.0)?;
    if !f1.is_finite() {
        return Err(Error::NonFinite(1.0));
    }
    let mut diffs = [0.0; 3];
    for (slot, &h) in diffs.iter_mut().zip(&DERIVATIVE_STEPS) {
        let v = f(1.0 + h)?;
        if !v.is_finite() {
            return Err(Error::NonFinite(1.0 + h));
        }
        *slot = (v - f1) / h;
    }
    let r1a = 2.0 * diffs[1] - diffs[0];
    let r1b = 2.0 * diffs[2] - diffs[1];
    Ok((4.0 * r1b - r1a) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, erasure, identity_channel};
    use crate::entropy::{von_neumann_entropy, Base};
    use crate::linalg::{identity, random_density, random_pure_state};
    use crate::weyl::max_entangled_vector;

    fn e(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    fn quick() -> OptimizerOptions {
        OptimizerOptions {
            restarts: 4,
            ..Default::default()
        }
    }

    #[test]
    fn spec_derived_quantities() {
        let s = MixedNormSpec::new(e(2.0), e(4.0), 2, 2);
        assert!((s.r_inv() - 0.25).abs() < 1e-14);
        assert_eq!(s.normalization_exponent(), Exponent::Finite(8.0));
        assert_eq!(MixedNormSpec::new(Exponent::ONE, Exponent::ONE, 1, 1).normalization_exponent(), Exponent::Infinity);
        assert_eq!(s.outer_conjugate(), e(2.0));
    }

    #[test]
    fn equal_exponents_are_exact() {
        let x = random_density(6, 6, 1).unwrap();
        let r = mixed_norm_positive(&x, &MixedNormSpec::new(e(3.0), e(3.0), 2, 3), &quick()).unwrap();
        assert_eq!(r.kind, BoundKind::Exact);
        assert_eq!(r.value, schatten_norm(&x, e(3.0)));
    }

    #[test]
    fn inner_trace_class_reduces_to_partial_trace() {
        let x = random_density(6, 4, 2).unwrap();
        for p in [1.5, 2.0, 4.0] {
            let r = mixed_norm_positive(&x, &MixedNormSpec::new(e(p), Exponent::ONE, 2, 3), &quick()).unwrap();
            let y = partial_trace(&x, &[2, 3], &[0]).unwrap();
            let expect = schatten_norm(&y, e(p));
            assert_eq!(r.kind, BoundKind::LowerBound);
            assert!((r.value - expect).abs() <= 1e-6 * expect, "{} vs {}", r.value, expect);
            assert!(r.restart_values.iter().all(|&v| v <= r.value + 1e-12));
            if let Witness::Matrix(a) = &r.witness {
                let n = schatten_norm(a, MixedNormSpec::new(e(p), Exponent::ONE, 2, 3).normalization_exponent());
                assert!((n - 1.0).abs() < 1e-10);
            } else {
                panic!("expected a matrix witness");
            }
        }
    }

    #[test]
    fn maximally_entangled_state_in_sp_s1() {
        for d in 2..=3 {
            let v = max_entangled_vector(d);
            let x = &v * v.adjoint();
            for p in [2.0, 3.0] {
                let r = mixed_norm_positive(&x, &MixedNormSpec::new(e(p), Exponent::ONE, d, d), &quick()).unwrap();
                let expect = (d as f64).powf(1.0 / p - 1.0);
                assert!((r.value - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn infimum_form_is_an_upper_bound() {
        // For product states X = ρ ⊗ σ the norm is ‖ρ‖_p ‖σ‖_q.
        let rho = random_density(2, 2, 3).unwrap();
        let sigma = random_density(2, 2, 4).unwrap();
        let x = crate::linalg::kron(&rho, &sigma);
        let r = mixed_norm_positive(&x, &MixedNormSpec::new(e(1.0), e(2.0), 2, 2), &quick()).unwrap();
        assert_eq!(r.kind, BoundKind::UpperBound);
        let expect = schatten_norm(&rho, e(1.0)) * schatten_norm(&sigma, e(2.0));
        assert!(r.value >= expect - 1e-9);
        assert!(r.value <= expect + 1e-6, "{} vs {}", r.value, expect);
    }

    #[test]
    fn non_psd_input_is_rejected() {
        let x = -identity(4);
        assert!(matches!(
            mixed_norm_positive(&x, &MixedNormSpec::new(e(2.0), e(1.0), 2, 2), &quick()),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn identity_channel_d_norm() {
        for (n, d) in [(2, 1), (2, 2), (3, 2)] {
            let ch = identity_channel(n).unwrap();
            for p in [1.5, 2.0, 4.0] {
                let r = channel_d_norm(&ch, d, e(p), &quick()).unwrap();
                let expect = (d as f64).powf(1.0 - 1.0 / p);
                assert!((r.canonical_value.unwrap() - expect).abs() < 1e-12);
                assert!(r.value <= expect + 1e-9);
                assert!((r.value - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn trace_norm_of_any_channel_is_one() {
        let ch = erasure(2, 0.3).unwrap();
        let r = channel_d_norm(&ch, 2, Exponent::ONE, &quick()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn depolarizing_witness_value() {
        let ch = depolarizing(2, 0.5).unwrap();
        let r = channel_d_norm(&ch, 2, e(2.0), &OptimizerOptions::default()).unwrap();
        let closed = 0.875_f64.sqrt();
        assert!((r.canonical_value.unwrap() - closed).abs() < 1e-12);
        assert!(r.value <= closed + 1e-8);
        assert!(r.best_restart().unwrap() >= closed - 1e-6);
        if let Witness::State(s) = &r.witness {
            assert!((s.amplitudes().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn d_one_is_the_plain_norm_on_states() {
        let ch = depolarizing(3, 0.4).unwrap();
        let r = channel_d_norm(&ch, 1, e(2.0), &quick()).unwrap();
        // Pure inputs are optimal: ‖λ|ψ><ψ| + (1-λ)I/3‖_2.
        let l: f64 = 0.4;
        let top = l + (1.0 - l) / 3.0;
        let expect = (top * top + 2.0 * ((1.0 - l) / 3.0).powi(2)).sqrt();
        assert!((r.value - expect).abs() < 1e-6);
        let psi = random_pure_state(&[1, 3], 4);
        assert!(d_norm_ratio(&ch, &psi, e(2.0)).unwrap() <= r.value + 1e-12);
    }

    #[test]
    fn s_d_examples() {
        let id = identity_channel(2).unwrap();
        let r = s_d(&id, 2, &quick()).unwrap();
        assert!((r.value - 2.0_f64.ln()).abs() < 1e-9);
        let dep0 = depolarizing(2, 0.0).unwrap();
        let r = s_d(&dep0, 2, &quick()).unwrap();
        assert!((r.value + 2.0_f64.ln()).abs() < 1e-9);
        let l = 0.6;
        let r = s_d(&erasure(2, l).unwrap(), 2, &quick()).unwrap();
        let h = crate::entropy::binary_entropy(l, Base::Nats);
        assert!((r.value - (l * 2.0_f64.ln() - h)).abs() < 1e-9);
        let v = v_d(&erasure(2, l).unwrap(), 2, &quick()).unwrap();
        assert!((v.value - l * 2.0_f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn entropy_quotient() {
        let pure = random_pure_state(&[3], 1).projector();
        assert!(entropy_quotient_f(&pure, 2.0).unwrap().abs() < 1e-12);
        let n = 4.0;
        let mixed = identity(4) / real(n);
        assert!((entropy_quotient_f(&mixed, 2.0).unwrap() - (1.0 - n.powf(-0.5))).abs() < 1e-14);
        let rho = random_density(5, 5, 9).unwrap();
        let s = von_neumann_entropy(&rho, Base::Nats).unwrap();
        assert!((entropy_quotient_f(&rho, 1.0 + 1e-6).unwrap() - s).abs() <= 1e-4);
        assert!(entropy_quotient_f(&rho, 1.0).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert!((derivative_at_one(Ok).unwrap() - 1.0).abs() < 1e-8);
        let rho = random_density(4, 4, 2).unwrap();
        let s = von_neumann_entropy(&rho, Base::Nats).unwrap();
        let der = derivative_at_one(|p| crate::linalg::schatten_norm_hermitian(&rho, Exponent::new(p)?)).unwrap();
        assert!((der + s).abs() < 1e-4);
        let d: f64 = 3.0;
        let der = derivative_at_one(|p| Ok(d.powf(1.0 - 1.0 / p))).unwrap();
        assert!((der - d.ln()).abs() < 1e-4);
        assert!(matches!(derivative_at_one(|_| Ok(f64::NAN)), Err(Error::NonFinite(_))));
    }
}
