//! Discrete Weyl operators and the associated Bell-type basis.
//!
//! Public indices are 1-based and read modulo `n` into `1..=n`, so
//! `u_{-k} = u_{n-k}` and `u_0 = u_n = I`. Basis vectors `e_j` are also
//! numbered from 1 in the formulas below; storage is 0-based.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{
    basis_vector, c64, kron, max_abs_diff, outer, real, ComplexMatrix, ComplexVector, PureStateVector,
    C64,
};

/// `exp(2πi m / n)`, reducing `m` modulo `n` first so the angle is exact.
pub fn root_of_unity(n: usize, m: i64) -> C64 {
    let r = m.rem_euclid(n as i64) as f64;
    let (s, c) = (2.0 * PI * r / n as f64).sin_cos();
    c64(c, s)
}

/// A pair `(k, l)` reduced into `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeylIndex {
    pub n: usize,
    pub k: usize,
    pub l: usize,
}

impl WeylIndex {
    pub fn new(n: usize, k: i64, l: i64) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            n,
            k: reduce(n, k),
            l: reduce(n, l),
        })
    }

    /// All `n²` indices, `k` outer and `l` inner.
    pub fn all(n: usize) -> impl Iterator<Item = WeylIndex> {
        (1..=n).flat_map(move |k| (1..=n).map(move |l| WeylIndex { n, k, l }))
    }

    /// Position in [`WeylIndex::all`], `(k - 1) n + (l - 1)`.
    pub fn flat(self) -> usize {
        (self.k - 1) * self.n + (self.l - 1)
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("Weyl operators need n >= 1".into()))
    } else {
        Ok(())
    }
}

/// Reduces `k` into `1..=n`.
pub fn reduce(n: usize, k: i64) -> usize {
    match k.rem_euclid(n as i64) as usize {
        0 => n,
        r => r,
    }
}

/// Diagonal phase operator `u_k e_j = exp(2πi kj/n) e_j`.
pub fn weyl_u(n: usize, k: i64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 1..=n {
        m[(j - 1, j - 1)] = root_of_unity(n, k * j as i64);
    }
    Ok(m)
}

/// Cyclic shift `v_l e_j = e_{l+j}`.
pub fn weyl_v(n: usize, l: i64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 1..=n {
        m[(reduce(n, l + j as i64) - 1, j - 1)] = real(1.0);
    }
    Ok(m)
}

/// `T_{k,l} = v_l u_{-k}`, so `T_{k,l} e_j = exp(-2πi kj/n) e_{l+j}`.
pub fn shift_op(n: usize, k: i64, l: i64) -> Result<ComplexMatrix> {
    check_dim(n)?;
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 1..=n {
        m[(reduce(n, l + j as i64) - 1, j - 1)] = root_of_unity(n, -k * j as i64);
    }
    Ok(m)
}

/// All `T_{k,l}` in [`WeylIndex::all`] order.
pub fn shift_ops(n: usize) -> Result<Vec<ComplexMatrix>> {
    WeylIndex::all(n)
        .map(|ix| shift_op(n, ix.k as i64, ix.l as i64))
        .collect()
}

/// `ψ̄_n = n^{-1/2} Σ e_i ⊗ e_i` as a plain vector.
pub fn max_entangled_vector(n: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(n * n);
    let a = 1.0 / (n as f64).sqrt();
    for i in 0..n {
        v[i * n + i] = real(a);
    }
    v
}

pub fn max_entangled(n: usize) -> Result<PureStateVector> {
    check_dim(n)?;
    PureStateVector::new(vec![n, n], max_entangled_vector(n))
}

/// `η_{k,l} = (u_k ⊗ v_l) ψ̄_n`.
pub fn eta(n: usize, k: i64, l: i64) -> Result<ComplexVector> {
    check_dim(n)?;
    let a = 1.0 / (n as f64).sqrt();
    let mut v = ComplexVector::zeros(n * n);
    for i in 1..=n {
        let target = reduce(n, l + i as i64);
        v[(i - 1) * n + (target - 1)] = root_of_unity(n, k * i as i64) * a;
    }
    Ok(v)
}

/// The orthonormal basis `{η_{k,l}}` of `C^n ⊗ C^n`.
#[derive(Debug, Clone)]
pub struct EtaBasis {
    n: usize,
    vectors: Vec<ComplexVector>,
}

impl EtaBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Vectors in [`WeylIndex::all`] order.
    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn get(&self, k: i64, l: i64) -> &ComplexVector {
        let ix = WeylIndex {
            n: self.n,
            k: reduce(self.n, k),
            l: reduce(self.n, l),
        };
        &self.vectors[ix.flat()]
    }

    /// Matrix whose columns are the basis vectors.
    pub fn as_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.vectors)
    }

    /// `max |<η_a, η_b> - δ_ab|`.
    pub fn gram_residual(&self) -> f64 {
        let m = self.as_matrix();
        let gram = m.adjoint() * &m;
        max_abs_diff(&gram, &ComplexMatrix::identity(gram.nrows(), gram.ncols()))
    }
}

pub fn eta_basis(n: usize) -> Result<EtaBasis> {
    let vectors = WeylIndex::all(n)
        .map(|ix| eta(n, ix.k as i64, ix.l as i64))
        .collect::<Result<Vec<_>>>()?;
    Ok(EtaBasis { n, vectors })
}

/// The map `h ↦ Σ_{k,l} η_{k,l} ⊗ T_{k,l} h`, as an `n³ × n` matrix.
fn teleport_synthesis(n: usize) -> Result<ComplexMatrix> {
    let basis = eta_basis(n)?;
    let mut m = ComplexMatrix::zeros(n * n * n, n);
    for ix in WeylIndex::all(n) {
        let e = ComplexMatrix::from_column_slice(n * n, 1, basis.vectors()[ix.flat()].as_slice());
        m += kron(&e, &shift_op(n, ix.k as i64, ix.l as i64)?);
    }
    Ok(m)
}

/// `‖h ⊗ ψ̄_n - (1/n) Σ η_{k,l} ⊗ T_{k,l} h‖`.
pub fn teleport_identity_residual(n: usize, h: &ComplexVector) -> Result<f64> {
    if h.len() != n {
        return Err(Error::DimensionMismatch(format!("h has length {}, expected {n}", h.len())));
    }
    let lhs = h.kronecker(&max_entangled_vector(n));
    let rhs = teleport_synthesis(n)? * h / real(n as f64);
    Ok((lhs - rhs).norm())
}

/// `max_p |Σ_{k=1}^n exp(2πi kp/n) - n δ_{p,n}|`.
pub fn roots_of_unity_residual(n: usize) -> f64 {
    let mut worst = 0.0_f64;
    for p in 1..=n {
        let s: C64 = (1..=n).map(|k| root_of_unity(n, (k * p) as i64)).sum();
        let expect = if p == n { n as f64 } else { 0.0 };
        worst = worst.max((s - real(expect)).norm());
    }
    worst
}

/// `max_{j,k} ‖e_j ⊗ e_k - n^{-1/2} Σ_s exp(-2πi sj/n) (u_s ⊗ v_{k-j}) ψ̄_n‖`.
pub fn basis_expansion_residual(n: usize) -> Result<f64> {
    let psi = max_entangled_vector(n);
    let a = 1.0 / (n as f64).sqrt();
    let mut worst = 0.0_f64;
    for j in 1..=n {
        for k in 1..=n {
            let lhs = basis_vector(n, j - 1).kronecker(&basis_vector(n, k - 1));
            let mut rhs = ComplexVector::zeros(n * n);
            for s in 1..=n {
                let op = kron(&weyl_u(n, s as i64)?, &weyl_v(n, k as i64 - j as i64)?);
                rhs += op * &psi * (root_of_unity(n, -((s * j) as i64)) * a);
            }
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// `‖(1/n²) Σ T ρ T† - tr(ρ) I/n‖_max`.
pub fn twirl_residual(n: usize, rho: &ComplexMatrix) -> Result<f64> {
    let mut acc = ComplexMatrix::zeros(n, n);
    for t in shift_ops(n)? {
        acc += &t * rho * t.adjoint();
    }
    acc /= real((n * n) as f64);
    let target = ComplexMatrix::identity(n, n) * (rho.trace() / real(n as f64));
    Ok(max_abs_diff(&acc, &target))
}

/// `ρ ⊗ |ψ̄⟩⟨ψ̄| = (1/n²) Σ |η_{k,l}⟩⟨η_{k',l'}| ⊗ T_{k,l} ρ T_{k',l'}†`, entrywise residual.
pub fn bell_decomposition_residual(n: usize, rho: &ComplexMatrix) -> Result<f64> {
    let basis = eta_basis(n)?;
    let ts = shift_ops(n)?;
    let mut rhs = ComplexMatrix::zeros(n * n * n, n * n * n);
    for (a, ea) in basis.vectors().iter().enumerate() {
        let ta_rho = &ts[a] * rho;
        for (b, eb) in basis.vectors().iter().enumerate() {
            rhs += kron(&outer(ea, eb), &(&ta_rho * ts[b].adjoint()));
        }
    }
    rhs /= real((n * n) as f64);
    let psi = max_entangled_vector(n);
    let lhs = kron(rho, &outer(&psi, &psi));
    Ok(max_abs_diff(&lhs, &rhs))
}

/// `max_{p,q} ‖Σ_{k,l} T |p⟩⟨q| T† - δ_{pq} n I‖_max`.
pub fn shift_sum_residual(n: usize) -> Result<f64> {
    let ts = shift_ops(n)?;
    let mut worst = 0.0_f64;
    for p in 0..n {
        for q in 0..n {
            let e = crate::linalg::matrix_unit(n, n, p, q);
            let mut acc = ComplexMatrix::zeros(n, n);
            for t in &ts {
                acc += t * &e * t.adjoint();
            }
            let expect = if p == q { n as f64 } else { 0.0 };
            worst = worst.max(max_abs_diff(&acc, &(ComplexMatrix::identity(n, n) * real(expect))));
        }
    }
    Ok(worst)
}
