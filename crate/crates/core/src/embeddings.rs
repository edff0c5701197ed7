//! Teleportation and superdense-coding embeddings between Schatten classes.
//!
//! Classical factors `ℓ_p^m` are stored as diagonal `m × m` blocks. The
//! teleportation targets put the classical index first, so `J(ρ)` lives on
//! `C^{n²} ⊗ C^n` with the Weyl index `(k, l)` at position `(k-1)n + (l-1)`.
//! [`EmbeddingPair::mixed_layout`] reorders an image so that the factor
//! carrying the outer norm comes first, as expected by the mixed-norm
//! routines.

use num_integer::Integer;
use rand::Rng;

use crate::channels::{theta_map, LinearMatrixMap};
use crate::error::{Error, Result};
use crate::linalg::{
    gaussian_matrix, identity, kron, lp_norm, matrix_unit, max_abs_diff, permute_factors, real, schatten_norm,
    seeded_rng, ComplexMatrix, Exponent,
};
use crate::weyl::{eta_basis, shift_ops};

/// Shape of the input space, used to draw probes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputKind {
    /// Full `n × n` matrices.
    Matrix(usize),
    /// Diagonal matrices standing for `ℓ^m`.
    Diagonal(usize),
    /// Block-diagonal matrices `x_1 ⊕ ... ⊕ x_k`.
    BlockDiagonal(Vec<usize>),
}

impl InputKind {
    pub fn dim(&self) -> usize {
        match self {
            InputKind::Matrix(n) | InputKind::Diagonal(n) => *n,
            InputKind::BlockDiagonal(dims) => dims.iter().sum(),
        }
    }

    /// Random complex Gaussian element of the input space.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ComplexMatrix {
        match self {
            InputKind::Matrix(n) => gaussian_matrix(*n, *n, rng),
            InputKind::Diagonal(n) => {
                let g = gaussian_matrix(*n, 1, rng);
                ComplexMatrix::from_diagonal(&g.column(0).into_owned())
            }
            InputKind::BlockDiagonal(dims) => block_diag(&dims.iter().map(|&d| gaussian_matrix(d, d, rng)).collect::<Vec<_>>()),
        }
    }
}

/// Block-diagonal matrix from square blocks.
pub fn block_diag(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let total: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = ComplexMatrix::zeros(total, total);
    let mut o = 0;
    for b in blocks {
        out.view_mut((o, o), b.shape()).copy_from(b);
        o += b.nrows();
    }
    out
}

/// Factor layout of an embedding's target space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetLayout {
    /// Dimension of the factor whose norm is outermost.
    pub outer_dim: usize,
    /// Dimension of the inner factor.
    pub inner_dim: usize,
    /// Whether the stored image has the inner factor first.
    pub inner_first: bool,
}

/// An embedding, its left inverse and the norm statement they realize.
#[derive(Debug, Clone)]
pub struct EmbeddingPair {
    pub embed: LinearMatrixMap,
    pub project: LinearMatrixMap,
    pub dims: Vec<usize>,
    pub p: Exponent,
    pub q: Exponent,
    /// Positive factors `(c_embed, c_project)` with `embed = c_embed · E`,
    /// `project = c_project · P` for completely positive `E`, `P`.
    pub scale: (f64, f64),
    pub input: InputKind,
    pub layout: TargetLayout,
    pub claimed_contract: String,
}

impl EmbeddingPair {
    /// Reorders an image so the outer factor comes first; returns `(matrix, outer, inner)`.
    pub fn mixed_layout(&self, y: &ComplexMatrix) -> Result<(ComplexMatrix, usize, usize)> {
        let TargetLayout {
            outer_dim,
            inner_dim,
            inner_first,
        } = self.layout;
        let m = if inner_first {
            permute_factors(y, &[inner_dim, outer_dim], &[1, 0])?
        } else {
            y.clone()
        };
        Ok((m, outer_dim, inner_dim))
    }

    /// `max ‖project(embed(x)) - x‖_max` over random probes.
    pub fn complementation_residual(&self, trials: usize, seed: u64) -> Result<f64> {
        let mut rng = seeded_rng(seed);
        let mut worst = 0.0_f64;
        for _ in 0..trials {
            let x = self.input.sample(&mut rng);
            let back = self.project.apply(&self.embed.apply(&x)?)?;
            worst = worst.max(max_abs_diff(&back, &x));
        }
        Ok(worst)
    }

    /// Smallest Choi eigenvalues of the unscaled embedding and projection.
    pub fn min_choi_eigenvalues(&self) -> Result<(f64, f64)> {
        let e = self.embed.scaled(1.0 / self.scale.0).min_choi_eigenvalue()?;
        let p = self.project.scaled(1.0 / self.scale.1).min_choi_eigenvalue()?;
        Ok((e, p))
    }
}

fn check_direction(p: Exponent, q: Exponent) -> Result<()> {
    if p.inv() < q.inv() {
        return Err(Error::DualDirection {
            p: p.value(),
            q: q.value(),
        });
    }
    Ok(())
}

/// Column vector `e_i` of length `n` as a matrix.
fn ket(n: usize, i: usize) -> ComplexMatrix {
    matrix_unit(n, 1, i, 0)
}

/// Unscaled `J(ρ) = (1/n) Σ e_{kl} ⊗ T ρ T†` on `C^{n²} ⊗ C^n`.
pub fn teleport_embedding(n: usize) -> Result<LinearMatrixMap> {
    let ts = shift_ops(n)?;
    let c = real(1.0 / (n as f64).sqrt());
    let terms = ts
        .iter()
        .enumerate()
        .map(|(a, t)| {
            let m = kron(&ket(n * n, a), t) * c;
            (m.clone(), m)
        })
        .collect();
    LinearMatrixMap::new(n, n * n * n, terms)
}

/// Unscaled `W(Σ e_{kl} ⊗ A_{kl}) = (1/n) Σ T† A_{kl} T`.
pub fn teleport_projection(n: usize) -> Result<LinearMatrixMap> {
    let ts = shift_ops(n)?;
    let c = real(1.0 / (n as f64).sqrt());
    let terms = ts
        .iter()
        .enumerate()
        .map(|(a, t)| {
            let m = t.adjoint() * kron(&ket(n * n, a).transpose(), &identity(n)) * c;
            (m.clone(), m)
        })
        .collect();
    LinearMatrixMap::new(n * n * n, n, terms)
}

/// `J_{p,q} = n^{1-1/p-1/q} J` and `W_{p,q} = n^{1/p+1/q-1} W`, for `p <= q`.
pub fn teleport_pair(n: usize, p: Exponent, q: Exponent) -> Result<EmbeddingPair> {
    check_direction(p, q)?;
    let s = (n as f64).powf(1.0 - p.inv() - q.inv());
    Ok(EmbeddingPair {
        embed: teleport_embedding(n)?.scaled(s),
        project: teleport_projection(n)?.scaled(1.0 / s),
        dims: vec![n],
        p,
        q,
        scale: (s, 1.0 / s),
        input: InputKind::Matrix(n),
        layout: TargetLayout {
            outer_dim: n,
            inner_dim: n * n,
            inner_first: true,
        },
        claimed_contract: format!(
            "S_{p}^{n} -> S_{q}^{n}(l_{p}^{}) complete isometry, W∘J = id",
            n * n
        ),
    })
}

/// `i(e_{kl}) = |η_{kl}⟩⟨η_{kl}|` and `P(ρ) = Σ ⟨η_{kl}|ρ|η_{kl}⟩ e_{kl}`.
pub fn orthogonal_pair(n: usize) -> Result<(LinearMatrixMap, LinearMatrixMap)> {
    let basis = eta_basis(n)?;
    let nn = n * n;
    let mut i_terms = Vec::with_capacity(nn);
    let mut p_terms = Vec::with_capacity(nn);
    for (a, v) in basis.vectors().iter().enumerate() {
        let col = ComplexMatrix::from_column_slice(nn, 1, v.as_slice());
        let m = &col * ket(nn, a).transpose();
        p_terms.push((m.adjoint(), m.adjoint()));
        i_terms.push((m.clone(), m));
    }
    Ok((LinearMatrixMap::new(nn, nn, i_terms)?, LinearMatrixMap::new(nn, nn, p_terms)?))
}

/// `H_{p,q} = n^{1/p-1-1/q} H` with `H(e_{kl}) = n |η_{kl}⟩⟨η_{kl}|`, and
/// `Q_{p,q} = n^{1-1/p+1/q} Q` with `Q(ρ) = (1/n) Σ ⟨η_{kl}|ρ|η_{kl}⟩ e_{kl}`.
pub fn superdense_pair(n: usize, p: Exponent, q: Exponent) -> Result<EmbeddingPair> {
    check_direction(p, q)?;
    let (i, pr) = orthogonal_pair(n)?;
    let s = (n as f64).powf(p.inv() - 1.0 - q.inv());
    let nf = n as f64;
    Ok(EmbeddingPair {
        embed: i.scaled(nf * s),
        project: pr.scaled(1.0 / (nf * s)),
        dims: vec![n],
        p,
        q,
        scale: (nf * s, 1.0 / (nf * s)),
        input: InputKind::Diagonal(n * n),
        layout: TargetLayout {
            outer_dim: n,
            inner_dim: n,
            inner_first: false,
        },
        claimed_contract: format!("l_{p}^{} -> S_{q}^{n}(S_{p}^{n}) complete isometry, Q∘H = id", n * n),
    })
}

/// `J̃_{p,q}` and `Γ_{p,q}` for `S_p^{n_1} ⊕_p ... ⊕_p S_p^{n_k}`, with `d = lcm(n_i)`.
///
/// Block `i` of the image is `d^{-1/q} n_i^{-1/p} Σ e_{kl} ⊗ T ρ_i T† ⊗ I_{d/n_i}`
/// on `C^{n_i²} ⊗ C^{n_i} ⊗ C^{d/n_i}`; the classical blocks are stacked in
/// order, so the target is `C^{Σ n_i²} ⊗ C^d`. The projection traces out the
/// multiplicity factor and undoes the twirl.
pub fn direct_sum_pair(dims: &[usize], p: Exponent, q: Exponent) -> Result<EmbeddingPair> {
    check_direction(p, q)?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidParameter("direct sum needs nonempty positive dimensions".into()));
    }
    let d = dims.iter().fold(1usize, |acc, &n| acc.lcm(&n));
    let in_total: usize = dims.iter().sum();
    let classical: usize = dims.iter().map(|n| n * n).sum();
    let out_total = classical * d;
    let df = d as f64;
    let mut e_terms = Vec::new();
    let mut p_terms = Vec::new();
    let (mut in_off, mut cl_off) = (0, 0);
    for &n in dims {
        let m = d / n;
        let nf = n as f64;
        let ce = df.powf(-q.inv()) * nf.powf(-p.inv());
        let cp = df.powf(-(1.0 - q.inv())) * nf.powf(-(1.0 - p.inv()));
        // Selects block i of the input.
        let select = ComplexMatrix::from_fn(n, in_total, |r, c| real(if c == in_off + r { 1.0 } else { 0.0 }));
        for (a, t) in shift_ops(n)?.iter().enumerate() {
            for j in 0..m {
                let lift = kron(&kron(&ket(classical, cl_off + a), t), &ket(m, j));
                let ea = &lift * &select * real(ce.sqrt());
                e_terms.push((ea.clone(), ea));
                let pa = select.transpose() * lift.adjoint() * real(cp.sqrt());
                p_terms.push((pa.clone(), pa));
            }
        }
        in_off += n;
        cl_off += n * n;
    }
    let unit_e = df.powf(-q.inv());
    let unit_p = df.powf(-(1.0 - q.inv()));
    Ok(EmbeddingPair {
        embed: LinearMatrixMap::new(in_total, out_total, e_terms)?,
        project: LinearMatrixMap::new(out_total, in_total, p_terms)?,
        dims: dims.to_vec(),
        p,
        q,
        // Block factors differ; rescaling by the `d`-part alone keeps every term's sign.
        scale: (unit_e, unit_p),
        input: InputKind::BlockDiagonal(dims.to_vec()),
        layout: TargetLayout {
            outer_dim: d,
            inner_dim: classical,
            inner_first: true,
        },
        claimed_contract: format!("⊕_p S_p^{dims:?} -> S_{q}^{d}(l_{p}^{classical}) complete isometry, Γ∘J̃ = id"),
    })
}

/// Coefficient matrix of `Ψ_{α,β,δ}: ℓ_1^{d²} → ℓ^{d²} ⊕ ℓ^{d²}`.
fn psi_coefficients(d: usize, alpha: f64, beta: f64, delta: f64) -> nalgebra::DMatrix<f64> {
    let dd = d * d;
    nalgebra::DMatrix::from_fn(2 * dd, dd, |r, c| {
        if r < dd {
            beta + if r == c { alpha } else { 0.0 }
        } else {
            delta
        }
    })
}

/// `Ψ(Σ a_{ij} e_{ij}) = α Σ a_{ij} e_{ij;1} + β (Σ a_{ij}) Σ e_{ij;1} + δ (Σ a_{ij}) Σ e_{ij;2}`,
/// acting on diagonal `d² × d²` matrices.
pub fn psi_map(d: usize, alpha: f64, beta: f64, delta: f64) -> Result<LinearMatrixMap> {
    let coeff = psi_coefficients(d, alpha, beta, delta);
    let (rows, cols) = coeff.shape();
    let mut terms = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = coeff[(r, c)];
            if v != 0.0 {
                let a = matrix_unit(rows, cols, r, c) * real(v.abs().sqrt());
                let b = &a * real(v.signum());
                terms.push((a, b));
            }
        }
    }
    LinearMatrixMap::new(cols, rows, terms)
}

/// `(|α+β|^p + (d²-1)|β|^p + d²|δ|^p)^{1/p}`, the norm of `Ψ` from `ℓ_1` to `ℓ_p ⊕_p ℓ_p`.
pub fn psi_norm(d: usize, alpha: f64, beta: f64, delta: f64, p: Exponent) -> f64 {
    let dd = (d * d) as f64;
    match p {
        Exponent::Infinity => (alpha + beta)
            .abs()
            .max(if d > 1 { beta.abs() } else { 0.0 })
            .max(delta.abs()),
        Exponent::Finite(p) => {
            let first = (alpha + beta).abs().powf(p);
            let rest = if d > 1 { (dd - 1.0) * beta.abs().powf(p) } else { 0.0 };
            (first + rest + dd * delta.abs().powf(p)).powf(1.0 / p)
        }
    }
}

/// `max_{ij} ‖Ψ(e_{ij})‖_p`, evaluated by applying [`psi_map`] to every basis vector.
///
/// The `ℓ_1` unit ball is the convex hull of `±e_{ij}`, so this is the norm of `Ψ`.
pub fn psi_norm_by_basis(d: usize, alpha: f64, beta: f64, delta: f64, p: Exponent) -> Result<f64> {
    let map = psi_map(d, alpha, beta, delta)?;
    let dd = d * d;
    let mut best = 0.0_f64;
    for a in 0..dd {
        let image = map.apply(&matrix_unit(dd, dd, a, a))?;
        best = best.max(lp_norm(image.diagonal().iter().map(|z| z.norm()), p));
    }
    Ok(best)
}

/// Parameters `(α, β, δ)` of the factorization of `θ_λ^{d,p}`.
pub fn factorization_parameters(n: usize, d: usize, lambda: f64, p: Exponent) -> (f64, f64, f64) {
    let df = d as f64;
    let alpha = lambda * df.powf(1.0 - p.inv());
    let beta = (1.0 - lambda) / (df.powf(p.inv()) * n as f64);
    let delta = beta * ((n - d) as f64 / df).powf(p.inv());
    (alpha, beta, delta)
}

/// `max ‖((Ψ ⊗ id_d) ∘ j_1)(ρ) - (J̃_p ∘ θ_λ^{d,p})(ρ)‖_2` over random probes.
pub fn factorization_residual(n: usize, d: usize, lambda: f64, p: Exponent, probes: usize, seed: u64) -> Result<f64> {
    let (alpha, beta, delta) = factorization_parameters(n, d, lambda, p);
    let theta = theta_map(n, d, lambda, p.value())?;
    let j1 = teleport_embedding(d)?;
    // Ψ sends diagonal matrices to diagonal matrices and j_1 lands in block-diagonal
    // matrices over the classical index, so Ψ ⊗ id_d acts on the d × d blocks through
    // the coefficients Ψ(e_a) = Σ_b c_{ba} e_b.
    let psi = psi_map(d, alpha, beta, delta)?;
    let (dd, out) = (d * d, psi.out_dim());
    let mut coeff = vec![vec![0.0; dd]; out];
    for a in 0..dd {
        let image = psi.apply(&matrix_unit(dd, dd, a, a))?;
        if image.iter().enumerate().any(|(i, z)| i % (out + 1) != 0 && z.norm() > 0.0) {
            return Err(Error::InvalidParameter("Ψ image is not diagonal".into()));
        }
        for (b, row) in coeff.iter_mut().enumerate() {
            row[a] = image[(b, b)].re;
        }
    }
    let jt = direct_sum_pair(&[d, d], p, Exponent::Infinity)?;
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0_f64;
    for _ in 0..probes {
        let rho = gaussian_matrix(d, d, &mut rng);
        let y = j1.apply(&rho)?;
        let mut lhs = ComplexMatrix::zeros(out * d, out * d);
        for (b, row) in coeff.iter().enumerate() {
            let mut block = lhs.view_mut((b * d, b * d), (d, d));
            for (a, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    block += y.view((a * d, a * d), (d, d)) * real(c);
                }
            }
        }
        let diff = lhs - jt.embed.apply(&theta.apply(&rho)?)?;
        worst = worst.max(schatten_norm(&diff, Exponent::TWO));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_density, schatten_norm_hermitian};

    fn e(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn teleport_complementation() {
        for n in 2..=4 {
            let pair = teleport_pair(n, e(1.0), e(2.0)).unwrap();
            assert!(pair.complementation_residual(20, n as u64).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn teleport_of_identity() {
        let n = 3;
        let j = teleport_embedding(n).unwrap().apply(&identity(n)).unwrap();
        let expect = kron(&identity(n * n), &identity(n)) / real(n as f64);
        assert!(max_abs_diff(&j, &expect) < 1e-15);
        assert!((schatten_norm(&j, Exponent::Infinity) - 1.0 / n as f64).abs() < 1e-15);
    }

    #[test]
    fn teleport_hilbert_schmidt_isometry() {
        let pair = teleport_pair(2, e(2.0), e(2.0)).unwrap();
        for seed in 0..5 {
            let rho = random_density(2, 2, seed).unwrap();
            let image = pair.embed.apply(&rho).unwrap();
            let a = schatten_norm(&image, Exponent::TWO);
            assert!((a - schatten_norm(&rho, Exponent::TWO)).abs() < 1e-12);
        }
    }

    #[test]
    fn wrong_direction_is_rejected() {
        assert!(matches!(
            teleport_pair(2, e(2.0), e(1.0)),
            Err(Error::DualDirection { .. })
        ));
        assert!(superdense_pair(2, Exponent::Infinity, e(2.0)).is_err());
        assert!(direct_sum_pair(&[], e(1.0), e(1.0)).is_err());
    }

    #[test]
    fn superdense_complementation_on_basis() {
        for n in 1..=4 {
            let pair = superdense_pair(n, e(1.0), e(2.0)).unwrap();
            let nn = n * n;
            for a in 0..nn {
                let x = matrix_unit(nn, nn, a, a);
                let back = pair.project.apply(&pair.embed.apply(&x).unwrap()).unwrap();
                assert!(max_abs_diff(&back, &x) <= 1e-12);
            }
            assert!(pair.complementation_residual(10, 3).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn superdense_unit_and_isometry() {
        let n = 3;
        let (i, _) = orthogonal_pair(n).unwrap();
        let h1 = i.apply(&identity(n * n)).unwrap() * real(n as f64);
        assert!(max_abs_diff(&h1, &(identity(n * n) * real(n as f64))) < 1e-12);
        let pair = superdense_pair(n, e(2.0), e(2.0)).unwrap();
        let x = InputKind::Diagonal(n * n).sample(&mut seeded_rng(3));
        let y = pair.embed.apply(&x).unwrap();
        assert!((schatten_norm(&y, Exponent::TWO) - schatten_norm(&x, Exponent::TWO)).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_pair_properties() {
        let (i, p) = orthogonal_pair(3).unwrap();
        for a in 0..9 {
            let img = i.apply(&matrix_unit(9, 9, a, a)).unwrap();
            assert!(max_abs_diff(&(&img * &img), &img) < 1e-12);
            assert!(max_abs_diff(&p.apply(&img).unwrap(), &matrix_unit(9, 9, a, a)) < 1e-12);
        }
    }

    #[test]
    fn direct_sum_complementation() {
        let pair = direct_sum_pair(&[2, 3], e(1.0), e(1.0)).unwrap();
        assert_eq!(pair.layout.outer_dim, 6);
        assert!(pair.complementation_residual(20, 1).unwrap() <= 1e-12);
        let pair = direct_sum_pair(&[2, 4], e(2.0), Exponent::Infinity).unwrap();
        assert!(pair.complementation_residual(20, 2).unwrap() <= 1e-12);
    }

    #[test]
    fn single_block_matches_teleportation() {
        for (p, q) in [(1.0, 1.0), (1.0, 2.0), (2.0, 4.0)] {
            let a = direct_sum_pair(&[3], e(p), e(q)).unwrap();
            let b = teleport_pair(3, e(p), e(q)).unwrap();
            let x = gaussian_matrix(3, 3, &mut seeded_rng(5));
            assert!(max_abs_diff(&a.embed.apply(&x).unwrap(), &b.embed.apply(&x).unwrap()) <= 1e-12);
        }
    }

    #[test]
    fn equal_blocks_use_plain_teleportation() {
        let pair = direct_sum_pair(&[2, 2], e(1.0), e(1.0)).unwrap();
        assert_eq!(pair.layout.outer_dim, 2);
        let x = InputKind::BlockDiagonal(vec![2, 2]).sample(&mut seeded_rng(1));
        let y = pair.embed.apply(&x).unwrap();
        let t = teleport_pair(2, e(1.0), e(1.0)).unwrap();
        let first = t.embed.apply(&x.view((0, 0), (2, 2)).into_owned()).unwrap();
        assert!(max_abs_diff(&y.view((0, 0), (8, 8)).into_owned(), &first) <= 1e-12);
    }

    #[test]
    fn unscaled_maps_are_cp() {
        for pair in [
            teleport_pair(3, e(1.0), e(2.0)).unwrap(),
            superdense_pair(3, e(1.0), e(2.0)).unwrap(),
            direct_sum_pair(&[2, 3], e(1.0), e(2.0)).unwrap(),
        ] {
            let (a, b) = pair.min_choi_eigenvalues().unwrap();
            assert!(a >= -1e-10 && b >= -1e-10);
        }
    }

    #[test]
    fn psi_norm_examples() {
        assert!((psi_norm(3, 1.0, 0.0, 0.0, e(2.0)) - 1.0).abs() < 1e-15);
        assert!((psi_norm(3, 0.0, 1.0, 0.0, e(1.0)) - 9.0).abs() < 1e-12);
        // |1+1|² + 3·1 + 4·1 = 11.
        let v = psi_norm(2, 1.0, 1.0, 1.0, e(2.0));
        assert!((v - 11.0_f64.sqrt()).abs() < 1e-14);
        assert!((psi_norm_by_basis(2, 1.0, 1.0, 1.0, e(2.0)).unwrap() - v).abs() < 1e-14);
    }

    #[test]
    fn factorization_identity() {
        assert!(factorization_residual(4, 2, 0.5, e(2.0), 20, 1).unwrap() <= 1e-12);
        assert!(factorization_residual(3, 3, 0.3, e(1.0), 10, 2).unwrap() <= 1e-12);
        assert!(factorization_residual(6, 3, 1.0, e(4.0), 10, 3).unwrap() <= 1e-12);
    }

    #[test]
    fn mixed_layout_puts_quantum_factor_first() {
        let pair = teleport_pair(2, e(1.0), e(1.0)).unwrap();
        let y = pair.embed.apply(&random_density(2, 2, 1).unwrap()).unwrap();
        let (m, outer, inner) = pair.mixed_layout(&y).unwrap();
        assert_eq!((outer, inner), (2, 4));
        let reduced = crate::linalg::partial_trace(&m, &[2, 4], &[0]).unwrap();
        assert!((schatten_norm_hermitian(&reduced, Exponent::ONE).unwrap() - 1.0).abs() < 1e-12);
    }
}
