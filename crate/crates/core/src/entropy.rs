//! Von Neumann and Shannon entropies.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};

/// Logarithm base for entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Base {
    #[default]
    Nats,
    Bits,
}

impl Base {
    /// Converts a value in nats to this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            Base::Nats => nats,
            Base::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn log(self, x: f64) -> f64 {
        self.from_nats(x.ln())
    }
}

/// Eigenvalues in `[-CLAMP_TOL, 0)` are treated as zero.
pub const CLAMP_TOL: f64 = 1e-12;
/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-8;

/// `-x ln x` with `0 ln 0 = 0`.
#[inline]
pub fn eta_ln(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    pub const SUM_TOL: f64 = 1e-12;

    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(&w) = weights.iter().find(|w| **w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidParameter(format!("negative or non-finite weight {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::InvalidParameter(format!("weights sum to {sum}, expected 1")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn entropy(&self, base: Base) -> f64 {
        base.from_nats(self.weights.iter().map(|&w| eta_ln(w)).sum())
    }
}

/// Shannon entropy `H(μ)` of a probability vector.
pub fn shannon_entropy(weights: &[f64], base: Base) -> Result<f64> {
    Ok(ProbabilityVector::new(weights.to_vec())?.entropy(base))
}

/// Binary entropy `H(x, 1 - x)`.
pub fn binary_entropy(x: f64, base: Base) -> f64 {
    base.from_nats(eta_ln(x) + eta_ln(1.0 - x))
}

/// Entropy of a spectrum, with the clamping convention of [`von_neumann_entropy`].
pub fn spectrum_entropy(eigenvalues: &[f64], base: Base) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigenvalues {
        if l < -CLAMP_TOL {
            return Err(Error::NotPositive(l));
        }
        s += eta_ln(l.clamp(0.0, 1.0));
    }
    Ok(base.from_nats(s))
}

/// `S(ρ) = -tr ρ log ρ`.
pub fn von_neumann_entropy(rho: &ComplexMatrix, base: Base) -> Result<f64> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidTrace(tr.re));
    }
    let spec = hermitian_eigenvalues(rho)?;
    spectrum_entropy(spec.eigenvalues(), base)
}
