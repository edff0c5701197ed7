//! Closed-form d-norms and restricted capacities of the depolarizing and
//! erasure channels, the nonmultiplicativity gap, and entropy inequality checks.
//!
//! Everything is computed in nats and converted at the boundary.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{Family, QuantumChannel};
use crate::entropy::{binary_entropy, eta_ln, Base};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, sample_density, schatten_norm, stream_rng, Exponent, PureStateVector};
use crate::mixed_norms::{channel_d_norm, derivative_at_one, v_d, Witness, DERIVATIVE_STEPS};
use crate::optimize::OptimizerOptions;

pub use crate::entropy::von_neumann_entropy;

fn check(n: usize, d: usize, lambda: f64) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter("n and d must be at least 1".into()));
    }
    if d > n {
        return Err(Error::InvalidParameter(format!("need d <= n, got d = {d}, n = {n}")));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!("λ = {lambda} is outside [0, 1]")));
    }
    Ok(())
}

/// `‖D_λ‖_d` in `S_p`:
/// `((λd + (1-λ)/n)^p / d + ((1-λ)/n)^p (n - 1/d))^{1/p}`.
pub fn dnorm_depolarizing_closed(n: usize, d: usize, lambda: f64, p: Exponent) -> Result<f64> {
    check(n, d, lambda)?;
    let (nf, df) = (n as f64, d as f64);
    let top = lambda * df + (1.0 - lambda) / nf;
    let rest = (1.0 - lambda) / nf;
    let mult = nf - 1.0 / df;
    Ok(match p {
        Exponent::Finite(p) => (top.powf(p) / df + rest.powf(p) * mult).powf(1.0 / p),
        Exponent::Infinity => top.max(if mult > 0.0 { rest } else { 0.0 }),
    })
}

/// `‖E_λ‖_d` in `S_p`: `(λ^p d^{p-1} + (1-λ)^p)^{1/p}`.
pub fn dnorm_erasure_closed(n: usize, d: usize, lambda: f64, p: Exponent) -> Result<f64> {
    check(n, d, lambda)?;
    let df = d as f64;
    let scaled = lambda * df.powf(1.0 - p.inv());
    Ok(match p {
        Exponent::Finite(p) => (scaled.powf(p) + (1.0 - lambda).powf(p)).powf(1.0 / p),
        Exponent::Infinity => scaled.max(1.0 - lambda),
    })
}

/// `μ = λ + (1-λ)/(nd)`.
pub fn mu(n: usize, d: usize, lambda: f64) -> f64 {
    lambda + (1.0 - lambda) / (n * d) as f64
}

/// `C^d_prod(D_λ) = ln(nd) + μ ln μ + (nd - 1) ((1-λ)/(nd)) ln((1-λ)/(nd))`.
pub fn capacity_depolarizing_in(n: usize, d: usize, lambda: f64, base: Base) -> Result<f64> {
    check(n, d, lambda)?;
    let nd = (n * d) as f64;
    let nats = nd.ln() - eta_ln(mu(n, d, lambda)) - (nd - 1.0) * eta_ln((1.0 - lambda) / nd);
    Ok(base.from_nats(nats))
}

pub fn capacity_depolarizing(n: usize, d: usize, lambda: f64) -> Result<f64> {
    capacity_depolarizing_in(n, d, lambda, Base::Bits)
}

/// `C^d_prod(E_λ) = λ ln(nd)`.
pub fn capacity_erasure_in(n: usize, d: usize, lambda: f64, base: Base) -> Result<f64> {
    check(n, d, lambda)?;
    Ok(base.from_nats(lambda * ((n * d) as f64).ln()))
}

pub fn capacity_erasure(n: usize, d: usize, lambda: f64) -> Result<f64> {
    capacity_erasure_in(n, d, lambda, Base::Bits)
}

/// `C^{high} + C^1 - 2 C^d` for the depolarizing channel on `C^n`, with `d <= high <= n`.
pub fn depolarizing_combination(n: usize, high: usize, d: usize, lambda: f64, base: Base) -> Result<f64> {
    if high < d {
        return Err(Error::InvalidParameter(format!("need d <= high, got d = {d}, high = {high}")));
    }
    let c = |k| capacity_depolarizing_in(n, k, lambda, base);
    Ok(c(high)? + c(1)? - 2.0 * c(d)?)
}

/// `f(n, d, λ) = C^{d²} + C^1 - 2C^d`, requiring `d² <= n`.
pub fn gap_f(n: usize, d: usize, lambda: f64) -> Result<f64> {
    gap_f_in(n, d, lambda, Base::Bits)
}

pub fn gap_f_in(n: usize, d: usize, lambda: f64, base: Base) -> Result<f64> {
    if d * d > n {
        return Err(Error::InvalidParameter(format!(
            "f(n, d, λ) needs d² <= n, got d = {d}, n = {n}"
        )));
    }
    depolarizing_combination(n, d * d, d, lambda, base)
}

/// The interval `λ log₂(nd) - H(μ) <= C^d_prod(D_λ) <= λ log₂(nd)`, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    pub lower: f64,
    pub capacity: f64,
    pub upper: f64,
    /// `capacity - lower`.
    pub lower_slack: f64,
    /// `upper - capacity`.
    pub upper_slack: f64,
}

impl BoundsReport {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn depolarizing_bounds_check(n: usize, d: usize, lambda: f64) -> Result<BoundsReport> {
    let capacity = capacity_depolarizing(n, d, lambda)?;
    let upper = capacity_erasure(n, d, lambda)?;
    let lower = upper - binary_entropy(mu(n, d, lambda), Base::Bits);
    Ok(BoundsReport {
        lower,
        capacity,
        upper,
        lower_slack: capacity - lower,
        upper_slack: upper - capacity,
    })
}

/// Outcome of a randomized inequality check: the smallest `rhs - lhs` seen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityReport {
    pub trials: usize,
    pub min_slack: f64,
    /// Trial index attaining `min_slack`.
    pub worst_trial: usize,
}

impl InequalityReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.min_slack >= -tol
    }
}

fn run_trials<F>(trials: usize, seed: u64, slack: F) -> Result<InequalityReport>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> Result<f64> + Sync,
{
    let slacks = (0..trials)
        .into_par_iter()
        .map(|i| slack(&mut stream_rng(seed, i as u64)))
        .collect::<Result<Vec<f64>>>()?;
    let (worst_trial, min_slack) = slacks
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, f64::INFINITY));
    Ok(InequalityReport {
        trials,
        min_slack,
        worst_trial,
    })
}

/// A random density matrix of random rank, so that pure and full-rank states both occur.
fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<crate::linalg::ComplexMatrix> {
    let rank = rng.random_range(1..=dim);
    sample_density(dim, rank, rng)
}

fn entropy_of(rho: &crate::linalg::ComplexMatrix) -> Result<f64> {
    von_neumann_entropy(rho, Base::Nats)
}

/// Strong subadditivity `S(ABC) + S(B) <= S(AB) + S(BC)` on random states.
pub fn ssa_check(dims: [usize; 3], trials: usize, seed: u64) -> Result<InequalityReport> {
    let total: usize = dims.iter().product();
    if total == 0 || total > 64 {
        return Err(Error::InvalidParameter(format!("need 1 <= a·b·c <= 64, got {total}")));
    }
    run_trials(trials, seed, |rng| {
        let rho = random_state(total, rng)?;
        let s = |keep: &[usize]| entropy_of(&partial_trace(&rho, &dims, keep)?);
        Ok(s(&[0, 1])? + s(&[1, 2])? - entropy_of(&rho)? - s(&[1])?)
    })
}

/// `(s/k) S(ρ) <= binom(k, s)^{-1} Σ_{|A| = s} S(ρ_A)` on random states of `(C^n)^{⊗k}`.
pub fn v_d_erasure_component_check(n: usize, k: usize, s: usize, trials: usize, seed: u64) -> Result<InequalityReport> {
    if !(1..=3).contains(&k) || !(2..=3).contains(&n) {
        return Err(Error::InvalidParameter(format!("need n ∈ {{2, 3}} and 1 <= k <= 3, got n = {n}, k = {k}")));
    }
    if s > k {
        return Err(Error::InvalidParameter(format!("need s <= k, got s = {s}, k = {k}")));
    }
    let dims = vec![n; k];
    let sets = crate::channels::subsets(k, s);
    run_trials(trials, seed, |rng| {
        let rho = random_state(n.pow(k as u32), rng)?;
        let lhs = s as f64 / k as f64 * entropy_of(&rho)?;
        if s == 0 {
            return Ok(-lhs);
        }
        let mut avg = 0.0;
        for a in &sets {
            avg += entropy_of(&partial_trace(&rho, &dims, a)?)?;
        }
        Ok(avg / sets.len() as f64 - lhs)
    })
}

/// Fannes–Audenaert: `|S(ρ) - S(σ)| <= T ln(n-1) + H(T)` with `T = ‖ρ - σ‖_1 / 2`.
///
/// Half the pairs are independent; the other half are mixtures `σ = (1-t)ρ + tτ`
/// so that small distances are sampled too.
pub fn fannes_check(n: usize, trials: usize, seed: u64) -> Result<InequalityReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    run_trials(trials, seed, |rng| {
        let rho = random_state(n, rng)?;
        let tau = random_state(n, rng)?;
        let sigma = if rng.random::<bool>() {
            tau
        } else {
            let t: f64 = rng.random::<f64>().powi(3);
            &rho * crate::linalg::real(1.0 - t) + tau * crate::linalg::real(t)
        };
        let t = (schatten_norm(&(&rho - &sigma), Exponent::ONE) / 2.0).min(1.0);
        let bound = t * ((n - 1) as f64).ln() + binary_entropy(t, Base::Nats);
        Ok(bound - (entropy_of(&rho)? - entropy_of(&sigma)?).abs())
    })
}

/// Terms of the two-sided argument that `C^{d^k}_prod(E_λ^{⊗k}) = k λ log₂(nd)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErasureMultiplicityReport {
    pub lambda: f64,
    /// `Σ_s binom(k,s) λ^s (1-λ)^{k-s} [s ln n + (s/k) ln d^k]`, from the covariant
    /// upper bound with each `V_{d^k}(N_s)` replaced by `(s/k) ln d^k`.
    pub upper_bits: f64,
    /// `k C^d_prod(E_λ)`, attained by independent uses.
    pub lower_bits: f64,
    /// `k λ log₂(nd)`.
    pub target_bits: f64,
}

pub fn erasure_multiplicativity(k: usize, n: usize, d: usize, lambda: f64) -> Result<ErasureMultiplicityReport> {
    check(n, d, lambda)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let (kf, nf, df) = (k as f64, n as f64, d as f64);
    let mut upper = 0.0;
    for s in 0..=k {
        let sf = s as f64;
        let w = binomial(k, s) * lambda.powi(s as i32) * (1.0 - lambda).powi((k - s) as i32);
        upper += w * (sf * nf.ln() + sf / kf * kf * df.ln());
    }
    Ok(ErasureMultiplicityReport {
        lambda,
        upper_bits: Base::Bits.from_nats(upper),
        lower_bits: kf * capacity_erasure(n, d, lambda)?,
        target_bits: kf * lambda * (nf * df).log2(),
    })
}

fn binomial(k: usize, s: usize) -> f64 {
    (0..s).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
}

/// Numeric `V_{d^k}(N_s)` against the bound `(s/k) ln d^k`, for each `s`.
pub fn erasure_component_v_bounds(
    k: usize,
    n: usize,
    d: usize,
    options: &OptimizerOptions,
) -> Result<Vec<(usize, f64, f64)>> {
    let dk = d.pow(k as u32);
    (0..=k)
        .map(|s| {
            let ch = crate::channels::erasure_average(k, s, n)?;
            let v = v_d(&ch, dk, options)?.value;
            Ok((s, v, s as f64 / k as f64 * (dk as f64).ln()))
        })
        .collect()
}

/// Closed-form and derivative-based capacities side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub descriptor: String,
    pub d: usize,
    pub lambda: Option<f64>,
    /// `None` when the channel has no known closed form.
    pub closed_form_bits: Option<f64>,
    pub numeric_bits: f64,
    pub witness: PureStateVector,
    pub abs_gap: Option<f64>,
}

fn describe(ch: &QuantumChannel) -> (String, Option<f64>, Option<(usize, f64, bool)>) {
    match ch.family() {
        Some(Family::Depolarizing { n, lambda }) => (format!("depolarizing(n={n}, λ={lambda})"), Some(lambda), Some((n, lambda, true))),
        Some(Family::Erasure { n, lambda }) => (format!("erasure(n={n}, λ={lambda})"), Some(lambda), Some((n, lambda, false))),
        Some(Family::Identity { n }) => (format!("identity(n={n})"), Some(1.0), Some((n, 1.0, false))),
        None => (
            format!("channel({} -> {}, {} blocks)", ch.in_dim(), ch.out_dim(), ch.out_blocks().len()),
            None,
            None,
        ),
    }
}

/// `C^d_prod = [Σ_j μ_j ln n_j + H(μ) + d/dp ‖N‖_d |_{p=1}] / ln 2`.
///
/// The `H(μ)` term accounts for the block structure: the derivative of the
/// d-norm yields `S_d`, which differs from `V_d` by `H(μ)`. For a single
/// output block it vanishes.
pub fn capacity_via_derivative(ch: &QuantumChannel, d: usize, options: &OptimizerOptions) -> Result<CapacityReport> {
    if ch.covariance().is_none() {
        return Err(Error::NotCovariant);
    }
    let reports = DERIVATIVE_STEPS
        .par_iter()
        .map(|&h| channel_d_norm(ch, d, Exponent::new(1.0 + h)?, options))
        .collect::<Result<Vec<_>>>()?;
    let derivative = derivative_at_one(|p| {
        if p == 1.0 {
            return Ok(1.0);
        }
        DERIVATIVE_STEPS
            .iter()
            .position(|&h| 1.0 + h == p)
            .map(|i| reports[i].value)
            .ok_or(Error::NonFinite(p))
    })?;
    let blocks = ch.out_blocks();
    let dims_term: f64 = blocks.iter().map(|b| b.weight * (b.dim as f64).ln()).sum();
    let h_mu = crate::mixed_norms::block_entropy(ch)?;
    let numeric_bits = Base::Bits.from_nats(dims_term + h_mu + derivative);
    if !numeric_bits.is_finite() {
        return Err(Error::NonFinite(numeric_bits));
    }
    let witness = match &reports[reports.len() - 1].witness {
        Witness::State(s) => s.clone(),
        _ => return Err(Error::NonFinite(f64::NAN)),
    };
    let (descriptor, lambda, family) = describe(ch);
    let closed_form_bits = match family {
        Some((n, l, true)) if d <= n => Some(capacity_depolarizing(n, d, l)?),
        Some((n, l, false)) if d <= n => Some(capacity_erasure(n, d, l)?),
        _ => None,
    };
    Ok(CapacityReport {
        descriptor,
        d,
        lambda,
        closed_form_bits,
        numeric_bits,
        witness,
        abs_gap: closed_form_bits.map(|c| (c - numeric_bits).abs()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{depolarizing, erasure, identity_channel};

    fn e(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn depolarizing_norm_examples() {
        assert!((dnorm_depolarizing_closed(3, 2, 1.0, e(3.0)).unwrap() - 2f64.powf(2.0 / 3.0)).abs() < 1e-14);
        assert!((dnorm_depolarizing_closed(3, 2, 0.0, e(3.0)).unwrap() - 3f64.powf(-2.0 / 3.0)).abs() < 1e-14);
        assert!((dnorm_depolarizing_closed(2, 2, 0.5, e(2.0)).unwrap() - 0.875f64.sqrt()).abs() < 1e-15);
        assert!(dnorm_depolarizing_closed(2, 3, 0.5, e(2.0)).is_err());
    }

    #[test]
    fn erasure_norm_examples() {
        assert!((dnorm_erasure_closed(3, 2, 1.0, e(4.0)).unwrap() - 2f64.powf(0.75)).abs() < 1e-14);
        assert_eq!(dnorm_erasure_closed(3, 2, 0.0, e(4.0)).unwrap(), 1.0);
        assert!((dnorm_erasure_closed(3, 2, 0.5, e(2.0)).unwrap() - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn trace_norm_closed_forms_are_one() {
        for n in 1..=4 {
            for d in 1..=n {
                for l in [0.0, 0.3, 1.0] {
                    assert!((dnorm_depolarizing_closed(n, d, l, Exponent::ONE).unwrap() - 1.0).abs() < 1e-14);
                    assert!((dnorm_erasure_closed(n, d, l, Exponent::ONE).unwrap() - 1.0).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn capacity_examples() {
        assert!((capacity_depolarizing(3, 2, 1.0).unwrap() - 6f64.log2()).abs() < 1e-14);
        assert!(capacity_depolarizing(3, 2, 0.0).unwrap().abs() < 1e-14);
        assert_eq!(capacity_erasure(2, 2, 0.5).unwrap(), 1.0);
        assert_eq!(capacity_erasure(2, 2, 0.0).unwrap(), 0.0);
        // Unassisted qubit depolarizing channel: 1 - H((1+λ)/2).
        let l = 0.4;
        let holevo = 1.0 - binary_entropy((1.0 + l) / 2.0, Base::Bits);
        assert!((capacity_depolarizing(2, 1, l).unwrap() - holevo).abs() < 1e-14);
        let nats = capacity_depolarizing_in(4, 2, 0.3, Base::Nats).unwrap();
        assert!((nats - capacity_depolarizing(4, 2, 0.3).unwrap() * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn capacity_is_monotone_in_d() {
        for n in 1..=4 {
            for i in 0..=20 {
                let l = i as f64 / 20.0;
                for d in 1..n {
                    let a = capacity_depolarizing(n, d, l).unwrap();
                    let b = capacity_depolarizing(n, d + 1, l).unwrap();
                    assert!(b - a >= -1e-12);
                }
            }
        }
    }

    #[test]
    fn erasure_capacity_is_linear() {
        let (a, b) = (0.2, 0.7);
        let mid = capacity_erasure(3, 2, (a + b) / 2.0).unwrap();
        let avg = (capacity_erasure(3, 2, a).unwrap() + capacity_erasure(3, 2, b).unwrap()) / 2.0;
        assert!((mid - avg).abs() < 1e-14);
    }

    #[test]
    fn gap_examples() {
        assert!(gap_f(4, 2, 0.0).unwrap().abs() < 1e-12);
        assert!(gap_f(4, 2, 1.0).unwrap().abs() < 1e-12);
        for i in 1..20 {
            let l = i as f64 * 0.05;
            assert!(gap_f(4, 2, l).unwrap() > 0.0);
            assert!(depolarizing_combination(3, 3, 2, l, Base::Bits).unwrap() < 0.0);
        }
        assert!(gap_f(3, 2, 0.5).is_err());
    }

    #[test]
    fn bounds_examples() {
        let r = depolarizing_bounds_check(3, 2, 1.0).unwrap();
        for v in [r.lower, r.capacity, r.upper] {
            assert!((v - 6f64.log2()).abs() < 1e-12);
        }
        let r = depolarizing_bounds_check(4, 2, 0.5).unwrap();
        assert!(r.lower_slack >= 0.0 && r.upper_slack >= 0.0 && r.width() <= 1.0);
        let r = depolarizing_bounds_check(4, 2, 0.0).unwrap();
        assert!((r.lower + binary_entropy(1.0 / 8.0, Base::Bits)).abs() < 1e-14);
        assert_eq!(r.upper, 0.0);
    }

    #[test]
    fn entropy_checks_hold() {
        assert!(ssa_check([2, 2, 2], 100, 1).unwrap().holds(1e-9));
        assert!(fannes_check(3, 100, 2).unwrap().holds(1e-9));
        for s in 0..=3 {
            assert!(v_d_erasure_component_check(2, 3, s, 50, 3).unwrap().holds(1e-9));
        }
        assert!(ssa_check([4, 4, 8], 1, 0).is_err());
    }

    #[test]
    fn erasure_component_check_is_tight_at_the_ends() {
        let r = v_d_erasure_component_check(2, 2, 2, 20, 5).unwrap();
        assert!(r.min_slack.abs() < 1e-12);
        let r = v_d_erasure_component_check(2, 2, 0, 20, 5).unwrap();
        assert_eq!(r.min_slack, 0.0);
    }

    #[test]
    fn multiplicativity_pipeline() {
        for i in 0..=10 {
            let r = erasure_multiplicativity(2, 2, 2, i as f64 / 10.0).unwrap();
            assert!((r.upper_bits - r.target_bits).abs() < 1e-12);
            assert!((r.lower_bits - r.target_bits).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_capacities() {
        let opts = OptimizerOptions {
            restarts: 4,
            ..Default::default()
        };
        let r = capacity_via_derivative(&depolarizing(2, 0.5).unwrap(), 2, &opts).unwrap();
        assert!(r.abs_gap.unwrap() <= 1e-3, "{r:?}");
        let r = capacity_via_derivative(&erasure(2, 0.5).unwrap(), 2, &opts).unwrap();
        assert!((r.numeric_bits - 1.0).abs() <= 1e-3);
        let r = capacity_via_derivative(&identity_channel(2).unwrap(), 2, &opts).unwrap();
        assert!((r.numeric_bits - 2.0).abs() <= 1e-3);
    }

    #[test]
    fn non_covariant_channels_are_rejected() {
        let ch = crate::channels::trace_channel(2).unwrap();
        let ch = QuantumChannel::new(ch.in_dim(), ch.kraus().to_vec(), ch.out_blocks().to_vec()).unwrap();
        assert!(matches!(
            capacity_via_derivative(&ch, 1, &OptimizerOptions::default()),
            Err(Error::NotCovariant)
        ));
    }
}
