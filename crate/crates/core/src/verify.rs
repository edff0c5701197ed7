//! Named verification suites: each runs a family of identity or inequality
//! checks and reports the measured residual of every check.

use std::fmt;
use std::str::FromStr;

use crate::capacities::{fannes_check, ssa_check, v_d_erasure_component_check};
use crate::embeddings::{
    direct_sum_pair, factorization_residual, psi_norm, psi_norm_by_basis, superdense_pair, teleport_pair,
    EmbeddingPair,
};
use crate::error::{Error, Result};
use crate::linalg::{matrix_unit, max_abs_diff, sample_density, sample_pure_state, seeded_rng, Exponent};
use crate::weyl::{
    basis_expansion_residual, eta_basis, roots_of_unity_residual, shift_sum_residual, teleport_identity_residual,
    twirl_residual,
};

/// Residual tolerance for algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Tolerance on Choi eigenvalues.
pub const CHOI_TOL: f64 = 1e-10;
/// Tolerance on entropy inequality slacks.
pub const SLACK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Weyl,
    Teleport,
    Superdense,
    DirectSum,
    Factorization,
    Ssa,
    ErasureAdd,
    Fannes,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = [
        "weyl",
        "teleport",
        "superdense",
        "directsum",
        "factorization",
        "ssa",
        "erasure-add",
        "fannes",
        "all",
    ];

    fn parts() -> [Suite; 8] {
        use Suite::*;
        [Weyl, Teleport, Superdense, DirectSum, Factorization, Ssa, ErasureAdd, Fannes]
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use Suite::*;
        Ok(match s {
            "weyl" => Weyl,
            "teleport" => Teleport,
            "superdense" => Superdense,
            "directsum" => DirectSum,
            "factorization" => Factorization,
            "ssa" => Ssa,
            "erasure-add" => ErasureAdd,
            "fannes" => Fannes,
            "all" => All,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown suite {other:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// Parameters shared by the suites. `None` selects each suite's default grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub n: Option<usize>,
    pub dims: Option<Vec<usize>>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n: None,
            dims: None,
            trials: 100,
            seed: 0,
        }
    }
}

/// One measured check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    /// `true` if `measured` is a slack that must stay above `-tolerance`,
    /// `false` if it is a residual that must stay below `tolerance`.
    pub is_slack: bool,
}

impl Check {
    fn residual(suite: &'static str, name: String, measured: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name,
            measured,
            tolerance,
            is_slack: false,
        }
    }

    fn slack(suite: &'static str, name: String, measured: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name,
            measured,
            tolerance,
            is_slack: true,
        }
    }

    pub fn passed(&self) -> bool {
        if self.is_slack {
            self.measured >= -self.tolerance
        } else {
            self.measured <= self.tolerance
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (what, rel) = if self.is_slack { ("min slack", ">=") } else { ("residual", "<=") };
        let bound = if self.is_slack { -self.tolerance } else { self.tolerance };
        write!(
            f,
            "{} {}/{}: {} {:.3e} ({} {:.0e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            what,
            self.measured,
            rel,
            bound
        )
    }
}

fn exponent_pairs() -> Vec<(Exponent, Exponent)> {
    let (one, two, inf) = (Exponent::ONE, Exponent::TWO, Exponent::Infinity);
    vec![(one, one), (one, two), (two, two), (one, inf), (two, inf)]
}

fn pair_label(p: Exponent, q: Exponent) -> String {
    format!("p={p},q={q}")
}

fn ns(config: &VerifyConfig, default: std::ops::RangeInclusive<usize>) -> Vec<usize> {
    match config.n {
        Some(n) => vec![n],
        None => default.collect(),
    }
}

/// Complementation for every exponent pair; Choi positivity once, since the
/// unscaled maps do not depend on the exponents.
fn pair_checks<F>(suite: &'static str, label: &str, make: F, config: &VerifyConfig) -> Result<Vec<Check>>
where
    F: Fn(Exponent, Exponent) -> Result<EmbeddingPair>,
{
    let mut out = Vec::new();
    for (i, (p, q)) in exponent_pairs().into_iter().enumerate() {
        let pair = make(p, q)?;
        let res = pair.complementation_residual(config.trials, config.seed)?;
        out.push(Check::residual(suite, format!("{label} {} complementation", pair_label(p, q)), res, IDENTITY_TOL));
        if i == 0 {
            let (e, p) = pair.min_choi_eigenvalues()?;
            out.push(Check::slack(suite, format!("{label} choi(embed)"), e, CHOI_TOL));
            out.push(Check::slack(suite, format!("{label} choi(project)"), p, CHOI_TOL));
        }
    }
    Ok(out)
}

fn weyl(config: &VerifyConfig) -> Result<Vec<Check>> {
    let s = "weyl";
    let mut out = Vec::new();
    let mut rng = seeded_rng(config.seed);
    for n in ns(config, 2..=5) {
        out.push(Check::residual(s, format!("n={n} roots of unity"), roots_of_unity_residual(n), IDENTITY_TOL));
        out.push(Check::residual(s, format!("n={n} basis expansion"), basis_expansion_residual(n)?, IDENTITY_TOL));
        out.push(Check::residual(s, format!("n={n} eta gram"), eta_basis(n)?.gram_residual(), IDENTITY_TOL));
        out.push(Check::residual(s, format!("n={n} shift sum"), shift_sum_residual(n)?, IDENTITY_TOL));
        let (mut tele, mut twirl) = (0.0_f64, 0.0_f64);
        for _ in 0..config.trials.max(1) {
            let h = sample_pure_state(&[n], &mut rng);
            tele = tele.max(teleport_identity_residual(n, h.amplitudes())?);
            twirl = twirl.max(twirl_residual(n, &sample_density(n, n, &mut rng)?)?);
        }
        out.push(Check::residual(s, format!("n={n} teleportation identity"), tele, IDENTITY_TOL));
        out.push(Check::residual(s, format!("n={n} twirl"), twirl, IDENTITY_TOL));
    }
    Ok(out)
}

fn teleport(config: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in ns(config, 2..=5) {
        out.extend(pair_checks("teleport", &format!("n={n}"), |p, q| teleport_pair(n, p, q), config)?);
    }
    Ok(out)
}

fn superdense(config: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in ns(config, 2..=5) {
        let nn = n * n;
        for (p, q) in exponent_pairs() {
            let pair = superdense_pair(n, p, q)?;
            let mut basis = 0.0_f64;
            for a in 0..nn {
                let e = matrix_unit(nn, nn, a, a);
                basis = basis.max(max_abs_diff(&pair.project.apply(&pair.embed.apply(&e)?)?, &e));
            }
            let label = format!("n={n} {} basis vectors", pair_label(p, q));
            out.push(Check::residual("superdense", label, basis, IDENTITY_TOL));
        }
        out.extend(pair_checks("superdense", &format!("n={n}"), |p, q| superdense_pair(n, p, q), config)?);
    }
    Ok(out)
}

fn direct_sum(config: &VerifyConfig) -> Result<Vec<Check>> {
    let grids = match &config.dims {
        Some(d) => vec![d.clone()],
        None => vec![vec![2, 3], vec![2, 4]],
    };
    let mut out = Vec::new();
    for dims in grids {
        let label = format!("dims={dims:?}");
        out.extend(pair_checks("directsum", &label, |p, q| direct_sum_pair(&dims, p, q), config)?);
    }
    Ok(out)
}

fn factorization(config: &VerifyConfig) -> Result<Vec<Check>> {
    let s = "factorization";
    let mut out = Vec::new();
    for (n, d) in [(2, 2), (4, 2), (6, 3)] {
        for lambda in [0.0, 0.5, 1.0] {
            for p in [1.0, 2.0, 4.0] {
                let e = Exponent::new(p)?;
                let r = factorization_residual(n, d, lambda, e, config.trials, config.seed)?;
                out.push(Check::residual(s, format!("n={n} d={d} λ={lambda} p={p}"), r, IDENTITY_TOL));
            }
        }
    }
    for d in 1..=3 {
        for (a, b, g) in [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (1.0, 1.0, 1.0), (0.3, -0.2, 0.7)] {
            for p in [Exponent::ONE, Exponent::TWO, Exponent::Finite(4.0), Exponent::Infinity] {
                let diff = (psi_norm(d, a, b, g, p) - psi_norm_by_basis(d, a, b, g, p)?).abs();
                out.push(Check::residual(s, format!("psi norm d={d} ({a},{b},{g}) p={p}"), diff, IDENTITY_TOL));
            }
        }
    }
    Ok(out)
}

fn ssa(config: &VerifyConfig) -> Result<Vec<Check>> {
    let grids: Vec<[usize; 3]> = match &config.dims {
        Some(d) if d.len() == 3 => vec![[d[0], d[1], d[2]]],
        Some(d) => {
            return Err(Error::InvalidParameter(format!("ssa needs three dims, got {d:?}")));
        }
        None => vec![[2, 2, 2], [2, 3, 2]],
    };
    grids
        .into_iter()
        .map(|dims| {
            let r = ssa_check(dims, config.trials, config.seed)?;
            Ok(Check::slack("ssa", format!("dims={dims:?} trials={}", r.trials), r.min_slack, SLACK_TOL))
        })
        .collect()
}

fn erasure_add(config: &VerifyConfig) -> Result<Vec<Check>> {
    let n = config.n.unwrap_or(2);
    let k = 3;
    (0..=k)
        .map(|s| {
            let r = v_d_erasure_component_check(n, k, s, config.trials, config.seed)?;
            Ok(Check::slack("erasure-add", format!("n={n} k={k} s={s}"), r.min_slack, SLACK_TOL))
        })
        .collect()
}

fn fannes(config: &VerifyConfig) -> Result<Vec<Check>> {
    ns(config, 2..=4)
        .into_iter()
        .map(|n| {
            let r = fannes_check(n, config.trials, config.seed)?;
            Ok(Check::slack("fannes", format!("n={n} trials={}", r.trials), r.min_slack, SLACK_TOL))
        })
        .collect()
}

/// Runs a suite; `All` runs every suite with its default grid and the shared trial count and seed.
pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::Weyl => weyl(config),
        Suite::Teleport => teleport(config),
        Suite::Superdense => superdense(config),
        Suite::DirectSum => direct_sum(config),
        Suite::Factorization => factorization(config),
        Suite::Ssa => ssa(config),
        Suite::ErasureAdd => erasure_add(config),
        Suite::Fannes => fannes(config),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::parts() {
                out.extend(run_suite(s, config)?);
            }
            Ok(out)
        }
    }
}
