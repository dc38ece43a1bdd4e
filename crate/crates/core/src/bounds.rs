//! Computable leakage bounds, all in nats.
//!
//! Three families, in increasing structural specificity:
//!
//! * privacy amplification against a fixed observation channel: the
//!   eavesdropper sees `Z` correlated with a string `L`, the secret is
//!   `F(L)` for a two-universal `F` with `|M|` outputs, and the average
//!   leakage obeys
//!   `I(F(L); Z | F) <= |M|^rho E[P_{L|Z}(L|Z)^rho] / rho`
//!   for every `rho` in `(0, 1]` (uniform `L` turns the moment into
//!   `exp(psi) / |L|^rho`);
//! * channel resolvability over a two-layer input `(K, L)`, uniform and
//!   independent, where `exp(psi)` is replaced by the larger but
//!   input-concave `exp(phi)`;
//! * random-coding and per-codebook bounds for the wiretap layer of a
//!   broadcast code, including the per-letter exponent that decides
//!   whether leakage decays with blocklength.
//!
//! Every bound returns a [`BoundResult`] carrying the formula tag, the
//! tilt `rho` it was evaluated at, and diagnostic flags. Soundness of each
//! formula against brute-force leakage is exercised in the `oracle`
//! module and the acceptance suite.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gallager::{maximize_phi_over_input, phi, psi, Rho, DEFAULT_PHI_OPT_TOL};
use crate::information::{capacity, DEFAULT_CAPACITY_MAX_ITER, DEFAULT_CAPACITY_TOL};
use crate::numeric::{logsumexp, minimize_convex};
use crate::probability::{product_channel_with_cap, Channel, Distribution, MarkovChainSpec};

/// Lower end of every `rho` search interval.
pub const RHO_SEARCH_MIN: f64 = 1e-6;

/// Upper end of `rho` searches for `phi`-based formulas, which require
/// `rho < 1` strictly.
pub const RHO_SEARCH_MAX_OPEN: f64 = 1.0 - 1e-6;

// --- rate triples ----------------------------------------------------------

/// A rate point `(R_1, R_e, R_0)`: private rate, equivocation rate, common
/// rate, optionally with the pre-hash private rate `R'_1`. All in nats per
/// channel use, all nonnegative, with `R_e <= R_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateTriple {
    r1: f64,
    re: f64,
    r0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    r1_prime: Option<f64>,
}

impl RateTriple {
    /// Validates and wraps a rate point.
    pub fn new(r1: f64, re: f64, r0: f64) -> Result<Self> {
        for (name, v) in [("r1", r1), ("re", re), ("r0", r0)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::OutOfRange {
                    name: match name {
                        "r1" => "r1",
                        "re" => "re",
                        _ => "r0",
                    },
                    value: v,
                    range: "[0, inf)",
                });
            }
        }
        if re > r1 {
            return Err(Error::invalid_argument(format!(
                "equivocation rate {re} exceeds the private rate {r1}"
            )));
        }
        Ok(RateTriple {
            r1,
            re,
            r0,
            r1_prime: None,
        })
    }

    /// Attaches the pre-hash private rate `R'_1`.
    pub fn with_r1_prime(mut self, r1_prime: f64) -> Result<Self> {
        if !(r1_prime.is_finite() && r1_prime >= 0.0) {
            return Err(Error::OutOfRange {
                name: "r1_prime",
                value: r1_prime,
                range: "[0, inf)",
            });
        }
        self.r1_prime = Some(r1_prime);
        Ok(self)
    }

    /// Private (secret-message) rate.
    pub fn r1(&self) -> f64 {
        self.r1
    }

    /// Equivocation rate.
    pub fn re(&self) -> f64 {
        self.re
    }

    /// Common-message rate.
    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// Pre-hash private rate, when set.
    pub fn r1_prime(&self) -> Option<f64> {
        self.r1_prime
    }
}

// --- bound results ----------------------------------------------------------

/// Which formula produced a [`BoundResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFormula {
    /// Privacy amplification, expectation form (any source law).
    PaExpectation,
    /// Privacy amplification, uniform-source hash form via `psi`.
    PaUniformHash,
    /// Two-layer resolvability via `phi`.
    Resolvability,
    /// Codebook-averaged random-coding leakage.
    RandomCoding,
    /// Per-codebook bound on the exact product-channel law.
    CodeBasedExact,
    /// Per-codebook bound relaxed to the single-letter maximum.
    CodeBasedRelaxed,
}

/// Diagnostic flags attached to a bound value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFlag {
    /// The bound does not improve on the trivial cap (`ln` of the secret
    /// alphabet size), so it certifies nothing.
    Vacuous,
    /// The objective was flat in `rho`; the reported tilt is one of many
    /// equivalent minimisers.
    FlatRhoObjective,
    /// The exact per-codebook path was skipped (product space above the
    /// cap); only the relaxed value is available.
    RelaxedOnly,
}

/// A computed leakage bound in nats.
#[derive(Debug, Clone, Serialize)]
pub struct BoundResult {
    /// Formula that produced the value.
    pub formula: BoundFormula,
    /// Tilt the formula was evaluated at.
    pub rho: f64,
    /// The bound, in nats.
    pub value: f64,
    /// Maximising or otherwise distinguished input law, when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
    /// Diagnostics; empty means a plain informative bound.
    pub flags: Vec<BoundFlag>,
}

impl BoundResult {
    fn new(formula: BoundFormula, rho: f64, value: f64, trivial_cap: f64) -> Self {
        let mut flags = Vec::new();
        if value >= trivial_cap {
            flags.push(BoundFlag::Vacuous);
        }
        BoundResult {
            formula,
            rho,
            value,
            witness: None,
            flags,
        }
    }
}

/// Strategy for optimising a bound over its admissible `rho` interval.
#[derive(Debug, Clone, PartialEq)]
pub enum RhoSearch {
    /// Evaluate at the given tilts and keep the smallest bound.
    Grid {
        /// Candidate tilts; each must lie in the formula's domain.
        points: Vec<f64>,
    },
    /// Bisection on the sign of a central-difference derivative of the log
    /// bound, exploiting its convexity in `rho`, to within `x_tol` on the
    /// argument.
    Bisection {
        /// Interval width at which bisection stops.
        x_tol: f64,
    },
}

impl Default for RhoSearch {
    fn default() -> Self {
        RhoSearch::Bisection { x_tol: 1e-9 }
    }
}

/// Minimises `ln_bound` over `[lo, hi]`; returns (rho, ln value, flat).
fn search_rho(
    search: &RhoSearch,
    lo: f64,
    hi: f64,
    ln_bound: impl Fn(f64) -> Result<f64>,
) -> Result<(f64, f64, bool)> {
    match search {
        RhoSearch::Grid { points } => {
            if points.is_empty() {
                return Err(Error::invalid_argument("empty rho grid"));
            }
            let mut best: Option<(f64, f64)> = None;
            let mut values = Vec::with_capacity(points.len());
            for &r in points {
                if !(r >= lo && r <= hi) {
                    return Err(Error::OutOfRange {
                        name: "rho grid point",
                        value: r,
                        range: "the formula's admissible interval",
                    });
                }
                let v = ln_bound(r)?;
                values.push(v);
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((r, v));
                }
            }
            let (r, v) = best.expect("nonempty grid");
            let spread = values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                - values.iter().copied().fold(f64::INFINITY, f64::min);
            Ok((r, v, spread <= 1e-12 * v.abs().max(1.0)))
        }
        RhoSearch::Bisection { x_tol } => {
            if !x_tol.is_finite() || *x_tol <= 0.0 {
                return Err(Error::OutOfRange {
                    name: "x_tol",
                    value: *x_tol,
                    range: "(0, inf)",
                });
            }
            // The closures below are only called on [lo, hi] where the
            // formulas are defined, so unwrap-to-inf keeps errors visible.
            let first_error: std::cell::RefCell<Option<Error>> = None.into();
            let res = minimize_convex(
                |r| match ln_bound(r) {
                    Ok(v) => v,
                    Err(e) => {
                        first_error.borrow_mut().get_or_insert(e);
                        f64::INFINITY
                    }
                },
                lo,
                hi,
                *x_tol,
            );
            if let Some(e) = first_error.into_inner() {
                return Err(e);
            }
            Ok((res.x, res.value, res.flat))
        }
    }
}

// --- privacy amplification ---------------------------------------------------

fn check_sizes(sizes: &[(&'static str, u64)]) -> Result<()> {
    for &(name, v) in sizes {
        if v == 0 {
            return Err(Error::invalid_argument(format!("{name} must be at least 1")));
        }
    }
    Ok(())
}

/// `ln E[P_{L|Z}(L|Z)^rho]`, the tilted collision moment of the source
/// against the observation, computed directly from the joint law.
fn ln_collision_moment(rho: f64, channel: &Channel, input: &Distribution) -> Result<f64> {
    if input.len() != channel.input_size() {
        return Err(Error::DimensionMismatch {
            context: "collision moment",
            left: input.len(),
            right: channel.input_size(),
        });
    }
    let p_z = channel.output_distribution(input)?;
    let mut terms = Vec::with_capacity(input.len() * channel.output_size());
    for l in 0..input.len() {
        let p = input.get(l);
        if p == 0.0 {
            continue;
        }
        for z in 0..channel.output_size() {
            let w = channel.prob(l, z);
            if w == 0.0 {
                continue;
            }
            terms.push((1.0 + rho) * (p.ln() + w.ln()) - rho * p_z.get(z).ln());
        }
    }
    Ok(logsumexp(&terms))
}

/// Privacy-amplification bound in expectation form, valid for any source
/// law: `|M|^rho E[P_{L|Z}(L|Z)^rho] / rho`, `rho` in `(0, 1]`.
pub fn pa_bound_expectation(
    rho: Rho,
    m_size: u64,
    channel: &Channel,
    input: &Distribution,
) -> Result<BoundResult> {
    check_sizes(&[("m_size", m_size)])?;
    let r = rho.value();
    let ln_m = (m_size as f64).ln();
    let ln_value = r * ln_m + ln_collision_moment(r, channel, input)? - r.ln();
    Ok(BoundResult::new(
        BoundFormula::PaExpectation,
        r,
        ln_value.exp(),
        ln_m.max(f64::MIN_POSITIVE),
    ))
}

/// Privacy-amplification bound for a uniform source over the channel's
/// input alphabet, via `psi`: `(|M| / |L|)^rho exp(psi) / rho`. An
/// independent code path from [`pa_bound_expectation`]; the two must agree
/// on uniform sources.
pub fn pa_bound_discrete(rho: Rho, m_size: u64, channel: &Channel) -> Result<BoundResult> {
    check_sizes(&[("m_size", m_size)])?;
    let r = rho.value();
    let l_size = channel.input_size() as f64;
    let uniform = Distribution::uniform(channel.input_size());
    let ln_m = (m_size as f64).ln();
    let ln_value = r * (ln_m - l_size.ln()) + psi(rho, channel, &uniform)? - r.ln();
    Ok(BoundResult::new(
        BoundFormula::PaUniformHash,
        r,
        ln_value.exp(),
        ln_m.max(f64::MIN_POSITIVE),
    ))
}

/// Optimises the privacy-amplification bound over `rho` in `(0, 1]`.
/// `input = None` selects the uniform-source `psi` path; otherwise the
/// expectation path runs on the given law.
pub fn pa_bound_optimized(
    m_size: u64,
    channel: &Channel,
    input: Option<&Distribution>,
    search: &RhoSearch,
) -> Result<BoundResult> {
    check_sizes(&[("m_size", m_size)])?;
    let ln_m = (m_size as f64).ln();
    let evaluate: Box<dyn Fn(f64) -> Result<f64>> = match input {
        None => {
            let uniform = Distribution::uniform(channel.input_size());
            let ln_l = (channel.input_size() as f64).ln();
            Box::new(move |r: f64| {
                Ok(r * (ln_m - ln_l) + psi(Rho::new(r)?, channel, &uniform)? - r.ln())
            })
        }
        Some(p) => Box::new(move |r: f64| {
            Ok(r * ln_m + ln_collision_moment(r, channel, p)? - r.ln())
        }),
    };
    let (r, ln_v, flat) = search_rho(search, RHO_SEARCH_MIN, 1.0, evaluate)?;
    let formula = if input.is_none() {
        BoundFormula::PaUniformHash
    } else {
        BoundFormula::PaExpectation
    };
    let mut out = BoundResult::new(formula, r, ln_v.exp(), ln_m.max(f64::MIN_POSITIVE));
    if flat {
        out.flags.push(BoundFlag::FlatRhoObjective);
    }
    Ok(out)
}

// --- resolvability --------------------------------------------------------------

/// Two-layer resolvability bound: `K` and `L` uniform and independent,
/// the observation drawn through `channel` (input alphabet `|K| * |L|`),
/// and the secret alphabet of size `|M|`:
/// `|M|^rho exp(phi) / ((|K| |L|)^rho rho)`, `rho` in `(0, 1)`.
pub fn resolvability_bound(
    rho: Rho,
    m_size: u64,
    k_size: u64,
    l_size: u64,
    channel: &Channel,
) -> Result<BoundResult> {
    check_sizes(&[("m_size", m_size), ("k_size", k_size), ("l_size", l_size)])?;
    let expected = k_size as u128 * l_size as u128;
    if expected != channel.input_size() as u128 {
        return Err(Error::DimensionMismatch {
            context: "resolvability input alphabet",
            left: expected as usize,
            right: channel.input_size(),
        });
    }
    let r = rho.value();
    let uniform = Distribution::uniform(channel.input_size());
    let ln_m = (m_size as f64).ln();
    let ln_kl = (k_size as f64).ln() + (l_size as f64).ln();
    let ln_value = r * (ln_m - ln_kl) + phi(rho, channel, &uniform)? - r.ln();
    Ok(BoundResult::new(
        BoundFormula::Resolvability,
        r,
        ln_value.exp(),
        ln_m.max(f64::MIN_POSITIVE),
    ))
}

/// Optimises [`resolvability_bound`] over `rho` in `(0, 1)`.
pub fn resolvability_bound_optimized(
    m_size: u64,
    k_size: u64,
    l_size: u64,
    channel: &Channel,
    search: &RhoSearch,
) -> Result<BoundResult> {
    check_sizes(&[("m_size", m_size), ("k_size", k_size), ("l_size", l_size)])?;
    let expected = k_size as u128 * l_size as u128;
    if expected != channel.input_size() as u128 {
        return Err(Error::DimensionMismatch {
            context: "resolvability input alphabet",
            left: expected as usize,
            right: channel.input_size(),
        });
    }
    let uniform = Distribution::uniform(channel.input_size());
    let ln_m = (m_size as f64).ln();
    let ln_kl = (k_size as f64).ln() + (l_size as f64).ln();
    let (r, ln_v, flat) = search_rho(search, RHO_SEARCH_MIN, RHO_SEARCH_MAX_OPEN, |r| {
        Ok(r * (ln_m - ln_kl) + phi(Rho::new(r)?, channel, &uniform)? - r.ln())
    })?;
    let mut out = BoundResult::new(
        BoundFormula::Resolvability,
        r,
        ln_v.exp(),
        ln_m.max(f64::MIN_POSITIVE),
    );
    if flat {
        out.flags.push(BoundFlag::FlatRhoObjective);
    }
    Ok(out)
}

// --- random-coding leakage ---------------------------------------------------------

/// Log of the per-letter factor of the codebook-averaged leakage bound:
/// `rho (R_1 - R'_1) + ln sum_u P_U(u) exp(phi(rho, W_{Z|V}, P_{V|U=u}))`.
/// The `n`-letter bound is `exp(n * this) / rho`, so leakage decays
/// exponentially iff this is negative somewhere on `(0, 1)`.
pub fn per_letter_log_moment(
    chain: &MarkovChainSpec,
    rates: &RateTriple,
    rho: Rho,
) -> Result<f64> {
    let r1_prime = rates.r1_prime().ok_or_else(|| {
        Error::invalid_argument("random-coding bounds need rates.r1_prime set")
    })?;
    let z_given_v = chain.z_given_v()?;
    let p_u = chain.p_u();
    let mut terms = Vec::with_capacity(p_u.len());
    for u in 0..p_u.len() {
        let w = p_u.get(u);
        if w == 0.0 {
            continue;
        }
        terms.push(w.ln() + phi(rho, &z_given_v, chain.p_v_given_u().row(u))?);
    }
    Ok(rho.value() * (rates.r1() - r1_prime) + logsumexp(&terms))
}

/// Codebook-averaged leakage bound for the wiretap layer at blocklength
/// `n`: `exp(n * per_letter_log_moment) / rho`. Needs `rates.r1_prime`;
/// `rho` in `(0, 1)`.
pub fn random_coding_leakage_bound(
    chain: &MarkovChainSpec,
    rates: &RateTriple,
    rho: Rho,
    n: usize,
) -> Result<BoundResult> {
    if n == 0 {
        return Err(Error::invalid_argument("blocklength n must be at least 1"));
    }
    let r = rho.value();
    let ln_value = n as f64 * per_letter_log_moment(chain, rates, rho)? - r.ln();
    // The secret message holds n * R_1 nats, the trivial leakage cap.
    let cap = (n as f64 * rates.r1()).max(f64::MIN_POSITIVE);
    Ok(BoundResult::new(
        BoundFormula::RandomCoding,
        r,
        ln_value.exp(),
        cap,
    ))
}

/// The leakage exponent and its optimising tilt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentResult {
    /// Minimising tilt.
    pub rho: f64,
    /// `min_rho per_letter_log_moment`: the signed per-letter rate of the
    /// log bound. Negative means the codebook-averaged leakage decays
    /// exponentially in `n`; nonnegative means this bound certifies no
    /// decay at any blocklength.
    pub exponent: f64,
    /// True when the objective was flat across the whole interval.
    pub flat: bool,
}

/// Optimises [`per_letter_log_moment`] over `rho` in `(0, 1)`, exploiting
/// its convexity in `rho`.
pub fn leakage_exponent(chain: &MarkovChainSpec, rates: &RateTriple) -> Result<ExponentResult> {
    // Surface bad inputs before entering the minimiser.
    per_letter_log_moment(chain, rates, Rho::new(0.5).unwrap())?;
    let first_error: std::cell::RefCell<Option<Error>> = None.into();
    let res = minimize_convex(
        |r| match Rho::new(r).and_then(|rho| per_letter_log_moment(chain, rates, rho)) {
            Ok(v) => v,
            Err(e) => {
                first_error.borrow_mut().get_or_insert(e);
                f64::INFINITY
            }
        },
        RHO_SEARCH_MIN,
        RHO_SEARCH_MAX_OPEN,
        1e-9,
    );
    if let Some(e) = first_error.into_inner() {
        return Err(e);
    }
    Ok(ExponentResult {
        rho: res.x,
        exponent: res.value,
        flat: res.flat,
    })
}

// --- per-codebook bounds ----------------------------------------------------------

/// A certified single-letter maximum of `phi` scaled to blocklength `n`.
#[derive(Debug, Clone, Serialize)]
pub struct SingleLetterMax {
    /// `n * max_P phi(rho, W, P)`.
    pub value: f64,
    /// The per-letter maximum itself.
    pub per_letter: f64,
    /// A maximising single-letter input.
    pub witness: Vec<f64>,
    /// Concavity certificate from the inner optimiser.
    pub gap: f64,
}

/// Single-letterisation of the product-channel `phi` maximum: the maximum
/// over product inputs of `phi` on `W^n` is `n` times the single-letter
/// maximum, which this computes with a certified optimiser.
pub fn single_letter_max(rho: Rho, channel: &Channel, n: usize) -> Result<SingleLetterMax> {
    if n == 0 {
        return Err(Error::invalid_argument("blocklength n must be at least 1"));
    }
    let m = maximize_phi_over_input(rho, channel, DEFAULT_PHI_OPT_TOL)?;
    Ok(SingleLetterMax {
        value: n as f64 * m.value,
        per_letter: m.value,
        witness: m.input.probs().to_vec(),
        gap: m.gap,
    })
}

/// The two per-codebook bounds: the exact product-channel evaluation when
/// it fits, and the always-available single-letter relaxation.
#[derive(Debug, Clone, Serialize)]
pub struct CodeBasedBound {
    /// `phi` evaluated on the empirical codeword law against the exact
    /// `n`-letter channel; absent when the product space exceeds the cap.
    pub exact: Option<BoundResult>,
    /// Same prefactor with `phi` relaxed to `n` times its single-letter
    /// maximum. Always at least the exact value.
    pub relaxed: BoundResult,
}

/// Leakage bound for one realised codebook. `codebook` is the empirical
/// distribution (with multiplicity) of the `|B| * |E|` codewords on the
/// `n`-letter input alphabet; the secret hash has `s_size` outputs:
/// `|S|^rho exp(phi(rho, W^n, codebook)) / ((|B| |E|)^rho rho)`.
#[allow(clippy::too_many_arguments)]
pub fn code_based_bound(
    codebook: &Distribution,
    channel: &Channel,
    n: usize,
    s_size: u64,
    b_size: u64,
    e_size: u64,
    rho: Rho,
    cap: usize,
) -> Result<CodeBasedBound> {
    if n == 0 {
        return Err(Error::invalid_argument("blocklength n must be at least 1"));
    }
    check_sizes(&[("s_size", s_size), ("b_size", b_size), ("e_size", e_size)])?;
    let mut v_pow = 1u128;
    for _ in 0..n {
        v_pow = v_pow.saturating_mul(channel.input_size() as u128);
    }
    if v_pow != codebook.len() as u128 {
        return Err(Error::DimensionMismatch {
            context: "codebook alphabet",
            left: codebook.len(),
            right: v_pow.min(usize::MAX as u128) as usize,
        });
    }
    let r = rho.value();
    let ln_s = (s_size as f64).ln();
    let ln_be = (b_size as f64).ln() + (e_size as f64).ln();
    let prefactor = r * (ln_s - ln_be) - r.ln();
    let cap_nats = ln_s.max(f64::MIN_POSITIVE);

    let exact = match product_channel_with_cap(channel, n, cap) {
        Ok(w_n) => {
            let ln_value = prefactor + phi(rho, &w_n, codebook)?;
            Some(BoundResult::new(
                BoundFormula::CodeBasedExact,
                r,
                ln_value.exp(),
                cap_nats,
            ))
        }
        Err(Error::SizeCapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };

    let single = single_letter_max(rho, channel, n)?;
    let ln_relaxed = prefactor + single.value;
    let mut relaxed = BoundResult::new(
        BoundFormula::CodeBasedRelaxed,
        r,
        ln_relaxed.exp(),
        cap_nats,
    );
    relaxed.witness = Some(single.witness);
    if exact.is_none() {
        relaxed.flags.push(BoundFlag::RelaxedOnly);
    }
    Ok(CodeBasedBound { exact, relaxed })
}

// --- achievable secret size ----------------------------------------------------------

/// Secret size (nats) guaranteed extractable from a wiretap layer with
/// `|B| * |E|` codewords at blocklength `n`:
/// `max(0, ln|B| + ln|E| - n (C_Z + delta))`, where `C_Z` is the
/// eavesdropper channel's capacity (certified upper value) and
/// `delta > 0` the slack.
pub fn achievable_secret_size(
    b_size: u64,
    e_size: u64,
    channel: &Channel,
    n: usize,
    delta: f64,
) -> Result<f64> {
    check_sizes(&[("b_size", b_size), ("e_size", e_size)])?;
    if n == 0 {
        return Err(Error::invalid_argument("blocklength n must be at least 1"));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::OutOfRange {
            name: "delta",
            value: delta,
            range: "(0, inf)",
        });
    }
    let cap = capacity(channel, DEFAULT_CAPACITY_TOL, DEFAULT_CAPACITY_MAX_ITER)?;
    // Upper-certified capacity keeps the guarantee conservative.
    let c_upper = cap.value + cap.gap;
    let size =
        (b_size as f64).ln() + (e_size as f64).ln() - n as f64 * (c_upper + delta);
    Ok(size.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hashing::HashFamily;
    use crate::information::mutual_information_of_joint;
    use crate::probability::{JointDistribution, DEFAULT_SIZE_CAP};

    const LN_2: f64 = std::f64::consts::LN_2;
    const H_014: f64 = 0.40496348506393853;

    // Frozen against an independent 50-digit evaluation.
    const PA_DISCRETE_BSC01: f64 = 2.5043961347997645;
    const RESOLVABILITY_BSC01: f64 = 2.5612496949731395;
    const PA_GENERAL_EXAMPLE: f64 = 1.6510976417805178;
    const EXACT_NONUNIFORM: f64 = 0.04583947592779565;
    const EXACT_UNIFORM: f64 = 0.042366208720045704;
    const ACHIEVABLE_EXAMPLE: f64 = 2.2866262546856836;

    fn bsc01() -> Channel {
        Channel::binary_symmetric(0.1).unwrap()
    }

    fn rows4() -> Channel {
        Channel::from_rows(vec![
            vec![0.8, 0.2],
            vec![0.3, 0.7],
            vec![0.5, 0.5],
            vec![0.9, 0.1],
        ])
        .unwrap()
    }

    /// Average leakage of the surjective-linear-map family, by exhaustion.
    fn family_average_leakage(k: usize, m: usize, input: &Distribution, ch: &Channel) -> f64 {
        let fam = HashFamily::new(k, m).unwrap();
        let cols = ch.output_size();
        let mut total = 0.0;
        let mut count = 0u64;
        for f in fam.members() {
            let mut table = vec![0.0; (1 << m) * cols];
            for l in 0..(1usize << k) {
                let s = f.apply(l as u64).unwrap() as usize;
                for z in 0..cols {
                    table[s * cols + z] += input.get(l) * ch.prob(l, z);
                }
            }
            let j = JointDistribution::from_table(1 << m, cols, table).unwrap();
            total += mutual_information_of_joint(&j);
            count += 1;
        }
        total / count as f64
    }

    #[test]
    fn rate_triples_enforce_their_invariants() {
        assert!(RateTriple::new(0.5, 0.3, 0.1).is_ok());
        assert!(RateTriple::new(0.5, 0.5, 0.0).is_ok());
        assert!(RateTriple::new(0.3, 0.5, 0.0).is_err(), "re above r1");
        assert!(RateTriple::new(-0.1, 0.0, 0.0).is_err());
        assert!(RateTriple::new(0.1, 0.0, f64::NAN).is_err());
        assert!(RateTriple::new(0.1, 0.0, 0.0)
            .unwrap()
            .with_r1_prime(-1.0)
            .is_err());
    }

    #[test]
    fn pa_discrete_matches_reference_value() {
        let b = pa_bound_discrete(Rho::new(0.5).unwrap(), 2, &bsc01()).unwrap();
        assert!((b.value - PA_DISCRETE_BSC01).abs() < 1e-13, "got {}", b.value);
        assert_eq!(b.formula, BoundFormula::PaUniformHash);
        // 2.5 nats on a 1-bit secret certifies nothing.
        assert!(b.flags.contains(&BoundFlag::Vacuous));
    }

    #[test]
    fn the_two_pa_routes_agree_on_uniform_sources() {
        for &r in &[0.1, 0.35, 0.5, 0.8, 1.0] {
            let rho = Rho::new(r).unwrap();
            let via_psi = pa_bound_discrete(rho, 3, &rows4()).unwrap();
            let via_expectation =
                pa_bound_expectation(rho, 3, &rows4(), &Distribution::uniform(4)).unwrap();
            assert!(
                (via_psi.value - via_expectation.value).abs() <= 1e-13 * via_psi.value,
                "routes diverge at rho {r}: {} vs {}",
                via_psi.value,
                via_expectation.value
            );
        }
    }

    #[test]
    fn pa_expectation_matches_reference_and_dominates_exact_leakage() {
        let input = Distribution::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let b = pa_bound_expectation(Rho::new(0.5).unwrap(), 2, &rows4(), &input).unwrap();
        assert!((b.value - PA_GENERAL_EXAMPLE).abs() < 1e-13, "got {}", b.value);
        let exact = family_average_leakage(2, 1, &input, &rows4());
        assert!((exact - EXACT_NONUNIFORM).abs() < 1e-13, "exact {exact}");
        assert!(exact <= b.value);
    }

    #[test]
    fn uniform_source_bounds_dominate_exhaustive_leakage() {
        let uniform = Distribution::uniform(4);
        let exact = family_average_leakage(2, 1, &uniform, &rows4());
        assert!((exact - EXACT_UNIFORM).abs() < 1e-13, "exact {exact}");
        for &r in &[0.2, 0.5, 0.9, 1.0] {
            let b = pa_bound_discrete(Rho::new(r).unwrap(), 2, &rows4()).unwrap();
            assert!(exact <= b.value, "violated at rho {r}: {} < {exact}", b.value);
        }
    }

    #[test]
    fn resolvability_matches_reference_and_dominates_the_psi_route() {
        let rho = Rho::new(0.5).unwrap();
        let res = resolvability_bound(rho, 2, 1, 2, &bsc01()).unwrap();
        assert!(
            (res.value - RESOLVABILITY_BSC01).abs() < 1e-13,
            "got {}",
            res.value
        );
        let pa = pa_bound_discrete(rho, 2, &bsc01()).unwrap();
        assert!(pa.value <= res.value, "psi route must not exceed phi route");
        // Dimension check: |K| * |L| must match the channel input.
        assert!(resolvability_bound(rho, 2, 2, 2, &bsc01()).is_err());
        // rho = 1 is outside the phi domain.
        assert!(resolvability_bound(Rho::new(1.0).unwrap(), 2, 1, 2, &bsc01()).is_err());
    }

    #[test]
    fn optimized_pa_bound_never_exceeds_fixed_tilts() {
        let opt = pa_bound_optimized(2, &bsc01(), None, &RhoSearch::default()).unwrap();
        for &r in &[0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
            let fixed = pa_bound_discrete(Rho::new(r).unwrap(), 2, &bsc01()).unwrap();
            assert!(
                opt.value <= fixed.value + 1e-9,
                "optimized {} above fixed {} at rho {r}",
                opt.value,
                fixed.value
            );
        }
        let grid = pa_bound_optimized(
            2,
            &bsc01(),
            None,
            &RhoSearch::Grid {
                points: (1..=20).map(|i| i as f64 / 20.0).collect(),
            },
        )
        .unwrap();
        assert!(opt.value <= grid.value + 1e-12);
    }

    #[test]
    fn optimized_pa_bound_finds_the_interior_minimum_on_a_noiseless_channel() {
        // |L| = |M| = 4 over the identity: the bound is 4^rho / rho with
        // minimum e * ln 4 at rho = 1 / ln 4.
        let id = Channel::identity(4);
        let opt = pa_bound_optimized(4, &id, None, &RhoSearch::default()).unwrap();
        let expected = std::f64::consts::E * 4f64.ln();
        assert!((opt.value - expected).abs() < 1e-7, "got {}", opt.value);
        assert!((opt.rho - 1.0 / 4f64.ln()).abs() < 1e-4, "rho {}", opt.rho);
    }

    #[test]
    fn random_coding_bound_composes_the_per_letter_moment() {
        let chain = MarkovChainSpec::new(
            Distribution::uniform(1),
            Channel::from_rows(vec![vec![0.5, 0.5]]).unwrap(),
            Channel::identity(2),
            Channel::binary_symmetric(0.05).unwrap(),
            Channel::binary_symmetric(0.14).unwrap(),
        )
        .unwrap();
        let rates = RateTriple::new(0.2, 0.0, 0.0)
            .unwrap()
            .with_r1_prime(0.45)
            .unwrap();
        let rho = Rho::new(0.3).unwrap();
        let bracket = per_letter_log_moment(&chain, &rates, rho).unwrap();
        let b = random_coding_leakage_bound(&chain, &rates, rho, 5).unwrap();
        assert!((b.value - (5.0 * bracket).exp() / 0.3).abs() < 1e-12 * b.value);
        // Without r1_prime the bound is undefined.
        let no_prime = RateTriple::new(0.2, 0.0, 0.0).unwrap();
        assert!(random_coding_leakage_bound(&chain, &no_prime, rho, 5).is_err());
    }

    #[test]
    fn exponent_sign_tracks_the_redundancy_threshold() {
        let chain = MarkovChainSpec::new(
            Distribution::uniform(1),
            Channel::from_rows(vec![vec![0.5, 0.5]]).unwrap(),
            Channel::identity(2),
            Channel::binary_symmetric(0.05).unwrap(),
            Channel::binary_symmetric(0.14).unwrap(),
        )
        .unwrap();
        let info_z = LN_2 - H_014;
        let r1 = 0.2;
        let above = RateTriple::new(r1, 0.0, 0.0)
            .unwrap()
            .with_r1_prime(r1 + info_z + 0.05)
            .unwrap();
        let e = leakage_exponent(&chain, &above).unwrap();
        assert!(e.exponent < 0.0, "redundancy above I(V;Z) must give decay: {e:?}");
        let below = RateTriple::new(r1, 0.0, 0.0)
            .unwrap()
            .with_r1_prime(r1 + info_z - 0.05)
            .unwrap();
        let e = leakage_exponent(&chain, &below).unwrap();
        assert!(e.exponent > 0.0, "redundancy below I(V;Z) cannot decay: {e:?}");
    }

    #[test]
    fn exponent_is_flat_for_a_useless_eavesdropper_at_zero_redundancy() {
        let chain = MarkovChainSpec::new(
            Distribution::uniform(1),
            Channel::from_rows(vec![vec![0.5, 0.5]]).unwrap(),
            Channel::identity(2),
            Channel::binary_symmetric(0.05).unwrap(),
            Channel::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap(),
        )
        .unwrap();
        let rates = RateTriple::new(0.2, 0.0, 0.0)
            .unwrap()
            .with_r1_prime(0.2)
            .unwrap();
        let e = leakage_exponent(&chain, &rates).unwrap();
        assert!(e.flat, "constant-zero moment must be flagged flat: {e:?}");
        assert!(e.exponent.abs() < 1e-12);
    }

    #[test]
    fn single_letter_max_scales_the_certified_optimum() {
        let rho = Rho::new(0.5).unwrap();
        let m = single_letter_max(rho, &Channel::identity(2), 3).unwrap();
        assert!((m.per_letter - 0.5 * LN_2).abs() < 1e-9);
        assert!((m.value - 3.0 * m.per_letter).abs() < 1e-15);
        assert!(m.gap <= DEFAULT_PHI_OPT_TOL);
    }

    #[test]
    fn code_based_exact_never_exceeds_relaxed() {
        let ch = Channel::from_rows(vec![vec![0.85, 0.15], vec![0.25, 0.75]]).unwrap();
        // Empirical law of 8 codewords of length 2 over a binary alphabet.
        let codebook = Distribution::new(vec![0.375, 0.25, 0.25, 0.125]).unwrap();
        let b = code_based_bound(
            &codebook,
            &ch,
            2,
            4,
            4,
            2,
            Rho::new(0.4).unwrap(),
            DEFAULT_SIZE_CAP,
        )
        .unwrap();
        let exact = b.exact.expect("tiny product fits the cap");
        assert!(
            exact.value <= b.relaxed.value + 1e-12 * b.relaxed.value,
            "exact {} above relaxed {}",
            exact.value,
            b.relaxed.value
        );
        assert!(!b.relaxed.flags.contains(&BoundFlag::RelaxedOnly));
    }

    #[test]
    fn code_based_falls_back_to_relaxed_when_the_product_exceeds_the_cap() {
        let ch = Channel::binary_symmetric(0.1).unwrap();
        let codebook = Distribution::uniform(16);
        let b = code_based_bound(
            &codebook,
            &ch,
            4,
            4,
            8,
            2,
            Rho::new(0.4).unwrap(),
            100,
        )
        .unwrap();
        assert!(b.exact.is_none());
        assert!(b.relaxed.flags.contains(&BoundFlag::RelaxedOnly));
    }

    #[test]
    fn achievable_size_matches_reference_and_clamps_at_zero() {
        let s = achievable_secret_size(8, 8, &bsc01(), 4, 0.1).unwrap();
        assert!((s - ACHIEVABLE_EXAMPLE).abs() < 1e-6, "got {s}");
        let clamped = achievable_secret_size(8, 8, &bsc01(), 100, 0.1).unwrap();
        assert_eq!(clamped, 0.0);
        assert!(achievable_secret_size(8, 8, &bsc01(), 4, 0.0).is_err());
        assert!(achievable_secret_size(0, 8, &bsc01(), 4, 0.1).is_err());
    }

    #[test]
    fn grid_search_rejects_out_of_domain_points() {
        let err = pa_bound_optimized(
            2,
            &bsc01(),
            None,
            &RhoSearch::Grid { points: vec![0.5, 1.5] },
        )
        .unwrap_err();
        assert!(matches!(err, Error::OutOfRange { .. }));
        let err = pa_bound_optimized(2, &bsc01(), None, &RhoSearch::Grid { points: vec![] })
            .unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }
}
