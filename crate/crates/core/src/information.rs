//! Entropy and mutual information in nats, conditional informations along
//! the auxiliary chain `U -> V -> X -> (Y, Z)`, and channel capacity via
//! alternating maximisation with a certified duality gap.

use crate::error::{Error, Result};
use crate::numeric::{kahan_sum, logsumexp};
use crate::probability::{Channel, Distribution, JointDistribution, MarkovChainSpec};

/// Default duality-gap tolerance for [`capacity`].
pub const DEFAULT_CAPACITY_TOL: f64 = 1e-9;

/// Default iteration cap for [`capacity`].
pub const DEFAULT_CAPACITY_MAX_ITER: usize = 100_000;

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn entropy(p: &Distribution) -> f64 {
    entropy_of_probs(p.probs())
}

fn entropy_of_probs(probs: &[f64]) -> f64 {
    let h = -kahan_sum(
        probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.ln()),
    );
    h.max(0.0)
}

/// Mutual information `I(X; Z)` in nats between `input` and the output of
/// `channel` fed with it.
pub fn mutual_information(input: &Distribution, channel: &Channel) -> Result<f64> {
    if input.len() != channel.input_size() {
        return Err(Error::DimensionMismatch {
            context: "mutual information",
            left: input.len(),
            right: channel.input_size(),
        });
    }
    let q = channel.output_distribution(input)?;
    let mut terms = Vec::with_capacity(input.len() * channel.output_size());
    for x in 0..input.len() {
        let px = input.get(x);
        if px == 0.0 {
            continue;
        }
        for z in 0..channel.output_size() {
            let w = channel.prob(x, z);
            if w == 0.0 {
                continue;
            }
            // q(z) >= px * w > 0 here, so the log is finite.
            terms.push(px * w * (w.ln() - q.get(z).ln()));
        }
    }
    Ok(kahan_sum(terms).max(0.0))
}

/// Mutual information of a joint law, `sum p(i,j) ln(p(i,j) / (p(i) q(j)))`.
pub fn mutual_information_of_joint(j: &JointDistribution) -> f64 {
    let r = j.row_marginal();
    let c = j.col_marginal();
    let mut terms = Vec::with_capacity(j.rows() * j.cols());
    for i in 0..j.rows() {
        for k in 0..j.cols() {
            let p = j.get(i, k);
            if p > 0.0 {
                terms.push(p * (p.ln() - r.get(i).ln() - c.get(k).ln()));
            }
        }
    }
    kahan_sum(terms).max(0.0)
}

/// Which information functional of the chain to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainPair {
    /// `I(V; Y | U)`.
    VyGivenU,
    /// `I(V; Z | U)`.
    VzGivenU,
    /// `I(U; Y)`.
    Uy,
    /// `I(U; Z)`.
    Uz,
}

/// Evaluates one information functional of the chain. The conditional
/// quantities average `I(V; .)` over `U`, using that the `V -> Y` and
/// `V -> Z` kernels do not depend on `U`.
pub fn conditional_mutual_information(chain: &MarkovChainSpec, pair: ChainPair) -> Result<f64> {
    match pair {
        ChainPair::VyGivenU => averaged_information(chain, &chain.y_given_v()?),
        ChainPair::VzGivenU => averaged_information(chain, &chain.z_given_v()?),
        ChainPair::Uy => mutual_information(chain.p_u(), &chain.y_given_u()?),
        ChainPair::Uz => mutual_information(chain.p_u(), &chain.z_given_u()?),
    }
}

fn averaged_information(chain: &MarkovChainSpec, kernel: &Channel) -> Result<f64> {
    let p_u = chain.p_u();
    let mut acc = Vec::with_capacity(p_u.len());
    for u in 0..p_u.len() {
        let w = p_u.get(u);
        if w == 0.0 {
            continue;
        }
        acc.push(w * mutual_information(chain.p_v_given_u().row(u), kernel)?);
    }
    Ok(kahan_sum(acc))
}

/// All four chain informations at once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainInformations {
    /// `I(V; Y | U)`.
    pub vy_given_u: f64,
    /// `I(V; Z | U)`.
    pub vz_given_u: f64,
    /// `I(U; Y)`.
    pub uy: f64,
    /// `I(U; Z)`.
    pub uz: f64,
}

/// Evaluates all four functionals of [`ChainPair`] in one pass.
pub fn chain_informations(chain: &MarkovChainSpec) -> Result<ChainInformations> {
    Ok(ChainInformations {
        vy_given_u: conditional_mutual_information(chain, ChainPair::VyGivenU)?,
        vz_given_u: conditional_mutual_information(chain, ChainPair::VzGivenU)?,
        uy: conditional_mutual_information(chain, ChainPair::Uy)?,
        uz: conditional_mutual_information(chain, ChainPair::Uz)?,
    })
}

/// Capacity result: a maximising input, the information it achieves, and
/// the certified duality gap.
#[derive(Debug, Clone)]
pub struct CapacityResult {
    /// Input distribution achieving `value`.
    pub input: Distribution,
    /// `I(input; channel)`, a lower bound on capacity within `gap` of it.
    pub value: f64,
    /// Certified gap: `max_x D(W_x || q) - value`, an upper bound on the
    /// remaining suboptimality.
    pub gap: f64,
    /// Iterations spent.
    pub iterations: usize,
}

/// Channel capacity by alternating maximisation, run in log space so that
/// inputs driven towards zero mass never poison the update. Stops when the
/// duality gap `max_x D(W_x || q) - I(p; W)` falls below `tol`.
pub fn capacity(channel: &Channel, tol: f64, max_iter: usize) -> Result<CapacityResult> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let n = channel.input_size();
    let m = channel.output_size();
    let ln_w: Vec<Vec<f64>> = (0..n)
        .map(|x| (0..m).map(|z| channel.prob(x, z).ln()).collect())
        .collect();
    let mut lp = vec![-(n as f64).ln(); n];
    let mut best: Option<CapacityResult> = None;
    for it in 1..=max_iter {
        // q(z) in log space over the current input.
        let lq: Vec<f64> = (0..m)
            .map(|z| logsumexp(&(0..n).map(|x| lp[x] + ln_w[x][z]).collect::<Vec<_>>()))
            .collect();
        // D_x = D(W_x || q); finite because unreachable outputs are skipped.
        let d: Vec<f64> = (0..n)
            .map(|x| {
                kahan_sum((0..m).filter(|&z| channel.prob(x, z) > 0.0).map(|z| {
                    let w = channel.prob(x, z);
                    w * (ln_w[x][z] - lq[z])
                }))
            })
            .collect();
        let i_lb = kahan_sum((0..n).map(|x| lp[x].exp() * d[x])).max(0.0);
        let c_ub = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let gap = (c_ub - i_lb).max(0.0);
        let current = CapacityResult {
            input: Distribution::new(normalized_exp(&lp))?,
            value: i_lb,
            gap,
            iterations: it,
        };
        if best.as_ref().is_none_or(|b| current.gap < b.gap) {
            best = Some(current.clone());
        }
        if gap <= tol {
            return Ok(current);
        }
        for x in 0..n {
            lp[x] += d[x];
        }
        let norm = logsumexp(&lp);
        lp.iter_mut().for_each(|v| *v -= norm);
    }
    let b = best.expect("at least one iteration ran");
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual: b.gap,
        best_value: b.value,
        best_point: b.input.probs().to_vec(),
    })
}

fn normalized_exp(lp: &[f64]) -> Vec<f64> {
    let norm = logsumexp(lp);
    let mut p: Vec<f64> = lp.iter().map(|&v| (v - norm).exp()).collect();
    let s = kahan_sum(p.iter().copied());
    if s > 0.0 {
        p.iter_mut().for_each(|x| *x /= s);
    }
    p
}
