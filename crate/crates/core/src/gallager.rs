//! Exponential moment functionals of a channel and an input law, evaluated
//! in log space:
//!
//! * `psi(rho) = ln sum_z sum_l p(l) W(z|l)^(1+rho) P_Z(z)^(-rho)`, defined
//!   for `rho` in `(0, 1]`;
//! * `phi(rho) = ln sum_z (sum_l p(l) W(z|l)^(1/(1-rho)))^(1-rho)`, defined
//!   for `rho` in `(0, 1)`.
//!
//! `exp(psi) <= exp(phi)` holds pointwise, `exp(phi)` is concave in the
//! input law, and `phi(rho)/rho` decreases to the mutual information as
//! `rho -> 0`. Those three facts are what the leakage bounds downstream
//! lean on, and each is pinned by tests here and in the acceptance suite.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::information::mutual_information;
use crate::numeric::{kahan_sum, logsumexp, project_to_simplex, sample_simplex};
use crate::probability::{Channel, Distribution};

/// Default certificate tolerance for [`maximize_phi_over_input`].
pub const DEFAULT_PHI_OPT_TOL: f64 = 1e-8;

/// Iteration cap per restart inside [`maximize_phi_over_input`].
const MAX_ITER_PER_START: usize = 20_000;

/// Seed for the interior restarts of the optimiser. Fixed so that repeated
/// calls are deterministic regardless of caller state.
const PHI_OPT_SEED: u64 = 0x9e3779b97f4a7c15;

/// Interior floor applied after each projection step so log-space
/// evaluation never sees an exactly-zero mass.
const INTERIOR_FLOOR: f64 = 1e-15;

/// Tilting parameter. Constructible in `(0, 1]`; the `phi`-based
/// functionals additionally require a value strictly below 1 and enforce
/// that themselves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rho(f64);

impl Rho {
    /// Accepts values in `(0, 1]`.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value <= 1.0 {
            Ok(Rho(value))
        } else {
            Err(Error::OutOfRange {
                name: "rho",
                value,
                range: "(0, 1]",
            })
        }
    }

    /// The underlying value.
    pub fn value(self) -> f64 {
        self.0
    }

    fn require_strictly_below_one(self, what: &'static str) -> Result<f64> {
        if self.0 < 1.0 {
            Ok(self.0)
        } else {
            Err(Error::OutOfRange {
                name: what,
                value: self.0,
                range: "(0, 1)",
            })
        }
    }
}

fn check_dims(channel: &Channel, input: &Distribution, context: &'static str) -> Result<()> {
    if input.len() != channel.input_size() {
        return Err(Error::DimensionMismatch {
            context,
            left: input.len(),
            right: channel.input_size(),
        });
    }
    Ok(())
}

/// `psi(rho, W, p)`, the tilted second-moment functional. Equals
/// `ln E[P_{L|Z}(L|Z)^rho] + rho ln |support|` when `p` is uniform; the
/// privacy-amplification bound consumes it in that form.
pub fn psi(rho: Rho, channel: &Channel, input: &Distribution) -> Result<f64> {
    check_dims(channel, input, "psi")?;
    let r = rho.value();
    let n = input.len();
    let m = channel.output_size();
    // ln P_Z(z) over the support of p.
    let mut terms = Vec::with_capacity(n);
    let ln_pz: Vec<f64> = (0..m)
        .map(|z| {
            terms.clear();
            for l in 0..n {
                let p = input.get(l);
                let w = channel.prob(l, z);
                if p > 0.0 && w > 0.0 {
                    terms.push(p.ln() + w.ln());
                }
            }
            logsumexp(&terms)
        })
        .collect();
    let mut all = Vec::with_capacity(n * m);
    for (z, &lz) in ln_pz.iter().enumerate() {
        if lz == f64::NEG_INFINITY {
            continue;
        }
        for l in 0..n {
            let p = input.get(l);
            let w = channel.prob(l, z);
            if p > 0.0 && w > 0.0 {
                all.push(p.ln() + (1.0 + r) * w.ln() - r * lz);
            }
        }
    }
    Ok(logsumexp(&all))
}

/// `phi(rho, W, p)`, the Gallager-form functional. Dominates `psi` on the
/// shared domain and is jointly exploitable: `exp(phi)` is concave in `p`
/// and `phi` is convex in `rho`.
pub fn phi(rho: Rho, channel: &Channel, input: &Distribution) -> Result<f64> {
    check_dims(channel, input, "phi")?;
    let r = rho.require_strictly_below_one("rho")?;
    let s = 1.0 - r;
    let n = input.len();
    let m = channel.output_size();
    let mut z_terms = Vec::with_capacity(m);
    let mut inner = Vec::with_capacity(n);
    for z in 0..m {
        inner.clear();
        for l in 0..n {
            let p = input.get(l);
            let w = channel.prob(l, z);
            if p > 0.0 && w > 0.0 {
                inner.push(p.ln() + w.ln() / s);
            }
        }
        let ln_inner = logsumexp(&inner);
        if ln_inner != f64::NEG_INFINITY {
            z_terms.push(s * ln_inner);
        }
    }
    Ok(logsumexp(&z_terms))
}

/// The `rho -> 0` limit of `phi(rho)/rho`: the mutual information between
/// the input and the channel output.
pub fn phi_rho_limit(channel: &Channel, input: &Distribution) -> Result<f64> {
    check_dims(channel, input, "phi limit")?;
    mutual_information(input, channel)
}

/// A certified maximiser of `phi` over input distributions.
#[derive(Debug, Clone)]
pub struct PhiMaximum {
    /// The maximising input found.
    pub input: Distribution,
    /// `phi` at that input.
    pub value: f64,
    /// Linear-maximisation gap of `exp(phi)` at the returned point. By
    /// concavity it upper-bounds the remaining suboptimality of
    /// `exp(phi)`, hence also of `phi` itself since `exp(phi) >= 1`.
    pub gap: f64,
    /// Gradient evaluations spent across restarts.
    pub iterations: usize,
}

struct PhiEval {
    ln_value: f64,
    value: f64,
    grad: Vec<f64>,
}

/// Transposed log transition table scaled for `phi`: entry `[z][l]` is
/// `ln W(z|l) / (1 - rho)`.
fn scaled_log_table(channel: &Channel, s: f64) -> Vec<Vec<f64>> {
    (0..channel.output_size())
        .map(|z| {
            (0..channel.input_size())
                .map(|l| {
                    let w = channel.prob(l, z);
                    if w > 0.0 {
                        w.ln() / s
                    } else {
                        f64::NEG_INFINITY
                    }
                })
                .collect()
        })
        .collect()
}

fn eval_phi_with_grad(ln_a: &[Vec<f64>], s: f64, p: &[f64]) -> PhiEval {
    let n = p.len();
    let ln_p: Vec<f64> = p.iter().map(|&x| x.ln()).collect();
    let mut ln_inner = Vec::with_capacity(ln_a.len());
    let mut buf = Vec::with_capacity(n);
    for row in ln_a {
        buf.clear();
        for l in 0..n {
            if row[l] != f64::NEG_INFINITY && p[l] > 0.0 {
                buf.push(ln_p[l] + row[l]);
            }
        }
        ln_inner.push(logsumexp(&buf));
    }
    let z_terms: Vec<f64> = ln_inner
        .iter()
        .filter(|&&v| v != f64::NEG_INFINITY)
        .map(|&v| s * v)
        .collect();
    let ln_value = logsumexp(&z_terms);
    // grad_l of exp(phi): s * sum_z inner_z^(s-1) a_{z,l}.
    let mut grad = vec![0.0; n];
    for (l, g) in grad.iter_mut().enumerate() {
        buf.clear();
        for (z, row) in ln_a.iter().enumerate() {
            if row[l] != f64::NEG_INFINITY && ln_inner[z] != f64::NEG_INFINITY {
                buf.push((s - 1.0) * ln_inner[z] + row[l]);
            }
        }
        *g = s * logsumexp(&buf).exp();
    }
    PhiEval {
        ln_value,
        value: ln_value.exp(),
        grad,
    }
}

fn floor_and_project(p: &mut [f64]) {
    project_to_simplex(p);
    let n = p.len() as f64;
    for x in p.iter_mut() {
        *x = (1.0 - INTERIOR_FLOOR * n) * *x + INTERIOR_FLOOR;
    }
}

/// Maximises `phi(rho, W, .)` over the input simplex by projected gradient
/// ascent with Barzilai-Borwein steps, a backtracking safeguard, and six
/// deterministic restarts (uniform plus five interior samples). Returns
/// once the concavity certificate (the linear-maximisation gap of
/// `exp(phi)`) falls below `tol`; otherwise reports the best iterate via
/// [`Error::NonConvergence`].
pub fn maximize_phi_over_input(rho: Rho, channel: &Channel, tol: f64) -> Result<PhiMaximum> {
    let r = rho.require_strictly_below_one("rho")?;
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::OutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let s = 1.0 - r;
    let n = channel.input_size();
    let ln_a = scaled_log_table(channel, s);

    let mut rng = ChaCha12Rng::seed_from_u64(PHI_OPT_SEED);
    let mut starts: Vec<Vec<f64>> = vec![vec![1.0 / n as f64; n]];
    for _ in 0..5 {
        starts.push(sample_simplex(&mut rng, n));
    }

    let mut total_iters = 0usize;
    let mut best_gap = f64::INFINITY;
    let mut best_point = starts[0].clone();
    let mut best_value = f64::NEG_INFINITY;

    for start in starts {
        let mut p = start;
        floor_and_project(&mut p);
        let mut eval = eval_phi_with_grad(&ln_a, s, &p);
        let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
        let mut step = 1.0f64;
        for _ in 0..MAX_ITER_PER_START {
            total_iters += 1;
            let max_g = eval.grad.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let gap = max_g - s * eval.value;
            if gap < best_gap {
                best_gap = gap;
                best_point = p.clone();
                best_value = eval.ln_value;
            }
            if gap <= tol {
                return Ok(PhiMaximum {
                    input: Distribution::new(p)?,
                    value: eval.ln_value,
                    gap,
                    iterations: total_iters,
                });
            }
            // Ascent direction on the log scale keeps steps well scaled.
            let dir: Vec<f64> = eval.grad.iter().map(|&g| g / eval.value).collect();
            if let Some((pp, pg)) = &prev {
                let mut num = 0.0;
                let mut den = 0.0;
                for l in 0..n {
                    let dp = p[l] - pp[l];
                    let dg = dir[l] - pg[l];
                    num += dp * dp;
                    den += dp * dg;
                }
                if den < 0.0 && num > 0.0 {
                    step = (num / -den).clamp(1e-12, 1e12);
                }
            }
            let mut accepted = false;
            let mut t = step;
            for _ in 0..60 {
                let mut cand: Vec<f64> = (0..n).map(|l| p[l] + t * dir[l]).collect();
                floor_and_project(&mut cand);
                if cand.iter().zip(&p).all(|(a, b)| a == b) {
                    t *= 0.5;
                    continue;
                }
                let cand_eval = eval_phi_with_grad(&ln_a, s, &cand);
                let advance: f64 =
                    kahan_sum((0..n).map(|l| dir[l] * (cand[l] - p[l])));
                if cand_eval.ln_value >= eval.ln_value + 0.25 * advance.max(0.0)
                    && cand_eval.ln_value >= eval.ln_value
                {
                    prev = Some((p.clone(), dir.clone()));
                    p = cand;
                    eval = cand_eval;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                // Numerically stalled on this start.
                break;
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: total_iters,
        residual: best_gap,
        best_value,
        best_point,
    })
}
