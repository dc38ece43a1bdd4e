//! Achievable rate triples `(R_1, R_e, R_0)` for the broadcast channel
//! with one confidential and one common message.
//!
//! A rate point is *certified* by exhibiting an auxiliary chain
//! `U -> V -> X -> (Y, Z)` whose informations satisfy the inner-bound
//! inequalities with nonnegative residuals. Three constraint sets are
//! supported:
//!
//! * [`RegionKind::Bcc`]: the general equivocation region (four
//!   inequalities);
//! * [`RegionKind::Strong`]: the full-secrecy slice `R_e = R_1` (two
//!   inequalities, which imply the general four);
//! * [`RegionKind::Bcd`]: degraded message sets, i.e. `V = X` and no
//!   secrecy requirement, over `(R_0, R'_1)`.
//!
//! [`inner_bound_sweep`] enumerates auxiliary chains (a deterministic
//! lattice over the `V = X` slice plus seeded interior samples), collects
//! the corner points each chain certifies, and Pareto-filters the result.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::information::{chain_informations, ChainInformations};
use crate::numeric::{format_sig, sample_simplex, simplex_lattice, Fingerprint};
use crate::probability::{Channel, Distribution, MarkovChainSpec};

pub use crate::bounds::RateTriple;

/// Residuals this close to zero (from below) still certify; anything more
/// negative is a violation.
pub const REGION_TOL: f64 = 1e-9;

/// Which inner-bound constraint set applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionKind {
    /// General region with an equivocation coordinate.
    Bcc,
    /// Full-secrecy slice `R_e = R_1`.
    Strong,
    /// Degraded message sets: `V = X`, rates `(R_0, R'_1)`, no secrecy.
    Bcd,
}

impl RegionKind {
    /// Constraint names, fixed order, as they appear in CSV headers.
    pub fn constraint_names(self) -> &'static [&'static str] {
        match self {
            RegionKind::Bcc => &[
                "equivocation_info",
                "equivocation_rate",
                "sum_rate",
                "common_rate",
            ],
            RegionKind::Strong => &["common_rate", "secrecy_gap"],
            RegionKind::Bcd => &["common_rate", "private_rate"],
        }
    }
}

impl std::fmt::Display for RegionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegionKind::Bcc => "bcc",
            RegionKind::Strong => "strong",
            RegionKind::Bcd => "bcd",
        })
    }
}

/// One inequality's slack: `rhs - lhs`, nonnegative when satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintResidual {
    /// Stable constraint name (see [`RegionKind::constraint_names`]).
    pub constraint: &'static str,
    /// Slack in nats.
    pub residual: f64,
}

/// A certified rate point together with its certifying chain.
#[derive(Debug, Clone)]
pub struct RegionPoint {
    /// The rates. For [`RegionKind::Bcd`] the private coordinate holds
    /// `R'_1` and the equivocation coordinate is zero.
    pub rates: RateTriple,
    /// The auxiliary chain that certifies them.
    pub chain: MarkovChainSpec,
    /// All constraint residuals, in the kind's fixed order.
    pub residuals: Vec<ConstraintResidual>,
    /// Fingerprint of the chain's tables, for CSV cross-referencing.
    pub fingerprint: String,
}

/// Outcome of a certification request.
#[derive(Debug, Clone)]
pub enum Certification {
    /// All residuals at least `-`[`REGION_TOL`].
    Certified(Box<RegionPoint>),
    /// At least one constraint violated; only the violated ones listed.
    Rejected {
        /// Constraints with residual below `-`[`REGION_TOL`].
        violations: Vec<ConstraintResidual>,
    },
}

impl Certification {
    /// True for the certified case.
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }
}

/// Digest of every table in the chain, stable across runs and platforms.
pub fn chain_fingerprint(chain: &MarkovChainSpec) -> String {
    let mut f = Fingerprint::new();
    f.push_usize(chain.p_u().len());
    for &p in chain.p_u().probs() {
        f.push_f64(p);
    }
    for ch in [
        chain.p_v_given_u(),
        chain.p_x_given_v(),
        chain.p_y_given_x(),
        chain.p_z_given_x(),
    ] {
        f.push_usize(ch.input_size());
        f.push_usize(ch.output_size());
        for x in 0..ch.input_size() {
            for &p in ch.row(x).probs() {
                f.push_f64(p);
            }
        }
    }
    f.finish()
}

fn finish_certification(
    kind_name: &'static str,
    chain: &MarkovChainSpec,
    rates: RateTriple,
    residuals: Vec<ConstraintResidual>,
) -> Certification {
    let violations: Vec<ConstraintResidual> = residuals
        .iter()
        .filter(|r| r.residual < -REGION_TOL)
        .copied()
        .collect();
    if violations.is_empty() {
        Certification::Certified(Box::new(RegionPoint {
            rates,
            chain: chain.clone(),
            residuals,
            fingerprint: chain_fingerprint(chain),
        }))
    } else {
        let _ = kind_name;
        Certification::Rejected { violations }
    }
}

/// Checks `(R_1, R_e, R_0)` against the general inner bound certified by
/// `chain`:
///
/// * `R_e <= I(V;Y|U) - I(V;Z|U)`
/// * `R_e <= R_1` (also a [`RateTriple`] invariant)
/// * `R_1 + R_0 <= I(V;Y|U) + min(I(U;Y), I(U;Z))`
/// * `R_0 <= min(I(U;Y), I(U;Z))`
pub fn certify_bcc(chain: &MarkovChainSpec, rates: RateTriple) -> Result<Certification> {
    let info = chain_informations(chain)?;
    Ok(certify_bcc_with(chain, rates, &info))
}

fn certify_bcc_with(
    chain: &MarkovChainSpec,
    rates: RateTriple,
    info: &ChainInformations,
) -> Certification {
    let common_cap = info.uy.min(info.uz);
    let residuals = vec![
        ConstraintResidual {
            constraint: "equivocation_info",
            residual: (info.vy_given_u - info.vz_given_u) - rates.re(),
        },
        ConstraintResidual {
            constraint: "equivocation_rate",
            residual: rates.r1() - rates.re(),
        },
        ConstraintResidual {
            constraint: "sum_rate",
            residual: (info.vy_given_u + common_cap) - (rates.r1() + rates.r0()),
        },
        ConstraintResidual {
            constraint: "common_rate",
            residual: common_cap - rates.r0(),
        },
    ];
    finish_certification("bcc", chain, rates, residuals)
}

/// Checks `(R_0, R_1)` against the full-secrecy slice (`R_e = R_1`):
///
/// * `R_0 <= min(I(U;Y), I(U;Z))`
/// * `R_1 <= I(V;Y|U) - I(V;Z|U)`
///
/// These two imply all four general constraints at `R_e = R_1`.
pub fn certify_strong(chain: &MarkovChainSpec, r0: f64, r1: f64) -> Result<Certification> {
    let rates = RateTriple::new(r1, r1, r0)?;
    let info = chain_informations(chain)?;
    Ok(certify_strong_with(chain, rates, &info))
}

fn certify_strong_with(
    chain: &MarkovChainSpec,
    rates: RateTriple,
    info: &ChainInformations,
) -> Certification {
    let residuals = vec![
        ConstraintResidual {
            constraint: "common_rate",
            residual: info.uy.min(info.uz) - rates.r0(),
        },
        ConstraintResidual {
            constraint: "secrecy_gap",
            residual: (info.vy_given_u - info.vz_given_u) - rates.r1(),
        },
    ];
    finish_certification("strong", chain, rates, residuals)
}

/// Checks `(R_0, R'_1)` against the degraded-message-set bound, which
/// requires `V = X` (identity inner kernel):
///
/// * `R_0 <= min(I(U;Y), I(U;Z))`
/// * `R'_1 <= I(X;Y|U)`
///
/// The returned rates carry `R'_1` in both the private slot and
/// `r1_prime`, with zero equivocation.
pub fn certify_bcd(chain: &MarkovChainSpec, r0: f64, r1_prime: f64) -> Result<Certification> {
    if !chain.has_identity_inner() {
        return Err(Error::invalid_argument(
            "degraded-message-set certification needs V = X (identity inner kernel)",
        ));
    }
    let rates = RateTriple::new(r1_prime, 0.0, r0)?.with_r1_prime(r1_prime)?;
    let info = chain_informations(chain)?;
    Ok(certify_bcd_with(chain, rates, &info))
}

fn certify_bcd_with(
    chain: &MarkovChainSpec,
    rates: RateTriple,
    info: &ChainInformations,
) -> Certification {
    let residuals = vec![
        ConstraintResidual {
            constraint: "common_rate",
            residual: info.uy.min(info.uz) - rates.r0(),
        },
        ConstraintResidual {
            constraint: "private_rate",
            residual: info.vy_given_u - rates.r1(),
        },
    ];
    finish_certification("bcd", chain, rates, residuals)
}

// --- sweeps -----------------------------------------------------------------

/// Sweep configuration. The lattice part enumerates `V = X` chains whose
/// `P_U` and `P_{X|U}` rows live on the `1/resolution` grid; the sampled
/// part draws `restarts` interior chains (sizes up to `max_u`, `max_v`)
/// from a seeded generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    /// Largest common-layer alphabet `|U|`.
    pub max_u: usize,
    /// Largest private-layer alphabet `|V|` for sampled chains (the
    /// lattice always uses `V = X`).
    pub max_v: usize,
    /// Lattice denominator.
    pub resolution: usize,
    /// Number of seeded interior chains.
    pub restarts: usize,
    /// Seed for the interior chains.
    pub seed: u64,
    /// Cap on the total number of candidate chains.
    pub max_candidates: usize,
    /// Reduce two-dimensional frontiers to their concave hull vertices.
    pub convex_hull: bool,
}

impl SweepGrid {
    /// Defaults sized for desk-scale channels: `|U| <= 3`, sampled
    /// `|V| <= |X| + 2`, quarter-resolution lattice, 200 interior chains.
    pub fn default_for(x_size: usize) -> Self {
        SweepGrid {
            max_u: 3,
            max_v: x_size + 2,
            resolution: 4,
            restarts: 200,
            seed: 0xB0C,
            max_candidates: 200_000,
            convex_hull: false,
        }
    }
}

fn compositions_count(dim: usize, denom: usize) -> u128 {
    // C(denom + dim - 1, dim - 1).
    let n = (denom + dim - 1) as u128;
    let k = (dim - 1) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Enumerates candidate chains for the sweep. Deterministic: the lattice
/// in odometer order, then the seeded samples.
fn candidate_chains(
    p_y_given_x: &Channel,
    p_z_given_x: &Channel,
    kind: RegionKind,
    grid: &SweepGrid,
) -> Result<Vec<MarkovChainSpec>> {
    let x_size = p_y_given_x.input_size();
    if grid.max_u == 0 || grid.resolution == 0 {
        return Err(Error::invalid_argument(
            "sweep grid needs max_u >= 1 and resolution >= 1",
        ));
    }
    if grid.max_v < x_size {
        return Err(Error::invalid_argument(format!(
            "sweep grid max_v = {} below the channel input size {x_size}",
            grid.max_v
        )));
    }
    let mut lattice_total: u128 = 0;
    for u_size in 1..=grid.max_u {
        lattice_total = lattice_total.saturating_add(
            compositions_count(u_size, grid.resolution)
                .saturating_mul(compositions_count(x_size, grid.resolution).saturating_pow(u_size as u32)),
        );
    }
    let total = lattice_total.saturating_add(grid.restarts as u128);
    if total > grid.max_candidates as u128 {
        return Err(Error::SizeCapExceeded {
            required: total,
            cap: grid.max_candidates,
        });
    }

    let mut chains = Vec::with_capacity(total as usize);
    let identity = Channel::identity(x_size);
    let row_lattice = simplex_lattice(x_size, grid.resolution);
    for u_size in 1..=grid.max_u {
        let u_lattice = simplex_lattice(u_size, grid.resolution);
        for p_u in &u_lattice {
            let p_u = Distribution::new(p_u.clone())?;
            // Odometer over one lattice row per U symbol.
            let mut idx = vec![0usize; u_size];
            loop {
                let rows: Vec<Vec<f64>> = idx.iter().map(|&i| row_lattice[i].clone()).collect();
                chains.push(MarkovChainSpec::new(
                    p_u.clone(),
                    Channel::from_rows(rows)?,
                    identity.clone(),
                    p_y_given_x.clone(),
                    p_z_given_x.clone(),
                )?);
                let mut pos = u_size;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < row_lattice.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
    }

    let mut rng = ChaCha12Rng::seed_from_u64(grid.seed);
    for _ in 0..grid.restarts {
        let u_size = rng.random_range(1..=grid.max_u);
        let v_size = if kind == RegionKind::Bcd {
            x_size
        } else {
            rng.random_range(x_size..=grid.max_v)
        };
        let p_u = Distribution::new(sample_simplex(&mut rng, u_size))?;
        let v_rows: Vec<Vec<f64>> = (0..u_size)
            .map(|_| sample_simplex(&mut rng, v_size))
            .collect();
        let x_kernel = if kind == RegionKind::Bcd {
            identity.clone()
        } else {
            let x_rows: Vec<Vec<f64>> =
                (0..v_size).map(|_| sample_simplex(&mut rng, x_size)).collect();
            Channel::from_rows(x_rows)?
        };
        chains.push(MarkovChainSpec::new(
            p_u,
            Channel::from_rows(v_rows)?,
            x_kernel,
            p_y_given_x.clone(),
            p_z_given_x.clone(),
        )?);
    }
    Ok(chains)
}

/// Corner points one chain certifies, by kind.
fn corner_points(chain: &MarkovChainSpec, kind: RegionKind) -> Result<Vec<RegionPoint>> {
    let info = chain_informations(chain)?;
    let r0_cap = info.uy.min(info.uz).max(0.0);
    let vy = info.vy_given_u.max(0.0);
    let gap = (info.vy_given_u - info.vz_given_u).max(0.0);
    let mut out = Vec::with_capacity(2);
    match kind {
        RegionKind::Strong => {
            let rates = RateTriple::new(gap, gap, r0_cap)?;
            if let Certification::Certified(p) = certify_strong_with(chain, rates, &info) {
                out.push(*p);
            }
        }
        RegionKind::Bcd => {
            for (r0, r1p) in [(r0_cap, vy), (0.0, vy + r0_cap)] {
                let rates = RateTriple::new(r1p, 0.0, r0)?.with_r1_prime(r1p)?;
                if let Certification::Certified(p) = certify_bcd_with(chain, rates, &info) {
                    out.push(*p);
                }
            }
        }
        RegionKind::Bcc => {
            let corners = [
                (r0_cap, vy, gap.min(vy)),
                (0.0, vy + r0_cap, gap.min(vy + r0_cap)),
            ];
            for (r0, r1, re) in corners {
                let rates = RateTriple::new(r1, re, r0)?;
                if let Certification::Certified(p) = certify_bcc_with(chain, rates, &info) {
                    out.push(*p);
                }
            }
        }
    }
    Ok(out)
}

fn point_key(p: &RegionPoint) -> (f64, f64, f64) {
    (p.rates.r0(), p.rates.r1(), p.rates.re())
}

/// Removes points weakly dominated in all coordinates by another point
/// (ties keep the first occurrence). Quadratic, fine at sweep sizes.
pub fn pareto_filter(points: Vec<RegionPoint>) -> Vec<RegionPoint> {
    let keys: Vec<(f64, f64, f64)> = points.iter().map(point_key).collect();
    let mut keep = Vec::with_capacity(points.len());
    'outer: for (i, ki) in keys.iter().enumerate() {
        for (j, kj) in keys.iter().enumerate() {
            if i == j {
                continue;
            }
            let dominates = kj.0 >= ki.0 && kj.1 >= ki.1 && kj.2 >= ki.2;
            let strictly = kj.0 > ki.0 || kj.1 > ki.1 || kj.2 > ki.2;
            if dominates && (strictly || j < i) {
                continue 'outer;
            }
        }
        keep.push(i);
    }
    let mut kept: Vec<RegionPoint> = Vec::with_capacity(keep.len());
    let mut points = points;
    // Drain in reverse so indices stay valid.
    for &i in keep.iter().rev() {
        kept.push(points.swap_remove(i));
    }
    kept.reverse();
    kept.sort_by(|a, b| {
        point_key(a)
            .0
            .total_cmp(&point_key(b).0)
            .then(point_key(a).1.total_cmp(&point_key(b).1))
            .then(point_key(a).2.total_cmp(&point_key(b).2))
    });
    kept
}

/// Keeps only the vertices of the concave majorant of a two-dimensional
/// `(r0, r1)` frontier. Input must already be Pareto-sorted ascending in
/// `r0`.
fn concave_hull_2d(points: Vec<RegionPoint>) -> Vec<RegionPoint> {
    if points.len() <= 2 {
        return points;
    }
    let mut hull: Vec<RegionPoint> = Vec::with_capacity(points.len());
    for p in points {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            let cross = (b.rates.r0() - a.rates.r0()) * (p.rates.r1() - a.rates.r1())
                - (b.rates.r1() - a.rates.r1()) * (p.rates.r0() - a.rates.r0());
            // b on or below the chord a-p: not a vertex of the majorant.
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Sweeps auxiliary chains and returns the Pareto frontier of certified
/// corner points, deterministically for a fixed grid.
pub fn inner_bound_sweep(
    p_y_given_x: &Channel,
    p_z_given_x: &Channel,
    kind: RegionKind,
    grid: &SweepGrid,
) -> Result<Vec<RegionPoint>> {
    if p_y_given_x.input_size() != p_z_given_x.input_size() {
        return Err(Error::DimensionMismatch {
            context: "receiver channels",
            left: p_y_given_x.input_size(),
            right: p_z_given_x.input_size(),
        });
    }
    let chains = candidate_chains(p_y_given_x, p_z_given_x, kind, grid)?;
    let nested: Result<Vec<Vec<RegionPoint>>> = chains
        .par_iter()
        .map(|chain| corner_points(chain, kind))
        .collect();
    let points: Vec<RegionPoint> = nested?.into_iter().flatten().collect();
    let frontier = pareto_filter(points);
    if grid.convex_hull && kind != RegionKind::Bcc {
        Ok(concave_hull_2d(frontier))
    } else {
        Ok(frontier)
    }
}

/// Renders sweep output as CSV: rates, one residual column per constraint
/// of the kind, and the certifying chain's fingerprint. All numbers carry
/// 15 significant digits.
pub fn sweep_to_csv(points: &[RegionPoint], kind: RegionKind) -> String {
    let mut out = String::new();
    out.push_str("r0,r1,re");
    for name in kind.constraint_names() {
        out.push_str(",res_");
        out.push_str(name);
    }
    out.push_str(",chain_fingerprint\n");
    for p in points {
        out.push_str(&format_sig(p.rates.r0(), 15));
        out.push(',');
        out.push_str(&format_sig(p.rates.r1(), 15));
        out.push(',');
        out.push_str(&format_sig(p.rates.re(), 15));
        for r in &p.residuals {
            out.push(',');
            out.push_str(&format_sig(r.residual, 15));
        }
        out.push(',');
        out.push_str(&p.fingerprint);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const H_005: f64 = 0.1985152433458726;
    const H_014: f64 = 0.40496348506393853;
    const DEGRADED_GAP: f64 = 0.20644824171806594; // h(0.14) - h(0.05)

    fn degraded_chain() -> MarkovChainSpec {
        MarkovChainSpec::new(
            Distribution::uniform(1),
            Channel::from_rows(vec![vec![0.5, 0.5]]).unwrap(),
            Channel::identity(2),
            Channel::binary_symmetric(0.05).unwrap(),
            Channel::binary_symmetric(0.14).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn strong_certification_accepts_the_gap_and_rejects_beyond_it() {
        let chain = degraded_chain();
        let cert = certify_strong(&chain, 0.0, DEGRADED_GAP - 1e-12).unwrap();
        assert!(cert.is_certified());
        let cert = certify_strong(&chain, 0.0, DEGRADED_GAP + 1e-3).unwrap();
        match cert {
            Certification::Rejected { violations } => {
                assert_eq!(violations.len(), 1);
                assert_eq!(violations[0].constraint, "secrecy_gap");
            }
            Certification::Certified(_) => panic!("rate above the gap certified"),
        }
        // The trivial common layer supports no common rate.
        let cert = certify_strong(&chain, 0.01, 0.1).unwrap();
        assert!(!cert.is_certified());
    }

    #[test]
    fn bcc_certification_reports_all_four_residuals() {
        let chain = MarkovChainSpec::new(
            Distribution::uniform(2),
            Channel::binary_symmetric(0.2).unwrap(),
            Channel::identity(2),
            Channel::binary_symmetric(0.05).unwrap(),
            Channel::binary_symmetric(0.14).unwrap(),
        )
        .unwrap();
        let info = chain_informations(&chain).unwrap();
        let rates = RateTriple::new(0.05, 0.02, 0.01).unwrap();
        let cert = certify_bcc(&chain, rates).unwrap();
        let Certification::Certified(point) = cert else {
            panic!("interior point must certify");
        };
        assert_eq!(point.residuals.len(), 4);
        let by_name: std::collections::HashMap<_, _> = point
            .residuals
            .iter()
            .map(|r| (r.constraint, r.residual))
            .collect();
        let common = info.uy.min(info.uz);
        assert!((by_name["common_rate"] - (common - 0.01)).abs() < 1e-15);
        assert!(
            (by_name["sum_rate"] - ((info.vy_given_u + common) - 0.06)).abs() < 1e-15
        );
        assert!(
            (by_name["equivocation_info"]
                - ((info.vy_given_u - info.vz_given_u) - 0.02))
                .abs()
                < 1e-15
        );
        assert!((by_name["equivocation_rate"] - 0.03).abs() < 1e-15);
    }

    #[test]
    fn bcd_certification_requires_the_identity_inner_kernel() {
        let chain = degraded_chain();
        assert!(certify_bcd(&chain, 0.0, 0.1).unwrap().is_certified());
        let non_identity = MarkovChainSpec::new(
            Distribution::uniform(1),
            Channel::from_rows(vec![vec![0.5, 0.5]]).unwrap(),
            Channel::binary_symmetric(0.1).unwrap(),
            Channel::binary_symmetric(0.05).unwrap(),
            Channel::binary_symmetric(0.14).unwrap(),
        )
        .unwrap();
        assert!(certify_bcd(&non_identity, 0.0, 0.1).is_err());
    }

    #[test]
    fn pareto_filter_drops_dominated_points_and_dedupes_ties() {
        let chain = degraded_chain();
        let mk = |r0: f64, r1: f64| RegionPoint {
            rates: RateTriple::new(r1, r1.min(0.0_f64.max(r1)), r0).unwrap(),
            chain: chain.clone(),
            residuals: vec![],
            fingerprint: chain_fingerprint(&chain),
        };
        let pts = vec![
            mk(0.1, 0.5),
            mk(0.2, 0.4),
            mk(0.05, 0.45), // dominated by (0.1, 0.5)
            mk(0.1, 0.5),   // duplicate
            mk(0.3, 0.1),
        ];
        let kept = pareto_filter(pts);
        let keys: Vec<(f64, f64)> = kept
            .iter()
            .map(|p| (p.rates.r0(), p.rates.r1()))
            .collect();
        assert_eq!(keys, vec![(0.1, 0.5), (0.2, 0.4), (0.3, 0.1)]);
    }

    #[test]
    fn sweep_recovers_the_degraded_bsc_secrecy_gap() {
        let y = Channel::binary_symmetric(0.05).unwrap();
        let z = Channel::binary_symmetric(0.14).unwrap();
        let mut grid = SweepGrid::default_for(2);
        grid.restarts = 50;
        let points = inner_bound_sweep(&y, &z, RegionKind::Strong, &grid).unwrap();
        assert!(!points.is_empty());
        let best_r1 = points
            .iter()
            .map(|p| p.rates.r1())
            .fold(f64::NEG_INFINITY, f64::max);
        // The uniform V = X lattice chain achieves exactly the gap, and no
        // admissible chain exceeds it for a degraded pair.
        assert!(
            (best_r1 - DEGRADED_GAP).abs() < 1e-12,
            "best r1 {best_r1} vs gap {DEGRADED_GAP}"
        );
        let _ = (H_005, H_014);
    }

    #[test]
    fn sweep_is_deterministic_and_its_points_certify() {
        let y = Channel::binary_symmetric(0.1).unwrap();
        let z = Channel::from_rows(vec![vec![0.75, 0.25], vec![0.3, 0.7]]).unwrap();
        let mut grid = SweepGrid::default_for(2);
        grid.restarts = 40;
        grid.max_u = 2;
        let a = inner_bound_sweep(&y, &z, RegionKind::Bcc, &grid).unwrap();
        let b = inner_bound_sweep(&y, &z, RegionKind::Bcc, &grid).unwrap();
        assert_eq!(a.len(), b.len());
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(point_key(p), point_key(q));
            assert_eq!(p.fingerprint, q.fingerprint);
        }
        for p in &a {
            assert!(p.residuals.iter().all(|r| r.residual >= -REGION_TOL));
            // Re-certify from scratch off the stored chain.
            let again = certify_bcc(&p.chain, p.rates).unwrap();
            assert!(again.is_certified());
        }
    }

    #[test]
    fn bcd_sweep_time_shares_common_into_private_rate() {
        let y = Channel::binary_symmetric(0.05).unwrap();
        let z = Channel::binary_symmetric(0.14).unwrap();
        let mut grid = SweepGrid::default_for(2);
        grid.restarts = 20;
        grid.max_u = 2;
        let points = inner_bound_sweep(&y, &z, RegionKind::Bcd, &grid).unwrap();
        assert!(!points.is_empty());
        // Every point has re = 0 and r1_prime mirrored into r1.
        for p in &points {
            assert_eq!(p.rates.re(), 0.0);
            assert_eq!(p.rates.r1_prime(), Some(p.rates.r1()));
        }
        // Zero-common corner reaches at least I(X;Y) at uniform input.
        let ln2 = std::f64::consts::LN_2;
        let best = points
            .iter()
            .map(|p| p.rates.r1())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(best >= ln2 - H_005 - 1e-9, "best {best}");
    }

    #[test]
    fn hull_filter_keeps_only_majorant_vertices() {
        let chain = degraded_chain();
        let mk = |r0: f64, r1: f64| RegionPoint {
            rates: RateTriple::new(r1, 0.0, r0).unwrap(),
            chain: chain.clone(),
            residuals: vec![],
            fingerprint: String::new(),
        };
        // (0.5, 0.55) lies below the chord from (0,1) to (1, 0.4).
        let pts = vec![mk(0.0, 1.0), mk(0.5, 0.55), mk(1.0, 0.4)];
        let hull = concave_hull_2d(pts);
        let keys: Vec<f64> = hull.iter().map(|p| p.rates.r0()).collect();
        assert_eq!(keys, vec![0.0, 1.0]);
        // A genuinely concave middle point survives.
        let pts = vec![mk(0.0, 1.0), mk(0.5, 0.9), mk(1.0, 0.4)];
        assert_eq!(concave_hull_2d(pts).len(), 3);
    }

    #[test]
    fn csv_round_trips_rates_and_residuals() {
        let y = Channel::binary_symmetric(0.05).unwrap();
        let z = Channel::binary_symmetric(0.14).unwrap();
        let mut grid = SweepGrid::default_for(2);
        grid.restarts = 10;
        grid.max_u = 1;
        let points = inner_bound_sweep(&y, &z, RegionKind::Strong, &grid).unwrap();
        let csv = sweep_to_csv(&points, RegionKind::Strong);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "r0,r1,re,res_common_rate,res_secrecy_gap,chain_fingerprint"
        );
        for (line, point) in lines.zip(&points) {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 6);
            let r0: f64 = cells[0].parse().unwrap();
            let r1: f64 = cells[1].parse().unwrap();
            assert!((r0 - point.rates.r0()).abs() <= 1e-14 * point.rates.r0().abs().max(1.0));
            assert!((r1 - point.rates.r1()).abs() <= 1e-14 * point.rates.r1().abs().max(1.0));
            assert_eq!(cells[5], point.fingerprint);
        }
    }

    #[test]
    fn oversized_grids_are_rejected_up_front() {
        let y = Channel::binary_symmetric(0.05).unwrap();
        let z = Channel::binary_symmetric(0.14).unwrap();
        let mut grid = SweepGrid::default_for(2);
        grid.max_candidates = 10;
        let err = inner_bound_sweep(&y, &z, RegionKind::Strong, &grid).unwrap_err();
        assert!(matches!(err, Error::SizeCapExceeded { .. }));
    }
}
