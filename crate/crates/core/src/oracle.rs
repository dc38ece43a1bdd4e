//! Ground truth at desk scale: exact hashed leakage `I(F(L); Z | F)` by
//! exhaustive enumeration, a tiny simulator for the layered random-code
//! construction, and the seeded soundness corpus that the `verify` front
//! end replays.
//!
//! Everything here trades scale for exactness: alphabets are capped so
//! joints can be enumerated outright, and every averaged quantity is
//! accumulated sequentially in a fixed order so reruns are byte-stable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    code_based_bound, pa_bound_discrete, random_coding_leakage_bound, resolvability_bound,
    BoundResult, CodeBasedBound, RateTriple,
};
use crate::error::{Error, Result};
use crate::gallager::Rho;
use crate::hashing::{HashFamily, LinearHash};
use crate::information::mutual_information_of_joint;
use crate::numeric::{kahan_sum, sample_simplex, Fingerprint};
use crate::probability::{pack_word, Channel, Distribution, JointDistribution, MarkovChainSpec};

/// Master seed for the regression corpus.
pub const CORPUS_MASTER_SEED: u64 = 0x5ECC_0DE5;

/// Largest hash input size (bits) the exact paths accept.
pub const MAX_EXACT_K: usize = 4;

/// Largest blocklength the end-to-end simulator enumerates.
pub const MAX_SIMULATED_N: usize = 3;

/// A fully enumerable hashed-leakage setting: `L` uniform on `k`-bit
/// words, an eavesdropper channel on those words, and the complete
/// surjective-hash family with `m`-bit outputs.
#[derive(Debug, Clone)]
pub struct TinyInstance {
    k: usize,
    m: usize,
    channel: Channel,
    family: HashFamily,
}

impl TinyInstance {
    /// Requires `channel.input_size() == 2^k` and `k <=` [`MAX_EXACT_K`].
    pub fn new(k: usize, m: usize, channel: Channel) -> Result<Self> {
        if k == 0 || k > MAX_EXACT_K {
            return Err(Error::EnumerationCap { k, cap: MAX_EXACT_K });
        }
        if channel.input_size() != 1 << k {
            return Err(Error::DimensionMismatch {
                context: "hash input alphabet",
                left: channel.input_size(),
                right: 1 << k,
            });
        }
        let family = HashFamily::new(k, m)?;
        Ok(TinyInstance { k, m, channel, family })
    }

    /// Source length in bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Secret length in bits.
    pub fn m(&self) -> usize {
        self.m
    }

    /// The eavesdropper channel on `k`-bit words.
    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    /// The hash family being averaged over.
    pub fn family(&self) -> &HashFamily {
        &self.family
    }
}

/// Joint law of `(F(L), Z)` for one hash member, with `L` uniform.
fn member_joint(member: &LinearHash, channel: &Channel) -> Result<JointDistribution> {
    let s_size = 1usize << member.m();
    let l_size = channel.input_size();
    let z_size = channel.output_size();
    let p_l = 1.0 / l_size as f64;
    let mut table = vec![0.0; s_size * z_size];
    for l in 0..l_size {
        let s = member.apply(l as u64)? as usize;
        for z in 0..z_size {
            table[s * z_size + z] += p_l * channel.prob(l, z);
        }
    }
    JointDistribution::from_table(s_size, z_size, table)
}

/// Exact `I(f(L); Z)` in nats for one member, `L` uniform.
pub fn member_leakage(member: &LinearHash, channel: &Channel) -> Result<f64> {
    Ok(mutual_information_of_joint(&member_joint(member, channel)?))
}

/// Exact `I(F(L); Z | F)` in nats: the average of [`member_leakage`]
/// over every family member, accumulated in enumeration order.
pub fn exact_leakage(instance: &TinyInstance) -> Result<f64> {
    let mut terms = Vec::with_capacity(instance.family.member_count() as usize);
    for member in instance.family.members() {
        terms.push(member_leakage(&member, &instance.channel)?);
    }
    let count = terms.len() as f64;
    Ok(kahan_sum(terms) / count)
}

// --- tiny codebooks ---------------------------------------------------------

/// One realised two-layer codebook: a `U`-word per common index `e` and a
/// `V`-word per `(b, e)` pair, drawn from the chain's laws.
#[derive(Debug, Clone)]
pub struct TinyCode {
    n: usize,
    u_codewords: Vec<Vec<usize>>,
    v_codewords: Vec<Vec<Vec<usize>>>,
    spec: MarkovChainSpec,
    seed: u64,
}

impl TinyCode {
    /// Blocklength.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of private indices `|B|`.
    pub fn b_size(&self) -> usize {
        self.v_codewords.len()
    }

    /// Number of common indices `|E|`.
    pub fn e_size(&self) -> usize {
        self.u_codewords.len()
    }

    /// The `U`-word for common index `e`.
    pub fn u_codeword(&self, e: usize) -> &[usize] {
        &self.u_codewords[e]
    }

    /// The `V`-word for pair `(b, e)`.
    pub fn v_codeword(&self, b: usize, e: usize) -> &[usize] {
        &self.v_codewords[b][e]
    }

    /// The chain the codewords were drawn from.
    pub fn spec(&self) -> &MarkovChainSpec {
        &self.spec
    }

    /// The sampling seed.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Digest of the realised codewords plus the seed.
    pub fn fingerprint(&self) -> String {
        let mut f = Fingerprint::new();
        f.push_u64(self.seed);
        f.push_usize(self.n);
        for w in &self.u_codewords {
            for &letter in w {
                f.push_usize(letter);
            }
        }
        for per_b in &self.v_codewords {
            for w in per_b {
                for &letter in w {
                    f.push_usize(letter);
                }
            }
        }
        f.finish()
    }

    /// Empirical distribution (with multiplicity) of the `|B| * |E|`
    /// `V`-words on the packed `n`-letter alphabet.
    pub fn empirical_v_law(&self) -> Result<Distribution> {
        let v_size = self.spec.p_x_given_v().input_size();
        let mut packed_size = 1usize;
        for _ in 0..self.n {
            packed_size = packed_size
                .checked_mul(v_size)
                .ok_or_else(|| Error::invalid_argument("packed codeword alphabet overflows"))?;
        }
        let total = (self.b_size() * self.e_size()) as f64;
        let mut mass = vec![0.0; packed_size];
        for per_b in &self.v_codewords {
            for w in per_b {
                mass[pack_word(w, v_size)] += 1.0 / total;
            }
        }
        Distribution::new(mass)
    }
}

fn draw_letter<R: Rng>(rng: &mut R, dist: &Distribution) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in dist.probs().iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    dist.len() - 1
}

/// Draws a codebook: `U`-words i.i.d. from `P_U`, then for each `(b, e)`
/// a `V`-word i.i.d. from `P_{V|U}` conditioned on the letters of the
/// `e`-th `U`-word. Reproducible from the seed.
pub fn sample_codebook(
    spec: &MarkovChainSpec,
    n: usize,
    b_size: usize,
    e_size: usize,
    seed: u64,
) -> Result<TinyCode> {
    if n == 0 || b_size == 0 || e_size == 0 {
        return Err(Error::invalid_argument(
            "codebook needs n >= 1, b_size >= 1, e_size >= 1",
        ));
    }
    let letters = b_size
        .checked_mul(e_size)
        .and_then(|c| c.checked_mul(n))
        .filter(|&c| c <= 10_000_000)
        .ok_or_else(|| Error::invalid_argument("codebook letter count exceeds 10^7"))?;
    let _ = letters;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let p_u = spec.p_u();
    let u_codewords: Vec<Vec<usize>> = (0..e_size)
        .map(|_| (0..n).map(|_| draw_letter(&mut rng, p_u)).collect())
        .collect();
    let mut v_codewords = Vec::with_capacity(b_size);
    for _ in 0..b_size {
        let mut per_b = Vec::with_capacity(e_size);
        for u_word in &u_codewords {
            per_b.push(
                u_word
                    .iter()
                    .map(|&u| draw_letter(&mut rng, spec.p_v_given_u().row(u)))
                    .collect(),
            );
        }
        v_codewords.push(per_b);
    }
    Ok(TinyCode {
        n,
        u_codewords,
        v_codewords,
        spec: spec.clone(),
        seed,
    })
}

// --- end-to-end simulation ----------------------------------------------------

/// Exact leakage of one realised codebook next to the two bounds that
/// must dominate it.
#[derive(Debug, Clone)]
pub struct EndToEndLeakage {
    /// Exact `I(F(B); Z^n | F)`, family-averaged.
    pub exact: f64,
    /// The per-letter random-coding bound at its best grid `rho`; it
    /// dominates the codebook-ensemble average, not each realisation.
    pub ensemble_bound: BoundResult,
    /// The realised-codebook bound at its best grid `rho`; it dominates
    /// this specific codebook.
    pub code_bound: CodeBasedBound,
    /// The rates the bounds were evaluated at.
    pub rates: RateTriple,
}

/// `rho` grid used whenever a closed search is not needed: `i/points`
/// with the endpoint nudged inside the open interval for the functionals
/// that exclude `rho = 1`.
fn rho_grid(points: usize, open_at_one: bool) -> Vec<Rho> {
    (1..=points)
        .map(|i| {
            let mut r = i as f64 / points as f64;
            if open_at_one && i == points {
                r = 1.0 - 1e-6;
            }
            Rho::new(r).expect("grid point inside (0, 1]")
        })
        .collect()
}

/// Exact conditional law of `Z^n` given each private index `b`, with the
/// common index uniform and the artificial noise and channel folded in:
/// `p(z^n | b) = (1/|E|) sum_e prod_i Q(z_i | v_i(b, e))`.
fn z_word_law_given_b(code: &TinyCode) -> Result<Vec<Vec<f64>>> {
    let z_given_v = code.spec().z_given_v()?;
    let z_size = z_given_v.output_size();
    let mut z_pow = 1usize;
    for _ in 0..code.n() {
        z_pow = z_pow
            .checked_mul(z_size)
            .filter(|&c| c <= 1_000_000)
            .ok_or_else(|| Error::invalid_argument("z-word alphabet exceeds 10^6"))?;
    }
    let e_weight = 1.0 / code.e_size() as f64;
    let mut rows = Vec::with_capacity(code.b_size());
    for b in 0..code.b_size() {
        let mut row = vec![0.0; z_pow];
        let mut word = vec![0usize; code.n()];
        for (zw, slot) in row.iter_mut().enumerate() {
            let mut rem = zw;
            for i in (0..code.n()).rev() {
                word[i] = rem % z_size;
                rem /= z_size;
            }
            let terms: Vec<f64> = (0..code.e_size())
                .map(|e| {
                    let v_word = code.v_codeword(b, e);
                    let mut p = e_weight;
                    for (i, &z) in word.iter().enumerate() {
                        p *= z_given_v.prob(v_word[i], z);
                    }
                    p
                })
                .collect();
            *slot = kahan_sum(terms);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Runs the full construction on one realised codebook: hash the uniform
/// private index through every family member, marginalise the common
/// index, artificial noise, and channel exactly, and compare the measured
/// leakage against the two bounds. Caps: `n <=` [`MAX_SIMULATED_N`],
/// `2^family.k == b_size`.
pub fn end_to_end_leakage(code: &TinyCode, family: &HashFamily) -> Result<EndToEndLeakage> {
    if code.n() > MAX_SIMULATED_N {
        return Err(Error::invalid_argument(format!(
            "end-to-end enumeration caps at n = {MAX_SIMULATED_N}, got {}",
            code.n()
        )));
    }
    if code.b_size() != 1 << family.k() {
        return Err(Error::DimensionMismatch {
            context: "hash domain vs private indices",
            left: 1 << family.k(),
            right: code.b_size(),
        });
    }
    let z_rows = z_word_law_given_b(code)?;
    let z_pow = z_rows[0].len();
    let s_size = 1usize << family.m();
    let b_weight = 1.0 / code.b_size() as f64;

    let mut terms = Vec::with_capacity(family.member_count() as usize);
    for member in family.members() {
        let mut table = vec![0.0; s_size * z_pow];
        for (b, z_row) in z_rows.iter().enumerate() {
            let s = member.apply(b as u64)? as usize;
            for (z, &p) in z_row.iter().enumerate() {
                table[s * z_pow + z] += b_weight * p;
            }
        }
        terms.push(mutual_information_of_joint(&JointDistribution::from_table(
            s_size, z_pow, table,
        )?));
    }
    let exact = kahan_sum(terms) / family.member_count() as f64;

    let n = code.n() as f64;
    let r1 = family.m() as f64 * std::f64::consts::LN_2 / n;
    let r1_prime = family.k() as f64 * std::f64::consts::LN_2 / n;
    let rates = RateTriple::new(r1, 0.0, 0.0)?.with_r1_prime(r1_prime)?;

    let mut ensemble_bound: Option<BoundResult> = None;
    for rho in rho_grid(20, true) {
        let b = random_coding_leakage_bound(code.spec(), &rates, rho, code.n())?;
        if ensemble_bound.as_ref().is_none_or(|best| b.value < best.value) {
            ensemble_bound = Some(b);
        }
    }

    let empirical = code.empirical_v_law()?;
    let z_given_v = code.spec().z_given_v()?;
    let mut code_bound: Option<CodeBasedBound> = None;
    for rho in rho_grid(20, true) {
        let b = code_based_bound(
            &empirical,
            &z_given_v,
            code.n(),
            s_size as u64,
            code.b_size() as u64,
            code.e_size() as u64,
            rho,
            crate::probability::DEFAULT_SIZE_CAP,
        )?;
        let key = b.exact.as_ref().unwrap_or(&b.relaxed).value;
        let best_key = code_bound
            .as_ref()
            .map(|c| c.exact.as_ref().unwrap_or(&c.relaxed).value);
        if best_key.is_none_or(|bk| key < bk) {
            code_bound = Some(b);
        }
    }

    Ok(EndToEndLeakage {
        exact,
        ensemble_bound: ensemble_bound.expect("nonempty rho grid"),
        code_bound: code_bound.expect("nonempty rho grid"),
        rates,
    })
}

// --- soundness corpus ---------------------------------------------------------

/// Shape of the generated corpus.
#[derive(Debug, Clone)]
pub struct CorpusParams {
    /// Number of instances.
    pub instances: usize,
    /// Largest source length in bits (`k` is drawn from `2..=max_k`).
    pub max_k: usize,
    /// Largest eavesdropper output alphabet (drawn from `2..=max_z`).
    pub max_z: usize,
    /// Number of `rho` grid points per bound.
    pub rho_grid: usize,
    /// Master seed; each instance derives its own stream from it.
    pub seed: u64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            instances: 200,
            max_k: MAX_EXACT_K,
            max_z: 6,
            rho_grid: 20,
            seed: CORPUS_MASTER_SEED,
        }
    }
}

/// One corpus instance's outcome: the exact leakage, the two bound
/// values at their best grid `rho`, and the margins (bound minus exact).
#[derive(Debug, Clone, Serialize)]
pub struct CorpusRecord {
    /// Position in the corpus.
    pub id: usize,
    /// Source bits.
    pub k: usize,
    /// Secret bits.
    pub m: usize,
    /// Eavesdropper output alphabet size.
    pub z_size: usize,
    /// Digest of the generated channel and sizes.
    pub fingerprint: String,
    /// Exact `I(F(L); Z | F)` in nats.
    pub exact: f64,
    /// Best hashed-leakage bound over the grid.
    pub pa_value: f64,
    /// Its `rho`.
    pub pa_rho: f64,
    /// Best resolvability-route bound over the grid.
    pub resolvability_value: f64,
    /// Its `rho`.
    pub resolvability_rho: f64,
    /// `pa_value - exact`.
    pub margin_pa: f64,
    /// `resolvability_value - exact`.
    pub margin_resolvability: f64,
    /// Both margins at least `-1e-9`.
    pub sound: bool,
}

/// Slack below which a margin counts as a violation.
pub const SOUNDNESS_TOL: f64 = -1e-9;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A random channel whose rows mix a Dirichlet(1) draw with the uniform
/// row (weights 0.8 and 0.2), keeping every entry bounded away from zero
/// so log-domain functionals stay well conditioned.
pub fn mixed_random_channel<R: Rng>(
    rng: &mut R,
    input_size: usize,
    output_size: usize,
) -> Result<Channel> {
    if output_size == 0 {
        return Err(Error::invalid_argument("output alphabet must be nonempty"));
    }
    let floor = 0.2 / output_size as f64;
    let rows: Vec<Vec<f64>> = (0..input_size)
        .map(|_| {
            sample_simplex(rng, output_size)
                .into_iter()
                .map(|p| 0.8 * p + floor)
                .collect()
        })
        .collect();
    Channel::from_rows(rows)
}

fn instance_fingerprint(k: usize, m: usize, channel: &Channel) -> String {
    let mut f = Fingerprint::new();
    f.push_usize(k);
    f.push_usize(m);
    f.push_usize(channel.output_size());
    for l in 0..channel.input_size() {
        for &p in channel.row(l).probs() {
            f.push_f64(p);
        }
    }
    f.finish()
}

fn sweep_one(params: &CorpusParams, id: usize) -> Result<CorpusRecord> {
    let stream_seed = splitmix64(params.seed ^ (id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut rng = ChaCha12Rng::seed_from_u64(stream_seed);
    let k = rng.random_range(2..=params.max_k);
    let m = rng.random_range(1..k);
    let z_size = rng.random_range(2..=params.max_z);
    let channel = mixed_random_channel(&mut rng, 1 << k, z_size)?;
    let instance = TinyInstance::new(k, m, channel)?;
    let exact = exact_leakage(&instance)?;

    let m_size = 1u64 << m;
    let l_size = 1u64 << k;
    let mut pa_best: Option<(f64, f64)> = None;
    for rho in rho_grid(params.rho_grid, false) {
        let b = pa_bound_discrete(rho, m_size, instance.channel())?;
        if pa_best.is_none_or(|(_, v)| b.value < v) {
            pa_best = Some((rho.value(), b.value));
        }
    }
    let mut res_best: Option<(f64, f64)> = None;
    for rho in rho_grid(params.rho_grid, true) {
        let b = resolvability_bound(rho, m_size, 1, l_size, instance.channel())?;
        if res_best.is_none_or(|(_, v)| b.value < v) {
            res_best = Some((rho.value(), b.value));
        }
    }
    let (pa_rho, pa_value) = pa_best.expect("nonempty rho grid");
    let (resolvability_rho, resolvability_value) = res_best.expect("nonempty rho grid");
    let margin_pa = pa_value - exact;
    let margin_resolvability = resolvability_value - exact;
    Ok(CorpusRecord {
        id,
        k,
        m,
        z_size,
        fingerprint: instance_fingerprint(k, m, instance.channel()),
        exact,
        pa_value,
        pa_rho,
        resolvability_value,
        resolvability_rho,
        margin_pa,
        margin_resolvability,
        sound: margin_pa >= SOUNDNESS_TOL && margin_resolvability >= SOUNDNESS_TOL,
    })
}

/// Generates the corpus and checks every instance's bounds against its
/// exact leakage. Instances are independent and run in parallel; each
/// derives its own generator stream, so the output is a pure function of
/// the parameters.
pub fn run_soundness_sweep(params: &CorpusParams) -> Result<Vec<CorpusRecord>> {
    if params.instances == 0 {
        return Err(Error::invalid_argument("corpus needs at least one instance"));
    }
    if params.max_k < 2 || params.max_k > MAX_EXACT_K {
        return Err(Error::invalid_argument(format!(
            "max_k must lie in 2..={MAX_EXACT_K}"
        )));
    }
    if params.max_z < 2 {
        return Err(Error::invalid_argument("max_z must be at least 2"));
    }
    if params.rho_grid == 0 {
        return Err(Error::invalid_argument("rho grid needs at least one point"));
    }
    (0..params.instances)
        .into_par_iter()
        .map(|id| sweep_one(params, id))
        .collect()
}

/// One JSON object per record, newline terminated, in corpus order.
pub fn corpus_to_jsonl(records: &[CorpusRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("corpus records serialize"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probability::product_channel;

    #[test]
    fn constant_channel_leaks_nothing() {
        let rows = vec![vec![0.3, 0.7]; 4];
        let instance = TinyInstance::new(2, 1, Channel::from_rows(rows).unwrap()).unwrap();
        let v = exact_leakage(&instance).unwrap();
        assert!(v.abs() < 1e-12, "independent Z must give zero leakage, got {v}");
    }

    #[test]
    fn noiseless_two_bit_source_leaks_exactly_one_bit_per_member() {
        let instance = TinyInstance::new(2, 1, Channel::identity(4)).unwrap();
        assert_eq!(instance.family().member_count(), 3);
        let ln2 = std::f64::consts::LN_2;
        for member in instance.family().members() {
            let v = member_leakage(&member, instance.channel()).unwrap();
            assert!(
                (v - ln2).abs() < 1e-12,
                "noiseless member must reveal its full output bit, got {v}"
            );
        }
        let avg = exact_leakage(&instance).unwrap();
        assert!((avg - ln2).abs() < 1e-12, "family average drifted: {avg}");
    }

    #[test]
    fn coordinate_projections_match_under_symmetric_per_bit_noise() {
        let per_bit = Channel::binary_symmetric(0.1).unwrap();
        let word_channel = product_channel(&per_bit, 2).unwrap();
        // First letter is the most significant bit of the packed word.
        let first = LinearHash::new(2, vec![0b10]).unwrap();
        let second = LinearHash::new(2, vec![0b01]).unwrap();
        let a = member_leakage(&first, &word_channel).unwrap();
        let b = member_leakage(&second, &word_channel).unwrap();
        assert!(a > 0.0 && a < std::f64::consts::LN_2, "projection leakage off scale: {a}");
        assert!(
            (a - b).abs() < 1e-13,
            "identical per-bit noise must treat both projections alike: {a} vs {b}"
        );
    }

    #[test]
    fn relabeling_the_eavesdropper_alphabet_changes_nothing() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let channel = mixed_random_channel(&mut rng, 8, 4).unwrap();
        let permuted = Channel::from_rows(
            (0..8)
                .map(|l| {
                    let r = channel.row(l).probs();
                    vec![r[2], r[0], r[3], r[1]]
                })
                .collect(),
        )
        .unwrap();
        let a = exact_leakage(&TinyInstance::new(3, 2, channel).unwrap()).unwrap();
        let b = exact_leakage(&TinyInstance::new(3, 2, permuted).unwrap()).unwrap();
        assert!(
            (a - b).abs() < 1e-12,
            "mutual information must ignore output labels: {a} vs {b}"
        );
    }

    #[test]
    fn hashed_output_is_uniform_for_every_member() {
        for (k, m) in [(3usize, 1usize), (3, 2), (4, 2)] {
            let family = HashFamily::new(k, m).unwrap();
            let expected = 1usize << (k - m);
            for member in family.members() {
                let mut counts = vec![0usize; 1 << m];
                for l in 0..(1u64 << k) {
                    counts[member.apply(l).unwrap() as usize] += 1;
                }
                assert!(
                    counts.iter().all(|&c| c == expected),
                    "surjective linear maps must split the domain evenly: {counts:?}"
                );
            }
        }
    }

    #[test]
    fn best_member_leakage_grows_with_output_bits() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let channel = mixed_random_channel(&mut rng, 8, 5).unwrap();
        let mut prev = -1.0;
        for m in 1..=3usize {
            let family = HashFamily::new(3, m).unwrap();
            let best = family
                .members()
                .map(|f| member_leakage(&f, &channel).unwrap())
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                best >= prev - 1e-12,
                "a wider hash can always embed a narrower one: m = {m}, {best} < {prev}"
            );
            prev = best;
        }
    }

    fn simple_chain(z_cross: f64) -> MarkovChainSpec {
        MarkovChainSpec::new(
            Distribution::uniform(1),
            Channel::from_rows(vec![vec![0.5, 0.5]]).unwrap(),
            Channel::identity(2),
            Channel::identity(2),
            Channel::binary_symmetric(z_cross).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn codebooks_are_seeded_and_structurally_sound() {
        let chain = simple_chain(0.2);
        let a = sample_codebook(&chain, 2, 4, 3, 77).unwrap();
        let b = sample_codebook(&chain, 2, 4, 3, 77).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint(), "same seed must reproduce the codebook");
        let c = sample_codebook(&chain, 2, 4, 3, 78).unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint(), "neighbouring seeds must differ");
        assert_eq!(a.b_size(), 4);
        assert_eq!(a.e_size(), 3);
        for e in 0..3 {
            assert_eq!(a.u_codeword(e).len(), 2);
            for b_idx in 0..4 {
                assert!(a.v_codeword(b_idx, e).iter().all(|&v| v < 2));
            }
        }
        let law = a.empirical_v_law().unwrap();
        assert_eq!(law.len(), 4);
    }

    #[test]
    fn sampled_letter_frequencies_track_the_source_law() {
        let chain = MarkovChainSpec::new(
            Distribution::new(vec![0.7, 0.3]).unwrap(),
            Channel::identity(2),
            Channel::identity(2),
            Channel::identity(2),
            Channel::identity(2),
        )
        .unwrap();
        let code = sample_codebook(&chain, 1, 1, 10_000, 5).unwrap();
        let ones: usize = (0..10_000).filter(|&e| code.u_codeword(e)[0] == 1).count();
        let freq = ones as f64 / 10_000.0;
        // Four standard deviations around 0.3 for 10^4 draws.
        assert!(
            (freq - 0.3).abs() < 0.02,
            "empirical letter frequency {freq} strayed from 0.3"
        );
    }

    #[test]
    fn blind_eavesdropper_measures_zero_and_bounds_stay_above() {
        let chain = simple_chain(0.5);
        let code = sample_codebook(&chain, 2, 4, 2, 9).unwrap();
        let family = HashFamily::new(2, 1).unwrap();
        let report = end_to_end_leakage(&code, &family).unwrap();
        assert!(report.exact.abs() < 1e-12, "BSC(1/2) reveals nothing, got {}", report.exact);
        assert!(report.ensemble_bound.value >= 0.0);
        let code_value = report
            .code_bound
            .exact
            .as_ref()
            .expect("tiny product space fits the cap")
            .value;
        assert!(code_value >= 0.0);
    }

    #[test]
    fn noiseless_eavesdropper_with_distinct_words_learns_the_whole_secret() {
        let chain = MarkovChainSpec::new(
            Distribution::uniform(1),
            Channel::from_rows(vec![vec![0.25; 4]]).unwrap(),
            Channel::identity(4),
            Channel::identity(4),
            Channel::identity(4),
        )
        .unwrap();
        // Find a seed whose four single-letter words are pairwise distinct
        // so the private index is recoverable from Z.
        let mut chosen = None;
        for seed in 0..200u64 {
            let code = sample_codebook(&chain, 1, 4, 1, seed).unwrap();
            let mut letters: Vec<usize> = (0..4).map(|b| code.v_codeword(b, 0)[0]).collect();
            letters.sort_unstable();
            letters.dedup();
            if letters.len() == 4 {
                chosen = Some(code);
                break;
            }
        }
        let code = chosen.expect("some seed below 200 yields distinct words");
        let family = HashFamily::new(2, 2).unwrap();
        let report = end_to_end_leakage(&code, &family).unwrap();
        let h_s = 2.0 * std::f64::consts::LN_2;
        assert!(
            (report.exact - h_s).abs() < 1e-9,
            "noiseless distinct words must reveal H(S): {}",
            report.exact
        );
        let code_value = report.code_bound.exact.as_ref().unwrap().value;
        assert!(code_value >= report.exact - 1e-9, "code bound {code_value} below exact");
        assert!(report.ensemble_bound.value >= report.exact - 1e-9);
    }

    #[test]
    fn noisy_end_to_end_run_sits_strictly_below_both_bounds() {
        let chain = simple_chain(0.2);
        let code = sample_codebook(&chain, 2, 8, 2, 101).unwrap();
        let family = HashFamily::new(3, 1).unwrap();
        let report = end_to_end_leakage(&code, &family).unwrap();
        assert!(report.exact > 0.0);
        let code_value = report.code_bound.exact.as_ref().unwrap().value;
        assert!(
            report.exact < code_value,
            "exact {} must sit strictly below the code bound {code_value}",
            report.exact
        );
        assert!(
            report.exact < report.ensemble_bound.value,
            "exact {} must sit strictly below the ensemble bound {}",
            report.exact,
            report.ensemble_bound.value
        );
        assert_eq!(report.rates.r1_prime(), Some(3.0 * std::f64::consts::LN_2 / 2.0));
    }

    #[test]
    fn small_corpus_is_sound_and_byte_stable() {
        let params = CorpusParams {
            instances: 25,
            ..CorpusParams::default()
        };
        let records = run_soundness_sweep(&params).unwrap();
        assert_eq!(records.len(), 25);
        for r in &records {
            assert!(r.sound, "instance {} violated a bound: {r:?}", r.id);
            assert!(r.margin_pa >= SOUNDNESS_TOL);
            assert!(r.margin_resolvability >= SOUNDNESS_TOL);
            assert!(r.m < r.k);
        }
        let again = run_soundness_sweep(&params).unwrap();
        assert_eq!(
            corpus_to_jsonl(&records),
            corpus_to_jsonl(&again),
            "the corpus must be a pure function of its parameters"
        );
    }

    #[test]
    fn corpus_parameters_are_validated() {
        let p = CorpusParams {
            instances: 0,
            ..CorpusParams::default()
        };
        assert!(run_soundness_sweep(&p).is_err());
        let p = CorpusParams {
            max_k: 9,
            ..CorpusParams::default()
        };
        assert!(run_soundness_sweep(&p).is_err());
    }
}
