//! Finite probability spaces: distributions, channels (stochastic
//! matrices), joints, i.i.d. products, and the auxiliary Markov chain
//! `U -> V -> X -> (Y, Z)` that drives the rate-region machinery.
//!
//! Alphabets are index sets `0..n`. JSON files may carry string labels for
//! display, but only the sizes are semantically meaningful here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::kahan_sum;

/// Absolute tolerance on `|sum - 1|` when validating probability vectors.
pub const STOCHASTICITY_TOL: f64 = 1e-12;

/// Default cap on entries materialised by a product construction.
pub const DEFAULT_SIZE_CAP: usize = 10_000_000;

// --- distributions -----------------------------------------------------------

/// Probability distribution on `{0, .., n-1}`. Entries are validated at
/// construction (finite, nonnegative, summing to one within
/// [`STOCHASTICITY_TOL`]) and never renormalised afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates and wraps a probability vector.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate_prob_vector(&probs, "distribution")?;
        Ok(Distribution { probs })
    }

    /// Uniform distribution on `n` symbols.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "empty alphabet");
        Distribution {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass on symbol `at`.
    pub fn point_mass(n: usize, at: usize) -> Self {
        assert!(at < n, "point mass outside alphabet");
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Distribution { probs }
    }

    /// Alphabet size.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// Always false: empty alphabets cannot be constructed.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Probability of symbol `i`.
    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// The underlying vector.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// True when every entry is within `tol` of `1/n`.
    pub fn is_uniform_within(&self, tol: f64) -> bool {
        let target = 1.0 / self.len() as f64;
        self.probs.iter().all(|&p| (p - target).abs() <= tol)
    }

    /// Parses a distribution from JSON: either a bare array `[0.9, 0.1]`
    /// or the single-row channel schema (see [`Channel::from_json_str`]).
    pub fn from_json_str(text: &str) -> Result<Self> {
        if let Ok(probs) = serde_json::from_str::<Vec<f64>>(text) {
            return Distribution::new(probs);
        }
        let schema: ChannelSchema = serde_json::from_str(text).map_err(|e| Error::MalformedInput {
            path: None,
            message: e.to_string(),
        })?;
        let ch = schema.into_channel()?;
        if ch.input_size() != 1 {
            return Err(Error::invalid_argument(format!(
                "expected a single-row table for a distribution, found {} rows",
                ch.input_size()
            )));
        }
        Ok(ch.rows[0].clone())
    }

    /// Serialises as the one-row channel schema with index labels.
    pub fn to_json_string(&self) -> String {
        ChannelSchema::from_rows(std::slice::from_ref(&self.probs)).to_pretty()
    }
}

fn validate_prob_vector(probs: &[f64], what: &str) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::invalid_distribution(format!("{what} has no entries")));
    }
    for (i, &p) in probs.iter().enumerate() {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::invalid_distribution(format!(
                "{what} entry {i} is {p}, expected a finite nonnegative value"
            )));
        }
    }
    let sum = kahan_sum(probs.iter().copied());
    if (sum - 1.0).abs() > STOCHASTICITY_TOL {
        return Err(Error::invalid_distribution(format!(
            "{what} sums to {sum:.17}, off by more than {STOCHASTICITY_TOL:e}"
        )));
    }
    Ok(())
}

// --- channels -----------------------------------------------------------------

/// Row-stochastic matrix: one [`Distribution`] over outputs per input
/// symbol. Row `x` is the conditional law of the output given input `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    rows: Vec<Distribution>,
    output_size: usize,
}

impl Channel {
    /// Validates and wraps a set of rows, which must share one output
    /// alphabet.
    pub fn new(rows: Vec<Distribution>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid_channel("channel has no rows"));
        }
        let output_size = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != output_size {
                return Err(Error::DimensionMismatch {
                    context: "channel rows",
                    left: output_size,
                    right: rows[i].len(),
                });
            }
        }
        Ok(Channel { rows, output_size })
    }

    /// Builds a channel from raw row vectors.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            out.push(Distribution::new(row).map_err(|e| match e {
                Error::InvalidDistribution(msg) => {
                    Error::invalid_channel(format!("row {i}: {msg}"))
                }
                other => other,
            })?);
        }
        Channel::new(out)
    }

    /// Identity channel on `n` symbols.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "empty alphabet");
        Channel {
            rows: (0..n).map(|i| Distribution::point_mass(n, i)).collect(),
            output_size: n,
        }
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn binary_symmetric(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                name: "crossover probability",
                value: p,
                range: "[0, 1]",
            });
        }
        Channel::from_rows(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Number of input symbols.
    pub fn input_size(&self) -> usize {
        self.rows.len()
    }

    /// Number of output symbols.
    pub fn output_size(&self) -> usize {
        self.output_size
    }

    /// Conditional law of the output given input `x`.
    pub fn row(&self, x: usize) -> &Distribution {
        &self.rows[x]
    }

    /// Transition probability `P(output = z | input = x)`.
    pub fn prob(&self, x: usize, z: usize) -> f64 {
        self.rows[x].get(z)
    }

    /// Output marginal when `input` is pushed through this channel.
    pub fn output_distribution(&self, input: &Distribution) -> Result<Distribution> {
        if input.len() != self.input_size() {
            return Err(Error::DimensionMismatch {
                context: "push-forward",
                left: input.len(),
                right: self.input_size(),
            });
        }
        let mut out: Vec<f64> = (0..self.output_size)
            .map(|z| kahan_sum((0..self.input_size()).map(|x| input.get(x) * self.prob(x, z))))
            .collect();
        // Row sums are each 1 within tolerance, so the mixture is too, but
        // the accumulated drift can exceed a single row's. Clamp it.
        let s = kahan_sum(out.iter().copied());
        if (s - 1.0).abs() > STOCHASTICITY_TOL {
            out.iter_mut().for_each(|p| *p /= s);
        }
        Distribution::new(out)
    }

    /// Parses the channel JSON schema:
    ///
    /// ```json
    /// {
    ///   "alphabet_in":  ["0", "1"],
    ///   "alphabet_out": ["0", "1"],
    ///   "rows": [[0.9, 0.1], [0.1, 0.9]]
    /// }
    /// ```
    ///
    /// Labels are display-only; row and column counts must match them.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let schema: ChannelSchema = serde_json::from_str(text).map_err(|e| Error::MalformedInput {
            path: None,
            message: e.to_string(),
        })?;
        schema.into_channel()
    }

    /// Serialises with index labels `"0"`, `"1"`, ...
    pub fn to_json_string(&self) -> String {
        let rows: Vec<Vec<f64>> = self.rows.iter().map(|r| r.probs().to_vec()).collect();
        ChannelSchema::from_rows(&rows).to_pretty()
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct ChannelSchema {
    alphabet_in: Vec<String>,
    alphabet_out: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl ChannelSchema {
    pub(crate) fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n_out = rows.first().map(|r| r.len()).unwrap_or(0);
        ChannelSchema {
            alphabet_in: (0..rows.len()).map(|i| i.to_string()).collect(),
            alphabet_out: (0..n_out).map(|i| i.to_string()).collect(),
            rows: rows.to_vec(),
        }
    }

    pub(crate) fn into_channel(self) -> Result<Channel> {
        if self.rows.len() != self.alphabet_in.len() {
            return Err(Error::MalformedInput {
                path: None,
                message: format!(
                    "field `rows` has {} rows but `alphabet_in` lists {} symbols",
                    self.rows.len(),
                    self.alphabet_in.len()
                ),
            });
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.alphabet_out.len() {
                return Err(Error::MalformedInput {
                    path: None,
                    message: format!(
                        "field `rows[{i}]` has {} entries but `alphabet_out` lists {} symbols",
                        row.len(),
                        self.alphabet_out.len()
                    ),
                });
            }
        }
        Channel::from_rows(self.rows)
    }

    pub(crate) fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema serialises")
    }
}

/// Composition `second after first`: feed the output of `first` into
/// `second`.
/// Rows of the result are mixtures of `second`'s rows.
pub fn compose(first: &Channel, second: &Channel) -> Result<Channel> {
    if first.output_size() != second.input_size() {
        return Err(Error::DimensionMismatch {
            context: "channel composition",
            left: first.output_size(),
            right: second.input_size(),
        });
    }
    let mut rows = Vec::with_capacity(first.input_size());
    for u in 0..first.input_size() {
        let mut row = vec![0.0; second.output_size()];
        for (z, entry) in row.iter_mut().enumerate() {
            *entry = kahan_sum(
                (0..first.output_size()).map(|v| first.prob(u, v) * second.prob(v, z)),
            );
        }
        let s = kahan_sum(row.iter().copied());
        if (s - 1.0).abs() > STOCHASTICITY_TOL {
            row.iter_mut().for_each(|p| *p /= s);
        }
        rows.push(Distribution::new(row)?);
    }
    Channel::new(rows)
}

// --- products -------------------------------------------------------------------

/// Packs a word over `{0..base}` into a flat index, first letter most
/// significant.
pub fn pack_word(word: &[usize], base: usize) -> usize {
    word.iter().fold(0, |acc, &w| {
        debug_assert!(w < base);
        acc * base + w
    })
}

/// Inverse of [`pack_word`] for words of length `n`.
pub fn unpack_word(mut index: usize, base: usize, n: usize) -> Vec<usize> {
    let mut word = vec![0usize; n];
    for slot in word.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    debug_assert_eq!(index, 0, "index out of range for word length");
    word
}

fn checked_pow(base: usize, n: usize, cap: usize) -> Result<usize> {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.saturating_mul(base as u128);
        if acc > cap as u128 {
            return Err(Error::SizeCapExceeded {
                required: acc,
                cap,
            });
        }
    }
    Ok(acc as usize)
}

/// `n`-fold i.i.d. product of `p`, indexed by [`pack_word`], with an
/// explicit entry cap.
pub fn product_distribution_with_cap(p: &Distribution, n: usize, cap: usize) -> Result<Distribution> {
    let size = checked_pow(p.len(), n, cap)?;
    let mut out = vec![1.0f64; size];
    // out[i] = prod_k p(word(i)_k), built one letter at a time.
    let mut block = size;
    for _ in 0..n {
        block /= p.len();
        for (i, entry) in out.iter_mut().enumerate() {
            *entry *= p.get((i / block) % p.len());
        }
    }
    let s = kahan_sum(out.iter().copied());
    if (s - 1.0).abs() > STOCHASTICITY_TOL && s > 0.0 {
        out.iter_mut().for_each(|x| *x /= s);
    }
    Distribution::new(out)
}

/// [`product_distribution_with_cap`] at the default cap.
pub fn product_distribution(p: &Distribution, n: usize) -> Result<Distribution> {
    product_distribution_with_cap(p, n, DEFAULT_SIZE_CAP)
}

/// `n`-fold memoryless extension of `w`: inputs and outputs are words,
/// transition probabilities multiply letterwise.
pub fn product_channel_with_cap(w: &Channel, n: usize, cap: usize) -> Result<Channel> {
    let in_size = checked_pow(w.input_size(), n, cap)?;
    let out_size = checked_pow(w.output_size(), n, cap)?;
    if (in_size as u128) * (out_size as u128) > cap as u128 {
        return Err(Error::SizeCapExceeded {
            required: in_size as u128 * out_size as u128,
            cap,
        });
    }
    let mut rows = Vec::with_capacity(in_size);
    for i in 0..in_size {
        let word = unpack_word(i, w.input_size(), n);
        let mut row = vec![1.0f64; out_size];
        let mut block = out_size;
        for &letter in &word {
            block /= w.output_size();
            for (j, entry) in row.iter_mut().enumerate() {
                *entry *= w.prob(letter, (j / block) % w.output_size());
            }
        }
        let s = kahan_sum(row.iter().copied());
        if (s - 1.0).abs() > STOCHASTICITY_TOL && s > 0.0 {
            row.iter_mut().for_each(|x| *x /= s);
        }
        rows.push(Distribution::new(row)?);
    }
    Channel::new(rows)
}

/// [`product_channel_with_cap`] at the default cap.
pub fn product_channel(w: &Channel, n: usize) -> Result<Channel> {
    product_channel_with_cap(w, n, DEFAULT_SIZE_CAP)
}

// --- joints ---------------------------------------------------------------------

/// Joint distribution on a product of two finite alphabets, stored dense
/// row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    table: Vec<f64>,
}

impl JointDistribution {
    /// Validates a dense row-major table of `rows * cols` probabilities.
    pub fn from_table(rows: usize, cols: usize, table: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || table.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "joint table",
                left: rows * cols,
                right: table.len(),
            });
        }
        validate_prob_vector(&table, "joint distribution")?;
        Ok(JointDistribution { rows, cols, table })
    }

    /// Row count (first coordinate's alphabet size).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count (second coordinate's alphabet size).
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `P(first = i, second = j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.cols + j]
    }

    /// Marginal of the first coordinate.
    pub fn row_marginal(&self) -> Distribution {
        let probs: Vec<f64> = (0..self.rows)
            .map(|i| kahan_sum(self.table[i * self.cols..(i + 1) * self.cols].iter().copied()))
            .collect();
        normalized_marginal(probs)
    }

    /// Marginal of the second coordinate.
    pub fn col_marginal(&self) -> Distribution {
        let probs: Vec<f64> = (0..self.cols)
            .map(|j| kahan_sum((0..self.rows).map(|i| self.get(i, j))))
            .collect();
        normalized_marginal(probs)
    }
}

fn normalized_marginal(mut probs: Vec<f64>) -> Distribution {
    let s = kahan_sum(probs.iter().copied());
    if (s - 1.0).abs() > STOCHASTICITY_TOL && s > 0.0 {
        probs.iter_mut().for_each(|p| *p /= s);
    }
    Distribution::new(probs).expect("marginal of a valid joint is valid")
}

/// Couples `input` with the output of `channel`: `P(x, z) = p(x) W(z|x)`.
pub fn joint(input: &Distribution, channel: &Channel) -> Result<JointDistribution> {
    if input.len() != channel.input_size() {
        return Err(Error::DimensionMismatch {
            context: "joint construction",
            left: input.len(),
            right: channel.input_size(),
        });
    }
    let cols = channel.output_size();
    let mut table = vec![0.0; input.len() * cols];
    for x in 0..input.len() {
        for z in 0..cols {
            table[x * cols + z] = input.get(x) * channel.prob(x, z);
        }
    }
    let s = kahan_sum(table.iter().copied());
    if (s - 1.0).abs() > STOCHASTICITY_TOL && s > 0.0 {
        table.iter_mut().for_each(|p| *p /= s);
    }
    JointDistribution::from_table(input.len(), cols, table)
}

// --- auxiliary chains -------------------------------------------------------------

/// The Markov chain `U -> V -> X -> (Y, Z)`: auxiliary variables `U`
/// (common layer) and `V` (private layer), channel input `X`, receiver
/// outputs `Y` and `Z` (the eavesdropper sees `Z`). `Y` and `Z` are
/// conditionally independent given `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChainSpec {
    p_u: Distribution,
    p_v_given_u: Channel,
    p_x_given_v: Channel,
    p_y_given_x: Channel,
    p_z_given_x: Channel,
}

impl MarkovChainSpec {
    /// Validates the dimension chain and wraps the pieces.
    pub fn new(
        p_u: Distribution,
        p_v_given_u: Channel,
        p_x_given_v: Channel,
        p_y_given_x: Channel,
        p_z_given_x: Channel,
    ) -> Result<Self> {
        if p_v_given_u.input_size() != p_u.len() {
            return Err(Error::DimensionMismatch {
                context: "chain U -> V",
                left: p_u.len(),
                right: p_v_given_u.input_size(),
            });
        }
        if p_x_given_v.input_size() != p_v_given_u.output_size() {
            return Err(Error::DimensionMismatch {
                context: "chain V -> X",
                left: p_v_given_u.output_size(),
                right: p_x_given_v.input_size(),
            });
        }
        if p_y_given_x.input_size() != p_x_given_v.output_size() {
            return Err(Error::DimensionMismatch {
                context: "chain X -> Y",
                left: p_x_given_v.output_size(),
                right: p_y_given_x.input_size(),
            });
        }
        if p_z_given_x.input_size() != p_x_given_v.output_size() {
            return Err(Error::DimensionMismatch {
                context: "chain X -> Z",
                left: p_x_given_v.output_size(),
                right: p_z_given_x.input_size(),
            });
        }
        Ok(MarkovChainSpec {
            p_u,
            p_v_given_u,
            p_x_given_v,
            p_y_given_x,
            p_z_given_x,
        })
    }

    /// Chain with `V = X` (identity inner kernel), the degraded-message-set
    /// shape.
    pub fn with_identity_inner(
        p_u: Distribution,
        p_x_given_u: Channel,
        p_y_given_x: Channel,
        p_z_given_x: Channel,
    ) -> Result<Self> {
        let x_size = p_x_given_u.output_size();
        MarkovChainSpec::new(
            p_u,
            p_x_given_u,
            Channel::identity(x_size),
            p_y_given_x,
            p_z_given_x,
        )
    }

    /// Law of `U`.
    pub fn p_u(&self) -> &Distribution {
        &self.p_u
    }

    /// Kernel `U -> V`.
    pub fn p_v_given_u(&self) -> &Channel {
        &self.p_v_given_u
    }

    /// Kernel `V -> X`.
    pub fn p_x_given_v(&self) -> &Channel {
        &self.p_x_given_v
    }

    /// Kernel `X -> Y`.
    pub fn p_y_given_x(&self) -> &Channel {
        &self.p_y_given_x
    }

    /// Kernel `X -> Z`.
    pub fn p_z_given_x(&self) -> &Channel {
        &self.p_z_given_x
    }

    /// True when `V -> X` is the identity (so `V = X`).
    pub fn has_identity_inner(&self) -> bool {
        let k = &self.p_x_given_v;
        k.input_size() == k.output_size()
            && (0..k.input_size()).all(|v| (0..k.output_size()).all(|x| {
                let expected = if v == x { 1.0 } else { 0.0 };
                k.prob(v, x) == expected
            }))
    }

    /// Composed kernel `V -> Y`.
    pub fn y_given_v(&self) -> Result<Channel> {
        compose(&self.p_x_given_v, &self.p_y_given_x)
    }

    /// Composed kernel `V -> Z`.
    pub fn z_given_v(&self) -> Result<Channel> {
        compose(&self.p_x_given_v, &self.p_z_given_x)
    }

    /// Composed kernel `U -> Y`.
    pub fn y_given_u(&self) -> Result<Channel> {
        compose(&self.p_v_given_u, &self.y_given_v()?)
    }

    /// Composed kernel `U -> Z`.
    pub fn z_given_u(&self) -> Result<Channel> {
        compose(&self.p_v_given_u, &self.z_given_v()?)
    }

    /// Marginal law of `V`.
    pub fn p_v(&self) -> Result<Distribution> {
        self.p_v_given_u.output_distribution(&self.p_u)
    }

    /// Marginal law of `X`.
    pub fn p_x(&self) -> Result<Distribution> {
        self.p_x_given_v.output_distribution(&self.p_v()?)
    }

    /// Parses the chain JSON schema: object with fields `p_u` (bare array
    /// or one-row table) and `p_v_given_u`, `p_x_given_v`, `p_y_given_x`,
    /// `p_z_given_x` (each in the channel schema).
    pub fn from_json_str(text: &str) -> Result<Self> {
        let schema: ChainSchema = serde_json::from_str(text).map_err(|e| Error::MalformedInput {
            path: None,
            message: e.to_string(),
        })?;
        let p_u = parse_dist_value(&schema.p_u, "p_u")?;
        MarkovChainSpec::new(
            p_u,
            field_channel(schema.p_v_given_u, "p_v_given_u")?,
            field_channel(schema.p_x_given_v, "p_x_given_v")?,
            field_channel(schema.p_y_given_x, "p_y_given_x")?,
            field_channel(schema.p_z_given_x, "p_z_given_x")?,
        )
    }

    /// Serialises in the schema accepted by [`MarkovChainSpec::from_json_str`].
    pub fn to_json_string(&self) -> String {
        let schema = ChainSchema {
            p_u: serde_json::json!(self.p_u.probs()),
            p_v_given_u: channel_schema(&self.p_v_given_u),
            p_x_given_v: channel_schema(&self.p_x_given_v),
            p_y_given_x: channel_schema(&self.p_y_given_x),
            p_z_given_x: channel_schema(&self.p_z_given_x),
        };
        serde_json::to_string_pretty(&schema).expect("schema serialises")
    }
}

#[derive(Serialize, Deserialize)]
struct ChainSchema {
    p_u: serde_json::Value,
    p_v_given_u: ChannelSchema,
    p_x_given_v: ChannelSchema,
    p_y_given_x: ChannelSchema,
    p_z_given_x: ChannelSchema,
}

fn channel_schema(ch: &Channel) -> ChannelSchema {
    let rows: Vec<Vec<f64>> = (0..ch.input_size())
        .map(|i| ch.row(i).probs().to_vec())
        .collect();
    ChannelSchema::from_rows(&rows)
}

fn parse_dist_value(value: &serde_json::Value, field: &str) -> Result<Distribution> {
    Distribution::from_json_str(&value.to_string()).map_err(|e| match e {
        Error::MalformedInput { message, .. } => Error::MalformedInput {
            path: None,
            message: format!("field `{field}`: {message}"),
        },
        other => other,
    })
}

fn field_channel(schema: ChannelSchema, field: &str) -> Result<Channel> {
    schema.into_channel().map_err(|e| match e {
        Error::MalformedInput { message, .. } => Error::MalformedInput {
            path: None,
            message: format!("field `{field}`: {message}"),
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_vectors_and_accepts_tolerable_drift() {
        assert!(Distribution::new(vec![0.5, 0.5]).is_ok());
        assert!(Distribution::new(vec![0.5, 0.5 + 4e-13]).is_ok());
        assert!(matches!(
            Distribution::new(vec![0.5, 0.6]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            Distribution::new(vec![1.5, -0.5]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            Distribution::new(vec![f64::NAN, 1.0]),
            Err(Error::InvalidDistribution(_))
        ));
        assert!(matches!(
            Distribution::new(vec![]),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn constructors_produce_expected_shapes() {
        let u = Distribution::uniform(4);
        assert!(u.is_uniform_within(0.0));
        let p = Distribution::point_mass(3, 1);
        assert_eq!(p.probs(), &[0.0, 1.0, 0.0]);
        let id = Channel::identity(3);
        assert_eq!(id.prob(2, 2), 1.0);
        assert_eq!(id.prob(2, 0), 0.0);
        let bsc = Channel::binary_symmetric(0.1).unwrap();
        assert_eq!(bsc.prob(0, 1), 0.1);
        assert!(Channel::binary_symmetric(1.2).is_err());
    }

    #[test]
    fn composing_binary_symmetric_channels_adds_crossovers() {
        // Crossover of the cascade: p + q - 2pq.
        let first = Channel::binary_symmetric(0.1).unwrap();
        let second = Channel::binary_symmetric(0.05).unwrap();
        let cascade = compose(&first, &second).unwrap();
        assert!((cascade.prob(0, 1) - 0.14).abs() < 1e-15);
        assert!((cascade.prob(1, 0) - 0.14).abs() < 1e-15);
    }

    #[test]
    fn push_forward_matches_hand_computation() {
        let bsc = Channel::binary_symmetric(0.1).unwrap();
        let input = Distribution::new(vec![0.3, 0.7]).unwrap();
        let out = bsc.output_distribution(&input).unwrap();
        assert!((out.get(0) - (0.3 * 0.9 + 0.7 * 0.1)).abs() < 1e-15);
        assert!((out.get(1) - (0.3 * 0.1 + 0.7 * 0.9)).abs() < 1e-15);
    }

    #[test]
    fn product_distribution_multiplies_letterwise() {
        let p = Distribution::new(vec![0.3, 0.7]).unwrap();
        let sq = product_distribution(&p, 2).unwrap();
        assert_eq!(sq.len(), 4);
        let expected = [0.09, 0.21, 0.21, 0.49];
        for (i, &e) in expected.iter().enumerate() {
            assert!((sq.get(i) - e).abs() < 1e-15, "entry {i}");
        }
    }

    #[test]
    fn product_channel_matches_letterwise_products() {
        let bsc = Channel::binary_symmetric(0.1).unwrap();
        let sq = product_channel(&bsc, 2).unwrap();
        assert_eq!(sq.input_size(), 4);
        assert_eq!(sq.output_size(), 4);
        // P(00 -> 01) = 0.9 * 0.1.
        assert!((sq.prob(0, 1) - 0.09).abs() < 1e-15);
        // P(10 -> 01) = 0.1 * 0.1.
        assert!((sq.prob(2, 1) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn size_caps_stop_products_early() {
        let p = Distribution::uniform(10);
        let err = product_distribution(&p, 8).unwrap_err();
        assert!(matches!(err, Error::SizeCapExceeded { .. }), "got {err:?}");
        let w = Channel::identity(10);
        assert!(matches!(
            product_channel_with_cap(&w, 4, 1000),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn word_packing_round_trips() {
        for i in 0..27 {
            let w = unpack_word(i, 3, 3);
            assert_eq!(pack_word(&w, 3), i);
        }
        assert_eq!(pack_word(&[1, 0, 2], 3), 11);
    }

    #[test]
    fn joint_marginals_match_inputs() {
        let bsc = Channel::binary_symmetric(0.2).unwrap();
        let input = Distribution::new(vec![0.25, 0.75]).unwrap();
        let j = joint(&input, &bsc).unwrap();
        let rm = j.row_marginal();
        assert!((rm.get(0) - 0.25).abs() < 1e-15);
        let cm = j.col_marginal();
        let pushed = bsc.output_distribution(&input).unwrap();
        for z in 0..2 {
            assert!((cm.get(z) - pushed.get(z)).abs() < 1e-15);
        }
    }

    #[test]
    fn channel_json_round_trips_and_reports_shape_errors() {
        let bsc = Channel::binary_symmetric(0.1).unwrap();
        let text = bsc.to_json_string();
        let back = Channel::from_json_str(&text).unwrap();
        assert_eq!(back, bsc);

        let bad = r#"{"alphabet_in": ["0"], "alphabet_out": ["0", "1"], "rows": [[0.5, 0.5], [0.5, 0.5]]}"#;
        let err = Channel::from_json_str(bad).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("rows"), "message should name the field: {msg}");

        let ragged = r#"{"alphabet_in": ["0", "1"], "alphabet_out": ["0", "1"], "rows": [[0.5, 0.5], [1.0]]}"#;
        let err = Channel::from_json_str(ragged).unwrap_err();
        assert!(err.to_string().contains("rows[1]"), "got: {err}");

        let err = Channel::from_json_str("{not json").unwrap_err();
        assert!(matches!(err, Error::MalformedInput { .. }));
    }

    #[test]
    fn distribution_json_accepts_bare_arrays_and_tables() {
        let d = Distribution::from_json_str("[0.9, 0.1]").unwrap();
        assert_eq!(d.probs(), &[0.9, 0.1]);
        let text = d.to_json_string();
        let back = Distribution::from_json_str(&text).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn chain_spec_validates_dimensions_and_round_trips() {
        let chain = MarkovChainSpec::new(
            Distribution::uniform(2),
            Channel::binary_symmetric(0.3).unwrap(),
            Channel::identity(2),
            Channel::binary_symmetric(0.05).unwrap(),
            Channel::binary_symmetric(0.14).unwrap(),
        )
        .unwrap();
        assert!(chain.has_identity_inner());
        let text = chain.to_json_string();
        let back = MarkovChainSpec::from_json_str(&text).unwrap();
        assert_eq!(back, chain);

        let bad = MarkovChainSpec::new(
            Distribution::uniform(3),
            Channel::binary_symmetric(0.3).unwrap(),
            Channel::identity(2),
            Channel::binary_symmetric(0.05).unwrap(),
            Channel::binary_symmetric(0.14).unwrap(),
        );
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn composed_chain_kernels_collapse_cascaded_noise() {
        let chain = MarkovChainSpec::new(
            Distribution::uniform(2),
            Channel::identity(2),
            Channel::identity(2),
            Channel::binary_symmetric(0.05).unwrap(),
            Channel::binary_symmetric(0.14).unwrap(),
        )
        .unwrap();
        let zy = chain.y_given_u().unwrap();
        assert!((zy.prob(0, 1) - 0.05).abs() < 1e-15);
        let zz = chain.z_given_u().unwrap();
        assert!((zz.prob(0, 1) - 0.14).abs() < 1e-15);
    }
}
