//! Two-universal hash families of surjective binary linear maps.
//!
//! A member is an `m x k` GF(2) matrix of full row rank, applied to k-bit
//! strings packed into `u64` (bit `j` is coordinate `j`). The family of
//! all such matrices is strictly two-universal: for any fixed nonzero
//! difference `d`, the fraction of members annihilating `d` is
//! `prod_i (2^(k-1) - 2^i) / (2^k - 2^i) < 2^-m`, which
//! [`HashFamily::verify_two_universal`] checks by exhaustion at small
//! sizes.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest input length `k` for which whole-family enumeration is offered.
pub const ENUMERATION_CAP: usize = 5;

/// Hard cap on `k` for a single map (inputs are packed in `u64`).
const MAX_K: usize = 63;

fn parity(x: u64) -> u64 {
    (x.count_ones() & 1) as u64
}

/// Row rank of a set of k-bit rows over GF(2).
fn gf2_rank(rows: &[u64]) -> usize {
    let mut work: Vec<u64> = rows.to_vec();
    let mut rank = 0;
    for col in 0..64 {
        let Some(pos) = (rank..work.len()).find(|&i| work[i] >> col & 1 == 1) else {
            continue;
        };
        work.swap(rank, pos);
        for i in 0..work.len() {
            if i != rank && work[i] >> col & 1 == 1 {
                work[i] ^= work[rank];
            }
        }
        rank += 1;
        if rank == work.len() {
            break;
        }
    }
    rank
}

/// Surjective linear map from k-bit strings to m-bit strings, with the
/// reduced row echelon form precomputed for preimage sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearHash {
    k: usize,
    m: usize,
    rows: Vec<u64>,
    rref: Vec<u64>,
    transform: Vec<u64>,
    pivots: Vec<usize>,
    kernel: Vec<u64>,
}

impl LinearHash {
    /// Wraps `m = rows.len()` rows of `k` bits each. Fails unless
    /// `1 <= m <= k <= 63` and the rows are linearly independent (full
    /// row rank is exactly surjectivity).
    pub fn new(k: usize, rows: Vec<u64>) -> Result<Self> {
        let m = rows.len();
        if k == 0 || k > MAX_K {
            return Err(Error::invalid_argument(format!(
                "input length k = {k} outside 1..={MAX_K}"
            )));
        }
        if m == 0 || m > k {
            return Err(Error::invalid_argument(format!(
                "output length m = {m} outside 1..=k (k = {k})"
            )));
        }
        let mask = bit_mask(k);
        if let Some(bad) = rows.iter().position(|r| r & !mask != 0) {
            return Err(Error::invalid_argument(format!(
                "row {bad} has bits beyond position {k}"
            )));
        }
        // Row-reduce [rows | I_m]; the tag part accumulates the transform
        // T with rref = T * rows, used to read particular solutions off.
        let mut work: Vec<(u64, u64)> = rows
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, 1u64 << i))
            .collect();
        let mut pivots = Vec::with_capacity(m);
        let mut rank = 0;
        for col in 0..k {
            let Some(pos) = (rank..m).find(|&i| work[i].0 >> col & 1 == 1) else {
                continue;
            };
            work.swap(rank, pos);
            for i in 0..m {
                if i != rank && work[i].0 >> col & 1 == 1 {
                    work[i].0 ^= work[rank].0;
                    work[i].1 ^= work[rank].1;
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == m {
                break;
            }
        }
        if rank < m {
            return Err(Error::invalid_argument(
                "rows are linearly dependent, so the map is not surjective",
            ));
        }
        let rref: Vec<u64> = work.iter().map(|w| w.0).collect();
        let transform: Vec<u64> = work.iter().map(|w| w.1).collect();
        // Kernel basis: one vector per free column j, with bit j set and
        // pivot bits copied from column j of the rref.
        let mut kernel = Vec::with_capacity(k - m);
        for j in 0..k {
            if pivots.contains(&j) {
                continue;
            }
            let mut v = 1u64 << j;
            for (i, &p) in pivots.iter().enumerate() {
                if rref[i] >> j & 1 == 1 {
                    v |= 1 << p;
                }
            }
            kernel.push(v);
        }
        Ok(LinearHash {
            k,
            m,
            rows,
            rref,
            transform,
            pivots,
            kernel,
        })
    }

    /// Input length in bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Output length in bits.
    pub fn m(&self) -> usize {
        self.m
    }

    /// The raw matrix rows.
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Kernel basis vectors (`k - m` of them).
    pub fn kernel_basis(&self) -> &[u64] {
        &self.kernel
    }

    /// Applies the map to a k-bit input.
    pub fn apply(&self, x: u64) -> Result<u64> {
        if x & !bit_mask(self.k) != 0 {
            return Err(Error::invalid_argument(format!(
                "input {x:#x} is longer than k = {} bits",
                self.k
            )));
        }
        let mut out = 0u64;
        for (i, &row) in self.rows.iter().enumerate() {
            out |= parity(row & x) << i;
        }
        Ok(out)
    }

    /// One particular solution of `A x = s`, with free coordinates zero.
    fn particular_solution(&self, s: u64) -> u64 {
        let mut x = 0u64;
        for (i, &p) in self.pivots.iter().enumerate() {
            x |= parity(self.transform[i] & s) << p;
        }
        x
    }

    /// Uniform sample from the preimage of `s`: a particular solution plus
    /// a uniformly random kernel combination.
    pub fn sample_preimage<R: rand::Rng + ?Sized>(&self, s: u64, rng: &mut R) -> Result<u64> {
        if s & !bit_mask(self.m) != 0 {
            return Err(Error::invalid_argument(format!(
                "target {s:#x} is longer than m = {} bits",
                self.m
            )));
        }
        let mut x = self.particular_solution(s);
        for &b in &self.kernel {
            if rng.random::<bool>() {
                x ^= b;
            }
        }
        Ok(x)
    }

    /// The full preimage of `s`, all `2^(k-m)` elements. Intended for
    /// brute-force checks; refuses kernels of dimension above 20.
    pub fn preimage_set(&self, s: u64) -> Result<Vec<u64>> {
        if self.k - self.m > 20 {
            return Err(Error::EnumerationCap {
                k: self.k - self.m,
                cap: 20,
            });
        }
        let x0 = self.particular_solution(s);
        let dim = self.kernel.len();
        let mut out = Vec::with_capacity(1 << dim);
        for combo in 0u64..(1 << dim) {
            let mut x = x0;
            for (j, &b) in self.kernel.iter().enumerate() {
                if combo >> j & 1 == 1 {
                    x ^= b;
                }
            }
            out.push(x);
        }
        Ok(out)
    }
}

fn bit_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

#[derive(Serialize, Deserialize)]
struct HashSchema {
    k: usize,
    rows: Vec<String>,
}

impl Serialize for LinearHash {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        HashSchema {
            k: self.k,
            rows: self.rows.iter().map(|r| format!("{r:x}")).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearHash {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let schema = HashSchema::deserialize(deserializer)?;
        let mut rows = Vec::with_capacity(schema.rows.len());
        for (i, hex) in schema.rows.iter().enumerate() {
            let v = u64::from_str_radix(hex, 16)
                .map_err(|e| D::Error::custom(format!("row {i} is not hex: {e}")))?;
            rows.push(v);
        }
        LinearHash::new(schema.k, rows).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// The family of all surjective `m x k` binary matrices, enumerable when
/// `k <= 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashFamily {
    k: usize,
    m: usize,
}

/// Outcome of the exhaustive two-universality check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoUniversalReport {
    /// Largest collision fraction over nonzero differences.
    pub max_collision: f64,
    /// The two-universal threshold `2^-m`.
    pub threshold: f64,
    /// Members enumerated.
    pub member_count: u64,
    /// True when the family is strictly below the threshold.
    pub strict: bool,
}

impl HashFamily {
    /// The family for given sizes; enumeration requires `k <=`
    /// [`ENUMERATION_CAP`].
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if k == 0 || k > ENUMERATION_CAP {
            return Err(Error::EnumerationCap {
                k,
                cap: ENUMERATION_CAP,
            });
        }
        if m == 0 || m > k {
            return Err(Error::invalid_argument(format!(
                "output length m = {m} outside 1..=k (k = {k})"
            )));
        }
        Ok(HashFamily { k, m })
    }

    /// Input length in bits.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Output length in bits.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of members: `prod_{i<m} (2^k - 2^i)` full-rank matrices.
    pub fn member_count(&self) -> u64 {
        (0..self.m)
            .map(|i| (1u64 << self.k) - (1u64 << i))
            .product()
    }

    /// All members in a fixed order (ascending row-code). The order is
    /// part of the contract: averages over the family must not depend on
    /// thread count or platform.
    pub fn members(&self) -> impl Iterator<Item = LinearHash> + '_ {
        let k = self.k;
        let m = self.m;
        let mask = bit_mask(k);
        (0u64..1 << (m * k)).filter_map(move |code| {
            let rows: Vec<u64> = (0..m).map(|i| (code >> (i * k)) & mask).collect();
            if gf2_rank(&rows) < m {
                return None;
            }
            Some(LinearHash::new(k, rows).expect("full-rank rows construct"))
        })
    }

    /// Exhaustively measures `max_{d != 0} P_f[f(d) = 0]` and compares it
    /// with `2^-m`.
    pub fn verify_two_universal(&self) -> TwoUniversalReport {
        let mut zero_hits = vec![0u64; 1 << self.k];
        let mut count = 0u64;
        for member in self.members() {
            count += 1;
            for (d, hits) in zero_hits.iter_mut().enumerate().skip(1) {
                let image = member.apply(d as u64).expect("d fits in k bits");
                if image == 0 {
                    *hits += 1;
                }
            }
        }
        let worst = zero_hits.iter().skip(1).copied().max().unwrap_or(0);
        let max_collision = worst as f64 / count as f64;
        let threshold = 0.5f64.powi(self.m as i32);
        TwoUniversalReport {
            max_collision,
            threshold,
            member_count: count,
            strict: max_collision < threshold,
        }
    }
}

/// Uniformly random surjective map, by rejection on the full-rank
/// condition. Works for any `k <= 63`; the acceptance probability is at
/// least `prod_i (1 - 2^(i-k)) > 0.288`, so rejection terminates fast.
pub fn random_linear_hash<R: rand::Rng + ?Sized>(
    k: usize,
    m: usize,
    rng: &mut R,
) -> Result<LinearHash> {
    if k == 0 || k > MAX_K {
        return Err(Error::invalid_argument(format!(
            "input length k = {k} outside 1..={MAX_K}"
        )));
    }
    if m == 0 || m > k {
        return Err(Error::invalid_argument(format!(
            "output length m = {m} outside 1..=k (k = {k})"
        )));
    }
    let mask = bit_mask(k);
    for _ in 0..10_000 {
        let rows: Vec<u64> = (0..m).map(|_| rng.random::<u64>() & mask).collect();
        if gf2_rank(&rows) == m {
            return LinearHash::new(k, rows);
        }
    }
    Err(Error::invalid_argument(
        "rejection sampling failed to find a full-rank matrix",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn construction_enforces_rank_and_shape() {
        assert!(LinearHash::new(3, vec![0b101, 0b011]).is_ok());
        // Dependent rows: third is the XOR of the first two.
        assert!(LinearHash::new(3, vec![0b101, 0b011, 0b110]).is_err());
        assert!(LinearHash::new(3, vec![0b101, 0b101]).is_err());
        assert!(LinearHash::new(2, vec![0b100]).is_err(), "row bit beyond k");
        assert!(LinearHash::new(2, vec![0b01, 0b10, 0b11]).is_err(), "m > k");
        assert!(LinearHash::new(0, vec![]).is_err());
    }

    #[test]
    fn apply_is_linear_and_respects_length() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let f = random_linear_hash(10, 4, &mut rng).unwrap();
        for _ in 0..200 {
            let x = rng.random::<u64>() & 0x3ff;
            let y = rng.random::<u64>() & 0x3ff;
            let fx = f.apply(x).unwrap();
            let fy = f.apply(y).unwrap();
            assert_eq!(f.apply(x ^ y).unwrap(), fx ^ fy);
        }
        assert!(f.apply(1 << 10).is_err());
    }

    #[test]
    fn every_member_is_surjective() {
        let fam = HashFamily::new(3, 2).unwrap();
        for member in fam.members() {
            let mut seen = [false; 4];
            for x in 0..8u64 {
                seen[member.apply(x).unwrap() as usize] = true;
            }
            assert!(seen.iter().all(|&s| s), "member {:?} not onto", member.rows());
        }
    }

    #[test]
    fn member_counts_match_the_rank_product_formula() {
        let expected: &[(usize, usize, u64)] = &[
            (1, 1, 1),
            (2, 1, 3),
            (2, 2, 6),
            (3, 1, 7),
            (3, 2, 42),
            (3, 3, 168),
            (4, 1, 15),
            (4, 2, 210),
            (4, 3, 2520),
            (4, 4, 20160),
        ];
        for &(k, m, count) in expected {
            let fam = HashFamily::new(k, m).unwrap();
            assert_eq!(fam.member_count(), count, "formula at k={k} m={m}");
            assert_eq!(
                fam.members().count() as u64,
                count,
                "enumeration at k={k} m={m}"
            );
        }
    }

    #[test]
    fn collision_fractions_match_the_subspace_count() {
        // For d != 0 the annihilating members number prod (2^(k-1) - 2^i).
        let r = HashFamily::new(3, 1).unwrap().verify_two_universal();
        assert!((r.max_collision - 3.0 / 7.0).abs() < 1e-15);
        assert!(r.strict);
        let r = HashFamily::new(3, 2).unwrap().verify_two_universal();
        assert!((r.max_collision - 6.0 / 42.0).abs() < 1e-15);
        assert!(r.strict);
        // Square case: bijections collide on nothing.
        let r = HashFamily::new(3, 3).unwrap().verify_two_universal();
        assert_eq!(r.max_collision, 0.0);
        assert!(r.strict);
    }

    #[test]
    fn kernel_basis_spans_the_kernel() {
        let f = LinearHash::new(4, vec![0b1011, 0b0110]).unwrap();
        assert_eq!(f.kernel_basis().len(), 2);
        for &b in f.kernel_basis() {
            assert_eq!(f.apply(b).unwrap(), 0, "basis vector {b:#b} not in kernel");
        }
        // Distinct combinations give distinct kernel elements.
        let full = f.preimage_set(0).unwrap();
        let mut sorted = full.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
    }

    #[test]
    fn preimage_sampling_solves_the_system_and_hits_every_solution() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for trial in 0..20 {
            let k = 3 + (trial % 3);
            let m = 1 + (trial % k.min(3));
            let f = random_linear_hash(k, m, &mut rng).unwrap();
            for s in 0..(1u64 << m) {
                let want: std::collections::BTreeSet<u64> =
                    f.preimage_set(s).unwrap().into_iter().collect();
                let mut seen = std::collections::BTreeSet::new();
                for _ in 0..400 {
                    let x = f.sample_preimage(s, &mut rng).unwrap();
                    assert_eq!(f.apply(x).unwrap(), s);
                    seen.insert(x);
                }
                assert_eq!(seen, want, "sampler support mismatch at s={s}");
            }
        }
    }

    #[test]
    fn serde_round_trips() {
        let f = LinearHash::new(4, vec![0b1011, 0b0110]).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: LinearHash = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"k": 3, "rows": ["zz"]}"#;
        assert!(serde_json::from_str::<LinearHash>(bad).is_err());
    }

    #[test]
    fn family_enumeration_respects_the_cap() {
        assert!(HashFamily::new(6, 2).is_err());
        assert!(HashFamily::new(5, 5).is_ok());
    }
}
