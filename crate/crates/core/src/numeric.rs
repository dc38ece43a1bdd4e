//! Shared numeric primitives: compensated summation, log-domain folding,
//! one-dimensional convex minimisation, simplex utilities, fingerprints,
//! and significant-digit formatting.

// --- summation -------------------------------------------------------------

/// Kahan compensated sum. Keeps absolute error near one ulp of the result
/// even over millions of terms, where a naive fold drifts.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// `log(sum(exp(t)))` with max-subtraction. Empty input and all-`-inf`
/// input both give `-inf`; `-inf` entries are skipped.
pub fn logsumexp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if m == f64::INFINITY {
        return f64::INFINITY;
    }
    let s = kahan_sum(
        terms
            .iter()
            .filter(|t| **t != f64::NEG_INFINITY)
            .map(|&t| (t - m).exp()),
    );
    m + s.ln()
}

// --- one-dimensional minimisation -------------------------------------------

/// Outcome of a one-dimensional minimisation.
#[derive(Debug, Clone, Copy)]
pub struct MinResult {
    /// Argmin found.
    pub x: f64,
    /// Objective value at `x`.
    pub value: f64,
    /// True when the objective was flat over the whole interval, so any
    /// point is as good as the returned one.
    pub flat: bool,
}

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, a: f64, b: f64, x_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > x_tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Minimises a convex `f` on `[lo, hi]` by bisecting on the sign of a
/// central-difference derivative (step `1e-6`, shrunk near the ends), with
/// a golden-section pass as fallback when the difference is too noisy to
/// trust. Endpoints are always candidates, so monotone objectives resolve
/// to the correct boundary.
pub fn minimize_convex(f: impl Fn(f64) -> f64, lo: f64, hi: f64, x_tol: f64) -> MinResult {
    assert!(lo < hi, "empty interval");
    let f_lo = f(lo);
    let f_hi = f(hi);
    let scale = f_lo.abs().max(f_hi.abs()).max(1.0);

    let (mut a, mut b) = (lo, hi);
    let mut fell_back = false;
    for _ in 0..200 {
        if b - a <= x_tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let h = 1e-6f64.min(0.25 * (b - a));
        let d = (f(mid + h) - f(mid - h)) / (2.0 * h);
        if !d.is_finite() || d.abs() <= 1e-9 * scale {
            // Too flat for the sign to mean anything at this resolution.
            fell_back = true;
            break;
        }
        if d > 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }

    let (mut best_x, mut best_f) = if fell_back {
        golden_section_min(&f, a, b, x_tol.min(b - a))
    } else {
        let x = 0.5 * (a + b);
        (x, f(x))
    };
    if f_lo < best_f {
        best_x = lo;
        best_f = f_lo;
    }
    if f_hi < best_f {
        best_x = hi;
        best_f = f_hi;
    }
    let spread = f_lo.max(f_hi).max(best_f) - f_lo.min(f_hi).min(best_f);
    MinResult {
        x: best_x,
        value: best_f,
        flat: spread <= 1e-12 * scale,
    }
}

// --- simplex utilities -------------------------------------------------------

/// All probability vectors of length `dim` whose entries are multiples of
/// `1/denom`, i.e. the compositions of `denom` into `dim` ordered parts.
pub fn simplex_lattice(dim: usize, denom: usize) -> Vec<Vec<f64>> {
    assert!(dim > 0, "empty simplex");
    let mut out = Vec::new();
    let mut parts = vec![0usize; dim];
    fill_lattice(&mut out, &mut parts, 0, denom, denom);
    out
}

fn fill_lattice(
    out: &mut Vec<Vec<f64>>,
    parts: &mut [usize],
    idx: usize,
    left: usize,
    denom: usize,
) {
    if idx == parts.len() - 1 {
        parts[idx] = left;
        out.push(parts.iter().map(|&p| p as f64 / denom as f64).collect());
        return;
    }
    for take in 0..=left {
        parts[idx] = take;
        fill_lattice(out, parts, idx + 1, left - take, denom);
    }
}

/// Uniform sample from the simplex (flat Dirichlet), via normalised
/// exponentials.
pub fn sample_simplex<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    assert!(dim > 0, "empty simplex");
    let mut v: Vec<f64> = (0..dim)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let s: f64 = v.iter().sum();
    if s <= 0.0 {
        return vec![1.0 / dim as f64; dim];
    }
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Euclidean projection of `v` onto the probability simplex, in place.
pub fn project_to_simplex(v: &mut [f64]) {
    let n = v.len();
    assert!(n > 0, "empty simplex");
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("no NaN in projection input"));
    let mut css = 0.0;
    let mut tau = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        css += uj;
        let t = (css - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            tau = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - tau).max(0.0);
    }
    // Renormalise away the last-ulp drift so downstream validation holds.
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    } else {
        v.iter_mut().for_each(|x| *x = 1.0 / n as f64);
    }
}

// --- fingerprints -------------------------------------------------------------

/// FNV-1a accumulator used to fingerprint numeric tables in output
/// artifacts. Stable across platforms because inputs are folded as the
/// little-endian bytes of their bit patterns.
#[derive(Debug, Clone, Copy)]
pub struct Fingerprint(u64);

impl Fingerprint {
    /// Fresh accumulator at the FNV offset basis.
    pub fn new() -> Self {
        Fingerprint(0xcbf2_9ce4_8422_2325)
    }

    /// Folds one u64 into the state.
    pub fn push_u64(&mut self, v: u64) {
        for byte in v.to_le_bytes() {
            self.0 ^= byte as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    /// Folds an f64 by bit pattern. `-0.0` is normalised to `0.0` first.
    pub fn push_f64(&mut self, v: f64) {
        let v = if v == 0.0 { 0.0 } else { v };
        self.push_u64(v.to_bits());
    }

    /// Folds a usize (as u64).
    pub fn push_usize(&mut self, v: usize) {
        self.push_u64(v as u64);
    }

    /// Final digest as 16 lowercase hex digits.
    pub fn finish(self) -> String {
        format!("{:016x}", self.0)
    }
}

impl Default for Fingerprint {
    fn default() -> Self {
        Self::new()
    }
}

// --- formatting ----------------------------------------------------------------

/// Formats `x` with `digits` significant digits, positional when the
/// exponent allows it and scientific otherwise, in the spirit of
/// `printf("%.{digits}g")` but without trimming trailing zeros.
pub fn format_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("e-format always contains an exponent");
    let exp: i32 = exp.parse().expect("e-format exponent is an integer");
    if exp < -4 || exp >= digits as i32 {
        return sci;
    }
    let neg = mantissa.starts_with('-');
    let digits_only: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if neg { "-" } else { "" };
    let body = if exp >= 0 {
        let int_len = (exp + 1) as usize;
        if int_len >= digits_only.len() {
            format!(
                "{}{}",
                digits_only,
                "0".repeat(int_len - digits_only.len())
            )
        } else {
            format!("{}.{}", &digits_only[..int_len], &digits_only[int_len..])
        }
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits_only)
    };
    format!("{sign}{body}")
}
