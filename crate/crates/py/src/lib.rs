//! Python bindings for the secrecy-bounds library.
//!
//! The module mirrors the library surface at desk scale: probability
//! types, information measures, the tilted moment functionals, leakage
//! bounds with their tilt optimisers, linear hashing, and region
//! certification. Values are nats throughout, matching the core crate.
//! Structured results (bounds, exponents, certifications) come back as
//! plain dicts so downstream code needs no wrapper types.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use secrecy_bounds::bounds::{
    self, BoundResult, ExponentResult, RateTriple, RhoSearch, SingleLetterMax,
};
use secrecy_bounds::gallager::{self, DEFAULT_PHI_OPT_TOL};
use secrecy_bounds::hashing;
use secrecy_bounds::information;
use secrecy_bounds::region::{self, Certification, RegionKind, RegionPoint, SweepGrid};
use secrecy_bounds::{Channel, Error, MarkovChainSpec, Rho};

fn pyerr(e: Error) -> PyErr {
    match e {
        // Optimiser failures are runtime conditions; everything else is a
        // caller mistake.
        Error::NonConvergence { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Kebab-case name of a serde-serialisable enum tag, matching the CLI's
/// JSON output exactly.
fn tag_name<T: serde::Serialize + std::fmt::Debug>(value: &T) -> String {
    serde_json::to_value(value)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_else(|| format!("{value:?}"))
}

fn parse_rho(rho: f64) -> PyResult<Rho> {
    Rho::new(rho).map_err(pyerr)
}

fn bound_dict<'py>(py: Python<'py>, b: &BoundResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", b.value)?;
    d.set_item("rho", b.rho)?;
    d.set_item("formula", tag_name(&b.formula))?;
    d.set_item("flags", b.flags.iter().map(tag_name).collect::<Vec<_>>())?;
    d.set_item("witness", b.witness.clone())?;
    Ok(d)
}

fn rates_dict<'py>(py: Python<'py>, rates: &RateTriple) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("r1", rates.r1())?;
    d.set_item("re", rates.re())?;
    d.set_item("r0", rates.r0())?;
    d.set_item("r1_prime", rates.r1_prime())?;
    Ok(d)
}

fn certification_dict<'py>(py: Python<'py>, c: &Certification) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    match c {
        Certification::Certified(point) => {
            d.set_item("certified", true)?;
            d.set_item("rates", rates_dict(py, &point.rates)?)?;
            let residuals = PyDict::new(py);
            for r in &point.residuals {
                residuals.set_item(r.constraint, r.residual)?;
            }
            d.set_item("residuals", residuals)?;
            d.set_item("fingerprint", point.fingerprint.as_str())?;
        }
        Certification::Rejected { violations } => {
            d.set_item("certified", false)?;
            let bad = PyDict::new(py);
            for r in violations {
                bad.set_item(r.constraint, r.residual)?;
            }
            d.set_item("violations", bad)?;
        }
    }
    Ok(d)
}

fn point_dict<'py>(py: Python<'py>, p: &RegionPoint) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("r0", p.rates.r0())?;
    d.set_item("r1", p.rates.r1())?;
    d.set_item("re", p.rates.re())?;
    let residuals = PyDict::new(py);
    for r in &p.residuals {
        residuals.set_item(r.constraint, r.residual)?;
    }
    d.set_item("residuals", residuals)?;
    d.set_item("fingerprint", p.fingerprint.as_str())?;
    Ok(d)
}

/// A probability law on a finite alphabet.
#[pyclass(frozen, name = "Distribution")]
struct PyDistribution {
    inner: secrecy_bounds::Distribution,
}

#[pymethods]
impl PyDistribution {
    #[new]
    fn new(probs: Vec<f64>) -> PyResult<Self> {
        Ok(PyDistribution {
            inner: secrecy_bounds::Distribution::new(probs).map_err(pyerr)?,
        })
    }

    #[staticmethod]
    fn uniform(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("alphabet must be nonempty"));
        }
        Ok(PyDistribution {
            inner: secrecy_bounds::Distribution::uniform(n),
        })
    }

    fn probs(&self) -> Vec<f64> {
        self.inner.probs().to_vec()
    }

    /// Shannon entropy in nats.
    fn entropy(&self) -> f64 {
        information::entropy(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Distribution({:?})", self.inner.probs())
    }
}

/// A discrete memoryless channel (row-stochastic matrix).
#[pyclass(frozen, name = "Channel")]
struct PyChannel {
    inner: Channel,
}

#[pymethods]
impl PyChannel {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(PyChannel {
            inner: Channel::from_rows(rows).map_err(pyerr)?,
        })
    }

    #[staticmethod]
    fn binary_symmetric(p: f64) -> PyResult<Self> {
        Ok(PyChannel {
            inner: Channel::binary_symmetric(p).map_err(pyerr)?,
        })
    }

    #[staticmethod]
    fn identity(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(PyValueError::new_err("alphabet must be nonempty"));
        }
        Ok(PyChannel {
            inner: Channel::identity(n),
        })
    }

    #[getter]
    fn input_size(&self) -> usize {
        self.inner.input_size()
    }

    #[getter]
    fn output_size(&self) -> usize {
        self.inner.output_size()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.inner.input_size())
            .map(|x| self.inner.row(x).probs().to_vec())
            .collect()
    }

    /// Pushes an input law through the channel.
    fn output_distribution(&self, input: &PyDistribution) -> PyResult<PyDistribution> {
        Ok(PyDistribution {
            inner: self
                .inner
                .output_distribution(&input.inner)
                .map_err(pyerr)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Channel({} -> {})",
            self.inner.input_size(),
            self.inner.output_size()
        )
    }
}

/// The auxiliary chain U -> V -> X with branch channels to Y and Z.
#[pyclass(frozen, name = "MarkovChain")]
struct PyMarkovChain {
    inner: MarkovChainSpec,
}

#[pymethods]
impl PyMarkovChain {
    #[new]
    fn new(
        p_u: &PyDistribution,
        p_v_given_u: &PyChannel,
        p_x_given_v: &PyChannel,
        p_y_given_x: &PyChannel,
        p_z_given_x: &PyChannel,
    ) -> PyResult<Self> {
        Ok(PyMarkovChain {
            inner: MarkovChainSpec::new(
                p_u.inner.clone(),
                p_v_given_u.inner.clone(),
                p_x_given_v.inner.clone(),
                p_y_given_x.inner.clone(),
                p_z_given_x.inner.clone(),
            )
            .map_err(pyerr)?,
        })
    }

    /// The four conditional informations the region constraints use,
    /// keyed `vy_given_u`, `vz_given_u`, `uy`, `uz`.
    fn informations<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let info = information::chain_informations(&self.inner).map_err(pyerr)?;
        let d = PyDict::new(py);
        d.set_item("vy_given_u", info.vy_given_u)?;
        d.set_item("vz_given_u", info.vz_given_u)?;
        d.set_item("uy", info.uy)?;
        d.set_item("uz", info.uz)?;
        Ok(d)
    }
}

/// A surjective linear map {0,1}^k -> {0,1}^m given by matrix rows.
#[pyclass(frozen, name = "LinearHash")]
struct PyLinearHash {
    inner: hashing::LinearHash,
}

#[pymethods]
impl PyLinearHash {
    #[new]
    fn new(k: usize, rows: Vec<u64>) -> PyResult<Self> {
        Ok(PyLinearHash {
            inner: hashing::LinearHash::new(k, rows).map_err(pyerr)?,
        })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn rows(&self) -> Vec<u64> {
        self.inner.rows().to_vec()
    }

    fn apply(&self, x: u64) -> PyResult<u64> {
        self.inner.apply(x).map_err(pyerr)
    }

    fn __repr__(&self) -> String {
        format!("LinearHash(k={}, rows={:?})", self.inner.k(), self.inner.rows())
    }
}

/// All surjective linear maps {0,1}^k -> {0,1}^m.
#[pyclass(frozen, name = "HashFamily")]
struct PyHashFamily {
    inner: hashing::HashFamily,
}

#[pymethods]
impl PyHashFamily {
    #[new]
    fn new(k: usize, m: usize) -> PyResult<Self> {
        Ok(PyHashFamily {
            inner: hashing::HashFamily::new(k, m).map_err(pyerr)?,
        })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn member_count(&self) -> u64 {
        self.inner.member_count()
    }

    fn members(&self) -> Vec<PyLinearHash> {
        self.inner
            .members()
            .map(|h| PyLinearHash { inner: h })
            .collect()
    }

    /// Exhaustive collision check; keys `max_collision`, `threshold`,
    /// `member_count`, `strict`.
    fn verify_two_universal<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let report = self.inner.verify_two_universal();
        let d = PyDict::new(py);
        d.set_item("max_collision", report.max_collision)?;
        d.set_item("threshold", report.threshold)?;
        d.set_item("member_count", report.member_count)?;
        d.set_item("strict", report.strict)?;
        Ok(d)
    }
}

/// Shannon entropy of a law, in nats.
#[pyfunction]
fn entropy(p: &PyDistribution) -> f64 {
    information::entropy(&p.inner)
}

/// Mutual information between a channel's input and output, in nats.
#[pyfunction]
fn mutual_information(input: &PyDistribution, channel: &PyChannel) -> PyResult<f64> {
    information::mutual_information(&input.inner, &channel.inner).map_err(pyerr)
}

/// Channel capacity with a certified duality gap; keys `value`, `gap`,
/// `input`, `iterations`.
#[pyfunction]
#[pyo3(signature = (channel, tol=1e-10, max_iter=10_000))]
fn capacity<'py>(
    py: Python<'py>,
    channel: &PyChannel,
    tol: f64,
    max_iter: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let res = information::capacity(&channel.inner, tol, max_iter).map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("value", res.value)?;
    d.set_item("gap", res.gap)?;
    d.set_item("input", res.input.probs().to_vec())?;
    d.set_item("iterations", res.iterations)?;
    Ok(d)
}

/// Hashed-moment functional at tilt `rho` in (0, 1].
#[pyfunction]
fn psi(rho: f64, channel: &PyChannel, input: &PyDistribution) -> PyResult<f64> {
    gallager::psi(parse_rho(rho)?, &channel.inner, &input.inner).map_err(pyerr)
}

/// Gallager-moment functional at tilt `rho` in (0, 1).
#[pyfunction]
fn phi(rho: f64, channel: &PyChannel, input: &PyDistribution) -> PyResult<f64> {
    gallager::phi(parse_rho(rho)?, &channel.inner, &input.inner).map_err(pyerr)
}

/// Maximises `phi` over the input simplex; keys `value`, `witness`,
/// `gap`, `iterations`.
#[pyfunction]
#[pyo3(signature = (rho, channel, tol=None))]
fn phi_max<'py>(
    py: Python<'py>,
    rho: f64,
    channel: &PyChannel,
    tol: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let m = gallager::maximize_phi_over_input(
        parse_rho(rho)?,
        &channel.inner,
        tol.unwrap_or(DEFAULT_PHI_OPT_TOL),
    )
    .map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("value", m.value)?;
    d.set_item("witness", m.input.probs().to_vec())?;
    d.set_item("gap", m.gap)?;
    d.set_item("iterations", m.iterations)?;
    Ok(d)
}

/// Privacy-amplification leakage bound for an `m_size`-valued hash of the
/// channel input. `input=None` means a uniform source; `rho=None`
/// optimises the tilt, otherwise the bound is evaluated at the given one.
#[pyfunction]
#[pyo3(signature = (m_size, channel, input=None, rho=None))]
fn pa_bound<'py>(
    py: Python<'py>,
    m_size: u64,
    channel: &PyChannel,
    input: Option<&PyDistribution>,
    rho: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let b = match rho {
        Some(r) => {
            let r = parse_rho(r)?;
            match input {
                Some(p) => {
                    bounds::pa_bound_expectation(r, m_size, &channel.inner, &p.inner)
                        .map_err(pyerr)?
                }
                None => bounds::pa_bound_discrete(r, m_size, &channel.inner).map_err(pyerr)?,
            }
        }
        None => bounds::pa_bound_optimized(
            m_size,
            &channel.inner,
            input.map(|p| &p.inner),
            &RhoSearch::default(),
        )
        .map_err(pyerr)?,
    };
    bound_dict(py, &b)
}

/// Two-layer resolvability leakage bound; the channel input alphabet must
/// have exactly `k_size * l_size` symbols. `rho=None` optimises the tilt.
#[pyfunction]
#[pyo3(signature = (m_size, k_size, l_size, channel, rho=None))]
fn resolvability<'py>(
    py: Python<'py>,
    m_size: u64,
    k_size: u64,
    l_size: u64,
    channel: &PyChannel,
    rho: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let b = match rho {
        Some(r) => {
            bounds::resolvability_bound(parse_rho(r)?, m_size, k_size, l_size, &channel.inner)
                .map_err(pyerr)?
        }
        None => bounds::resolvability_bound_optimized(
            m_size,
            k_size,
            l_size,
            &channel.inner,
            &RhoSearch::default(),
        )
        .map_err(pyerr)?,
    };
    bound_dict(py, &b)
}

fn coding_rates(r1: f64, r1_prime: f64) -> PyResult<RateTriple> {
    RateTriple::new(r1, 0.0, 0.0)
        .map_err(pyerr)?
        .with_r1_prime(r1_prime)
        .map_err(pyerr)
}

/// Codebook-averaged leakage bound at blocklength `n` and tilt `rho`.
#[pyfunction]
fn random_coding_bound<'py>(
    py: Python<'py>,
    chain: &PyMarkovChain,
    r1: f64,
    r1_prime: f64,
    rho: f64,
    n: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let rates = coding_rates(r1, r1_prime)?;
    let b = bounds::random_coding_leakage_bound(&chain.inner, &rates, parse_rho(rho)?, n)
        .map_err(pyerr)?;
    bound_dict(py, &b)
}

/// Signed per-letter decay rate of the codebook-averaged leakage bound,
/// minimised over the tilt. Negative certifies exponential decay; keys
/// `exponent`, `rho`, `flat`.
#[pyfunction]
fn leakage_exponent<'py>(
    py: Python<'py>,
    chain: &PyMarkovChain,
    r1: f64,
    r1_prime: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let rates = coding_rates(r1, r1_prime)?;
    let ExponentResult { rho, exponent, flat } =
        bounds::leakage_exponent(&chain.inner, &rates).map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("exponent", exponent)?;
    d.set_item("rho", rho)?;
    d.set_item("flat", flat)?;
    Ok(d)
}

/// `n` times the certified single-letter `phi` maximum; keys `value`,
/// `per_letter`, `witness`, `gap`.
#[pyfunction]
fn single_letter_max<'py>(
    py: Python<'py>,
    rho: f64,
    channel: &PyChannel,
    n: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let SingleLetterMax {
        value,
        per_letter,
        witness,
        gap,
    } = bounds::single_letter_max(parse_rho(rho)?, &channel.inner, n).map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("value", value)?;
    d.set_item("per_letter", per_letter)?;
    d.set_item("witness", witness)?;
    d.set_item("gap", gap)?;
    Ok(d)
}

/// Secret size in nats guaranteed extractable from `b_size * e_size`
/// codewords at blocklength `n` against the given eavesdropper channel.
#[pyfunction]
fn achievable_secret_size(
    b_size: u64,
    e_size: u64,
    channel: &PyChannel,
    n: usize,
    delta: f64,
) -> PyResult<f64> {
    bounds::achievable_secret_size(b_size, e_size, &channel.inner, n, delta).map_err(pyerr)
}

/// Certifies `(r1, re, r0)` against the general inner-bound constraints.
#[pyfunction]
fn certify_bcc<'py>(
    py: Python<'py>,
    chain: &PyMarkovChain,
    r1: f64,
    re: f64,
    r0: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let rates = RateTriple::new(r1, re, r0).map_err(pyerr)?;
    let c = region::certify_bcc(&chain.inner, rates).map_err(pyerr)?;
    certification_dict(py, &c)
}

/// Certifies a fully secret private rate (`re = r1`) with common rate `r0`.
#[pyfunction]
fn certify_strong<'py>(
    py: Python<'py>,
    chain: &PyMarkovChain,
    r0: f64,
    r1: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let c = region::certify_strong(&chain.inner, r0, r1).map_err(pyerr)?;
    certification_dict(py, &c)
}

/// Certifies a degraded-message-set pair (`r0`, pre-hash private rate).
#[pyfunction]
fn certify_bcd<'py>(
    py: Python<'py>,
    chain: &PyMarkovChain,
    r0: f64,
    r1_prime: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let c = region::certify_bcd(&chain.inner, r0, r1_prime).map_err(pyerr)?;
    certification_dict(py, &c)
}

fn parse_kind(kind: &str) -> PyResult<RegionKind> {
    match kind {
        "bcc" => Ok(RegionKind::Bcc),
        "strong" => Ok(RegionKind::Strong),
        "bcd" => Ok(RegionKind::Bcd),
        other => Err(PyValueError::new_err(format!(
            "unknown region kind {other:?}; expected \"bcc\", \"strong\", or \"bcd\""
        ))),
    }
}

/// Sweeps auxiliary chains and returns the certified frontier as a list
/// of dicts keyed `r0`, `r1`, `re`, `residuals`, `fingerprint`.
#[pyfunction]
#[pyo3(signature = (y, z, kind, max_u=None, max_v=None, resolution=None, restarts=None, seed=None, convex_hull=None))]
#[allow(clippy::too_many_arguments)]
fn region_sweep<'py>(
    py: Python<'py>,
    y: &PyChannel,
    z: &PyChannel,
    kind: &str,
    max_u: Option<usize>,
    max_v: Option<usize>,
    resolution: Option<usize>,
    restarts: Option<usize>,
    seed: Option<u64>,
    convex_hull: Option<bool>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let kind = parse_kind(kind)?;
    let mut grid = SweepGrid::default_for(y.inner.input_size());
    if let Some(v) = max_u {
        grid.max_u = v;
    }
    if let Some(v) = max_v {
        grid.max_v = v;
    }
    if let Some(v) = resolution {
        grid.resolution = v;
    }
    if let Some(v) = restarts {
        grid.restarts = v;
    }
    if let Some(v) = seed {
        grid.seed = v;
    }
    if let Some(v) = convex_hull {
        grid.convex_hull = v;
    }
    let points = region::inner_bound_sweep(&y.inner, &z.inner, kind, &grid).map_err(pyerr)?;
    points.iter().map(|p| point_dict(py, p)).collect()
}

#[pymodule]
fn secrecy_bounds_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDistribution>()?;
    m.add_class::<PyChannel>()?;
    m.add_class::<PyMarkovChain>()?;
    m.add_class::<PyLinearHash>()?;
    m.add_class::<PyHashFamily>()?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(capacity, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(phi_max, m)?)?;
    m.add_function(wrap_pyfunction!(pa_bound, m)?)?;
    m.add_function(wrap_pyfunction!(resolvability, m)?)?;
    m.add_function(wrap_pyfunction!(random_coding_bound, m)?)?;
    m.add_function(wrap_pyfunction!(leakage_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(single_letter_max, m)?)?;
    m.add_function(wrap_pyfunction!(achievable_secret_size, m)?)?;
    m.add_function(wrap_pyfunction!(certify_bcc, m)?)?;
    m.add_function(wrap_pyfunction!(certify_strong, m)?)?;
    m.add_function(wrap_pyfunction!(certify_bcd, m)?)?;
    m.add_function(wrap_pyfunction!(region_sweep, m)?)?;
    Ok(())
}
