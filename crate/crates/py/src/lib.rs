//! Python bindings: families, point enumeration, Hilbert profiles and the check runner.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use upv_core::checks::{self, Context, RunConfig, REGISTRY};
use upv_core::cli::{dump_text, Artifact};
use upv_core::cover::enumerate::{enumerate_surface, SurfaceEquations};
use upv_core::cover::singular_points;
use upv_core::exactalg::{PrimeField, Scalar};
use upv_core::invariants::{intersection_number as core_intersection, HilbertProfile, IntersectionClass, DEFAULT_BUDGET};
use upv_core::unproj::{build_t_ideal, FamilyParams};
use upv_core::CheckReport;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(p: u64) -> PyResult<PrimeField> {
    PrimeField::new(p).map_err(value_err)
}

fn parse_nu(nu: Vec<String>) -> PyResult<[Scalar; 5]> {
    let v: Vec<Scalar> = nu.iter().map(|s| Scalar::parse(s).map_err(value_err)).collect::<PyResult<_>>()?;
    v.try_into().map_err(|_| PyValueError::new_err("ν needs exactly five entries"))
}

/// The parameter vector ν = (ν0, …, ν4) over ℚ(i), given as strings such as "3", "-1/2" or "1+2*i".
#[pyclass(name = "Family")]
#[derive(Clone)]
struct PyFamily {
    inner: FamilyParams,
}

impl PyFamily {
    fn reduced(&self, p: u64) -> PyResult<(PrimeField, FamilyParams)> {
        let f = field(p)?;
        let v: Vec<Scalar> = self
            .inner
            .nu
            .iter()
            .map(|s| s.try_to_fp(f).map(|x| Scalar::fp(f, x)).ok_or_else(|| value_err(format!("{s} is not defined mod {p}"))))
            .collect::<PyResult<_>>()?;
        Ok((f, FamilyParams::new(v.try_into().unwrap())))
    }
}

#[pymethods]
impl PyFamily {
    #[new]
    fn new(nu: Vec<String>) -> PyResult<Self> {
        Ok(PyFamily { inner: FamilyParams::new(parse_nu(nu)?) })
    }

    #[getter]
    fn nu(&self) -> Vec<String> {
        self.inner.strings()
    }

    fn degenerate(&self) -> bool {
        self.inner.degenerate()
    }

    fn sign_sum_special(&self) -> bool {
        self.inner.sign_sum_special()
    }

    /// Generators of the ideal of T, one formatted line each.
    fn t_ideal(&self) -> Vec<String> {
        build_t_ideal(&self.inner).dump().lines().map(String::from).collect()
    }

    /// h_T(d) for d = 0..=dmax over F_p.
    fn hilbert(&self, p: u64, dmax: u32) -> PyResult<Vec<usize>> {
        let (f, nu) = self.reduced(p)?;
        let prof = HilbertProfile::compute(&build_t_ideal(&nu), f, dmax, false, DEFAULT_BUDGET).map_err(value_err)?;
        Ok(prof.values.into_iter().map(|(_, h)| h).collect())
    }

    /// F_p-points of Z1 ∩ Z2 in (P^1)^4 as flat 8-tuples (t00, t01, …, t31).
    fn cover_points(&self, p: u64) -> PyResult<Vec<[u64; 8]>> {
        let (f, nu) = self.reduced(p)?;
        Ok(enumerate_surface(&SurfaceEquations::new(f, &nu)).iter().map(|c| c.flat()).collect())
    }

    /// The subset of `cover_points` where the Jacobian of (Z1, Z2) drops rank.
    fn singular_points(&self, p: u64) -> PyResult<Vec<[u64; 8]>> {
        let (f, nu) = self.reduced(p)?;
        let eq = SurfaceEquations::new(f, &nu);
        Ok(singular_points(&eq, &enumerate_surface(&eq)).iter().map(|c| c.flat()).collect())
    }

    fn __repr__(&self) -> String {
        format!("Family({:?})", self.inner.strings())
    }
}

/// One check outcome. `witness` and `params` are JSON text.
#[pyclass(name = "Report")]
#[derive(Clone)]
struct PyReport {
    inner: CheckReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn id(&self) -> String {
        self.inner.id.clone()
    }

    #[getter]
    fn status(&self) -> String {
        serde_json::to_value(self.inner.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
    }

    #[getter]
    fn wall_ms(&self) -> u64 {
        self.inner.wall_ms
    }

    #[getter]
    fn witness(&self) -> String {
        self.inner.witness.to_string()
    }

    #[getter]
    fn params(&self) -> String {
        serde_json::to_string(&self.inner.params).unwrap_or_default()
    }

    fn passed(&self) -> bool {
        self.inner.passed()
    }

    fn to_json(&self) -> String {
        self.inner.to_json_line()
    }

    #[staticmethod]
    fn from_json(line: &str) -> PyResult<Self> {
        CheckReport::from_json_line(line).map(|inner| PyReport { inner }).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("Report({}, {})", self.inner.id, self.status())
    }
}

fn context(primes: Option<Vec<u64>>, seed: u64, nu: Option<Vec<String>>, lam: &str, draws: usize, max_degree: u32) -> PyResult<Context> {
    let mut cfg = RunConfig { seed, draws, max_degree, deterministic: true, ..RunConfig::default() };
    if let Some(p) = primes {
        cfg.primes = p;
    }
    if let Some(nu) = nu {
        cfg.nu = Some(parse_nu(nu)?);
    }
    cfg.lambda = Scalar::parse(lam).map_err(value_err)?;
    Context::new(cfg).map_err(value_err)
}

/// (id, topic, description) for every registered check.
#[pyfunction]
fn list_checks() -> Vec<(String, String, String)> {
    REGISTRY.iter().map(|s| (s.id.into(), s.topic.into(), s.description.into())).collect()
}

/// Run "all", a module name or a check id; reports are deterministic (wall time zeroed).
#[pyfunction]
#[pyo3(signature = (target, primes=None, seed=0, nu=None, lam="3", draws=5, max_degree=4))]
fn run(
    py: Python<'_>,
    target: &str,
    primes: Option<Vec<u64>>,
    seed: u64,
    nu: Option<Vec<String>>,
    lam: &str,
    draws: usize,
    max_degree: u32,
) -> PyResult<Vec<PyReport>> {
    let ctx = context(primes, seed, nu, lam, draws, max_degree)?;
    let specs = checks::select(target).map_err(value_err)?;
    Ok(py.allow_threads(|| specs.iter().map(|s| PyReport { inner: checks::run_check(s, &ctx) }).collect()))
}

/// Text of `dump ideal|points|hilbert` under the given configuration.
#[pyfunction]
#[pyo3(signature = (artifact, primes=None, seed=0, nu=None, max_degree=4))]
fn dump(artifact: &str, primes: Option<Vec<u64>>, seed: u64, nu: Option<Vec<String>>, max_degree: u32) -> PyResult<String> {
    let art = match artifact {
        "ideal" => Artifact::Ideal,
        "points" => Artifact::Points,
        "hilbert" => Artifact::Hilbert,
        other => return Err(value_err(format!("unknown artifact {other:?}"))),
    };
    let ctx = context(primes, seed, nu, "3", 5, max_degree)?;
    dump_text(art, &ctx).map_err(value_err)
}

/// Intersection number on (P^1)^4 of four divisor classes, each given by its multidegree.
#[pyfunction]
fn intersection_number(divisors: Vec<[i64; 4]>) -> PyResult<i64> {
    let classes: Vec<IntersectionClass> = divisors.into_iter().map(IntersectionClass::divisor).collect();
    core_intersection(&classes).map_err(value_err)
}

/// A square root of −1 in F_p (p ≡ 1 mod 4).
#[pyfunction]
fn eps(p: u64) -> PyResult<u64> {
    Ok(field(p)?.eps())
}

#[pymodule]
fn upv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFamily>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(list_checks, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(dump, m)?)?;
    m.add_function(wrap_pyfunction!(intersection_number, m)?)?;
    m.add_function(wrap_pyfunction!(eps, m)?)?;
    Ok(())
}
