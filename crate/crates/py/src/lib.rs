//! Python bindings: Wachter laws, canonical-correlation analysis, Monte
//! Carlo summaries and centering constants. Structured results come back as
//! plain dicts with the same field names as the CLI's JSON.

use hdcoint::dist::{
    cdf, coint_null_params, mean_identity, mean_neglog, mp_cdf, mp_pdf, pdf, quantile,
    white_noise_params, AspectRatio, WachterParams,
};
use hdcoint::stats::{bartlett_jhf, bartlett_theoretical, lr_center_sim, pb_center_sim, transform_cv};
use hdcoint::{
    analyze as analyze_panel, build_report, run_mc, run_mc_with_threads, CanonicalSpectrum,
    DeterministicSpec, DgpSpec, McConfig, TimeSeriesPanel,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn value_err(e: hdcoint::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ratio(c: f64) -> PyResult<AspectRatio> {
    AspectRatio::new(c).map_err(value_err)
}

fn det_spec(s: &str) -> PyResult<DeterministicSpec> {
    s.parse().map_err(value_err)
}

/// Serializes through JSON so dict keys match the CLI output.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "WachterLaw", frozen)]
struct PyWachter {
    inner: WachterParams,
}

#[pymethods]
impl PyWachter {
    #[new]
    fn new(gamma1: f64, gamma2: f64) -> PyResult<Self> {
        Ok(Self {
            inner: WachterParams::new(gamma1, gamma2).map_err(value_err)?,
        })
    }

    /// Null limit W(c/(1+c), 2c/(1+c)).
    #[staticmethod]
    fn null(c: f64) -> PyResult<Self> {
        Ok(Self {
            inner: coint_null_params(ratio(c)?).map_err(value_err)?,
        })
    }

    /// White-noise limit W(c/(2-c), 1/(2-c)).
    #[staticmethod]
    fn white_noise(c: f64) -> PyResult<Self> {
        Ok(Self {
            inner: white_noise_params(ratio(c)?).map_err(value_err)?,
        })
    }

    #[getter]
    fn gamma1(&self) -> f64 {
        self.inner.gamma1()
    }

    #[getter]
    fn gamma2(&self) -> f64 {
        self.inner.gamma2()
    }

    #[getter]
    fn support(&self) -> (f64, f64) {
        (self.inner.b_minus(), self.inner.b_plus())
    }

    #[getter]
    fn atom0(&self) -> f64 {
        self.inner.atom0()
    }

    #[getter]
    fn atom1(&self) -> f64 {
        self.inner.atom1()
    }

    fn pdf(&self, x: f64) -> f64 {
        pdf(&self.inner, x)
    }

    fn cdf(&self, x: f64) -> f64 {
        cdf(&self.inner, x)
    }

    fn quantile(&self, q: f64) -> PyResult<f64> {
        quantile(&self.inner, q).map_err(value_err)
    }

    fn mean(&self) -> f64 {
        self.inner.expect(|x| x)
    }

    fn __repr__(&self) -> String {
        format!("WachterLaw({}, {})", self.inner.gamma1(), self.inner.gamma2())
    }
}

#[pyclass(name = "Spectrum", frozen)]
struct PySpectrum {
    inner: CanonicalSpectrum,
}

#[pymethods]
impl PySpectrum {
    /// Squared canonical correlations, largest first.
    #[getter]
    fn lambdas(&self) -> Vec<f64> {
        self.inner.lambdas().to_vec()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.t()
    }

    #[getter]
    fn c_hat(&self) -> f64 {
        self.inner.c_hat()
    }

    #[pyo3(signature = (r = 0))]
    fn report<'py>(&self, py: Python<'py>, r: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &build_report(&self.inner, r).map_err(value_err)?)
    }

    fn __repr__(&self) -> String {
        format!("Spectrum(p={}, t={})", self.inner.p(), self.inner.t())
    }
}

/// `rows` holds one observation per row, one variable per column.
#[pyfunction]
#[pyo3(signature = (rows, det = "none"))]
fn analyze(rows: Vec<Vec<f64>>, det: &str) -> PyResult<PySpectrum> {
    let spec = det_spec(det)?;
    let panel = TimeSeriesPanel::from_observations(&rows).map_err(value_err)?;
    Ok(PySpectrum {
        inner: analyze_panel(&panel, spec).map_err(value_err)?,
    })
}

#[allow(clippy::too_many_arguments)]
#[pyfunction]
#[pyo3(signature = (
    p, t, reps = 1000, dgp = "rw", rho = None, white_noise = None,
    det = "none", r = 0, seed = 0, keep_spectra = false, threads = None
))]
fn simulate<'py>(
    py: Python<'py>,
    p: usize,
    t: usize,
    reps: usize,
    dgp: &str,
    rho: Option<f64>,
    white_noise: Option<usize>,
    det: &str,
    r: usize,
    seed: u64,
    keep_spectra: bool,
    threads: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let dgp = match (dgp, rho, white_noise) {
        ("rw", None, None) => DgpSpec::RandomWalk,
        ("rwc", None, None) => DgpSpec::RandomWalkWithConstant,
        ("ar1", Some(rho), None) => DgpSpec::StationaryAr1 { rho },
        ("mixed", None, Some(k)) => DgpSpec::WhiteNoiseBlock { white_noise: k },
        _ => {
            return Err(PyValueError::new_err(
                "dgp must be 'rw', 'rwc', 'ar1' with rho, or 'mixed' with white_noise",
            ))
        }
    };
    let config = McConfig {
        det_spec: det_spec(det)?,
        rank_r: r,
        seed,
        keep_spectra,
        ..McConfig::new(p, t, reps, dgp)
    };
    let summary = py
        .detach(|| match threads {
            Some(n) => run_mc_with_threads(&config, n),
            None => run_mc(&config),
        })
        .map_err(value_err)?;
    to_py(py, &summary)
}

#[derive(Serialize)]
struct Centers {
    c: f64,
    lr_center_sim: Option<f64>,
    pb_center_sim: f64,
    mean_identity: f64,
    mean_neglog: Option<f64>,
    bartlett_theoretical: Option<f64>,
    bartlett_jhf: f64,
}

/// Centering constants at `c`; entries outside their domain are `None`.
#[pyfunction]
fn centers<'py>(py: Python<'py>, c: f64) -> PyResult<Bound<'py, PyAny>> {
    let a = ratio(c)?;
    let row = Centers {
        c,
        lr_center_sim: lr_center_sim(a).ok(),
        pb_center_sim: pb_center_sim(a),
        mean_identity: mean_identity(a),
        mean_neglog: mean_neglog(a).ok(),
        bartlett_theoretical: bartlett_theoretical(c).ok(),
        bartlett_jhf: bartlett_jhf(c).map_err(value_err)?,
    };
    to_py(py, &row)
}

#[pyfunction(name = "transform_cv")]
fn py_transform_cv(cv: f64, p: usize) -> PyResult<f64> {
    transform_cv(cv, p).map_err(value_err)
}

#[pyfunction(name = "mp_pdf")]
fn py_mp_pdf(x: f64) -> f64 {
    mp_pdf(x)
}

#[pyfunction(name = "mp_cdf")]
fn py_mp_cdf(x: f64) -> f64 {
    mp_cdf(x)
}

#[pymodule]
fn hdcoint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWachter>()?;
    m.add_class::<PySpectrum>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(centers, m)?)?;
    m.add_function(wrap_pyfunction!(py_transform_cv, m)?)?;
    m.add_function(wrap_pyfunction!(py_mp_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(py_mp_cdf, m)?)?;
    Ok(())
}
