//! Python bindings for the `aoasim` angle-of-arrival simulator.
//!
//! Angles are in radians unless a name says `_deg`. Library errors surface as
//! `ValueError`, file errors as `OSError`.

use aoasim::experiment::Execution;
use aoasim::{Angle, AntennaPattern, CompositeAoa, EllipseGeometry, RunReport};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn to_py(err: aoasim::Error) -> PyErr {
    match err {
        aoasim::Error::Io { .. } => PyOSError::new_err(err.to_string()),
        _ => PyValueError::new_err(format!("{} ({})", err, err.kind())),
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

/// Transmit antenna pattern: omni, Gaussian by half-power beamwidth, or
/// tabulated `(angle_rad, amplitude)` samples.
#[pyclass(frozen, from_py_object, name = "AntennaPattern", module = "aoasim")]
#[derive(Clone)]
struct PyPattern(AntennaPattern);

#[pymethods]
impl PyPattern {
    #[staticmethod]
    fn omni() -> Self {
        Self(AntennaPattern::Omni)
    }

    #[staticmethod]
    fn gaussian(hpbw_deg: f64) -> PyResult<Self> {
        AntennaPattern::gaussian_degrees(hpbw_deg).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn tabulated(samples: Vec<(f64, f64)>) -> PyResult<Self> {
        AntennaPattern::tabulated(samples).map(Self).map_err(to_py)
    }

    /// Half-power beamwidth in degrees, or None for omni and tabulated.
    #[getter]
    fn hpbw_deg(&self) -> Option<f64> {
        self.0.hpbw().map(f64::to_degrees)
    }

    /// Departure-angle density per radian.
    fn density(&self, phi: f64) -> f64 {
        aoasim::aod_pdf(Angle::wrap(phi), &self.0)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// Result of one simulation run.
#[pyclass(frozen, name = "RunReport", module = "aoasim")]
struct PyReport(RunReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn angle_spread(&self) -> f64 {
        self.0.angle_spread
    }

    #[getter]
    fn angle_spread_deg(&self) -> f64 {
        self.0.angle_spread_deg
    }

    #[getter]
    fn standard_error(&self) -> f64 {
        self.0.standard_error
    }

    #[getter]
    fn raw_path_angle_spread(&self) -> f64 {
        self.0.raw_path_angle_spread
    }

    #[getter]
    fn per_trial_spreads(&self) -> Vec<f64> {
        self.0.per_trial_spreads.clone()
    }

    /// Averaged spectrum, density per radian at each bin.
    #[getter]
    fn density(&self) -> Vec<f64> {
        self.0.averaged_spectrum.density.clone()
    }

    #[getter]
    fn point_mass(&self) -> f64 {
        self.0.averaged_spectrum.point_mass
    }

    #[getter]
    fn bin_centers(&self) -> Vec<f64> {
        self.0.averaged_spectrum.bin_centers()
    }

    #[getter]
    fn elapsed(&self) -> f64 {
        self.0.elapsed
    }

    /// Sum of squared density differences against `(angle_rad, density_per_rad)`.
    fn lse(&self, empirical: Vec<(f64, f64)>) -> PyResult<f64> {
        aoasim::lse(&self.0.averaged_spectrum, &empirical).map_err(to_py)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "RunReport(angle_spread_deg={:.4}, standard_error_deg={:.4}, trials={})",
            self.0.angle_spread_deg,
            self.0.standard_error.to_degrees(),
            self.0.per_trial_spreads.len()
        )
    }
}

/// A validated simulation scenario.
#[pyclass(frozen, name = "Scenario", module = "aoasim")]
struct PyScenario(aoasim::Scenario);

impl PyScenario {
    fn model(&self) -> PyResult<CompositeAoa> {
        let s = &self.0;
        CompositeAoa::new(s.ellipses(), s.taps(), s.pattern(), s.local()).map_err(to_py)
    }
}

#[pymethods]
impl PyScenario {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let config = aoasim::ScenarioConfig::from_json(text).map_err(to_py)?;
        aoasim::Scenario::from_config(config).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        let config = aoasim::io::read_scenario(&path).map_err(to_py)?;
        aoasim::Scenario::from_config(config).map(Self).map_err(to_py)
    }

    /// Builds a scenario from `(delay_s, power, paths)` taps.
    #[new]
    #[pyo3(signature = (distance_m, taps, pattern, mu, kappa=0.0, trials=500, bins=360, seed=0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        distance_m: f64,
        taps: Vec<(f64, f64, usize)>,
        pattern: PyPattern,
        mu: f64,
        kappa: f64,
        trials: usize,
        bins: usize,
        seed: u64,
    ) -> PyResult<Self> {
        let taps = aoasim::TapProfile::new(
            taps.into_iter()
                .map(|(delay, power, paths)| aoasim::Tap { delay, power, paths })
                .collect(),
        )
        .map_err(to_py)?;
        let local = aoasim::LocalScattering::new(mu, kappa).map_err(to_py)?;
        aoasim::Scenario::new(distance_m, taps, pattern.0, local, trials, bins, seed)
            .map(Self)
            .map_err(to_py)
    }

    #[pyo3(signature = (trials=None, bins=None, seed=None))]
    fn with_run_settings(&self, trials: Option<usize>, bins: Option<usize>, seed: Option<u64>) -> PyResult<Self> {
        self.0.with_run_settings(trials, bins, seed).map(Self).map_err(to_py)
    }

    fn with_pattern(&self, pattern: PyPattern) -> PyResult<Self> {
        self.0.with_pattern(pattern.0).map(Self).map_err(to_py)
    }

    #[getter]
    fn trials(&self) -> usize {
        self.0.trials()
    }

    #[getter]
    fn bins(&self) -> usize {
        self.0.bins()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.master_seed()
    }

    #[getter]
    fn digest(&self) -> u64 {
        self.0.digest()
    }

    #[getter]
    fn pattern(&self) -> PyPattern {
        PyPattern(self.0.pattern().clone())
    }

    /// Normalized `(delay_s, power, paths)` taps.
    #[getter]
    fn taps(&self) -> Vec<(f64, f64, usize)> {
        self.0.taps().taps().iter().map(|t| (t.delay, t.power, t.paths)).collect()
    }

    /// Eccentricity of each delayed-tap ellipse.
    #[getter]
    fn eccentricities(&self) -> Vec<f64> {
        self.0.ellipses().0.iter().map(|e| e.eccentricity).collect()
    }

    #[getter]
    fn rms_delay_spread(&self) -> f64 {
        self.0.taps().rms_delay_spread()
    }

    /// Continuous part of the analytic arrival-angle density, per radian.
    fn composite_pdf(&self, phi: f64) -> PyResult<f64> {
        Ok(self.model()?.density(Angle::wrap(phi)))
    }

    /// Probability carried by the direct path at zero.
    fn point_mass(&self) -> PyResult<f64> {
        Ok(self.model()?.point_mass())
    }

    /// Analytic model against `(angle_rad, density_per_rad)` points.
    fn lse_analytic(&self, empirical: Vec<(f64, f64)>) -> PyResult<f64> {
        aoasim::lse(&self.model()?, &empirical).map_err(to_py)
    }

    #[pyo3(signature = (sequential=false))]
    fn run(&self, py: Python<'_>, sequential: bool) -> PyResult<PyReport> {
        py.detach(|| aoasim::run_simulation_with(&self.0, execution(sequential)))
            .map(PyReport)
            .map_err(to_py)
    }

    /// Runs the scenario once per Gaussian beamwidth; returns `(hpbw_deg, report)` pairs.
    #[pyo3(signature = (hpbw_deg=aoasim::experiment::STANDARD_HPBW_SWEEP.to_vec(), sequential=false))]
    fn sweep(&self, py: Python<'_>, hpbw_deg: Vec<f64>, sequential: bool) -> PyResult<Vec<(f64, PyReport)>> {
        let points = py
            .detach(|| aoasim::hpbw_sweep(&self.0, &hpbw_deg, execution(sequential)))
            .map_err(to_py)?;
        Ok(points.into_iter().map(|p| (p.hpbw_deg, PyReport(p.report))).collect())
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.config().to_json().map_err(to_py)
    }
}

/// `(major_axis_m, eccentricity)` of the ellipse for a link distance and excess delay.
#[pyfunction]
fn ellipse_params(distance_m: f64, delay_s: f64) -> PyResult<(f64, f64)> {
    let g = aoasim::ellipse_params(distance_m, delay_s).map_err(to_py)?;
    Ok((g.major_axis, g.eccentricity))
}

#[pyfunction]
fn aod_to_aoa(phi_t: f64, e: f64) -> PyResult<f64> {
    aoasim::aod_to_aoa(Angle::wrap(phi_t), e).map(Angle::radians).map_err(to_py)
}

#[pyfunction]
fn aoa_to_aod(phi_r: f64, e: f64) -> PyResult<f64> {
    aoasim::aoa_to_aod(Angle::wrap(phi_r), e).map(Angle::radians).map_err(to_py)
}

/// `d phi_R / d phi_T` at the departure angle.
#[pyfunction]
fn aoa_jacobian(phi_t: f64, e: f64) -> PyResult<f64> {
    aoasim::aoa_jacobian(Angle::wrap(phi_t), e).map_err(to_py)
}

#[pyfunction]
fn sigma_from_hpbw(hpbw_rad: f64) -> PyResult<f64> {
    aoasim::sigma_from_hpbw(hpbw_rad).map_err(to_py)
}

#[pyfunction]
fn aod_pdf(phi_t: f64, pattern: &PyPattern) -> f64 {
    aoasim::aod_pdf(Angle::wrap(phi_t), &pattern.0)
}

#[pyfunction]
fn von_mises_pdf(phi: f64, mu: f64) -> PyResult<f64> {
    aoasim::von_mises_pdf(Angle::wrap(phi), mu).map_err(to_py)
}

/// Arrival-angle density for a single ellipse of eccentricity `e`.
#[pyfunction]
fn delayed_aoa_pdf(phi_r: f64, e: f64, pattern: &PyPattern) -> PyResult<f64> {
    let ellipse = EllipseGeometry {
        major_axis: 1.0,
        eccentricity: e,
        tap_index: 1,
    };
    aoasim::delayed_aoa_pdf(Angle::wrap(phi_r), &ellipse, &pattern.0).map_err(to_py)
}

/// Taps `(delay_s, power, paths)` from `(delay_s, linear_power)` PDP samples.
#[pyfunction]
#[pyo3(signature = (samples, prominence_db=aoasim::experiment::DEFAULT_PROMINENCE_DB, paths=aoasim::experiment::DEFAULT_PATHS))]
fn extract_taps(samples: Vec<(f64, f64)>, prominence_db: f64, paths: usize) -> PyResult<Vec<(f64, f64, usize)>> {
    let profile = aoasim::extract_taps(&samples, prominence_db, paths).map_err(to_py)?;
    Ok(profile.taps().iter().map(|t| (t.delay, t.power, t.paths)).collect())
}

#[pymodule]
fn _aoasim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SPEED_OF_LIGHT", aoasim::geometry::SPEED_OF_LIGHT)?;
    m.add_class::<PyPattern>()?;
    m.add_class::<PyScenario>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(ellipse_params, m)?)?;
    m.add_function(wrap_pyfunction!(aod_to_aoa, m)?)?;
    m.add_function(wrap_pyfunction!(aoa_to_aod, m)?)?;
    m.add_function(wrap_pyfunction!(aoa_jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_from_hpbw, m)?)?;
    m.add_function(wrap_pyfunction!(aod_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(von_mises_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(delayed_aoa_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(extract_taps, m)?)?;
    Ok(())
}
