//! Geometry-based simulation of azimuthal angle-of-arrival (AOA) statistics.
//!
//! Scatterers for each delay tap sit on an ellipse whose foci are the
//! transmitter and the receiver. Departure angles are drawn from the transmit
//! antenna's power pattern and mapped through the ellipse to arrival angles,
//! while zero-delay (local) scattering follows a von Mises law around the
//! receiver. The crate provides
//!
//! - [`geometry`]: ellipse parameters and the departure/arrival angle mapping,
//! - [`angular_models`]: analytic AOD, von Mises, per-ellipse and composite AOA densities,
//! - [`montecarlo`]: seeded generation of per-trial path sets,
//! - [`estimation`]: power-weighted angular spectra, rms angle spread and LSE,
//! - [`experiment`]: scenario files, tap extraction, multi-trial runs and HPBW sweeps,
//! - [`io`]: CSV/JSON readers and writers used by the command line tool.

pub mod angle;
pub mod angular_models;
pub mod error;
pub mod estimation;
pub mod experiment;
pub mod geometry;
pub mod io;
pub mod montecarlo;
pub mod special;

pub use angle::Angle;
pub use angular_models::{
    aod_pdf, composite_aoa_pdf, delayed_aoa_pdf, sigma_from_hpbw, von_mises_pdf, AntennaPattern,
    CompositeAoa, LocalScattering, Tap, TapProfile, TabulatedPattern,
};
pub use error::{Error, Result};
pub use estimation::{
    average_spectra, estimate_pdf, lse, raw_path_angle_spread, rms_angle_spread, AngularSpectrum,
    DensityModel,
};
pub use experiment::{
    extract_taps, hpbw_sweep, run_simulation, run_simulation_with, Execution, PatternConfig,
    RunReport, Scenario, ScenarioConfig, SweepPoint, TapConfig,
};
pub use geometry::{aoa_jacobian, aoa_to_aod, aod_to_aoa, ellipse_params, EllipseGeometry, EllipseSet};
pub use montecarlo::{
    generate_trial, sample_aod, sample_local_aoa, sample_local_powers, sample_tap_powers,
    PathSample, PathSet,
};
