use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("angle {0} rad lies outside (-pi, pi]")]
    AngleOutOfRange(f64),

    #[error("eccentricity {0} outside [0, 1)")]
    Eccentricity(f64),

    #[error("invalid antenna pattern: {0}")]
    Pattern(String),

    #[error("invalid tap profile: {0}")]
    TapProfile(String),

    #[error("tap extraction failed: {0}")]
    NoTaps(String),

    #[error("{0} ellipses supplied for {1} delayed taps")]
    EllipseCount(usize, usize),

    #[error("path set is empty or carries no power")]
    EmptyPathSet,

    #[error("spectra do not share a common binning ({0} vs {1} bins)")]
    BinMismatch(usize, usize),

    #[error("spectrum is not normalized: total probability {0}")]
    Unnormalized(f64),

    #[error("trial {index}: {source}")]
    Trial {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::AngleOutOfRange(_) => "angle_out_of_range",
            Error::Eccentricity(_) => "eccentricity",
            Error::Pattern(_) => "pattern",
            Error::TapProfile(_) => "tap_profile",
            Error::NoTaps(_) => "no_taps",
            Error::EllipseCount(..) => "ellipse_count",
            Error::EmptyPathSet => "empty_path_set",
            Error::BinMismatch(..) => "bin_mismatch",
            Error::Unnormalized(_) => "unnormalized",
            Error::Trial { .. } => "trial",
            Error::Scenario(_) => "scenario",
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
