use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("range error in {func}: {detail}")]
    Range { func: &'static str, detail: String },

    #[error("{family} density is singular at y = {at}")]
    Singularity { family: &'static str, at: f64 },

    #[error("no closed form for {what}; evaluate it through the oracle module")]
    UnsupportedClosedForm { what: String },

    #[error("invalid parameter for {family}: {detail}")]
    InvalidParameter { family: &'static str, detail: String },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {error:e})"
    )]
    QuadratureFailure { estimate: f64, error: f64, subdivisions: usize },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("objective is not unimodal on the bracket; coarse scan: {}", format_scan(.scan))]
    Ambiguous { scan: Vec<(f64, f64)> },

    #[error("cannot parse distribution spec {input:?}: {detail}")]
    Parse { input: String, detail: String },

    #[error("i/o error: {0}")]
    Io(String),
}

fn format_scan(scan: &[(f64, f64)]) -> String {
    scan.iter().map(|(x, y)| format!("({x:.6}, {y:.6e})")).collect::<Vec<_>>().join(" ")
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }

    pub(crate) fn param(family: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidParameter { family, detail: detail.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
