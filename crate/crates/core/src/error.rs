use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("trial failed at grid point {grid_index} (value {grid_value}), trial {trial}, stage {stage}: {source}")]
    Trial {
        grid_index: usize,
        grid_value: f64,
        trial: usize,
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures that originate in configuration or input validation
    /// rather than in the numerics.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Geometry(_)
            | Error::Scenario(_)
            | Error::InvalidArgument(_)
            | Error::Config(_) => true,
            Error::Trial { source, .. } => source.is_config(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
