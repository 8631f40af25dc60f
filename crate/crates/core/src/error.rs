use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error(
        "masses subtend a right angle: centre of steady rotation undefined for distinct masses"
    )]
    RightAngleUndefined,
    #[error("branch unavailable: {0}")]
    BranchUnavailable(String),
    #[error("hyperbolic relative equilibria require negative curvature")]
    WrongSign,
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("no sign change on [{a}, {b}]")]
    NoSignChange { a: f64, b: f64 },
    #[error("root finder exceeded {0} iterations")]
    MaxIterations(usize),
    #[error("step size fell below minimum at t = {t} (dt = {dt})")]
    StepFailure { t: f64, dt: f64 },
    #[error("no collision: inter-particle distance stopped decreasing at r = {0}")]
    NoCollision(f64),
    #[error("no force balance: {0}")]
    NoBalance(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoSignChange { .. }
                | Error::MaxIterations(_)
                | Error::StepFailure { .. }
                | Error::NoCollision(_)
                | Error::NoBalance(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::DegenerateConfiguration(_) => "DegenerateConfiguration",
            Error::RightAngleUndefined => "RightAngleUndefined",
            Error::BranchUnavailable(_) => "BranchUnavailable",
            Error::WrongSign => "WrongSign",
            Error::ConstraintViolation(_) => "ConstraintViolation",
            Error::NoSignChange { .. } => "NoSignChange",
            Error::MaxIterations(_) => "MaxIterations",
            Error::StepFailure { .. } => "StepFailure",
            Error::NoCollision(_) => "NoCollision",
            Error::NoBalance(_) => "NoBalance",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
