use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the domain of the operation.
    Domain { what: &'static str, value: f64 },
    /// An iteration hit its cap before converging.
    NoConvergence { what: &'static str, iterations: usize },
    /// Root polishing failed inside the bracket `[lo, hi]`.
    RootPolish { lo: f64, hi: f64 },
    /// Body indices out of range or equal.
    Index { i: usize, j: usize, n: usize },
    /// Two bodies coincide inside the logarithmic pair set.
    Singular { i: usize, j: usize },
    /// Velocity vanishes, curvature is undefined.
    DegeneratePoint,
    /// Center of mass is displaced beyond the allowed tolerance.
    CenterOfMassDisplaced { magnitude: f64 },
    /// Design matrix too badly conditioned to identify the parameters.
    IllPosedFit { condition: f64 },
    /// Near-collision during integration.
    Collision { time: f64, i: usize, j: usize },
    /// Adaptive step size fell below representable resolution.
    StepUnderflow { time: f64, step: f64 },
    /// Mismatched dimensions between inputs.
    Shape { expected: usize, found: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::NoConvergence { what, iterations } => {
                write!(f, "{what} did not converge after {iterations} iterations")
            }
            Error::RootPolish { lo, hi } => {
                write!(f, "root polishing failed in bracket [{lo}, {hi}]")
            }
            Error::Index { i, j, n } => {
                write!(f, "invalid body pair ({i}, {j}) for {n} bodies")
            }
            Error::Singular { i, j } => write!(f, "bodies {i} and {j} coincide"),
            Error::DegeneratePoint => write!(f, "zero velocity, curvature undefined"),
            Error::CenterOfMassDisplaced { magnitude } => {
                write!(f, "center of mass displaced by {magnitude}")
            }
            Error::IllPosedFit { condition } => {
                write!(f, "ill-posed fit, condition estimate {condition:e}")
            }
            Error::Collision { time, i, j } => {
                write!(f, "near-collision of bodies {i} and {j} at t = {time}")
            }
            Error::StepUnderflow { time, step } => {
                write!(f, "step size underflow (h = {step:e}) at t = {time}")
            }
            Error::Shape { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
        }
    }
}

impl core::error::Error for Error {}
