use thiserror::Error;

/// Failures raised anywhere in the discretisation pipeline.
///
/// Geometric hypothesis violations (`EdgeCrossings`, `ElementCrossings`,
/// `OutsideTube`) usually mean the mesh is too coarse for the interface.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate parametrization at xi = {xi}: |g'| = {speed:e}")]
    DegenerateParametrization { xi: f64, speed: f64 },

    #[error("point outside the tubular neighbourhood: eta = {eta}, 1 + eta*kappa = {stretch}, half-width = {half_width}")]
    OutsideTube {
        eta: f64,
        stretch: f64,
        half_width: f64,
    },

    #[error("closest-point iteration did not converge after {iterations} steps (residual {residual:e})")]
    PullBackDiverged { iterations: usize, residual: f64 },

    #[error("curve orientation invalid: the normal must point from the minus to the plus side (level set {value:e} at xi = {xi})")]
    Orientation { xi: f64, value: f64 },

    #[error("edge {edge} is crossed by the interface more than once (mesh too coarse)")]
    EdgeCrossings { edge: usize },

    #[error("element {element} is crossed on {crossings} edges, expected 0 or 2 (mesh too coarse)")]
    ElementCrossings { element: usize, crossings: usize },

    #[error("interface element {element} touches the domain boundary")]
    BoundaryInterface { element: usize },

    #[error("fictitious element of {element} overlaps {count} mesh elements (limit 49)")]
    FictitiousOverlap { element: usize, count: usize },

    #[error("interface inside element {element} is not a graph over either axis; refine the mesh")]
    NotGraph { element: usize },

    #[error("local IFE system on element {element} is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { element: usize, condition: f64 },

    #[error("singular local {what} on element {element} (condition estimate {condition:e})")]
    SingularLocal {
        element: usize,
        what: &'static str,
        condition: f64,
    },

    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
