use thiserror::Error;

/// Crate-wide error type covering every domain failure the toolkit reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("function has a non-finite sample or evaluation at {context}")]
    NonFinite { context: String },
    #[error("quadrature budget exhausted: {subdivisions} subdivisions reached before tolerance {tol:e}")]
    BudgetExceeded { subdivisions: usize, tol: f64 },
    #[error("Lp exponent must satisfy p >= 1, got {p}")]
    InvalidP { p: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("Jensen check requires the grid interval [0,1], got [{a}, {b}]")]
    NotProbabilityDomain { a: f64, b: f64 },
    #[error("Cantor parameter must lie in (0, 1/3], got {theta}")]
    ThetaOutOfRange { theta: f64 },
    #[error("map is not contracting: step ratio {ratio} > 1 at iteration {iteration}")]
    NotContracting { ratio: f64, iteration: usize },
    #[error("no convergence within {0} iterations")]
    MaxIter(usize),
    #[error("Picard window too large: L * window = {product} >= 1")]
    WindowTooLarge { product: f64 },
    #[error("step size must be positive, got {0}")]
    StepNonPositive(f64),
    #[error("Gronwall rate beta must be positive, got {0}")]
    BetaNonPositive(f64),
    #[error("Lipschitz constant must be positive, got {0}")]
    LNonPositive(f64),
    #[error("grid spacings differ: {0} vs {1}")]
    SpacingMismatch(f64, f64),
    #[error("grid too narrow for the requested mollifier: {0}")]
    GridTooNarrow(String),
    #[error("unsupported exponent: {0}")]
    UnsupportedP(String),
    #[error("sample grid too coarse: order {order} needs at least {needed} intervals, grid has {actual}")]
    GridTooCoarse { order: usize, needed: usize, actual: usize },
    #[error("requested partial-sum order {requested} exceeds series order {max}")]
    OrderExceeded { requested: usize, max: usize },
    #[error("heat diffusivity omega must be nonzero")]
    OmegaZero,
    #[error("samples have not decayed at the window edges: |f| = {edge:e} > {threshold:e}")]
    NotDecayed { edge: f64, threshold: f64 },
    #[error("Laplace transform is defined for x >= 0, got {0}")]
    NegativeX(f64),
    #[error("integrand is non-finite on the contour trace near t = {t}")]
    NonFiniteOnTrace { t: f64 },
    #[error("evaluation point lies on (or too close to) the contour trace: distance {distance:e}")]
    PointOnTrace { distance: f64 },
    #[error("pole order mismatch at {location}: contour residue {contour} vs derivative-limit {limit}")]
    OrderMismatch { location: String, contour: String, limit: String },
    #[error("residue sum does not match the contour integral: |lhs - rhs| = {discrepancy:e}")]
    MissingPole { discrepancy: f64 },
    #[error("f vanishes on the contour trace: min |f| = {min_abs:e}")]
    ZeroOnTrace { min_abs: f64 },
    #[error("winding integral {value} is not within 0.1 of an integer")]
    NotNearInteger { value: f64 },
    #[error("bilinear form is not coercive on the discrete space: alpha = {alpha}")]
    NotCoercive { alpha: f64 },
    #[error("assembled system is singular: {0}")]
    SingularSystem(String),
    #[error("function does not vanish at both endpoints: u(a) = {left}, u(b) = {right}")]
    NotZeroBoundary { left: f64, right: f64 },
    #[error("degenerate interval: b = {b} must exceed a = {a}")]
    DegenerateInterval { a: f64, b: f64 },
    #[error("Fredholm alternative: the homogeneous equation has nontrivial solutions (condition estimate {condition:e})")]
    Alternative { condition: f64, kernel_basis: Vec<Vec<f64>> },
    #[error("eigen-residual is undefined for the zero function")]
    ZeroFunction,
    #[error("smallness bound violated: |lambda| = {lambda} exceeds r / (sup|phi| (b-a)) = {bound}")]
    BoundViolated { lambda: f64, bound: f64 },
    #[error("kernel is not symmetric: max |K(x,y) - K(y,x)| = {asymmetry:e} on the nodes")]
    NotSymmetric { asymmetry: f64 },
    #[error("no curves supplied")]
    EmptyInput,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
