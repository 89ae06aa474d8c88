use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("grid of {n} points is too small for band {band}: need at least {required}")]
    GridTooSmall { n: usize, band: usize, required: usize },

    #[error("grid size {0} is not a power of two")]
    GridNotPowerOfTwo(usize),

    #[error("winding number undefined: symbol modulus {min_modulus:.3e} on the grid")]
    WindingUndefined { min_modulus: f64 },

    #[error("grid too coarse for winding number: argument increment {increment:.3} exceeds pi/2, use more than {n} points")]
    GridTooCoarse { increment: f64, n: usize },

    #[error("expected a scalar (1x1) symbol, got {rows}x{cols}")]
    NotScalar { rows: usize, cols: usize },

    #[error("singular level {sigma} not separated: spectral gap {gap:.3e} at grid point {point}")]
    LevelNotSeparated { sigma: f64, gap: f64, point: usize },

    #[error("subspace family has non-constant dimension")]
    FlaggedFamily,

    #[error("vector is not a maximizing vector: |H x| / (|H| |x|) = {ratio}")]
    NotMaximizer { ratio: f64 },

    #[error("top Hankel singular value is not simple (multiplicity {multiplicity})")]
    MultipleTopSingularValue { multiplicity: usize },

    #[error("weighted Gram matrix is singular (min eigenvalue {min_eigenvalue:.3e})")]
    SingularGram { min_eigenvalue: f64 },

    #[error("extremal set is empty")]
    EmptyExtremalSet,

    #[error("not a thematic pair: {0}")]
    NotThematic(String),

    #[error("invalid recipe: {0}")]
    InvalidRecipe(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("kernel did not stabilize by degree {dmax} (inconclusive at degree budget)")]
    DegreeBudgetExhausted { dmax: usize, trajectory: Vec<(usize, usize)> },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("malformed symbol JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
