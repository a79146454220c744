use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A cyclic factor was zero or otherwise unusable.
    #[error("invalid factors: {0}")]
    InvalidFactors(String),

    /// An element's residues do not fit the group it was used with.
    #[error("invalid element: {0}")]
    InvalidElement(String),

    /// Two objects were combined that live over different groups,
    /// subgroups, quotients or grids.
    #[error("mismatched context: {0}")]
    Mismatch(String),

    /// `reconstruct` was called with windows whose inner product vanishes.
    #[error("non-invertible window pair: |<g2,g1>| = {0:.3e}")]
    NonInvertibleWindowPair(f64),

    /// An operation that divides by the window energy got a zero window.
    #[error("degenerate window: ||g||_2 = {0:.3e}")]
    DegenerateWindow(f64),

    /// A norm exponent outside the operation's admissible range.
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    /// Exact L^p -> L^p operator norms are only available for p in {1, 2, inf};
    /// use the sampled lower bound for other exponents.
    #[error("unsupported exponent p = {0}: use lp_norm_lower_bound")]
    UnsupportedExponent(f64),

    /// A square-matrix operation was applied to a rectangular matrix.
    #[error("non-square matrix: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    /// A localization region was empty, out of range, or missed the identity.
    #[error("invalid region: {0}")]
    InvalidRegion(String),

    /// An exponent outside the range a bound statement is made for.
    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
