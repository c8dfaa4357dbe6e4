use crate::dyadic::Dyadic;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrameError {
    #[error("window exponent mismatch: {0} vs {1}")]
    WindowMismatch(u32, u32),
    #[error("operation escapes window [-2^{window}, 2^{window}): offending endpoint {point}")]
    WindowOverflow { window: u32, point: Dyadic },
    #[error("invalid interval: lower endpoint {a} not below upper endpoint {b}")]
    EmptyInterval { a: Dyadic, b: Dyadic },
    #[error("cannot add step functions with different characters ({0} vs {1})")]
    CharacterMismatch(Dyadic, Dyadic),
    #[error("empty support: {0}")]
    EmptySupport(String),
    #[error("not reductive: {0}")]
    NotReductive(String),
    #[error("product does not terminate: |m0| != 1 near 0 (mod 1)")]
    ProductNonTerminating,
    #[error("non-annular support: {0}")]
    NonAnnular(String),
    #[error("degenerate high-pass: synthesized wavelet is zero")]
    DegenerateHighPass,
    #[error("empty projection: restriction has empty support")]
    EmptyProjection,
    #[error("semiorthogonalization undefined: weight vanishes on {0}")]
    SemiorthUndefined(Dyadic),
    #[error("not unimodular at {point}: |value| = {modulus}")]
    NotUnimodular { point: Dyadic, modulus: f64 },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, FrameError>;
