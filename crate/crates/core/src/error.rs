use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input is the identity (modulo sign)")]
    IdentityInput,
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("line matrix degenerates (f - f^-1 vanishes)")]
    DegenerateLineMatrix,
    #[error("rotation order unresolved: angle/2pi = {ratio} is near-rational beyond the denominator bound")]
    UnresolvedOrder { ratio: f64 },
    #[error("half-turn lines coincide; their product is the identity")]
    CoincidentLines,
    #[error("H_L composed with the element is not an involution (defect {defect:e})")]
    NotAnInvolution { defect: f64 },
    #[error("geodesics are not disjoint")]
    NotDisjoint,
    #[error("no common perpendicular: both inputs are the same point")]
    NoPerpendicular,
    #[error("intersecting axes out of scope")]
    IntersectingAxes,
    #[error("elementary group: axes share a fixed point")]
    ElementaryGroup,
    #[error("configuration is not a discrete stopping configuration: {0}")]
    NotStoppingInput(String),
    #[error("geometry violation: {0}")]
    GeometryViolation(String),
    #[error("word budget exceeded: {words} words > {budget}")]
    BudgetExceeded { words: u64, budget: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
