use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Position-aware parse failure for group specs and cycle strings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero in field arithmetic")]
    InvalidScalar,
    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("element order exceeds cap {cap}")]
    OrderCapExceeded { cap: u64 },
    #[error("{p} divides {q}: element would not be semisimple")]
    NotSemisimple { p: u64, q: u64 },
    #[error("functional does not vanish on the transvection direction")]
    NotIsotropicPair,
    #[error("reflection axis is isotropic")]
    IsotropicAxis,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("unsupported group spec: {0}")]
    UnsupportedSpec(String),
    #[error("generator validation failed: {0}")]
    GeneratorValidationFailed(String),
    #[error("action on {points} points exceeds cap {cap}")]
    ActionTooLarge { points: u64, cap: u64 },
    #[error("conjugacy class exceeds member cap {cap}")]
    ClassTooLarge { cap: usize },
    #[error("solvable radical infeasible: {0}")]
    RadicalInfeasible(String),
    #[error("subgroup conjugation orbit exceeds cap {cap}")]
    SubgroupOrbitTooLarge { cap: usize },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invalid family parameters: {0}")]
    InvalidFamilyParams(String),
    #[error("invalid counting instance: {0}")]
    InvalidInstance(String),
    #[error("construction not applicable: {0}")]
    NotApplicable(String),
    #[error("no generating pair found after {attempts} attempts")]
    GeneratingPairNotFound { attempts: usize },
    #[error("witness failed re-verification: {0}")]
    WitnessNotVerified(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("class selector: {0}")]
    Selector(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable name of the variant, used in error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "InvalidField",
            Error::InvalidScalar => "InvalidScalar",
            Error::FieldMismatch { .. } => "FieldMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SingularMatrix => "SingularMatrix",
            Error::OrderCapExceeded { .. } => "OrderCapExceeded",
            Error::NotSemisimple { .. } => "NotSemisimple",
            Error::NotIsotropicPair => "NotIsotropicPair",
            Error::IsotropicAxis => "IsotropicAxis",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::UnsupportedSpec(_) => "UnsupportedSpec",
            Error::GeneratorValidationFailed(_) => "GeneratorValidationFailed",
            Error::ActionTooLarge { .. } => "ActionTooLarge",
            Error::ClassTooLarge { .. } => "ClassTooLarge",
            Error::RadicalInfeasible(_) => "RadicalInfeasible",
            Error::SubgroupOrbitTooLarge { .. } => "SubgroupOrbitTooLarge",
            Error::Infeasible(_) => "Infeasible",
            Error::InvalidFamilyParams(_) => "InvalidFamilyParams",
            Error::InvalidInstance(_) => "InvalidInstance",
            Error::NotApplicable(_) => "NotApplicable",
            Error::GeneratingPairNotFound { .. } => "GeneratingPairNotFound",
            Error::WitnessNotVerified(_) => "WitnessNotVerified",
            Error::InvalidPermutation(_) => "InvalidPermutation",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::Selector(_) => "Selector",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
