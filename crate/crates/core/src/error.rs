use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input at line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("not a Latin square: {axis} {index} repeats entry {entry}")]
    NotLatin {
        axis: &'static str,
        index: usize,
        entry: usize,
    },

    #[error("table has no two-sided neutral element")]
    NotALoop,

    #[error("power {m} of element {x} depends on bracketing")]
    NotDiassociative { x: usize, m: i64 },

    #[error("subset is not normal: {0}")]
    NotNormal(String),

    #[error("permutation group closure exceeded cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("search exceeded cap of {cap}")]
    SearchTooLarge { cap: usize },

    #[error("carrier mismatch: {left} vs {right}")]
    CarrierMismatch { left: usize, right: usize },

    #[error("loop is not an NK-loop")]
    NotNkLoop,

    #[error("generator images {first} and {second} do not commute")]
    ImagesNotCommuting {
        first: &'static str,
        second: &'static str,
    },

    #[error("generator image {0} is not a special endomorphism")]
    ImagesNotSpecial(&'static str),

    #[error("polynomial degree exceeds cap of {cap}")]
    DegreeOverflow { cap: u32 },

    #[error("polynomial coefficient overflow")]
    CoefficientOverflow,

    #[error("polynomial parse error at byte {pos}: {message}")]
    PolyParse { pos: usize, message: String },

    #[error("not an F-quasigroup: {law} law fails at ({x}, {y}, {z})")]
    NotFQuasigroup {
        law: &'static str,
        x: usize,
        y: usize,
        z: usize,
    },

    #[error("invalid arithmetic form: {0}")]
    InvalidForm(String),

    #[error("no arithmetic form recovered for point {point}")]
    NoneFound { point: usize },

    #[error("module is not in class M: {0}")]
    NotInClassM(String),

    #[error("point {point} is not in the nucleus")]
    NotNuclearlyPointed { point: usize },

    #[error("construction failed self-verification: {0}")]
    ConstructionInvalid(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the variant, used in JSON output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Malformed { .. } => "Malformed",
            Error::NotLatin { .. } => "NotLatin",
            Error::NotALoop => "NotALoop",
            Error::NotDiassociative { .. } => "NotDiassociative",
            Error::NotNormal(_) => "NotNormal",
            Error::GroupTooLarge { .. } => "GroupTooLarge",
            Error::SearchTooLarge { .. } => "SearchTooLarge",
            Error::CarrierMismatch { .. } => "CarrierMismatch",
            Error::NotNkLoop => "NotNKLoop",
            Error::ImagesNotCommuting { .. } => "ImagesNotCommuting",
            Error::ImagesNotSpecial(_) => "ImagesNotSpecial",
            Error::DegreeOverflow { .. } => "DegreeOverflow",
            Error::CoefficientOverflow => "CoefficientOverflow",
            Error::PolyParse { .. } => "PolyParse",
            Error::NotFQuasigroup { .. } => "NotFQuasigroup",
            Error::InvalidForm(_) => "InvalidForm",
            Error::NoneFound { .. } => "NoneFound",
            Error::NotInClassM(_) => "NotInClassM",
            Error::NotNuclearlyPointed { .. } => "NotNuclearlyPointed",
            Error::ConstructionInvalid(_) => "ConstructionInvalid",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
