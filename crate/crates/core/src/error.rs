use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not expansive (some eigenvalue has modulus <= 1)")]
    NotExpansive,
    #[error("matrix is not integer valued")]
    NotIntegerMatrix,
    #[error("generator is not in class D (support must be compact and bounded away from 0)")]
    NotClassD,
    #[error("index sets of the two systems do not match: {0}")]
    IndexMismatch(String),
    #[error("{0} is not a coset representative of Z^d / A*Z^d")]
    NotCosetRepresentative(String),
    #[error("unknown profile {0:?}")]
    UnknownProfile(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("normalization {0} has no rational square root; exact mode cannot represent it")]
    IrrationalWeight(String),
    #[error("window touches the origin; the dilation orbit near 0 is infinite")]
    WindowTouchesOrigin,
    #[error("support {support} does not fit the model band [-{half}, {half}) (aliasing)")]
    SupportOverflow { support: String, half: String },
    #[error("not finitely computable: {0}")]
    NotFinitelyComputable(String),
    #[error("conjugated dilations coincide; use the equal-dilation check instead")]
    EqualDilations,
    #[error("a system mixes several lattice matrices where a single one is required")]
    MixedLattices,
    #[error("empty input: {0}")]
    Empty(String),
    #[error("exact mode is only available in dimension 1 (found dimension {0})")]
    ExactModeUnsupported(usize),
    #[error("lattice step {step} is not a positive integer dividing N = {n}")]
    ModelStep { step: String, n: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, FrameError>;

impl FrameError {
    /// Stable machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            FrameError::DimensionMismatch { .. } => "dimension_mismatch",
            FrameError::Singular => "singular_matrix",
            FrameError::NotExpansive => "not_expansive",
            FrameError::NotIntegerMatrix => "not_integer_matrix",
            FrameError::NotClassD => "not_class_d",
            FrameError::IndexMismatch(_) => "index_mismatch",
            FrameError::NotCosetRepresentative(_) => "not_coset_representative",
            FrameError::UnknownProfile(_) => "unknown_profile",
            FrameError::InvalidParameter(_) => "invalid_parameter",
            FrameError::IrrationalWeight(_) => "irrational_weight",
            FrameError::WindowTouchesOrigin => "window_touches_origin",
            FrameError::SupportOverflow { .. } => "support_overflow",
            FrameError::NotFinitelyComputable(_) => "not_finitely_computable",
            FrameError::EqualDilations => "equal_dilations",
            FrameError::MixedLattices => "mixed_lattices",
            FrameError::Empty(_) => "empty_input",
            FrameError::ExactModeUnsupported(_) => "exact_mode_unsupported",
            FrameError::ModelStep { .. } => "model_step",
            FrameError::Parse(_) => "parse_error",
            FrameError::TooLarge(_) => "too_large",
        }
    }
}
