//! Exact and sampled verification of orthogonality, duality and
//! superwavelet conditions for translation and affine frame systems
//! given through their Fourier transforms.

pub mod affine;
pub mod error;
pub mod geometry;
pub mod grammian;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod piecewise;
pub mod poly;
pub mod rational;
pub mod spectral;
pub mod subspace;
pub mod symbol;
pub mod verdict;

pub use error::{FrameError, Result};
pub use geometry::{RatBox, SpectralSet};
pub use matrix::{AffineMap, RatMatrix};
pub use rational::{Q, CQ};
pub use spectral::{Mode, SpectralGenerator};
pub use verdict::{CheckOptions, Verdict, VerdictKind, Violation};
