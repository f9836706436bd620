//! Curvature-tensor algebra and the machinery around tensors whose
//! skew-symmetric curvature operator has constant eigenvalues (IP tensors).

pub mod curvature;
pub mod error;
pub mod linalg;
pub mod metrics3;
pub mod normed_maps;
pub mod proof_kit;
pub mod quotient_ring;
pub mod search;

pub use error::{Error, Result};
