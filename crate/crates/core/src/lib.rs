//! Exact computations on the Fano plane.

pub mod certify;
pub mod compfactor;
pub mod export;
pub mod fano;
pub mod forms;
pub mod g2;
pub mod lifting;
pub mod linalg;
pub mod octonion;
pub mod radon;
pub mod scalar;
