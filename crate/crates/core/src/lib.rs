//! Rational sl(N) and sl(M|N) integrable spin chains with open boundaries:
//! R-matrices, reflection matrices, transfer matrices and analytical Bethe ansatz,
//! with exact and floating-point backends.

pub mod graded_tensor;
pub mod yang_baxter;
pub mod reflection;
pub mod chain;
pub mod bethe;
