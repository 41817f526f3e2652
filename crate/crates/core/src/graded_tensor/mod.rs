//! Z₂-graded tensor algebra: exact scalars, polynomials, rational functions,
//! sparse operators on tensor powers and the graded slot operations.

mod linalg;
mod matrix;
mod ops;
mod poly;
mod ratfn;
mod ring;
mod scalar;
mod signature;

pub use linalg::{det, inverse, nullspace, rank, solve_affine, AffineSolution, DenseExact};
pub use matrix::{flat_index, multi_index, OpMatrix};
pub use ops::{
    crossing_matrix, crossing_matrix_inv, embed, from_coefficients, graded_kron, koszul_sign, super_permutation,
    supertrace, swap_slots, to_coefficients, twisted_transpose, SlotError,
};
pub use poly::{BiPoly, Poly};
pub use ratfn::{RatFnError, RationalFunction};
pub use ring::Ring;
pub use scalar::{format_rational, parse_rational, rat_to_f64, ExactScalar};
pub use signature::{BasisOrder, GradingSignature, SignatureError};
