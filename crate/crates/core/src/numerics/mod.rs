//! Shared numerical kernels.

pub mod gamma;
pub mod linalg;
pub(crate) mod mp;
pub mod perm;
pub mod quad;

pub use gamma::{digamma_int, lower_incomplete_gamma, upper_incomplete_gamma};
pub use linalg::{hermitian_eig, hermitian_sqrt, CMatrix, HermitianEig};
pub use perm::{enumerate_permutations, PermutationFamily};
pub use quad::{integrate_piecewise, integrate_semi_infinite, QuadratureSpec, Transform};
