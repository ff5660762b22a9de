//! Exact linear algebra over Q and F_p, and integer normal forms.

pub mod intmat;
pub mod mat;
pub mod scalar;

pub use intmat::{ints, quotient_group, smith_normal_form, IntMat, K0Presentation, Smith};
pub use mat::{rank_of_vectors, Mat, Rref};
pub use scalar::{Field, Scalar, DEFAULT_PRIME};
