//! Sparse multivariate polynomials and the polynomial systems whose zeros
//! are Toeplitz factorizations.

mod poly;
mod system;

pub use poly::{degrevlex_cmp, Coeff, FieldTag, Monomial, MultiPoly, Ring};
pub use system::{
    build_parametric_system, build_toeplitz_product_system, coefficient_var, coefficient_vars, diagonal_system3,
    verify_diagonal_certificate, DiagonalCertificate, PolySystem, DIAGONAL_CERTIFICATE, DIAGONAL_CERTIFICATE_RHS,
};
