//! Multivariate polynomials over the rationals, Gröbner bases and ideal
//! operations.

mod format;
mod groebner;
mod ideal;
mod monomial;
mod poly;

pub use format::{
    default_names, gl_variable_names, parse_poly, poly_from_json, poly_to_json, poly_to_text,
    IdealJson, TermJson,
};
pub use groebner::{groebner_basis, normal_form, satisfies_buchberger_criterion, GbConfig};
pub use ideal::{linear_images, Ideal};
pub use monomial::{monomial_count, monomials_up_to, Monomial, MonomialOrder};
pub use poly::Poly;
