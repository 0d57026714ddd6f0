//! Special functions used by the closed-form dispersion relation.

pub mod asymptotic;
pub mod bessel;
pub mod gamma;
pub mod hyper;
pub mod legendre;

pub use asymptotic::{asymptotic_form, AsymptoticForm};
pub use bessel::bessel_i;
pub use gamma::{gamma, gamma_real, ln_gamma, rgamma};
pub use hyper::olver_hyp;
pub use legendre::{
    ferrers_p, ferrers_p_complex, ferrers_p_deriv, legendre_p, legendre_p_complex, legendre_p_deriv, legendre_q,
    legendre_q_complex, legendre_q_connection, Degree, Order,
};
