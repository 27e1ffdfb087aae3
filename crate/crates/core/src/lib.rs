//! Delsarte-type upper bounds for codes in the binary Hamming space and on the
//! unit sphere.
//!
//! Extremal polynomials are built from Christoffel-Darboux kernels of the
//! space's orthonormal system and of its two adjacent systems, or recovered as
//! top eigenfunctions of corner-perturbed Jacobi matrices. Every bound is
//! emitted only after the polynomial passes a cone audit. An exact Delsarte LP
//! and ordered-Hamming (NRT) combinatorics serve as ground truth.

pub mod constructions;
pub mod error;
pub mod feasibility;
pub mod kernels;
pub mod lp_oracle;
pub mod nrt;
pub mod orthopoly;
pub mod report;
pub mod spaces;
pub mod spectral;
pub mod tridiag;

pub use constructions::{
    bound_for_distance, bound_for_s, bound_value, certify, lev_degree_select, lev_even_poly, lev_odd_poly,
    mrrw_bound_closed, mrrw_poly, BoundMethod, BoundPolynomial, BoundResult, LevVariant, Method,
};
pub use error::{Error, Result};
pub use feasibility::{cone_certificate, ConeCertificate, Tolerances};
pub use lp_oracle::{delsarte_lp, LpMode, LpSolution};
pub use spaces::{custom_space, hamming_space, sphere_space, BasisId, MeasureSpec, MeasureVariant, SpaceDescriptor};
pub use spectral::{build_tk, spectral_bound_fixed, spectral_recover_bound, top_eigenpair, SignVariant};
