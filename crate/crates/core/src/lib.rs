//! Numerical laboratory for curvature statistics of random complex plane curves.
//!
//! The crate samples two Gaussian ensembles of holomorphic functions:
//!
//! * degree-`d` random homogeneous polynomials in three variables whose zero
//!   sets are curves in the complex projective plane ([`poly`], [`crofton`]),
//! * a truncated Bargmann-Fock random polynomial on `C^2`, the local scaling
//!   limit of the projective ensemble ([`bargmann_fock`]).
//!
//! For either ensemble the Gauss curvature of the zero set is an explicit
//! rational expression in the 2-jet of the defining function ([`curvature`]).
//! The modules provide Monte Carlo estimators for the distribution of that
//! curvature (area fractions per curvature band, Gauss-Bonnet totals,
//! inflection counts, tail bounds) together with closed-form references they
//! are checked against, and a comparison of the two ensembles' normalized
//! covariance kernels under rescaling ([`bergman`]).
//!
//! Everything is driven by splittable counter-based random streams ([`rng`]),
//! so every estimate is reproducible bit-for-bit for a given root seed,
//! independently of thread count.
//!
//! The numerical kernels (jets, curvature formulas, kernels, polynomial
//! arithmetic) are generic over the scalar type through [`scalar::Real`];
//! `f64` is the default everywhere and the concrete aliases below pin the
//! common instantiations. The experiment drivers accumulate statistics in
//! `f64`.

pub mod bargmann_fock;
pub mod bergman;
pub mod bipoly;
pub mod crofton;
pub mod curvature;
pub mod error;
pub mod inflection;
pub mod linalg;
pub mod poly;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod unipoly;

pub use error::{Error, Result};

/// Complex double, the working scalar of the experiment drivers.
pub type C64 = num_complex::Complex<f64>;
/// Complex single, exercised by the generic formula layer.
pub type C32 = num_complex::Complex<f32>;
/// Single-precision 2-jet (the default `Jet2` is `f64`).
pub type Jet2F32 = poly::Jet2<f32>;
/// Single-precision homogeneous polynomial.
pub type HomPoly3F32 = poly::HomPoly3<f32>;
