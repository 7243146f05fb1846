//! Computational toolkit for the local spectral theory of degree-two Siegel
//! modular forms (genus-2 holomorphic cusp forms, equivalently automorphic
//! representations of GSp(4) over the rationals).
//!
//! The crate is organized around the objects that appear in vertical
//! Sato–Tate / Plancherel equidistribution statements for Hecke eigenvalue
//! systems:
//!
//! * [`satake`] — Satake parameters of an unramified local representation in
//!   three interchangeable coordinate systems (angles, spin multiset,
//!   eigenvalue square), plus the unitarity classification of the
//!   non-tempered shapes.
//! * [`measures`] — the limiting Sato–Tate density, the p-adic Plancherel
//!   density with its explicit product form, quadrature-measured
//!   normalization, and a deterministic rejection sampler.
//! * [`hecke`] — spherical Hecke eigenvalues as symmetric functions of the
//!   Satake parameters: the degree-four generating series, the
//!   eigenvalue-to-power-sum chains used by both Euler factors, and the
//!   unipotent orbital-integral lookup tables (exact rational arithmetic).
//! * [`characters`] — holomorphic discrete-series character formulas on the
//!   regular elements of the compact and non-compact Cartan subgroups, their
//!   singular limits (second differences against the Weyl denominator), and
//!   the dimension / formal-degree polynomials.
//! * [`lfun`] — degree-4 (spin) and degree-5 (standard) Euler factors,
//!   Dirichlet coefficients, logarithmic-derivative coefficients via Newton's
//!   identities, analytic conductors, and prime-power tail bounds per
//!   unitarity class.
//! * [`onelevel`] — one-level-density kernels for the five classical symmetry
//!   types on both sides of the explicit formula, the Fejér test pair, and
//!   the spin/standard main-term predictions.
//! * [`harness`] — eigenvalue datasets (CSV/JSON interchange and synthetic
//!   families), equidistribution reports, and error-budget shapes.
//! * [`verify`] — the end-to-end verification suites the CLI and the
//!   acceptance tests share.
//!
//! All floating-point work is double precision; everything that is exact in
//! the underlying combinatorics (orbital integrals, dimension formulas,
//! conductor bounds) uses exact integer or rational arithmetic. Every
//! randomized routine takes an explicit seed and is bit-reproducible.

pub mod characters;
pub mod error;
pub mod harness;
pub mod hecke;
pub mod lfun;
pub mod measures;
pub mod onelevel;
pub mod quad;
pub mod satake;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
