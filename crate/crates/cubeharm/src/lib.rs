//! Harmonic analysis on the Boolean cube and friends.
//!
//! The crate is organized around [`CubeFunction`], a dense real-valued
//! function on `{-1,+1}^ell`. On top of it sit Walsh/Rademacher analysis
//! ([`walsh`]), dyadic martingale machinery ([`martingale`]), and exact
//! even-moment / best-constant computations for Rademacher sums
//! ([`khintchine`]). Independent of the cube there are closed-form Gaussian
//! absolute moments ([`gaussian`]), lacunary polynomials on the circle
//! ([`lacunary`]), and exact `l_inf -> l_1` matrix norms with a
//! Grothendieck-ratio optimizer ([`bilinear`]).
//!
//! Index convention used everywhere: a point of the cube is an integer
//! `b < 2^ell`, and coordinate `x_j` (1-based) is `+1` when bit `j-1` of `b`
//! is `0`, `-1` when it is `1`.

pub mod bilinear;
pub mod cube;
pub mod gaussian;
pub mod khintchine;
pub mod lacunary;
pub mod martingale;
pub mod verify;
pub mod walsh;

pub use cube::{CubeError, CubeFunction};
pub use walsh::WalshSpectrum;
