//! Exact span calculus for finite locally free correspondences.
//!
//! The crate is layered bottom-up:
//!
//! * [`poly`]: exact polynomials over QQ and F_p with the companion encoding
//!   of inverted variables.
//! * [`groebner`]: Buchberger, normal forms, elimination, saturation, module
//!   presentations over a base ring and Fitting ideals.
//! * [`spans`]: affine schemes, spans `X <- Z -> Y` with a certified finite
//!   locally free left leg, and their composition, sum and tensor product.
//! * [`cancellation`]: the `g`/`h` polynomials, slices `Z(1 - t^n f)` with
//!   their flatness bound, the operators `rho_mn`, `rho_n`, the filtration
//!   search, naturality checks and the final cancellation identities.
//! * [`contraction`]: the rational contraction `s(alpha)` for
//!   `(A^1 - 0)^n` with endpoint verification.
//! * [`claims`]: serializable, independently re-checkable claims.

pub mod cancellation;
pub mod claims;
pub mod contraction;
pub mod groebner;
pub mod poly;
pub mod spans;

pub use groebner::{GbConfig, GbError};
pub use poly::{Field, Monomial, MonomialOrder, Poly, PolyError, Ring, RingRef};
