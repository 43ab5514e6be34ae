//! Computation and verification engine for the q-deformed algebra behind
//! CGC generating matrices.
//!
//! The crate is organized in layers:
//!
//! - [`qarith`] — scalar layer: evaluation points for the deformation
//!   parameter `q`, q-numbers `[x] = (q^x - q^-x)/(q - q^-1)`, q-factorials,
//!   and the exact coefficient ring of Laurent polynomials in `u = q^(1/8)`.
//! - [`weylalg`] — exact noncommutative algebra of normal-ordered monomials
//!   in two Weyl pairs `(z_i, N_i)` with `N z = q z N`; proves operator
//!   identities with zero tolerance.
//! - [`fock`] — truncated model space spanned by `|j,m>` with sparse linear
//!   operators; all tolerance-based residual suites live here.
//! - [`cgc`] — classical and q-deformed Clebsch-Gordan coefficients for the
//!   coupling `j (x) 1/2` by direct summation, independent of the operator
//!   route.
//! - [`dyn_ybe`] — constant and weight-dependent R-matrices on an integer
//!   lattice, with the shifted Yang-Baxter equation.
//! - [`report`] / [`suites`] — named check reports, the suite registry and
//!   the JSON/text emitters used by the CLI.

pub mod cgc;
pub mod dyn_ybe;
pub mod fock;
pub mod linop;
pub mod qarith;
pub mod report;
pub mod suites;
pub mod weylalg;

pub use qarith::{HalfInt, LaurentU, QPoint};
pub use report::CheckReport;
