//! Exact computations for finite determinacy of flat families over `Q[t]`:
//! polynomial arithmetic, Gröbner bases and syzygies, cotangent cohomology,
//! determinacy bounds, order-by-order lifting of isomorphisms, and a
//! brute-force linear-algebra oracle for cross-checking.

pub mod cotangent;
pub mod determinacy;
pub mod error;
pub mod groebner;
pub mod lifting;
pub mod linalg;
pub mod oracle;
pub mod ring;

pub use error::{Error, Result};
