//! Exact arithmetic: primes, prime fields, polynomials and rational
//! functions over `Q`.

pub mod expr;
pub mod factor;
pub mod field;
pub mod linalg;
pub mod modp;
pub mod poly;
pub mod prime;
pub mod ratfunc;

pub use field::{legendre_symbol, CharacterTable, PrimeField};
pub use poly::{poly_resultant, RationalPolynomial};
pub use prime::{is_prime, primes_in_range};
pub use ratfunc::RationalFunction;
