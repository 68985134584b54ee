//! Codes correcting `t` tandem duplications of a fixed length `ℓ` over `Z_p`.
//!
//! * [`word`]: the duplication operation, the difference map `φ`, zero-run
//!   profiles, duplication roots and the `(y, μ, π)` profile map.
//! * [`channel`]: exact duplication balls/spheres and a seeded random channel.
//! * [`bounds`]: sphere-packing upper bounds in exact rational arithmetic.
//! * [`codes`]: the power-sum checksum codes and both constructions.
//! * [`decoder`]: syndrome decoding through Newton's identities over `F_ξ`.

pub mod arith;
pub mod bounds;
pub mod channel;
pub mod codes;
pub mod decoder;
pub mod error;
pub mod word;

pub use error::{DecodeError, Error, Result};
pub use word::Word;
