//! One-way sketches for pattern matching with edits.
//!
//! [`encode`] compresses a pattern `P`, a text `T` and a threshold `k` into a
//! byte string; [`decode`] recovers from those bytes alone every fragment of
//! `T` within edit distance `k` of `P`, together with the edit information of
//! every optimal alignment (up to a cap).

pub mod align;
pub mod alphabet;
pub mod bits;
pub mod builder;
pub mod codec;
pub mod cover;
pub mod decoder;
pub mod encoder;
pub mod error;
pub mod graph;
pub mod instances;
pub mod lowerbound;
pub mod matcher;
pub mod periodic;
pub mod selfed;
pub mod weights;

pub use codec::{deserialize_sketch, serialize_sketch, Sketch};
pub use decoder::decode;
pub use encoder::{encode, encode_with, EncodeOptions};
pub use error::{Error, Result};
pub use matcher::{Occurrence, OccurrenceReport};
