//! Exact-arithmetic toolkit for finite affine hyperplane arrangements:
//! Salvetti complexes, distance-based acyclic matchings, minimal Morse
//! complexes, and (for line arrangements) twisted boundary matrices with
//! abelian local-system coefficients and their homology invariants.

pub mod arrangement;
pub mod error;
pub mod faces;
pub mod flats;
pub mod laurent;
pub mod linalg;
pub mod matching;
pub mod morse;
pub mod rational;
pub mod salvetti;
pub mod sampling;
pub mod unipoly;

pub use arrangement::{parse_arrangement, Arrangement, Hyperplane};
pub use error::{Error, Result};
pub use faces::{Face, Geometry};
pub use flats::{Flat, FlatPoset};
