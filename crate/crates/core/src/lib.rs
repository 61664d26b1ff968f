//! Native language identification from content-independent syntactic
//! features: function words, POS n-grams and delexicalized CFG rules, fed
//! through TF-IDF into one-vs-rest linear SVMs and scored with stratified
//! K-fold cross-validation.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod svm;
pub mod synthetic;
pub mod text;
pub mod vectorize;

pub use error::{Error, Result};

/// Split one seed into independent streams (SplitMix64 finalizer).
pub(crate) fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
