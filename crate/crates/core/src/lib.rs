//! Exact differential cryptanalysis of 16-bit substitution-permutation
//! networks.
//!
//! A cipher is described as data ([`CipherDescription`], usually parsed from
//! a `.cd` file) and analysed at three levels:
//!
//! * [`sbox`]: difference distribution tables of the 4-bit S-boxes,
//! * [`exhaustive`]: the full block-level distribution `D(a, b)` over all
//!   2^32 plaintext/difference combinations,
//! * [`trail`]: branch-and-bound search for minimum active S-box counts and
//!   best single trails, plus bound arithmetic.
//!
//! [`verify`] re-derives individual differentials by direct encryption and
//! [`report`] assembles everything into a deterministic bundle.

pub mod cipher;
pub mod error;
pub mod exhaustive;
pub mod notation;
pub mod parse;
pub mod prob;
pub mod report;
pub mod sbox;
pub mod trail;
pub mod verify;

pub use cipher::{CipherDescription, KeyAssignment, LayerSpec};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use exhaustive::{diff_count, scan_max, top_characteristics, Characteristic, DiffDistribution};
pub use notation::{format_hex, format_nibbles, parse_difference};
pub use parse::{format_description, parse_description};
pub use prob::Prob;
pub use sbox::{compute_ddt, diff_uniformity_report, max_diff_prob, Ddt, SBox4};
pub use trail::{
    best_trail, cipher_bound, min_active_sboxes, search_trails, theorem_lower_bound, Objective, Trail,
};
pub use verify::{verify_exhaustive, verify_keyed, VerificationResult};
