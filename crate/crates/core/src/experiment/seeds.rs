//! Trial seed derivation.
//!
//! `derive_seed(base, role, level, realization)` is the first eight bytes,
//! read little-endian, of
//!
//! ```text
//! SHA-256("rgnn-seed-v1" || base || len(role) || role || level || realization)
//! ```
//!
//! with every integer encoded as a little-endian `u64`. Distinct roles,
//! sweep points and realizations therefore never share a stream.

use sha2::{Digest, Sha256};

pub const ROLE_PERTURB: &str = "perturb";
pub const ROLE_SUBSET: &str = "subset";
pub const ROLE_INIT: &str = "init";
pub const ROLE_SPLIT: &str = "split";

pub fn derive_seed(base: u64, role: &str, level: u64, realization: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(b"rgnn-seed-v1");
    h.update(base.to_le_bytes());
    h.update((role.len() as u64).to_le_bytes());
    h.update(role.as_bytes());
    h.update(level.to_le_bytes());
    h.update(realization.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// SHA-256 of the matrix entries in row-major little-endian byte order.
pub fn matrix_digest(m: &ndarray::Array2<f64>) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update((m.nrows() as u64).to_le_bytes());
    for v in m.iter() {
        h.update(v.to_le_bytes());
    }
    h.finalize().into()
}
