//! Benchmark-only crate; the targets live in `benches/`.
//!
//! `matrix_paths` compares class-reduced against naive cyclotomic matrix
//! construction across parameter sizes; `cipher` times the per-block
//! encrypt / decrypt / attack operations.

/// Deterministic filler for plaintext blocks.
pub fn patterned_bytes(len: usize) -> Vec<u8> {
    (0..len).map(|i| (i * 31 % 251) as u8).collect()
}
