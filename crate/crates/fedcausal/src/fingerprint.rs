//! Stable content fingerprints for pairing simulation outputs with the
//! analytics they must be compared against.
//!
//! FNV-1a over a canonical field encoding. Not cryptographic; only needs to
//! be stable across runs and platforms so that reports and ensembles built
//! from the same scenario can be matched byte-for-byte.

/// Incremental FNV-1a 64-bit hasher with typed write helpers.
#[derive(Debug, Clone)]
pub struct FingerprintHasher {
    state: u64,
}

impl Default for FingerprintHasher {
    fn default() -> Self {
        Self::new()
    }
}

impl FingerprintHasher {
    pub fn new() -> Self {
        Self {
            state: 0xcbf2_9ce4_8422_2325,
        }
    }

    pub fn write_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.state ^= u64::from(b);
            self.state = self.state.wrapping_mul(0x0000_0100_0000_01B3);
        }
    }

    pub fn write_u64(&mut self, v: u64) {
        self.write_bytes(&v.to_le_bytes());
    }

    pub fn write_usize(&mut self, v: usize) {
        self.write_u64(v as u64);
    }

    /// Floats are hashed by bit pattern, so fingerprints distinguish any
    /// two configs that could produce different output bytes.
    pub fn write_f64(&mut self, v: f64) {
        self.write_u64(v.to_bits());
    }

    /// Length-prefixed so `("ab","c")` and `("a","bc")` hash differently.
    pub fn write_str(&mut self, s: &str) {
        self.write_usize(s.len());
        self.write_bytes(s.as_bytes());
    }

    pub fn finish_hex(&self) -> String {
        format!("{:016x}", self.state)
    }
}
