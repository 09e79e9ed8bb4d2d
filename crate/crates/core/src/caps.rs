//! Resource caps for the exponential searches.

/// Environment variable overriding [`Caps::puf_bits`].
pub const CAP_BITS_VAR: &str = "TOPOFORGE_CAP_BITS";

/// Hard ceiling on the power-set ground size; `2^5` points already carry 7581 opens.
pub const MAX_PUF_BITS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest ground set whose power-set space may be built.
    pub puf_bits: usize,
    /// Largest `(2^m)^n` for which companion uniqueness is checked exhaustively.
    pub exhaustive: u64,
    /// Largest number of points for GLS and left-separation searches.
    pub order_search: usize,
    /// Largest neighborhood-assignment count enumerated exhaustively by `dspace_check`.
    pub assignments: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            puf_bits: 4,
            exhaustive: 1 << 16,
            order_search: 5,
            assignments: 1_000_000,
        }
    }
}

impl Caps {
    /// Defaults, with `TOPOFORGE_CAP_BITS` applied when set (clamped to [`MAX_PUF_BITS`]).
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(bits) = std::env::var(CAP_BITS_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            caps.puf_bits = bits.min(MAX_PUF_BITS);
        }
        caps
    }
}
