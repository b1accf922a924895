//! Per-item RNG stream derivation for reproducible, order-independent
//! parallel sampling. Changing these mixers breaks bit-reproducibility of
//! seeded runs, so they are fixed.

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Stream seed for the item at `idx` under the run seed `seed`.
pub(crate) fn stream_seed(seed: u64, idx: u64) -> u64 {
    splitmix64(seed ^ splitmix64(idx.wrapping_add(1)))
}
