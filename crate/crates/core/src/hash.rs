//! 32-bit `hash_combine`, the mixing step used for circular environment
//! identifiers. Matching it keeps identifiers interchangeable with widely
//! distributed fragment tables.

#[inline]
pub(crate) fn combine(seed: &mut u32, value: u32) {
    *seed ^= value
        .wrapping_add(0x9e37_79b9)
        .wrapping_add(seed.wrapping_shl(6))
        .wrapping_add(*seed >> 2);
}

pub(crate) fn hash_range(values: &[u32]) -> u32 {
    let mut seed = 0;
    for &v in values {
        combine(&mut seed, v);
    }
    seed
}

pub(crate) fn hash_pair(a: u32, b: u32) -> u32 {
    hash_range(&[a, b])
}
