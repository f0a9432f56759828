/// Bits revealed by one verification hash.
pub const HASH_BITS: usize = 64;

/// Multiplication in GF(2^64) modulo `x^64 + x^4 + x^3 + x + 1`.
pub fn gf64_mul(a: u64, b: u64) -> u64 {
    let (mut a, mut b, mut acc) = (a, b, 0u64);
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        let carry = a >> 63;
        a <<= 1;
        if carry == 1 {
            a ^= 0x1b;
        }
        b >>= 1;
    }
    acc
}

/// Polynomial hash of a bit string evaluated at a seed-derived point.
pub fn verification_hash(bits: &[bool], seed: u64) -> u64 {
    let key = seed | 1;
    let mut acc = 0u64;
    for chunk in bits.chunks(64) {
        let word = chunk.iter().enumerate().fold(0u64, |w, (i, &b)| w | (u64::from(b) << i));
        acc = gf64_mul(acc, key) ^ word;
    }
    gf64_mul(acc, key) ^ bits.len() as u64
}
