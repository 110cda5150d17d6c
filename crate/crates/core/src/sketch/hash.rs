/// 2-bit code of an upper-case nucleotide; `None` for `N`.
#[inline]
pub fn pack_base(b: u8) -> Option<u64> {
    match b {
        b'A' => Some(0),
        b'C' => Some(1),
        b'G' => Some(2),
        b'T' => Some(3),
        _ => None,
    }
}

/// Maps a 2-bit packed k-mer to its hash. Implementations used for
/// minimizer selection must be injective on packed k-mers of one length.
pub trait KmerHasher {
    fn hash(&self, packed: u64) -> u64;
}

impl<F: Fn(u64) -> u64> KmerHasher for F {
    fn hash(&self, packed: u64) -> u64 {
        self(packed)
    }
}

/// Seeded invertible 64-bit mixer (xor with seed, then the splitmix64 finalizer).
#[derive(Clone, Copy, Debug)]
pub struct MixHasher {
    seed: u64,
}

impl MixHasher {
    pub fn new(seed: u64) -> Self {
        MixHasher { seed }
    }
}

impl KmerHasher for MixHasher {
    #[inline]
    fn hash(&self, packed: u64) -> u64 {
        let mut x = packed ^ self.seed;
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^ (x >> 31)
    }
}

/// Hash of a k-mer string, `None` if it contains a non-ACGT base.
pub fn kmer_hash(kmer: &[u8], seed: u64) -> Option<u64> {
    let mut packed = 0u64;
    for &b in kmer {
        packed = (packed << 2) | pack_base(b)?;
    }
    Some(MixHasher::new(seed).hash(packed))
}
