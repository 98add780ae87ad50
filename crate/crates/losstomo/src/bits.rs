//! Packed bit sequences for per-probe indicator vectors.
//!
//! Indicator sequences are stored 64 probes per block so that OR/AND
//! projections and subset intersection counts reduce to blockwise bit
//! operations plus popcount.

/// A fixed-length sequence of bits, one per probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSeq {
    len: usize,
    blocks: Vec<u64>,
}

impl BitSeq {
    /// All-zero sequence of the given length.
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.blocks[i / 64] |= mask;
        } else {
            self.blocks[i / 64] &= !mask;
        }
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.blocks[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Population count over the whole sequence.
    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Element-wise OR of `other` into `self`. Lengths must match.
    pub fn or_assign(&mut self, other: &BitSeq) {
        assert_eq!(self.len, other.len, "length mismatch in or_assign");
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= *b;
        }
    }

    fn blocks(&self) -> &[u64] {
        &self.blocks
    }
}

/// Number of positions set in every one of `seqs`. Requires at least one
/// sequence; all must have the same length.
pub fn intersection_count(seqs: &[&BitSeq]) -> usize {
    assert!(!seqs.is_empty(), "intersection over no sequences");
    let len = seqs[0].len;
    let nblocks = seqs[0].blocks.len();
    let mut total = 0usize;
    for bi in 0..nblocks {
        let mut acc = !0u64;
        for s in seqs {
            assert_eq!(s.len, len, "length mismatch in intersection_count");
            acc &= s.blocks()[bi];
        }
        total += acc.count_ones() as usize;
    }
    total
}

/// Number of positions set in at least one of `seqs`. Requires at least one
/// sequence; all must have the same length.
pub fn union_count(seqs: &[&BitSeq]) -> usize {
    assert!(!seqs.is_empty(), "union over no sequences");
    let len = seqs[0].len;
    let nblocks = seqs[0].blocks.len();
    let mut total = 0usize;
    for bi in 0..nblocks {
        let mut acc = 0u64;
        for s in seqs {
            assert_eq!(s.len, len, "length mismatch in union_count");
            acc |= s.blocks()[bi];
        }
        total += acc.count_ones() as usize;
    }
    total
}
