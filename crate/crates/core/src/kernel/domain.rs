//! Integer domains as a bound pair plus a bitset of interior holes.
//!
//! Invariants: `lo` and `hi` are always live, `lo <= hi`, and the hole bits
//! are accurate only for values strictly inside `[lo, hi]`. Bits outside the
//! bounds may be stale; every read goes through the bounds first, and
//! backtracking restores bounds before the values behind them matter again.
//! Sliding a bound over a run of holes costs one step per hole, and each
//! hole is slid over at most once while the bound keeps shrinking, so the
//! cost of bound maintenance amortises into the removals that made the
//! holes.

#[derive(Debug, Clone)]
pub(crate) struct IntDomain {
    pub lo: u32,
    pub hi: u32,
    pub size: u32,
    holes: Vec<u64>,
}

impl IntDomain {
    pub fn new(lo: u32, hi: u32) -> IntDomain {
        assert!(lo >= 1 && lo <= hi, "domain must be a non-empty range from 1");
        let words = (hi as usize + 1).div_ceil(64);
        IntDomain {
            lo,
            hi,
            size: hi - lo + 1,
            holes: vec![0; words],
        }
    }

    pub fn is_hole(&self, v: u32) -> bool {
        self.holes[(v / 64) as usize] & (1 << (v % 64)) != 0
    }

    pub fn set_hole(&mut self, v: u32) {
        self.holes[(v / 64) as usize] |= 1 << (v % 64);
    }

    pub fn clear_hole(&mut self, v: u32) {
        self.holes[(v / 64) as usize] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: u32) -> bool {
        v >= self.lo && v <= self.hi && !self.is_hole(v)
    }

    /// Number of live values in `a..=b` (callers keep the range inside the
    /// current bounds, where hole bits are trustworthy).
    pub fn live_between(&self, a: u32, b: u32) -> u32 {
        if a > b {
            return 0;
        }
        (b - a + 1) - self.holes_between(a, b)
    }

    fn holes_between(&self, a: u32, b: u32) -> u32 {
        let (first, last) = ((a / 64) as usize, (b / 64) as usize);
        let lo_mask = !0u64 << (a % 64);
        let hi_mask = !0u64 >> (63 - b % 64);
        if first == last {
            return (self.holes[first] & lo_mask & hi_mask).count_ones();
        }
        let mut count = (self.holes[first] & lo_mask).count_ones();
        for word in &self.holes[first + 1..last] {
            count += word.count_ones();
        }
        count + (self.holes[last] & hi_mask).count_ones()
    }

    pub fn values(&self) -> Vec<u32> {
        (self.lo..=self.hi).filter(|&v| !self.is_hole(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hole_counting_crosses_word_boundaries() {
        let mut d = IntDomain::new(1, 200);
        for v in [2, 63, 64, 65, 128, 199] {
            d.set_hole(v);
            d.size -= 1;
        }
        assert_eq!(d.live_between(1, 200), 194);
        assert_eq!(d.live_between(63, 65), 0);
        assert_eq!(d.live_between(64, 64), 0);
        assert_eq!(d.live_between(66, 127), 62);
        assert!(!d.contains(128));
        assert!(d.contains(129));
    }
}
