//! Fixed-weight subsets of `[n] = {1, .., n}` and their canonical order.
//!
//! A subset is stored as a bitmask: element `i` (1-based) occupies bit `i-1`.
//! The canonical order on weight-`d` subsets is colexicographic, which on
//! masks is simply ascending numeric order. Position 1 is the lowest bit
//! everywhere in the crate: basis state, sector index, and reported sample
//! keys all agree on this convention.

use crate::error::{Error, Result};

/// A subset of `[n]`, stored as a bitmask over `n <= 63` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    mask: u64,
    n: usize,
}

impl Subset {
    /// Builds a subset from a raw mask.
    pub fn from_mask(mask: u64, n: usize) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::InvalidArgument(format!(
                "ground set size n = {n} out of range 1..=63"
            )));
        }
        if mask >> n != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask {mask:#b} has bits outside [1, {n}]"
            )));
        }
        Ok(Subset { mask, n })
    }

    /// Builds a subset from 1-based element indices.
    pub fn from_elements(elements: &[usize], n: usize) -> Result<Self> {
        let mut mask = 0u64;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::InvalidArgument(format!(
                    "element {e} outside [1, {n}]"
                )));
            }
            if mask & (1 << (e - 1)) != 0 {
                return Err(Error::InvalidArgument(format!("repeated element {e}")));
            }
            mask |= 1 << (e - 1);
        }
        Subset::from_mask(mask, n)
    }

    /// Raw bitmask.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Ground set size.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of elements.
    pub fn weight(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Whether 1-based element `i` is present.
    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.n && self.mask & (1 << (i - 1)) != 0
    }

    /// Ascending 1-based element indices.
    pub fn elements(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| self.contains(i)).collect()
    }

    /// Elements joined by commas, e.g. `"1,3,4"`; empty set renders as `""`.
    pub fn index_list(&self) -> String {
        self.elements()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the `index_list` format back into a subset.
    pub fn parse_index_list(s: &str, n: usize) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Subset::from_mask(0, n);
        }
        let elements = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad subset element {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Subset::from_elements(&elements, n)
    }

    /// Symmetric difference with the singleton `{i}`.
    pub fn toggled(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.n {
            return Err(Error::InvalidArgument(format!(
                "element {i} outside [1, {}]",
                self.n
            )));
        }
        Subset::from_mask(self.mask ^ (1 << (i - 1)), self.n)
    }

    /// Number of elements strictly between positions `i` and `j`.
    pub fn count_between(&self, i: usize, j: usize) -> usize {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        if hi - lo < 2 {
            return 0;
        }
        let between = (((1u64 << (hi - 1)) - 1) ^ ((1u64 << lo) - 1)) & self.mask;
        between.count_ones() as usize
    }
}

/// Binomial coefficient `C(n, k)` without overflow for `n <= 63`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Colexicographic rank of a weight-`d` subset among all weight-`d` subsets
/// of `[n]`, counting from 0. Colex order equals ascending mask order.
pub fn rank_subset(s: &Subset) -> u64 {
    s.elements()
        .iter()
        .enumerate()
        .map(|(t, &pos)| binomial(pos - 1, t + 1))
        .sum()
}

/// Inverse of [`rank_subset`]: the weight-`d` subset of `[n]` at colex rank `r`.
pub fn unrank_subset(r: u64, n: usize, d: usize) -> Result<Subset> {
    let total = binomial(n, d);
    if r >= total {
        return Err(Error::InvalidArgument(format!(
            "rank {r} out of range for C({n},{d}) = {total}"
        )));
    }
    let mut rest = r;
    let mut mask = 0u64;
    for t in (1..=d).rev() {
        // Largest position p with C(p-1, t) <= rest.
        let mut p = t;
        while p < n && binomial(p, t) <= rest {
            p += 1;
        }
        mask |= 1 << (p - 1);
        rest -= binomial(p - 1, t);
    }
    Subset::from_mask(mask, n)
}

/// All weight-`d` subsets of `[n]` in colex (ascending mask) order.
pub fn enumerate_subsets(n: usize, d: usize) -> Vec<Subset> {
    assert!((1..=63).contains(&n), "n out of range");
    if d > n {
        return Vec::new();
    }
    if d == 0 {
        return vec![Subset::from_mask(0, n).unwrap()];
    }
    let mut out = Vec::with_capacity(binomial(n, d) as usize);
    // Gosper's hack walks same-weight masks in ascending order.
    let mut v: u64 = (1 << d) - 1;
    let limit: u64 = 1 << n;
    while v < limit {
        out.push(Subset::from_mask(v, n).unwrap());
        let c = v & v.wrapping_neg();
        let r = v + c;
        if r >= limit || c == 0 {
            break;
        }
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(4, 7), 0);
        assert_eq!(binomial(63, 31), 916312070471295267);
    }

    #[test]
    fn enumeration_is_ascending_mask_order() {
        let subs = enumerate_subsets(5, 2);
        assert_eq!(subs.len(), 10);
        for w in subs.windows(2) {
            assert!(w[0].mask() < w[1].mask());
        }
        assert_eq!(subs[0].elements(), vec![1, 2]);
        assert_eq!(subs[9].elements(), vec![4, 5]);
    }

    #[test]
    fn rank_matches_enumeration_order_c63() {
        // Oracle: enumeration in ascending mask order defines the rank.
        for (r, s) in enumerate_subsets(6, 3).iter().enumerate() {
            assert_eq!(rank_subset(s), r as u64);
            assert_eq!(&unrank_subset(r as u64, 6, 3).unwrap(), s);
        }
    }

    #[test]
    fn empty_and_full_subsets_rank_zero() {
        let empty = Subset::from_mask(0, 7).unwrap();
        assert_eq!(rank_subset(&empty), 0);
        let full = Subset::from_mask((1 << 7) - 1, 7).unwrap();
        assert_eq!(rank_subset(&full), 0);
        assert_eq!(unrank_subset(0, 7, 7).unwrap(), full);
    }

    #[test]
    fn index_list_round_trip() {
        let s = Subset::from_elements(&[1, 3, 4], 6).unwrap();
        assert_eq!(s.index_list(), "1,3,4");
        assert_eq!(Subset::parse_index_list("1,3,4", 6).unwrap(), s);
        let e = Subset::from_mask(0, 4).unwrap();
        assert_eq!(e.index_list(), "");
        assert_eq!(Subset::parse_index_list("", 4).unwrap(), e);
    }

    #[test]
    fn count_between_counts_strict_interior() {
        let s = Subset::from_elements(&[1, 2, 5], 6).unwrap();
        assert_eq!(s.count_between(1, 5), 1);
        assert_eq!(s.count_between(5, 1), 1);
        assert_eq!(s.count_between(2, 5), 0);
        assert_eq!(s.count_between(1, 2), 0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Subset::from_mask(1 << 4, 4).is_err());
        assert!(Subset::from_elements(&[0], 4).is_err());
        assert!(Subset::from_elements(&[2, 2], 4).is_err());
        assert!(unrank_subset(10, 5, 2).is_err());
    }

    proptest! {
        #[test]
        fn rank_unrank_round_trip(n in 1usize..=16, r in 0u64..10_000) {
            for d in 0..=n {
                let total = binomial(n, d);
                let r = if total == 0 { continue } else { r % total };
                let s = unrank_subset(r, n, d).unwrap();
                prop_assert_eq!(s.weight(), d);
                prop_assert_eq!(rank_subset(&s), r);
            }
        }
    }
}
