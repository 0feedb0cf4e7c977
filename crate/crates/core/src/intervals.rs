//! String-interval algebra.
//!
//! A Q-interval is the half-open, 1-based range `[b, e)` of sorted rotations
//! that start with `Q`. Occurrence counts are never stored here: every
//! extension takes the counts its caller accumulated while streaming the BWT.

use crate::error::{Error, Result};
use crate::index::SENTINEL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StringInterval {
    pub b: u32,
    pub e: u32,
}

impl StringInterval {
    pub fn new(b: u32, e: u32) -> Self {
        debug_assert!(b <= e, "interval [{b}, {e}) is reversed");
        StringInterval { b, e }
    }

    /// The empty interval sitting at insertion point `at`.
    pub fn empty_at(at: u32) -> Self {
        StringInterval { b: at, e: at }
    }

    pub fn width(&self) -> u32 {
        self.e - self.b
    }

    pub fn is_empty(&self) -> bool {
        self.b == self.e
    }

    /// Inclusive containment: `other` lies within `self`.
    pub fn contains(&self, other: &StringInterval) -> bool {
        self.b <= other.b && other.e <= self.e
    }

    pub fn is_disjoint(&self, other: &StringInterval) -> bool {
        self.e <= other.b || other.e <= self.b
    }
}

/// A string-interval together with the length of the string it represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabeledInterval {
    pub interval: StringInterval,
    pub length: u32,
}

/// Backward σ-extension: the σQ-interval from the Q-interval's occurrence counts.
///
/// `c_sigma` is the number of BWT symbols smaller than σ; `occ_b` and `occ_e`
/// count σ in `B[1..b-1]` and `B[1..e-1]`.
pub fn backward_extension(c_sigma: u32, occ_b: u32, occ_e: u32) -> StringInterval {
    debug_assert!(occ_b <= occ_e);
    StringInterval::new(c_sigma + occ_b + 1, c_sigma + occ_e + 1)
}

/// Forward σ-extension: the Qσ-interval.
///
/// `occ_deltas[c]` is the number of occurrences of symbol code `c` in
/// `B[b..e-1]`, sentinel included at code 0.
pub fn forward_extension(q: StringInterval, sigma: u8, occ_deltas: &[u32]) -> StringInterval {
    let before: u32 = occ_deltas[..sigma as usize].iter().sum();
    let b = q.b + before;
    StringInterval::new(b, b + occ_deltas[sigma as usize])
}

/// Whether the string behind `q1` is a proper prefix of the string behind `q2`.
pub fn is_proper_prefix(q1: &LabeledInterval, q2: &LabeledInterval) -> Result<bool> {
    if q2.interval.is_empty() {
        return Err(Error::Param(
            "prefix test needs a nonempty second interval".into(),
        ));
    }
    Ok(q1.interval.contains(&q2.interval) && q1.length < q2.length)
}

/// Ordering rank of a byte: the sentinel sorts before every read symbol.
pub(crate) fn symbol_rank(b: u8) -> u16 {
    if b == SENTINEL {
        0
    } else {
        b as u16 + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::ReadSet;
    use crate::oracle::{naive_interval, NaiveIndex};

    fn fruits() -> ReadSet {
        ReadSet::from_strs(&["APPLE", "LEMON", "APRICOT"]).unwrap()
    }

    #[test]
    fn backward_extension_of_e_by_l() {
        // q(E) = [7,9), Occ(L,7) = 0, Occ(L,9) = 2, C(L) = 9
        assert_eq!(backward_extension(9, 0, 2), StringInterval::new(10, 12));
    }

    #[test]
    fn backward_extension_without_occurrences_is_empty() {
        assert!(backward_extension(4, 3, 3).is_empty());
    }

    #[test]
    fn forward_extension_of_single_symbol_slice() {
        let q = StringInterval::new(5, 9);
        let deltas = [0, 0, 4, 0];
        assert_eq!(forward_extension(q, 2, &deltas), StringInterval::new(5, 9));
        assert!(forward_extension(q, 3, &deltas).is_empty());
    }

    #[test]
    fn proper_prefix_cases() {
        let table = NaiveIndex::new(&fruits());
        let le = table.interval(b"LE");
        let lemon = table.interval(b"LEMON");
        assert_eq!(lemon.interval, StringInterval::new(11, 12));
        assert!(is_proper_prefix(&le, &lemon).unwrap());
        assert!(!is_proper_prefix(&le, &le).unwrap());
        let disjoint = LabeledInterval {
            interval: StringInterval::new(1, 3),
            length: 1,
        };
        assert!(!is_proper_prefix(&disjoint, &lemon).unwrap());
        let empty = table.interval(b"XYZ");
        assert!(is_proper_prefix(&le, &empty).is_err());
    }

    #[test]
    fn naive_intervals_on_fruits() {
        let reads = fruits();
        let le = naive_interval(b"LE", &reads);
        assert_eq!(le.interval, StringInterval::new(10, 12));
        assert_eq!(le.length, 2);
        assert_eq!(
            naive_interval(b"LE$", &reads).interval,
            StringInterval::new(10, 11)
        );
        assert_eq!(
            naive_interval(b"$LE", &reads).interval,
            StringInterval::new(3, 4)
        );
        assert_eq!(
            naive_interval(b"", &reads).interval,
            StringInterval::new(1, 21)
        );
        // PZ would sit between PRICOT and RICOT
        assert_eq!(
            naive_interval(b"PZ", &reads).interval,
            StringInterval::empty_at(19)
        );
    }
}
