//! Symmetric subsets of the cyclic ring `Z_n`, `n = 2k + 1`.
//!
//! A [`SymSet`] stores one bit per residue, so a set that fails to be closed
//! under negation is representable and gets rejected at construction instead
//! of being silently rounded to its closure.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest supported `k`; `n = 61` still fits one machine word.
pub const MAX_K: u32 = 30;

/// The odd cycle `C_n` with `n = 2k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleOrder {
    k: u8,
}

impl CycleOrder {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 || k > MAX_K {
            return Err(Error::OrderOutOfRange(k));
        }
        Ok(Self { k: k as u8 })
    }

    pub fn k(self) -> u32 {
        u32::from(self.k)
    }

    /// The modulus `2k + 1`.
    pub fn n(self) -> u32 {
        2 * u32::from(self.k) + 1
    }

    pub(crate) fn mask(self) -> u64 {
        (1u64 << self.n()) - 1
    }

    /// `-x mod n`.
    pub fn neg(self, x: u32) -> u32 {
        let n = self.n();
        (n - x % n) % n
    }

    /// Rotate a residue bitmask by `r`, i.e. add `r` to every member.
    pub(crate) fn rotate(self, bits: u64, r: u32) -> u64 {
        let n = self.n();
        let r = r % n;
        if r == 0 {
            return bits;
        }
        ((bits << r) | (bits >> (n - r))) & self.mask()
    }

    /// Residues adjacent in `C_n` to some member of `bits`.
    pub(crate) fn neighbours(self, bits: u64) -> u64 {
        self.rotate(bits, 1) | self.rotate(bits, self.n() - 1)
    }
}

impl fmt::Display for CycleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.n())
    }
}

/// A subset of `Z_n` closed under negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymSet {
    order: CycleOrder,
    bits: u64,
}

impl SymSet {
    /// Wraps a raw bitmask, rejecting out-of-range bits and asymmetric sets.
    pub fn from_bits(order: CycleOrder, bits: u64) -> Result<Self> {
        if bits & !order.mask() != 0 {
            return Err(Error::ResidueOutOfRange {
                residue: 63 - bits.leading_zeros(),
                modulus: order.n(),
            });
        }
        if mirror(order, bits) != bits {
            return Err(Error::Asymmetric);
        }
        Ok(Self { order, bits })
    }

    pub(crate) fn from_bits_unchecked(order: CycleOrder, bits: u64) -> Self {
        debug_assert_eq!(mirror(order, bits), bits, "asymmetric set");
        Self { order, bits }
    }

    /// Symmetric closure of the given residues.
    pub fn from_residues(order: CycleOrder, elems: &[u32]) -> Result<Self> {
        let mut bits = 0u64;
        for &x in elems {
            if x >= order.n() {
                return Err(Error::ResidueOutOfRange {
                    residue: x,
                    modulus: order.n(),
                });
            }
            bits |= 1 << x;
            bits |= 1 << order.neg(x);
        }
        Ok(Self { order, bits })
    }

    pub fn empty(order: CycleOrder) -> Self {
        Self { order, bits: 0 }
    }

    pub fn full(order: CycleOrder) -> Self {
        Self {
            order,
            bits: order.mask(),
        }
    }

    /// `s(i) = {i, -i}`.
    pub fn orbit(order: CycleOrder, i: u32) -> Self {
        let i = i % order.n();
        Self {
            order,
            bits: (1 << i) | (1 << order.neg(i)),
        }
    }

    /// `sb(i) = Z_n \ {i, -i}`.
    pub fn co_orbit(order: CycleOrder, i: u32) -> Self {
        Self::orbit(order, i).complement()
    }

    pub fn order(self) -> CycleOrder {
        self.order
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn contains(self, x: u32) -> bool {
        x < self.order.n() && self.bits & (1 << x) != 0
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_full(self) -> bool {
        self.bits == self.order.mask()
    }

    pub fn is_subset(self, other: SymSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: SymSet) -> bool {
        self.bits & other.bits == 0
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = u32> {
        let bits = self.bits;
        (0..self.order.n()).filter(move |&x| bits & (1 << x) != 0)
    }

    pub fn min_element(self) -> Option<u32> {
        (self.bits != 0).then(|| self.bits.trailing_zeros())
    }

    fn check(self, other: SymSet) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order.n(),
                right: other.order.n(),
            });
        }
        Ok(())
    }

    /// Minkowski sum `{x + y}`.
    pub fn mink_sum(self, other: SymSet) -> Result<SymSet> {
        self.check(other)?;
        Ok(self.sum(other))
    }

    pub(crate) fn sum(self, other: SymSet) -> SymSet {
        let order = self.order;
        let mut acc = 0u64;
        let mut rest = self.bits;
        while rest != 0 {
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            acc |= order.rotate(other.bits, x);
        }
        SymSet::from_bits_unchecked(order, acc)
    }

    pub fn intersect(self, other: SymSet) -> Result<SymSet> {
        self.check(other)?;
        Ok(self.meet(other))
    }

    pub(crate) fn meet(self, other: SymSet) -> SymSet {
        SymSet {
            order: self.order,
            bits: self.bits & other.bits,
        }
    }

    pub fn union(self, other: SymSet) -> Result<SymSet> {
        self.check(other)?;
        Ok(SymSet {
            order: self.order,
            bits: self.bits | other.bits,
        })
    }

    pub fn difference(self, other: SymSet) -> Result<SymSet> {
        self.check(other)?;
        Ok(SymSet {
            order: self.order,
            bits: self.bits & !other.bits,
        })
    }

    pub fn complement(self) -> SymSet {
        SymSet {
            order: self.order,
            bits: !self.bits & self.order.mask(),
        }
    }

    /// `Q_S = {x : (x + S) ∩ Q ≠ ∅}` with `self = Q`.
    pub fn shift_hits(self, shift: SymSet) -> Result<SymSet> {
        self.check(shift)?;
        if shift.is_empty() {
            return Err(Error::EmptyShift);
        }
        Ok(self.hits(shift))
    }

    pub(crate) fn hits(self, shift: SymSet) -> SymSet {
        // x + s ∈ Q  ⟺  x ∈ Q - s
        let order = self.order;
        let n = order.n();
        let mut acc = 0u64;
        let mut rest = shift.bits;
        while rest != 0 {
            let s = rest.trailing_zeros();
            rest &= rest - 1;
            acc |= order.rotate(self.bits, n - s);
        }
        SymSet::from_bits_unchecked(order, acc)
    }

    /// If this set is `s(i)` or `sb(i)` for some `0 <= i <= k`, its alias.
    pub fn alias(self) -> Option<String> {
        let k = self.order.k();
        if let Some(i) = (0..=k).find(|&i| SymSet::orbit(self.order, i) == self) {
            return Some(format!("s{i}"));
        }
        (0..=k)
            .find(|&i| SymSet::co_orbit(self.order, i) == self)
            .map(|i| format!("sb{i}"))
    }

    /// Alias when one exists, braces otherwise.
    pub fn short_name(self) -> String {
        self.alias().unwrap_or_else(|| format!("{self}"))
    }

    /// Parses `{a,b,...}`, `s<i>`, `sb<i>`, `Z` or `all`.
    ///
    /// Brace syntax takes the symmetric closure of the listed residues.
    pub fn parse(order: CycleOrder, text: &str) -> Result<SymSet> {
        let text = text.trim();
        if text == "Z" || text == "all" {
            return Ok(SymSet::full(order));
        }
        if let Some(inner) = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            let mut elems = Vec::new();
            for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let x: u32 = part
                    .parse()
                    .map_err(|_| Error::SetSyntax(format!("bad residue {part:?}")))?;
                elems.push(x);
            }
            return SymSet::from_residues(order, &elems);
        }
        let (co, digits) = if let Some(d) = text.strip_prefix("sb") {
            (true, d)
        } else if let Some(d) = text.strip_prefix('s') {
            (false, d)
        } else {
            return Err(Error::SetSyntax(format!("unrecognised set {text:?}")));
        };
        let i: u32 = digits
            .parse()
            .map_err(|_| Error::SetSyntax(format!("bad orbit index in {text:?}")))?;
        if i >= order.n() {
            return Err(Error::ResidueOutOfRange {
                residue: i,
                modulus: order.n(),
            });
        }
        Ok(if co {
            SymSet::co_orbit(order, i)
        } else {
            SymSet::orbit(order, i)
        })
    }
}

impl fmt::Display for SymSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

fn mirror(order: CycleOrder, bits: u64) -> u64 {
    let mut out = 0u64;
    let mut rest = bits;
    while rest != 0 {
        let x = rest.trailing_zeros();
        rest &= rest - 1;
        out |= 1 << order.neg(x);
    }
    out
}

/// All symmetric subsets of `Z_n`, one bit per negation orbit, in ascending
/// bitmask order. With `proper_nonempty` the empty set and `Z_n` are dropped.
pub fn enumerate_symmetric_subsets(order: CycleOrder, proper_nonempty: bool) -> Vec<SymSet> {
    let k = order.k();
    let mut out: Vec<SymSet> = (0u64..1 << (k + 1))
        .map(|choice| {
            let mut bits = 0u64;
            for i in 0..=k {
                if choice & (1 << i) != 0 {
                    bits |= SymSet::orbit(order, i).bits;
                }
            }
            SymSet::from_bits_unchecked(order, bits)
        })
        .filter(|s| !proper_nonempty || (!s.is_empty() && !s.is_full()))
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn ord(k: u32) -> CycleOrder {
        CycleOrder::new(k).unwrap()
    }

    fn set(k: u32, xs: &[u32]) -> SymSet {
        SymSet::from_residues(ord(k), xs).unwrap()
    }

    #[test]
    fn order_bounds() {
        assert!(CycleOrder::new(0).is_err());
        assert!(CycleOrder::new(31).is_err());
        assert_eq!(ord(30).n(), 61);
        assert_eq!(ord(2).n(), 5);
    }

    #[test]
    fn closure_of_residues() {
        assert_eq!(set(2, &[1]).iter().collect::<Vec<_>>(), vec![1, 4]);
        assert_eq!(set(2, &[0]).iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(set(3, &[1, 3]).iter().collect::<Vec<_>>(), vec![1, 3, 4, 6]);
        assert!(matches!(
            SymSet::from_residues(ord(2), &[5]),
            Err(Error::ResidueOutOfRange { residue: 5, modulus: 5 })
        ));
    }

    #[test]
    fn asymmetric_bits_rejected() {
        assert_eq!(SymSet::from_bits(ord(2), 0b00010), Err(Error::Asymmetric));
        assert!(SymSet::from_bits(ord(2), 0b10010).is_ok());
        assert!(SymSet::from_bits(ord(2), 1 << 5).is_err());
    }

    #[test]
    fn sums_over_z5() {
        let o = ord(2);
        let s = |i| SymSet::orbit(o, i);
        let sb = |i| SymSet::co_orbit(o, i);
        assert_eq!(s(1).mink_sum(s(1)).unwrap(), sb(1));
        assert_eq!(sb(1).iter().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert_eq!(s(1).mink_sum(s(2)).unwrap(), sb(0));
        assert_eq!(sb(1).mink_sum(sb(2)).unwrap(), SymSet::full(o));
        for x in enumerate_symmetric_subsets(o, false) {
            assert_eq!(s(0).mink_sum(x).unwrap(), x);
        }
    }

    #[test]
    fn intersections() {
        let o = ord(2);
        assert_eq!(
            SymSet::co_orbit(o, 1).intersect(SymSet::co_orbit(o, 2)).unwrap(),
            SymSet::orbit(o, 0)
        );
        assert!(SymSet::orbit(o, 1)
            .intersect(SymSet::co_orbit(o, 1))
            .unwrap()
            .is_empty());
        let o3 = ord(3);
        assert_eq!(
            SymSet::co_orbit(o3, 0).intersect(SymSet::co_orbit(o3, 1)).unwrap(),
            set(3, &[2, 3, 4, 5])
        );
    }

    #[test]
    fn mismatched_orders() {
        let a = SymSet::orbit(ord(2), 1);
        let b = SymSet::orbit(ord(3), 1);
        assert!(matches!(a.mink_sum(b), Err(Error::OrderMismatch { .. })));
        assert!(matches!(a.intersect(b), Err(Error::OrderMismatch { .. })));
        assert!(matches!(a.shift_hits(b), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn shift_hits_examples() {
        let o = ord(3);
        let s = |i| SymSet::orbit(o, i);
        let q = s(1).union(s(3)).unwrap();
        assert_eq!(q.shift_hits(s(1)).unwrap(), SymSet::co_orbit(o, 1));
        let q = s(0).union(s(2)).unwrap();
        assert_eq!(q.shift_hits(s(1)).unwrap(), s(1).union(s(3)).unwrap());
        for q in enumerate_symmetric_subsets(o, false) {
            assert_eq!(q.shift_hits(s(0)).unwrap(), q);
        }
        assert_eq!(q.shift_hits(SymSet::empty(o)), Err(Error::EmptyShift));
    }

    #[test]
    fn subset_counts() {
        assert_eq!(enumerate_symmetric_subsets(ord(2), true).len(), 6);
        assert_eq!(enumerate_symmetric_subsets(ord(2), false).len(), 8);
        assert_eq!(enumerate_symmetric_subsets(ord(3), false).len(), 16);
    }

    #[test]
    fn text_forms() {
        let o = ord(2);
        assert_eq!(SymSet::co_orbit(o, 1).to_string(), "{0,2,3}");
        assert_eq!(SymSet::empty(o).to_string(), "{}");
        assert_eq!(SymSet::orbit(o, 1).short_name(), "s1");
        assert_eq!(SymSet::orbit(o, 4).short_name(), "s1");
        assert_eq!(SymSet::co_orbit(o, 2).short_name(), "sb2");
        assert_eq!(SymSet::full(o).short_name(), "{0,1,2,3,4}");
        assert_eq!(SymSet::parse(o, "sb1").unwrap(), SymSet::co_orbit(o, 1));
        assert_eq!(SymSet::parse(o, "{ 2 ,0}").unwrap(), set(2, &[0, 2]));
        assert_eq!(SymSet::parse(o, "Z").unwrap(), SymSet::full(o));
        assert!(SymSet::parse(o, "t1").is_err());
        assert!(SymSet::parse(o, "{1,x}").is_err());
        assert!(SymSet::parse(o, "s7").is_err());
    }
}
