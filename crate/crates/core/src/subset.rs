use core::fmt;

use crate::Element;

/// A subset of a carrier of at most 64 elements, stored as a bit set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The whole carrier `{0, .., m-1}`.
    pub const fn full(m: usize) -> Self {
        if m >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << m) - 1)
        }
    }

    pub const fn zero() -> Self {
        Subset(1)
    }

    pub const fn singleton(x: Element) -> Self {
        Subset(1u64 << x)
    }

    pub fn from_elements<I: IntoIterator<Item = Element>>(elems: I) -> Self {
        elems.into_iter().fold(Subset::EMPTY, |s, x| s.with(x))
    }

    #[inline]
    pub const fn contains(self, x: Element) -> bool {
        self.0 >> x & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: Element) -> bool {
        let fresh = !self.contains(x);
        self.0 |= 1u64 << x;
        fresh
    }

    #[must_use]
    pub const fn with(self, x: Element) -> Self {
        Subset(self.0 | 1u64 << x)
    }

    #[must_use]
    pub const fn without(self, x: Element) -> Self {
        Subset(self.0 & !(1u64 << x))
    }

    pub const fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub const fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub const fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    pub const fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_full(self, m: usize) -> bool {
        self == Subset::full(m)
    }

    pub fn complement(self, m: usize) -> Self {
        Subset(!self.0 & Subset::full(m).0)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }
}

/// Iterator over the members of a [`Subset`].
#[derive(Clone, Debug)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(x as Element)
    }
}

impl IntoIterator for Subset {
    type Item = Element;
    type IntoIter = Elements;

    fn into_iter(self) -> Elements {
        self.iter()
    }
}

impl FromIterator<Element> for Subset {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        Subset::from_elements(iter)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
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

#[cfg(feature = "serde")]
impl serde::Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}
