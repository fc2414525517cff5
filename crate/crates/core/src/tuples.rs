//! Odometer iteration over fixed-length tuples.

use alloc::vec;
use alloc::vec::Vec;

/// Visits every tuple in `[0, base)^len` in lexicographic order, last
/// coordinate fastest. The empty tuple is visited once.
#[derive(Debug, Clone)]
pub struct Odometer {
    digits: Vec<u8>,
    low: u8,
    base: u8,
    started: bool,
    done: bool,
}

impl Odometer {
    pub fn new(len: usize, base: usize) -> Self {
        Self::ranged(len, 0, base)
    }

    /// Like [`Odometer::new`] but over `[1, base)`, i.e. nonzero coordinates only.
    pub fn nonzero(len: usize, base: usize) -> Self {
        Self::ranged(len, 1, base)
    }

    fn ranged(len: usize, low: u8, base: usize) -> Self {
        Odometer {
            digits: vec![low; len],
            low,
            base: base as u8,
            started: false,
            done: len > 0 && base as u8 <= low,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Option<&[u8]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.digits);
        }
        for i in (0..self.digits.len()).rev() {
            if self.digits[i] + 1 < self.base {
                self.digits[i] += 1;
                return Some(&self.digits);
            }
            self.digits[i] = self.low;
        }
        self.done = true;
        None
    }
}

pub fn pow(base: usize, exp: usize) -> usize {
    base.pow(exp as u32)
}

/// Mixed-radix index of `digits` in base `base`, first digit slowest.
#[inline]
pub fn index_of(digits: &[u8], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d as usize)
}

/// Inverse of [`index_of`].
pub fn decode(mut index: usize, base: usize, out: &mut [u8]) {
    for d in out.iter_mut().rev() {
        *d = (index % base) as u8;
        index /= base;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(mut od: Odometer) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        while let Some(t) = od.next() {
            out.push(t.to_vec());
        }
        out
    }

    #[test]
    fn full_and_nonzero() {
        let all = collect(Odometer::new(2, 3));
        assert_eq!(all.len(), 9);
        assert_eq!(all[1], [0, 1]);
        assert!(all.iter().enumerate().all(|(i, t)| index_of(t, 3) == i));
        let nz = collect(Odometer::nonzero(2, 3));
        assert_eq!(nz, [[1, 1], [1, 2], [2, 1], [2, 2]]);
        assert_eq!(collect(Odometer::new(0, 5)), [Vec::<u8>::new()]);
        assert!(collect(Odometer::nonzero(2, 1)).is_empty());
        assert_eq!(collect(Odometer::nonzero(0, 1)).len(), 1);
    }
}
