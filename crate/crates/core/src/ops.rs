//! Elementary operation accounting.
//!
//! An elementary operation is an addition, subtraction, multiplication,
//! division, comparison (determining the larger of two quantities) or
//! assignment. Counters only ever increase during a run.

use core::ops::AddAssign;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub add_sub: u64,
    pub mul_div: u64,
    pub comparisons: u64,
    pub assignments: u64,
    /// Multiplications and divisions applied to function values or line
    /// sums. The reconstructors only ever subtract values, so this stays 0.
    pub value_mul_div: u64,
}

impl OpCounter {
    pub fn total(&self) -> u64 {
        self.add_sub + self.mul_div + self.comparisons + self.assignments + self.value_mul_div
    }

    #[inline]
    pub fn add(&mut self, n: u64) {
        self.add_sub += n;
    }

    #[inline]
    pub fn mul(&mut self, n: u64) {
        self.mul_div += n;
    }

    #[inline]
    pub fn cmp(&mut self, n: u64) {
        self.comparisons += n;
    }

    #[inline]
    pub fn assign(&mut self, n: u64) {
        self.assignments += n;
    }
}

impl AddAssign for OpCounter {
    fn add_assign(&mut self, rhs: Self) {
        self.add_sub += rhs.add_sub;
        self.mul_div += rhs.mul_div;
        self.comparisons += rhs.comparisons;
        self.assignments += rhs.assignments;
        self.value_mul_div += rhs.value_mul_div;
    }
}
