//! Count-based peeling: a line with exactly one unknown point determines
//! that point by subtraction.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{Grid, LineFamily, LineSumTable};
use crate::ops::OpCounter;
use crate::Value;

/// Modulus of the shadow channel, `2^61 - 1`.
const SHADOW_P: u64 = (1 << 61) - 1;

#[inline]
fn shadow_sub(a: u64, b: u64) -> u64 {
    (a + SHADOW_P - b) % SHADOW_P
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Unknown,
    Deduced,
    Assigned,
}

/// Residuals and unknown counts of every line of every direction.
///
/// Besides the exact values, each point carries a shadow value in
/// `Z / (2^61 - 1)`: free points get pseudo-random nonzero shadows and all
/// line sums are taken as 0, so a deduced point has shadow 0 exactly when
/// (up to a negligible chance of cancellation) its value does not depend on
/// the free choices. Shadow arithmetic is not counted in [`OpCounter`].
#[derive(Debug, Clone)]
pub struct PeelState<const N: usize> {
    grid: Grid<N>,
    families: Vec<LineFamily<N>>,
    residual: Vec<Vec<Value>>,
    unknown: Vec<Vec<u32>>,
    /// Sum of the flat indices of the unknown points of each line; locates
    /// the last unknown point without scanning the line.
    index_sum: Vec<Vec<u64>>,
    shadow_residual: Vec<Vec<u64>>,
    values: Vec<Value>,
    shadow: Vec<u64>,
    status: Vec<Status>,
    queue: VecDeque<(u32, u32)>,
    remaining: usize,
    shadow_rng: ChaCha8Rng,
    ops: OpCounter,
}

impl<const N: usize> PeelState<N> {
    pub fn new(table: &LineSumTable<N>) -> Result<Self> {
        let grid = *table.grid();
        let mut families = Vec::new();
        let mut residual = Vec::new();
        let mut unknown = Vec::new();
        let mut index_sum = Vec::new();
        let mut shadow_residual = Vec::new();
        let mut queue = VecDeque::new();
        let mut ops = OpCounter::default();
        for (h, dir) in table.directions().iter().enumerate() {
            let fam = LineFamily::new(&grid, *dir)?;
            let sums = table.direction_sums(h);
            if sums.len() != fam.line_count() {
                return Err(Error::TableMismatch("line count differs from the grid".into()));
            }
            let mut counts = Vec::with_capacity(fam.line_count());
            let mut isum = vec![0u64; fam.line_count()];
            for l in 0..fam.line_count() {
                counts.push(fam.len_of(l) as u32);
                if fam.len_of(l) == 1 {
                    queue.push_back((h as u32, l as u32));
                }
            }
            for idx in 0..grid.len() {
                isum[fam.line_of(idx)] += idx as u64;
            }
            residual.push(sums.iter().map(|(_, s)| s.clone()).collect());
            ops.assign(fam.line_count() as u64);
            unknown.push(counts);
            index_sum.push(isum);
            shadow_residual.push(vec![0u64; fam.line_count()]);
            families.push(fam);
        }
        let len = grid.len();
        Ok(PeelState {
            grid,
            families,
            residual,
            unknown,
            index_sum,
            shadow_residual,
            values: vec![Value::zero(); len],
            shadow: vec![0; len],
            status: vec![Status::Unknown; len],
            queue,
            remaining: len,
            shadow_rng: ChaCha8Rng::seed_from_u64(0),
            ops,
        })
    }

    pub fn grid(&self) -> &Grid<N> {
        &self.grid
    }

    pub fn ops(&self) -> OpCounter {
        self.ops
    }

    pub fn ops_mut(&mut self) -> &mut OpCounter {
        &mut self.ops
    }

    pub fn status(&self, flat: usize) -> Status {
        self.status[flat]
    }

    pub fn is_unknown(&self, flat: usize) -> bool {
        self.status[flat] == Status::Unknown
    }

    /// Number of points still unknown.
    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn unknown_points(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.status.len()).filter(|&i| self.status[i] == Status::Unknown)
    }

    /// Unknown count of the line of direction `h` through `flat`.
    pub fn line_unknowns(&self, h: usize, flat: usize) -> usize {
        self.unknown[h][self.families[h].line_of(flat)] as usize
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// True when the value at `flat` is known not to depend on free choices.
    pub fn is_forced(&self, flat: usize) -> bool {
        self.status[flat] == Status::Deduced && self.shadow[flat] == 0
    }

    pub fn into_values(self) -> Vec<Value> {
        self.values
    }

    fn settle(&mut self, flat: usize, value: Value, shadow: u64, status: Status) -> Result<()> {
        debug_assert_eq!(self.status[flat], Status::Unknown);
        for h in 0..self.families.len() {
            let l = self.families[h].line_of(flat);
            self.residual[h][l] -= &value;
            self.unknown[h][l] -= 1;
            self.index_sum[h][l] -= flat as u64;
            self.shadow_residual[h][l] = shadow_sub(self.shadow_residual[h][l], shadow);
            self.ops.add(3);
            self.ops.cmp(1);
            match self.unknown[h][l] {
                1 => self.queue.push_back((h as u32, l as u32)),
                0 => {
                    self.ops.cmp(1);
                    if !self.residual[h][l].is_zero() {
                        return Err(self.inconsistent(h, l));
                    }
                }
                _ => {}
            }
        }
        self.values[flat] = value;
        self.shadow[flat] = shadow;
        self.status[flat] = status;
        self.remaining -= 1;
        self.ops.assign(1);
        Ok(())
    }

    fn inconsistent(&self, h: usize, line: usize) -> Error {
        let base = self.grid.point(self.families[h].base(line));
        Error::Inconsistent { direction: h, base: base.to_vec() }
    }

    /// Solves `flat` from the line of direction `h` through it if that
    /// line has no other unknown point. Returns whether it did.
    pub fn solve_on(&mut self, h: usize, flat: usize) -> Result<bool> {
        self.ops.cmp(2);
        if self.status[flat] != Status::Unknown {
            return Ok(false);
        }
        let l = self.families[h].line_of(flat);
        if self.unknown[h][l] != 1 {
            return Ok(false);
        }
        let v = self.residual[h][l].clone();
        let s = self.shadow_residual[h][l];
        self.settle(flat, v, s, Status::Deduced)?;
        Ok(true)
    }

    /// Fixes a free value.
    pub fn assign(&mut self, flat: usize, value: Value) -> Result<()> {
        let s = self.shadow_rng.gen_range(1..SHADOW_P);
        self.settle(flat, value, s, Status::Assigned)
    }

    /// Resolves single-unknown lines until none is left (FIFO). Returns the
    /// number of points deduced.
    pub fn drain(&mut self) -> Result<usize> {
        let mut solved = 0;
        while let Some((h, l)) = self.queue.pop_front() {
            let (h, l) = (h as usize, l as usize);
            self.ops.cmp(1);
            if self.unknown[h][l] != 1 {
                continue;
            }
            let flat = self.index_sum[h][l] as usize;
            let v = self.residual[h][l].clone();
            let s = self.shadow_residual[h][l];
            self.settle(flat, v, s, Status::Deduced)?;
            solved += 1;
        }
        Ok(solved)
    }
}

/// Runs the peel engine from the partial solution `known` (flat index and
/// value pairs, treated as fixed data). The returned state holds the
/// deduced values and whatever is still unknown.
pub fn peel<const N: usize>(table: &LineSumTable<N>, known: &[(usize, Value)]) -> Result<PeelState<N>> {
    let mut st = PeelState::new(table)?;
    for (flat, v) in known {
        if *flat >= st.grid.len() {
            return Err(Error::LengthMismatch { expected: st.grid.len(), got: *flat + 1 });
        }
        // known data carries no free choice
        st.settle(*flat, v.clone(), 0, Status::Deduced)?;
    }
    st.drain()?;
    Ok(st)
}
