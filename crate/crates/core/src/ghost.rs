//! Elementary switching functions (ghosts) and the switching union.
//!
//! For a direction set `D`, the elementary ghost is the signed subset count
//! of `x - anchor` written as a sum of distinct members of `D`, with sign
//! `(-1)^(number of terms)`. As a Laurent polynomial it is
//! `prod_{v in D} (1 - X^v)`, translated so its support sits in the box
//! `[0, sum |v_i|]` per coordinate; that product form is how it is built
//! here, one two-term factor at a time.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{component_sums, negative_sums, Grid};
use crate::Value;

/// Largest direction set accepted by [`elementary_ghost`].
pub const MAX_GHOST_DIRECTIONS: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhostFunction<const N: usize> {
    values: BTreeMap<[i64; N], i64>,
    extent: [i64; N],
    anchor: [i64; N],
}

impl<const N: usize> GhostFunction<N> {
    /// Nonzero values keyed by point.
    pub fn values(&self) -> &BTreeMap<[i64; N], i64> {
        &self.values
    }

    pub fn value_at(&self, x: [i64; N]) -> i64 {
        self.values.get(&x).copied().unwrap_or(0)
    }

    /// Support points in lexicographic order.
    pub fn support(&self) -> impl Iterator<Item = [i64; N]> + '_ {
        self.values.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    /// Upper corner of the bounding box `[0, extent]`.
    pub fn extent(&self) -> [i64; N] {
        self.extent
    }

    /// The point carrying the empty-subset term; its value is 1.
    pub fn anchor(&self) -> [i64; N] {
        self.anchor
    }

    /// Support point that is minimal in the free-position order (see
    /// [`lead_key`]).
    pub fn lead_point(&self) -> [i64; N] {
        self.support().min_by_key(lead_key).expect("ghost support is never empty")
    }

    /// The ghost translated by `shift` as a flat grid function, or `None`
    /// if the translate leaves the grid.
    pub fn on_grid(&self, grid: &Grid<N>, shift: [i64; N]) -> Option<Vec<Value>> {
        let mut out = vec![Value::from_integer(BigInt::from(0)); grid.len()];
        for (x, &v) in &self.values {
            let mut y = *x;
            for i in 0..N {
                y[i] += shift[i];
            }
            out[grid.locate(y)?] = Value::from_integer(BigInt::from(v));
        }
        Some(out)
    }
}

/// Total order used to pick free positions: for 3D points the top layer
/// (largest last coordinate) comes first, then lexicographic order on the
/// remaining coordinates; 2D points are ordered lexicographically.
///
/// The order is translation invariant, so the lead point of a translated
/// ghost is the translated lead point.
pub fn lead_key<const N: usize>(x: &[i64; N]) -> [i64; N] {
    let mut k = *x;
    if N >= 3 {
        k[0] = -x[N - 1];
        k[1..N].copy_from_slice(&x[0..N - 1]);
    }
    k
}

pub fn elementary_ghost<const N: usize>(dirs: &[[i64; N]]) -> Result<GhostFunction<N>> {
    if dirs.is_empty() {
        return Err(Error::EmptyDirections);
    }
    if dirs.len() > MAX_GHOST_DIRECTIONS {
        return Err(Error::TooManyDirections { count: dirs.len(), limit: MAX_GHOST_DIRECTIONS });
    }
    if dirs.iter().any(|v| v.iter().all(|&c| c == 0)) {
        return Err(Error::DegenerateDirection);
    }
    let anchor = negative_sums(dirs);
    let mut values = BTreeMap::new();
    values.insert(anchor, 1i64);
    for v in dirs {
        let mut next = values.clone();
        for (x, c) in &values {
            let mut y = *x;
            for i in 0..N {
                y[i] += v[i];
            }
            *next.entry(y).or_insert(0) -= c;
        }
        next.retain(|_, c| *c != 0);
        values = next;
    }
    Ok(GhostFunction { values, extent: component_sums(dirs), anchor })
}

/// Union `T` of all switching domains, with the box `U` of shifts that keep
/// the elementary ghost inside the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingUnion<const N: usize> {
    grid: Grid<N>,
    shift_extent: [usize; N],
    points: Vec<usize>,
}

impl<const N: usize> SwitchingUnion<N> {
    /// Number of shifts per coordinate; all zero when the pair is nonvalid.
    pub fn shift_extent(&self) -> [usize; N] {
        self.shift_extent
    }

    pub fn shift_count(&self) -> usize {
        self.shift_extent.iter().product()
    }

    pub fn shifts(&self) -> impl Iterator<Item = [i64; N]> + '_ {
        let n = self.shift_count();
        let ext = self.shift_extent;
        (0..n).map(move |mut i| {
            let mut u = [0i64; N];
            for k in 0..N {
                u[k] = (i % ext[k]) as i64;
                i /= ext[k];
            }
            u
        })
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Flat indices of the points of `T`, sorted.
    pub fn flat_points(&self) -> &[usize] {
        &self.points
    }

    pub fn points(&self) -> impl Iterator<Item = [usize; N]> + '_ {
        self.points.iter().map(|&i| self.grid.point(i))
    }

    pub fn contains(&self, flat: usize) -> bool {
        self.points.binary_search(&flat).is_ok()
    }
}

fn shift_extent<const N: usize>(grid: &Grid<N>, dirs: &[[i64; N]]) -> [usize; N] {
    let sums = component_sums(dirs);
    let ext = grid.extents();
    let mut out = [0usize; N];
    if (0..N).all(|i| (sums[i] as u64) < ext[i] as u64) {
        for i in 0..N {
            out[i] = ext[i] - sums[i] as usize;
        }
    }
    out
}

pub fn switching_union<const N: usize>(grid: &Grid<N>, dirs: &[[i64; N]]) -> Result<SwitchingUnion<N>> {
    let shift_extent = shift_extent(grid, dirs);
    let mut union = SwitchingUnion { grid: *grid, shift_extent, points: Vec::new() };
    if union.shift_count() == 0 {
        return Ok(union);
    }
    let ghost = elementary_ghost(dirs)?;
    let mut member = vec![false; grid.len()];
    for u in union.shifts() {
        for x in ghost.support() {
            let mut y = x;
            for i in 0..N {
                y[i] += u[i];
            }
            let idx = grid.locate(y).expect("shift keeps the ghost inside the grid");
            member[idx] = true;
        }
    }
    union.points = member.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect();
    Ok(union)
}

/// Dimension of the space of switching functions:
/// `prod_i (extent_i - sum |v_i|)` when valid, 0 otherwise.
pub fn solution_space_dim<const N: usize>(grid: &Grid<N>, dirs: &[[i64; N]]) -> u64 {
    shift_extent(grid, dirs).iter().map(|&e| e as u64).product()
}

/// Positions whose values may be chosen freely: the lead point of every
/// shifted elementary ghost, sorted by [`lead_key`].
///
/// The values of the shifted ghosts at these positions form a unitriangular
/// matrix, so any assignment of values here extends to exactly one solution.
pub fn free_positions<const N: usize>(grid: &Grid<N>, dirs: &[[i64; N]]) -> Result<Vec<[usize; N]>> {
    let ext = shift_extent(grid, dirs);
    if ext.contains(&0) {
        return Ok(Vec::new());
    }
    let lead = elementary_ghost(dirs)?.lead_point();
    let union = SwitchingUnion { grid: *grid, shift_extent: ext, points: Vec::new() };
    let mut out: Vec<[i64; N]> = union
        .shifts()
        .map(|u| {
            let mut x = lead;
            for i in 0..N {
                x[i] += u[i];
            }
            x
        })
        .collect();
    out.sort_by_key(lead_key);
    Ok(out.into_iter().map(|x| x.map(|c| c as usize)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::forward_project;
    use alloc::collections::BTreeSet;
    use num_traits::Zero;

    pub(crate) const EXAMPLE_DIRS: [[i64; 3]; 4] = [[1, 1, 2], [1, -2, 1], [1, 1, -2], [1, 0, 0]];
    pub(crate) const EXAMPLE_T: [[i64; 3]; 16] = [
        [0, 2, 2], [1, 0, 3], [1, 2, 2], [1, 3, 0], [1, 3, 4], [2, 0, 3], [2, 1, 1], [2, 1, 5],
        [2, 3, 0], [2, 3, 4], [2, 4, 2], [3, 1, 1], [3, 1, 5], [3, 2, 3], [3, 4, 2], [4, 2, 3],
    ];

    #[test]
    fn two_axis_ghost() {
        let g = elementary_ghost(&[[1i64, 0], [0, 1]]).unwrap();
        let expect: BTreeMap<[i64; 2], i64> =
            [([0, 0], 1), ([1, 0], -1), ([0, 1], -1), ([1, 1], 1)].into_iter().collect();
        assert_eq!(g.values(), &expect);
    }

    #[test]
    fn example_support_is_t() {
        let g = elementary_ghost(&EXAMPLE_DIRS).unwrap();
        let support: BTreeSet<[i64; 3]> = g.support().collect();
        let expect: BTreeSet<[i64; 3]> = EXAMPLE_T.iter().copied().collect();
        assert_eq!(support, expect);
        assert_eq!(g.anchor(), [0, 2, 2]);
        assert_eq!(g.value_at([0, 2, 2]), 1);
        // point symmetric in (2, 2, 5/2)
        for x in &EXAMPLE_T {
            assert!(support.contains(&[4 - x[0], 4 - x[1], 5 - x[2]]));
        }
    }

    #[test]
    fn unit_cube_by_subset_count() {
        let g = elementary_ghost(&[[1i64, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(g.support_len(), 8);
        for x in g.support() {
            let ones = x.iter().filter(|&&c| c == 1).count() as u32;
            assert_eq!(g.value_at(x), (-1i64).pow(ones));
        }
        assert_eq!(g.value_at([0, 0, 0]), 1);
    }

    #[test]
    fn too_many_directions() {
        let dirs: Vec<[i64; 2]> = (0..31).map(|i| [1, i]).collect();
        assert_eq!(
            elementary_ghost(&dirs),
            Err(Error::TooManyDirections { count: 31, limit: MAX_GHOST_DIRECTIONS })
        );
    }

    #[test]
    fn example_union_and_dimension() {
        let g = Grid::new([5, 5, 6]).unwrap();
        let u = switching_union(&g, &EXAMPLE_DIRS).unwrap();
        assert_eq!(u.shift_count(), 1);
        let pts: BTreeSet<[i64; 3]> = u.points().map(|x| x.map(|c| c as i64)).collect();
        assert_eq!(pts, EXAMPLE_T.iter().copied().collect());
        assert_eq!(solution_space_dim(&g, &EXAMPLE_DIRS), 1);
        assert_eq!(free_positions(&g, &EXAMPLE_DIRS).unwrap(), vec![[2, 1, 5]]);

        let g = Grid::new([6, 5, 6]).unwrap();
        let u = switching_union(&g, &EXAMPLE_DIRS).unwrap();
        assert_eq!(u.shift_count(), 2);
        let mut expect: BTreeSet<[i64; 3]> = EXAMPLE_T.iter().copied().collect();
        expect.extend(EXAMPLE_T.iter().map(|x| [x[0] + 1, x[1], x[2]]));
        let pts: BTreeSet<[i64; 3]> = u.points().map(|x| x.map(|c| c as i64)).collect();
        assert_eq!(pts, expect);

        assert_eq!(solution_space_dim(&Grid::new([6, 6, 7]).unwrap(), &EXAMPLE_DIRS), 8);
    }

    #[test]
    fn nonvalid_union_is_empty() {
        let g = Grid::new([4, 5, 6]).unwrap();
        let u = switching_union(&g, &EXAMPLE_DIRS).unwrap();
        assert!(u.is_empty());
        assert_eq!(u.shift_count(), 0);
        assert_eq!(solution_space_dim(&g, &EXAMPLE_DIRS), 0);
        assert!(free_positions(&g, &EXAMPLE_DIRS).unwrap().is_empty());
    }

    #[test]
    fn shifted_ghost_has_zero_line_sums() {
        let g = elementary_ghost(&EXAMPLE_DIRS).unwrap();
        let grid = Grid::new([7, 6, 8]).unwrap();
        for shift in [[0, 0, 0], [2, 1, 2], [1, 0, 1]] {
            let f = g.on_grid(&grid, shift).unwrap();
            let t = forward_project(&grid, &f, &EXAMPLE_DIRS).unwrap();
            assert!(t.iter().all(|(_, s)| s.is_zero()));
        }
        assert!(g.on_grid(&grid, [3, 0, 0]).is_none());
    }
}
