//! Lattice grids, directions, canonical lines and line sums.
//!
//! A grid of extents `[m, n, o]` holds the points `(p, q, r)` with
//! `0 <= p < m`, `0 <= q < n`, `0 <= r < o`. Points are addressed by the flat
//! index `p + m * (q + n * r)`; the 2D grid drops the last factor.
//!
//! A line in direction `v` is keyed by its base point, the grid point on the
//! line with the smallest flat index (equivalently, minimal in `(r, q, p)`
//! lexicographic order).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid<const N: usize> {
    extents: [usize; N],
}

pub type Grid2 = Grid<2>;
pub type Grid3 = Grid<3>;

impl<const N: usize> Grid<N> {
    pub fn new(extents: [usize; N]) -> Result<Self> {
        if extents.contains(&0) {
            return Err(Error::InvalidGrid);
        }
        Ok(Grid { extents })
    }

    pub fn extents(&self) -> [usize; N] {
        self.extents
    }

    pub fn len(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat-index strides: `stride[0] = 1`, `stride[i] = stride[i-1] * extent[i-1]`.
    pub fn strides(&self) -> [usize; N] {
        let mut s = [1usize; N];
        for i in 1..N {
            s[i] = s[i - 1] * self.extents[i - 1];
        }
        s
    }

    pub fn flat(&self, x: [usize; N]) -> usize {
        let mut idx = 0;
        for i in (0..N).rev() {
            idx = idx * self.extents[i] + x[i];
        }
        idx
    }

    pub fn point(&self, mut idx: usize) -> [usize; N] {
        let mut x = [0usize; N];
        for i in 0..N {
            x[i] = idx % self.extents[i];
            idx /= self.extents[i];
        }
        x
    }

    pub fn contains(&self, x: [i64; N]) -> bool {
        (0..N).all(|i| x[i] >= 0 && (x[i] as u64) < self.extents[i] as u64)
    }

    /// Flat index of a signed point, if it lies in the grid.
    pub fn locate(&self, x: [i64; N]) -> Option<usize> {
        if self.contains(x) {
            Some(self.flat(x.map(|c| c as usize)))
        } else {
            None
        }
    }

    /// All points in flat-index order.
    pub fn points(&self) -> impl Iterator<Item = [usize; N]> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Index of the dropped coordinate.
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The two coordinates kept by a projection along this axis, in order.
    pub fn kept(self) -> [usize; 2] {
        match self {
            Axis::X => [1, 2],
            Axis::Y => [0, 2],
            Axis::Z => [0, 1],
        }
    }
}

/// A normalized primitive 3D lattice direction: `gcd(|a|,|b|,|c|) = 1`,
/// `a >= 0`, `b >= 0` if `a = 0`, and `c = 1` if `a = b = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction3 {
    a: i64,
    b: i64,
    c: i64,
}

impl Direction3 {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        normalize_direction([a, b, c])
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn vector(&self) -> [i64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn project(&self, axis: Axis) -> Direction2 {
        project_direction(*self, axis)
    }
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides out the gcd and flips the sign so the first nonzero component is
/// positive.
pub fn normalize_direction(raw: [i64; 3]) -> Result<Direction3> {
    let g = gcd_all(&raw);
    if g == 0 {
        return Err(Error::DegenerateDirection);
    }
    let mut v = raw.map(|x| x / g);
    let lead = v.iter().copied().find(|&x| x != 0).unwrap_or(0);
    if lead < 0 {
        v = v.map(|x| -x);
    }
    Ok(Direction3 { a: v[0], b: v[1], c: v[2] })
}

pub fn is_normalized(v: [i64; 3]) -> bool {
    normalize_direction(v).map(|d| d.vector() == v).unwrap_or(false)
}

/// A 2D lattice direction. Projections of 3D directions are kept raw: they
/// may be non-primitive, repeated within a set, or `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction2 {
    a: i64,
    b: i64,
    primitive: bool,
}

impl Direction2 {
    /// A primitive direction normalized to `a >= 0` and `b = 1` when `a = 0`.
    pub fn primitive(a: i64, b: i64) -> Result<Self> {
        let g = a.gcd(&b);
        if g == 0 {
            return Err(Error::DegenerateDirection);
        }
        let (mut a, mut b) = (a / g, b / g);
        if a < 0 || (a == 0 && b < 0) {
            a = -a;
            b = -b;
        }
        Ok(Direction2 { a, b, primitive: true })
    }

    /// An arbitrary integer pair, stored as given.
    pub fn raw(a: i64, b: i64) -> Self {
        Direction2 { a, b, primitive: false }
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn is_primitive(&self) -> bool {
        self.primitive
    }
    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
    pub fn vector(&self) -> [i64; 2] {
        [self.a, self.b]
    }
}

/// Drops the coordinate named by `axis`. No renormalization: the result may
/// be non-primitive or zero.
pub fn project_direction(d: Direction3, axis: Axis) -> Direction2 {
    let v = d.vector();
    let [i, j] = axis.kept();
    Direction2::raw(v[i], v[j])
}

/// Sum of absolute components per coordinate.
pub fn component_sums<const N: usize>(dirs: &[[i64; N]]) -> [i64; N] {
    let mut s = [0i64; N];
    for v in dirs {
        for i in 0..N {
            s[i] += v[i].abs();
        }
    }
    s
}

/// Sum of the absolute values of the negative components per coordinate.
pub fn negative_sums<const N: usize>(dirs: &[[i64; N]]) -> [i64; N] {
    let mut s = [0i64; N];
    for v in dirs {
        for i in 0..N {
            if v[i] < 0 {
                s[i] -= v[i];
            }
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Nonvalid,
}

/// `Valid` iff every coordinate's absolute component sum is strictly below
/// the grid extent.
pub fn validity<const N: usize>(grid: &Grid<N>, dirs: &[[i64; N]]) -> Validity {
    let sums = component_sums(dirs);
    let ext = grid.extents();
    if (0..N).all(|i| (sums[i] as u64) < ext[i] as u64) {
        Validity::Valid
    } else {
        Validity::Nonvalid
    }
}

/// Canonical identifier of a line: direction index and base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineKey<const N: usize> {
    pub direction: usize,
    pub base: [usize; N],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Line<const N: usize> {
    pub base: [usize; N],
    pub len: usize,
}

/// Dense partition of a grid into the lines of one direction.
#[derive(Debug, Clone)]
pub struct LineFamily<const N: usize> {
    grid: Grid<N>,
    direction: [i64; N],
    /// Direction oriented so that its flat-index step is positive.
    step: [i64; N],
    line_of: Vec<u32>,
    bases: Vec<usize>,
    lens: Vec<u32>,
}

/// Orient `v` so that its last nonzero component is positive.
fn orient_flat_positive<const N: usize>(v: [i64; N]) -> [i64; N] {
    match v.iter().rev().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.map(|c| -c),
        _ => v,
    }
}

impl<const N: usize> LineFamily<N> {
    pub fn new(grid: &Grid<N>, direction: [i64; N]) -> Result<Self> {
        if direction.iter().all(|&x| x == 0) {
            return Err(Error::DegenerateDirection);
        }
        let step = orient_flat_positive(direction);
        let ext = grid.extents();
        let strides = grid.strides();
        let len = grid.len();
        let mut line_of = vec![0u32; len];
        let mut bases = Vec::new();
        let mut lens = Vec::new();
        let mut x = [0usize; N];
        for idx in 0..len {
            let mut pred_inside = true;
            let mut pred = idx as i64;
            for i in 0..N {
                let c = x[i] as i64 - step[i];
                if c < 0 || c >= ext[i] as i64 {
                    pred_inside = false;
                    break;
                }
                pred -= step[i] * strides[i] as i64;
            }
            if pred_inside {
                let l = line_of[pred as usize];
                line_of[idx] = l;
                lens[l as usize] += 1;
            } else {
                line_of[idx] = bases.len() as u32;
                bases.push(idx);
                lens.push(1);
            }
            // advance the coordinate counter
            for i in 0..N {
                x[i] += 1;
                if x[i] < ext[i] {
                    break;
                }
                x[i] = 0;
            }
        }
        Ok(LineFamily { grid: *grid, direction, step, line_of, bases, lens })
    }

    pub fn grid(&self) -> &Grid<N> {
        &self.grid
    }

    pub fn direction(&self) -> [i64; N] {
        self.direction
    }

    pub fn line_count(&self) -> usize {
        self.bases.len()
    }

    #[inline]
    pub fn line_of(&self, flat: usize) -> usize {
        self.line_of[flat] as usize
    }

    pub fn base(&self, line: usize) -> usize {
        self.bases[line]
    }

    pub fn len_of(&self, line: usize) -> usize {
        self.lens[line] as usize
    }

    /// Line id for a base flat index, if that point is a base.
    pub fn line_with_base(&self, base: usize) -> Option<usize> {
        self.bases.binary_search(&base).ok()
    }

    /// Flat indices of the points on a line, in increasing order.
    pub fn points(&self, line: usize) -> impl Iterator<Item = usize> + '_ {
        let base = self.grid.point(self.bases[line]).map(|c| c as i64);
        let step = self.step;
        (0..self.lens[line] as i64).map(move |t| {
            let mut x = base;
            for i in 0..N {
                x[i] += t * step[i];
            }
            self.grid.flat(x.map(|c| c as usize))
        })
    }
}

/// All lines in direction `dir` meeting the grid, ordered by base flat index.
pub fn enumerate_lines<const N: usize>(grid: &Grid<N>, dir: [i64; N]) -> Result<Vec<Line<N>>> {
    let fam = LineFamily::new(grid, dir)?;
    Ok((0..fam.line_count())
        .map(|l| Line { base: grid.point(fam.base(l)), len: fam.len_of(l) })
        .collect())
}

/// Exact line sums for every line of every direction.
///
/// Per direction, entries are `(base flat index, sum)` sorted by base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSumTable<const N: usize> {
    grid: Grid<N>,
    directions: Vec<[i64; N]>,
    sums: Vec<Vec<(usize, Value)>>,
}

impl<const N: usize> LineSumTable<N> {
    /// Builds a table from per-direction `(base point, sum)` lists, checking
    /// that every line of every direction appears exactly once.
    pub fn from_lines(
        grid: Grid<N>,
        directions: Vec<[i64; N]>,
        lines: Vec<Vec<([usize; N], Value)>>,
    ) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::EmptyDirections);
        }
        if lines.len() != directions.len() {
            return Err(Error::TableMismatch(format!(
                "{} directions but {} line lists",
                directions.len(),
                lines.len()
            )));
        }
        let mut sums = Vec::with_capacity(directions.len());
        for (h, (dir, list)) in directions.iter().zip(lines).enumerate() {
            let fam = LineFamily::new(&grid, *dir)?;
            let mut slots: Vec<Option<Value>> = vec![None; fam.line_count()];
            for (base, s) in list {
                if (0..N).any(|i| base[i] >= grid.extents()[i]) {
                    return Err(Error::TableMismatch(format!(
                        "direction {h}: base {base:?} outside the grid"
                    )));
                }
                let Some(l) = fam.line_with_base(grid.flat(base)) else {
                    return Err(Error::TableMismatch(format!(
                        "direction {h}: {base:?} is not a canonical line base"
                    )));
                };
                if slots[l].replace(s).is_some() {
                    return Err(Error::TableMismatch(format!(
                        "direction {h}: line {base:?} listed twice"
                    )));
                }
            }
            let mut out = Vec::with_capacity(slots.len());
            for (l, s) in slots.into_iter().enumerate() {
                match s {
                    Some(s) => out.push((fam.base(l), s)),
                    None => {
                        return Err(Error::TableMismatch(format!(
                            "direction {h}: missing line {:?}",
                            grid.point(fam.base(l))
                        )))
                    }
                }
            }
            sums.push(out);
        }
        Ok(LineSumTable { grid, directions, sums })
    }

    pub fn grid(&self) -> &Grid<N> {
        &self.grid
    }

    pub fn directions(&self) -> &[[i64; N]] {
        &self.directions
    }

    /// `(base flat index, sum)` pairs of one direction, sorted by base.
    pub fn direction_sums(&self, h: usize) -> &[(usize, Value)] {
        &self.sums[h]
    }

    pub fn get(&self, key: &LineKey<N>) -> Option<&Value> {
        let sums = self.sums.get(key.direction)?;
        let base = self.grid.flat(key.base);
        sums.binary_search_by_key(&base, |(b, _)| *b).ok().map(|i| &sums[i].1)
    }

    pub fn get_mut(&mut self, key: &LineKey<N>) -> Option<&mut Value> {
        let base = self.grid.flat(key.base);
        let sums = self.sums.get_mut(key.direction)?;
        let i = sums.binary_search_by_key(&base, |(b, _)| *b).ok()?;
        Some(&mut sums[i].1)
    }

    /// All entries as `(key, sum)`.
    pub fn iter(&self) -> impl Iterator<Item = (LineKey<N>, &Value)> + '_ {
        self.sums.iter().enumerate().flat_map(move |(h, list)| {
            list.iter()
                .map(move |(b, s)| (LineKey { direction: h, base: self.grid.point(*b) }, s))
        })
    }

    pub fn line_count(&self) -> usize {
        self.sums.iter().map(Vec::len).sum()
    }
}

/// Line sums of `values` (flat-indexed) along every direction.
pub fn forward_project<const N: usize>(
    grid: &Grid<N>,
    values: &[Value],
    dirs: &[[i64; N]],
) -> Result<LineSumTable<N>> {
    if values.len() != grid.len() {
        return Err(Error::LengthMismatch { expected: grid.len(), got: values.len() });
    }
    if dirs.is_empty() {
        return Err(Error::EmptyDirections);
    }
    let mut sums = Vec::with_capacity(dirs.len());
    for dir in dirs {
        let fam = LineFamily::new(grid, *dir)?;
        let mut acc = vec![Value::zero(); fam.line_count()];
        for (idx, v) in values.iter().enumerate() {
            if !v.is_zero() {
                acc[fam.line_of(idx)] += v;
            }
        }
        sums.push(acc.into_iter().enumerate().map(|(l, s)| (fam.base(l), s)).collect());
    }
    Ok(LineSumTable { grid: *grid, directions: dirs.to_vec(), sums })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int(v: i64) -> Value {
        Value::from_integer(BigInt::from(v))
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_direction([-1, 2, -1]).unwrap().vector(), [1, -2, 1]);
        assert_eq!(normalize_direction([2, 2, 4]).unwrap().vector(), [1, 1, 2]);
        assert_eq!(normalize_direction([0, 0, -3]).unwrap().vector(), [0, 0, 1]);
        assert_eq!(normalize_direction([0, -2, 4]).unwrap().vector(), [0, 1, -2]);
        assert_eq!(normalize_direction([0, 0, 0]), Err(Error::DegenerateDirection));
    }

    #[test]
    fn project_examples() {
        let d = |a, b, c| Direction3::new(a, b, c).unwrap();
        assert_eq!(d(1, 0, 0).project(Axis::X).vector(), [0, 0]);
        assert!(d(1, 0, 0).project(Axis::X).is_zero());
        assert_eq!(d(1, -2, 1).project(Axis::X).vector(), [-2, 1]);
        assert_eq!(d(1, 1, -2).project(Axis::Y).vector(), [1, -2]);
        assert_eq!(d(1, 1, 2).project(Axis::Z).vector(), [1, 1]);
        assert!(!d(1, 1, 2).project(Axis::Z).is_primitive());
    }

    #[test]
    fn primitive_2d_normalization() {
        assert_eq!(Direction2::primitive(0, -3).unwrap().vector(), [0, 1]);
        assert_eq!(Direction2::primitive(-2, 4).unwrap().vector(), [1, -2]);
        assert!(Direction2::primitive(0, 0).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let g = Grid::new([3, 1]).unwrap();
        let lines = enumerate_lines(&g, [1, 0]).unwrap();
        assert_eq!(lines, vec![Line { base: [0, 0], len: 3 }]);

        let g = Grid::new([2, 2]).unwrap();
        let lines = enumerate_lines(&g, [1, 1]).unwrap();
        let mut sizes: Vec<usize> = lines.iter().map(|l| l.len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 2]);

        let g = Grid::new([2, 2, 2]).unwrap();
        let lines = enumerate_lines(&g, [1, 1, 1]).unwrap();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines.iter().map(|l| l.len).sum::<usize>(), 8);
    }

    #[test]
    fn base_is_flat_minimal() {
        let g = Grid::new([4, 3, 5]).unwrap();
        let fam = LineFamily::new(&g, [1, -2, 1]).unwrap();
        for l in 0..fam.line_count() {
            let pts: Vec<usize> = fam.points(l).collect();
            assert_eq!(pts[0], fam.base(l));
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
            assert!(pts.iter().all(|&p| fam.line_of(p) == l));
        }
    }

    #[test]
    fn forward_project_examples() {
        let g = Grid::new([2, 2, 2]).unwrap();
        let zeros = vec![int(0); 8];
        let t = forward_project(&g, &zeros, &[[1, 1, 1]]).unwrap();
        assert!(t.iter().all(|(_, s)| s.is_zero()));

        let ones = vec![int(1); 8];
        let t = forward_project(&g, &ones, &[[0, 0, 1]]).unwrap();
        assert_eq!(t.line_count(), 4);
        assert!(t.iter().all(|(_, s)| *s == int(2)));
    }

    #[test]
    fn validity_examples() {
        let d: Vec<[i64; 3]> = vec![[1, 1, 2], [1, -2, 1], [1, 1, -2], [1, 0, 0]];
        assert_eq!(validity(&Grid::new([5, 5, 6]).unwrap(), &d), Validity::Valid);
        assert_eq!(validity(&Grid::new([4, 5, 6]).unwrap(), &d), Validity::Nonvalid);
        let d2: Vec<[i64; 2]> = vec![[3, -2], [4, -3], [1, -2]];
        assert_eq!(validity(&Grid::new([8, 7]).unwrap(), &d2), Validity::Nonvalid);
        assert_eq!(validity(&Grid::new([9, 8]).unwrap(), &d2), Validity::Valid);
    }

    #[test]
    fn table_rejects_incomplete_or_duplicate() {
        let g = Grid::new([2, 2]).unwrap();
        let ok = vec![vec![([0, 0], int(1)), ([0, 1], int(2))]];
        assert!(LineSumTable::from_lines(g, vec![[1, 0]], ok).is_ok());
        let missing = vec![vec![([0, 0], int(1))]];
        assert!(LineSumTable::from_lines(g, vec![[1, 0]], missing).is_err());
        let dup = vec![vec![([0, 0], int(1)), ([0, 0], int(1)), ([0, 1], int(2))]];
        assert!(LineSumTable::from_lines(g, vec![[1, 0]], dup).is_err());
        let not_base = vec![vec![([1, 0], int(1)), ([0, 1], int(2))]];
        assert!(LineSumTable::from_lines(g, vec![[1, 0]], not_base).is_err());
    }
}
