//! Weights and weight-ordered schedules on 2D pages.
//!
//! A border fan (see [`crate::hull::BorderFan`]) with border points
//! `P_0 .. P_k` splits the positive quadrant into cones; the weight of a
//! point is its distance from the origin relative to where its ray meets the
//! border chain. Points are solved in nondecreasing weight order: in that
//! order every point of weight below 1 is the last unknown point on its
//! coupled line.
//!
//! Exact weights are [`Weight`] rationals. The schedulers use
//! [`WeightTable`], which stores `weight * L` as an integer for a common
//! denominator `L` and fills the table with additions only.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::hull::BorderFan;
use crate::ops::OpCounter;

pub type Weight = Ratio<i64>;

/// Smallest 0-based segment `s` whose cone holds `(p, q)`.
fn segment_of(fan: &BorderFan, p: i64, q: i64) -> Result<usize> {
    if p < 0 || q < 0 {
        return Err(Error::OutsideFan { p, q });
    }
    let pts = fan.border_points();
    for s in 0..fan.len() {
        let [a, b] = pts[s + 1];
        if p * b - q * a >= 0 {
            return Ok(s);
        }
    }
    unreachable!("the last border point lies on the q axis")
}

/// Index `H` (1-based) of the triangle `V_H` whose cone holds `(p, q)`;
/// points on a ray between two cones get the smaller index.
pub fn triangle_index(p: i64, q: i64, fan: &BorderFan) -> Result<usize> {
    segment_of(fan, p, q).map(|s| s + 1)
}

pub fn weight(p: i64, q: i64, fan: &BorderFan) -> Result<Weight> {
    let s = segment_of(fan, p, q)?;
    let seg = &fan.segments()[s];
    let [pa, pb] = fan.border_points()[s + 1];
    Ok(Ratio::new(seg.a * q + seg.b_abs * p, seg.a * pb + seg.b_abs * pa))
}

/// One of the four corners of a page, named by which coordinates are at
/// their maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Corner {
    LowLow,
    HighLow,
    LowHigh,
    HighHigh,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::LowLow, Corner::HighLow, Corner::LowHigh, Corner::HighHigh];

    fn flips(self) -> [bool; 2] {
        match self {
            Corner::LowLow => [false, false],
            Corner::HighLow => [true, false],
            Corner::LowHigh => [false, true],
            Corner::HighHigh => [true, true],
        }
    }
}

/// Reflection of a page that moves `corner` to the origin. It is its own
/// inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CornerFrame {
    pub corner: Corner,
    pub extent: [usize; 2],
}

impl CornerFrame {
    pub fn new(corner: Corner, extent: [usize; 2]) -> Self {
        CornerFrame { corner, extent }
    }

    pub fn map(&self, x: [usize; 2]) -> [usize; 2] {
        let f = self.corner.flips();
        let mut y = x;
        for i in 0..2 {
            if f[i] {
                y[i] = self.extent[i] - 1 - x[i];
            }
        }
        y
    }

    /// Direction as seen in the frame, signed into the quadrant `a > 0,
    /// b < 0`; `None` when the direction does not point into the page from
    /// this corner.
    pub fn map_direction(&self, v: [i64; 2]) -> Option<[i64; 2]> {
        let f = self.corner.flips();
        let w = [if f[0] { -v[0] } else { v[0] }, if f[1] { -v[1] } else { v[1] }];
        if w[0] > 0 && w[1] < 0 {
            Some(w)
        } else if w[0] < 0 && w[1] > 0 {
            Some([-w[0], -w[1]])
        } else {
            None
        }
    }
}

/// Fan of the directions that point into the page from `corner`, with
/// member ids indexing `dirs`, and the frame map of that corner.
pub fn corner_transform(dirs: &[[i64; 2]], corner: Corner, extent: [usize; 2]) -> (Option<BorderFan>, CornerFrame) {
    let frame = CornerFrame::new(corner, extent);
    let tagged: Vec<([i64; 2], usize)> =
        dirs.iter().enumerate().filter_map(|(i, &v)| frame.map_direction(v).map(|w| (w, i))).collect();
    if tagged.is_empty() {
        return (None, frame);
    }
    let fan = BorderFan::from_tagged(&tagged, true).expect("mapped directions lie in the fan quadrant");
    (Some(fan), frame)
}

fn gcd_counted(mut a: i128, mut b: i128, ops: &mut OpCounter) -> i128 {
    while b != 0 {
        ops.mul(1);
        ops.cmp(1);
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Scaled weights `weight * scale` of every point of a frame-coordinate
/// rectangle, with the cone (0-based segment) of each point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    extent: [usize; 2],
    scale: i128,
    weights: Vec<i128>,
    segments: Vec<u16>,
}

impl WeightTable {
    /// Fills the table with O(k) multiplications and divisions in total
    /// and O(k) additions and comparisons per point.
    pub fn build(fan: &BorderFan, extent: [usize; 2], ops: &mut OpCounter) -> Result<Self> {
        let k = fan.len();
        let segs = fan.segments();
        let pts = fan.border_points();
        let mut dens = Vec::with_capacity(k);
        let mut scale: i128 = 1;
        for s in 0..k {
            let [pa, pb] = pts[s + 1];
            let den = segs[s].a as i128 * pb as i128 + segs[s].b_abs as i128 * pa as i128;
            ops.mul(2);
            ops.add(1);
            let g = gcd_counted(scale, den, ops);
            scale = (scale / g).checked_mul(den).ok_or(Error::Overflow)?;
            ops.mul(2);
            dens.push(den);
        }
        // per cone: weight * scale = alpha * q + beta * p
        let mut alpha = Vec::with_capacity(k);
        let mut beta = Vec::with_capacity(k);
        for s in 0..k {
            let c = scale / dens[s];
            alpha.push(c.checked_mul(segs[s].a as i128).ok_or(Error::Overflow)?);
            beta.push(c.checked_mul(segs[s].b_abs as i128).ok_or(Error::Overflow)?);
            ops.mul(3);
        }
        let [u, v] = extent;
        let mut weights = vec![0i128; u * v];
        let mut segments = vec![0u16; u * v];
        // cone tests: d_s = p * B_{s+1} - q * A_{s+1} >= 0
        let mut row_d = vec![0i128; k];
        let mut row_w = vec![0i128; k];
        let mut cur_d = vec![0i128; k];
        let mut cur_w = vec![0i128; k];
        for q in 0..v {
            if q > 0 {
                for s in 0..k {
                    row_d[s] -= pts[s + 1][0] as i128;
                    row_w[s] += alpha[s];
                }
                ops.add(2 * k as u64);
            }
            cur_d.copy_from_slice(&row_d);
            cur_w.copy_from_slice(&row_w);
            for p in 0..u {
                if p > 0 {
                    for s in 0..k {
                        cur_d[s] += pts[s + 1][1] as i128;
                        cur_w[s] += beta[s];
                    }
                    ops.add(2 * k as u64);
                }
                let mut s = 0;
                while cur_d[s] < 0 {
                    s += 1;
                }
                ops.cmp(s as u64 + 1);
                let i = p + u * q;
                weights[i] = cur_w[s];
                segments[i] = s as u16;
                ops.assign(2);
            }
        }
        Ok(WeightTable { extent, scale, weights, segments })
    }

    pub fn extent(&self) -> [usize; 2] {
        self.extent
    }

    /// Common denominator: a point has weight 1 iff its scaled weight equals it.
    pub fn scale(&self) -> i128 {
        self.scale
    }

    pub fn scaled(&self, x: [usize; 2]) -> i128 {
        self.weights[x[0] + self.extent[0] * x[1]]
    }

    pub fn weight(&self, x: [usize; 2]) -> Ratio<i128> {
        Ratio::new(self.scaled(x), self.scale)
    }

    /// 0-based cone index of `x`.
    pub fn segment(&self, x: [usize; 2]) -> usize {
        self.segments[x[0] + self.extent[0] * x[1]] as usize
    }

    /// Frame points sorted by scaled weight, then `q`, then `p`. Only points
    /// of weight below 1 unless `include_all` is set.
    pub fn order(&self, include_all: bool, ops: &mut OpCounter) -> Vec<[usize; 2]> {
        let [u, v] = self.extent;
        let mut idx: Vec<usize> = (0..u * v).filter(|&i| include_all || self.weights[i] < self.scale).collect();
        ops.cmp(if include_all { 0 } else { (u * v) as u64 });
        let mut n = 0u64;
        // flat index p + u q already breaks ties by q, then p
        idx.sort_unstable_by(|&i, &j| {
            n += 1;
            self.weights[i].cmp(&self.weights[j]).then(i.cmp(&j))
        });
        ops.cmp(n);
        idx.into_iter().map(|i| [i % u, i / u]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderEntry {
    /// Page coordinates (not frame coordinates).
    pub point: [usize; 2],
    /// 1-based triangle index `H`; the coupled directions are the members
    /// of fan segment `H - 1`.
    pub triangle: usize,
    pub weight: Ratio<i128>,
}

/// Points of a page in solving order for one corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconOrder {
    pub corner: Corner,
    pub entries: Vec<OrderEntry>,
    pub ops: OpCounter,
}

impl ReconOrder {
    pub fn contains(&self, x: [usize; 2]) -> bool {
        self.entries.iter().any(|e| e.point == x)
    }
}

/// Points of an `extent` page ordered by weight relative to `corner`; `fan`
/// must be given in that corner's frame (see [`corner_transform`]).
pub fn corner_order(
    extent: [usize; 2],
    fan: Option<&BorderFan>,
    corner: Corner,
    include_all: bool,
) -> Result<ReconOrder> {
    let mut ops = OpCounter::default();
    let Some(fan) = fan else {
        return Ok(ReconOrder { corner, entries: Vec::new(), ops });
    };
    let frame = CornerFrame::new(corner, extent);
    let table = WeightTable::build(fan, extent, &mut ops)?;
    let entries = table
        .order(include_all, &mut ops)
        .into_iter()
        .map(|x| OrderEntry { point: frame.map(x), triangle: table.segment(x) + 1, weight: table.weight(x) })
        .collect();
    Ok(ReconOrder { corner, entries, ops })
}
