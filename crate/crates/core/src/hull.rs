//! Convex hull of the switching union.
//!
//! The hull `C` of `T` is a zonotope: the Minkowski sum of one segment per
//! direction plus the three axis segments of lengths `m-1-sum a`,
//! `n-1-sum |b|` and `o-1-sum |c|`, anchored at `(0, sum_{b<0} |b|,
//! sum_{c<0} |c|)`. Every facet is a zonogon; facets are reported as their
//! parallelogram tiles, so each reported face is a parallelogram spanned by
//! two generators.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::lattice::{component_sums, negative_sums, Axis, Direction3, Grid3, Validity};

/// Where a generator comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenLabel {
    Direction(usize),
    Axis(Axis),
}

/// A zonotope generator; parallel inputs are merged into one segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator<const N: usize> {
    pub vector: [i64; N],
    pub labels: Vec<GenLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// `x, x + e0, x + e0 + e1, x + e1`.
    pub vertices: [[i64; 3]; 4],
    pub edges: [[i64; 3]; 2],
    pub labels: [Vec<GenLabel>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullPolytope {
    anchor: [i64; 3],
    generators: Vec<Generator<3>>,
    vertices: Vec<[i64; 3]>,
    faces: Vec<Face>,
}

impl HullPolytope {
    pub fn empty() -> Self {
        HullPolytope { anchor: [0; 3], generators: Vec::new(), vertices: Vec::new(), faces: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn anchor(&self) -> [i64; 3] {
        self.anchor
    }

    pub fn generators(&self) -> &[Generator<3>] {
        &self.generators
    }

    /// Vertices, sorted lexicographically.
    pub fn vertices(&self) -> &[[i64; 3]] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }
}

#[inline]
fn cross(u: [i64; 3], v: [i64; 3]) -> [i64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

#[inline]
fn dot(u: [i64; 3], v: [i64; 3]) -> i64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

#[inline]
fn add<const N: usize>(mut u: [i64; N], v: [i64; N]) -> [i64; N] {
    for i in 0..N {
        u[i] += v[i];
    }
    u
}

#[inline]
fn sub<const N: usize>(mut u: [i64; N], v: [i64; N]) -> [i64; N] {
    for i in 0..N {
        u[i] -= v[i];
    }
    u
}

#[inline]
fn cross2(u: [i64; 2], v: [i64; 2]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

/// Primitive representative with its first nonzero coordinate positive.
fn canonical<const N: usize>(v: [i64; N]) -> [i64; N] {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    let mut r = v.map(|x| x / g);
    if r.iter().copied().find(|&x| x != 0).unwrap_or(0) < 0 {
        r = r.map(|x| -x);
    }
    r
}

/// Orients every generator to its canonical side (moving the anchor so the
/// zonotope is unchanged) and merges parallel generators.
fn merge_generators<const N: usize>(
    mut anchor: [i64; N],
    raw: &[([i64; N], GenLabel)],
) -> ([i64; N], Vec<Generator<N>>) {
    let mut out: Vec<(Generator<N>, [i64; N])> = Vec::new();
    for &(v, label) in raw {
        if v.iter().all(|&c| c == 0) {
            continue;
        }
        let key = canonical(v);
        let flipped = v.iter().copied().find(|&x| x != 0).unwrap_or(0) < 0;
        let oriented = if flipped {
            // [0, v] = v + [0, -v]
            anchor = add(anchor, v);
            v.map(|x| -x)
        } else {
            v
        };
        match out.iter_mut().find(|(_, k)| *k == key) {
            Some((g, _)) => {
                g.vector = add(g.vector, oriented);
                g.labels.push(label);
            }
            None => out.push((Generator { vector: oriented, labels: vec![label] }, key)),
        }
    }
    (anchor, out.into_iter().map(|(g, _)| g).collect())
}

/// Zonogon in the plane with normal `normal`: vertices in counterclockwise
/// order (seen from the tip of `normal`) and the parallelogram tiling.
fn zonogon3(base: [i64; 3], gens: &[&Generator<3>], normal: [i64; 3]) -> (Vec<[i64; 3]>, Vec<Face>) {
    let e = gens[0].vector;
    let mut base = base;
    let mut g: Vec<([i64; 3], &Generator<3>)> = gens
        .iter()
        .map(|gen| {
            let v = gen.vector;
            if dot(normal, cross(e, v)) < 0 {
                base = add(base, v);
                (v.map(|x| -x), *gen)
            } else {
                (v, *gen)
            }
        })
        .collect();
    g.sort_by(|a, b| {
        let s = dot(normal, cross(a.0, b.0));
        0.cmp(&s)
    });
    let k = g.len();
    let mut prefix = vec![base];
    for (v, _) in &g {
        let last = *prefix.last().unwrap();
        prefix.push(add(last, *v));
    }
    let mut verts: Vec<[i64; 3]> = prefix.clone();
    let total = prefix[k];
    for t in 1..k {
        verts.push(sub(add(total, base), prefix[t]));
    }
    let mut tiles = Vec::new();
    for i in 0..k {
        let mut x = base;
        for j in i + 1..k {
            let (vi, gi) = g[i];
            let (vj, gj) = g[j];
            tiles.push(Face {
                vertices: [x, add(x, vi), add(add(x, vi), vj), add(x, vj)],
                edges: [vi, vj],
                labels: [gi.labels.clone(), gj.labels.clone()],
            });
            x = add(x, vj);
        }
    }
    (verts, tiles)
}

/// Zonotope generated by `raw` segments at `anchor`.
pub fn zonotope3(anchor: [i64; 3], raw: &[([i64; 3], GenLabel)]) -> HullPolytope {
    let (anchor, gens) = merge_generators(anchor, raw);
    let mut vertices = BTreeSet::new();
    let mut faces = Vec::new();
    let mut normals = BTreeSet::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            normals.insert(canonical(cross(gens[i].vector, gens[j].vector)));
        }
    }
    let full = normals
        .iter()
        .any(|&n| gens.iter().any(|g| dot(n, g.vector) != 0));
    match (gens.len(), full) {
        (0, _) => {
            vertices.insert(anchor);
        }
        (1, _) => {
            vertices.insert(anchor);
            vertices.insert(add(anchor, gens[0].vector));
        }
        (_, false) => {
            // all generators in one plane
            let n = *normals.iter().next().unwrap();
            let refs: Vec<&Generator<3>> = gens.iter().collect();
            let (v, f) = zonogon3(anchor, &refs, n);
            vertices.extend(v);
            faces.extend(f);
        }
        (_, true) => {
            for &n in &normals {
                for sign in [1i64, -1] {
                    let sn = n.map(|c| c * sign);
                    let mut base = anchor;
                    let mut in_plane = Vec::new();
                    for g in &gens {
                        let s = dot(sn, g.vector);
                        if s > 0 {
                            base = add(base, g.vector);
                        } else if s == 0 {
                            in_plane.push(g);
                        }
                    }
                    let (v, f) = zonogon3(base, &in_plane, sn);
                    vertices.extend(v);
                    faces.extend(f);
                }
            }
        }
    }
    HullPolytope { anchor, generators: gens, vertices: vertices.into_iter().collect(), faces }
}

/// Convex hull of the switching union of `(grid, dirs)`; empty when the
/// pair is nonvalid.
pub fn hull3(grid: &Grid3, dirs: &[Direction3]) -> HullPolytope {
    let vecs: Vec<[i64; 3]> = dirs.iter().map(Direction3::vector).collect();
    if dirs.is_empty() || crate::lattice::validity(grid, &vecs) == Validity::Nonvalid {
        return HullPolytope::empty();
    }
    let sums = component_sums(&vecs);
    let anchor = negative_sums(&vecs);
    let ext = grid.extents();
    let mut raw: Vec<([i64; 3], GenLabel)> =
        vecs.iter().enumerate().map(|(h, &v)| (v, GenLabel::Direction(h))).collect();
    for axis in Axis::ALL {
        let i = axis.index();
        let len = ext[i] as i64 - 1 - sums[i];
        if len > 0 {
            let mut v = [0i64; 3];
            v[i] = len;
            raw.push((v, GenLabel::Axis(axis)));
        }
    }
    zonotope3(anchor, &raw)
}

/// A convex lattice polygon, vertices counterclockwise in the kept
/// coordinates. May degenerate to a segment or a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullPolygon {
    vertices: Vec<[i64; 2]>,
    generators: Vec<Generator<2>>,
}

impl HullPolygon {
    pub fn empty() -> Self {
        HullPolygon { vertices: Vec::new(), generators: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[[i64; 2]] {
        &self.vertices
    }

    pub fn generators(&self) -> &[Generator<2>] {
        &self.generators
    }

    /// Closed containment.
    pub fn contains(&self, x: [i64; 2]) -> bool {
        let v = &self.vertices;
        match v.len() {
            0 => false,
            1 => v[0] == x,
            2 => {
                let d = sub(v[1], v[0]);
                let w = sub(x, v[0]);
                cross2(d, w) == 0 && {
                    let t = d[0] * w[0] + d[1] * w[1];
                    t >= 0 && t <= d[0] * d[0] + d[1] * d[1]
                }
            }
            n => (0..n).all(|i| cross2(sub(v[(i + 1) % n], v[i]), sub(x, v[i])) >= 0),
        }
    }

    /// Lattice points of the `extent[0] x extent[1]` page outside the
    /// polygon, sorted lexicographically.
    pub fn exterior(&self, extent: [usize; 2]) -> Vec<[usize; 2]> {
        let mut out = Vec::new();
        for u in 0..extent[0] {
            for v in 0..extent[1] {
                if !self.contains([u as i64, v as i64]) {
                    out.push([u, v]);
                }
            }
        }
        out
    }
}

/// Zonogon in the plane, counterclockwise.
pub fn zonogon2(anchor: [i64; 2], raw: &[([i64; 2], GenLabel)]) -> HullPolygon {
    let (mut base, gens) = merge_generators(anchor, raw);
    match gens.len() {
        0 => return HullPolygon { vertices: vec![base], generators: gens },
        1 => return HullPolygon { vertices: vec![base, add(base, gens[0].vector)], generators: gens },
        _ => {}
    }
    let e = gens[0].vector;
    let mut g: Vec<[i64; 2]> = gens
        .iter()
        .map(|gen| {
            if cross2(e, gen.vector) < 0 {
                base = add(base, gen.vector);
                gen.vector.map(|x| -x)
            } else {
                gen.vector
            }
        })
        .collect();
    g.sort_by(|a, b| 0.cmp(&cross2(*a, *b)));
    let k = g.len();
    let mut prefix = vec![base];
    for v in &g {
        let last = *prefix.last().unwrap();
        prefix.push(add(last, *v));
    }
    let mut vertices = prefix.clone();
    for t in 1..k {
        vertices.push(sub(add(prefix[k], base), prefix[t]));
    }
    HullPolygon { vertices, generators: gens }
}

/// Shadow of `hull` along `axis` on the plane of the two kept coordinates.
pub fn project_hull(hull: &HullPolytope, axis: Axis) -> HullPolygon {
    if hull.is_empty() {
        return HullPolygon::empty();
    }
    let [i, j] = axis.kept();
    let anchor = [hull.anchor[i], hull.anchor[j]];
    let mut raw = Vec::new();
    for g in &hull.generators {
        raw.push(([g.vector[i], g.vector[j]], g.labels[0]));
    }
    let mut poly = zonogon2(anchor, &raw);
    // keep the full provenance of projected generators
    for pg in &mut poly.generators {
        let mut labels = Vec::new();
        for g in &hull.generators {
            let v = [g.vector[i], g.vector[j]];
            if v != [0, 0] && canonical(v) == canonical(pg.vector) {
                labels.extend(g.labels.iter().copied());
            }
        }
        pg.labels = labels;
    }
    poly
}

/// One chain segment of a border fan: the (merged) direction `(a, -b_abs)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanSegment {
    pub a: i64,
    pub b_abs: i64,
    /// Ids of the input directions merged into this segment.
    pub members: Vec<usize>,
}

/// Border points `(P_0, Q_0) = (sum a, 0), ..., (P_k, Q_k) = (0, sum |b|)`
/// and the fan of triangles `V_H = (origin, P_{H-1}, P_H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderFan {
    segments: Vec<FanSegment>,
    points: Vec<[i64; 2]>,
}

impl BorderFan {
    /// Builds the fan from directions `(a, b)` with `a > 0`, `b < 0`, given in
    /// nondecreasing order of `|b| / a`. Equal ratios are merged by vector
    /// addition.
    pub fn new(dirs: &[[i64; 2]]) -> Result<Self> {
        let tagged: Vec<([i64; 2], usize)> = dirs.iter().copied().zip(0..).collect();
        Self::from_tagged(&tagged, false)
    }

    /// As [`BorderFan::new`], with caller-chosen member ids; when `sort` is
    /// set the input is ordered by ratio first.
    pub fn from_tagged(dirs: &[([i64; 2], usize)], sort: bool) -> Result<Self> {
        if dirs.is_empty() {
            return Err(Error::EmptyDirections);
        }
        for (i, (v, _)) in dirs.iter().enumerate() {
            if v[0] <= 0 || v[1] >= 0 {
                return Err(Error::FanQuadrant { index: i });
            }
        }
        let mut list: Vec<([i64; 2], usize)> = dirs.to_vec();
        if sort {
            // stable: equal ratios keep input order
            list.sort_by(|x, y| ((-x.0[1]) * y.0[0]).cmp(&((-y.0[1]) * x.0[0])));
        }
        let mut segments: Vec<FanSegment> = Vec::new();
        for (i, (v, id)) in list.iter().enumerate() {
            let (a, b) = (v[0], -v[1]);
            if let Some(last) = segments.last_mut() {
                let ord = (b * last.a).cmp(&(last.b_abs * a));
                match ord {
                    core::cmp::Ordering::Less => return Err(Error::UnorderedFan { index: i }),
                    core::cmp::Ordering::Equal => {
                        last.a += a;
                        last.b_abs += b;
                        last.members.push(*id);
                        continue;
                    }
                    core::cmp::Ordering::Greater => {}
                }
            }
            segments.push(FanSegment { a, b_abs: b, members: vec![*id] });
        }
        let total_a: i64 = segments.iter().map(|s| s.a).sum();
        let mut points = vec![[total_a, 0]];
        for s in &segments {
            let last = *points.last().unwrap();
            points.push([last[0] - s.a, last[1] + s.b_abs]);
        }
        Ok(BorderFan { segments, points })
    }

    pub fn segments(&self) -> &[FanSegment] {
        &self.segments
    }

    /// Number of triangles `k`.
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn border_points(&self) -> &[[i64; 2]] {
        &self.points
    }

    /// Triangle `V_{h+1}` (0-based `h`): origin and two consecutive border points.
    pub fn triangle(&self, h: usize) -> [[i64; 2]; 3] {
        [[0, 0], self.points[h], self.points[h + 1]]
    }

    pub fn is_border_point(&self, x: [i64; 2]) -> bool {
        self.points.contains(&x)
    }
}

pub fn border_fan(dirs: &[[i64; 2]]) -> Result<BorderFan> {
    BorderFan::new(dirs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FaceViolation {
    NotParallelogram { face: usize },
    EdgeNotAllowed { face: usize, edge: [i64; 3] },
    NotSupporting { face: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FaceAudit {
    pub faces: usize,
    pub violations: Vec<FaceViolation>,
}

impl FaceAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every face is a nondegenerate parallelogram on a supporting
/// plane of `hull`, with edges in `±D` or parallel to a coordinate axis.
pub fn face_audit(hull: &HullPolytope, dirs: &[Direction3]) -> FaceAudit {
    let allowed = |e: [i64; 3]| {
        e.iter().filter(|&&c| c != 0).count() == 1
            || dirs.iter().any(|d| d.vector() == e || d.vector() == e.map(|c| -c))
    };
    let mut audit = FaceAudit { faces: hull.faces.len(), violations: Vec::new() };
    for (i, f) in hull.faces.iter().enumerate() {
        let [v0, v1, v2, v3] = f.vertices;
        let e0 = sub(v1, v0);
        let e1 = sub(v3, v0);
        let n = cross(e0, e1);
        if sub(v2, v3) != e0 || sub(v2, v1) != e1 || n == [0, 0, 0] {
            audit.violations.push(FaceViolation::NotParallelogram { face: i });
            continue;
        }
        for e in [e0, e1] {
            if !allowed(e) {
                audit.violations.push(FaceViolation::EdgeNotAllowed { face: i, edge: e });
            }
        }
        let side: Vec<i64> = hull.vertices.iter().map(|&v| dot(n, sub(v, v0)).signum()).collect();
        if side.contains(&1) && side.contains(&-1) {
            audit.violations.push(FaceViolation::NotSupporting { face: i });
        }
    }
    audit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Grid;

    fn example_dirs() -> Vec<Direction3> {
        [[1, 1, 2], [1, -2, 1], [1, 1, -2], [1, 0, 0]]
            .iter()
            .map(|v| Direction3::new(v[0], v[1], v[2]).unwrap())
            .collect()
    }

    const EXAMPLE_T: [[i64; 3]; 16] = [
        [0, 2, 2], [1, 0, 3], [1, 2, 2], [1, 3, 0], [1, 3, 4], [2, 0, 3], [2, 1, 1], [2, 1, 5],
        [2, 3, 0], [2, 3, 4], [2, 4, 2], [3, 1, 1], [3, 1, 5], [3, 2, 3], [3, 4, 2], [4, 2, 3],
    ];

    #[test]
    fn example_hull_vertices() {
        let c = hull3(&Grid::new([5, 5, 6]).unwrap(), &example_dirs());
        let expect: Vec<[i64; 3]> =
            EXAMPLE_T.iter().copied().filter(|x| *x != [1, 2, 2] && *x != [3, 2, 3]).collect();
        assert_eq!(c.vertices(), &expect[..]);
        assert_eq!(c.faces().len(), 12);
        assert!(face_audit(&c, &example_dirs()).passed());
    }

    #[test]
    fn example_shadows() {
        let c = hull3(&Grid::new([5, 5, 6]).unwrap(), &example_dirs());
        let x = project_hull(&c, Axis::X);
        let ext: Vec<[usize; 2]> = x.exterior([5, 6]);
        let expect_x: Vec<[usize; 2]> = vec![
            [0, 0], [0, 1], [0, 2], [0, 4], [0, 5], [1, 0], [2, 0], [2, 5], [3, 5], [4, 0],
            [4, 1], [4, 3], [4, 4], [4, 5],
        ];
        assert_eq!(ext, expect_x);
        let y = project_hull(&c, Axis::Y);
        let expect_y: Vec<[usize; 2]> = vec![
            [0, 0], [0, 1], [0, 3], [0, 4], [0, 5], [1, 5], [3, 0], [4, 0], [4, 1], [4, 2],
            [4, 4], [4, 5],
        ];
        assert_eq!(y.exterior([5, 6]), expect_y);
    }

    #[test]
    fn nonvalid_is_empty() {
        let c = hull3(&Grid::new([4, 5, 6]).unwrap(), &example_dirs());
        assert!(c.is_empty());
        assert!(project_hull(&c, Axis::Z).is_empty());
        assert!(project_hull(&c, Axis::Z).exterior([4, 5]).len() == 20);
    }

    #[test]
    fn unit_cube() {
        let c = zonotope3(
            [0, 0, 0],
            &[
                ([1, 0, 0], GenLabel::Direction(0)),
                ([0, 1, 0], GenLabel::Direction(1)),
                ([0, 0, 1], GenLabel::Direction(2)),
            ],
        );
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.faces().len(), 6);
        let dirs: Vec<Direction3> =
            [[1, 0, 0], [0, 1, 0], [0, 0, 1]].iter().map(|v| Direction3::new(v[0], v[1], v[2]).unwrap()).collect();
        assert!(face_audit(&c, &dirs).passed());
    }

    #[test]
    fn axis_segment_is_merged_with_parallel_direction() {
        // (1,0,0) and the x segment of length 1 merge into one generator
        let c = hull3(&Grid::new([6, 5, 6]).unwrap(), &example_dirs());
        assert_eq!(c.generators().len(), 4);
        assert!(c.generators().iter().any(|g| g.vector == [2, 0, 0]));
        assert!(face_audit(&c, &example_dirs()).passed());
    }

    #[test]
    fn border_fan_fixtures() {
        let f = border_fan(&[[3, -2], [4, -3], [1, -2]]).unwrap();
        assert_eq!(f.border_points(), &[[8, 0], [5, 2], [1, 5], [0, 7]]);
        let f = border_fan(&[[3, -2], [2, -2], [3, -6]]).unwrap();
        assert_eq!(f.border_points(), &[[8, 0], [5, 2], [3, 4], [0, 10]]);
        let f = border_fan(&[[1, -1]]).unwrap();
        assert_eq!(f.border_points(), &[[1, 0], [0, 1]]);
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn border_fan_errors_and_merging() {
        assert_eq!(border_fan(&[[1, -2], [3, -2]]), Err(Error::UnorderedFan { index: 1 }));
        assert_eq!(border_fan(&[[1, 2]]), Err(Error::FanQuadrant { index: 0 }));
        assert_eq!(border_fan(&[[0, -1]]), Err(Error::FanQuadrant { index: 0 }));
        let f = border_fan(&[[1, -2], [2, -4], [1, -3]]).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.segments()[0].members, vec![0, 1]);
        assert_eq!(f.border_points(), &[[4, 0], [1, 6], [0, 9]]);
    }

    #[test]
    fn border_slopes_increase() {
        let f = border_fan(&[[3, -2], [2, -2], [3, -6]]).unwrap();
        let s = f.segments();
        for w in s.windows(2) {
            assert!(w[0].b_abs * w[1].a < w[1].b_abs * w[0].a);
        }
    }
}
