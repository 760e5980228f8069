#![allow(dead_code)]

use std::collections::BTreeSet;

use dtomo_core::lattice::{component_sums, normalize_direction};
use dtomo_core::{Grid3, Value};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXAMPLE_DIRS: [[i64; 3]; 4] = [[1, 1, 2], [1, -2, 1], [1, 1, -2], [1, 0, 0]];

pub fn int(v: i64) -> Value {
    Value::from_integer(BigInt::from(v))
}

/// Distinct normalized primitive directions with components in `-c..=c`.
pub fn dirs3(max_d: usize, c: i64) -> impl Strategy<Value = Vec<[i64; 3]>> {
    prop::collection::vec(prop::array::uniform3(-c..=c), 1..=max_d).prop_filter_map("degenerate", |raw| {
        let mut seen = BTreeSet::new();
        let out: Vec<[i64; 3]> = raw
            .into_iter()
            .filter_map(|v| normalize_direction(v).ok().map(|d| d.vector()))
            .filter(|v| seen.insert(*v))
            .collect();
        (!out.is_empty()).then_some(out)
    })
}

/// Directions plus a grid of extents at most `max_ext`; `valid` forces
/// every extent above the component sums.
pub fn instance3(max_d: usize, c: i64, max_ext: usize, valid: bool) -> impl Strategy<Value = (Grid3, Vec<[i64; 3]>)> {
    (dirs3(max_d, c), prop::array::uniform3(0usize..4), prop::array::uniform3(1usize..=max_ext)).prop_filter_map(
        "too large",
        move |(dirs, extra, raw)| {
            let s = component_sums(&dirs);
            let ext = if valid {
                let e = [0, 1, 2].map(|i| s[i] as usize + 1 + extra[i]);
                if e.iter().any(|&x| x > max_ext) {
                    return None;
                }
                e
            } else {
                raw
            };
            Some((Grid3::new(ext).unwrap(), dirs))
        },
    )
}

/// Deterministic pseudo-random integers in `-9..=9`.
pub fn phantom(len: usize, seed: u64) -> Vec<Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| int(rng.gen_range(-9..=9))).collect()
}

fn sub3(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(u: [i64; 3], v: [i64; 3]) -> [i64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn dot3(u: [i64; 3], v: [i64; 3]) -> i64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn orient(a: [i64; 3], b: [i64; 3], c: [i64; 3], p: [i64; 3]) -> i64 {
    dot3(cross3(sub3(b, a), sub3(c, a)), sub3(p, a))
}

/// Strict vertices of the 2D convex hull (monotone chain), sorted.
pub fn hull2_vertices(points: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let mut pts: Vec<[i64; 2]> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: [i64; 2], a: [i64; 2], b: [i64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<[i64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[i64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let mut out: Vec<[i64; 2]> = lower.into_iter().chain(upper).collect();
    out.sort();
    out.dedup();
    out
}

/// Strict vertices of the 3D convex hull of `points`, sorted. Incremental
/// hull over triangles; a hull point is a vertex when the normals of its
/// incident triangles span space.
pub fn hull3_vertices(points: &[[i64; 3]]) -> Vec<[i64; 3]> {
    let mut pts: Vec<[i64; 3]> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }
    let i0 = 0;
    let i1 = 1;
    let Some(i2) = (2..pts.len()).find(|&i| cross3(sub3(pts[i1], pts[i0]), sub3(pts[i], pts[i0])) != [0, 0, 0])
    else {
        // collinear: the two extremes in sorted order
        return vec![pts[0], *pts.last().unwrap()];
    };
    let Some(i3) = (2..pts.len()).find(|&i| orient(pts[i0], pts[i1], pts[i2], pts[i]) != 0) else {
        // coplanar: drop a coordinate along which the plane does not fold
        let n = cross3(sub3(pts[i1], pts[i0]), sub3(pts[i2], pts[i0]));
        let drop = (0..3).find(|&i| n[i] != 0).unwrap();
        let keep: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
        let flat: Vec<[i64; 2]> = pts.iter().map(|p| [p[keep[0]], p[keep[1]]]).collect();
        let v2: BTreeSet<[i64; 2]> = hull2_vertices(&flat).into_iter().collect();
        let mut out: Vec<[i64; 3]> = pts.iter().copied().filter(|p| v2.contains(&[p[keep[0]], p[keep[1]]])).collect();
        out.sort();
        return out;
    };
    let mut faces: Vec<[usize; 3]> = Vec::new();
    let simplex = [i0, i1, i2, i3];
    for skip in 0..4 {
        let f: Vec<usize> = simplex.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &i)| i).collect();
        let other = simplex[skip];
        let mut t = [f[0], f[1], f[2]];
        if orient(pts[t[0]], pts[t[1]], pts[t[2]], pts[other]) > 0 {
            t.swap(1, 2);
        }
        faces.push(t);
    }
    for p in 0..pts.len() {
        if simplex.contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|t| orient(pts[t[0]], pts[t[1]], pts[t[2]], pts[p]) > 0).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges = BTreeSet::new();
        for (t, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for k in 0..3 {
                edges.insert((t[k], t[(k + 1) % 3]));
            }
        }
        let horizon: Vec<(usize, usize)> = edges.iter().copied().filter(|&(a, b)| !edges.contains(&(b, a))).collect();
        faces = faces.into_iter().zip(visible).filter(|(_, v)| !v).map(|(t, _)| t).collect();
        for (a, b) in horizon {
            faces.push([a, b, p]);
        }
    }
    let mut normals: Vec<Vec<[i64; 3]>> = vec![Vec::new(); pts.len()];
    for t in &faces {
        let n = cross3(sub3(pts[t[1]], pts[t[0]]), sub3(pts[t[2]], pts[t[0]]));
        for &i in t {
            normals[i].push(n);
        }
    }
    let mut out = Vec::new();
    for (i, ns) in normals.iter().enumerate() {
        let full = ns.iter().any(|a| {
            ns.iter().any(|b| {
                let c = cross3(*a, *b);
                c != [0, 0, 0] && ns.iter().any(|d| dot3(c, *d) != 0)
            })
        });
        if full {
            out.push(pts[i]);
        }
    }
    out.sort();
    out
}
