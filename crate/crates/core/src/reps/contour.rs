use alloc::collections::BTreeMap;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{bail, Result};
use crate::map::Mask;

/// Continuous 2-D point in mask coordinates: pixel `(x, y)` covers
/// `[x, x+1] × [y, y+1]`, so its centre is `(x + 0.5, y + 0.5)`.
pub type Point = [f64; 2];

/// Closed polygon, implicitly joined from the last vertex to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    vertices: Vec<Point>,
}

impl Contour {
    /// Drops repeated vertices and rejects proper self-crossings.
    /// Collinear vertices are kept.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            bail!(InvalidParameter, "contour vertices must be finite");
        }
        let mut v: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if v.last() != Some(&p) {
                v.push(p);
            }
        }
        while v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        if v.len() < 3 {
            bail!(Degenerate, "contour needs at least 3 distinct vertices, got {}", v.len());
        }
        let n = v.len();
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if proper_crossing(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                    bail!(Degenerate, "contour edges {i} and {j} cross");
                }
            }
        }
        Ok(Self { vertices: v })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn signed_area(&self) -> f64 {
        polygon_signed_area(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| dist(a, b)).sum()
    }

    /// Area centroid; vertex mean for zero-area contours.
    pub fn centroid(&self) -> Point {
        let a = self.signed_area();
        if a.abs() < 1e-12 {
            let n = self.vertices.len() as f64;
            let (sx, sy) = self.vertices.iter().fold((0.0, 0.0), |(x, y), p| (x + p[0], y + p[1]));
            return [sx / n, sy / n];
        }
        let (mut cx, mut cy) = (0.0, 0.0);
        for (p, q) in self.edges() {
            let cross = p[0] * q[1] - q[0] * p[1];
            cx += (p[0] + q[0]) * cross;
            cy += (p[1] + q[1]) * cross;
        }
        [cx / (6.0 * a), cy / (6.0 * a)]
    }

    /// Outer crack boundary of the largest 4-connected foreground component.
    pub fn from_mask(mask: &Mask) -> Result<Self> {
        let Some(component) = largest_component(mask) else {
            bail!(Empty, "mask has no foreground pixels");
        };
        Self::new(trace_outer(&component))
    }
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1])).sqrt()
}

pub(crate) fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

pub(crate) fn polygon_signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| {
            let (p, q) = (v[i], v[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}

/// Distance from `p` to the segment `ab`.
pub(crate) fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + t * d[0], a[1] + t * d[1]])
}

fn proper_crossing(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn largest_component(mask: &Mask) -> Option<Mask> {
    let (w, h) = mask.dims();
    let mut label = alloc::vec![usize::MAX; w * h];
    let mut best: Option<(usize, usize)> = None;
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !mask.data()[start] || label[start] != usize::MAX {
            continue;
        }
        let mut size = 0;
        label[start] = next;
        stack.push(start);
        while let Some(i) = stack.pop() {
            size += 1;
            let (x, y) = (i % w, i / w);
            let mut visit = |j: usize| {
                if mask.data()[j] && label[j] == usize::MAX {
                    label[j] = next;
                    stack.push(j);
                }
            };
            if x > 0 {
                visit(i - 1);
            }
            if x + 1 < w {
                visit(i + 1);
            }
            if y > 0 {
                visit(i - w);
            }
            if y + 1 < h {
                visit(i + w);
            }
        }
        if best.is_none_or(|(_, s)| size > s) {
            best = Some((next, size));
        }
        next += 1;
    }
    let (id, _) = best?;
    Some(crate::map::Map::from_fn(w, h, |x, y| label[y * w + x] == id))
}

type Corner = (i64, i64);

/// Follows boundary cracks clockwise on screen (foreground on the right),
/// turning right at diagonal contacts, and merges collinear runs.
fn trace_outer(mask: &Mask) -> Vec<Point> {
    let (w, h) = mask.dims();
    let fg =
        |x: i64, y: i64| x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h && mask.at(x as usize, y as usize);
    let mut out: BTreeMap<Corner, Vec<Corner>> = BTreeMap::new();
    let mut start: Option<(Corner, Corner)> = None;
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            if !fg(x, y) {
                continue;
            }
            let mut edge = |a: Corner, b: Corner| out.entry(a).or_default().push(b);
            if !fg(x, y - 1) {
                edge((x, y), (x + 1, y));
                if start.is_none() {
                    start = Some(((x, y), (x + 1, y)));
                }
            }
            if !fg(x + 1, y) {
                edge((x + 1, y), (x + 1, y + 1));
            }
            if !fg(x, y + 1) {
                edge((x + 1, y + 1), (x, y + 1));
            }
            if !fg(x - 1, y) {
                edge((x, y + 1), (x, y));
            }
        }
    }
    let Some((s0, s1)) = start else { return Vec::new() };
    let mut path = alloc::vec![s0];
    let (mut prev, mut cur) = (s0, s1);
    while cur != s0 {
        path.push(cur);
        let dir = (cur.0 - prev.0, cur.1 - prev.1);
        let cands = &out[&cur];
        let next = if cands.len() == 1 {
            cands[0]
        } else {
            // screen right turn of (dx, dy) is (-dy, dx)
            let right = (cur.0 - dir.1, cur.1 + dir.0);
            *cands.iter().find(|&&c| c == right).unwrap_or(&cands[0])
        };
        prev = cur;
        cur = next;
    }
    let n = path.len();
    (0..n)
        .filter(|&i| {
            let (a, b, c) = (path[(i + n - 1) % n], path[i], path[(i + 1) % n]);
            (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0) != 0
        })
        .map(|i| [path[i].0 as f64, path[i].1 as f64])
        .collect()
}
