//! Good and bad 2-paths and the search for good 3-paths.

use serde::Serialize;

use crate::delaunay::{longest_path, DelaunayGraph, InducedSubgraph};
use crate::error::{Error, Result};
use crate::geom::{ConvexShape, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Goodness {
    Good,
    /// Both edges can leave a separating homothet through this side.
    Bad(usize),
}

/// Verdict for the 2-path `x - y - z`. It depends only on the directions
/// `x − y` and `z − y`: the path is bad through side `j` exactly when both
/// have a positive component along the outward normal of `j`.
pub fn goodness2(shape: &ConvexShape, x: &Point, y: &Point, z: &Point) -> Result<Goodness> {
    let a = x.sub(y);
    let b = z.sub(y);
    if a.is_zero() || b.is_zero() || x == z {
        return Err(Error::Precondition("2-path with coincident points".into()));
    }
    for j in 0..shape.n() {
        let nj = shape.normal(j);
        if nj.dot(&a).is_positive() && nj.dot(&b).is_positive() {
            return Ok(Goodness::Bad(j));
        }
    }
    Ok(Goodness::Good)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodPathCertificate {
    pub vertices: [usize; 4],
    /// For each interior vertex and each side, the signs of the two edge
    /// directions along the side's outward normal; never both positive.
    pub checked_sides: [Vec<(i8, i8)>; 2],
}

fn side_signs(shape: &ConvexShape, x: &Point, y: &Point, z: &Point) -> Vec<(i8, i8)> {
    let a = x.sub(y);
    let b = z.sub(y);
    (0..shape.n())
        .map(|j| {
            let nj = shape.normal(j);
            (nj.dot(&a).signum() as i8, nj.dot(&b).signum() as i8)
        })
        .collect()
}

fn try_path(dt: &DelaunayGraph, shape: &ConvexShape, w: [usize; 4]) -> Result<Option<GoodPathCertificate>> {
    let p = &dt.vertices;
    let [a, b, c, d] = w;
    if goodness2(shape, &p[a], &p[b], &p[c])? != Goodness::Good {
        return Ok(None);
    }
    if goodness2(shape, &p[b], &p[c], &p[d])? != Goodness::Good {
        return Ok(None);
    }
    Ok(Some(GoodPathCertificate {
        vertices: w,
        checked_sides: [side_signs(shape, &p[a], &p[b], &p[c]), side_signs(shape, &p[b], &p[c], &p[d])],
    }))
}

/// Bad 2-paths along a path, as `(index of middle vertex, side)`.
pub fn bad_turns(dt: &DelaunayGraph, shape: &ConvexShape, path: &[usize]) -> Result<Vec<(usize, usize)>> {
    let p = &dt.vertices;
    let mut out = Vec::new();
    for i in 1..path.len().saturating_sub(1) {
        if let Goodness::Bad(j) = goodness2(shape, &p[path[i - 1]], &p[path[i]], &p[path[i + 1]])? {
            out.push((i, j));
        }
    }
    Ok(out)
}

/// A good 3-path in a tree-induced subgraph: windows along a longest path
/// first, then every 3-path of the tree.
pub fn find_good_3path(dt: &DelaunayGraph, sub: &InducedSubgraph, shape: &ConvexShape) -> Result<GoodPathCertificate> {
    let path = longest_path(sub)?;
    for w in path.windows(4) {
        if let Some(c) = try_path(dt, shape, [w[0], w[1], w[2], w[3]])? {
            return Ok(c);
        }
    }
    for &(b, c) in &sub.edges {
        for (b, c) in [(b, c), (c, b)] {
            for &a in sub.neighbors(b) {
                if a == c {
                    continue;
                }
                for &d in sub.neighbors(c) {
                    if d == b {
                        continue;
                    }
                    if let Some(cert) = try_path(dt, shape, [a, b, c, d])? {
                        return Ok(cert);
                    }
                }
            }
        }
    }
    Err(Error::NoGoodPath { size: sub.len() })
}
