//! Brute-force range enumeration for squares, independent of the sweep in
//! [`crate::ranges`]. A square is `(L, B, s)`: lower-left corner and side.
//! Every combinatorial cell of the arrangement of the planes `L = x_p`,
//! `L + s = x_p`, `B = y_p`, `B + s = y_p`, `s = 0` has a vertex in its
//! closure, so probing each vertex in a fixed set of infinitesimal directions
//! visits every realizable subset.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::geom::{normalize, ConvexShape, Homothet, Point, ShapeKind};
use crate::ranges::{RangeFamily, RealizedRange};
use crate::rational::Rational;

pub const ORACLE_LIMIT: usize = 10;

type Plane = ([i8; 3], Rational);

/// Probe directions `(dL, dB, ds)`; they meet every cell of the local
/// arrangement around any vertex (checked in the tests).
pub(crate) fn directions() -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for a in [-3, -1, 1, 3] {
        for b in [-3, -1, 1, 3] {
            for c in [-2, 2] {
                out.push([a, b, c]);
            }
        }
    }
    out
}

fn solve(p: [&Plane; 3]) -> Option<[Rational; 3]> {
    let m = |i: usize, j: usize| i64::from(p[i].0[j]);
    let det3 = |c: [[i64; 3]; 3]| {
        c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) - c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0])
            + c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0])
    };
    let rows = [[m(0, 0), m(0, 1), m(0, 2)], [m(1, 0), m(1, 1), m(1, 2)], [m(2, 0), m(2, 1), m(2, 2)]];
    let det = det3(rows);
    if det == 0 {
        return None;
    }
    let d = Rational::from_int(det);
    let mut out: [Rational; 3] = Default::default();
    for (col, slot) in out.iter_mut().enumerate() {
        // Cramer: replace column `col` by the right-hand side.
        let mut acc = Rational::zero();
        for row in 0..3 {
            let mut minor = [[0i64; 2]; 2];
            let mut ri = 0;
            for r in 0..3 {
                if r == row {
                    continue;
                }
                let mut ci = 0;
                for c in 0..3 {
                    if c == col {
                        continue;
                    }
                    minor[ri][ci] = rows[r][c];
                    ci += 1;
                }
                ri += 1;
            }
            let cof = minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0];
            let sign = if (row + col) % 2 == 0 { 1 } else { -1 };
            acc = acc + &p[row].1 * Rational::from_int(sign * cof);
        }
        *slot = acc / &d;
    }
    Some(out)
}

/// `real + eps·ε` compared with `0`, lexicographically.
fn lex_sign(real: &Rational, eps: i64) -> i32 {
    match real.signum() {
        0 => eps.signum() as i32,
        s => s,
    }
}

/// All realizable subsets of `points` for an axis-parallel square or any
/// parallelogram (through its affine normal form).
pub fn brute_force_oracle(points: &[Point], shape: &ConvexShape) -> Result<RangeFamily> {
    if points.len() > ORACLE_LIMIT {
        return Err(Error::TooLarge { got: points.len(), limit: ORACLE_LIMIT });
    }
    if shape.kind() != ShapeKind::Parallelogram {
        return Err(Error::UnsupportedShape("the oracle handles parallelograms only".into()));
    }
    let (map, image) = if shape.is_axis_square() {
        (None, shape.clone())
    } else {
        let (m, s) = normalize(shape)?;
        (Some(m), s)
    };
    let pts: Vec<Point> = match &map {
        Some(m) => points.iter().map(|p| m.apply(p)).collect(),
        None => points.to_vec(),
    };

    let mut planes: Vec<Plane> = vec![([0, 0, 1], Rational::zero())];
    for p in &pts {
        planes.push(([1, 0, 0], p.x.clone()));
        planes.push(([1, 0, 1], p.x.clone()));
        planes.push(([0, 1, 0], p.y.clone()));
        planes.push(([0, 1, 1], p.y.clone()));
    }
    let mut seen = HashSet::new();
    planes.retain(|pl| seen.insert(pl.clone()));

    let dirs = directions();
    let mut found: BTreeMap<Vec<usize>, Homothet> = BTreeMap::new();
    let mut vertices = HashSet::new();
    for i in 0..planes.len() {
        for j in i + 1..planes.len() {
            for k in j + 1..planes.len() {
                let Some(v) = solve([&planes[i], &planes[j], &planes[k]]) else { continue };
                if v[2].is_negative() || !vertices.insert(v.clone()) {
                    continue;
                }
                for d in &dirs {
                    if let Some((set, h)) = probe(&pts, &image, &v, d) {
                        found.entry(set).or_insert(h);
                    }
                }
            }
        }
    }

    let inv = match &map {
        Some(m) => Some(m.inverse()?),
        None => None,
    };
    let ranges = found
        .into_iter()
        .map(|(points, h)| RealizedRange {
            homothet: inv.as_ref().map_or(h.clone(), |m| m.apply_homothet(&h)),
            points,
            determinators: Vec::new(),
        })
        .collect();
    Ok(RangeFamily { ranges, source_point_count: points.len() })
}

fn probe(pts: &[Point], shape: &ConvexShape, v: &[Rational; 3], d: &[i64; 3]) -> Option<(Vec<usize>, Homothet)> {
    let (l, b, s) = (&v[0], &v[1], &v[2]);
    if lex_sign(s, d[2]) <= 0 {
        return None;
    }
    let r = l + s;
    let t = b + s;
    let mut set = Vec::new();
    let mut gap: Option<Rational> = (!s.is_zero()).then(|| s.abs());
    for (i, p) in pts.iter().enumerate() {
        let tests = [(&p.x - l, -d[0]), (&r - &p.x, d[0] + d[2]), (&p.y - b, -d[1]), (&t - &p.y, d[1] + d[2])];
        let mut inside = true;
        for (real, eps) in &tests {
            if !real.is_zero() {
                let g = real.abs();
                gap = Some(gap.map_or(g.clone(), |old| old.min(g)));
            }
            if lex_sign(real, *eps) <= 0 {
                inside = false;
            }
        }
        if inside {
            set.push(i);
        }
    }
    if set.is_empty() {
        return None;
    }
    let eps = gap.unwrap_or(Rational::one()) * Rational::new(1, 16);
    let step = |x: &Rational, k: i64| x + &eps * Rational::from_int(k);
    let corner = Point::new(step(l, d[0]), step(b, d[1]));
    let side = step(s, d[2]);
    let v0 = &shape.vertices()[0];
    let unit = &shape.vertices()[1].y - &v0.y;
    let scale = &side / &unit;
    Some((set, Homothet { translation: corner.sub(&v0.scale(&scale)), scale }))
}
