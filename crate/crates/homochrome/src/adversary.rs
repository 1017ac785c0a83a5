//! Point sets on which a polygon other than a triangle or a parallelogram has
//! a heavy homothet whose Delaunay graph is a path without good 3-paths.
//!
//! Everything is built in a frame where the chosen side `uv` runs from
//! `(0,0)` to `(1,0)` with the polygon above it, then mapped back.

use serde::Serialize;

use crate::coloring::{bad_turns, find_good_3path};
use crate::delaunay::{build_dt, condition, floor_pow2, induce_set};
use crate::error::{Error, Result};
use crate::geom::{AffineMap, Containment, ConvexShape, Homothet, Point, ShapeKind};
use crate::rational::Rational;

/// Limit on the halvings of the anchor distance in one step.
pub const MAX_STEP_HALVINGS: i32 = 256;

#[derive(Clone, Debug, Serialize)]
pub struct AdversaryChecks {
    pub seed: u64,
    /// Induced graph of the polygon's points is the path `p_1 … p_c`.
    pub path: bool,
    pub outer_edges: bool,
    /// Path positions (0-based) of the bad 2-paths, all through `bad_side`.
    pub bad_middles: Vec<usize>,
    pub bad_side: [Point; 2],
    pub nested_order: bool,
    pub no_good_3path: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdversarialInstance {
    pub polygon: Vec<Point>,
    pub c: usize,
    pub path_points: Vec<Point>,
    pub outer_points: Vec<Point>,
    /// The nested homothets `P_1 … P_c`.
    pub homothets: Vec<Homothet>,
    /// Offset unit of the outer points, in the construction frame.
    pub epsilon: Rational,
    /// Input coordinates to construction frame.
    pub frame: AffineMap,
    pub checks: AdversaryChecks,
}

impl AdversarialInstance {
    /// Path points first, then the outer points.
    pub fn points(&self) -> Vec<Point> {
        self.path_points.iter().chain(&self.outer_points).cloned().collect()
    }
}

struct Roles {
    u: usize,
    v: usize,
    y: usize,
    z: usize,
    x: usize,
    y0: Point,
}

fn frame_map(u: &Point, v: &Point) -> AffineMap {
    let d = v.sub(u);
    let l = d.dot(&d);
    let a = &d.x / &l;
    let b = &d.y / &l;
    let c = -(&d.y / &l);
    let dd = &d.x / &l;
    let e = -(&a * &u.x + &b * &u.y);
    let f = -(&c * &u.x + &dd * &u.y);
    AffineMap { a, b, c, d: dd, e, f }
}

fn mirror() -> AffineMap {
    AffineMap {
        a: Rational::from_int(-1),
        b: Rational::zero(),
        c: Rational::zero(),
        d: Rational::one(),
        e: Rational::one(),
        f: Rational::zero(),
    }
}

fn pick_side(shape: &ConvexShape) -> Result<usize> {
    let n = shape.n();
    let dir = |k: usize| {
        let (a, b) = shape.side(k);
        b.sub(a)
    };
    let candidates: Vec<usize> = if n == 4 {
        (0..4).filter(|&k| (0..4).all(|j| j == k || !dir(j).cross(&dir(k)).is_zero())).collect()
    } else {
        (0..n).collect()
    };
    // Prefer a side that is already the horizontal bottom.
    candidates
        .iter()
        .copied()
        .find(|&k| dir(k).y.is_zero() && dir(k).x.is_negative())
        .or_else(|| candidates.first().copied())
        .ok_or_else(|| Error::Invariant("no side is free of parallels".into()))
}

fn roles(pf: &ConvexShape) -> Option<Roles> {
    let vs = pf.vertices();
    let n = vs.len();
    let find = |p: &Point| vs.iter().position(|q| q == p).expect("frame vertex");
    let u = find(&Point::ints(0, 0));
    let v = find(&Point::ints(1, 0));
    let top = vs.iter().map(|p| p.y.clone()).max().expect("vertices");
    let highest: Vec<usize> = (0..n).filter(|&i| vs[i].y == top).collect();
    let y = *highest.iter().min_by(|&&a, &&b| vs[a].x.cmp(&vs[b].x)).expect("top");
    let z = *highest.iter().max_by(|&&a, &&b| vs[a].x.cmp(&vs[b].x)).expect("top");
    let x = (z + 1) % n;
    if x == v {
        return None;
    }
    let xp = &vs[x];
    let mut k = u;
    while k != y {
        let (a, b) = (&vs[k], &vs[(k + 1) % n]);
        if a.y <= xp.y && xp.y <= b.y {
            let t = (&xp.y - &a.y) / (&b.y - &a.y);
            return Some(Roles { u, v, y, z, x, y0: a.lerp(b, &t) });
        }
        k = (k + 1) % n;
    }
    None
}

struct Frame<'a> {
    pf: &'a ConvexShape,
    r: &'a Roles,
    /// Side `x⁻x`, side `xx⁺`.
    sm: usize,
    sp: usize,
}

impl Frame<'_> {
    fn vertex(&self, i: usize) -> &Point {
        &self.pf.vertices()[i]
    }

    /// Largest homothet `s·(P − anchor) + at` inside `P`, with its binding
    /// sides.
    fn fit(&self, anchor: &Point, at: &Point) -> (Rational, Vec<usize>) {
        let mut best: Option<Rational> = None;
        let mut binding = Vec::new();
        for k in 0..self.pf.n() {
            let nk = self.pf.normal(k);
            let denom = self.pf.offset(k) - &nk.dot(anchor);
            if !denom.is_positive() {
                continue;
            }
            let r = (self.pf.offset(k) - &nk.dot(at)) / denom;
            match &best {
                Some(b) if &r > b => {}
                Some(b) if &r == b => binding.push(k),
                _ => {
                    best = Some(r);
                    binding = vec![k];
                }
            }
        }
        (best.expect("some side avoids the anchor"), binding)
    }

    /// A homothet with the side homothetic to `uv` (up) or the top `yz`
    /// (down) inside the open segment from `lo` to `x`, touching only the
    /// side `x⁻x` (up) or `xx⁺` (down).
    fn step(&self, lo: &Point, up: bool) -> Result<Homothet> {
        let x = self.vertex(self.r.x);
        let span = &x.x - &lo.x;
        let unit = floor_pow2(&span);
        let (anchor, want, width) = if up {
            (self.vertex(self.r.u), self.sm, &self.vertex(self.r.v).x - &self.vertex(self.r.u).x)
        } else {
            (self.vertex(self.r.y), self.sp, &self.vertex(self.r.z).x - &self.vertex(self.r.y).x)
        };
        for j in 1..=MAX_STEP_HALVINGS {
            let t = &unit * &Rational::pow2(-j);
            let at = Point::new(&x.x - &t, x.y.clone());
            let (s, binding) = self.fit(anchor, &at);
            if binding != [want] || &s * &width >= t {
                continue;
            }
            let translation = at.sub(&anchor.scale(&s));
            return Ok(Homothet { scale: s, translation });
        }
        Err(Error::Invariant("no nested homothet found near x".into()))
    }
}

fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    b.sub(a).cross(&p.sub(a)).is_zero() && p.sub(a).dot(&p.sub(b)) <= Rational::zero()
}

fn linf_unit(n: &Point) -> Point {
    let m = n.x.abs().max(n.y.abs());
    n.scale(&m.recip())
}

/// Builds the instance for `c` path points (`c` a positive multiple of 4).
pub fn build_adversarial(polygon: &ConvexShape, c: usize, seed: u64) -> Result<AdversarialInstance> {
    if polygon.kind() != ShapeKind::General {
        return Err(Error::UnsupportedShape("triangles and parallelograms are universally good".into()));
    }
    if c == 0 || !c.is_multiple_of(4) {
        return Err(Error::Precondition(format!("c must be a positive multiple of 4, got {c}")));
    }
    let k = pick_side(polygon)?;
    let (v, u) = polygon.side(k);
    let mut map = frame_map(u, v);
    let mut pf = ConvexShape::new(polygon.vertices().iter().map(|p| map.apply(p)).collect(), false)?;
    let r = match roles(&pf) {
        Some(r) => r,
        None => {
            map = mirror().compose(&map);
            pf = ConvexShape::new(polygon.vertices().iter().map(|p| map.apply(p)).collect(), false)?;
            roles(&pf).ok_or_else(|| Error::Invariant("no vertex off the top and bottom sides".into()))?
        }
    };
    let n = pf.n();
    let fr = Frame { pf: &pf, r: &r, sm: (r.x + n - 1) % n, sp: r.x };
    let vert = |h: &Homothet, i: usize| h.vertex(&pf, i);

    let mut hs: Vec<Homothet> = Vec::with_capacity(c);
    hs.push(fr.step(&r.y0, true)?);
    for i in 1..c {
        let prev = &hs[i - 1];
        // 1-based index i is odd when the last homothet points up.
        let next = if i % 2 == 1 { fr.step(&vert(prev, r.v), false)? } else { fr.step(&vert(prev, r.z), true)? };
        hs.push(next);
    }

    // Exact checks on the homothets.
    let (xm, x, xp) =
        (fr.vertex(r.x.wrapping_add(n - 1) % n).clone(), fr.vertex(r.x).clone(), fr.vertex((r.x + 1) % n).clone());
    let mut nested = true;
    for (i, h) in hs.iter().enumerate() {
        nested &= h.vertices(&pf).iter().all(|p| pf.containment(&Homothet::identity(), p) != Containment::Outside);
        if i % 2 == 0 {
            nested &= on_segment(&vert(h, (r.x + n - 1) % n), &xm, &x) && on_segment(&vert(h, r.x), &xm, &x);
        } else {
            nested &= on_segment(&vert(h, r.x), &x, &xp) && on_segment(&vert(h, (r.x + 1) % n), &x, &xp);
        }
        for later in hs.iter().skip(i + 2).step_by(2) {
            let corner = if i % 2 == 0 { vert(h, (r.x + n - 1) % n) } else { vert(h, (r.x + 1) % n) };
            nested &= pf.containment(later, &corner) == Containment::Outside;
        }
    }
    let along = |p: &Point, a: &Point, b: &Point| p.sub(a).dot(&b.sub(a));
    for parity in 0..2 {
        let ts: Vec<Rational> = hs
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == parity)
            .map(|(_, h)| {
                if parity == 0 {
                    along(&vert(h, (r.x + n - 1) % n), &x, &xm)
                } else {
                    along(&vert(h, (r.x + 1) % n), &x, &xp)
                }
            })
            .collect();
        nested &= ts.windows(2).all(|w| w[0] > w[1]) || ts.windows(2).all(|w| w[0] < w[1]);
    }

    // Offsets from the smallest gap between construction vertices.
    let mut corners: Vec<Point> = pf.vertices().to_vec();
    for h in &hs {
        corners.extend(h.vertices(&pf));
    }
    let mut gap: Option<Rational> = None;
    for i in 0..corners.len() {
        for j in i + 1..corners.len() {
            let d = corners[i].linf(&corners[j]);
            if d.is_positive() && gap.as_ref().is_none_or(|g| &d < g) {
                gap = Some(d);
            }
        }
    }
    let eps = floor_pow2(&gap.expect("several vertices")) * Rational::pow2(-16);
    let nudge = &eps * &Rational::pow2(-2);
    let nm = linf_unit(pf.normal(fr.sm));
    let np = linf_unit(pf.normal(fr.sp));
    let mut pts_frame = Vec::with_capacity(2 * c);
    for (i, h) in hs.iter().enumerate() {
        let p = if i % 2 == 0 {
            let a = vert(h, r.u);
            Point::new(a.x, &a.y - &nudge)
        } else {
            let a = vert(h, r.y);
            Point::new(a.x, &a.y + &nudge)
        };
        pts_frame.push(p);
    }
    for (i, h) in hs.iter().enumerate() {
        let dist = &eps * &Rational::from_int(i as i64 + 1);
        let q = if i % 2 == 0 {
            vert(h, (r.x + n - 1) % n).add(&nm.scale(&dist))
        } else {
            vert(h, (r.x + 1) % n).add(&np.scale(&dist))
        };
        pts_frame.push(q);
    }

    // Snap to a dyadic grid far below every offset, then go back to the
    // input frame, where the Delaunay structure is checked.
    let back = map.inverse()?;
    let rho = &eps * &Rational::pow2(-6);
    let snap = |r: &Rational| Rational::from_bigints((r / &rho).floor(), 1.into()) * &rho;
    let pts: Vec<Point> = pts_frame.iter().map(|p| back.apply(&Point::new(snap(&p.x), snap(&p.y)))).collect();
    let closed = polygon.clone().with_open(false);
    let cond = condition(&pts, &closed, seed)?;
    let dt = build_dt(&cond, &closed)?;
    let path: Vec<usize> = (0..c).collect();
    let sub = induce_set(&dt, &path);
    let want: Vec<(usize, usize)> = (0..c - 1).map(|i| (i, i + 1)).collect();
    let is_path = sub.edges == want;
    let outer_edges = (0..c).all(|i| dt.has_edge(i, c + i));
    let bad = bad_turns(&dt, &closed, &path)?;
    let bad_ok = (1..c - 1).all(|i| i % 2 == 0 || bad.iter().any(|&(m, s)| m == i && s == k));
    let no_good = match find_good_3path(&dt, &sub, &closed) {
        Err(Error::NoGoodPath { .. }) => true,
        Ok(_) => false,
        Err(e) => return Err(e),
    };
    if !(nested && is_path && outer_edges && bad_ok && no_good) {
        return Err(Error::Invariant(format!(
            "adversarial instance failed its checks (nested {nested}, path {is_path}, outer edges {outer_edges}, bad turns {bad_ok}, no good 3-path {no_good})"
        )));
    }

    let (sv, su) = polygon.side(k);
    Ok(AdversarialInstance {
        polygon: polygon.vertices().to_vec(),
        c,
        path_points: pts[..c].to_vec(),
        outer_points: pts[c..].to_vec(),
        homothets: hs.iter().map(|h| back.apply_homothet(h)).collect(),
        epsilon: eps,
        frame: map,
        checks: AdversaryChecks {
            seed,
            path: is_path,
            outer_edges,
            bad_middles: bad.iter().map(|&(m, _)| m).collect(),
            bad_side: [sv.clone(), su.clone()],
            nested_order: nested,
            no_good_3path: no_good,
        },
    })
}
