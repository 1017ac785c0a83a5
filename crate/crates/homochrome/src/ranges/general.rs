//! Range enumeration for an arbitrary convex polygon.
//!
//! A homothet is a point `X = (tx, ty, s)`; point `p` lies on the line of
//! side `k` when `N_k · X = n_k · p` with `N_k = (n_k, h_k)`. Every realized
//! subset is realized near some vertex of this plane arrangement, so we sweep
//! the lines where two incidence planes meet, stop at every vertex, and read
//! off the subsets obtained by stepping from the vertex into each cell of the
//! local arrangement.

use std::collections::HashMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::geom::{ConvexShape, Homothet, Point};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub(crate) struct Bits(pub Vec<u64>);

impl Bits {
    pub fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    pub fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    pub fn indices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count());
        for (wi, &w) in self.0.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }
}

type V3 = [Rational; 3];

fn dot3(a: &V3, b: &V3) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn cross3(a: &V3, b: &V3) -> V3 {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

fn add3(a: &V3, b: &V3) -> V3 {
    [&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]]
}

/// How a realized subset was first reached.
#[derive(Clone, Debug)]
pub(crate) enum Witness {
    /// Stepping from the vertex homothet into cell `cell` drops `dropped`.
    Vertex {
        vertex: V3,
        dropped: Vec<usize>,
        cell: usize,
    },
    Singleton(usize),
}

pub(crate) struct Arrangement {
    /// One interior direction per cell of the central arrangement of the
    /// side planes, with the sides on which it is positive.
    pub cells: Vec<(V3, u64)>,
}

impl Arrangement {
    pub fn new(shape: &ConvexShape) -> Self {
        let n = shape.n();
        let normals: Vec<V3> = (0..n)
            .map(|k| {
                let nk = shape.normal(k);
                [nk.x.clone(), nk.y.clone(), shape.offset(k).clone()]
            })
            .collect();
        let mut rays = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let d = cross3(&normals[i], &normals[j]);
                let neg = [-&d[0], -&d[1], -&d[2]];
                rays.push(d);
                rays.push(neg);
            }
        }
        let mut seen: HashMap<u64, V3> = HashMap::new();
        for a in 0..rays.len() {
            for b in a + 1..rays.len() {
                let ab = add3(&rays[a], &rays[b]);
                for c in b + 1..rays.len() {
                    let d = add3(&ab, &rays[c]);
                    let mut pos = 0u64;
                    let mut zero = false;
                    for (k, nk) in normals.iter().enumerate() {
                        match dot3(nk, &d).signum() {
                            0 => zero = true,
                            1 => pos |= 1 << k,
                            _ => {}
                        }
                    }
                    if !zero {
                        seen.entry(pos).or_insert(d);
                    }
                }
            }
        }
        let mut cells: Vec<(V3, u64)> = seen.into_iter().map(|(m, d)| (d, m)).collect();
        cells.sort_by_key(|c| c.1);
        Arrangement { cells }
    }
}

pub(crate) struct Sweep {
    pub ranges: HashMap<Bits, Witness>,
    /// Largest number of points seen on one vertex homothet boundary.
    pub max_boundary: usize,
    /// Bounding box of the witness homothets.
    pub extent: Option<(Point, Point)>,
}

/// Vertex in the integer frame: `num / den` with `den > 0`.
#[derive(Clone)]
struct IVertex {
    num: [BigInt; 3],
    den: BigInt,
}

impl IVertex {
    /// Lexicographic on (s, tx, ty); the frame change scales each
    /// coordinate by a positive constant, so the order is preserved.
    fn less(&self, other: &IVertex) -> bool {
        for c in [2, 0, 1] {
            let l = &self.num[c] * &other.den;
            let r = &other.num[c] * &self.den;
            if l != r {
                return l < r;
            }
        }
        false
    }
}

enum Pending {
    Vertex { vertex: IVertex, dropped: Vec<usize>, cell: usize },
    Singleton(usize),
}

/// Points and shape scaled to integers: `p' = D p` and `P' = L P`. A
/// homothet `(t', s')` of `P'` corresponds to `(t' / D, s' L / D)`.
struct IntFrame {
    d: BigInt,
    l: BigInt,
    normals: Vec<[BigInt; 3]>,
    np: Vec<Vec<BigInt>>,
}

fn lcm_denoms<'a>(it: impl Iterator<Item = &'a Rational>) -> BigInt {
    it.fold(BigInt::one(), |acc, r| acc.lcm(&r.denom()))
}

fn scaled(r: &Rational, by: &BigInt) -> BigInt {
    r.numer() * (by / r.denom())
}

impl IntFrame {
    fn new(points: &[Point], shape: &ConvexShape) -> Self {
        let d = lcm_denoms(points.iter().flat_map(|p| [&p.x, &p.y]));
        let l = lcm_denoms(shape.vertices().iter().flat_map(|v| [&v.x, &v.y]));
        let vs: Vec<[BigInt; 2]> = shape.vertices().iter().map(|v| [scaled(&v.x, &l), scaled(&v.y, &l)]).collect();
        let n = vs.len();
        let normals: Vec<[BigInt; 3]> = (0..n)
            .map(|k| {
                let (a, b) = (&vs[k], &vs[(k + 1) % n]);
                let nx = &a[1] - &b[1];
                let ny = &b[0] - &a[0];
                let h = &nx * &a[0] + &ny * &a[1];
                [nx, ny, h]
            })
            .collect();
        let np = points
            .iter()
            .map(|p| {
                let (x, y) = (scaled(&p.x, &d), scaled(&p.y, &d));
                normals.iter().map(|nk| &nk[0] * &x + &nk[1] * &y).collect()
            })
            .collect();
        IntFrame { d, l, normals, np }
    }

    fn vertex(&self, v: &IVertex) -> V3 {
        let den = &v.den * &self.d;
        [
            Rational::from_bigints(v.num[0].clone(), den.clone()),
            Rational::from_bigints(v.num[1].clone(), den.clone()),
            Rational::from_bigints(&v.num[2] * &self.l, den),
        ]
    }
}

fn icross(a: &[BigInt; 3], b: &[BigInt; 3]) -> [BigInt; 3] {
    [&a[1] * &b[2] - &a[2] * &b[1], &a[2] * &b[0] - &a[0] * &b[2], &a[0] * &b[1] - &a[1] * &b[0]]
}

fn idot(a: &[BigInt; 3], b: &[BigInt; 3]) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

struct Event {
    at: BigInt,
    point: usize,
    enter: bool,
}

/// Enumerates every realizable nonempty subset.
///
/// Along each line the parameter is kept as an integer numerator over a
/// per-line common denominator, so no fraction is ever reduced.
pub(crate) fn sweep(points: &[Point], shape: &ConvexShape, arr: &Arrangement) -> Sweep {
    let n = points.len();
    let ns = shape.n();
    let fr = IntFrame::new(points, shape);
    let (nrm, np) = (&fr.normals, &fr.np);
    let mut pending: HashMap<Bits, Pending> = HashMap::new();
    let mut max_boundary = 0;
    let mut lines: Vec<(usize, usize, usize, usize)> = Vec::new();
    for a in 0..n {
        for i in 0..ns {
            for j in i + 1..ns {
                lines.push((a, i, a, j));
            }
        }
        for b in a + 1..n {
            for i in 0..ns {
                for j in 0..ns {
                    if i != j {
                        lines.push((a, i, b, j));
                    }
                }
            }
        }
    }
    let mut lo = vec![None::<BigInt>; n];
    let mut hi = vec![None::<BigInt>; n];
    // Parameter at which each point meets each side, if it ever does.
    let mut meet: Vec<Vec<Option<BigInt>>> = vec![vec![None; ns]; n];
    let mut empty = vec![false; n];
    let mut always_tight = vec![0u64; n];
    let mut events: Vec<Event> = Vec::with_capacity(2 * n);
    let mut active = Bits::new(n);
    for &(a, i, b, j) in &lines {
        let ni = &nrm[i];
        let nj = &nrm[j];
        let d = icross(ni, nj);
        let (c1, c2) = (&np[a][i], &np[b][j]);
        let m = (0..3).find(|&m| !d[m].is_zero()).expect("distinct sides are independent");
        let (u, v) = match m {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        // X(μ) = (p0 + μ d) / det with X_m = 0 at μ = 0.
        let mut det = &ni[u] * &nj[v] - &ni[v] * &nj[u];
        let mut xu = c1 * &nj[v] - c2 * &ni[v];
        let mut xv = &ni[u] * c2 - &nj[u] * c1;
        if det.is_negative() {
            det = -det;
            xu = -xu;
            xv = -xv;
        }
        let mut p0 = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        p0[u] = xu;
        p0[v] = xv;

        // Side k is satisfied by p iff A + μ B ≤ 0, A = np·det − N·p0, B = −N·d.
        let bk: Vec<BigInt> = nrm.iter().map(|nk| -idot(nk, &d)).collect();
        let ck: Vec<BigInt> = nrm.iter().map(|nk| idot(nk, &p0)).collect();
        let mut den = if d[2].is_zero() { BigInt::one() } else { d[2].abs() };
        for b in bk.iter().filter(|b| !b.is_zero()) {
            den = den.lcm(&b.abs());
        }
        // μ is represented by the numerator over `den`.
        let factor: Vec<BigInt> = bk.iter().map(|b| if b.is_zero() { BigInt::zero() } else { &den / b }).collect();

        // Scale constraint p0.s + μ d.s > 0.
        let (mut lam_lo, mut lam_hi): (Option<(BigInt, bool)>, Option<(BigInt, bool)>) = (None, None);
        match d[2].sign() {
            Sign::NoSign => {
                if !p0[2].is_positive() {
                    continue;
                }
            }
            Sign::Plus => lam_lo = Some((-(&p0[2] * (&den / &d[2])), true)),
            Sign::Minus => lam_hi = Some((-(&p0[2] * (&den / &d[2])), true)),
        }
        for p in 0..n {
            lo[p] = None;
            hi[p] = None;
            empty[p] = false;
            always_tight[p] = 0;
            for k in 0..ns {
                meet[p][k] = None;
                let av = &np[p][k] * &det - &ck[k];
                match bk[k].sign() {
                    Sign::NoSign => match av.sign() {
                        Sign::Plus => empty[p] = true,
                        Sign::NoSign => always_tight[p] |= 1 << k,
                        Sign::Minus => {}
                    },
                    Sign::Plus => {
                        let r = -(&av * &factor[k]);
                        if hi[p].as_ref().is_none_or(|h| &r < h) {
                            hi[p] = Some(r.clone());
                        }
                        meet[p][k] = Some(r);
                    }
                    Sign::Minus => {
                        let r = -(&av * &factor[k]);
                        if lo[p].as_ref().is_none_or(|l| &r > l) {
                            lo[p] = Some(r.clone());
                        }
                        meet[p][k] = Some(r);
                    }
                }
            }
            if let (Some(l), Some(h)) = (&lo[p], &hi[p]) {
                if l > h {
                    empty[p] = true;
                }
            }
        }
        if empty[a] || empty[b] {
            continue;
        }
        // Feasible parameter window; the flag marks an open (s = 0) end.
        for q in [a, b] {
            if let Some(l) = &lo[q] {
                if lam_lo.as_ref().is_none_or(|(x, _)| l >= x) {
                    let open = lam_lo.as_ref().is_some_and(|(x, o)| l == x && *o);
                    lam_lo = Some((l.clone(), open));
                }
            }
            if let Some(h) = &hi[q] {
                if lam_hi.as_ref().is_none_or(|(x, _)| h <= x) {
                    let open = lam_hi.as_ref().is_some_and(|(x, o)| h == x && *o);
                    lam_hi = Some((h.clone(), open));
                }
            }
        }
        if let (Some((l, lo_open)), Some((h, hi_open))) = (&lam_lo, &lam_hi) {
            if l > h || (l == h && (*lo_open || *hi_open)) {
                continue;
            }
        }
        let inside = |x: &BigInt| {
            let ok_lo = lam_lo.as_ref().is_none_or(|(l, open)| if *open { x > l } else { x >= l });
            let ok_hi = lam_hi.as_ref().is_none_or(|(h, open)| if *open { x < h } else { x <= h });
            ok_lo && ok_hi
        };

        events.clear();
        for p in 0..n {
            if empty[p] {
                active.clear(p);
                continue;
            }
            if lo[p].is_none() {
                active.set(p);
            } else {
                active.clear(p);
            }
            if let Some(l) = &lo[p] {
                events.push(Event { at: l.clone(), point: p, enter: true });
            }
            if let Some(h) = &hi[p] {
                events.push(Event { at: h.clone(), point: p, enter: false });
            }
        }
        events.sort_by(|x, y| x.at.cmp(&y.at).then(y.enter.cmp(&x.enter)));
        let tight_line: Vec<usize> = (0..n).filter(|&p| !empty[p] && always_tight[p] != 0).collect();

        let mut e = 0;
        while e < events.len() {
            let mut f = e;
            while f < events.len() && events[f].at == events[e].at {
                f += 1;
            }
            let at = &events[e].at;
            for ev in &events[e..f] {
                if ev.enter {
                    active.set(ev.point);
                }
            }
            if inside(at) {
                let mut boundary: Vec<usize> = events[e..f].iter().map(|ev| ev.point).collect();
                boundary.extend(tight_line.iter().copied().filter(|p| active.get(*p)));
                boundary.sort_unstable();
                boundary.dedup();
                let masks: Vec<u64> = boundary
                    .iter()
                    .map(|&p| {
                        let mut mk = always_tight[p];
                        for k in 0..ns {
                            if meet[p][k].as_ref() == Some(at) {
                                mk |= 1 << k;
                            }
                        }
                        mk
                    })
                    .collect();
                max_boundary = max_boundary.max(boundary.len());
                let vertex = IVertex {
                    num: [&p0[0] * &den + at * &d[0], &p0[1] * &den + at * &d[1], &p0[2] * &den + at * &d[2]],
                    den: &det * &den,
                };
                emit(&mut pending, &active, &boundary, &masks, &vertex, arr);
            }
            for ev in &events[e..f] {
                if !ev.enter {
                    active.clear(ev.point);
                }
            }
            e = f;
        }
    }
    for p in 0..n {
        let mut bits = Bits::new(n);
        bits.set(p);
        pending.insert(bits, Pending::Singleton(p));
    }
    let mut out = Sweep { ranges: HashMap::with_capacity(pending.len()), max_boundary, extent: None };
    for (bits, w) in pending {
        let w = match w {
            Pending::Singleton(p) => Witness::Singleton(p),
            Pending::Vertex { vertex, dropped, cell } => {
                let vertex = fr.vertex(&vertex);
                let h = Homothet {
                    scale: vertex[2].clone(),
                    translation: Point::new(vertex[0].clone(), vertex[1].clone()),
                };
                let (lo, hi) = h.bbox(shape);
                out.extent = Some(match out.extent.take() {
                    None => (lo, hi),
                    Some((a, b)) => {
                        (Point::new(a.x.min(lo.x), a.y.min(lo.y)), Point::new(b.x.max(hi.x), b.y.max(hi.y)))
                    }
                });
                Witness::Vertex { vertex, dropped, cell }
            }
        };
        out.ranges.insert(bits, w);
    }
    out
}

fn emit(
    out: &mut HashMap<Bits, Pending>,
    content: &Bits,
    boundary: &[usize],
    masks: &[u64],
    vertex: &IVertex,
    arr: &Arrangement,
) {
    let mut seen: Vec<u64> = Vec::new();
    for (ci, (_, pos)) in arr.cells.iter().enumerate() {
        let mut drop = 0u64;
        for (bi, m) in masks.iter().enumerate().take(64) {
            if m & !pos != 0 {
                drop |= 1 << bi;
            }
        }
        if seen.contains(&drop) {
            continue;
        }
        seen.push(drop);
        let mut set = content.clone();
        let mut dropped = Vec::new();
        for (bi, &p) in boundary.iter().enumerate().take(64) {
            if drop >> bi & 1 == 1 {
                set.clear(p);
                dropped.push(p);
            }
        }
        if set.count() == 0 {
            continue;
        }
        match out.get_mut(&set) {
            Some(Pending::Vertex { vertex: v, dropped: dz, cell }) => {
                if vertex.less(v) {
                    *v = vertex.clone();
                    *dz = dropped;
                    *cell = ci;
                }
            }
            Some(Pending::Singleton(_)) => {}
            None => {
                out.insert(set, Pending::Vertex { vertex: vertex.clone(), dropped, cell: ci });
            }
        }
    }
}

/// Realizing homothet for a witness.
pub(crate) fn realize(witness: &Witness, points: &[Point], shape: &ConvexShape, arr: &Arrangement) -> Homothet {
    match witness {
        Witness::Singleton(p) => singleton_homothet(*p, points, shape),
        Witness::Vertex { vertex, dropped, cell } => {
            let h =
                Homothet { scale: vertex[2].clone(), translation: Point::new(vertex[0].clone(), vertex[1].clone()) };
            match super::shrink_away(shape, &h, points, dropped) {
                Ok(g) => g,
                Err(_) => step_into_cell(&h, &arr.cells[*cell].0, points, shape),
            }
        }
    }
}

/// Small homothet centred on point `p` containing nothing else.
pub(crate) fn singleton_homothet(p: usize, points: &[Point], shape: &ConvexShape) -> Homothet {
    let c = shape.centroid();
    let mut best: Option<Rational> = None;
    for (q, pt) in points.iter().enumerate() {
        if q == p {
            continue;
        }
        let d = pt.sub(&points[p]);
        let need = (0..shape.n())
            .map(|k| shape.normal(k).dot(&d) / (shape.offset(k) - shape.normal(k).dot(&c)))
            .max()
            .expect("sides");
        if best.as_ref().is_none_or(|b| &need < b) {
            best = Some(need);
        }
    }
    let s = best.map_or(Rational::one(), |b| b * Rational::new(1, 2));
    Homothet { translation: points[p].sub(&c.scale(&s)), scale: s }
}

/// Moves a small step from the vertex homothet `h` along `dir`, far enough to
/// resolve every tight incidence and not far enough to cross another one.
fn step_into_cell(h: &Homothet, dir: &V3, points: &[Point], shape: &ConvexShape) -> Homothet {
    let mut bound: Option<Rational> = None;
    let mut tighten = |b: Rational| {
        if bound.as_ref().is_none_or(|x| &b < x) {
            bound = Some(b);
        }
    };
    for p in points {
        for k in 0..shape.n() {
            let g = shape.slack(h, p, k);
            let nk = shape.normal(k);
            let l = &nk.x * &dir[0] + &nk.y * &dir[1] + shape.offset(k) * &dir[2];
            if g.is_zero() || l.is_zero() {
                continue;
            }
            // g − ε·l must keep its sign.
            if g.signum() == l.signum() {
                tighten(&g / &l);
            }
        }
    }
    if dir[2].is_negative() {
        tighten(-(&h.scale / &dir[2]));
    }
    let mag = dir.iter().map(Rational::abs).max().expect("three entries");
    tighten(&h.scale / &mag);
    let eps = bound.expect("scale bound present") * Rational::new(1, 2);
    Homothet {
        scale: &h.scale + &eps * &dir[2],
        translation: Point::new(&h.translation.x + &eps * &dir[0], &h.translation.y + &eps * &dir[1]),
    }
}
