//! The generalized Delaunay graph: two points are adjacent when some
//! homothet contains exactly those two points.

mod condition;

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{orient, Containment, ConvexShape, Homothet, Point};

pub(crate) use condition::floor_pow2;
pub use condition::{condition, pairwise_general, ConditionedSet, MAX_HALVINGS};

#[derive(Clone, Debug, Serialize)]
pub struct DelaunayGraph {
    /// Perturbed points followed by the hull vertices.
    pub vertices: Vec<Point>,
    /// Number of leading vertices that come from the input set.
    pub original_count: usize,
    /// Sorted `(a, b)` pairs with `a < b`.
    pub edges: Vec<(usize, usize)>,
    /// Neighbours of each vertex in clockwise order, starting from east.
    pub rotation: Vec<Vec<usize>>,
    /// Inner faces, counter-clockwise.
    pub inner_faces: Vec<[usize; 3]>,
    /// Outer boundary, clockwise.
    pub outer: Vec<usize>,
}

/// Clockwise order of directions, starting at east.
fn cw_cmp(a: &Point, b: &Point) -> Ordering {
    let half = |d: &Point| u8::from(!(d.y.is_negative() || (d.y.is_zero() && d.x.is_positive())));
    half(a).cmp(&half(b)).then_with(|| match a.cross(b).signum() {
        -1 => Ordering::Less,
        1 => Ordering::Greater,
        _ => Ordering::Equal,
    })
}

fn segments_touch(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    let on = |p: &Point, q: &Point, r: &Point| {
        orient(p, q, r) == 0
            && r.x >= p.x.clone().min(q.x.clone())
            && r.x <= p.x.clone().max(q.x.clone())
            && r.y >= p.y.clone().min(q.y.clone())
            && r.y <= p.y.clone().max(q.y.clone())
    };
    on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b)
}

impl DelaunayGraph {
    /// Assembles the graph from its edge list and checks that the straight
    /// line drawing is a triangulation whose outer face is `outer_cycle`.
    pub fn from_edges(
        vertices: Vec<Point>,
        original_count: usize,
        mut edges: Vec<(usize, usize)>,
        outer_cycle: Option<&[usize]>,
    ) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let nv = vertices.len();
        let mut rotation = vec![Vec::new(); nv];
        for &(a, b) in &edges {
            rotation[a].push(b);
            rotation[b].push(a);
        }
        for (v, nb) in rotation.iter_mut().enumerate() {
            let c = &vertices[v];
            nb.sort_by(|&a, &b| cw_cmp(&vertices[a].sub(c), &vertices[b].sub(c)));
        }
        let mut g =
            DelaunayGraph { vertices, original_count, edges, rotation, inner_faces: Vec::new(), outer: Vec::new() };
        g.check_planar()?;
        g.trace_faces(outer_cycle)?;
        Ok(g)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rotation[a].contains(&b)
    }

    fn check_planar(&self) -> Result<()> {
        let e = &self.edges;
        let boxes: Vec<(Point, Point)> = e
            .iter()
            .map(|&(a, b)| {
                let (p, q) = (&self.vertices[a], &self.vertices[b]);
                (
                    Point::new(p.x.clone().min(q.x.clone()), p.y.clone().min(q.y.clone())),
                    Point::new(p.x.clone().max(q.x.clone()), p.y.clone().max(q.y.clone())),
                )
            })
            .collect();
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                let (a, b) = e[i];
                let (c, d) = e[j];
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                let (l1, h1) = &boxes[i];
                let (l2, h2) = &boxes[j];
                if h1.x < l2.x || h2.x < l1.x || h1.y < l2.y || h2.y < l1.y {
                    continue;
                }
                let v = &self.vertices;
                if segments_touch(&v[a], &v[b], &v[c], &v[d]) {
                    return Err(Error::Invariant(format!("edges {a}-{b} and {c}-{d} cross")));
                }
            }
        }
        Ok(())
    }

    fn trace_faces(&mut self, outer_cycle: Option<&[usize]>) -> Result<()> {
        let nv = self.vertices.len();
        if nv < 3 {
            if self.edges.len() + 1 != nv {
                return Err(Error::Invariant("graph is not connected".into()));
            }
            self.outer = (0..nv).collect();
            return Ok(());
        }
        let mut seen: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        for &(a, b) in &self.edges {
            seen.insert((a, b), false);
            seen.insert((b, a), false);
        }
        let mut faces: Vec<Vec<usize>> = Vec::new();
        let darts: Vec<(usize, usize)> = seen.keys().copied().collect();
        for start in darts {
            if seen[&start] {
                continue;
            }
            let mut face = Vec::new();
            let (mut u, mut v) = start;
            loop {
                *seen.get_mut(&(u, v)).expect("dart") = true;
                face.push(u);
                let rot = &self.rotation[v];
                let pos = rot.iter().position(|&w| w == u).expect("symmetric adjacency");
                let w = rot[(pos + 1) % rot.len()];
                u = v;
                v = w;
                if (u, v) == start {
                    break;
                }
            }
            faces.push(face);
        }
        if !self.connected() {
            return Err(Error::Invariant("graph is not connected".into()));
        }
        if nv as i64 - self.edges.len() as i64 + faces.len() as i64 != 2 {
            return Err(Error::Invariant("Euler characteristic is not 2".into()));
        }
        let area = |f: &[usize]| {
            let mut a = crate::rational::Rational::zero();
            for i in 0..f.len() {
                a = a + self.vertices[f[i]].cross(&self.vertices[f[(i + 1) % f.len()]]);
            }
            a.signum()
        };
        let mut outer = None;
        for f in faces {
            if area(&f) < 0 {
                if outer.is_some() {
                    return Err(Error::Invariant("more than one outer face".into()));
                }
                outer = Some(f);
            } else if f.len() != 3 {
                return Err(Error::Invariant(format!("inner face of length {}", f.len())));
            } else {
                self.inner_faces.push([f[0], f[1], f[2]]);
            }
        }
        let outer = outer.ok_or_else(|| Error::Invariant("no outer face".into()))?;
        if let Some(want) = outer_cycle {
            let ok = outer.len() == want.len()
                && (0..want.len()).any(|r| (0..want.len()).all(|i| outer[(i + r) % outer.len()] == want[i]));
            if !ok {
                return Err(Error::Invariant(format!("outer face {outer:?} is not the hull {want:?}")));
            }
        }
        for f in &mut self.inner_faces {
            let m = (0..3).min_by_key(|&i| f[i]).expect("three");
            f.rotate_left(m);
        }
        self.inner_faces.sort_unstable();
        self.outer = outer;
        Ok(())
    }

    fn connected(&self) -> bool {
        let nv = self.vertices.len();
        if nv == 0 {
            return true;
        }
        let mut seen = vec![false; nv];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.rotation[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == nv
    }
}

/// Delaunay graph of the conditioned set and its hull, with every structural
/// invariant checked.
pub fn build_dt(conditioned: &ConditionedSet, _shape: &ConvexShape) -> Result<DelaunayGraph> {
    let n = conditioned.perturbed.len();
    let hull: Vec<usize> = (n..n + conditioned.hull.len()).collect();
    DelaunayGraph::from_edges(conditioned.all_points(), n, conditioned.pairs.clone(), Some(&hull))
}

/// The subgraph induced by a set of vertices.
#[derive(Clone, Debug, Serialize)]
pub struct InducedSubgraph {
    pub homothet: Option<Homothet>,
    /// Sorted host indices.
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Host rotation restricted to the subgraph.
    pub rotation: BTreeMap<usize, Vec<usize>>,
}

impl InducedSubgraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.rotation.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertices.len() && self.connected()
    }

    pub fn connected(&self) -> bool {
        let Some(&first) = self.vertices.first() else { return true };
        self.farthest(first).1.len() == self.vertices.len()
    }

    /// BFS from `s`: the last vertex reached, the visit order and parents.
    fn farthest(&self, s: usize) -> (usize, Vec<usize>, BTreeMap<usize, usize>) {
        let mut parent = BTreeMap::new();
        let mut order = vec![s];
        parent.insert(s, s);
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            for &w in self.neighbors(v) {
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(w) {
                    e.insert(v);
                    order.push(w);
                }
            }
            i += 1;
        }
        (*order.last().expect("nonempty"), order, parent)
    }
}

/// Subgraph induced by the given host vertices.
pub fn induce_set(dt: &DelaunayGraph, members: &[usize]) -> InducedSubgraph {
    let mut vertices = members.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    let inside = |v: usize| vertices.binary_search(&v).is_ok();
    let edges: Vec<(usize, usize)> = dt.edges.iter().copied().filter(|&(a, b)| inside(a) && inside(b)).collect();
    let rotation =
        vertices.iter().map(|&v| (v, dt.rotation[v].iter().copied().filter(|&w| inside(w)).collect())).collect();
    InducedSubgraph { homothet: None, vertices, edges, rotation }
}

/// Subgraph induced by the vertices in the closed homothet; it must be
/// connected.
pub fn induce(dt: &DelaunayGraph, shape: &ConvexShape, h: &Homothet) -> Result<InducedSubgraph> {
    let members: Vec<usize> =
        (0..dt.vertices.len()).filter(|&v| shape.containment(h, &dt.vertices[v]) != Containment::Outside).collect();
    let mut sub = induce_set(dt, &members);
    sub.homothet = Some(h.clone());
    if !sub.connected() {
        return Err(Error::Invariant("induced subgraph is not connected".into()));
    }
    Ok(sub)
}

/// A host neighbour `y` of `v` strictly inside the angle `x v z` (which must
/// be below π, with `xz` not a host edge). When `x` and `z` are consecutive
/// around `v` in `sub`, `y` lies outside the subgraph's vertex set.
pub fn gap_neighbor(dt: &DelaunayGraph, sub: &InducedSubgraph, v: usize, x: usize, z: usize) -> Result<usize> {
    let nb = sub.neighbors(v);
    if !nb.contains(&x) || !nb.contains(&z) || x == z {
        return Err(Error::Precondition(format!("{x} and {z} must be distinct neighbours of {v}")));
    }
    if dt.has_edge(x, z) {
        return Err(Error::Precondition(format!("{x}-{z} is an edge")));
    }
    let p = &dt.vertices;
    let (a, b) = match orient(&p[v], &p[x], &p[z]) {
        -1 => (x, z),
        1 => (z, x),
        _ => return Err(Error::Precondition("the angle is not below π".into())),
    };
    let rot = &dt.rotation[v];
    let start = rot.iter().position(|&w| w == a).expect("host neighbour");
    let y = rot[(start + 1) % rot.len()];
    if y == b {
        return Err(Error::Invariant(format!("no edge between {v}-{a} and {v}-{b}")));
    }
    Ok(y)
}

/// A longest simple path of a tree, by two farthest-vertex sweeps.
pub fn longest_path(sub: &InducedSubgraph) -> Result<Vec<usize>> {
    if !sub.is_tree() {
        return Err(Error::Precondition("subgraph is not a tree".into()));
    }
    let Some(&first) = sub.vertices.first() else { return Ok(Vec::new()) };
    let (a, _, _) = sub.farthest(first);
    let (b, _, parent) = sub.farthest(a);
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = parent[&cur];
        path.push(cur);
    }
    Ok(path)
}
