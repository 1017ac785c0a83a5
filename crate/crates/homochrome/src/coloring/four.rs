//! Proper 4-colouring of planar graphs by backjumping search over a
//! smallest-last vertex order.

use crate::delaunay::DelaunayGraph;
use crate::error::{Error, Result};

pub const FOUR_COLOR_BUDGET: u64 = 100_000_000;

/// Vertices in smallest-last order: repeatedly remove a vertex of minimum
/// remaining degree (lowest index on ties) and colour in reverse.
fn smallest_last(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (deg[v], v)).expect("vertex left");
        removed[v] = true;
        for &w in &adj[v] {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
        out.push(v);
    }
    out.reverse();
    out
}

/// Colours in `1..=4`, proper on every edge of `adj`.
pub fn four_color_adj(adj: &[Vec<usize>], budget: u64) -> Result<Vec<u8>> {
    let n = adj.len();
    let order = smallest_last(adj);
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let earlier: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut e: Vec<usize> = adj[v].iter().map(|&w| pos[w]).filter(|&j| j < i).collect();
            e.sort_unstable();
            e
        })
        .collect();

    let mut color = vec![0u8; n];
    let mut conflicts: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut steps = 0u64;
    let mut i = 0usize;
    while i < n {
        let mut placed = false;
        let mut c = color[i];
        while c < 4 {
            c += 1;
            steps += 1;
            if steps > budget {
                return Err(Error::Budget(budget));
            }
            match earlier[i].iter().find(|&&j| color[j] == c) {
                Some(&j) => {
                    if !conflicts[i].contains(&j) {
                        conflicts[i].push(j);
                    }
                }
                None => {
                    placed = true;
                    break;
                }
            }
        }
        if placed {
            color[i] = c;
            i += 1;
            if i < n {
                color[i] = 0;
                conflicts[i].clear();
            }
            continue;
        }
        // Jump back to the latest assignment involved in a conflict.
        let Some(&h) = conflicts[i].iter().max() else {
            return Err(Error::Invariant("graph is not 4-colourable".into()));
        };
        let carry: Vec<usize> = conflicts[i].iter().copied().filter(|&j| j != h).collect();
        for j in carry {
            if !conflicts[h].contains(&j) {
                conflicts[h].push(j);
            }
        }
        for k in h + 1..=i {
            color[k] = 0;
            conflicts[k].clear();
        }
        i = h;
    }
    let mut out = vec![0u8; n];
    for (i, &v) in order.iter().enumerate() {
        out[v] = color[i];
    }
    Ok(out)
}

/// Deterministic proper 4-colouring of the Delaunay graph.
pub fn four_color(dt: &DelaunayGraph) -> Result<Vec<u8>> {
    four_color_adj(&dt.rotation, FOUR_COLOR_BUDGET)
}
