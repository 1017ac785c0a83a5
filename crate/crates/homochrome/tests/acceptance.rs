//! Acceptance run: one line per criterion, then a nonzero exit if any failed.

use std::collections::{BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use homochrome::adversary::build_adversarial;
use homochrome::coloring::{bad_turns, find_good_3path, goodness2, k_color, k_threshold, two_color, Color, Goodness};
use homochrome::delaunay::{build_dt, condition, induce_set, longest_path, DelaunayGraph};
use homochrome::geom::{normalize, orient, quadrant, Quadrant};
use homochrome::oracle::brute_force_oracle;
use homochrome::ranges::{enumerate_ranges, scan, ScanOptions};
use homochrome::selfcover::cover_square;
use homochrome::verify::{scan_universal_goodness, verify, verify_polychromatic};
use homochrome::{gen, ConvexShape, Homothet, Point, Rational};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const ORACLE_SETS: u64 = 50;
const ORACLE_SIZE: usize = 8;
const ORACLE_LIMIT: Duration = Duration::from_secs(10);
const DT_INSTANCES: u64 = 100;
const DT_MAX_SQUARE: usize = 60;
const DT_MAX_TRIANGLE: usize = 40;
const EDGE_SPLIT_MAX: usize = 30;
const STRUCTURE_SEEDS: u64 = 100;
const CLUSTER_INSTANCES: u64 = 20;
const CLUSTER_SIZE: usize = 300;
const SQUARE_THRESHOLD: u64 = 215;
const CLUSTER_LIMIT: Duration = Duration::from_secs(300);
const COVER_INSTANCES: u64 = 100;
const COVER_MAX_POINTS: usize = 12;
const K: u32 = 4;
const K_THRESHOLD: u64 = 92_450;
const K_INSTANCES: u64 = 3;
const ADVERSARY_C: usize = 24;
const ADVERSARY_LIMIT: Duration = Duration::from_secs(60);

struct Outcome {
    pass: bool,
    detail: String,
}

/// JSON of everything a criterion produced, in run order.
type Digest = Vec<String>;

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail }
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        Outcome { pass: false, detail: format!("{detail}; {} failures: {}", failures.len(), shown.join(" | ")) }
    }
}

fn scalene() -> ConvexShape {
    ConvexShape::new(vec![Point::ints(0, 0), Point::ints(7, 1), Point::ints(2, 5)], false).unwrap()
}

fn criterion1(d: &mut Digest) -> Outcome {
    let sq = ConvexShape::unit_square();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut total = 0;
    for seed in 0..ORACLE_SETS {
        let pts = gen::uniform(ORACLE_SIZE, 12, seed);
        let fam = enumerate_ranges(&pts, &sq).unwrap();
        let oracle = brute_force_oracle(&pts, &sq).unwrap();
        let a: BTreeSet<Vec<usize>> = fam.subsets().into_iter().collect();
        let b: BTreeSet<Vec<usize>> = oracle.subsets().into_iter().collect();
        if a != b || a.len() != fam.len() {
            failures.push(format!("seed {seed}: {} ranges vs {} from the oracle", a.len(), b.len()));
        }
        total += a.len();
        d.push(json(&fam));
    }
    let elapsed = start.elapsed();
    if elapsed > ORACLE_LIMIT {
        failures.push(format!("took {elapsed:?}"));
    }
    outcome(&failures, format!("{ORACLE_SETS} sets, {total} ranges, {:.2}s", elapsed.as_secs_f64()))
}

/// Independent checks on a conditioned DT: returns failure messages.
fn dt_failures(dt: &DelaunayGraph) -> Vec<String> {
    let mut out = Vec::new();
    let v = &dt.vertices;
    let nv = v.len();
    let e = &dt.edges;
    // Planarity: no two edges meet except at a shared endpoint.
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let ((a, b), (c, dd)) = (e[i], e[j]);
            if a == c || a == dd || b == c || b == dd {
                continue;
            }
            let o1 = orient(&v[a], &v[b], &v[c]);
            let o2 = orient(&v[a], &v[b], &v[dd]);
            let o3 = orient(&v[c], &v[dd], &v[a]);
            let o4 = orient(&v[c], &v[dd], &v[b]);
            if o1 * o2 <= 0 && o3 * o4 <= 0 && !(o1 == 0 && o2 == 0) {
                out.push(format!("edges {a}-{b} and {c}-{dd} meet"));
            }
        }
    }
    // Connectivity.
    let mut adj = vec![Vec::new(); nv];
    for &(a, b) in e {
        adj[a].push(b);
        adj[b].push(a);
    }
    if reach(&adj, 0, |_| true) != nv {
        out.push("not connected".into());
    }
    // A connected plane graph whose outer face is an h-cycle has all inner
    // faces triangular exactly when it has 3n − 3 − h edges.
    let h = dt.outer.len();
    if e.len() + 3 + h != 3 * nv {
        out.push(format!("{} edges for {nv} vertices and an outer {h}-cycle", e.len()));
    }
    out
}

fn reach(adj: &[Vec<usize>], s: usize, keep: impl Fn(usize) -> bool) -> usize {
    let mut seen = vec![false; adj.len()];
    seen[s] = true;
    let mut q = VecDeque::from([s]);
    let mut count = 1;
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if !seen[y] && keep(y) {
                seen[y] = true;
                count += 1;
                q.push_back(y);
            }
        }
    }
    count
}

/// Whether segment `a`–`b` meets the interior of the homothet.
fn segment_enters(shape: &ConvexShape, h: &Homothet, a: &Point, b: &Point) -> bool {
    let vs = h.vertices(shape);
    let n = vs.len();
    // Clockwise: inside is where cross(edge, p − v) < 0.
    let f = |k: usize, p: &Point| vs[(k + 1) % n].sub(&vs[k]).cross(&p.sub(&vs[k]));
    let (mut lo, mut hi) = (Rational::zero(), Rational::one());
    for k in 0..n {
        let (fa, fb) = (f(k, a), f(k, b));
        let slope = &fb - &fa;
        if slope.is_zero() {
            if !fa.is_negative() {
                return false;
            }
            continue;
        }
        let t = -(&fa / &slope);
        if slope.is_positive() {
            hi = hi.min(t);
        } else {
            lo = lo.max(t);
        }
    }
    lo < hi
}

fn criterion2(d: &mut Digest) -> Outcome {
    let mut failures = Vec::new();
    let mut ranges_checked = 0u64;
    let mut splits_checked = 0u64;
    for seed in 0..DT_INSTANCES {
        let (shape, n) = if seed % 2 == 0 {
            (ConvexShape::unit_square(), 10 + (seed as usize * 7) % (DT_MAX_SQUARE - 9))
        } else {
            (scalene(), 10 + (seed as usize * 5) % (DT_MAX_TRIANGLE - 9))
        };
        let pts = gen::uniform(n, 1000, seed);
        let (map, nshape) = normalize(&shape).unwrap();
        let local: Vec<Point> = pts.iter().map(|p| map.apply(p)).collect();
        let cond = condition(&local, &nshape, seed).unwrap();
        let dt = build_dt(&cond, &nshape).unwrap();
        d.push(json(&dt));
        failures.extend(dt_failures(&dt).into_iter().map(|m| format!("seed {seed}: {m}")));
        let mut adj = vec![Vec::new(); dt.vertices.len()];
        for &(a, b) in &dt.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let check_split = n <= EDGE_SPLIT_MAX;
        scan(&cond.perturbed, &nshape, &ScanOptions::default(), &mut |r| {
            ranges_checked += 1;
            let members = r.sorted();
            let mut inside = vec![false; dt.vertices.len()];
            members.iter().for_each(|&m| inside[m] = true);
            if reach(&adj, members[0], |x| inside[x]) != members.len() {
                failures.push(format!("seed {seed}: range {members:?} induces a disconnected graph"));
            }
            if check_split {
                let h = r.homothet();
                for &(a, b) in &dt.edges {
                    if inside[a] || inside[b] {
                        continue;
                    }
                    let (pa, pb) = (&dt.vertices[a], &dt.vertices[b]);
                    if !segment_enters(&nshape, &h, pa, pb) {
                        continue;
                    }
                    splits_checked += 1;
                    let sides: BTreeSet<i32> = members.iter().map(|&m| orient(pa, pb, &dt.vertices[m])).collect();
                    if sides.contains(&1) && sides.contains(&-1) {
                        failures.push(format!(
                            "seed {seed}: edge {a}-{b} splits range {members:?} with points on both sides"
                        ));
                    }
                }
            }
            true
        })
        .unwrap();
    }
    outcome(
        &failures,
        format!("{DT_INSTANCES} instances, {ranges_checked} ranges connected, {splits_checked} crossing edges split cleanly"),
    )
}

/// Square instance with long monotone chains, so that large ranges induce trees.
fn staircase_instance(seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut pts = Vec::new();
    let len = rng.gen_range(24..=32);
    let descending = rng.gen_bool(0.5);
    let (mut x, mut y) = (0i64, if descending { 2000 } else { 0 });
    for _ in 0..len {
        x += rng.gen_range(20..60);
        let dy = rng.gen_range(20..60);
        y += if descending { -dy } else { dy };
        if seen.insert((x, y)) {
            pts.push(Point::ints(x, y));
        }
    }
    for _ in 0..rng.gen_range(6..14) {
        let p = (rng.gen_range(0..2000), rng.gen_range(0..2000));
        if seen.insert(p) {
            pts.push(Point::ints(p.0, p.1));
        }
    }
    pts
}

/// Leaf-to-leaf paths of a tree; every path is contained in one of them.
fn leaf_paths(adj: &std::collections::BTreeMap<usize, Vec<usize>>) -> Vec<Vec<usize>> {
    let leaves: Vec<usize> = adj.iter().filter(|(_, nb)| nb.len() <= 1).map(|(&v, _)| v).collect();
    let mut out = Vec::new();
    for (i, &s) in leaves.iter().enumerate() {
        for &t in &leaves[i + 1..] {
            let mut parent = std::collections::BTreeMap::from([(s, s)]);
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &y in &adj[&x] {
                    if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(y) {
                        e.insert(x);
                        q.push_back(y);
                    }
                }
            }
            let mut path = vec![t];
            while *path.last().unwrap() != s {
                path.push(parent[path.last().unwrap()]);
            }
            out.push(path);
        }
    }
    out
}

fn monotone(vals: impl Iterator<Item = Rational>) -> bool {
    let v: Vec<Rational> = vals.collect();
    v.windows(2).all(|w| w[0] < w[1]) || v.windows(2).all(|w| w[0] > w[1])
}

fn criterion3(d: &mut Digest) -> Outcome {
    let sq = ConvexShape::unit_square();
    let mut failures = Vec::new();
    let (mut trees, mut big) = (0u64, 0u64);
    for seed in 0..STRUCTURE_SEEDS {
        let pts = staircase_instance(seed);
        let cond = condition(&pts, &sq, seed).unwrap();
        let dt = build_dt(&cond, &sq).unwrap();
        let mut summary: Vec<(Vec<usize>, usize)> = Vec::new();
        scan(&cond.perturbed, &sq, &ScanOptions { min_size: 3, ..Default::default() }, &mut |r| {
            let members = r.sorted();
            let sub = induce_set(&dt, &members);
            if !sub.is_tree() {
                return true;
            }
            trees += 1;
            let degs: Vec<usize> = members.iter().map(|&v| sub.degree(v)).collect();
            let high = degs.iter().filter(|&&g| g > 2).count();
            let max = degs.iter().copied().max().unwrap_or(0);
            if max > 4 || high > 2 || (max == 4 && high > 1) {
                failures.push(format!("seed {seed}: degrees {degs:?} in {members:?}"));
            }
            for path in leaf_paths(&sub.rotation) {
                let v = &dt.vertices;
                if !monotone(path.iter().map(|&p| v[p].x.clone())) && !monotone(path.iter().map(|&p| v[p].y.clone())) {
                    failures.push(format!("seed {seed}: path {path:?} is neither x- nor y-monotone"));
                }
                let middles: BTreeSet<usize> =
                    bad_turns(&dt, &sq, &path).unwrap().into_iter().map(|(i, _)| i).collect();
                if middles.len() > 4 {
                    failures.push(format!("seed {seed}: path {path:?} has {} bad 2-paths", middles.len()));
                }
            }
            let mut longest = 0;
            if members.len() >= 22 {
                big += 1;
                longest = longest_path(&sub).unwrap().len();
                if longest < 12 {
                    failures.push(format!("seed {seed}: longest path {longest} in a {}-point tree", members.len()));
                }
                if let Err(e) = find_good_3path(&dt, &sub, &sq) {
                    failures.push(format!("seed {seed}: {e}"));
                }
            }
            summary.push((members, longest));
            true
        })
        .unwrap();
        d.push(json(&summary));
    }
    if big == 0 {
        failures.push("no tree-induced range with 22 points was exercised".into());
    }
    outcome(&failures, format!("{STRUCTURE_SEEDS} seeds, {trees} tree-induced ranges, {big} with at least 22 points"))
}

/// Two-colours and verifies one clustered instance: (max monochromatic size, report JSON).
fn colour_and_verify(pts: &[Point], seed: u64, failures: &mut Vec<String>, tag: &str) -> (usize, String) {
    let sq = ConvexShape::unit_square();
    let st = two_color(pts, &sq, seed).unwrap();
    let r = verify(pts, &sq, &st.final_colors, SQUARE_THRESHOLD).unwrap();
    if r.max_deficient_size >= SQUARE_THRESHOLD as usize || !r.ok() {
        failures.push(format!("{tag}: monochromatic range of {} points", r.max_deficient_size));
    }
    (r.max_deficient_size, json(&(&st, &r)))
}

fn criterion4(d: &mut Digest) -> Outcome {
    let sq = ConvexShape::unit_square();
    let mut failures = Vec::new();
    let mut worst = 0;
    let mut heavy_homothets = 0u64;
    let mut slowest = Duration::ZERO;
    for seed in 0..CLUSTER_INSTANCES {
        let pts = gen::clustered(CLUSTER_SIZE, seed);
        let stats = scan(
            &pts,
            &sq,
            &ScanOptions { min_size: SQUARE_THRESHOLD as usize + 1, ..Default::default() },
            &mut |_| true,
        )
        .unwrap();
        heavy_homothets += stats.visited;
        let start = Instant::now();
        let (m, report) = colour_and_verify(&pts, seed, &mut failures, &format!("seed {seed}"));
        let t = start.elapsed();
        slowest = slowest.max(t);
        if t > CLUSTER_LIMIT {
            failures.push(format!("seed {seed}: took {t:?}"));
        }
        worst = worst.max(m);
        d.push(report);
    }
    if heavy_homothets == 0 {
        failures.push("no range above the threshold".into());
    }
    outcome(
        &failures,
        format!(
            "{CLUSTER_INSTANCES} x {CLUSTER_SIZE} points, {heavy_homothets} ranges above {SQUARE_THRESHOLD} points, max monochromatic {worst} (bound {}), slowest {:.1}s",
            SQUARE_THRESHOLD - 1,
            slowest.as_secs_f64()
        ),
    )
}

/// Independent exact check of a square cover: pieces inside the target, no
/// avoided point interior to a piece, and every cell of the refined grid covered.
fn cover_failures(target: &Homothet, avoid: &[Point], pieces: &[Homothet]) -> Option<String> {
    let bounds = |h: &Homothet| {
        let (x, y, s) = (&h.translation.x, &h.translation.y, &h.scale);
        (x.clone(), y.clone(), x + s, y + s)
    };
    let (tx0, ty0, tx1, ty1) = bounds(target);
    let mut xs = vec![tx0.clone(), tx1.clone()];
    let mut ys = vec![ty0.clone(), ty1.clone()];
    for p in pieces {
        let (x0, y0, x1, y1) = bounds(p);
        if x0 < tx0 || y0 < ty0 || x1 > tx1 || y1 > ty1 {
            return Some(format!("piece {p:?} leaves the target"));
        }
        for a in avoid {
            if a.x > x0 && a.x < x1 && a.y > y0 && a.y < y1 {
                return Some(format!("{a:?} is interior to {p:?}"));
            }
        }
        xs.extend([x0, x1]);
        ys.extend([y0, y1]);
    }
    xs.sort();
    xs.dedup();
    ys.sort();
    ys.dedup();
    for wx in xs.windows(2) {
        for wy in ys.windows(2) {
            let c = Point::new(wx[0].mid(&wx[1]), wy[0].mid(&wy[1]));
            let covered = pieces.iter().any(|p| {
                let (x0, y0, x1, y1) = bounds(p);
                c.x > x0 && c.x < x1 && c.y > y0 && c.y < y1
            });
            if !covered {
                return Some(format!("cell around {c:?} uncovered"));
            }
        }
    }
    None
}

fn criterion5(d: &mut Digest) -> Outcome {
    let sq = ConvexShape::unit_square();
    let mut failures = Vec::new();
    let mut worst_slack = i64::MAX;
    for seed in 0..COVER_INSTANCES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = Rational::new(rng.gen_range(1..=64), rng.gen_range(1..=8));
        let target = Homothet::new(
            scale.clone(),
            Point::new(Rational::new(rng.gen_range(-50..50), 3), Rational::new(rng.gen_range(-50..50), 7)),
        )
        .unwrap();
        let l = rng.gen_range(0..=COVER_MAX_POINTS);
        let mut avoid: Vec<Point> = Vec::new();
        while avoid.len() < l {
            let u = Rational::new(rng.gen_range(1..1000), 1000);
            let v = Rational::new(rng.gen_range(1..1000), 1000);
            let p = Point::new(&target.translation.x + &u * &scale, &target.translation.y + &v * &scale);
            if !avoid.contains(&p) {
                avoid.push(p);
            }
        }
        let cover = cover_square(&sq, &target, &avoid).unwrap();
        let bound = 2 * l + 2;
        if cover.pieces.len() > bound {
            failures.push(format!("seed {seed}: {} pieces for l = {l}", cover.pieces.len()));
        }
        worst_slack = worst_slack.min(bound as i64 - cover.pieces.len() as i64);
        if let Some(m) = cover_failures(&target, &avoid, &cover.pieces) {
            failures.push(format!("seed {seed}: {m}"));
        }
        d.push(json(&cover));
    }
    let centre = vec![Point::new(Rational::new(1, 2), Rational::new(1, 2))];
    let cover = cover_square(&sq, &Homothet::identity(), &centre).unwrap();
    if cover.pieces.len() != 4 {
        failures.push(format!("centre case gave {} pieces", cover.pieces.len()));
    }
    if let Some(m) = cover_failures(&Homothet::identity(), &centre, &cover.pieces) {
        failures.push(format!("centre case: {m}"));
    }
    d.push(json(&cover));
    outcome(
        &failures,
        format!(
            "{COVER_INSTANCES} instances, smallest slack to 2l+2 is {worst_slack}, centre case {} pieces",
            cover.pieces.len()
        ),
    )
}

fn criterion6(d: &mut Digest) -> Outcome {
    let sq = ConvexShape::unit_square();
    let mut failures = Vec::new();
    let want = BigUint::from(K_THRESHOLD);
    if k_threshold(&sq, K) != Some(want.clone()) {
        failures.push(format!("threshold {:?}", k_threshold(&sq, K)));
    }
    let mut max_missing = 0;
    for seed in 0..K_INSTANCES {
        let pts = gen::clustered(CLUSTER_SIZE, 100 + seed);
        let kc = k_color(&pts, &sq, K, seed).unwrap();
        if kc.threshold != K_THRESHOLD.to_string() {
            failures.push(format!("seed {seed}: recorded threshold {}", kc.threshold));
        }
        let r = verify_polychromatic(&pts, &sq, &kc.labels, K, &want).unwrap();
        if !r.ok() {
            failures.push(format!("seed {seed}: {} violations", r.violation_count));
        }
        max_missing = max_missing.max(r.max_deficient_size);
        d.push(json(&(&kc, &r)));
        // Each level of the recursion is a two-colouring of its class.
        let top = two_color(&pts, &sq, seed).unwrap();
        let (_, rep) = colour_and_verify(&pts, seed, &mut failures, &format!("seed {seed} level 0"));
        d.push(rep);
        for colour in [Color::Red, Color::Blue] {
            let class: Vec<Point> =
                pts.iter().zip(&top.final_colors).filter(|(_, &c)| c == colour).map(|(p, _)| p.clone()).collect();
            let (_, rep) = colour_and_verify(&class, seed, &mut failures, &format!("seed {seed} level 1 {colour:?}"));
            d.push(rep);
        }
    }
    outcome(
        &failures,
        format!(
            "threshold {K_THRESHOLD}; {K_INSTANCES} x {CLUSTER_SIZE} points, every range missing a colour has at most {max_missing} points, so the check is vacuous at this scale; per-level two-colourings pass"
        ),
    )
}

fn criterion7(d: &mut Digest) -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (name, n) in [("pentagon", 5), ("hexagon", 6)] {
        let shape = ConvexShape::regular(n).unwrap();
        let start = Instant::now();
        let inst = build_adversarial(&shape, ADVERSARY_C, 0).unwrap();
        let ch = &inst.checks;
        if !(ch.path && ch.outer_edges && ch.nested_order && ch.no_good_3path) {
            failures.push(format!("{name}: checks {ch:?}"));
        }
        if inst.path_points.len() != ADVERSARY_C || inst.points().len() < 2 * ADVERSARY_C {
            failures.push(format!("{name}: {} path points, {} in all", inst.path_points.len(), inst.points().len()));
        }
        let report = scan_universal_goodness(&inst.points(), &shape, ADVERSARY_C, 0).unwrap();
        if report.witness_count == 0 {
            failures.push(format!("{name}: no witness found"));
        }
        let t = start.elapsed();
        if t > ADVERSARY_LIMIT {
            failures.push(format!("{name}: took {t:?}"));
        }
        notes.push(format!(
            "{name} {} points, {} witness(es), {:.1}s",
            inst.points().len(),
            report.witness_count,
            t.as_secs_f64()
        ));
        d.push(json(&(&inst, &report)));
    }
    outcome(&failures, format!("c = {ADVERSARY_C}: {}", notes.join("; ")))
}

/// Side of the unit square: left, top, right, bottom.
const LEFT: usize = 0;
const TOP: usize = 1;
const RIGHT: usize = 2;
const BOTTOM: usize = 3;

/// Builds a small square around `q` hugging side `j` and reports whether
/// both `q–w` and `q–z` leave it through side `j` alone, with `w` and `z` outside.
fn separating_square(sq: &ConvexShape, w: &Point, q: &Point, z: &Point, j: usize) -> bool {
    let size = w.sub(q).linf(&Point::origin()).min(z.sub(q).linf(&Point::origin())) * Rational::new(1, 4);
    let gap = &size * Rational::new(1, 1000);
    let half = &size * Rational::new(1, 2);
    let (x, y) = (&q.x, &q.y);
    let corner = match j {
        LEFT => Point::new(x - &gap, y - &half),
        RIGHT => Point::new(x + &gap - &size, y - &half),
        TOP => Point::new(x - &half, y + &gap - &size),
        _ => Point::new(x - &half, y - &gap),
    };
    let h = Homothet::new(size, corner).unwrap();
    [w, z].iter().all(|p| {
        let d = p.sub(q);
        let mut exits: Vec<(Rational, usize)> = Vec::new();
        for k in 0..4 {
            let nk = sq.normal(k);
            let speed = nk.dot(&d);
            if speed.is_positive() {
                exits.push((-(sq.slack(&h, q, k) / speed), k));
            }
        }
        exits.sort();
        let outside = sq.containment(&h, p) == homochrome::Containment::Outside;
        outside && exits[0].1 == j && exits.get(1).is_none_or(|e| e.0 > exits[0].0) && exits[0].0 < Rational::one()
    })
}

fn criterion8(d: &mut Digest) -> Outcome {
    use Quadrant::*;
    let sq = ConvexShape::unit_square();
    let reps = [(NE, Point::ints(3, 1)), (NW, Point::ints(-1, 3)), (SE, Point::ints(1, -3)), (SW, Point::ints(-3, -1))];
    let second =
        [(NE, Point::ints(1, 2)), (NW, Point::ints(-2, 1)), (SE, Point::ints(2, -1)), (SW, Point::ints(-1, -2))];
    let q = Point::origin();
    let mut failures = Vec::new();
    let mut table = Vec::new();
    for (qa, a) in &reps {
        for (qb, b0) in &second {
            // Distinct points even when both lie in the same quadrant.
            let b = if qa == qb { b0.clone() } else { reps.iter().find(|r| r.0 == *qb).unwrap().1.clone() };
            assert_eq!(quadrant(&q, a).unwrap(), *qa);
            assert_eq!(quadrant(&q, &b).unwrap(), *qb);
            let got = goodness2(&sq, a, &q, &b).unwrap();
            let want = match (*qa, *qb) {
                (SW, NW) | (NW, SW) => Some(Goodness::Bad(LEFT)),
                (SE, NE) | (NE, SE) => Some(Goodness::Bad(RIGHT)),
                (NW, NE) | (NE, NW) => Some(Goodness::Bad(TOP)),
                (SW, SE) | (SE, SW) => Some(Goodness::Bad(BOTTOM)),
                _ if qa == qb => None,
                _ => Some(Goodness::Good),
            };
            match (want, got) {
                (Some(w), g) if w != g => failures.push(format!("{qa:?}/{qb:?}: {g:?}, table says {w:?}")),
                (None, Goodness::Good) => {
                    failures.push(format!("{qa:?}/{qb:?}: good, but both edges leave on a common side"))
                }
                _ => {}
            }
            if let Goodness::Bad(j) = got {
                if !separating_square(&sq, a, &q, &b, j) {
                    failures.push(format!("{qa:?}/{qb:?}: no separating square through side {j}"));
                }
            }
            table.push((format!("{qa:?}"), format!("{qb:?}"), got));
        }
    }
    d.push(json(&table));
    outcome(
        &failures,
        "16 combinations; 12 match the table, 4 same-quadrant ones are bad with an explicit separating square".into(),
    )
}

fn main() {
    type Run = fn(&mut Digest) -> Outcome;
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let criteria: [(u32, &str, Run); 8] = [
        (1, "oracle equivalence", criterion1),
        (2, "DT invariants", criterion2),
        (3, "square tree structure", criterion3),
        (4, "two-colouring guarantee", criterion4),
        (5, "self-cover", criterion5),
        (6, "k-colouring", criterion6),
        (7, "adversarial construction", criterion7),
        (8, "goodness table", criterion8),
    ];
    let mut all_pass = true;
    let mut digests: Vec<Digest> = Vec::new();
    for (id, name, run) in criteria {
        if only.is_some_and(|o| o != id) {
            digests.push(Digest::new());
            continue;
        }
        let start = Instant::now();
        let mut d = Digest::new();
        let o = run(&mut d);
        all_pass &= o.pass;
        println!(
            "criterion {id} [{}] {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        digests.push(d);
    }

    if only.is_some() {
        std::process::exit(i32::from(!all_pass));
    }
    let start = Instant::now();
    let mut differing = Vec::new();
    for (i, (id, _, run)) in criteria.iter().enumerate().take(7) {
        let mut d = Digest::new();
        run(&mut d);
        if d != digests[i] {
            differing.push(id.to_string());
        }
    }
    let pass = differing.is_empty();
    all_pass &= pass;
    let bytes: usize = digests.iter().take(7).flatten().map(String::len).sum();
    println!(
        "criterion 9 [{}] determinism: {} ({:.1}s)",
        if pass { "PASS" } else { "FAIL" },
        if pass {
            format!("criteria 1-7 rerun with the same seeds, {bytes} bytes of JSON identical")
        } else {
            format!("reports differ for criteria {}", differing.join(", "))
        },
        start.elapsed().as_secs_f64()
    );
    if !all_pass {
        std::process::exit(1);
    }
}
