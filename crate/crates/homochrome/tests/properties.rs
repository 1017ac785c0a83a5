use std::collections::BTreeSet;

use homochrome::coloring::{goodness2, k_threshold};
use homochrome::delaunay::{build_dt, condition, induce_set};
use homochrome::geom::{normalize, quadrant, Quadrant};
use homochrome::io;
use homochrome::oracle::brute_force_oracle;
use homochrome::ranges::{enumerate_ranges, scan, ScanOptions};
use homochrome::selfcover::{check_cover, cover_square};
use homochrome::{ConvexShape, Homothet, Point, Rational};
use num_bigint::BigUint;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| Rational::new(n, d))
}

fn point_set(max: usize, side: i64) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::btree_set((0..side, 0..side), 1..=max)
        .prop_map(|s| s.into_iter().map(|(x, y)| Point::ints(x, y)).collect())
}

fn family(points: &[Point], shape: &ConvexShape, force_general: bool) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    scan(points, shape, &ScanOptions { force_general, ..Default::default() }, &mut |r| {
        out.insert(r.sorted());
        true
    })
    .unwrap();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(r in rational()) {
        let back: Rational = r.to_string().parse().unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) * &c, &a * &c + &b * &c);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a);
        }
    }

    #[test]
    fn point_files_round_trip(xs in prop::collection::btree_set((rational(), rational()), 0..20)) {
        let pts: Vec<Point> = xs.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        prop_assert_eq!(io::parse_csv(&io::write_csv(&pts)).unwrap(), pts.clone());
        prop_assert_eq!(io::parse_json(&io::write_json(&pts)).unwrap(), pts);
    }

    #[test]
    fn quadrants_are_antisymmetric(a in (-50i64..50, -50i64..50), b in (-50i64..50, -50i64..50)) {
        prop_assume!(a.0 != b.0 && a.1 != b.1);
        let (p, q) = (Point::ints(a.0, a.1), Point::ints(b.0, b.1));
        let there = quadrant(&p, &q).unwrap();
        let back = quadrant(&q, &p).unwrap();
        prop_assert_eq!(back, there.opposite());
        prop_assert!(matches!((there, back), (Quadrant::NE, Quadrant::SW) | (Quadrant::SW, Quadrant::NE) | (Quadrant::NW, Quadrant::SE) | (Quadrant::SE, Quadrant::NW)));
    }

    #[test]
    fn goodness_is_symmetric(x in (-9i64..9, -9i64..9), z in (-9i64..9, -9i64..9), n in 3usize..7) {
        prop_assume!(x != (0, 0) && z != (0, 0) && x != z);
        let shape = if n == 4 { ConvexShape::unit_square() } else { ConvexShape::regular(n).unwrap() };
        let (px, py, pz) = (Point::ints(x.0, x.1), Point::origin(), Point::ints(z.0, z.1));
        prop_assert_eq!(goodness2(&shape, &px, &py, &pz).unwrap(), goodness2(&shape, &pz, &py, &px).unwrap());
    }

    #[test]
    fn square_scan_matches_oracle(pts in point_set(7, 10)) {
        let sq = ConvexShape::unit_square();
        let fam: BTreeSet<Vec<usize>> = enumerate_ranges(&pts, &sq).unwrap().subsets().into_iter().collect();
        let oracle: BTreeSet<Vec<usize>> = brute_force_oracle(&pts, &sq).unwrap().subsets().into_iter().collect();
        prop_assert_eq!(fam, oracle);
    }

    #[test]
    fn general_sweep_matches_square_scan(pts in point_set(9, 40)) {
        let sq = ConvexShape::unit_square();
        prop_assert_eq!(family(&pts, &sq, true), family(&pts, &sq, false));
    }

    #[test]
    fn ranges_are_affine_invariant(pts in point_set(8, 30)) {
        let par = ConvexShape::new(vec![Point::ints(0, 0), Point::ints(3, 1), Point::ints(4, 4), Point::ints(1, 3)], false).unwrap();
        let (map, image) = normalize(&par).unwrap();
        let mapped: Vec<Point> = pts.iter().map(|p| map.apply(p)).collect();
        prop_assert!(image.is_axis_square());
        prop_assert_eq!(family(&pts, &par, false), family(&mapped, &image, false));
    }

    #[test]
    fn realized_homothets_cut_out_their_range(pts in point_set(8, 25), n in 3usize..7) {
        let shape = ConvexShape::regular(n).unwrap();
        for r in enumerate_ranges(&pts, &shape).unwrap().ranges {
            let (inside, _) = homochrome::ranges::classify(&shape, &r.homothet, &pts);
            prop_assert_eq!(inside, r.points);
        }
    }

    #[test]
    fn every_range_induces_a_connected_graph(pts in point_set(14, 200), seed in 0u64..4) {
        let sq = ConvexShape::unit_square();
        let cond = condition(&pts, &sq, seed).unwrap();
        let dt = build_dt(&cond, &sq).unwrap();
        scan(&cond.perturbed, &sq, &ScanOptions::default(), &mut |r| {
            assert!(induce_set(&dt, &r.sorted()).connected());
            true
        })
        .unwrap();
    }

    #[test]
    fn self_cover_within_bound(avoid in prop::collection::btree_set((1i64..64, 1i64..64), 0..8)) {
        let sq = ConvexShape::unit_square();
        let target = Homothet::new(Rational::from_int(64), Point::origin()).unwrap();
        let avoid: Vec<Point> = avoid.into_iter().map(|(x, y)| Point::ints(x, y)).collect();
        let cover = cover_square(&sq, &target, &avoid).unwrap();
        prop_assert!(cover.pieces.len() <= 2 * avoid.len() + 2);
        prop_assert_eq!(check_cover(&sq, &cover), Ok(()));
    }
}

#[test]
fn polychromatic_thresholds() {
    let sq = ConvexShape::unit_square();
    assert_eq!(k_threshold(&sq, 1), Some(BigUint::from(215u32)));
    assert_eq!(k_threshold(&sq, 2), Some(BigUint::from(215u32)));
    assert_eq!(k_threshold(&sq, 4), Some(BigUint::from(92_450u32)));
    assert_eq!(k_threshold(&ConvexShape::regular(5).unwrap(), 2), None);
}
