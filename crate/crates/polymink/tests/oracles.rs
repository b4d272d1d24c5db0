//! Frozen-value regression suite: quantities the engine derives (sweep sizes,
//! group orders, option counts, period coefficients, classification data) are
//! pinned here with exact expected values, many of them re-derivable by hand,
//! so drift in any layer — hulls, face lattices, decomposition enumeration,
//! symmetry, linear algebra — surfaces as a precise mismatch.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polymink::catalog;
use polymink::lattice::{normalized_volume, IntVector};
use polymink::minkowski::{enumerate_summand_decompositions, DecompositionSweep, ScaledFace};
use polymink::period::{period_polynomial, period_sequence};
use polymink::polytope::{polar_dual, LatticePolytope, PolarDual, PolarPair};
use polymink::reference;
use polymink::symmetry::automorphism_group;

/// Vertex count and normalized volume of every reflexive polygon class:
/// 5 triangles, 7 quadrilaterals, 3 pentagons, 1 hexagon.
const CLASS_PROFILE: [(usize, i64); 16] = [
    (3, 3),
    (3, 4),
    (3, 6),
    (3, 8),
    (3, 9),
    (4, 4),
    (4, 4),
    (4, 5),
    (4, 6),
    (4, 7),
    (4, 8),
    (4, 8),
    (5, 5),
    (5, 6),
    (5, 7),
    (6, 6),
];

/// The unique interior lattice point of a small polygon given as a vertex
/// cycle: the point strictly on one side of every edge.
fn interior_point(verts: &[IntVector]) -> (i64, i64) {
    let coords: Vec<(i64, i64)> = verts
        .iter()
        .map(|v| {
            use num_traits::ToPrimitive;
            (v.0[0].to_i64().unwrap(), v.0[1].to_i64().unwrap())
        })
        .collect();
    let xs: Vec<i64> = coords.iter().map(|c| c.0).collect();
    let ys: Vec<i64> = coords.iter().map(|c| c.1).collect();
    let mut found = Vec::new();
    for x in *xs.iter().min().unwrap()..=*xs.iter().max().unwrap() {
        for y in *ys.iter().min().unwrap()..=*ys.iter().max().unwrap() {
            let mut signs = Vec::new();
            for i in 0..coords.len() {
                let p = coords[i];
                let r = coords[(i + 1) % coords.len()];
                let cross = (r.0 - p.0) * (y - p.1) - (r.1 - p.1) * (x - p.0);
                signs.push(cross.signum());
            }
            if signs.iter().all(|&s| s == signs[0]) && signs[0] != 0 {
                found.push((x, y));
            }
        }
    }
    assert_eq!(found.len(), 1, "expected exactly one interior lattice point");
    found[0]
}

#[test]
fn classification_profile_and_twelve_theorem() {
    let classes = catalog::enumerate_reflexive_polygons().expect("classification");
    let mut profile: Vec<(usize, BigInt)> = Vec::new();
    for c in &classes {
        let (cx, cy) = interior_point(c);
        let centered: Vec<IntVector> = c
            .iter()
            .map(|v| IntVector(vec![&v.0[0] - BigInt::from(cx), &v.0[1] - BigInt::from(cy)]))
            .collect();
        let p = LatticePolytope::new("class", centered).expect("polytope");
        let vol = catalog::polygon_volume(&p).expect("volume");
        // Boundary-point counts of the polygon and its dual always total 12.
        match polar_dual(&p).expect("dual") {
            PolarDual::Reflexive(d) => {
                let dual_vol = catalog::polygon_volume(&d).expect("dual volume");
                assert_eq!(&vol + dual_vol, BigInt::from(12), "twelve theorem on {c:?}");
            }
            PolarDual::NotReflexive { .. } => panic!("classified polygon is not reflexive"),
        }
        profile.push((c.len(), vol));
    }
    profile.sort();
    let expected: Vec<(usize, BigInt)> =
        CLASS_PROFILE.iter().map(|&(n, v)| (n, BigInt::from(v))).collect();
    assert_eq!(profile, expected);
}

/// Total number of decomposition choices for each catalog product, i.e. the
/// product over 2-faces of each face's option count. The hexagon at scale 1
/// has 2 options and at scale 2 has 3; every other catalog face situation is
/// forced, which the counts below encode exactly.
#[test]
fn sweep_totals_for_catalog_products() {
    let expected: [(&str, u64); 8] = [
        ("P6xP6", 4096), // 12 unit hexagons: 2^12
        ("P6xP5", 72),   // 2 double hexagons, 3 unit hexagons: 3^2 · 2^3
        ("P6xP4", 81),   // 4 double hexagons: 3^4
        ("P6xP7", 32),   // 5 unit hexagons: 2^5
        ("P6xP8", 16),   // 4 unit hexagons: 2^4
        ("P6xP9", 8),    // 3 unit hexagons: 2^3
        ("P9xP9", 1),    // triangles only
        ("P3+P3", 1),    // dual of P9xP9: the same 18 forced triangles
    ];
    for (name, total) in expected {
        let pair = PolarPair::new(catalog::resolve(name).expect(name)).expect(name);
        let sweep = DecompositionSweep::new(&pair).expect(name);
        let count: u64 = sweep.options.iter().map(|o| o.len() as u64).product();
        assert_eq!(count, total, "{name} sweep total");
    }
}

#[test]
fn automorphism_group_orders() {
    let polygons: [(&str, usize); 8] = [
        ("P3", 6),
        ("P4", 8),
        ("P5", 2),
        ("P6", 12),
        ("P7", 2),
        ("P8", 8),
        ("P8'", 2),
        ("P9", 6),
    ];
    for (name, order) in polygons {
        let p = catalog::polygon(name).expect(name);
        assert_eq!(automorphism_group(&p).expect(name).len(), order, "{name}");
    }
    // Product groups contain the factor groups and the swap when both factors
    // agree, so these orders are 12·12·2, 12·2, 12·8, …, 6·6·2.
    let products: [(&str, usize); 7] = [
        ("P6xP6", 288),
        ("P6xP5", 24),
        ("P6xP4", 96),
        ("P6xP7", 24),
        ("P6xP8", 96),
        ("P6xP9", 72),
        ("P9xP9", 72),
    ];
    for (name, order) in products {
        let p = catalog::resolve(name).expect(name);
        assert_eq!(automorphism_group(&p).expect(name).len(), order, "{name}");
    }
}

/// Option counts for the catalog polygons as scaled faces. These are the only
/// inputs to the sweep totals above, so they are pinned separately to localize
/// a failure.
#[test]
fn scaled_face_option_counts() {
    let scale_one: [(&str, usize); 7] =
        [("P4", 1), ("P5", 1), ("P6", 2), ("P7", 1), ("P8", 1), ("P8'", 1), ("P9", 1)];
    for (name, count) in scale_one {
        let p = catalog::polygon(name).expect(name);
        let face =
            ScaledFace::build(name.to_string(), &p.vertices, BigInt::from(1)).expect(name);
        let options = enumerate_summand_decompositions(&face).expect(name);
        assert_eq!(options.len(), count, "{name} at scale 1");
    }
    // The doubled hexagon gains a third, mixed decomposition.
    let hexagon = catalog::polygon("P6").expect("P6");
    let doubled = ScaledFace::build("2·P6".to_string(), &hexagon.vertices, BigInt::from(2))
        .expect("scaled face");
    let options = enumerate_summand_decompositions(&doubled).expect("options");
    assert_eq!(options.len(), 3);
    let mut triangle_counts: Vec<usize> = options.iter().map(|d| d.triangle_count()).collect();
    triangle_counts.sort_unstable();
    assert_eq!(triangle_counts, vec![0, 2, 4]);

    // The undecomposable catalog polygon has no options at any relevant scale.
    let p3 = catalog::polygon("P3").expect("P3");
    let face = ScaledFace::build("P3".to_string(), &p3.vertices, BigInt::from(1)).expect("face");
    assert!(enumerate_summand_decompositions(&face).expect("options").is_empty());
}

/// The hexagon's vertex polynomial has constant terms of powers countable by
/// hand: pairs of opposite vertices give 6, zero-sum vertex triples give 12,
/// four-term sums give 90, five-term sums give 360.
#[test]
fn hexagon_periods_match_hand_counts() {
    let hexagon = catalog::polygon("P6").expect("P6");
    let f = period_polynomial(&hexagon).expect("period polynomial");
    let seq = period_sequence(&f, 6);
    let expected: Vec<BigInt> =
        [1, 0, 6, 12, 90, 360].iter().map(|&n| BigInt::from(n)).collect();
    assert_eq!(seq, expected);
}

/// The big triangle's periods vanish off multiples of 3 and equal the number
/// of ways to interleave three letters in equal proportion: (3m)!/(m!)³.
#[test]
fn big_triangle_periods_are_trinomial_coefficients() {
    let p9 = catalog::polygon("P9").expect("P9");
    let f = period_polynomial(&p9).expect("period polynomial");
    let seq = period_sequence(&f, 10);
    let factorial = |n: u64| -> BigInt { (1..=n).map(BigInt::from).product() };
    for (n, value) in seq.iter().enumerate() {
        if n % 3 == 0 {
            let m = (n / 3) as u64;
            let expected =
                factorial(3 * m) / (&factorial(m) * &factorial(m) * &factorial(m));
            assert_eq!(*value, expected, "term {n}");
        } else {
            assert_eq!(*value, BigInt::from(0), "term {n}");
        }
    }
}

/// Internal consistency of the bundled hexagon-product reference data: the
/// orbit-count matrix is symmetric with 91 orbits, and every configuration
/// with orbits carries invariant data.
#[test]
fn hexagon_product_reference_data_is_consistent() {
    let mut total = 0u64;
    for n1 in 0..7 {
        for n2 in 0..7 {
            assert_eq!(
                reference::P66_ORBITS[n1][n2],
                reference::P66_ORBITS[n2][n1],
                "orbit matrix symmetry at ({n1},{n2})"
            );
            total += reference::P66_ORBITS[n1][n2];
        }
    }
    // Off-diagonal cells are shared between (n1,n2) and (n2,n1).
    let mut orbits = 0u64;
    for n1 in 0..7 {
        for n2 in n1..7 {
            orbits += reference::P66_ORBITS[n1][n2];
        }
    }
    assert_eq!(orbits, 91);
    assert!(total >= 91);
    for n1 in 0..7 {
        for n2 in n1..7 {
            if reference::P66_ORBITS[n1][n2] > 0 {
                assert!(
                    reference::P66_INVARIANTS[n1][n2] != (0, 0),
                    "missing invariants at ({n1},{n2})"
                );
            }
        }
    }
}

fn random_unimodular(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..12 {
        let i = rng.gen_range(0..dim);
        let mut j = rng.gen_range(0..dim - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = *[-2, -1, 1, 2].iter().nth(rng.gen_range(0..4)).unwrap();
        for k in 0..dim {
            m[i][k] += c * m[j][k];
        }
    }
    m.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()
}

fn map_vertices(verts: &[IntVector], linear: &[Vec<BigInt>], shift: &[i64]) -> Vec<IntVector> {
    verts
        .iter()
        .map(|v| {
            let coords: Vec<BigInt> = linear
                .iter()
                .zip(shift)
                .map(|(row, s)| {
                    row.iter().zip(&v.0).map(|(a, b)| a * b).sum::<BigInt>() + BigInt::from(*s)
                })
                .collect();
            IntVector(coords)
        })
        .collect()
}

/// Normalized volume is an affine-unimodular invariant; exercised on every
/// polygon class and on a 4-dimensional product, with seeded random maps.
#[test]
fn volume_is_invariant_under_unimodular_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0C1A_55E5);
    for class in catalog::enumerate_reflexive_polygons().expect("classification") {
        let p = LatticePolytope::new("class", class.clone()).expect("polytope");
        let vol = normalized_volume(&p.vertices, 2).expect("volume");
        for _ in 0..10 {
            let m = random_unimodular(2, &mut rng);
            let shift = [rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
            let moved = map_vertices(&p.vertices, &m, &shift);
            assert_eq!(normalized_volume(&moved, 2).expect("moved volume"), vol);
        }
    }
    let product = catalog::resolve("P6xP5").expect("product");
    let vol = normalized_volume(&product.vertices, 4).expect("volume");
    for _ in 0..5 {
        let m = random_unimodular(4, &mut rng);
        let shift = [0, 1, -2, 3];
        let moved = map_vertices(&product.vertices, &m, &shift);
        assert_eq!(normalized_volume(&moved, 4).expect("moved volume"), vol);
    }
}
