//! Built-in polygons and polytopes addressable by name.
//!
//! The catalog names the reflexive polygons used throughout the table families:
//! `P3` … `P9` by normalized volume, plus `P8'`, the second decomposable
//! volume-8 quadrilateral. Product names (`P6xP9`) and free-sum names (`P3+P3`)
//! compose polygons into the 4-dimensional inputs of the engine. An exhaustive
//! brute-force enumeration of all reflexive polygons doubles as an independent
//! cross-check of the catalog: there are exactly 16 classes, and 8 of them
//! admit standard decompositions — the 7 named decomposable catalog polygons
//! plus one volume-6 pentagon (the sum of two triangles with inequivalent
//! direction sets) that the bundled reference tables do not cover.

use num_traits::One;

use crate::error::{Error, Result};
use crate::lattice::{polygon, IntVector};
use crate::minkowski::{enumerate_summand_decompositions, ScaledFace};
use crate::polytope::{polar_dual, LatticePolytope, PolarDual};

/// Names of the built-in reflexive polygons, in catalog order.
pub const POLYGON_NAMES: [&str; 8] = ["P3", "P4", "P5", "P6", "P7", "P8", "P8'", "P9"];

/// The catalog polygons whose every scaled 2-face situation admits standard
/// decompositions: all of them except `P3`.
pub const DECOMPOSABLE_NAMES: [&str; 7] = ["P4", "P5", "P6", "P7", "P8", "P8'", "P9"];

fn ivs(coords: &[[i64; 2]]) -> Vec<IntVector> {
    coords.iter().map(|c| IntVector::from_i64(c)).collect()
}

/// Looks up a single catalog polygon by name.
pub fn polygon(name: &str) -> Result<LatticePolytope> {
    let verts = match name {
        "P3" => ivs(&[[1, 0], [0, 1], [-1, -1]]),
        "P4" => ivs(&[[1, 0], [0, 1], [-1, 0], [0, -1]]),
        "P5" => ivs(&[[1, 0], [1, 1], [0, 1], [-1, 0], [0, -1]]),
        "P6" => ivs(&[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]]),
        "P7" => ivs(&[[1, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]]),
        "P8" => ivs(&[[1, 1], [-1, 1], [-1, -1], [1, -1]]),
        "P8'" => ivs(&[[-1, -1], [1, -1], [1, 0], [-1, 2]]),
        "P9" => ivs(&[[2, -1], [-1, 2], [-1, -1]]),
        _ => {
            return Err(Error::invalid(
                "unknown-polygon",
                format!("unknown catalog polygon {name:?} (expected one of {POLYGON_NAMES:?})"),
            ))
        }
    };
    LatticePolytope::new(name, verts)
}

/// Resolves a catalog name: a polygon (`P6`), a product (`P6xP9`), or a free
/// sum (`P3+P3`).
pub fn resolve(name: &str) -> Result<LatticePolytope> {
    if let Some((a, b)) = name.split_once('x') {
        return polygon(a)?.product(&polygon(b)?);
    }
    if let Some((a, b)) = name.split_once('+') {
        return polygon(a)?.free_sum(&polygon(b)?);
    }
    polygon(name)
}

/// True if the polygon itself (scale 1) admits a decomposition into unit
/// segments and standard triangles.
pub fn is_decomposable_polygon(p: &LatticePolytope) -> Result<bool> {
    if p.dim != 2 {
        return Err(Error::invalid("dimension-mismatch", "expected a polygon"));
    }
    let sf = ScaledFace::build(p.name.clone(), &p.vertices, num_bigint::BigInt::one())?;
    Ok(!enumerate_summand_decompositions(&sf)?.is_empty())
}

/// Normalized volume (here: twice the Euclidean area) of a polygon.
pub fn polygon_volume(p: &LatticePolytope) -> Result<num_bigint::BigInt> {
    let hull = polygon::convex_hull_ccw(&p.vertices)?;
    Ok(polygon::twice_area(&hull))
}

/// Exhaustively enumerates all reflexive polygons (translated so the unique
/// interior lattice point is the origin), up to unimodular-affine equivalence,
/// returned as canonical forms in a deterministic order. Every equivalence
/// class has an origin-centred representative with vertices in [−2,2]², and
/// such a representative only uses primitive vertices — an adjacent edge's
/// primitive inner normal `n` satisfies `⟨v, n⟩ = −1`, impossible for
/// `v = k·w` with `k ≥ 2` — so scanning vertex subsets of the primitive box
/// points finds the full classification.
pub fn enumerate_reflexive_polygons() -> Result<Vec<Vec<IntVector>>> {
    use itertools::Itertools;

    let mut points: Vec<(i64, i64)> = Vec::new();
    for x in -2i64..=2 {
        for y in -2i64..=2 {
            if (x, y) != (0, 0) && num_integer::gcd(x, y) == 1 {
                points.push((x, y));
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    // Reflexive polygons have at most 6 vertices (a 7-gon cannot keep a unique
    // interior point), so subsets of size 3..=6 suffice.
    for k in 3..=6usize {
        for subset in points.iter().copied().combinations(k) {
            let Some(hull) = reflexive_hull(&subset) else {
                continue;
            };
            let verts: Vec<IntVector> =
                hull.iter().map(|&(x, y)| IntVector::from_i64(&[x, y])).collect();
            // Authoritative re-check of the fast filter through the engine's
            // polar-dual machinery before canonicalizing.
            let p = LatticePolytope::new("candidate", verts.clone())?;
            match polar_dual(&p)? {
                PolarDual::Reflexive(_) => {}
                PolarDual::NotReflexive { rational_vertices } => {
                    return Err(Error::internal(format!(
                        "polygon scan accepted a non-reflexive candidate {hull:?} \
                         (dual vertices {rational_vertices:?})"
                    )))
                }
            }
            let (canon, _) = polygon::canonical_polygon_form(&verts)?;
            seen.insert(canon);
        }
    }
    Ok(seen.into_iter().collect())
}

/// If the points are in convex position with the origin strictly inside and
/// every edge at lattice distance 1 (hence a reflexive polygon with the origin
/// as its unique interior point), returns the ccw hull; otherwise `None`.
fn reflexive_hull(pts: &[(i64, i64)]) -> Option<Vec<(i64, i64)>> {
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut sorted = pts.to_vec();
    sorted.sort_unstable();
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(2 * sorted.len());
    for half in 0..2 {
        let start = hull.len() + 2;
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> = if half == 0 {
            Box::new(sorted.iter())
        } else {
            Box::new(sorted.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() != pts.len() {
        return None; // not in strictly convex position
    }
    for i in 0..hull.len() {
        let p = hull[i];
        let q = hull[(i + 1) % hull.len()];
        // ccw edge: det(p, q) = (lattice length) × (lattice distance from the
        // origin); requiring det == gcd pins the distance to exactly 1, which
        // also forces the origin to be the unique interior point (the polygon
        // is the union of its edge cones at height 1).
        let det = p.0 * q.1 - p.1 * q.0;
        let len = num_integer::gcd(q.0 - p.0, q.1 - p.1);
        if det != len {
            return None;
        }
    }
    Some(hull)
}

/// All products Pₐ×P_b of decomposable catalog polygons with a ≤ b in catalog
/// order — the 28 products the reference tables are built on. Note that the
/// full classification admits one more decomposable polygon than the named
/// catalog (see [`enumerate_reflexive_polygons`]), so this is the reference
/// list, not the set of all decomposable products.
pub fn decomposable_products() -> Result<Vec<LatticePolytope>> {
    let mut out = Vec::new();
    for (i, a) in DECOMPOSABLE_NAMES.iter().enumerate() {
        for b in &DECOMPOSABLE_NAMES[i..] {
            out.push(polygon(a)?.product(&polygon(b)?)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn catalog_polygons_are_reflexive_with_stated_volume() {
        for name in POLYGON_NAMES {
            let p = polygon(name).unwrap();
            let vol = polygon_volume(&p).unwrap();
            let expected: i64 = match name {
                "P8'" => 8,
                _ => name[1..].parse().unwrap(),
            };
            assert_eq!(vol, BigInt::from(expected), "{name} volume");
            match polar_dual(&p).unwrap() {
                PolarDual::Reflexive(d) => {
                    // Volume of the pair always totals 12.
                    let dual_vol = polygon_volume(&d).unwrap();
                    assert_eq!(vol + dual_vol, BigInt::from(12), "{name} twelve-theorem");
                }
                PolarDual::NotReflexive { .. } => panic!("{name} is not reflexive"),
            }
        }
    }

    #[test]
    fn decomposability_matches_catalog_split() {
        for name in POLYGON_NAMES {
            let p = polygon(name).unwrap();
            let expected = DECOMPOSABLE_NAMES.contains(&name);
            assert_eq!(is_decomposable_polygon(&p).unwrap(), expected, "{name}");
        }
    }

    #[test]
    fn square_and_quad_volume_eight_are_inequivalent() {
        let a = polygon("P8").unwrap();
        let b = polygon("P8'").unwrap();
        let eq = polygon::affine_equivalent(&a.vertices, &b.vertices).unwrap();
        assert!(eq.is_none());
    }

    #[test]
    fn resolve_compound_names() {
        let p = resolve("P6xP9").unwrap();
        assert_eq!(p.dim, 4);
        assert_eq!(p.vertices.len(), 18);
        let s = resolve("P3+P3").unwrap();
        assert_eq!(s.dim, 4);
        assert_eq!(s.vertices.len(), 6);
        assert!(resolve("P10").is_err());
    }

    #[test]
    fn product_list_has_28_entries() {
        let prods = decomposable_products().unwrap();
        assert_eq!(prods.len(), 28);
    }

    #[test]
    fn classification_finds_16_classes_8_decomposable() {
        let classes = enumerate_reflexive_polygons().unwrap();
        assert_eq!(classes.len(), 16);
        let mut decomposable = Vec::new();
        for verts in &classes {
            let p = LatticePolytope::new("class", verts.clone()).unwrap();
            if is_decomposable_polygon(&p).unwrap() {
                decomposable.push(p);
            }
        }
        assert_eq!(decomposable.len(), 8);
        // The named catalog covers 7 of the 8; the eighth is a volume-6
        // pentagon (sum of two triangles with inequivalent direction sets).
        let mut extra = Vec::new();
        for p in &decomposable {
            let named = DECOMPOSABLE_NAMES.iter().any(|name| {
                let q = polygon(name).unwrap();
                polygon::affine_equivalent(&p.vertices, &q.vertices).unwrap().is_some()
            });
            if !named {
                extra.push(p);
            }
        }
        assert_eq!(extra.len(), 1);
        assert_eq!(extra[0].vertices.len(), 5);
        assert_eq!(polygon_volume(extra[0]).unwrap(), BigInt::from(6));
    }
}
