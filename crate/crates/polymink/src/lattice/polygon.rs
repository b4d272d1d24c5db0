//! Exact 2D lattice-polygon utilities: convex hulls, areas, lattice-point
//! enumeration, and canonical forms under unimodular affine equivalence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{linalg, IntVector, UnimodularAffineMap};
use crate::error::{Error, Result};

/// Cross product of (a − o) and (b − o); positive when o→a→b turns left.
pub fn cross(o: &IntVector, a: &IntVector, b: &IntVector) -> BigInt {
    let ax = &a.0[0] - &o.0[0];
    let ay = &a.0[1] - &o.0[1];
    let bx = &b.0[0] - &o.0[0];
    let by = &b.0[1] - &o.0[1];
    &ax * &by - &ay * &bx
}

/// Convex hull of 2D points in counterclockwise order starting at the
/// lexicographically least vertex. Requires the points to span dimension 2.
pub fn convex_hull_ccw(points: &[IntVector]) -> Result<Vec<IntVector>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.iter().any(|p| p.dim() != 2) {
        return Err(Error::invalid("dimension-mismatch", "convex_hull_ccw expects 2D points"));
    }
    if pts.len() < 3 {
        return Err(Error::invalid("degenerate", "fewer than 3 distinct points"));
    }
    // Monotone chain. Strict turns only, so collinear non-vertex points are dropped.
    let build = |iter: &mut dyn Iterator<Item = &IntVector>| -> Vec<IntVector> {
        let mut chain: Vec<IntVector> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && cross(&chain[chain.len() - 2], &chain[chain.len() - 1], p) <= BigInt::zero()
            {
                chain.pop();
            }
            chain.push(p.clone());
        }
        chain
    };
    let lower = build(&mut pts.iter());
    let upper = build(&mut pts.iter().rev());
    if lower.len() < 2 || upper.len() < 2 {
        return Err(Error::invalid("degenerate", "points are collinear"));
    }
    let mut hull = lower;
    hull.pop();
    let mut upper = upper;
    upper.pop();
    hull.extend(upper);
    if hull.len() < 3 {
        return Err(Error::invalid("degenerate", "points are collinear"));
    }
    Ok(hull)
}

/// True if every given point is a vertex of the joint convex hull.
pub fn is_convex_position(points: &[IntVector]) -> Result<bool> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let hull = convex_hull_ccw(&pts)?;
    Ok(hull.len() == pts.len())
}

/// Twice the Euclidean area (= normalized area) of a ccw vertex cycle.
pub fn twice_area(ccw_vertices: &[IntVector]) -> BigInt {
    let n = ccw_vertices.len();
    let mut s = BigInt::zero();
    for i in 0..n {
        let a = &ccw_vertices[i];
        let b = &ccw_vertices[(i + 1) % n];
        s += &a.0[0] * &b.0[1] - &a.0[1] * &b.0[0];
    }
    s
}

/// The lattice points of the segment [a, b] in order from a to b, inclusive.
pub fn segment_lattice_points(a: &IntVector, b: &IntVector) -> Vec<IntVector> {
    let (dir, len) = b.sub(a).primitive();
    if len.is_zero() {
        return vec![a.clone()];
    }
    let mut out = Vec::new();
    let mut cur = a.clone();
    let mut k = BigInt::zero();
    while k <= len {
        out.push(cur.clone());
        cur = cur.add(&dir);
        k += 1;
    }
    out
}

/// Boundary lattice points of a ccw polygon in traversal order starting at the
/// first vertex; each edge contributes its points except the terminal vertex.
pub fn boundary_lattice_points(ccw_vertices: &[IntVector]) -> Vec<IntVector> {
    let n = ccw_vertices.len();
    let mut out = Vec::new();
    for i in 0..n {
        let a = &ccw_vertices[i];
        let b = &ccw_vertices[(i + 1) % n];
        let mut pts = segment_lattice_points(a, b);
        pts.pop();
        out.extend(pts);
    }
    out
}

/// True if p lies in the (closed) polygon with the given ccw vertex cycle.
pub fn contains_point(ccw_vertices: &[IntVector], p: &IntVector) -> bool {
    let n = ccw_vertices.len();
    (0..n).all(|i| cross(&ccw_vertices[i], &ccw_vertices[(i + 1) % n], p) >= BigInt::zero())
}

/// True if p lies strictly inside the polygon with the given ccw vertex cycle.
pub fn contains_point_strictly(ccw_vertices: &[IntVector], p: &IntVector) -> bool {
    let n = ccw_vertices.len();
    (0..n).all(|i| cross(&ccw_vertices[i], &ccw_vertices[(i + 1) % n], p) > BigInt::zero())
}

fn bounding_box(ccw_vertices: &[IntVector]) -> (BigInt, BigInt, BigInt, BigInt) {
    let xs: Vec<&BigInt> = ccw_vertices.iter().map(|v| &v.0[0]).collect();
    let ys: Vec<&BigInt> = ccw_vertices.iter().map(|v| &v.0[1]).collect();
    (
        (*xs.iter().min().unwrap()).clone(),
        (*xs.iter().max().unwrap()).clone(),
        (*ys.iter().min().unwrap()).clone(),
        (*ys.iter().max().unwrap()).clone(),
    )
}

/// All lattice points of the closed polygon, in lexicographic order.
pub fn lattice_points(ccw_vertices: &[IntVector]) -> Vec<IntVector> {
    let (x0, x1, y0, y1) = bounding_box(ccw_vertices);
    let mut out = Vec::new();
    let mut x = x0;
    while x <= x1 {
        let mut y = y0.clone();
        while y <= y1 {
            let p = IntVector(vec![x.clone(), y.clone()]);
            if contains_point(ccw_vertices, &p) {
                out.push(p);
            }
            y += 1;
        }
        x += 1;
    }
    out
}

/// Lattice points strictly inside the polygon, in lexicographic order.
pub fn interior_lattice_points(ccw_vertices: &[IntVector]) -> Vec<IntVector> {
    lattice_points(ccw_vertices)
        .into_iter()
        .filter(|p| contains_point_strictly(ccw_vertices, p))
        .collect()
}

/// Completes a primitive vector u to a basis (u, v) of ℤ² with det [u v] = 1.
fn complete_basis(u: &IntVector) -> IntVector {
    // Need u.x·vy − u.y·vx = 1; extended gcd gives s·u.x + t·u.y = 1.
    let e = u.0[0].extended_gcd(&u.0[1]);
    debug_assert!(e.gcd.is_one(), "complete_basis requires a primitive vector");
    IntVector(vec![-e.y, e.x])
}

/// One normalized candidate for the canonical form: set up the affine map fixed by
/// the ccw hull cycle `w` at rotation `r`, and return (flattened image coords, map).
fn normal_form_at(
    w: &[IntVector],
    r: usize,
    pre: &UnimodularAffineMap,
) -> (Vec<BigInt>, UnimodularAffineMap) {
    let m = w.len();
    let a0 = &w[r];
    let a1 = &w[(r + 1) % m];
    let a2 = &w[(r + 2) % m];
    let (u, _) = a1.sub(a0).primitive();
    let v = complete_basis(&u);
    // B has columns (u, v); B⁻¹ maps u ↦ e₁.
    let b = vec![vec![u.0[0].clone(), v.0[0].clone()], vec![u.0[1].clone(), v.0[1].clone()]];
    let binv = linalg::inverse_unimodular(&b).expect("basis matrix is unimodular");
    let (wdir, _) = a2.sub(a1).primitive();
    let img = linalg::mat_vec(&binv, &wdir.0);
    let (alpha, beta) = (img[0].clone(), img[1].clone());
    debug_assert!(beta.is_positive(), "ccw turn must have positive second coordinate");
    let k = alpha.div_floor(&beta);
    // Shear (x, y) ↦ (x − k·y, y), then B⁻¹; translate a0 to the origin.
    let shear = vec![vec![BigInt::one(), -k], vec![BigInt::zero(), BigInt::one()]];
    let lin = linalg::mat_mul(&shear, &binv);
    let t = IntVector(linalg::mat_vec(&lin, &a0.0)).neg();
    let norm = UnimodularAffineMap { linear: lin, translate: t };
    let mut flat = Vec::with_capacity(2 * m);
    for i in 0..m {
        flat.extend(norm.apply(&w[(r + i) % m]).0);
    }
    (flat, norm.compose(pre))
}

/// Canonical form of a 2D lattice polygon under unimodular affine maps.
///
/// Returns the canonical ccw vertex cycle (starting at the origin) and a map F with
/// F(polygon) = canonical form. Two polygons are unimodularly affinely equivalent
/// if and only if their canonical cycles are equal.
pub fn canonical_polygon_form(points: &[IntVector]) -> Result<(Vec<IntVector>, UnimodularAffineMap)> {
    let hull = convex_hull_ccw(points)?;
    let m = hull.len();
    let mut best: Option<(Vec<BigInt>, UnimodularAffineMap)> = None;
    // Orientation-preserving candidates, then reflected ones (y ↦ −y reverses the cycle).
    let identity = UnimodularAffineMap::identity(2);
    let reflect = UnimodularAffineMap {
        linear: vec![vec![BigInt::one(), BigInt::zero()], vec![BigInt::zero(), -BigInt::one()]],
        translate: IntVector::zero(2),
    };
    let reflected: Vec<IntVector> = hull.iter().rev().map(|p| reflect.apply(p)).collect();
    for (cycle, pre) in [(&hull, &identity), (&reflected, &reflect)] {
        for r in 0..m {
            let cand = normal_form_at(cycle, r, pre);
            if best.as_ref().is_none_or(|b| cand.0 < b.0) {
                best = Some(cand);
            }
        }
    }
    let (flat, map) = best.unwrap();
    let verts = flat
        .chunks(2)
        .map(|c| IntVector(vec![c[0].clone(), c[1].clone()]))
        .collect();
    Ok((verts, map))
}

/// Tests two 2D lattice point sets for unimodular affine equivalence of their convex
/// hulls; on success returns a map g with g(hull a) = hull b. Handles both genuine
/// polygons and degenerate (segment) inputs.
pub fn affine_equivalent(a: &[IntVector], b: &[IntVector]) -> Result<Option<UnimodularAffineMap>> {
    let ha = convex_hull_ccw(a);
    let hb = convex_hull_ccw(b);
    match (ha, hb) {
        (Ok(_), Ok(_)) => {
            let (ca, fa) = canonical_polygon_form(a)?;
            let (cb, fb) = canonical_polygon_form(b)?;
            if ca != cb {
                return Ok(None);
            }
            Ok(Some(fb.inverse().compose(&fa)))
        }
        (Err(_), Err(_)) => segment_equivalence(a, b),
        _ => Ok(None),
    }
}

/// Equivalence for collinear point sets: segments of equal lattice length match.
fn segment_equivalence(a: &[IntVector], b: &[IntVector]) -> Result<Option<UnimodularAffineMap>> {
    let ends = |pts: &[IntVector]| -> Result<(IntVector, IntVector)> {
        let mut s = pts.to_vec();
        s.sort();
        s.dedup();
        if s.is_empty() {
            return Err(Error::invalid("empty-input", "no points given"));
        }
        Ok((s[0].clone(), s[s.len() - 1].clone()))
    };
    let (a0, a1) = ends(a)?;
    let (b0, b1) = ends(b)?;
    let (ua, la) = a1.sub(&a0).primitive();
    let (ub, lb) = b1.sub(&b0).primitive();
    if la != lb {
        return Ok(None);
    }
    if la.is_zero() {
        // Single points: translation.
        return Ok(Some(UnimodularAffineMap {
            linear: UnimodularAffineMap::identity(2).linear,
            translate: b0.sub(&a0),
        }));
    }
    let va = complete_basis(&ua);
    let vb = complete_basis(&ub);
    let ba = vec![vec![ua.0[0].clone(), va.0[0].clone()], vec![ua.0[1].clone(), va.0[1].clone()]];
    let bb = vec![vec![ub.0[0].clone(), vb.0[0].clone()], vec![ub.0[1].clone(), vb.0[1].clone()]];
    let lin = linalg::mat_mul(&bb, &linalg::inverse_unimodular(&ba).expect("unimodular"));
    let t = b0.sub(&IntVector(linalg::mat_vec(&lin, &a0.0)));
    Ok(Some(UnimodularAffineMap { linear: lin, translate: t }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(coords: &[i64]) -> IntVector {
        IntVector::from_i64(coords)
    }

    fn ivs(coords: &[[i64; 2]]) -> Vec<IntVector> {
        coords.iter().map(|c| IntVector::from_i64(c)).collect()
    }

    #[test]
    fn hull_is_ccw_from_lex_min() {
        let pts = ivs(&[[1, 1], [-1, -1], [1, -1], [-1, 1], [0, 0], [1, 0]]);
        let hull = convex_hull_ccw(&pts).unwrap();
        assert_eq!(hull, ivs(&[[-1, -1], [1, -1], [1, 1], [-1, 1]]));
        assert_eq!(twice_area(&hull), BigInt::from(8));
        assert!(!is_convex_position(&pts).unwrap());
        assert!(is_convex_position(&hull).unwrap());
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let pts = ivs(&[[0, 0], [1, 1], [2, 2]]);
        assert!(convex_hull_ccw(&pts).is_err());
    }

    #[test]
    fn lattice_point_counts_on_square() {
        let hull = ivs(&[[-1, -1], [1, -1], [1, 1], [-1, 1]]);
        assert_eq!(lattice_points(&hull).len(), 9);
        assert_eq!(interior_lattice_points(&hull), ivs(&[[0, 0]]));
        let bd = boundary_lattice_points(&hull);
        assert_eq!(bd.len(), 8);
        assert_eq!(bd[0], iv(&[-1, -1]));
        // Traversal starts along the bottom edge.
        assert_eq!(bd[1], iv(&[0, -1]));
    }

    #[test]
    fn segment_points_in_order() {
        let pts = segment_lattice_points(&iv(&[0, 0]), &iv(&[4, 2]));
        assert_eq!(pts, ivs(&[[0, 0], [2, 1], [4, 2]]));
    }

    #[test]
    fn canonical_form_is_a_unimodular_invariant() {
        let tri = ivs(&[[0, 0], [2, 0], [1, 2]]);
        // Apply x ↦ Lx + t with L = [[3, 1], [2, 1]], t = (−5, 7).
        let map = UnimodularAffineMap::new(
            vec![
                vec![BigInt::from(3), BigInt::from(1)],
                vec![BigInt::from(2), BigInt::from(1)],
            ],
            iv(&[-5, 7]),
        )
        .unwrap();
        let moved: Vec<IntVector> = tri.iter().map(|p| map.apply(p)).collect();
        let (c1, f1) = canonical_polygon_form(&tri).unwrap();
        let (c2, _) = canonical_polygon_form(&moved).unwrap();
        assert_eq!(c1, c2);
        // The returned map really sends the polygon to its canonical cycle.
        let image: Vec<IntVector> = tri.iter().map(|p| f1.apply(p)).collect();
        let (ih, ch) = (convex_hull_ccw(&image).unwrap(), convex_hull_ccw(&c1).unwrap());
        let (mut ihs, mut chs) = (ih.clone(), ch.clone());
        ihs.sort();
        chs.sort();
        assert_eq!(ihs, chs);
    }

    #[test]
    fn inequivalent_same_area_triangles() {
        // Both have normalized area 4, but different boundary lattice structure.
        let t1 = ivs(&[[0, 0], [1, 0], [0, 4]]);
        let t2 = ivs(&[[0, 0], [2, 0], [1, 2]]);
        assert_eq!(twice_area(&convex_hull_ccw(&t1).unwrap()), BigInt::from(4));
        assert_eq!(twice_area(&convex_hull_ccw(&t2).unwrap()), BigInt::from(4));
        assert!(affine_equivalent(&t1, &t2).unwrap().is_none());
    }

    #[test]
    fn equivalence_produces_a_working_witness() {
        let p = ivs(&[[0, 0], [1, 0], [1, 1], [0, 1]]);
        let map = UnimodularAffineMap::new(
            vec![
                vec![BigInt::from(1), BigInt::from(4)],
                vec![BigInt::from(1), BigInt::from(5)],
            ],
            iv(&[2, -3]),
        )
        .unwrap();
        let q: Vec<IntVector> = p.iter().map(|x| map.apply(x)).collect();
        let g = affine_equivalent(&p, &q).unwrap().expect("equivalent");
        let mut image: Vec<IntVector> = p.iter().map(|x| g.apply(x)).collect();
        let mut target = q.clone();
        image.sort();
        target.sort();
        assert_eq!(image, target);
    }

    #[test]
    fn segment_equivalence_matches_lengths() {
        let s1 = ivs(&[[0, 0], [2, 2]]);
        let s2 = ivs(&[[1, 0], [1, 2]]);
        let s3 = ivs(&[[0, 0], [3, 0]]);
        let g = affine_equivalent(&s1, &s2).unwrap().expect("equal length");
        let image: Vec<IntVector> = s1.iter().map(|x| g.apply(x)).collect();
        assert_eq!(image, s2);
        assert!(affine_equivalent(&s1, &s3).unwrap().is_none());
        // A segment is never equivalent to a genuine polygon.
        let tri = ivs(&[[0, 0], [1, 0], [0, 1]]);
        assert!(affine_equivalent(&s1, &tri).unwrap().is_none());
    }
}
