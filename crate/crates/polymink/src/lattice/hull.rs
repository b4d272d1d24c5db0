//! Facet enumeration for full-dimensional lattice polytopes in dimension ≤ 4,
//! by exhaustive supporting-hyperplane search. Exact and deterministic: points
//! with small coordinates take an i128 path (cofactor normals, bounds chosen so
//! no intermediate can overflow), everything else falls back to BigInt.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::{linalg, IntVector};
use crate::error::{Error, Result};

/// One facet of a full-dimensional polytope: primitive outward normal, offset, and
/// the indices (into the input list) of the points lying on the facet. Every input
/// point p satisfies normal · p ≤ offset, with equality exactly on `points`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullFacet {
    pub normal: IntVector,
    pub offset: BigInt,
    pub points: Vec<usize>,
}

/// Enumerates the facets of conv(points), which must be full-dimensional in ℤ^dim
/// with dim ≤ 4. Facets are sorted by (normal, offset) for determinism.
pub fn facets(points: &[IntVector], dim: usize) -> Result<Vec<HullFacet>> {
    if dim == 0 || dim > 4 {
        return Err(Error::invalid("dimension-mismatch", "facets supports 1 ≤ dim ≤ 4"));
    }
    if points.is_empty() {
        return Err(Error::invalid("empty-input", "no points given"));
    }
    if points.iter().any(|p| p.dim() != dim) {
        return Err(Error::invalid(
            "dimension-mismatch",
            "ambient dimension must equal the requested dimension",
        ));
    }
    if dim == 1 {
        return facets_1d(points);
    }
    if let Some(small) = small_coordinates(points) {
        return facets_small(&small, points, dim);
    }
    facets_bigint(points, dim)
}

/// The points as i128 rows if every coordinate is small enough for the i128
/// path (|c| < 2²⁰ keeps 3×3 cofactors and their dot products far from
/// overflow), else `None`.
fn small_coordinates(points: &[IntVector]) -> Option<Vec<Vec<i128>>> {
    const BOUND: i128 = 1 << 20;
    points
        .iter()
        .map(|p| {
            p.0.iter()
                .map(|c| c.to_i128().filter(|v| v.abs() < BOUND))
                .collect::<Option<Vec<i128>>>()
        })
        .collect()
}

/// i128 facet enumeration; exact for inputs admitted by [`small_coordinates`].
fn facets_small(pts: &[Vec<i128>], original: &[IntVector], dim: usize) -> Result<Vec<HullFacet>> {
    let n = pts.len();
    let mut seen: BTreeSet<(Vec<i128>, i128)> = BTreeSet::new();
    let mut out: Vec<HullFacet> = Vec::new();

    for subset in (0..n).combinations(dim) {
        let base = &pts[subset[0]];
        let diffs: Vec<Vec<i128>> = subset[1..]
            .iter()
            .map(|&i| (0..dim).map(|k| pts[i][k] - base[k]).collect())
            .collect();
        let mut normal = cofactor_normal(&diffs, dim);
        if normal.iter().all(|&c| c == 0) {
            continue; // Affinely degenerate subset: no unique hyperplane.
        }
        let g = normal.iter().fold(0i128, |acc, &c| num_integer::gcd(acc, c.abs()));
        for c in &mut normal {
            *c /= g;
        }
        let mut offset: i128 = (0..dim).map(|k| normal[k] * base[k]).sum();

        // Dedupe by sign-canonical plane before classifying.
        let flip = match normal.iter().find(|&&c| c != 0) {
            Some(&c) => c < 0,
            None => false,
        };
        let key = if flip {
            (normal.iter().map(|&c| -c).collect::<Vec<i128>>(), -offset)
        } else {
            (normal.clone(), offset)
        };
        if !seen.insert(key) {
            continue;
        }

        let mut has_below = false;
        let mut has_above = false;
        for p in pts {
            let s: i128 = (0..dim).map(|k| normal[k] * p[k]).sum::<i128>() - offset;
            if s > 0 {
                has_above = true;
            } else if s < 0 {
                has_below = true;
            }
            if has_above && has_below {
                break;
            }
        }
        if has_above && has_below {
            continue; // Not supporting.
        }
        if !has_above && !has_below {
            return Err(Error::invalid("dimension-mismatch", "points are not full-dimensional"));
        }
        if has_above {
            for c in &mut normal {
                *c = -*c;
            }
            offset = -offset;
        }
        let contact: Vec<usize> = (0..n)
            .filter(|&i| (0..dim).map(|k| normal[k] * pts[i][k]).sum::<i128>() == offset)
            .collect();
        out.push(HullFacet {
            normal: IntVector(normal.iter().map(|&c| BigInt::from(c)).collect()),
            offset: BigInt::from(offset),
            points: contact,
        });
    }

    finish_facets(out, original, dim)
}

/// Generalized cross product: a vector orthogonal to the `dim − 1` rows, via
/// cofactor expansion. Zero iff the rows do not span a hyperplane.
fn cofactor_normal(rows: &[Vec<i128>], dim: usize) -> Vec<i128> {
    match dim {
        2 => vec![rows[0][1], -rows[0][0]],
        3 => {
            let (a, b) = (&rows[0], &rows[1]);
            vec![
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        }
        4 => {
            let det3 = |c0: usize, c1: usize, c2: usize| -> i128 {
                rows[0][c0] * (rows[1][c1] * rows[2][c2] - rows[1][c2] * rows[2][c1])
                    - rows[0][c1] * (rows[1][c0] * rows[2][c2] - rows[1][c2] * rows[2][c0])
                    + rows[0][c2] * (rows[1][c0] * rows[2][c1] - rows[1][c1] * rows[2][c0])
            };
            vec![-det3(1, 2, 3), det3(0, 2, 3), -det3(0, 1, 3), det3(0, 1, 2)]
        }
        _ => unreachable!("dim checked by caller"),
    }
}

/// BigInt facet enumeration, for coordinates too large for the i128 path.
fn facets_bigint(points: &[IntVector], dim: usize) -> Result<Vec<HullFacet>> {
    let n = points.len();
    let mut seen: BTreeSet<(Vec<BigInt>, BigInt)> = BTreeSet::new();
    let mut out: Vec<HullFacet> = Vec::new();

    for subset in (0..n).combinations(dim) {
        // Hyperplane through the subset: normal spans the kernel of the difference rows.
        let base = &points[subset[0]];
        let diffs: Vec<Vec<BigInt>> =
            subset[1..].iter().map(|&i| points[i].sub(base).0).collect();
        let kernel = linalg::kernel_basis_with_cols(&diffs, dim);
        if kernel.len() != 1 {
            continue; // Affinely degenerate subset: no unique hyperplane.
        }
        let mut normal = IntVector(kernel.into_iter().next().unwrap());
        let mut offset = normal.dot(base);

        // Classify all points relative to the hyperplane.
        let mut has_below = false;
        let mut has_above = false;
        for p in points {
            let s = normal.dot(p) - &offset;
            if s.is_positive() {
                has_above = true;
            } else if s.is_negative() {
                has_below = true;
            }
            if has_above && has_below {
                break;
            }
        }
        if has_above && has_below {
            continue; // Not supporting.
        }
        if has_above {
            normal = normal.neg();
            offset = -offset;
        }
        if !has_above && !has_below {
            return Err(Error::invalid(
                "dimension-mismatch",
                "points are not full-dimensional",
            ));
        }
        let key = (normal.0.clone(), offset.clone());
        if !seen.insert(key) {
            continue;
        }
        let contact: Vec<usize> =
            (0..n).filter(|&i| normal.dot(&points[i]) == offset).collect();
        out.push(HullFacet { normal, offset, points: contact });
    }

    finish_facets(out, points, dim)
}

/// Shared tail of both paths: full-dimensionality count, a cross-path guard
/// that every point satisfies every inequality, and the deterministic sort.
fn finish_facets(
    mut out: Vec<HullFacet>,
    points: &[IntVector],
    dim: usize,
) -> Result<Vec<HullFacet>> {
    if out.len() < dim + 1 {
        return Err(Error::invalid(
            "dimension-mismatch",
            "points are not full-dimensional",
        ));
    }
    for f in &out {
        if points.iter().any(|p| f.normal.dot(p) > f.offset) {
            return Err(Error::internal(format!(
                "facet {} · x ≤ {} violated by an input point",
                f.normal.display(),
                f.offset
            )));
        }
    }
    out.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    Ok(out)
}

fn facets_1d(points: &[IntVector]) -> Result<Vec<HullFacet>> {
    let vals: Vec<&BigInt> = points.iter().map(|p| &p.0[0]).collect();
    let min = (*vals.iter().min().unwrap()).clone();
    let max = (*vals.iter().max().unwrap()).clone();
    if min == max {
        return Err(Error::invalid("dimension-mismatch", "points are not full-dimensional"));
    }
    let lo: Vec<usize> = (0..points.len()).filter(|&i| points[i].0[0] == min).collect();
    let hi: Vec<usize> = (0..points.len()).filter(|&i| points[i].0[0] == max).collect();
    let mut out = vec![
        HullFacet { normal: IntVector::from_i64(&[-1]), offset: -min, points: lo },
        HullFacet { normal: IntVector::from_i64(&[1]), offset: max, points: hi },
    ];
    out.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(coords: &[i64]) -> IntVector {
        IntVector::from_i64(coords)
    }

    #[test]
    fn square_facets() {
        let pts = vec![iv(&[0, 0]), iv(&[1, 0]), iv(&[1, 1]), iv(&[0, 1])];
        let fs = facets(&pts, 2).unwrap();
        assert_eq!(fs.len(), 4);
        // Every facet of a square touches exactly two vertices.
        assert!(fs.iter().all(|f| f.points.len() == 2));
        // All points obey every inequality.
        for f in &fs {
            for p in &pts {
                assert!(f.normal.dot(p) <= f.offset);
            }
            assert!(f.normal.is_primitive());
        }
    }

    #[test]
    fn octahedron_facets() {
        let pts = vec![
            iv(&[1, 0, 0]),
            iv(&[-1, 0, 0]),
            iv(&[0, 1, 0]),
            iv(&[0, -1, 0]),
            iv(&[0, 0, 1]),
            iv(&[0, 0, -1]),
        ];
        let fs = facets(&pts, 3).unwrap();
        assert_eq!(fs.len(), 8);
        assert!(fs.iter().all(|f| f.offset == BigInt::from(1)));
        assert!(fs.iter().all(|f| f.points.len() == 3));
    }

    #[test]
    fn cross_polytope_4d_facets() {
        let mut pts = Vec::new();
        for i in 0..4 {
            for s in [1i64, -1] {
                let mut c = [0i64; 4];
                c[i] = s;
                pts.push(iv(&c));
            }
        }
        let fs = facets(&pts, 4).unwrap();
        assert_eq!(fs.len(), 16);
        assert!(fs.iter().all(|f| f.offset == BigInt::from(1) && f.points.len() == 4));
    }

    #[test]
    fn cube_4d_facets() {
        let mut pts = Vec::new();
        for x in [-1i64, 1] {
            for y in [-1i64, 1] {
                for z in [-1i64, 1] {
                    for w in [-1i64, 1] {
                        pts.push(iv(&[x, y, z, w]));
                    }
                }
            }
        }
        let fs = facets(&pts, 4).unwrap();
        assert_eq!(fs.len(), 8);
        assert!(fs.iter().all(|f| f.points.len() == 8));
    }

    #[test]
    fn interior_points_are_ignored() {
        let pts = vec![iv(&[0, 0]), iv(&[3, 0]), iv(&[0, 3]), iv(&[1, 1])];
        let fs = facets(&pts, 2).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|f| !f.points.contains(&3)));
    }

    #[test]
    fn small_and_bigint_paths_agree() {
        // Hexagon × pentagon product: 30 vertices in dimension 4.
        let hexagon = [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]];
        let pentagon = [[1, 0], [1, 1], [0, 1], [-1, 0], [0, -1]];
        let mut pts = Vec::new();
        for h in hexagon {
            for p in pentagon {
                pts.push(iv(&[h[0], h[1], p[0], p[1]]));
            }
        }
        let fast = facets(&pts, 4).unwrap();
        let slow = facets_bigint(&pts, 4).unwrap();
        assert_eq!(fast, slow);

        let pts3 =
            vec![iv(&[0, 0, 0]), iv(&[4, 0, 0]), iv(&[0, 4, 0]), iv(&[0, 0, 4]), iv(&[1, 1, 1])];
        assert_eq!(facets(&pts3, 3).unwrap(), facets_bigint(&pts3, 3).unwrap());
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let pts = vec![iv(&[0, 0]), iv(&[1, 1]), iv(&[2, 2])];
        assert!(facets(&pts, 2).is_err());
        let seg = vec![iv(&[0]), iv(&[5]), iv(&[2])];
        let fs = facets(&seg, 1).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[1].offset, BigInt::from(5));
    }
}
