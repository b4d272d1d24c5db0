//! Lower-hull subdivisions of lifted 2D point configurations.
//!
//! Given lattice points in the plane and exact rational heights, the lower hull of
//! the lifted points projects to a polyhedral subdivision of the convex hull of the
//! base points. The regularity decision reduces to inspecting the empty cells of
//! such subdivisions: a subdivision is *good* when every empty cell (one whose only
//! lattice points are its vertices) is a unimodular triangle.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{polygon, IntVector};
use crate::error::{Error, Result};

/// One maximal cell of a lower-hull subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullCell {
    /// Cell vertices in counterclockwise order starting at the lexicographic minimum.
    pub vertices: Vec<IntVector>,
    /// Indices (into the input point list) of the lifted points lying on this cell's
    /// supporting plane, sorted ascending.
    pub point_indices: Vec<usize>,
    /// Number of lattice points of the cell polygon (including non-input points).
    pub lattice_point_count: usize,
    /// True if the only lattice points of the cell are its vertices.
    pub is_empty: bool,
    /// True if the cell is a triangle of normalized area 1.
    pub is_unimodular_triangle: bool,
}

/// A lower-hull subdivision of the convex hull of `base`.
#[derive(Clone, Debug)]
pub struct LiftedHull2D {
    pub base: Vec<IntVector>,
    pub heights: Vec<BigRational>,
    pub cells: Vec<HullCell>,
}

impl LiftedHull2D {
    /// The goodness test used by the regularity decision: every empty cell must be a
    /// unimodular triangle.
    pub fn all_empty_cells_unimodular(&self) -> bool {
        self.cells.iter().all(|c| !c.is_empty || c.is_unimodular_triangle)
    }

    /// The empty cells that are not unimodular triangles (the obstructions).
    pub fn bad_cells(&self) -> Vec<&HullCell> {
        self.cells
            .iter()
            .filter(|c| c.is_empty && !c.is_unimodular_triangle)
            .collect()
    }
}

/// Computes the lower-hull subdivision of the given lifted point configuration.
///
/// `base` must span dimension 2 and `heights` must match it in length. The result's
/// cells are sorted by vertex list, and their areas are checked to tile the hull of
/// the base points exactly.
pub fn lower_hull_subdivision(
    base: &[IntVector],
    heights: &[BigRational],
) -> Result<LiftedHull2D> {
    if base.len() != heights.len() {
        return Err(Error::invalid(
            "dimension-mismatch",
            "one height per base point is required",
        ));
    }
    let outer = polygon::convex_hull_ccw(base)?;
    // Clear denominators: scaling all heights by a positive integer does not change
    // the lower-hull combinatorics.
    let mut denom_lcm = BigInt::one();
    for h in heights {
        denom_lcm = denom_lcm.lcm(h.denom());
    }
    let h: Vec<BigInt> = heights.iter().map(|x| x.numer() * (&denom_lcm / x.denom())).collect();

    let n = base.len();
    let lift = |i: usize| -> [&BigInt; 2] { [&base[i].0[0], &base[i].0[1]] };
    let mut contact_sets: BTreeSet<Vec<usize>> = BTreeSet::new();

    for triple in (0..n).combinations(3) {
        let (i, j, k) = (triple[0], triple[1], triple[2]);
        // Normal of the plane through the three lifted points.
        let [xi, yi] = lift(i);
        let [xj, yj] = lift(j);
        let [xk, yk] = lift(k);
        let ux = xj - xi;
        let uy = yj - yi;
        let uz = &h[j] - &h[i];
        let vx = xk - xi;
        let vy = yk - yi;
        let vz = &h[k] - &h[i];
        let mut nx = &uy * &vz - &uz * &vy;
        let mut ny = &uz * &vx - &ux * &vz;
        let mut nz = &ux * &vy - &uy * &vx;
        if nz.is_zero() {
            continue; // Collinear base points: no unique non-vertical plane.
        }
        if nz.is_negative() {
            nx = -nx;
            ny = -ny;
            nz = -nz;
        }
        // Lower-supporting test: every lifted point must lie on or above the plane.
        let level = |t: usize| -> BigInt {
            let [x, y] = lift(t);
            &nx * (x - xi) + &ny * (y - yi) + &nz * (&h[t] - &h[i])
        };
        let mut contact = Vec::new();
        let mut supporting = true;
        for t in 0..n {
            let s = level(t);
            if s.is_negative() {
                supporting = false;
                break;
            }
            if s.is_zero() {
                contact.push(t);
            }
        }
        if supporting {
            contact_sets.insert(contact);
        }
    }

    // Drop contact sets with a collinear base (lower-hull edges caught by a plane
    // tilted around them): keep only genuine 2D cells.
    let mut cells = Vec::new();
    for contact in contact_sets {
        let pts: Vec<IntVector> = contact.iter().map(|&i| base[i].clone()).collect();
        let Ok(verts) = polygon::convex_hull_ccw(&pts) else {
            continue;
        };
        let lattice = polygon::lattice_points(&verts);
        let is_empty = lattice.len() == verts.len();
        let is_unimodular_triangle = verts.len() == 3 && polygon::twice_area(&verts).is_one();
        cells.push(HullCell {
            vertices: verts,
            point_indices: contact,
            lattice_point_count: lattice.len(),
            is_empty,
            is_unimodular_triangle,
        });
    }
    cells.sort_by(|a, b| a.vertices.cmp(&b.vertices));

    // The cells must tile the hull of the base exactly.
    let total: BigInt = cells.iter().map(|c| polygon::twice_area(&c.vertices)).sum();
    if total != polygon::twice_area(&outer) {
        return Err(Error::internal(format!(
            "lower-hull cells do not tile the base polygon: cell area {total} vs hull area {}",
            polygon::twice_area(&outer)
        )));
    }

    Ok(LiftedHull2D { base: base.to_vec(), heights: heights.to_vec(), cells })
}
