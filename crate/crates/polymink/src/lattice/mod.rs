//! Lattice primitives: exact integer/rational vectors, unimodular affine maps,
//! lattice lengths, normalized volumes, polygon canonical forms and lifted lower
//! hulls. Everything is exact; nothing here ever touches floating point.

pub mod hull;
pub mod lift;
pub mod linalg;
pub mod polygon;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use lift::{lower_hull_subdivision, HullCell, LiftedHull2D};
pub use polygon::{affine_equivalent, canonical_polygon_form};

/// A lattice point or lattice vector with arbitrary-precision integer coordinates.
///
/// Comparison is lexicographic, which fixes the deterministic orderings used across
/// the engine (anchor vertices, face orderings, canonical forms).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct IntVector(pub Vec<BigInt>);

impl IntVector {
    /// Builds a vector from machine integers.
    pub fn from_i64(coords: &[i64]) -> Self {
        IntVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The zero vector of the given dimension.
    pub fn zero(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    /// True if every coordinate is zero.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Coordinatewise sum.
    pub fn add(&self, other: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), other.dim());
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Coordinatewise difference `self − other`.
    pub fn sub(&self, other: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), other.dim());
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Negation.
    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }

    /// Scalar multiple.
    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Euclidean pairing ⟨self, other⟩.
    pub fn dot(&self, other: &IntVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Content: the (nonnegative) gcd of the coordinates.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
        }
        g
    }

    /// The primitive vector in the same direction together with the content.
    /// The zero vector is returned unchanged with content 0.
    pub fn primitive(&self) -> (IntVector, BigInt) {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return (self.clone(), g);
        }
        (IntVector(self.0.iter().map(|c| c / &g).collect()), g)
    }

    /// True if the content is 1.
    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Renders as `(a, b, …)`.
    pub fn display(&self) -> String {
        let coords: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        format!("({})", coords.join(", "))
    }
}

/// A vector with arbitrary-precision rational coordinates (polar duals of
/// non-reflexive polytopes, exact solution vectors).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatVector(pub Vec<BigRational>);

impl RatVector {
    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// True if every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.denom().is_one())
    }

    /// Converts to an integer vector if every coordinate is integral.
    pub fn to_integer(&self) -> Option<IntVector> {
        if !self.is_integral() {
            return None;
        }
        Some(IntVector(self.0.iter().map(|c| c.numer().clone()).collect()))
    }
}

/// An affine map `x ↦ L·x + t` with unimodular integer linear part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnimodularAffineMap {
    /// Integer matrix with determinant ±1.
    pub linear: Vec<Vec<BigInt>>,
    /// Integer translation applied after the linear part.
    pub translate: IntVector,
}

impl UnimodularAffineMap {
    /// The identity map in the given dimension.
    pub fn identity(dim: usize) -> Self {
        let linear = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        UnimodularAffineMap { linear, translate: IntVector::zero(dim) }
    }

    /// Builds a map after checking that the linear part is square and unimodular.
    pub fn new(linear: Vec<Vec<BigInt>>, translate: IntVector) -> Result<Self> {
        let dim = translate.dim();
        if linear.len() != dim || linear.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("dimension-mismatch", "affine map shape mismatch"));
        }
        let det = linalg::det_int(&linear);
        if !(det.is_one() || (-&det).is_one()) {
            return Err(Error::invalid(
                "not-unimodular",
                format!("linear part has determinant {det}, expected ±1"),
            ));
        }
        Ok(UnimodularAffineMap { linear, translate })
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.translate.dim()
    }

    /// Applies the map to a point.
    pub fn apply(&self, v: &IntVector) -> IntVector {
        IntVector(linalg::mat_vec(&self.linear, &v.0)).add(&self.translate)
    }

    /// Applies only the linear part (appropriate for direction vectors).
    pub fn apply_linear(&self, v: &IntVector) -> IntVector {
        IntVector(linalg::mat_vec(&self.linear, &v.0))
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &UnimodularAffineMap) -> UnimodularAffineMap {
        UnimodularAffineMap {
            linear: linalg::mat_mul(&self.linear, &other.linear),
            translate: self.apply(&other.translate),
        }
    }

    /// Exact inverse.
    pub fn inverse(&self) -> UnimodularAffineMap {
        let inv = linalg::inverse_unimodular(&self.linear)
            .expect("unimodular matrix must be invertible over ℤ");
        let t = IntVector(linalg::mat_vec(&inv, &self.translate.0)).neg();
        UnimodularAffineMap { linear: inv, translate: t }
    }
}

/// Lattice length of the segment [a, b]: the number of unit lattice steps, i.e. the
/// content of b − a.
pub fn lattice_length(a: &IntVector, b: &IntVector) -> BigInt {
    b.sub(a).content()
}

/// Deduplicated, lexicographically sorted copy of a point list.
fn sorted_dedup(points: &[IntVector]) -> Vec<IntVector> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    pts
}

/// Expresses `points` in exact integer coordinates of the saturated lattice of their
/// affine span (anchored at the lexicographically least point). Returns the
/// lower-dimensional coordinates and the affine dimension.
pub fn coordinates_in_span(points: &[IntVector]) -> Result<(Vec<IntVector>, usize)> {
    let pts = sorted_dedup(points);
    if pts.is_empty() {
        return Err(Error::invalid("empty-input", "no points given"));
    }
    let anchor = &pts[0];
    let diffs: Vec<Vec<BigInt>> = pts.iter().map(|p| p.sub(anchor).0).collect();
    let basis = linalg::saturated_row_basis(&diffs);
    let d = basis.len();
    // Solve basisᵀ · x = p − anchor for each point; saturation makes x integral.
    let n = anchor.dim();
    let bt: Vec<Vec<BigInt>> = (0..n).map(|i| basis.iter().map(|row| row[i].clone()).collect()).collect();
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let rhs = p.sub(anchor).0;
        let x = linalg::solve_exact(&bt, &rhs)
            .ok_or_else(|| Error::internal("point not in its own affine span"))?;
        let mut coords = Vec::with_capacity(d);
        for c in x {
            if !c.denom().is_one() {
                return Err(Error::internal("saturated basis produced non-integral coordinates"));
            }
            coords.push(c.numer().clone());
        }
        out.push(IntVector(coords));
    }
    Ok((out, d))
}

/// Normalized volume of a lattice polytope given by (a superset of) its vertices.
///
/// The points must have affine dimension exactly `dim`; the result is dim! times the
/// Euclidean volume measured in the saturated lattice of the affine span, so the
/// standard simplex has normalized volume 1 in every dimension. Supports dim ≤ 4.
pub fn normalized_volume(points: &[IntVector], dim: usize) -> Result<BigInt> {
    if dim > 4 {
        return Err(Error::invalid("dimension-mismatch", "normalized_volume supports dim ≤ 4"));
    }
    let (coords, d) = coordinates_in_span(points)?;
    if d != dim {
        return Err(Error::invalid(
            "dimension-mismatch",
            format!("points span affine dimension {d}, expected {dim}"),
        ));
    }
    volume_full_dim(&coords, dim)
}

/// Normalized volume of full-dimensional integer points in ℤ^dim.
fn volume_full_dim(points: &[IntVector], dim: usize) -> Result<BigInt> {
    match dim {
        0 => Ok(BigInt::one()),
        1 => {
            let vals: Vec<&BigInt> = points.iter().map(|p| &p.0[0]).collect();
            let min = vals.iter().min().unwrap();
            let max = vals.iter().max().unwrap();
            Ok(*max - *min)
        }
        2 => {
            let hull = polygon::convex_hull_ccw(points)?;
            Ok(polygon::twice_area(&hull))
        }
        _ => {
            // Pyramid decomposition over the facets from an apex vertex: the
            // normalized volume is Σ_F Vol(F) · latticeheight(apex, F).
            let pts = sorted_dedup(points);
            let apex = pts[0].clone();
            let facets = hull::facets(&pts, dim)?;
            let mut total = BigInt::zero();
            for f in &facets {
                let height = &f.offset - f.normal.dot(&apex);
                debug_assert!(!height.is_negative(), "apex outside a supporting halfspace");
                if height.is_zero() {
                    continue;
                }
                let fpts: Vec<IntVector> = f.points.iter().map(|&i| pts[i].clone()).collect();
                let (fcoords, fd) = coordinates_in_span(&fpts)?;
                if fd != dim - 1 {
                    return Err(Error::internal("facet of wrong dimension"));
                }
                total += volume_full_dim(&fcoords, dim - 1)? * height;
            }
            Ok(total)
        }
    }
}
