//! Lattice polytopes, their face lattices, and polar duality.
//!
//! A [`LatticePolytope`] is a full-dimensional polytope in ℤ^d (d ≤ 4) given by its
//! vertices. A [`PolarPair`] bundles a reflexive polytope with its polar dual and
//! both face lattices, and realizes the inclusion-reversing face correspondence
//! F ↦ F* given by ⟨F, F*⟩ = −1.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::lattice::hull::{self, HullFacet};
use crate::lattice::{linalg, IntVector, RatVector};

/// A full-dimensional lattice polytope in ℤ^dim, dim ≤ 4, given by its vertices.
///
/// Construction validates that the points are distinct, span the ambient dimension,
/// and are in convex position (each is a genuine vertex). Vertices are stored in
/// lexicographic order, so equal polytopes compare equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticePolytope {
    pub name: String,
    pub dim: usize,
    pub vertices: Vec<IntVector>,
}

impl LatticePolytope {
    /// Validates and builds a polytope from its vertex list.
    pub fn new(name: impl Into<String>, vertices: Vec<IntVector>) -> Result<Self> {
        let name = name.into();
        if vertices.is_empty() {
            return Err(Error::invalid("empty-input", "a polytope needs vertices"));
        }
        let dim = vertices[0].dim();
        if dim == 0 || dim > 4 {
            return Err(Error::invalid(
                "dimension-mismatch",
                format!("ambient dimension {dim} is not supported (need 1 ≤ dim ≤ 4)"),
            ));
        }
        if vertices.iter().any(|v| v.dim() != dim) {
            return Err(Error::invalid("dimension-mismatch", "vertices of mixed dimensions"));
        }
        let mut verts = vertices;
        verts.sort();
        let before = verts.len();
        verts.dedup();
        if verts.len() != before {
            return Err(Error::invalid("duplicate-vertex", "vertex list contains duplicates"));
        }
        if verts.len() > 64 {
            return Err(Error::invalid("too-many-vertices", "more than 64 vertices"));
        }
        let facets = hull::facets(&verts, dim)?; // Also checks full-dimensionality.
        // Convex position: each point must be a vertex, i.e. the minimal face
        // containing it (the intersection of all facets through it) is the point alone.
        for i in 0..verts.len() {
            let mut mask = u64::MAX;
            for f in &facets {
                if f.points.contains(&i) {
                    mask &= facet_mask(f);
                }
            }
            if mask != (1u64 << i) {
                return Err(Error::invalid(
                    "not-a-vertex",
                    format!("point {} is not a vertex of the hull", verts[i].display()),
                ));
            }
        }
        Ok(LatticePolytope { name, dim, vertices: verts })
    }

    /// The facets of the polytope (primitive outward normals and contact sets).
    pub fn facets(&self) -> Result<Vec<HullFacet>> {
        hull::facets(&self.vertices, self.dim)
    }

    /// Cartesian product; vertices are all coordinate concatenations v ⊕ w.
    pub fn product(&self, other: &LatticePolytope) -> Result<LatticePolytope> {
        let mut verts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for v in &self.vertices {
            for w in &other.vertices {
                let mut c = v.0.clone();
                c.extend(w.0.iter().cloned());
                verts.push(IntVector(c));
            }
        }
        LatticePolytope::new(format!("{}x{}", self.name, other.name), verts)
    }

    /// Free sum conv(self × {0} ∪ {0} × other); both summands must contain the
    /// origin in their interior for the result to be full-dimensional and sensible.
    pub fn free_sum(&self, other: &LatticePolytope) -> Result<LatticePolytope> {
        let mut verts = Vec::new();
        for v in &self.vertices {
            let mut c = v.0.clone();
            c.extend(std::iter::repeat(BigInt::from(0)).take(other.dim));
            verts.push(IntVector(c));
        }
        for w in &other.vertices {
            let mut c: Vec<BigInt> = std::iter::repeat(BigInt::from(0)).take(self.dim).collect();
            c.extend(w.0.iter().cloned());
            verts.push(IntVector(c));
        }
        LatticePolytope::new(format!("{}(+){}", self.name, other.name), verts)
    }

    /// True if the point satisfies every facet inequality.
    pub fn contains(&self, p: &IntVector) -> Result<bool> {
        Ok(self.facets()?.iter().all(|f| f.normal.dot(p) <= f.offset))
    }
}

fn facet_mask(f: &HullFacet) -> u64 {
    f.points.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

/// One face of a polytope, recorded by the indices of the vertices it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Affine dimension of the face.
    pub dim: usize,
    /// Sorted indices into the polytope's vertex list.
    pub vertices: Vec<usize>,
    /// Bitmask of `vertices`.
    pub mask: u64,
}

/// All proper faces of a polytope, graded by dimension.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    /// `by_dim[d]` lists the d-dimensional proper faces, sorted by vertex indices.
    pub by_dim: Vec<Vec<Face>>,
    /// The facet data (normals, offsets) the lattice was built from.
    pub facet_data: Vec<HullFacet>,
}

impl FaceLattice {
    /// Builds the face lattice by closing the facet vertex sets under intersection.
    pub fn build(p: &LatticePolytope) -> Result<FaceLattice> {
        let facets = p.facets()?;
        let mut masks: std::collections::BTreeSet<u64> =
            facets.iter().map(facet_mask).collect();
        // Fixed-point closure under pairwise intersection.
        loop {
            let snapshot: Vec<u64> = masks.iter().copied().collect();
            let mut grew = false;
            for i in 0..snapshot.len() {
                for j in i + 1..snapshot.len() {
                    let m = snapshot[i] & snapshot[j];
                    if m != 0 && masks.insert(m) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut by_dim: Vec<Vec<Face>> = vec![Vec::new(); p.dim];
        for mask in masks {
            let vertices: Vec<usize> =
                (0..p.vertices.len()).filter(|&i| mask & (1 << i) != 0).collect();
            let base = &p.vertices[vertices[0]];
            let diffs: Vec<Vec<BigInt>> =
                vertices[1..].iter().map(|&i| p.vertices[i].sub(base).0).collect();
            let d = linalg::rank_int(&diffs);
            if d >= p.dim {
                return Err(Error::internal("face closure produced a full-dimensional face"));
            }
            by_dim[d].push(Face { dim: d, vertices, mask });
        }
        for faces in &mut by_dim {
            faces.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        }
        // Sanity: every vertex is a 0-face, and each edge has exactly two endpoints.
        if by_dim[0].len() != p.vertices.len() {
            return Err(Error::internal("face closure lost a vertex"));
        }
        if p.dim >= 2 && by_dim[1].iter().any(|e| e.vertices.len() != 2) {
            return Err(Error::internal("an edge with more than two vertices"));
        }
        Ok(FaceLattice { by_dim, facet_data: facets })
    }

    /// The d-dimensional proper faces.
    pub fn of_dim(&self, d: usize) -> &[Face] {
        &self.by_dim[d]
    }

    /// Indices (into `of_dim(sub_dim)`) of the sub_dim-faces contained in `face`.
    pub fn subfaces(&self, face: &Face, sub_dim: usize) -> Vec<usize> {
        self.by_dim[sub_dim]
            .iter()
            .enumerate()
            .filter(|(_, g)| g.mask & face.mask == g.mask)
            .map(|(i, _)| i)
            .collect()
    }

    /// Indices (into `facet_data`) of the facets containing `face`.
    pub fn facets_containing(&self, face: &Face) -> Vec<usize> {
        self.facet_data
            .iter()
            .enumerate()
            .filter(|(_, f)| facet_mask(f) & face.mask == face.mask)
            .map(|(i, _)| i)
            .collect()
    }
}

/// The polar dual of a full-dimensional polytope with the origin in its interior.
#[derive(Clone, Debug)]
pub enum PolarDual {
    /// Every facet has lattice distance 1 from the origin: the dual is again a
    /// lattice polytope (the input is reflexive).
    Reflexive(LatticePolytope),
    /// The dual has at least one non-integral vertex.
    NotReflexive { rational_vertices: Vec<RatVector> },
}

/// Computes the polar dual {y : ⟨x, y⟩ ≥ −1 ∀x ∈ P}, i.e. with vertices n/c for each
/// facet ⟨n, ·⟩ ≤ c of P. Errors unless the origin is strictly interior.
pub fn polar_dual(p: &LatticePolytope) -> Result<PolarDual> {
    let facets = p.facets()?;
    if facets.iter().any(|f| !f.offset.is_positive()) {
        return Err(Error::invalid(
            "origin-not-interior",
            format!("polytope {} does not contain the origin in its interior", p.name),
        ));
    }
    // Facets come as outward inequalities n·x ≤ c; in the ⟨x, y⟩ ≥ −1 polar
    // convention the dual vertex over that facet is −n/c.
    if facets.iter().all(|f| f.offset.is_one()) {
        let verts: Vec<IntVector> = facets.iter().map(|f| f.normal.neg()).collect();
        return Ok(PolarDual::Reflexive(LatticePolytope::new(format!("{}*", p.name), verts)?));
    }
    let rational_vertices = facets
        .iter()
        .map(|f| {
            RatVector(
                f.normal
                    .0
                    .iter()
                    .map(|x| num_rational::BigRational::new(-x.clone(), f.offset.clone()))
                    .collect(),
            )
        })
        .collect();
    Ok(PolarDual::NotReflexive { rational_vertices })
}

/// A reflexive polytope together with its polar dual and both face lattices.
#[derive(Clone, Debug)]
pub struct PolarPair {
    pub polytope: LatticePolytope,
    pub dual: LatticePolytope,
    pub faces: FaceLattice,
    pub dual_faces: FaceLattice,
}

impl PolarPair {
    /// Builds the pair; fails with kind `not-reflexive` if the polytope is not
    /// reflexive.
    pub fn new(polytope: LatticePolytope) -> Result<PolarPair> {
        let dual = match polar_dual(&polytope)? {
            PolarDual::Reflexive(d) => d,
            PolarDual::NotReflexive { .. } => {
                return Err(Error::invalid(
                    "not-reflexive",
                    format!("polytope {} is not reflexive", polytope.name),
                ));
            }
        };
        let faces = FaceLattice::build(&polytope)?;
        let dual_faces = FaceLattice::build(&dual)?;
        Ok(PolarPair { polytope, dual, faces, dual_faces })
    }

    /// Vertex coordinates of a face of the primal polytope.
    pub fn face_vertices(&self, face: &Face) -> Vec<IntVector> {
        face.vertices.iter().map(|&i| self.polytope.vertices[i].clone()).collect()
    }

    /// Vertex coordinates of a face of the dual polytope.
    pub fn dual_face_vertices(&self, face: &Face) -> Vec<IntVector> {
        face.vertices.iter().map(|&i| self.dual.vertices[i].clone()).collect()
    }

    /// The dual face F* = {n ∈ P° : ⟨m, n⟩ = −1 on F} of a face F of P, returned as
    /// an index into `dual_faces.of_dim(dim P − 1 − dim F)`.
    pub fn dual_face(&self, face: &Face) -> Result<usize> {
        find_dual_face(&self.polytope, face, &self.dual, &self.dual_faces)
    }

    /// The primal face dual to a face of P° (the inverse correspondence).
    pub fn primal_face(&self, dual_face: &Face) -> Result<usize> {
        find_dual_face(&self.dual, dual_face, &self.polytope, &self.faces)
    }
}

fn find_dual_face(
    from: &LatticePolytope,
    face: &Face,
    to: &LatticePolytope,
    to_faces: &FaceLattice,
) -> Result<usize> {
    let minus_one = -BigInt::one();
    let mut mask = 0u64;
    for (j, w) in to.vertices.iter().enumerate() {
        if face.vertices.iter().all(|&i| from.vertices[i].dot(w) == minus_one) {
            mask |= 1 << j;
        }
    }
    let target_dim = from.dim - 1 - face.dim;
    to_faces.by_dim[target_dim]
        .iter()
        .position(|g| g.mask == mask)
        .ok_or_else(|| Error::internal("dual vertex set is not a face of the dual polytope"))
}
