//! Scaled 2-faces and their Minkowski decompositions.
//!
//! Every 2-face F of a reflexive 4-polytope P is paired with a dual edge F* of P°.
//! The object that gets decomposed is the *scaled face* ℓ(F*)·F, viewed as a lattice
//! polygon in a fixed 2D chart of the face's tangent lattice. A decomposition
//! partitions the polygon's multiset of primitive boundary edge vectors into
//! *summand profiles*: opposite pairs {d, −d} (lattice segments) and zero-sum
//! unimodular triples {a, b, c} (standard triangles). The same machinery, with the
//! polar roles swapped, provides the charts for the 2-faces of P° on which the
//! regularity decision runs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{lattice_length, linalg, polygon, IntVector};
use crate::polytope::PolarPair;

/// A directed boundary edge of a scaled-face polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledEdge {
    /// Index of the edge's start vertex in the polygon cycle.
    pub from: usize,
    /// Index of the edge's end vertex in the polygon cycle.
    pub to: usize,
    /// Primitive chart direction of the counterclockwise traversal.
    pub direction: IntVector,
    /// Lattice length of the edge in the scaled polygon.
    pub length: BigInt,
}

/// A 2-face expressed in a fixed 2D chart, together with its scaling factor.
///
/// The chart is the canonical (Hermite-reduced) basis of the saturated tangent
/// lattice, anchored at the lexicographically least vertex of the face, so equal
/// faces always get identical charts.
#[derive(Clone, Debug)]
pub struct ScaledFace {
    /// Human-readable identifier used in diagnostics (e.g. `F2[3]`).
    pub label: String,
    /// The scaling factor ℓ applied to the face.
    pub scale: BigInt,
    /// Ambient anchor point (lex-least vertex of the unscaled face).
    pub anchor: IntVector,
    /// Two ambient vectors forming the chart basis of the tangent lattice.
    pub basis: Vec<IntVector>,
    /// Unscaled face vertices in chart coordinates, ccw hull cycle.
    pub vertices_chart: Vec<IntVector>,
    /// Scaled polygon (scale × unscaled), ccw hull cycle.
    pub polygon: Vec<IntVector>,
    /// Counterclockwise boundary edges of `polygon`.
    pub edges: Vec<ScaledEdge>,
}

impl ScaledFace {
    /// Builds the chart for `scale` × conv(vertices), where the vertices live in the
    /// ambient lattice and must span an affine plane.
    pub fn build(label: impl Into<String>, vertices: &[IntVector], scale: BigInt) -> Result<Self> {
        let label = label.into();
        if vertices.len() < 3 {
            return Err(Error::invalid("degenerate", "a 2-face needs at least 3 vertices"));
        }
        if !scale.is_positive() {
            return Err(Error::invalid("invalid-scale", "scale must be a positive integer"));
        }
        let mut sorted = vertices.to_vec();
        sorted.sort();
        sorted.dedup();
        let anchor = sorted[0].clone();
        let diffs: Vec<Vec<BigInt>> = sorted.iter().map(|v| v.sub(&anchor).0).collect();
        let basis_rows = linalg::saturated_row_basis(&diffs);
        if basis_rows.len() != 2 {
            return Err(Error::invalid(
                "dimension-mismatch",
                format!("face {label} does not span dimension 2"),
            ));
        }
        let basis: Vec<IntVector> = basis_rows.into_iter().map(IntVector).collect();
        let chart_pts: Vec<IntVector> = sorted
            .iter()
            .map(|v| chart_coords(&basis, &v.sub(&anchor)))
            .collect::<Result<_>>()?;
        let vertices_chart = polygon::convex_hull_ccw(&chart_pts)?;
        let poly: Vec<IntVector> = vertices_chart.iter().map(|p| p.scale(&scale)).collect();
        let mut edges = Vec::with_capacity(poly.len());
        for i in 0..poly.len() {
            let j = (i + 1) % poly.len();
            let (direction, length) = poly[j].sub(&poly[i]).primitive();
            edges.push(ScaledEdge { from: i, to: j, direction, length });
        }
        Ok(ScaledFace { label, scale, anchor, basis, vertices_chart, polygon: poly, edges })
    }

    /// Chart coordinates of an ambient point on the unscaled face plane.
    pub fn to_chart(&self, p: &IntVector) -> Result<IntVector> {
        chart_coords(&self.basis, &p.sub(&self.anchor))
    }

    /// Chart coordinates of an ambient direction parallel to the face.
    pub fn direction_to_chart(&self, d: &IntVector) -> Result<IntVector> {
        chart_coords(&self.basis, d)
    }

    /// Ambient point of unscaled chart coordinates.
    pub fn from_chart(&self, x: &IntVector) -> IntVector {
        self.anchor.add(&self.basis[0].scale(&x.0[0])).add(&self.basis[1].scale(&x.0[1]))
    }

    /// Ambient direction of a chart direction.
    pub fn direction_from_chart(&self, d: &IntVector) -> IntVector {
        self.basis[0].scale(&d.0[0]).add(&self.basis[1].scale(&d.0[1]))
    }

    /// The boundary edge of the (unscaled) face with the given ambient endpoints,
    /// as an index into `edges`.
    pub fn edge_index_for(&self, a: &IntVector, b: &IntVector) -> Result<usize> {
        let ca = self.to_chart(a)?;
        let cb = self.to_chart(b)?;
        for (i, e) in self.edges.iter().enumerate() {
            let from = &self.vertices_chart[e.from];
            let to = &self.vertices_chart[e.to];
            if (from == &ca && to == &cb) || (from == &cb && to == &ca) {
                return Ok(i);
            }
        }
        Err(Error::internal(format!(
            "edge {} – {} not found on face {}",
            a.display(),
            b.display(),
            self.label
        )))
    }

    /// The multiset of primitive ccw edge directions of the scaled polygon, with
    /// multiplicity = lattice length.
    pub fn edge_direction_multiset(&self) -> Result<BTreeMap<IntVector, u64>> {
        let mut counts = BTreeMap::new();
        for e in &self.edges {
            let c = e
                .length
                .to_u64()
                .ok_or_else(|| Error::invalid("too-complex", "edge length exceeds u64"))?;
            *counts.entry(e.direction.clone()).or_insert(0) += c;
        }
        Ok(counts)
    }
}

/// Exact chart-coordinate solve: expresses `v` in the 2-row basis, requiring
/// integrality (guaranteed when the basis is saturated and v lies in the span).
fn chart_coords(basis: &[IntVector], v: &IntVector) -> Result<IntVector> {
    let n = v.dim();
    let bt: Vec<Vec<BigInt>> =
        (0..n).map(|i| basis.iter().map(|row| row.0[i].clone()).collect()).collect();
    let x = linalg::solve_exact(&bt, &v.0)
        .ok_or_else(|| Error::internal("point outside the face chart plane"))?;
    let mut coords = Vec::with_capacity(2);
    for c in x {
        if !c.denom().is_one() {
            return Err(Error::internal("non-integral chart coordinates"));
        }
        coords.push(c.numer().clone());
    }
    Ok(IntVector(coords))
}

/// One Minkowski summand profile: an opposite pair of primitive directions (a
/// lattice segment) or a zero-sum unimodular triple (a standard triangle).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SummandProfile {
    /// Segment with primitive direction d, standing for the pair {d, −d}; the
    /// stored representative has positive first nonzero coordinate.
    Segment(IntVector),
    /// Standard triangle with primitive zero-sum edge directions, sorted.
    Triangle([IntVector; 3]),
}

impl SummandProfile {
    /// Canonical segment profile for the direction d (or −d).
    pub fn segment(d: &IntVector) -> Result<Self> {
        if !d.is_primitive() {
            return Err(Error::invalid("not-primitive", "segment direction must be primitive"));
        }
        Ok(SummandProfile::Segment(canonical_sign(d)))
    }

    /// Canonical triangle profile; validates zero sum, primitivity, unimodularity.
    pub fn triangle(a: &IntVector, b: &IntVector, c: &IntVector) -> Result<Self> {
        if !a.add(b).add(c).is_zero() {
            return Err(Error::invalid("not-zero-sum", "triangle directions must sum to zero"));
        }
        for d in [a, b, c] {
            if !d.is_primitive() {
                return Err(Error::invalid(
                    "not-primitive",
                    "triangle directions must be primitive",
                ));
            }
        }
        let det = &a.0[0] * &b.0[1] - &a.0[1] * &b.0[0];
        if !(det.is_one() || (-&det).is_one()) {
            return Err(Error::invalid(
                "not-unimodular",
                "triangle directions must span a unimodular triangle",
            ));
        }
        let mut t = [a.clone(), b.clone(), c.clone()];
        t.sort();
        Ok(SummandProfile::Triangle(t))
    }

    /// The multiset of ccw directions this profile consumes.
    pub fn directions(&self) -> Vec<IntVector> {
        match self {
            SummandProfile::Segment(d) => vec![d.clone(), d.neg()],
            SummandProfile::Triangle(t) => t.to_vec(),
        }
    }

    /// True if the profile's direction multiset contains d.
    pub fn contains_direction(&self, d: &IntVector) -> bool {
        match self {
            SummandProfile::Segment(s) => s == d || &s.neg() == d,
            SummandProfile::Triangle(t) => t.iter().any(|x| x == d),
        }
    }

    /// Summand dimension: 1 for segments, 2 for triangles.
    pub fn summand_dim(&self) -> usize {
        match self {
            SummandProfile::Segment(_) => 1,
            SummandProfile::Triangle(_) => 2,
        }
    }

    /// Renders like `seg(1, 0)` or `tri[(0, 1), (1, 0), (-1, -1)]`.
    pub fn display(&self) -> String {
        match self {
            SummandProfile::Segment(d) => format!("seg{}", d.display()),
            SummandProfile::Triangle(t) => {
                format!("tri[{}, {}, {}]", t[0].display(), t[1].display(), t[2].display())
            }
        }
    }
}

fn canonical_sign(d: &IntVector) -> IntVector {
    match d.0.iter().find(|c| !c.is_zero()) {
        Some(first) if first < &BigInt::zero() => d.neg(),
        _ => d.clone(),
    }
}

/// A full Minkowski decomposition of one scaled face: a sorted multiset of profiles
/// that exactly partitions the face's edge-direction multiset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decomposition {
    pub summands: Vec<SummandProfile>,
}

impl Decomposition {
    /// Indices of the summands whose profile contains the direction d.
    pub fn summands_with_direction(&self, d: &IntVector) -> Vec<usize> {
        self.summands
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains_direction(d))
            .map(|(i, _)| i)
            .collect()
    }

    /// True if every summand is a segment.
    pub fn is_all_segments(&self) -> bool {
        self.summands.iter().all(|s| matches!(s, SummandProfile::Segment(_)))
    }

    /// True if every summand is a triangle.
    pub fn is_all_triangles(&self) -> bool {
        self.summands.iter().all(|s| matches!(s, SummandProfile::Triangle(_)))
    }

    /// Number of triangle summands.
    pub fn triangle_count(&self) -> usize {
        self.summands.iter().filter(|s| matches!(s, SummandProfile::Triangle(_))).count()
    }

    /// Renders like `{seg(1, 0), tri[…]}`.
    pub fn display(&self) -> String {
        let parts: Vec<String> = self.summands.iter().map(|s| s.display()).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Hard cap on how many decompositions a single face may have before the input is
/// rejected as too complex to sweep.
const MAX_DECOMPOSITIONS_PER_FACE: usize = 1 << 20;

/// Enumerates every Minkowski decomposition of the scaled face into segments and
/// standard triangles, in a canonical (sorted) order. The list may be empty.
pub fn enumerate_summand_decompositions(face: &ScaledFace) -> Result<Vec<Decomposition>> {
    let counts = face.edge_direction_multiset()?;
    let mut acc = Vec::new();
    let mut current = Vec::new();
    let mut counts = counts;
    dfs_partitions(&mut counts, &mut current, None, &mut acc)?;
    acc.sort();
    debug_assert!(acc.windows(2).all(|w| w[0] != w[1]), "duplicate decompositions generated");
    Ok(acc)
}

/// Recursive enumeration step. Copies of the lex-smallest direction d are
/// consumed consecutively (triangles only remove directions ≥ d), so requiring
/// the summands assigned to successive copies of the same d to be monotone
/// non-decreasing — the `floor` argument — makes each decomposition appear
/// exactly once.
fn dfs_partitions(
    counts: &mut BTreeMap<IntVector, u64>,
    current: &mut Vec<SummandProfile>,
    floor: Option<(&IntVector, &SummandProfile)>,
    acc: &mut Vec<Decomposition>,
) -> Result<()> {
    // Find the lex-smallest direction still unconsumed.
    let Some(d) = counts.iter().find(|(_, &c)| c > 0).map(|(d, _)| d.clone()) else {
        let mut summands = current.clone();
        summands.sort();
        acc.push(Decomposition { summands });
        if acc.len() > MAX_DECOMPOSITIONS_PER_FACE {
            return Err(Error::invalid(
                "too-complex",
                "a single face has more than 2^20 decompositions",
            ));
        }
        return Ok(());
    };
    let min_profile = floor.and_then(|(fd, fp)| (*fd == d).then_some(fp));
    *counts.get_mut(&d).unwrap() -= 1;

    // Branch 1: pair d with −d as a segment.
    let neg = d.neg();
    if counts.get(&neg).copied().unwrap_or(0) > 0 {
        let seg = SummandProfile::segment(&d)?;
        if min_profile.is_none_or(|mp| *mp <= seg) {
            *counts.get_mut(&neg).unwrap() -= 1;
            current.push(seg.clone());
            dfs_partitions(counts, current, Some((&d, &seg)), acc)?;
            current.pop();
            *counts.get_mut(&neg).unwrap() += 1;
        }
    }

    // Branch 2: complete d to a triangle {d, e, f} with f = −d−e, e ≤ f to avoid
    // generating the same block twice.
    let available: Vec<IntVector> =
        counts.iter().filter(|(_, &c)| c > 0).map(|(k, _)| k.clone()).collect();
    for e in available {
        let f = d.neg().sub(&e);
        if f < e || !f.is_primitive() {
            continue;
        }
        let need_f = if f == e { 2 } else { 1 };
        if counts.get(&f).copied().unwrap_or(0) < need_f
            || (f != e && counts.get(&e).copied().unwrap_or(0) < 1)
        {
            continue;
        }
        let det = &d.0[0] * &e.0[1] - &d.0[1] * &e.0[0];
        if !(det.is_one() || (-&det).is_one()) {
            continue;
        }
        let tri = SummandProfile::triangle(&d, &e, &f)?;
        if min_profile.is_some_and(|mp| *mp > tri) {
            continue;
        }
        *counts.get_mut(&e).unwrap() -= 1;
        *counts.get_mut(&f).unwrap() -= 1;
        current.push(tri.clone());
        dfs_partitions(counts, current, Some((&d, &tri)), acc)?;
        current.pop();
        *counts.get_mut(&f).unwrap() += 1;
        *counts.get_mut(&e).unwrap() += 1;
    }

    *counts.get_mut(&d).unwrap() += 1;
    Ok(())
}

/// Builds the scaled faces ℓ(F*)·F for every 2-face F of the primal polytope, in
/// face-lattice order.
pub fn scaled_faces_of_primal(pair: &PolarPair) -> Result<Vec<ScaledFace>> {
    let mut out = Vec::new();
    for (i, face) in pair.faces.of_dim(2).iter().enumerate() {
        let dual_idx = pair.dual_face(face)?;
        let dual_edge = &pair.dual_faces.of_dim(1)[dual_idx];
        let ends = pair.dual_face_vertices(dual_edge);
        let scale = lattice_length(&ends[0], &ends[1]);
        let verts = pair.face_vertices(face);
        out.push(ScaledFace::build(format!("F2[{i}]"), &verts, scale)?);
    }
    Ok(out)
}

/// Builds the scaled faces ℓ(σ*)·σ for every 2-face σ of the dual polytope, in
/// face-lattice order.
pub fn scaled_faces_of_dual(pair: &PolarPair) -> Result<Vec<ScaledFace>> {
    let mut out = Vec::new();
    for (i, face) in pair.dual_faces.of_dim(2).iter().enumerate() {
        let primal_idx = pair.primal_face(face)?;
        let primal_edge = &pair.faces.of_dim(1)[primal_idx];
        let ends = pair.face_vertices(primal_edge);
        let scale = lattice_length(&ends[0], &ends[1]);
        let verts = pair.dual_face_vertices(face);
        out.push(ScaledFace::build(format!("G2[{i}]"), &verts, scale)?);
    }
    Ok(out)
}

/// Diagnostic for a face that admits no decomposition.
#[derive(Clone, Debug)]
pub struct UndecomposableFace {
    /// Index into the primal 2-face list.
    pub face_index: usize,
    /// The face's scaled polygon, for error messages.
    pub description: String,
}

/// Checks whether every scaled 2-face admits at least one decomposition; returns a
/// diagnostic for the first offender, or `None` when the polytope is simply
/// decomposable.
pub fn simple_decomposability_obstruction(
    pair: &PolarPair,
) -> Result<Option<UndecomposableFace>> {
    for (i, sf) in scaled_faces_of_primal(pair)?.iter().enumerate() {
        if enumerate_summand_decompositions(sf)?.is_empty() {
            let poly: Vec<String> = sf.polygon.iter().map(|p| p.display()).collect();
            return Ok(Some(UndecomposableFace {
                face_index: i,
                description: format!(
                    "face {} with scaled polygon [{}] admits no decomposition",
                    sf.label,
                    poly.join(", ")
                ),
            }));
        }
    }
    Ok(None)
}

/// The full space of decomposition choices for a polytope: per 2-face, the list of
/// admissible decompositions, swept in mixed-radix lexicographic order.
#[derive(Clone, Debug)]
pub struct DecompositionSweep {
    pub faces: Vec<ScaledFace>,
    pub options: Vec<Vec<Decomposition>>,
}

/// One point of the sweep: an option index per 2-face.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecompositionChoice {
    pub indices: Vec<usize>,
}

impl DecompositionSweep {
    /// Builds the sweep; errors if some face has no decomposition.
    pub fn new(pair: &PolarPair) -> Result<Self> {
        let faces = scaled_faces_of_primal(pair)?;
        let mut options = Vec::with_capacity(faces.len());
        for sf in &faces {
            let opts = enumerate_summand_decompositions(sf)?;
            if opts.is_empty() {
                return Err(Error::invalid(
                    "not-decomposable",
                    format!("face {} admits no decomposition", sf.label),
                ));
            }
            options.push(opts);
        }
        Ok(DecompositionSweep { faces, options })
    }

    /// Total number of decomposition choices (the product of the option counts).
    pub fn total(&self) -> BigInt {
        self.options.iter().map(|o| BigInt::from(o.len())).product()
    }

    /// Same as [`total`](Self::total) when it fits in u64.
    pub fn total_u64(&self) -> Result<u64> {
        self.total()
            .to_u64()
            .ok_or_else(|| Error::invalid("too-complex", "decomposition sweep exceeds u64"))
    }

    /// The i-th choice in lexicographic order (the last face varies fastest).
    pub fn choice(&self, index: u64) -> Result<DecompositionChoice> {
        let mut i = index;
        let mut indices = vec![0usize; self.options.len()];
        for f in (0..self.options.len()).rev() {
            let n = self.options[f].len() as u64;
            indices[f] = (i % n) as usize;
            i /= n;
        }
        if i != 0 {
            return Err(Error::invalid("out-of-range", "choice index out of range"));
        }
        Ok(DecompositionChoice { indices })
    }

    /// The decompositions selected by a choice, one per face.
    pub fn materialize<'a>(&'a self, choice: &DecompositionChoice) -> Vec<&'a Decomposition> {
        choice.indices.iter().enumerate().map(|(f, &i)| &self.options[f][i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::LatticePolytope;

    fn iv(coords: &[i64]) -> IntVector {
        IntVector::from_i64(coords)
    }

    fn ivs(coords: &[&[i64]]) -> Vec<IntVector> {
        coords.iter().map(|c| IntVector::from_i64(c)).collect()
    }

    fn p9() -> LatticePolytope {
        LatticePolytope::new("P9", ivs(&[&[2, -1], &[-1, 2], &[-1, -1]])).unwrap()
    }

    fn p3() -> LatticePolytope {
        LatticePolytope::new("P3", ivs(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap()
    }

    fn hexagon() -> LatticePolytope {
        LatticePolytope::new(
            "P6",
            ivs(&[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]]),
        )
        .unwrap()
    }

    #[test]
    fn scaled_face_chart_roundtrip() {
        // A triangle living in a 2-plane of ℤ⁴.
        let verts = ivs(&[&[1, 0, 2, 0], &[0, 1, 2, 0], &[-1, -1, 2, 0]]);
        let sf = ScaledFace::build("t", &verts, BigInt::from(2)).unwrap();
        for v in &verts {
            let c = sf.to_chart(v).unwrap();
            assert_eq!(sf.from_chart(&c), *v);
        }
        // The scaled polygon has twice the lattice size.
        assert_eq!(sf.edges.len(), 3);
        assert!(sf.edges.iter().all(|e| e.length == BigInt::from(2)));
        // Directions round-trip too.
        let d = verts[1].sub(&verts[0]);
        let cd = sf.direction_to_chart(&d).unwrap();
        assert_eq!(sf.direction_from_chart(&cd), d);
        // Edge lookup by ambient endpoints.
        let i = sf.edge_index_for(&verts[0], &verts[1]).unwrap();
        let e = &sf.edges[i];
        let endpoints = [
            sf.from_chart(&sf.vertices_chart[e.from]),
            sf.from_chart(&sf.vertices_chart[e.to]),
        ];
        assert!(endpoints.contains(&verts[0]) && endpoints.contains(&verts[1]));
    }

    #[test]
    fn profile_canonicalization() {
        let s1 = SummandProfile::segment(&iv(&[0, -1])).unwrap();
        let s2 = SummandProfile::segment(&iv(&[0, 1])).unwrap();
        assert_eq!(s1, s2);
        assert!(s1.contains_direction(&iv(&[0, 1])));
        assert!(s1.contains_direction(&iv(&[0, -1])));
        let t1 =
            SummandProfile::triangle(&iv(&[1, 0]), &iv(&[0, 1]), &iv(&[-1, -1])).unwrap();
        let t2 =
            SummandProfile::triangle(&iv(&[0, 1]), &iv(&[-1, -1]), &iv(&[1, 0])).unwrap();
        assert_eq!(t1, t2);
        // Non-unimodular triples are rejected.
        assert!(
            SummandProfile::triangle(&iv(&[2, 1]), &iv(&[-1, 1]), &iv(&[-1, -2])).is_err()
        );
        // Non-zero-sum too.
        assert!(SummandProfile::triangle(&iv(&[1, 0]), &iv(&[0, 1]), &iv(&[1, 1])).is_err());
    }

    #[test]
    fn hexagon_face_has_two_decompositions() {
        let sf = ScaledFace::build("hex", &hexagon().vertices, BigInt::one()).unwrap();
        let ds = enumerate_summand_decompositions(&sf).unwrap();
        assert_eq!(ds.len(), 2);
        let all_seg = ds.iter().filter(|d| d.is_all_segments()).count();
        let all_tri = ds.iter().filter(|d| d.is_all_triangles()).count();
        assert_eq!(all_seg, 1);
        assert_eq!(all_tri, 1);
        let tri = ds.iter().find(|d| d.is_all_triangles()).unwrap();
        assert_eq!(tri.summands.len(), 2);
        let seg = ds.iter().find(|d| d.is_all_segments()).unwrap();
        assert_eq!(seg.summands.len(), 3);
    }

    #[test]
    fn nine_triangle_face_unique() {
        let sf = ScaledFace::build("p9", &p9().vertices, BigInt::one()).unwrap();
        let ds = enumerate_summand_decompositions(&sf).unwrap();
        assert_eq!(ds.len(), 1);
        assert!(ds[0].is_all_triangles());
        assert_eq!(ds[0].summands.len(), 3);
        // All three summands are the same standard triangle.
        assert_eq!(ds[0].summands[0], ds[0].summands[1]);
        assert_eq!(ds[0].summands[1], ds[0].summands[2]);
    }

    #[test]
    fn triple_p3_has_none() {
        let sf = ScaledFace::build("3p3", &p3().vertices, BigInt::from(3)).unwrap();
        assert!(enumerate_summand_decompositions(&sf).unwrap().is_empty());
    }

    #[test]
    fn product_sweep_sizes() {
        let pair99 = PolarPair::new(p9().product(&p9()).unwrap()).unwrap();
        let sweep = DecompositionSweep::new(&pair99).unwrap();
        assert_eq!(sweep.faces.len(), 15);
        assert_eq!(sweep.total(), BigInt::one());

        let hex = hexagon();
        let pair66 = PolarPair::new(hex.product(&hex).unwrap()).unwrap();
        let sweep66 = DecompositionSweep::new(&pair66).unwrap();
        assert_eq!(sweep66.faces.len(), 48);
        assert_eq!(sweep66.total(), BigInt::from(4096));
        // Mixed-radix indexing round-trips.
        let c = sweep66.choice(2026).unwrap();
        let mut back = 0u64;
        for (f, &i) in c.indices.iter().enumerate() {
            back = back * sweep66.options[f].len() as u64 + i as u64;
        }
        assert_eq!(back, 2026);
        assert!(sweep66.choice(4096).is_err());
    }

    #[test]
    fn p3_product_is_not_simply_decomposable() {
        let pair = PolarPair::new(p3().product(&p3()).unwrap()).unwrap();
        let obstruction = simple_decomposability_obstruction(&pair).unwrap();
        let diag = obstruction.expect("P3 x P3 must be obstructed");
        assert!(diag.description.contains("admits no decomposition"));
        assert!(DecompositionSweep::new(&pair).is_err());
    }

    #[test]
    fn scaled_faces_of_p9_product() {
        let pair = PolarPair::new(p9().product(&p9()).unwrap()).unwrap();
        let faces = scaled_faces_of_primal(&pair).unwrap();
        assert_eq!(faces.len(), 15);
        // 6 triangle faces (v × P9 and P9 × v), 9 square faces (e × e').
        let triangles = faces.iter().filter(|f| f.polygon.len() == 3).count();
        let squares = faces.iter().filter(|f| f.polygon.len() == 4).count();
        assert_eq!((triangles, squares), (6, 9));
        // All scales are 1 here.
        assert!(faces.iter().all(|f| f.scale.is_one()));
        // Dual-side scaled faces are indexed by the 18 primal edges; every primal
        // edge of the product has lattice length 3, so every dual 2-face is a
        // unimodular triangle scaled by 3.
        let dual_faces = scaled_faces_of_dual(&pair).unwrap();
        assert_eq!(dual_faces.len(), 18);
        assert!(dual_faces.iter().all(|f| f.scale == BigInt::from(3)));
        assert!(dual_faces
            .iter()
            .all(|f| polygon::twice_area(&f.vertices_chart) == BigInt::one()));
    }
}
