//! The regularity decision for a polytope with chosen 2-face decompositions.
//!
//! A choice of Minkowski decompositions D assigns slope variables, one per summand.
//! Around every 2-face σ of the dual polytope the signed slopes of the summands
//! matched to σ's edges must cancel (one linear equation per σ); the solution space
//! is the *consistency kernel*. A slope vector V in the kernel is a *regular
//! witness* when (i) distinct summands of the same face get distinct slopes and
//! (ii) on each scaled dual face σ̄ the piecewise-linear boundary lift induced by V
//! has a lower-hull subdivision whose empty cells are all unimodular triangles.
//! The pair (P, D) is *regular* when such a witness exists.
//!
//! The decision is staged and exact:
//!  1. if two summands of one face are forced equal on the kernel, the choice is
//!     irregular (an unavoidable degeneration);
//!  2. empty non-triangle cells can only arise on *hollow* dual faces (no interior
//!     lattice points), which in the plane are either width-1 polygons or a doubled
//!     unimodular triangle; on each such face the possible empty parallelograms are
//!     finitely many explicit linear conditions, and a condition that holds on the
//!     whole kernel (per feasible slope-ordering chamber, for the doubled triangle)
//!     again forces irregularity;
//!  3. otherwise a witness is searched deterministically (moment-curve combinations
//!     of the kernel basis, then chamber-targeted interior points from exact
//!     Fourier–Motzkin feasibility), and every candidate is confirmed by the
//!     independent lower-hull verifier before a "regular" verdict is emitted.
//!
//! If neither a witness nor a forcing proof is found the engine reports an internal
//! invariant violation instead of guessing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{linalg, lower_hull_subdivision, polygon, IntVector};
use crate::minkowski::{scaled_faces_of_dual, scaled_faces_of_primal, Decomposition, ScaledFace};
use crate::polytope::PolarPair;

/// Shape class of a scaled dual 2-face, deciding which empty-parallelogram
/// conditions can occur on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HollowClass {
    /// Has interior lattice points: no empty parallelogram can occur.
    NotHollow,
    /// Lattice width 1 with a single vertex on one of the two supporting lines
    /// (a hollow triangle): too thin to contain a parallelogram.
    SafeHollow,
    /// Lattice width 1 with parallel edges on both supporting lines: empty
    /// parallelograms pair a bottom step with a top step of equal slope.
    Cayley { bottom: usize, top: usize },
    /// Doubled unimodular triangle (the unique hollow polygon of width 2):
    /// exactly three possible empty parallelograms.
    DoubleTriangle,
}

/// Where one dual-face boundary edge takes its slopes from: the primal face whose
/// decomposition supplies them, the traversal sign, and the primal chart direction
/// the summands were matched on.
#[derive(Clone, Debug)]
pub struct EdgeSlot {
    /// Index into the primal 2-face list.
    pub primal_face: usize,
    /// +1 when the ccw traversal of the dual face runs along the fixed direction of
    /// the shared dual edge, −1 when it runs against it.
    pub sign: i8,
    /// Direction (in the primal face's chart) whose summands are matched here.
    pub match_direction: IntVector,
    /// Number of matched summands = lattice length of this scaled boundary edge.
    pub expected_tokens: u64,
}

/// Choice-independent regularity geometry of one polytope: charts for all primal
/// and dual 2-faces, edge slots, and the hollowness classification.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub primal_faces: Vec<ScaledFace>,
    pub dual_faces: Vec<ScaledFace>,
    /// `slots[g][k]` describes chart edge k of dual face g.
    pub slots: Vec<Vec<EdgeSlot>>,
    /// Hollow classification of each scaled dual face.
    pub hollow: Vec<HollowClass>,
}

impl Skeleton {
    /// Builds the shared geometry for a reflexive 4-polytope.
    pub fn build(pair: &PolarPair) -> Result<Self> {
        let primal_faces = scaled_faces_of_primal(pair)?;
        let dual_faces = scaled_faces_of_dual(pair)?;

        // Dual edges looked up by their (sorted) ambient endpoints.
        let mut dual_edge_by_endpoints = std::collections::BTreeMap::new();
        for (i, e) in pair.dual_faces.of_dim(1).iter().enumerate() {
            let mut ends = pair.dual_face_vertices(e);
            ends.sort();
            dual_edge_by_endpoints.insert((ends[0].clone(), ends[1].clone()), i);
        }

        let mut slots = Vec::with_capacity(dual_faces.len());
        let mut hollow = Vec::with_capacity(dual_faces.len());
        for (g, sigma) in pair.dual_faces.of_dim(2).iter().enumerate() {
            let sf = &dual_faces[g];
            // σ* is an edge of every primal face we will match against.
            let sigma_dual_idx = pair.primal_face(sigma)?;
            let sigma_dual = &pair.faces.of_dim(1)[sigma_dual_idx];
            let sigma_dual_ends = pair.face_vertices(sigma_dual);

            let mut face_slots = Vec::with_capacity(sf.edges.len());
            for e in &sf.edges {
                let a = sf.from_chart(&sf.vertices_chart[e.from]);
                let b = sf.from_chart(&sf.vertices_chart[e.to]);
                let (lo, hi) = if a <= b { (&a, &b) } else { (&b, &a) };
                let tau_idx = *dual_edge_by_endpoints
                    .get(&(lo.clone(), hi.clone()))
                    .ok_or_else(|| {
                        Error::internal(format!(
                            "boundary edge of {} is not an edge of the dual polytope",
                            sf.label
                        ))
                    })?;
                // Fixed orientation of the dual edge: lex-smaller → lex-larger.
                let (tau_dir, _) = hi.sub(lo).primitive();
                let traversal = sf.direction_from_chart(&e.direction);
                let sign = if traversal == tau_dir {
                    1i8
                } else if traversal == tau_dir.neg() {
                    -1i8
                } else {
                    return Err(Error::internal(format!(
                        "traversal of {} is not parallel to its dual edge",
                        sf.label
                    )));
                };
                let tau = &pair.dual_faces.of_dim(1)[tau_idx];
                let f = pair.primal_face(tau)?;
                let psf = &primal_faces[f];
                let edge_idx = psf.edge_index_for(&sigma_dual_ends[0], &sigma_dual_ends[1])?;
                let match_direction = psf.edges[edge_idx].direction.clone();
                let expected_tokens = e
                    .length
                    .to_u64()
                    .ok_or_else(|| Error::invalid("too-complex", "edge length exceeds u64"))?;
                face_slots.push(EdgeSlot { primal_face: f, sign, match_direction, expected_tokens });
            }
            slots.push(face_slots);
            hollow.push(classify_hollow(sf)?);
        }
        Ok(Skeleton { primal_faces, dual_faces, slots, hollow })
    }

    /// Instantiates the slope system for one decomposition choice (one
    /// decomposition per primal 2-face, in primal face order).
    pub fn context(&self, decomps: Vec<Decomposition>) -> Result<RegularityContext<'_>> {
        if decomps.len() != self.primal_faces.len() {
            return Err(Error::invalid(
                "dimension-mismatch",
                "need exactly one decomposition per 2-face",
            ));
        }
        let mut var_offset = Vec::with_capacity(decomps.len());
        let mut num_vars = 0usize;
        for d in &decomps {
            var_offset.push(num_vars);
            num_vars += d.summands.len();
        }
        let mut tokens: Vec<Vec<Vec<usize>>> = Vec::with_capacity(self.dual_faces.len());
        for (g, face_slots) in self.slots.iter().enumerate() {
            let mut per_edge = Vec::with_capacity(face_slots.len());
            for slot in face_slots {
                let matched = decomps[slot.primal_face].summands_with_direction(&slot.match_direction);
                if matched.len() as u64 != slot.expected_tokens {
                    return Err(Error::internal(format!(
                        "face {} matched {} summands where {} were expected",
                        self.dual_faces[g].label,
                        matched.len(),
                        slot.expected_tokens
                    )));
                }
                per_edge.push(
                    matched.into_iter().map(|s| var_offset[slot.primal_face] + s).collect(),
                );
            }
            tokens.push(per_edge);
        }
        // One cancellation equation per dual 2-face.
        let mut matrix: Vec<Vec<BigInt>> = Vec::with_capacity(self.dual_faces.len());
        for (g, per_edge) in tokens.iter().enumerate() {
            let mut row = vec![BigInt::zero(); num_vars];
            for (k, vars) in per_edge.iter().enumerate() {
                let s = BigInt::from(self.slots[g][k].sign);
                for &v in vars {
                    debug_assert!(row[v].is_zero(), "one summand hit twice in a single equation");
                    row[v] += &s;
                }
            }
            matrix.push(row);
        }
        let kernel = linalg::kernel_basis(&matrix);
        Ok(RegularityContext { skeleton: self, decomps, var_offset, num_vars, tokens, kernel })
    }
}

/// Classifies a scaled dual face by hollowness; see [`HollowClass`].
pub fn classify_hollow(sf: &ScaledFace) -> Result<HollowClass> {
    let poly = &sf.polygon;
    if !polygon::interior_lattice_points(poly).is_empty() {
        return Ok(HollowClass::NotHollow);
    }
    // Doubled unimodular triangle?
    let model = [
        IntVector::from_i64(&[0, 0]),
        IntVector::from_i64(&[2, 0]),
        IntVector::from_i64(&[0, 2]),
    ];
    if polygon::canonical_polygon_form(poly)?.0 == polygon::canonical_polygon_form(&model)?.0 {
        return Ok(HollowClass::DoubleTriangle);
    }
    // Otherwise a hollow polygon has lattice width 1 across one of its edges.
    for (k, e) in sf.edges.iter().enumerate() {
        let d = &e.direction;
        // Inward normal of a ccw edge.
        let n = IntVector(vec![-d.0[1].clone(), d.0[0].clone()]);
        let level = n.dot(&poly[e.from]);
        let top_level = &level + BigInt::one();
        let width =
            poly.iter().map(|v| n.dot(v)).max().expect("nonempty polygon") - &level;
        if width.is_one() {
            for (j, f) in sf.edges.iter().enumerate() {
                if n.dot(&poly[f.from]) == top_level && n.dot(&poly[f.to]) == top_level {
                    return Ok(HollowClass::Cayley { bottom: k, top: j });
                }
            }
            return Ok(HollowClass::SafeHollow);
        }
    }
    Err(Error::internal(format!(
        "hollow face {} is neither width-1 nor a doubled unimodular triangle",
        sf.label
    )))
}

/// Why a slope vector fails to be a regular witness.
#[derive(Clone, Debug)]
pub struct SlopeRejection {
    /// Human-readable reason naming the offending face.
    pub reason: String,
    /// True when the failure was an empty non-triangle cell on a face that is not
    /// hollow — such a cell contradicts the hollowness invariant and is surfaced
    /// separately in diagnostics.
    pub square_on_not_hollow: bool,
}

/// Verdict of the independent witness verifier.
#[derive(Clone, Debug)]
pub enum SlopeCheck {
    Good,
    Rejected(SlopeRejection),
}

/// A proof that no regular witness exists for the choice.
#[derive(Clone, Debug)]
pub enum Obstruction {
    /// Two summands of one face have equal slopes under every consistent
    /// assignment, so the chosen decomposition always degenerates.
    EqualSlopesForced { face: usize, summand_a: usize, summand_b: usize, detail: String },
    /// Some hollow dual face carries an empty parallelogram under every
    /// consistent assignment (in every feasible slope ordering).
    EmptySquareForced { dual_face: usize, detail: String },
}

impl Obstruction {
    pub fn detail(&self) -> &str {
        match self {
            Obstruction::EqualSlopesForced { detail, .. } => detail,
            Obstruction::EmptySquareForced { detail, .. } => detail,
        }
    }
}

/// Result of the staged decision.
#[derive(Clone, Debug)]
pub enum RegularityOutcome {
    /// A verified witness: a consistent slope vector whose induced subdivisions
    /// have only unimodular-triangle empty cells.
    Regular { witness: Vec<BigRational> },
    Irregular { obstruction: Obstruction },
}

impl RegularityOutcome {
    pub fn is_regular(&self) -> bool {
        matches!(self, RegularityOutcome::Regular { .. })
    }
}

/// The slope system of one decomposition choice.
#[derive(Clone, Debug)]
pub struct RegularityContext<'a> {
    pub skeleton: &'a Skeleton,
    /// One decomposition per primal 2-face.
    pub decomps: Vec<Decomposition>,
    /// First variable id of each face's summand block.
    pub var_offset: Vec<usize>,
    pub num_vars: usize,
    /// `tokens[g][k]`: global variable ids matched to chart edge k of dual face g.
    pub tokens: Vec<Vec<Vec<usize>>>,
    /// Basis of the consistency kernel (primitive integer rows).
    pub kernel: Vec<Vec<BigInt>>,
}

/// Data recorded for one doubled-triangle face during the chamber analysis.
struct DoubleTriangleAnalysis {
    dual_face: usize,
    /// Chambers (per-edge order patterns) that are feasible and contain no forced
    /// parallelogram condition.
    clean_chambers: Vec<u8>,
    /// True when at least one feasible chamber *does* carry a forced condition, so
    /// a witness must stay inside one of the clean chambers.
    has_forced_chamber: bool,
}

impl<'a> RegularityContext<'a> {
    /// Dimension of the consistency kernel.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    fn var_label(&self, v: usize) -> String {
        let f = match self.var_offset.binary_search(&v) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let s = v - self.var_offset[f];
        format!(
            "{}:{}",
            self.skeleton.primal_faces[f].label,
            self.decomps[f].summands[s].display()
        )
    }

    /// Evaluates a sparse functional Σ coeff·V[var] on every kernel basis vector.
    fn functional_on_kernel(&self, terms: &[(usize, i64)]) -> Vec<BigInt> {
        self.kernel
            .iter()
            .map(|k| terms.iter().map(|&(v, c)| &k[v] * BigInt::from(c)).sum())
            .collect()
    }

    fn forced_zero(&self, terms: &[(usize, i64)]) -> bool {
        self.functional_on_kernel(terms).iter().all(|x| x.is_zero())
    }

    /// All within-face summand pairs (the witness must separate each of them).
    fn wall_pairs(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut pairs = Vec::new();
        for (f, d) in self.decomps.iter().enumerate() {
            for i in 0..d.summands.len() {
                for j in i + 1..d.summands.len() {
                    pairs.push((f, i, j, 0));
                }
            }
        }
        pairs
    }

    /// Stage 1: a pair of distinct-profile summands of one face whose slopes agree
    /// on the whole kernel.
    fn forced_wall(&self) -> Option<Obstruction> {
        for (f, d) in self.decomps.iter().enumerate() {
            let base = self.var_offset[f];
            for i in 0..d.summands.len() {
                for j in i + 1..d.summands.len() {
                    if d.summands[i] == d.summands[j] {
                        // Equal profiles have identical equation columns, so their
                        // difference lies in the kernel and is never forced.
                        continue;
                    }
                    if self.forced_zero(&[(base + i, 1), (base + j, -1)]) {
                        let detail = format!(
                            "summands {} and {} of face {} have equal slopes in every \
                             consistent assignment",
                            d.summands[i].display(),
                            d.summands[j].display(),
                            self.skeleton.primal_faces[f].label
                        );
                        return Some(Obstruction::EqualSlopesForced {
                            face: f,
                            summand_a: i,
                            summand_b: j,
                            detail,
                        });
                    }
                }
            }
        }
        None
    }

    /// Stage 2a: forced bottom/top pair on a width-1 face.
    fn forced_cayley(&self) -> Option<Obstruction> {
        for (g, class) in self.skeleton.hollow.iter().enumerate() {
            let HollowClass::Cayley { bottom, top } = class else { continue };
            let sb = self.skeleton.slots[g][*bottom].sign as i64;
            let st = self.skeleton.slots[g][*top].sign as i64;
            for &va in &self.tokens[g][*bottom] {
                for &vb in &self.tokens[g][*top] {
                    if self.forced_zero(&[(va, sb), (vb, st)]) {
                        let detail = format!(
                            "face {} carries an empty parallelogram pairing {} with {} \
                             in every consistent assignment",
                            self.skeleton.dual_faces[g].label,
                            self.var_label(va),
                            self.var_label(vb)
                        );
                        return Some(Obstruction::EmptySquareForced { dual_face: g, detail });
                    }
                }
            }
        }
        None
    }

    /// Kernel-coordinate row of a sparse functional (length = kernel dimension).
    fn kernel_row(&self, terms: &[(usize, i64)]) -> Vec<BigRational> {
        self.functional_on_kernel(terms)
            .into_iter()
            .map(BigRational::from_integer)
            .collect()
    }

    /// Chamber inequalities (in kernel coordinates) of a doubled-triangle face for
    /// the given per-edge order pattern: bit k set means the second token of edge k
    /// is the larger one.
    fn chamber_rows(&self, g: usize, bits: u8) -> Vec<Vec<BigRational>> {
        (0..3)
            .map(|k| {
                let (p, q) = (self.tokens[g][k][0], self.tokens[g][k][1]);
                let s = self.skeleton.slots[g][k].sign as i64;
                let flip = if bits & (1 << k) != 0 { -1 } else { 1 };
                self.kernel_row(&[(p, s * flip), (q, -s * flip)])
            })
            .collect()
    }

    /// The three empty-parallelogram functionals of a doubled-triangle face in the
    /// given chamber, as sparse terms. Patterns are (max,min,max), (min,min,max),
    /// (max,min,min) over the three ccw edges; the remaining non-extremal patterns
    /// are their negatives modulo the face's cancellation equation.
    fn double_triangle_conditions(&self, g: usize, bits: u8) -> [Vec<(usize, i64)>; 3] {
        let pick = |k: usize, want_max: bool| -> (usize, i64) {
            let (p, q) = (self.tokens[g][k][0], self.tokens[g][k][1]);
            let s = self.skeleton.slots[g][k].sign as i64;
            let p_is_max = bits & (1 << k) == 0;
            let v = if want_max == p_is_max { p } else { q };
            (v, s)
        };
        let patterns = [[true, false, true], [false, false, true], [true, false, false]];
        patterns.map(|pat| (0..3).map(|k| pick(k, pat[k])).collect())
    }

    /// Stage 2b: chamber analysis of every doubled-triangle face. Returns the
    /// obstruction if some face is forced-bad, otherwise the per-face chamber data
    /// needed by the targeted witness search.
    fn analyze_double_triangles(&self) -> Result<std::result::Result<Vec<DoubleTriangleAnalysis>, Obstruction>> {
        let r = self.kernel.len();
        let mut out = Vec::new();
        for (g, class) in self.skeleton.hollow.iter().enumerate() {
            if *class != HollowClass::DoubleTriangle {
                continue;
            }
            crate::ensure_internal!(
                self.tokens[g].len() == 3 && self.tokens[g].iter().all(|t| t.len() == 2),
                "doubled-triangle face {} must carry two slopes per edge",
                self.skeleton.dual_faces[g].label
            );
            let mut clean = Vec::new();
            let mut forced_somewhere = false;
            let mut any_feasible = false;
            for bits in 0u8..8 {
                let rows = self.chamber_rows(g, bits);
                if linalg::strict_feasibility(&rows, r).is_none() {
                    continue;
                }
                any_feasible = true;
                let forced = self
                    .double_triangle_conditions(g, bits)
                    .iter()
                    .any(|terms| self.forced_zero(terms));
                if forced {
                    forced_somewhere = true;
                } else {
                    clean.push(bits);
                }
            }
            crate::ensure_internal!(
                any_feasible,
                "no feasible slope ordering on face {}",
                self.skeleton.dual_faces[g].label
            );
            if clean.is_empty() {
                let detail = format!(
                    "face {} carries an empty parallelogram in every feasible slope \
                     ordering of every consistent assignment",
                    self.skeleton.dual_faces[g].label
                );
                return Ok(Err(Obstruction::EmptySquareForced { dual_face: g, detail }));
            }
            out.push(DoubleTriangleAnalysis {
                dual_face: g,
                clean_chambers: clean,
                has_forced_chamber: forced_somewhere,
            });
        }
        Ok(Ok(out))
    }

    /// Moment-curve candidate Σ tʲ·basisⱼ (an exact kernel element).
    fn moment_candidate(&self, t: u64) -> Vec<BigRational> {
        let t = BigInt::from(t);
        let mut v = vec![BigInt::zero(); self.num_vars];
        let mut power = BigInt::one();
        for k in &self.kernel {
            for (x, c) in v.iter_mut().zip(k) {
                *x += c * &power;
            }
            power *= &t;
        }
        v.into_iter().map(BigRational::from_integer).collect()
    }

    /// Cheap functional screen before the authoritative hull verification: all
    /// walls separated, no width-1 pairing vanishes, no realized doubled-triangle
    /// condition vanishes.
    fn quick_check(&self, v: &[BigRational]) -> bool {
        for (f, d) in self.decomps.iter().enumerate() {
            let base = self.var_offset[f];
            for i in 0..d.summands.len() {
                for j in i + 1..d.summands.len() {
                    if v[base + i] == v[base + j] {
                        return false;
                    }
                }
            }
        }
        for (g, class) in self.skeleton.hollow.iter().enumerate() {
            match class {
                HollowClass::Cayley { bottom, top } => {
                    let sb = big(self.skeleton.slots[g][*bottom].sign);
                    let st = big(self.skeleton.slots[g][*top].sign);
                    for &va in &self.tokens[g][*bottom] {
                        for &vb in &self.tokens[g][*top] {
                            if (&v[va] * &sb + &v[vb] * &st).is_zero() {
                                return false;
                            }
                        }
                    }
                }
                HollowClass::DoubleTriangle => {
                    let mut bits = 0u8;
                    for k in 0..3 {
                        let (p, q) = (self.tokens[g][k][0], self.tokens[g][k][1]);
                        let s = big(self.skeleton.slots[g][k].sign);
                        let dp = &v[p] * &s;
                        let dq = &v[q] * &s;
                        if dp == dq {
                            return false; // wall, already caught above for same face
                        }
                        if dp < dq {
                            bits |= 1 << k;
                        }
                    }
                    for terms in self.double_triangle_conditions(g, bits) {
                        let sum: BigRational = terms
                            .iter()
                            .map(|&(var, c)| &v[var] * big(c as i8))
                            .sum();
                        if sum.is_zero() {
                            return false;
                        }
                    }
                }
                _ => {}
            }
        }
        true
    }

    /// Full witness verification, independent of the staged analysis: rebuilds the
    /// boundary lift of every scaled dual face and checks its lower-hull
    /// subdivision. `Err` is reserved for inputs that are not consistent slope
    /// assignments at all (a violated cancellation equation).
    pub fn verify_slope(&self, v: &[BigRational]) -> Result<SlopeCheck> {
        if v.len() != self.num_vars {
            return Err(Error::invalid(
                "dimension-mismatch",
                format!("expected {} slopes, got {}", self.num_vars, v.len()),
            ));
        }
        // Separation of summands within each face.
        for (f, d) in self.decomps.iter().enumerate() {
            let base = self.var_offset[f];
            for i in 0..d.summands.len() {
                for j in i + 1..d.summands.len() {
                    if v[base + i] == v[base + j] {
                        return Ok(SlopeCheck::Rejected(SlopeRejection {
                            reason: format!(
                                "summands {} and {} of face {} have equal slopes",
                                d.summands[i].display(),
                                d.summands[j].display(),
                                self.skeleton.primal_faces[f].label
                            ),
                            square_on_not_hollow: false,
                        }));
                    }
                }
            }
        }
        for (g, sf) in self.skeleton.dual_faces.iter().enumerate() {
            let pts = polygon::boundary_lattice_points(&sf.polygon);
            let mut heights = Vec::with_capacity(pts.len());
            let mut h = BigRational::zero();
            for k in 0..sf.edges.len() {
                let s = big(self.skeleton.slots[g][k].sign);
                let mut slopes: Vec<BigRational> =
                    self.tokens[g][k].iter().map(|&var| &v[var] * &s).collect();
                slopes.sort();
                for slope in slopes {
                    heights.push(h.clone());
                    h += slope;
                }
            }
            if !h.is_zero() {
                return Err(Error::invalid(
                    "closure-violated",
                    format!(
                        "slopes do not satisfy the cancellation equation of face {}",
                        sf.label
                    ),
                ));
            }
            crate::ensure_internal!(
                heights.len() == pts.len(),
                "boundary walk of face {} out of step",
                sf.label
            );
            let hull = lower_hull_subdivision(&pts, &heights)?;
            if !hull.all_empty_cells_unimodular() {
                let bad = hull.bad_cells();
                let cells: Vec<String> = bad
                    .iter()
                    .map(|c| {
                        let vs: Vec<String> = c.vertices.iter().map(|p| p.display()).collect();
                        format!("[{}]", vs.join(", "))
                    })
                    .collect();
                let on_hollow = self.skeleton.hollow[g] != HollowClass::NotHollow;
                return Ok(SlopeCheck::Rejected(SlopeRejection {
                    reason: format!(
                        "face {} has empty non-triangle cells {}",
                        sf.label,
                        cells.join(", ")
                    ),
                    square_on_not_hollow: !on_hollow,
                }));
            }
        }
        Ok(SlopeCheck::Good)
    }

    fn try_candidate(&self, v: Vec<BigRational>) -> Result<Option<Vec<BigRational>>> {
        if !self.quick_check(&v) {
            return Ok(None);
        }
        match self.verify_slope(&v)? {
            SlopeCheck::Good => Ok(Some(v)),
            SlopeCheck::Rejected(_) => Ok(None),
        }
    }

    /// The staged regularity decision. See the module docs for the algorithm.
    pub fn decide(&self) -> Result<RegularityOutcome> {
        if let Some(obstruction) = self.forced_wall() {
            return Ok(RegularityOutcome::Irregular { obstruction });
        }
        if let Some(obstruction) = self.forced_cayley() {
            return Ok(RegularityOutcome::Irregular { obstruction });
        }
        let analyses = match self.analyze_double_triangles()? {
            Ok(a) => a,
            Err(obstruction) => return Ok(RegularityOutcome::Irregular { obstruction }),
        };

        // Witness search phase 1: moment-curve sweep.
        for t in 0..=96u64 {
            if let Some(w) = self.try_candidate(self.moment_candidate(t))? {
                return Ok(RegularityOutcome::Regular { witness: w });
            }
        }

        // Phase 2: chamber-targeted search. Only faces with a forced chamber pin
        // the witness to their clean chambers.
        let constrained: Vec<&DoubleTriangleAnalysis> =
            analyses.iter().filter(|a| a.has_forced_chamber).collect();
        if !constrained.is_empty() {
            let r = self.kernel.len();
            let mut combo = vec![0usize; constrained.len()];
            let mut combos_tried = 0usize;
            'combos: loop {
                combos_tried += 1;
                if combos_tried > 256 {
                    break;
                }
                let mut rows = Vec::new();
                for (a, &c) in constrained.iter().zip(&combo) {
                    rows.extend(self.chamber_rows(a.dual_face, a.clean_chambers[c]));
                }
                if let Some(y) = linalg::strict_feasibility(&rows, r) {
                    // Interior point of the chamber conjunction, pushed to a
                    // generic nearby point by a scaled moment-curve perturbation.
                    let base: Vec<BigRational> = (0..self.num_vars)
                        .map(|i| {
                            self.kernel
                                .iter()
                                .zip(&y)
                                .map(|(k, c)| BigRational::from_integer(k[i].clone()) * c)
                                .sum()
                        })
                        .collect();
                    for pow in [16u32, 32, 48] {
                        let scale = BigRational::from_integer(BigInt::one() << pow);
                        for t in 1..=4u64 {
                            let pert = self.moment_candidate(t);
                            let cand: Vec<BigRational> = base
                                .iter()
                                .zip(&pert)
                                .map(|(b, p)| b * &scale + p)
                                .collect();
                            if let Some(w) = self.try_candidate(cand)? {
                                return Ok(RegularityOutcome::Regular { witness: w });
                            }
                        }
                    }
                }
                // Advance the mixed-radix combo counter.
                let mut i = 0;
                loop {
                    if i == combo.len() {
                        break 'combos;
                    }
                    combo[i] += 1;
                    if combo[i] < constrained[i].clean_chambers.len() {
                        break;
                    }
                    combo[i] = 0;
                    i += 1;
                }
            }
        }

        // Phase 3: extended sweep, screened by the cheap functional check.
        let functional_count: usize = self.wall_pairs().len()
            + self
                .skeleton
                .hollow
                .iter()
                .enumerate()
                .map(|(g, c)| match c {
                    HollowClass::Cayley { bottom, top } => {
                        self.tokens[g][*bottom].len() * self.tokens[g][*top].len()
                    }
                    HollowClass::DoubleTriangle => 24,
                    _ => 0,
                })
                .sum::<usize>();
        let bound = (functional_count * self.kernel.len().max(1) + 128).min(20_000) as u64;
        for t in 97..=bound {
            let v = self.moment_candidate(t);
            if !self.quick_check(&v) {
                continue;
            }
            if let Some(w) = self.try_candidate(v)? {
                return Ok(RegularityOutcome::Regular { witness: w });
            }
        }

        Err(Error::internal(format!(
            "regularity decision exhausted its witness search without a forcing proof \
             ({} variables, kernel dimension {}; this contradicts the staged analysis)",
            self.num_vars,
            self.kernel.len()
        )))
    }
}

fn big(s: i8) -> BigRational {
    BigRational::from_integer(BigInt::from(s))
}

/// The monodromy transvection attached to two facets of the dual polytope meeting
/// in a 2-face σ, evaluated on a chosen edge τ of σ: m ↦ m + ⟨n₂−n₁, m⟩(v₁−v₂),
/// where nᵢ are the primal vertices defining the facets and v₁, v₂ are τ's
/// endpoints. Returns the matrix T (acting on column vectors).
pub fn monodromy_matrix(
    pair: &PolarPair,
    dual_facet_a: usize,
    dual_facet_b: usize,
    dual_edge: usize,
) -> Result<Vec<Vec<BigInt>>> {
    let dim = pair.polytope.dim;
    let facets = pair.dual_faces.of_dim(dim - 1);
    let fa = facets.get(dual_facet_a).ok_or_else(|| {
        Error::invalid("out-of-range", "dual facet index out of range")
    })?;
    let fb = facets.get(dual_facet_b).ok_or_else(|| {
        Error::invalid("out-of-range", "dual facet index out of range")
    })?;
    let sigma_mask = fa.mask & fb.mask;
    let sigma = pair
        .dual_faces
        .of_dim(dim - 2)
        .iter()
        .find(|f| f.mask == sigma_mask)
        .ok_or_else(|| {
            Error::invalid("not-adjacent", "the two facets do not meet in a 2-face")
        })?;
    let tau = pair
        .dual_faces
        .of_dim(1)
        .get(dual_edge)
        .ok_or_else(|| Error::invalid("out-of-range", "dual edge index out of range"))?;
    if tau.mask & sigma.mask != tau.mask {
        return Err(Error::invalid("not-adjacent", "the edge is not an edge of the shared 2-face"));
    }
    // Primal vertices defining the two facets.
    let na = pair.polytope.vertices[pair.faces.of_dim(0)[pair.primal_face(fa)?].vertices[0]].clone();
    let nb = pair.polytope.vertices[pair.faces.of_dim(0)[pair.primal_face(fb)?].vertices[0]].clone();
    let ends = pair.dual_face_vertices(tau);
    let dn = nb.sub(&na);
    let dv = ends[0].sub(&ends[1]);
    // ⟨nᵢ, vⱼ⟩ = −1 for both facet/vertex pairs, so ⟨dn, dv⟩ = 0 and T is unipotent.
    crate::ensure_internal!(dn.dot(&dv).is_zero(), "monodromy data is not orthogonal");
    let mut t = vec![vec![BigInt::zero(); dim]; dim];
    for i in 0..dim {
        t[i][i] = BigInt::one();
        for j in 0..dim {
            t[i][j] += &dv.0[i] * &dn.0[j];
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minkowski::DecompositionSweep;
    use crate::polytope::LatticePolytope;

    fn ivs(coords: &[&[i64]]) -> Vec<IntVector> {
        coords.iter().map(|c| IntVector::from_i64(c)).collect()
    }

    fn p9() -> LatticePolytope {
        LatticePolytope::new("P9", ivs(&[&[2, -1], &[-1, 2], &[-1, -1]])).unwrap()
    }

    fn hexagon() -> LatticePolytope {
        LatticePolytope::new(
            "P6",
            ivs(&[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]]),
        )
        .unwrap()
    }

    fn square2() -> LatticePolytope {
        LatticePolytope::new("P8", ivs(&[&[1, 1], &[-1, 1], &[1, -1], &[-1, -1]])).unwrap()
    }

    fn face_of(points: &[&[i64]], scale: i64) -> ScaledFace {
        ScaledFace::build("t", &ivs(points), BigInt::from(scale)).unwrap()
    }

    #[test]
    fn hollow_classification() {
        // Unimodular triangle: hollow, width 1, single top vertex.
        let t = face_of(&[&[0, 0], &[1, 0], &[0, 1]], 1);
        assert_eq!(classify_hollow(&t).unwrap(), HollowClass::SafeHollow);
        // Doubled unimodular triangle, in sheared coordinates.
        let dt = face_of(&[&[0, 0], &[1, 0], &[0, 1]], 2);
        assert_eq!(classify_hollow(&dt).unwrap(), HollowClass::DoubleTriangle);
        // Unit square: width 1 both ways.
        let sq = face_of(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]], 1);
        assert!(matches!(classify_hollow(&sq).unwrap(), HollowClass::Cayley { .. }));
        // 1×3 band.
        let band = face_of(&[&[0, 0], &[3, 0], &[3, 1], &[0, 1]], 1);
        assert!(matches!(classify_hollow(&band).unwrap(), HollowClass::Cayley { .. }));
        // Sheared width-1 quadrilateral.
        let shear = face_of(&[&[0, 0], &[2, 0], &[3, 1], &[1, 1]], 1);
        assert!(matches!(classify_hollow(&shear).unwrap(), HollowClass::Cayley { .. }));
        // 2×2 square has an interior point.
        let sq2 = face_of(&[&[0, 0], &[1, 0], &[1, 1], &[0, 1]], 2);
        assert_eq!(classify_hollow(&sq2).unwrap(), HollowClass::NotHollow);
        // A reflexive triangle has the origin inside.
        let p9f = face_of(&[&[2, -1], &[-1, 2], &[-1, -1]], 1);
        assert_eq!(classify_hollow(&p9f).unwrap(), HollowClass::NotHollow);
    }

    #[test]
    fn p9_product_is_regular() {
        let pair = PolarPair::new(p9().product(&p9()).unwrap()).unwrap();
        let skel = Skeleton::build(&pair).unwrap();
        assert_eq!(skel.primal_faces.len(), 15);
        assert_eq!(skel.dual_faces.len(), 18);
        // All dual faces are scaled unimodular triangles with 3 tokens per edge.
        assert!(skel
            .slots
            .iter()
            .all(|s| s.len() == 3 && s.iter().all(|e| e.expected_tokens == 3)));

        let sweep = DecompositionSweep::new(&pair).unwrap();
        assert_eq!(sweep.total(), BigInt::one());
        let choice = sweep.choice(0).unwrap();
        let decomps: Vec<Decomposition> =
            sweep.materialize(&choice).into_iter().cloned().collect();
        let ctx = skel.context(decomps).unwrap();
        assert!(ctx.kernel_dim() > 0);

        let outcome = ctx.decide().unwrap();
        let RegularityOutcome::Regular { witness } = outcome else {
            panic!("the product of two degree-9 triangles must be regular");
        };
        // The witness re-verifies via the independent hull check.
        assert!(matches!(ctx.verify_slope(&witness).unwrap(), SlopeCheck::Good));
        // Breaking the closure equation is reported as invalid input.
        let mut broken = witness.clone();
        broken[0] += BigRational::one();
        let err = ctx.verify_slope(&broken);
        match err {
            Err(e) => assert_eq!(e.kind(), "closure-violated"),
            Ok(SlopeCheck::Rejected(_)) => {} // a wall tie may trip first
            Ok(SlopeCheck::Good) => panic!("perturbed slopes cannot verify"),
        }
    }

    /// Builds the hexagon-product context with triangle decompositions on the
    /// first `n1` faces of one side and `n2` of the other (segments elsewhere).
    fn hex_context<'a>(
        skel: &'a Skeleton,
        sweep: &DecompositionSweep,
        n1: usize,
        n2: usize,
    ) -> RegularityContext<'a> {
        // Hexagon faces split by which product factor they live in: a face of the
        // form (vertex × hexagon) has constant first two coordinates.
        let mut side1 = Vec::new();
        let mut side2 = Vec::new();
        for (f, sf) in skel.primal_faces.iter().enumerate() {
            if sf.polygon.len() != 6 {
                continue;
            }
            let verts: Vec<IntVector> =
                (0..sf.vertices_chart.len()).map(|i| sf.from_chart(&sf.vertices_chart[i])).collect();
            let first_two_constant =
                verts.iter().all(|v| v.0[0] == verts[0].0[0] && v.0[1] == verts[0].0[1]);
            if first_two_constant {
                side2.push(f);
            } else {
                side1.push(f);
            }
        }
        assert_eq!((side1.len(), side2.len()), (6, 6));
        let mut indices = vec![0usize; skel.primal_faces.len()];
        for &f in side1.iter().take(n1).chain(side2.iter().take(n2)) {
            // Option order is canonical: all-segments sorts before the triangles.
            assert_eq!(sweep.options[f].len(), 2);
            assert!(sweep.options[f][0].is_all_segments());
            assert!(sweep.options[f][1].is_all_triangles());
            indices[f] = 1;
        }
        let decomps: Vec<Decomposition> = indices
            .iter()
            .enumerate()
            .map(|(f, &i)| sweep.options[f][i].clone())
            .collect();
        skel.context(decomps).unwrap()
    }

    #[test]
    fn hexagon_product_wall_forcing() {
        let hex = hexagon();
        let pair = PolarPair::new(hex.product(&hex).unwrap()).unwrap();
        let skel = Skeleton::build(&pair).unwrap();
        let sweep = DecompositionSweep::new(&pair).unwrap();

        // Every dual face is a unimodular triangle: one slope per edge, nothing
        // hollow-bad can happen, so only slope walls decide.
        assert!(skel.hollow.iter().all(|c| *c == HollowClass::SafeHollow));

        // All segments: regular.
        assert!(hex_context(&skel, &sweep, 0, 0).decide().unwrap().is_regular());
        // One triangle pair on one side: forced wall.
        let out = hex_context(&skel, &sweep, 1, 0).decide().unwrap();
        match out {
            RegularityOutcome::Irregular {
                obstruction: Obstruction::EqualSlopesForced { detail, .. },
            } => assert!(detail.contains("equal slopes")),
            other => panic!("expected a forced wall, got {other:?}"),
        }
        // Two triangle faces on one side: regular again.
        assert!(hex_context(&skel, &sweep, 2, 0).decide().unwrap().is_regular());
        // One on each side: irregular.
        assert!(!hex_context(&skel, &sweep, 1, 1).decide().unwrap().is_regular());
        // All six on one side: regular.
        assert!(hex_context(&skel, &sweep, 6, 0).decide().unwrap().is_regular());
        // Five on one side: irregular.
        assert!(!hex_context(&skel, &sweep, 5, 0).decide().unwrap().is_regular());
    }

    #[test]
    fn hexagon_square_product_double_triangles() {
        let pair = PolarPair::new(hexagon().product(&square2()).unwrap()).unwrap();
        let skel = Skeleton::build(&pair).unwrap();
        let n_dt = skel.hollow.iter().filter(|c| **c == HollowClass::DoubleTriangle).count();
        let n_safe = skel.hollow.iter().filter(|c| **c == HollowClass::SafeHollow).count();
        assert_eq!((n_dt, n_safe), (24, 24));

        let sweep = DecompositionSweep::new(&pair).unwrap();
        assert_eq!(sweep.total(), BigInt::from(16));
        let mut verdict_by_count = std::collections::BTreeMap::new();
        for i in 0..16u64 {
            let choice = sweep.choice(i).unwrap();
            let decomps: Vec<Decomposition> =
                sweep.materialize(&choice).into_iter().cloned().collect();
            let triangles =
                decomps.iter().map(|d| d.triangle_count()).sum::<usize>() / 2;
            let ctx = skel.context(decomps).unwrap();
            let outcome = ctx.decide().unwrap();
            // The verdict only depends on how many hexagon faces use triangles.
            let regular = outcome.is_regular();
            if let Some(&prev) = verdict_by_count.get(&triangles) {
                assert_eq!(prev, regular, "verdict must be symmetric in the faces");
            } else {
                verdict_by_count.insert(triangles, regular);
            }
        }
        // The degenerate single-triangle-pair choice is irregular here too.
        assert_eq!(verdict_by_count.get(&1), Some(&false));
        // And the all-segments choice is regular.
        assert_eq!(verdict_by_count.get(&0), Some(&true));
    }

    #[test]
    fn monodromy_is_unipotent() {
        let pair = PolarPair::new(p9().product(&p9()).unwrap()).unwrap();
        let dim = pair.polytope.dim;
        let facets = pair.dual_faces.of_dim(dim - 1);
        let mut checked = 0;
        for a in 0..facets.len() {
            for b in a + 1..facets.len() {
                let shared = facets[a].mask & facets[b].mask;
                let Some(sigma) =
                    pair.dual_faces.of_dim(dim - 2).iter().find(|f| f.mask == shared)
                else {
                    continue;
                };
                let edge = pair
                    .dual_faces
                    .of_dim(1)
                    .iter()
                    .position(|e| e.mask & sigma.mask == e.mask)
                    .unwrap();
                let t = monodromy_matrix(&pair, a, b, edge).unwrap();
                // (T − I)² = 0.
                let mut n = t.clone();
                for i in 0..dim {
                    n[i][i] -= BigInt::one();
                }
                let sq = linalg::mat_mul(&n, &n);
                assert!(sq.iter().all(|row| row.iter().all(|x| x.is_zero())));
                checked += 1;
            }
        }
        assert!(checked > 0, "the product has adjacent facet pairs");
    }
}
