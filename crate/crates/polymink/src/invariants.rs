//! Topological invariants of the smoothing predicted by a decomposition choice.
//!
//! * Euler number χ = (number of 2-dimensional summands over all faces) − Σ_σ
//!   (normalized area of the scaled dual 2-face σ̄).
//! * γ = dimension of the space of compatible edge/summand slope data (the
//!   deformation parameter count), computed as an exact matrix rank; the second
//!   Betti number of the smoothing is b₂ = γ − 3.
//! * The normalized volume of the polar dual.
//!
//! Every report re-checks its own consistency (χ parity, γ ≥ 4 so b₂ ≥ 1) and
//! fails with an internal invariant violation rather than emitting numbers that
//! cannot belong to a smooth Calabi–Yau total space.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{linalg, normalized_volume, polygon};
use crate::minkowski::{Decomposition, SummandProfile};
use crate::polytope::PolarPair;
use crate::regularity::{RegularityOutcome, Skeleton};

/// The two signed halves of the Euler number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerSplit {
    /// Number of 2-dimensional (triangle) summands across all face decompositions.
    pub positive: BigInt,
    /// Σ over dual 2-faces of the normalized area of the scaled face σ̄.
    pub negative: BigInt,
}

impl EulerSplit {
    pub fn chi(&self) -> BigInt {
        &self.positive - &self.negative
    }
}

/// Computes the Euler split for one decomposition choice.
pub fn euler_split(skeleton: &Skeleton, decomps: &[Decomposition]) -> Result<EulerSplit> {
    crate::ensure_internal!(
        decomps.len() == skeleton.primal_faces.len(),
        "one decomposition per 2-face required"
    );
    let positive = BigInt::from(
        decomps.iter().map(|d| d.triangle_count()).sum::<usize>(),
    );
    let negative: BigInt =
        skeleton.dual_faces.iter().map(|sf| polygon::twice_area(&sf.polygon)).sum();
    Ok(EulerSplit { positive, negative })
}

/// The linear system whose solution dimension is γ: one scalar per primal edge
/// (the slope along the edge's fixed primitive direction), one scalar per segment
/// summand and two per triangle summand (the summand's own slope data), glued by
/// one equation per (face, boundary edge, matched summand) triple.
#[derive(Clone, Debug)]
pub struct GammaSystem {
    pub num_edge_vars: usize,
    pub num_summand_vars: usize,
    pub num_equations: usize,
    pub rank: usize,
}

impl GammaSystem {
    pub fn gamma(&self) -> usize {
        self.num_edge_vars + self.num_summand_vars - self.rank
    }
}

/// Builds and solves the γ system for one decomposition choice.
pub fn gamma_system(
    pair: &PolarPair,
    skeleton: &Skeleton,
    decomps: &[Decomposition],
) -> Result<GammaSystem> {
    crate::ensure_internal!(
        decomps.len() == skeleton.primal_faces.len(),
        "one decomposition per 2-face required"
    );
    let edges = pair.faces.of_dim(1);
    // Primal edges looked up by sorted ambient endpoints, with their fixed
    // primitive direction (lex-smaller endpoint → lex-larger endpoint).
    let mut edge_lookup = std::collections::BTreeMap::new();
    let mut edge_dirs = Vec::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        let mut ends = pair.face_vertices(e);
        ends.sort();
        let (dir, _) = ends[1].sub(&ends[0]).primitive();
        edge_lookup.insert((ends[0].clone(), ends[1].clone()), i);
        edge_dirs.push(dir);
    }

    let num_edge_vars = edges.len();
    let mut summand_offset = Vec::with_capacity(decomps.len());
    let mut num_summand_vars = 0usize;
    for d in decomps {
        summand_offset.push(num_summand_vars);
        num_summand_vars += d
            .summands
            .iter()
            .map(|s| s.summand_dim()) // 1 coordinate per segment, 2 per triangle
            .sum::<usize>();
    }
    let num_vars = num_edge_vars + num_summand_vars;

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (f, sf) in skeleton.primal_faces.iter().enumerate() {
        // Per-summand variable offsets within this face's block.
        let mut offsets = Vec::with_capacity(decomps[f].summands.len());
        let mut acc = summand_offset[f];
        for s in &decomps[f].summands {
            offsets.push(acc);
            acc += s.summand_dim();
        }
        for e in &sf.edges {
            let a = sf.from_chart(&sf.vertices_chart[e.from]);
            let b = sf.from_chart(&sf.vertices_chart[e.to]);
            let (lo, hi) = if a <= b { (&a, &b) } else { (&b, &a) };
            let edge_idx = *edge_lookup.get(&(lo.clone(), hi.clone())).ok_or_else(|| {
                Error::internal(format!(
                    "boundary edge of {} is not an edge of the polytope",
                    sf.label
                ))
            })?;
            // The fixed edge direction in this face's chart: ± the ccw direction.
            let c = sf.direction_to_chart(&edge_dirs[edge_idx])?;
            crate::ensure_internal!(
                c == e.direction || c == e.direction.neg(),
                "edge direction not parallel to the face boundary on {}",
                sf.label
            );
            for (s, summand) in decomps[f].summands.iter().enumerate() {
                if !summand.contains_direction(&e.direction) {
                    continue;
                }
                let mut row = vec![BigInt::zero(); num_vars];
                row[edge_idx] = -BigInt::from(1);
                match summand {
                    SummandProfile::Segment(rep) => {
                        // One scalar: the slope along the canonical representative.
                        let sign = if &c == rep {
                            BigInt::from(1)
                        } else {
                            crate::ensure_internal!(
                                c == rep.neg(),
                                "segment direction mismatch on {}",
                                sf.label
                            );
                            BigInt::from(-1)
                        };
                        row[num_edge_vars + offsets[s]] = sign;
                    }
                    SummandProfile::Triangle(_) => {
                        // Two scalars: a linear functional on the face chart.
                        row[num_edge_vars + offsets[s]] = c.0[0].clone();
                        row[num_edge_vars + offsets[s] + 1] = c.0[1].clone();
                    }
                }
                rows.push(row);
            }
        }
    }
    let rank = linalg::rank_int(&rows);
    Ok(GammaSystem { num_edge_vars, num_summand_vars, num_equations: rows.len(), rank })
}

/// Everything the engine can say about one (polytope, decomposition choice) pair.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub polytope: String,
    pub regular: bool,
    /// Forcing proof when irregular.
    pub obstruction: Option<String>,
    /// Verified slope witness when regular.
    pub witness: Option<Vec<BigRational>>,
    pub chi_positive: BigInt,
    pub chi_negative: BigInt,
    pub chi: BigInt,
    pub gamma: usize,
    pub b2: usize,
    pub polar_volume: BigInt,
    /// Dimension of the slope consistency kernel.
    pub kernel_dim: usize,
    /// Number of primal edges (= edge variables of the γ system).
    pub num_edge_vars: usize,
}

/// Runs the full pipeline for one decomposition choice: regularity decision, Euler
/// split, γ system, polar volume, and the report-level consistency checks.
pub fn invariant_report(
    pair: &PolarPair,
    skeleton: &Skeleton,
    decomps: Vec<Decomposition>,
) -> Result<InvariantReport> {
    let euler = euler_split(skeleton, &decomps)?;
    let gamma_sys = gamma_system(pair, skeleton, &decomps)?;
    let ctx = skeleton.context(decomps)?;
    let outcome = ctx.decide()?;
    let kernel_dim = ctx.kernel_dim();

    let chi = euler.chi();
    crate::ensure_internal!(
        (&chi % BigInt::from(2)).is_zero(),
        "Euler number {chi} of {} is odd",
        pair.polytope.name
    );
    let gamma = gamma_sys.gamma();
    crate::ensure_internal!(
        gamma >= 4,
        "deformation dimension {gamma} of {} is below the global-linear floor",
        pair.polytope.name
    );
    let polar_volume = normalized_volume(&pair.dual.vertices, pair.polytope.dim)?;

    let (regular, witness, obstruction) = match outcome {
        RegularityOutcome::Regular { witness } => (true, Some(witness), None),
        RegularityOutcome::Irregular { obstruction } => {
            (false, None, Some(obstruction.detail().to_string()))
        }
    };
    Ok(InvariantReport {
        polytope: pair.polytope.name.clone(),
        regular,
        obstruction,
        witness,
        chi_positive: euler.positive,
        chi_negative: euler.negative,
        chi,
        gamma,
        b2: gamma - 3,
        polar_volume,
        kernel_dim,
        num_edge_vars: gamma_sys.num_edge_vars,
    })
}
