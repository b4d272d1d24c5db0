//! Family tables: sweep every decomposition choice of a catalog product,
//! partition the choices into symmetry orbits, compute the invariant report of
//! each orbit representative, aggregate the regular configurations into table
//! rows, and diff the result against the bundled reference tables.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::catalog;
use crate::error::{Error, Result};
use crate::invariants::{invariant_report, InvariantReport};
use crate::minkowski::{DecompositionChoice, DecompositionSweep, SummandProfile};
use crate::polytope::PolarPair;
use crate::reference::{self, ReferenceRow};
use crate::regularity::Skeleton;
use crate::symmetry::{automorphism_group, choice_action, choice_orbits};

/// The five product families with bundled reference tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    /// Hexagon × hexagon.
    P66,
    /// Hexagon × k-gon for k ∈ {7, 8, 9}.
    P6k,
    /// Hexagon × pentagon.
    P65,
    /// Hexagon × square.
    P64,
    /// Products with a unique decomposition choice (no hexagon factor).
    Psingle,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::P66, Family::P6k, Family::P65, Family::P64, Family::Psingle];

    pub fn name(self) -> &'static str {
        match self {
            Family::P66 => "P66",
            Family::P6k => "P6k",
            Family::P65 => "P65",
            Family::P64 => "P64",
            Family::Psingle => "Psingle",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        let lower = s.to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name().to_ascii_lowercase() == lower)
            .ok_or_else(|| {
                Error::invalid(
                    "unknown-family",
                    format!(
                        "unknown family {s:?}; expected one of {}",
                        Family::ALL.map(Family::name).join(", ")
                    ),
                )
            })
    }

    /// The factor labels (k₁, k₂) of every product in the family.
    pub fn pairs(self) -> &'static [(u8, u8)] {
        match self {
            Family::P66 => &[(6, 6)],
            Family::P6k => &[(6, 7), (6, 8), (6, 9)],
            Family::P65 => &[(6, 5)],
            Family::P64 => &[(6, 4)],
            Family::Psingle => &[
                (4, 4),
                (4, 5),
                (4, 7),
                (4, 8),
                (4, 9),
                (5, 5),
                (5, 7),
                (5, 8),
                (5, 9),
                (7, 7),
                (7, 8),
                (7, 9),
                (8, 8),
                (8, 9),
                (9, 9),
            ],
        }
    }

    /// The bundled reference rows for the family.
    pub fn reference_rows(self) -> Vec<ReferenceRow> {
        match self {
            Family::P66 => reference::p66_rows(),
            Family::P6k => reference::P6K.to_vec(),
            Family::P65 => reference::P65.to_vec(),
            Family::P64 => reference::P64.to_vec(),
            Family::Psingle => reference::PSINGLE.to_vec(),
        }
    }
}

/// Which side of a product A × B a 2-face lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FaceSide {
    /// A × {w}: all vertices share their B-coordinates.
    A,
    /// {v} × B: all vertices share their A-coordinates.
    B,
    /// edge × edge rectangle.
    Mixed,
}

/// Everything computed for one orbit of decomposition choices.
#[derive(Clone, Debug)]
pub struct OrbitSummary {
    /// Lex-least choice index in the orbit (the analysed representative).
    pub representative: u64,
    /// Number of choices in the orbit.
    pub size: u64,
    /// Canonical configuration key (constant on the orbit).
    pub configuration: String,
    pub report: InvariantReport,
}

/// The orbit analysis of one product polytope.
#[derive(Clone, Debug)]
pub struct ProductOrbits {
    pub k1: u8,
    pub k2: u8,
    pub sweep_total: u64,
    pub automorphism_count: usize,
    pub orbits: Vec<OrbitSummary>,
}

/// One row of an emitted family table: a configuration together with the
/// invariants shared by its regular orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputedRow {
    pub k1: u8,
    pub k2: u8,
    pub configuration: String,
    pub chi: i64,
    pub b2: u32,
    pub vol: u64,
    /// All orbits of the configuration (regular or not).
    pub orbits: u64,
    /// Orbits of this (configuration, χ, b₂, Vol) class whose representative
    /// is regular.
    pub regular_orbits: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscrepancyKind {
    /// A reference row has no computed regular counterpart.
    MissingConfiguration,
    /// A computed regular row is absent from the reference table.
    ExtraRegularConfiguration,
    /// Configuration present on both sides but some cell differs.
    CellMismatch,
}

impl DiscrepancyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiscrepancyKind::MissingConfiguration => "missing-configuration",
            DiscrepancyKind::ExtraRegularConfiguration => "extra-regular-configuration",
            DiscrepancyKind::CellMismatch => "cell-mismatch",
        }
    }
}

/// A difference between the computed table and the bundled reference.
#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub kind: DiscrepancyKind,
    pub k1: u8,
    pub k2: u8,
    pub configuration: String,
    pub detail: String,
}

/// A fully computed family table with its reference diff.
#[derive(Clone, Debug)]
pub struct FamilyTable {
    pub family: Family,
    pub products: Vec<ProductOrbits>,
    pub rows: Vec<ComputedRow>,
    pub discrepancies: Vec<Discrepancy>,
}

fn face_side(
    sf: &crate::minkowski::ScaledFace,
    dim_a: usize,
) -> FaceSide {
    let ambient: Vec<crate::lattice::IntVector> =
        sf.vertices_chart.iter().map(|c| sf.from_chart(c)).collect();
    let first = &ambient[0];
    let a_side = ambient.iter().all(|v| v.0[dim_a..] == first.0[dim_a..]);
    let b_side = ambient.iter().all(|v| v.0[..dim_a] == first.0[..dim_a]);
    match (a_side, b_side) {
        (true, false) => FaceSide::A,
        (false, true) => FaceSide::B,
        _ => FaceSide::Mixed,
    }
}

fn triangle_count(d: &crate::minkowski::Decomposition) -> usize {
    d.summands.iter().filter(|s| matches!(s, SummandProfile::Triangle(_))).count()
}

/// The canonical configuration key of one choice. The key must be constant on
/// symmetry orbits; this is asserted by the caller.
fn configuration_string(
    family: Family,
    sweep: &DecompositionSweep,
    sides: &[FaceSide],
    choice: &DecompositionChoice,
) -> Result<String> {
    // Per-face data for the faces that actually have more than one option.
    let mut values = Vec::new(); // (side, scale-is-two, triangles in chosen decomposition)
    for (f, opts) in sweep.options.iter().enumerate() {
        if opts.len() <= 1 {
            continue;
        }
        let tri = triangle_count(&opts[choice.indices[f]]);
        let two = sweep.faces[f].scale == BigInt::from(2);
        values.push((sides[f], two, tri));
    }
    match family {
        Family::Psingle => {
            crate::ensure_internal!(
                values.is_empty(),
                "expected a unique decomposition choice"
            );
            Ok("unique".to_string())
        }
        Family::P6k => {
            crate::ensure_internal!(
                values.iter().all(|v| v.0 == FaceSide::A && !v.1),
                "expected only unit hexagon faces on the first factor to have options"
            );
            let n = values.iter().filter(|v| v.2 > 0).count();
            Ok(format!("({n})"))
        }
        Family::P66 => {
            crate::ensure_internal!(
                values.iter().all(|v| v.0 != FaceSide::Mixed && !v.1),
                "expected only unit hexagon faces to have options"
            );
            let a = values.iter().filter(|v| v.0 == FaceSide::A && v.2 > 0).count();
            let b = values.iter().filter(|v| v.0 == FaceSide::B && v.2 > 0).count();
            let (n1, n2) = (a.min(b), a.max(b));
            Ok(format!("({n1},{n2})"))
        }
        Family::P65 => {
            crate::ensure_internal!(
                values.iter().all(|v| v.0 == FaceSide::A),
                "expected only hexagon faces on the first factor to have options"
            );
            let mut scale2: Vec<usize> =
                values.iter().filter(|v| v.1).map(|v| v.2 / 2).collect();
            crate::ensure_internal!(scale2.len() == 2, "expected two scale-two hexagon faces");
            scale2.sort_unstable();
            let m = values.iter().filter(|v| !v.1 && v.2 > 0).count();
            crate::ensure_internal!(
                values.iter().filter(|v| !v.1).count() == 3,
                "expected three unit hexagon faces"
            );
            Ok(format!("({},{}),{m}", scale2[0], scale2[1]))
        }
        Family::P64 => {
            crate::ensure_internal!(
                values.iter().all(|v| v.0 == FaceSide::A && v.1),
                "expected four scale-two hexagon faces"
            );
            let mut vals: Vec<usize> = values.iter().map(|v| v.2 / 2).collect();
            crate::ensure_internal!(vals.len() == 4, "expected four scale-two hexagon faces");
            vals.sort_unstable();
            Ok(format!("({},{},{},{})", vals[0], vals[1], vals[2], vals[3]))
        }
    }
}

/// Sweeps one product: orbit partition plus an invariant report per orbit
/// representative. Reports are computed in parallel; output order is
/// deterministic (orbits sorted by least element).
pub fn analyze_product(family: Family, k1: u8, k2: u8) -> Result<ProductOrbits> {
    let a = catalog::polygon(&format!("P{k1}"))?;
    let b = catalog::polygon(&format!("P{k2}"))?;
    let product = a.product(&b)?;
    let dim_a = a.dim;
    let pair = PolarPair::new(product)?;
    let skeleton = Skeleton::build(&pair)?;
    let sweep = DecompositionSweep::new(&pair)?;
    let sweep_total = sweep.total_u64()?;

    let autos = automorphism_group(&pair.polytope)?;
    let automorphism_count = autos.len();
    let actions = autos
        .iter()
        .map(|g| choice_action(&pair, &sweep, g))
        .collect::<Result<Vec<_>>>()?;
    let orbit_indices = choice_orbits(&sweep, &actions)?;

    let sides: Vec<FaceSide> = sweep.faces.iter().map(|sf| face_side(sf, dim_a)).collect();

    let orbits: Vec<OrbitSummary> = orbit_indices
        .par_iter()
        .map(|orbit| -> Result<OrbitSummary> {
            let rep = orbit[0];
            let choice = sweep.choice(rep)?;
            let configuration = configuration_string(family, &sweep, &sides, &choice)?;
            // The key must not depend on the orbit member we picked.
            for &other in &orbit[1..] {
                let c = configuration_string(family, &sweep, &sides, &sweep.choice(other)?)?;
                crate::ensure_internal!(
                    c == configuration,
                    "configuration key varies within an orbit: {c} vs {configuration}"
                );
            }
            let decomps: Vec<_> =
                sweep.materialize(&choice).into_iter().cloned().collect();
            let report = invariant_report(&pair, &skeleton, decomps)?;
            Ok(OrbitSummary {
                representative: rep,
                size: orbit.len() as u64,
                configuration,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ProductOrbits { k1, k2, sweep_total, automorphism_count, orbits })
}

fn to_i64(v: &BigInt, what: &str) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::internal(format!("{what} out of i64 range")))
}

/// Aggregates the orbit summaries of one product into table rows (regular
/// configurations only).
pub fn rows_for_product(p: &ProductOrbits) -> Result<Vec<ComputedRow>> {
    // All orbits of a configuration, and the regular (config, χ, b₂) classes.
    let mut orbits_by_config: BTreeMap<&str, u64> = BTreeMap::new();
    for o in &p.orbits {
        *orbits_by_config.entry(o.configuration.as_str()).or_insert(0) += 1;
    }
    let mut classes: BTreeMap<(String, i64, u32, u64), u64> = BTreeMap::new();
    for o in &p.orbits {
        if !o.report.regular {
            continue;
        }
        let chi = to_i64(&o.report.chi, "chi")?;
        let b2 = o.report.b2 as u32;
        let vol = o
            .report
            .polar_volume
            .to_u64()
            .ok_or_else(|| Error::internal("polar volume out of u64 range"))?;
        *classes.entry((o.configuration.clone(), chi, b2, vol)).or_insert(0) += 1;
    }
    Ok(classes
        .into_iter()
        .map(|((configuration, chi, b2, vol), regular_orbits)| ComputedRow {
            k1: p.k1,
            k2: p.k2,
            orbits: orbits_by_config[configuration.as_str()],
            configuration,
            chi,
            b2,
            vol,
            regular_orbits,
        })
        .collect())
}

/// Diffs computed rows against the family's reference rows.
pub fn compare_rows(family: Family, computed: &[ComputedRow]) -> Vec<Discrepancy> {
    let reference = family.reference_rows();
    let mut out = Vec::new();
    let ref_map: BTreeMap<(u8, u8, &str), &ReferenceRow> =
        reference.iter().map(|r| ((r.k1, r.k2, r.configuration), r)).collect();
    let mut computed_map: BTreeMap<(u8, u8, &str), Vec<&ComputedRow>> = BTreeMap::new();
    for row in computed {
        computed_map.entry((row.k1, row.k2, row.configuration.as_str())).or_default().push(row);
    }

    for (key, r) in &ref_map {
        match computed_map.get(key) {
            None => out.push(Discrepancy {
                kind: DiscrepancyKind::MissingConfiguration,
                k1: r.k1,
                k2: r.k2,
                configuration: r.configuration.to_string(),
                detail: "no regular orbit computed for this configuration".to_string(),
            }),
            Some(rows) if rows.len() > 1 => out.push(Discrepancy {
                kind: DiscrepancyKind::CellMismatch,
                k1: r.k1,
                k2: r.k2,
                configuration: r.configuration.to_string(),
                detail: format!(
                    "configuration splits into {} regular invariant classes",
                    rows.len()
                ),
            }),
            Some(rows) => {
                let c = rows[0];
                let mut cells = Vec::new();
                if c.chi != r.chi {
                    cells.push(format!("chi: computed {} expected {}", c.chi, r.chi));
                }
                if c.b2 != r.b2 {
                    cells.push(format!("b2: computed {} expected {}", c.b2, r.b2));
                }
                if c.vol != r.vol {
                    cells.push(format!("vol: computed {} expected {}", c.vol, r.vol));
                }
                if c.orbits != r.orbits {
                    cells.push(format!("orbits: computed {} expected {}", c.orbits, r.orbits));
                }
                if !cells.is_empty() {
                    out.push(Discrepancy {
                        kind: DiscrepancyKind::CellMismatch,
                        k1: r.k1,
                        k2: r.k2,
                        configuration: r.configuration.to_string(),
                        detail: cells.join("; "),
                    });
                }
            }
        }
    }
    for (key, rows) in &computed_map {
        if !ref_map.contains_key(key) {
            let c = rows[0];
            out.push(Discrepancy {
                kind: DiscrepancyKind::ExtraRegularConfiguration,
                k1: c.k1,
                k2: c.k2,
                configuration: c.configuration.clone(),
                detail: format!(
                    "computed regular row (chi {}, b2 {}, vol {}, orbits {}) has no reference counterpart",
                    c.chi, c.b2, c.vol, c.orbits
                ),
            });
        }
    }
    out.sort_by(|a, b| {
        (a.k1, a.k2, &a.configuration, a.kind.as_str())
            .cmp(&(b.k1, b.k2, &b.configuration, b.kind.as_str()))
    });
    out
}

/// Computes one full family table with its reference diff.
pub fn family_table(family: Family) -> Result<FamilyTable> {
    let mut products = Vec::new();
    for &(k1, k2) in family.pairs() {
        products.push(analyze_product(family, k1, k2)?);
    }
    let mut rows = Vec::new();
    for p in &products {
        rows.extend(rows_for_product(p)?);
    }
    rows.sort_by(|a, b| {
        (a.k1, a.k2, a.configuration.as_str()).cmp(&(b.k1, b.k2, b.configuration.as_str()))
    });
    let discrepancies = compare_rows(family, &rows);
    Ok(FamilyTable { family, products, rows, discrepancies })
}

/// Renders the emitted table as CSV. Byte-stable: rows are already in
/// canonical order and annotations come from the bundled reference.
pub fn csv_string(family: Family, rows: &[ComputedRow]) -> Result<String> {
    let reference = family.reference_rows();
    let annotations: BTreeMap<(u8, u8, &str), &str> = reference
        .iter()
        .map(|r| ((r.k1, r.k2, r.configuration), r.annotation))
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "k1", "k2", "chi", "b2", "vol", "orbits", "configuration", "annotation"])
        .map_err(|e| Error::internal(format!("csv: {e}")))?;
    for r in rows {
        let annotation = annotations
            .get(&(r.k1, r.k2, r.configuration.as_str()))
            .copied()
            .unwrap_or("");
        w.write_record([
            family.name(),
            &r.k1.to_string(),
            &r.k2.to_string(),
            &r.chi.to_string(),
            &r.b2.to_string(),
            &r.vol.to_string(),
            &r.orbits.to_string(),
            &r.configuration,
            annotation,
        ])
        .map_err(|e| Error::internal(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::internal(format!("csv: {e}")))
}

/// JSON rendering of a family table (rows, discrepancies, orbit summaries).
pub fn table_json(table: &FamilyTable) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "k1": r.k1,
                "k2": r.k2,
                "configuration": r.configuration,
                "chi": r.chi,
                "b2": r.b2,
                "vol": r.vol,
                "orbits": r.orbits,
                "regular_orbits": r.regular_orbits,
            })
        })
        .collect();
    let discrepancies: Vec<serde_json::Value> = table
        .discrepancies
        .iter()
        .map(|d| {
            serde_json::json!({
                "kind": d.kind.as_str(),
                "k1": d.k1,
                "k2": d.k2,
                "configuration": d.configuration,
                "detail": d.detail,
            })
        })
        .collect();
    let products: Vec<serde_json::Value> = table
        .products
        .iter()
        .map(|p| {
            let orbits: Vec<serde_json::Value> = p
                .orbits
                .iter()
                .map(|o| {
                    serde_json::json!({
                        "representative": o.representative,
                        "size": o.size,
                        "configuration": o.configuration,
                        "regular": o.report.regular,
                        "chi": o.report.chi.to_i64(),
                        "gamma": o.report.gamma,
                        "b2": o.report.b2,
                    })
                })
                .collect();
            serde_json::json!({
                "k1": p.k1,
                "k2": p.k2,
                "sweep_total": p.sweep_total,
                "automorphisms": p.automorphism_count,
                "orbits": orbits,
            })
        })
        .collect();
    serde_json::json!({
        "family": table.family.name(),
        "rows": rows,
        "discrepancies": discrepancies,
        "products": products,
    })
}
