//! File formats: polytope JSON, whitespace matrix text, decomposition specs,
//! and report serialization.
//!
//! Polytope JSON: `{"name": ..., "dim": d, "vertices": [[x, ...], ...]}`.
//!
//! Matrix text: a header line `r c` (extra trailing tokens on the header line are
//! ignored) followed by an r×c integer matrix. Vertices are read as columns when
//! the matrix is wider than tall, as rows when taller than wide; a square matrix
//! is accepted only if both readings validate to the same polytope.
//!
//! Decomposition spec JSON: an object mapping a face selector — an exact face
//! label such as `"F2[5]"`, or `"*"` for every face not named explicitly — to a
//! preset: `"segments"`, `"triangles"`, `"pair-of-triangles"`, or an integer
//! index into the face's options sorted by triangle count (so for a doubled
//! hexagon 0 = six segments, 1 = three segments and two triangles, 2 = four
//! triangles).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::invariants::InvariantReport;
use crate::lattice::IntVector;
use crate::minkowski::{Decomposition, DecompositionChoice, DecompositionSweep};
use crate::polytope::LatticePolytope;

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    name: String,
    dim: usize,
    vertices: Vec<Vec<i64>>,
}

/// Serializes a polytope to the canonical JSON schema (vertices are already in
/// sorted order, so output is stable).
pub fn polytope_to_json(p: &LatticePolytope) -> Result<Value> {
    let vertices: Result<Vec<Vec<i64>>> = p
        .vertices
        .iter()
        .map(|v| {
            v.0.iter()
                .map(|c| c.to_i64().ok_or_else(|| Error::internal("coordinate exceeds i64")))
                .collect()
        })
        .collect();
    serde_json::to_value(PolytopeJson { name: p.name.clone(), dim: p.dim, vertices: vertices? })
        .map_err(|e| Error::internal(format!("serialization failed: {e}")))
}

/// Pretty-printed canonical JSON, newline-terminated.
pub fn polytope_json_string(p: &LatticePolytope) -> Result<String> {
    let v = polytope_to_json(p)?;
    serde_json::to_string_pretty(&v)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::internal(format!("serialization failed: {e}")))
}

/// Parses the polytope JSON schema and validates the vertex list.
pub fn parse_polytope_json(text: &str) -> Result<LatticePolytope> {
    let raw: PolytopeJson = serde_json::from_str(text)
        .map_err(|e| Error::invalid("malformed-json", format!("polytope JSON: {e}")))?;
    let vertices: Vec<IntVector> = raw.vertices.iter().map(|v| IntVector::from_i64(v)).collect();
    if vertices.iter().any(|v| v.dim() != raw.dim) {
        return Err(Error::invalid(
            "dimension-mismatch",
            format!("schema says dim {} but a vertex disagrees", raw.dim),
        ));
    }
    LatticePolytope::new(raw.name, vertices)
}

/// Parses whitespace matrix text (header `r c`, then r×c integers).
pub fn parse_matrix_text(text: &str, name: &str) -> Result<LatticePolytope> {
    let mut lines = text.lines();
    let header = loop {
        match lines.next() {
            Some(l) if l.trim().is_empty() => continue,
            Some(l) => break l,
            None => return Err(Error::invalid("malformed-matrix", "empty input")),
        }
    };
    let mut head = header.split_whitespace();
    let parse_dim = |tok: Option<&str>| -> Result<usize> {
        tok.and_then(|t| t.parse::<usize>().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::invalid("malformed-matrix", "header must start with `rows cols`"))
    };
    let rows = parse_dim(head.next())?;
    let cols = parse_dim(head.next())?;
    // Anything after the two counts on the header line is a comment; ignore it.
    let mut entries: Vec<BigInt> = Vec::with_capacity(rows * cols);
    for line in lines {
        for tok in line.split_whitespace() {
            let n: BigInt = tok.parse().map_err(|_| {
                Error::invalid("malformed-matrix", format!("bad matrix entry {tok:?}"))
            })?;
            entries.push(n);
        }
    }
    if entries.len() != rows * cols {
        return Err(Error::invalid(
            "malformed-matrix",
            format!("expected {} entries ({rows}×{cols}), found {}", rows * cols, entries.len()),
        ));
    }
    let matrix = |r: usize, c: usize| entries[r * cols + c].clone();
    let columns_as_vertices = || -> Result<LatticePolytope> {
        let verts =
            (0..cols).map(|j| IntVector((0..rows).map(|i| matrix(i, j)).collect())).collect();
        LatticePolytope::new(name, verts)
    };
    let rows_as_vertices = || -> Result<LatticePolytope> {
        let verts =
            (0..rows).map(|i| IntVector((0..cols).map(|j| matrix(i, j)).collect())).collect();
        LatticePolytope::new(name, verts)
    };
    if cols > rows {
        columns_as_vertices()
    } else if rows > cols {
        rows_as_vertices()
    } else {
        match (columns_as_vertices(), rows_as_vertices()) {
            (Ok(a), Ok(b)) if a.vertices == b.vertices => Ok(a),
            (Ok(_), Ok(_)) => Err(Error::invalid(
                "ambiguous-matrix",
                "square matrix reads as two different polytopes; transpose or use JSON",
            )),
            (Ok(a), Err(_)) => Ok(a),
            (Err(_), Ok(b)) => Ok(b),
            (Err(e), Err(_)) => Err(e),
        }
    }
}

/// Parses either supported polytope format, dispatching on the leading character.
pub fn parse_polytope_text(text: &str, fallback_name: &str) -> Result<LatticePolytope> {
    match text.trim_start().chars().next() {
        Some('{') => parse_polytope_json(text),
        Some(_) => parse_matrix_text(text, fallback_name),
        None => Err(Error::invalid("empty-input", "no polytope data")),
    }
}

/// One decomposition preset from a spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionPreset {
    Segments,
    Triangles,
    PairOfTriangles,
    /// Index into the face's options sorted by triangle count.
    Value(usize),
}

impl DecompositionPreset {
    fn from_json(key: &str, v: &Value) -> Result<DecompositionPreset> {
        match v {
            Value::String(s) => match s.as_str() {
                "segments" => Ok(DecompositionPreset::Segments),
                "triangles" => Ok(DecompositionPreset::Triangles),
                "pair-of-triangles" => Ok(DecompositionPreset::PairOfTriangles),
                other => Err(Error::invalid(
                    "unknown-preset",
                    format!("selector {key:?}: unknown preset {other:?}"),
                )),
            },
            Value::Number(n) => n
                .as_u64()
                .map(|v| DecompositionPreset::Value(v as usize))
                .ok_or_else(|| {
                    Error::invalid(
                        "unknown-preset",
                        format!("selector {key:?}: preset index must be a small non-negative integer"),
                    )
                }),
            _ => Err(Error::invalid(
                "unknown-preset",
                format!("selector {key:?}: preset must be a string or integer"),
            )),
        }
    }
}

/// A parsed decomposition spec: exact-label entries plus an optional `"*"` default.
#[derive(Clone, Debug, Default)]
pub struct DecompositionSpec {
    pub by_label: Vec<(String, DecompositionPreset)>,
    pub default: Option<DecompositionPreset>,
}

/// Parses decomposition-spec JSON (`{face selector: preset}`).
pub fn parse_decomposition_spec(text: &str) -> Result<DecompositionSpec> {
    let raw: Value = serde_json::from_str(text)
        .map_err(|e| Error::invalid("malformed-json", format!("decomposition spec: {e}")))?;
    let obj = raw.as_object().ok_or_else(|| {
        Error::invalid("malformed-json", "decomposition spec must be a JSON object")
    })?;
    let mut spec = DecompositionSpec::default();
    for (key, value) in obj {
        let preset = DecompositionPreset::from_json(key, value)?;
        if key == "*" {
            spec.default = Some(preset);
        } else {
            spec.by_label.push((key.clone(), preset));
        }
    }
    Ok(spec)
}

fn select_option(
    label: &str,
    options: &[Decomposition],
    preset: &DecompositionPreset,
) -> Result<usize> {
    // Options sorted by triangle count; within a face these counts are distinct
    // (each decomposition of a catalog face has a different number of triangles).
    let mut order: Vec<usize> = (0..options.len()).collect();
    order.sort_by_key(|&i| options[i].triangle_count());
    let found = match preset {
        DecompositionPreset::Segments => order
            .iter()
            .copied()
            .find(|&i| options[i].is_all_segments()),
        DecompositionPreset::Triangles => order
            .iter()
            .copied()
            .find(|&i| options[i].is_all_triangles()),
        DecompositionPreset::PairOfTriangles => order
            .iter()
            .copied()
            .find(|&i| options[i].is_all_triangles() && options[i].triangle_count() == 2),
        DecompositionPreset::Value(v) => order.get(*v).copied(),
    };
    found.ok_or_else(|| {
        Error::invalid(
            "preset-mismatch",
            format!(
                "face {label} has no decomposition matching {preset:?} (it has {} option(s))",
                options.len()
            ),
        )
    })
}

/// Resolves a spec against a sweep, producing one choice. Faces with a single
/// option may be omitted; every face with several options must be covered by
/// an exact label or the `"*"` default.
pub fn apply_decomposition_spec(
    sweep: &DecompositionSweep,
    spec: &DecompositionSpec,
) -> Result<DecompositionChoice> {
    for (key, _) in &spec.by_label {
        if !sweep.faces.iter().any(|f| &f.label == key) {
            return Err(Error::invalid(
                "unknown-face",
                format!(
                    "selector {key:?} matches no 2-face (labels are {})",
                    sweep.faces.iter().map(|f| f.label.as_str()).collect::<Vec<_>>().join(", ")
                ),
            ));
        }
    }
    let mut indices = Vec::with_capacity(sweep.faces.len());
    for (face, options) in sweep.faces.iter().zip(&sweep.options) {
        let preset = spec
            .by_label
            .iter()
            .find(|(k, _)| k == &face.label)
            .map(|(_, p)| p)
            .or(spec.default.as_ref());
        let index = match preset {
            Some(p) => select_option(&face.label, options, p)?,
            None if options.len() == 1 => 0,
            None => {
                return Err(Error::invalid(
                    "underdetermined-decomposition",
                    format!(
                        "face {} has {} decompositions; name it in the spec or add a \"*\" default",
                        face.label,
                        options.len()
                    ),
                ))
            }
        };
        indices.push(index);
    }
    Ok(DecompositionChoice { indices })
}

/// Formats a rational as `p/q` in lowest terms (q ≥ 1).
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn small_int(n: &BigInt, what: &str) -> Result<i64> {
    n.to_i64().ok_or_else(|| Error::internal(format!("{what} exceeds i64")))
}

/// Serializes an invariant report to JSON with exact rationals as `p/q` strings.
pub fn report_to_json(r: &InvariantReport) -> Result<Value> {
    Ok(json!({
        "polytope": r.polytope,
        "regular": r.regular,
        "obstruction": r.obstruction,
        "witness": r.witness.as_ref().map(|w| w.iter().map(rational_string).collect::<Vec<_>>()),
        "chi_positive": small_int(&r.chi_positive, "chi_positive")?,
        "chi_negative": small_int(&r.chi_negative, "chi_negative")?,
        "chi": small_int(&r.chi, "chi")?,
        "gamma": r.gamma,
        "b2": r.b2,
        "polar_volume": small_int(&r.polar_volume, "polar_volume")?,
        "kernel_dim": r.kernel_dim,
        "num_edge_vars": r.num_edge_vars,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::polytope::PolarPair;

    fn p9() -> LatticePolytope {
        catalog::polygon("P9").unwrap()
    }

    #[test]
    fn polytope_json_round_trips() {
        let p = p9();
        let text = polytope_json_string(&p).unwrap();
        let back = parse_polytope_json(&text).unwrap();
        assert_eq!(back, p);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn matrix_text_reads_columns_when_wide_and_rows_when_tall() {
        let unit_triangle: Vec<IntVector> =
            [[-1, -1], [0, 1], [1, 0]].iter().map(|c| IntVector::from_i64(c)).collect();
        let wide = parse_matrix_text("2 3\n1 0 -1\n0 1 -1\n", "T").unwrap();
        assert_eq!(wide.vertices, unit_triangle);
        let tall = parse_matrix_text("3 2\n1 0\n0 1\n-1 -1\n", "T").unwrap();
        assert_eq!(tall.vertices, unit_triangle);
        // Header comments after the two counts are ignored.
        let commented = parse_matrix_text("2 3 M:9 3 N:3 3\n1 0 -1\n0 1 -1\n", "T").unwrap();
        assert_eq!(commented.vertices, unit_triangle);
    }

    #[test]
    fn matrix_text_rejects_bad_input() {
        assert!(parse_matrix_text("", "x").is_err());
        assert!(parse_matrix_text("2 3\n1 0 -1\n0 1\n", "x").is_err()); // short
        assert!(parse_matrix_text("2 3\n1 0 -1\n0 1 -1 7\n", "x").is_err()); // long
        assert!(parse_matrix_text("2 3\n1 0 -1\n0 one -1\n", "x").is_err()); // non-integer
        // Square matrices of distinct points can never be full-dimensional
        // (n points in n dimensions), so both readings fail validation.
        let err = parse_matrix_text("3 3\n1 0 0\n0 1 0\n0 0 1\n", "x").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        // A point interior to the hull is rejected.
        let err = parse_matrix_text("2 4\n1 0 -1 0\n0 1 -1 0\n", "x").unwrap_err();
        assert_eq!(err.kind(), "not-a-vertex");
    }

    #[test]
    fn text_dispatch_prefers_json_for_braces() {
        let p = p9();
        let via_json = parse_polytope_text(&polytope_json_string(&p).unwrap(), "zzz").unwrap();
        assert_eq!(via_json.name, "P9");
        let via_matrix = parse_polytope_text("2 3\n1 0 -1\n0 1 -1\n", "mine").unwrap();
        assert_eq!(via_matrix.name, "mine");
    }

    #[test]
    fn decomposition_spec_selects_options_by_preset() {
        let product = catalog::polygon("P6").unwrap().product(&catalog::polygon("P6").unwrap()).unwrap();
        let pair = PolarPair::new(product).unwrap();
        let sweep = DecompositionSweep::new(&pair).unwrap();
        // All hexagons as segments.
        let spec = parse_decomposition_spec(r#"{"*": "segments"}"#).unwrap();
        let choice = apply_decomposition_spec(&sweep, &spec).unwrap();
        for d in sweep.materialize(&choice) {
            assert!(d.is_all_segments());
        }
        // One named face as a pair of triangles, the rest segments.
        let label = sweep
            .faces
            .iter()
            .zip(&sweep.options)
            .find(|(_, o)| o.len() > 1)
            .map(|(f, _)| f.label.clone())
            .unwrap();
        let spec = parse_decomposition_spec(&format!(
            r#"{{"{label}": "pair-of-triangles", "*": "segments"}}"#
        ))
        .unwrap();
        let choice = apply_decomposition_spec(&sweep, &spec).unwrap();
        let picked = sweep.faces.iter().position(|f| f.label == label).unwrap();
        let decomps = sweep.materialize(&choice);
        assert!(decomps[picked].is_all_triangles());
        assert_eq!(decomps[picked].triangle_count(), 2);
        // Integer presets index options by triangle count.
        let spec = parse_decomposition_spec(&format!(r#"{{"{label}": 1, "*": 0}}"#)).unwrap();
        let choice = apply_decomposition_spec(&sweep, &spec).unwrap();
        let decomps = sweep.materialize(&choice);
        assert!(decomps[picked].is_all_triangles());
    }

    #[test]
    fn decomposition_spec_reports_gaps_and_typos() {
        let product = catalog::polygon("P6").unwrap().product(&catalog::polygon("P6").unwrap()).unwrap();
        let pair = PolarPair::new(product).unwrap();
        let sweep = DecompositionSweep::new(&pair).unwrap();
        let empty = parse_decomposition_spec("{}").unwrap();
        let err = apply_decomposition_spec(&sweep, &empty).unwrap_err();
        assert_eq!(err.kind(), "underdetermined-decomposition");
        let typo = parse_decomposition_spec(r#"{"F2[999]": "segments", "*": "segments"}"#).unwrap();
        let err = apply_decomposition_spec(&sweep, &typo).unwrap_err();
        assert_eq!(err.kind(), "unknown-face");
        let bad = parse_decomposition_spec(r#"{"*": "hexagons"}"#).unwrap_err();
        assert_eq!(bad.kind(), "unknown-preset");
        // A face with only segments/triangles cannot satisfy index 2.
        let over = parse_decomposition_spec(r#"{"*": 2}"#).unwrap();
        let err = apply_decomposition_spec(&sweep, &over).unwrap_err();
        assert_eq!(err.kind(), "preset-mismatch");
    }

    #[test]
    fn unique_decompositions_need_no_spec() {
        let product = catalog::polygon("P9").unwrap().product(&catalog::polygon("P9").unwrap()).unwrap();
        let pair = PolarPair::new(product).unwrap();
        let sweep = DecompositionSweep::new(&pair).unwrap();
        let choice = apply_decomposition_spec(&sweep, &DecompositionSpec::default()).unwrap();
        assert!(choice.indices.iter().all(|&i| i == 0));
    }

    #[test]
    fn report_json_uses_exact_rational_strings() {
        use num_bigint::BigInt;
        let half = BigRational::new(BigInt::from(-3), BigInt::from(6));
        assert_eq!(rational_string(&half), "-1/2");
        let five = BigRational::from(BigInt::from(5));
        assert_eq!(rational_string(&five), "5/1");

        let product = catalog::polygon("P9").unwrap().product(&catalog::polygon("P9").unwrap()).unwrap();
        let pair = PolarPair::new(product).unwrap();
        let skeleton = crate::regularity::Skeleton::build(&pair).unwrap();
        let sweep = DecompositionSweep::new(&pair).unwrap();
        let choice = sweep.choice(0).unwrap();
        let decomps: Vec<_> = sweep.materialize(&choice).into_iter().cloned().collect();
        let report = crate::invariants::invariant_report(&pair, &skeleton, decomps).unwrap();
        let v = report_to_json(&report).unwrap();
        assert_eq!(v["regular"], Value::Bool(true));
        assert_eq!(v["chi"], json!(-144));
        assert_eq!(v["chi_positive"], json!(18));
        assert_eq!(v["chi_negative"], json!(162));
        assert_eq!(v["b2"], json!(1));
        assert_eq!(v["polar_volume"], json!(9));
        let witness = v["witness"].as_array().unwrap();
        assert!(!witness.is_empty());
        assert!(witness.iter().all(|s| s.as_str().unwrap().contains('/')));
    }
}
