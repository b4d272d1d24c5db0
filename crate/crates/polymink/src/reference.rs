//! Frozen reference tables for the catalog product families.
//!
//! These are the expected invariants the engine is validated against. Each row
//! records a decomposition configuration of a product polytope together with
//! the invariants of the predicted smoothing and the number of symmetry orbits
//! of choices realising the configuration. Annotations carry differential
//! operator database identifiers and classical model descriptions where known.
//!
//! One known inconsistency is preserved on purpose: the χ column of the
//! hexagon×pentagon family (`P65`) disagrees with the Euler-characteristic
//! formula by a constant offset of 24 (the reference prints 2(n₁+n₂+m) − 90
//! where the formula — which every other family's column satisfies — gives
//! 2(n₁+n₂+m) − 66). The rows are kept as-is so the comparison in
//! [`crate::tables`] reports the mismatch instead of hiding it.

/// One row of a reference family table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub k1: u8,
    pub k2: u8,
    pub chi: i64,
    pub b2: u32,
    pub vol: u64,
    /// Number of symmetry orbits of decomposition choices with this
    /// configuration (regular or not).
    pub orbits: u64,
    /// Canonical configuration key; see [`crate::tables`] for the format used
    /// by each family.
    pub configuration: &'static str,
    /// Operator database identifiers / classical descriptions; empty if none.
    pub annotation: &'static str,
}

const fn row(
    k1: u8,
    k2: u8,
    chi: i64,
    b2: u32,
    vol: u64,
    orbits: u64,
    configuration: &'static str,
    annotation: &'static str,
) -> ReferenceRow {
    ReferenceRow { k1, k2, chi, b2, vol, orbits, configuration, annotation }
}

/// Hexagon × k-gon families for k ∈ {7, 8, 9}. Configuration `(n)` means `n`
/// hexagonal faces carry the two-triangle decomposition and the rest the
/// three-segment one.
pub const P6K: &[ReferenceRow] = &[
    row(6, 7, -90, 2, 30, 1, "(0)", "AESZ 102"),
    row(6, 7, -86, 1, 30, 6, "(2)", ""),
    row(6, 7, -84, 1, 30, 6, "(3)", ""),
    row(6, 7, -80, 3, 30, 1, "(5)", "AESZ 113"),
    row(6, 8, -120, 2, 24, 1, "(0)", "AESZ 45"),
    row(6, 8, -116, 1, 24, 2, "(2)", "AESZ 29"),
    row(6, 8, -112, 3, 24, 1, "(4)", "AESZ 58"),
    row(6, 9, -162, 2, 18, 1, "(0)", "AESZ 15"),
    row(6, 9, -156, 3, 18, 1, "(3)", "AESZ 70"),
];

/// Orbit counts for the hexagon × hexagon family, indexed by the pair
/// (n₁, n₂) with n₁ ≤ n₂, where nᵢ counts the hexagonal faces on side `i`
/// carrying the two-triangle decomposition. `None` below the diagonal.
pub const P66_ORBITS: [[u64; 7]; 7] = {
    let mut m = [[0u64; 7]; 7];
    let upper: [[u64; 7]; 7] = [
        [1, 1, 3, 3, 3, 1, 1],
        [0, 1, 3, 3, 3, 1, 1],
        [0, 0, 6, 9, 9, 3, 3],
        [0, 0, 0, 6, 9, 3, 3],
        [0, 0, 0, 0, 6, 3, 3],
        [0, 0, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 0, 0, 1],
    ];
    let mut i = 0;
    while i < 7 {
        let mut j = 0;
        while j < 7 {
            if i <= j {
                m[i][j] = upper[i][j];
                m[j][i] = upper[i][j];
            }
            j += 1;
        }
        i += 1;
    }
    m
};

/// Invariants (b₂, χ) for the hexagon × hexagon family, same indexing as
/// [`P66_ORBITS`] (entries given for n₁ ≤ n₂ and mirrored).
pub const P66_INVARIANTS: [[(u32, i64); 7]; 7] = {
    let upper: [[(u32, i64); 7]; 7] = [
        [(3, -72), (2, -70), (2, -68), (2, -66), (2, -64), (2, -62), (4, -60)],
        [(0, 0), (1, -68), (1, -66), (1, -64), (1, -62), (1, -60), (3, -58)],
        [(0, 0), (0, 0), (1, -64), (1, -62), (1, -60), (1, -58), (3, -56)],
        [(0, 0), (0, 0), (0, 0), (1, -60), (1, -58), (1, -56), (3, -54)],
        [(0, 0), (0, 0), (0, 0), (0, 0), (1, -56), (1, -54), (3, -52)],
        [(0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (1, -52), (3, -50)],
        [(0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (5, -48)],
    ];
    let mut m = [[(0u32, 0i64); 7]; 7];
    let mut i = 0;
    while i < 7 {
        let mut j = i;
        while j < 7 {
            m[i][j] = upper[i][j];
            m[j][i] = upper[i][j];
            j += 1;
        }
        i += 1;
    }
    m
};

/// Normalized volume of the polar dual of the hexagon × hexagon product.
pub const P66_VOL: u64 = 36;

/// Expected regularity for the hexagon × hexagon family.
pub fn p66_regular(n1: usize, n2: usize) -> bool {
    !matches!(n1, 1 | 5) && !matches!(n2, 1 | 5)
}

/// The hexagon × hexagon family table derived from [`P66_ORBITS`] and
/// [`P66_INVARIANTS`]: one row per regular configuration (n₁ ≤ n₂), ordered
/// lexicographically.
pub fn p66_rows() -> Vec<ReferenceRow> {
    let mut out = Vec::new();
    for n1 in 0..7 {
        for n2 in n1..7 {
            if !p66_regular(n1, n2) {
                continue;
            }
            let (b2, chi) = P66_INVARIANTS[n1][n2];
            let annotation = match (n1, n2) {
                (0, 0) => "AESZ 100",
                (0, 6) => "AESZ 104",
                (6, 6) => "AESZ 103",
                _ => "",
            };
            let configuration: &'static str = P66_CONFIG_NAMES[n1][n2];
            out.push(ReferenceRow {
                k1: 6,
                k2: 6,
                chi,
                b2,
                vol: P66_VOL,
                orbits: P66_ORBITS[n1][n2],
                configuration,
                annotation,
            });
        }
    }
    out
}

/// Static configuration strings `(n1,n2)` so `ReferenceRow` can stay `Copy`.
const P66_CONFIG_NAMES: [[&str; 7]; 7] = [
    ["(0,0)", "(0,1)", "(0,2)", "(0,3)", "(0,4)", "(0,5)", "(0,6)"],
    ["(1,0)", "(1,1)", "(1,2)", "(1,3)", "(1,4)", "(1,5)", "(1,6)"],
    ["(2,0)", "(2,1)", "(2,2)", "(2,3)", "(2,4)", "(2,5)", "(2,6)"],
    ["(3,0)", "(3,1)", "(3,2)", "(3,3)", "(3,4)", "(3,5)", "(3,6)"],
    ["(4,0)", "(4,1)", "(4,2)", "(4,3)", "(4,4)", "(4,5)", "(4,6)"],
    ["(5,0)", "(5,1)", "(5,2)", "(5,3)", "(5,4)", "(5,5)", "(5,6)"],
    ["(6,0)", "(6,1)", "(6,2)", "(6,3)", "(6,4)", "(6,5)", "(6,6)"],
];

/// Pentagon × hexagon family. Configuration `(n1,n2),m`: the two hexagonal
/// faces at scale two carry decomposition values n₁ ≤ n₂ ∈ {0,1,2} (0 = six
/// segments, 1 = three segments and two triangles, 2 = four triangles) and
/// `m` of the three unit hexagonal faces carry the two-triangle decomposition.
///
/// The χ column is the known-inconsistent one; see the module docs.
pub const P65: &[ReferenceRow] = &[
    row(6, 5, -90, 3, 42, 1, "(0,0),0", ""),
    row(6, 5, -86, 2, 42, 2, "(0,0),2", ""),
    row(6, 5, -84, 2, 42, 1, "(0,0),3", ""),
    row(6, 5, -86, 2, 42, 3, "(0,1),1", ""),
    row(6, 5, -84, 2, 42, 3, "(0,1),2", ""),
    row(6, 5, -82, 2, 42, 1, "(0,1),3", ""),
    row(6, 5, -86, 2, 42, 1, "(0,2),0", ""),
    row(6, 5, -84, 2, 42, 3, "(0,2),1", ""),
    row(6, 5, -82, 2, 42, 3, "(0,2),2", ""),
    row(6, 5, -80, 2, 42, 1, "(0,2),3", ""),
    row(6, 5, -86, 2, 42, 1, "(1,1),0", ""),
    row(6, 5, -84, 2, 42, 2, "(1,1),1", ""),
    row(6, 5, -82, 2, 42, 2, "(1,1),2", ""),
    row(6, 5, -80, 2, 42, 1, "(1,1),3", ""),
    row(6, 5, -84, 2, 42, 1, "(1,2),0", ""),
    row(6, 5, -82, 2, 42, 3, "(1,2),1", ""),
    row(6, 5, -80, 2, 42, 3, "(1,2),2", ""),
    row(6, 5, -78, 2, 42, 1, "(1,2),3", ""),
    row(6, 5, -82, 2, 42, 1, "(2,2),0", ""),
    row(6, 5, -80, 2, 42, 2, "(2,2),1", ""),
    row(6, 5, -76, 4, 42, 1, "(2,2),3", ""),
];

/// Square × hexagon family. Configuration `(n1,n2,n3,n4)`: each of the four
/// hexagonal faces (all at scale two) carries a value in {0,1,2} as in
/// [`P65`]; the key is the sorted multiset, so one row may cover several
/// orbits (cyclic arrangements).
pub const P64: &[ReferenceRow] = &[
    row(6, 4, -72, 2, 48, 1, "(0,0,0,0)", "(n)*(a)"),
    row(6, 4, -68, 1, 48, 1, "(0,0,0,2)", ""),
    row(6, 4, -68, 1, 48, 2, "(0,0,1,1)", ""),
    row(6, 4, -66, 1, 48, 2, "(0,0,1,2)", ""),
    row(6, 4, -64, 1, 48, 2, "(0,0,2,2)", ""),
    row(6, 4, -66, 1, 48, 1, "(0,1,1,1)", ""),
    row(6, 4, -64, 1, 48, 2, "(0,1,1,2)", ""),
    row(6, 4, -62, 1, 48, 2, "(0,1,2,2)", ""),
    row(6, 4, -60, 1, 48, 1, "(0,2,2,2)", ""),
    row(6, 4, -64, 1, 48, 1, "(1,1,1,1)", ""),
    row(6, 4, -62, 1, 48, 1, "(1,1,1,2)", ""),
    row(6, 4, -60, 1, 48, 2, "(1,1,2,2)", ""),
    row(6, 4, -56, 3, 48, 1, "(2,2,2,2)", "(n)*(c)"),
];

/// Products with a unique decomposition choice (no factor equal to the
/// hexagon; the second volume-8 quadrilateral is omitted as its products
/// duplicate the square's invariants).
pub const PSINGLE: &[ReferenceRow] = &[
    row(4, 4, -64, 1, 64, 1, "unique", "(n)*(n)"),
    row(4, 5, -60, 2, 56, 1, "unique", ""),
    row(4, 7, -100, 1, 40, 1, "unique", "(b)*(n)"),
    row(4, 8, -144, 1, 32, 1, "unique", "(A)*(n); X_{4,4} in P(1,1,1,1,2,2)"),
    row(4, 9, -204, 1, 24, 1, "unique", "(B)*(n); X_6 in P(1,1,1,1,2)"),
    row(5, 5, -56, 3, 49, 1, "unique", ""),
    row(5, 7, -90, 2, 35, 1, "unique", ""),
    row(5, 8, -128, 2, 28, 1, "unique", ""),
    row(5, 9, -180, 2, 21, 1, "unique", ""),
    row(7, 7, -100, 1, 25, 1, "unique", "AESZ 101; Gr(2,5) cap Gr(2,5)"),
    row(7, 8, -120, 1, 20, 1, "unique", "AESZ 25; X(1,2,2) in Gr(2,5)"),
    row(7, 9, -150, 1, 15, 1, "unique", "AESZ 24; X(1,1,3) in Gr(2,5)"),
    row(8, 8, -128, 1, 16, 1, "unique", "AESZ 3; X_{2,2,2,2} in P^7"),
    row(8, 9, -144, 1, 12, 1, "unique", "AESZ 5; X_{2,2,3} in P^6"),
    row(9, 9, -144, 1, 9, 1, "unique", "AESZ 4; X_{3,3} in P^5"),
];
