//! Exact dense linear algebra over arbitrary-precision integers and rationals.
//!
//! Everything here is deterministic: pivot choices, basis normalizations and sign
//! conventions are fixed, so downstream consumers (canonical forms, kernel bases,
//! serialized reports) are byte-stable across runs and thread counts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense integer matrix as rows of equal length.
pub type IMatrix = Vec<Vec<BigInt>>;
/// Dense rational matrix as rows of equal length.
pub type QMatrix = Vec<Vec<BigRational>>;

/// Exact integer division that must leave no remainder (Bareiss steps).
fn exact_div(a: BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!b.is_zero(), "exact_div by zero");
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "exact_div with nonzero remainder");
    q
}

/// Rank of an integer matrix, computed fraction-free (Bareiss elimination).
/// Matrices with i64-sized entries take a machine-word path (i128 products
/// cannot overflow; a quotient outside i64 falls back to BigInt).
pub fn rank_int(a: &[Vec<BigInt>]) -> usize {
    if let Some(mut m) = to_i64_matrix(a) {
        if let Some(rank) = rank_i64(&mut m) {
            return rank;
        }
    }
    rank_int_big(a)
}

fn to_i64_matrix(a: &[Vec<BigInt>]) -> Option<Vec<Vec<i64>>> {
    a.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
}

fn rank_i64(m: &mut [Vec<i64>]) -> Option<usize> {
    let rows = m.len();
    if rows == 0 {
        return Some(0);
    }
    let cols = m[0].len();
    let mut prev: i128 = 1;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, p);
        for i in row + 1..rows {
            for j in col + 1..cols {
                let t = m[row][col] as i128 * m[i][j] as i128
                    - m[i][col] as i128 * m[row][j] as i128;
                debug_assert_eq!(t % prev, 0, "Bareiss division must be exact");
                let q = t / prev;
                if q.unsigned_abs() > i64::MAX as u128 {
                    return None; // Entries outgrew i64: redo over BigInt.
                }
                m[i][j] = q as i64;
            }
            m[i][col] = 0;
        }
        prev = m[row][col] as i128;
        row += 1;
    }
    Some(row)
}

fn rank_int_big(a: &[Vec<BigInt>]) -> usize {
    let mut m: IMatrix = a.to_vec();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for i in row + 1..rows {
            for j in col + 1..cols {
                let t = &m[row][col] * &m[i][j] - &m[i][col] * &m[row][j];
                m[i][j] = exact_div(t, &prev);
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        row += 1;
    }
    row
}

/// Determinant of a square integer matrix (fraction-free); i64 fast path with
/// BigInt fallback as in [`rank_int`].
pub fn det_int(a: &[Vec<BigInt>]) -> BigInt {
    if let Some(mut m) = to_i64_matrix(a) {
        if let Some(d) = det_i64(&mut m) {
            return BigInt::from(d);
        }
    }
    det_int_big(a)
}

fn det_i64(m: &mut [Vec<i64>]) -> Option<i64> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut prev: i128 = 1;
    let mut sign = 1i64;
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| m[i][col] != 0) else {
            return Some(0);
        };
        if p != col {
            m.swap(col, p);
            sign = -sign;
        }
        for i in col + 1..n {
            for j in col + 1..n {
                let t =
                    m[col][col] as i128 * m[i][j] as i128 - m[i][col] as i128 * m[col][j] as i128;
                debug_assert_eq!(t % prev, 0, "Bareiss division must be exact");
                let q = t / prev;
                if q.unsigned_abs() > i64::MAX as u128 {
                    return None;
                }
                m[i][j] = q as i64;
            }
            m[i][col] = 0;
        }
        prev = m[col][col] as i128;
    }
    Some(sign * m[n - 1][n - 1])
}

fn det_int_big(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(a.iter().all(|r| r.len() == n), "det of non-square matrix");
    let mut m: IMatrix = a.to_vec();
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return BigInt::zero();
        };
        if p != col {
            m.swap(col, p);
            sign = -sign;
        }
        for i in col + 1..n {
            for j in col + 1..n {
                let t = &m[col][col] * &m[i][j] - &m[i][col] * &m[col][j];
                m[i][j] = exact_div(t, &prev);
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[col][col].clone();
    }
    if sign < 0 {
        -m[n - 1][n - 1].clone()
    } else {
        m[n - 1][n - 1].clone()
    }
}

/// Reduced row echelon form in place; returns the pivot column indices.
pub fn rref(m: &mut QMatrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for j in col..cols {
            let v = &m[row][j] * &inv;
            m[row][j] = v;
        }
        for i in 0..rows {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..cols {
                    let v = &m[i][j] - &f * &m[row][j];
                    m[i][j] = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Converts an integer matrix to rationals.
pub fn to_rational(a: &[Vec<BigInt>]) -> QMatrix {
    a.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Clears denominators and the content of a rational vector, returning a primitive
/// integer vector whose first nonzero entry is positive.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut content = BigInt::zero();
    for x in &ints {
        content = content.gcd(x);
    }
    if !content.is_zero() && !content.is_one() {
        for x in &mut ints {
            *x = exact_div(std::mem::take(x), &content);
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut ints {
                *x = -std::mem::take(x);
            }
        }
    }
    ints
}

/// Basis of the rational kernel {x : A x = 0} of an integer matrix, returned as
/// primitive integer vectors in the deterministic free-variable order.
pub fn kernel_basis(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    kernel_basis_with_cols(a, cols)
}

/// Like [`kernel_basis`], with the column count given explicitly so an empty row
/// list means the zero map on ℤ^cols (whose kernel is everything).
pub fn kernel_basis_with_cols(a: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    if a.is_empty() {
        return (0..cols)
            .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
    }
    debug_assert!(a.iter().all(|r| r.len() == cols));
    let mut m = to_rational(a);
    let pivots = rref(&mut m);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (prow, &pcol) in pivots.iter().enumerate() {
            v[pcol] = -m[prow][free].clone();
        }
        basis.push(primitive_integer_vector(&v));
    }
    basis
}

/// One exact solution of `A x = b` (free variables set to zero), or `None` if the
/// system is inconsistent.
pub fn solve_exact(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    debug_assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: QMatrix = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row: Vec<BigRational> =
                r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.push(BigRational::from_integer(bi.clone()));
            row
        })
        .collect();
    let pivots = rref(&mut m);
    // Inconsistent iff a pivot lands in the augmented column.
    if pivots.iter().any(|&p| p == cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (prow, &pcol) in pivots.iter().enumerate() {
        x[pcol] = m[prow][cols].clone();
    }
    Some(x)
}

/// Rational inverse of a square integer matrix, or `None` if singular.
pub fn inverse_rational(a: &[Vec<BigInt>]) -> Option<QMatrix> {
    let n = a.len();
    let mut m: QMatrix = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> =
                r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            for j in 0..n {
                row.push(if i == j { BigRational::one() } else { BigRational::zero() });
            }
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Exact integer inverse of a unimodular matrix (det ±1), or `None` otherwise.
pub fn inverse_unimodular(a: &[Vec<BigInt>]) -> Option<IMatrix> {
    let d = det_int(a);
    if !(d.is_one() || (-&d).is_one()) {
        return None;
    }
    let inv = inverse_rational(a)?;
    let mut out = Vec::with_capacity(inv.len());
    for row in inv {
        let mut irow = Vec::with_capacity(row.len());
        for x in row {
            if !x.denom().is_one() {
                return None;
            }
            irow.push(x.numer().clone());
        }
        out.push(irow);
    }
    Some(out)
}

/// Matrix × vector over the integers.
pub fn mat_vec(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum::<BigInt>())
        .collect()
}

/// Matrix × matrix over the integers.
pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IMatrix {
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, br)| x * &br[j]).sum::<BigInt>())
                .collect()
        })
        .collect()
}

/// Matrix × matrix over the rationals.
pub fn mat_mul_rational(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> QMatrix {
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, br)| x * &br[j]).sum::<BigRational>())
                .collect()
        })
        .collect()
}

/// Row-style Hermite normal form. Returns the nonzero rows: a canonical basis of the
/// row lattice (staircase pivots, positive pivots, entries above each pivot reduced
/// into `[0, pivot)`).
pub fn row_hnf(a: &[Vec<BigInt>]) -> IMatrix {
    let mut m: IMatrix = a.to_vec();
    let rows = m.len();
    if rows == 0 {
        return m;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        // Euclidean elimination below row r in column c.
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !m[i][c].is_zero()
                    && best.is_none_or(|b| m[i][c].abs() < m[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(r, b);
            let mut any_left = false;
            for i in r + 1..rows {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let v = &m[i][j] - &q * &m[r][j];
                        m[i][j] = v;
                    }
                }
                if !m[i][c].is_zero() {
                    any_left = true;
                }
            }
            if !any_left {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for j in 0..cols {
                m[r][j] = -std::mem::take(&mut m[r][j]);
            }
        }
        // Reduce entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if !q.is_zero() {
                for j in 0..cols {
                    let v = &m[i][j] - &q * &m[r][j];
                    m[i][j] = v;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Canonical basis of the *integer* kernel {x ∈ ℤⁿ : A x = 0} (a saturated sublattice),
/// via the Hermite normal form of [Aᵀ | I].
pub fn integer_kernel(a: &[Vec<BigInt>]) -> IMatrix {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut b: IMatrix = Vec::with_capacity(cols);
    for i in 0..cols {
        let mut row: Vec<BigInt> = (0..rows).map(|j| a[j][i].clone()).collect();
        for k in 0..cols {
            row.push(if k == i { BigInt::one() } else { BigInt::zero() });
        }
        b.push(row);
    }
    let h = row_hnf(&b);
    let mut kernel = Vec::new();
    for row in &h {
        if row[..rows].iter().all(|x| x.is_zero()) {
            kernel.push(row[rows..].to_vec());
        }
    }
    // Rows of an HNF with all-zero left blocks are exactly the kernel lattice basis.
    kernel
}

/// Saturated basis (canonical HNF rows) of the smallest saturated sublattice of ℤⁿ
/// containing the row span of `gens`: { x ∈ ℤⁿ : x ∈ span_ℚ(gens) }.
pub fn saturated_row_basis(gens: &[Vec<BigInt>]) -> IMatrix {
    if gens.is_empty() {
        return vec![];
    }
    // Orthogonal complement of the row span, then its integer kernel.
    let complement = kernel_basis(gens);
    if complement.is_empty() {
        // Full row span: the saturation is all of ℤⁿ.
        let n = gens[0].len();
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
    }
    integer_kernel(&complement)
}

/// Searches for a rational point x with aᵢ · x > 0 for every row aᵢ (a strict
/// homogeneous feasibility problem), via exact Fourier–Motzkin elimination.
/// Returns a witness or `None` when the system is infeasible.
pub fn strict_feasibility(rows: &[Vec<BigRational>], nvars: usize) -> Option<Vec<BigRational>> {
    if rows.is_empty() {
        return Some(vec![BigRational::zero(); nvars]);
    }
    if rows.iter().any(|r| r.iter().all(|c| c.is_zero())) {
        return None; // 0 > 0 can never hold.
    }
    if nvars == 0 {
        return None; // Nonempty rows over no variables are all 0 > 0.
    }
    let k = nvars - 1;
    let mut pos: Vec<&Vec<BigRational>> = Vec::new();
    let mut neg: Vec<&Vec<BigRational>> = Vec::new();
    let mut reduced: Vec<Vec<BigRational>> = Vec::new();
    for r in rows {
        debug_assert_eq!(r.len(), nvars);
        if r[k].is_zero() {
            reduced.push(r[..k].to_vec());
        } else if r[k].is_positive() {
            pos.push(r);
        } else {
            neg.push(r);
        }
    }
    // Eliminate the last variable: every (positive, negative) pair combines into a
    // strictly positive combination with zero last coefficient.
    for p in &pos {
        for q in &neg {
            let cp = &p[nvars - 1];
            let cq = &q[nvars - 1];
            let row: Vec<BigRational> =
                (0..k).map(|j| &p[j] * &(-cq.clone()) + &q[j] * cp).collect();
            reduced.push(row);
        }
    }
    let y = strict_feasibility(&reduced, k)?;
    // Back-substitute: pick the last coordinate strictly between the bounds.
    let eval = |r: &[BigRational]| -> BigRational {
        (0..k).map(|j| &r[j] * &y[j]).sum()
    };
    let lower: Option<BigRational> =
        pos.iter().map(|p| -eval(p) / &p[k]).max();
    let upper: Option<BigRational> =
        neg.iter().map(|q| -eval(q) / &q[k]).min();
    let one = BigRational::one();
    let xk = match (lower, upper) {
        (Some(lo), Some(up)) => {
            debug_assert!(lo < up, "Fourier–Motzkin bounds must separate");
            (lo + up) / (&one + &one)
        }
        (Some(lo), None) => lo + &one,
        (None, Some(up)) => up - &one,
        (None, None) => BigRational::zero(),
    };
    let mut x = y;
    x.push(xk);
    Some(x)
}

/// Diagonal invariant factors d₁ | d₂ | … of an integer matrix (Smith normal form,
/// zero factors omitted).
pub fn smith_invariant_factors(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: IMatrix = a.to_vec();
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let n = rows.min(cols);
    let mut factors = Vec::new();
    let mut t = 0;
    while t < n {
        // Find a nonzero pivot in the remaining block.
        let mut pivot = None;
        'search: for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        // Clear row and column t with Euclidean steps until both are zero off-pivot.
        loop {
            let mut done = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let v = &m[i][j] - &q * &m[t][j];
                    m[i][j] = v;
                }
                if !m[i][t].is_zero() {
                    // Swap to make the smaller remainder the pivot and retry.
                    m.swap(t, i);
                    done = false;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let v = &row[j] - &q * &row[t];
                    row[j] = v;
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        // Enforce the divisibility chain: if some remaining entry is not divisible by
        // the pivot, fold its row in and redo this step.
        let mut redo = false;
        'divis: for i in t + 1..rows {
            for j in t + 1..cols {
                if !m[i][j].is_zero() && !(&m[i][j] % &m[t][t]).is_zero() {
                    for k in t..cols {
                        let v = &m[t][k] + &m[i][k];
                        m[t][k] = v;
                    }
                    redo = true;
                    break 'divis;
                }
            }
        }
        if redo {
            continue;
        }
        if m[t][t].is_negative() {
            m[t][t] = -m[t][t].clone();
        }
        factors.push(m[t][t].clone());
        t += 1;
    }
    factors
}
