//! Period sequences of polygons via sparse Laurent polynomials.
//!
//! To a reflexive polygon P we attach the Laurent polynomial supported on the
//! boundary lattice points of its polar dual P°, with binomial coefficients
//! along each edge (so an edge of lattice length ℓ carries 1, C(ℓ,1), …, 1)
//! and no constant term. The period sequence is π_n = constant coefficient of
//! fⁿ. Products of polygons multiply polynomials in disjoint variables, so the
//! period sequence of a product is the coefficient-wise (Hadamard) product of
//! the factor sequences — a fact the tests exercise both ways.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::polygon;
use crate::polytope::{polar_dual, LatticePolytope, PolarDual};

/// Sparse Laurent polynomial with integer exponents and big-integer
/// coefficients.
#[derive(Clone, Debug, Default)]
pub struct LaurentPolynomial {
    pub dim: usize,
    terms: HashMap<Vec<i32>, BigInt>,
}

impl LaurentPolynomial {
    pub fn new(dim: usize) -> Self {
        LaurentPolynomial { dim, terms: HashMap::new() }
    }

    pub fn add_term(&mut self, exponent: Vec<i32>, coefficient: BigInt) {
        assert_eq!(exponent.len(), self.dim);
        if coefficient.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent.clone()).or_insert_with(BigInt::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic exponent order (deterministic presentation).
    pub fn sorted_terms(&self) -> Vec<(Vec<i32>, BigInt)> {
        let mut out: Vec<_> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        out.sort();
        out
    }

    pub fn constant_coefficient(&self) -> BigInt {
        self.terms.get(&vec![0; self.dim]).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Product of two polynomials in the same variables.
    pub fn mul(&self, other: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.dim, other.dim);
        let mut out = LaurentPolynomial::new(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = out.terms.entry(e).or_insert_with(BigInt::zero);
                *entry += ca * cb;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Product of two polynomials in disjoint variables (exponents
    /// concatenate; dimensions add).
    pub fn tensor(&self, other: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::new(self.dim + other.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = ea.clone();
                e.extend_from_slice(eb);
                out.terms.insert(e, ca * cb);
            }
        }
        out
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k.min(n - k) {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// The boundary-supported polynomial of a polygon: vertices get coefficient 1
/// and each edge of lattice length ℓ carries binomial coefficients C(ℓ,i) at
/// its division points. The origin (interior) never appears.
pub fn boundary_weighted_polynomial(polygon_vertices: &LatticePolytope) -> Result<LaurentPolynomial> {
    if polygon_vertices.dim != 2 {
        return Err(Error::invalid("dimension-mismatch", "expected a polygon"));
    }
    let hull = polygon::convex_hull_ccw(&polygon_vertices.vertices)?;
    let mut f = LaurentPolynomial::new(2);
    let n = hull.len();
    for i in 0..n {
        let a = &hull[i];
        let b = &hull[(i + 1) % n];
        let len_big = crate::lattice::lattice_length(a, b);
        let len: u64 = len_big
            .try_into()
            .map_err(|_| Error::internal("edge length exceeds u64"))?;
        // Walk the edge from a (inclusive) to b (exclusive); b is the next
        // edge's start, so every boundary point appears exactly once.
        for step in 0..len {
            let t = BigInt::from(step);
            let point: Vec<i32> = a
                .0
                .iter()
                .zip(&b.0)
                .map(|(x, y)| {
                    let val = (x * (BigInt::from(len) - &t) + y * &t) / BigInt::from(len);
                    i32::try_from(&val).expect("small exponent")
                })
                .collect();
            f.add_term(point, binomial(len, step));
        }
    }
    Ok(f)
}

/// The period polynomial of a reflexive polygon: the boundary-weighted
/// polynomial of its polar dual.
pub fn period_polynomial(p: &LatticePolytope) -> Result<LaurentPolynomial> {
    match polar_dual(p)? {
        PolarDual::Reflexive(d) => boundary_weighted_polynomial(&d),
        PolarDual::NotReflexive { .. } => Err(Error::invalid(
            "not-reflexive",
            format!("{} has a non-integral polar dual", p.name),
        )),
    }
}

/// The first `terms` entries of the period sequence π_n = constant
/// coefficient of fⁿ, starting with π₀ = 1.
pub fn period_sequence(f: &LaurentPolynomial, terms: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(terms);
    let mut power = LaurentPolynomial::new(f.dim);
    power.add_term(vec![0; f.dim], BigInt::one());
    for n in 0..terms {
        if n > 0 {
            power = power.mul(f);
        }
        out.push(power.constant_coefficient());
    }
    out
}

/// Coefficient-wise product of two sequences (truncates to the shorter one).
pub fn hadamard(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    /// Constant term of fⁿ by brute-force enumeration of n-fold products —
    /// an independent check of the convolution path.
    fn naive_constant_power(f: &LaurentPolynomial, n: usize) -> BigInt {
        let terms = f.sorted_terms();
        let mut total = BigInt::zero();
        let mut idx = vec![0usize; n];
        loop {
            let mut exp = vec![0i32; f.dim];
            let mut coeff = BigInt::one();
            for &i in &idx {
                for (e, x) in exp.iter_mut().zip(&terms[i].0) {
                    *e += x;
                }
                coeff *= &terms[i].1;
            }
            if exp.iter().all(|&e| e == 0) {
                total += coeff;
            }
            // Odometer increment.
            let mut k = 0;
            loop {
                if k == n {
                    return total;
                }
                idx[k] += 1;
                if idx[k] < terms.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn volume_nine_triangle_gives_multinomial_squares_after_tensor() {
        let p9 = catalog::polygon("P9").unwrap();
        let f = period_polynomial(&p9).unwrap();
        assert_eq!(f.num_terms(), 3);
        let seq = period_sequence(&f, 13);
        // Constant terms of (x + y + 1/(xy))^n: nonzero only for n = 3m.
        let expect = |m: u64| {
            let mut v = BigInt::one();
            for i in 1..=3 * m {
                v *= BigInt::from(i);
            }
            let mut d = BigInt::one();
            for i in 1..=m {
                d *= BigInt::from(i);
            }
            v / (&d * &d * &d)
        };
        for n in 0..13 {
            if n % 3 == 0 {
                assert_eq!(seq[n], expect(n as u64 / 3), "pi_{n}");
            } else {
                assert!(seq[n].is_zero(), "pi_{n}");
            }
        }
    }

    #[test]
    fn square_gives_central_binomial_squares() {
        let p8 = catalog::polygon("P8").unwrap();
        let f = period_polynomial(&p8).unwrap();
        assert_eq!(f.num_terms(), 4);
        let seq = period_sequence(&f, 9);
        let central = |m: u64| binomial(2 * m, m);
        for n in 0..9 {
            if n % 2 == 0 {
                let c = central(n as u64 / 2);
                assert_eq!(seq[n], &c * &c, "pi_{n}");
            } else {
                assert!(seq[n].is_zero(), "pi_{n}");
            }
        }
    }

    #[test]
    fn second_term_separates_the_two_volume_eight_polygons() {
        let a = period_sequence(&period_polynomial(&catalog::polygon("P8").unwrap()).unwrap(), 3);
        let b = period_sequence(&period_polynomial(&catalog::polygon("P8'").unwrap()).unwrap(), 3);
        assert_eq!(a[2], BigInt::from(4));
        assert_eq!(b[2], BigInt::from(2));
    }

    #[test]
    fn edge_weights_use_binomial_coefficients() {
        // The dual of P3 is the volume-9 triangle whose edges have length 3:
        // weights 1,3,3 around each edge.
        let p3 = catalog::polygon("P3").unwrap();
        let f = period_polynomial(&p3).unwrap();
        assert_eq!(f.num_terms(), 9);
        let terms = f.sorted_terms();
        let coeffs: Vec<i64> =
            terms.iter().map(|(_, c)| i64::try_from(c).unwrap()).collect();
        let mut sorted = coeffs.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 1, 1, 3, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn convolution_matches_naive_expansion() {
        for name in catalog::POLYGON_NAMES {
            let f = period_polynomial(&catalog::polygon(name).unwrap()).unwrap();
            let seq = period_sequence(&f, 5);
            for n in 0..5 {
                assert_eq!(seq[n], naive_constant_power(&f, n), "{name} pi_{n}");
            }
        }
    }

    #[test]
    fn tensor_periods_factor_as_hadamard_products() {
        let f6 = period_polynomial(&catalog::polygon("P6").unwrap()).unwrap();
        let f9 = period_polynomial(&catalog::polygon("P9").unwrap()).unwrap();
        let direct = period_sequence(&f6.tensor(&f9), 7);
        let expected = hadamard(&period_sequence(&f6, 7), &period_sequence(&f9, 7));
        assert_eq!(direct, expected);
    }
}
