//! Univariate polynomials with rational coefficients.
//!
//! Coefficients are stored lowest degree first and trailing zeros are
//! trimmed, so the leading coefficient of a nonzero polynomial is nonzero.
//! The main consumer is the characteristic polynomial pipeline: exact root
//! finding over the rationals with exact multiplicities.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::factor;
use crate::rational::Rational;

/// Polynomial over the rationals, coefficients lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    /// Builds a polynomial, trimming trailing zero coefficients.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map(Rational::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Rational::one()] }
    }

    /// The monomial `c · s^deg`.
    pub fn monomial(c: Rational, deg: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    /// `s - r`, the linear factor with root `r`.
    pub fn linear(r: &Rational) -> Self {
        Poly { coeffs: vec![-r, Rational::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `s^k` (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map(Rational::is_one).unwrap_or(false)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs =
            vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by `(s - r)`; returns the quotient when the remainder is zero.
    pub fn deflate(&self, r: &Rational) -> Option<Poly> {
        if self.is_zero() {
            return None;
        }
        let n = self.coeffs.len();
        if n == 1 {
            return None;
        }
        let mut quotient = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for k in (0..n).rev() {
            let value = &self.coeffs[k] + &(&carry * r);
            if k == 0 {
                if !value.is_zero() {
                    return None;
                }
            } else {
                quotient[k - 1] = value.clone();
                carry = value;
            }
        }
        Some(Poly { coeffs: quotient })
    }

    /// All rational roots with exact multiplicities, ascending, plus a flag
    /// that is true iff the multiplicities sum to the degree (the polynomial
    /// splits over the rationals).
    ///
    /// Candidates come from the rational root theorem on the cleared,
    /// primitive integer form; each is confirmed by repeated exact deflation.
    ///
    /// Panics on the zero polynomial.
    pub fn rational_roots(&self) -> (Vec<(Rational, usize)>, bool) {
        assert!(!self.is_zero(), "rational_roots of the zero polynomial");
        let deg = self.degree().unwrap();
        if deg == 0 {
            return (Vec::new(), true);
        }
        let mut roots: Vec<(Rational, usize)> = Vec::new();
        let mut work = self.clone();

        let zero_mult = work.coeffs.iter().take_while(|c| c.is_zero()).count();
        if zero_mult > 0 {
            roots.push((Rational::zero(), zero_mult));
            work = Poly::from_coeffs(work.coeffs[zero_mult..].to_vec());
        }
        if work.degree() == Some(0) {
            let found: usize = roots.iter().map(|(_, m)| m).sum();
            return (roots, found == deg);
        }

        // Clear denominators and content to get a primitive integer polynomial
        // with the same roots.
        let mut den_lcm = BigInt::one();
        for c in work.coeffs() {
            den_lcm = factor::lcm_big(&den_lcm, c.denom());
        }
        let ints: Vec<BigInt> = work
            .coeffs()
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let constant = ints.first().unwrap().clone();
        let leading = ints.last().unwrap().clone();

        // Cauchy bound: every root r satisfies |r| <= 1 + max|a_i| / |a_n|.
        let max_abs = ints.iter().map(|c| c.abs()).max().unwrap();
        let bound = Rational::one()
            + Rational::new(max_abs, leading.abs()).expect("nonzero leading");

        let mut candidates: BTreeSet<Rational> = BTreeSet::new();
        for p in factor::divisors(&constant) {
            for q in factor::divisors(&leading) {
                let cand = Rational::new(p.clone(), q.clone()).expect("nonzero divisor");
                if cand.abs() <= bound {
                    candidates.insert(-&cand);
                    candidates.insert(cand);
                }
            }
        }

        for cand in candidates {
            let mut mult = 0usize;
            while let Some(quotient) = work.deflate(&cand) {
                work = quotient;
                mult += 1;
            }
            if mult > 0 {
                roots.push((cand, mult));
            }
        }

        roots.sort_by(|a, b| a.0.cmp(&b.0));
        let found: usize = roots.iter().map(|(_, m)| m).sum();
        (roots, found == deg)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})s")?,
                _ => write!(f, "({c})s^{k}")?,
            }
        }
        Ok(())
    }
}
