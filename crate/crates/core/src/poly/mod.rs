//! Sparse multivariate polynomials over the integers.
//!
//! A [`Polynomial`] is a sorted sequence of `(Monomial, coefficient)` pairs in
//! descending graded-lexicographic order with no zero coefficients, so the
//! representation is canonical: structural equality is polynomial equality and
//! [`fmt::Display`] output is deterministic.

mod monomial;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use monomial::Monomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, BigInt)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, Monomial::one())
    }

    /// The single term `c * m` (zero if `c` is zero).
    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// The variable `x{index+1}`.
    pub fn var(index: usize) -> Self {
        Self::term(1, Monomial::var(index))
    }

    /// Builds a polynomial from arbitrary terms, consolidating like monomials.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
        C: Into<BigInt>,
    {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c.into();
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// Number of terms.
    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lexicographic order.
    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().map(|(m, c)| (m, c))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    /// Maximum total degree over all terms; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Number of variable slots referenced (largest variable index + 1).
    pub fn num_vars(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.num_vars()).max().unwrap_or(0)
    }

    /// True iff every term has total degree exactly `degree`. The zero
    /// polynomial is homogeneous of every degree.
    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.iter().all(|(m, _)| m.degree() == degree)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.merge(other, true)
    }

    fn merge(&self, other: &Polynomial, negate_other: bool) -> Polynomial {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let take_b = |c: &BigInt| if negate_other { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), take_b(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), take_b(c))));
        Polynomial { terms: out }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        if self.terms.len() == 1 || other.terms.len() == 1 {
            // A single-term factor preserves the order of the other factor.
            let (single, many) =
                if self.terms.len() == 1 { (&self.terms[0], &other.terms) } else { (&other.terms[0], &self.terms) };
            let terms = many.iter().map(|(m, c)| (m.mul(&single.0), c * &single.1)).collect();
            return Polynomial { terms };
        }
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        Polynomial { terms }
    }

    /// Exact quotient `self / divisor` by repeated leading-term elimination.
    ///
    /// Fails with [`Error::DivisionNotExact`] if some leading term is not
    /// divisible (monomial or coefficient) by the divisor's leading term.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial> {
        let not_exact = || Error::DivisionNotExact { dividend: self.to_string(), divisor: divisor.to_string() };
        let Some((lead_m, lead_c)) = divisor.terms.first() else {
            return Err(not_exact());
        };
        if divisor.is_one() {
            return Ok(self.clone());
        }
        if divisor.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let qm = m.div(lead_m).ok_or_else(not_exact)?;
                let (qc, r) = c.div_rem(lead_c);
                if !r.is_zero() {
                    return Err(not_exact());
                }
                terms.push((qm, qc));
            }
            return Ok(Polynomial { terms });
        }

        let mut rem: BTreeMap<Monomial, BigInt> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(lead_m).ok_or_else(not_exact)?;
            let (qc, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return Err(not_exact());
            }
            for (tm, tc) in &divisor.terms[1..] {
                let key = tm.mul(&qm);
                let delta = &qc * tc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Ok(Polynomial { terms: quotient })
    }

    /// Parses the textual form; every variable index must be at most `s`.
    pub fn parse(text: &str, s: usize) -> Result<Polynomial> {
        parse::parse_polynomial(text, s)
    }
}

/// Number of monomials of total degree `degree` in `s` variables,
/// `binomial(degree + s - 1, s - 1)`: the most terms a homogeneous
/// polynomial of that degree can have.
pub fn homogeneous_term_bound(degree: u32, s: u32) -> BigUint {
    assert!(s >= 1, "variable count must be positive");
    num_integer::binomial(BigUint::from(degree + s - 1), BigUint::from(s - 1))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;

    /// Parses without a variable-count limit.
    fn from_str(s: &str) -> Result<Self> {
        Polynomial::parse(s, usize::MAX)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs)
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for (_, c) in &mut self.terms {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Self {
        Polynomial::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p("x1 + x2") + &p("x1 - x2"), p("2*x1"));
        assert_eq!(&p("x1 + x2") + &Polynomial::zero(), p("x1 + x2"));
        assert_eq!(&p("3*x1*x2 - 1") + &p("-3*x1*x2 + 5"), p("4"));
        assert!((&p("x1") - &p("x1")).is_zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p("x1 + x2") * &p("x1 - x2"), p("x1^2 - x2^2"));
        let q = p("3*x1*x2 - 2*x3 + 1");
        assert_eq!(&q * &Polynomial::one(), q);
        assert!((&q * &Polynomial::zero()).is_zero());
        let sq = &p("x1 + x2") * &p("x1 + x2");
        assert_eq!(sq, p("x1^2 + 2*x1*x2 + x2^2"));
        assert_eq!(sq.nterms(), 3);
    }

    #[test]
    fn div_exact_examples() {
        assert_eq!(p("x1^2 - x2^2").div_exact(&p("x1 - x2")).unwrap(), p("x1 + x2"));
        let q = p("3*x1*x2 - 2*x3 + 1");
        assert_eq!(q.div_exact(&Polynomial::one()).unwrap(), q);
        let err = p("x1^2 + x1*x2").div_exact(&p("x2")).unwrap_err();
        match err {
            Error::DivisionNotExact { dividend, divisor } => {
                assert_eq!(dividend, "x1^2 + x1*x2");
                assert_eq!(divisor, "x2");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn div_exact_rejects_remainders() {
        assert!(p("x1^2 + 1").div_exact(&p("x1 + 1")).is_err());
        assert!(p("3*x1").div_exact(&p("2")).is_err());
        assert!(p("x1").div_exact(&Polynomial::zero()).is_err());
        assert!(Polynomial::zero().div_exact(&p("x1 + 1")).unwrap().is_zero());
    }

    #[test]
    fn nterms_examples() {
        assert_eq!(Polynomial::zero().nterms(), 0);
        assert_eq!(p("3*x1*x2 - 2*x3 + 1").nterms(), 3);
    }

    #[test]
    fn homogeneity_examples() {
        assert!(p("x1*x2 + x3^2").is_homogeneous(2));
        assert!(!p("x1 + 1").is_homogeneous(1));
        assert!(Polynomial::zero().is_homogeneous(7));
    }

    #[test]
    fn term_bound_examples() {
        assert_eq!(homogeneous_term_bound(0, 5), BigUint::from(1u32));
        assert_eq!(homogeneous_term_bound(1, 7), BigUint::from(7u32));
        // Degree-2 monomials in 3 variables, enumerated.
        let mut count = 0;
        for a in 0..=2u32 {
            for b in 0..=2u32 {
                for c in 0..=2u32 {
                    if a + b + c == 2 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(homogeneous_term_bound(2, 3), BigUint::from(count as u32));
    }

    #[test]
    fn format_examples() {
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(p("1*x1^1").to_string(), "x1");
        assert_eq!(p("-1*x2 + x1").to_string(), "x1 - x2");
        assert_eq!(p("1 - 3*x1*x2 - 2*x3").to_string(), "-3*x1*x2 - 2*x3 + 1");
        assert_eq!(p("-7").to_string(), "-7");
    }

    #[test]
    fn big_coefficients_do_not_overflow() {
        let big = p("99999999999999999999*x1");
        let sq = &big * &big;
        assert_eq!(sq.to_string(), "9999999999999999999800000000000000000001*x1^2");
        assert_eq!(sq.div_exact(&big).unwrap(), big);
    }
}
