use std::cmp::Ordering;
use std::fmt;

/// A power product `x1^e1 * x2^e2 * ...` with trailing zero exponents stripped,
/// so equal monomials always have equal representations.
///
/// Ordering is graded lexicographic: total degree first, then exponents
/// compared from `x1` upwards.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial { exps }
    }

    /// The constant monomial `1`.
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    /// The monomial `x{index+1}` (variables are 0-based here, 1-based in text).
    pub fn var(index: usize) -> Self {
        let mut exps = vec![0; index + 1];
        exps[index] = 1;
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.exps.get(index).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Number of variable slots in use: the largest variable index present, plus one.
    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) =
            if self.exps.len() >= other.exps.len() { (&self.exps, &other.exps) } else { (&other.exps, &self.exps) };
        let mut exps = long.clone();
        for (e, f) in exps.iter_mut().zip(short) {
            *e += f;
        }
        Monomial { exps }
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.exps.len() > self.exps.len() {
            return None;
        }
        let mut exps = self.exps.clone();
        for (e, f) in exps.iter_mut().zip(&other.exps) {
            *e = e.checked_sub(*f)?;
        }
        Some(Monomial::new(exps))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // With trailing zeros stripped, plain slice comparison agrees with
        // comparing zero-padded exponent vectors.
        self.degree().cmp(&other.degree()).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
