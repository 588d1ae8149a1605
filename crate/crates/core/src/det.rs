//! Exact determinant algorithms over polynomial matrices.
//!
//! * [`naive_laplace`]: recursive cofactor expansion along the first row; a
//!   factorial-time oracle for small matrices.
//! * [`minor_expansion`]: the subset dynamic program that builds every minor
//!   on rows `0..i` from the minors on rows `0..i-1`.
//! * [`bareiss`]: one-step fraction-free Gaussian elimination with exact
//!   polynomial division.
//!
//! Both production algorithms accept an optional [`CostMeter`] that charges
//! `nterms(p) * nterms(q)` integer operations per polynomial product or
//! quotient, and counts the polynomial operations themselves.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::poly::Polynomial;

/// Largest dimension the bitmask-keyed minor table supports.
pub const MAX_MINOR_DIM: usize = 63;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CostMeter {
    /// Sum of `nterms(p) * nterms(q)` over every metered product and quotient.
    pub modeled_int_ops: BigUint,
    pub poly_mults: u64,
    pub poly_divs: u64,
}

impl CostMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_mul(&mut self, p: &Polynomial, q: &Polynomial) {
        self.poly_mults += 1;
        self.modeled_int_ops += (p.nterms() as u64) * (q.nterms() as u64);
    }

    pub fn record_div(&mut self, dividend: &Polynomial, divisor: &Polynomial) {
        self.poly_divs += 1;
        self.modeled_int_ops += (dividend.nterms() as u64) * (divisor.nterms() as u64);
    }

    /// Polynomial multiplications plus divisions.
    pub fn poly_ops(&self) -> u64 {
        self.poly_mults + self.poly_divs
    }
}

fn metered_mul(meter: &mut Option<&mut CostMeter>, p: &Polynomial, q: &Polynomial) -> Polynomial {
    if let Some(m) = meter.as_deref_mut() {
        m.record_mul(p, q);
    }
    p.mul(q)
}

fn metered_div(meter: &mut Option<&mut CostMeter>, p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    if let Some(m) = meter.as_deref_mut() {
        m.record_div(p, q);
    }
    p.div_exact(q)
}

/// Cooperative wall-clock limit checked between polynomial operations.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Deadline(pub(crate) Option<Instant>);

impl Deadline {
    pub(crate) const NONE: Deadline = Deadline(None);

    fn check(self) -> Result<()> {
        match self.0 {
            Some(t) if Instant::now() >= t => Err(Error::TimeCeilingExceeded),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Naive,
    Minor,
    Bareiss,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Naive, Algorithm::Minor, Algorithm::Bareiss];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Naive => "naive",
            Algorithm::Minor => "minor",
            Algorithm::Bareiss => "bareiss",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?} (expected naive, minor or bareiss)"))
    }
}

/// Determinant by the chosen algorithm. The meter is only touched when
/// supplied; the naive oracle is never metered.
pub fn determinant(a: &SymMatrix, algorithm: Algorithm, meter: Option<&mut CostMeter>) -> Result<Polynomial> {
    match algorithm {
        Algorithm::Naive => Ok(naive_laplace(a)),
        Algorithm::Minor => Ok(minor_expansion(a, meter)),
        Algorithm::Bareiss => bareiss(a, meter),
    }
}

/// Cofactor expansion along the first row. Exponential; meant for `n <= 7`.
pub fn naive_laplace(a: &SymMatrix) -> Polynomial {
    fn expand(a: &SymMatrix, row: usize, cols: &[usize]) -> Polynomial {
        if cols.is_empty() {
            return Polynomial::one();
        }
        let mut acc = Polynomial::zero();
        let mut rest = Vec::with_capacity(cols.len() - 1);
        for (k, &j) in cols.iter().enumerate() {
            let entry = a.get(row, j);
            if entry.is_zero() {
                continue;
            }
            rest.clear();
            rest.extend(cols.iter().enumerate().filter(|&(t, _)| t != k).map(|(_, &c)| c));
            let term = entry.mul(&expand(a, row + 1, &rest));
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }
    let cols: Vec<usize> = (0..a.n()).collect();
    expand(a, 0, &cols)
}

const BINOM_DIM: usize = MAX_MINOR_DIM + 1;

/// `BINOM[a][b] = C(a, b)` for `a, b <= MAX_MINOR_DIM`.
static BINOM: [[u64; BINOM_DIM]; BINOM_DIM] = {
    let mut t = [[0u64; BINOM_DIM]; BINOM_DIM];
    let mut a = 0;
    while a < BINOM_DIM {
        t[a][0] = 1;
        let mut b = 1;
        while b <= a {
            t[a][b] = t[a - 1][b - 1] + t[a - 1][b];
            b += 1;
        }
        a += 1;
    }
    t
};

/// Colex rank of the subset `{c_1 < .. < c_k}`: `sum_t C(c_t, t)`. This is
/// also its position in Gosper enumeration order.
fn colex_rank(mask: u64) -> usize {
    mask_columns(mask).enumerate().map(|(t, c)| BINOM[c][t + 1] as usize).sum()
}

/// Minors `det A[0..level, J]` for every column set `J` of size `level`,
/// keyed by the bitmask of `J`. Stored densely in colex order.
#[derive(Clone, Debug)]
pub struct MinorTable {
    level: usize,
    n: usize,
    values: Vec<Polynomial>,
}

impl MinorTable {
    /// Number of leading rows the stored minors use.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, cols: u64) -> Option<&Polynomial> {
        if cols >> self.n != 0 || cols.count_ones() as usize != self.level {
            return None;
        }
        self.values.get(colex_rank(cols))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Polynomial)> {
        subsets_of_size(self.n, self.level).zip(&self.values)
    }
}

/// Iterates the bitmasks of all `k`-element subsets of `{0..n}` in
/// increasing numeric order (Gosper's hack).
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n <= MAX_MINOR_DIM);
    let limit = 1u64 << n;
    let mut next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let x = next?;
        next = if x == 0 {
            None
        } else {
            let c = x & x.wrapping_neg();
            let r = x + c;
            let y = (((r ^ x) >> 2) / c) | r;
            (y < limit).then_some(y)
        };
        Some(x)
    })
}

/// Indices of the set bits of `mask`, ascending.
pub fn mask_columns(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let j = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(j)
    })
}

pub(crate) fn minor_expansion_core(
    a: &SymMatrix,
    mut meter: Option<&mut CostMeter>,
    deadline: Deadline,
    observer: &mut dyn FnMut(&MinorTable, &MinorTable),
) -> Result<Polynomial> {
    let n = a.n();
    if n > MAX_MINOR_DIM {
        return Err(Error::SizeGuardExceeded { n, limit: MAX_MINOR_DIM });
    }
    if n == 0 {
        return Ok(Polynomial::one());
    }
    // Level 1: the first-row entries times the empty minor.
    let base = MinorTable { level: 0, n, values: vec![Polynomial::one()] };
    let mut prev = MinorTable { level: 1, n, values: Vec::with_capacity(n) };
    for j in 0..n {
        prev.values.push(metered_mul(&mut meter, a.get(0, j), &base.values[0]));
    }
    observer(&base, &prev);
    drop(base);
    for (level, &count) in BINOM[n].iter().enumerate().take(n + 1).skip(2) {
        let row = level - 1;
        let mut cur = MinorTable { level, n, values: Vec::with_capacity(count as usize) };
        for mask in subsets_of_size(n, level) {
            deadline.check()?;
            let mut acc = Polynomial::zero();
            for (k, j) in mask_columns(mask).enumerate() {
                let minor = &prev.values[colex_rank(mask & !(1u64 << j))];
                let term = metered_mul(&mut meter, a.get(row, j), minor);
                // Sign (-1)^(level + k) with 1-based k; applied by negation.
                let positive = (level + k + 1) % 2 == 0;
                acc = match (acc.is_zero(), positive) {
                    (true, true) => term,
                    (true, false) => -term,
                    (false, true) => acc.add(&term),
                    (false, false) => acc.sub(&term),
                };
            }
            cur.values.push(acc);
        }
        observer(&prev, &cur);
        prev = cur;
    }
    Ok(prev.values.pop().expect("top level holds one minor"))
}

/// Determinant by minor expansion.
///
/// Level 1 multiplies each first-row entry by the empty minor `1`; those
/// products are metered, so the meter records `sum_{i=1..n} i * C(n, i)`
/// multiplications.
///
/// # Panics
///
/// If `n` exceeds [`MAX_MINOR_DIM`].
pub fn minor_expansion(a: &SymMatrix, meter: Option<&mut CostMeter>) -> Polynomial {
    minor_expansion_with(a, meter, |_, _| {})
}

/// [`minor_expansion`], calling `observer(previous, current)` after each level
/// of the minor table is complete.
pub fn minor_expansion_with<F>(a: &SymMatrix, meter: Option<&mut CostMeter>, mut observer: F) -> Polynomial
where
    F: FnMut(&MinorTable, &MinorTable),
{
    match minor_expansion_core(a, meter, Deadline::NONE, &mut observer) {
        Ok(p) => p,
        Err(e) => panic!("minor expansion failed: {e}"),
    }
}

/// Snapshot of fraction-free elimination after one pivot step.
#[derive(Clone, Debug)]
pub struct BareissState {
    n: usize,
    step: usize,
    working: Vec<Polynomial>,
    rows: Vec<usize>,
    prev_pivot: Polynomial,
    sign: i8,
}

impl BareissState {
    /// Number of completed elimination steps.
    pub fn step(&self) -> usize {
        self.step
    }

    /// Entries `(i, j)` with `i, j >= step` of the working matrix; after `step`
    /// steps each is a minor of order `step + 1` of the row-permuted input.
    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.working[i * self.n + j]
    }

    /// `row_order()[r]` is the input row currently in working row `r`.
    pub fn row_order(&self) -> &[usize] {
        &self.rows
    }

    pub fn prev_pivot(&self) -> &Polynomial {
        &self.prev_pivot
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }
}

pub(crate) fn bareiss_core(
    a: &SymMatrix,
    mut meter: Option<&mut CostMeter>,
    deadline: Deadline,
    observer: &mut dyn FnMut(&BareissState),
) -> Result<Polynomial> {
    let n = a.n();
    if n == 0 {
        return Ok(Polynomial::one());
    }
    let mut st = BareissState {
        n,
        step: 0,
        working: a.entries().to_vec(),
        rows: (0..n).collect(),
        prev_pivot: Polynomial::one(),
        sign: 1,
    };
    for k in 0..n - 1 {
        if st.working[k * n + k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !st.working[r * n + k].is_zero()) else {
                return Ok(Polynomial::zero());
            };
            for j in 0..n {
                st.working.swap(k * n + j, r * n + j);
            }
            st.rows.swap(k, r);
            st.sign = -st.sign;
        }
        let (top, bottom) = st.working.split_at_mut((k + 1) * n);
        let pivot_row = &top[k * n..];
        let pivot = &pivot_row[k];
        for row in bottom.chunks_mut(n) {
            deadline.check()?;
            for j in k + 1..n {
                let lhs = metered_mul(&mut meter, pivot, &row[j]);
                let rhs = metered_mul(&mut meter, &row[k], &pivot_row[j]);
                row[j] = metered_div(&mut meter, &lhs.sub(&rhs), &st.prev_pivot)?;
            }
            row[k] = Polynomial::zero();
        }
        st.prev_pivot = top[k * n + k].clone();
        st.step = k + 1;
        observer(&st);
    }
    let last = st.working[n * n - 1].clone();
    Ok(if st.sign < 0 { last.neg() } else { last })
}

/// Determinant by one-step fraction-free Gaussian elimination.
///
/// A zero pivot is replaced by the first nonzero entry below it in the same
/// column (flipping the sign); if none exists the determinant is zero. Without
/// pivot swaps the meter records `sum_{i=1..n-1} 3 (n-i)^2` operations.
pub fn bareiss(a: &SymMatrix, meter: Option<&mut CostMeter>) -> Result<Polynomial> {
    bareiss_core(a, meter, Deadline::NONE, &mut |_| {})
}

/// [`bareiss`], calling `observer` after every elimination step.
pub fn bareiss_with<F>(a: &SymMatrix, meter: Option<&mut CostMeter>, mut observer: F) -> Result<Polynomial>
where
    F: FnMut(&BareissState),
{
    bareiss_core(a, meter, Deadline::NONE, &mut observer)
}
