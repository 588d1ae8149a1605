//! Row reordering heuristics for minor expansion.
//!
//! Minor expansion walks rows top to bottom, so its cost depends on row order
//! even though the determinant only changes sign. Each [`RowKey`] scores a row
//! from the term structure of its own entries; rows are then stably sorted by
//! that score.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::costmodel::c_m_exact;
use crate::det::{self, CostMeter};
use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::poly::Polynomial;

/// Largest dimension accepted by the exhaustive [`optimal_row_order`] search.
pub const MAX_EXHAUSTIVE_DIM: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKey {
    /// Sum of term counts of the row's entries.
    SumTerms,
    /// Sum of squared term counts.
    SumSquaredTerms,
    /// Number of nonzero entries.
    NonzeroCount,
    /// Number of distinct monomials appearing anywhere in the row.
    DistinctMonomials,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Ascending,
    Descending,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SortStrategy {
    pub key: RowKey,
    pub direction: Direction,
}

impl RowKey {
    pub const ALL: [RowKey; 4] =
        [RowKey::SumTerms, RowKey::SumSquaredTerms, RowKey::NonzeroCount, RowKey::DistinctMonomials];

    pub fn name(self) -> &'static str {
        match self {
            RowKey::SumTerms => "sum",
            RowKey::SumSquaredTerms => "sumsq",
            RowKey::NonzeroCount => "nonzero",
            RowKey::DistinctMonomials => "distinct",
        }
    }
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Ascending => "asc",
            Direction::Descending => "desc",
        }
    }
}

impl SortStrategy {
    pub fn new(key: RowKey, direction: Direction) -> Self {
        SortStrategy { key, direction }
    }

    /// Every key in both directions.
    pub fn all() -> Vec<SortStrategy> {
        RowKey::ALL
            .into_iter()
            .flat_map(|k| [Direction::Ascending, Direction::Descending].map(|d| SortStrategy::new(k, d)))
            .collect()
    }
}

/// Sparsest rows first.
impl Default for SortStrategy {
    fn default() -> Self {
        SortStrategy::new(RowKey::SumTerms, Direction::Ascending)
    }
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for SortStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.key, self.direction)
    }
}

impl FromStr for RowKey {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        RowKey::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown sort key {s:?} (expected sum, sumsq, nonzero or distinct)"))
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "asc" => Ok(Direction::Ascending),
            "desc" => Ok(Direction::Descending),
            _ => Err(format!("unknown direction {s:?} (expected asc or desc)")),
        }
    }
}

/// Parses `key` (ascending) or `key-dir`, e.g. `sum-asc`, `distinct-desc`.
impl FromStr for SortStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.split_once('-') {
            Some((k, d)) => Ok(SortStrategy::new(k.parse()?, d.parse()?)),
            None => Ok(SortStrategy::new(s.parse()?, Direction::Ascending)),
        }
    }
}

/// A row permutation with its parity. Row `r` of the permuted matrix is row
/// `perm[r]` of the original, and `det(original) = sign * det(permuted)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowPermutation {
    perm: Vec<usize>,
    sign: i8,
}

impl RowPermutation {
    pub fn identity(n: usize) -> Self {
        RowPermutation { perm: (0..n).collect(), sign: 1 }
    }

    /// Panics if `perm` is not a bijection on `0..perm.len()`.
    pub fn new(perm: Vec<usize>) -> Self {
        let sign = parity_sign(&perm);
        RowPermutation { perm, sign }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn apply(&self, a: &SymMatrix) -> SymMatrix {
        a.permute_rows(&self.perm)
    }
}

/// +1 for even permutations, -1 for odd, via cycle decomposition.
fn parity_sign(perm: &[usize]) -> i8 {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut transpositions = 0usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            assert!(perm[i] < n, "not a permutation");
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    assert!(seen.iter().all(|&b| b), "not a permutation");
    if transpositions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn row_key_of(row: &[Polynomial], key: RowKey) -> u64 {
    match key {
        RowKey::SumTerms => row.iter().map(|p| p.nterms() as u64).sum(),
        RowKey::SumSquaredTerms => row.iter().map(|p| (p.nterms() as u64).pow(2)).sum(),
        RowKey::NonzeroCount => row.iter().filter(|p| !p.is_zero()).count() as u64,
        RowKey::DistinctMonomials => {
            let set: HashSet<_> = row.iter().flat_map(|p| p.terms().map(|(m, _)| m)).collect();
            set.len() as u64
        }
    }
}

/// The heuristic score of row `i`.
pub fn row_key(a: &SymMatrix, i: usize, key: RowKey) -> Result<u64> {
    if i >= a.n() {
        return Err(Error::IndexOutOfRange { index: i, n: a.n() });
    }
    Ok(row_key_of(a.row(i), key))
}

/// Permutation that stably sorts rows by `strategy`; ties keep original order.
pub fn sort_permutation(a: &SymMatrix, strategy: SortStrategy) -> RowPermutation {
    let keys: Vec<u64> = a.rows().map(|r| row_key_of(r, strategy.key)).collect();
    let mut perm: Vec<usize> = (0..a.n()).collect();
    match strategy.direction {
        Direction::Ascending => perm.sort_by_key(|&r| keys[r]),
        Direction::Descending => perm.sort_by_key(|&r| std::cmp::Reverse(keys[r])),
    }
    RowPermutation::new(perm)
}

pub fn sort_rows(a: &SymMatrix, strategy: SortStrategy) -> (SymMatrix, RowPermutation) {
    let perm = sort_permutation(a, strategy);
    (perm.apply(a), perm)
}

/// Minor expansion after reordering rows by `strategy`, sign-corrected so the
/// result equals [`det::minor_expansion`] on `a`.
pub fn sorted_minor_expansion(a: &SymMatrix, strategy: SortStrategy, meter: Option<&mut CostMeter>) -> Polynomial {
    let (sorted, perm) = sort_rows(a, strategy);
    let d = det::minor_expansion(&sorted, meter);
    if perm.sign() < 0 {
        d.neg()
    } else {
        d
    }
}

/// Advances `perm` to the next permutation in lexicographic order.
fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm.iter().rposition(|&x| x > perm[i]).unwrap();
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Exhaustive search over all `n!` row orders for the one minimising the
/// exact modeled cost of minor expansion. Ties go to the lexicographically
/// smallest permutation. Limited to `n <= 6`.
pub fn optimal_row_order(a: &SymMatrix) -> Result<(RowPermutation, BigUint)> {
    let n = a.n();
    if n > MAX_EXHAUSTIVE_DIM {
        return Err(Error::SizeGuardExceeded { n, limit: MAX_EXHAUSTIVE_DIM });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(Vec<usize>, BigUint)> = None;
    loop {
        let cost = c_m_exact(&a.permute_rows(&perm))?;
        if best.as_ref().is_none_or(|(_, c)| cost < *c) {
            best = Some((perm.clone(), cost));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let (perm, cost) = best.expect("at least one permutation");
    Ok((RowPermutation::new(perm), cost))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn row_key_examples() {
        let a = SymMatrix::from_rows(
            2,
            vec![vec![p("0"), p("x1"), p("x1 + x2")], vec![p("0"), p("0"), p("0")], vec![p("x1"), p("x1"), p("x1")]],
        )
        .unwrap();
        assert_eq!(row_key(&a, 0, RowKey::SumTerms).unwrap(), 3);
        assert_eq!(row_key(&a, 0, RowKey::NonzeroCount).unwrap(), 2);
        assert_eq!(row_key(&a, 0, RowKey::DistinctMonomials).unwrap(), 2);
        assert_eq!(row_key(&a, 0, RowKey::SumSquaredTerms).unwrap(), 5);
        for key in RowKey::ALL {
            assert_eq!(row_key(&a, 1, key).unwrap(), 0);
        }
        assert_eq!(row_key(&a, 2, RowKey::DistinctMonomials).unwrap(), 1);
        assert_eq!(row_key(&a, 2, RowKey::SumTerms).unwrap(), 3);
        assert!(matches!(row_key(&a, 3, RowKey::SumTerms), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn sort_rows_semantics() {
        let a = SymMatrix::from_rows(
            3,
            vec![
                vec![p("x1 + x2 + x3"), p("0"), p("0")],
                vec![p("x1"), p("0"), p("0")],
                vec![p("x2 + 1"), p("0"), p("0")],
            ],
        )
        .unwrap();
        let (sorted, perm) = sort_rows(&a, SortStrategy::new(RowKey::SumTerms, Direction::Ascending));
        assert_eq!(perm.as_slice(), &[1, 2, 0]);
        assert_eq!(perm.sign(), 1);
        assert_eq!(sorted.row(0), a.row(1));

        let (_, again) = sort_rows(&sorted, SortStrategy::default());
        assert!(again.is_identity());
        assert_eq!(again.sign(), 1);

        let (_, desc) = sort_rows(&a, SortStrategy::new(RowKey::SumTerms, Direction::Descending));
        assert_eq!(desc.as_slice(), &[0, 2, 1]);
        assert_eq!(desc.sign(), -1);
    }

    #[test]
    fn descending_sort_is_stable() {
        let a = SymMatrix::from_rows(1, vec![vec![p("x1"), p("1")], vec![p("x1"), p("1")]]).unwrap();
        for strategy in SortStrategy::all() {
            assert!(sort_permutation(&a, strategy).is_identity());
        }
    }

    #[test]
    fn parity() {
        assert_eq!(parity_sign(&[]), 1);
        assert_eq!(parity_sign(&[0, 1, 2]), 1);
        assert_eq!(parity_sign(&[1, 0, 2]), -1);
        assert_eq!(parity_sign(&[1, 2, 0]), 1);
        assert_eq!(parity_sign(&[3, 2, 1, 0]), 1);
        assert_eq!(parity_sign(&[1, 2, 3, 0]), -1);
    }

    #[test]
    fn lexicographic_permutations() {
        let mut perm = vec![0, 1, 2];
        let mut all = vec![perm.clone()];
        while next_permutation(&mut perm) {
            all.push(perm.clone());
        }
        assert_eq!(all, vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]);
    }

    #[test]
    fn strategy_names() {
        assert_eq!("sumsq-desc".parse::<SortStrategy>().unwrap().to_string(), "sumsq-desc");
        assert_eq!(
            "distinct".parse::<SortStrategy>().unwrap(),
            SortStrategy::new(RowKey::DistinctMonomials, Direction::Ascending)
        );
        assert!("sum-up".parse::<SortStrategy>().is_err());
        assert!("bogus".parse::<SortStrategy>().is_err());
        assert_eq!(SortStrategy::all().len(), 8);
    }

    #[test]
    fn optimal_order_small_cases() {
        let one = SymMatrix::new(1, 2, vec![p("x1 + x2")]).unwrap();
        let (perm, cost) = optimal_row_order(&one).unwrap();
        assert!(perm.is_identity());
        assert_eq!(cost, BigUint::from(2u32));

        let row = vec![p("x1 + 1"), p("x2"), p("3")];
        let same = SymMatrix::from_rows(2, vec![row.clone(), row.clone(), row]).unwrap();
        let (perm, _) = optimal_row_order(&same).unwrap();
        assert!(perm.is_identity());

        assert!(matches!(optimal_row_order(&SymMatrix::zero(7, 1)), Err(Error::SizeGuardExceeded { n: 7, limit: 6 })));
    }

    #[test]
    fn zero_matrix_sorted_determinant() {
        let a = SymMatrix::zero(5, 3);
        for strategy in SortStrategy::all() {
            assert!(sorted_minor_expansion(&a, strategy, None).is_zero());
        }
    }
}
