//! Square polynomial matrices, their text file format, and the random
//! matrix distributions used by the experiments.

use std::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

/// An `n x n` matrix of polynomials in the variables `x1..xs`.
///
/// Indices are 0-based. The 0x0 matrix only arises from [`SymMatrix::submatrix`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    n: usize,
    s: usize,
    entries: Vec<Polynomial>,
}

impl SymMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(n: usize, s: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidRange("variable count must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(p) = entries.iter().find(|p| p.num_vars() > s) {
            return Err(Error::VariableOutOfRange { index: p.num_vars(), s });
        }
        Ok(SymMatrix { n, s, entries })
    }

    pub fn from_rows(s: usize, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("row of length {} in a matrix with {n} rows", r.len())));
        }
        Self::new(n, s, rows.into_iter().flatten().collect())
    }

    pub fn zero(n: usize, s: usize) -> Self {
        SymMatrix { n, s: s.max(1), entries: vec![Polynomial::zero(); n * n] }
    }

    pub fn identity(n: usize, s: usize) -> Self {
        let mut m = Self::zero(n, s);
        for i in 0..n {
            m.entries[i * n + i] = Polynomial::one();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Polynomial]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// The matrix formed from the selected rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<SymMatrix> {
        if rows.len() != cols.len() {
            return Err(Error::DimensionMismatch(format!("{} rows but {} columns selected", rows.len(), cols.len())));
        }
        if let Some(&index) = rows.iter().chain(cols).find(|&&k| k >= self.n) {
            return Err(Error::IndexOutOfRange { index, n: self.n });
        }
        let entries = rows.iter().flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone())).collect();
        Ok(SymMatrix { n: rows.len(), s: self.s, entries })
    }

    /// Row `r` of the result is row `perm[r]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> SymMatrix {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let entries = perm.iter().flat_map(|&r| self.row(r).iter().cloned()).collect();
        SymMatrix { n: self.n, s: self.s, entries }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n {
            self.entries.swap(a * self.n + j, b * self.n + j);
        }
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) -> Result<()> {
        if p.num_vars() > self.s {
            return Err(Error::VariableOutOfRange { index: p.num_vars(), s: self.s });
        }
        self.entries[i * self.n + j] = p;
        Ok(())
    }

    /// Parses the matrix file format: a header line `n s`, then `n` lines of
    /// `n` polynomials separated by `;`. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<SymMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) =
            lines.next().ok_or(Error::MatrixFormat { line: 0, msg: "missing `n s` header".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let parse_dim = |f: &str| {
            f.parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::MatrixFormat { line: hline, msg: format!("bad dimension {f:?}") })
        };
        if fields.len() != 2 {
            return Err(Error::MatrixFormat { line: hline, msg: "header must be `n s`".into() });
        }
        let n = parse_dim(fields[0])?;
        let s = parse_dim(fields[1])?;

        let mut entries = Vec::with_capacity(n * n);
        for _ in 0..n {
            let (line, row) =
                lines.next().ok_or(Error::MatrixFormat { line: hline, msg: format!("expected {n} rows") })?;
            let cells: Vec<&str> = row.split(';').collect();
            if cells.len() != n {
                return Err(Error::MatrixFormat { line, msg: format!("expected {n} entries, found {}", cells.len()) });
            }
            for cell in cells {
                let p = Polynomial::parse(cell, s).map_err(|e| Error::MatrixFormat { line, msg: e.to_string() })?;
                entries.push(p);
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::MatrixFormat { line, msg: "trailing content after last row".into() });
        }
        SymMatrix::new(n, s, entries)
    }
}

impl fmt::Display for SymMatrix {
    /// Writes the matrix file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.s)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join("; "))?;
        }
        Ok(())
    }
}

/// Parameters of a random-matrix distribution together with a trial plan.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub s: usize,
    /// Probability that an entry is the zero polynomial.
    pub zero_prob: f64,
    pub max_terms: usize,
    pub coeff_lo: i64,
    pub coeff_hi: i64,
    pub seed: u64,
    pub trials: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 9,
            s: 5,
            zero_prob: 0.5,
            max_terms: 4,
            coeff_lo: -999,
            coeff_hi: 999,
            seed: 0,
            trials: 100,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.s == 0 {
            return Err(Error::InvalidRange("n and s must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.zero_prob) {
            return Err(Error::InvalidRange(format!("zero_prob {} not in [0, 1]", self.zero_prob)));
        }
        if self.max_terms == 0 || self.max_terms > self.s + 1 {
            return Err(Error::InvalidRange(format!("max_terms {} must be in 1..={}", self.max_terms, self.s + 1)));
        }
        CoeffSampler::new(self.coeff_lo, self.coeff_hi).map(|_| ())
    }
}

/// Uniform draws from `[lo, hi] \ {0}`.
#[derive(Clone, Copy, Debug)]
struct CoeffSampler {
    lo: i64,
    count: u64,
    skips_zero: bool,
}

impl CoeffSampler {
    fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidRange(format!("coefficient range [{lo}, {hi}] is empty")));
        }
        let skips_zero = lo <= 0 && 0 <= hi;
        let width = (hi as i128 - lo as i128 + 1) as u64;
        let count = width - u64::from(skips_zero);
        if count == 0 {
            return Err(Error::InvalidRange("coefficient range contains only zero".into()));
        }
        Ok(CoeffSampler { lo, count, skips_zero })
    }

    fn draw(&self, rng: &mut impl Rng) -> i64 {
        let v = (self.lo as i128 + rng.gen_range(0..self.count) as i128) as i64;
        if self.skips_zero && v >= 0 {
            v + 1
        } else {
            v
        }
    }
}

/// Dense matrix of linear forms `sum_k c_ijk x_k` with nonzero coefficients,
/// so every entry has exactly `s` terms and every minor of order `i` is
/// homogeneous of degree `i`.
pub fn gen_one_homogeneous(n: usize, s: usize, coeff_lo: i64, coeff_hi: i64, seed: u64) -> Result<SymMatrix> {
    if n == 0 || s == 0 {
        return Err(Error::InvalidRange("n and s must be positive".into()));
    }
    let coeffs = CoeffSampler::new(coeff_lo, coeff_hi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries =
        (0..n * n).map(|_| Polynomial::from_terms((0..s).map(|k| (Monomial::var(k), coeffs.draw(&mut rng))))).collect();
    SymMatrix::new(n, s, entries)
}

/// Sparse matrix of polynomials of total degree at most one.
///
/// Each entry is zero with probability `zero_prob`; otherwise it has a
/// uniformly chosen number of terms in `1..=max_terms`, with distinct
/// monomials drawn from `{1, x1, .., xs}` and nonzero coefficients.
pub fn gen_sparse_linear(config: &ExperimentConfig) -> Result<SymMatrix> {
    config.validate()?;
    let coeffs = CoeffSampler::new(config.coeff_lo, config.coeff_hi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (n, s) = (config.n, config.s);
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        if rng.gen_bool(config.zero_prob) {
            entries.push(Polynomial::zero());
            continue;
        }
        let t = rng.gen_range(1..=config.max_terms);
        let picks = sample(&mut rng, s + 1, t);
        let terms = picks.into_iter().map(|k| {
            let m = if k == 0 { Monomial::one() } else { Monomial::var(k - 1) };
            (m, coeffs.draw(&mut rng))
        });
        entries.push(Polynomial::from_terms(terms));
    }
    SymMatrix::new(n, s, entries)
}
