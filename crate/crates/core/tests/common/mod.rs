#![allow(dead_code)]

use proptest::prelude::*;
use symdet::matrix::{gen_one_homogeneous, gen_sparse_linear};
use symdet::{ExperimentConfig, Monomial, Polynomial, SymMatrix};

/// Polynomials in up to `s` variables with small degree, term count and
/// coefficients; enough to exercise consolidation and cancellation.
pub fn poly_strategy(s: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0..=max_deg, s), -9i64..=9);
    prop::collection::vec(term, 0..=max_terms)
        .prop_map(|terms| Polynomial::from_terms(terms.into_iter().map(|(exps, c)| (Monomial::new(exps), c))))
}

/// Homogeneous polynomials of the given degree in `s` variables.
pub fn homogeneous_strategy(s: usize, degree: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0..=degree, s - 1), -9i64..=9);
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        Polynomial::from_terms(terms.into_iter().filter_map(|(mut exps, c)| {
            let used: u32 = exps.iter().sum();
            if used > degree {
                return None;
            }
            exps.push(degree - used);
            Some((Monomial::new(exps), c))
        }))
    })
}

/// A deterministic mix of both generator distributions, cycling through
/// `1 <= n <= max_n` and `1 <= s <= max_s`.
pub fn mixed_matrices(count: usize, max_n: usize, max_s: usize, seed: u64) -> Vec<SymMatrix> {
    (0..count)
        .map(|i| {
            let n = 1 + i % max_n;
            let s = 1 + (i / max_n) % max_s;
            let seed = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
            if i % 2 == 0 {
                gen_one_homogeneous(n, s, -999, 999, seed).unwrap()
            } else {
                sparse(n, s, [0.0, 0.2, 0.5, 0.8][i / 2 % 4], seed)
            }
        })
        .collect()
}

pub fn sparse(n: usize, s: usize, zero_prob: f64, seed: u64) -> SymMatrix {
    let config =
        ExperimentConfig { n, s, zero_prob, max_terms: (s + 1).min(4), coeff_lo: -999, coeff_hi: 999, seed, trials: 1 };
    gen_sparse_linear(&config).unwrap()
}

/// Every entry is a full linear form, so no entry is zero and leading minors
/// vanish only by coincidence.
pub fn zero_free(n: usize, s: usize, seed: u64) -> SymMatrix {
    gen_one_homogeneous(n, s, -999, 999, seed).unwrap()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    // Pascal's triangle, deliberately independent of num_integer.
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for t in 1..row.len() {
            next[t] = row[t - 1] + row[t];
        }
        row = next;
    }
    row[k as usize]
}

/// Number of monomials of total degree exactly `d` in `s` variables: choose
/// the last exponent, recurse on the remaining variables.
pub fn count_monomials(d: u32, s: u32) -> u64 {
    // table[v][e] = monomials of degree e in v variables
    let d = d as usize;
    let mut table = vec![vec![1u64; d + 1]];
    for _ in 1..s {
        let prev = table.last().unwrap();
        table.push((0..=d).map(|e| prev[..=e].iter().sum()).collect());
    }
    table[s as usize - 1][d]
}
