//! Integer-operation cost models for minor expansion and fraction-free
//! elimination on dense matrices of linear forms in `s` variables, and the
//! exact modeled cost of minor expansion on a concrete matrix.

use std::collections::HashMap;
use std::io::Write;

use num_bigint::BigUint;
use num_integer::{binomial, Integer};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::det::{self, Deadline};
use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::poly::homogeneous_term_bound;

/// Default dimension limit for [`c_m_exact`], which visits all `2^n` minors.
pub const DEFAULT_EXACT_GUARD: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CostParams {
    pub n: u32,
    pub s: u32,
}

impl CostParams {
    pub fn new(n: u32, s: u32) -> Self {
        assert!(n >= 1 && s >= 1, "n and s must be positive");
        CostParams { n, s }
    }
}

fn big(x: u32) -> BigUint {
    BigUint::from(x)
}

/// Worst-case integer operations of minor expansion, levels `2..=n`:
/// `s * sum_{i=2..n} i * C(n, i) * C(i + s - 2, s - 1)`.
pub fn c_m(params: CostParams) -> BigUint {
    let CostParams { n, s } = params;
    let sum: BigUint = (2..=n).map(|i| big(i) * binomial(big(n), big(i)) * homogeneous_term_bound(i - 1, s)).sum();
    big(s) * sum
}

/// Worst-case integer operations of one-step fraction-free elimination:
/// `sum_{i=1..n-1} (n-i)^2 (2 T(i)^2 + T(2i) T(i-1))` with `T(d)` the
/// homogeneous term bound of degree `d` in `s` variables.
pub fn c_g(params: CostParams) -> BigUint {
    let CostParams { n, s } = params;
    (1..n)
        .map(|i| {
            let block = big(n - i).pow(2);
            let t_i = homogeneous_term_bound(i, s);
            let products = BigUint::from(2u32) * &t_i * &t_i;
            let quotient = homogeneous_term_bound(2 * i, s) * homogeneous_term_bound(i - 1, s);
            block * (products + quotient)
        })
        .sum()
}

/// Exact modeled cost of minor expansion on `a`: the sum over every column set
/// `J` and `j` in `J` of `nterms(a[|J|-1][j]) * nterms(det A[0..|J|-1, J \ {j}])`,
/// singleton sets included.
pub fn c_m_exact(a: &SymMatrix) -> Result<BigUint> {
    c_m_exact_guarded(a, DEFAULT_EXACT_GUARD)
}

pub fn c_m_exact_guarded(a: &SymMatrix, max_n: usize) -> Result<BigUint> {
    let n = a.n();
    if n > max_n {
        return Err(Error::SizeGuardExceeded { n, limit: max_n });
    }
    let mut total = BigUint::zero();
    let mut observer = |prev: &det::MinorTable, cur: &det::MinorTable| {
        let prev_terms: HashMap<u64, u64> = prev.iter().map(|(k, p)| (k, p.nterms() as u64)).collect();
        let row = cur.level() - 1;
        let mut level_sum = 0u128;
        for (mask, _) in cur.iter() {
            for j in det::mask_columns(mask) {
                let entry = a.get(row, j).nterms() as u128;
                level_sum += entry * u128::from(prev_terms[&(mask & !(1u64 << j))]);
            }
        }
        total += level_sum;
    };
    det::minor_expansion_core(a, None, Deadline::NONE, &mut observer)?;
    Ok(total)
}

/// One cell of the cost-ratio surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub n: u32,
    pub s: u32,
    pub log_ratio: f64,
}

/// Natural logarithm of a big integer, exact enough for ratios of huge counts.
fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln(C_M / C_G)`, with the ratio reduced exactly before the logarithm.
pub fn log_cost_ratio(params: CostParams) -> f64 {
    let (num, den) = (c_m(params), c_g(params));
    let g = num.gcd(&den);
    if g.is_zero() {
        return f64::NAN;
    }
    ln_big(&(num / &g)) - ln_big(&(den / &g))
}

/// `ln(C_M / C_G)` for `2 <= n <= n_max`, `1 <= s <= s_max`, row-major in `n`.
pub fn cost_ratio_grid(n_max: u32, s_max: u32) -> Vec<RatioPoint> {
    let mut out = Vec::with_capacity((n_max.saturating_sub(1) * s_max) as usize);
    for n in 2..=n_max {
        for s in 1..=s_max {
            out.push(RatioPoint { n, s, log_ratio: log_cost_ratio(CostParams::new(n, s)) });
        }
    }
    out
}

/// Writes the grid as CSV with header `n,s,log_ratio`.
pub fn write_ratio_grid<W: Write>(grid: &[RatioPoint], out: W) -> Result<()> {
    crate::bench::write_csv_to(grid, out)
}

impl crate::bench::CsvSchema for RatioPoint {
    const HEADER: &'static [&'static str] = &["n", "s", "log_ratio"];
}

/// Smallest `n <= n_cap` at which minor expansion's modeled cost exceeds
/// elimination's, by linear scan.
pub fn crossover_n(s: u32, n_cap: u32) -> Option<u32> {
    (1..=n_cap).find(|&n| {
        let p = CostParams::new(n, s);
        c_m(p) > c_g(p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;

    #[test]
    fn closed_form_examples() {
        assert_eq!(c_m(CostParams::new(2, 1)), big(2));
        assert_eq!(c_m(CostParams::new(3, 2)), big(42));
        assert_eq!(c_g(CostParams::new(2, 1)), big(3));
        assert_eq!(c_g(CostParams::new(3, 1)), big(15));
        for s in 1..6 {
            assert!(c_m(CostParams::new(1, s)).is_zero());
            assert!(c_g(CostParams::new(1, s)).is_zero());
        }
    }

    #[test]
    fn crossover_examples() {
        assert_eq!(c_m(CostParams::new(5, 1)), big(75));
        assert_eq!(c_g(CostParams::new(5, 1)), big(90));
        assert_eq!(c_m(CostParams::new(6, 1)), big(186));
        assert_eq!(c_g(CostParams::new(6, 1)), big(165));
        assert_eq!(crossover_n(1, 20), Some(6));
        assert_eq!(crossover_n(1, 5), None);
        assert_eq!(crossover_n(30, 8), None);
    }

    #[test]
    fn ratio_grid_shape() {
        let grid = cost_ratio_grid(8, 5);
        assert_eq!(grid.len(), 7 * 5);
        assert_eq!(grid[0].n, 2);
        assert_eq!(grid[0].s, 1);
        assert!((grid[0].log_ratio - (2.0f64 / 3.0).ln()).abs() < 1e-12);
        for pt in grid.iter().filter(|p| p.s == 1 && p.n >= 6) {
            assert!(pt.log_ratio > 0.0, "{pt:?}");
        }
    }

    #[test]
    fn ratio_grid_handles_huge_values() {
        let r = log_cost_ratio(CostParams::new(60, 60));
        assert!(r.is_finite());
        assert!(ln_big(&(BigUint::from(1u32) << 2000)) - 2000.0 * std::f64::consts::LN_2 < 1e-9);
    }

    #[test]
    fn exact_cost_examples() {
        let a = SymMatrix::parse("2 4\nx1; x2\nx3; x4\n").unwrap();
        assert_eq!(c_m_exact(&a).unwrap(), big(4));
        assert!(c_m_exact(&SymMatrix::zero(4, 2)).unwrap().is_zero());
        let big_a = SymMatrix::zero(17, 1);
        assert!(matches!(c_m_exact(&big_a), Err(Error::SizeGuardExceeded { n: 17, limit: 16 })));
        assert!(c_m_exact_guarded(&SymMatrix::zero(3, 1), 2).is_err());
        let one = SymMatrix::new(1, 2, vec![Polynomial::parse("x1 + x2 + 1", 2).unwrap()]).unwrap();
        assert_eq!(c_m_exact(&one).unwrap(), big(3));
    }
}
