mod common;

use common::{binomial, count_monomials, mixed_matrices, zero_free};
use num_bigint::BigUint;
use symdet::costmodel::{c_g, c_m, c_m_exact, cost_ratio_grid, crossover_n, CostParams};
use symdet::det::minor_expansion_with;
use symdet::{minor_expansion, CostMeter, SymMatrix};

/// `C_M` summed subset by subset: each `J` of size `i >= 2` and each `j` in
/// `J` costs `s` times the number of degree `i - 1` monomials.
fn brute_c_m(n: u32, s: u32) -> u64 {
    let per_level: Vec<u64> = (0..=n).map(|i| u64::from(i) * u64::from(s) * count_monomials(i.max(1) - 1, s)).collect();
    if n > 16 {
        // Too many subsets to walk; group them by size instead.
        return (2..=n).map(|i| binomial(u64::from(n), u64::from(i)) * per_level[i as usize]).sum();
    }
    (0u32..1 << n).map(|mask| mask.count_ones()).filter(|&i| i >= 2).map(|i| per_level[i as usize]).sum()
}

fn brute_c_g(n: u32, s: u32) -> u64 {
    (1..n)
        .map(|i| {
            let t = count_monomials(i, s);
            u64::from((n - i) * (n - i)) * (2 * t * t + count_monomials(2 * i, s) * count_monomials(i - 1, s))
        })
        .sum()
}

#[test]
fn closed_forms_match_brute_force() {
    for n in 1..=9 {
        for s in 1..=5 {
            let p = CostParams::new(n, s);
            assert_eq!(c_m(p), BigUint::from(brute_c_m(n, s)), "C_M n={n} s={s}");
            assert_eq!(c_g(p), BigUint::from(brute_c_g(n, s)), "C_G n={n} s={s}");
        }
    }
}

#[test]
fn reference_values() {
    assert_eq!(brute_c_m(2, 1), 2);
    assert_eq!(brute_c_g(2, 1), 3);
    assert_eq!(brute_c_m(3, 2), 42);
    assert_eq!(brute_c_g(3, 1), 15);
    assert_eq!((brute_c_m(5, 1), brute_c_g(5, 1)), (75, 90));
    assert_eq!((brute_c_m(6, 1), brute_c_g(6, 1)), (186, 165));
    assert_eq!(crossover_n(1, 20), Some(6));
}

#[test]
fn second_form_of_c_m() {
    for n in 1..=12u64 {
        for s in 1..=6u64 {
            let rewritten: u64 = n * s * (1..n).map(|i| binomial(n - 1, i) * binomial(i + s - 1, s - 1)).sum::<u64>();
            assert_eq!(c_m(CostParams::new(n as u32, s as u32)), BigUint::from(rewritten));
        }
    }
}

#[test]
fn crossover_is_the_first_costlier_point() {
    for s in 1..=6 {
        let found = crossover_n(s, 40).expect("crossover within 40");
        let brute = (1..=40).find(|&n| brute_c_m(n, s) > brute_c_g(n, s)).unwrap();
        assert_eq!(found, brute, "s={s}");
    }
    assert_eq!(crossover_n(30, 5), None);
}

#[test]
fn both_costs_increase_in_n() {
    for s in 1..=8 {
        for n in 2..30 {
            assert!(c_m(CostParams::new(n + 1, s)) > c_m(CostParams::new(n, s)));
            assert!(c_g(CostParams::new(n + 1, s)) > c_g(CostParams::new(n, s)));
        }
    }
}

#[test]
fn grid_sign_follows_crossover() {
    let grid = cost_ratio_grid(12, 3);
    assert_eq!(grid.len(), 11 * 3);
    for pt in &grid {
        let costlier = brute_c_m(pt.n, pt.s) > brute_c_g(pt.n, pt.s);
        assert_eq!(pt.log_ratio > 0.0, costlier, "n={} s={}", pt.n, pt.s);
    }
}

#[test]
fn exact_cost_equals_meter() {
    for (i, a) in mixed_matrices(60, 6, 5, 3).iter().enumerate() {
        let mut m = CostMeter::new();
        minor_expansion(a, Some(&mut m));
        assert_eq!(c_m_exact(a).unwrap(), m.modeled_int_ops, "matrix {i}");
    }
}

/// Straight from the subset sum: every `J`, every `j` in `J`, with the minor
/// on the first `|J| - 1` rows computed from scratch.
fn exact_cost_from_definition(a: &SymMatrix) -> u64 {
    let n = a.n();
    let mut total = 0;
    for mask in 1u32..1 << n {
        let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let row = cols.len() - 1;
        for &j in &cols {
            let rest: Vec<usize> = cols.iter().copied().filter(|&c| c != j).collect();
            let rows: Vec<usize> = (0..row).collect();
            let minor = symdet::naive_laplace(&a.submatrix(&rows, &rest).unwrap());
            total += (a.get(row, j).nterms() * minor.nterms()) as u64;
        }
    }
    total
}

#[test]
fn exact_cost_matches_definition() {
    for (i, a) in mixed_matrices(24, 5, 4, 17).iter().enumerate() {
        assert_eq!(c_m_exact(a).unwrap(), BigUint::from(exact_cost_from_definition(a)), "matrix {i}");
    }
}

#[test]
fn exact_cost_bounded_by_closed_form() {
    for n in 1..=6u32 {
        for s in 1..=4u32 {
            let a = zero_free(n as usize, s as usize, u64::from(n * 7 + s));
            let level_one = BigUint::from(n * s);
            let exact = c_m_exact(&a).unwrap();
            assert!(exact <= c_m(CostParams::new(n, s)) + &level_one, "n={n} s={s}");

            // Tight exactly when every minor hits its term bound.
            let mut saturated = true;
            minor_expansion_with(&a, None, |_, cur| {
                let bound = count_monomials(cur.level() as u32, s) as usize;
                saturated &= cur.iter().all(|(_, p)| p.nterms() == bound);
            });
            if saturated {
                assert_eq!(exact, c_m(CostParams::new(n, s)) + level_one, "n={n} s={s}");
            }
        }
    }
}
