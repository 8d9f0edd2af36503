//! Brute-force checks of the counting identities behind the closed-form spectra.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::groups::{cycle_type, dot_mod, fixed_points, permutations_lex, vectors_lex, zero_count, CyclotomicValue};
use crate::partitions::{crop, enumerate_partitions, mn_character, Partition};
use crate::rational::{binomial_big, factorial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaBounds {
    /// Largest `M`, `N`, `k` in the alternating binomial identity.
    pub binomial_max: usize,
    /// Largest `m` for the symmetric group identities.
    pub sym_max: usize,
    /// Largest `m` for the cyclic identities.
    pub cyclic_m_max: usize,
    /// Largest group order `m^n` for the zero-count character sums.
    pub cyclic_order_max: usize,
}

impl Default for LemmaBounds {
    fn default() -> Self {
        LemmaBounds {
            binomial_max: 20,
            sym_max: 6,
            cyclic_m_max: 12,
            cyclic_order_max: 512,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub name: String,
    pub instances: u64,
    /// Witnesses of failure, empty when the identity holds on every instance.
    pub failures: Vec<String>,
}

impl LemmaCheck {
    fn new(name: &str) -> Self {
        LemmaCheck {
            name: name.to_string(),
            instances: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub bounds: LemmaBounds,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(LemmaCheck::passed)
    }
}

pub fn lemma_suite(bounds: LemmaBounds) -> Result<LemmaReport> {
    Ok(LemmaReport {
        bounds,
        checks: vec![
            alternating_binomial(bounds.binomial_max),
            nonzero_root_sums(bounds.cyclic_m_max)?,
            zero_count_character_sums(bounds.cyclic_m_max, bounds.cyclic_order_max)?,
            fixed_point_restriction(bounds.sym_max)?,
            subgroup_character_sums(bounds.sym_max)?,
        ],
    })
}

/// `Σ_{p=0}^{M} (−1)^p C(N,p) C(k+M−p, M−p) = C(k−N+M, M)` whenever `M + k ≥ N`.
pub fn alternating_binomial_lhs(big_m: usize, big_n: usize, k: usize) -> BigInt {
    (0..=big_m)
        .map(|p| {
            let term = binomial_big(big_n as u64, p as u64) * binomial_big((k + big_m - p) as u64, (big_m - p) as u64);
            if p % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn alternating_binomial(max: usize) -> LemmaCheck {
    let mut check = LemmaCheck::new("alternating binomial convolution");
    for big_m in 0..=max {
        for big_n in 0..=max {
            for k in 0..=max {
                if big_m + k < big_n {
                    continue;
                }
                let lhs = alternating_binomial_lhs(big_m, big_n, k);
                let rhs = binomial_big((k + big_m - big_n) as u64, big_m as u64);
                check.record(lhs == rhs, || format!("M={big_m} N={big_n} k={k}: {lhs} vs {rhs}"));
            }
        }
    }
    check
}

/// `Σ_{x ≠ 0} ζ^{xy}` is `m − 1` for `y = 0` and `−1` otherwise.
fn nonzero_root_sums(m_max: usize) -> Result<LemmaCheck> {
    let mut check = LemmaCheck::new("sum of a character over nonzero residues");
    for m in 1..=m_max {
        for y in 0..m {
            let mut sum = CyclotomicValue::zero(m);
            for x in 1..m {
                sum.add_term(x * y % m, 1);
            }
            let expected = if y == 0 { m as i128 - 1 } else { -1 };
            let got = sum.to_integer()?;
            check.record(got == Some(expected), || format!("m={m} y={y}: {sum} vs {expected}"));
        }
    }
    Ok(check)
}

/// `Σ_{Z(x)=z} χ^y(x) = Σ_ℓ (m−1)^ℓ (−1)^{n−z−ℓ} C(t,ℓ) C(n−t, n−z−ℓ)` with `t = Z(y)`.
pub fn zero_count_sum_formula(m: usize, n: usize, t: usize, z: usize) -> BigInt {
    (0..=n - z)
        .map(|l| {
            let term = BigInt::from(m - 1).pow(l as u32)
                * binomial_big(t as u64, l as u64)
                * binomial_big((n - t) as u64, (n - z - l) as u64);
            if (n - z - l) % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn zero_count_character_sums(m_max: usize, order_max: usize) -> Result<LemmaCheck> {
    let mut check = LemmaCheck::new("character sums over vectors with a given number of zeros");
    for m in 2..=m_max {
        let mut n = 1;
        while m.pow(n as u32) <= order_max {
            let xs = vectors_lex(m, n);
            for y in &xs {
                let t = zero_count(y);
                let mut sums = vec![CyclotomicValue::zero(m); n + 1];
                for x in &xs {
                    sums[zero_count(x)].add_term(dot_mod(y, x, m), 1);
                }
                for (z, sum) in sums.iter().enumerate() {
                    let expected = zero_count_sum_formula(m, n, t, z);
                    let got = sum.to_integer()?;
                    check.record(got.map(BigInt::from) == Some(expected.clone()), || {
                        format!("m={m} n={n} y={y:?} z={z}: {sum} vs {expected}")
                    });
                }
            }
            n += 1;
        }
    }
    Ok(check)
}

/// Character values on every permutation of `S_m`, keyed by permutation index.
fn character_rows(m: usize) -> Result<(Vec<Vec<usize>>, Vec<(Partition, Vec<i128>)>)> {
    let perms = permutations_lex(m);
    let types: Vec<Partition> = perms.iter().map(|p| cycle_type(p)).collect();
    let rows = enumerate_partitions(m)
        .into_iter()
        .map(|mu| {
            let values = types.iter().map(|rho| mn_character(&mu, rho)).collect::<Result<Vec<_>>>()?;
            Ok((mu, values))
        })
        .collect::<Result<_>>()?;
    Ok((perms, rows))
}

/// `C(f,k)·Σ_{σ∈S_m, F(σ)=f} χ(σ) = C(m,k)·Σ_{σ∈S_{m−k}, F(σ)=f} χ(σ)` with `S_{m−k}`
/// fixing the last `k` points.
fn fixed_point_restriction(m_max: usize) -> Result<LemmaCheck> {
    let mut check = LemmaCheck::new("binomial exchange for fixed-point sums");
    for m in 1..=m_max {
        let (perms, rows) = character_rows(m)?;
        let fixed: Vec<usize> = perms.iter().map(|p| fixed_points(p)).collect();
        for k in 0..=m {
            let embedded: Vec<bool> = perms.iter().map(|p| (m - k..m).all(|i| p[i] == i + 1)).collect();
            for f in k..=m {
                for (mu, values) in &rows {
                    let mut full = BigInt::zero();
                    let mut sub = BigInt::zero();
                    for (idx, &v) in values.iter().enumerate() {
                        if fixed[idx] == f {
                            full += v;
                            if embedded[idx] {
                                sub += v;
                            }
                        }
                    }
                    let lhs = binomial_big(f as u64, k as u64) * &full;
                    let rhs = binomial_big(m as u64, k as u64) * &sub;
                    check.record(lhs == rhs, || format!("m={m} k={k} f={f} μ=({mu}): {lhs} vs {rhs}"));
                }
            }
        }
    }
    Ok(check)
}

/// `Σ_{σ∈S_{m−k}} χ^μ(σ) = (m−k)!·crop(μ,k)`.
fn subgroup_character_sums(m_max: usize) -> Result<LemmaCheck> {
    let mut check = LemmaCheck::new("character sums over the point stabilizer subgroup");
    for m in 1..=m_max {
        let (perms, rows) = character_rows(m)?;
        for k in 0..=m {
            let embedded: Vec<bool> = perms.iter().map(|p| (m - k..m).all(|i| p[i] == i + 1)).collect();
            for (mu, values) in &rows {
                let sum: i128 = values.iter().zip(&embedded).filter(|(_, &e)| e).map(|(v, _)| v).sum();
                let expected = factorial((m - k) as u64) * crop(mu, k)?;
                check.record(sum == expected as i128, || format!("m={m} k={k} μ=({mu}): {sum} vs {expected}"));
            }
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_instances() {
        assert_eq!(alternating_binomial_lhs(2, 1, 1), BigInt::from(1));
        assert_eq!(zero_count_sum_formula(2, 1, 0, 0), BigInt::from(-1));
    }

    #[test]
    fn reduced_suite_passes() {
        let report = lemma_suite(LemmaBounds {
            binomial_max: 8,
            sym_max: 4,
            cyclic_m_max: 5,
            cyclic_order_max: 64,
        })
        .unwrap();
        for c in &report.checks {
            assert!(c.passed(), "{}: {:?}", c.name, c.failures);
            assert!(c.instances > 0);
        }
    }
}
