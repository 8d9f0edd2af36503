//! Exact verification of a claimed spectrum against an adjacency matrix.
//!
//! For a matrix `A` in the image of the group algebra (`A[g][h]` depends only
//! on `h·g⁻¹`) the check runs in `O(|Λ|²·N²)` word operations:
//!
//! 1. Closure. The row `e_idᵀ·Π_{λ∈Λ}(A − λI)` is computed modulo enough
//!    primes to exceed an a-priori bound on its entries. If it vanishes, the
//!    product matrix vanishes (it is determined by its identity row), so `A`
//!    is diagonalizable with every eigenvalue in the claimed set `Λ`.
//! 2. Multiplicities. Given closure, `nullity(A − λI)` equals the trace of
//!    the spectral projector `E_λ = Π_{μ≠λ}(A − μI)/(λ − μ)`, which is
//!    `N·E_λ[id][id]`. That integer lies in `0..=N`, so computing it modulo
//!    a single prime larger than `N` determines it exactly.
//!
//! Small matrices are additionally cross-checked by elimination. Matrices
//! outside the group algebra, and claimed sets that fail the closure test,
//! fall back to certified rational nullity computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::SpectrumReport;
use crate::cayley::AdjacencyMatrix;
use crate::error::{Error, Result};
use crate::exactla::elimination::{modular_nullity_bound, rank_nullity};
use crate::exactla::modular::{inv_mod, primes, IntMatrix};
use crate::rational::{format_rat, serde_rat, Rat};

/// Matrices up to this size are also checked by modular elimination.
pub const ELIMINATION_CROSS_CHECK: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenCheck {
    #[serde(with = "serde_rat")]
    pub eigenvalue: Rat,
    pub claimed: u128,
    /// `nullity(A − λI)`, proven exactly.
    pub exact: u128,
    /// Nullity bound from elimination modulo primes, when computed.
    pub elimination_bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumVerification {
    pub size: usize,
    pub symmetric: bool,
    pub group_circulant: bool,
    /// `Π(A − λI) = 0` over the claimed eigenvalues.
    pub closure: bool,
    pub checks: Vec<EigenCheck>,
    pub verified: bool,
    pub failure: Option<String>,
}

pub fn verify_spectrum_exact(a: &AdjacencyMatrix, claimed: &SpectrumReport) -> Result<SpectrumVerification> {
    let n = a.size();
    let symmetric = a.is_symmetric();
    let group_circulant = a.is_group_circulant()?;
    let lambdas: Vec<Rat> = claimed.eigenvalues();
    let closure = group_circulant && closure_holds(a, &lambdas)?;
    let int = a.to_int();

    let exact: Vec<u128> = if closure {
        projector_traces(a, &lambdas)?
    } else {
        let rat = a.to_rat();
        lambdas
            .iter()
            .map(|l| Ok(rank_nullity(&rat.shifted(l)?).1 as u128))
            .collect::<Result<_>>()?
    };

    let mut checks = Vec::with_capacity(lambdas.len());
    for (entry, &ex) in claimed.entries.iter().zip(&exact) {
        let elimination_bound = if n <= ELIMINATION_CROSS_CHECK {
            let bound = modular_nullity_bound(&shifted_int(&int, n, &entry.eigenvalue), 2);
            if (bound as u128) < ex {
                return Err(Error::internal(format!(
                    "elimination bound {bound} below proven nullity {ex} at λ = {}",
                    format_rat(&entry.eigenvalue)
                )));
            }
            Some(bound)
        } else {
            None
        };
        checks.push(EigenCheck {
            eigenvalue: entry.eigenvalue.clone(),
            claimed: entry.multiplicity,
            exact: ex,
            elimination_bound,
        });
    }

    let total: u128 = claimed.total_multiplicity();
    let failure = if total != n as u128 {
        Some(format!("claimed multiplicities sum to {total}, matrix has size {n}"))
    } else {
        None
    };
    let failure = failure.or_else(|| {
        checks.iter().find(|c| c.claimed != c.exact).map(|c| {
            format!(
                "eigenvalue {}: claimed multiplicity {}, exact nullity {}",
                format_rat(&c.eigenvalue),
                c.claimed,
                c.exact
            )
        })
    });
    let failure = failure.or_else(|| {
        let found: u128 = exact.iter().sum();
        (found != n as u128).then(|| format!("claimed eigenvalues account for {found} of {n} dimensions"))
    });
    let failure = failure.or_else(|| (!symmetric).then(|| "matrix is not symmetric".to_string()));
    Ok(SpectrumVerification {
        size: n,
        symmetric,
        group_circulant,
        closure,
        verified: failure.is_none(),
        checks,
        failure,
    })
}

fn shifted_int(int: &IntMatrix, n: usize, lambda: &Rat) -> IntMatrix {
    let IntMatrix::Small { data, .. } = int else {
        unreachable!("adjacency matrices hold i64 entries")
    };
    let (num, den) = (lambda.numer().clone(), lambda.denom().clone());
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let x = BigInt::from(data[i * n + j]) * &den;
                    if i == j {
                        x - &num
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    IntMatrix::from_big_rows(rows, n)
}

/// Residue of a rational modulo `p`, assuming `p` does not divide its denominator.
fn rat_mod(r: &Rat, p: u64) -> Option<u64> {
    let bp = BigInt::from(p);
    let num = r.numer().mod_floor(&bp).to_u64()?;
    let den = r.denom().mod_floor(&bp).to_u64()?;
    (den != 0).then(|| num * inv_mod(den, p) % p)
}

/// `A` reduced modulo `p`, row-major.
fn matrix_mod(a: &AdjacencyMatrix, p: u64) -> Vec<u64> {
    a.data().iter().map(|&x| x.rem_euclid(p as i64) as u64).collect()
}

/// `w ← w·(A − λI)` modulo `p`.
fn step(w: &[u64], a_mod: &[u64], n: usize, lambda: u64, p: u64) -> Vec<u64> {
    let mut acc = vec![0u64; n];
    for (g, &wg) in w.iter().enumerate() {
        if wg == 0 {
            continue;
        }
        let row = &a_mod[g * n..(g + 1) * n];
        for (x, &ag) in acc.iter_mut().zip(row) {
            *x += wg * ag;
        }
    }
    acc.iter()
        .zip(w)
        .map(|(&x, &wh)| (x % p + p - wh * lambda % p) % p)
        .collect()
}

fn closure_holds(a: &AdjacencyMatrix, lambdas: &[Rat]) -> Result<bool> {
    let n = a.size();
    if lambdas.is_empty() {
        return Ok(n == 0);
    }
    // integer factors (d·A − c·I) for λ = c/d; entries of the running row are bounded by
    // the product of the factors' maximal absolute column sums
    let col_sum: BigInt = (0..n)
        .map(|h| (0..n).map(|g| BigInt::from(a.get(g, h).abs())).sum::<BigInt>())
        .max()
        .unwrap_or_default();
    let bound: BigInt = lambdas
        .iter()
        .map(|l| l.denom() * &col_sum + l.numer().abs())
        .product();
    let mut needed = Vec::new();
    let mut modulus = BigInt::from(1);
    for &p in primes() {
        if lambdas.iter().any(|l| l.denom().mod_floor(&BigInt::from(p)).is_zero()) {
            continue;
        }
        needed.push(p);
        modulus *= p;
        if modulus > bound {
            break;
        }
    }
    if modulus <= bound {
        return Err(Error::TooLarge("closure bound exceeds the prime table".into()));
    }
    for p in needed {
        let a_mod = matrix_mod(a, p);
        let mut w = vec![0u64; n];
        w[a.identity_index()] = 1;
        for l in lambdas {
            // scaling each factor by the denominator does not affect vanishing
            w = step(&w, &a_mod, n, rat_mod(l, p).expect("denominator invertible"), p);
        }
        if w.iter().any(|&x| x != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn projector_traces(a: &AdjacencyMatrix, lambdas: &[Rat]) -> Result<Vec<u128>> {
    let n = a.size();
    let p = *primes()
        .iter()
        .find(|&&p| {
            p as usize > n
                && lambdas.iter().all(|l| rat_mod(l, p).is_some())
                && lambdas
                    .iter()
                    .enumerate()
                    .all(|(i, l)| lambdas[i + 1..].iter().all(|m| rat_mod(&(l - m), p) != Some(0)))
        })
        .ok_or_else(|| Error::TooLarge("no prime separates the claimed eigenvalues".into()))?;
    let a_mod = matrix_mod(a, p);
    let residues: Vec<u64> = lambdas.iter().map(|l| rat_mod(l, p).unwrap()).collect();
    let mut out = Vec::with_capacity(lambdas.len());
    for (i, &li) in residues.iter().enumerate() {
        let mut w = vec![0u64; n];
        w[a.identity_index()] = 1;
        let mut denom = 1u64;
        for (j, &lj) in residues.iter().enumerate() {
            if i != j {
                w = step(&w, &a_mod, n, lj, p);
                denom = denom * ((li + p - lj) % p) % p;
            }
        }
        let diag = w[a.identity_index()] * inv_mod(denom, p) % p;
        let trace = diag * (n as u64 % p) % p;
        if trace as usize > n {
            return Err(Error::internal(format!(
                "projector trace {trace} exceeds dimension {n} at λ = {}",
                format_rat(&lambdas[i])
            )));
        }
        out.push(trace as u128);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{adjacency_matrix, binomial_weight};
    use crate::groups::GroupSpec;
    use crate::spectra::{cyclic_spectrum, generic_spectrum, sym_spectrum};

    #[test]
    fn all_ones_matrix() {
        let g = GroupSpec::sym(3).unwrap();
        let w = binomial_weight(g, 0).unwrap();
        let v = verify_spectrum_exact(&adjacency_matrix(&w).unwrap(), &generic_spectrum(&w).unwrap()).unwrap();
        assert!(v.verified, "{v:?}");
        assert!(v.closure);
    }

    #[test]
    fn s4_fixed_points() {
        let g = GroupSpec::sym(4).unwrap();
        let a = adjacency_matrix(&binomial_weight(g, 1).unwrap()).unwrap();
        let v = verify_spectrum_exact(&a, &sym_spectrum(4, 1).unwrap()).unwrap();
        assert!(v.verified, "{v:?}");
        assert!(v.checks.iter().all(|c| c.elimination_bound == Some(c.exact as usize)));
    }

    #[test]
    fn perturbed_multiplicity_is_rejected() {
        let g = GroupSpec::cyclic_power(2, 3).unwrap();
        let a = adjacency_matrix(&binomial_weight(g, 2).unwrap()).unwrap();
        let mut claim = cyclic_spectrum(2, 3, 2).unwrap();
        assert!(verify_spectrum_exact(&a, &claim).unwrap().verified);
        claim.entries[1].multiplicity += 1;
        let v = verify_spectrum_exact(&a, &claim).unwrap();
        assert!(!v.verified);
        assert_eq!(v.checks[1].claimed, v.checks[1].exact + 1);
        assert!(v.failure.unwrap().contains("sum to 9"));
    }

    #[test]
    fn wrong_eigenvalue_fails_closure() {
        let g = GroupSpec::cyclic_power(2, 2).unwrap();
        let a = adjacency_matrix(&binomial_weight(g, 1).unwrap()).unwrap();
        let mut claim = cyclic_spectrum(2, 2, 1).unwrap();
        claim.entries[0].eigenvalue = Rat::from_integer(5.into());
        let v = verify_spectrum_exact(&a, &claim).unwrap();
        assert!(!v.closure);
        assert!(!v.verified);
        assert_eq!(v.checks[0].exact, 0);
    }
}
