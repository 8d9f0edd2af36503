//! Spectra of weighted normal Cayley graphs from irreducible characters.
//!
//! Every irreducible character `χ` contributes the eigenvalue
//! `λ_χ = (1/χ(id)) Σ_g ω(g) χ(g)` with multiplicity `χ(id)²`; characters
//! sharing an eigenvalue are merged. Closed forms are provided for the
//! binomial fixed-point weights on `S_m` and the binomial zero-count weights
//! on `(Z_m)^n`.

pub mod decompose;
pub mod lemmas;
pub mod verify;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cayley::WeightFunction;
use crate::error::{Error, Result};
use crate::groups::{dot_mod, CharacterLabel, CharacterValue, ConjugacyClass, CyclotomicValue, GroupSpec};
use crate::partitions::{crop, enumerate_partitions, syt_count};
use crate::rational::{binomial, binomial_big, factorial, serde_rat, Rat};

pub use decompose::{abelian_eigenvector, decompose_class_function, AbelianEigenvector};
pub use lemmas::{lemma_suite, LemmaBounds, LemmaReport};
pub use verify::{verify_spectrum_exact, SpectrumVerification};

/// Who produced an eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Contributor {
    Character(CharacterLabel),
    /// All dual vectors `y` of `(Z_m)^n` with this many zero coordinates.
    ZeroCount { zeros: usize, count: u128 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    #[serde(with = "serde_rat")]
    pub eigenvalue: Rat,
    pub multiplicity: u128,
    pub contributors: Vec<Contributor>,
}

/// Distinct eigenvalues with multiplicities, sorted by eigenvalue descending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub group: GroupSpec,
    pub order: u128,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumReport {
    fn from_contributions(group: GroupSpec, items: Vec<(Rat, u128, Contributor)>) -> Result<Self> {
        let mut merged: BTreeMap<Rat, (u128, Vec<Contributor>)> = BTreeMap::new();
        for (lambda, mult, who) in items {
            if mult == 0 {
                continue;
            }
            let slot = merged.entry(lambda).or_insert((0, Vec::new()));
            slot.0 = slot
                .0
                .checked_add(mult)
                .ok_or_else(|| Error::TooLarge("multiplicity overflows 128 bits".into()))?;
            slot.1.push(who);
        }
        let entries = merged
            .into_iter()
            .rev()
            .map(|(eigenvalue, (multiplicity, contributors))| SpectrumEntry {
                eigenvalue,
                multiplicity,
                contributors,
            })
            .collect();
        let report = SpectrumReport {
            group,
            order: group.order(),
            entries,
        };
        if report.total_multiplicity() != report.order {
            return Err(Error::internal(format!(
                "multiplicities of the spectrum of {group} sum to {} instead of {}",
                report.total_multiplicity(),
                report.order
            )));
        }
        Ok(report)
    }

    pub fn total_multiplicity(&self) -> u128 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// `Σ λ·mult`, the trace of the adjacency matrix.
    pub fn trace(&self) -> Rat {
        self.entries
            .iter()
            .fold(Rat::zero(), |acc, e| acc + &e.eigenvalue * Rat::from_integer(e.multiplicity.into()))
    }

    pub fn multiplicity_of(&self, lambda: &Rat) -> u128 {
        self.entries
            .iter()
            .find(|e| &e.eigenvalue == lambda)
            .map_or(0, |e| e.multiplicity)
    }

    /// Dimension of the kernel: the multiplicity of zero.
    pub fn kernel_dim(&self) -> u128 {
        self.multiplicity_of(&Rat::zero())
    }

    /// `(eigenvalue, multiplicity)` pairs without contributors.
    pub fn pairs(&self) -> Vec<(Rat, u128)> {
        self.entries.iter().map(|e| (e.eigenvalue.clone(), e.multiplicity)).collect()
    }

    pub fn eigenvalues(&self) -> Vec<Rat> {
        self.entries.iter().map(|e| e.eigenvalue.clone()).collect()
    }

    /// Eigenvalues repeated by multiplicity, descending; refuses huge groups.
    pub fn expanded(&self) -> Result<Vec<Rat>> {
        if self.order > crate::groups::MAX_ELEMENTS as u128 {
            return Err(Error::TooLarge(format!("{} eigenvalues", self.order)));
        }
        Ok(self
            .entries
            .iter()
            .flat_map(|e| std::iter::repeat(e.eigenvalue.clone()).take(e.multiplicity as usize))
            .collect())
    }
}

fn rat_u128(x: u128) -> Rat {
    Rat::from_integer(x.into())
}

/// Spectrum of any valid weight, from the character table.
pub fn generic_spectrum(w: &WeightFunction) -> Result<SpectrumReport> {
    let group = w.group;
    let classes = group.conjugacy_classes()?;
    let labels = group.irreducible_labels()?;
    let mut items = Vec::with_capacity(labels.len());
    match group {
        GroupSpec::Sym { .. } => {
            let id = classes.len() - 1;
            for label in labels {
                let mut sum = BigInt::zero();
                let mut degree = 0i128;
                for (ci, class) in classes.iter().enumerate() {
                    let CharacterValue::Integer(chi) = group.character_value(&label, class)? else {
                        return Err(Error::internal("symmetric group characters are integers"));
                    };
                    if ci == id {
                        degree = chi;
                    }
                    if w.values[ci] != 0 && chi != 0 {
                        sum += BigInt::from(class.size()) * BigInt::from(w.values[ci]) * BigInt::from(chi);
                    }
                }
                let lambda = Rat::new(sum, BigInt::from(degree));
                let mult = (degree as u128).pow(2);
                items.push((lambda, mult, Contributor::Character(label)));
            }
        }
        GroupSpec::CyclicPower { m, .. } => {
            let xs: Vec<&Vec<usize>> = classes
                .iter()
                .map(|c| match c {
                    ConjugacyClass::Singleton(x) => x,
                    ConjugacyClass::CycleType { .. } => unreachable!("abelian classes are singletons"),
                })
                .collect();
            for label in labels {
                let CharacterLabel::Dual(y) = &label else {
                    return Err(Error::internal("abelian characters are labelled by dual vectors"));
                };
                let mut sum = CyclotomicValue::zero(m);
                for (x, &wx) in xs.iter().zip(&w.values) {
                    if wx != 0 {
                        sum.add_term(dot_mod(y, x, m), wx as i128);
                    }
                }
                let lambda = sum.expect_integer(&format!("eigenvalue of character {label}"))?;
                items.push((Rat::from_integer(lambda.into()), 1, Contributor::Character(label)));
            }
        }
    }
    SpectrumReport::from_contributions(group, items)
}

/// `λ_μ = C(m,k)·(m−k)!·crop(μ,k)/syt(μ)` with multiplicity `syt(μ)²`, for `A_Bin(S_m, F, k)`.
pub fn sym_spectrum(m: usize, k: usize) -> Result<SpectrumReport> {
    let group = GroupSpec::sym(m)?;
    if k > m {
        return Err(Error::invalid(format!("need 0 ≤ k ≤ m, got k={k}, m={m}")));
    }
    let top = binomial_big(m as u64, k as u64) * BigInt::from(factorial((m - k) as u64));
    let mut items = Vec::new();
    for mu in enumerate_partitions(m) {
        let f = syt_count(&mu);
        let lambda = Rat::new(&top * BigInt::from(crop(&mu, k)?), BigInt::from(f));
        if !lambda.is_integer() {
            return Err(Error::internal(format!("eigenvalue for ({mu}) is not an integer: {lambda}")));
        }
        if lambda.is_negative() || lambda > Rat::from_integer(top.clone()) {
            return Err(Error::internal(format!("eigenvalue for ({mu}) out of bounds: {lambda}")));
        }
        items.push((lambda, f * f, Contributor::Character(CharacterLabel::Partition(mu))));
    }
    SpectrumReport::from_contributions(group, items)
}

/// Eigenvalue `m^{n−k}·C(t, n−k)` with multiplicity `C(n,t)·(m−1)^{n−t}`, `t = 0..=n`,
/// for `A_Bin((Z_m)^n, Z, k)`.
pub fn cyclic_spectrum(m: usize, n: usize, k: usize) -> Result<SpectrumReport> {
    let group = GroupSpec::cyclic_power(m, n)?;
    if k > n {
        return Err(Error::invalid(format!("need 0 ≤ k ≤ n, got k={k}, n={n}")));
    }
    let scale = BigInt::from(m).pow((n - k) as u32);
    let mut items = Vec::new();
    for t in 0..=n {
        let lambda = Rat::from_integer(&scale * binomial_big(t as u64, (n - k) as u64));
        let count = cyclic_count(n, m, t)?;
        items.push((lambda, count, Contributor::ZeroCount { zeros: t, count }));
    }
    SpectrumReport::from_contributions(group, items)
}

/// Number of vectors of `(Z_m)^n` with exactly `t` zero coordinates.
pub fn cyclic_count(n: usize, m: usize, t: usize) -> Result<u128> {
    let base = (m as u128 - 1)
        .checked_pow((n - t) as u32)
        .ok_or_else(|| Error::TooLarge(format!("(m−1)^{} overflows", n - t)))?;
    binomial(n as u64, t as u64)
        .checked_mul(base)
        .ok_or_else(|| Error::TooLarge("vector count overflows 128 bits".into()))
}

/// `Σ_{μ₁ < m−k} syt(μ)²`.
pub fn sym_kernel_dim(m: usize, k: usize) -> Result<u128> {
    check_sym(m, k)?;
    Ok(enumerate_partitions(m)
        .iter()
        .filter(|mu| mu.first_row() + k < m)
        .map(|mu| syt_count(mu).pow(2))
        .sum())
}

/// `Σ_{μ₁ ≥ m−k} syt(μ)²`.
pub fn sym_rank(m: usize, k: usize) -> Result<u128> {
    check_sym(m, k)?;
    Ok(enumerate_partitions(m)
        .iter()
        .filter(|mu| mu.first_row() + k >= m)
        .map(|mu| syt_count(mu).pow(2))
        .sum())
}

fn check_sym(m: usize, k: usize) -> Result<()> {
    GroupSpec::sym(m)?;
    if k > m {
        return Err(Error::invalid(format!("need 0 ≤ k ≤ m, got k={k}, m={m}")));
    }
    Ok(())
}

fn check_cyclic(n: usize, m: usize, k: usize) -> Result<()> {
    GroupSpec::cyclic_power(m, n)?;
    if k > n {
        return Err(Error::invalid(format!("need 0 ≤ k ≤ n, got k={k}, n={n}")));
    }
    Ok(())
}

/// `Σ_{t < n−k} C(n,t)·(m−1)^{n−t}`.
pub fn cyclic_kernel_dim(n: usize, m: usize, k: usize) -> Result<u128> {
    check_cyclic(n, m, k)?;
    (0..n - k).try_fold(0u128, |acc, t| {
        acc.checked_add(cyclic_count(n, m, t)?)
            .ok_or_else(|| Error::TooLarge("kernel dimension overflows".into()))
    })
}

/// `Σ_{s ≤ k} C(n,s)·(m−1)^s`.
pub fn cyclic_rank(n: usize, m: usize, k: usize) -> Result<u128> {
    check_cyclic(n, m, k)?;
    (0..=k).try_fold(0u128, |acc, s| {
        acc.checked_add(cyclic_count(n, m, n - s)?)
            .ok_or_else(|| Error::TooLarge("rank overflows".into()))
    })
}

/// `R^{n,m}_k = R^{n,m}_{k−1} + C(n,k)·(m^k − R^{k,m}_{k−1})`, `R^{n,m}_0 = 1`.
pub fn rank_recursion(n: usize, m: usize, k: usize) -> Result<u128> {
    check_cyclic(n, m, k)?;
    let mut memo = BTreeMap::new();
    recursion(n, m, k, &mut memo)
        .to_u128()
        .ok_or_else(|| Error::TooLarge("rank overflows 128 bits".into()))
}

fn recursion(n: usize, m: usize, k: usize, memo: &mut BTreeMap<(usize, usize), BigInt>) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    if let Some(v) = memo.get(&(n, k)) {
        return v.clone();
    }
    let prev = recursion(n, m, k - 1, memo);
    let inner = recursion(k, m, k - 1, memo);
    let v = prev + binomial_big(n as u64, k as u64) * (BigInt::from(m).pow(k as u32) - inner);
    memo.insert((n, k), v.clone());
    v
}

/// Upper bound on every eigenvalue of the binomial family: `C(m,k)·(m−k)!` or `m^{n−k}·C(n,k)`.
pub fn eigenvalue_bound(group: GroupSpec, k: usize) -> Rat {
    match group {
        GroupSpec::Sym { m } => rat_u128(binomial(m as u64, k as u64) * factorial((m - k) as u64)),
        GroupSpec::CyclicPower { m, n } => Rat::from_integer(
            BigInt::from(m).pow((n - k) as u32) * binomial_big(n as u64, k as u64),
        ),
    }
}
