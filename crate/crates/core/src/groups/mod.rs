//! The two group families: symmetric groups `S_m` and powers `(Z_m)^n`.
//!
//! Permutations are one-line arrays of `1..=m` and compose right to left,
//! `(a∘b)(i) = a(b(i))`. Vectors of `(Z_m)^n` hold residues in `0..m` and add
//! componentwise. Elements are enumerated in lexicographic order (for vectors
//! the leftmost coordinate is the most significant digit); every matrix in
//! the crate is indexed in that order.

pub mod cyclotomic;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{class_size, enumerate_partitions, mn_character, Partition, MAX_WEIGHT};
use crate::rational::factorial;

pub use cyclotomic::CyclotomicValue;

/// Largest group whose elements are materialized.
pub const MAX_ELEMENTS: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupSpec {
    Sym { m: usize },
    CyclicPower { m: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    /// One-line notation `σ(1), …, σ(m)`.
    Perm(Vec<usize>),
    /// Residues modulo `m`.
    Vector(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugacyClass {
    CycleType { cycle_type: Partition, size: u128 },
    Singleton(Vec<usize>),
}

impl ConjugacyClass {
    pub fn size(&self) -> u128 {
        match self {
            ConjugacyClass::CycleType { size, .. } => *size,
            ConjugacyClass::Singleton(_) => 1,
        }
    }

    /// Canonical text label: `"2,1"` for a cycle type, `"1|0|1"` for a vector.
    pub fn label(&self) -> String {
        match self {
            ConjugacyClass::CycleType { cycle_type, .. } => cycle_type.to_string(),
            ConjugacyClass::Singleton(v) => vector_label(v),
        }
    }
}

/// Label of an irreducible character.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CharacterLabel {
    /// `χ^μ` of `S_m`.
    Partition(Partition),
    /// `χ^y(x) = ζ^{y·x}` of `(Z_m)^n`.
    Dual(Vec<usize>),
}

impl fmt::Display for CharacterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharacterLabel::Partition(p) => write!(f, "{p}"),
            CharacterLabel::Dual(y) => write!(f, "{}", vector_label(y)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacterValue {
    Integer(i128),
    Cyclotomic(CyclotomicValue),
}

pub fn vector_label(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("|")
}

pub fn parse_vector_label(s: &str, m: usize, n: usize) -> Result<Vec<usize>> {
    let v = s
        .trim()
        .split('|')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad vector coordinate {t:?} in {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if v.len() != n || v.iter().any(|&x| x >= m) {
        return Err(Error::invalid(format!("{s:?} is not an element of (Z_{m})^{n}")));
    }
    Ok(v)
}

impl GroupSpec {
    pub fn sym(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_WEIGHT {
            return Err(Error::invalid(format!("S_m needs 1 ≤ m ≤ {MAX_WEIGHT}, got {m}")));
        }
        Ok(GroupSpec::Sym { m })
    }

    pub fn cyclic_power(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid(format!("(Z_m)^n needs m, n ≥ 1, got m={m}, n={n}")));
        }
        Ok(GroupSpec::CyclicPower { m, n })
    }

    /// Group order, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        match *self {
            GroupSpec::Sym { m } => factorial(m as u64),
            GroupSpec::CyclicPower { m, n } => {
                (0..n).fold(1u128, |acc, _| acc.saturating_mul(m as u128))
            }
        }
    }

    /// Order as an index bound, refusing groups larger than [`MAX_ELEMENTS`].
    pub fn checked_size(&self) -> Result<usize> {
        let order = self.order();
        if order > MAX_ELEMENTS as u128 {
            return Err(Error::TooLarge(format!(
                "{self} has {order} elements; at most {MAX_ELEMENTS} are materialized"
            )));
        }
        Ok(order as usize)
    }

    pub fn identity(&self) -> GroupElement {
        match *self {
            GroupSpec::Sym { m } => GroupElement::Perm((1..=m).collect()),
            GroupSpec::CyclicPower { n, .. } => GroupElement::Vector(vec![0; n]),
        }
    }

    pub fn validate(&self, a: &GroupElement) -> Result<()> {
        match (self, a) {
            (GroupSpec::Sym { m }, GroupElement::Perm(p)) => {
                if p.len() != *m || !is_permutation(p) {
                    return Err(Error::invalid(format!("{p:?} is not a permutation of 1..={m}")));
                }
                Ok(())
            }
            (GroupSpec::CyclicPower { m, n }, GroupElement::Vector(v)) => {
                if v.len() != *n || v.iter().any(|x| x >= m) {
                    return Err(Error::invalid(format!("{v:?} is not an element of (Z_{m})^{n}")));
                }
                Ok(())
            }
            _ => Err(Error::invalid(format!("element {a:?} does not belong to {self}"))),
        }
    }

    /// The group law: `a∘b` for permutations, `a + b` for vectors.
    pub fn compose(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(match (self, a, b) {
            (GroupSpec::Sym { .. }, GroupElement::Perm(a), GroupElement::Perm(b)) => {
                GroupElement::Perm(compose_perm(a, b))
            }
            (GroupSpec::CyclicPower { m, .. }, GroupElement::Vector(a), GroupElement::Vector(b)) => {
                GroupElement::Vector(a.iter().zip(b).map(|(x, y)| (x + y) % m).collect())
            }
            _ => unreachable!("validated above"),
        })
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        self.validate(a)?;
        Ok(match (self, a) {
            (GroupSpec::Sym { .. }, GroupElement::Perm(p)) => GroupElement::Perm(invert_perm(p)),
            (GroupSpec::CyclicPower { m, .. }, GroupElement::Vector(v)) => {
                GroupElement::Vector(v.iter().map(|x| (m - x) % m).collect())
            }
            _ => unreachable!("validated above"),
        })
    }

    /// All elements in the crate-wide ordering.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        self.checked_size()?;
        Ok(match *self {
            GroupSpec::Sym { m } => permutations_lex(m).into_iter().map(GroupElement::Perm).collect(),
            GroupSpec::CyclicPower { m, n } => {
                vectors_lex(m, n).into_iter().map(GroupElement::Vector).collect()
            }
        })
    }

    /// Position of `a` in [`elements`](Self::elements).
    pub fn index_of(&self, a: &GroupElement) -> Result<usize> {
        self.validate(a)?;
        Ok(match (self, a) {
            (GroupSpec::Sym { .. }, GroupElement::Perm(p)) => perm_rank(p),
            (GroupSpec::CyclicPower { m, .. }, GroupElement::Vector(v)) => vector_rank(v, *m),
            _ => unreachable!("validated above"),
        })
    }

    pub fn conjugacy_classes(&self) -> Result<Vec<ConjugacyClass>> {
        match *self {
            GroupSpec::Sym { m } => Ok(enumerate_partitions(m)
                .into_iter()
                .map(|rho| {
                    let size = class_size(&rho);
                    ConjugacyClass::CycleType { cycle_type: rho, size }
                })
                .collect()),
            GroupSpec::CyclicPower { m, n } => {
                self.checked_size()?;
                Ok(vectors_lex(m, n).into_iter().map(ConjugacyClass::Singleton).collect())
            }
        }
    }

    /// Irreducible character labels: partitions of `m`, or the elements of the dual group.
    pub fn irreducible_labels(&self) -> Result<Vec<CharacterLabel>> {
        match *self {
            GroupSpec::Sym { m } => Ok(enumerate_partitions(m)
                .into_iter()
                .map(CharacterLabel::Partition)
                .collect()),
            GroupSpec::CyclicPower { m, n } => {
                self.checked_size()?;
                Ok(vectors_lex(m, n).into_iter().map(CharacterLabel::Dual).collect())
            }
        }
    }

    /// Exact value of an irreducible character on a class.
    pub fn character_value(&self, label: &CharacterLabel, class: &ConjugacyClass) -> Result<CharacterValue> {
        match (self, label, class) {
            (
                GroupSpec::Sym { m },
                CharacterLabel::Partition(mu),
                ConjugacyClass::CycleType { cycle_type, .. },
            ) => {
                if mu.weight() != *m || cycle_type.weight() != *m {
                    return Err(Error::invalid(format!(
                        "χ^({mu}) on class ({cycle_type}) is not a character value of S_{m}"
                    )));
                }
                Ok(CharacterValue::Integer(mn_character(mu, cycle_type)?))
            }
            (GroupSpec::CyclicPower { m, n }, CharacterLabel::Dual(y), ConjugacyClass::Singleton(x)) => {
                if y.len() != *n || x.len() != *n || y.iter().chain(x).any(|c| c >= m) {
                    return Err(Error::invalid(format!(
                        "χ^{y:?} at {x:?} is not a character value of (Z_{m})^{n}"
                    )));
                }
                Ok(CharacterValue::Cyclotomic(CyclotomicValue::root_power(
                    *m,
                    dot_mod(y, x, *m) as i64,
                )))
            }
            _ => Err(Error::invalid(format!(
                "character {label} and class {} do not belong to {self}",
                class.label()
            ))),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Sym { m } => write!(f, "S_{m}"),
            GroupSpec::CyclicPower { m, n } => write!(f, "(Z_{m})^{n}"),
        }
    }
}

/// Number of fixed points of a permutation.
pub fn fixed_points(perm: &[usize]) -> usize {
    perm.iter().enumerate().filter(|(i, &v)| v == i + 1).count()
}

/// Number of zero coordinates of a vector.
pub fn zero_count(x: &[usize]) -> usize {
    x.iter().filter(|&&c| c == 0).count()
}

pub fn dot_mod(y: &[usize], x: &[usize], m: usize) -> usize {
    y.iter().zip(x).map(|(a, b)| a * b % m).sum::<usize>() % m
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| {
        v >= 1 && v <= p.len() && !std::mem::replace(&mut seen[v - 1], true)
    })
}

pub fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&bi| a[bi - 1]).collect()
}

pub fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v - 1] = i + 1;
    }
    inv
}

pub fn cycle_type(p: &[usize]) -> Partition {
    let mut seen = vec![false; p.len()];
    let mut lengths = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] - 1;
            len += 1;
        }
        lengths.push(len);
    }
    Partition::from_unsorted(lengths)
}

/// All permutations of `1..=m` in lexicographic order.
pub fn permutations_lex(m: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (1..=m).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

pub fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Lexicographic rank via the Lehmer code.
pub fn perm_rank(p: &[usize]) -> usize {
    let m = p.len();
    let mut rank = 0;
    for i in 0..m {
        let smaller = p[i + 1..].iter().filter(|&&v| v < p[i]).count();
        rank = rank * (m - i) + smaller;
    }
    rank
}

/// All vectors of `{0..m}^n`, leftmost coordinate most significant.
pub fn vectors_lex(m: usize, n: usize) -> Vec<Vec<usize>> {
    let total = m.pow(n as u32);
    (0..total).map(|idx| vector_unrank(idx, m, n)).collect()
}

pub fn vector_unrank(mut idx: usize, m: usize, n: usize) -> Vec<usize> {
    let mut v = vec![0; n];
    for slot in v.iter_mut().rev() {
        *slot = idx % m;
        idx /= m;
    }
    v
}

pub fn vector_rank(v: &[usize], m: usize) -> usize {
    v.iter().fold(0, |acc, &x| acc * m + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> GroupElement {
        GroupElement::Perm(v.to_vec())
    }

    #[test]
    fn composition() {
        let s3 = GroupSpec::sym(3).unwrap();
        let c = perm(&[2, 3, 1]);
        assert_eq!(s3.compose(&s3.identity(), &c).unwrap(), c);
        assert_eq!(s3.compose(&c, &c).unwrap(), perm(&[3, 1, 2]));
        let inv = s3.inverse(&c).unwrap();
        assert_eq!(s3.compose(&c, &inv).unwrap(), s3.identity());

        let z = GroupSpec::cyclic_power(2, 3).unwrap();
        let sum = z
            .compose(&GroupElement::Vector(vec![1, 0, 1]), &GroupElement::Vector(vec![1, 1, 0]))
            .unwrap();
        assert_eq!(sum, GroupElement::Vector(vec![0, 1, 1]));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let s3 = GroupSpec::sym(3).unwrap();
        assert!(s3.compose(&perm(&[1, 2]), &perm(&[1, 2, 3])).is_err());
        assert!(s3.compose(&GroupElement::Vector(vec![0, 0, 0]), &s3.identity()).is_err());
        assert!(s3.validate(&perm(&[1, 1, 2])).is_err());
        let z = GroupSpec::cyclic_power(3, 2).unwrap();
        assert!(z.validate(&GroupElement::Vector(vec![3, 0])).is_err());
    }

    #[test]
    fn classes_of_s3_by_enumeration() {
        let s3 = GroupSpec::sym(3).unwrap();
        let mut counts = std::collections::BTreeMap::new();
        for g in s3.elements().unwrap() {
            let GroupElement::Perm(p) = g else { unreachable!() };
            *counts.entry(cycle_type(&p).to_string()).or_insert(0u128) += 1;
        }
        for class in s3.conjugacy_classes().unwrap() {
            assert_eq!(counts[&class.label()], class.size());
        }
        assert_eq!(counts["1,1,1"], 1);
        assert_eq!(counts["2,1"], 3);
        assert_eq!(counts["3"], 2);

        let s4 = GroupSpec::sym(4).unwrap();
        let c22 = s4
            .conjugacy_classes()
            .unwrap()
            .into_iter()
            .find(|c| c.label() == "2,2")
            .unwrap();
        assert_eq!(c22.size(), 3);
        assert_eq!(GroupSpec::cyclic_power(3, 2).unwrap().conjugacy_classes().unwrap().len(), 9);
    }

    #[test]
    fn fixed_points_and_zeros() {
        assert_eq!(fixed_points(&[1, 2, 3, 4, 5]), 5);
        assert_eq!(fixed_points(&[2, 1, 3, 4, 5]), 3);
        assert_eq!(fixed_points(&[2, 3, 1]), 0);
        assert_eq!(zero_count(&[0, 0, 0]), 3);
        assert_eq!(zero_count(&[1, 0, 2]), 1);
        let with_one_zero = vectors_lex(2, 3).iter().filter(|v| zero_count(v) == 1).count();
        assert_eq!(with_one_zero, 3);
    }

    #[test]
    fn orderings_and_ranks() {
        let perms = permutations_lex(4);
        assert_eq!(perms.len(), 24);
        assert!(perms.windows(2).all(|w| w[0] < w[1]));
        for (i, p) in perms.iter().enumerate() {
            assert_eq!(perm_rank(p), i);
        }
        let vecs = vectors_lex(3, 3);
        assert_eq!(vecs[1], vec![0, 0, 1]);
        for (i, v) in vecs.iter().enumerate() {
            assert_eq!(vector_rank(v, 3), i);
        }
    }

    #[test]
    fn character_values() {
        let s3 = GroupSpec::sym(3).unwrap();
        let three = ConjugacyClass::CycleType {
            cycle_type: Partition::single_row(3),
            size: 2,
        };
        let sign = CharacterLabel::Partition(Partition::single_column(3));
        assert_eq!(s3.character_value(&sign, &three).unwrap(), CharacterValue::Integer(1));
        let triv = CharacterLabel::Partition(Partition::single_row(3));
        assert_eq!(s3.character_value(&triv, &three).unwrap(), CharacterValue::Integer(1));

        let z = GroupSpec::cyclic_power(3, 2).unwrap();
        for class in z.conjugacy_classes().unwrap() {
            let CharacterValue::Cyclotomic(v) =
                z.character_value(&CharacterLabel::Dual(vec![0, 0]), &class).unwrap()
            else {
                panic!("abelian characters are cyclotomic")
            };
            assert_eq!(v.to_integer().unwrap(), Some(1));
        }
        assert!(z.character_value(&sign, &three).is_err());
    }

    #[test]
    fn classes_are_invariant_under_conjugation() {
        let s4 = GroupSpec::sym(4).unwrap();
        let elems = s4.elements().unwrap();
        for g in &elems {
            let GroupElement::Perm(gp) = g else { unreachable!() };
            for h in &elems {
                let hinv = s4.inverse(h).unwrap();
                let conj = s4.compose(&s4.compose(h, g).unwrap(), &hinv).unwrap();
                let GroupElement::Perm(cp) = conj else { unreachable!() };
                assert_eq!(cycle_type(gp), cycle_type(&cp));
                assert_eq!(fixed_points(gp), fixed_points(&cp));
            }
        }
    }
}
