//! Class-function decomposition and eigenvectors for abelian groups.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::cayley::{adjacency_matrix, WeightFunction};
use crate::error::{Error, Result};
use crate::groups::{dot_mod, vectors_lex, CharacterLabel, CharacterValue, ConjugacyClass, CyclotomicValue, GroupSpec};
use crate::rational::{serde_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coefficient {
    pub character: CharacterLabel,
    #[serde(with = "serde_rat")]
    pub value: Rat,
}

/// `a_χ = ⟨ω, χ⟩ = (1/|G|) Σ_g ω(g)·conj(χ(g))` for every irreducible `χ`.
pub fn decompose_class_function(w: &WeightFunction) -> Result<Vec<Coefficient>> {
    let group = w.group;
    let classes = group.conjugacy_classes()?;
    let order = BigInt::from(group.order());
    group
        .irreducible_labels()?
        .into_iter()
        .map(|label| {
            let value = match group {
                GroupSpec::Sym { .. } => {
                    let mut sum = BigInt::zero();
                    for (class, &wv) in classes.iter().zip(&w.values) {
                        if wv == 0 {
                            continue;
                        }
                        let CharacterValue::Integer(chi) = group.character_value(&label, class)? else {
                            return Err(Error::internal("symmetric group characters are integers"));
                        };
                        sum += BigInt::from(class.size()) * BigInt::from(wv) * BigInt::from(chi);
                    }
                    Rat::new(sum, order.clone())
                }
                GroupSpec::CyclicPower { m, .. } => {
                    let CharacterLabel::Dual(y) = &label else {
                        return Err(Error::internal("abelian characters are labelled by dual vectors"));
                    };
                    let mut sum = CyclotomicValue::zero(m);
                    for (class, &wv) in classes.iter().zip(&w.values) {
                        let ConjugacyClass::Singleton(x) = class else {
                            return Err(Error::internal("abelian classes are singletons"));
                        };
                        if wv != 0 {
                            sum.add_term((m - dot_mod(y, x, m)) % m, wv as i128);
                        }
                    }
                    let s = sum.expect_integer(&format!("inner product with character {label}"))?;
                    Rat::new(BigInt::from(s), order.clone())
                }
            };
            Ok(Coefficient { character: label, value })
        })
        .collect()
}

/// Eigenvector `x ↦ ζ^{−y·x}` of a Cayley graph on `(Z_m)^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianEigenvector {
    pub dual: Vec<usize>,
    pub entries: Vec<CyclotomicValue>,
    pub eigenvalue: Rat,
}

impl AbelianEigenvector {
    /// Entries as integers when every entry is rational, as for `m ≤ 2`.
    pub fn integer_entries(&self) -> Result<Option<Vec<i128>>> {
        self.entries.iter().map(|e| e.to_integer()).collect::<Result<Option<Vec<_>>>>()
    }
}

/// Builds the eigenvector for the character `y` and checks `A·v = λ_y·v` entrywise.
pub fn abelian_eigenvector(y: &[usize], w: &WeightFunction) -> Result<AbelianEigenvector> {
    let GroupSpec::CyclicPower { m, n } = w.group else {
        return Err(Error::invalid("eigenvectors from characters need an abelian group (Z_m)^n"));
    };
    if y.len() != n || y.iter().any(|&c| c >= m) {
        return Err(Error::invalid(format!("{y:?} is not an element of (Z_{m})^{n}")));
    }
    let xs = vectors_lex(m, n);
    let entries: Vec<CyclotomicValue> = xs
        .iter()
        .map(|x| CyclotomicValue::root_power(m, -(dot_mod(y, x, m) as i64)))
        .collect();
    let mut lambda_sum = CyclotomicValue::zero(m);
    for (x, &wx) in xs.iter().zip(&w.values) {
        if wx != 0 {
            lambda_sum.add_term(dot_mod(y, x, m), wx as i128);
        }
    }
    let lambda = lambda_sum.expect_integer("abelian eigenvalue")?;
    let a = adjacency_matrix(w)?;
    for (g, eg) in entries.iter().enumerate() {
        let mut av = CyclotomicValue::zero(m);
        for (h, eh) in entries.iter().enumerate() {
            let weight = a.get(g, h);
            if weight != 0 {
                av = av.add(&eh.scale(weight as i128));
            }
        }
        if !av.equals(&eg.scale(lambda))? {
            return Err(Error::internal(format!(
                "character {y:?} fails the eigenvector equation at row {g}"
            )));
        }
    }
    Ok(AbelianEigenvector {
        dual: y.to_vec(),
        entries,
        eigenvalue: Rat::from_integer(lambda.into()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{binomial_weight, natural_weight, weighted_degree};
    use crate::partitions::Partition;
    use crate::spectra::generic_spectrum;
    use num_traits::One;

    #[test]
    fn trivial_weights() {
        let g = GroupSpec::sym(4).unwrap();
        let zero = WeightFunction::new(g, vec![0; 5]).unwrap();
        assert!(decompose_class_function(&zero).unwrap().iter().all(|c| c.value.is_zero()));
        let one = binomial_weight(g, 0).unwrap();
        for c in decompose_class_function(&one).unwrap() {
            let expected = if c.character == CharacterLabel::Partition(Partition::single_row(4)) {
                Rat::one()
            } else {
                Rat::zero()
            };
            assert_eq!(c.value, expected);
        }
    }

    #[test]
    fn fixed_points_split_into_two_characters() {
        for m in 2..=6 {
            let w = natural_weight(GroupSpec::sym(m).unwrap()).unwrap();
            for c in decompose_class_function(&w).unwrap() {
                let CharacterLabel::Partition(mu) = &c.character else { unreachable!() };
                let expected = if mu.first_row() >= m - 1 { Rat::one() } else { Rat::zero() };
                assert_eq!(c.value, expected, "m={m} μ=({mu})");
            }
        }
    }

    #[test]
    fn coefficients_are_scaled_eigenvalues() {
        let g = GroupSpec::cyclic_power(3, 2).unwrap();
        let w = binomial_weight(g, 1).unwrap();
        let spec = generic_spectrum(&w).unwrap();
        for c in decompose_class_function(&w).unwrap() {
            let lambda = spec
                .entries
                .iter()
                .find(|e| e.contributors.iter().any(|x| matches!(x, crate::spectra::Contributor::Character(l) if *l == c.character)))
                .unwrap()
                .eigenvalue
                .clone();
            assert_eq!(c.value, lambda / Rat::from_integer(9.into()));
        }
    }

    #[test]
    fn eigenvectors() {
        let g = GroupSpec::cyclic_power(2, 2).unwrap();
        let w = binomial_weight(g, 1).unwrap();
        let v = abelian_eigenvector(&[1, 0], &w).unwrap();
        assert_eq!(v.integer_entries().unwrap(), Some(vec![1, 1, -1, -1]));
        assert_eq!(v.eigenvalue, Rat::from_integer(2.into()));
        let trivial = abelian_eigenvector(&[0, 0], &w).unwrap();
        assert_eq!(trivial.integer_entries().unwrap(), Some(vec![1; 4]));
        assert_eq!(trivial.eigenvalue, Rat::from_integer((weighted_degree(&w).unwrap() as i64).into()));
        let z3 = binomial_weight(GroupSpec::cyclic_power(3, 2).unwrap(), 1).unwrap();
        for y in vectors_lex(3, 2) {
            abelian_eigenvector(&y, &z3).unwrap();
        }
        for y in vectors_lex(2, 3) {
            let v = abelian_eigenvector(&y, &binomial_weight(GroupSpec::cyclic_power(2, 3).unwrap(), 2).unwrap()).unwrap();
            assert!(v.integer_entries().unwrap().unwrap().iter().all(|&e| e == 1 || e == -1));
        }
    }
}
