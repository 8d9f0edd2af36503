//! Weight functions and adjacency matrices of weighted normal Cayley graphs.
//!
//! A weight is stored per conjugacy class, so every weight is a class
//! function by construction. The adjacency matrix has entry `ω(h·g⁻¹)` at
//! row `g`, column `h`, with both indexed in the order of
//! [`GroupSpec::elements`].
//!
//! # Weight files
//!
//! ```text
//! # the counterexample weight on Z_4
//! group cyclic 4 1
//! 0 4
//! 1 7
//! 2 9
//! 3 7
//! ```
//!
//! The header is `group sym M` or `group cyclic M N`. Every other
//! non-blank line not starting with `#` is `LABEL VALUE`, where `LABEL` is a
//! cycle type such as `2,1,1` for `S_m` or a vector such as `1|0|2` for
//! `(Z_m)^n`, and `VALUE` is a natural number. Every class must appear
//! exactly once.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::modular::IntMatrix;
use crate::exactla::RatMatrix;
use crate::groups::{
    compose_perm, cycle_type, invert_perm, parse_vector_label, perm_rank, permutations_lex,
    vector_rank, vector_unrank, zero_count, ConjugacyClass, GroupElement, GroupSpec,
};
use crate::partitions::Partition;
use crate::rational::{binomial, Rat};

/// Natural-valued class function, one value per conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightFunction {
    pub group: GroupSpec,
    /// Indexed like [`GroupSpec::conjugacy_classes`].
    pub values: Vec<u64>,
}

impl WeightFunction {
    /// Builds a weight from class values, rejecting weights that are not inversion-invariant.
    pub fn new(group: GroupSpec, values: Vec<u64>) -> Result<Self> {
        let classes = group.conjugacy_classes()?;
        if values.len() != classes.len() {
            return Err(Error::invalid(format!(
                "{group} has {} conjugacy classes, got {} weights",
                classes.len(),
                values.len()
            )));
        }
        if let GroupSpec::CyclicPower { m, n } = group {
            for (idx, &w) in values.iter().enumerate() {
                let x = vector_unrank(idx, m, n);
                let neg: Vec<usize> = x.iter().map(|c| (m - c) % m).collect();
                if values[vector_rank(&neg, m)] != w {
                    return Err(Error::invalid(format!(
                        "weight is not invariant under inversion at {}",
                        crate::groups::vector_label(&x)
                    )));
                }
            }
        }
        Ok(WeightFunction { group, values })
    }

    /// Weight given as `(class label, value)` pairs covering every class once.
    pub fn from_labels(group: GroupSpec, entries: &[(String, u64)]) -> Result<Self> {
        let classes = group.conjugacy_classes()?;
        let index: HashMap<String, usize> = classes.iter().enumerate().map(|(i, c)| (c.label(), i)).collect();
        let mut values: Vec<Option<u64>> = vec![None; classes.len()];
        for (label, value) in entries {
            let canonical = canonical_label(&group, label)?;
            let &i = index
                .get(&canonical)
                .ok_or_else(|| Error::invalid(format!("{label:?} is not a class of {group}")))?;
            if values[i].replace(*value).is_some() {
                return Err(Error::invalid(format!("class {canonical} given twice")));
            }
        }
        let missing: Vec<String> = values
            .iter()
            .zip(&classes)
            .filter(|(v, _)| v.is_none())
            .map(|(_, c)| c.label())
            .collect();
        if !missing.is_empty() {
            return Err(Error::invalid(format!("no weight for classes {}", missing.join(" "))));
        }
        Self::new(group, values.into_iter().map(Option::unwrap).collect())
    }

    pub fn classes(&self) -> Result<Vec<ConjugacyClass>> {
        self.group.conjugacy_classes()
    }

    /// Weight of each group element in the order of [`GroupSpec::elements`].
    pub fn element_weights(&self) -> Result<Vec<u64>> {
        match self.group {
            GroupSpec::CyclicPower { .. } => {
                self.group.checked_size()?;
                Ok(self.values.clone())
            }
            GroupSpec::Sym { m } => {
                self.group.checked_size()?;
                let lookup = self.sym_lookup()?;
                Ok(permutations_lex(m)
                    .iter()
                    .map(|p| self.values[lookup[&cycle_type(p)]])
                    .collect())
            }
        }
    }

    fn sym_lookup(&self) -> Result<HashMap<Partition, usize>> {
        Ok(self
            .classes()?
            .into_iter()
            .enumerate()
            .map(|(i, c)| match c {
                ConjugacyClass::CycleType { cycle_type, .. } => (cycle_type, i),
                ConjugacyClass::Singleton(_) => unreachable!("symmetric group classes are cycle types"),
            })
            .collect())
    }

    pub fn value_at(&self, g: &GroupElement) -> Result<u64> {
        self.group.validate(g)?;
        Ok(match (self.group, g) {
            (GroupSpec::Sym { .. }, GroupElement::Perm(p)) => self.values[self.sym_lookup()?[&cycle_type(p)]],
            (GroupSpec::CyclicPower { m, .. }, GroupElement::Vector(v)) => self.values[vector_rank(v, m)],
            _ => unreachable!("validated above"),
        })
    }

    /// Value on the identity, the diagonal of the adjacency matrix.
    pub fn identity_value(&self) -> u64 {
        match self.group {
            GroupSpec::Sym { .. } => *self.values.last().expect("S_m has an identity class"),
            GroupSpec::CyclicPower { .. } => self.values[0],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

fn canonical_label(group: &GroupSpec, label: &str) -> Result<String> {
    Ok(match *group {
        GroupSpec::Sym { .. } => label
            .parse::<Partition>()
            .map_err(|e| Error::invalid(format!("bad cycle type {label:?}: {e}")))?
            .to_string(),
        GroupSpec::CyclicPower { m, n } => crate::groups::vector_label(&parse_vector_label(label, m, n)?),
    })
}

/// Fixed points on `S_m`, zero coordinates on `(Z_m)^n`.
pub fn natural_weight(group: GroupSpec) -> Result<WeightFunction> {
    let values = group
        .conjugacy_classes()?
        .iter()
        .map(|c| match c {
            ConjugacyClass::CycleType { cycle_type, .. } => {
                cycle_type.parts().iter().filter(|&&x| x == 1).count() as u64
            }
            ConjugacyClass::Singleton(x) => zero_count(x) as u64,
        })
        .collect();
    Ok(WeightFunction { group, values })
}

/// `ω_k(g) = C(ω(g), k)`.
pub fn binomial_transform(w: &WeightFunction, k: u64) -> Result<WeightFunction> {
    let values = w
        .values
        .iter()
        .map(|&x| {
            u64::try_from(binomial(x, k))
                .map_err(|_| Error::TooLarge(format!("C({x}, {k}) does not fit in 64 bits")))
        })
        .collect::<Result<_>>()?;
    Ok(WeightFunction {
        group: w.group,
        values,
    })
}

/// The binomial weight `C(natural weight, k)`.
pub fn binomial_weight(group: GroupSpec, k: u64) -> Result<WeightFunction> {
    binomial_transform(&natural_weight(group)?, k)
}

/// `d(G, ω) = Σ_g ω(g)`, the common row sum.
pub fn weighted_degree(w: &WeightFunction) -> Result<u128> {
    w.classes()?
        .iter()
        .zip(&w.values)
        .try_fold(0u128, |acc, (c, &v)| {
            c.size()
                .checked_mul(v as u128)
                .and_then(|x| acc.checked_add(x))
                .ok_or_else(|| Error::TooLarge("weighted degree overflows 128 bits".into()))
        })
}

/// Dense adjacency matrix of a weighted normal Cayley graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    pub group: GroupSpec,
    size: usize,
    data: Vec<i64>,
}

/// Index of `h·g⁻¹` for all element indices, evaluated lazily per row.
struct QuotientIndexer {
    group: GroupSpec,
    perms: Vec<Vec<usize>>,
    inverses: Vec<Vec<usize>>,
}

impl QuotientIndexer {
    fn new(group: GroupSpec) -> Result<Self> {
        group.checked_size()?;
        let (perms, inverses) = match group {
            GroupSpec::Sym { m } => {
                let perms = permutations_lex(m);
                let inverses = perms.iter().map(|p| invert_perm(p)).collect();
                (perms, inverses)
            }
            GroupSpec::CyclicPower { .. } => (vec![], vec![]),
        };
        Ok(QuotientIndexer { group, perms, inverses })
    }

    fn row(&self, g: usize, out: &mut Vec<usize>) {
        out.clear();
        match self.group {
            GroupSpec::Sym { .. } => {
                let ginv = &self.inverses[g];
                out.extend(self.perms.iter().map(|h| perm_rank(&compose_perm(h, ginv))));
            }
            GroupSpec::CyclicPower { m, n } => {
                let gv = vector_unrank(g, m, n);
                let size = m.pow(n as u32);
                out.extend((0..size).map(|h| {
                    let hv = vector_unrank(h, m, n);
                    let diff: Vec<usize> = hv.iter().zip(&gv).map(|(a, b)| (a + m - b) % m).collect();
                    vector_rank(&diff, m)
                }));
            }
        }
    }
}

/// Builds `A[g][h] = ω(h·g⁻¹)`.
pub fn adjacency_matrix(w: &WeightFunction) -> Result<AdjacencyMatrix> {
    let weights = w.element_weights()?;
    let size = weights.len();
    let indexer = QuotientIndexer::new(w.group)?;
    let mut data = Vec::with_capacity(size * size);
    let mut row = Vec::with_capacity(size);
    for g in 0..size {
        indexer.row(g, &mut row);
        data.extend(row.iter().map(|&q| {
            i64::try_from(weights[q]).expect("weights are bounded by binomials of small naturals")
        }));
    }
    let a = AdjacencyMatrix { group: w.group, size, data };
    if !a.is_symmetric() {
        return Err(Error::invalid("weight is not invariant under inversion"));
    }
    Ok(a)
}

impl AdjacencyMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, g: usize, h: usize) -> i64 {
        self.data[g * self.size + h]
    }

    pub fn row(&self, g: usize) -> &[i64] {
        &self.data[g * self.size..(g + 1) * self.size]
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix::from_fn(self.size, self.size, |i, j| Rat::from_integer(self.get(i, j).into()))
    }

    pub fn to_int(&self) -> IntMatrix {
        IntMatrix::from_small(self.size, self.size, self.data.clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// The common row sum, if every row has the same sum.
    pub fn row_sum(&self) -> Option<i128> {
        let sums: Vec<i128> = (0..self.size)
            .map(|g| self.row(g).iter().map(|&x| x as i128).sum())
            .collect();
        sums.windows(2).all(|w| w[0] == w[1]).then(|| sums.first().copied().unwrap_or(0))
    }

    pub fn trace(&self) -> i128 {
        (0..self.size).map(|i| self.get(i, i) as i128).sum()
    }

    /// `A[g][h] = A[id][h·g⁻¹]` for all `g, h`: the matrix lies in the image of the group algebra.
    pub fn is_group_circulant(&self) -> Result<bool> {
        let indexer = QuotientIndexer::new(self.group)?;
        let id_row = self.row(self.identity_index()).to_vec();
        let mut q = Vec::with_capacity(self.size);
        for g in 0..self.size {
            indexer.row(g, &mut q);
            if self.row(g).iter().zip(&q).any(|(&a, &qi)| a != id_row[qi]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Relabelling vertices by right multiplication with `s` leaves the matrix unchanged.
    pub fn right_translation_invariant(&self, s: &GroupElement) -> Result<bool> {
        let elems = self.group.elements()?;
        let moved: Vec<usize> = elems
            .iter()
            .map(|g| self.group.index_of(&self.group.compose(g, s)?))
            .collect::<Result<_>>()?;
        Ok((0..self.size).all(|g| (0..self.size).all(|h| self.get(moved[g], moved[h]) == self.get(g, h))))
    }
}

/// Fixed points of `h·g⁻¹` equal the number of positions where `g` and `h` agree.
pub fn agreement_count(g: &[usize], h: &[usize]) -> usize {
    g.iter().zip(h).filter(|(a, b)| a == b).count()
}

pub fn parse_weight_file(text: &str) -> Result<WeightFunction> {
    let mut group = None;
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if group.is_none() {
            let parse_num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(line_no, format!("expected a positive integer, got {s:?}")))
            };
            group = Some(match fields.as_slice() {
                ["group", "sym", m] => GroupSpec::sym(parse_num(m)?)?,
                ["group", "cyclic", m, n] => GroupSpec::cyclic_power(parse_num(m)?, parse_num(n)?)?,
                _ => {
                    return Err(Error::parse(
                        line_no,
                        "expected header `group sym M` or `group cyclic M N`",
                    ))
                }
            });
            continue;
        }
        match fields.as_slice() {
            [label, value] => {
                let v = value
                    .parse::<u64>()
                    .map_err(|_| Error::parse(line_no, format!("weight {value:?} is not a natural number")))?;
                entries.push((label.to_string(), v));
            }
            _ => return Err(Error::parse(line_no, "expected `LABEL VALUE`")),
        }
    }
    let group = group.ok_or_else(|| Error::parse(1, "missing group header"))?;
    WeightFunction::from_labels(group, &entries)
}

pub fn format_weight_file(w: &WeightFunction) -> Result<String> {
    let mut out = match w.group {
        GroupSpec::Sym { m } => format!("group sym {m}\n"),
        GroupSpec::CyclicPower { m, n } => format!("group cyclic {m} {n}\n"),
    };
    for (class, v) in w.classes()?.iter().zip(&w.values) {
        out.push_str(&format!("{} {v}\n", class.label()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_custom() -> WeightFunction {
        parse_weight_file("group cyclic 4 1\n0 4\n1 7\n2 9\n3 7\n").unwrap()
    }

    #[test]
    fn natural_weights() {
        let s5 = natural_weight(GroupSpec::sym(5).unwrap()).unwrap();
        assert_eq!(s5.value_at(&GroupElement::Perm(vec![1, 2, 3, 4, 5])).unwrap(), 5);
        let s3 = natural_weight(GroupSpec::sym(3).unwrap()).unwrap();
        assert_eq!(s3.value_at(&GroupElement::Perm(vec![2, 3, 1])).unwrap(), 0);
        let z = natural_weight(GroupSpec::cyclic_power(2, 3).unwrap()).unwrap();
        assert_eq!(z.value_at(&GroupElement::Vector(vec![1, 0, 1])).unwrap(), 1);
    }

    #[test]
    fn binomial_weights() {
        let w = natural_weight(GroupSpec::sym(4).unwrap()).unwrap();
        assert_eq!(binomial_transform(&w, 1).unwrap(), w);
        assert!(binomial_transform(&w, 0).unwrap().values.iter().all(|&v| v == 1));
        let four = WeightFunction::new(GroupSpec::cyclic_power(1, 1).unwrap(), vec![4]).unwrap();
        assert_eq!(binomial_transform(&four, 2).unwrap().values, vec![6]);
        assert_eq!(binomial_transform(&w, 3).unwrap().values.iter().filter(|&&v| v > 0).count(), 1);
    }

    #[test]
    fn adjacency_examples() {
        let a = adjacency_matrix(&natural_weight(GroupSpec::cyclic_power(2, 1).unwrap()).unwrap()).unwrap();
        assert_eq!(a.data(), &[1, 0, 0, 1]);
        let z4 = adjacency_matrix(&z4_custom()).unwrap();
        assert_eq!(z4.row(0), &[4, 7, 9, 7]);
        let a22 = adjacency_matrix(&natural_weight(GroupSpec::cyclic_power(2, 2).unwrap()).unwrap()).unwrap();
        assert_eq!(a22.row(0), &[2, 1, 1, 0]);
    }

    #[test]
    fn degrees() {
        let g = GroupSpec::sym(5).unwrap();
        assert_eq!(weighted_degree(&binomial_weight(g, 2).unwrap()).unwrap(), 60);
        assert_eq!(weighted_degree(&binomial_weight(g, 0).unwrap()).unwrap(), 120);
        let z = GroupSpec::cyclic_power(2, 3).unwrap();
        assert_eq!(weighted_degree(&binomial_weight(z, 1).unwrap()).unwrap(), 12);
        let a = adjacency_matrix(&binomial_weight(g, 2).unwrap()).unwrap();
        assert_eq!(a.row_sum(), Some(60));
    }

    #[test]
    fn sym_entries_are_agreements() {
        let g = GroupSpec::sym(4).unwrap();
        let a = adjacency_matrix(&natural_weight(g).unwrap()).unwrap();
        let perms = permutations_lex(4);
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                assert_eq!(a.get(i, j), agreement_count(p, q) as i64);
            }
        }
        assert!(a.is_group_circulant().unwrap());
    }

    #[test]
    fn rejects_bad_weights() {
        let z4 = GroupSpec::cyclic_power(4, 1).unwrap();
        assert!(WeightFunction::new(z4, vec![4, 7, 9, 8]).is_err());
        assert!(parse_weight_file("group cyclic 4 1\n0 4\n1 7\n2 9\n").is_err());
        assert!(parse_weight_file("group cyclic 4 1\n0 4\n1 7\n2 9\n3 7\n3 7\n").is_err());
        assert!(parse_weight_file("group cyclic 4 1\n0 -4\n1 7\n2 9\n3 7\n").is_err());
        assert!(parse_weight_file("0 4\n").is_err());
    }

    #[test]
    fn weight_file_round_trip() {
        let w = binomial_weight(GroupSpec::sym(4).unwrap(), 2).unwrap();
        let text = format_weight_file(&w).unwrap();
        assert_eq!(parse_weight_file(&text).unwrap(), w);
        let parsed = parse_weight_file("group sym 3\n1,1,1 3\n(2,1) 1\n3 0\n").unwrap();
        assert_eq!(parsed, natural_weight(GroupSpec::sym(3).unwrap()).unwrap());
        assert_eq!(format_weight_file(&z4_custom()).unwrap(), "group cyclic 4 1\n0 4\n1 7\n2 9\n3 7\n");
    }

    #[test]
    fn translation_invariance() {
        let g = GroupSpec::sym(3).unwrap();
        let a = adjacency_matrix(&natural_weight(g).unwrap()).unwrap();
        for s in g.elements().unwrap() {
            assert!(a.right_translation_invariant(&s).unwrap());
        }
    }
}
