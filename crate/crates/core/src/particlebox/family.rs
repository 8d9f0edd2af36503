//! Marginal families and their pairwise compatibility.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::{subsets, RowIndexer, RowKey, SystemSpec};
use crate::error::{Error, Result};
use crate::rational::{format_rat, serde_rat, Rat};

/// Values of a candidate `k`-marginal family, one per row key in row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalFamily {
    pub spec: SystemSpec,
    pub values: Vec<Rat>,
}

impl MarginalFamily {
    pub fn new(spec: SystemSpec, values: Vec<Rat>) -> Result<Self> {
        if values.len() != spec.row_count() {
            return Err(Error::DimensionMismatch(format!(
                "family has {} values, {spec} has {} keys",
                values.len(),
                spec.row_count()
            )));
        }
        Ok(MarginalFamily { spec, values })
    }

    /// Builds a family from keyed values; every key must appear exactly once.
    pub fn from_entries(spec: SystemSpec, entries: impl IntoIterator<Item = (RowKey, Rat)>) -> Result<Self> {
        let idx = spec.row_indexer();
        let mut values: Vec<Option<Rat>> = vec![None; spec.row_count()];
        for (key, value) in entries {
            let row = idx
                .key_row(&key)
                .ok_or_else(|| Error::invalid(format!("key {key} does not belong to {spec}")))?;
            if values[row].replace(value).is_some() {
                return Err(Error::invalid(format!("key {key} appears twice")));
            }
        }
        let keys = spec.row_keys();
        let missing: Vec<String> = values
            .iter()
            .zip(&keys)
            .filter(|(v, _)| v.is_none())
            .map(|(_, k)| k.to_string())
            .collect();
        if !missing.is_empty() {
            let shown = missing.iter().take(5).cloned().collect::<Vec<_>>().join(", ");
            return Err(Error::invalid(format!("family is missing {} keys: {shown}", missing.len())));
        }
        Self::new(spec, values.into_iter().map(Option::unwrap).collect())
    }

    pub fn keys(&self) -> Vec<RowKey> {
        self.spec.row_keys()
    }

    pub fn get(&self, key: &RowKey) -> Option<&Rat> {
        self.spec.row_indexer().key_row(key).map(|r| &self.values[r])
    }

    pub fn entries(&self) -> Vec<(RowKey, Rat)> {
        self.keys().into_iter().zip(self.values.iter().cloned()).collect()
    }

    /// Total of each particle tuple's slice.
    pub fn slice_totals(&self) -> Vec<Rat> {
        let per = self.spec.box_tuples().len();
        if per == 0 {
            return vec![Rat::zero(); subsets(self.spec.n, self.spec.k).len()];
        }
        self.values.chunks(per).map(|c| c.iter().sum()).collect()
    }
}

/// Two supersets that induce different marginals on a common sub-tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub particles: Vec<usize>,
    pub boxes: Vec<usize>,
    pub first_superset: Vec<usize>,
    pub second_superset: Vec<usize>,
    #[serde(with = "serde_rat")]
    pub first_value: Rat,
    #[serde(with = "serde_rat")]
    pub second_value: Rat,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "particles {:?} in boxes {:?}: {} via {:?} but {} via {:?}",
            self.particles,
            self.boxes,
            format_rat(&self.first_value),
            self.first_superset,
            format_rat(&self.second_value),
            self.second_superset
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityVerdict {
    pub compatible: bool,
    pub violation: Option<Violation>,
}

/// Marginal on `sub` (positions inside `subset`) induced by one slice of the family.
fn induced(
    fam: &MarginalFamily,
    idx: &RowIndexer,
    subset_idx: usize,
    positions: &[usize],
) -> BTreeMap<Vec<usize>, Rat> {
    let mut out = BTreeMap::new();
    let tuples = fam.spec.box_tuples();
    for (b, j) in tuples.iter().enumerate() {
        let v = &fam.values[subset_idx * idx.per_subset + b];
        let key: Vec<usize> = positions.iter().map(|&p| j[p]).collect();
        *out.entry(key).or_insert_with(Rat::zero) += v;
    }
    out
}

/// Checks that every pair of particle tuples agrees on the marginals of their
/// common sub-tuples of every size below `k`, including the empty tuple (equal totals).
pub fn compatibility_check(fam: &MarginalFamily) -> Result<CompatibilityVerdict> {
    let s = fam.spec;
    let idx = s.row_indexer();
    for size in 0..s.k {
        for sub in subsets(s.n, size) {
            let mut first: Option<(Vec<usize>, BTreeMap<Vec<usize>, Rat>)> = None;
            for (si, sup) in idx.subsets.iter().enumerate() {
                if !sub.iter().all(|p| sup.contains(p)) {
                    continue;
                }
                let positions: Vec<usize> = sub.iter().map(|p| sup.iter().position(|q| q == p).unwrap()).collect();
                let marg = induced(fam, &idx, si, &positions);
                match &first {
                    None => first = Some((sup.clone(), marg)),
                    Some((first_sup, first_marg)) => {
                        let zero = Rat::zero();
                        let boxes: Vec<&Vec<usize>> = first_marg.keys().chain(marg.keys()).collect();
                        let mut boxes = boxes;
                        boxes.sort();
                        boxes.dedup();
                        for j in boxes {
                            let a = first_marg.get(j).unwrap_or(&zero);
                            let b = marg.get(j).unwrap_or(&zero);
                            if a != b {
                                return Ok(CompatibilityVerdict {
                                    compatible: false,
                                    violation: Some(Violation {
                                        particles: sub.clone(),
                                        boxes: j.clone(),
                                        first_superset: first_sup.clone(),
                                        second_superset: sup.clone(),
                                        first_value: a.clone(),
                                        second_value: b.clone(),
                                    }),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(CompatibilityVerdict {
        compatible: true,
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::particlebox::{restrict, Distribution, Sigma};
    use crate::rational::{int, rat};

    #[test]
    fn restrictions_are_compatible() {
        for s in [
            SystemSpec::new(3, 2, 2, Sigma::All).unwrap(),
            SystemSpec::new(4, 4, 3, Sigma::Bij).unwrap(),
        ] {
            let n = s.arrangement_count();
            let p: Vec<Rat> = (1..=n as i64).map(|i| rat(2 * i, (n * (n + 1)) as i64)).collect();
            let fam = restrict(&s, &Distribution::new(p).unwrap().as_signed()).unwrap();
            assert!(compatibility_check(&fam).unwrap().compatible);
            assert!(fam.slice_totals().iter().all(|t| *t == int(1)));
        }
    }

    #[test]
    fn detects_disagreement() {
        let s = SystemSpec::new(3, 2, 2, Sigma::All).unwrap();
        let mut fam = restrict(&s, &Distribution::uniform(&s).as_signed()).unwrap();
        fam.values[0] = rat(1, 2);
        fam.values[1] = rat(0, 1);
        let v = compatibility_check(&fam).unwrap();
        assert!(!v.compatible);
        let v = v.violation.unwrap();
        assert_eq!(v.particles, vec![2]);
        assert_eq!(v.first_superset, vec![1, 2]);
        assert_eq!((v.first_value, v.second_value), (rat(3, 4), rat(1, 2)));
    }

    #[test]
    fn unequal_totals() {
        let s = SystemSpec::new(2, 2, 1, Sigma::All).unwrap();
        let fam = MarginalFamily::new(s, vec![int(1), int(0), int(1), int(1)]).unwrap();
        let v = compatibility_check(&fam).unwrap().violation.unwrap();
        assert!(v.particles.is_empty());
    }

    #[test]
    fn entries_must_cover_keys() {
        let s = SystemSpec::new(2, 2, 1, Sigma::All).unwrap();
        let mut entries = MarginalFamily::new(s, vec![rat(1, 2); 4]).unwrap().entries();
        assert!(MarginalFamily::from_entries(s, entries.clone()).is_ok());
        entries.pop();
        assert!(MarginalFamily::from_entries(s, entries.clone()).is_err());
        entries.push(("i=(1);j=(0)".parse().unwrap(), int(0)));
        assert!(MarginalFamily::from_entries(s, entries).is_err());
    }
}
