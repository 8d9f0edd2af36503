//! Robinson–Schensted insertion for permutations and longest increasing subsequences.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{is_permutation, next_permutation};
use crate::partitions::Partition;

/// Largest `m` for which [`count_by_lis`] enumerates `S_m`.
pub const MAX_LIS_ENUMERATION: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardTableau {
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    /// Validates rows increasing, columns increasing and entries exactly `1..=m`.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let t = StandardTableau { rows };
        Partition::new(t.rows.iter().map(Vec::len).collect())
            .map_err(|e| Error::invalid(format!("tableau rows do not form a partition: {e}")))?;
        let mut entries: Vec<usize> = t.rows.iter().flatten().copied().collect();
        entries.sort_unstable();
        if entries.iter().enumerate().any(|(i, &v)| v != i + 1) {
            return Err(Error::invalid("tableau entries must be exactly 1..=m"));
        }
        for (r, row) in t.rows.iter().enumerate() {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!("row {r} is not increasing")));
            }
            if r > 0 && row.iter().zip(&t.rows[r - 1]).any(|(below, above)| below <= above) {
                return Err(Error::invalid(format!("a column is not increasing at row {r}")));
            }
        }
        Ok(t)
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::from_unsorted(self.rows.iter().map(Vec::len).collect())
    }
}

/// Insertion tableau `P` and recording tableau `Q` of a permutation.
pub fn rsk(perm: &[usize]) -> Result<(StandardTableau, StandardTableau)> {
    if !is_permutation(perm) {
        return Err(Error::invalid(format!("{perm:?} is not a permutation of 1..={}", perm.len())));
    }
    let mut p: Vec<Vec<usize>> = Vec::new();
    let mut q: Vec<Vec<usize>> = Vec::new();
    for (step, &value) in perm.iter().enumerate() {
        let mut carry = value;
        let mut row = 0;
        loop {
            if row == p.len() {
                p.push(vec![carry]);
                q.push(vec![step + 1]);
                break;
            }
            let pos = p[row].partition_point(|&x| x < carry);
            if pos == p[row].len() {
                p[row].push(carry);
                q[row].push(step + 1);
                break;
            }
            carry = std::mem::replace(&mut p[row][pos], carry);
            row += 1;
        }
    }
    Ok((StandardTableau { rows: p }, StandardTableau { rows: q }))
}

/// Longest increasing subsequence by patience sorting.
pub fn lis(seq: &[usize]) -> usize {
    let mut tops: Vec<usize> = Vec::new();
    for &x in seq {
        let pos = tops.partition_point(|&t| t < x);
        if pos == tops.len() {
            tops.push(x);
        } else {
            tops[pos] = x;
        }
    }
    tops.len()
}

/// Histogram `h[t] = |{σ ∈ S_m : lis(σ) = t}|` for `t = 0..=m`.
pub fn lis_histogram(m: usize) -> Result<Vec<u64>> {
    if m > MAX_LIS_ENUMERATION {
        return Err(Error::TooLarge(format!(
            "counting by enumeration is limited to m ≤ {MAX_LIS_ENUMERATION}, got {m}"
        )));
    }
    let mut hist = vec![0u64; m + 1];
    let mut perm: Vec<usize> = (1..=m).collect();
    loop {
        hist[lis(&perm)] += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(hist)
}

/// `|{σ ∈ S_m : lis(σ) = t}|` by exhaustive enumeration.
pub fn count_by_lis(m: usize, t: usize) -> Result<u64> {
    if t > m {
        return Err(Error::invalid(format!("lis value {t} exceeds m = {m}")));
    }
    Ok(lis_histogram(m)?[t])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::permutations_lex;
    use crate::partitions::{enumerate_partitions, syt_count};
    use std::collections::HashSet;

    fn brute_lis(seq: &[usize]) -> usize {
        (0u32..1 << seq.len())
            .filter(|mask| {
                let picked: Vec<usize> = (0..seq.len()).filter(|i| mask >> i & 1 == 1).map(|i| seq[i]).collect();
                picked.windows(2).all(|w| w[0] < w[1])
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn insertion_examples() {
        let (p, q) = rsk(&[1, 2, 3, 4]).unwrap();
        assert_eq!(p.rows(), &[vec![1, 2, 3, 4]]);
        assert_eq!(p, q);
        let (p, q) = rsk(&[4, 3, 2, 1]).unwrap();
        assert_eq!(p.shape(), Partition::single_column(4));
        assert_eq!(p, q);
        let (p, q) = rsk(&[2, 4, 1, 3, 5]).unwrap();
        assert_eq!(p.shape().parts(), &[3, 2]);
        assert_eq!(q.shape(), p.shape());
        assert_eq!(p.rows(), &[vec![1, 3, 5], vec![2, 4]]);
        StandardTableau::new(p.rows().to_vec()).unwrap();
        StandardTableau::new(q.rows().to_vec()).unwrap();
        assert!(rsk(&[1, 1]).is_err());
    }

    #[test]
    fn lis_examples() {
        assert_eq!(lis(&[1, 2, 3, 4, 5]), 5);
        assert_eq!(lis(&[5, 4, 3, 2, 1]), 1);
        assert_eq!(lis(&[2, 4, 1, 3, 5]), 3);
        assert_eq!(brute_lis(&[2, 4, 1, 3, 5]), 3);
    }

    #[test]
    fn lis_counts() {
        assert_eq!(lis_histogram(3).unwrap(), vec![0, 1, 4, 1]);
        let h5 = lis_histogram(5).unwrap();
        assert_eq!(h5[1] + h5[2], 42);
        assert_eq!(count_by_lis(6, 6).unwrap(), 1);
        assert!(count_by_lis(9, 3).is_err());
    }

    #[test]
    fn first_row_is_lis_and_rsk_is_injective() {
        for m in 1..=6 {
            let mut seen = HashSet::new();
            for perm in permutations_lex(m) {
                let (p, q) = rsk(&perm).unwrap();
                assert_eq!(p.shape().first_row(), lis(&perm));
                assert_eq!(lis(&perm), brute_lis(&perm));
                assert!(seen.insert((p, q)));
            }
        }
    }

    #[test]
    fn counts_match_squared_tableaux() {
        for m in 1..=7 {
            let hist = lis_histogram(m).unwrap();
            for (t, &count) in hist.iter().enumerate() {
                let expected: u128 = enumerate_partitions(m)
                    .iter()
                    .filter(|mu| mu.first_row() == t)
                    .map(|mu| syt_count(mu).pow(2))
                    .sum();
                assert_eq!(count as u128, expected, "m={m} t={t}");
            }
        }
    }
}
