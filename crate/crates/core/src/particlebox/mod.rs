//! Particle-box systems.
//!
//! `n` particles are placed in `m` boxes by an arrangement `f`, drawn from a
//! distribution `p` over either all maps (`Sigma::All`, `m^n` arrangements)
//! or bijections (`Sigma::Bij`, `n = m`, `m!` arrangements). Observing `k`
//! particles at a time yields the `k`-th restriction of `p`: for every
//! increasing particle tuple `i` and box tuple `j`, the probability that
//! `f(i) = j`. The restriction is linear, `p ↦ M^k·p`, and its Gram matrix
//! is the adjacency matrix of a binomial Cayley graph.
//!
//! Orderings: particles are 1-based and boxes 0-based. Arrangements follow
//! the group element order (vectors of boxes lexicographically for `All`,
//! permutations lexicographically for `Bij`, box of particle `i` being
//! `σ(i) − 1`). Rows are particle tuples lexicographically, then box tuples
//! lexicographically; for `Bij` box tuples with a repeated box are omitted.

pub mod family;
pub mod files;
pub mod observe;
pub mod simulate;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cayley::{adjacency_matrix, binomial_weight};
use crate::error::{Error, Result};
use crate::exactla::RatMatrix;
use crate::groups::{permutations_lex, vectors_lex, GroupSpec, MAX_ELEMENTS};
use crate::rational::{binomial, format_rat, Rat};

pub use family::{compatibility_check, CompatibilityVerdict, MarginalFamily, Violation};
pub use observe::{degeneracy, fiber_segment, observability_check, DegeneracyReport, FiberSegment, Observability};
pub use simulate::simulate_game;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sigma {
    All,
    Bij,
}

impl FromStr for Sigma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Sigma::All),
            "bij" => Ok(Sigma::Bij),
            _ => Err(Error::invalid(format!("sigma must be `all` or `bij`, got {s:?}"))),
        }
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sigma::All => "all",
            Sigma::Bij => "bij",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemSpec {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub sigma: Sigma,
}

/// A row of the restriction matrix: particles `i` (1-based, increasing) land in boxes `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowKey {
    pub particles: Vec<usize>,
    pub boxes: Vec<usize>,
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "i=({});j=({})", join(&self.particles), join(&self.boxes))
    }
}

impl FromStr for RowKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("expected a key like i=(1,3);j=(0,2), got {s:?}"));
        let (i, j) = s.trim().split_once(';').ok_or_else(bad)?;
        let tuple = |part: &str, prefix: &str| -> Result<Vec<usize>> {
            let inner = part
                .trim()
                .strip_prefix(prefix)
                .and_then(|r| r.trim().strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(bad)?;
            if inner.trim().is_empty() {
                return Ok(vec![]);
            }
            inner.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect()
        };
        Ok(RowKey {
            particles: tuple(i, "i=")?,
            boxes: tuple(j, "j=")?,
        })
    }
}

/// Increasing `k`-subsets of `1..=n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            if n - x + 1 < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(1, n, k, &mut Vec::new(), &mut out);
    }
    out
}

fn has_repeat(v: &[usize]) -> bool {
    v.iter().enumerate().any(|(i, x)| v[..i].contains(x))
}

impl SystemSpec {
    pub fn new(n: usize, m: usize, k: usize, sigma: Sigma) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::invalid(format!("need n, m ≥ 1, got n={n}, m={m}")));
        }
        if k > n {
            return Err(Error::invalid(format!("observation size k={k} exceeds n={n}")));
        }
        if sigma == Sigma::Bij && n != m {
            return Err(Error::invalid(format!("bijective arrangements need n = m, got n={n}, m={m}")));
        }
        let s = SystemSpec { n, m, k, sigma };
        s.group().checked_size()?;
        Ok(s)
    }

    /// The same system observed at level `k`.
    pub fn at_level(&self, k: usize) -> Result<Self> {
        Self::new(self.n, self.m, k, self.sigma)
    }

    /// The group whose elements index the arrangements.
    pub fn group(&self) -> GroupSpec {
        match self.sigma {
            Sigma::All => GroupSpec::CyclicPower { m: self.m, n: self.n },
            Sigma::Bij => GroupSpec::Sym { m: self.m },
        }
    }

    pub fn arrangement_count(&self) -> usize {
        self.group().order() as usize
    }

    /// Box of each particle for every arrangement, in column order.
    pub fn arrangements(&self) -> Vec<Vec<usize>> {
        match self.sigma {
            Sigma::All => vectors_lex(self.m, self.n),
            Sigma::Bij => permutations_lex(self.m)
                .into_iter()
                .map(|p| p.into_iter().map(|x| x - 1).collect())
                .collect(),
        }
    }

    /// Box tuples admissible at this level.
    pub fn box_tuples(&self) -> Vec<Vec<usize>> {
        self.box_tuples_of_len(self.k)
    }

    fn box_tuples_of_len(&self, len: usize) -> Vec<Vec<usize>> {
        let all = vectors_lex(self.m, len);
        match self.sigma {
            Sigma::All => all,
            Sigma::Bij => all.into_iter().filter(|j| !has_repeat(j)).collect(),
        }
    }

    pub fn row_keys(&self) -> Vec<RowKey> {
        let boxes = self.box_tuples();
        subsets(self.n, self.k)
            .into_iter()
            .flat_map(|i| {
                boxes.iter().map(move |j| RowKey {
                    particles: i.clone(),
                    boxes: j.clone(),
                })
            })
            .collect()
    }

    pub fn row_count(&self) -> usize {
        let tuples = match self.sigma {
            Sigma::All => (self.m as u128).pow(self.k as u32),
            Sigma::Bij => (0..self.k).map(|i| (self.m - i) as u128).product(),
        };
        (binomial(self.n as u64, self.k as u64) * tuples) as usize
    }

    /// Text key of an arrangement: `0,1,1` for maps, one-line `2,1,3` for bijections.
    pub fn arrangement_key(&self, boxes: &[usize]) -> String {
        let shown: Vec<String> = match self.sigma {
            Sigma::All => boxes.iter().map(|b| b.to_string()).collect(),
            Sigma::Bij => boxes.iter().map(|b| (b + 1).to_string()).collect(),
        };
        shown.join(",")
    }

    pub fn parse_arrangement_key(&self, key: &str) -> Result<Vec<usize>> {
        let values = key
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| Error::invalid(format!("bad arrangement {key:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if values.len() != self.n {
            return Err(Error::invalid(format!("arrangement {key:?} should list {} particles", self.n)));
        }
        let boxes = match self.sigma {
            Sigma::All => values,
            Sigma::Bij => {
                if !crate::groups::is_permutation(&values) {
                    return Err(Error::invalid(format!("{key:?} is not a permutation of 1..={}", self.m)));
                }
                values.into_iter().map(|x| x - 1).collect()
            }
        };
        if boxes.iter().any(|&b| b >= self.m) {
            return Err(Error::invalid(format!("arrangement {key:?} uses a box outside 0..{}", self.m)));
        }
        Ok(boxes)
    }

    pub fn arrangement_index(&self, boxes: &[usize]) -> Result<usize> {
        self.group().index_of(&match self.sigma {
            Sigma::All => crate::groups::GroupElement::Vector(boxes.to_vec()),
            Sigma::Bij => crate::groups::GroupElement::Perm(boxes.iter().map(|b| b + 1).collect()),
        })
    }

    fn row_indexer(&self) -> RowIndexer {
        let subsets = subsets(self.n, self.k);
        let boxes = self.box_tuples();
        RowIndexer {
            subset_index: subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect(),
            box_index: boxes.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect(),
            per_subset: boxes.len(),
            subsets,
        }
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} m={} k={}", self.sigma, self.n, self.m, self.k)
    }
}

struct RowIndexer {
    subsets: Vec<Vec<usize>>,
    subset_index: HashMap<Vec<usize>, usize>,
    box_index: HashMap<Vec<usize>, usize>,
    per_subset: usize,
}

impl RowIndexer {
    fn row(&self, subset_idx: usize, boxes: &[usize]) -> Option<usize> {
        self.box_index.get(boxes).map(|b| subset_idx * self.per_subset + b)
    }

    fn key_row(&self, key: &RowKey) -> Option<usize> {
        self.row(*self.subset_index.get(&key.particles)?, &key.boxes)
    }
}

/// A 0/1 matrix stored by the column indices of its ones in each row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    pub rows: usize,
    pub cols: usize,
    pub support: Vec<Vec<usize>>,
}

impl BinaryMatrix {
    pub fn to_rat(&self) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.rows, self.cols);
        for (i, cols) in self.support.iter().enumerate() {
            for &j in cols {
                out.set(i, j, Rat::one());
            }
        }
        out
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.support[i].binary_search(&j).is_ok()
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        self.support
            .iter()
            .map(|cols| cols.iter().fold(Rat::zero(), |acc, &j| acc + &v[j]))
            .collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        let mut sums = vec![0; self.cols];
        self.support.iter().flatten().for_each(|&j| sums[j] += 1);
        sums
    }

    /// `MᵀM` as integers, by counting rows shared by each pair of columns.
    pub fn gram(&self) -> Vec<i64> {
        let n = self.cols;
        let mut g = vec![0i64; n * n];
        for cols in &self.support {
            for &a in cols {
                for &b in cols {
                    g[a * n + b] += 1;
                }
            }
        }
        g
    }
}

/// The restriction matrix `M^k`: rows are `(i, j)` keys, columns are arrangements.
pub fn restriction_matrix(s: &SystemSpec) -> Result<BinaryMatrix> {
    let idx = s.row_indexer();
    let mut support = vec![Vec::new(); s.row_count()];
    for (col, f) in s.arrangements().iter().enumerate() {
        for (si, subset) in idx.subsets.iter().enumerate() {
            let boxes: Vec<usize> = subset.iter().map(|&p| f[p - 1]).collect();
            let row = idx
                .row(si, &boxes)
                .ok_or_else(|| Error::internal(format!("arrangement {f:?} has no row for {subset:?}")))?;
            support[row].push(col);
        }
    }
    Ok(BinaryMatrix {
        rows: support.len(),
        cols: s.arrangement_count(),
        support,
    })
}

/// Exact rational vector over the arrangements, summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedMeasure {
    pub values: Vec<Rat>,
}

impl SignedMeasure {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        let total: Rat = values.iter().sum();
        if !total.is_one() {
            return Err(Error::invalid(format!("measure has total mass {}, expected 1", format_rat(&total))));
        }
        Ok(SignedMeasure { values })
    }
}

/// A probability distribution over the arrangements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    pub values: Vec<Rat>,
}

impl Distribution {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        if let Some(x) = values.iter().find(|x| x.is_negative()) {
            return Err(Error::invalid(format!("negative probability {}", format_rat(x))));
        }
        SignedMeasure::new(values.clone())?;
        Ok(Distribution { values })
    }

    pub fn uniform(s: &SystemSpec) -> Self {
        let n = s.arrangement_count();
        Distribution {
            values: vec![Rat::new(1.into(), (n as i64).into()); n],
        }
    }

    /// Point mass on the arrangement at column `index`.
    pub fn atom(s: &SystemSpec, index: usize) -> Result<Self> {
        let n = s.arrangement_count();
        if index >= n {
            return Err(Error::invalid(format!("arrangement index {index} out of range 0..{n}")));
        }
        let mut values = vec![Rat::zero(); n];
        values[index] = Rat::one();
        Ok(Distribution { values })
    }

    pub fn is_interior(&self) -> bool {
        self.values.iter().all(Signed::is_positive)
    }

    pub fn as_signed(&self) -> SignedMeasure {
        SignedMeasure {
            values: self.values.clone(),
        }
    }
}

/// The family of `k`-marginals, `M^k·p`.
pub fn restrict(s: &SystemSpec, p: &SignedMeasure) -> Result<MarginalFamily> {
    if p.values.len() != s.arrangement_count() {
        return Err(Error::DimensionMismatch(format!(
            "measure has {} entries, system has {} arrangements",
            p.values.len(),
            s.arrangement_count()
        )));
    }
    let m = restriction_matrix(s)?;
    MarginalFamily::new(*s, m.mul_vec(&p.values))
}

/// `(M^k)ᵀ·M^k`, checked entrywise against the binomial Cayley adjacency matrix.
pub fn gram_matrix(s: &SystemSpec) -> Result<RatMatrix> {
    let m = restriction_matrix(s)?;
    let gram = m.gram();
    let adjacency = adjacency_matrix(&binomial_weight(s.group(), s.k as u64)?)?;
    if adjacency.data() != gram.as_slice() {
        return Err(Error::internal(format!(
            "Gram matrix of the restriction for {s} differs from the binomial adjacency matrix"
        )));
    }
    Ok(adjacency.to_rat())
}

/// The matrix `P` with `M^k = P·M^{k+1}`.
pub fn projection_matrix(s: &SystemSpec, k: usize) -> Result<RatMatrix> {
    let (lower, upper) = projection_levels(s, k)?;
    let scale = Rat::new(1.into(), ((s.n - k) as i64).into());
    let support = projection_support(&lower, &upper);
    let mut out = RatMatrix::zeros(lower.row_count(), upper.row_count());
    for (i, cols) in support.iter().enumerate() {
        for &j in cols {
            out.set(i, j, scale.clone());
        }
    }
    let lhs = restriction_matrix(&lower)?;
    let rhs = restriction_matrix(&upper)?;
    // (n − k)·M^k must equal the 0/1 pattern of P times M^{k+1}
    let factor = (s.n - k) as i64;
    for (i, cols) in support.iter().enumerate() {
        let mut row = vec![0i64; rhs.cols];
        for &j in cols {
            for &c in &rhs.support[j] {
                row[c] += 1;
            }
        }
        let mut expected = vec![0i64; lhs.cols];
        for &c in &lhs.support[i] {
            expected[c] = factor;
        }
        if row != expected {
            return Err(Error::internal(format!("projection identity fails at row {i} for level {k} of {s}")));
        }
    }
    Ok(out)
}

fn projection_levels(s: &SystemSpec, k: usize) -> Result<(SystemSpec, SystemSpec)> {
    if k + 1 > s.n {
        return Err(Error::invalid(format!(
            "projection from level {} to {k} needs k + 1 ≤ {}",
            k + 1,
            s.n
        )));
    }
    Ok((s.at_level(k)?, s.at_level(k + 1)?))
}

fn projection_support(lower: &SystemSpec, upper: &SystemSpec) -> Vec<Vec<usize>> {
    let lower_idx = lower.row_indexer();
    let mut support = vec![Vec::new(); lower.row_count()];
    for (ui, key) in upper.row_keys().iter().enumerate() {
        for drop in 0..key.particles.len() {
            let mut sub = key.clone();
            sub.particles.remove(drop);
            sub.boxes.remove(drop);
            if let Some(li) = lower_idx.key_row(&sub) {
                support[li].push(ui);
            }
        }
    }
    support.iter_mut().for_each(|v| v.sort_unstable());
    support
}

/// Refuses systems too large to materialize.
pub fn check_size(s: &SystemSpec) -> Result<()> {
    if s.arrangement_count() > MAX_ELEMENTS {
        return Err(Error::TooLarge(format!("{s} has {} arrangements", s.arrangement_count())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{kernel_basis, rank};
    use crate::rational::{int, rat};

    fn all(n: usize, m: usize, k: usize) -> SystemSpec {
        SystemSpec::new(n, m, k, Sigma::All).unwrap()
    }

    #[test]
    fn two_particles_two_boxes() {
        let m = restriction_matrix(&all(2, 2, 1)).unwrap().to_rat();
        let expected = RatMatrix::from_i64_rows(&[
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 1],
            vec![1, 0, 1, 0],
            vec![0, 1, 0, 1],
        ])
        .unwrap();
        assert_eq!(m, expected);
        assert_eq!(kernel_basis(&m), vec![vec![int(1), int(-1), int(-1), int(1)]]);
    }

    #[test]
    fn three_particles_pairs() {
        let s = all(3, 2, 2);
        let m = restriction_matrix(&s).unwrap();
        assert_eq!((m.rows, m.cols), (12, 8));
        assert!(m.column_sums().iter().all(|&c| c == 3));
        assert_eq!(rank(&m.to_rat()), 7);
        assert_eq!(s.row_keys()[5].to_string(), "i=(1,3);j=(0,1)");
    }

    #[test]
    fn keys_round_trip() {
        let key: RowKey = "i=(1,3);j=(0,2)".parse().unwrap();
        assert_eq!(key.particles, vec![1, 3]);
        assert_eq!(key.to_string().parse::<RowKey>().unwrap(), key);
        assert!("i=1,3;j=(0,2)".parse::<RowKey>().is_err());
    }

    #[test]
    fn bij_rows_skip_repeats() {
        let s = SystemSpec::new(3, 3, 2, Sigma::Bij).unwrap();
        assert_eq!(s.row_count(), 3 * 6);
        assert_eq!(s.row_keys().len(), 18);
        let m = restriction_matrix(&s).unwrap();
        assert!(m.column_sums().iter().all(|&c| c == 3));
        assert_eq!(s.arrangements()[1], vec![0, 2, 1]);
        assert_eq!(s.arrangement_key(&[0, 2, 1]), "1,3,2");
        assert!(SystemSpec::new(3, 2, 1, Sigma::Bij).is_err());
    }

    #[test]
    fn marginals_of_simple_measures() {
        let s = all(3, 2, 2);
        let f = restrict(&s, &Distribution::uniform(&s).as_signed()).unwrap();
        assert!(f.values.iter().all(|v| *v == rat(1, 4)));
        let atom = Distribution::atom(&s, 3).unwrap();
        let fam = restrict(&s, &atom.as_signed()).unwrap();
        // arrangement 3 is (0,1,1)
        assert_eq!(fam.get(&"i=(1,2);j=(0,1)".parse().unwrap()).unwrap(), &int(1));
        assert_eq!(fam.get(&"i=(2,3);j=(1,1)".parse().unwrap()).unwrap(), &int(1));
        assert_eq!(fam.get(&"i=(2,3);j=(0,1)".parse().unwrap()).unwrap(), &int(0));
    }

    #[test]
    fn gram_identity() {
        for s in [all(3, 2, 2), all(2, 3, 1), SystemSpec::new(4, 4, 2, Sigma::Bij).unwrap()] {
            let g = gram_matrix(&s).unwrap();
            let diag = binomial(s.n as u64, s.k as u64) as i64;
            assert!((0..g.rows()).all(|i| *g.get(i, i) == int(diag)));
        }
    }

    #[test]
    fn projections() {
        let s = all(3, 2, 2);
        let p = projection_matrix(&s, 1).unwrap();
        assert_eq!((p.rows(), p.cols()), (6, 12));
        let m1 = restriction_matrix(&s.at_level(1).unwrap()).unwrap().to_rat();
        let m2 = restriction_matrix(&s).unwrap().to_rat();
        assert_eq!(p.mul(&m2).unwrap(), m1);
        let b = SystemSpec::new(3, 3, 2, Sigma::Bij).unwrap();
        let pb = projection_matrix(&b, 1).unwrap();
        assert!(pb.entries().iter().all(|x| x.is_zero() || *x == rat(1, 2)));
        assert!(projection_matrix(&s, 3).is_err());
    }
}
