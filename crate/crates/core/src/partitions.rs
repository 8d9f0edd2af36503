//! Integer partitions, Young diagrams and the character theory of `S_m`.
//!
//! Irreducible characters of `S_m` are indexed by partitions `μ ⊢ m` and are
//! evaluated with the Murnaghan–Nakayama rule: strip a rim hook whose length
//! equals the largest remaining cycle, weight by `(-1)^height`, recurse.
//!
//! `crop(μ, k)` counts the ordered ways of removing `k` single corner cells
//! from the diagram of `μ` so that the single row `(m - k)` remains. It
//! drives the closed-form eigenvalues of the fixed-point Cayley graphs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::factorial;

/// Largest `m` for which counts are held in `u128` without overflow.
pub const MAX_WEIGHT: usize = 34;

/// Weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::invalid(format!("partition parts must be positive: {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zeros; any multiset of sizes is a valid cycle type.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The one-row partition `(m)`; empty when `m = 0`.
    pub fn single_row(m: usize) -> Self {
        if m == 0 {
            Partition::empty()
        } else {
            Partition(vec![m])
        }
    }

    /// The one-column partition `(1, …, 1)`.
    pub fn single_column(m: usize) -> Self {
        Partition(vec![1; m])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Length of the first row, zero for the empty partition.
    pub fn first_row(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn is_single_row(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn row(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.first_row();
        Partition((0..cols).map(|c| self.0.iter().filter(|&&r| r > c).count()).collect())
    }

    /// Cells `(row, col)` that can be removed leaving a valid diagram.
    pub fn corners(&self) -> Vec<(usize, usize)> {
        (0..self.0.len())
            .filter(|&i| self.row(i) > self.row(i + 1))
            .map(|i| (i, self.0[i] - 1))
            .collect()
    }

    fn without_corner_in_row(&self, row: usize) -> Partition {
        let mut parts = self.0.clone();
        parts[row] -= 1;
        if parts[row] == 0 {
            parts.pop();
        }
        Partition(parts)
    }

    /// Multiplicity of each part size, as `(size, count)` in decreasing size.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((s, c)) if *s == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Hook length `arm + leg + 1` of cell `(r, c)`.
    pub fn hook_length(&self, r: usize, c: usize) -> usize {
        let arm = self.0[r] - c - 1;
        let leg = self.0[r + 1..].iter().take_while(|&&x| x > c).count();
        arm + leg + 1
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parses the canonical label `"3,1,1"`; the empty string is the empty partition.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::invalid(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// All partitions of `m` in reverse-lexicographic order: `(m)` first, `(1^m)` last.
pub fn enumerate_partitions(m: usize) -> Vec<Partition> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

/// A connected skew strip on the south-east boundary of a Young diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RimHook {
    /// Cells `(row, col)`, zero-based, row by row from the top.
    pub cells: Vec<(usize, usize)>,
    pub length: usize,
    /// Rows spanned minus one.
    pub height: usize,
    /// Diagram left after removing the hook.
    pub remainder: Partition,
}

/// Every rim hook of `μ` with exactly `d` cells.
///
/// Rim hooks are in bijection with cells of hook length `d`: the hook at
/// `(r, c)` spans rows `r..=r+leg` and leaves `c` cells in its bottom row.
pub fn rim_hooks_of_length(mu: &Partition, d: usize) -> Vec<RimHook> {
    let mut hooks = Vec::new();
    if d == 0 {
        return hooks;
    }
    for r in 0..mu.len() {
        for c in 0..mu.0[r] {
            if mu.hook_length(r, c) != d {
                continue;
            }
            let leg = mu.0[r + 1..].iter().take_while(|&&x| x > c).count();
            let last = r + leg;
            let mut cells = Vec::with_capacity(d);
            let mut parts = mu.0.clone();
            for i in r..=last {
                let start = if i == last { c } else { mu.0[i + 1] - 1 };
                cells.extend((start..mu.0[i]).map(|col| (i, col)));
                parts[i] = start;
            }
            parts.retain(|&p| p > 0);
            hooks.push(RimHook {
                cells,
                length: d,
                height: leg,
                remainder: Partition(parts),
            });
        }
    }
    hooks
}

type MnKey = (Vec<usize>, Vec<usize>);

fn mn_cache() -> &'static Mutex<HashMap<MnKey, i128>> {
    static CACHE: OnceLock<Mutex<HashMap<MnKey, i128>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Character `χ^μ` evaluated on the class of cycle type `ρ`.
pub fn mn_character(mu: &Partition, rho: &Partition) -> Result<i128> {
    if mu.weight() != rho.weight() {
        return Err(Error::invalid(format!(
            "weight mismatch: χ^({mu}) on cycle type ({rho})"
        )));
    }
    if mu.weight() > MAX_WEIGHT {
        return Err(Error::TooLarge(format!("partitions of {} exceed the supported weight {MAX_WEIGHT}", mu.weight())));
    }
    Ok(mn_rec(&mu.0, &rho.0))
}

fn mn_rec(mu: &[usize], cycles: &[usize]) -> i128 {
    let Some((&d, rest)) = cycles.split_first() else {
        return 1;
    };
    let key = (mu.to_vec(), cycles.to_vec());
    if let Some(&v) = mn_cache().lock().unwrap().get(&key) {
        return v;
    }
    let shape = Partition(mu.to_vec());
    let value = rim_hooks_of_length(&shape, d)
        .into_iter()
        .map(|h| {
            let sign = if h.height % 2 == 0 { 1 } else { -1 };
            sign * mn_rec(&h.remainder.0, rest)
        })
        .sum();
    mn_cache().lock().unwrap().insert(key, value);
    value
}

fn crop_cache() -> &'static Mutex<HashMap<(Vec<usize>, usize), u128>> {
    static CACHE: OnceLock<Mutex<HashMap<(Vec<usize>, usize), u128>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Number of ordered removals of `k` corner cells from `μ` ending at the row `(m - k)`.
pub fn crop(mu: &Partition, k: usize) -> Result<u128> {
    let m = mu.weight();
    if k > m {
        return Err(Error::invalid(format!("crop({mu}, {k}) needs k ≤ {m}")));
    }
    if m > MAX_WEIGHT {
        return Err(Error::TooLarge(format!("partitions of {m} exceed the supported weight {MAX_WEIGHT}")));
    }
    Ok(crop_rec(mu, k))
}

fn crop_rec(mu: &Partition, k: usize) -> u128 {
    if k == 0 {
        return u128::from(mu.is_single_row());
    }
    let key = (mu.0.clone(), k);
    if let Some(&v) = crop_cache().lock().unwrap().get(&key) {
        return v;
    }
    let value = mu
        .corners()
        .into_iter()
        .map(|(r, _)| crop_rec(&mu.without_corner_in_row(r), k - 1))
        .sum();
    crop_cache().lock().unwrap().insert(key, value);
    value
}

/// Number of standard Young tableaux of shape `μ`, i.e. `χ^μ(id)`.
///
/// Computed as `crop(μ, m)` and checked against the hook-length formula.
pub fn syt_count(mu: &Partition) -> u128 {
    let by_crop = crop_rec(mu, mu.weight());
    let by_hooks = hook_length_count(mu);
    assert_eq!(
        by_crop, by_hooks,
        "standard tableaux of ({mu}): removal count and hook-length formula disagree"
    );
    by_crop
}

/// `m! / Π hook lengths`.
pub fn hook_length_count(mu: &Partition) -> u128 {
    let mut hooks: u128 = 1;
    for r in 0..mu.len() {
        for c in 0..mu.0[r] {
            hooks *= mu.hook_length(r, c) as u128;
        }
    }
    factorial(mu.weight() as u64) / hooks
}

/// Number of permutations of `S_m` with cycle type `ρ`: `m! / Π_i i^{a_i} a_i!`.
pub fn class_size(rho: &Partition) -> u128 {
    let denom: u128 = rho
        .multiplicities()
        .into_iter()
        .map(|(size, count)| (size as u128).pow(count as u32) * factorial(count as u64))
        .product();
    factorial(rho.weight() as u64) / denom
}
