//! End-to-end verification suite: one check per headline result, each
//! returning a pass/fail line with the instances it covered.
//!
//! Shared by the acceptance tests and `bincay verify-all`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cayley::{adjacency_matrix, binomial_transform, binomial_weight, natural_weight, WeightFunction};
use crate::error::Result;
use crate::exactla::{determinant, kernel_basis, rank, PolytopeQuery, RatMatrix};
use crate::groups::{permutations_lex, CharacterLabel, GroupSpec};
use crate::particlebox::files::parse_family;
use crate::particlebox::observe::kernel_measures;
use crate::particlebox::{
    compatibility_check, degeneracy, fiber_segment, observability_check, projection_matrix, restrict,
    restriction_matrix, simulate_game, Distribution, MarginalFamily, Observability, Sigma, SignedMeasure,
    SystemSpec,
};
use crate::partitions::{class_size, crop, enumerate_partitions, mn_character, syt_count, Partition};
use crate::rational::{factorial, format_rat, int, rat, Rat};
use crate::rsk::lis_histogram;
use crate::spectra::decompose::decompose_class_function;
use crate::spectra::lemmas::{lemma_suite, LemmaBounds};
use crate::spectra::verify::verify_spectrum_exact;
use crate::spectra::{cyclic_rank, cyclic_spectrum, rank_recursion, sym_kernel_dim, sym_spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteMode {
    Fast,
    Slow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: String,
    pub passed: bool,
    pub instances: u64,
    pub detail: String,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {} ({} instances; {})",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.instances,
            self.detail
        )
    }
}

pub const CRITERIA: usize = 11;

pub fn run_all(mode: SuiteMode) -> Vec<CriterionOutcome> {
    (1..=CRITERIA).map(|id| run_criterion(id, mode)).collect()
}

/// Runs one criterion; internal errors are reported as failures.
pub fn run_criterion(id: usize, mode: SuiteMode) -> CriterionOutcome {
    let (title, result): (&str, Result<Tally>) = match id {
        1 => ("symmetric group spectra verified exactly", sym_spectra(mode)),
        2 => ("cyclic power spectra verified exactly", cyclic_spectra()),
        3 => ("kernel dimension equals count of short increasing subsequences", kernel_vs_lis()),
        4 => ("rank recursion equals closed form", recursion_vs_closed_form()),
        5 => ("worked restriction matrices", worked_matrices()),
        6 => ("degeneracy of the two-particle two-box system", two_box_degeneracy()),
        7 => ("compatible family that is not observable", compatible_not_observable()),
        8 => ("nested kernels and the non-nesting counterexample", nesting()),
        9 => ("counting identity suites", lemmas()),
        10 => ("character infrastructure", characters()),
        11 => ("simulator determinism and convergence", simulator()),
        _ => ("unknown criterion", Ok(Tally::fail(0, format!("no criterion {id}")))),
    };
    let tally = result.unwrap_or_else(|e| Tally::fail(0, format!("error: {e}")));
    CriterionOutcome {
        id,
        title: title.to_string(),
        passed: tally.failure.is_none(),
        instances: tally.instances,
        detail: tally.failure.unwrap_or(tally.note),
    }
}

struct Tally {
    instances: u64,
    failure: Option<String>,
    note: String,
}

impl Tally {
    fn new() -> Self {
        Tally {
            instances: 0,
            failure: None,
            note: String::new(),
        }
    }

    fn fail(instances: u64, msg: String) -> Self {
        Tally {
            instances,
            failure: Some(msg),
            note: String::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(msg());
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

fn sym_spectra(mode: SuiteMode) -> Result<Tally> {
    let max = if mode == SuiteMode::Slow { 7 } else { 6 };
    let mut t = Tally::new();
    for m in 1..=max {
        for k in 0..=m {
            let a = adjacency_matrix(&binomial_weight(GroupSpec::sym(m)?, k as u64)?)?;
            let v = verify_spectrum_exact(&a, &sym_spectrum(m, k)?)?;
            t.check(v.verified, || format!("m={m} k={k}: {}", v.failure.clone().unwrap_or_default()));
        }
    }
    Ok(t.note(format!("m ≤ {max}, all k")))
}

fn cyclic_spectra() -> Result<Tally> {
    let mut t = Tally::new();
    for m in 2..=1024usize {
        let mut n = 1;
        while m.pow(n as u32) <= 1024 {
            for k in 0..=n {
                let a = adjacency_matrix(&binomial_weight(GroupSpec::cyclic_power(m, n)?, k as u64)?)?;
                let v = verify_spectrum_exact(&a, &cyclic_spectrum(m, n, k)?)?;
                t.check(v.verified, || format!("m={m} n={n} k={k}: {}", v.failure.clone().unwrap_or_default()));
            }
            n += 1;
        }
    }
    Ok(t.note("m^n ≤ 1024, all k"))
}

fn kernel_vs_lis() -> Result<Tally> {
    let mut t = Tally::new();
    let hist5 = lis_histogram(5)?;
    let short5: u64 = hist5[..=2].iter().sum();
    t.check(sym_kernel_dim(5, 2)? == 42 && short5 == 42, || {
        format!("m=5 k=2: kernel {} vs lis ≤ 2 count {short5}", sym_kernel_dim(5, 2).unwrap_or(0))
    });
    for m in 1..=7 {
        let hist = lis_histogram(m)?;
        for k in 0..=m {
            // permutations with no increasing subsequence of length m − k
            let short: u64 = hist.iter().take(m - k).sum();
            let dim = sym_kernel_dim(m, k)?;
            t.check(dim == short as u128, || format!("m={m} k={k}: kernel {dim}, lis count {short}"));
        }
    }
    Ok(t.note("m ≤ 7, all k; sym_kernel_dim(5,2) = 42"))
}

fn recursion_vs_closed_form() -> Result<Tally> {
    let mut t = Tally::new();
    for n in 1..=8 {
        for k in 1..=n {
            for m in 1..=5 {
                let (r, c) = (rank_recursion(n, m, k)?, cyclic_rank(n, m, k)?);
                t.check(r == c, || format!("n={n} m={m} k={k}: recursion {r}, closed form {c}"));
            }
        }
    }
    Ok(t.note("1 ≤ k ≤ n ≤ 8, m ≤ 5"))
}

/// The 4×4 restriction for two particles in two boxes observed one at a time.
pub fn two_box_matrix() -> RatMatrix {
    RatMatrix::from_i64_rows(&[vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![1, 0, 1, 0], vec![0, 1, 0, 1]])
        .expect("rectangular")
}

/// The 12×8 restriction for three particles in two boxes observed in pairs.
pub fn three_particle_pair_matrix() -> RatMatrix {
    RatMatrix::from_i64_rows(&[
        vec![1, 1, 0, 0, 0, 0, 0, 0],
        vec![0, 0, 1, 1, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 1, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 1, 1],
        vec![1, 0, 1, 0, 0, 0, 0, 0],
        vec![0, 1, 0, 1, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 0, 1, 0],
        vec![0, 0, 0, 0, 0, 1, 0, 1],
        vec![1, 0, 0, 0, 1, 0, 0, 0],
        vec![0, 1, 0, 0, 0, 1, 0, 0],
        vec![0, 0, 1, 0, 0, 0, 1, 0],
        vec![0, 0, 0, 1, 0, 0, 0, 1],
    ])
    .expect("rectangular")
}

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| int(x)).collect()
}

fn worked_matrices() -> Result<Tally> {
    let mut t = Tally::new();
    let small = restriction_matrix(&SystemSpec::new(2, 2, 1, Sigma::All)?)?.to_rat();
    t.check(small == two_box_matrix(), || "4×4 matrix differs".into());
    t.check(kernel_basis(&small) == vec![ints(&[1, -1, -1, 1])], || "4×4 kernel differs".into());
    let big = restriction_matrix(&SystemSpec::new(3, 2, 2, Sigma::All)?)?.to_rat();
    t.check(big == three_particle_pair_matrix(), || "12×8 matrix differs".into());
    t.check(rank(&big) == 7, || format!("12×8 rank {}", rank(&big)));
    let kernel = kernel_basis(&big);
    t.check(kernel == vec![ints(&[1, -1, -1, 1, -1, 1, 1, -1])], || format!("12×8 kernel {kernel:?}"));
    Ok(t.note("rank 7, kernel (1,−1,−1,1,−1,1,1,−1)"))
}

fn two_box_degeneracy() -> Result<Tally> {
    let mut t = Tally::new();
    let s = SystemSpec::new(2, 2, 1, Sigma::All)?;
    let e1 = Distribution::atom(&s, 0)?;
    let uniform = Distribution::uniform(&s);
    let d0 = degeneracy(&s, &e1)?.dimension;
    t.check(d0 == 0, || format!("degeneracy(e₁) = {d0}"));
    let report = degeneracy(&s, &uniform)?;
    t.check(report.dimension == 1, || format!("degeneracy(uniform) = {}", report.dimension));
    let seg = fiber_segment(&s, &uniform, &ints(&[1, -1, -1, 1]))?;
    let half = rat(1, 2);
    let z = Rat::zero();
    t.check(
        seg.upper_point == vec![half.clone(), z.clone(), z.clone(), half.clone()]
            && seg.lower_point == vec![z.clone(), half.clone(), half.clone(), z],
        || format!("boundary points {:?} {:?}", seg.upper_point, seg.lower_point),
    );
    t.check(seg.upper == rat(1, 4) && seg.lower == rat(-1, 4), || {
        format!("step range [{}, {}]", format_rat(&seg.lower), format_rat(&seg.upper))
    });
    let bij = SystemSpec::new(2, 2, 1, Sigma::Bij)?;
    let d_id = degeneracy(&bij, &Distribution::atom(&bij, 0)?)?.dimension;
    t.check(d_id == 0, || format!("bijective degeneracy(δ_id) = {d_id}"));
    Ok(t.note("degeneracies 0 and 1; boundary points at uniform ± v/4"))
}

/// The compatible pair family with values 1/12, 11/30, 11/30, 11/60 on every pair.
pub fn compatible_unobservable_family() -> Result<MarginalFamily> {
    let s = SystemSpec::new(3, 2, 2, Sigma::All)?;
    let mut text = String::new();
    for i in ["1,2", "1,3", "2,3"] {
        for (j, v) in [("0,0", "1/12"), ("0,1", "11/30"), ("1,0", "11/30"), ("1,1", "11/60")] {
            text.push_str(&format!("i=({i});j=({j}) {v}\n"));
        }
    }
    parse_family(&s, &text)
}

fn compatible_not_observable() -> Result<Tally> {
    let mut t = Tally::new();
    let fam = compatible_unobservable_family()?;
    let s = fam.spec;
    t.check(compatibility_check(&fam)?.compatible, || "family judged incompatible".into());
    let signed = SignedMeasure::new(vec![
        rat(-6, 60),
        rat(11, 60),
        rat(11, 60),
        rat(11, 60),
        rat(11, 60),
        rat(11, 60),
        rat(11, 60),
        int(0),
    ])?;
    t.check(restrict(&s, &signed)? == fam, || "signed measure does not induce the family".into());
    match observability_check(&fam)? {
        Observability::NoNonnegativeSolution { signed_solution, certificate } => {
            let basis = kernel_measures(&s)?;
            let k = RatMatrix::from_fn(8, basis.len(), |i, j| basis[j][i].clone());
            let q = PolytopeQuery::new(k, signed_solution)?;
            t.check(q.verifies_infeasibility(&certificate)?, || "certificate fails verification".into());
        }
        other => t.check(false, || format!("observability outcome {other:?}")),
    }
    let mut tweaked = fam.clone();
    tweaked.values[0] = rat(1, 10);
    t.check(!compatibility_check(&tweaked)?.compatible, || "tweaked family judged compatible".into());
    Ok(t.note("compatible; no nonnegative solution; Farkas certificate verified"))
}

/// The weight 4/7/9/7 on Z₄.
pub fn z4_counterexample_weight() -> Result<WeightFunction> {
    WeightFunction::new(GroupSpec::cyclic_power(4, 1)?, vec![4, 7, 9, 7])
}

fn nesting() -> Result<Tally> {
    let mut t = Tally::new();
    let w = z4_counterexample_weight()?;
    let det1 = determinant(&adjacency_matrix(&binomial_transform(&w, 1)?)?.to_rat())?;
    let det2 = determinant(&adjacency_matrix(&binomial_transform(&w, 2)?)?.to_rat())?;
    t.check(!det1.is_zero(), || "k=1 determinant vanishes".into());
    t.check(det2.is_zero(), || format!("k=2 determinant {}", format_rat(&det2)));
    let mut systems = Vec::new();
    for n in 1..=4 {
        for m in 1..=3 {
            systems.push(SystemSpec::new(n, m, 0, Sigma::All)?);
        }
    }
    for m in 1..=5 {
        systems.push(SystemSpec::new(m, m, 0, Sigma::Bij)?);
    }
    for base in systems {
        for k in 0..base.n {
            let upper = base.at_level(k + 1)?;
            let lower = base.at_level(k)?;
            let p = projection_matrix(&base, k);
            t.check(p.is_ok(), || format!("{upper}: projection failed: {:?}", p.as_ref().err()));
            let m_lower = restriction_matrix(&lower)?;
            for v in kernel_measures(&upper)? {
                t.check(m_lower.mul_vec(&v).iter().all(Zero::is_zero), || {
                    format!("{upper}: kernel vector escapes level {k}")
                });
            }
        }
    }
    Ok(t.note(format!("det k=1 = {}, det k=2 = 0", format_rat(&det1))))
}

fn lemmas() -> Result<Tally> {
    let report = lemma_suite(LemmaBounds::default())?;
    let mut t = Tally::new();
    for c in &report.checks {
        t.instances += c.instances - 1;
        t.check(c.passed(), || format!("{}: {}", c.name, c.failures.first().cloned().unwrap_or_default()));
    }
    Ok(t.note("M,N,k ≤ 20; m ≤ 12 with m^n ≤ 512; m ≤ 6"))
}

/// Standard fillings of the skew shape `μ / (m − k)` by exhaustive labelling.
pub fn skew_tableaux_brute_force(mu: &Partition, k: usize) -> u64 {
    let m = mu.weight();
    let base = m - k;
    if mu.first_row() < base {
        return 0;
    }
    let cells: Vec<(usize, usize)> = (0..mu.len())
        .flat_map(|r| (0..mu.row(r)).map(move |c| (r, c)))
        .filter(|&(r, c)| !(r == 0 && c < base))
        .collect();
    if cells.is_empty() {
        return 1;
    }
    let pos = |r: usize, c: usize| cells.iter().position(|&x| x == (r, c));
    permutations_lex(cells.len())
        .into_iter()
        .filter(|labels| {
            cells.iter().enumerate().all(|(i, &(r, c))| {
                let right = pos(r, c + 1).map_or(true, |j| labels[i] < labels[j]);
                let below = pos(r + 1, c).map_or(true, |j| labels[i] < labels[j]);
                right && below
            })
        })
        .count() as u64
}

fn characters() -> Result<Tally> {
    let mut t = Tally::new();
    for m in 1..=6 {
        let parts = enumerate_partitions(m);
        let order = factorial(m as u64) as i128;
        let table: Vec<Vec<i128>> = parts
            .iter()
            .map(|mu| parts.iter().map(|rho| mn_character(mu, rho)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let sizes: Vec<i128> = parts.iter().map(|rho| class_size(rho) as i128).collect();
        for a in 0..parts.len() {
            for b in 0..parts.len() {
                let rows: i128 = (0..parts.len()).map(|c| sizes[c] * table[a][c] * table[b][c]).sum();
                let expected = if a == b { order } else { 0 };
                t.check(rows == expected, || format!("m={m}: row orthogonality ({a},{b}) gives {rows}"));
                let cols: i128 = (0..parts.len()).map(|r| table[r][a] * table[r][b]).sum();
                let expected = if a == b { order / sizes[a] } else { 0 };
                t.check(cols == expected, || format!("m={m}: column orthogonality ({a},{b}) gives {cols}"));
            }
        }
        let degrees: u128 = parts.iter().map(|mu| syt_count(mu).pow(2)).sum();
        t.check(degrees as i128 == order, || format!("m={m}: degree sum {degrees}"));
        if m >= 2 {
            let coeffs = decompose_class_function(&natural_weight(GroupSpec::sym(m)?)?)?;
            for c in coeffs {
                let CharacterLabel::Partition(mu) = &c.character else { continue };
                let expected = if mu.first_row() >= m - 1 { Rat::one() } else { Rat::zero() };
                t.check(c.value == expected, || format!("m={m}: coefficient of ({mu}) is {}", format_rat(&c.value)));
            }
        }
    }
    for m in 1..=7 {
        for mu in enumerate_partitions(m) {
            for k in 0..=m {
                let (fast, brute) = (crop(&mu, k)?, skew_tableaux_brute_force(&mu, k));
                t.check(fast == brute as u128, || format!("crop(({mu}), {k}) = {fast}, brute force {brute}"));
            }
        }
    }
    Ok(t.note("orthogonality and degrees m ≤ 6; crop vs brute force m ≤ 7; fixed-point decomposition"))
}

const ROUNDS: u64 = 100_000;
const TOLERANCE: f64 = 0.02;

fn simulator() -> Result<Tally> {
    let mut t = Tally::new();
    let s = SystemSpec::new(2, 2, 1, Sigma::All)?;
    let p = Distribution::uniform(&s);
    let a = simulate_game(&s, &p, ROUNDS, 2024)?;
    let b = simulate_game(&s, &p, ROUNDS, 2024)?;
    t.check(a == b, || "same seed gave different tallies".into());
    let exact = restrict(&s, &p.as_signed())?;
    let dev = a.max_deviation(&exact.values);
    t.check(dev <= TOLERANCE, || format!("max deviation {dev}"));
    let three = SystemSpec::new(3, 3, 2, Sigma::All)?;
    for idx in [0, 13, 26] {
        let atom = Distribution::atom(&three, idx)?;
        let tally = simulate_game(&three, &atom, 500, 7)?;
        t.check(tally.frequencies == restrict(&three, &atom.as_signed())?.values, || {
            format!("atom {idx} not reproduced exactly")
        });
    }
    let cells = exact.values.len();
    // Hoeffding for each cell, union bound over cells, for an unseeded run
    let failure = 2.0 * cells as f64 * (-2.0 * ROUNDS as f64 * TOLERANCE * TOLERANCE).exp();
    Ok(t.note(format!(
        "max deviation {dev:.5} over {cells} cells at 10^5 rounds; failure probability ≤ {failure:.1e}"
    )))
}
