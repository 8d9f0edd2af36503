//! Exact two-phase simplex over the rationals. Pivots follow Dantzig's rule
//! and fall back to Bland's rule after a run of degenerate steps.
//!
//! Polytopes are given as `{c : K·c + b ≥ 0}` with free variables `c`.
//! Internally each `c` is split into a difference of nonnegative parts and
//! every inequality receives a surplus variable, giving equality form.
//! Systems already in the form `{x ≥ 0 : a·x = b}` are solved directly.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::elimination::{echelon, rank};
use super::matrix::{dot, RatMatrix};
use crate::error::{Error, Result};
use crate::rational::{serde_rat_vec, Rat};

/// The polyhedron `{c : K·c + b ≥ 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeQuery {
    pub normals: RatMatrix,
    pub offsets: Vec<Rat>,
}

impl PolytopeQuery {
    pub fn new(normals: RatMatrix, offsets: Vec<Rat>) -> Result<Self> {
        if normals.rows() != offsets.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} constraint rows but {} offsets",
                normals.rows(),
                offsets.len()
            )));
        }
        Ok(PolytopeQuery { normals, offsets })
    }

    pub fn dim(&self) -> usize {
        self.normals.cols()
    }

    /// Constraint values `K·c + b`.
    pub fn slacks(&self, c: &[Rat]) -> Result<Vec<Rat>> {
        Ok(self
            .normals
            .mul_vec(c)?
            .into_iter()
            .zip(&self.offsets)
            .map(|(x, b)| x + b)
            .collect())
    }

    pub fn contains(&self, c: &[Rat]) -> Result<bool> {
        Ok(self.slacks(c)?.iter().all(|s| !s.is_negative()))
    }

    /// Checks `z ≥ 0`, `Kᵀz = 0` and `bᵀz < 0`, which rules out every point.
    pub fn verifies_infeasibility(&self, z: &[Rat]) -> Result<bool> {
        if z.len() != self.offsets.len() || z.iter().any(Signed::is_negative) {
            return Ok(false);
        }
        let kt_z = self.normals.transpose().mul_vec(z)?;
        Ok(kt_z.iter().all(Zero::is_zero) && dot(&self.offsets, z).is_negative())
    }
}

/// Outcome of a feasibility query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Feasibility {
    Feasible {
        #[serde(with = "serde_rat_vec")]
        witness: Vec<Rat>,
    },
    /// Farkas multipliers `z` with `z ≥ 0`, `Kᵀz = 0`, `bᵀz < 0`.
    Infeasible {
        #[serde(with = "serde_rat_vec")]
        certificate: Vec<Rat>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Optimum {
    Optimal { value: Rat, point: Vec<Rat> },
    Unbounded,
    Infeasible { certificate: Vec<Rat> },
}

/// Equality-form problem: maximize `cost·x` subject to `a·x = b`, `x ≥ 0`.
struct StandardLp {
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    cost: Vec<Rat>,
}

enum StandardOutcome {
    Optimal { value: Rat, x: Vec<Rat> },
    Unbounded,
    /// `w` with `aᵀw ≤ 0` and `bᵀw > 0`.
    Infeasible { w: Vec<Rat> },
}

/// Consecutive degenerate pivots before switching from Dantzig's rule to Bland's.
const STALL_LIMIT: usize = 50;

struct Tableau {
    /// Constraint rows, each `cols + 1` long with the right-hand side last.
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, objective: &mut [Rat]) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        let nz: Vec<usize> = (0..=self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for &j in &nz {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
        if !objective[c].is_zero() {
            let f = objective[c].clone();
            for &j in &nz {
                objective[j] -= &f * &pivot_row[j];
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes the objective row (reduced costs, value in the last slot as its negative)
    /// over the columns allowed by `eligible`. Returns `false` when unbounded.
    fn run(&mut self, objective: &mut [Rat], eligible: impl Fn(usize) -> bool) -> bool {
        let mut stalled = 0;
        loop {
            let candidates = (0..self.cols).filter(|&j| eligible(j) && objective[j].is_negative());
            let enter = if stalled < STALL_LIMIT {
                candidates.min_by(|&a, &b| objective[a].cmp(&objective[b]).then(a.cmp(&b)))
            } else {
                candidates.min()
            };
            let Some(enter) = enter else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[self.cols] / &row[enter];
                let replace = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if replace {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = leave else { return false };
            stalled = if ratio.is_zero() { stalled + 1 } else { 0 };
            self.pivot(r, enter, objective);
        }
    }
}

fn solve_standard(lp: &StandardLp) -> StandardOutcome {
    let m = lp.a.len();
    let n = lp.cost.len();
    let cols = n + m;
    let mut sign = vec![Rat::one(); m];
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = lp.b[i].is_negative();
        if flip {
            sign[i] = -Rat::one();
        }
        let mut row = Vec::with_capacity(cols + 1);
        row.extend(lp.a[i].iter().map(|x| if flip { -x } else { x.clone() }));
        row.extend((0..m).map(|j| if j == i { Rat::one() } else { Rat::zero() }));
        row.push(if flip { -&lp.b[i] } else { lp.b[i].clone() });
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        cols,
    };
    // phase one: minimize the sum of artificials
    let mut obj = vec![Rat::zero(); cols + 1];
    for j in n..cols {
        obj[j] = Rat::one();
    }
    for row in &t.rows {
        for (o, x) in obj.iter_mut().zip(row) {
            *o -= x;
        }
    }
    for j in n..cols {
        obj[j] = Rat::zero();
    }
    t.run(&mut obj, |_| true);
    let phase_one = -obj[cols].clone();
    if phase_one.is_positive() {
        // duals y_j = 1 - reduced cost of artificial j, mapped back through the row flips
        let w = (0..m).map(|j| (Rat::one() - &obj[n + j]) * &sign[j]).collect();
        return StandardOutcome::Infeasible { w };
    }
    // drive artificials out of the basis; rows that cannot be pivoted are redundant
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(c) = (0..n).find(|&c| !t.rows[i][c].is_zero()) {
                t.pivot(i, c, &mut obj);
            } else {
                t.rows.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    // phase two: minimize -cost over the original columns
    let mut obj = vec![Rat::zero(); cols + 1];
    for j in 0..n {
        obj[j] = -lp.cost[j].clone();
    }
    for (r, &bj) in t.basis.clone().iter().enumerate() {
        if !obj[bj].is_zero() {
            let f = obj[bj].clone();
            for j in 0..=cols {
                obj[j] -= &f * &t.rows[r][j];
            }
        }
    }
    if !t.run(&mut obj, |j| j < n) {
        return StandardOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &bj) in t.basis.iter().enumerate() {
        if bj < n {
            x[bj] = t.rows[r][cols].clone();
        }
    }
    let value = dot(&lp.cost, &x);
    StandardOutcome::Optimal { value, x }
}

/// Equality form of `max objective·c` over the polytope: columns `c⁺`, `c⁻`, surplus.
fn polytope_standard(q: &PolytopeQuery, objective: &[Rat]) -> StandardLp {
    let (rows, d) = (q.normals.rows(), q.dim());
    let n = 2 * d + rows;
    let mut a = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row = vec![Rat::zero(); n];
        for j in 0..d {
            let k = q.normals.get(i, j);
            row[j] = k.clone();
            row[d + j] = -k;
        }
        row[2 * d + i] = -Rat::one();
        a.push(row);
    }
    let b = q.offsets.iter().map(|x| -x).collect();
    let mut cost = vec![Rat::zero(); n];
    for j in 0..d {
        cost[j] = objective[j].clone();
        cost[d + j] = -objective[j].clone();
    }
    StandardLp { a, b, cost }
}

fn recover_point(x: &[Rat], d: usize) -> Vec<Rat> {
    (0..d).map(|j| &x[j] - &x[d + j]).collect()
}

/// Decides whether the polytope is nonempty, with an exact witness or Farkas certificate.
pub fn lp_feasible(q: &PolytopeQuery) -> Result<Feasibility> {
    let zero = vec![Rat::zero(); q.dim()];
    Ok(match lp_maximize(q, &zero)? {
        Optimum::Optimal { point, .. } => Feasibility::Feasible { witness: point },
        Optimum::Infeasible { certificate } => Feasibility::Infeasible { certificate },
        Optimum::Unbounded => return Err(Error::internal("zero objective reported unbounded")),
    })
}

/// Maximizes `objective·c` over the polytope.
pub fn lp_maximize(q: &PolytopeQuery, objective: &[Rat]) -> Result<Optimum> {
    if objective.len() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "objective of length {} in dimension {}",
            objective.len(),
            q.dim()
        )));
    }
    let lp = polytope_standard(q, objective);
    Ok(match solve_standard(&lp) {
        StandardOutcome::Optimal { value, x } => {
            let point = recover_point(&x, q.dim());
            if !q.contains(&point)? {
                return Err(Error::internal("simplex witness violates a constraint"));
            }
            Optimum::Optimal { value, point }
        }
        StandardOutcome::Unbounded => Optimum::Unbounded,
        StandardOutcome::Infeasible { w } => {
            if !q.verifies_infeasibility(&w)? {
                return Err(Error::internal("Farkas certificate failed exact verification"));
            }
            Optimum::Infeasible { certificate: w }
        }
    })
}

/// Outcome of a search for `x ≥ 0` with `a·x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonnegativeSolve {
    Solution(Vec<Rat>),
    /// `w` with `aᵀw ≤ 0` and `b·w > 0`.
    Farkas(Vec<Rat>),
}

/// Finds `x ≥ 0` with `a·x = b` or a verified Farkas vector.
pub fn nonnegative_solution(a: &RatMatrix, b: &[Rat]) -> Result<NonnegativeSolve> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!("{} right-hand sides for {} rows", b.len(), a.rows())));
    }
    let independent = echelon(&a.transpose()).pivots;
    if independent.len() < a.rows() {
        let reduced = RatMatrix::from_rows(independent.iter().map(|&i| a.row(i).to_vec()).collect())?;
        let rhs: Vec<Rat> = independent.iter().map(|&i| b[i].clone()).collect();
        match nonnegative_solution(&reduced, &rhs)? {
            NonnegativeSolve::Solution(x) if a.mul_vec(&x)? == b => return Ok(NonnegativeSolve::Solution(x)),
            NonnegativeSolve::Farkas(w) => {
                let mut full = vec![Rat::zero(); a.rows()];
                for (&i, v) in independent.iter().zip(w) {
                    full[i] = v;
                }
                return Ok(NonnegativeSolve::Farkas(full));
            }
            // dropped rows are inconsistent with the rest; solve the full system
            NonnegativeSolve::Solution(_) => {}
        }
    }
    let lp = StandardLp {
        a: a.row_vecs(),
        b: b.to_vec(),
        cost: vec![Rat::zero(); a.cols()],
    };
    match solve_standard(&lp) {
        StandardOutcome::Optimal { x, .. } => {
            if x.iter().any(Signed::is_negative) || a.mul_vec(&x)? != b {
                return Err(Error::internal("simplex solution violates a constraint"));
            }
            Ok(NonnegativeSolve::Solution(x))
        }
        StandardOutcome::Infeasible { w } => {
            let at_w = a.transpose().mul_vec(&w)?;
            if at_w.iter().any(Signed::is_positive) || !dot(b, &w).is_positive() {
                return Err(Error::internal("Farkas vector failed exact verification"));
            }
            Ok(NonnegativeSolve::Farkas(w))
        }
        StandardOutcome::Unbounded => Err(Error::internal("zero objective reported unbounded")),
    }
}

/// Coordinates that are positive at some point of `{x ≥ 0 : a·x = b}`, starting
/// from a known feasible point.
pub fn positive_support(a: &RatMatrix, b: &[Rat], start: &[Rat]) -> Result<Vec<bool>> {
    if start.len() != a.cols() || b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}×{} system with {} right-hand sides and a start of length {}",
            a.rows(),
            a.cols(),
            b.len(),
            start.len()
        )));
    }
    if start.iter().any(Signed::is_negative) || a.mul_vec(start)? != b {
        return Err(Error::invalid("start point is not feasible"));
    }
    let mut support: Vec<bool> = start.iter().map(Signed::is_positive).collect();
    let rows = a.row_vecs();
    for j in 0..a.cols() {
        if support[j] {
            continue;
        }
        let mut cost = vec![Rat::zero(); a.cols()];
        cost[j] = Rat::one();
        match solve_standard(&StandardLp {
            a: rows.clone(),
            b: b.to_vec(),
            cost,
        }) {
            StandardOutcome::Optimal { x, .. } => {
                for (s, v) in support.iter_mut().zip(&x) {
                    *s |= v.is_positive();
                }
            }
            StandardOutcome::Unbounded => support[j] = true,
            StandardOutcome::Infeasible { .. } => return Err(Error::internal("feasible system reported infeasible")),
        }
    }
    Ok(support)
}

/// Indices of constraints that hold with equality on the whole polytope.
pub fn implicit_equalities(q: &PolytopeQuery) -> Result<Vec<usize>> {
    let (rows, d) = (q.normals.rows(), q.dim());
    let witness = match lp_feasible(q)? {
        Feasibility::Feasible { witness } => witness,
        Feasibility::Infeasible { .. } => return Err(Error::EmptyPolytope),
    };
    // rows with positive slack somewhere are not implicit equalities
    let slack = q.slacks(&witness)?;
    let mut undecided: Vec<usize> = (0..rows).filter(|&i| slack[i].is_zero()).collect();
    loop {
        if undecided.is_empty() {
            return Ok(vec![]);
        }
        // maximize Σ τ_i with K_i c + b_i ≥ τ_i, 0 ≤ τ_i ≤ 1 over the undecided rows
        let u = undecided.len();
        let n = 2 * d + rows + 2 * u;
        let mut a = Vec::with_capacity(rows + u);
        let mut b = Vec::with_capacity(rows + u);
        for i in 0..rows {
            let mut row = vec![Rat::zero(); n];
            for j in 0..d {
                let k = q.normals.get(i, j);
                row[j] = k.clone();
                row[d + j] = -k;
            }
            row[2 * d + i] = -Rat::one();
            if let Some(t) = undecided.iter().position(|&x| x == i) {
                row[2 * d + rows + t] = -Rat::one();
            }
            a.push(row);
            b.push(-q.offsets[i].clone());
        }
        for t in 0..u {
            let mut row = vec![Rat::zero(); n];
            row[2 * d + rows + t] = Rat::one();
            row[2 * d + rows + u + t] = Rat::one();
            a.push(row);
            b.push(Rat::one());
        }
        let mut cost = vec![Rat::zero(); n];
        for t in 0..u {
            cost[2 * d + rows + t] = Rat::one();
        }
        let x = match solve_standard(&StandardLp { a, b, cost }) {
            StandardOutcome::Optimal { value, x } => {
                if value.is_zero() {
                    return Ok(undecided);
                }
                x
            }
            _ => return Err(Error::internal("slack maximization over a nonempty polytope failed")),
        };
        undecided = undecided
            .iter()
            .enumerate()
            .filter(|(t, _)| x[2 * d + rows + t].is_zero())
            .map(|(_, &i)| i)
            .collect();
    }
}

/// Dimension of a nonempty polytope: ambient dimension minus the rank of its implicit equalities.
pub fn polytope_dimension(q: &PolytopeQuery) -> Result<usize> {
    let eq = implicit_equalities(q)?;
    if eq.is_empty() {
        return Ok(q.dim());
    }
    let normals = RatMatrix::from_rows(eq.iter().map(|&i| q.normals.row(i).to_vec()).collect())?;
    Ok(q.dim() - rank(&normals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn query(rows: &[Vec<i64>], offsets: &[i64]) -> PolytopeQuery {
        PolytopeQuery::new(
            RatMatrix::from_i64_rows(rows).unwrap(),
            offsets.iter().map(|&x| int(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn unit_box() {
        // 0 ≤ x ≤ 1, 0 ≤ y ≤ 1
        let q = query(&[vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]], &[0, 1, 0, 1]);
        assert!(matches!(lp_feasible(&q).unwrap(), Feasibility::Feasible { .. }));
        assert_eq!(polytope_dimension(&q).unwrap(), 2);
        match lp_maximize(&q, &[int(1), int(2)]).unwrap() {
            Optimum::Optimal { value, point } => {
                assert_eq!(value, int(3));
                assert_eq!(point, vec![int(1), int(1)]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(lp_maximize(&query(&[vec![1]], &[0]), &[int(1)]).unwrap(), Optimum::Unbounded);
    }

    #[test]
    fn segment_and_point() {
        // x + y = 1 with x, y ≥ 0 in the plane
        let seg = query(&[vec![1, 1], vec![-1, -1], vec![1, 0], vec![0, 1]], &[-1, 1, 0, 0]);
        assert_eq!(polytope_dimension(&seg).unwrap(), 1);
        let point = query(&[vec![1], vec![-1]], &[-2, 2]);
        assert_eq!(polytope_dimension(&point).unwrap(), 0);
    }

    #[test]
    fn infeasible_has_certificate() {
        // x ≥ 1 and x ≤ 0
        let q = query(&[vec![1], vec![-1]], &[-1, 0]);
        match lp_feasible(&q).unwrap() {
            Feasibility::Infeasible { certificate } => assert!(q.verifies_infeasibility(&certificate).unwrap()),
            other => panic!("{other:?}"),
        }
        assert_eq!(polytope_dimension(&q), Err(Error::EmptyPolytope));
    }

    #[test]
    fn rational_vertex() {
        // maximize x subject to 3x + 2y ≤ 1, y ≥ 0
        let q = query(&[vec![-3, -2], vec![0, 1]], &[1, 0]);
        match lp_maximize(&q, &[int(1), int(0)]).unwrap() {
            Optimum::Optimal { value, .. } => assert_eq!(value, rat(1, 3)),
            other => panic!("{other:?}"),
        }
    }
}
