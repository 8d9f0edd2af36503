//! Which distributions are determined by, or consistent with, their marginals.

use num_traits::{One, Zero};
use serde::Serialize;

use super::family::{compatibility_check, MarginalFamily};
use super::{restriction_matrix, Distribution, SignedMeasure, SystemSpec};
use crate::error::{Error, Result};
use crate::exactla::{
    kernel_basis, lp_maximize, nonnegative_solution, polytope_dimension, positive_support, rank, solve, NonnegativeSolve,
    Optimum, PolytopeQuery, RatMatrix,
};
use crate::rational::{format_rat, serde_rat, serde_rat_vec, Rat};

/// Answer to "is this family the restriction of some distribution?".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Observability {
    /// A distribution restricting to the family.
    Observable {
        #[serde(with = "serde_rat_vec")]
        witness: Vec<Rat>,
    },
    /// Slices are consistent but do not sum to one.
    NotNormalized {
        #[serde(with = "serde_rat")]
        total: Rat,
    },
    /// No signed measure restricts to the family.
    NoSignedSolution,
    /// Signed solutions exist, none nonnegative. `certificate` is `z ≥ 0` on
    /// arrangements, orthogonal to the kernel, with `z·signed_solution < 0`.
    NoNonnegativeSolution {
        #[serde(with = "serde_rat_vec")]
        signed_solution: Vec<Rat>,
        #[serde(with = "serde_rat_vec")]
        certificate: Vec<Rat>,
    },
}

/// Kernel basis of the restriction as the columns of a matrix.
fn kernel_columns(s: &SystemSpec) -> Result<(RatMatrix, Vec<Vec<Rat>>)> {
    let m = restriction_matrix(s)?.to_rat();
    let basis = kernel_basis(&m);
    let cols = RatMatrix::from_fn(s.arrangement_count(), basis.len(), |i, j| basis[j][i].clone());
    Ok((cols, basis))
}

/// Decides observability. Incompatible families are rejected before any solving.
pub fn observability_check(fam: &MarginalFamily) -> Result<Observability> {
    let s = fam.spec;
    let verdict = compatibility_check(fam)?;
    if let Some(v) = verdict.violation {
        return Err(Error::invalid(format!("family is incompatible: {v}")));
    }
    if let Some(total) = fam.slice_totals().first() {
        if !total.is_one() {
            return Ok(Observability::NotNormalized { total: total.clone() });
        }
    }
    let m = restriction_matrix(&s)?.to_rat();
    let Some(q) = solve(&m, &fam.values)? else {
        return Ok(Observability::NoSignedSolution);
    };
    match nonnegative_solution(&m, &fam.values)? {
        NonnegativeSolve::Solution(p) => Ok(Observability::Observable { witness: p }),
        NonnegativeSolve::Farkas(w) => {
            // z = −Mᵀw is nonnegative, lies in the row space and has z·q = −w·f < 0
            let certificate: Vec<Rat> = m.transpose().mul_vec(&w)?.into_iter().map(|x| -x).collect();
            let (k, _) = kernel_columns(&s)?;
            if !PolytopeQuery::new(k, q.clone())?.verifies_infeasibility(&certificate)? {
                return Err(Error::internal("observability certificate failed exact verification"));
            }
            Ok(Observability::NoNonnegativeSolution {
                signed_solution: q,
                certificate,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegeneracyReport {
    /// Dimension of the set of distributions sharing the marginals.
    pub dimension: usize,
    /// Dimension of the kernel of the restriction.
    pub nullity: usize,
    pub interior: bool,
    #[serde(serialize_with = "serialize_basis")]
    pub kernel_basis: Vec<Vec<Rat>>,
}

fn serialize_basis<S: serde::Serializer>(b: &[Vec<Rat>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(b.len()))?;
    for v in b {
        seq.serialize_element(&v.iter().map(format_rat).collect::<Vec<_>>())?;
    }
    seq.end()
}

/// Largest system whose fiber dimension is recomputed in kernel coordinates.
pub const SLACK_CROSS_CHECK: usize = 64;

/// Dimension of the fiber `{p ≥ 0 : M^k p = M^k p*}` through `p*`.
pub fn degeneracy(s: &SystemSpec, p_star: &Distribution) -> Result<DegeneracyReport> {
    if p_star.values.len() != s.arrangement_count() {
        return Err(Error::DimensionMismatch(format!(
            "distribution has {} entries, {s} has {} arrangements",
            p_star.values.len(),
            s.arrangement_count()
        )));
    }
    let m = restriction_matrix(s)?.to_rat();
    let target = m.mul_vec(&p_star.values)?;
    // the fiber spans the kernel of the restriction on its largest support
    let support = positive_support(&m, &target, &p_star.values)?;
    let cols: Vec<usize> = (0..support.len()).filter(|&j| support[j]).collect();
    let on_support = RatMatrix::from_fn(m.rows(), cols.len(), |i, j| m.get(i, cols[j]).clone());
    let dimension = cols.len() - rank(&on_support);
    let (k, basis) = kernel_columns(s)?;
    let nullity = basis.len();
    if dimension > nullity || (p_star.is_interior() && dimension != nullity) {
        return Err(Error::internal(format!("fiber dimension {dimension} inconsistent with nullity {nullity}")));
    }
    if s.arrangement_count() <= SLACK_CROSS_CHECK {
        let query = PolytopeQuery::new(k, p_star.values.clone())?;
        let by_slacks = polytope_dimension(&query)?;
        if by_slacks != dimension {
            return Err(Error::internal(format!(
                "fiber dimension {dimension} from supports, {by_slacks} from slack maximization"
            )));
        }
    }
    Ok(DegeneracyReport {
        dimension,
        nullity,
        interior: p_star.is_interior(),
        kernel_basis: basis,
    })
}

/// The segment `{p* + t·v ≥ 0}` of a fiber along a kernel direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberSegment {
    #[serde(with = "serde_rat")]
    pub lower: Rat,
    #[serde(with = "serde_rat")]
    pub upper: Rat,
    #[serde(with = "serde_rat_vec")]
    pub lower_point: Vec<Rat>,
    #[serde(with = "serde_rat_vec")]
    pub upper_point: Vec<Rat>,
}

pub fn fiber_segment(s: &SystemSpec, p_star: &Distribution, direction: &[Rat]) -> Result<FiberSegment> {
    let m = restriction_matrix(s)?;
    if direction.len() != s.arrangement_count() || m.mul_vec(direction).iter().any(|x| !x.is_zero()) {
        return Err(Error::invalid("direction is not in the kernel of the restriction"));
    }
    if direction.iter().all(Zero::is_zero) {
        return Err(Error::invalid("direction is zero"));
    }
    let k = RatMatrix::from_fn(direction.len(), 1, |i, _| direction[i].clone());
    let query = PolytopeQuery::new(k, p_star.values.clone())?;
    let extreme = |sign: Rat| -> Result<Rat> {
        match lp_maximize(&query, &[sign.clone()])? {
            Optimum::Optimal { point, .. } => Ok(point[0].clone()),
            Optimum::Unbounded => Err(Error::internal("fiber of a distribution is bounded")),
            Optimum::Infeasible { .. } => Err(Error::internal("fiber contains p*")),
        }
    };
    let upper = extreme(Rat::one())?;
    let lower = extreme(-Rat::one())?;
    let at = |t: &Rat| -> Vec<Rat> { p_star.values.iter().zip(direction).map(|(p, v)| p + t * v).collect() };
    Ok(FiberSegment {
        lower_point: at(&lower),
        upper_point: at(&upper),
        lower,
        upper,
    })
}

/// Kernel vectors of the restriction as signed measures of total mass zero.
pub fn kernel_measures(s: &SystemSpec) -> Result<Vec<Vec<Rat>>> {
    Ok(kernel_columns(s)?.1)
}

/// `p* + v` when it is a signed measure, for constructing counterexamples.
pub fn perturb(p_star: &Distribution, v: &[Rat]) -> Result<SignedMeasure> {
    SignedMeasure::new(p_star.values.iter().zip(v).map(|(a, b)| a + b).collect())
}
