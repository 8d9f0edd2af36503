//! Certified exact rank, kernel and linear solves.
//!
//! Reduced echelon forms are computed modulo several primes, the kernel is
//! lifted to the rationals by Chinese remaindering and rational
//! reconstruction, and every lifted vector is checked against the original
//! matrix in exact integer arithmetic. Because the rank modulo a prime never
//! exceeds the rational rank, `cols - rank_p` verified independent kernel
//! vectors prove `rank = rank_p`. If reconstruction does not settle within a
//! fixed number of primes, a plain rational Gauss–Jordan elimination is used.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::RatMatrix;
use super::modular::{crt_step, eliminate, primes, rank_mod, rational_reconstruction, IntMatrix};
use crate::error::{Error, Result};
use crate::rational::{common_denominator, scale_to_integers, Rat};

const MAX_LIFT_PRIMES: usize = 48;

/// Rank, pivot columns and a kernel basis indexed by free columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// `(free column f, v)` with `v[f] = 1`, `v` zero on the other free columns.
    pub kernel: Vec<(usize, Vec<Rat>)>,
}

pub fn int_matrix(m: &RatMatrix) -> IntMatrix {
    IntMatrix::from_big_rows(m.integer_rows(), m.cols())
}

/// Exact rank and kernel of `m`.
pub fn echelon(m: &RatMatrix) -> Echelon {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 || m.is_zero() {
        return Echelon {
            rank: 0,
            pivots: vec![],
            kernel: (0..cols).map(|f| (f, unit(cols, f))).collect(),
        };
    }
    let int = int_matrix(m);
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = Vec::new();
    for &p in primes().iter().take(MAX_LIFT_PRIMES) {
        let e = eliminate(int.residues(p), rows, cols, p, true);
        let rref = e.rref.expect("full elimination keeps the echelon form");
        let candidate = (e.rank, e.pivots);
        let better = match &best {
            None => true,
            Some((r, piv)) => candidate.0 > *r || (candidate.0 == *r && candidate.1 < *piv),
        };
        if better {
            best = Some(candidate.clone());
            modulus = BigInt::one();
            acc.clear();
        } else if best.as_ref() != Some(&candidate) {
            continue;
        }
        let (rank, pivots) = candidate;
        if rank == cols {
            return Echelon { rank, pivots, kernel: vec![] };
        }
        let free = free_columns(&pivots, cols);
        let residues: Vec<u64> = (0..rank)
            .flat_map(|i| free.iter().map(move |&f| (i, f)))
            .map(|(i, f)| rref[i * cols + f])
            .collect();
        if acc.is_empty() {
            acc = residues.iter().map(|&x| BigInt::from(x)).collect();
        } else {
            for (a, &y) in acc.iter_mut().zip(&residues) {
                *a = crt_step(a, &modulus, y, p);
            }
        }
        modulus *= BigInt::from(p);
        if let Some(kernel) = try_lift(&int, &acc, &modulus, &pivots, &free, cols) {
            return Echelon { rank, pivots, kernel };
        }
    }
    rational_echelon(m)
}

fn try_lift(
    int: &IntMatrix,
    acc: &[BigInt],
    modulus: &BigInt,
    pivots: &[usize],
    free: &[usize],
    cols: usize,
) -> Option<Vec<(usize, Vec<Rat>)>> {
    let values: Vec<Rat> = acc
        .iter()
        .map(|a| rational_reconstruction(a, modulus))
        .collect::<Option<_>>()?;
    let nf = free.len();
    let mut kernel = Vec::with_capacity(nf);
    for (fi, &f) in free.iter().enumerate() {
        let mut v = vec![Rat::zero(); cols];
        v[f] = Rat::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -values[i * nf + fi].clone();
        }
        if !int.annihilates(&scale_to_integers(&v)) {
            return None;
        }
        kernel.push((f, v));
    }
    Some(kernel)
}

fn free_columns(pivots: &[usize], cols: usize) -> Vec<usize> {
    let mut is_pivot = vec![false; cols];
    pivots.iter().for_each(|&c| is_pivot[c] = true);
    (0..cols).filter(|&c| !is_pivot[c]).collect()
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

/// Gauss–Jordan over the rationals.
pub fn rational_echelon(m: &RatMatrix) -> Echelon {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.row_vecs();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let kernel = free_columns(&pivots, cols)
        .into_iter()
        .map(|f| {
            let mut v = unit(cols, f);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][f].clone();
            }
            (f, v)
        })
        .collect();
    Echelon { rank: r, pivots, kernel }
}

/// Exact `(rank, nullity)` with `nullity = cols - rank`.
pub fn rank_nullity(m: &RatMatrix) -> (usize, usize) {
    let (rows, cols) = (m.rows(), m.cols());
    if rows > 0 && cols > 0 {
        let r = rank_mod(&int_matrix(m), primes()[0]);
        if r == rows.min(cols) {
            return (r, cols - r);
        }
    }
    let e = echelon(m);
    (e.rank, cols - e.rank)
}

pub fn rank(m: &RatMatrix) -> usize {
    rank_nullity(m).0
}

/// Upper bound on the nullity from elimination modulo `tries` primes.
pub fn modular_nullity_bound(m: &IntMatrix, tries: usize) -> usize {
    primes()
        .iter()
        .take(tries.max(1))
        .map(|&p| m.cols() - rank_mod(m, p))
        .min()
        .unwrap()
}

/// Basis of the right null space, each vector scaled so its first nonzero entry is 1.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<Rat>> {
    echelon(m)
        .kernel
        .into_iter()
        .map(|(_, v)| normalize_leading(v))
        .collect()
}

pub fn normalize_leading(mut v: Vec<Rat>) -> Vec<Rat> {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        v.iter_mut().for_each(|x| *x /= &lead);
    }
    v
}

/// One exact solution of `m·x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &RatMatrix, b: &[Rat]) -> Result<Option<Vec<Rat>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows()
        )));
    }
    let cols = m.cols();
    let augmented = RatMatrix::from_fn(m.rows(), cols + 1, |i, j| {
        if j < cols {
            m.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let e = echelon(&augmented);
    Ok(e
        .kernel
        .into_iter()
        .find(|(f, _)| *f == cols)
        .map(|(_, v)| v[..cols].iter().map(|x| -x).collect()))
}

/// Exact determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &RatMatrix) -> Result<Rat> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Rat::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            scale *= common_denominator(m.row(i));
            scale_to_integers(m.row(i))
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(Rat::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(Rat::new(sign * &a[n - 1][n - 1], scale))
}

/// Checks an integer vector is a nonzero element of the kernel.
pub fn is_kernel_vector(m: &RatMatrix, v: &[Rat]) -> Result<bool> {
    Ok(v.iter().any(|x| !x.is_zero()) && m.mul_vec(v)?.iter().all(Zero::is_zero))
}

pub fn abs_max(v: &[Rat]) -> Rat {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank_nullity(&RatMatrix::identity(5)), (5, 0));
        assert_eq!(rank_nullity(&RatMatrix::zeros(3, 4)), (0, 4));
        assert_eq!(rank_nullity(&m(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]])), (2, 1));
        assert!(kernel_basis(&RatMatrix::identity(4)).is_empty());
    }

    #[test]
    fn kernel_of_singular_matrix() {
        let a = m(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        let k = kernel_basis(&a);
        assert_eq!(k, vec![vec![int(1), int(-2), int(1)]]);
        assert_eq!(rational_echelon(&a).rank, 2);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&RatMatrix::identity(4)).unwrap(), int(1));
        assert_eq!(determinant(&m(&[vec![1, 2], vec![3, 4]])).unwrap(), int(-2));
        assert_eq!(determinant(&m(&[vec![0, 1], vec![1, 0]])).unwrap(), int(-1));
        let half = RatMatrix::from_rows(vec![vec![rat(1, 2), int(0)], vec![int(0), rat(2, 3)]]).unwrap();
        assert_eq!(determinant(&half).unwrap(), rat(1, 3));
        assert!(determinant(&RatMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn solves() {
        let a = m(&[vec![1, 1], vec![1, -1]]);
        assert_eq!(solve(&a, &[int(3), int(1)]).unwrap(), Some(vec![int(2), int(1)]));
        let singular = m(&[vec![1, 1], vec![2, 2]]);
        assert_eq!(solve(&singular, &[int(1), int(3)]).unwrap(), None);
        let x = solve(&singular, &[int(1), int(2)]).unwrap().unwrap();
        assert_eq!(singular.mul_vec(&x).unwrap(), vec![int(1), int(2)]);
    }

    #[test]
    fn large_denominators_lift() {
        // kernel entries need more than one prime to reconstruct
        let big = 1_000_003i64 * 999_983;
        let a = m(&[vec![big, 1, 0], vec![0, big - 7, 3]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        assert!(is_kernel_vector(&a, &k[0]).unwrap());
        assert_eq!(k, rational_echelon(&a).kernel.into_iter().map(|(_, v)| normalize_leading(v)).collect::<Vec<_>>());
    }
}
