//! Elimination modulo word-sized primes.
//!
//! Primes stay below `2^21`, so a product of two residues is below `2^42`
//! and millions of such products can be accumulated in a `u64` before any
//! reduction is needed. Rows are reduced only when a pivot is read or when a
//! row becomes the pivot row.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rat;

/// Primes below `2^21`, largest first.
pub fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut candidate: u64 = (1 << 21) - 1;
        while out.len() < 256 {
            if is_prime(candidate) {
                out.push(candidate);
            }
            candidate -= 2;
        }
        out
    })
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Integer matrix with a compact representation when entries fit in `i64`.
#[derive(Clone, Debug)]
pub enum IntMatrix {
    Small { rows: usize, cols: usize, data: Vec<i64> },
    Big { rows: usize, cols: usize, data: Vec<BigInt> },
}

impl IntMatrix {
    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        let data: Vec<BigInt> = rows.into_iter().flatten().collect();
        match data.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>() {
            Some(small) => IntMatrix::Small { rows: r, cols, data: small },
            None => IntMatrix::Big { rows: r, cols, data },
        }
    }

    pub fn from_small(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix::Small { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        match self {
            IntMatrix::Small { rows, .. } | IntMatrix::Big { rows, .. } => *rows,
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            IntMatrix::Small { cols, .. } | IntMatrix::Big { cols, .. } => *cols,
        }
    }

    pub fn residues(&self, p: u64) -> Vec<u64> {
        match self {
            IntMatrix::Small { data, .. } => {
                data.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect()
            }
            IntMatrix::Big { data, .. } => {
                let bp = BigInt::from(p);
                data.iter()
                    .map(|x| x.mod_floor(&bp).to_u64().expect("residue below p"))
                    .collect()
            }
        }
    }

    /// Exact test `self · v = 0`.
    pub fn annihilates(&self, v: &[BigInt]) -> bool {
        let cols = self.cols();
        let support: Vec<usize> = (0..cols).filter(|&j| !v[j].is_zero()).collect();
        match self {
            IntMatrix::Small { rows, data, .. } => {
                let small: Option<Vec<i64>> = v.iter().map(|x| x.to_i64()).collect();
                if let Some(sv) = small {
                    'rows: for i in 0..*rows {
                        let row = &data[i * cols..(i + 1) * cols];
                        let mut acc: i128 = 0;
                        for &j in &support {
                            let term = row[j] as i128 * sv[j] as i128;
                            match acc.checked_add(term) {
                                Some(a) => acc = a,
                                None => {
                                    if !big_row_zero(row.iter().map(|&x| BigInt::from(x)), v) {
                                        return false;
                                    }
                                    continue 'rows;
                                }
                            }
                        }
                        if acc != 0 {
                            return false;
                        }
                    }
                    true
                } else {
                    (0..*rows).all(|i| {
                        big_row_zero(data[i * cols..(i + 1) * cols].iter().map(|&x| BigInt::from(x)), v)
                    })
                }
            }
            IntMatrix::Big { rows, data, .. } => {
                (0..*rows).all(|i| big_row_zero(data[i * cols..(i + 1) * cols].iter().cloned(), v))
            }
        }
    }
}

fn big_row_zero(row: impl Iterator<Item = BigInt>, v: &[BigInt]) -> bool {
    row.zip(v)
        .fold(BigInt::zero(), |acc, (a, b)| if a.is_zero() || b.is_zero() { acc } else { acc + a * b })
        .is_zero()
}

/// Result of elimination modulo one prime.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    pub prime: u64,
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// Reduced row echelon form, `rank` rows by `cols`, present only when requested.
    pub rref: Option<Vec<u64>>,
    pub cols: usize,
}

/// Row echelon elimination of `a` (row-major, residues `< p`) in place.
///
/// With `full` the result is the reduced row echelon form.
pub fn eliminate(mut a: Vec<u64>, rows: usize, cols: usize, p: u64, full: bool) -> ModEchelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut found = None;
        for i in r..rows {
            let x = a[i * cols + c] % p;
            a[i * cols + c] = x;
            if x != 0 {
                found = Some(i);
                break;
            }
        }
        let Some(piv) = found else { continue };
        if piv != r {
            for j in 0..cols {
                a.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = inv_mod(a[r * cols + c], p);
        for j in c..cols {
            let x = a[r * cols + j] % p;
            a[r * cols + j] = x * inv % p;
        }
        let (head, tail) = a.split_at_mut(r * cols);
        let (pivot_row, below) = tail.split_at_mut(cols);
        let pivot_row = &pivot_row[..];
        let nz: Vec<usize> = (c + 1..cols).filter(|&j| pivot_row[j] != 0).collect();
        let clear = |row: &mut [u64]| {
            let x = row[c] % p;
            row[c] = 0;
            if x == 0 {
                return;
            }
            let f = p - x;
            for &j in &nz {
                row[j] += f * pivot_row[j];
            }
        };
        for row in below.chunks_mut(cols) {
            clear(row);
        }
        if full {
            for row in head.chunks_mut(cols) {
                clear(row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rref = full.then(|| {
        a.truncate(r * cols);
        a.iter_mut().for_each(|x| *x %= p);
        a
    });
    ModEchelon {
        prime: p,
        rank: r,
        pivots,
        rref,
        cols,
    }
}

/// Rank of an integer matrix modulo `p`.
pub fn rank_mod(m: &IntMatrix, p: u64) -> usize {
    if m.rows() * m.cols() == 0 {
        return 0;
    }
    eliminate(m.residues(p), m.rows(), m.cols(), p, false).rank
}

/// Chinese remaindering: combine `x mod m1` with `y mod p`.
pub fn crt_step(x: &BigInt, m1: &BigInt, y: u64, p: u64) -> BigInt {
    let bp = BigInt::from(p);
    let xm = x.mod_floor(&bp).to_u64().unwrap();
    let m1p = m1.mod_floor(&bp).to_u64().unwrap();
    let t = (y + p - xm) % p * inv_mod(m1p, p) % p;
    x + m1 * BigInt::from(t)
}

/// Rational reconstruction: finds `r/s ≡ a (mod n)` with `|r|, s ≤ sqrt(n/2)`.
pub fn rational_reconstruction(a: &BigInt, n: &BigInt) -> Option<Rat> {
    let a = a.mod_floor(n);
    let bound = (n >> 1u32).sqrt();
    let (mut r0, mut r1) = (n.clone(), a);
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r2) = r0.div_rem(&r1);
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Rat::new(r1, s1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn prime_table() {
        let ps = primes();
        assert_eq!(ps[0], 2_097_143);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| p < 1 << 21 && is_prime(p)));
    }

    #[test]
    fn reconstruction() {
        let p = BigInt::from(primes()[0]) * BigInt::from(primes()[1]);
        for (n, d) in [(1i64, 3i64), (-5, 7), (12345, 1), (0, 1), (-1, 2)] {
            let target = rat(n, d);
            let inv = mod_inverse_big(&BigInt::from(d), &p);
            let a = (BigInt::from(n) * inv).mod_floor(&p);
            assert_eq!(rational_reconstruction(&a, &p), Some(target));
        }
    }

    fn mod_inverse_big(a: &BigInt, n: &BigInt) -> BigInt {
        let e = a.extended_gcd(n);
        e.x.mod_floor(n)
    }

    #[test]
    fn crt_combines() {
        let (p, q) = (primes()[0], primes()[1]);
        let x = BigInt::from(123_456_789_012u64);
        let r = crt_step(&(&x % p), &BigInt::from(p), (&x % q).to_u64().unwrap(), q);
        assert_eq!(r, x);
    }

    #[test]
    fn modular_rank() {
        let m = IntMatrix::from_small(3, 3, vec![1, 2, 3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(rank_mod(&m, primes()[0]), 2);
        let e = eliminate(m.residues(7), 3, 3, 7, true);
        assert_eq!(e.pivots, vec![0, 1]);
    }
}
