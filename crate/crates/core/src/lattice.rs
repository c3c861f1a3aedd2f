//! Exact invariants of integral Gram matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Square matrix of exact rationals, row-major.
pub type RationalMatrix = Vec<Vec<BigRational>>;

/// Largest dimension handled by [`congruent_up_to_signed_permutation`].
pub const MAX_CONGRUENCE_DIM: usize = 24;

/// Invariants of a non-degenerate integral lattice given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeInvariants {
    pub dimension: usize,
    pub determinant: BigInt,
    /// Smith normal form diagonal `d_1 | d_2 | ... | d_n`.
    pub elementary_divisors: Vec<BigInt>,
    pub modular_level: BigInt,
    pub is_even: bool,
    pub is_positive_definite: bool,
}

impl LatticeInvariants {
    /// Order of the dual quotient `L*/L`.
    pub fn dual_quotient_order(&self) -> BigInt {
        self.elementary_divisors.iter().product()
    }
}

/// Computes every field of [`LatticeInvariants`].
pub fn invariants(a: &IntMatrix) -> Result<LatticeInvariants> {
    let determinant = determinant(a)?;
    if determinant.is_zero() {
        return Err(Error::domain("Gram matrix is singular"));
    }
    Ok(LatticeInvariants {
        dimension: a.rows(),
        elementary_divisors: smith_normal_form(a),
        modular_level: modular_level(a)?,
        is_even: is_even(a),
        is_positive_definite: is_positive_definite(a),
        determinant,
    })
}

/// Runs fraction-free (Bareiss) elimination without pivoting and returns the
/// successive pivots, which are the leading principal minors. Stops early at
/// the first zero pivot.
fn bareiss_pivots(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows();
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut prev = BigInt::one();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let piv = m[k][k].clone();
        pivots.push(piv.clone());
        if piv.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &piv - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = piv;
    }
    pivots
}

/// Exact determinant by Bareiss elimination with row pivoting.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::domain("determinant of a non-square matrix"));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut prev = BigInt::one();
    let mut sign = 1;
    for k in 0..n {
        let Some(pr) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if pr != k {
            m.swap(pr, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Ok(if sign < 0 { -prev } else { prev })
}

/// Exact rank over the rationals, by fraction-free elimination with full
/// row and column search for pivots.
pub fn rank(a: &IntMatrix) -> usize {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<BigInt>> = (0..rows).map(|i| a.row(i).to_vec()).collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(pr, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[i][j] * &m[r][c] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Positive definiteness by positivity of all leading principal minors.
pub fn is_positive_definite(a: &IntMatrix) -> bool {
    if !a.is_symmetric() {
        return false;
    }
    let pivots = bareiss_pivots(a);
    pivots.len() == a.rows() && pivots.iter().all(Signed::is_positive)
}

/// Symmetric with even diagonal.
pub fn is_even(a: &IntMatrix) -> bool {
    a.is_symmetric() && (0..a.rows()).all(|i| a[(i, i)].is_even())
}

/// Smith normal form diagonal, each entry non-negative and dividing the next.
/// Zeros (from a rank deficiency) come last.
pub fn smith_normal_form(a: &IntMatrix) -> Vec<BigInt> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<BigInt>> = (0..rows).map(|i| a.row(i).to_vec()).collect();
    let mut diag = Vec::new();
    let size = rows.min(cols);
    for t in 0..size {
        // Pivot on the smallest non-zero entry of the remaining block.
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.resize(size, BigInt::zero());
                return normalize_chain(diag);
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if !m[i][t].is_zero() {
                    let f = m[i][t].div_floor(&m[t][t]);
                    for j in t..cols {
                        let v = &m[t][j] * &f;
                        m[i][j] -= v;
                    }
                    clean &= m[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !m[t][j].is_zero() {
                    let f = m[t][j].div_floor(&m[t][t]);
                    for i in t..rows {
                        let v = &m[i][t] * &f;
                        m[i][j] -= v;
                    }
                    clean &= m[t][j].is_zero();
                }
            }
            if clean {
                break;
            }
        }
        diag.push(m[t][t].abs());
    }
    normalize_chain(diag)
}

// Turns any diagonal into the divisor chain of the same group.
fn normalize_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let (g, l) = (d[i].gcd(&d[j]), d[i].lcm(&d[j]));
            d[i] = g;
            d[j] = l;
        }
    }
    // gcd with 0 keeps the other value, lcm with 0 is 0, so zeros sink.
    d
}

/// Exact inverse by Gauss-Jordan elimination over the rationals.
pub fn rational_inverse(a: &IntMatrix) -> Result<RationalMatrix> {
    if !a.is_square() {
        return Err(Error::domain("inverse of a non-square matrix"));
    }
    let n = a.rows();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = a.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for k in 0..n {
        let pr = (k..n)
            .find(|&r| !m[r][k].is_zero())
            .ok_or_else(|| Error::domain("matrix is singular"))?;
        m.swap(pr, k);
        let inv = m[k][k].recip();
        for x in m[k].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[k].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Smallest `l > 0` with `l·A⁻¹` integral and of even diagonal.
pub fn modular_level(a: &IntMatrix) -> Result<BigInt> {
    let k = rational_inverse(a)?;
    let two = BigInt::from(2);
    let mut level = BigInt::one();
    for (i, row) in k.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let den = if i == j { (x / &two).denom().clone() } else { x.denom().clone() };
            level = level.lcm(&den);
        }
    }
    Ok(level)
}

/// A signed permutation `S` with `S^T A S = B`: column `j` of `S` has the
/// entry `sign[j]` in row `perm[j]`, so `B[i][j] = sign[i] sign[j] A[perm[i]][perm[j]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub sign: Vec<i8>,
}

impl SignedPermutation {
    pub fn matrix(&self) -> IntMatrix {
        let n = self.perm.len();
        let mut s = IntMatrix::zeros(n, n);
        for j in 0..n {
            s[(self.perm[j], j)] = BigInt::from(self.sign[j]);
        }
        s
    }
}

/// Whether `S^T A S = B` for some signed permutation matrix `S`.
pub fn congruent_up_to_signed_permutation(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    Ok(find_signed_permutation(a, b)?.is_some())
}

/// Backtracking search for a signed permutation relating two symmetric
/// matrices. Candidates are pruned by diagonal entry and by the multiset of
/// absolute row entries; signs are forced by any earlier non-zero entry.
pub fn find_signed_permutation(a: &IntMatrix, b: &IntMatrix) -> Result<Option<SignedPermutation>> {
    let n = a.rows();
    if !a.is_square() || !b.is_square() || b.rows() != n {
        return Ok(None);
    }
    if n > MAX_CONGRUENCE_DIM {
        return Err(Error::Unsupported(format!(
            "signed-permutation search is limited to dimension {MAX_CONGRUENCE_DIM}, got {n}"
        )));
    }
    if determinant(a)? != determinant(b)? {
        return Ok(None);
    }
    let profile = |m: &IntMatrix, i: usize| {
        let mut v: Vec<BigInt> = m.row(i).iter().map(Signed::abs).collect();
        v.sort();
        (m[(i, i)].clone(), v)
    };
    let pa: Vec<_> = (0..n).map(|i| profile(a, i)).collect();
    let pb: Vec<_> = (0..n).map(|i| profile(b, i)).collect();
    let candidates: Vec<Vec<usize>> = (0..n).map(|j| (0..n).filter(|&i| pa[i] == pb[j]).collect()).collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(None);
    }

    struct Search<'a> {
        a: &'a IntMatrix,
        b: &'a IntMatrix,
        candidates: Vec<Vec<usize>>,
        perm: Vec<usize>,
        sign: Vec<i8>,
        used: Vec<bool>,
    }

    impl Search<'_> {
        fn extend(&mut self, j: usize) -> bool {
            let n = self.perm.len();
            if j == n {
                return true;
            }
            for c in 0..self.candidates[j].len() {
                let i = self.candidates[j][c];
                if self.used[i] {
                    continue;
                }
                // Sign forced by the first earlier index with B[j'][j] != 0.
                let forced = (0..j).find(|&jp| !self.b[(jp, j)].is_zero()).map(|jp| {
                    let lhs = &self.a[(self.perm[jp], i)] * BigInt::from(self.sign[jp]);
                    if lhs == self.b[(jp, j)] {
                        Some(1i8)
                    } else if -lhs == self.b[(jp, j)] {
                        Some(-1i8)
                    } else {
                        None
                    }
                });
                let signs: &[i8] = match forced {
                    None => &[1, -1],
                    Some(Some(1)) => &[1],
                    Some(Some(_)) => &[-1],
                    Some(None) => continue,
                };
                for &s in signs {
                    let consistent = (0..j).all(|jp| {
                        let v = &self.a[(self.perm[jp], i)] * BigInt::from(self.sign[jp] * s);
                        v == self.b[(jp, j)]
                    });
                    if !consistent {
                        continue;
                    }
                    self.perm[j] = i;
                    self.sign[j] = s;
                    self.used[i] = true;
                    if self.extend(j + 1) {
                        return true;
                    }
                    self.used[i] = false;
                }
            }
            false
        }
    }

    let mut search = Search { a, b, candidates, perm: vec![0; n], sign: vec![1; n], used: vec![false; n] };
    Ok(search.extend(0).then_some(SignedPermutation { perm: search.perm, sign: search.sign }))
}
