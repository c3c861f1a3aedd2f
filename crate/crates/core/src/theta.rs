//! Theta series of even positive definite lattices by short-vector
//! enumeration.
//!
//! Coefficient `c_m` counts the vectors `x` with `xᵀAx = 2m`, so an even
//! lattice's series is written in `q₂ = q²`.
//!
//! The Gram matrix is first LLL-reduced (an exact unimodular change of
//! basis). Enumeration then walks coordinates from last to first using a
//! floating-point Cholesky factor for interval pruning, widened by a small
//! safety margin, while the exact integer norm of each candidate is carried
//! alongside; only exact norms are counted.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice;
use crate::matrix::IntMatrix;
use crate::reduction::{self, ReducedForm};

/// Relative and absolute slack added to every pruning bound.
const REL_MARGIN: f64 = 1e-9;
const ABS_MARGIN: f64 = 1e-6;

/// Top-level jobs per worker thread when splitting the search tree.
/// Block size used to pre-reduce large forms before enumeration.
const BKZ_BLOCK: usize = 20;

const JOBS_PER_THREAD: usize = 32;

/// Counts `c_0 … c_M` of lattice vectors by half-norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSeries {
    pub coefficients: Vec<BigInt>,
}

impl ThetaSeries {
    pub fn max_index(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// First non-empty shell above zero as `(norm, count)`.
    pub fn kissing_term(&self) -> Option<(u64, BigInt)> {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, c)| !c.is_zero())
            .map(|(m, c)| (2 * m as u64, c.clone()))
    }
}

/// Lower-triangular Cholesky factor data `Q(x) = Σ d_i (x_i + Σ_{j>i} mu_ij x_j)²`.
#[derive(Clone, Debug)]
struct Cholesky {
    d: Vec<f64>,
    /// `mu[i][j]` for `j > i`.
    mu: Vec<Vec<f64>>,
}

fn cholesky(g: &[Vec<i64>]) -> Option<Cholesky> {
    let n = g.len();
    // Eliminate from the last coordinate down so that x_{n-1} is fixed first.
    let mut a: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let mut d = vec![0.0; n];
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        if a[i][i] <= 0.0 {
            return None;
        }
        d[i] = a[i][i];
        for j in i + 1..n {
            mu[i][j] = a[i][j] / d[i];
        }
        for j in i + 1..n {
            for l in i + 1..n {
                a[j][l] -= mu[i][j] * mu[i][l] * d[i];
            }
        }
    }
    Some(Cholesky { d, mu })
}

/// Checks the preconditions shared by the enumeration entry points.
fn prepare(a: &IntMatrix) -> Result<ReducedForm> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::domain("Gram matrix must be square and non-empty"));
    }
    if !lattice::is_positive_definite(a) {
        return Err(Error::domain("Gram matrix is not positive definite"));
    }
    if !lattice::is_even(a) {
        return Err(Error::domain("Gram matrix is not even"));
    }
    let n = a.rows();
    reduction::bkz_reduce(a, if n > 16 { BKZ_BLOCK } else { 0 })
}

/// Search state for one enumeration subtree.
struct Enumerator<'a> {
    g: &'a [Vec<i64>],
    chol: &'a Cholesky,
    bound: i64,
    fbound: f64,
    x: Vec<i64>,
    /// `sx[i][r] = Σ_{l ≥ i} g[r][l] x_l` for `r < i`.
    sx: Vec<Vec<i64>>,
    /// `cc[i][r] = Σ_{j ≥ i} mu[r][j] x_j` for `r < i`.
    cc: Vec<Vec<f64>>,
}

/// What to do with each vector found.
trait Sink {
    fn leaf(&mut self, norm: i64, x: &[i64]);
}

struct Counter(Vec<u64>);

impl Sink for Counter {
    #[inline]
    fn leaf(&mut self, norm: i64, _: &[i64]) {
        self.0[(norm / 2) as usize] += 1;
    }
}

struct Collector {
    min_norm: i64,
    vectors: Vec<(i64, Vec<i64>)>,
}

impl Sink for Collector {
    fn leaf(&mut self, norm: i64, x: &[i64]) {
        if norm >= self.min_norm {
            self.vectors.push((norm, x.to_vec()));
        }
    }
}

impl<'a> Enumerator<'a> {
    fn new(g: &'a [Vec<i64>], chol: &'a Cholesky, bound: i64) -> Self {
        let n = g.len();
        Enumerator {
            g,
            chol,
            bound,
            fbound: bound as f64 * (1.0 + REL_MARGIN) + ABS_MARGIN,
            x: vec![0; n],
            sx: vec![vec![0; n]; n + 1],
            cc: vec![vec![0.0; n]; n + 1],
        }
    }

    /// Integer interval for `x_i` given the float partial sum above it.
    #[inline]
    fn interval(&self, i: usize, fpart: f64) -> Option<(i64, i64)> {
        let rem = self.fbound - fpart;
        if rem < 0.0 {
            return None;
        }
        let c = -self.cc[i + 1][i];
        let rad = (rem / self.chol.d[i]).sqrt();
        let lo = (c - rad).ceil() as i64;
        let hi = (c + rad).floor() as i64;
        (lo <= hi).then_some((lo, hi))
    }

    /// Fixes `x_i` and prepares level `i - 1`.
    #[inline]
    fn set(&mut self, i: usize, v: i64) {
        self.x[i] = v;
        for r in 0..i {
            self.sx[i][r] = self.sx[i + 1][r] + self.g[r][i] * v;
            self.cc[i][r] = self.cc[i + 1][r] + self.chol.mu[r][i] * v as f64;
        }
    }

    /// Enumerates coordinates `i, i-1, …, 0`. `positive_only` restricts
    /// `x_i ≥ 0` while every higher coordinate is zero, keeping one of each
    /// `±x` pair; the zero vector itself is skipped.
    fn descend(&mut self, i: usize, exact: i64, fpart: f64, positive_only: bool, sink: &mut impl Sink) {
        let Some((mut lo, hi)) = self.interval(i, fpart) else {
            return;
        };
        if positive_only {
            lo = lo.max(0);
        }
        let gii = self.g[i][i];
        let s = 2 * self.sx[i + 1][i];
        let c = self.cc[i + 1][i];
        let d = self.chol.d[i];
        if i == 0 {
            for v in lo..=hi {
                if positive_only && v == 0 {
                    continue;
                }
                let norm = exact + v * (s + gii * v);
                if norm <= self.bound {
                    self.x[0] = v;
                    sink.leaf(norm, &self.x);
                }
            }
            return;
        }
        for v in lo..=hi {
            let y = v as f64 + c;
            let fp = fpart + d * y * y;
            if fp > self.fbound {
                continue;
            }
            let e = exact + v * (s + gii * v);
            self.set(i, v);
            self.descend(i - 1, e, fp, positive_only && v == 0, sink);
        }
        self.x[i] = 0;
    }

    /// Replays a fixed prefix of top coordinates; returns the state needed
    /// to continue below it, or `None` if the prefix is pruned.
    fn replay(&mut self, prefix: &[i64]) -> Option<(i64, f64, bool)> {
        let n = self.g.len();
        let (mut exact, mut fpart, mut pos) = (0i64, 0.0f64, true);
        for (t, &v) in prefix.iter().enumerate() {
            let i = n - 1 - t;
            let s = 2 * self.sx[i + 1][i];
            let y = v as f64 + self.cc[i + 1][i];
            fpart += self.chol.d[i] * y * y;
            if fpart > self.fbound {
                return None;
            }
            exact += v * (s + self.g[i][i] * v);
            self.set(i, v);
            pos = pos && v == 0;
        }
        Some((exact, fpart, pos))
    }
}

/// Lists top-level coordinate prefixes until there are enough jobs to share
/// between workers. Every surviving vector extends exactly one prefix.
fn split_jobs(g: &[Vec<i64>], chol: &Cholesky, bound: i64, target: usize) -> Vec<Vec<i64>> {
    let n = g.len();
    let mut jobs: Vec<Vec<i64>> = vec![vec![]];
    while jobs.len() < target && jobs[0].len() + 1 < n {
        let mut next = Vec::new();
        for prefix in &jobs {
            let mut e = Enumerator::new(g, chol, bound);
            let Some((_, fpart, pos)) = e.replay(prefix) else {
                continue;
            };
            let i = n - 1 - prefix.len();
            if let Some((mut lo, hi)) = e.interval(i, fpart) {
                if pos {
                    lo = lo.max(0);
                }
                for v in lo..=hi {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        jobs = next;
    }
    jobs
}

fn run_job(g: &[Vec<i64>], chol: &Cholesky, bound: i64, prefix: &[i64], sink: &mut impl Sink) {
    let n = g.len();
    let mut e = Enumerator::new(g, chol, bound);
    let Some((exact, fpart, pos)) = e.replay(prefix) else {
        return;
    };
    if prefix.len() == n {
        if !pos && exact <= bound {
            sink.leaf(exact, &e.x);
        }
        return;
    }
    e.descend(n - 1 - prefix.len(), exact, fpart, pos, sink);
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Exact coefficients `c_0 … c_M` of the theta series of an even positive
/// definite Gram matrix, using `threads` worker threads.
pub fn theta_coefficients(a: &IntMatrix, max_index: usize, threads: usize) -> Result<ThetaSeries> {
    let red = prepare(a)?;
    let bound = i64::try_from(2 * max_index).map_err(|_| Error::domain("max index too large"))?;
    let chol = cholesky(&red.gram).ok_or_else(|| Error::Internal("floating Cholesky failed".into()))?;
    let jobs = split_jobs(&red.gram, &chol, bound, threads.max(1) * JOBS_PER_THREAD);
    let counts = with_pool(threads, || {
        jobs.par_iter()
            .map(|prefix| {
                let mut c = Counter(vec![0u64; max_index + 1]);
                run_job(&red.gram, &chol, bound, prefix, &mut c);
                c.0
            })
            .reduce(
                || vec![0u64; max_index + 1],
                |mut acc, c| {
                    for (a, b) in acc.iter_mut().zip(c) {
                        *a += b;
                    }
                    acc
                },
            )
    })?;
    let mut coefficients: Vec<BigInt> = counts.into_iter().map(|c| BigInt::from(c) * 2u32).collect();
    coefficients[0] = BigInt::from(1);
    Ok(ThetaSeries { coefficients })
}

/// All lattice vectors with `min_norm ≤ xᵀAx ≤ max_norm`, both signs, in the
/// original coordinates, sorted.
pub fn short_vectors(a: &IntMatrix, min_norm: i64, max_norm: i64, threads: usize) -> Result<Vec<(i64, Vec<i64>)>> {
    let red = prepare(a)?;
    let chol = cholesky(&red.gram).ok_or_else(|| Error::Internal("floating Cholesky failed".into()))?;
    let jobs = split_jobs(&red.gram, &chol, max_norm, threads.max(1) * JOBS_PER_THREAD);
    let found = with_pool(threads, || {
        jobs.par_iter()
            .map(|prefix| {
                let mut c = Collector { min_norm: min_norm.max(1), vectors: Vec::new() };
                run_job(&red.gram, &chol, max_norm, prefix, &mut c);
                c.vectors
            })
            .flatten()
            .collect::<Vec<_>>()
    })?;
    let mut out: Vec<(i64, Vec<i64>)> = found
        .into_iter()
        .flat_map(|(n, y)| {
            let x = red.to_original(&y);
            let neg: Vec<i64> = x.iter().map(|v| -v).collect();
            [(n, x), (n, neg)]
        })
        .collect();
    out.sort();
    Ok(out)
}

/// First non-empty shell above zero, as `(norm, count)`.
pub fn kissing_term(a: &IntMatrix) -> Result<(i64, BigInt)> {
    let red = prepare(a)?;
    // Some reduced basis vector realises a norm no smaller than the minimum.
    let bound = (0..red.gram.len()).map(|i| red.gram[i][i]).min().expect("non-empty");
    let series = theta_coefficients(a, (bound / 2) as usize, 1)?;
    series
        .kissing_term()
        .map(|(n, c)| (n as i64, c))
        .ok_or_else(|| Error::Internal("no vector within the diagonal bound".into()))
}

/// Shell statistics against a set of distinguished vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellReport {
    pub norm: i64,
    pub size: usize,
    /// Shell vectors that belong to the distinguished set.
    pub roots_in_shell: usize,
}

/// For each even norm from 2 to `max_norm`, the shell size and how many of
/// its vectors are among `roots` (coordinates in the same basis as `a`).
/// Also returns how many of `roots` were found in some shell.
pub fn classify_shells(a: &IntMatrix, roots: &[Vec<i64>], max_norm: i64, threads: usize) -> Result<(Vec<ShellReport>, usize)> {
    use std::collections::HashSet;
    let root_set: HashSet<&[i64]> = roots.iter().map(Vec::as_slice).collect();
    let vectors = short_vectors(a, 1, max_norm, threads)?;
    let mut reports = Vec::new();
    let mut matched = 0;
    for norm in (2..=max_norm).step_by(2) {
        let shell: Vec<&Vec<i64>> = vectors.iter().filter(|(n, _)| *n == norm).map(|(_, v)| v).collect();
        let in_roots = shell.iter().filter(|v| root_set.contains(v.as_slice())).count();
        matched += in_roots;
        if !shell.is_empty() {
            reports.push(ShellReport { norm, size: shell.len(), roots_in_shell: in_roots });
        }
    }
    Ok((reports, matched))
}

/// The root expansions of a ribbon as machine vectors, both signs.
pub fn signed_roots(expansions: &[crate::ribbon::HigherRootVector]) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::with_capacity(2 * expansions.len());
    for v in expansions {
        let x: Vec<i64> = v
            .coords
            .iter()
            .map(|c| c.to_i64().ok_or_else(|| Error::Internal("root coordinate exceeds 64 bits".into())))
            .collect::<Result<_>>()?;
        out.push(x.iter().map(|c| -c).collect());
        out.push(x);
    }
    Ok(out)
}

/// `½(ϑ₂(0,q⁴)⁶ + ϑ₃(0,q⁴)⁶ + ϑ₄(0,q⁴)⁶)` read off at `q^{2m}`, `m ≤ max_index`.
pub fn jacobi_cross_check_a1(max_index: usize) -> Vec<BigInt> {
    let deg = 2 * max_index;
    let mut t2 = vec![BigInt::zero(); deg + 1];
    let mut t3 = vec![BigInt::zero(); deg + 1];
    let mut t4 = vec![BigInt::zero(); deg + 1];
    let r = (deg as f64).sqrt() as i64 + 1;
    for m in -r..=r {
        let odd = (2 * m + 1) * (2 * m + 1);
        if odd as usize <= deg {
            t2[odd as usize] += 1;
        }
        let even = (4 * m * m) as usize;
        if even <= deg {
            t3[even] += 1;
            t4[even] += if m % 2 == 0 { 1 } else { -1 };
        }
    }
    let six = |s: &[BigInt]| (0..6).fold(unit(deg), |acc, _| mul_series(&acc, s, deg));
    let (a, b, c) = (six(&t2), six(&t3), six(&t4));
    (0..=max_index)
        .map(|m| {
            let k = 2 * m;
            (&a[k] + &b[k] + &c[k]) / 2
        })
        .collect()
}

fn unit(deg: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); deg + 1];
    v[0] = BigInt::from(1);
    v
}

fn mul_series(a: &[BigInt], b: &[BigInt], deg: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); deg + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(deg + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn one_dimensional() {
        let a = IntMatrix::from_rows(&[[2]]);
        let t = theta_coefficients(&a, 4, 1).unwrap();
        assert_eq!(t.coefficients, big(&[1, 2, 0, 0, 2]));
        assert_eq!(theta_coefficients(&a, 0, 1).unwrap().coefficients, big(&[1]));
    }

    #[test]
    fn hexagonal() {
        let a = IntMatrix::from_rows(&[[2, -1], [-1, 2]]);
        let t = theta_coefficients(&a, 7, 2).unwrap();
        assert_eq!(t.coefficients, big(&[1, 6, 0, 6, 6, 0, 0, 12]));
        assert_eq!(kissing_term(&a).unwrap(), (2, BigInt::from(6)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            theta_coefficients(&IntMatrix::from_rows(&[[2, 3], [3, 2]]), 3, 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(theta_coefficients(&IntMatrix::from_rows(&[[3]]), 3, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn short_vectors_of_a2() {
        let a = IntMatrix::from_rows(&[[2, -1], [-1, 2]]);
        let v = short_vectors(&a, 2, 2, 1).unwrap();
        assert_eq!(v.len(), 6);
        for (n, x) in v {
            assert_eq!(n, 2);
            let q = 2 * x[0] * x[0] - 2 * x[0] * x[1] + 2 * x[1] * x[1];
            assert_eq!(q, 2);
        }
    }

    #[test]
    fn jacobi_prefix() {
        let j = jacobi_cross_check_a1(8);
        assert_eq!(j, big(&[1, 0, 0, 32, 60, 0, 0, 192, 252]));
    }

    fn even_form(dim: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-2i64..=2, dim * dim).prop_map(move |b| {
            // 2 (BᵀB + I) is even and positive definite.
            let rows: Vec<Vec<i64>> = (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|j| {
                            2 * (0..dim).map(|l| b[l * dim + i] * b[l * dim + j]).sum::<i64>() + 2 * i64::from(i == j)
                        })
                        .collect()
                })
                .collect();
            IntMatrix::from_rows(&rows)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_box_enumeration(a in (1usize..=5).prop_flat_map(even_form), m in 0usize..=10) {
            let expected = crate::verify::naive_theta(&a, m).unwrap();
            for threads in [1, 3] {
                prop_assert_eq!(&theta_coefficients(&a, m, threads).unwrap().coefficients, &expected);
            }
        }
    }
}
