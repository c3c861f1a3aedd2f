//! Lattice basis reduction (LLL and BKZ) acting on a Gram matrix.
//!
//! The basis is never materialised: the Gram matrix `G = Uᵀ A U` and the
//! unimodular transform `U` are updated together with exact integer
//! arithmetic. Floating point only drives the choice of steps.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Lovász constant.
const DELTA: f64 = 0.99;

/// A reduced Gram matrix `B = Uᵀ A U` with its transform `U`.
#[derive(Clone, Debug)]
pub struct ReducedForm {
    pub gram: Vec<Vec<i64>>,
    /// Column `j` of `U` is reduced basis vector `j` in original coordinates.
    pub transform: Vec<Vec<i64>>,
}

impl ReducedForm {
    fn identity(a: &IntMatrix) -> Result<Self> {
        let n = a.rows();
        let gram = a
            .to_i64_rows()
            .ok_or_else(|| Error::Unsupported("Gram entries exceed 64 bits".into()))?;
        let transform = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        Ok(ReducedForm { gram, transform })
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    /// Maps reduced coordinates back to the original basis.
    pub fn to_original(&self, y: &[i64]) -> Vec<i64> {
        let n = y.len();
        (0..n).map(|i| (0..n).map(|j| self.transform[i][j] * y[j]).sum()).collect()
    }

    /// `(b_i, b_j) <- (a b_i + b b_j, c b_i + d b_j)`; the 2×2 matrix must be
    /// unimodular.
    fn combine(&mut self, i: usize, j: usize, [a, b, c, d]: [i64; 4]) -> Result<()> {
        debug_assert!(i != j && (a * d - b * c).abs() == 1);
        let n = self.dim();
        let fit = |v: i128| i64::try_from(v).map_err(|_| Error::Unsupported("reduction exceeds 64 bits".into()));
        let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
        let g = &mut self.gram;
        let (gii, gij, gjj) = (g[i][i] as i128, g[i][j] as i128, g[j][j] as i128);
        for l in 0..n {
            if l == i || l == j {
                continue;
            }
            let (x, y) = (g[i][l] as i128, g[j][l] as i128);
            let (ni, nj) = (fit(a * x + b * y)?, fit(c * x + d * y)?);
            g[i][l] = ni;
            g[l][i] = ni;
            g[j][l] = nj;
            g[l][j] = nj;
        }
        g[i][i] = fit(a * a * gii + 2 * a * b * gij + b * b * gjj)?;
        g[j][j] = fit(c * c * gii + 2 * c * d * gij + d * d * gjj)?;
        let off = fit(a * c * gii + (a * d + b * c) * gij + b * d * gjj)?;
        g[i][j] = off;
        g[j][i] = off;
        for row in self.transform.iter_mut() {
            let (x, y) = (row[i] as i128, row[j] as i128);
            row[i] = fit(a * x + b * y)?;
            row[j] = fit(c * x + d * y)?;
        }
        Ok(())
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.gram.swap(i, j);
        for row in self.gram.iter_mut() {
            row.swap(i, j);
        }
        for row in self.transform.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// Gram-Schmidt data: `b_i = b*_i + Σ_{j<i} mu[i][j] b*_j`, `bstar[i] = |b*_i|²`.
pub(crate) fn gram_schmidt(g: &[Vec<i64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut r = vec![vec![0.0; n]; n];
    let mut bstar = vec![0.0; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i][j] as f64;
            for l in 0..j {
                s -= mu[j][l] * r[i][l];
            }
            r[i][j] = s;
            if j < i {
                mu[i][j] = s / bstar[j];
            } else {
                bstar[i] = s;
            }
        }
    }
    (mu, bstar)
}

fn lll_in_place(f: &mut ReducedForm) -> Result<()> {
    let n = f.dim();
    if n <= 1 {
        return Ok(());
    }
    let (mut mu, mut bstar) = gram_schmidt(&f.gram);
    let mut k = 1;
    let mut swaps = 0usize;
    while k < n {
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 {
                f.combine(k, j, [1, -(r as i64), 0, 1])?;
                for l in 0..j {
                    mu[k][l] -= r * mu[j][l];
                }
                mu[k][j] -= r;
            }
        }
        if bstar[k] < (DELTA - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            f.swap(k, k - 1);
            (mu, bstar) = gram_schmidt(&f.gram);
            k = (k - 1).max(1);
            swaps += 1;
            if swaps > 10_000_000 {
                return Err(Error::Internal("LLL did not converge".into()));
            }
        } else {
            k += 1;
        }
    }
    Ok(())
}

/// LLL reduction with `δ = 0.99`.
pub fn lll_reduce(a: &IntMatrix) -> Result<ReducedForm> {
    let mut f = ReducedForm::identity(a)?;
    lll_in_place(&mut f)?;
    Ok(f)
}

/// Shortest non-zero vector of the projected block `[k, h)`, if one is
/// shorter than `bound`; coefficients are relative to `b_k … b_{h-1}`.
fn block_svp(mu: &[Vec<f64>], bstar: &[f64], k: usize, h: usize, bound: f64) -> Option<Vec<i64>> {
    struct Svp<'a> {
        mu: &'a [Vec<f64>],
        bstar: &'a [f64],
        k: usize,
        h: usize,
        x: Vec<i64>,
        best: Option<Vec<i64>>,
        radius: f64,
        nodes: usize,
    }
    impl Svp<'_> {
        fn go(&mut self, i: usize, partial: f64) {
            self.nodes += 1;
            if self.nodes > 2_000_000 {
                return;
            }
            let c: f64 = -(i + 1..self.h).map(|j| self.x[j - self.k] as f64 * self.mu[j][i]).sum::<f64>();
            let rem = self.radius - partial;
            if rem <= 0.0 {
                return;
            }
            let rad = (rem / self.bstar[i]).sqrt();
            let (lo, hi) = ((c - rad).ceil() as i64, (c + rad).floor() as i64);
            // Nearest values first so the radius shrinks early.
            let mut vals: Vec<i64> = (lo..=hi).collect();
            vals.sort_by(|a, b| (*a as f64 - c).abs().total_cmp(&(*b as f64 - c).abs()));
            for v in vals {
                let y = v as f64 - c;
                let p = partial + self.bstar[i] * y * y;
                if p >= self.radius {
                    continue;
                }
                self.x[i - self.k] = v;
                if i == self.k {
                    if self.x.iter().any(|&t| t != 0) {
                        self.radius = p;
                        self.best = Some(self.x.clone());
                    }
                } else {
                    self.go(i - 1, p);
                }
            }
            self.x[i - self.k] = 0;
        }
    }
    let mut s = Svp { mu, bstar, k, h, x: vec![0; h - k], best: None, radius: bound, nodes: 0 };
    s.go(h - 1, 0.0);
    s.best
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        (g, t, s - a.div_euclid(b) * t)
    }
}

/// Rewrites the basis so that `Σ x_t b_{k+t}` becomes (a multiple of) `b_k`,
/// using unimodular 2×2 steps from the end of the block.
fn insert(f: &mut ReducedForm, k: usize, mut x: Vec<i64>) -> Result<()> {
    for t in (0..x.len() - 1).rev() {
        let (p, q) = (x[t], x[t + 1]);
        if q == 0 {
            continue;
        }
        if p == 0 {
            f.swap(k + t, k + t + 1);
            x.swap(t, t + 1);
            continue;
        }
        let (g, s, u) = ext_gcd(p, q);
        f.combine(k + t, k + t + 1, [p / g, q / g, -u, s])?;
        x[t] = g;
        x[t + 1] = 0;
    }
    Ok(())
}

/// BKZ reduction with block size `beta`, starting from an LLL-reduced basis.
pub fn bkz_reduce(a: &IntMatrix, beta: usize) -> Result<ReducedForm> {
    let mut f = lll_reduce(a)?;
    let n = f.dim();
    if beta < 2 || n < 3 {
        return Ok(f);
    }
    for _tour in 0..32 {
        let mut changed = false;
        for k in 0..n - 1 {
            let h = (k + beta).min(n);
            let (mu, bstar) = gram_schmidt(&f.gram);
            if let Some(x) = block_svp(&mu, &bstar, k, h, bstar[k] * 0.999) {
                insert(&mut f, k, x)?;
                lll_in_place(&mut f)?;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice;
    use num_bigint::BigInt;
    use num_traits::Signed;

    fn check(a: &IntMatrix, r: &ReducedForm) {
        let u = IntMatrix::from_rows(&r.transform);
        assert_eq!(&(&u.transpose() * a) * &u, IntMatrix::from_rows(&r.gram));
        assert_eq!(lattice::determinant(&u).unwrap().abs(), BigInt::from(1));
    }

    #[test]
    fn reductions_preserve_the_form() {
        let a = IntMatrix::from_rows(&[[6, 5, 4, 1], [5, 6, 5, 2], [4, 5, 6, 3], [1, 2, 3, 8]]);
        check(&a, &lll_reduce(&a).unwrap());
        check(&a, &bkz_reduce(&a, 3).unwrap());
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(3, 5), (-4, 6), (7, -3), (0, 5), (5, 0), (-2, -8)] {
            let (g, s, t) = ext_gcd(a, b);
            assert_eq!(s * a + t * b, g);
            assert!(g > 0);
        }
    }
}
