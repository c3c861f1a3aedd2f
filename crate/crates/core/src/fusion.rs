//! Alcove fusion (annular) matrices built from a module's fundamental
//! adjacency matrix.
//!
//! For a module with generator `G` (the action of the `(1,0)` fundamental),
//! the matrices `F_(p,q)` for alcove weights satisfy
//!
//! ```text
//! F_(0,0) = I,  F_(1,0) = G,  F_(0,q) = F_(q,0)^T
//! F_(p,0) = G F_(p-1,0) - F_(p-2,1)
//! F_(p,q) = G F_(p-1,q) - F_(p-1,q-1) - F_(p-2,q+1)      (q >= 1)
//! ```
//!
//! with any term carrying a `-1` label set to zero.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::weight::{alcove, alcove_index, alcove_size, fundamental_action, Weight};

/// The family `F_(p,q)` over the level-`k` alcove.
#[derive(Clone, Debug)]
pub struct FusionTable {
    level: u32,
    rank: usize,
    /// Indexed by [`alcove_index`].
    entries: Vec<IntMatrix>,
}

impl FusionTable {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Number of simple objects of the module (`r_E`).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `F_(p,q)` for an unshifted alcove weight, `None` outside the alcove.
    pub fn get(&self, p: i64, q: i64) -> Option<&IntMatrix> {
        if p < 0 || q < 0 || p + q > i64::from(self.level) {
            return None;
        }
        self.entries.get(alcove_index(p, q))
    }

    /// `(weight, matrix)` pairs in alcove order.
    pub fn iter(&self) -> impl Iterator<Item = (Weight, &IntMatrix)> {
        alcove(self.level).into_iter().zip(self.entries.iter())
    }

    pub(crate) fn by_index(&self, i: usize) -> &IntMatrix {
        &self.entries[i]
    }
}

/// Adjacency of multiplication by `(1,0)` on the level-`k` alcove, together
/// with the vertex trialities. Vertices are in [`alcove`] order.
pub fn a_generator(k: u32) -> (IntMatrix, Vec<u8>) {
    let weights = alcove(k);
    let r = weights.len();
    let mut g = IntMatrix::zeros(r, r);
    for (i, w) in weights.iter().enumerate() {
        for v in fundamental_action(*w, k).expect("alcove weights are in the alcove") {
            g[(i, alcove_index(v.p, v.q))] += 1;
        }
    }
    let tri = weights.iter().map(|w| w.triality()).collect();
    (g, tri)
}

/// Runs the recursion over the level-`k` alcove.
///
/// Fails with [`Error::Validation`] if an alcove matrix acquires a negative
/// entry, or if the recursion does not vanish one step past the alcove
/// (shifted degree `N = k + 3` is a wall); both signal a generator that is
/// not a module at this level.
pub fn build_alcove_fusion(generator: &IntMatrix, k: u32) -> Result<FusionTable> {
    if !generator.is_square() {
        return Err(Error::validation("generator matrix is not square"));
    }
    if !generator.is_nonnegative() {
        return Err(Error::validation("generator matrix has a negative entry"));
    }
    let r = generator.rows();
    let mut table: Vec<Option<IntMatrix>> = vec![None; alcove_size(k + 1)];
    let zero = IntMatrix::zeros(r, r);

    for n in 0..=i64::from(k) + 1 {
        for q in 0..=n {
            let p = n - q;
            let m = match (p, q) {
                (0, 0) => IntMatrix::identity(r),
                (1, 0) => generator.clone(),
                (0, q) => table[alcove_index(q, 0)].as_ref().expect("degree order").transpose(),
                (p, 0) => {
                    let prev = lookup(&table, p - 1, 0, &zero);
                    &(generator * prev) - lookup(&table, p - 2, 1, &zero)
                }
                (p, q) => {
                    let prev = lookup(&table, p - 1, q, &zero);
                    let t = &(generator * prev) - lookup(&table, p - 1, q - 1, &zero);
                    &t - lookup(&table, p - 2, q + 1, &zero)
                }
            };
            if n <= i64::from(k) {
                if let Some(bad) = m.entries().find(|x| x.is_negative()) {
                    return Err(Error::validation(format!(
                        "fusion matrix F_({p},{q}) has negative entry {bad} at level {k}"
                    )));
                }
            } else if !m.is_zero() {
                return Err(Error::validation(format!(
                    "fusion matrix F_({p},{q}) does not vanish on the level-{k} wall"
                )));
            }
            table[alcove_index(p, q)] = Some(m);
        }
    }

    let entries = table
        .into_iter()
        .take(alcove_size(k))
        .map(|m| m.expect("every alcove weight is visited"))
        .collect();
    Ok(FusionTable { level: k, rank: r, entries })
}

// Labels with p = -1 or q = -1 sit on a shifted wall and contribute zero.
fn lookup<'a>(table: &'a [Option<IntMatrix>], p: i64, q: i64, zero: &'a IntMatrix) -> &'a IntMatrix {
    if p < 0 || q < 0 {
        debug_assert!(p >= -1 && q >= -1);
        return zero;
    }
    table[alcove_index(p, q)].as_ref().expect("recursion visits smaller degrees first")
}

/// Structure constants of `F_a · F_b = Σ c_w F_w`, found by peeling off the
/// identity row: for a fusion ring (`𝒜_k`), row 0 of `F_w` is the unit
/// vector at `w`, so `c_w = (F_a F_b)[0][w]`.
pub fn structure_constants(table: &FusionTable, a: usize, b: usize) -> Vec<BigInt> {
    let prod = table.by_index(a) * table.by_index(b);
    (0..prod.cols()).map(|w| prod[(0, w)].clone()).collect()
}

/// Checks `F_a F_b == Σ c_w F_w` with the constants from [`structure_constants`].
pub fn expands_in_table(table: &FusionTable, a: usize, b: usize) -> bool {
    let prod = table.by_index(a) * table.by_index(b);
    let c = structure_constants(table, a, b);
    let r = table.rank();
    let mut sum = IntMatrix::zeros(r, r);
    for (w, cw) in c.iter().enumerate() {
        if cw.is_zero() {
            continue;
        }
        let term = table.by_index(w).scale(cw);
        sum = &sum + &term;
    }
    sum == prod
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_generator_is_the_cyclic_permutation() {
        let (g, tri) = a_generator(1);
        // (0,0) -> (1,0) -> (0,1) -> (0,0)
        assert_eq!(g, IntMatrix::from_rows(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]));
        assert_eq!(tri, vec![0, 1, 2]);
    }

    #[test]
    fn a_generator_sizes() {
        assert_eq!(a_generator(0).0, IntMatrix::from_rows(&[[0]]));
        assert_eq!(a_generator(2).0.rows(), 6);
        assert_eq!(a_generator(3).0.rows(), 10);
    }

    #[test]
    fn identity_and_generators() {
        let (g, _) = a_generator(3);
        let t = build_alcove_fusion(&g, 3).unwrap();
        assert_eq!(t.get(0, 0).unwrap(), &IntMatrix::identity(10));
        assert_eq!(t.get(1, 0).unwrap(), &g);
        assert_eq!(t.get(0, 1).unwrap(), &g.transpose());
        assert!(t.get(4, 0).is_none());
    }

    #[test]
    fn a2_f11_is_g_gt_minus_identity() {
        let (g, _) = a_generator(2);
        let t = build_alcove_fusion(&g, 2).unwrap();
        let expect = &(&g * &g.transpose()) - &IntMatrix::identity(6);
        assert_eq!(t.get(1, 1).unwrap(), &expect);
    }

    #[test]
    fn wrong_level_is_rejected() {
        let (g, _) = a_generator(2);
        assert!(matches!(build_alcove_fusion(&g, 3), Err(Error::Validation(_))));
        assert!(matches!(build_alcove_fusion(&g, 1), Err(Error::Validation(_))));
    }

    #[test]
    fn negative_generator_is_rejected() {
        let g = IntMatrix::from_rows(&[[0, -1], [1, 0]]);
        assert!(matches!(build_alcove_fusion(&g, 1), Err(Error::Validation(_))));
    }

    #[test]
    fn transpose_symmetry_and_positivity() {
        for k in 0..=5 {
            let (g, _) = a_generator(k);
            let t = build_alcove_fusion(&g, k).unwrap();
            for (w, m) in t.iter() {
                assert!(m.is_nonnegative());
                assert_eq!(t.get(w.q, w.p).unwrap(), &m.transpose(), "k={k} w={w}");
            }
        }
    }

    #[test]
    fn a_k_fusion_ring_commutes_and_is_positive() {
        for k in 1..=4 {
            let (g, _) = a_generator(k);
            let t = build_alcove_fusion(&g, k).unwrap();
            let n = alcove_size(k);
            for a in 0..n {
                for b in 0..n {
                    let ab = t.by_index(a) * t.by_index(b);
                    let ba = t.by_index(b) * t.by_index(a);
                    assert_eq!(ab, ba);
                    assert!(structure_constants(&t, a, b).iter().all(|c| !c.is_negative()));
                    assert!(expands_in_table(&t, a, b));
                }
            }
        }
    }

    /// Fusion coefficients from the Verlinde formula with the Kac-Peterson
    /// S-matrix, in floating point.
    fn verlinde(k: u32) -> Vec<Vec<Vec<i64>>> {
        let n = f64::from(k + 3);
        let weights: Vec<(f64, f64)> =
            alcove(k).iter().map(|w| (w.p as f64 + 1.0, w.q as f64 + 1.0)).collect();
        let ip = |x: (f64, f64), y: (f64, f64)| (2.0 * x.0 * y.0 + x.0 * y.1 + x.1 * y.0 + 2.0 * x.1 * y.1) / 3.0;
        let weyl = |(a, b): (f64, f64)| {
            [
                ((a, b), 1.0),
                ((-a, a + b), -1.0),
                ((a + b, -b), -1.0),
                ((b, -a - b), 1.0),
                ((-a - b, a), 1.0),
                ((-b, -a), -1.0),
            ]
        };
        let s: Vec<Vec<(f64, f64)>> = weights
            .iter()
            .map(|&l| {
                weights
                    .iter()
                    .map(|&m| {
                        weyl(l).iter().fold((0.0, 0.0), |(re, im), &(w, sign)| {
                            let t = -2.0 * std::f64::consts::PI * ip(w, m) / n;
                            (re + sign * t.cos(), im + sign * t.sin())
                        })
                    })
                    .collect()
            })
            .collect();
        let mul = |x: (f64, f64), y: (f64, f64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
        // Remove the global phase so that S_{00} is real and positive, then make the rows unit length.
        let norm = s[0].iter().map(|z| z.0 * z.0 + z.1 * z.1).sum::<f64>().sqrt();
        let abs00 = s[0][0].0.hypot(s[0][0].1);
        let scale = (s[0][0].0 / (abs00 * norm), -s[0][0].1 / (abs00 * norm));
        let s: Vec<Vec<(f64, f64)>> = s.iter().map(|row| row.iter().map(|&z| mul(z, scale)).collect()).collect();
        let r = weights.len();
        (0..r)
            .map(|l| {
                (0..r)
                    .map(|m| {
                        (0..r)
                            .map(|v| {
                                let total = (0..r).fold(0.0, |acc, x| {
                                    let num = mul(mul(s[l][x], s[m][x]), (s[v][x].0, -s[v][x].1));
                                    acc + num.0 / s[0][x].0
                                });
                                let rounded = total.round();
                                assert!((total - rounded).abs() < 1e-6, "non-integral Verlinde value {total}");
                                rounded as i64
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn recursion_matches_verlinde() {
        for k in 0..=3 {
            let (g, _) = a_generator(k);
            let t = build_alcove_fusion(&g, k).unwrap();
            let n = verlinde(k);
            for (l, w) in alcove(k).iter().enumerate() {
                let f = t.get(w.p, w.q).unwrap();
                for m in 0..f.rows() {
                    for v in 0..f.cols() {
                        assert_eq!(f.row(m)[v], BigInt::from(n[l][m][v]), "k={k} {w} row {m} col {v}");
                    }
                }
            }
        }
    }
}
