//! Extension of alcove fusion matrices to every integer shifted weight by
//! signed affine Weyl reflections.
//!
//! In shifted labels the walls are `p ≡ 0`, `q ≡ 0` and `p + q ≡ 0 (mod N)`.
//! Off the walls every weight is carried into the open alcove
//! `{p ≥ 1, q ≥ 1, p + q ≤ N - 1}` by the reflections
//!
//! ```text
//! s1: (p, q) -> (-p, p + q)
//! s2: (p, q) -> (p + q, -q)
//! s0: (p, q) -> (N - q, N - p)
//! ```
//!
//! each contributing a factor `-1`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fusion::FusionTable;
use crate::matrix::IntMatrix;
use crate::weight::{alcove_index, Weight};

/// Outcome of folding a shifted weight into the alcove.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoldResult {
    /// `-1`, `0` or `+1`; zero exactly on the walls.
    pub sign: i8,
    /// Shifted alcove representative, present iff `sign != 0`.
    pub target: Option<Weight>,
}

impl FoldResult {
    const WALL: FoldResult = FoldResult { sign: 0, target: None };
}

/// Whether the shifted weight `{p,q}` lies on an affine wall.
pub fn on_wall(p: i64, q: i64, n: i64) -> bool {
    p.rem_euclid(n) == 0 || q.rem_euclid(n) == 0 || (p + q).rem_euclid(n) == 0
}

/// Folds the shifted weight `{p,q}` into the alcove of altitude `n`.
///
/// Both labels are first reduced modulo `3N`; the translations `(3N, 0)` and
/// `(0, 3N)` lie in `N` times the root lattice and so carry sign `+1`. The
/// remaining reflections are applied greedily with precedence `s1, s2, s0`.
pub fn fold(p: i64, q: i64, n: i64) -> Result<FoldResult> {
    if n < 3 {
        return Err(Error::domain(format!("altitude must be at least 3, got {n}")));
    }
    if on_wall(p, q, n) {
        return Ok(FoldResult::WALL);
    }
    let (mut p, mut q) = (p.rem_euclid(3 * n), q.rem_euclid(3 * n));
    let mut sign = 1i8;
    // From the 3N box at most a handful of reflections are needed.
    for _ in 0..64 {
        if p < 0 {
            (p, q) = (-p, p + q);
        } else if q < 0 {
            (p, q) = (p + q, -q);
        } else if p + q > n {
            (p, q) = (n - q, n - p);
        } else {
            debug_assert!(p >= 1 && q >= 1 && p + q < n);
            return Ok(FoldResult { sign, target: Some(Weight::shifted(p, q)) });
        }
        sign = -sign;
    }
    Err(Error::Internal(format!("folding {{{p},{q}}} at N={n} did not terminate")))
}

/// Alcove fusion table extended to all shifted weights.
///
/// The fold of every point of one `3N × 3N` period is computed up front, so
/// lookups after construction are read-only.
#[derive(Clone, Debug)]
pub struct ExtendedFusion {
    table: FusionTable,
    n: i64,
    /// `(sign, alcove index)` for each period cell, row-major in `p`.
    folds: Vec<(i8, u32)>,
    /// Machine-integer copy of the alcove matrices, row-major per matrix.
    small: Vec<Vec<i64>>,
}

impl ExtendedFusion {
    pub fn new(table: FusionTable) -> Result<Self> {
        let n = i64::from(table.level()) + 3;
        let period = 3 * n;
        let mut folds = Vec::with_capacity((period * period) as usize);
        for p in 0..period {
            for q in 0..period {
                let f = fold(p, q, n)?;
                let idx = match f.target {
                    Some(w) => {
                        let u = w.to_unshifted();
                        alcove_index(u.p, u.q) as u32
                    }
                    None => 0,
                };
                folds.push((f.sign, idx));
            }
        }
        let small = table
            .iter()
            .map(|(w, m)| {
                m.to_i64_rows().map(|rows| rows.concat()).ok_or_else(|| {
                    Error::Unsupported(format!("fusion matrix at {w} does not fit in 64 bits"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExtendedFusion { table, n, folds, small })
    }

    /// Altitude `N = k + 3`.
    pub fn altitude(&self) -> i64 {
        self.n
    }

    pub fn table(&self) -> &FusionTable {
        &self.table
    }

    pub fn rank(&self) -> usize {
        self.table.rank()
    }

    #[inline]
    fn lookup(&self, p: i64, q: i64) -> (i8, usize) {
        let period = 3 * self.n;
        let cell = (p.rem_euclid(period) * period + q.rem_euclid(period)) as usize;
        let (s, i) = self.folds[cell];
        (s, i as usize)
    }

    /// Sign and shifted alcove target for `{p,q}`, from the period table.
    pub fn fold_of(&self, p: i64, q: i64) -> FoldResult {
        let (sign, idx) = self.lookup(p, q);
        if sign == 0 {
            return FoldResult::WALL;
        }
        let (w, _) = self.table.iter().nth(idx).expect("index from fold table");
        FoldResult { sign, target: Some(w.to_shifted()) }
    }

    /// Entry `(a, b)` of `F̂_{p,q}` in machine integers.
    #[inline]
    pub fn entry(&self, p: i64, q: i64, a: usize, b: usize) -> i64 {
        let (sign, idx) = self.lookup(p, q);
        if sign == 0 {
            return 0;
        }
        i64::from(sign) * self.small[idx][a * self.rank() + b]
    }

    /// The full matrix `F̂_{p,q}`.
    pub fn extended_f(&self, p: i64, q: i64) -> IntMatrix {
        let (sign, idx) = self.lookup(p, q);
        let r = self.rank();
        match sign {
            0 => IntMatrix::zeros(r, r),
            1 => self.table.by_index(idx).clone(),
            _ => -self.table.by_index(idx),
        }
    }

    /// The twist `P = F̂_{N-2,1}`, checked to be a permutation with `P³ = I`.
    pub fn twist_p(&self) -> Result<IntMatrix> {
        let p = self.extended_f(self.n - 2, 1);
        if !p.is_permutation() {
            return Err(Error::validation("twist P = F_{N-2,1} is not a permutation matrix"));
        }
        let p3 = &(&p * &p) * &p;
        if p3 != IntMatrix::identity(self.rank()) {
            return Err(Error::validation("twist P = F_{N-2,1} does not satisfy P^3 = I"));
        }
        Ok(p)
    }

    /// Checks over one `3N × 3N` period that `F̂` changes sign under the
    /// three alcove reflections, is `3N`-periodic in both labels and vanishes
    /// on the walls.
    pub fn check_period(&self) -> Result<()> {
        let n = self.altitude();
        for p in 0..3 * n {
            for q in 0..3 * n {
                let f = self.extended_f(p, q);
                let neg = -&f;
                for (name, (a, b)) in [("s1", (-p, p + q)), ("s2", (p + q, -q)), ("s0", (n - q, n - p))] {
                    if self.extended_f(a, b) != neg {
                        return Err(Error::invariant(format!("F{{{p},{q}}} is not odd under {name}")));
                    }
                }
                if self.extended_f(p + 3 * n, q) != f || self.extended_f(p, q + 3 * n) != f {
                    return Err(Error::invariant(format!("F{{{p},{q}}} is not 3N-periodic")));
                }
                if on_wall(p, q, n) && !f.is_zero() {
                    return Err(Error::invariant(format!("F{{{p},{q}}} is non-zero on a wall")));
                }
            }
        }
        Ok(())
    }

    /// `Σ_i c_i F̂_{λ + d_i}`, used by the six-term inner product.
    pub fn combination(&self, lambda: (i64, i64), terms: &[((i64, i64), i64)]) -> IntMatrix {
        let r = self.rank();
        let mut out = IntMatrix::zeros(r, r);
        for &((dp, dq), c) in terms {
            let m = self.extended_f(lambda.0 + dp, lambda.1 + dq).scale(&BigInt::from(c));
            out = &out + &m;
        }
        out
    }
}
