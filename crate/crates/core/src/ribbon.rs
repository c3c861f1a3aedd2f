//! Higher roots: the ribbon of admissible (position, vertex) pairs, their
//! inner products, basis choices and Gram matrices.
//!
//! A point `(n, a)` pairs a shifted weight `n` of the periodicity rhombus
//! `0 ≤ p, q < N` with a module vertex `a`; it is admissible when
//! `∂n + ∂a ≡ 0 (mod 3)`. For `α = (m, a)`, `β = (n, b)` and `λ = m - n`,
//!
//! ```text
//! <α, β> = ( F̂_{λ1+1,λ2+1} + F̂_{λ1-2,λ2+1} + F̂_{λ1+1,λ2-2}
//!          - F̂_{λ1-1,λ2-1} - F̂_{λ1-1,λ2+2} - F̂_{λ1+2,λ2-1} )[a][b]
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::catalog::QuantumModule;
use crate::error::{Error, Result};
use crate::folding::ExtendedFusion;
use crate::lattice::{self, RationalMatrix};
use crate::matrix::IntMatrix;
use crate::weight::triality;

/// The admissible triality class of `∂n + ∂a`.
pub const ADMISSIBLE_CLASS: u8 = 0;

/// Offsets and signs of the six-term inner product.
const SIX_TERMS: [((i64, i64), i64); 6] = [
    ((1, 1), 1),
    ((-2, 1), 1),
    ((1, -2), 1),
    ((-1, -1), -1),
    ((-1, 2), -1),
    ((2, -1), -1),
];

/// A module vertex placed at a shifted weight position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RibbonPoint {
    pub p: i64,
    pub q: i64,
    pub vertex: usize,
}

impl RibbonPoint {
    pub const fn new(p: i64, q: i64, vertex: usize) -> Self {
        RibbonPoint { p, q, vertex }
    }

    /// The same vertex translated by `(dp, dq)`.
    pub fn translate(self, dp: i64, dq: i64) -> Self {
        RibbonPoint { p: self.p + dp, q: self.q + dq, ..self }
    }
}

impl fmt::Display for RibbonPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}:{}", self.p, self.q, self.vertex)
    }
}

/// The three basis position lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisChoice {
    B1,
    B2,
    B3,
}

impl BasisChoice {
    pub fn positions(self, n: i64) -> [(i64, i64); 6] {
        match self {
            BasisChoice::B1 => [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (0, 2)],
            BasisChoice::B2 => [(1, 1), (2, 1), (1, 2), (3, 1), (2, 2), (1, 3)],
            BasisChoice::B3 => [(0, 0), (1, 0), (0, 1), (n - 1, n - 2), (n - 2, n - 1), (n - 1, n - 1)],
        }
    }
}

impl std::str::FromStr for BasisChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B1" => Ok(BasisChoice::B1),
            "B2" => Ok(BasisChoice::B2),
            "B3" => Ok(BasisChoice::B3),
            _ => Err(Error::domain(format!("unknown basis `{s}`, expected B1, B2 or B3"))),
        }
    }
}

/// Coordinates of a lattice vector in a chosen basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HigherRootVector {
    pub coords: Vec<BigInt>,
}

impl HigherRootVector {
    /// `xᵀ A x`.
    pub fn norm(&self, gram: &IntMatrix) -> BigInt {
        quadratic_form(gram, &self.coords)
    }

    pub fn negate(&self) -> Self {
        HigherRootVector { coords: self.coords.iter().map(|x| -x).collect() }
    }
}

pub(crate) fn quadratic_form(a: &IntMatrix, x: &[BigInt]) -> BigInt {
    let n = x.len();
    let mut s = BigInt::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        let mut row = BigInt::zero();
        for j in 0..n {
            row += &a[(i, j)] * &x[j];
        }
        s += &x[i] * row;
    }
    s
}

/// A module with its extended fusion matrices and its ribbon of higher roots.
#[derive(Clone, Debug)]
pub struct Ribbon {
    module: QuantumModule,
    ext: ExtendedFusion,
    points: Vec<RibbonPoint>,
}

impl Ribbon {
    /// Builds the ribbon, ordered by `(p, q, vertex)`.
    ///
    /// Fails with [`Error::Unsupported`] when the number of admissible points
    /// is not `r_E N² / 3`, which happens exactly when the grading does not
    /// split the vertices evenly enough for the construction.
    pub fn new(module: &QuantumModule) -> Result<Self> {
        let ext = module.extended()?;
        let n = ext.altitude();
        let r = module.rank();
        let mut points = Vec::new();
        for p in 0..n {
            for q in 0..n {
                for a in 0..r {
                    if is_admissible(p, q, module.trialities[a]) {
                        points.push(RibbonPoint::new(p, q, a));
                    }
                }
            }
        }
        let expected = r as i64 * n * n;
        if expected % 3 != 0 || points.len() as i64 != expected / 3 {
            return Err(Error::Unsupported(format!(
                "module {} has {} admissible points, expected r N^2 / 3 = {expected}/3",
                module.name,
                points.len()
            )));
        }
        Ok(Ribbon { module: module.clone(), ext, points })
    }

    pub fn module(&self) -> &QuantumModule {
        &self.module
    }

    pub fn extended(&self) -> &ExtendedFusion {
        &self.ext
    }

    /// The restricted higher roots.
    pub fn points(&self) -> &[RibbonPoint] {
        &self.points
    }

    /// `|ℛ| = 2 |ℛ∨|`, counting both signs.
    pub fn root_count(&self) -> usize {
        2 * self.points.len()
    }

    /// Lattice rank `2 r_E`.
    pub fn lattice_rank(&self) -> usize {
        2 * self.module.rank()
    }

    /// Six-term inner product; defined for any positions and vertices.
    pub fn inner_product(&self, alpha: RibbonPoint, beta: RibbonPoint) -> i64 {
        let (l1, l2) = (alpha.p - beta.p, alpha.q - beta.q);
        SIX_TERMS
            .iter()
            .map(|&((dp, dq), c)| c * self.ext.entry(l1 + dp, l2 + dq, alpha.vertex, beta.vertex))
            .sum()
    }

    /// Admissible vertices over the six positions of `choice`, ordered by
    /// position index then vertex index.
    ///
    /// Fails with [`Error::Internal`] if the family does not have `2 r_E`
    /// members, and with [`Error::Unsupported`] if its Gram matrix is
    /// singular (B3 for even altitude).
    pub fn basis(&self, choice: BasisChoice) -> Result<Vec<RibbonPoint>> {
        let basis: Vec<RibbonPoint> = choice
            .positions(self.ext.altitude())
            .iter()
            .flat_map(|&(p, q)| {
                (0..self.module.rank())
                    .filter(move |&a| is_admissible(p, q, self.module.trialities[a]))
                    .map(move |a| RibbonPoint::new(p, q, a))
            })
            .collect();
        if basis.len() != self.lattice_rank() {
            return Err(Error::Internal(format!(
                "basis {choice:?} has {} elements, expected {}",
                basis.len(),
                self.lattice_rank()
            )));
        }
        if lattice::determinant(&self.gram_matrix(&basis))?.is_zero() {
            return Err(Error::Unsupported(format!(
                "positions of {choice:?} give a singular Gram matrix for {}",
                self.module.name
            )));
        }
        Ok(basis)
    }

    /// Whether every ribbon point has integral coordinates in `basis`, i.e.
    /// the basis generates the whole higher-root lattice rather than a
    /// sublattice of finite index.
    pub fn generates_lattice(&self, basis: &[RibbonPoint]) -> Result<bool> {
        let ex = Expander::new(self, basis.to_vec())?;
        match ex.expand_all() {
            Ok(_) => Ok(true),
            Err(Error::Invariant(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Matrix of pairwise inner products.
    pub fn gram_matrix(&self, basis: &[RibbonPoint]) -> IntMatrix {
        self.cross_products(basis, basis)
    }

    /// `rows × cols` matrix of inner products, computed in parallel by row.
    pub fn cross_products(&self, rows: &[RibbonPoint], cols: &[RibbonPoint]) -> IntMatrix {
        let data: Vec<Vec<i64>> = rows
            .par_iter()
            .map(|&a| cols.iter().map(|&b| self.inner_product(a, b)).collect())
            .collect();
        if rows.is_empty() {
            return IntMatrix::zeros(0, cols.len());
        }
        IntMatrix::from_rows(&data)
    }

    /// All pairwise inner products over the ribbon together with the exact
    /// rank, which must equal `2 r_E`.
    pub fn big_gram(&self) -> Result<(IntMatrix, usize)> {
        let big = self.gram_matrix(&self.points);
        let rank = lattice::rank(&big);
        if rank != self.lattice_rank() {
            return Err(Error::invariant(format!(
                "big Gram matrix of {} has rank {rank}, expected {}",
                self.module.name,
                self.lattice_rank()
            )));
        }
        Ok((big, rank))
    }

    /// Harmonicity of `f(n, b) = <α, (n, b)>` over one `3N × 3N` period:
    /// the sum over the three weight-lattice predecessors `n - δ`,
    /// `δ ∈ {(1,0), (0,-1), (-1,1)}`, equals the sum over module predecessors
    /// `b'` weighted by `adjacency(b', b)`.
    pub fn harmonicity_check(&self, alpha: RibbonPoint) -> bool {
        self.is_harmonic(|p, q, b| self.inner_product(alpha, RibbonPoint::new(p, q, b)))
    }

    /// The harmonicity condition for an arbitrary function on the period.
    pub fn is_harmonic(&self, f: impl Fn(i64, i64, usize) -> i64) -> bool {
        let n = self.ext.altitude();
        let r = self.module.rank();
        let adj = self.module.adjacency.to_i64_rows().expect("adjacency fits in i64");
        for p in 0..3 * n {
            for q in 0..3 * n {
                for b in 0..r {
                    let lhs = f(p - 1, q, b) + f(p, q + 1, b) + f(p + 1, q - 1, b);
                    let rhs: i64 = (0..r).filter(|&c| adj[c][b] != 0).map(|c| adj[c][b] * f(p, q, c)).sum();
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `∂n + ∂a ≡ 0 (mod 3)` for the shifted position `(p, q)` and vertex triality `t`.
pub fn is_admissible(p: i64, q: i64, t: u8) -> bool {
    (triality(p, q) + t) % 3 == ADMISSIBLE_CLASS
}

/// Convenience wrapper: the ordered ribbon of a module.
pub fn build_ribbon(module: &QuantumModule) -> Result<Vec<RibbonPoint>> {
    Ok(Ribbon::new(module)?.points)
}

/// Gram matrix of a module in a chosen basis.
pub fn module_gram(module: &QuantumModule, choice: BasisChoice) -> Result<IntMatrix> {
    let ribbon = Ribbon::new(module)?;
    let basis = ribbon.basis(choice)?;
    Ok(ribbon.gram_matrix(&basis))
}

/// Expresses ribbon points in a basis through `x = A⁻¹ t`, where `t` is the
/// vector of inner products against the basis.
#[derive(Clone, Debug)]
pub struct Expander<'a> {
    ribbon: &'a Ribbon,
    basis: Vec<RibbonPoint>,
    gram: IntMatrix,
    /// `A⁻¹ = inv_num / inv_den` with an integer numerator.
    inv_num: IntMatrix,
    inv_den: BigInt,
}

impl<'a> Expander<'a> {
    pub fn new(ribbon: &'a Ribbon, basis: Vec<RibbonPoint>) -> Result<Self> {
        let gram = ribbon.gram_matrix(&basis);
        let k = lattice::rational_inverse(&gram)?;
        let (inv_num, inv_den) = common_denominator(&k);
        Ok(Expander { ribbon, basis, gram, inv_num, inv_den })
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn basis(&self) -> &[RibbonPoint] {
        &self.basis
    }

    /// Coordinates of `point` in the basis; an invariant error if they are
    /// not all integers.
    pub fn expand(&self, point: RibbonPoint) -> Result<HigherRootVector> {
        let t: Vec<BigInt> = self.basis.iter().map(|&b| BigInt::from(self.ribbon.inner_product(b, point))).collect();
        let n = t.len();
        let mut coords = Vec::with_capacity(n);
        for i in 0..n {
            let s: BigInt = (0..n).map(|j| &self.inv_num[(i, j)] * &t[j]).sum();
            let (c, rem) = s.div_rem(&self.inv_den);
            if !rem.is_zero() {
                return Err(Error::invariant(format!("higher root {point} has a non-integral coordinate")));
            }
            coords.push(c);
        }
        Ok(HigherRootVector { coords })
    }

    /// Expansions of every ribbon point, in ribbon order.
    pub fn expand_all(&self) -> Result<Vec<HigherRootVector>> {
        self.ribbon.points.par_iter().map(|&p| self.expand(p)).collect()
    }

    /// Checks `A_big = T A⁻¹ Tᵀ` exactly, with `T` the inner products of the
    /// ribbon against the basis.
    pub fn projection_identity_holds(&self, big: &IntMatrix) -> bool {
        let t = self.ribbon.cross_products(&self.ribbon.points, &self.basis);
        let lhs = &(&t * &self.inv_num) * &t.transpose();
        lhs == big.scale(&self.inv_den)
    }
}

/// Writes a rational matrix as an integer matrix over one positive denominator.
pub fn common_denominator(k: &RationalMatrix) -> (IntMatrix, BigInt) {
    let den = k.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let n = k.len();
    let num = IntMatrix::from_fn(n, k.first().map_or(0, Vec::len), |i, j| {
        let x = &k[i][j];
        x.numer() * (&den / x.denom())
    });
    (num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin_a, get_module};
    use crate::lattice::invariants;
    use crate::theta::theta_coefficients;
    use num_integer::Roots;

    #[test]
    fn ribbon_sizes() {
        let sizes: Vec<usize> = (1..=4).map(|k| build_ribbon(&builtin_a(k)).unwrap().len()).collect();
        assert_eq!(sizes, vec![16, 50, 120, 245]);
        assert_eq!(build_ribbon(&builtin_a(0)).unwrap().len(), 3);
    }

    #[test]
    fn a1_ribbon_is_lexicographic() {
        let pts = build_ribbon(&builtin_a(1)).unwrap();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
        assert_eq!(pts[0], RibbonPoint::new(0, 0, 0));
    }

    #[test]
    fn norms_and_symmetry() {
        for k in 1..=3 {
            let r = Ribbon::new(&builtin_a(k)).unwrap();
            for &a in r.points() {
                assert_eq!(r.inner_product(a, a), 6);
                for &b in r.points().iter().step_by(7) {
                    assert_eq!(r.inner_product(a, b), r.inner_product(b, a));
                    assert_eq!(r.inner_product(a.translate(5, -3), b.translate(5, -3)), r.inner_product(a, b));
                }
            }
        }
    }

    #[test]
    fn a0_gram_is_three_times_cartan() {
        let g = module_gram(&builtin_a(0), BasisChoice::B1).unwrap();
        assert_eq!(g, IntMatrix::from_rows(&[[6, -3], [-3, 6]]));
    }

    #[test]
    fn basis_sizes() {
        let r = Ribbon::new(&builtin_a(2)).unwrap();
        for c in [BasisChoice::B1, BasisChoice::B2, BasisChoice::B3] {
            assert_eq!(r.basis(c).unwrap().len(), 12);
        }
        let e21 = Ribbon::new(&get_module("E21", 21).unwrap()).unwrap();
        assert_eq!(e21.basis(BasisChoice::B1).unwrap().len(), 48);
    }

    #[test]
    fn basis_elements_expand_to_unit_vectors() {
        let r = Ribbon::new(&builtin_a(2)).unwrap();
        let basis = r.basis(BasisChoice::B1).unwrap();
        let ex = Expander::new(&r, basis.clone()).unwrap();
        for (i, &b) in basis.iter().enumerate() {
            let v = ex.expand(b).unwrap();
            for (j, c) in v.coords.iter().enumerate() {
                assert_eq!(*c, BigInt::from((i == j) as i64));
            }
        }
    }

    #[test]
    fn zero_function_is_harmonic() {
        let r = Ribbon::new(&builtin_a(1)).unwrap();
        assert!(r.is_harmonic(|_, _, _| 0));
        assert!(!r.is_harmonic(|p, _, _| p));
    }

    #[test]
    fn a1_big_gram() {
        let r = Ribbon::new(&builtin_a(1)).unwrap();
        let (big, rank) = r.big_gram().unwrap();
        assert_eq!((big.rows(), rank), (16, 6));
    }

    #[test]
    fn basis_names_parse() {
        assert_eq!("B3".parse::<BasisChoice>().unwrap(), BasisChoice::B3);
        assert!("B4".parse::<BasisChoice>().is_err());
    }

    // The spanned lattice does not depend on which positions the basis is
    // read from, as long as they generate it.
    const MODULES: [(&str, u32); 8] =
        [("A", 0), ("A", 1), ("A", 2), ("A", 3), ("A", 4), ("D", 3), ("D", 6), ("E5", 5)];

    #[test]
    fn b2_matches_b1() {
        for (family, k) in MODULES {
            let m = get_module(family, k).unwrap();
            let r = Ribbon::new(&m).unwrap();
            let b1 = r.basis(BasisChoice::B1).unwrap();
            let b2 = r.basis(BasisChoice::B2).unwrap();
            assert!(r.generates_lattice(&b2).unwrap(), "{family}{k}");
            let (g1, g2) = (r.gram_matrix(&b1), r.gram_matrix(&b2));
            let (i1, i2) = (invariants(&g1).unwrap(), invariants(&g2).unwrap());
            assert_eq!(i1.determinant, i2.determinant, "{family}{k}");
            assert_eq!(i1.elementary_divisors, i2.elementary_divisors, "{family}{k}");
            assert_eq!(i1.modular_level, i2.modular_level, "{family}{k}");
            if g1.rows() <= 12 {
                let t1 = theta_coefficients(&g1, 6, 1).unwrap().coefficients;
                let t2 = theta_coefficients(&g2, 6, 1).unwrap().coefficients;
                assert_eq!(t1, t2, "{family}{k}");
            }
        }
    }

    #[test]
    fn b3_matches_b1_where_it_generates() {
        for (family, k) in MODULES {
            let m = get_module(family, k).unwrap();
            let r = Ribbon::new(&m).unwrap();
            let n = m.level as i64 + 3;
            let b1 = invariants(&r.gram_matrix(&r.basis(BasisChoice::B1).unwrap())).unwrap();
            match r.basis(BasisChoice::B3) {
                Err(Error::Unsupported(_)) => assert_eq!(n % 2, 0, "{family}{k}"),
                Err(e) => panic!("{family}{k}: {e}"),
                Ok(b3) => {
                    let inv = invariants(&r.gram_matrix(&b3)).unwrap();
                    if r.generates_lattice(&b3).unwrap() {
                        assert_eq!(inv.determinant, b1.determinant, "{family}{k}");
                        assert_eq!(inv.elementary_divisors, b1.elementary_divisors, "{family}{k}");
                    } else {
                        // A sublattice of index i has determinant i² times larger.
                        let ratio = &inv.determinant / &b1.determinant;
                        assert_eq!(&ratio * &b1.determinant, inv.determinant, "{family}{k}");
                        assert!(Roots::sqrt(&ratio).pow(2) == ratio, "{family}{k}");
                    }
                }
            }
        }
    }
}
