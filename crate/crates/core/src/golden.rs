//! Reference values for the supported modules: the invariants table, theta
//! coefficient prefixes, Gram matrices and the A1 series data.
//!
//! Every record carries a short citation naming the table or list it was
//! transcribed from.

use num_bigint::BigInt;

/// One row of the invariants table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    /// Family name as accepted by [`crate::catalog::get_module`].
    pub family: &'static str,
    pub level: u32,
    pub altitude: u32,
    /// `r_E`.
    pub rank: usize,
    /// Lattice dimension `2 r_E`.
    pub lattice_rank: usize,
    /// `|ℛ|`, both signs.
    pub roots: usize,
    pub kiss_norm: u32,
    pub kiss_count: u64,
    /// Determinant as `base^exp`.
    pub det_base: u32,
    pub det_exp: u32,
    pub modular_level: u64,
    pub phi: u64,
    pub citation: &'static str,
}

impl TableRow {
    pub fn determinant(&self) -> BigInt {
        BigInt::from(self.det_base).pow(self.det_exp)
    }

    /// Display name such as `A3`, `D6` or `E21`.
    pub fn name(&self) -> String {
        if self.family.starts_with('E') {
            self.family.to_string()
        } else {
            format!("{}{}", self.family, self.level)
        }
    }
}

const TABLE_CITE: &str = "lattice invariants table";

const fn row(
    family: &'static str,
    level: u32,
    rank: usize,
    roots: usize,
    kiss: (u32, u64),
    det: (u32, u32),
    modular_level: u64,
    phi: u64,
) -> TableRow {
    TableRow {
        family,
        level,
        altitude: level + 3,
        rank,
        lattice_rank: 2 * rank,
        roots,
        kiss_norm: kiss.0,
        kiss_count: kiss.1,
        det_base: det.0,
        det_exp: det.1,
        modular_level,
        phi,
        citation: TABLE_CITE,
    }
}

/// The invariants table, one row per module.
pub const TABLE: [TableRow; 9] = [
    row("A", 1, 3, 32, (6, 32), (4, 6), 16, 8),
    row("A", 2, 6, 100, (6, 100), (5, 9), 25, 20),
    row("A", 3, 10, 240, (6, 240), (6, 12), 18, 6),
    row("A", 4, 15, 490, (6, 490), (7, 15), 49, 42),
    row("D", 3, 6, 144, (4, 36), (3, 12), 9, 6),
    row("D", 6, 12, 648, (4, 162), (3, 18), 27, 18),
    row("E5", 5, 12, 512, (6, 512), (2, 30), 16, 8),
    row("E9", 9, 12, 1152, (4, 756), (2, 24), 16, 8),
    row("E21", 21, 24, 9216, (4, 144), (3, 12), 3, 2),
];

/// A theta-series coefficient prefix in the `q₂` convention.
#[derive(Clone, Copy, Debug)]
pub struct ThetaPrefix {
    pub family: &'static str,
    pub level: u32,
    /// The lattice is taken with Gram matrix divided by this factor.
    pub rescale: i64,
    /// Every coefficient listed in the reference.
    pub coefficients: &'static [u64],
    /// How many leading coefficients the acceptance suite checks.
    pub checked: usize,
    /// Trailing coefficients of the checked prefix that are too slow for the
    /// routine suite.
    pub slow_tail: usize,
    pub citation: &'static str,
}

/// Theta coefficient lists.
pub const THETA: [ThetaPrefix; 12] = [
    ThetaPrefix {
        family: "A",
        level: 0,
        rescale: 3,
        coefficients: &[
            1, 6, 0, 6, 6, 0, 0, 12, 0, 6, 0, 0, 6, 12, 0, 0, 6, 0, 0, 12, 0, 12, 0, 0, 0, 6, 0, 6, 12, 0, 0, 12, 0, 0,
            0, 0, 6, 12, 0, 12, 0, 0, 0, 12, 0, 0, 0, 0, 6, 18, 0, 0, 12, 0, 0, 0, 0, 12, 0, 0, 0, 12, 0, 12, 6, 0, 0,
            12, 0, 0, 0, 0, 0, 12, 0, 6, 12, 0, 0, 12, 0,
        ],
        checked: 40,
        slow_tail: 0,
        citation: "theta coefficient list, A0 (rescaled)",
    },
    ThetaPrefix {
        family: "A",
        level: 1,
        rescale: 1,
        coefficients: &[
            1, 0, 0, 32, 60, 0, 0, 192, 252, 0, 0, 480, 544, 0, 0, 832, 1020, 0, 0, 1440, 1560, 0, 0, 2112, 2080, 0, 0,
            2624, 3264, 0, 0, 3840, 4092, 0, 0, 4992, 4380, 0, 0, 5440, 6552, 0, 0, 7392, 8160, 0, 0, 8832, 8224,
        ],
        checked: 40,
        slow_tail: 0,
        citation: "theta coefficient list, A1",
    },
    ThetaPrefix {
        family: "A",
        level: 2,
        rescale: 1,
        coefficients: &[
            1, 0, 0, 100, 450, 960, 2800, 6600, 12300, 22400, 30690, 63000, 93150, 144000, 203100, 236080, 392850,
            550800, 708350, 961800, 972780, 1581600, 1937250, 2495400, 2977400, 3063360, 4469400, 5547700, 6477600,
            7963200, 7344920, 11094000, 12627000, 15127200, 17091900, 16459440, 22670850, 26899200,
        ],
        checked: 20,
        slow_tail: 0,
        citation: "theta coefficient list, A2",
    },
    ThetaPrefix {
        family: "A",
        level: 3,
        rescale: 1,
        coefficients: &[
            1, 0, 0, 240, 1782, 9072, 59328, 216432, 810000, 2059152, 6080832, 12349584, 31045596, 57036960,
            122715648, 204193872, 418822650, 622067040, 1193611392, 1734272208, 3043596384, 4217152080,
            7354100160, 9446435136, 15901091892, 20507712192, 32268036096, 40493364288, 64454759856,
            76079125584, 118436670720, 142127536464,
        ],
        checked: 8,
        slow_tail: 0,
        citation: "theta coefficient list, A3",
    },
    ThetaPrefix {
        family: "A",
        level: 4,
        rescale: 1,
        coefficients: &[
            1, 0, 0, 490, 4998, 45864, 464422, 3429426, 21668094, 111678742, 492567012, 1876801038, 6352945942,
            19484903508, 54935857326, 144330551050,
        ],
        checked: 6,
        slow_tail: 0,
        citation: "theta coefficient list, A4",
    },
    ThetaPrefix {
        family: "A",
        level: 5,
        rescale: 1,
        coefficients: &[1, 0, 0, 896, 11856, 154368, 2331648, 27065088, 281311128],
        checked: 4,
        slow_tail: 0,
        citation: "theta coefficient list, A5",
    },
    ThetaPrefix {
        family: "A",
        level: 6,
        rescale: 1,
        coefficients: &[1, 0, 0, 1512, 24300, 425736, 8530758],
        checked: 4,
        slow_tail: 0,
        citation: "theta coefficient list, A6",
    },
    ThetaPrefix {
        family: "D",
        level: 3,
        rescale: 1,
        coefficients: &[1, 0, 36, 144, 486, 2880, 5724, 7776, 31068, 40320, 47628],
        checked: 10,
        slow_tail: 0,
        citation: "theta coefficient list, D3",
    },
    ThetaPrefix {
        family: "D",
        level: 6,
        rescale: 1,
        coefficients: &[
            1, 0, 162, 2322, 35478, 273942, 1771326, 9680148, 40813632, 150043014, 484705782,
        ],
        checked: 6,
        slow_tail: 0,
        citation: "theta coefficient list, D6",
    },
    ThetaPrefix {
        family: "E5",
        level: 5,
        rescale: 1,
        coefficients: &[
            1, 0, 0, 512, 11232, 145920, 1055616, 5618688, 25330128, 89127936, 295067136, 810542592, 2185379968,
            5109275136,
        ],
        checked: 6,
        slow_tail: 0,
        citation: "theta coefficient list, E5",
    },
    ThetaPrefix {
        family: "E9",
        level: 9,
        rescale: 1,
        coefficients: &[
            1, 0, 756, 5760, 98928, 1092096, 8435760, 45142272, 202712400, 715373568, 2350118808, 6501914496,
            17469036096,
        ],
        checked: 5,
        slow_tail: 0,
        citation: "theta coefficient list, E9",
    },
    ThetaPrefix {
        family: "E21",
        level: 21,
        rescale: 1,
        coefficients: &[1, 0, 144, 64512, 54181224],
        checked: 5,
        slow_tail: 1,
        citation: "theta coefficient list, E21",
    },
];

/// Theta prefix for a module, if one is listed.
pub fn theta_prefix(family: &str, level: u32) -> Option<&'static ThetaPrefix> {
    THETA.iter().find(|t| t.family == family && t.level == level && t.rescale == 1)
}

/// Table row for a module, if one is listed.
pub fn table_row(family: &str, level: u32) -> Option<&'static TableRow> {
    TABLE.iter().find(|r| r.family == family && r.level == level)
}

/// Reference Gram matrix of the A1 lattice in basis B1.
pub const GRAM_A1: [[i64; 6]; 6] = [
    [6, 2, 2, -2, -2, -2],
    [2, 6, 2, 2, -2, 2],
    [2, 2, 6, 2, 2, -2],
    [-2, 2, 2, 6, 2, 2],
    [-2, -2, 2, 2, 6, -2],
    [-2, 2, -2, 2, -2, 6],
];

/// Eight times the reference inverse of [`GRAM_A1`].
pub const INV_GRAM_A1_TIMES_8: [[i64; 6]; 6] = [
    [3, -1, -1, 1, 1, 1],
    [-1, 3, -1, -1, 1, -1],
    [-1, -1, 3, -1, -1, 1],
    [1, -1, -1, 3, -1, -1],
    [1, 1, -1, -1, 3, 1],
    [1, -1, 1, -1, 1, 3],
];

/// Reference Gram matrix of the A2 lattice (up to basis order and signs).
pub const GRAM_A2: [[i64; 12]; 12] = [
    [6, 0, 2, 0, 2, 0, -2, 1, -2, 2, -2, 2],
    [0, 6, 2, 2, 2, 2, 1, -1, 0, -2, 0, -2],
    [2, 2, 6, 0, 2, 2, 2, 2, -1, 1, 2, 2],
    [0, 2, 0, 6, 2, 0, 0, 2, 1, -2, 2, 0],
    [2, 2, 2, 2, 6, 0, 2, 2, 2, 2, -1, 1],
    [0, 2, 2, 0, 0, 6, 0, 2, 2, 0, 1, -2],
    [-2, 1, 2, 0, 2, 0, 6, 0, 2, 0, 2, 0],
    [1, -1, 2, 2, 2, 2, 0, 6, 2, 2, 2, 2],
    [-2, 0, -1, 1, 2, 2, 2, 2, 6, 0, 0, -2],
    [2, -2, 1, -2, 2, 0, 0, 2, 0, 6, -2, 2],
    [-2, 0, 2, 2, -1, 1, 2, 2, 0, -2, 6, 0],
    [2, -2, 2, 0, 1, -2, 0, 2, -2, 2, 0, 6],
];

/// Reference Gram matrix of the A3 lattice (up to basis order and signs).
pub const GRAM_A3: [[i64; 20]; 20] = [
    [6, 0, 0, 0, 2, 0, 0, 2, 0, 0, -2, 1, 0, 0, -2, 2, 0, -2, 2, 0],
    [0, 6, 0, 0, 2, 2, 2, 2, 2, 2, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 6, 0, 0, 0, 2, 0, 2, 0, 0, 1, -2, 0, 2, 0, -2, 0, -2, 2],
    [0, 0, 0, 6, 0, 2, 0, 0, 0, 2, 0, 1, 0, -2, 0, -2, 2, 2, 0, -2],
    [2, 2, 0, 0, 6, 0, 0, 2, 2, 0, 2, 2, 0, 0, -1, 1, 1, 2, 2, 0],
    [0, 2, 0, 2, 0, 6, 0, 2, 0, 2, 0, 2, 0, 2, 1, -1, 1, 2, 0, 2],
    [0, 2, 2, 0, 0, 0, 6, 0, 2, 2, 0, 2, 2, 0, 1, 1, -1, 0, 2, 2],
    [2, 2, 0, 0, 2, 2, 0, 6, 0, 0, 2, 2, 0, 0, 2, 2, 0, -1, 1, 1],
    [0, 2, 2, 0, 2, 0, 2, 0, 6, 0, 0, 2, 2, 0, 2, 0, 2, 1, -1, 1],
    [0, 2, 0, 2, 0, 2, 2, 0, 0, 6, 0, 2, 0, 2, 0, 2, 2, 1, 1, -1],
    [-2, 1, 0, 0, 2, 0, 0, 2, 0, 0, 6, 0, 0, 0, 2, 0, 0, 2, 0, 0],
    [1, 0, 1, 1, 2, 2, 2, 2, 2, 2, 0, 6, 0, 0, 2, 2, 2, 2, 2, 2],
    [0, 1, -2, 0, 0, 0, 2, 0, 2, 0, 0, 0, 6, 0, 0, 0, 2, 0, 2, 0],
    [0, 1, 0, -2, 0, 2, 0, 0, 0, 2, 0, 0, 0, 6, 0, 2, 0, 0, 0, 2],
    [-2, 0, 2, 0, -1, 1, 1, 2, 2, 0, 2, 2, 0, 0, 6, 0, 0, 0, -2, 2],
    [2, 0, 0, -2, 1, -1, 1, 2, 0, 2, 0, 2, 0, 2, 0, 6, 0, -2, 2, 0],
    [0, 0, -2, 2, 1, 1, -1, 0, 2, 2, 0, 2, 2, 0, 0, 0, 6, 2, 0, -2],
    [-2, 0, 0, 2, 2, 2, 0, -1, 1, 1, 2, 2, 0, 0, 0, -2, 2, 6, 0, 0],
    [2, 0, -2, 0, 2, 0, 2, 1, -1, 1, 0, 2, 2, 0, -2, 2, 0, 0, 6, 0],
    [0, 0, 2, -2, 0, 2, 2, 1, 1, -1, 0, 2, 0, 2, 2, 0, -2, 0, 0, 6],
];

/// Expansions of the 16 positive A1 higher roots in basis B1, in the
/// reference order.
pub const A1_ROOT_EXPANSIONS: [[i64; 6]; 16] = [
    [1, -1, 0, 0, 0, 1],
    [0, -1, 1, 0, -1, 0],
    [-1, 0, 1, -1, 0, 0],
    [0, 0, 0, -1, 1, 1],
    [0, 0, 0, 0, 0, 1],
    [0, -1, 0, 1, -1, 0],
    [-1, 0, 0, 0, -1, -1],
    [-1, 1, 0, -1, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, -1, 1, 0, -1],
    [0, 1, -1, 0, 0, -1],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [1, 0, -1, 0, 1, 0],
];

/// Elementary divisors of the A1 Gram matrix: `Z2 × (Z4)^4 × Z8`.
pub const A1_ELEMENTARY_DIVISORS: [u64; 6] = [2, 4, 4, 4, 4, 8];

/// Non-trivial elementary divisors of the A1 Gram matrix halved:
/// `(Z2)^4 × Z4`, order 64.
pub const A1_RESCALED_DIVISORS: [u64; 5] = [2, 2, 2, 2, 4];

/// Number of terms known for each `b_i` (through `q₂^23`).
pub const B_BASIS_TERMS: usize = 24;

/// `(exponent, coefficient)` pairs of the modular form basis `b_1 … b_7`
/// for the A1 theta series, weight 3, level 16.
pub const A1_B_BASIS: [&[(usize, i64)]; 7] = [
    &[(0, 1), (8, 12), (12, 64), (16, 60)],
    &[(1, 1), (9, 21), (13, 40), (17, 30), (21, 72)],
    &[(2, 1), (10, 26), (18, 73)],
    &[(3, 1), (7, 6), (11, 15), (15, 26), (19, 45), (23, 66)],
    &[(4, 1), (8, 4), (12, 8), (16, 16), (20, 26)],
    &[(5, 1), (9, 2), (13, 5), (17, 10), (21, 12)],
    &[(6, 1), (14, 6), (22, 15)],
];

/// The A1 theta series in the `b` basis: `θ = b_1 + 32 b_4 + 60 b_5`.
pub const A1_B_COMBINATION: [i64; 7] = [1, 0, 0, 32, 60, 0, 0];

/// Dense coefficients of `Σ c_i b_i` through `q₂^23`.
pub fn b_basis_series(combination: &[i64; 7]) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); B_BASIS_TERMS];
    for (c, b) in combination.iter().zip(A1_B_BASIS.iter()) {
        for &(e, v) in b.iter() {
            out[e] += BigInt::from(c * v);
        }
    }
    out
}

/// Modules whose matched character is compared with a Kronecker symbol
/// `(d / p)`, as `(family, level, d)`.
pub const CHARACTER_CHECKS: [(&str, u32, i64); 2] = [("A", 1, -4), ("A", 2, 5)];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice;
    use crate::matrix::IntMatrix;
    use crate::ribbon::quadratic_form;

    #[test]
    fn reference_gram_matrices_are_consistent() {
        let a1 = IntMatrix::from_rows(&GRAM_A1);
        let k8 = IntMatrix::from_rows(&INV_GRAM_A1_TIMES_8);
        assert_eq!(&a1 * &k8, IntMatrix::identity(6).scale(&BigInt::from(8)));
        assert_eq!(lattice::determinant(&a1).unwrap(), TABLE[0].determinant());
        for m in [IntMatrix::from_rows(&GRAM_A2), IntMatrix::from_rows(&GRAM_A3)] {
            assert!(m.is_symmetric());
            assert!((0..m.rows()).all(|i| m[(i, i)] == BigInt::from(6)));
        }
    }

    #[test]
    fn reference_roots_have_norm_six() {
        let a1 = IntMatrix::from_rows(&GRAM_A1);
        for r in A1_ROOT_EXPANSIONS {
            let x: Vec<BigInt> = r.iter().map(|&v| BigInt::from(v)).collect();
            assert_eq!(quadratic_form(&a1, &x), BigInt::from(6));
        }
    }

    #[test]
    fn b_combination_reproduces_the_a1_prefix() {
        let s = b_basis_series(&A1_B_COMBINATION);
        let a1 = THETA[1].coefficients;
        for (i, c) in s.iter().enumerate() {
            assert_eq!(*c, BigInt::from(a1[i]), "index {i}");
        }
    }

    #[test]
    fn table_is_self_consistent() {
        for r in TABLE {
            assert_eq!(r.roots as u32, 2 * r.rank as u32 * r.altitude * r.altitude / 3, "{}", r.name());
        }
    }
}
