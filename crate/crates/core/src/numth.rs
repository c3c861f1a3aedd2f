//! Elementary number theory for identifying theta-series characters:
//! Legendre symbols, the totient, unit groups mod ℓ and Dirichlet
//! characters with exact root-of-unity values.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Default bound on the primes used when matching characters.
pub const DEFAULT_PRIME_BOUND: u64 = 100;

/// Largest modulus for which unit groups are tabulated.
const MAX_MODULUS: u64 = 1 << 24;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut r = 1u128 % m128;
    let mut b = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    r as u64
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::domain(format!("{p} is not an odd prime")));
    }
    let r = a.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits");
    Ok(match pow_mod(r, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// Kronecker symbol `(a/n)`, extending the Jacobi symbol to every `n`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return (a.abs() == 1) as i8;
    }
    let mut r = 1i8;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            r = -r;
        }
    }
    let v = n.trailing_zeros();
    n >>= v;
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            r = -r;
        }
    }
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                r = -r;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            r = -r;
        }
        a %= n;
    }
    if n == 1 {
        r
    } else {
        0
    }
}

/// The unit group `(Z/ℓ)^×` as a direct product of cyclic factors.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    modulus: u64,
    /// `(generator, order)` pairs.
    generators: Vec<(u64, u64)>,
    /// Exponent tuple of every unit, `None` on non-units.
    logs: Vec<Option<Vec<u64>>>,
}

fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    let phi = p - 1;
    let factors = factorize(phi);
    let g = (2..p)
        .find(|&g| factors.iter().all(|&(q, _)| pow_mod(g, phi / q, p) != 1))
        .unwrap_or(1);
    if e == 1 {
        return g;
    }
    // g generates mod p^e unless g^(p-1) ≡ 1 mod p²
    if pow_mod(g, p - 1, p * p) == 1 {
        g + p
    } else {
        g
    }
}

/// `x ≡ r mod m`, `x ≡ 1 mod (ℓ/m)` with `gcd(m, ℓ/m) = 1`.
fn crt_lift(r: u64, m: u64, modulus: u64) -> u64 {
    let other = modulus / m;
    (0..modulus)
        .step_by(other as usize)
        .map(|x| x + 1)
        .find(|x| x % m == r % m)
        .map(|x| x % modulus)
        .expect("coprime moduli")
}

impl UnitGroup {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::domain("modulus must be at least 2"));
        }
        if modulus > MAX_MODULUS {
            return Err(Error::Unsupported(format!("modulus {modulus} is too large")));
        }
        let mut generators = Vec::new();
        for (p, e) in factorize(modulus) {
            let pe = p.pow(e);
            let local: Vec<(u64, u64)> = if p == 2 {
                match e {
                    1 => vec![],
                    2 => vec![(3, 2)],
                    _ => vec![(pe - 1, 2), (5, pe / 8 * 2)],
                }
            } else {
                vec![(primitive_root_prime_power(p, e), pe / p * (p - 1))]
            };
            for (g, order) in local {
                generators.push((crt_lift(g, pe, modulus), order));
            }
        }
        let mut logs = vec![None; modulus as usize];
        let mut exps = vec![0u64; generators.len()];
        let total: u64 = generators.iter().map(|g| g.1).product();
        for _ in 0..total {
            let x = generators
                .iter()
                .zip(&exps)
                .fold(1 % modulus, |acc, (&(g, _), &a)| acc * pow_mod(g, a, modulus) % modulus);
            if logs[x as usize].is_some() {
                return Err(Error::Internal(format!("generators of units mod {modulus} are not independent")));
            }
            logs[x as usize] = Some(exps.clone());
            for (a, &(_, o)) in exps.iter_mut().zip(&generators) {
                *a += 1;
                if *a < o {
                    break;
                }
                *a = 0;
            }
        }
        Ok(UnitGroup { modulus, generators, logs })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[(u64, u64)] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.generators.iter().map(|g| g.1).product()
    }

    /// Least common multiple of the cyclic factor orders.
    pub fn exponent(&self) -> u64 {
        self.generators.iter().fold(1, |acc, g| acc.lcm(&g.1))
    }

    /// Exponents `a` with `n ≡ Π g_j^{a_j}`; `None` when `n` is not a unit.
    pub fn log(&self, n: &BigInt) -> Option<&[u64]> {
        let r = n.mod_floor(&BigInt::from(self.modulus)).to_usize()?;
        self.logs[r].as_deref()
    }

    /// All `φ(ℓ)` characters, exponent tuples in lexicographic order.
    pub fn characters(&self) -> Vec<DirichletCharacter> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let group = Arc::new(self.clone());
        let mut exps = vec![0u64; self.generators.len()];
        loop {
            out.push(DirichletCharacter { group: Arc::clone(&group), exponents: exps.clone() });
            let mut j = exps.len();
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                exps[j] += 1;
                if exps[j] < self.generators[j].1 {
                    break;
                }
                exps[j] = 0;
            }
        }
    }
}

/// A value of a Dirichlet character: zero or `exp(2πi·k/m)` with `k/m` reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CharValue {
    Zero,
    Root { k: u64, m: u64 },
}

impl CharValue {
    fn root(k: u64, m: u64) -> Self {
        let g = k.gcd(&m);
        CharValue::Root { k: k / g, m: m / g }
    }

    /// The value as an integer when it is 0 or ±1.
    pub fn as_integer(self) -> Option<i8> {
        match self {
            CharValue::Zero => Some(0),
            CharValue::Root { m: 1, .. } => Some(1),
            CharValue::Root { k: 1, m: 2 } => Some(-1),
            _ => None,
        }
    }
}

impl fmt::Display for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(v) => write!(f, "{v}"),
            None => match self {
                CharValue::Root { k, m } => write!(f, "e(2πi·{k}/{m})"),
                CharValue::Zero => unreachable!(),
            },
        }
    }
}

/// A Dirichlet character mod ℓ, `χ(g_j) = exp(2πi·e_j/o_j)`.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    exponents: Vec<u64>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn value(&self, n: &BigInt) -> CharValue {
        let Some(log) = self.group.log(n) else {
            return CharValue::Zero;
        };
        let e = self.group.exponent();
        let k = self
            .group
            .generators
            .iter()
            .zip(&self.exponents)
            .zip(log)
            .map(|((&(_, o), &x), &a)| (x * a % o) * (e / o))
            .sum::<u64>()
            % e;
        CharValue::root(k, e)
    }

    pub fn value_at(&self, n: i64) -> CharValue {
        self.value(&BigInt::from(n))
    }

    pub fn order(&self) -> u64 {
        self.group
            .generators
            .iter()
            .zip(&self.exponents)
            .fold(1, |acc, (&(_, o), &x)| acc.lcm(&(o / x.gcd(&o))))
    }

    pub fn is_real(&self) -> bool {
        self.order() <= 2
    }

    pub fn is_principal(&self) -> bool {
        self.order() == 1
    }

    /// `χ(−1)` as ±1.
    pub fn parity(&self) -> i8 {
        self.value_at(-1).as_integer().expect("χ(−1) is ±1")
    }
}

/// `(−1)^s · det A`, the discriminant used when matching characters.
pub fn character_discriminant(det: &BigInt, half_dim: usize) -> BigInt {
    if half_dim % 2 == 1 {
        -det
    } else {
        det.clone()
    }
}

/// Every character mod `level` agreeing with `(Δ/p)` on the odd primes
/// `p ≤ prime_bound` not dividing `level`, where `Δ = (−1)^s det A`.
pub fn matching_characters(det: &BigInt, half_dim: usize, level: u64, prime_bound: u64) -> Result<Vec<DirichletCharacter>> {
    if prime_bound < 50 {
        return Err(Error::domain("prime bound must be at least 50"));
    }
    let delta = character_discriminant(det, half_dim);
    let group = UnitGroup::new(level)?;
    let mut targets = Vec::new();
    for p in (3..=prime_bound).filter(|&p| is_prime(p) && !level.is_multiple_of(p)) {
        let l = legendre(&delta, p)?;
        let want = match l {
            0 => CharValue::Zero,
            1 => CharValue::root(0, 1),
            _ => CharValue::root(1, 2),
        };
        targets.push((BigInt::from(p), want));
    }
    Ok(group
        .characters()
        .into_iter()
        .filter(|chi| targets.iter().all(|(p, want)| chi.value(p) == *want))
        .collect())
}

/// The unique real matching character; anything else signals an upstream
/// error in the level or discriminant.
pub fn matching_character(det: &BigInt, half_dim: usize, level: u64, prime_bound: u64) -> Result<DirichletCharacter> {
    let mut found = matching_characters(det, half_dim, level, prime_bound)?;
    match found.len() {
        1 if found[0].is_real() => Ok(found.remove(0)),
        1 => Err(Error::invariant("matching character is not real")),
        0 => Err(Error::invariant(format!("no character mod {level} matches the Legendre symbols"))),
        n => Err(Error::invariant(format!("{n} characters mod {level} match the Legendre symbols"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    // Brute-force quadratic residue test.
    fn residue_oracle(a: i64, p: u64) -> i8 {
        let r = a.rem_euclid(p as i64) as u64;
        if r == 0 {
            0
        } else if (1..p).any(|x| x * x % p == r) {
            1
        } else {
            -1
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn legendre_examples() {
        for p in [3, 5, 7, 11, 97] {
            assert_eq!(legendre(&big(1), p).unwrap(), 1);
        }
        assert_eq!(legendre(&big(2), 7).unwrap(), 1);
        assert_eq!(legendre(&big(5), 3).unwrap(), -1);
        assert_eq!(legendre(&big(21), 7).unwrap(), 0);
        assert!(legendre(&big(1), 2).is_err());
        assert!(legendre(&big(1), 9).is_err());
    }

    #[test]
    fn kronecker_examples() {
        let minus_four: Vec<i8> = (1..=8).map(|n| kronecker(-4, n)).collect();
        assert_eq!(minus_four, [1, 0, -1, 0, 1, 0, -1, 0]);
        let five: Vec<i8> = (1..=6).map(|n| kronecker(5, n)).collect();
        assert_eq!(five, [1, -1, -1, 1, 0, 1]);
        assert_eq!(kronecker(3, 0), 0);
        assert_eq!(kronecker(-1, 0), 1);
        assert_eq!(kronecker(-1, -1), -1);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(16), 8);
        assert_eq!(euler_phi(25), 20);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(18), 6);
    }

    #[test]
    fn unit_group_examples() {
        let g = UnitGroup::new(16).unwrap();
        let mut orders: Vec<u64> = g.generators().iter().map(|x| x.1).collect();
        orders.sort();
        assert_eq!(orders, [2, 4]);
        assert_eq!(g.order(), 8);
        let g = UnitGroup::new(25).unwrap();
        assert_eq!(g.generators().len(), 1);
        assert_eq!(g.generators()[0].1, 20);
        let g = UnitGroup::new(3).unwrap();
        assert_eq!(g.generators(), &[(2, 2)]);
        assert!(UnitGroup::new(1).is_err());
    }

    #[test]
    fn principal_character_fails_for_a1() {
        // χ(3) = −1 is forced by Δ = −4⁶.
        let det = big(4).pow(6);
        let all = UnitGroup::new(16).unwrap().characters();
        let principal = all.iter().find(|c| c.is_principal()).unwrap();
        let matches = matching_characters(&det, 3, 16, DEFAULT_PRIME_BOUND).unwrap();
        assert_eq!(matches.len(), 1);
        assert_ne!(matches[0].exponents(), principal.exponents());
        assert_eq!(matches[0].value_at(3).as_integer(), Some(-1));
    }

    #[test]
    fn prime_bound_is_checked() {
        assert!(matching_characters(&big(1), 1, 16, 10).is_err());
    }

    #[test]
    fn character_values_display() {
        let chars = UnitGroup::new(7).unwrap().characters();
        assert_eq!(chars.len(), 6);
        let shown: Vec<String> = chars.iter().map(|c| c.value_at(3).to_string()).collect();
        assert!(shown.contains(&"1".to_string()));
        assert!(shown.contains(&"-1".to_string()));
        assert!(shown.iter().any(|s| s.starts_with("e(")));
        assert_eq!(chars[1].value_at(7), CharValue::Zero);
    }

    proptest! {
        #[test]
        fn legendre_matches_brute_force(a in -500i64..500, idx in 0usize..10) {
            let p = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31][idx];
            prop_assert_eq!(legendre(&big(a), p).unwrap(), residue_oracle(a, p));
        }

        #[test]
        fn kronecker_agrees_with_legendre(a in -500i64..500, idx in 0usize..10) {
            let p = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31][idx];
            prop_assert_eq!(kronecker(a, p as i64), residue_oracle(a, p));
        }

        #[test]
        fn kronecker_is_multiplicative_in_n(a in -60i64..60, m in 1i64..200, n in 1i64..200) {
            prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
        }

        #[test]
        fn phi_matches_count(n in 1u64..2000) {
            let count = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            prop_assert_eq!(euler_phi(n), count);
        }

        #[test]
        fn unit_group_is_a_decomposition(n in 2u64..400) {
            let g = UnitGroup::new(n).unwrap();
            prop_assert_eq!(g.order(), euler_phi(n));
            for k in 0..n {
                let unit = gcd(k, n) == 1;
                prop_assert_eq!(g.log(&BigInt::from(k)).is_some(), unit);
            }
            for &(x, o) in g.generators() {
                prop_assert_eq!(pow_mod(x, o, n), 1 % n);
                for d in 1..o {
                    if o % d == 0 {
                        prop_assert_ne!(pow_mod(x, d, n), 1 % n);
                    }
                }
            }
        }

        #[test]
        fn characters_are_multiplicative(n in 2u64..120, a in -300i64..300, b in -300i64..300) {
            let g = UnitGroup::new(n).unwrap();
            let e = g.exponent();
            for chi in g.characters() {
                prop_assert_eq!(e % chi.order(), 0);
                let (va, vb, vab) = (chi.value_at(a), chi.value_at(b), chi.value_at(a * b));
                prop_assert_eq!(chi.value_at(a + n as i64), va);
                match (va, vb) {
                    (CharValue::Root { k: k1, m: m1 }, CharValue::Root { k: k2, m: m2 }) => {
                        let m = m1.lcm(&m2);
                        prop_assert_eq!(vab, CharValue::root((k1 * (m / m1) + k2 * (m / m2)) % m, m));
                    }
                    _ => prop_assert_eq!(vab, CharValue::Zero),
                }
            }
        }
    }
}
