//! Named checks of computed results against the reference data in
//! [`crate::golden`], grouped by acceptance criterion.
//!
//! Both the `verify` command and the acceptance test target run these.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::catalog::{get_module, QuantumModule};
use crate::error::{Error, Result};
use crate::golden::{self, TableRow, ThetaPrefix};
use crate::lattice;
use crate::matrix::IntMatrix;
use crate::numth;
use crate::ribbon::{BasisChoice, Expander, HigherRootVector, Ribbon, RibbonPoint};
use crate::theta;

/// Which checks to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Everything except the long enumerations.
    Fast,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Suite::Fast),
            "all" => Ok(Suite::All),
            _ => Err(Error::domain(format!("unknown suite {s:?}, expected all or fast"))),
        }
    }
}

/// Reference values the checks compare against.
#[derive(Clone, Debug)]
pub struct Golden {
    pub table: Vec<TableRow>,
    pub theta: Vec<ThetaPrefix>,
}

impl Golden {
    pub fn bundled() -> Self {
        Golden { table: golden::TABLE.to_vec(), theta: golden::THETA.to_vec() }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Roots(TableRow),
    Gram(u32),
    Invariants(TableRow),
    DualQuotient,
    Theta(ThetaPrefix),
    Shells(TableRow),
    Projection(&'static str, u32),
    RootIntegrality(TableRow),
    Character(&'static str, u32, i64),
    BBasis,
    Jacobi,
    Folding(u32),
    Harmonicity(u32),
    ThetaOracle,
    ThreadInvariance,
}

/// One named check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    /// Acceptance criterion number, 1 to 11.
    pub criterion: u8,
    /// `(family, level)` of the module the check is about, if any.
    pub module: Option<(String, u32)>,
    /// Excluded from the fast suite.
    pub slow: bool,
    /// Runtime allowance for this check alone, if it has one.
    pub budget: Option<Duration>,
    kind: Kind,
}

/// Result of running a [`Check`].
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub criterion: u8,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{:>2}] {:<28} {} ({:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.detail,
            self.elapsed
        )
    }
}

/// Combined runtime allowance of each criterion's checks.
pub fn criterion_budget(criterion: u8) -> Option<Duration> {
    let secs = match criterion {
        1 | 4 | 8 | 9 => 1,
        2 => 10,
        3 => 30,
        6 => 300,
        7 => 60,
        10 => 5,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

fn module_name(family: &str, level: u32) -> String {
    if family.starts_with('E') {
        family.to_string()
    } else {
        format!("{family}{level}")
    }
}

fn theta_budget(p: &ThetaPrefix) -> Duration {
    match (p.family, p.level) {
        ("E21", _) => Duration::from_secs(1800),
        ("A", 3) | ("A", 4) => Duration::from_secs(300),
        _ => Duration::from_secs(10),
    }
}

/// All checks for `golden`, in criterion order.
pub fn all_checks(golden: &Golden) -> Vec<Check> {
    let mut out = Vec::new();
    let mut push = |criterion: u8, name: String, module: Option<(&str, u32)>, slow: bool, kind: Kind| {
        let budget = match &kind {
            Kind::Theta(p) => Some(theta_budget(p)),
            _ => None,
        };
        out.push(Check { name, criterion, module: module.map(|(f, l)| (f.to_string(), l)), slow, budget, kind });
    };
    for r in &golden.table {
        push(1, format!("roots/{}", r.name()), Some((r.family, r.level)), false, Kind::Roots(*r));
    }
    for k in 1..=3 {
        push(2, format!("gram/A{k}"), Some(("A", k)), false, Kind::Gram(k));
    }
    for r in &golden.table {
        push(3, format!("invariants/{}", r.name()), Some((r.family, r.level)), false, Kind::Invariants(*r));
    }
    push(4, "dual-quotient/A1".into(), Some(("A", 1)), false, Kind::DualQuotient);
    for p in &golden.theta {
        let slow = p.family == "E21";
        push(5, format!("theta/{}", module_name(p.family, p.level)), Some((p.family, p.level)), slow, Kind::Theta(*p));
    }
    for r in &golden.table {
        let slow = r.lattice_rank > 24;
        push(6, format!("shells/{}", r.name()), Some((r.family, r.level)), slow, Kind::Shells(*r));
    }
    for (f, k) in [("A", 1), ("A", 2), ("A", 3), ("D", 3)] {
        push(7, format!("projection/{}", module_name(f, k)), Some((f, k)), false, Kind::Projection(f, k));
    }
    for r in &golden.table {
        push(8, format!("root-integrality/{}", r.name()), Some((r.family, r.level)), false, Kind::RootIntegrality(*r));
    }
    for (f, k, d) in golden::CHARACTER_CHECKS {
        push(9, format!("character/{}", module_name(f, k)), Some((f, k)), false, Kind::Character(f, k, d));
    }
    push(10, "b-basis/A1".into(), Some(("A", 1)), false, Kind::BBasis);
    push(10, "jacobi/A1".into(), Some(("A", 1)), false, Kind::Jacobi);
    for k in 1..=3 {
        push(11, format!("folding/A{k}"), Some(("A", k)), false, Kind::Folding(k));
    }
    for k in 1..=3 {
        push(11, format!("harmonicity/A{k}"), Some(("A", k)), false, Kind::Harmonicity(k));
    }
    push(11, "theta-oracle".into(), None, false, Kind::ThetaOracle);
    push(11, "thread-invariance".into(), None, false, Kind::ThreadInvariance);
    out
}

/// Checks of `suite`, optionally restricted to one module.
pub fn select(golden: &Golden, suite: Suite, module: Option<(&str, u32)>) -> Vec<Check> {
    all_checks(golden)
        .into_iter()
        .filter(|c| suite == Suite::All || !c.slow)
        .filter(|c| match module {
            None => true,
            Some((f, k)) => c.module.as_ref().is_some_and(|(cf, ck)| cf == f && *ck == k),
        })
        .collect()
}

/// A module with the data most checks share.
struct ModuleData {
    ribbon: Ribbon,
    basis: Vec<RibbonPoint>,
    gram: IntMatrix,
    expansions: Vec<HigherRootVector>,
}

impl ModuleData {
    fn module(&self) -> &QuantumModule {
        self.ribbon.module()
    }
}

/// Shared state for a verification run; modules are built once.
pub struct Verifier {
    golden: Golden,
    threads: usize,
    modules: RefCell<HashMap<(String, u32), Rc<ModuleData>>>,
}

type Outcome = std::result::Result<String, String>;

impl Verifier {
    pub fn new(golden: Golden, threads: usize) -> Self {
        Verifier { golden, threads: threads.max(1), modules: RefCell::new(HashMap::new()) }
    }

    pub fn golden(&self) -> &Golden {
        &self.golden
    }

    fn data(&self, family: &str, level: u32) -> Result<Rc<ModuleData>> {
        let key = (family.to_string(), level);
        if let Some(d) = self.modules.borrow().get(&key) {
            return Ok(Rc::clone(d));
        }
        let module = get_module(family, level)?;
        let ribbon = Ribbon::new(&module)?;
        let basis = ribbon.basis(BasisChoice::B1)?;
        let expander = Expander::new(&ribbon, basis.clone())?;
        let expansions = expander.expand_all()?;
        let gram = expander.gram().clone();
        drop(expander);
        let d = Rc::new(ModuleData { ribbon, basis, gram, expansions });
        self.modules.borrow_mut().insert(key, Rc::clone(&d));
        Ok(d)
    }

    /// Runs one check; errors from the library count as failures.
    pub fn run(&self, check: &Check) -> CheckOutcome {
        let start = Instant::now();
        let result = self.dispatch(&check.kind).unwrap_or_else(|e| Err(format!("error: {e}")));
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        if let Some(b) = check.budget {
            if elapsed > b {
                passed = false;
                detail = format!("{detail}; exceeded {b:?}");
            }
        }
        CheckOutcome { name: check.name.clone(), criterion: check.criterion, passed, detail, elapsed }
    }

    fn dispatch(&self, kind: &Kind) -> Result<Outcome> {
        match kind {
            Kind::Roots(r) => self.roots(r),
            Kind::Gram(k) => self.gram(*k),
            Kind::Invariants(r) => self.invariants(r),
            Kind::DualQuotient => self.dual_quotient(),
            Kind::Theta(p) => self.theta(p),
            Kind::Shells(r) => self.shells(r),
            Kind::Projection(f, k) => self.projection(f, *k),
            Kind::RootIntegrality(r) => self.root_integrality(r),
            Kind::Character(f, k, d) => self.character(f, *k, *d),
            Kind::BBasis => self.b_basis(),
            Kind::Jacobi => self.jacobi(),
            Kind::Folding(k) => self.folding(*k),
            Kind::Harmonicity(k) => self.harmonicity(*k),
            Kind::ThetaOracle => self.theta_oracle(),
            Kind::ThreadInvariance => self.thread_invariance(),
        }
    }

    fn roots(&self, r: &TableRow) -> Result<Outcome> {
        let d = self.data(r.family, r.level)?;
        let (half, all) = (d.ribbon.points().len(), d.ribbon.root_count());
        let detail = format!("|R∨| = {half}, |R| = {all}");
        Ok(if all == r.roots && d.module().rank() == r.rank {
            Ok(detail)
        } else {
            Err(format!("{detail}, r_E = {}; expected |R| = {}, r_E = {}", d.module().rank(), r.roots, r.rank))
        })
    }

    fn gram(&self, k: u32) -> Result<Outcome> {
        let d = self.data("A", k)?;
        let reference = match k {
            1 => IntMatrix::from_rows(&golden::GRAM_A1),
            2 => IntMatrix::from_rows(&golden::GRAM_A2),
            3 => IntMatrix::from_rows(&golden::GRAM_A3),
            _ => return Err(Error::domain(format!("no reference Gram matrix for A{k}"))),
        };
        let det = lattice::determinant(&d.gram)?;
        let row = self.golden.table.iter().find(|r| r.family == "A" && r.level == k);
        let expected = row.ok_or_else(|| Error::domain(format!("no table row for A{k}")))?.determinant();
        if det != expected {
            return Ok(Err(format!("det = {det}, expected {expected}")));
        }
        Ok(match lattice::find_signed_permutation(&d.gram, &reference)? {
            Some(s) => Ok(format!("det = {det}, congruent via permutation {:?}", s.perm)),
            None => Err("not congruent to the reference by a signed permutation".into()),
        })
    }

    fn invariants(&self, r: &TableRow) -> Result<Outcome> {
        let d = self.data(r.family, r.level)?;
        let inv = lattice::invariants(&d.gram)?;
        let level = inv.modular_level.to_u64().ok_or_else(|| Error::Internal("level exceeds 64 bits".into()))?;
        let phi = numth::euler_phi(level);
        let detail = format!("Δ = {}, ℓ = {level}, φ(ℓ) = {phi}, 𝔯 = {}", inv.determinant, inv.dimension);
        let mut wrong = Vec::new();
        if inv.determinant != r.determinant() {
            wrong.push(format!("Δ (expected {}^{})", r.det_base, r.det_exp));
        }
        if level != r.modular_level {
            wrong.push(format!("ℓ (expected {})", r.modular_level));
        }
        if phi != r.phi {
            wrong.push(format!("φ(ℓ) (expected {})", r.phi));
        }
        if inv.dimension != r.lattice_rank {
            wrong.push(format!("𝔯 (expected {})", r.lattice_rank));
        }
        Ok(if wrong.is_empty() { Ok(detail) } else { Err(format!("{detail}; mismatched {}", wrong.join(", "))) })
    }

    fn dual_quotient(&self) -> Result<Outcome> {
        let d = self.data("A", 1)?;
        let snf: Vec<BigInt> = lattice::smith_normal_form(&d.gram);
        let want: Vec<BigInt> = golden::A1_ELEMENTARY_DIVISORS.iter().map(|&x| BigInt::from(x)).collect();
        if snf != want {
            return Ok(Err(format!("SNF {snf:?}, expected {want:?}")));
        }
        let half = halve(&d.gram).ok_or_else(|| Error::invariant("A1 Gram matrix has odd entries"))?;
        let rescaled: Vec<BigInt> = lattice::smith_normal_form(&half).into_iter().filter(|x| !x.is_one()).collect();
        let want: Vec<BigInt> = golden::A1_RESCALED_DIVISORS.iter().map(|&x| BigInt::from(x)).collect();
        let order: BigInt = rescaled.iter().product();
        Ok(if rescaled == want && order == BigInt::from(64) {
            Ok(format!("SNF {}, rescaled {} (order {order})", join(&snf), join(&rescaled)))
        } else {
            Err(format!("rescaled divisors {rescaled:?} (order {order}), expected {want:?}"))
        })
    }

    fn theta_gram(&self, family: &str, level: u32, rescale: i64) -> Result<IntMatrix> {
        let gram = self.data(family, level)?.gram.clone();
        if rescale == 1 {
            return Ok(gram);
        }
        let r = BigInt::from(rescale);
        if gram.entries().any(|x| !(x % &r).is_zero()) {
            return Err(Error::invariant(format!("Gram matrix is not divisible by {rescale}")));
        }
        Ok(IntMatrix::from_fn(gram.rows(), gram.cols(), |i, j| &gram[(i, j)] / &r))
    }

    fn theta(&self, p: &ThetaPrefix) -> Result<Outcome> {
        let gram = self.theta_gram(p.family, p.level, p.rescale)?;
        let count = p.checked - p.slow_tail;
        let got = theta::theta_coefficients(&gram, count - 1, self.threads)?;
        let want: Vec<BigInt> = p.coefficients[..count].iter().map(|&x| BigInt::from(x)).collect();
        if got.coefficients == want {
            return Ok(Ok(format!("{} coefficients match, last {}", count, want[count - 1])));
        }
        let i = (0..count).find(|&i| got.coefficients[i] != want[i]).unwrap_or(0);
        Ok(Err(format!("coefficient {i} is {}, expected {} ({})", got.coefficients[i], want[i], p.citation)))
    }

    fn shells(&self, r: &TableRow) -> Result<Outcome> {
        let d = self.data(r.family, r.level)?;
        let roots = theta::signed_roots(&d.expansions)?;
        let (reports, matched) = theta::classify_shells(&d.gram, &roots, 6, self.threads)?;
        let shell = |n: i64| reports.iter().find(|s| s.norm == n).cloned();
        let summary = reports
            .iter()
            .map(|s| format!("norm {}: {} ({} roots)", s.norm, s.size, s.roots_in_shell))
            .collect::<Vec<_>>()
            .join(", ");
        let mut problems = Vec::new();
        if matched != roots.len() {
            problems.push(format!("only {matched} of {} roots found", roots.len()));
        }
        match reports.first() {
            Some(s) if s.norm == r.kiss_norm as i64 && s.size as u64 == r.kiss_count => {}
            _ => problems.push(format!("first shell should be {} at norm {}", r.kiss_count, r.kiss_norm)),
        }
        let six = shell(6);
        let six_size = six.as_ref().map_or(0, |s| s.size);
        match (r.family, r.level) {
            ("A", _) | ("E5", _) => {
                if reports.len() != 1 || six_size != r.roots {
                    problems.push("norm-6 shell should be exactly the roots, with nothing shorter".into());
                }
            }
            ("D", 3) => {
                let four = shell(4);
                if reports.iter().any(|s| s.norm == 2) || four.map(|s| (s.size, s.roots_in_shell)) != Some((36, 0)) {
                    problems.push("expected a 36-vector norm-4 shell of non-roots".into());
                }
                if six_size != r.roots {
                    problems.push("norm-6 shell should equal the roots".into());
                }
            }
            _ => {
                if six_size <= r.roots {
                    problems.push("norm-6 shell should strictly contain the roots".into());
                }
            }
        }
        Ok(if problems.is_empty() { Ok(summary) } else { Err(format!("{summary}; {}", problems.join("; "))) })
    }

    fn projection(&self, family: &str, level: u32) -> Result<Outcome> {
        let d = self.data(family, level)?;
        let (big, rank) = d.ribbon.big_gram()?;
        let expander = Expander::new(&d.ribbon, d.basis.clone())?;
        Ok(if expander.projection_identity_holds(&big) {
            Ok(format!("rank {rank} = 2 r_E, A_big = T A⁻¹ Tᵀ over {} roots", big.rows()))
        } else {
            Err("A_big ≠ T A⁻¹ Tᵀ".into())
        })
    }

    fn root_integrality(&self, r: &TableRow) -> Result<Outcome> {
        let d = self.data(r.family, r.level)?;
        let six = BigInt::from(6);
        if let Some(v) = d.expansions.iter().find(|v| v.norm(&d.gram) != six) {
            return Ok(Err(format!("root {:?} has norm {}", v.coords, v.norm(&d.gram))));
        }
        let detail = format!("{} integral expansions of norm 6", d.expansions.len());
        if (r.family, r.level) != ("A", 1) {
            return Ok(Ok(detail));
        }
        let reference = IntMatrix::from_rows(&golden::GRAM_A1);
        let Some(s) = lattice::find_signed_permutation(&d.gram, &reference)? else {
            return Ok(Err("Gram matrix not congruent to the reference".into()));
        };
        // Reference coordinates: y_j = sign_j x_{perm_j}, compared up to ±.
        let ours: BTreeSet<Vec<i64>> = theta::signed_roots(&d.expansions)?
            .into_iter()
            .map(|x| (0..x.len()).map(|j| s.sign[j] as i64 * x[s.perm[j]]).collect())
            .collect();
        let theirs: BTreeSet<Vec<i64>> = golden::A1_ROOT_EXPANSIONS
            .iter()
            .flat_map(|x| [x.to_vec(), x.iter().map(|v| -v).collect()])
            .collect();
        Ok(if ours == theirs && d.expansions.len() == golden::A1_ROOT_EXPANSIONS.len() {
            Ok(format!("{detail}; matches the reference list"))
        } else {
            Err(format!("{detail}; differs from the reference list"))
        })
    }

    fn character(&self, family: &str, level: u32, kronecker: i64) -> Result<Outcome> {
        let d = self.data(family, level)?;
        let inv = lattice::invariants(&d.gram)?;
        let ell = inv.modular_level.to_u64().ok_or_else(|| Error::Internal("level exceeds 64 bits".into()))?;
        let s = d.module().rank();
        let found = numth::matching_characters(&inv.determinant, s, ell, numth::DEFAULT_PRIME_BOUND)?;
        if found.len() != 1 {
            return Ok(Err(format!("{} characters mod {ell} match", found.len())));
        }
        let chi = &found[0];
        if !chi.is_real() {
            return Ok(Err("matched character is not real".into()));
        }
        let parity = if s % 2 == 0 { 1 } else { -1 };
        if chi.parity() != parity {
            return Ok(Err(format!("χ(−1) = {}, expected {parity}", chi.parity())));
        }
        for n in 1..=ell as i64 {
            let v = chi.value_at(n).as_integer();
            let want = if num_integer::Integer::gcd(&n, &(ell as i64)) == 1 { numth::kronecker(kronecker, n) } else { 0 };
            if v != Some(want) {
                return Ok(Err(format!("χ({n}) differs from the Kronecker symbol ({kronecker}/{n})")));
            }
        }
        Ok(Ok(format!("unique match mod {ell}, exponents {:?}, equals ({kronecker}/·)", chi.exponents())))
    }

    fn a1_theta(&self, max_index: usize) -> Result<Vec<BigInt>> {
        let d = self.data("A", 1)?;
        Ok(theta::theta_coefficients(&d.gram, max_index, self.threads)?.coefficients)
    }

    fn b_basis(&self) -> Result<Outcome> {
        let got = self.a1_theta(golden::B_BASIS_TERMS - 1)?;
        let want = golden::b_basis_series(&golden::A1_B_COMBINATION);
        Ok(match (0..want.len()).find(|&i| got[i] != want[i]) {
            None => Ok(format!("θ = b1 + 32 b4 + 60 b5 through index {}", want.len() - 1)),
            Some(i) => Err(format!("index {i}: θ has {}, combination gives {}", got[i], want[i])),
        })
    }

    fn jacobi(&self) -> Result<Outcome> {
        const M: usize = 40;
        let got = self.a1_theta(M)?;
        let want = theta::jacobi_cross_check_a1(M);
        Ok(match (0..=M).find(|&i| got[i] != want[i]) {
            None => Ok(format!("agrees with the ϑ combination through index {M}")),
            Some(i) => Err(format!("index {i}: θ has {}, ϑ combination gives {}", got[i], want[i])),
        })
    }

    fn folding(&self, k: u32) -> Result<Outcome> {
        let d = self.data("A", k)?;
        let n = d.ribbon.extended().altitude();
        Ok(match d.ribbon.extended().check_period() {
            Ok(()) => Ok(format!("odd under reflections and periodic on the {}×{} period", 3 * n, 3 * n)),
            Err(e) => Err(e.to_string()),
        })
    }

    fn harmonicity(&self, k: u32) -> Result<Outcome> {
        let d = self.data("A", k)?;
        let points = d.ribbon.points();
        Ok(match points.iter().find(|&&a| !d.ribbon.harmonicity_check(a)) {
            None => Ok(format!("harmonic at all {} ribbon points", points.len())),
            Some(a) => Err(format!("not harmonic at {a}")),
        })
    }

    fn theta_oracle(&self) -> Result<Outcome> {
        let mut forms: Vec<(String, IntMatrix, usize)> = vec![
            ("diag(2)".into(), IntMatrix::from_rows(&[[2]]), 10),
            ("hexagonal".into(), IntMatrix::from_rows(&[[2, -1], [-1, 2]]), 10),
            ("D4".into(), IntMatrix::from_rows(&[[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]), 6),
            ("A0/3".into(), self.theta_gram("A", 0, 3)?, 10),
        ];
        let a1 = self.data("A", 1)?;
        forms.push(("A1".into(), a1.gram.clone(), 10));
        let b2 = a1.ribbon.gram_matrix(&a1.ribbon.basis(BasisChoice::B2)?);
        forms.push(("A1 (B2)".into(), b2, 8));
        for (name, a, m) in &forms {
            let fast = theta::theta_coefficients(a, *m, self.threads)?.coefficients;
            let slow = naive_theta(a, *m)?;
            if fast != slow {
                return Ok(Err(format!("{name}: enumeration {} vs box {}", join(&fast), join(&slow))));
            }
        }
        Ok(Ok(format!("{} forms agree with box enumeration", forms.len())))
    }

    fn thread_invariance(&self) -> Result<Outcome> {
        let d = self.data("A", 2)?;
        let base = theta::theta_coefficients(&d.gram, 10, 1)?;
        for t in [2, 3, 8] {
            if theta::theta_coefficients(&d.gram, 10, t)? != base {
                return Ok(Err(format!("{t} threads give a different series")));
            }
        }
        Ok(Ok("A2 series identical for 1, 2, 3 and 8 threads".into()))
    }
}

fn halve(a: &IntMatrix) -> Option<IntMatrix> {
    let two = BigInt::from(2);
    if a.entries().any(|x| !(x % &two).is_zero()) {
        return None;
    }
    Some(IntMatrix::from_fn(a.rows(), a.cols(), |i, j| &a[(i, j)] / &two))
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Counts lattice vectors by norm over the box `|x_i|² ≤ 2M (A⁻¹)_ii`,
/// which contains every vector of norm at most `2M`.
pub fn naive_theta(a: &IntMatrix, max_index: usize) -> Result<Vec<BigInt>> {
    let n = a.rows();
    let k = lattice::rational_inverse(a)?;
    let bound = BigInt::from(2 * max_index);
    let mut limits = Vec::with_capacity(n);
    for (i, row) in k.iter().enumerate() {
        let kii = &row[i];
        // largest b with b² · den ≤ 2M · num
        let mut b = 0i64;
        while BigInt::from((b + 1) * (b + 1)) * kii.denom() <= &bound * kii.numer() {
            b += 1;
        }
        limits.push(b);
    }
    let size: u128 = limits.iter().map(|&b| (2 * b + 1) as u128).product();
    if size > 50_000_000 {
        return Err(Error::Unsupported(format!("box of {size} points is too large")));
    }
    let g = a.to_i64_rows().ok_or_else(|| Error::Unsupported("Gram entries exceed 64 bits".into()))?;
    let mut counts = vec![BigInt::zero(); max_index + 1];
    let mut x: Vec<i64> = limits.iter().map(|&b| -b).collect();
    loop {
        let q: i64 = (0..n).map(|i| (0..n).map(|j| x[i] * g[i][j] * x[j]).sum::<i64>()).sum();
        if q % 2 == 0 && q >= 0 && (q / 2) as usize <= max_index {
            counts[(q / 2) as usize] += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(counts);
            }
            x[i] += 1;
            if x[i] <= limits[i] {
                break;
            }
            x[i] = -limits[i];
            i += 1;
        }
    }
}

/// Runs `checks` in order, handing each outcome to `report` as it completes.
pub fn run_checks(verifier: &Verifier, checks: &[Check], mut report: impl FnMut(&CheckOutcome)) -> Vec<CheckOutcome> {
    checks
        .iter()
        .map(|c| {
            let o = verifier.run(c);
            report(&o);
            o
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_filters() {
        let g = Golden::bundled();
        let all = select(&g, Suite::All, None);
        let fast = select(&g, Suite::Fast, None);
        assert!(fast.len() < all.len());
        assert!(all.iter().any(|c| c.name == "theta/E21"));
        assert!(!fast.iter().any(|c| c.name == "theta/E21"));
        let a1 = select(&g, Suite::Fast, Some(("A", 1)));
        assert!(a1.iter().all(|c| c.module == Some(("A".into(), 1))));
        assert!(a1.iter().any(|c| c.criterion == 10));
        let crits: BTreeSet<u8> = all.iter().map(|c| c.criterion).collect();
        assert_eq!(crits, (1..=11).collect());
        assert!("slow".parse::<Suite>().is_err());
    }

    #[test]
    fn naive_theta_small_cases() {
        let a = IntMatrix::from_rows(&[[2]]);
        let c: Vec<i64> = naive_theta(&a, 4).unwrap().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(c, [1, 2, 0, 0, 2]);
        let hex = IntMatrix::from_rows(&[[2, -1], [-1, 2]]);
        let c: Vec<i64> = naive_theta(&hex, 4).unwrap().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(c, [1, 6, 0, 6, 6]);
    }

    #[test]
    fn tampered_coefficient_fails_by_name() {
        let mut g = Golden::bundled();
        let p = g.theta.iter_mut().find(|p| p.family == "A" && p.level == 1).unwrap();
        let mut coeffs = p.coefficients.to_vec();
        coeffs[3] += 1;
        p.coefficients = Box::leak(coeffs.into_boxed_slice());
        let v = Verifier::new(g.clone(), 1);
        let check = select(&g, Suite::Fast, Some(("A", 1))).into_iter().find(|c| c.name == "theta/A1").unwrap();
        let o = v.run(&check);
        assert!(!o.passed);
        assert!(o.detail.contains("coefficient 3"), "{}", o.detail);
    }
}
