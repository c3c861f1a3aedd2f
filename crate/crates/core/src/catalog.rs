//! Quantum module data: the built-in `A_k` series and file-loaded `D`/`E`
//! modules, with structural validation.
//!
//! Module files are line oriented:
//!
//! ```text
//! name: E5
//! level: 5
//! rank: 12
//! triality: 0 1 2 ...
//! adjacency:
//! <rank rows of rank non-negative integers>
//! ```
//!
//! Blank lines and `#` comments are ignored.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::folding::ExtendedFusion;
use crate::fusion::{a_generator, build_alcove_fusion, FusionTable};
use crate::matrix::IntMatrix;

/// Environment variable that replaces the bundled module-file directory.
pub const DATA_DIR_ENV: &str = "HYPERLAT_DATA_DIR";

const BUNDLED: [(&str, u32, &str); 5] = [
    ("D", 3, include_str!("../data/D3.txt")),
    ("D", 6, include_str!("../data/D6.txt")),
    ("E5", 5, include_str!("../data/E5.txt")),
    ("E9", 9, include_str!("../data/E9.txt")),
    ("E21", 21, include_str!("../data/E21.txt")),
];

/// A module over the level-`k` SU(3) fusion ring, given by the action of the
/// `(1,0)` generator on its simple objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumModule {
    pub name: String,
    pub level: u32,
    pub adjacency: IntMatrix,
    pub trialities: Vec<u8>,
}

impl QuantumModule {
    /// Number of simple objects `r_E`.
    pub fn rank(&self) -> usize {
        self.trialities.len()
    }

    /// Altitude `N = k + 3`.
    pub fn altitude(&self) -> i64 {
        i64::from(self.level) + 3
    }

    /// Whether the vertices carry more than one triality class.
    pub fn has_nontrivial_grading(&self) -> bool {
        self.trialities.iter().any(|&t| t != self.trialities[0])
    }

    /// Alcove fusion table of the module.
    pub fn fusion(&self) -> Result<FusionTable> {
        build_alcove_fusion(&self.adjacency, self.level)
    }

    /// Fusion table extended to all shifted weights.
    pub fn extended(&self) -> Result<ExtendedFusion> {
        ExtendedFusion::new(self.fusion()?)
    }

    /// Structural checks: shape, grading compatibility of every edge, the
    /// fusion recursion (non-negative on the alcove, zero on the wall) and
    /// the `Z_3` twist.
    pub fn validate(&self) -> Result<()> {
        let r = self.rank();
        if r == 0 {
            return Err(Error::validation("module has no vertices"));
        }
        if self.adjacency.rows() != r || self.adjacency.cols() != r {
            return Err(Error::validation(format!(
                "adjacency is {}x{} but rank is {r}",
                self.adjacency.rows(),
                self.adjacency.cols()
            )));
        }
        if let Some(t) = self.trialities.iter().find(|&&t| t > 2) {
            return Err(Error::validation(format!("triality {t} is not in 0..2")));
        }
        for a in 0..r {
            for b in 0..r {
                let x = &self.adjacency[(a, b)];
                if x.is_negative() {
                    return Err(Error::validation(format!("adjacency entry ({a},{b}) is negative")));
                }
                if x.is_positive() && self.trialities[b] != (self.trialities[a] + 1) % 3 {
                    return Err(Error::validation(format!(
                        "grading: edge {a} -> {b} joins trialities {} and {}",
                        self.trialities[a], self.trialities[b]
                    )));
                }
            }
        }
        self.extended()?.twist_p()?;
        Ok(())
    }
}

/// The `A_k` module: the fusion ring acting on itself.
pub fn builtin_a(k: u32) -> QuantumModule {
    let (adjacency, trialities) = a_generator(k);
    QuantumModule { name: format!("A{k}"), level: k, adjacency, trialities }
}

/// Rank `r_E` predicted for a supported `(name, level)` pair.
pub fn expected_rank(name: &str, k: u32) -> Option<usize> {
    let k = k as usize;
    match name {
        "A" => Some((k + 1) * (k + 2) / 2),
        "D" if k > 0 && k.is_multiple_of(3) => Some(((k + 1) * (k + 2) / 2 - 1) / 3 + 3),
        "E5" if k == 5 => Some(12),
        "E9" if k == 9 => Some(12),
        "E21" if k == 21 => Some(24),
        _ => None,
    }
}

/// Module names with bundled data, as `(name, level)`.
pub fn bundled_modules() -> Vec<(&'static str, u32)> {
    BUNDLED.iter().map(|&(n, k, _)| (n, k)).collect()
}

/// Looks up a module by family name and level.
///
/// `A` is built for any level. `D` (level divisible by 3) and `E5`, `E9`,
/// `E21` are read from the bundled data, or from `$HYPERLAT_DATA_DIR/<name><k>.txt`
/// (`E` names already carry the level) when that variable is set.
pub fn get_module(name: &str, k: u32) -> Result<QuantumModule> {
    if name == "A" {
        return Ok(builtin_a(k));
    }
    let Some(rank) = expected_rank(name, k) else {
        return Err(Error::domain(format!("no module {name} at level {k}")));
    };
    let file_stem = if name == "D" { format!("D{k}") } else { name.to_string() };
    let module = match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => load_module_file(Path::new(&dir).join(format!("{file_stem}.txt")))?,
        None => {
            let text = BUNDLED
                .iter()
                .find(|&&(n, l, _)| n == name && l == k)
                .map(|&(_, _, t)| t)
                .ok_or_else(|| Error::Unsupported(format!("no data bundled for {file_stem}")))?;
            parse_module(text)?
        }
    };
    if module.level != k {
        return Err(Error::validation(format!(
            "data file for {file_stem} declares level {}",
            module.level
        )));
    }
    if module.rank() != rank {
        return Err(Error::validation(format!(
            "{file_stem} has rank {} but the series formula gives {rank}",
            module.rank()
        )));
    }
    module.validate()?;
    Ok(module)
}

/// Reads, parses and validates a module file.
pub fn load_module_file(path: impl AsRef<Path>) -> Result<QuantumModule> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let module = parse_module(&text)?;
    module.validate()?;
    Ok(module)
}

/// Parses module text without running validation beyond shape checks.
pub fn parse_module(text: &str) -> Result<QuantumModule> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut last_line = 0;
    let mut next = |what: &str| -> Result<(usize, &str)> {
        match lines.next() {
            Some((n, l)) => {
                last_line = n;
                Ok((n, l))
            }
            None => Err(Error::Parse { line: last_line + 1, message: format!("unexpected end of file, expected {what}") }),
        }
    };

    let (_, name) = field(next("name")?, "name")?;
    let name = name.to_string();
    let (n, level) = field(next("level")?, "level")?;
    let level: u32 = parse_num(n, level)?;
    let (n, rank) = field(next("rank")?, "rank")?;
    let rank: usize = parse_num(n, rank)?;
    if rank == 0 {
        return Err(Error::Parse { line: n, message: "rank must be positive".into() });
    }
    let (n, tri) = field(next("triality")?, "triality")?;
    let trialities = tri
        .split_whitespace()
        .map(|t| parse_num::<u8>(n, t))
        .collect::<Result<Vec<_>>>()?;
    if trialities.len() != rank {
        return Err(Error::Parse {
            line: n,
            message: format!("expected {rank} trialities, found {}", trialities.len()),
        });
    }
    if let Some(t) = trialities.iter().find(|&&t| t > 2) {
        return Err(Error::Parse { line: n, message: format!("triality {t} is not in 0..2") });
    }
    let (n, rest) = field(next("adjacency")?, "adjacency")?;
    if !rest.is_empty() {
        return Err(Error::Parse { line: n, message: "unexpected text after `adjacency:`".into() });
    }
    let mut adjacency = IntMatrix::zeros(rank, rank);
    for i in 0..rank {
        let (n, row) = next("adjacency row")?;
        let vals = row
            .split_whitespace()
            .map(|t| parse_num::<BigInt>(n, t))
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != rank {
            return Err(Error::Parse {
                line: n,
                message: format!("expected {rank} entries in adjacency row, found {}", vals.len()),
            });
        }
        for (j, v) in vals.into_iter().enumerate() {
            if v.is_negative() {
                return Err(Error::Parse { line: n, message: "adjacency entries must be non-negative".into() });
            }
            adjacency[(i, j)] = v;
        }
    }
    if let Ok((n, _)) = next("end of file") {
        return Err(Error::Parse { line: n, message: "trailing content after adjacency matrix".into() });
    }
    Ok(QuantumModule { name, level, adjacency, trialities })
}

fn field<'a>((n, line): (usize, &'a str), key: &str) -> Result<(usize, &'a str)> {
    match line.split_once(':') {
        Some((k, v)) if k.trim() == key => Ok((n, v.trim())),
        _ => Err(Error::Parse { line: n, message: format!("expected `{key}:`") }),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse { line, message: format!("invalid number `{s}`") })
}

/// Renders a module in the file format accepted by [`parse_module`].
pub fn to_module_text(m: &QuantumModule) -> String {
    let mut s = format!("name: {}\nlevel: {}\nrank: {}\ntriality:", m.name, m.level, m.rank());
    for t in &m.trialities {
        s.push_str(&format!(" {t}"));
    }
    s.push_str("\nadjacency:\n");
    for i in 0..m.rank() {
        let row: Vec<String> = m.adjacency.row(i).iter().map(ToString::to_string).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}
