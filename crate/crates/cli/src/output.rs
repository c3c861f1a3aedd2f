//! Text, JSON and CSV rendering. Integers go into JSON as decimal strings.

use clap::ValueEnum;
use hyperlat_core::lattice::LatticeInvariants;
use hyperlat_core::IntMatrix;
use num_bigint::BigInt;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| strings(m.row(i))).collect()
}

/// Writes `|n|` as a product of prime powers, e.g. `2^30` or `2^2·3`.
pub fn factored(n: &BigInt) -> String {
    let Ok(v) = u64::try_from(n.magnitude()) else {
        return n.magnitude().to_string();
    };
    if v < 2 {
        return v.to_string();
    }
    hyperlat_core::numth::factorize(v)
        .iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("·")
}

pub struct GramReport<'a> {
    pub module: &'a str,
    pub level: u32,
    pub basis: &'a str,
    pub gram: &'a IntMatrix,
    pub invariants: &'a LatticeInvariants,
}

pub fn gram(r: &GramReport, format: Format) -> String {
    let inv = r.invariants;
    match format {
        Format::Text => {
            let rows = matrix_rows(r.gram);
            let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
            let mut s = String::new();
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                s.push_str(&cells.join(" "));
                s.push('\n');
            }
            s.push_str(&format!("det = {} = {}\n", inv.determinant, factored(&inv.determinant)));
            s.push_str(&format!("level = {}\n", inv.modular_level));
            s.push_str(&format!("snf = {}\n", strings(&inv.elementary_divisors).join(",")));
            s
        }
        Format::Json => {
            let v = json!({
                "module": r.module,
                "level": r.level,
                "basis": r.basis,
                "dimension": inv.dimension,
                "gram": matrix_rows(r.gram),
                "determinant": inv.determinant.to_string(),
                "modular_level": inv.modular_level.to_string(),
                "elementary_divisors": strings(&inv.elementary_divisors),
                "even": inv.is_even,
                "positive_definite": inv.is_positive_definite,
            });
            pretty(&v)
        }
        Format::Csv => matrix_rows(r.gram).iter().map(|row| row.join(",") + "\n").collect(),
    }
}

pub fn theta(module: &str, level: u32, coefficients: &[BigInt], format: Format) -> String {
    match format {
        Format::Text => strings(coefficients).join(",") + "\n",
        Format::Json => pretty(&json!({
            "module": module,
            "level": level,
            "max_coeff": coefficients.len() - 1,
            "convention": "q2",
            "coefficients": strings(coefficients),
        })),
        Format::Csv => {
            let mut s = String::from("index,coefficient\n");
            for (i, c) in coefficients.iter().enumerate() {
                s.push_str(&format!("{i},{c}\n"));
            }
            s
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialise") + "\n"
}
