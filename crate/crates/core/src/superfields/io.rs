//! Plain-text structure-constant format.
//!
//! ```text
//! superbider-table 1
//! family W
//! n 2
//! dim 8
//! degree-modulus none
//! cartan 2 5
//! basis
//! 0 odd -1 -1 0
//! ...
//! constants
//! 0 2 0 1 1
//! ...
//! end
//! ```
//!
//! Basis lines are `index parity degree weight...`; constant lines are
//! `a b k numerator denominator`, one per nonzero `c_ab^k`.

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::table::{AlgebraTable, TableMeta, Weight};
use crate::exterior::Parity;
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::Error;

const MAGIC: &str = "superbider-table";
const VERSION: u32 = 1;

pub fn export_table(t: &AlgebraTable) -> String {
    let mut s = String::new();
    let dim = t.dim();
    writeln!(s, "{MAGIC} {VERSION}").unwrap();
    writeln!(s, "family {}", t.family()).unwrap();
    writeln!(s, "n {}", t.n()).unwrap();
    writeln!(s, "dim {dim}").unwrap();
    match t.degree_modulus() {
        Some(m) => writeln!(s, "degree-modulus {m}").unwrap(),
        None => writeln!(s, "degree-modulus none").unwrap(),
    }
    write!(s, "cartan").unwrap();
    for h in t.cartan() {
        write!(s, " {h}").unwrap();
    }
    s.push('\n');
    s.push_str("basis\n");
    for k in 0..dim {
        write!(s, "{k} {} {}", t.parity(k), t.degree(k)).unwrap();
        for x in &t.weight(k).0 {
            write!(s, " {}", format_rational(x)).unwrap();
        }
        s.push('\n');
    }
    s.push_str("constants\n");
    for a in 0..dim {
        for b in 0..dim {
            for (k, v) in t.bracket_basis(a, b) {
                writeln!(s, "{a} {b} {k} {} {}", v.numer(), v.denom()).unwrap();
            }
        }
    }
    s.push_str("end\n");
    s
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str, Error> {
        let (i, l) = self.inner.next().ok_or(Error::Format { line: self.line + 1, message: "unexpected end of input".into() })?;
        self.line = i + 1;
        Ok(l.trim_end())
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Format { line: self.line, message: message.into() }
    }

    fn keyed(&mut self, key: &str) -> Result<Vec<&'a str>, Error> {
        let l = self.next()?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(key) {
            return Err(self.err(format!("expected `{key}`")));
        }
        Ok(parts.collect())
    }

    fn single<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, Error> {
        let v = self.keyed(key)?;
        match v.as_slice() {
            [x] => x.parse().map_err(|_| self.err(format!("bad value for `{key}`"))),
            _ => Err(self.err(format!("`{key}` takes one value"))),
        }
    }
}

/// Parses and validates a table written by [`export_table`].
pub fn import_table(text: &str) -> Result<AlgebraTable, Error> {
    let t = import_table_unchecked(text)?;
    t.validate()?;
    Ok(t)
}

/// Parses a table without validating the algebraic invariants.
pub fn import_table_unchecked(text: &str) -> Result<AlgebraTable, Error> {
    let mut lines = Lines { inner: text.lines().enumerate(), line: 0 };
    let version: u32 = lines.single(MAGIC)?;
    if version != VERSION {
        return Err(lines.err(format!("unsupported version {version}")));
    }
    let family: String = lines.single("family")?;
    let n: usize = lines.single("n")?;
    let dim: usize = lines.single("dim")?;
    let modulus: String = lines.single("degree-modulus")?;
    let degree_modulus = match modulus.as_str() {
        "none" => None,
        m => Some(m.parse().map_err(|_| lines.err("bad degree modulus"))?),
    };
    let cartan = lines
        .keyed("cartan")?
        .into_iter()
        .map(|h| h.parse::<usize>().map_err(|_| lines.err("bad cartan index")))
        .collect::<Result<Vec<_>, _>>()?;
    if !lines.keyed("basis")?.is_empty() {
        return Err(lines.err("`basis` takes no values"));
    }
    let mut parity = Vec::with_capacity(dim);
    let mut degree = Vec::with_capacity(dim);
    let mut weight = Vec::with_capacity(dim);
    for k in 0..dim {
        let l = lines.next()?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 3 + cartan.len() || parts[0].parse::<usize>().ok() != Some(k) {
            return Err(lines.err(format!("malformed basis line for element {k}")));
        }
        parity.push(match parts[1] {
            "even" => Parity::Even,
            "odd" => Parity::Odd,
            _ => return Err(lines.err("parity must be `even` or `odd`")),
        });
        degree.push(parts[2].parse().map_err(|_| lines.err("bad degree"))?);
        let w = parts[3..].iter().map(|x| parse_rational(x).ok_or_else(|| lines.err("bad weight"))).collect::<Result<Vec<_>, _>>()?;
        weight.push(Weight(w));
    }
    if !lines.keyed("constants")?.is_empty() {
        return Err(lines.err("`constants` takes no values"));
    }
    let mut constants: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); dim * dim];
    loop {
        let l = lines.next()?;
        if l == "end" {
            break;
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [a, b, k, num, den] = parts.as_slice() else {
            return Err(lines.err("constant lines are `a b k numerator denominator`"));
        };
        let idx = |s: &str| s.parse::<usize>().ok().filter(|&i| i < dim);
        let (Some(a), Some(b), Some(k)) = (idx(a), idx(b), idx(k)) else {
            return Err(lines.err("basis index out of range"));
        };
        let num: BigInt = num.parse().map_err(|_| lines.err("bad numerator"))?;
        let den: BigInt = den.parse().map_err(|_| lines.err("bad denominator"))?;
        if den <= BigInt::from(0) {
            return Err(lines.err("denominator must be positive"));
        }
        let v = Rational::new(num, den);
        let row = &mut constants[a * dim + b];
        if row.last().is_some_and(|(j, _)| *j >= k) {
            return Err(lines.err("constants must be sorted and unique"));
        }
        if v == Rational::from_integer(0.into()) {
            return Err(lines.err("zero constants are not stored"));
        }
        row.push((k, v));
    }
    let meta = TableMeta { family, n, degree_modulus };
    Ok(AlgebraTable::from_parts_unchecked(meta, parity, degree, weight, cartan, constants))
}
