//! Input files: ideal files, complex JSON and poset JSON.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::path::Path;

use hcw_core::gradedcomplex::ComplexJson;
use hcw_core::monomials::{MonomialIdeal, Multidegree};
use hcw_core::posets::PosetJson;

use crate::error::{CliError, CliResult};

/// A monomial ideal read from text, with its variable names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealFile {
    pub variables: Vec<String>,
    pub ideal: MonomialIdeal,
}

enum Row {
    Exponents(Vec<u32>),
    Product(Vec<(String, u32)>),
}

/// Orders `x2` before `x10` by comparing digit runs numerically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let ord = match (x, y) {
            ((true, p), (true, q)) => {
                let (p, q) = (p.trim_start_matches('0'), q.trim_start_matches('0'));
                p.len().cmp(&q.len()).then_with(|| p.cmp(q))
            }
            ((_, p), (_, q)) => p.cmp(q),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse(format!("line {line}: {}", message.into()))
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn parse_row(line: usize, text: &str) -> CliResult<Row> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.iter().all(|t| t.chars().all(|c| c.is_ascii_digit())) {
        let exps = tokens
            .iter()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|e| parse_error(line, format!("exponent {t}: {e}")))
            })
            .collect::<CliResult<_>>()?;
        return Ok(Row::Exponents(exps));
    }
    let compact: String = tokens.concat();
    let mut factors = Vec::new();
    for factor in compact.split('*') {
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<u32>()
                    .map_err(|_| parse_error(line, format!("bad exponent in {factor}")))?,
            ),
            None => (factor, 1),
        };
        if !valid_name(name) {
            return Err(parse_error(line, format!("bad variable name {name:?}")));
        }
        factors.push((name.to_string(), exp));
    }
    Ok(Row::Product(factors))
}

impl IdealFile {
    /// Parses an optional `vars:` header followed by one monomial per line,
    /// in product form (`x1*x2^3`) or as space-separated exponents. Text
    /// after `#` is ignored. Without a header, product-form variables are
    /// ordered naturally and exponent rows get names `x1, x2, ...`.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut header: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("vars:") {
                if header.is_some() || !rows.is_empty() {
                    return Err(parse_error(line, "the vars header must come first and only once"));
                }
                let names: Vec<String> = rest
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect();
                if names.is_empty() {
                    return Err(parse_error(line, "empty vars header"));
                }
                if let Some(bad) = names.iter().find(|n| !valid_name(n)) {
                    return Err(parse_error(line, format!("bad variable name {bad:?}")));
                }
                if names.iter().collect::<BTreeSet<_>>().len() != names.len() {
                    return Err(parse_error(line, "repeated variable in header"));
                }
                header = Some(names);
                continue;
            }
            rows.push((line, parse_row(line, content)?));
        }
        if rows.is_empty() {
            return Err(CliError::Parse("no generators".into()));
        }
        let has_exps = rows.iter().any(|(_, r)| matches!(r, Row::Exponents(_)));
        let has_products = rows.iter().any(|(_, r)| matches!(r, Row::Product(_)));
        let variables = match header {
            Some(h) => h,
            None if has_exps && has_products => {
                return Err(CliError::Parse(
                    "mixing exponent rows and products needs a vars header".into(),
                ))
            }
            None if has_exps => {
                let Row::Exponents(first) = &rows[0].1 else {
                    unreachable!()
                };
                (1..=first.len()).map(|i| format!("x{i}")).collect()
            }
            None => {
                let mut names: Vec<String> = rows
                    .iter()
                    .flat_map(|(_, r)| match r {
                        Row::Product(fs) => fs.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>(),
                        Row::Exponents(_) => Vec::new(),
                    })
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                names.sort_by(|a, b| natural_cmp(a, b));
                names
            }
        };
        let mut gens = Vec::with_capacity(rows.len());
        for (line, row) in rows {
            let exps = match row {
                Row::Exponents(e) => {
                    if e.len() != variables.len() {
                        return Err(parse_error(
                            line,
                            format!("{} exponents for {} variables", e.len(), variables.len()),
                        ));
                    }
                    e
                }
                Row::Product(fs) => {
                    let mut e = vec![0u32; variables.len()];
                    for (name, k) in fs {
                        let i = variables
                            .iter()
                            .position(|v| *v == name)
                            .ok_or_else(|| parse_error(line, format!("unknown variable {name}")))?;
                        e[i] += k;
                    }
                    e
                }
            };
            if e_is_zero(&exps) {
                return Err(parse_error(line, "the unit monomial generates the whole ring"));
            }
            gens.push(Multidegree(exps));
        }
        let ideal = MonomialIdeal::minimalize(gens).map_err(CliError::from_core)?;
        Ok(Self { variables, ideal })
    }
}

fn e_is_zero(e: &[u32]) -> bool {
    e.iter().all(|&x| x == 0)
}

/// Any input file accepted by the commands.
#[derive(Debug, Clone)]
pub enum Input {
    Ideal(IdealFile),
    Complex(Box<ComplexJson>),
    Poset(PosetJson),
}

impl Input {
    /// JSON when the first non-blank character is `{`, told apart by its
    /// keys; an ideal file otherwise.
    pub fn parse(text: &str) -> CliResult<Self> {
        if !text.trim_start().starts_with('{') {
            return IdealFile::parse(text).map(Input::Ideal);
        }
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))?;
        if value.get("matrices").is_some() {
            serde_json::from_value(value)
                .map(|c| Input::Complex(Box::new(c)))
                .map_err(|e| CliError::Parse(format!("invalid complex JSON: {e}")))
        } else if value.get("elements").is_some() {
            serde_json::from_value(value)
                .map(Input::Poset)
                .map_err(|e| CliError::Parse(format!("invalid poset JSON: {e}")))
        } else {
            Err(CliError::Parse("JSON is neither a complex nor a poset".into()))
        }
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order() {
        let mut v = vec!["x10", "x2", "y", "x1"];
        v.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(v, ["x1", "x2", "x10", "y"]);
    }

    #[test]
    fn product_form_with_header() {
        let f = IdealFile::parse("# c\nvars: x y z\nx*y^2 # trailing\n\nz\n").unwrap();
        assert_eq!(f.variables, ["x", "y", "z"]);
        assert_eq!(f.ideal.generators().len(), 2);
        assert!(f.ideal.contains(&Multidegree(vec![1, 2, 0])));
    }

    #[test]
    fn exponent_rows_without_header() {
        let f = IdealFile::parse("1 1 0\n0 1 1\n").unwrap();
        assert_eq!(f.variables, ["x1", "x2", "x3"]);
        assert_eq!(f.ideal.num_vars(), 3);
    }

    #[test]
    fn products_without_header_use_natural_order() {
        let f = IdealFile::parse("x10*x2\nx1").unwrap();
        assert_eq!(f.variables, ["x1", "x2", "x10"]);
    }

    #[test]
    fn rejects_bad_input() {
        for text in ["", "vars: x\ny", "1 0\n1", "x*y\n1 0", "x^a", "vars: x x\nx", "0 0"] {
            assert!(matches!(IdealFile::parse(text), Err(CliError::Parse(_))), "{text:?}");
        }
    }

    #[test]
    fn detects_json_kinds() {
        assert!(matches!(
            Input::parse("{\"elements\": [], \"covers\": []}"),
            Ok(Input::Poset(_))
        ));
        assert!(matches!(Input::parse("{\"foo\": 1}"), Err(CliError::Parse(_))));
        assert!(matches!(Input::parse("x*y"), Ok(Input::Ideal(_))));
    }
}
