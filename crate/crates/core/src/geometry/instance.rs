//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! [ring]
//! m = 1
//! n = 1
//! field = rational_t
//! ranking = orderly
//! [lambda]
//! d1 x1
//! [open]
//! [W]
//! d1 x1
//! d1 y1
//! y1 - 1
//! [bounds]
//! order = 1
//! degree = 1
//! height = 1
//! ```
//!
//! Key/value sections also accept several `key=value` pairs on one line.
//! Further sections: `[S]` raw generators for the naive prolongation demo,
//! `[prime]` with `degree`, `height`, `candidates`, `assert`.

use std::collections::BTreeMap;

use crate::algebra::PrimalityConfig;
use crate::diffpoly::{DiffPoly, FieldMode, Ring};
use crate::error::{Error, Result};
use crate::ranking::Ranking;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Truncation order for algebraic surrogates of differential ideals.
    pub order: u32,
    /// Largest t-degree of a model coordinate.
    pub degree: u32,
    /// Largest absolute value of a model coefficient.
    pub height: u32,
    /// Sample count for sampling checks.
    pub samples: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            order: 1,
            degree: 1,
            height: 1,
            samples: 200,
        }
    }
}

#[derive(Clone, Debug)]
pub struct InstanceFile {
    pub ring: Ring,
    pub ranking: Ranking,
    pub lambda: Vec<DiffPoly>,
    pub open: Vec<DiffPoly>,
    pub w: Vec<DiffPoly>,
    pub s: Vec<DiffPoly>,
    pub bounds: Bounds,
    pub prime: PrimalityConfig,
}

fn fmt_err(line: usize, msg: impl Into<String>) -> Error {
    Error::InstanceFormat {
        line,
        msg: msg.into(),
    }
}

fn parse_kv(line: usize, text: &str, into: &mut BTreeMap<String, (usize, String)>) -> Result<()> {
    let mut rest = text.trim();
    while !rest.is_empty() {
        let eq = rest
            .find('=')
            .ok_or_else(|| fmt_err(line, format!("expected key = value, got `{rest}`")))?;
        let key = rest[..eq].trim().to_string();
        let after = rest[eq + 1..].trim_start();
        let end = after.find(char::is_whitespace).unwrap_or(after.len());
        let value = after[..end].to_string();
        if key.is_empty() || value.is_empty() {
            return Err(fmt_err(line, format!("expected key = value, got `{text}`")));
        }
        into.insert(key, (line, value));
        rest = after[end..].trim_start();
    }
    Ok(())
}

fn take_num<T: std::str::FromStr>(kv: &BTreeMap<String, (usize, String)>, key: &str) -> Result<Option<T>> {
    match kv.get(key) {
        None => Ok(None),
        Some((line, v)) => v
            .parse()
            .map(Some)
            .map_err(|_| fmt_err(*line, format!("`{key}` must be a number, got `{v}`"))),
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut section = String::new();
        let mut ring_kv = BTreeMap::new();
        let mut bounds_kv = BTreeMap::new();
        let mut prime_kv = BTreeMap::new();
        let mut polys: BTreeMap<&'static str, Vec<(usize, String)>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            match section.as_str() {
                "ring" => parse_kv(line, body, &mut ring_kv)?,
                "bounds" => parse_kv(line, body, &mut bounds_kv)?,
                "prime" => parse_kv(line, body, &mut prime_kv)?,
                "lambda" | "open" | "W" | "S" => {
                    let key = match section.as_str() {
                        "lambda" => "lambda",
                        "open" => "open",
                        "W" => "W",
                        _ => "S",
                    };
                    polys.entry(key).or_default().push((line, body.to_string()));
                }
                "" => return Err(fmt_err(line, "content before the first section header")),
                other => return Err(fmt_err(line, format!("unknown section [{other}]"))),
            }
        }
        let m: usize = take_num(&ring_kv, "m")?.ok_or_else(|| fmt_err(0, "[ring] needs m"))?;
        let n: usize = take_num(&ring_kv, "n")?.ok_or_else(|| fmt_err(0, "[ring] needs n"))?;
        let field = match ring_kv.get("field") {
            None => FieldMode::Constants,
            Some((line, v)) => v.parse().map_err(|e: Error| fmt_err(*line, e.to_string()))?,
        };
        let ranking = match ring_kv.get("ranking") {
            None => Ranking::Orderly,
            Some((line, v)) => v.parse().map_err(|e: Error| fmt_err(*line, e.to_string()))?,
        };
        let ring = Ring::new(m, n, field)?;
        let parse_section = |key: &str, x_only: bool| -> Result<Vec<DiffPoly>> {
            polys
                .get(key)
                .map(|v| v.as_slice())
                .unwrap_or(&[])
                .iter()
                .map(|(line, s)| {
                    let p = ring.parse(s).map_err(|e| fmt_err(*line, e.to_string()))?;
                    if x_only {
                        ring.check_x_only(&p).map_err(|e| fmt_err(*line, e.to_string()))?;
                    }
                    Ok(p)
                })
                .collect()
        };
        let d = Bounds::default();
        let bounds = Bounds {
            order: take_num(&bounds_kv, "order")?.unwrap_or(d.order),
            degree: take_num(&bounds_kv, "degree")?.unwrap_or(d.degree),
            height: take_num(&bounds_kv, "height")?.unwrap_or(d.height),
            samples: take_num(&bounds_kv, "samples")?.unwrap_or(d.samples),
        };
        let pd = PrimalityConfig::default();
        let prime = PrimalityConfig {
            degree_bound: take_num(&prime_kv, "degree")?.unwrap_or(pd.degree_bound),
            height_bound: take_num(&prime_kv, "height")?.unwrap_or(pd.height_bound),
            max_candidates: take_num(&prime_kv, "candidates")?.unwrap_or(pd.max_candidates),
            assert_prime: match prime_kv.get("assert") {
                None => false,
                Some((line, v)) => v
                    .parse()
                    .map_err(|_| fmt_err(*line, format!("`assert` must be true or false, got `{v}`")))?,
            },
        };
        Ok(InstanceFile {
            lambda: parse_section("lambda", true)?,
            open: parse_section("open", true)?,
            w: parse_section("W", false)?,
            s: parse_section("S", true)?,
            ring,
            ranking,
            bounds,
            prime,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let f = InstanceFile::parse(
            "# basic\n[ring]\nm=1 n=1 field=rational_t\n[lambda]\nd1 x1\n[W]\nd1 x1\nd1 y1\ny1 - 1 # tail\n[bounds]\ndegree = 1\nheight=1\n",
        )
        .unwrap();
        assert_eq!(f.ring.field, FieldMode::RationalT);
        assert_eq!(f.lambda.len(), 1);
        assert_eq!(f.w.len(), 3);
        assert!(f.open.is_empty());
        assert_eq!(f.bounds.order, 1);
    }

    #[test]
    fn reports_line_numbers() {
        let e = InstanceFile::parse("[ring]\nm=1 n=1\n[lambda]\nx1 +\n").unwrap_err();
        assert!(matches!(e, Error::InstanceFormat { line: 4, .. }));
        let e = InstanceFile::parse("[ring]\nm=1 n=1\n[lambda]\ny1\n").unwrap_err();
        assert!(matches!(e, Error::InstanceFormat { line: 4, .. }));
        let e = InstanceFile::parse("x1\n").unwrap_err();
        assert!(matches!(e, Error::InstanceFormat { line: 1, .. }));
        let e = InstanceFile::parse("[ring]\nm=x n=1\n").unwrap_err();
        assert!(matches!(e, Error::InstanceFormat { line: 2, .. }));
    }
}
