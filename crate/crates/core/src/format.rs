//! The line-oriented IFS description format.
//!
//! ```text
//! # Lévy C curve
//! map 0 0 0.70710678118654752 -1/8
//! map 1 0 0.70710678118654752 1/8
//! set level 14
//! ```
//!
//! `map <p_re> <p_im> <lambda> <num>/<den>` adds the contraction with fixed
//! point `p`, factor `lambda` and rotation angle `2π·num/den`. `set` accepts
//! the keys `tol`, `cap`, `level` and `seed` (a 1-based map index). Text after
//! `#` is ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{is_finite, ComplexValue, RationalAngle};
use crate::ifs::{Address, Contraction, IfsSystem};

/// Optional settings carried by a description file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub tol: Option<f64>,
    pub cap: Option<usize>,
    pub level: Option<u32>,
    /// 0-based map index.
    pub seed: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IfsFile {
    pub system: IfsSystem,
    pub settings: Settings,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn invalid(line: usize, msg: impl Into<String>) -> Error {
    Error::Validation {
        line,
        msg: msg.into(),
    }
}

fn real(token: &str, what: &str, line: usize) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| parse_err(line, format!("{what} {token:?} is not a number")))?;
    if !v.is_finite() {
        return Err(invalid(line, format!("{what} must be finite")));
    }
    Ok(v)
}

fn angle(token: &str, line: usize) -> Result<RationalAngle> {
    let (num, den) = token
        .split_once('/')
        .ok_or_else(|| parse_err(line, format!("angle {token:?} must be written num/den")))?;
    let num: i64 = num
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("angle numerator {num:?} is not an integer")))?;
    let den: i64 = den
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("angle denominator {den:?} is not an integer")))?;
    if den <= 0 {
        return Err(invalid(
            line,
            format!("angle denominator must be positive, got {den}"),
        ));
    }
    RationalAngle::new(num, den).map_err(|e| invalid(line, e.to_string()))
}

fn parse_map(args: &[&str], line: usize) -> Result<Contraction> {
    let [re, im, lambda, theta] = args else {
        return Err(parse_err(
            line,
            format!(
                "map takes 4 values (p_re p_im lambda num/den), got {}",
                args.len()
            ),
        ));
    };
    let p = ComplexValue::new(real(re, "p_re", line)?, real(im, "p_im", line)?);
    let lambda = real(lambda, "lambda", line)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(invalid(
            line,
            format!("lambda must lie in (0, 1), got {lambda}"),
        ));
    }
    Contraction::new(p, lambda, angle(theta, line)?).map_err(|e| invalid(line, e.to_string()))
}

fn parse_set(args: &[&str], line: usize, settings: &mut Settings) -> Result<()> {
    let [key, value] = args else {
        return Err(parse_err(line, "set takes a key and a value"));
    };
    match *key {
        "tol" => {
            let v = real(value, "tol", line)?;
            if v < 0.0 {
                return Err(invalid(line, "tol must be nonnegative"));
            }
            settings.tol = Some(v);
        }
        "cap" => {
            let v: usize = value
                .parse()
                .map_err(|_| parse_err(line, format!("cap {value:?} is not a count")))?;
            if v == 0 {
                return Err(invalid(line, "cap must be positive"));
            }
            settings.cap = Some(v);
        }
        "level" => {
            settings.level = Some(
                value
                    .parse()
                    .map_err(|_| parse_err(line, format!("level {value:?} is not a count")))?,
            );
        }
        "seed" => {
            let v: usize = value
                .parse()
                .map_err(|_| parse_err(line, format!("seed {value:?} is not a map index")))?;
            if v == 0 {
                return Err(invalid(line, "seed is a 1-based map index"));
            }
            settings.seed = Some(v - 1);
        }
        other => return Err(parse_err(line, format!("unknown setting {other:?}"))),
    }
    Ok(())
}

pub fn parse_ifs_file(text: &str) -> Result<IfsFile> {
    let mut maps = Vec::new();
    let mut settings = Settings::default();
    let mut seed_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&head, args)) = tokens.split_first() else {
            continue;
        };
        match head {
            "map" => maps.push(parse_map(args, line)?),
            "set" => {
                parse_set(args, line, &mut settings)?;
                if args[0] == "seed" {
                    seed_line = line;
                }
            }
            other => return Err(parse_err(line, format!("unknown directive {other:?}"))),
        }
    }
    if maps.is_empty() {
        return Err(invalid(0, "no map lines"));
    }
    if let Some(seed) = settings.seed {
        if seed >= maps.len() {
            return Err(invalid(
                seed_line,
                format!(
                    "seed {} exceeds the number of maps {}",
                    seed + 1,
                    maps.len()
                ),
            ));
        }
    }
    let system = IfsSystem::new(maps).map_err(|e| invalid(0, e.to_string()))?;
    Ok(IfsFile { system, settings })
}

/// Writes a description that parses back to the same file.
pub fn emit(file: &IfsFile) -> String {
    let mut out = String::new();
    for m in file.system.maps() {
        let p = m.fixed_point();
        let a = m.angle();
        let _ = writeln!(
            out,
            "map {} {} {} {}/{}",
            p.re,
            p.im,
            m.lambda(),
            a.num(),
            a.den()
        );
    }
    let s = &file.settings;
    if let Some(v) = s.tol {
        let _ = writeln!(out, "set tol {v}");
    }
    if let Some(v) = s.cap {
        let _ = writeln!(out, "set cap {v}");
    }
    if let Some(v) = s.level {
        let _ = writeln!(out, "set level {v}");
    }
    if let Some(v) = s.seed {
        let _ = writeln!(out, "set seed {}", v + 1);
    }
    out
}

/// `re,im`.
pub fn parse_target(text: &str) -> Result<ComplexValue> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| Error::Domain(format!("target {text:?} must be written re,im")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Domain(format!("target component {s:?} is not a number")))
    };
    let z = ComplexValue::new(parse(re)?, parse(im)?);
    if !is_finite(z) {
        return Err(Error::Domain("target must be finite".into()));
    }
    Ok(z)
}

/// An index string over `1..=n`: digits (`"2111"`) or comma-separated
/// numbers (`"2,1,1,1"`). Systems with more than nine maps always use the
/// comma form. The empty string is the identity.
pub fn parse_address(text: &str, n: usize) -> Result<Address> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Address::identity());
    }
    let indices: Vec<usize> = if text.contains(',') || n > 9 {
        text.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Domain(format!("address entry {t:?} is not an index")))
            })
            .collect::<Result<_>>()?
    } else {
        text.chars()
            .map(|ch| {
                ch.to_digit(10).map(|d| d as usize).ok_or_else(|| {
                    Error::Domain(format!("address character {ch:?} is not a digit"))
                })
            })
            .collect::<Result<_>>()?
    };
    if let Some(bad) = indices.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::Domain(format!(
            "address index {bad} out of range 1..={n}"
        )));
    }
    Address::from_one_based(&indices)
}
