//! Text form of Cohen elements.
//!
//! One line per nonzero coordinate:
//!
//! ```text
//! slot <j> : <c1>*<sym1> + <c2>*<sym2> ...
//! ```
//!
//! with symbols `g<k>`, `[g<a>,g<b>]` and `[[g<a>,g<b>],g<c>]`. Coefficients
//! may be negative or omitted (`g1`, `-g1`). Repeated slots are summed. The
//! identity is written `identity`; an empty input also parses as the identity.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::cohen::{CohenElement, CoordinateAlgebra};
use crate::error::{Error, Result};
use crate::whitehead::{BracketSymbol, FormalClass, TargetModel};

pub(crate) fn write_element<A: CoordinateAlgebra>(
    f: &mut fmt::Formatter<'_>,
    a: &CohenElement<A>,
) -> fmt::Result {
    let support = a.support();
    if support.is_empty() {
        return f.write_str("identity");
    }
    for (i, j) in support.into_iter().enumerate() {
        if i > 0 {
            f.write_str("\n")?;
        }
        write!(f, "slot {j} : {}", a.coord(j))?;
    }
    Ok(())
}

fn parse_generator(s: &str) -> Option<usize> {
    s.strip_prefix('g')?.parse().ok().filter(|&k| k >= 1)
}

/// Parses `g<k>`, `[g<a>,g<b>]` or `[[g<a>,g<b>],g<c>]`.
pub fn parse_symbol(s: &str) -> Option<BracketSymbol> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(k) = parse_generator(&s) {
        return Some(BracketSymbol::Gen(k));
    }
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    if let Some(rest) = inner.strip_prefix('[') {
        let (pair, c) = rest.split_once("],")?;
        let (a, b) = pair.split_once(',')?;
        return Some(BracketSymbol::Triple(
            parse_generator(a)?,
            parse_generator(b)?,
            parse_generator(c)?,
        ));
    }
    let (a, b) = inner.split_once(',')?;
    Some(BracketSymbol::Pair(parse_generator(a)?, parse_generator(b)?))
}

fn split_terms(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            '+' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn parse_term(term: &str, line: usize) -> Result<(BracketSymbol, BigInt)> {
    let bad = || Error::parse(line, format!("malformed term '{term}'"));
    let (coeff, sym) = match term.split_once('*') {
        Some((c, s)) => (c.trim().parse::<BigInt>().map_err(|_| bad())?, s.trim()),
        None => match term.strip_prefix('-') {
            Some(s) => (BigInt::from(-1), s.trim()),
            None => (BigInt::from(1), term),
        },
    };
    let sym = parse_symbol(sym).ok_or_else(bad)?;
    Ok((sym, coeff))
}

/// Parses an element of the formal Cohen group over `model`.
pub fn parse_formal_element(model: &Arc<TargetModel>, text: &str) -> Result<CohenElement<TargetModel>> {
    let n = model.truncation();
    let mut coords: Vec<FormalClass> = (1..=n).map(FormalClass::zero).collect();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line == "identity" {
            continue;
        }
        let rest = line
            .strip_prefix("slot")
            .ok_or_else(|| Error::parse(line_no, format!("expected 'slot <j> : ...', got '{line}'")))?;
        let (slot, body) = rest
            .split_once(':')
            .ok_or_else(|| Error::parse(line_no, "missing ':' after the slot number"))?;
        let slot: usize = slot
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad slot '{}'", slot.trim())))?;
        if slot < 1 || slot > n {
            return Err(Error::parse(line_no, format!("slot {slot} outside 1..={n}")));
        }
        let terms = split_terms(body)
            .into_iter()
            .map(|t| parse_term(t, line_no))
            .collect::<Result<Vec<_>>>()?;
        let class = model
            .class(slot, terms)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
        coords[slot - 1] = model.add(&coords[slot - 1], &class)?;
    }
    CohenElement::new(Arc::clone(model), coords)
}
