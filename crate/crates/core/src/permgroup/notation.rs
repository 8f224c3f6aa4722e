//! Cycle notation such as `(145)(23)`.
//!
//! Grammar: a sequence of parenthesised cycles, whitespace ignored, fixed
//! points optional, `()` for the identity. Inside a cycle, points are
//! either comma-separated (`(1,10,3)`) or, when no comma is present, one
//! decimal digit each. Points are 1-based.

use std::fmt;
use std::str::FromStr;

use super::perm::{Permutation, MAX_DEGREE};
use crate::error::{Error, Result};

/// Parses `input` as a permutation of degree `n`.
pub fn parse_cycles(input: &str, n: usize) -> Result<Permutation> {
    let err = |reason: String| Error::Parse {
        input: input.to_string(),
        reason,
    };
    if n == 0 || n > MAX_DEGREE {
        return Err(err(format!("degree {n} outside 1..={MAX_DEGREE}")));
    }
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut images: Vec<usize> = (0..n).collect();
    let mut used = [false; MAX_DEGREE];
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| err(format!("expected '(' at {rest:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| err("unterminated cycle".to_string()))?;
        let inner = &body[..close];
        if inner.contains('(') {
            return Err(err("nested '('".to_string()));
        }
        rest = &body[close + 1..];

        let points: Vec<usize> = if inner.is_empty() {
            Vec::new()
        } else if inner.contains(',') {
            inner
                .split(',')
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| err(format!("bad point {tok:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            inner
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| err(format!("bad character {c:?}")))
                })
                .collect::<Result<_>>()?
        };

        for &pt in &points {
            if pt == 0 || pt > n {
                return Err(err(format!("point {pt} outside 1..={n}")));
            }
            if used[pt - 1] {
                return Err(err(format!("point {pt} appears in more than one place")));
            }
            used[pt - 1] = true;
        }
        for (k, &pt) in points.iter().enumerate() {
            let next = points[(k + 1) % points.len()];
            images[pt - 1] = next - 1;
        }
    }
    Permutation::from_images(&images)
}

/// Cycle notation omitting fixed points; `()` for the identity.
///
/// Digits are written without separators when every point is below 10.
pub fn format_cycles(p: &Permutation) -> String {
    let compact = p.degree() < 10;
    let mut out = String::new();
    for cycle in p.cycles() {
        if cycle.len() < 2 {
            continue;
        }
        let pts: Vec<String> = cycle.iter().map(|i| (i + 1).to_string()).collect();
        out.push('(');
        out.push_str(&pts.join(if compact { "" } else { "," }));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_cycles(self))
    }
}

/// A cycle string with its degree, for `FromStr` contexts such as CLI args:
/// `"5:(145)(23)"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeCycles(pub Permutation);

impl FromStr for DegreeCycles {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, body) = s.split_once(':').ok_or_else(|| Error::Parse {
            input: s.to_string(),
            reason: "expected <degree>:<cycles>".into(),
        })?;
        let n: usize = n.trim().parse().map_err(|_| Error::Parse {
            input: s.to_string(),
            reason: "bad degree".into(),
        })?;
        parse_cycles(body, n).map(DegreeCycles)
    }
}
