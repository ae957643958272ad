//! Parser for lattice specifications such as `2E8+2U+3I` or `I(-1)`.
//!
//! ```text
//! spec := term ('+' term)*
//! term := [count] NAME ['(' int ['/' int] ')']
//! NAME := A<n> | D<n> | E<n> | U | I | G2root
//! ```
//!
//! Whitespace between tokens is ignored. Both `-` and `−` are accepted as minus signs.

use num_traits::Zero;

use super::{make_standard, GramLattice};
use crate::error::{Error, Result};
use crate::linalg::{int, Rat};

/// Largest total rank a spec may describe.
pub const MAX_RANK: usize = 64;

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .parse()
            .ok()
    }

    fn signed(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = matches!(self.chars.get(self.pos), Some('-') | Some('−'));
        if neg {
            self.pos += 1;
        }
        self.skip_ws();
        match self.number() {
            Some(v) if v <= i64::MAX as u64 => Ok(if neg { -(v as i64) } else { v as i64 }),
            Some(_) => self.err("integer too large"),
            None => self.err("expected integer"),
        }
    }
}

/// Parses a lattice spec into the corresponding orthogonal sum.
pub fn parse_spec(text: &str) -> Result<GramLattice> {
    let mut c = Cursor {
        chars: text.chars().collect(),
        pos: 0,
    };
    if c.peek().is_none() {
        return c.err("empty lattice spec");
    }
    let mut parts = Vec::new();
    let mut total = 0usize;
    loop {
        c.skip_ws();
        let count = c.number().unwrap_or(1) as usize;
        if count == 0 {
            return c.err("zero multiplicity");
        }
        c.skip_ws();
        let name_pos = c.pos;
        let Some(head) = c.chars.get(c.pos).copied() else {
            return c.err("expected lattice name");
        };
        let label = match head {
            'A' | 'D' | 'E' => {
                c.pos += 1;
                match c.number() {
                    Some(n) if n as usize <= MAX_RANK => format!("{head}{n}"),
                    Some(_) => return c.err("rank overflow"),
                    None => return c.err(format!("{head} needs a rank")),
                }
            }
            'U' | 'I' => {
                c.pos += 1;
                head.to_string()
            }
            'G' if c.chars[c.pos..]
                .iter()
                .collect::<String>()
                .starts_with("G2root") =>
            {
                c.pos += 6;
                "G2root".to_string()
            }
            _ => return c.err(format!("unexpected character `{head}`")),
        };
        let mut lat = make_standard(&label, None).map_err(|e| match e {
            Error::UnknownLabel(m) | Error::InvalidParameter(m) => Error::Parse {
                pos: name_pos,
                msg: m,
            },
            other => other,
        })?;
        if c.peek() == Some('(') {
            c.pos += 1;
            let num = c.signed()?;
            let den = if c.peek() == Some('/') {
                c.pos += 1;
                c.signed()?
            } else {
                1
            };
            if den == 0 {
                return c.err("zero denominator");
            }
            if c.peek() != Some(')') {
                return c.err("expected `)`");
            }
            c.pos += 1;
            let factor = Rat::new(int(num), int(den));
            if factor.is_zero() {
                return c.err("rescale by zero");
            }
            lat = lat.rescale(&factor)?;
        }
        total = total.saturating_add(count.saturating_mul(lat.rank()));
        if total > MAX_RANK {
            return c.err("rank overflow");
        }
        for _ in 0..count {
            parts.push(lat.clone());
        }
        match c.peek() {
            None => break,
            Some('+') => c.pos += 1,
            Some(ch) => return c.err(format!("unexpected character `{ch}`")),
        }
    }
    Ok(GramLattice::direct_sum(&parts).with_name(text.trim().to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn ranks() {
        assert_eq!(parse_spec("2E8+2U+3I").unwrap().rank(), 23);
        assert_eq!(parse_spec("U").unwrap().rank(), 2);
        assert_eq!(parse_spec("2E8+A2+U").unwrap().rank(), 20);
        assert_eq!(parse_spec(" 2E8 + 2U + A2 ").unwrap().rank(), 22);
        assert_eq!(parse_spec("G2root").unwrap().rank(), 2);
    }

    #[test]
    fn rescaling() {
        let l = parse_spec("I(−1)").unwrap();
        assert_eq!(l.gram()[0][0], rat(-1, 1));
        let l = parse_spec("A2(1/3)").unwrap();
        assert_eq!(l.gram()[0][0], rat(2, 3));
        assert_eq!(parse_spec("I(-1)").unwrap().signature(), (0, 1, 0));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_spec("2E8+X3") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match parse_spec("E9") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_spec(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_spec("E8+"), Err(Error::Parse { .. })));
        assert!(matches!(parse_spec("9E8"), Err(Error::Parse { .. })));
        assert!(matches!(parse_spec("A2(0)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_spec("A2(3"), Err(Error::Parse { .. })));
    }
}
