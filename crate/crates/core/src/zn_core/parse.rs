//! Parser for the multiset literals `N:{a*m, b, ...}` and their JSON form.

use super::context::GroupContext;
use super::multiset::MaskMultiset;
use crate::error::{Error, Result};

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(err(self.pos, format!("expected '{}', found '{}'", c as char, got as char))),
            None => Err(err(self.pos, format!("expected '{}', found end of input", c as char))),
        }
    }

    fn number(&mut self) -> Result<(usize, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.peek() {
                Some(c) => err(start, format!("expected a number, found '{}'", c as char)),
                None => err(start, "expected a number, found end of input"),
            });
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let value = text.parse().map_err(|_| err(start, format!("number {text} is too large")))?;
        Ok((value, start))
    }
}

pub(crate) fn parse_multiset(input: &str) -> Result<MaskMultiset> {
    if input.trim_start().starts_with('{') {
        return parse_json(input);
    }
    let mut cur = Cursor { src: input.as_bytes(), pos: 0 };
    let (n, n_pos) = cur.number()?;
    if n == 0 {
        return Err(err(n_pos, "group order must be positive"));
    }
    let ctx = GroupContext::new(n)?;
    cur.expect(b':')?;
    cur.expect(b'{')?;
    let mut coeffs = vec![0u32; n];
    cur.skip_ws();
    if cur.peek() == Some(b'}') {
        cur.pos += 1;
    } else {
        loop {
            let (a, a_pos) = cur.number()?;
            if a >= n {
                return Err(err(a_pos, format!("element {a} is outside Z_{n}")));
            }
            cur.skip_ws();
            let mut mult = 1;
            if cur.peek() == Some(b'*') {
                cur.pos += 1;
                let (m, m_pos) = cur.number()?;
                if m == 0 {
                    return Err(err(m_pos, "multiplicity must be at least 1"));
                }
                mult = u32::try_from(m).map_err(|_| err(m_pos, "multiplicity is too large"))?;
            }
            coeffs[a] = coeffs[a]
                .checked_add(mult)
                .ok_or_else(|| err(a_pos, "multiplicity is too large"))?;
            cur.skip_ws();
            match cur.peek() {
                Some(b',') => cur.pos += 1,
                Some(b'}') => {
                    cur.pos += 1;
                    break;
                }
                Some(c) => return Err(err(cur.pos, format!("expected ',' or '}}', found '{}'", c as char))),
                None => return Err(err(cur.pos, "unterminated set literal")),
            }
        }
    }
    cur.skip_ws();
    if cur.pos != input.len() {
        return Err(err(cur.pos, "trailing characters after set literal"));
    }
    MaskMultiset::new(&ctx, coeffs)
}

fn parse_json(input: &str) -> Result<MaskMultiset> {
    serde_json::from_str(input).map_err(|e| {
        // serde_json reports 1-based line/column; convert to a byte offset.
        let offset: usize = input
            .split_inclusive('\n')
            .take(e.line().saturating_sub(1))
            .map(str::len)
            .sum();
        err(offset + e.column().saturating_sub(1), e.to_string())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn position(input: &str) -> usize {
        match parse_multiset(input) {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("expected parse error for {input:?}, got {other:?}"),
        }
    }

    #[test]
    fn accepts_whitespace_and_multiplicities() {
        let a = parse_multiset(" 6 : { 0 * 2 , 3 } ").unwrap();
        assert_eq!(a.coeffs(), &[2, 0, 0, 1, 0, 0]);
        assert!(parse_multiset("5:{}").unwrap().is_empty());
        assert_eq!(parse_multiset("4:{1,1}").unwrap().coeffs(), &[0, 2, 0, 0]);
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(position("6:{0,6}"), 5);
        assert_eq!(position("6:{0,x}"), 5);
        assert_eq!(position("6{0}"), 1);
        assert_eq!(position("6:{0*0}"), 5);
        assert_eq!(position("6:{0,1"), 6);
        assert_eq!(position("0:{}"), 0);
        assert_eq!(position("6:{0} junk"), 6);
        assert_eq!(position(""), 0);
    }

    #[test]
    fn json_form() {
        let a = parse_multiset(r#"{"n":6,"coeffs":[1,0,0,1,0,0]}"#).unwrap();
        assert_eq!(a.support(), vec![0, 3]);
        assert!(parse_multiset(r#"{"n":6,"coeffs":[1,0]}"#).is_err());
        assert!(matches!(parse_multiset(r#"{"n":6,"#), Err(Error::Parse { .. })));
    }
}
