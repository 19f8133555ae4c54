//! Line-based identity syntax.
//!
//! One identity per line, `lhs = rhs` (`≈` is accepted as well). Variables
//! are single lowercase letters; a symbol is an identifier followed by a
//! parenthesised argument list. Blank lines and lines starting with `#` are
//! skipped. Whitespace is insignificant.

use super::{Identity, IdentitySet, Term};
use crate::{Error, Result};

pub(super) fn parse_identities(text: &str) -> Result<IdentitySet> {
    let mut symbols: Vec<(String, usize)> = Vec::new();
    let mut identities = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line = line.replace('≈', "=");
        let mut parts = line.split('=');
        let (Some(lhs), Some(rhs), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::parse(line_no, "expected exactly one `=`"));
        };
        let lhs = parse_term(lhs, line_no)?;
        let rhs = parse_term(rhs, line_no)?;
        let mut used = Vec::new();
        lhs.symbols(&mut used);
        rhs.symbols(&mut used);
        for (name, arity) in used {
            match symbols.iter().find(|(n, _)| n == name) {
                Some((_, a)) if *a != arity => {
                    return Err(Error::parse(
                        line_no,
                        format!("symbol {name} used with arity {arity}, earlier with {a}"),
                    ))
                }
                Some(_) => {}
                None => symbols.push((name.to_string(), arity)),
            }
        }
        identities.push(Identity::new(lhs, rhs));
    }
    IdentitySet::new(symbols, identities)
}

fn parse_term(text: &str, line: usize) -> Result<Term> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line,
    };
    let term = parser.term()?;
    if parser.pos != parser.chars.len() {
        return Err(parser.error("trailing characters"));
    }
    Ok(term)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn error(&self, what: &str) -> Error {
        let rest: String = self.chars[self.pos.min(self.chars.len())..].iter().collect();
        Error::parse(self.line, format!("{what} at `{rest}`"))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn term(&mut self) -> Result<Term> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        if name.is_empty() {
            return Err(self.error("expected a term"));
        }
        if self.peek() != Some('(') {
            let mut it = name.chars();
            return match (it.next(), it.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => Ok(Term::Var(u32::from(c as u8 - b'a'))),
                _ => Err(Error::parse(
                    self.line,
                    format!("`{name}` is neither a single-letter variable nor an application"),
                )),
            };
        }
        if !name.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            return Err(Error::parse(self.line, format!("bad symbol name `{name}`")));
        }
        self.pos += 1;
        let mut args = Vec::new();
        loop {
            args.push(self.term()?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error("expected `,` or `)`")),
            }
        }
        Ok(Term::App { symbol: name, args })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_maltsev() {
        let s = parse_identities("# Maltsev\nm(x,x,y) = y\n\n m(y, x, x)=y\n").unwrap();
        assert_eq!(s, IdentitySet::maltsev());
        assert_eq!(IdentitySet::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn nested_terms() {
        let s = parse_identities("m(u,x,m(v,y,w)) ≈ m(m(u,x,v),y,w)").unwrap();
        assert!(!s.is_linear());
        assert_eq!(s.symbols(), &[("m".to_string(), 3)]);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_identities("f(x) = x\nf(x,y) = x").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_identities("f(x) = xy").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(parse_identities("f(x) = x = y").is_err());
        assert!(parse_identities("f(x,) = x").is_err());
        assert!(parse_identities("f() = x").is_err());
        assert!(parse_identities("f(X) = x").is_err());
    }
}
