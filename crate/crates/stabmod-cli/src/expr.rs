//! The module expression language: `*` for tensor, `+` for direct sum,
//! `dual(...)`, and the prefix operators `S^t` (degree shift) and `O^s`
//! (s-th syzygy; negative s takes cosyzygies). Atoms are named modules.
//!
//! Hand-rolled recursive descent over a token list; precedence from loosest
//! to tightest is `+`, `*`, prefix operators.

use stabmod::stable::{omega, omega_inv};
use stabmod::GradedModule;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(i64),
    Star,
    Plus,
    Caret,
    LPar,
    RPar,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "{s}"),
            Token::Int(n) => write!(f, "{n}"),
            Token::Star => write!(f, "*"),
            Token::Plus => write!(f, "+"),
            Token::Caret => write!(f, "^"),
            Token::LPar => write!(f, "("),
            Token::RPar => write!(f, ")"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LPar);
                i += 1;
            }
            ')' => {
                out.push(Token::RPar);
                i += 1;
            }
            '-' | '0'..='9' => {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let n = lit
                    .parse::<i64>()
                    .map_err(|_| format!("bad integer '{lit}' at position {start}"))?;
                out.push(Token::Int(n));
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character '{other}' at position {i}")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    env: &'a BTreeMap<String, GradedModule>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Token) -> Result<(), String> {
        match self.bump() {
            Some(ref t) if t == want => Ok(()),
            Some(t) => Err(format!("expected '{want}', found '{t}'")),
            None => Err(format!("expected '{want}', found end of expression")),
        }
    }

    fn sum(&mut self) -> Result<GradedModule, String> {
        let mut acc = self.prod()?;
        while matches!(self.peek(), Some(Token::Plus)) {
            self.bump();
            let rhs = self.prod()?;
            acc = acc.direct_sum(&rhs).map_err(|e| e.to_string())?;
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<GradedModule, String> {
        let mut acc = self.prefix()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.bump();
            let rhs = self.prefix()?;
            acc = acc.tensor(&rhs).map_err(|e| e.to_string())?;
        }
        Ok(acc)
    }

    fn power(&mut self, op: &str) -> Result<i64, String> {
        self.expect(&Token::Caret)
            .map_err(|e| format!("{op} takes a caret power: {e}"))?;
        match self.bump() {
            Some(Token::Int(n)) => Ok(n),
            Some(t) => Err(format!("{op}^ needs an integer, found '{t}'")),
            None => Err(format!("{op}^ needs an integer, found end of expression")),
        }
    }

    fn prefix(&mut self) -> Result<GradedModule, String> {
        match self.peek().cloned() {
            Some(Token::Ident(id)) if id == "S" => {
                self.bump();
                let t = self.power("S")?;
                Ok(self.prefix()?.shift(t))
            }
            Some(Token::Ident(id)) if id == "O" => {
                self.bump();
                let s = self.power("O")?;
                let mut m = self.prefix()?;
                for _ in 0..s.abs() {
                    m = if s > 0 { omega(&m) } else { omega_inv(&m) };
                }
                Ok(m)
            }
            Some(Token::Ident(id)) if id == "dual" => {
                self.bump();
                self.expect(&Token::LPar)?;
                let inner = self.sum()?;
                self.expect(&Token::RPar)?;
                Ok(inner.dual())
            }
            Some(Token::Ident(id)) => {
                self.bump();
                self.env.get(&id).cloned().ok_or_else(|| {
                    let known: Vec<&str> = self.env.keys().map(String::as_str).collect();
                    format!("unknown module '{id}'; known names: {}", known.join(", "))
                })
            }
            Some(Token::LPar) => {
                self.bump();
                let inner = self.sum()?;
                self.expect(&Token::RPar)?;
                Ok(inner)
            }
            Some(t) => Err(format!("expected a module term, found '{t}'")),
            None => Err("expected a module term, found end of expression".into()),
        }
    }
}

/// Evaluate an expression against named modules. Errors are strings suitable
/// for usage messages.
pub fn eval(text: &str, env: &BTreeMap<String, GradedModule>) -> Result<GradedModule, String> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err("empty module expression".into());
    }
    let mut p = Parser { tokens: &tokens, pos: 0, env };
    let m = p.sum()?;
    if p.pos != tokens.len() {
        return Err(format!("trailing input from '{}'", tokens[p.pos]));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use stabmod::gmod::{joker, unit_module};
    use stabmod::preset;

    fn env() -> BTreeMap<String, GradedModule> {
        let a = preset("A1").unwrap();
        let mut env = BTreeMap::new();
        env.insert("unit".to_string(), unit_module(&a));
        env.insert("joker".to_string(), joker());
        env
    }

    #[test]
    fn precedence_binds_tensor_tighter_than_sum() {
        let e = env();
        let m = eval("unit + unit * unit", &e).unwrap();
        assert_eq!(m.total_dim(), 2);
        let n = eval("(unit + unit) * unit", &e).unwrap();
        assert_eq!(n.total_dim(), 2);
    }

    #[test]
    fn prefixes_shift_and_loop() {
        let e = env();
        let m = eval("S^3 unit", &e).unwrap();
        assert_eq!(m.dims_list(), vec![(3, 1)]);
        let w = eval("O^1 unit", &e).unwrap();
        assert_eq!(w.lo(), 1);
        let back = eval("O^-1 O^1 unit", &e).unwrap();
        assert_eq!(back.dims_list(), vec![(0, 1)]);
        let d = eval("dual(S^2 joker)", &e).unwrap();
        assert_eq!(d.hi(), -2);
        assert_eq!(d.lo(), -6);
    }

    #[test]
    fn errors_are_positioned_and_name_listing() {
        let e = env();
        assert!(eval("unit *", &e).unwrap_err().contains("end of expression"));
        assert!(eval("mystery", &e).unwrap_err().contains("known names"));
        assert!(eval("unit )", &e).unwrap_err().contains("trailing"));
        assert!(eval("S unit", &e).unwrap_err().contains("caret"));
    }
}
