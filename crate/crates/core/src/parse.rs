//! Text grammar and JSON form for polynomials.
//!
//! The text grammar accepts expressions like `3/2*x^2*y - z^3` built from
//! rational literals, declared variable names, the generator of an
//! extension field, `+ - * ^` and parentheses. Printing uses the same
//! grammar, so print-then-parse is the identity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{Coeff, Field};
use crate::poly::SparsePolynomial;
use crate::Result;

/// JSON form: `{"vars":["x","y"],"terms":[[[2,0],"1"],[[0,3],"-1"]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<(Vec<u32>, String)>,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = vec![];
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' | '−' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' | '·' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let numer: BigInt = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse("bad integer".into()))?;
                // a slash directly after an integer makes a rational literal
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(Error::Parse("missing denominator".into()));
                    }
                    let denom: BigInt = chars[dstart..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| Error::Parse("bad denominator".into()))?;
                    out.push(Token::Num(BigRational::new(numer, denom)));
                } else {
                    out.push(Token::Num(BigRational::from(numer)));
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse(format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [&'a str],
    field: &'a Field,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<SparsePolynomial> {
        let mut negate = false;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Minus => {
                    negate = !negate;
                    self.pos += 1;
                }
                Token::Plus => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus | Token::Minus => {
                    let mut m = matches!(tok, Token::Minus);
                    self.pos += 1;
                    // tolerate sign runs like `+ -`
                    while let Some(t2) = self.peek() {
                        match t2 {
                            Token::Minus => {
                                m = !m;
                                self.pos += 1;
                            }
                            Token::Plus => {
                                self.pos += 1;
                            }
                            _ => break,
                        }
                    }
                    let rhs = self.term()?;
                    acc = if m { &acc - &rhs } else { &acc + &rhs };
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SparsePolynomial> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SparsePolynomial> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.pos += 1;
            match self.next() {
                Some(Token::Num(n)) if n.is_integer() && !n.is_negative() => {
                    let e: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse(
                    "exponent must be a nonnegative integer".into(),
                )),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<SparsePolynomial> {
        match self.next() {
            Some(Token::Num(n)) => Ok(SparsePolynomial::constant(
                self.field,
                self.nvars,
                self.field.from_rational(n),
            )),
            Some(Token::Ident(name)) => {
                if let Some(idx) = self.vars.iter().position(|v| *v == name) {
                    return Ok(SparsePolynomial::var(self.field, self.nvars, idx));
                }
                if let Field::Extension(e) = self.field {
                    if e.generator == name {
                        let gen = self.field.generator()?;
                        return Ok(SparsePolynomial::constant(self.field, self.nvars, gen));
                    }
                }
                Err(Error::Parse(format!("unknown variable '{name}'")))
            }
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(Token::Minus) => {
                let inner = self.factor()?;
                Ok(-&inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a polynomial expression over the given variables.
pub fn parse_polynomial(input: &str, vars: &[&str], field: &Field) -> Result<SparsePolynomial> {
    if let Field::Extension(e) = field {
        if vars.contains(&e.generator.as_str()) {
            return Err(Error::Parse(format!(
                "variable '{}' collides with the field generator",
                e.generator
            )));
        }
    }
    let tokens = tokenize(input)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        vars,
        field,
        nvars: vars.len(),
    };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse("trailing input".into()));
    }
    Ok(out)
}

/// Serializes to the JSON form; coefficients become grammar strings.
pub fn poly_to_json(p: &SparsePolynomial, vars: &[&str]) -> PolyJson {
    PolyJson {
        vars: vars.iter().map(|s| s.to_string()).collect(),
        terms: p
            .terms()
            .iter()
            .map(|(m, c)| (m.0.clone(), p.field().format(c)))
            .collect(),
    }
}

/// Reads the JSON form back; exact round trip with [`poly_to_json`].
pub fn poly_from_json(json: &PolyJson, field: &Field) -> Result<SparsePolynomial> {
    let nvars = json.vars.len();
    let mut terms: Vec<(Vec<u32>, Coeff)> = vec![];
    for (exps, cstr) in &json.terms {
        if exps.len() != nvars {
            return Err(Error::ArityMismatch(exps.len(), nvars));
        }
        let cpoly = parse_polynomial(cstr, &[], field)?;
        let c = cpoly.coeff_of(&[]);
        terms.push((exps.clone(), c));
    }
    SparsePolynomial::from_terms(field, nvars, terms)
}

/// Parses the on-disk polynomial format: either the JSON form or a text
/// file whose first non-empty line is a `vars: x y` header followed by the
/// expression.
pub fn parse_poly_file(content: &str, field: &Field) -> Result<(SparsePolynomial, Vec<String>)> {
    let trimmed = content.trim_start();
    if trimmed.starts_with('{') {
        let json: PolyJson = serde_json::from_str(trimmed)
            .map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
        let p = poly_from_json(&json, field)?;
        return Ok((p, json.vars));
    }
    let mut lines = content.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?;
    let names: Vec<String> = match header.trim().strip_prefix("vars:") {
        Some(rest) => rest
            .split_whitespace()
            .map(|s| s.trim_end_matches(',').to_string())
            .collect(),
        None => return Err(Error::Parse("missing 'vars:' header".into())),
    };
    if names.is_empty() {
        return Err(Error::Parse("no variables declared".into()));
    }
    let body: String = lines.collect::<Vec<_>>().join(" ");
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let p = parse_polynomial(&body, &refs, field)?;
    Ok((p, names))
}

/// Shorthand used throughout the tests: parse over the rationals.
pub fn qpoly(input: &str, vars: &[&str]) -> SparsePolynomial {
    parse_polynomial(input, vars, &Field::Rational).expect("valid test polynomial")
}

/// Parses a single field element written in the coefficient grammar
/// (a rational literal or an expression in the extension generator).
pub fn parse_coeff(input: &str, field: &Field) -> Result<Coeff> {
    let p = parse_polynomial(input, &[], field)?;
    Ok(p.coeff_of(&[]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let vars = ["x", "y", "z"];
        let p = qpoly("3/2*x^2*y - z^3", &vars);
        assert_eq!(p.to_string_with(&vars), "3/2*x^2*y - z^3");
        let back = qpoly(&p.to_string_with(&vars), &vars);
        assert_eq!(back, p);
    }

    #[test]
    fn parentheses_and_signs() {
        let vars = ["x", "y"];
        let p = qpoly("(x+y)^2 - (x-y)^2", &vars);
        let want = qpoly("4*x*y", &vars);
        assert_eq!(p, want);
        let p = qpoly("-x^2 + -3*y", &vars);
        let want = qpoly("0 - x^2 - 3*y", &vars);
        assert_eq!(p, want);
    }

    #[test]
    fn extension_generator_in_coefficients() {
        let f = Field::sixth_root_extension();
        let p = parse_polynomial("(t - 1)*x + t^2*y", &["x", "y"], &f).unwrap();
        let printed = p.to_string_with(&["x", "y"]);
        let back = parse_polynomial(&printed, &["x", "y"], &f).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn json_round_trip() {
        let vars = ["x", "y", "z"];
        let p = qpoly("3/2*x^2*y - z^3", &vars);
        let json = poly_to_json(&p, &vars);
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains("\"vars\":[\"x\",\"y\",\"z\"]"));
        let parsed: PolyJson = serde_json::from_str(&text).unwrap();
        let back = poly_from_json(&parsed, &Field::Rational).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn file_format_with_header() {
        let content = "vars: x y\nx^2*y - y^4\n";
        let (p, names) = parse_poly_file(content, &Field::Rational).unwrap();
        assert_eq!(names, vec!["x", "y"]);
        assert_eq!(p, qpoly("x^2*y - y^4", &["x", "y"]));
    }

    #[test]
    fn unknown_variable_rejected() {
        assert!(matches!(
            parse_polynomial("x + q", &["x"], &Field::Rational),
            Err(Error::Parse(_))
        ));
    }
}
