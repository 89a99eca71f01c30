//! Expression grammar for differential polynomials with rational coefficients.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("-" | "+") unary | power
//! power  := atom ("^" "-"? integer)?
//! atom   := integer | name | name "_" integer | "(" expr ")"
//! ```
//!
//! `name` must be one of the coordinate names; `name_k` with `k >= 1` is the
//! `k`-th x-derivative of that coordinate. Division and negative powers are
//! only allowed for expressions of the coordinates alone.

use std::fmt;

use loopform::{JetExpression, RatFun, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

/// Parse failure at a 1-based line and column of the source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "semantic error",
        };
        write!(f, "line {}, column {}: {}: {}", self.line, self.column, kind, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Jet(String, String),
    Op(char),
    End,
}

struct Token {
    tok: Tok,
    pos: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(s) => format!("number '{}'", s),
        Tok::Ident(s) => format!("name '{}'", s),
        Tok::Jet(s, k) => format!("name '{}_{}'", s, k),
        Tok::Op(c) => format!("'{}'", c),
        Tok::End => String::from("end of input"),
    }
}

struct Parser<'a> {
    src: &'a str,
    names: &'a [String],
    toks: Vec<Token>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, kind: ParseErrorKind, pos: usize, message: String) -> ParseError {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError { kind, line, column, message }
    }

    fn tokenize(&mut self) -> Result<(), ParseError> {
        let bytes = self.src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = self.src[i..].chars().next().unwrap_or('\0');
            if c.is_whitespace() {
                i += c.len_utf8();
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                self.toks.push(Token { tok: Tok::Int(self.src[start..i].to_string()), pos: start });
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let name = self.src[start..i].to_string();
                if i < bytes.len() && bytes[i] == b'_' {
                    let ks = i + 1;
                    let mut j = ks;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == ks {
                        return Err(self.error(ParseErrorKind::Syntax, ks, String::from("expected a derivative order after '_'")));
                    }
                    self.toks.push(Token { tok: Tok::Jet(name, self.src[ks..j].to_string()), pos: start });
                    i = j;
                } else {
                    self.toks.push(Token { tok: Tok::Ident(name), pos: start });
                }
            } else if "+-*/^()".contains(c) {
                self.toks.push(Token { tok: Tok::Op(c), pos: i });
                i += 1;
            } else {
                return Err(self.error(ParseErrorKind::Syntax, i, format!("unexpected character '{}'", c)));
            }
        }
        self.toks.push(Token { tok: Tok::End, pos: self.src.len() });
        Ok(())
    }

    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn next(&mut self) -> &Token {
        let t = &self.toks[self.at];
        if t.tok != Tok::End {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, t: &Token, wanted: &str) -> ParseError {
        self.error(ParseErrorKind::Syntax, t.pos, format!("expected {}, found {}", wanted, describe(&t.tok)))
    }

    fn n(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<JetExpression, ParseError> {
        let mut acc = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = self.peek().tok {
            self.next();
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<JetExpression, ParseError> {
        let mut acc = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = self.peek().tok {
            let pos = self.next().pos;
            let rhs = self.unary()?;
            acc = if c == '*' { &acc * &rhs } else { self.divide(&acc, &rhs, pos)? };
        }
        Ok(acc)
    }

    fn divide(&self, a: &JetExpression, b: &JetExpression, pos: usize) -> Result<JetExpression, ParseError> {
        let den = self.u_only(b, pos, "division by an expression containing jet variables")?;
        let inv = den.recip().map_err(|_| self.error(ParseErrorKind::Semantic, pos, String::from("division by zero")))?;
        Ok(a.mul_ratfun(&inv))
    }

    fn u_only(&self, e: &JetExpression, pos: usize, what: &str) -> Result<RatFun, ParseError> {
        e.as_ratfun().ok_or_else(|| self.error(ParseErrorKind::Semantic, pos, what.to_string()))
    }

    fn unary(&mut self) -> Result<JetExpression, ParseError> {
        match self.peek().tok {
            Tok::Op('-') => {
                self.next();
                Ok(-self.unary()?)
            }
            Tok::Op('+') => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<JetExpression, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Op('^') {
            return Ok(base);
        }
        let pos = self.next().pos;
        let negative = if self.peek().tok == Tok::Op('-') {
            self.next();
            true
        } else {
            false
        };
        let at = self.at;
        self.next();
        let t = &self.toks[at];
        let Tok::Int(digits) = &t.tok else {
            return Err(self.unexpected(t, "an integer exponent"));
        };
        let epos = t.pos;
        let e: u32 = digits
            .parse()
            .ok()
            .filter(|&e: &u32| e <= i32::MAX as u32)
            .ok_or_else(|| self.error(ParseErrorKind::Semantic, epos, format!("exponent {} is too large", digits)))?;
        if !negative {
            return Ok(base.pow(e));
        }
        let f = self.u_only(&base, pos, "negative power of an expression containing jet variables")?;
        let p = f
            .pow(-(e as i32))
            .map_err(|_| self.error(ParseErrorKind::Semantic, pos, String::from("negative power of zero")))?;
        Ok(JetExpression::from_ratfun(p))
    }

    fn coord(&self, name: &str, pos: usize) -> Result<usize, ParseError> {
        self.names
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| self.error(ParseErrorKind::Semantic, pos, format!("unknown coordinate '{}'", name)))
    }

    fn atom(&mut self) -> Result<JetExpression, ParseError> {
        let at = self.at;
        let t = self.next();
        let pos = t.pos;
        match t.tok.clone() {
            Tok::Int(s) => {
                let v: num_bigint::BigInt = s.parse().expect("digits");
                Ok(JetExpression::constant(self.n(), Rational::from_integer(v)))
            }
            Tok::Ident(name) => {
                let i = self.coord(&name, pos)?;
                Ok(JetExpression::var(self.n(), i, 0))
            }
            Tok::Jet(name, k) => {
                let i = self.coord(&name, pos)?;
                let order: u32 = k
                    .parse()
                    .ok()
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| self.error(ParseErrorKind::Semantic, pos, format!("invalid derivative order '{}'", k)))?;
                Ok(JetExpression::var(self.n(), i, order))
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                let close = self.at;
                self.next();
                if self.toks[close].tok != Tok::Op(')') {
                    return Err(self.unexpected(&self.toks[close], "')'"));
                }
                Ok(e)
            }
            _ => Err(self.unexpected(&self.toks[at], "a number, a coordinate or '('")),
        }
    }
}

/// Parses `src` as a differential polynomial over the coordinates `names`.
pub fn parse_expr(src: &str, names: &[String]) -> Result<JetExpression, ParseError> {
    let mut p = Parser { src, names, toks: Vec::new(), at: 0 };
    p.tokenize()?;
    let e = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(p.unexpected(t, "an operator or end of input"));
    }
    Ok(e)
}

/// Parses an expression that must depend on the coordinates only.
pub fn parse_ratfun(src: &str, names: &[String]) -> Result<RatFun, ParseError> {
    let e = parse_expr(src, names)?;
    e.as_ratfun().ok_or_else(|| ParseError {
        kind: ParseErrorKind::Semantic,
        line: 1,
        column: 1,
        message: String::from("expected a function of the coordinates without jet variables"),
    })
}

/// Parses a constant rational number such as `-2/3`.
pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    let e = parse_expr(src, &[])?;
    Ok(e.constant_value().expect("no coordinates in scope"))
}

/// Checks that a coordinate name is an identifier without underscores.
pub fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric())
}

/// Default coordinate names `u1..un`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("u{}", i)).collect()
}

pub fn show(e: &JetExpression, names: &[String]) -> String {
    e.display_with(names).to_string()
}

pub fn show_ratfun(f: &RatFun, names: &[String]) -> String {
    f.display_with(names).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use loopform::random::{self, Shape};
    use proptest::prelude::*;
    use proptest::test_runner::{Config, RngSeed};

    fn names(n: usize) -> Vec<String> {
        default_names(n)
    }

    fn err(src: &str) -> ParseError {
        parse_expr(src, &names(3)).unwrap_err()
    }

    #[test]
    fn jet_variable() {
        let e = parse_expr("u1_2", &names(3)).unwrap();
        assert_eq!(e, JetExpression::var(3, 0, 2));
    }

    #[test]
    fn product_expression() {
        let n = names(3);
        let e = parse_expr("(u1-u2)^2 * u3_1", &n).unwrap();
        let d = &JetExpression::var(3, 0, 0) - &JetExpression::var(3, 1, 0);
        assert_eq!(e, &d.pow(2) * &JetExpression::var(3, 2, 1));
    }

    #[test]
    fn rational_literals_and_precedence() {
        let n = names(2);
        let a = parse_expr("-3/2*u1^2 + u2/(2*u1)", &n).unwrap();
        let b = parse_expr("u2*u1^-1/2 - (3*u1*u1)/2", &n).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_rational("-2/3").unwrap(), loopform::algebra::rational(-2, 3));
        assert_eq!(parse_expr("2^-2", &n).unwrap(), JetExpression::constant(2, loopform::algebra::rational(1, 4)));
        assert_eq!(parse_expr("-u1^2", &n).unwrap(), -JetExpression::var(2, 0, 0).pow(2));
    }

    #[test]
    fn jet_denominator_is_semantic_error() {
        let e = err("1/(u1_1)");
        assert_eq!(e.kind, ParseErrorKind::Semantic);
        assert_eq!((e.line, e.column), (1, 2));
        assert_eq!(err("u1_1^-1").kind, ParseErrorKind::Semantic);
        assert_eq!(err("1/(u1-u1)").message, "division by zero");
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = err("u1 +\n  * u2");
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!((e.line, e.column), (2, 3));
        let e = err("(u1 + u2");
        assert_eq!((e.kind, e.column), (ParseErrorKind::Syntax, 9));
        assert_eq!(err("u1 u2").column, 4);
        assert_eq!(err("u1^u2").column, 4);
        assert_eq!(err("u1_").column, 4);
        assert_eq!(err("u1 $ 2").column, 4);
        assert_eq!(err("").message, "expected a number, a coordinate or '(', found end of input");
    }

    #[test]
    fn name_errors() {
        assert_eq!(err("v1").kind, ParseErrorKind::Semantic);
        assert_eq!(err("u1_0").kind, ParseErrorKind::Semantic);
        let custom = vec![String::from("x"), String::from("y2")];
        assert_eq!(parse_expr("y2_3", &custom).unwrap(), JetExpression::var(2, 1, 3));
        assert!(valid_name("y2") && !valid_name("y_2") && !valid_name("2y") && !valid_name(""));
    }

    #[test]
    fn u_only_parse() {
        let n = names(2);
        assert!(parse_ratfun("1/(u1-u2)", &n).is_ok());
        assert_eq!(parse_ratfun("u1_1", &n).unwrap_err().kind, ParseErrorKind::Semantic);
    }

    fn config() -> Config {
        Config { cases: 64, rng_seed: RngSeed::Fixed(random::DEFAULT_SEED), failure_persistence: None, ..Config::default() }
    }

    proptest! {
        #![proptest_config(config())]

        #[test]
        fn display_round_trip(seed in any::<u64>(), n in 1usize..=3) {
            let mut rng = random::seeded(seed);
            let e = random::jet_expression(&mut rng, Shape::new(n, 2, 3));
            let f = random::ratfun(&mut rng, n, 2);
            let e = e.mul_ratfun(&f);
            let names = names(n);
            let back = parse_expr(&show(&e, &names), &names).unwrap();
            prop_assert_eq!(back, e);
        }
    }
}
