//! Relation expressions: a small recursive-descent parser and a canonical printer.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ['^' uint]
//! atom   := ident | uint | '(' expr ')'
//! ```

use std::fmt;

use crate::error::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Ident(String),
    Num(u64),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
}

impl Expr {
    pub fn ident(name: &str) -> Self {
        Expr::Ident(name.to_string())
    }

    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn pow(base: Expr, e: u64) -> Self {
        Expr::Pow(Box::new(base), e)
    }

    /// Every identifier occurring in the expression, in order of appearance.
    pub fn identifiers(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_idents(&mut out);
        out
    }

    fn collect_idents<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Ident(s) => out.push(s),
            Expr::Num(_) => {}
            Expr::Binary(_, a, b) => {
                a.collect_idents(out);
                b.collect_idents(out);
            }
            Expr::Pow(a, _) => a.collect_idents(out),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Pow(..) => 3,
            Expr::Ident(_) | Expr::Num(_) => 4,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Ident(s) => write!(f, "{s}"),
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Pow(base, e) => {
                if base.precedence() < 4 {
                    write!(f, "({base})^{e}")
                } else {
                    write!(f, "{base}^{e}")
                }
            }
            Expr::Binary(op, a, b) => {
                let prec = self.precedence();
                let (sym, spaced) = match op {
                    BinOp::Add => ("+", true),
                    BinOp::Sub => ("-", true),
                    BinOp::Mul => ("*", false),
                    BinOp::Div => ("/", false),
                };
                // left-associative: the right operand needs parentheses at equal precedence
                if a.precedence() < prec {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                if spaced {
                    write!(f, " {sym} ")?;
                } else {
                    write!(f, "{sym}")?;
                }
                if b.precedence() <= prec {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(char),
    End,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.char_indices().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    /// Next token with its starting position.
    fn next(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
        let (line, col) = (self.line, self.col);
        let Some(&(_, c)) = self.chars.peek() else {
            return Ok((Tok::End, line, col));
        };
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, c)) = self.chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            return Ok((Tok::Ident(s), line, col));
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, c)) = self.chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            let n = s.parse().map_err(|_| {
                Self::error(line, col, format!("integer literal `{s}` out of range"))
            })?;
            return Ok((Tok::Num(n), line, col));
        }
        if "+-*/^()".contains(c) {
            self.bump();
            return Ok((Tok::Sym(c), line, col));
        }
        Err(Self::error(
            line,
            col,
            format!("unexpected character `{c}`"),
        ))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(text);
        let (tok, line, col) = lexer.next()?;
        Ok(Parser {
            lexer,
            tok,
            line,
            col,
        })
    }

    fn advance(&mut self) -> Result<Tok, ParseError> {
        let (tok, line, col) = self.lexer.next()?;
        self.line = line;
        self.col = col;
        Ok(std::mem::replace(&mut self.tok, tok))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        Lexer::error(self.line, self.col, message)
    }

    fn describe(&self) -> String {
        match &self.tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.tok {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance()?;
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.tok == Tok::Sym('^') {
            self.advance()?;
            match self.tok {
                Tok::Num(e) => {
                    self.advance()?;
                    Ok(Expr::pow(base, e))
                }
                _ => Err(self.error(format!("expected exponent, found {}", self.describe()))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Ident(s) => {
                self.advance()?;
                Ok(Expr::Ident(s))
            }
            Tok::Num(n) => {
                self.advance()?;
                Ok(Expr::Num(n))
            }
            Tok::Sym('(') => {
                self.advance()?;
                let inner = self.expr()?;
                if self.tok != Tok::Sym(')') {
                    return Err(self.error(format!("expected `)`, found {}", self.describe())));
                }
                self.advance()?;
                Ok(inner)
            }
            _ => Err(self.error(format!("expected operand, found {}", self.describe()))),
        }
    }
}

/// Parse a relation expression. Positions in errors are 1-based.
pub fn parse_relation(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser::new(text)?;
    let expr = parser.expr()?;
    if parser.tok != Tok::End {
        return Err(parser.error(format!("unexpected {}", parser.describe())));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_terms() {
        let e = parse_relation("t*u^2 + u").unwrap();
        let Expr::Binary(BinOp::Add, a, b) = &e else {
            panic!("expected a sum, got {e:?}");
        };
        assert_eq!(
            **a,
            Expr::binary(BinOp::Mul, Expr::ident("t"), Expr::pow(Expr::ident("u"), 2))
        );
        assert_eq!(**b, Expr::ident("u"));
        assert_eq!(e.to_string(), "t*u^2 + u");
    }

    #[test]
    fn nested() {
        let e = parse_relation("(t + z^4)*z").unwrap();
        assert_eq!(
            e,
            Expr::binary(
                BinOp::Mul,
                Expr::binary(BinOp::Add, Expr::ident("t"), Expr::pow(Expr::ident("z"), 4)),
                Expr::ident("z"),
            )
        );
        assert_eq!(e.to_string(), "(t + z^4)*z");
    }

    #[test]
    fn error_positions() {
        assert_eq!(
            parse_relation("u^"),
            Err(ParseError::Syntax {
                line: 1,
                column: 3,
                message: "expected exponent, found end of input".into()
            })
        );
        let Err(ParseError::Syntax { line, column, .. }) = parse_relation("a +\n  * b") else {
            panic!("expected an error");
        };
        assert_eq!((line, column), (2, 3));
        assert!(parse_relation("(a + b").is_err());
        assert!(parse_relation("a b").is_err());
        assert!(parse_relation("a # b").is_err());
        assert!(parse_relation("").is_err());
    }

    #[test]
    fn associativity_is_preserved() {
        let e = parse_relation("a - (b - c)").unwrap();
        assert_eq!(e.to_string(), "a - (b - c)");
        let e = parse_relation("a/b/c").unwrap();
        assert_eq!(e.to_string(), "a/b/c");
        let e = parse_relation("(a^2)^3").unwrap();
        assert_eq!(e.to_string(), "(a^2)^3");
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            "[a-z][a-z0-9_]{0,3}".prop_map(Expr::Ident),
            (0u64..20).prop_map(Expr::Num),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (
                    prop_oneof![
                        Just(BinOp::Add),
                        Just(BinOp::Sub),
                        Just(BinOp::Mul),
                        Just(BinOp::Div)
                    ],
                    inner.clone(),
                    inner.clone()
                )
                    .prop_map(|(op, a, b)| Expr::binary(op, a, b)),
                (inner, 0u64..9).prop_map(|(a, e)| Expr::pow(a, e)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig {
            cases: 200,
            rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha,
            rng_seed: proptest::test_runner::RngSeed::Fixed(0x7265_6c61),
            ..ProptestConfig::default()
        })]

        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            prop_assert_eq!(parse_relation(&printed).unwrap(), e);
        }
    }
}
