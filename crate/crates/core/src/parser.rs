//! Text syntax for programs.
//!
//! ```text
//! % comment
//! p(a) :- card{X : p(X)} = 1.
//! q(a) or p(b).
//! :- p(a).
//! r :- not q, -s(1), sum{X,Y : w(X,Y), X != 0} >= 2*N+1, n(N).
//! ```
//!
//! Variables start with an uppercase letter, constants with a lowercase
//! one. A leading `-` on a literal is classical negation; on a numeral it
//! is a sign. `or` and `not` are reserved.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::model::{AggFunc, AggregateAtom, ArithOp, CondItem, Literal, Program, Relation, Rule, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourcePosition {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourcePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntactic,
    ArityMismatch,
    UnsafeAggregate,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Lexical => "lexical",
            ParseErrorKind::Syntactic => "syntax",
            ParseErrorKind::ArityMismatch => "arity",
            ParseErrorKind::UnsafeAggregate => "unsafe aggregate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{position}: {kind} error: {message}")]
pub struct ParseError {
    pub position: SourcePosition,
    pub kind: ParseErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    If,
    Dot,
    Minus,
    Plus,
    Star,
    Rel(Relation),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::If => f.write_str("`:-`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Rel(r) => write!(f, "`{r}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: [&str; 2] = ["not", "or"];

fn lex(src: &str) -> Result<Vec<(Tok, SourcePosition)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let ident_char = |c: char| c.is_ascii_alphanumeric() || c == '_';

    while i < chars.len() {
        let c = chars[i];
        let pos = SourcePosition { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_lowercase() || c.is_ascii_uppercase() {
            while i < chars.len() && ident_char(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if c.is_ascii_uppercase() {
                Tok::Var(word)
            } else {
                Tok::Ident(word)
            }
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse::<i64>().map_err(|_| ParseError {
                position: pos,
                kind: ParseErrorKind::Lexical,
                message: format!("integer `{digits}` is out of range"),
            })?;
            Tok::Int(n)
        } else {
            let next = chars.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                (':', Some('-')) => (Tok::If, 2),
                (':', _) => (Tok::Colon, 1),
                ('>', Some('=')) => (Tok::Rel(Relation::Ge), 2),
                ('>', _) => (Tok::Rel(Relation::Gt), 1),
                ('<', Some('=')) => (Tok::Rel(Relation::Le), 2),
                ('<', _) => (Tok::Rel(Relation::Lt), 1),
                ('!', Some('=')) => (Tok::Rel(Relation::Ne), 2),
                ('=', _) => (Tok::Rel(Relation::Eq), 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                (',', _) => (Tok::Comma, 1),
                ('.', _) => (Tok::Dot, 1),
                ('-', _) => (Tok::Minus, 1),
                ('+', _) => (Tok::Plus, 1),
                ('*', _) => (Tok::Star, 1),
                _ => {
                    return Err(ParseError {
                        position: pos,
                        kind: ParseErrorKind::Lexical,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            };
            i += len;
            tok
        };
        col += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, SourcePosition { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourcePosition)>,
    at: usize,
    arities: HashMap<String, usize>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> SourcePosition {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at < self.toks.len() - 1 {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, kind: ParseErrorKind, message: String) -> PResult<T> {
        Err(ParseError {
            position: self.pos(),
            kind,
            message,
        })
    }

    fn unexpected<T>(&self, expected: &str) -> PResult<T> {
        self.error(
            ParseErrorKind::Syntactic,
            format!("unexpected {}, expected {expected}", self.peek()),
        )
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    fn program(&mut self) -> PResult<Program> {
        let mut rules = Vec::new();
        while *self.peek() != Tok::Eof {
            rules.push(self.statement()?);
        }
        Ok(Program { rules })
    }

    fn statement(&mut self) -> PResult<Rule> {
        let mut rule = Rule::default();
        if *self.peek() != Tok::If {
            rule.head.push(self.literal()?);
            while self.is_keyword("or") {
                self.bump();
                rule.head.push(self.literal()?);
            }
        }
        if *self.peek() == Tok::If {
            self.bump();
            self.body(&mut rule)?;
        }
        let expected = if rule.head.is_empty() || !rule.pos.is_empty() || !rule.neg.is_empty() || !rule.agg.is_empty() {
            "`,` or `.`"
        } else {
            "`or`, `:-` or `.`"
        };
        self.expect(Tok::Dot, expected)?;
        Ok(rule)
    }

    fn body(&mut self, rule: &mut Rule) -> PResult<()> {
        loop {
            self.body_element(rule)?;
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(());
            }
        }
    }

    fn body_element(&mut self, rule: &mut Rule) -> PResult<()> {
        if self.is_keyword("not") {
            self.bump();
            if let (Tok::Ident(_), Tok::LBrace) = (self.peek(), self.peek_at(1)) {
                return self.error(
                    ParseErrorKind::Syntactic,
                    format!("default negation of an aggregate atom {} is not supported", self.peek()),
                );
            }
            rule.neg.push(self.literal()?);
            return Ok(());
        }
        if let (Tok::Ident(name), Tok::LBrace) = (self.peek(), self.peek_at(1)) {
            let Some(func) = AggFunc::from_name(name) else {
                return self.error(
                    ParseErrorKind::Syntactic,
                    format!("unknown aggregate function `{name}`, expected card, count, sum, min or max"),
                );
            };
            self.bump();
            rule.agg.push(self.aggregate(func)?);
            return Ok(());
        }
        rule.pos.push(self.literal()?);
        Ok(())
    }

    fn aggregate(&mut self, func: AggFunc) -> PResult<AggregateAtom> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut bound_vars: Vec<(String, SourcePosition)> = Vec::new();
        loop {
            let pos = self.pos();
            match self.peek().clone() {
                Tok::Var(v) => {
                    if bound_vars.iter().any(|(b, _)| *b == v) {
                        return self.error(
                            ParseErrorKind::Syntactic,
                            format!("variable `{v}` listed twice in set name"),
                        );
                    }
                    self.bump();
                    bound_vars.push((v, pos));
                }
                _ => return self.unexpected("a variable in set name"),
            }
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::Colon, "`,` or `:`")?;
        if *self.peek() == Tok::RBrace {
            return self.error(
                ParseErrorKind::Syntactic,
                format!("unexpected {}: set name has an empty condition", self.peek()),
            );
        }
        let mut cond = vec![self.cond_item()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            cond.push(self.cond_item()?);
        }
        self.expect(Tok::RBrace, "`,` or `}`")?;
        let relation = match self.peek() {
            Tok::Rel(r) => *r,
            _ => return self.unexpected("a comparison after set name"),
        };
        self.bump();
        let rhs = self.term()?;

        let atom = AggregateAtom {
            func,
            bound_vars: bound_vars.iter().map(|(v, _)| v.clone()).collect(),
            cond,
            relation,
            rhs,
        };
        for (v, pos) in &bound_vars {
            let occurs = atom.cond_literals().any(|l| l.args.iter().any(|t| term_mentions(t, v)));
            if !occurs {
                return Err(ParseError {
                    position: *pos,
                    kind: ParseErrorKind::UnsafeAggregate,
                    message: format!("set variable `{v}` does not occur in a literal of the condition"),
                });
            }
        }
        Ok(atom)
    }

    fn cond_item(&mut self) -> PResult<CondItem> {
        match (self.peek().clone(), self.peek_at(1).clone()) {
            (Tok::Ident(w), _) if w == "not" => self.error(
                ParseErrorKind::Syntactic,
                "unexpected `not`: default negation is not allowed inside a set name".into(),
            ),
            (Tok::Minus, Tok::Ident(_)) => Ok(CondItem::Lit(self.literal()?)),
            (Tok::Ident(_), Tok::LParen) => Ok(CondItem::Lit(self.literal()?)),
            (Tok::Ident(_), Tok::Rel(_)) => self.comparison(),
            (Tok::Ident(_), _) => Ok(CondItem::Lit(self.literal()?)),
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> PResult<CondItem> {
        let lhs = self.term()?;
        let rel = match self.peek() {
            Tok::Rel(r) => *r,
            _ => return self.unexpected("a comparison operator"),
        };
        self.bump();
        let rhs = self.term()?;
        Ok(CondItem::Cmp(lhs, rel, rhs))
    }

    fn literal(&mut self) -> PResult<Literal> {
        let negated = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let pos = self.pos();
        let predicate = match self.peek().clone() {
            Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) => {
                self.bump();
                w
            }
            Tok::Ident(w) => {
                return self.error(
                    ParseErrorKind::Syntactic,
                    format!("unexpected keyword `{w}`, expected a literal"),
                )
            }
            _ => return self.unexpected("a literal"),
        };
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen, "`,` or `)`")?;
        }
        match self.arities.get(&predicate) {
            Some(&n) if n != args.len() => {
                return Err(ParseError {
                    position: pos,
                    kind: ParseErrorKind::ArityMismatch,
                    message: format!("predicate `{predicate}` used with arity {} and {n}", args.len()),
                })
            }
            Some(_) => {}
            None => {
                self.arities.insert(predicate.clone(), args.len());
            }
        }
        Ok(Literal {
            predicate,
            args,
            negated,
        })
    }

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Term::Arith(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> PResult<Term> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.unary()?;
            lhs = Term::Arith(ArithOp::Mul, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Term::Int(n))
            }
            Tok::Minus => {
                self.bump();
                match self.peek() {
                    Tok::Int(n) => {
                        let n = -*n;
                        self.bump();
                        Ok(Term::Int(n))
                    }
                    _ => self.unexpected("a numeral after unary `-`"),
                }
            }
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) => {
                if *self.peek_at(1) == Tok::LParen {
                    return self.error(
                        ParseErrorKind::Syntactic,
                        format!("function term `{w}(...)` is not supported; only constants, integers and variables"),
                    );
                }
                self.bump();
                Ok(Term::Const(w))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.unexpected("a term"),
        }
    }
}

fn term_mentions(t: &Term, var: &str) -> bool {
    match t {
        Term::Var(v) => v == var,
        Term::Arith(_, l, r) => term_mentions(l, var) || term_mentions(r, var),
        _ => false,
    }
}

/// Parses a whole program. Rules come out in source order.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        arities: HashMap::new(),
    };
    p.program()
}

/// Canonical text, one rule per line. `parse_program` reads it back to
/// the same AST.
pub fn format_program(p: &Program) -> String {
    p.rules.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}
