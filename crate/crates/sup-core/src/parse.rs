//! Lexer and recursive-descent parser for terms, propositions, scalar
//! expressions and `.sup` definition files.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::reduction::Mode;
use crate::scalar::{eval_scalar, Scalar, ScalarExpr};
use crate::stdlib::NamedDef;
use crate::syntax::{fresh_name, substitute, Prop, Term, Weighted};
use crate::typecheck::{check, Context, TypeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    /// Weight syntax used in plain mode.
    Mode,
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Equals,
    Hash,
    Backslash,
    Plus,
    Minus,
    Star,
    Slash,
    ParPar,
    Arrow,
    AndOp,
    OrOp,
    SupOp,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    col: u32,
}

fn err_at(line: u32, col: u32, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
    ParseError { kind, line, col, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut line, mut col) = (1u32, 1u32);
    let mut i = 0usize;
    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            tokens.push(Token { tok: $tok, line, col });
            col += $len;
            i += $len as usize;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let peek = |k: usize| chars.get(i + k).copied();
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
            }
            c if c.is_whitespace() => {
                col += 1;
                i += 1;
            }
            '-' if peek(1) == Some('-') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                    col += 1;
                }
            }
            '-' if peek(1) == Some('>') => push!(Tok::Arrow, 2),
            '-' => push!(Tok::Minus, 1),
            '(' if peek(1) == Some('+') && peek(2) == Some(')') => push!(Tok::SupOp, 3),
            '(' => push!(Tok::LParen, 1),
            ')' => push!(Tok::RParen, 1),
            '<' => push!(Tok::LAngle, 1),
            '>' => push!(Tok::RAngle, 1),
            '[' => push!(Tok::LBracket, 1),
            ']' => push!(Tok::RBracket, 1),
            ',' => push!(Tok::Comma, 1),
            '.' => push!(Tok::Dot, 1),
            ':' => push!(Tok::Colon, 1),
            '=' => push!(Tok::Equals, 1),
            '#' => push!(Tok::Hash, 1),
            '+' => push!(Tok::Plus, 1),
            '*' => push!(Tok::Star, 1),
            '/' if peek(1) == Some('\\') => push!(Tok::AndOp, 2),
            '/' => push!(Tok::Slash, 1),
            '\\' if peek(1) == Some('/') => push!(Tok::OrOp, 2),
            '\\' => push!(Tok::Backslash, 1),
            '|' if peek(1) == Some('|') => push!(Tok::ParPar, 2),
            '|' => return Err(err_at(line, col, ParseErrorKind::Syntax, "expected '||'")),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len()
                    && chars[i] == '.'
                    && chars.get(i + 1).is_some_and(|c| c.is_ascii_digit())
                {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value: f64 = text.parse().map_err(|_| {
                    err_at(line, col, ParseErrorKind::Syntax, format!("bad number `{text}`"))
                })?;
                tokens.push(Token { tok: Tok::Number(value), line, col });
                col += (i - start) as u32;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                tokens.push(Token { tok: Tok::Ident(text), line, col });
                col += (i - start) as u32;
            }
            other => {
                return Err(err_at(
                    line,
                    col,
                    ParseErrorKind::Syntax,
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    tokens.push(Token { tok: Tok::Eof, line, col });
    Ok(tokens)
}

/// How a scalar factor was written, to rebuild `a+bi` literals componentwise
/// so that printing and reparsing is exact, signed zeros included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LitShape {
    RealLit,
    ImagLit,
    Other,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    mode: Mode,
    /// Surface-to-internal binder names, innermost last.
    scopes: Vec<(String, String)>,
    /// Every identifier in the source plus freshened binders; used to pick
    /// fresh names when a duplicate binder is renamed.
    names: BTreeSet<String>,
}

impl Parser {
    fn new(text: &str, mode: Mode) -> Result<Parser, ParseError> {
        let tokens = lex(text)?;
        let names = tokens
            .iter()
            .filter_map(|t| match &t.tok {
                Tok::Ident(s) => Some(s.clone()),
                _ => None,
            })
            .collect();
        Ok(Parser { tokens, pos: 0, mode, scopes: Vec::new(), names })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn here(&self) -> (u32, u32) {
        let t = &self.tokens[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        err_at(line, col, ParseErrorKind::Syntax, message)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {:?}", self.peek())))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected {what}, found {other:?}"))),
        }
    }

    /// Enter a binder scope, freshening duplicates of names already in scope.
    fn bind(&mut self, surface: String) -> String {
        let shadowed = self.scopes.iter().any(|(s, _)| *s == surface);
        let internal = if shadowed {
            let fresh = fresh_name(&surface, &self.names);
            self.names.insert(fresh.clone());
            fresh
        } else {
            surface.clone()
        };
        self.scopes.push((surface, internal.clone()));
        internal
    }

    fn unbind(&mut self, n: usize) {
        for _ in 0..n {
            self.scopes.pop();
        }
    }

    fn resolve(&self, surface: &str) -> String {
        self.scopes
            .iter()
            .rev()
            .find(|(s, _)| s == surface)
            .map(|(_, i)| i.clone())
            .unwrap_or_else(|| surface.to_string())
    }

    // ---- propositions -------------------------------------------------

    fn prop(&mut self) -> Result<Prop, ParseError> {
        let lhs = self.prop_sup()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.prop()?;
            return Ok(Prop::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn prop_sup(&mut self) -> Result<Prop, ParseError> {
        let mut acc = self.prop_or()?;
        while *self.peek() == Tok::SupOp {
            self.bump();
            acc = Prop::sup(acc, self.prop_or()?);
        }
        Ok(acc)
    }

    fn prop_or(&mut self) -> Result<Prop, ParseError> {
        let mut acc = self.prop_and()?;
        while *self.peek() == Tok::OrOp {
            self.bump();
            acc = Prop::or(acc, self.prop_and()?);
        }
        Ok(acc)
    }

    fn prop_and(&mut self) -> Result<Prop, ParseError> {
        let mut acc = self.prop_atom()?;
        while *self.peek() == Tok::AndOp {
            self.bump();
            acc = Prop::and(acc, self.prop_atom()?);
        }
        Ok(acc)
    }

    fn prop_atom(&mut self) -> Result<Prop, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "T" => {
                self.bump();
                Ok(Prop::Top)
            }
            Tok::Ident(s) if s == "F" => {
                self.bump();
                Ok(Prop::Bottom)
            }
            Tok::LParen => {
                self.bump();
                let p = self.prop()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            other => Err(self.error(format!("expected a proposition, found {other:?}"))),
        }
    }

    // ---- scalar expressions -------------------------------------------

    fn scalar_expr(&mut self) -> Result<(ScalarExpr, LitShape), ParseError> {
        let (mut acc, mut shape) = self.scalar_term()?;
        loop {
            let sub = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok((acc, shape)),
            };
            self.bump();
            let (rhs, rhs_shape) = self.scalar_term()?;
            // `a+bi` / `a-bi` shapes are rebuilt componentwise so the
            // printer's output reparses to the bit-identical scalar.
            (acc, shape) = match (&acc, shape, &rhs, rhs_shape) {
                (ScalarExpr::Lit(a), LitShape::RealLit, ScalarExpr::Lit(b), LitShape::ImagLit) => {
                    let im = if sub { -b.im } else { b.im };
                    (ScalarExpr::Lit(Scalar::new(a.re, im)), LitShape::Other)
                }
                _ => {
                    let node = if sub {
                        ScalarExpr::Sub(Box::new(acc), Box::new(rhs))
                    } else {
                        ScalarExpr::Add(Box::new(acc), Box::new(rhs))
                    };
                    (node, LitShape::Other)
                }
            };
        }
    }

    fn scalar_term(&mut self) -> Result<(ScalarExpr, LitShape), ParseError> {
        let (mut acc, mut shape) = self.scalar_factor()?;
        loop {
            let div = match self.peek() {
                Tok::Star => false,
                Tok::Slash => true,
                _ => return Ok((acc, shape)),
            };
            self.bump();
            let (rhs, _) = self.scalar_factor()?;
            acc = if div {
                ScalarExpr::Div(Box::new(acc), Box::new(rhs))
            } else {
                ScalarExpr::Mul(Box::new(acc), Box::new(rhs))
            };
            shape = LitShape::Other;
        }
    }

    fn scalar_factor(&mut self) -> Result<(ScalarExpr, LitShape), ParseError> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                let (inner, shape) = self.scalar_factor()?;
                // A sign on a bare literal flips that component exactly.
                let negated = match (&inner, shape) {
                    (ScalarExpr::Lit(s), LitShape::RealLit) => {
                        (ScalarExpr::Lit(Scalar::new(-s.re, s.im)), LitShape::RealLit)
                    }
                    (ScalarExpr::Lit(s), LitShape::ImagLit) => {
                        (ScalarExpr::Lit(Scalar::new(s.re, -s.im)), LitShape::ImagLit)
                    }
                    _ => (ScalarExpr::Neg(Box::new(inner)), LitShape::Other),
                };
                Ok(negated)
            }
            Tok::Number(n) => {
                self.bump();
                if matches!(self.peek(), Tok::Ident(s) if s == "i") {
                    self.bump();
                    Ok((ScalarExpr::Lit(Scalar::new(0.0, n)), LitShape::ImagLit))
                } else {
                    Ok((ScalarExpr::Lit(Scalar::new(n, 0.0)), LitShape::RealLit))
                }
            }
            Tok::Ident(s) if s == "i" => {
                self.bump();
                Ok((ScalarExpr::Lit(Scalar::new(0.0, 1.0)), LitShape::ImagLit))
            }
            Tok::Ident(s) if s == "sqrt" => {
                self.bump();
                self.expect(Tok::LParen, "`(` after sqrt")?;
                let (inner, _) = self.scalar_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok((ScalarExpr::Sqrt(Box::new(inner)), LitShape::Other))
            }
            Tok::LParen => {
                self.bump();
                let (inner, _) = self.scalar_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok((inner, LitShape::Other))
            }
            other => Err(self.error(format!("expected a scalar, found {other:?}"))),
        }
    }

    // ---- terms ---------------------------------------------------------

    fn term(&mut self) -> Result<Term, ParseError> {
        let first_loc = self.here();
        let first = self.operand()?;
        if !matches!(self.peek(), Tok::Plus | Tok::ParPar) {
            return match first {
                (None, t) => Ok(t),
                (Some(_), _) => Err(err_at(
                    first_loc.0,
                    first_loc.1,
                    ParseErrorKind::Syntax,
                    "a weighted proof must be an operand of + or ||",
                )),
            };
        }
        let mut lhs = self.to_weighted(first, first_loc)?;
        let mut result;
        loop {
            let sum = matches!(self.peek(), Tok::Plus);
            self.bump();
            let loc = self.here();
            let rhs = self.operand()?;
            let rhs = self.to_weighted(rhs, loc)?;
            result = if sum { Term::Sum(lhs, rhs) } else { Term::Par(lhs, rhs) };
            if matches!(self.peek(), Tok::Plus | Tok::ParPar) {
                lhs = Weighted::unit(result);
            } else {
                return Ok(result);
            }
        }
    }

    fn to_weighted(
        &self,
        (weight, body): (Option<Scalar>, Term),
        loc: (u32, u32),
    ) -> Result<Weighted, ParseError> {
        match weight {
            Some(_) if self.mode == Mode::Plain => Err(err_at(
                loc.0,
                loc.1,
                ParseErrorKind::Mode,
                "weights are not allowed in plain mode",
            )),
            Some(w) => Ok(Weighted::new(w, body)),
            None => Ok(Weighted::unit(body)),
        }
    }

    /// One operand of `+`/`||`: an optional weight prefix and a body.
    fn operand(&mut self) -> Result<(Option<Scalar>, Term), ParseError> {
        let snapshot = self.pos;
        let weight_loc = self.here();
        if let Ok((expr, _)) = self.scalar_expr() {
            if *self.peek() == Tok::Dot {
                self.bump();
                let value = eval_scalar(&expr).map_err(|_| {
                    err_at(
                        weight_loc.0,
                        weight_loc.1,
                        ParseErrorKind::DivisionByZero,
                        "division by zero in weight",
                    )
                })?;
                let body = self.app_level()?;
                return Ok((Some(value), body));
            }
        }
        self.pos = snapshot;
        if *self.peek() == Tok::Backslash {
            return Ok((None, self.lambda()?));
        }
        Ok((None, self.app_level()?))
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::Backslash, "`\\`")?;
        let surface = self.expect_ident("a binder name")?;
        self.expect(Tok::Colon, "`:` after the binder")?;
        let domain = self.prop()?;
        self.expect(Tok::Dot, "`.` after the binder type")?;
        let binder = self.bind(surface);
        let body = self.term()?;
        self.unbind(1);
        Ok(Term::lam(binder, domain, body))
    }

    fn app_level(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            acc = Term::app(acc, arg);
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Star | Tok::LParen | Tok::LAngle => true,
            // `def` is reserved so that a definition body stops before the
            // next definition.
            Tok::Ident(s) => s != "def",
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Star => {
                self.bump();
                Ok(Term::Star)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::LAngle => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma, "`,` in a pair")?;
                let b = self.term()?;
                self.expect(Tok::RAngle, "`>`")?;
                Ok(Term::pair(a, b))
            }
            Tok::Ident(name) => match name.as_str() {
                "def" => Err(self.error("`def` is a reserved word")),
                "inl" | "inr" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let body = self.term()?;
                    self.expect(Tok::Comma, "`,` before the absent side")?;
                    let side = self.prop()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(if name == "inl" { Term::inl(body, side) } else { Term::inr(body, side) })
                }
                "absurd" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let scrutinee = self.term()?;
                    self.expect(Tok::Comma, "`,` before the target type")?;
                    let target = self.prop()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term::elim_bot(scrutinee, target))
                }
                "case_and" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let scrutinee = self.term()?;
                    self.expect(Tok::Comma, "`,`")?;
                    self.expect(Tok::LBracket, "`[`")?;
                    let x = self.expect_ident("a binder")?;
                    self.expect(Tok::Comma, "`,`")?;
                    let y = self.expect_ident("a binder")?;
                    self.expect(Tok::RBracket, "`]`")?;
                    let x = self.bind(x);
                    let y = self.bind(y);
                    let body = self.term()?;
                    self.unbind(2);
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term::elim_and(scrutinee, x, y, body))
                }
                "case_or" | "case_sup" | "case_sup_par" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let scrutinee = self.term()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let (x, left) = self.branch()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let (y, right) = self.branch()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(match name.as_str() {
                        "case_or" => Term::elim_or(scrutinee, x, left, y, right),
                        "case_sup" => Term::elim_sup(scrutinee, x, left, y, right),
                        _ => Term::elim_sup_par(scrutinee, x, left, y, right),
                    })
                }
                _ => {
                    self.bump();
                    Ok(Term::Var(self.resolve(&name)))
                }
            },
            other => Err(self.error(format!("expected a term, found {other:?}"))),
        }
    }

    fn branch(&mut self) -> Result<(String, Term), ParseError> {
        self.expect(Tok::LBracket, "`[`")?;
        let binder = self.expect_ident("a binder")?;
        self.expect(Tok::RBracket, "`]`")?;
        let binder = self.bind(binder);
        let body = self.term()?;
        self.unbind(1);
        Ok((binder, body))
    }
}

/// Parse one term in the given mode.
pub fn parse_term(text: &str, mode: Mode) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, mode)?;
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected trailing input: {:?}", p.peek())));
    }
    Ok(t)
}

/// Parse one proposition.
pub fn parse_prop(text: &str) -> Result<Prop, ParseError> {
    let mut p = Parser::new(text, Mode::Scalar)?;
    let prop = p.prop()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected trailing input: {:?}", p.peek())));
    }
    Ok(prop)
}

/// A parsed `.sup` file: an optional mode pragma and named definitions with
/// earlier names already inlined into later bodies.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub mode: Mode,
    pub defs: Vec<NamedDef>,
}

impl SourceFile {
    pub fn def(&self, name: &str) -> Option<&NamedDef> {
        self.defs.iter().find(|d| d.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FileError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("definition `{def}` does not check: {error}")]
    Type { def: String, error: TypeError },
}

/// Parse a definition file without typechecking it.
pub fn parse_file(text: &str) -> Result<SourceFile, ParseError> {
    let mut p = Parser::new(text, Mode::Scalar)?;
    let mut mode = Mode::Scalar;
    if *p.peek() == Tok::Hash {
        p.bump();
        let word = p.expect_ident("`mode`")?;
        if word != "mode" {
            return Err(p.error("expected `#mode plain` or `#mode scalar`"));
        }
        mode = match p.expect_ident("`plain` or `scalar`")?.as_str() {
            "plain" => Mode::Plain,
            "scalar" => Mode::Scalar,
            other => return Err(p.error(format!("unknown mode `{other}`"))),
        };
        p.mode = mode;
    }
    const RESERVED: [&str; 12] = [
        "def", "inl", "inr", "absurd", "case_and", "case_or", "case_sup", "case_sup_par",
        "sqrt", "i", "T", "F",
    ];
    let mut defs: Vec<NamedDef> = Vec::new();
    let mut env: HashMap<String, Term> = HashMap::new();
    while *p.peek() != Tok::Eof {
        let kw = p.expect_ident("`def`")?;
        if kw != "def" {
            return Err(p.error(format!("expected `def`, found `{kw}`")));
        }
        let name = p.expect_ident("a definition name")?;
        if RESERVED.contains(&name.as_str()) {
            return Err(p.error(format!("`{name}` is reserved and cannot be defined")));
        }
        if env.contains_key(&name) {
            return Err(p.error(format!("`{name}` is defined twice")));
        }
        p.expect(Tok::Colon, "`:`")?;
        let prop = p.prop()?;
        p.expect(Tok::Equals, "`=`")?;
        let body = p.term()?;
        let body = substitute(&body, &env);
        env.insert(name.clone(), body.clone());
        defs.push(NamedDef { name, prop, body });
    }
    Ok(SourceFile { mode, defs })
}

/// Parse a definition file and typecheck every definition against its
/// declared proposition.
pub fn load_file(text: &str) -> Result<SourceFile, FileError> {
    let file = parse_file(text)?;
    let ctx = Context::new();
    for def in &file.defs {
        check(&ctx, &def.body, &def.prop)
            .map_err(|error| FileError::Type { def: def.name.clone(), error })?;
    }
    Ok(file)
}
