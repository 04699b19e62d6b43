//! Lexer and recursive-descent parser for expressions and grammar files.
//!
//! Binding strength, loosest first: `o`, `lc`, `oo` (left associative,
//! equal precedence); `x` (also written `:`); `-` and `&`; prefix `~` and
//! `$`; postfix `*`, `+`, `^`. The letters `x` and `o` are operators only
//! where an operator can occur, so `{a,e,o,u,i}` is a plain union.

use super::ast::Expr;
use super::macros::MacroDef;
use crate::error::{Error, Result};
use crate::ot::Method;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Star,
    Plus,
    Caret,
    Minus,
    Tilde,
    Dollar,
    Amp,
    Question,
    Colon,
    ColonColon,
    Dot,
    Semi,
    Eq,
    GtGt,
    At,
    Ident(String),
    Quoted(String),
    Int(u32),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| Error::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut adv = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '*' => Tok::Star,
            '+' => Tok::Plus,
            '^' => Tok::Caret,
            '-' => Tok::Minus,
            '~' => Tok::Tilde,
            '$' => Tok::Dollar,
            '&' => Tok::Amp,
            '?' => Tok::Question,
            '.' => Tok::Dot,
            ';' => Tok::Semi,
            '=' => Tok::Eq,
            '@' => Tok::At,
            ':' => {
                if chars.get(i + 1) == Some(&':') {
                    adv = 2;
                    Tok::ColonColon
                } else {
                    Tok::Colon
                }
            }
            '>' => {
                if chars.get(i + 1) == Some(&'>') {
                    adv = 2;
                    Tok::GtGt
                } else {
                    return Err(err(tl, tc, "expected `>>`".into()));
                }
            }
            '\'' => {
                let mut j = i + 1;
                let mut s = String::new();
                while j < chars.len() && chars[j] != '\'' && chars[j] != '\n' {
                    s.push(chars[j]);
                    j += 1;
                }
                if j >= chars.len() || chars[j] != '\'' {
                    return Err(err(tl, tc, "unterminated quoted atom".into()));
                }
                if s.is_empty() {
                    return Err(err(tl, tc, "empty quoted atom".into()));
                }
                adv = j + 1 - i;
                Tok::Quoted(s)
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                adv = j - i;
                Tok::Int(text.parse().map_err(|_| err(tl, tc, format!("integer too large: {text}")))?)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                adv = j - i;
                Tok::Ident(chars[i..j].iter().collect())
            }
            other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, line: tl, col: tc });
        i += adv;
        col += adv;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// One entry of a `ranking = ...;` statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankSpec {
    pub name: String,
    pub method: Option<Method>,
    pub precision: Option<u32>,
}

/// Contents of a grammar file.
#[derive(Clone, Debug, Default)]
pub struct GrammarFile {
    pub macros: Vec<MacroDef>,
    pub gen: Option<Expr>,
    pub ranking: Option<Vec<RankSpec>>,
    /// Units deleted and freely reinserted by the matching filter.
    pub erase: Option<Expr>,
    /// Symbols that may only occur inside erasable units.
    pub erase_guard: Option<Expr>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Self { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {:?}", self.peek()))
        }
    }

    fn is_op_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.cross()?;
        loop {
            if self.is_op_ident("o") {
                self.bump();
                let rhs = self.cross()?;
                lhs = Expr::Compose(Box::new(lhs), Box::new(rhs));
            } else if self.is_op_ident("lc") {
                self.bump();
                let rhs = self.cross()?;
                lhs = Expr::LenientCompose(Box::new(lhs), Box::new(rhs));
            } else if self.is_op_ident("oo") {
                self.bump();
                let precision = if let (Tok::Int(n), Tok::ColonColon) = (self.peek().clone(), self.peek_at(1)) {
                    self.bump();
                    self.bump();
                    Some(n)
                } else {
                    None
                };
                let constraint = self.name()?;
                lhs = Expr::Optimality { cands: Box::new(lhs), constraint, precision };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.bump() {
            Tok::Ident(s) | Tok::Quoted(s) => Ok(s),
            Tok::Int(n) => Ok(n.to_string()),
            Tok::At => Ok("@".into()),
            _ => {
                self.pos -= 1;
                self.error("expected a name")
            }
        }
    }

    fn cross(&mut self) -> Result<Expr> {
        let mut lhs = self.diff()?;
        while self.is_op_ident("x") || *self.peek() == Tok::Colon {
            self.bump();
            let rhs = self.diff()?;
            lhs = Expr::Cross(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn diff(&mut self) -> Result<Expr> {
        let mut lhs = self.prefix()?;
        loop {
            match self.peek() {
                Tok::Minus => {
                    self.bump();
                    let rhs = self.prefix()?;
                    lhs = Expr::Diff(Box::new(lhs), Box::new(rhs));
                }
                Tok::Amp => {
                    self.bump();
                    let rhs = self.prefix()?;
                    lhs = Expr::Intersect(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn prefix(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Expr::Complement(Box::new(self.prefix()?)))
            }
            Tok::Dollar => {
                self.bump();
                Ok(Expr::Containment(Box::new(self.prefix()?)))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        loop {
            e = match self.peek() {
                Tok::Star => Expr::Star(Box::new(e)),
                Tok::Plus => Expr::Plus(Box::new(e)),
                Tok::Caret => Expr::Option(Box::new(e)),
                _ => return Ok(e),
            };
            self.bump();
        }
    }

    fn items(&mut self, close: Tok, what: &str) -> Result<Vec<Expr>> {
        let mut items = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            items.push(self.expr()?);
        }
        self.expect(close, what)?;
        Ok(items)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::LBrack => {
                self.bump();
                if *self.peek() == Tok::RBrack {
                    self.bump();
                    return Ok(Expr::EmptyString);
                }
                Ok(Expr::Seq(self.items(Tok::RBrack, "`]`")?))
            }
            Tok::LBrace => {
                self.bump();
                if *self.peek() == Tok::RBrace {
                    self.bump();
                    return Ok(Expr::EmptyLang);
                }
                Ok(Expr::Union(self.items(Tok::RBrace, "`}`")?))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Question => {
                self.bump();
                Ok(Expr::Any)
            }
            Tok::At => {
                self.bump();
                Ok(Expr::atom("@"))
            }
            Tok::Quoted(s) => {
                self.bump();
                Ok(Expr::Atom(s))
            }
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Atom(n.to_string()))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let args = self.items(Tok::RParen, "`)`")?;
                    return Ok(match (name.as_str(), args.len()) {
                        ("domain", 1) => Expr::Domain(Box::new(args.into_iter().next().unwrap())),
                        ("range", 1) => Expr::Range(Box::new(args.into_iter().next().unwrap())),
                        ("identity", 1) => Expr::Identity(Box::new(args.into_iter().next().unwrap())),
                        ("inverse", 1) => Expr::Inverse(Box::new(args.into_iter().next().unwrap())),
                        _ => Expr::Call(name, args),
                    });
                }
                if name.starts_with(|c: char| c.is_ascii_uppercase()) {
                    Ok(Expr::Var(name))
                } else if name.len() == 1 {
                    Ok(Expr::Atom(name))
                } else {
                    Ok(Expr::Call(name, Vec::new()))
                }
            }
            other => self.error(format!("expected an expression, found {other:?}")),
        }
    }

    fn head(&mut self) -> Result<(String, Vec<Expr>)> {
        let name = match self.bump() {
            Tok::Ident(s) | Tok::Quoted(s) => s,
            _ => {
                self.pos -= 1;
                return self.error("expected a macro name");
            }
        };
        let mut params = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            loop {
                params.push(self.head_param()?);
                match self.bump() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected `,` or `)` in macro head");
                    }
                }
            }
        }
        Ok((name, params))
    }

    fn head_param(&mut self) -> Result<Expr> {
        match self.bump() {
            Tok::Ident(s) if s.starts_with(|c: char| c.is_ascii_uppercase()) => Ok(Expr::Var(s)),
            Tok::Ident(s) if s.len() == 1 => Ok(Expr::Atom(s)),
            Tok::Ident(s) => Ok(Expr::Call(s, Vec::new())),
            Tok::Quoted(s) => Ok(Expr::Atom(s)),
            Tok::Int(n) => Ok(Expr::Atom(n.to_string())),
            Tok::At => Ok(Expr::atom("@")),
            _ => {
                self.pos -= 1;
                self.error("macro parameters must be variables or atoms")
            }
        }
    }

    fn rank_item(&mut self) -> Result<RankSpec> {
        let name = self.name()?;
        let mut spec = RankSpec { name, method: None, precision: None };
        if *self.peek() == Tok::Colon {
            self.bump();
            let m = self.name()?;
            spec.method = Some(m.parse().or_else(|_| self.error(format!("unknown method `{m}`")))?);
            if *self.peek() == Tok::Colon {
                self.bump();
                match self.bump() {
                    Tok::Int(n) => spec.precision = Some(n),
                    _ => {
                        self.pos -= 1;
                        return self.error("expected a precision");
                    }
                }
            }
        }
        Ok(spec)
    }

    fn file(&mut self) -> Result<GrammarFile> {
        let mut g = GrammarFile::default();
        while *self.peek() != Tok::Eof {
            let kw = match self.peek() {
                Tok::Ident(s) => s.clone(),
                other => return self.error(format!("expected a statement, found {other:?}")),
            };
            self.bump();
            match kw.as_str() {
                "macro" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let (name, params) = self.head()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let body = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    self.expect(Tok::Dot, "`.`")?;
                    g.macros.push(MacroDef { name, params, body });
                }
                "gen" | "erase" | "erase_guard" => {
                    self.expect(Tok::Eq, "`=`")?;
                    let e = self.expr()?;
                    self.expect(Tok::Semi, "`;`")?;
                    match kw.as_str() {
                        "gen" => g.gen = Some(e),
                        "erase" => g.erase = Some(e),
                        _ => g.erase_guard = Some(e),
                    }
                }
                "ranking" => {
                    self.expect(Tok::Eq, "`=`")?;
                    let mut items = vec![self.rank_item()?];
                    while *self.peek() == Tok::GtGt {
                        self.bump();
                        items.push(self.rank_item()?);
                    }
                    self.expect(Tok::Semi, "`;`")?;
                    g.ranking = Some(items);
                }
                other => {
                    self.pos -= 1;
                    return self.error(format!("unknown statement `{other}`"));
                }
            }
        }
        Ok(g)
    }
}

/// Parses a single expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {:?} after expression", p.peek()));
    }
    Ok(e)
}

/// Parses a grammar file: `macro(Head, Body).` clauses and `gen`,
/// `ranking`, `erase`, `erase_guard` sections.
pub fn parse_file(text: &str) -> Result<GrammarFile> {
    Parser::new(text)?.file()
}

/// Parses a ranking such as `have_ons >> parse:match:1`.
pub fn parse_ranking(text: &str) -> Result<Vec<RankSpec>> {
    let mut p = Parser::new(text)?;
    let mut items = vec![p.rank_item()?];
    while *p.peek() == Tok::GtGt {
        p.bump();
        items.push(p.rank_item()?);
    }
    if *p.peek() != Tok::Eof {
        return p.error("unexpected input after ranking");
    }
    Ok(items)
}
