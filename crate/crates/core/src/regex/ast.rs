use std::fmt;

/// Regular expression over symbols and relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// `[]`
    EmptyString,
    /// `{}`
    EmptyLang,
    /// A single symbol: `a`, `0`, `@`, `'O['`.
    Atom(String),
    /// `?`
    Any,
    /// Macro parameter (identifier starting with an uppercase letter).
    Var(String),
    /// `[E1, ..., En]`
    Seq(Vec<Expr>),
    /// `{E1, ..., En}`
    Union(Vec<Expr>),
    Star(Box<Expr>),
    Plus(Box<Expr>),
    /// `E^`
    Option(Box<Expr>),
    Diff(Box<Expr>, Box<Expr>),
    Complement(Box<Expr>),
    /// `$ E`
    Containment(Box<Expr>),
    Intersect(Box<Expr>, Box<Expr>),
    /// `E1 x E2`
    Cross(Box<Expr>, Box<Expr>),
    /// `E1 o E2`
    Compose(Box<Expr>, Box<Expr>),
    /// `E1 lc E2`
    LenientCompose(Box<Expr>, Box<Expr>),
    /// `Cands oo [Prec ::] Constraint`
    Optimality {
        cands: Box<Expr>,
        constraint: String,
        precision: Option<u32>,
    },
    Domain(Box<Expr>),
    Range(Box<Expr>),
    Identity(Box<Expr>),
    Inverse(Box<Expr>),
    /// Macro call or builtin (`replace`, `ignore`, `intro_each_pos`). A bare
    /// lowercase identifier is a call with no arguments.
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn atom(s: &str) -> Self {
        Expr::Atom(s.to_string())
    }

    pub fn call(name: &str, args: Vec<Expr>) -> Self {
        Expr::Call(name.to_string(), args)
    }

    /// Name of an atom or argument-less call; used for macro head dispatch.
    pub fn name(&self) -> Option<&str> {
        match self {
            Expr::Atom(s) => Some(s),
            Expr::Call(s, args) if args.is_empty() => Some(s),
            _ => None,
        }
    }

    fn level(&self) -> u8 {
        match self {
            Expr::Compose(..) | Expr::LenientCompose(..) | Expr::Optimality { .. } => 1,
            Expr::Cross(..) => 2,
            Expr::Diff(..) | Expr::Intersect(..) => 3,
            Expr::Complement(_) | Expr::Containment(_) => 4,
            Expr::Star(_) | Expr::Plus(_) | Expr::Option(_) => 5,
            _ => 6,
        }
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn write_name(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    let lower = s.starts_with(|c: char| c.is_ascii_lowercase() || c == '_');
    if is_ident(s) && lower {
        write!(f, "{s}")
    } else {
        write!(f, "'{s}'")
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    let bare = s == "@"
        || (s.len() == 1 && s.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit()));
    if bare {
        write!(f, "{s}")
    } else {
        write!(f, "'{s}'")
    }
}

struct Wrapped<'a>(&'a Expr, bool);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn list(f: &mut fmt::Formatter<'_>, open: &str, items: &[Expr], close: &str) -> fmt::Result {
    write!(f, "{open}")?;
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{e}")?;
    }
    write!(f, "{close}")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lvl = self.level();
        let binary = |f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr| {
            write!(f, "{} {} {}", Wrapped(a, a.level() < lvl), op, Wrapped(b, b.level() <= lvl))
        };
        let prefix = |f: &mut fmt::Formatter<'_>, op: &str, a: &Expr| write!(f, "{}{}", op, Wrapped(a, a.level() < lvl));
        let postfix = |f: &mut fmt::Formatter<'_>, a: &Expr, op: &str| write!(f, "{}{}", Wrapped(a, a.level() < lvl), op);
        match self {
            Expr::EmptyString => write!(f, "[]"),
            Expr::EmptyLang => write!(f, "{{}}"),
            Expr::Atom(s) => write_atom(f, s),
            Expr::Any => write!(f, "?"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Seq(items) => list(f, "[", items, "]"),
            Expr::Union(items) => list(f, "{", items, "}"),
            Expr::Star(a) => postfix(f, a, "*"),
            Expr::Plus(a) => postfix(f, a, "+"),
            Expr::Option(a) => postfix(f, a, "^"),
            Expr::Diff(a, b) => binary(f, a, "-", b),
            Expr::Intersect(a, b) => binary(f, a, "&", b),
            Expr::Complement(a) => prefix(f, "~", a),
            Expr::Containment(a) => prefix(f, "$ ", a),
            Expr::Cross(a, b) => binary(f, a, "x", b),
            Expr::Compose(a, b) => binary(f, a, "o", b),
            Expr::LenientCompose(a, b) => binary(f, a, "lc", b),
            Expr::Optimality { cands, constraint, precision } => {
                write!(f, "{} oo ", Wrapped(cands, cands.level() < lvl))?;
                if let Some(p) = precision {
                    write!(f, "{p} :: ")?;
                }
                write_name(f, constraint)
            }
            Expr::Domain(a) => write!(f, "domain({a})"),
            Expr::Range(a) => write!(f, "range({a})"),
            Expr::Identity(a) => write!(f, "identity({a})"),
            Expr::Inverse(a) => write!(f, "inverse({a})"),
            Expr::Call(name, args) => {
                write!(f, "{name}")?;
                if args.is_empty() {
                    Ok(())
                } else {
                    list(f, "(", args, ")")
                }
            }
        }
    }
}
