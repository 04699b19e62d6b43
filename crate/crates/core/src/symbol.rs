//! Symbols and alphabets.
//!
//! Symbols are interned per [`Alphabet`]; a machine stores small integer ids
//! and keeps a shared handle to the alphabet that gives them meaning. Id 0 is
//! reserved for the empty string on either tape.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Interned symbol id. `EPS` (0) is the empty string.
pub type Sym = u16;

pub const EPS: Sym = 0;

/// The marker symbol inserted at constraint violation sites.
pub const MARKER: &str = "@";

/// Bracket atoms of the syllable-structure grammars.
pub const BRACKETS: [&str; 5] = ["O[", "N[", "D[", "X[", "]"];

/// A finite, ordered set of atomic symbols.
#[derive(Clone)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Sym>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names = vec![String::from("<eps>")];
        let mut index = HashMap::new();
        for s in symbols {
            let s = s.into();
            if s.is_empty() || s == "<eps>" || s.chars().any(char::is_whitespace) {
                return Err(Error::BadSymbol(s));
            }
            if index.contains_key(&s) {
                continue;
            }
            if names.len() > Sym::MAX as usize {
                return Err(Error::BadSymbol(s));
            }
            index.insert(s.clone(), names.len() as Sym);
            names.push(s);
        }
        if names.len() == 1 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Self { names, index })
    }

    /// 26 lowercase letters, the five bracket atoms, `@`, `0` and `1`.
    pub fn default_sigma() -> Self {
        let mut syms: Vec<String> = ('a'..='z').map(String::from).collect();
        syms.extend(BRACKETS.iter().map(|s| s.to_string()));
        syms.push(MARKER.into());
        syms.push("0".into());
        syms.push("1".into());
        Self::new(syms).expect("default alphabet is well formed")
    }

    /// Parses a comma separated symbol list, as given to `--sigma`.
    pub fn parse_list(list: &str) -> Result<Self> {
        Self::new(list.split(',').map(str::trim).filter(|s| !s.is_empty()))
    }

    /// Number of real symbols (excluding epsilon).
    pub fn len(&self) -> usize {
        self.names.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All real symbol ids in declaration order.
    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        1..self.names.len() as Sym
    }

    pub fn id(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<Sym> {
        self.id(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn name(&self, sym: Sym) -> &str {
        &self.names[sym as usize]
    }

    pub fn marker(&self) -> Option<Sym> {
        self.id(MARKER)
    }

    /// Splits `text` into symbols by greedy longest match. Whitespace
    /// separates tokens and is otherwise ignored.
    pub fn tokenize(&self, text: &str) -> Result<Vec<Sym>> {
        let max_len = self.names.iter().skip(1).map(|n| n.len()).max().unwrap_or(1);
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let c = rest.chars().next().unwrap();
            if c.is_whitespace() {
                rest = &rest[c.len_utf8()..];
                continue;
            }
            let mut found = None;
            let mut len = max_len.min(rest.len());
            while len > 0 {
                if rest.is_char_boundary(len) {
                    if let Some(&s) = self.index.get(&rest[..len]) {
                        found = Some((s, len));
                        break;
                    }
                }
                len -= 1;
            }
            match found {
                Some((s, n)) => {
                    out.push(s);
                    rest = &rest[n..];
                }
                None => return Err(Error::UnknownSymbol(c.to_string())),
            }
        }
        Ok(out)
    }

    /// Concatenates symbol names, skipping epsilons.
    pub fn render(&self, syms: &[Sym]) -> String {
        syms.iter()
            .filter(|&&s| s != EPS)
            .map(|&s| self.name(s))
            .collect()
    }

    /// Same alphabet, allowing a cheap pointer check first.
    pub fn same(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
        Arc::ptr_eq(a, b) || a.names == b.names
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter().skip(1)).finish()
    }
}
