//! Macro tables and substitutional expansion.
//!
//! A macro may have several clauses. A call picks the first clause of the
//! right arity whose head parameters accept the arguments: a variable
//! accepts anything, an atom or bare name accepts an argument with the same
//! name. Arguments are matched before expansion and substituted after.

use std::collections::HashMap;
use std::rc::Rc;

use super::ast::Expr;
use super::parser::parse_file;
use crate::error::{Error, Result};

/// Names left as calls in expanded expressions and handled by the compiler.
pub const BUILTINS: &[(&str, usize)] = &[("replace", 3), ("replace", 1), ("ignore", 2), ("intro_each_pos", 1)];

const PRELUDE: &str = "\
macro(priority_union(Q,R), {Q, ~domain(Q) o R}).
macro(lenient_composition(S,C), priority_union(S o C, S)).
";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacroDef {
    pub name: String,
    pub params: Vec<Expr>,
    pub body: Expr,
}

#[derive(Clone, Debug)]
pub struct MacroEnv {
    clauses: HashMap<String, Vec<MacroDef>>,
}

impl Default for MacroEnv {
    fn default() -> Self {
        Self::new()
    }
}

/// An argument as written, with the scope it must be expanded in.
struct Binding {
    raw: Expr,
    frame: Frame,
    stack: Vec<String>,
}

type Frame = Rc<HashMap<String, Rc<Binding>>>;

impl MacroEnv {
    /// A table holding the prelude (`priority_union`, `lenient_composition`).
    pub fn new() -> Self {
        let mut env = Self::empty();
        for def in parse_file(PRELUDE).expect("prelude parses").macros {
            env.define(def);
        }
        env
    }

    pub fn empty() -> Self {
        Self { clauses: HashMap::new() }
    }

    /// Appends a clause. Earlier clauses take priority.
    pub fn define(&mut self, def: MacroDef) {
        self.clauses.entry(def.name.clone()).or_default().push(def);
    }

    pub fn load(&mut self, text: &str) -> Result<()> {
        for def in parse_file(text)?.macros {
            self.define(def);
        }
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.clauses.contains_key(name)
    }

    pub fn clauses(&self, name: &str) -> &[MacroDef] {
        self.clauses.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Expands every macro call. Builtins stay as calls with expanded
    /// arguments; constraint names after `oo` are left alone.
    pub fn expand(&self, e: &Expr) -> Result<Expr> {
        self.go(e, &Frame::default(), &mut Vec::new())
    }

    fn go(&self, e: &Expr, frame: &Frame, stack: &mut Vec<String>) -> Result<Expr> {
        let b = |x: &Expr, stack: &mut Vec<String>| self.go(x, frame, stack).map(Box::new);
        Ok(match e {
            Expr::EmptyString | Expr::EmptyLang | Expr::Atom(_) | Expr::Any => e.clone(),
            Expr::Var(v) => match frame.get(v) {
                Some(binding) => self.go(&binding.raw, &binding.frame, &mut binding.stack.clone())?,
                None => return Err(Error::UnboundVariable(v.clone())),
            },
            Expr::Seq(items) => Expr::Seq(items.iter().map(|x| self.go(x, frame, stack)).collect::<Result<_>>()?),
            Expr::Union(items) => Expr::Union(items.iter().map(|x| self.go(x, frame, stack)).collect::<Result<_>>()?),
            Expr::Star(a) => Expr::Star(b(a, stack)?),
            Expr::Plus(a) => Expr::Plus(b(a, stack)?),
            Expr::Option(a) => Expr::Option(b(a, stack)?),
            Expr::Complement(a) => Expr::Complement(b(a, stack)?),
            Expr::Containment(a) => Expr::Containment(b(a, stack)?),
            Expr::Domain(a) => Expr::Domain(b(a, stack)?),
            Expr::Range(a) => Expr::Range(b(a, stack)?),
            Expr::Identity(a) => Expr::Identity(b(a, stack)?),
            Expr::Inverse(a) => Expr::Inverse(b(a, stack)?),
            Expr::Diff(x, y) => Expr::Diff(b(x, stack)?, b(y, stack)?),
            Expr::Intersect(x, y) => Expr::Intersect(b(x, stack)?, b(y, stack)?),
            Expr::Cross(x, y) => Expr::Cross(b(x, stack)?, b(y, stack)?),
            Expr::Compose(x, y) => Expr::Compose(b(x, stack)?, b(y, stack)?),
            Expr::LenientCompose(x, y) => Expr::LenientCompose(b(x, stack)?, b(y, stack)?),
            Expr::Optimality { cands, constraint, precision } => Expr::Optimality {
                cands: b(cands, stack)?,
                constraint: constraint.clone(),
                precision: *precision,
            },
            Expr::Call(name, args) => self.call(name, args, frame, stack)?,
        })
    }

    fn call(&self, name: &str, args: &[Expr], frame: &Frame, stack: &mut Vec<String>) -> Result<Expr> {
        let Some(clauses) = self.clauses.get(name) else {
            if BUILTINS.contains(&(name, args.len())) {
                let args = args.iter().map(|a| self.go(a, frame, stack)).collect::<Result<_>>()?;
                return Ok(Expr::Call(name.to_string(), args));
            }
            if BUILTINS.iter().any(|&(n, _)| n == name) {
                return Err(Error::Arity { name: name.to_string(), found: args.len() });
            }
            return Err(Error::UnknownMacro(name.to_string()));
        };
        if stack.iter().any(|s| s == name) {
            return Err(Error::RecursiveMacro(name.to_string()));
        }
        let bound: Vec<Rc<Binding>> = args
            .iter()
            .map(|a| match a {
                Expr::Var(v) if frame.contains_key(v) => Rc::clone(&frame[v]),
                _ => Rc::new(Binding { raw: a.clone(), frame: Rc::clone(frame), stack: stack.clone() }),
            })
            .collect();
        let same_arity: Vec<&MacroDef> = clauses.iter().filter(|d| d.params.len() == args.len()).collect();
        if same_arity.is_empty() {
            return Err(Error::Arity { name: name.to_string(), found: args.len() });
        }
        let def = same_arity
            .into_iter()
            .find(|d| d.params.iter().zip(&bound).all(|(p, a)| accepts(p, &a.raw)))
            .ok_or_else(|| Error::NoClause(name.to_string()))?;

        let mut bindings = HashMap::new();
        for (p, b) in def.params.iter().zip(bound) {
            if let Expr::Var(v) = p {
                bindings.insert(v.clone(), b);
            }
        }
        stack.push(name.to_string());
        let out = self.go(&def.body, &Rc::new(bindings), stack);
        stack.pop();
        out
    }
}

fn accepts(param: &Expr, arg: &Expr) -> bool {
    match param {
        Expr::Var(_) => true,
        _ => param.name().is_some() && param.name() == arg.name(),
    }
}
