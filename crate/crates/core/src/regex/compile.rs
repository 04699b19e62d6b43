use std::collections::HashMap;
use std::sync::Arc;

use super::ast::Expr;
use super::macros::MacroEnv;
use super::parser::parse_expr;
use crate::determinize::minimize;
use crate::error::{Error, Result};
use crate::fsm::Fsm;
use crate::ops;
use crate::ot::{self, Erasable, Method};
use crate::rewrite;
use crate::symbol::Alphabet;

/// Compiles expressions to machines over a fixed alphabet.
///
/// Intermediate results are minimized and memoized per subexpression.
/// `oo` inside an expression uses the `mark_violation(name)` macro of the
/// environment and the compiler's method for that constraint.
pub struct Compiler {
    sigma: Arc<Alphabet>,
    env: MacroEnv,
    default_method: Method,
    methods: HashMap<String, Method>,
    erasable: Erasable,
    memo: HashMap<Expr, Fsm>,
}

impl Compiler {
    pub fn new(sigma: &Arc<Alphabet>) -> Self {
        Self::with_env(sigma, MacroEnv::new())
    }

    pub fn with_env(sigma: &Arc<Alphabet>, env: MacroEnv) -> Self {
        Self {
            sigma: Arc::clone(sigma),
            env,
            default_method: Method::Counting,
            methods: HashMap::new(),
            erasable: Erasable::brackets(sigma),
            memo: HashMap::new(),
        }
    }

    pub fn sigma(&self) -> &Arc<Alphabet> {
        &self.sigma
    }

    pub fn env(&self) -> &MacroEnv {
        &self.env
    }

    pub fn env_mut(&mut self) -> &mut MacroEnv {
        self.memo.clear();
        &mut self.env
    }

    pub fn set_default_method(&mut self, m: Method) {
        self.memo.clear();
        self.default_method = m;
    }

    pub fn set_method(&mut self, constraint: &str, m: Method) {
        self.memo.clear();
        self.methods.insert(constraint.to_string(), m);
    }

    pub fn set_erasable(&mut self, e: Erasable) {
        self.memo.clear();
        self.erasable = e;
    }

    pub fn compile_str(&mut self, text: &str) -> Result<Fsm> {
        self.compile(&parse_expr(text)?)
    }

    /// Expands macros, then compiles.
    pub fn compile(&mut self, e: &Expr) -> Result<Fsm> {
        let e = self.env.expand(e)?;
        self.build(&e)
    }

    fn build(&mut self, e: &Expr) -> Result<Fsm> {
        if let Some(m) = self.memo.get(e) {
            return Ok(m.clone());
        }
        let m = self.build_uncached(e)?;
        let m = match e {
            Expr::Atom(_) | Expr::Any | Expr::EmptyString | Expr::EmptyLang => m,
            _ => minimize(&m),
        };
        self.memo.insert(e.clone(), m.clone());
        Ok(m)
    }

    fn build_uncached(&mut self, e: &Expr) -> Result<Fsm> {
        let sigma = Arc::clone(&self.sigma);
        Ok(match e {
            Expr::EmptyString => Fsm::epsilon(&sigma),
            Expr::EmptyLang => Fsm::empty(&sigma),
            Expr::Atom(name) => Fsm::symbol(&sigma, sigma.lookup(name)?),
            Expr::Any => Fsm::any(&sigma),
            Expr::Var(v) => return Err(Error::UnboundVariable(v.clone())),
            Expr::Seq(items) => {
                let parts = items.iter().map(|x| self.build(x)).collect::<Result<Vec<_>>>()?;
                ops::concat_all(&sigma, &parts)?
            }
            Expr::Union(items) => {
                let parts = items.iter().map(|x| self.build(x)).collect::<Result<Vec<_>>>()?;
                ops::union_all(&sigma, &parts)?
            }
            Expr::Star(a) => ops::star(&self.build(a)?),
            Expr::Plus(a) => ops::plus(&self.build(a)?),
            Expr::Option(a) => ops::option(&self.build(a)?),
            Expr::Complement(a) => ops::complement(&self.build(a)?)?,
            Expr::Containment(a) => ops::containment(&self.build(a)?)?,
            Expr::Domain(a) => ops::domain(&self.build(a)?),
            Expr::Range(a) => ops::range(&self.build(a)?),
            Expr::Identity(a) => ops::identity(&self.build(a)?)?,
            Expr::Inverse(a) => ops::inverse(&self.build(a)?),
            Expr::Diff(a, b) => ops::difference(&self.build(a)?, &self.build(b)?)?,
            Expr::Intersect(a, b) => ops::intersect(&self.build(a)?, &self.build(b)?)?,
            Expr::Cross(a, b) => ops::cross_product(&self.build(a)?, &self.build(b)?)?,
            Expr::Compose(a, b) => ops::compose(&self.build(a)?, &self.build(b)?)?,
            Expr::LenientCompose(a, b) => ot::lenient_compose(&self.build(a)?, &self.build(b)?)?,
            Expr::Optimality { cands, constraint, precision } => {
                let cands = self.build(cands)?;
                let marker = self.marker(constraint)?;
                let precision = precision.unwrap_or(0);
                match self.methods.get(constraint).copied().unwrap_or(self.default_method) {
                    Method::Counting => ot::counting_oo(&cands, &marker, precision)?,
                    m => {
                        let av = ot::AddViolation::new(&sigma, m, &self.erasable)?;
                        ot::matching_oo(&cands, &marker, &av, precision)?
                    }
                }
            }
            Expr::Call(name, args) => match (name.as_str(), args.as_slice()) {
                ("replace", [t]) => {
                    let eps = Fsm::epsilon(&sigma);
                    rewrite::replace(&self.build(t)?, &eps, &eps)?
                }
                ("replace", [t, l, r]) => rewrite::replace(&self.build(t)?, &self.build(l)?, &self.build(r)?)?,
                ("ignore", [a, b]) => rewrite::ignore(&self.build(a)?, &self.build(b)?)?,
                ("intro_each_pos", [a]) => rewrite::intro_each_pos(&self.build(a)?)?,
                _ => return Err(Error::UnknownMacro(name.clone())),
            },
        })
    }

    /// The compiled `mark_violation(name)`.
    pub fn marker(&mut self, name: &str) -> Result<Fsm> {
        let call = Expr::call("mark_violation", vec![ot::constraint_arg(name)]);
        let expanded = match self.env.expand(&call) {
            Ok(e) => e,
            Err(Error::NoClause(_)) | Err(Error::UnknownMacro(_)) => {
                return Err(Error::UnknownConstraint(name.to_string()))
            }
            Err(e) => return Err(e),
        };
        self.build(&expanded)
    }
}
