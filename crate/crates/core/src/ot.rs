//! Optimality Theory on transducers: lenient composition, the counting and
//! matching optimality operators, grammars and a brute-force evaluator.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::apply::apply;
use crate::determinize::minimize;
use crate::error::{Error, Result};
use crate::exactness::is_functional;
use crate::fsm::{Fsm, Label};
use crate::ops;
use crate::regex::{parse_file, Compiler, Expr, MacroEnv};
use crate::symbol::{Alphabet, Sym, BRACKETS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Counting,
    MatchingGlobal,
    MatchingLocal,
}

impl Method {
    pub fn is_matching(self) -> bool {
        self != Method::Counting
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" | "counting" => Ok(Method::Counting),
            "match" | "matching" => Ok(Method::MatchingGlobal),
            "matchlocal" | "match-local" | "matching-local" => Ok(Method::MatchingLocal),
            _ => Err(Error::Grammar(format!("unknown method `{s}` (expected count, match or matchlocal)"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Counting => "count",
            Method::MatchingGlobal => "match",
            Method::MatchingLocal => "matchlocal",
        })
    }
}

/// What the matching filter may strip and reinsert when comparing
/// candidates: strings of `units` are deleted, and symbols in `guard` are
/// only allowed inside such units.
#[derive(Clone, Debug)]
pub struct Erasable {
    pub units: Fsm,
    pub guard: Fsm,
}

impl Erasable {
    /// Single bracket symbols, the syllabification convention.
    pub fn brackets(sigma: &Arc<Alphabet>) -> Self {
        let set = Fsm::symbol_set(sigma, BRACKETS.iter().filter_map(|b| sigma.id(b)));
        Self { units: set.clone(), guard: set }
    }

    pub fn new(units: Fsm, guard: Fsm) -> Result<Self> {
        units.check_sigma(&guard)?;
        units.require_recognizer("erasable units")?;
        guard.require_recognizer("erasable guard")?;
        Ok(Self { units, guard })
    }
}

fn marker_sym(sigma: &Arc<Alphabet>) -> Result<Sym> {
    sigma.marker().ok_or_else(|| Error::UnknownSymbol(crate::symbol::MARKER.into()))
}

/// `{Q, ~domain(Q) o R}`
pub fn priority_union(q: &Fsm, r: &Fsm) -> Result<Fsm> {
    let rest = ops::complement(&minimize(&ops::domain(q)))?;
    ops::union(q, &ops::compose(&rest, r)?)
}

/// `priority_union(S o C, S)`; a recognizer `c` acts as its identity.
pub fn lenient_compose(s: &Fsm, c: &Fsm) -> Result<Fsm> {
    let sc = minimize(&ops::compose(s, c)?);
    priority_union(&sc, s)
}

/// `{@ x [], ? - @}*`
pub fn delete_markers(sigma: &Arc<Alphabet>) -> Result<Fsm> {
    let at = marker_sym(sigma)?;
    let mut m = Fsm::epsilon(sigma);
    for s in sigma.symbols() {
        let label = if s == at { Label::new(at, crate::symbol::EPS) } else { Label::identity(s) };
        m.add_arc(0, label, 0);
    }
    Ok(m)
}

/// Strings with fewer than `k` markers, i.e. `~[$ @, ..., $ @]` with `k`
/// copies. Requires `k >= 1`.
pub fn fewer_markers_than(sigma: &Arc<Alphabet>, k: u32) -> Result<Fsm> {
    let at = marker_sym(sigma)?;
    let mut m = Fsm::epsilon(sigma);
    for i in 0..k {
        let s = if i == 0 { 0 } else { m.add_state() };
        m.set_final(s, true);
    }
    for i in 0..k {
        for sym in sigma.symbols() {
            if sym != at {
                m.add_arc(i, Label::identity(sym), i);
            } else if i + 1 < k {
                m.add_arc(i, Label::identity(sym), i + 1);
            }
        }
    }
    Ok(m)
}

/// Counting optimality: mark, then leniently filter with "fewer than k
/// markers" for k from `precision + 1` down to 1, then delete markers.
pub fn counting_oo(cands: &Fsm, marker: &Fsm, precision: u32) -> Result<Fsm> {
    let sigma = cands.sigma();
    let mut m = minimize(&ops::compose(cands, marker)?);
    for k in (1..=precision + 1).rev() {
        m = minimize(&lenient_compose(&m, &fewer_markers_than(sigma, k)?)?);
    }
    Ok(minimize(&ops::compose(&m, &delete_markers(sigma)?)?))
}

/// The stages of the violation-adding relation: strip erasable material,
/// insert at least one marker, permute markers `precision` times, then
/// reinsert erasable material anywhere.
#[derive(Clone, Debug)]
pub struct AddViolation {
    strip: Fsm,
    one_more: Fsm,
    permute: Fsm,
    redecorate: Fsm,
}

impl AddViolation {
    pub fn new(sigma: &Arc<Alphabet>, method: Method, erasable: &Erasable) -> Result<Self> {
        let at = Fsm::symbol(sigma, marker_sym(sigma)?);
        let any = Fsm::any(sigma);
        let eps = Fsm::epsilon(sigma);
        let free = ops::difference(&any, &erasable.guard)?;
        let strip = ops::star(&ops::union(&ops::cross_product(&erasable.units, &eps)?, &free)?);
        let redecorate = ops::star(&ops::union(&ops::cross_product(&eps, &erasable.units)?, &free)?);
        let ins = ops::cross_product(&eps, &at)?;
        let del = ops::cross_product(&at, &eps)?;
        let any_star = ops::star(&any);

        let one_more = ops::concat(&ops::plus(&ops::concat(&any_star, &ins)?), &any_star)?;
        let permute = match method {
            Method::MatchingLocal => ops::star(&ops::union_all(
                sigma,
                [&any, &ops::concat_all(sigma, [&ins, &any, &del])?, &ops::concat_all(sigma, [&del, &any, &ins])?],
            )?),
            _ => {
                let fwd = ops::concat_all(sigma, [&any_star, &del, &any_star, &ins])?;
                let back = ops::concat_all(sigma, [&any_star, &ins, &any_star, &del])?;
                ops::concat(&ops::star(&ops::union(&fwd, &back)?), &any_star)?
            }
        };
        Ok(Self {
            strip: minimize(&strip),
            one_more: minimize(&one_more),
            permute: minimize(&permute),
            redecorate: minimize(&redecorate),
        })
    }

    /// The whole relation as one transducer.
    pub fn transducer(&self, precision: u32) -> Result<Fsm> {
        let mut m = minimize(&ops::compose(&self.strip, &self.one_more)?);
        for _ in 0..precision {
            m = minimize(&ops::compose(&m, &self.permute)?);
        }
        Ok(minimize(&ops::compose(&m, &self.redecorate)?))
    }

    /// Image of a language under the relation, computed stage by stage on
    /// recognizers. Equal to `range(lang o transducer(precision))` but
    /// avoids the large transducer that repeated permutation produces.
    pub fn image(&self, lang: &Fsm, precision: u32) -> Result<Fsm> {
        let step = |l: &Fsm, t: &Fsm| -> Result<Fsm> { Ok(minimize(&ops::range(&ops::compose(l, t)?))) };
        let mut l = step(lang, &self.strip)?;
        l = step(&l, &self.one_more)?;
        for _ in 0..precision {
            l = step(&l, &self.permute)?;
        }
        step(&l, &self.redecorate)
    }
}

/// Relation from a marked candidate to every string with at least one more
/// marker, allowing `precision` permutation steps and arbitrary
/// redecoration with erasable material.
pub fn add_violation(sigma: &Arc<Alphabet>, precision: u32, method: Method, erasable: &Erasable) -> Result<Fsm> {
    AddViolation::new(sigma, method, erasable)?.transducer(precision)
}

/// Matching optimality: remove marked candidates that some marked candidate
/// can reach through the violation-adding relation, then delete markers.
pub fn matching_oo(cands: &Fsm, marker: &Fsm, add_violation: &AddViolation, precision: u32) -> Result<Fsm> {
    let sigma = cands.sigma();
    let marked = minimize(&ops::compose(cands, marker)?);
    let worse = add_violation.image(&ops::range(&marked), precision)?;
    let kept = ops::compose(&marked, &ops::complement(&worse)?)?;
    Ok(minimize(&ops::compose(&kept, &delete_markers(sigma)?)?))
}

/// A ranked violable constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    /// Macro-free expression of the transducer that inserts `@` at each
    /// violation.
    pub marker: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranked {
    pub name: String,
    pub method: Method,
    pub precision: u32,
}

/// Gen plus a ranking, with the macro table the constraint markers come
/// from (`mark_violation(name)`).
#[derive(Clone, Debug)]
pub struct Grammar {
    pub name: String,
    pub sigma: Arc<Alphabet>,
    pub env: MacroEnv,
    pub gen: Expr,
    pub ranking: Vec<Ranked>,
    pub erase: Option<Expr>,
    pub erase_guard: Option<Expr>,
}

/// The argument expression naming a constraint in `mark_violation(...)`.
pub(crate) fn constraint_arg(name: &str) -> Expr {
    if crate::regex::ast::is_ident(name) && name.len() > 1 && name.starts_with(|c: char| c.is_ascii_lowercase()) {
        Expr::call(name, Vec::new())
    } else {
        Expr::atom(name)
    }
}

impl Grammar {
    /// Reads a grammar file. Constraints without an explicit method get
    /// `default_method`; the default precision is 0.
    pub fn parse(name: &str, text: &str, sigma: &Arc<Alphabet>, default_method: Method) -> Result<Self> {
        let file = parse_file(text)?;
        let mut env = MacroEnv::new();
        for def in file.macros {
            env.define(def);
        }
        let gen = file.gen.ok_or_else(|| Error::Grammar(format!("{name}: missing `gen = ...;`")))?;
        let ranking = file
            .ranking
            .ok_or_else(|| Error::Grammar(format!("{name}: missing `ranking = ...;`")))?
            .into_iter()
            .map(|r| Ranked { name: r.name, method: r.method.unwrap_or(default_method), precision: r.precision.unwrap_or(0) })
            .collect();
        let g = Self {
            name: name.to_string(),
            sigma: Arc::clone(sigma),
            env,
            gen,
            ranking,
            erase: file.erase,
            erase_guard: file.erase_guard,
        };
        for r in &g.ranking {
            g.constraint(&r.name)?;
        }
        Ok(g)
    }

    pub fn constraint(&self, name: &str) -> Result<Constraint> {
        let call = Expr::call("mark_violation", vec![constraint_arg(name)]);
        match self.env.expand(&call) {
            Ok(marker) => Ok(Constraint { name: name.to_string(), marker }),
            Err(Error::NoClause(_)) | Err(Error::UnknownMacro(_)) => Err(Error::UnknownConstraint(name.to_string())),
            Err(e) => Err(e),
        }
    }

    pub fn constraint_names(&self) -> Vec<&str> {
        self.ranking.iter().map(|r| r.name.as_str()).collect()
    }

    pub fn set_method(&mut self, method: Method) {
        for r in &mut self.ranking {
            r.method = method;
        }
    }

    pub fn set_precision(&mut self, name: &str, precision: u32) -> Result<()> {
        let r = self
            .ranking
            .iter_mut()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::UnknownConstraint(name.to_string()))?;
        r.precision = precision;
        Ok(())
    }

    pub fn set_all_precisions(&mut self, precision: u32) {
        for r in &mut self.ranking {
            r.precision = precision;
        }
    }

    pub fn precisions(&self) -> Vec<u32> {
        self.ranking.iter().map(|r| r.precision).collect()
    }

    /// Reorders the ranking. `order` must be a permutation of the current
    /// constraint names.
    pub fn reorder(&mut self, order: &[&str]) -> Result<()> {
        let mut next = Vec::with_capacity(order.len());
        for name in order {
            let r = self
                .ranking
                .iter()
                .find(|r| r.name == *name)
                .ok_or_else(|| Error::UnknownConstraint(name.to_string()))?;
            next.push(r.clone());
        }
        if next.len() != self.ranking.len() {
            return Err(Error::Grammar("reordering must mention every constraint once".into()));
        }
        self.ranking = next;
        Ok(())
    }

    /// The ranking as an expression, `gen oo P :: c1 oo ...`.
    pub fn to_expr(&self) -> Expr {
        self.ranking.iter().fold(self.gen.clone(), |acc, r| Expr::Optimality {
            cands: Box::new(acc),
            constraint: r.name.clone(),
            precision: Some(r.precision),
        })
    }
}

/// Compiled pieces of a grammar, reused across rankings and precisions.
pub struct Evaluator {
    sigma: Arc<Alphabet>,
    gen: Fsm,
    markers: HashMap<String, Fsm>,
    erasable: Erasable,
    add_violation: HashMap<Method, AddViolation>,
    lint: Option<std::result::Result<(), String>>,
}

impl Evaluator {
    pub fn new(g: &Grammar) -> Result<Self> {
        let mut c = Compiler::with_env(&g.sigma, g.env.clone());
        let gen = minimize(&c.compile(&g.gen)?);
        let mut markers = HashMap::new();
        for r in &g.ranking {
            let con = g.constraint(&r.name)?;
            markers.insert(r.name.clone(), minimize(&c.compile(&con.marker)?));
        }
        let erasable = match (&g.erase, &g.erase_guard) {
            (None, None) => Erasable::brackets(&g.sigma),
            (Some(u), guard) => {
                let units = c.compile(u)?;
                let guard = match guard {
                    Some(gd) => c.compile(gd)?,
                    None => units.clone(),
                };
                Erasable::new(units, guard)?
            }
            (None, Some(_)) => return Err(Error::Grammar("`erase_guard` given without `erase`".into())),
        };
        Ok(Self { sigma: Arc::clone(&g.sigma), gen, markers, erasable, add_violation: HashMap::new(), lint: None })
    }

    pub fn sigma(&self) -> &Arc<Alphabet> {
        &self.sigma
    }

    pub fn gen(&self) -> &Fsm {
        &self.gen
    }

    /// Keeps only inputs of length at most `n`. Every operator acts on each
    /// input separately, so results for those inputs are unchanged.
    pub fn restrict_inputs(&mut self, n: usize) -> Result<()> {
        self.gen = minimize(&ops::compose(&Fsm::up_to_length(&self.sigma, n), &self.gen)?);
        Ok(())
    }

    pub fn marker(&self, name: &str) -> Result<&Fsm> {
        self.markers.get(name).ok_or_else(|| Error::UnknownConstraint(name.to_string()))
    }

    /// The matching filter compares candidates of different inputs after
    /// stripping erasable material, so stripping must identify the input:
    /// `gen o strip` has to be functional and injective.
    pub fn lint_matching(&mut self) -> Result<()> {
        if self.lint.is_none() {
            let eps = Fsm::epsilon(&self.sigma);
            let free = ops::difference(&Fsm::any(&self.sigma), &self.erasable.guard)?;
            let strip = ops::star(&ops::union(&ops::cross_product(&self.erasable.units, &eps)?, &free)?);
            let reduced = minimize(&ops::compose(&self.gen, &strip)?);
            let verdict = if let Some(w) = is_functional(&reduced).witness {
                Err(format!("input `{}` has candidates that differ after erasure", self.sigma.render(&w.input)))
            } else if let Some(w) = is_functional(&ops::inverse(&reduced)).witness {
                Err(format!("erased candidate `{}` comes from several inputs", self.sigma.render(&w.input)))
            } else {
                Ok(())
            };
            self.lint = Some(verdict);
        }
        self.lint.clone().unwrap().map_err(Error::UnsoundMatching)
    }

    pub fn add_violation(&mut self, method: Method) -> Result<&AddViolation> {
        if !self.add_violation.contains_key(&method) {
            let av = AddViolation::new(&self.sigma, method, &self.erasable)?;
            self.add_violation.insert(method, av);
        }
        Ok(&self.add_violation[&method])
    }

    /// One optimality step on a candidate set.
    pub fn step(&mut self, cands: &Fsm, r: &Ranked) -> Result<Fsm> {
        let marker = self.marker(&r.name)?.clone();
        match r.method {
            Method::Counting => counting_oo(cands, &marker, r.precision),
            m => {
                self.lint_matching()?;
                let av = self.add_violation(m)?.clone();
                matching_oo(cands, &marker, &av, r.precision)
            }
        }
    }

    /// Left fold of [`Evaluator::step`] over a ranking, starting from Gen.
    pub fn compile(&mut self, ranking: &[Ranked]) -> Result<Fsm> {
        let mut m = self.gen.clone();
        for r in ranking {
            m = self.step(&m, r)?;
        }
        Ok(m)
    }

    /// OT evaluation on one input by enumeration: candidates from Gen,
    /// filtered constraint by constraint on exact violation counts.
    pub fn brute_force(&self, ranking: &[Ranked], input: &[Sym]) -> Result<BTreeSet<Vec<Sym>>> {
        let at = marker_sym(&self.sigma)?;
        let mut survivors = apply(&self.gen, input)?;
        for r in ranking {
            let marker = self.marker(&r.name)?;
            let mut scored = Vec::with_capacity(survivors.len());
            for cand in survivors {
                let marked = apply(marker, &cand)?;
                let count = marked
                    .iter()
                    .map(|m| m.iter().filter(|&&s| s == at).count())
                    .min()
                    .ok_or_else(|| Error::Grammar(format!("constraint `{}` rejects a candidate", r.name)))?;
                scored.push((count, cand));
            }
            let best = scored.iter().map(|(c, _)| *c).min();
            survivors = scored.into_iter().filter(|(c, _)| Some(*c) == best).map(|(_, s)| s).collect();
        }
        Ok(survivors)
    }

    /// Same result as [`Evaluator::brute_force`] without listing candidates:
    /// the candidates of `input` are kept as an acyclic automaton and each
    /// constraint keeps exactly the paths of least marker count, found by
    /// shortest paths in both directions. Usable where the candidate set
    /// is too large to enumerate.
    pub fn lattice_eval(&self, ranking: &[Ranked], input: &[Sym]) -> Result<BTreeSet<Vec<Sym>>> {
        let at = marker_sym(&self.sigma)?;
        let word = Fsm::string(&self.sigma, input);
        let mut cands = minimize(&ops::range(&ops::compose(&word, &self.gen)?));
        for r in ranking {
            let marked = ops::compose(&cands, self.marker(&r.name)?)?.trim();
            if marked.is_empty() {
                return Err(Error::Grammar(format!("constraint `{}` rejects a candidate", r.name)));
            }
            cands = minimize(&ops::domain(&least_marked(&marked, at)));
        }
        apply(&ops::compose(&ops::compose(&word, &self.gen)?, &cands)?, input)
    }
}

/// The paths of `t` whose output has the least number of `at` symbols.
fn least_marked(t: &Fsm, at: Sym) -> Fsm {
    let n = t.num_states();
    let weight = |l: Label| u32::from(l.output == at);
    let mut back: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for s in t.states() {
        for a in t.arcs(s) {
            back[a.next as usize].push((s, weight(a.label)));
        }
    }
    let forward = zero_one_bfs(n, [t.start()], |s| t.arcs(s).iter().map(|a| (a.next, weight(a.label))).collect());
    let backward = zero_one_bfs(n, t.states().filter(|&s| t.is_final(s)), |s| back[s as usize].clone());
    let best = backward[t.start() as usize];

    let mut pruned = Fsm::empty(t.sigma());
    for _ in 1..n {
        pruned.add_state();
    }
    pruned.set_start(t.start());
    for s in t.states() {
        pruned.set_final(s, t.is_final(s) && forward[s as usize] == best);
        for a in t.arcs(s) {
            let through = forward[s as usize].saturating_add(weight(a.label)).saturating_add(backward[a.next as usize]);
            if through == best {
                pruned.add_arc(s, a.label, a.next);
            }
        }
    }
    pruned.trim()
}

fn zero_one_bfs<F>(n: usize, sources: impl IntoIterator<Item = u32>, next: F) -> Vec<u32>
where
    F: Fn(u32) -> Vec<(u32, u32)>,
{
    let mut dist = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for s in sources {
        dist[s as usize] = 0;
        queue.push_back(s);
    }
    while let Some(s) = queue.pop_front() {
        let d = dist[s as usize];
        for (q, w) in next(s) {
            if d + w < dist[q as usize] {
                dist[q as usize] = d + w;
                if w == 0 {
                    queue.push_front(q);
                } else {
                    queue.push_back(q);
                }
            }
        }
    }
    dist
}

/// Compiles a grammar: Gen folded through each ranked constraint, minimized.
pub fn compile_grammar(g: &Grammar) -> Result<Fsm> {
    Evaluator::new(g)?.compile(&g.ranking)
}

/// [`Evaluator::brute_force`] for a single grammar and input.
pub fn brute_force_eval(g: &Grammar, input: &[Sym]) -> Result<BTreeSet<Vec<Sym>>> {
    Evaluator::new(g)?.brute_force(&g.ranking, input)
}

/// [`Evaluator::lattice_eval`] for a single grammar and input.
pub fn lattice_eval(g: &Grammar, input: &[Sym]) -> Result<BTreeSet<Vec<Sym>>> {
    Evaluator::new(g)?.lattice_eval(&g.ranking, input)
}
