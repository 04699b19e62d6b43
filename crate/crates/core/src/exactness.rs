//! Functionality of transducers, exactness of compiled OT grammars and the
//! greedy precision search.
//!
//! Functionality is decided on the square of the machine: pairs of paths
//! reading the same input. On the useful part of the square each state must
//! carry a single output delay (which path is ahead, and by what string),
//! and final pairs must carry the empty delay.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::apply::some_outputs;
use crate::determinize::minimize;
use crate::error::{Error, Result};
use crate::fsm::{Fsm, StateId};
use crate::ops;
use crate::ot::{Evaluator, Grammar, Method, Ranked};
use crate::symbol::{Alphabet, Sym, EPS};

/// An input with (at least) two distinct outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub input: Vec<Sym>,
    pub outputs: Vec<Vec<Sym>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functionality {
    /// A shortest ambiguous input, when there is one.
    pub witness: Option<Witness>,
}

impl Functionality {
    pub fn is_functional(&self) -> bool {
        self.witness.is_none()
    }
}

/// Output delay between two paths. `Ahead(true, s)` means the first path
/// has produced `s` beyond the second.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Delay {
    Ahead(bool, Vec<Sym>),
    Diverged,
}

impl Delay {
    fn zero() -> Self {
        Delay::Ahead(false, Vec::new())
    }

    fn is_zero(&self) -> bool {
        matches!(self, Delay::Ahead(_, s) if s.is_empty())
    }

    fn len(&self) -> usize {
        match self {
            Delay::Ahead(_, s) => s.len(),
            Delay::Diverged => 0,
        }
    }

    fn advance(&self, x: Sym, y: Sym) -> Delay {
        let Delay::Ahead(first, s) = self else {
            return Delay::Diverged;
        };
        // a: extra output of path 1, b: extra output of path 2.
        let (mut a, mut b) = if *first { (s.clone(), Vec::new()) } else { (Vec::new(), s.clone()) };
        if x != EPS {
            a.push(x);
        }
        if y != EPS {
            b.push(y);
        }
        let common = a.iter().zip(&b).take_while(|(p, q)| p == q).count();
        if common < a.len() && common < b.len() {
            return Delay::Diverged;
        }
        if a.len() > b.len() {
            Delay::Ahead(true, a[common..].to_vec())
        } else {
            Delay::Ahead(false, b[common..].to_vec())
        }
    }
}

/// Successors of a square state: `(input, out1, out2, next)`.
fn square_moves(t: &Fsm, p: StateId, q: StateId, out: &mut Vec<(Sym, Sym, Sym, (StateId, StateId))>) {
    out.clear();
    for a in t.arcs(p) {
        if a.label.input == EPS {
            out.push((EPS, a.label.output, EPS, (a.next, q)));
        }
    }
    for b in t.arcs(q) {
        if b.label.input == EPS {
            out.push((EPS, EPS, b.label.output, (p, b.next)));
        }
    }
    for a in t.arcs(p) {
        if a.label.input == EPS {
            continue;
        }
        for b in t.arcs(q) {
            if b.label.input == a.label.input {
                out.push((a.label.input, a.label.output, b.label.output, (a.next, b.next)));
            }
        }
    }
}

/// Decides whether every input of `t` has at most one output.
pub fn is_functional(t: &Fsm) -> Functionality {
    let t = t.normalize();
    if t.is_empty() {
        return Functionality { witness: None };
    }
    // Accessible part of the square.
    let mut index: HashMap<(StateId, StateId), usize> = HashMap::new();
    let mut pairs = vec![(t.start(), t.start())];
    index.insert(pairs[0], 0);
    let mut edges: Vec<Vec<(Sym, Sym, usize)>> = vec![Vec::new()];
    let mut moves = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        square_moves(&t, p, q, &mut moves);
        for &(_, x, y, next) in &moves {
            let j = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                edges.push(Vec::new());
                pairs.len() - 1
            });
            edges[i].push((x, y, j));
        }
        i += 1;
    }
    let n = pairs.len();
    let is_final = |k: usize| t.is_final(pairs[k].0) && t.is_final(pairs[k].1);

    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, es) in edges.iter().enumerate() {
        for &(_, _, j) in es {
            rev[j].push(k);
        }
    }
    let mut useful = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&k| is_final(k)).collect();
    for &k in &stack {
        useful[k] = true;
    }
    while let Some(k) = stack.pop() {
        for &j in &rev[k] {
            if !useful[j] {
                useful[j] = true;
                stack.push(j);
            }
        }
    }

    let mut delay: Vec<Option<Delay>> = vec![None; n];
    let mut ok = useful[0];
    if ok {
        delay[0] = Some(Delay::zero());
        let mut queue = VecDeque::from([0usize]);
        'outer: while let Some(k) = queue.pop_front() {
            let d = delay[k].clone().unwrap();
            if d == Delay::Diverged || (is_final(k) && !d.is_zero()) {
                ok = false;
                break;
            }
            for &(x, y, j) in &edges[k] {
                if !useful[j] {
                    continue;
                }
                let nd = d.advance(x, y);
                match &delay[j] {
                    None => {
                        delay[j] = Some(nd);
                        queue.push_back(j);
                    }
                    Some(old) if *old != nd => {
                        ok = false;
                        break 'outer;
                    }
                    Some(_) => {}
                }
            }
        }
    } else {
        ok = true;
    }
    if ok {
        return Functionality { witness: None };
    }
    Functionality { witness: Some(find_witness(&t, n)) }
}

/// Shortest input with two distinct outputs, by a 0-1 breadth-first search
/// over (state pair, delay) weighted by input symbols read. Delays longer
/// than the cap count as diverged; the result is verified and the search
/// repeated with a larger cap if verification fails.
fn find_witness(t: &Fsm, square_size: usize) -> Witness {
    let mut cap = square_size + 1;
    let mut last = Vec::new();
    for _ in 0..12 {
        if let Some(input) = witness_search(t, cap) {
            if let Ok(outputs) = some_outputs(t, &input, 2) {
                if outputs.len() >= 2 {
                    return Witness { input, outputs };
                }
            }
            last = input;
        }
        cap *= 2;
    }
    let outputs = some_outputs(t, &last, 2).unwrap_or_default();
    Witness { input: last, outputs }
}

fn witness_search(t: &Fsm, cap: usize) -> Option<Vec<Sym>> {
    type Config = (StateId, StateId, Delay);
    let start: Config = (t.start(), t.start(), Delay::zero());
    // config -> (input length, parent config and the symbol read from it)
    let mut best: HashMap<Config, (usize, Option<(Config, Sym)>)> = HashMap::new();
    best.insert(start.clone(), (0, None));
    let mut deque = VecDeque::from([(0usize, start)]);
    let mut moves = Vec::new();
    while let Some((dist, c)) = deque.pop_front() {
        if best[&c].0 < dist {
            continue;
        }
        let (p, q, d) = c.clone();
        if t.is_final(p) && t.is_final(q) && !d.is_zero() {
            let mut input = Vec::new();
            let mut cur = c;
            while let Some((_, Some((prev, sym)))) = best.get(&cur).cloned() {
                if sym != EPS {
                    input.push(sym);
                }
                cur = prev;
            }
            input.reverse();
            return Some(input);
        }
        square_moves(t, p, q, &mut moves);
        for &(sym, x, y, (np, nq)) in &moves {
            let mut nd = d.advance(x, y);
            if nd.len() > cap {
                nd = Delay::Diverged;
            }
            let next = (np, nq, nd);
            let nd_dist = dist + usize::from(sym != EPS);
            if best.get(&next).is_some_and(|(old, _)| *old <= nd_dist) {
                continue;
            }
            best.insert(next.clone(), (nd_dist, Some((c.clone(), sym))));
            if sym == EPS {
                deque.push_front((nd_dist, next));
            } else {
                deque.push_back((nd_dist, next));
            }
        }
    }
    None
}

/// `T o marker o {(? - @) x [], @}*`: each output reduced to its markers.
pub fn violation_profile(t: &Fsm, marker: &Fsm) -> Result<Fsm> {
    let sigma = t.sigma();
    let at = sigma.marker().ok_or_else(|| Error::UnknownSymbol(crate::symbol::MARKER.into()))?;
    let mut keep = Fsm::epsilon(sigma);
    for s in sigma.symbols() {
        let label = if s == at { crate::fsm::Label::identity(at) } else { crate::fsm::Label::new(s, EPS) };
        keep.add_arc(0, label, 0);
    }
    let marked = ops::compose(t, marker)?;
    Ok(minimize(&ops::compose(&marked, &keep)?))
}

/// Whether all outputs of `t` for each input violate the constraint
/// equally often.
pub fn is_exact(t: &Fsm, marker: &Fsm) -> Result<Functionality> {
    Ok(is_functional(&violation_profile(t, marker)?))
}

/// [`is_exact`] restricted to inputs of length at most `n`.
pub fn exact_up_to(t: &Fsm, marker: &Fsm, n: usize) -> Result<Functionality> {
    let restricted = ops::compose(&Fsm::up_to_length(t.sigma(), n), t)?;
    is_exact(&restricted, marker)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exact,
    ExactUpTo(usize),
    /// Witness on the violation profile: outputs are strings of `@`.
    Inexact(Witness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintReport {
    pub constraint: String,
    pub method: Method,
    pub precision: u32,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct ExactnessReport {
    pub grammar: String,
    pub sigma: Arc<Alphabet>,
    /// States of the compiled grammar.
    pub states: usize,
    pub constraints: Vec<ConstraintReport>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.constraints.iter().all(|c| !matches!(c.verdict, Verdict::Inexact(_)))
    }

    fn show(&self, s: &[Sym]) -> String {
        if s.is_empty() {
            crate::att::EPS_TOKEN.to_string()
        } else {
            self.sigma.render(s)
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "grammar {}: {} states", self.grammar, self.states);
        let width = self.constraints.iter().map(|c| c.constraint.len()).max().unwrap_or(0);
        for c in &self.constraints {
            let verdict = match &c.verdict {
                Verdict::Exact => "exact".to_string(),
                Verdict::ExactUpTo(n) => format!("exact up to length {n}"),
                Verdict::Inexact(w) => format!(
                    "inexact: input {} has violation profiles {} and {}",
                    self.show(&w.input),
                    self.show(&w.outputs[0]),
                    self.show(&w.outputs[1])
                ),
            };
            let _ = writeln!(out, "{:width$}  {}:{}  {}", c.constraint, c.method, c.precision, verdict);
        }
        let _ = writeln!(out, "exact: {}", if self.is_exact() { "yes" } else { "no" });
        out
    }

    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for c in &self.constraints {
            let _ = write!(
                out,
                "grammar={} constraint={} method={} precision={} states={}",
                self.grammar, c.constraint, c.method, c.precision, self.states
            );
            match &c.verdict {
                Verdict::Exact => out.push_str(" verdict=exact"),
                Verdict::ExactUpTo(n) => {
                    let _ = write!(out, " verdict=exact_up_to bound={n}");
                }
                Verdict::Inexact(w) => {
                    let _ = write!(
                        out,
                        " verdict=inexact witness={} output1={} output2={}",
                        self.show(&w.input),
                        self.show(&w.outputs[0]),
                        self.show(&w.outputs[1])
                    );
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Compiles `g` and checks each constraint on the machine compiled through
/// that constraint: globally, or for inputs up to `bound` symbols.
///
/// A step is exact when all surviving candidates of every input violate the
/// step's constraint equally often. If every step is exact the grammar
/// computes the optimal candidates.
pub fn check_grammar(g: &Grammar, bound: Option<usize>) -> Result<ExactnessReport> {
    let mut ev = Evaluator::new(g)?;
    let mut m = ev.gen().clone();
    let mut constraints = Vec::new();
    for r in &g.ranking {
        m = ev.step(&m, r)?;
        let marker = ev.marker(&r.name)?;
        let f = match bound {
            Some(n) => exact_up_to(&m, marker, n)?,
            None => is_exact(&m, marker)?,
        };
        let verdict = match (f.witness, bound) {
            (Some(w), _) => Verdict::Inexact(w),
            (None, Some(n)) => Verdict::ExactUpTo(n),
            (None, None) => Verdict::Exact,
        };
        constraints.push(ConstraintReport { constraint: r.name.clone(), method: r.method, precision: r.precision, verdict });
    }
    Ok(ExactnessReport { grammar: g.name.clone(), sigma: Arc::clone(&g.sigma), states: m.num_states(), constraints })
}

/// The greedy search: for each constraint in rank order, the least precision
/// at which the compilation through that constraint is exact (for inputs
/// up to `target_len`, or globally). Every constraint uses `method`.
pub fn find_precisions(g: &Grammar, method: Method, target_len: Option<usize>, max_prec: u32) -> Result<Vec<u32>> {
    let mut ev = Evaluator::new(g)?;
    if let Some(n) = target_len {
        ev.restrict_inputs(n)?;
    }
    let mut cands = ev.gen().clone();
    let mut settled = Vec::new();
    for r in &g.ranking {
        let mut found = None;
        for p in 0..=max_prec {
            let step = Ranked { name: r.name.clone(), method, precision: p };
            let m = ev.step(&cands, &step)?;
            if is_exact(&m, ev.marker(&r.name)?)?.is_functional() {
                found = Some((p, m));
                break;
            }
        }
        match found {
            Some((p, m)) => {
                settled.push(p);
                cands = m;
            }
            None => {
                return Err(Error::NoExactPrecision { constraint: r.name.clone(), max_prec, settled });
            }
        }
    }
    Ok(settled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::Compiler;

    fn sigma() -> Arc<Alphabet> {
        Arc::new(Alphabet::default_sigma())
    }

    fn compile(s: &Arc<Alphabet>, text: &str) -> Fsm {
        Compiler::new(s).compile_str(text).unwrap()
    }

    #[test]
    fn identity_is_functional() {
        let s = sigma();
        assert!(is_functional(&ops::sigma_star(&s)).is_functional());
    }

    #[test]
    fn union_of_two_maps_is_not() {
        let s = sigma();
        let f = is_functional(&compile(&s, "{a x b, a x c}"));
        let w = f.witness.unwrap();
        assert_eq!(s.render(&w.input), "a");
        assert_eq!(w.outputs.iter().map(|o| s.render(o)).collect::<Vec<_>>(), vec!["b", "c"]);
    }

    #[test]
    fn delays_that_catch_up_are_functional() {
        let s = sigma();
        // Same relation written with output early and late.
        assert!(is_functional(&compile(&s, "[a,d] o {[a x [b,c], d x []], [a x b, d x c]}")).is_functional());
        assert!(is_functional(&compile(&s, "{[a x [], b x [c,c]], [a x c, b x c]}")).is_functional());
        assert!(!is_functional(&compile(&s, "{[a x [], b x [c,c]], [a x c, b x d]}")).is_functional());
    }

    #[test]
    fn witness_is_shortest() {
        let s = sigma();
        let t = compile(&s, "[a, a, a*, b] o {[a*, b x c], [a*, b x d]}");
        let w = is_functional(&t).witness.unwrap();
        assert_eq!(s.render(&w.input), "aab");
    }

    #[test]
    fn epsilon_input_ambiguity() {
        let s = sigma();
        let t = compile(&s, "[a, ([] x b)*]");
        let w = is_functional(&t).witness.unwrap();
        assert_eq!(s.render(&w.input), "a");
        assert_eq!(w.outputs.len(), 2);
    }

    #[test]
    fn exactness_of_marked_candidates() {
        let s = sigma();
        let marker = compile(&s, "replace([] x @, a, [])");
        let same = compile(&s, "[] x {[a,b],[b,a]}");
        assert!(is_exact(&same, &marker).unwrap().is_functional());
        let differ = compile(&s, "{[] x {[a,a],[b]}, c}");
        let w = is_exact(&differ, &marker).unwrap().witness.unwrap();
        assert!(w.input.is_empty());
        assert!(exact_up_to(&compile(&s, "{c x {[a,a],b}, []}"), &marker, 0).unwrap().is_functional());
        assert!(!exact_up_to(&compile(&s, "{c x {[a,a],b}, []}"), &marker, 1).unwrap().is_functional());
    }
}
