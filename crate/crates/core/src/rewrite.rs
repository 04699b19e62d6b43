//! Context-dependent rewriting: `replace`, `ignore` and `intro_each_pos`.
//!
//! `replace(T, Left, Right)` is built directly as a product automaton rather
//! than through the usual marker-insertion cascade. Contexts are tested on
//! the input side. Application is obligatory and leftmost-longest: scanning
//! left to right outside any match, every position where `Left` ends and a
//! nonempty string of `domain(T)` followed by `Right` begins must start a
//! match, and that match must be the longest one for which `Right` holds.
//! If `domain(T)` is exactly `{""}`, each position where both contexts hold
//! receives exactly one insertion.
//!
//! Lookahead conditions are tracked as obligations on the rest of the input.
//! Positive obligations ("`Right` starts here") are states of a DFA for
//! `Right ?*`; negative obligations ("no continuation in X starts here")
//! share one NFA state set, since their conjunction is the complement of a
//! union.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Arc;

use crate::determinize::{complete, determinize};
use crate::error::{Error, Result};
use crate::fsm::{Fsm, Label, StateId};
use crate::ops;
use crate::symbol::{Alphabet, Sym, EPS};

/// Complete DFA as a dense transition table.
struct Table {
    start: u32,
    width: usize,
    next: Vec<u32>,
    finals: Vec<bool>,
}

impl Table {
    fn new(m: &Fsm) -> Self {
        let d = complete(&determinize(m));
        let width = d.sigma().len() + 1;
        let mut next = vec![u32::MAX; d.num_states() * width];
        for s in d.states() {
            for t in d.arcs(s) {
                next[s as usize * width + t.label.input as usize] = t.next;
            }
        }
        let finals = d.states().map(|s| d.is_final(s)).collect();
        Self { start: d.start(), width, next, finals }
    }

    fn step(&self, s: u32, sym: Sym) -> u32 {
        self.next[s as usize * self.width + sym as usize]
    }

    fn is_final(&self, s: u32) -> bool {
        self.finals[s as usize]
    }

    /// States from which no final state is reachable.
    fn dead(&self) -> Vec<bool> {
        let n = self.finals.len();
        let mut live = self.finals.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for s in 0..n {
                if live[s] {
                    continue;
                }
                if (1..self.width).any(|a| live[self.next[s * self.width + a] as usize]) {
                    live[s] = true;
                    changed = true;
                }
            }
        }
        live.into_iter().map(|l| !l).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Phase {
    /// At a position where the left context holds; a decision is pending.
    Site,
    /// Between symbols with no pending decision.
    Copy,
    /// Inside a match: state of `T` and of the domain DFA.
    Match(StateId, StateId),
    /// Emitting an insertion: state of `T`.
    Insert(StateId),
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Key {
    phase: Phase,
    left: u32,
    pos: Vec<u32>,
    neg: Vec<StateId>,
}

struct Builder {
    sigma: Arc<Alphabet>,
    t: Fsm,
    dom: Fsm,
    left: Table,
    right: Table,
    right_dead: Vec<bool>,
    /// Negative-obligation NFA: the right context, then `(state, consumed)`
    /// pairs of the domain DFA.
    neg: Fsm,
    neg_right_start: StateId,
    neg_dom_base: StateId,
    insertion: bool,
    mark: Vec<bool>,
}

impl Builder {
    fn neg_entry(&self, dom_state: StateId) -> StateId {
        self.neg_dom_base + 2 * dom_state
    }

    fn closure(&mut self, seeds: &[StateId]) -> Option<Vec<StateId>> {
        let mut out = Vec::new();
        self.neg.eps_closure_into(seeds, &mut out, &mut self.mark);
        if out.iter().any(|&s| self.neg.is_final(s)) {
            None
        } else {
            Some(out)
        }
    }

    fn spawn_neg(&mut self, neg: &[StateId], entry: StateId) -> Option<Vec<StateId>> {
        let mut seeds = neg.to_vec();
        seeds.push(entry);
        self.closure(&seeds)
    }

    fn spawn_pos(&self, pos: &[u32]) -> Option<Vec<u32>> {
        let s = self.right.start;
        if self.right.is_final(s) {
            return Some(pos.to_vec());
        }
        if self.right_dead[s as usize] {
            return None;
        }
        let mut out = pos.to_vec();
        if let Err(i) = out.binary_search(&s) {
            out.insert(i, s);
        }
        Some(out)
    }

    /// Advances the left-context state and all obligations over `sym`.
    fn advance(&mut self, key: &Key, sym: Sym) -> Option<(u32, Vec<u32>, Vec<StateId>)> {
        let left = self.left.step(key.left, sym);
        let mut pos = Vec::with_capacity(key.pos.len());
        for &p in &key.pos {
            let q = self.right.step(p, sym);
            if self.right_dead[q as usize] {
                return None;
            }
            if !self.right.is_final(q) {
                pos.push(q);
            }
        }
        pos.sort_unstable();
        pos.dedup();
        let mut seeds = Vec::new();
        for &s in &key.neg {
            for t in self.neg.arcs(s) {
                if t.label.input == sym {
                    seeds.push(t.next);
                }
            }
        }
        let neg = self.closure(&seeds)?;
        Some((left, pos, neg))
    }

    fn enter(&self, left: u32, pos: Vec<u32>, neg: Vec<StateId>) -> Key {
        let phase = if self.left.is_final(left) { Phase::Site } else { Phase::Copy };
        Key { phase, left, pos, neg }
    }

    fn dom_step(&self, d: StateId, sym: Sym) -> Option<StateId> {
        self.dom.arcs(d).iter().find(|t| t.label.input == sym).map(|t| t.next)
    }

    fn successors(&mut self, key: &Key) -> Vec<(Label, Key)> {
        let mut out = Vec::new();
        match key.phase.clone() {
            Phase::Site => {
                if self.insertion {
                    out.push((Label::EPSILON, Key { phase: Phase::Insert(self.t.start()), ..key.clone() }));
                    let entry = self.neg_right_start;
                    if let Some(neg) = self.spawn_neg(&key.neg, entry) {
                        out.push((Label::EPSILON, Key { phase: Phase::Copy, neg, ..key.clone() }));
                    }
                } else {
                    let phase = Phase::Match(self.t.start(), self.dom.start());
                    out.push((Label::EPSILON, Key { phase, ..key.clone() }));
                    let entry = self.neg_entry(self.dom.start());
                    if let Some(neg) = self.spawn_neg(&key.neg, entry) {
                        out.push((Label::EPSILON, Key { phase: Phase::Copy, neg, ..key.clone() }));
                    }
                }
            }
            Phase::Copy => {
                let syms: Vec<Sym> = self.sigma.symbols().collect();
                for a in syms {
                    if let Some((left, pos, neg)) = self.advance(key, a) {
                        out.push((Label::identity(a), self.enter(left, pos, neg)));
                    }
                }
            }
            Phase::Insert(t) => {
                let arcs = self.t.arcs(t).to_vec();
                for tr in arcs {
                    if tr.label.input == EPS {
                        out.push((tr.label, Key { phase: Phase::Insert(tr.next), ..key.clone() }));
                    }
                }
                if self.t.is_final(t) {
                    if let Some(pos) = self.spawn_pos(&key.pos) {
                        out.push((Label::EPSILON, Key { phase: Phase::Copy, pos, ..key.clone() }));
                    }
                }
            }
            Phase::Match(t, d) => {
                let arcs = self.t.arcs(t).to_vec();
                for tr in arcs {
                    if tr.label.input == EPS {
                        out.push((tr.label, Key { phase: Phase::Match(tr.next, d), ..key.clone() }));
                    } else if let Some(d2) = self.dom_step(d, tr.label.input) {
                        if let Some((left, pos, neg)) = self.advance(key, tr.label.input) {
                            let phase = Phase::Match(tr.next, d2);
                            out.push((tr.label, Key { phase, left, pos, neg }));
                        }
                    }
                }
                if self.t.is_final(t) {
                    let entry = self.neg_entry(d);
                    if let (Some(pos), Some(neg)) = (self.spawn_pos(&key.pos), self.spawn_neg(&key.neg, entry)) {
                        out.push((Label::EPSILON, self.enter(key.left, pos, neg)));
                    }
                }
            }
        }
        out
    }
}

/// Obligatory leftmost-longest replacement of `t` between `left` and
/// `right`. See the module documentation for the exact semantics.
pub fn replace(t: &Fsm, left: &Fsm, right: &Fsm) -> Result<Fsm> {
    t.check_sigma(left)?;
    t.check_sigma(right)?;
    if !left.is_recognizer() || !right.is_recognizer() {
        return Err(Error::RelationOperand("replace context"));
    }
    let sigma = Arc::clone(t.sigma());
    let t = t.normalize();
    let dom = determinize(&ops::domain(&t));
    if dom.is_empty() {
        return Ok(ops::sigma_star(&sigma));
    }
    let empty_in_domain = dom.is_final(dom.start());
    let nonempty_in_domain = dom.num_arcs() > 0;
    if empty_in_domain && nonempty_in_domain {
        return Err(Error::Unsupported(
            "replace with a domain mixing the empty string and nonempty strings".into(),
        ));
    }
    let any = ops::sigma_star(&sigma);
    let left_table = Table::new(&ops::concat(&any, left)?);
    let right_table = Table::new(&ops::concat(right, &any)?);
    let right_dead = right_table.dead();

    let mut neg = right.normalize();
    let neg_right_start = neg.start();
    let neg_dom_base = neg.num_states() as StateId;
    for _ in 0..2 * dom.num_states() {
        neg.add_state();
    }
    for d in dom.states() {
        for tr in dom.arcs(d) {
            for consumed in 0..2 {
                neg.add_arc(neg_dom_base + 2 * d + consumed, Label::identity(tr.label.input), neg_dom_base + 2 * tr.next + 1);
            }
        }
        if dom.is_final(d) {
            neg.add_arc(neg_dom_base + 2 * d + 1, Label::EPSILON, neg_right_start);
        }
    }
    let mark = vec![false; neg.num_states()];

    let mut b = Builder {
        sigma: Arc::clone(&sigma),
        t,
        dom,
        left: left_table,
        right: right_table,
        right_dead,
        neg,
        neg_right_start,
        neg_dom_base,
        insertion: empty_in_domain,
        mark,
    };

    let start = b.enter(b.left.start, Vec::new(), Vec::new());
    let mut m = Fsm::empty(&sigma);
    let mut index: HashMap<Key, StateId> = HashMap::new();
    index.insert(start.clone(), 0);
    let mut queue = vec![start];
    while let Some(key) = queue.pop() {
        let id = index[&key];
        if key.phase == Phase::Copy && key.pos.is_empty() {
            m.set_final(id, true);
        }
        for (label, next) in b.successors(&key) {
            let n = match index.entry(next) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    let n = m.add_state();
                    queue.push(e.key().clone());
                    e.insert(n);
                    n
                }
            };
            m.add_arc(id, label, n);
        }
    }
    Ok(m.normalize())
}

/// Strings of `a` with strings of `b` freely interspersed, including before
/// the first and after the last symbol.
pub fn ignore(a: &Fsm, b: &Fsm) -> Result<Fsm> {
    a.check_sigma(b)?;
    let a = a.normalize();
    let b = b.normalize();
    let mut m = a.clone();
    if b.is_empty() {
        return Ok(m);
    }
    for s in a.states() {
        let off = m.absorb(&b);
        m.add_arc(s, Label::EPSILON, b.start() + off);
        for f in b.states().filter(|&f| b.is_final(f)) {
            m.set_final(f + off, false);
            m.add_arc(f + off, Label::EPSILON, s);
        }
    }
    Ok(m)
}

/// `[[ [] x E, ?]*, [] x E]`: an instance of `E` inserted at every position.
pub fn intro_each_pos(e: &Fsm) -> Result<Fsm> {
    let sigma = e.sigma();
    let ins = ops::cross_product(&Fsm::epsilon(sigma), e)?;
    let step = ops::concat(&ins, &Fsm::any(sigma))?;
    ops::concat(&ops::star(&step), &ins)
}
