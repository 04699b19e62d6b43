//! The machine representation shared by every layer.
//!
//! An [`Fsm`] is a finite-state transducer whose arcs carry a pair of
//! symbols (either may be epsilon). Recognizers are the special case where
//! every arc has identical input and output symbols; no separate type is
//! used for them, so coercion between a recognizer and its identity
//! transduction is free.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symbol::{Alphabet, Sym, EPS};

pub type StateId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub input: Sym,
    pub output: Sym,
}

impl Label {
    pub const EPSILON: Label = Label { input: EPS, output: EPS };

    pub fn new(input: Sym, output: Sym) -> Self {
        Self { input, output }
    }

    pub fn identity(sym: Sym) -> Self {
        Self { input: sym, output: sym }
    }

    pub fn is_epsilon(self) -> bool {
        self.input == EPS && self.output == EPS
    }

    pub fn is_identity(self) -> bool {
        self.input == self.output
    }

    /// Packs the pair into one integer; used when a transducer is treated as
    /// an automaton over pair labels.
    pub fn key(self) -> u32 {
        (u32::from(self.input) << 16) | u32::from(self.output)
    }

    pub fn from_key(key: u32) -> Self {
        Self {
            input: (key >> 16) as Sym,
            output: (key & 0xffff) as Sym,
        }
    }

    pub fn inverse(self) -> Self {
        Self { input: self.output, output: self.input }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub label: Label,
    pub next: StateId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Recognizer,
    Transducer,
}

#[derive(Clone)]
pub struct Fsm {
    sigma: Arc<Alphabet>,
    start: StateId,
    finals: Vec<bool>,
    arcs: Vec<Vec<Transition>>,
}

impl Fsm {
    /// A machine with a single non-final start state: the empty language.
    pub fn empty(sigma: &Arc<Alphabet>) -> Self {
        Self {
            sigma: Arc::clone(sigma),
            start: 0,
            finals: vec![false],
            arcs: vec![Vec::new()],
        }
    }

    /// Accepts only the empty string.
    pub fn epsilon(sigma: &Arc<Alphabet>) -> Self {
        let mut m = Self::empty(sigma);
        m.finals[0] = true;
        m
    }

    /// Single-arc machine mapping `input` to `output` (either may be epsilon).
    pub fn pair(sigma: &Arc<Alphabet>, input: Sym, output: Sym) -> Self {
        let mut m = Self::empty(sigma);
        let f = m.add_state();
        m.set_final(f, true);
        if input == EPS && output == EPS {
            m.add_arc(0, Label::EPSILON, f);
        } else {
            m.add_arc(0, Label::new(input, output), f);
        }
        m
    }

    pub fn symbol(sigma: &Arc<Alphabet>, sym: Sym) -> Self {
        Self::pair(sigma, sym, sym)
    }

    /// Any single symbol of the alphabet (`?`).
    pub fn any(sigma: &Arc<Alphabet>) -> Self {
        Self::symbol_set(sigma, sigma.symbols())
    }

    pub fn symbol_set<I: IntoIterator<Item = Sym>>(sigma: &Arc<Alphabet>, syms: I) -> Self {
        let mut m = Self::empty(sigma);
        let f = m.add_state();
        m.set_final(f, true);
        for s in syms {
            m.add_arc(0, Label::identity(s), f);
        }
        m
    }

    /// Accepts exactly the given string.
    pub fn string(sigma: &Arc<Alphabet>, syms: &[Sym]) -> Self {
        let mut m = Self::empty(sigma);
        let mut cur = 0;
        for &s in syms {
            let next = m.add_state();
            m.add_arc(cur, Label::identity(s), next);
            cur = next;
        }
        m.set_final(cur, true);
        m
    }

    /// Strings of length at most `n` over the whole alphabet.
    pub fn up_to_length(sigma: &Arc<Alphabet>, n: usize) -> Self {
        let mut m = Self::empty(sigma);
        m.set_final(0, true);
        let mut cur = 0;
        for _ in 0..n {
            let next = m.add_state();
            m.set_final(next, true);
            for s in sigma.symbols() {
                m.add_arc(cur, Label::identity(s), next);
            }
            cur = next;
        }
        m
    }

    pub(crate) fn from_parts(
        sigma: Arc<Alphabet>,
        start: StateId,
        finals: Vec<bool>,
        arcs: Vec<Vec<Transition>>,
    ) -> Self {
        debug_assert_eq!(finals.len(), arcs.len());
        Self { sigma, start, finals, arcs }
    }

    pub fn sigma(&self) -> &Arc<Alphabet> {
        &self.sigma
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn set_start(&mut self, s: StateId) {
        self.start = s;
    }

    pub fn num_states(&self) -> usize {
        self.arcs.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.arcs.len() as StateId
    }

    pub fn is_final(&self, s: StateId) -> bool {
        self.finals[s as usize]
    }

    pub fn set_final(&mut self, s: StateId, fin: bool) {
        self.finals[s as usize] = fin;
    }

    pub fn arcs(&self, s: StateId) -> &[Transition] {
        &self.arcs[s as usize]
    }

    pub fn add_state(&mut self) -> StateId {
        self.arcs.push(Vec::new());
        self.finals.push(false);
        (self.arcs.len() - 1) as StateId
    }

    pub fn add_arc(&mut self, from: StateId, label: Label, to: StateId) {
        self.arcs[from as usize].push(Transition { label, next: to });
    }

    pub fn kind(&self) -> Kind {
        if self.is_recognizer() {
            Kind::Recognizer
        } else {
            Kind::Transducer
        }
    }

    pub fn is_recognizer(&self) -> bool {
        self.arcs.iter().flatten().all(|t| t.label.is_identity())
    }

    pub(crate) fn require_recognizer(&self, op: &'static str) -> Result<()> {
        if self.is_recognizer() {
            Ok(())
        } else {
            Err(Error::RelationOperand(op))
        }
    }

    pub(crate) fn check_sigma(&self, other: &Fsm) -> Result<()> {
        if Alphabet::same(&self.sigma, &other.sigma) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// True when no final state is reachable from the start.
    pub fn is_empty(&self) -> bool {
        let reach = self.accessible();
        !self.states().any(|s| reach[s as usize] && self.is_final(s))
    }

    fn accessible(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.start];
        seen[self.start as usize] = true;
        while let Some(s) = stack.pop() {
            for t in self.arcs(s) {
                if !seen[t.next as usize] {
                    seen[t.next as usize] = true;
                    stack.push(t.next);
                }
            }
        }
        seen
    }

    pub(crate) fn coaccessible(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in self.states() {
            for t in self.arcs(s) {
                rev[t.next as usize].push(s);
            }
        }
        let mut seen = vec![false; n];
        let mut stack: Vec<StateId> = self.states().filter(|&s| self.is_final(s)).collect();
        for &s in &stack {
            seen[s as usize] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &rev[s as usize] {
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Removes states that are not both accessible and co-accessible and
    /// renumbers the rest in breadth-first order from the start (start = 0).
    pub fn trim(&self) -> Fsm {
        let co = self.coaccessible();
        if !co[self.start as usize] {
            return Fsm::empty(&self.sigma);
        }
        let n = self.num_states();
        let mut map = vec![StateId::MAX; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        map[self.start as usize] = 0;
        order.push(self.start);
        queue.push_back(self.start);
        while let Some(s) = queue.pop_front() {
            for t in self.arcs(s) {
                let q = t.next as usize;
                if co[q] && map[q] == StateId::MAX {
                    map[q] = order.len() as StateId;
                    order.push(t.next);
                    queue.push_back(t.next);
                }
            }
        }
        let mut finals = Vec::with_capacity(order.len());
        let mut arcs = Vec::with_capacity(order.len());
        for &old in &order {
            finals.push(self.is_final(old));
            let mut out: Vec<Transition> = self
                .arcs(old)
                .iter()
                .filter(|t| map[t.next as usize] != StateId::MAX)
                .map(|t| Transition { label: t.label, next: map[t.next as usize] })
                .collect();
            out.sort_unstable();
            out.dedup();
            arcs.push(out);
        }
        Fsm::from_parts(Arc::clone(&self.sigma), 0, finals, arcs)
    }

    /// Epsilon closure over `(eps, eps)` arcs, in ascending state order.
    pub(crate) fn eps_closure_into(&self, seeds: &[StateId], out: &mut Vec<StateId>, mark: &mut [bool]) {
        out.clear();
        let mut stack: Vec<StateId> = Vec::new();
        for &s in seeds {
            if !mark[s as usize] {
                mark[s as usize] = true;
                stack.push(s);
                out.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            for t in self.arcs(s) {
                if t.label.is_epsilon() && !mark[t.next as usize] {
                    mark[t.next as usize] = true;
                    stack.push(t.next);
                    out.push(t.next);
                }
            }
        }
        for &s in out.iter() {
            mark[s as usize] = false;
        }
        out.sort_unstable();
    }

    /// Removes every `(eps, eps)` arc without changing the relation.
    pub fn remove_epsilon(&self) -> Fsm {
        if !self.arcs.iter().flatten().any(|t| t.label.is_epsilon()) {
            return self.clone();
        }
        let n = self.num_states();
        let mut mark = vec![false; n];
        let mut closure = Vec::new();
        let mut finals = vec![false; n];
        let mut arcs = vec![Vec::new(); n];
        for s in self.states() {
            self.eps_closure_into(&[s], &mut closure, &mut mark);
            let mut out = Vec::new();
            for &c in &closure {
                if self.is_final(c) {
                    finals[s as usize] = true;
                }
                out.extend(self.arcs(c).iter().filter(|t| !t.label.is_epsilon()).copied());
            }
            out.sort_unstable();
            out.dedup();
            arcs[s as usize] = out;
        }
        Fsm::from_parts(Arc::clone(&self.sigma), self.start, finals, arcs)
    }

    /// Epsilon-free, trimmed, with sorted arcs.
    pub fn normalize(&self) -> Fsm {
        self.remove_epsilon().trim()
    }

    /// Relabels this machine onto another alphabet with identical symbol
    /// names for every symbol that occurs on an arc.
    pub fn with_sigma(&self, sigma: &Arc<Alphabet>) -> Result<Fsm> {
        if Alphabet::same(&self.sigma, sigma) {
            return Ok(self.clone());
        }
        let map = |s: Sym| -> Result<Sym> {
            if s == EPS {
                Ok(EPS)
            } else {
                sigma.lookup(self.sigma.name(s))
            }
        };
        let mut arcs = Vec::with_capacity(self.arcs.len());
        for row in &self.arcs {
            let mut out = Vec::with_capacity(row.len());
            for t in row {
                out.push(Transition {
                    label: Label::new(map(t.label.input)?, map(t.label.output)?),
                    next: t.next,
                });
            }
            arcs.push(out);
        }
        Ok(Fsm::from_parts(Arc::clone(sigma), self.start, self.finals.clone(), arcs))
    }

    /// Applies `f` to every label; used for projections and inversion.
    pub(crate) fn map_labels<F: Fn(Label) -> Label>(&self, f: F) -> Fsm {
        let arcs = self
            .arcs
            .iter()
            .map(|row| row.iter().map(|t| Transition { label: f(t.label), next: t.next }).collect())
            .collect();
        Fsm::from_parts(Arc::clone(&self.sigma), self.start, self.finals.clone(), arcs)
    }

    /// Appends a disjoint copy of `other`'s states and returns the offset.
    pub(crate) fn absorb(&mut self, other: &Fsm) -> StateId {
        let off = self.num_states() as StateId;
        for s in other.states() {
            self.finals.push(other.is_final(s));
            self.arcs.push(
                other
                    .arcs(s)
                    .iter()
                    .map(|t| Transition { label: t.label, next: t.next + off })
                    .collect(),
            );
        }
        off
    }
}

impl fmt::Debug for Fsm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Fsm(start={}, states={})", self.start, self.num_states())?;
        for s in self.states() {
            for t in self.arcs(s) {
                writeln!(
                    f,
                    "  {} -> {} {}:{}",
                    s,
                    t.next,
                    self.sigma.name(t.label.input),
                    self.sigma.name(t.label.output)
                )?;
            }
            if self.is_final(s) {
                writeln!(f, "  {} final", s)?;
            }
        }
        Ok(())
    }
}
