//! Regular operations on languages and relations.
//!
//! All operations are pure; they never modify their operands. Results may
//! contain `(eps, eps)` arcs and unreachable states; call
//! [`Fsm::normalize`] or [`minimize`](crate::determinize::minimize) when a
//! compact machine matters.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Arc;

use crate::determinize::{complete, determinize};
use crate::error::Result;
use crate::fsm::{Fsm, Label, StateId, Transition};
use crate::symbol::EPS;

pub fn union(a: &Fsm, b: &Fsm) -> Result<Fsm> {
    a.check_sigma(b)?;
    let mut m = Fsm::empty(a.sigma());
    let oa = m.absorb(a);
    let ob = m.absorb(b);
    m.add_arc(0, Label::EPSILON, a.start() + oa);
    m.add_arc(0, Label::EPSILON, b.start() + ob);
    Ok(m)
}

/// Union of any number of operands; the empty list is the empty language.
pub fn union_all<'a, I: IntoIterator<Item = &'a Fsm>>(sigma: &Arc<crate::symbol::Alphabet>, items: I) -> Result<Fsm> {
    let mut m = Fsm::empty(sigma);
    for x in items {
        let probe = Fsm::empty(sigma);
        probe.check_sigma(x)?;
        let off = m.absorb(x);
        m.add_arc(0, Label::EPSILON, x.start() + off);
    }
    Ok(m)
}

pub fn concat(a: &Fsm, b: &Fsm) -> Result<Fsm> {
    a.check_sigma(b)?;
    let mut m = a.clone();
    let off = m.absorb(b);
    for s in a.states() {
        if a.is_final(s) {
            m.set_final(s, false);
            m.add_arc(s, Label::EPSILON, b.start() + off);
        }
    }
    Ok(m)
}

pub fn concat_all<'a, I: IntoIterator<Item = &'a Fsm>>(sigma: &Arc<crate::symbol::Alphabet>, items: I) -> Result<Fsm> {
    let mut acc = Fsm::epsilon(sigma);
    for x in items {
        acc = concat(&acc, x)?;
    }
    Ok(acc)
}

pub fn star(a: &Fsm) -> Fsm {
    let mut m = Fsm::epsilon(a.sigma());
    let off = m.absorb(a);
    m.add_arc(0, Label::EPSILON, a.start() + off);
    for s in a.states() {
        if a.is_final(s) {
            m.add_arc(s + off, Label::EPSILON, 0);
        }
    }
    m
}

pub fn plus(a: &Fsm) -> Fsm {
    concat(a, &star(a)).expect("same alphabet")
}

pub fn option(a: &Fsm) -> Fsm {
    union(a, &Fsm::epsilon(a.sigma())).expect("same alphabet")
}

/// `?*` over the machine's alphabet.
pub fn sigma_star(sigma: &Arc<crate::symbol::Alphabet>) -> Fsm {
    let mut m = Fsm::epsilon(sigma);
    for s in sigma.symbols() {
        m.add_arc(0, Label::identity(s), 0);
    }
    m
}

pub fn intersect(a: &Fsm, b: &Fsm) -> Result<Fsm> {
    a.check_sigma(b)?;
    a.require_recognizer("intersection")?;
    b.require_recognizer("intersection")?;
    let a = a.normalize();
    let b = b.normalize();
    let mut m = Fsm::empty(a.sigma());
    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut queue = vec![(a.start(), b.start())];
    index.insert((a.start(), b.start()), 0);
    while let Some((p, q)) = queue.pop() {
        let id = index[&(p, q)];
        m.set_final(id, a.is_final(p) && b.is_final(q));
        for ta in a.arcs(p) {
            for tb in arcs_with_input(&b, q, ta.label.input) {
                let key = (ta.next, tb.next);
                let next = match index.entry(key) {
                    Entry::Occupied(e) => *e.get(),
                    Entry::Vacant(e) => {
                        let n = m.add_state();
                        e.insert(n);
                        queue.push(key);
                        n
                    }
                };
                m.add_arc(id, ta.label, next);
            }
        }
    }
    Ok(m)
}

/// `Σ* - L(a)` over the full alphabet.
pub fn complement(a: &Fsm) -> Result<Fsm> {
    a.require_recognizer("complement")?;
    let mut c = complete(&determinize(a));
    for s in c.states() {
        let f = c.is_final(s);
        c.set_final(s, !f);
    }
    Ok(c.trim())
}

pub fn difference(a: &Fsm, b: &Fsm) -> Result<Fsm> {
    a.check_sigma(b)?;
    a.require_recognizer("difference")?;
    b.require_recognizer("difference")?;
    intersect(a, &complement(b)?)
}

/// `$E`: all strings containing a substring in `L(a)`.
pub fn containment(a: &Fsm) -> Result<Fsm> {
    a.require_recognizer("containment")?;
    let any = sigma_star(a.sigma());
    concat(&concat(&any, a)?, &any)
}

/// Relation pairing every string of `a` with every string of `b`. Symbols
/// are aligned one-to-one while both sides have material left.
pub fn cross_product(a: &Fsm, b: &Fsm) -> Result<Fsm> {
    a.check_sigma(b)?;
    a.require_recognizer("cross-product")?;
    b.require_recognizer("cross-product")?;
    let a = a.normalize();
    let b = b.normalize();
    let mut m = Fsm::empty(a.sigma());
    // phase 0: both sides advance; 1: only `a` (b is parked in a final
    // state); 2: only `b`.
    let mut index: HashMap<(StateId, StateId, u8), StateId> = HashMap::new();
    index.insert((a.start(), b.start(), 0), 0);
    let mut queue = vec![(a.start(), b.start(), 0u8)];
    let mut push = |key: (StateId, StateId, u8), m: &mut Fsm, queue: &mut Vec<_>| -> StateId {
        match index.entry(key) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let n = m.add_state();
                e.insert(n);
                queue.push(key);
                n
            }
        }
    };
    while let Some(key) = queue.pop() {
        let id = push(key, &mut m, &mut queue);
        let (p, q, phase) = key;
        let fin = match phase {
            0 => a.is_final(p) && b.is_final(q),
            1 => a.is_final(p),
            _ => b.is_final(q),
        };
        m.set_final(id, fin);
        if phase == 0 {
            for ta in a.arcs(p) {
                for tb in b.arcs(q) {
                    let n = push((ta.next, tb.next, 0), &mut m, &mut queue);
                    m.add_arc(id, Label::new(ta.label.input, tb.label.input), n);
                }
            }
        }
        if (phase == 0 && b.is_final(q)) || phase == 1 {
            for ta in a.arcs(p) {
                let n = push((ta.next, q, 1), &mut m, &mut queue);
                m.add_arc(id, Label::new(ta.label.input, EPS), n);
            }
        }
        if (phase == 0 && a.is_final(p)) || phase == 2 {
            for tb in b.arcs(q) {
                let n = push((p, tb.next, 2), &mut m, &mut queue);
                m.add_arc(id, Label::new(EPS, tb.label.input), n);
            }
        }
    }
    Ok(m)
}

/// Arcs of `m` leaving `s` whose input symbol is `input`. Requires arcs to be
/// sorted, which holds for trimmed machines.
fn arcs_with_input(m: &Fsm, s: StateId, input: u16) -> &[Transition] {
    let arcs = m.arcs(s);
    let lo = arcs.partition_point(|t| t.label.input < input);
    let hi = arcs.partition_point(|t| t.label.input <= input);
    &arcs[lo..hi]
}

/// Relational composition: `(x, z)` is in the result iff some `y` has
/// `(x, y)` in `a` and `(y, z)` in `b`.
///
/// Epsilon moves are sequenced: within each run between two matched
/// symbols, all output-epsilon moves of `a` come before the input-epsilon
/// moves of `b`. This removes redundant interleavings without losing pairs.
pub fn compose(a: &Fsm, b: &Fsm) -> Result<Fsm> {
    a.check_sigma(b)?;
    let a = a.normalize();
    let b = b.normalize();
    let mut m = Fsm::empty(a.sigma());
    let mut index: HashMap<(StateId, StateId, bool), StateId> = HashMap::new();
    index.insert((a.start(), b.start(), false), 0);
    let mut queue = vec![(a.start(), b.start(), false)];
    let mut intern = |key: (StateId, StateId, bool), m: &mut Fsm, queue: &mut Vec<_>| -> StateId {
        match index.entry(key) {
            Entry::Occupied(e) => *e.get(),
            Entry::Vacant(e) => {
                let n = m.add_state();
                e.insert(n);
                queue.push(key);
                n
            }
        }
    };
    let mut pending: Vec<(Label, (StateId, StateId, bool))> = Vec::new();
    while let Some(key) = queue.pop() {
        let id = intern(key, &mut m, &mut queue);
        let (p, q, b_moved) = key;
        m.set_final(id, a.is_final(p) && b.is_final(q));
        pending.clear();
        for ta in a.arcs(p) {
            if ta.label.output == EPS {
                if !b_moved {
                    pending.push((Label::new(ta.label.input, EPS), (ta.next, q, false)));
                }
            } else {
                for tb in arcs_with_input(&b, q, ta.label.output) {
                    pending.push((Label::new(ta.label.input, tb.label.output), (ta.next, tb.next, false)));
                }
            }
        }
        for tb in arcs_with_input(&b, q, EPS) {
            pending.push((Label::new(EPS, tb.label.output), (p, tb.next, true)));
        }
        for &(label, next) in &pending {
            let n = intern(next, &mut m, &mut queue);
            m.add_arc(id, label, n);
        }
    }
    Ok(m)
}

/// Input projection.
pub fn domain(t: &Fsm) -> Fsm {
    t.map_labels(|l| Label::identity(l.input))
}

/// Output projection.
pub fn range(t: &Fsm) -> Fsm {
    t.map_labels(|l| Label::identity(l.output))
}

/// Identity transduction of a recognizer.
pub fn identity(a: &Fsm) -> Result<Fsm> {
    a.require_recognizer("identity")?;
    Ok(a.clone())
}

pub fn inverse(t: &Fsm) -> Fsm {
    t.map_labels(Label::inverse)
}

/// Maps every string of `a` to the empty string.
pub fn delete(a: &Fsm) -> Fsm {
    a.map_labels(|l| Label::new(l.input, EPS))
}

/// Maps the empty string to every string of `a`.
pub fn insert(a: &Fsm) -> Fsm {
    a.map_labels(|l| Label::new(EPS, l.output))
}
