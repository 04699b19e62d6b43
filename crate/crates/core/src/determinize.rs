//! Subset construction and minimization.
//!
//! Transducers are handled by treating every `(input, output)` pair as one
//! atomic label. The result is a deterministic automaton over pair labels,
//! which is what the state counts reported elsewhere refer to.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Arc;

use crate::fsm::{Fsm, Label, StateId, Transition};

/// Subset construction over pair labels, with `(eps, eps)` arcs as the only
/// epsilons. The result is trimmed.
pub fn determinize(m: &Fsm) -> Fsm {
    let n = m.num_states();
    let mut mark = vec![false; n];
    let mut closure = Vec::new();
    m.eps_closure_into(&[m.start()], &mut closure, &mut mark);

    let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<StateId>> = Vec::new();
    index.insert(closure.clone(), 0);
    subsets.push(closure.clone());

    let mut finals = Vec::new();
    let mut arcs: Vec<Vec<Transition>> = Vec::new();
    let mut moves: Vec<(u32, StateId)> = Vec::new();
    let mut targets: Vec<StateId> = Vec::new();

    let mut cur = 0;
    while cur < subsets.len() {
        let subset = std::mem::take(&mut subsets[cur]);
        finals.push(subset.iter().any(|&s| m.is_final(s)));
        moves.clear();
        for &s in &subset {
            for t in m.arcs(s) {
                if !t.label.is_epsilon() {
                    moves.push((t.label.key(), t.next));
                }
            }
        }
        moves.sort_unstable();
        moves.dedup();
        let mut row = Vec::new();
        let mut i = 0;
        while i < moves.len() {
            let key = moves[i].0;
            targets.clear();
            while i < moves.len() && moves[i].0 == key {
                targets.push(moves[i].1);
                i += 1;
            }
            m.eps_closure_into(&targets, &mut closure, &mut mark);
            let id = match index.entry(closure.clone()) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    let id = subsets.len() as StateId;
                    e.insert(id);
                    subsets.push(closure.clone());
                    id
                }
            };
            row.push(Transition { label: Label::from_key(key), next: id });
        }
        arcs.push(row);
        subsets[cur] = subset;
        cur += 1;
    }
    Fsm::from_parts(Arc::clone(m.sigma()), 0, finals, arcs).trim()
}

/// True when no state has two arcs with the same label and there are no
/// `(eps, eps)` arcs.
pub fn is_deterministic(m: &Fsm) -> bool {
    m.states().all(|s| {
        let arcs = m.arcs(s);
        let mut keys: Vec<u32> = arcs.iter().map(|t| t.label.key()).collect();
        keys.sort_unstable();
        let len = keys.len();
        keys.dedup();
        keys.len() == len && arcs.iter().all(|t| !t.label.is_epsilon())
    })
}

/// Minimal deterministic automaton over pair labels.
pub fn minimize(m: &Fsm) -> Fsm {
    let d = if is_deterministic(m) { m.trim() } else { determinize(m) };
    minimize_dfa(&d)
}

/// Moore-style partition refinement on a trimmed deterministic machine.
fn minimize_dfa(d: &Fsm) -> Fsm {
    let n = d.num_states();
    if n <= 1 {
        return d.trim();
    }
    let mut class: Vec<u32> = d.states().map(|s| u32::from(d.is_final(s))).collect();
    let mut count = {
        let mut c = class.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    let mut sig: Vec<u32> = Vec::new();
    loop {
        let mut table: HashMap<Vec<u32>, u32> = HashMap::with_capacity(count * 2);
        let mut next = vec![0u32; n];
        for s in d.states() {
            sig.clear();
            sig.push(class[s as usize]);
            for t in d.arcs(s) {
                sig.push(t.label.key());
                sig.push(class[t.next as usize]);
            }
            let fresh = table.len() as u32;
            let id = *table.entry(sig.clone()).or_insert(fresh);
            next[s as usize] = id;
        }
        let new_count = table.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut finals = vec![false; count];
    let mut arcs: Vec<Vec<Transition>> = vec![Vec::new(); count];
    let mut done = vec![false; count];
    for s in d.states() {
        let c = class[s as usize] as usize;
        if done[c] {
            continue;
        }
        done[c] = true;
        finals[c] = d.is_final(s);
        arcs[c] = d
            .arcs(s)
            .iter()
            .map(|t| Transition { label: t.label, next: class[t.next as usize] })
            .collect();
    }
    let start = class[d.start() as usize];
    Fsm::from_parts(Arc::clone(d.sigma()), start, finals, arcs).trim()
}

/// Adds a sink so that every state has an arc for every symbol of the
/// alphabet. Expects a deterministic recognizer.
pub(crate) fn complete(d: &Fsm) -> Fsm {
    let sigma = Arc::clone(d.sigma());
    let mut m = d.clone();
    let sink = m.add_state();
    for s in m.states() {
        let present: Vec<u16> = m.arcs(s).iter().map(|t| t.label.input).collect();
        for sym in sigma.symbols() {
            if !present.contains(&sym) {
                m.add_arc(s, Label::identity(sym), sink);
            }
        }
    }
    m
}
