//! Running machines on concrete strings.

use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};

use crate::determinize::determinize;
use crate::error::{Error, Result};
use crate::fsm::{Fsm, Label, StateId};
use crate::ops;
use crate::symbol::{Sym, EPS};

/// The image of `input` under `t`.
///
/// Fails with [`Error::InfiniteAmbiguity`] when output-producing epsilon
/// cycles make the image infinite.
pub fn apply(t: &Fsm, input: &[Sym]) -> Result<BTreeSet<Vec<Sym>>> {
    let lattice = output_lattice(t, input)?;
    enumerate_language(&lattice)
}

/// [`apply`] on text, tokenized against the machine's alphabet, with the
/// results rendered back to text.
pub fn apply_str(t: &Fsm, input: &str) -> Result<BTreeSet<String>> {
    let syms = t.sigma().tokenize(input)?;
    Ok(apply(t, &syms)?.iter().map(|o| t.sigma().render(o)).collect())
}

/// Recognizer for the outputs `t` produces on `input`, built from the
/// position-by-state product.
fn output_lattice(t: &Fsm, input: &[Sym]) -> Result<Fsm> {
    let sigma = t.sigma();
    for &s in input {
        if s == EPS || s as usize > sigma.len() {
            return Err(Error::UnknownSymbol(format!("#{s}")));
        }
    }
    let mut m = Fsm::empty(sigma);
    let mut index: HashMap<(usize, StateId), StateId> = HashMap::new();
    index.insert((0, t.start()), 0);
    let mut queue = vec![(0usize, t.start())];
    while let Some((pos, q)) = queue.pop() {
        let id = index[&(pos, q)];
        if pos == input.len() && t.is_final(q) {
            m.set_final(id, true);
        }
        for tr in t.arcs(q) {
            let npos = if tr.label.input == EPS {
                pos
            } else if pos < input.len() && tr.label.input == input[pos] {
                pos + 1
            } else {
                continue;
            };
            let key = (npos, tr.next);
            let next = match index.entry(key) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    let n = m.add_state();
                    e.insert(n);
                    queue.push(key);
                    n
                }
            };
            m.add_arc(id, Label::identity(tr.label.output), next);
        }
    }
    Ok(m)
}

/// Up to `k` outputs of `t` on `input`, shortest first. Unlike [`apply`]
/// this also works when the image is infinite.
pub fn some_outputs(t: &Fsm, input: &[Sym], k: usize) -> Result<Vec<Vec<Sym>>> {
    let d = determinize(&output_lattice(t, input)?);
    let mut out = Vec::new();
    if d.is_empty() {
        return Ok(out);
    }
    let mut queue = std::collections::VecDeque::from([(d.start(), Vec::new())]);
    while let Some((s, prefix)) = queue.pop_front() {
        if out.len() == k {
            break;
        }
        if d.is_final(s) {
            out.push(prefix.clone());
        }
        for t in d.arcs(s) {
            let mut p = prefix.clone();
            p.push(t.label.output);
            queue.push_back((t.next, p));
        }
    }
    Ok(out)
}

/// All strings of a recognizer; an error if there are infinitely many.
pub(crate) fn enumerate_language(m: &Fsm) -> Result<BTreeSet<Vec<Sym>>> {
    let m = m.normalize();
    if has_cycle(&m) {
        return Err(Error::InfiniteAmbiguity);
    }
    let d = determinize(&m);
    let mut out = BTreeSet::new();
    if d.is_empty() {
        return Ok(out);
    }
    let mut stack: Vec<(StateId, Vec<Sym>)> = vec![(d.start(), Vec::new())];
    while let Some((s, prefix)) = stack.pop() {
        if d.is_final(s) {
            out.insert(prefix.clone());
        }
        for t in d.arcs(s) {
            let mut p = prefix.clone();
            p.push(t.label.output);
            stack.push((t.next, p));
        }
    }
    Ok(out)
}

fn has_cycle(m: &Fsm) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut color = vec![0u8; m.num_states()];
    for root in m.states() {
        if color[root as usize] != 0 {
            continue;
        }
        let mut stack: Vec<(StateId, usize)> = vec![(root, 0)];
        color[root as usize] = 1;
        while let Some(&mut (s, ref mut i)) = stack.last_mut() {
            let arcs = m.arcs(s);
            if *i < arcs.len() {
                let next = arcs[*i].next;
                *i += 1;
                match color[next as usize] {
                    0 => {
                        color[next as usize] = 1;
                        stack.push((next, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                color[s as usize] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// Every `(input, output)` pair of `t` with `|input| <= max_input_len`.
pub fn enumerate_pairs(t: &Fsm, max_input_len: usize) -> Result<BTreeSet<(Vec<Sym>, Vec<Sym>)>> {
    let mut out = BTreeSet::new();
    for input in enumerate_domain(t, max_input_len) {
        for o in apply(t, &input)? {
            out.insert((input.clone(), o));
        }
    }
    Ok(out)
}

/// Strings of the domain of `t` up to the given length, in lexicographic
/// order of symbol ids.
pub fn enumerate_domain(t: &Fsm, max_len: usize) -> BTreeSet<Vec<Sym>> {
    let d = determinize(&ops::domain(t));
    let mut out = BTreeSet::new();
    if d.is_empty() {
        return out;
    }
    let mut stack: Vec<(StateId, Vec<Sym>)> = vec![(d.start(), Vec::new())];
    while let Some((s, prefix)) = stack.pop() {
        if d.is_final(s) {
            out.insert(prefix.clone());
        }
        if prefix.len() == max_len {
            continue;
        }
        for tr in d.arcs(s) {
            let mut p = prefix.clone();
            p.push(tr.label.input);
            stack.push((tr.next, p));
        }
    }
    out
}

/// All strings over `symbols` of length at most `max_len`, shortest first.
pub fn all_strings(symbols: &[Sym], max_len: usize) -> Vec<Vec<Sym>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * symbols.len());
        for p in &layer {
            for &s in symbols {
                let mut q: Vec<Sym> = p.clone();
                q.push(s);
                next.push(q);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Convenience used by tests and tools: the machine restricted to the given
/// inputs, as a set of pairs.
pub fn image_table(t: &Fsm, inputs: &[Vec<Sym>]) -> Result<BTreeSet<(Vec<Sym>, Vec<Sym>)>> {
    let mut out = BTreeSet::new();
    for w in inputs {
        for o in apply(t, w)? {
            out.insert((w.clone(), o));
        }
    }
    Ok(out)
}
