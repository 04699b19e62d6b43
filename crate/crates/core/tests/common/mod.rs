#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use otfst::apply::{all_strings, apply, enumerate_domain};
use otfst::determinize::{determinize, is_deterministic, minimize};
use otfst::exactness::is_functional;
use otfst::regex::Compiler;
use otfst::{att, ops, rewrite, Alphabet, Fsm, Label, Sym, EPS};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Check = Result<(), String>;
pub type Pairs = BTreeSet<(Vec<Sym>, Vec<Sym>)>;

/// Input length up to which relations are compared by enumeration.
pub const LEN: usize = 5;

pub fn sigma() -> Arc<Alphabet> {
    Arc::new(Alphabet::default_sigma())
}

pub fn syms(s: &Arc<Alphabet>, names: &[&str]) -> Vec<Sym> {
    names.iter().map(|n| s.lookup(n).unwrap()).collect()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random recognizer over `alpha` with up to `max_states` states. Arcs may
/// be epsilon and may form cycles.
pub fn random_recognizer(r: &mut StdRng, s: &Arc<Alphabet>, alpha: &[Sym], max_states: u32) -> Fsm {
    let n = r.gen_range(1..=max_states);
    let mut m = Fsm::empty(s);
    for _ in 1..n {
        m.add_state();
    }
    for q in 0..n {
        m.set_final(q, r.gen_bool(0.4));
        for _ in 0..r.gen_range(0..=3) {
            let to = r.gen_range(0..n);
            let sym = if r.gen_bool(0.15) { EPS } else { alpha[r.gen_range(0..alpha.len())] };
            m.add_arc(q, Label::identity(sym), to);
        }
    }
    m
}

/// Random transducer over `alpha`. Arcs with an empty side only go to a
/// higher state, so every input has finitely many outputs and so does
/// every output under the inverse.
pub fn random_transducer(r: &mut StdRng, s: &Arc<Alphabet>, alpha: &[Sym], max_states: u32) -> Fsm {
    let n = r.gen_range(1..=max_states);
    let mut m = Fsm::empty(s);
    for _ in 1..n {
        m.add_state();
    }
    for q in 0..n {
        m.set_final(q, r.gen_bool(0.4));
        for _ in 0..r.gen_range(0..=3) {
            let pick = |r: &mut StdRng| alpha[r.gen_range(0..alpha.len())];
            let (i, o) = match r.gen_range(0..6) {
                0 => (EPS, pick(r)),
                1 => (pick(r), EPS),
                _ => (pick(r), pick(r)),
            };
            let to = if i == EPS || o == EPS {
                if q + 1 >= n {
                    continue;
                }
                r.gen_range(q + 1..n)
            } else {
                r.gen_range(0..n)
            };
            m.add_arc(q, Label::new(i, o), to);
        }
    }
    m
}

/// Language up to length [`LEN`], by enumeration of a determinized copy.
pub fn lang(m: &Fsm) -> BTreeSet<Vec<Sym>> {
    enumerate_domain(m, LEN)
}

/// The relation on every input over `alpha` up to length [`LEN`].
pub fn rel(t: &Fsm, alpha: &[Sym]) -> Result<Pairs, String> {
    let mut out = BTreeSet::new();
    for w in all_strings(alpha, LEN) {
        for o in apply(t, &w).map_err(|e| e.to_string())? {
            out.insert((w.clone(), o));
        }
    }
    Ok(out)
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn short(set: &BTreeSet<Vec<Sym>>) -> BTreeSet<Vec<Sym>> {
    set.iter().filter(|w| w.len() <= LEN).cloned().collect()
}

/// Boolean and regular operations on recognizers agree with the same
/// operations on enumerated languages.
pub fn recognizer_laws(seed: u64) -> Check {
    let s = sigma();
    let alpha = syms(&s, &["a", "b"]);
    let mut r = rng(seed);
    let a = random_recognizer(&mut r, &s, &alpha, 4);
    let b = random_recognizer(&mut r, &s, &alpha, 4);
    let c = random_recognizer(&mut r, &s, &alpha, 4);
    let (la, lb) = (lang(&a), lang(&b));
    let err = |what: &'static str| move || format!("seed {seed}: {what}");
    let e = |x: otfst::Error| x.to_string();

    let u = lang(&ops::union(&a, &b).map_err(e)?);
    ensure(u == la.union(&lb).cloned().collect(), err("union"))?;
    ensure(u == lang(&ops::union(&b, &a).map_err(e)?), err("union commutes"))?;
    let ab_c = ops::union(&ops::union(&a, &b).map_err(e)?, &c).map_err(e)?;
    let a_bc = ops::union(&a, &ops::union(&b, &c).map_err(e)?).map_err(e)?;
    ensure(lang(&ab_c) == lang(&a_bc), err("union associates"))?;

    let i = lang(&ops::intersect(&a, &b).map_err(e)?);
    ensure(i == la.intersection(&lb).cloned().collect(), err("intersection"))?;
    let d = lang(&ops::difference(&a, &b).map_err(e)?);
    ensure(d == la.difference(&lb).cloned().collect(), err("difference"))?;

    let universe: BTreeSet<Vec<Sym>> = all_strings(&alpha, LEN).into_iter().collect();
    let comp = ops::complement(&a).map_err(e)?;
    let over_ab = ops::star(&Fsm::symbol_set(&s, alpha.iter().copied()));
    let comp_ab = lang(&ops::intersect(&comp, &over_ab).map_err(e)?);
    ensure(comp_ab == universe.difference(&la).cloned().collect(), err("complement"))?;
    let sym_c = s.lookup("c").unwrap();
    ensure(!apply(&comp, &[sym_c]).map_err(e)?.is_empty(), err("complement is taken over the whole alphabet"))?;

    let cat: BTreeSet<Vec<Sym>> =
        la.iter().flat_map(|x| lb.iter().map(move |y| [x.as_slice(), y.as_slice()].concat())).collect();
    ensure(lang(&ops::concat(&a, &b).map_err(e)?) == short(&cat), err("concatenation"))?;
    let ab_c = ops::concat(&ops::concat(&a, &b).map_err(e)?, &c).map_err(e)?;
    let a_bc = ops::concat(&a, &ops::concat(&b, &c).map_err(e)?).map_err(e)?;
    ensure(lang(&ab_c) == lang(&a_bc), err("concatenation associates"))?;
    let dist_l = ops::concat(&a, &ops::union(&b, &c).map_err(e)?).map_err(e)?;
    let dist_r = ops::union(&ops::concat(&a, &b).map_err(e)?, &ops::concat(&a, &c).map_err(e)?).map_err(e)?;
    ensure(lang(&dist_l) == lang(&dist_r), err("concatenation distributes over union"))?;

    let mut star: BTreeSet<Vec<Sym>> = BTreeSet::from([Vec::new()]);
    loop {
        let next: BTreeSet<Vec<Sym>> = star
            .iter()
            .flat_map(|x| la.iter().map(move |y| [x.as_slice(), y.as_slice()].concat()))
            .filter(|w| w.len() <= LEN)
            .chain(star.iter().cloned())
            .collect();
        if next == star {
            break;
        }
        star = next;
    }
    let st = ops::star(&a);
    ensure(lang(&st) == star, err("star"))?;
    ensure(lang(&ops::star(&st)) == star, err("star is idempotent"))?;

    let det = determinize(&a);
    ensure(is_deterministic(&det), err("determinize gives a DFA"))?;
    ensure(lang(&det) == la, err("determinize preserves the language"))?;
    let min = minimize(&a);
    ensure(lang(&min) == la, err("minimize preserves the language"))?;
    ensure(min.num_states() <= det.num_states().max(1), err("minimize does not grow"))?;
    ensure(minimize(&min).num_states() == min.num_states(), err("minimize is idempotent"))?;
    let equiv = minimize(&ops::union(&a, &a).map_err(e)?);
    ensure(equiv.num_states() == min.num_states(), err("minimal machines are canonical"))?;
    Ok(())
}

/// Composition, inversion, domain and range agree with the same operations
/// on enumerated relations.
pub fn transducer_laws(seed: u64) -> Check {
    let s = sigma();
    let alpha = syms(&s, &["a", "b"]);
    let mut r = rng(seed);
    let t = random_transducer(&mut r, &s, &alpha, 4);
    let u = random_transducer(&mut r, &s, &alpha, 4);
    let v = random_transducer(&mut r, &s, &alpha, 3);
    let err = |what: &'static str| move || format!("seed {seed}: {what}");
    let e = |x: otfst::Error| x.to_string();

    let tu = ops::compose(&t, &u).map_err(e)?;
    for w in all_strings(&alpha, LEN) {
        let mut want = BTreeSet::new();
        for mid in apply(&t, &w).map_err(e)? {
            want.extend(apply(&u, &mid).map_err(e)?);
        }
        ensure(apply(&tu, &w).map_err(e)? == want, err("composition"))?;
    }
    let left = ops::compose(&tu, &v).map_err(e)?;
    let right = ops::compose(&t, &ops::compose(&u, &v).map_err(e)?).map_err(e)?;
    ensure(rel(&left, &alpha)? == rel(&right, &alpha)?, err("composition associates"))?;

    let pairs = rel(&t, &alpha)?;
    let inv = ops::inverse(&t);
    for (x, y) in &pairs {
        ensure(apply(&inv, y).map_err(e)?.contains(x), err("inverse contains swapped pairs"))?;
    }
    ensure(rel(&ops::inverse(&inv), &alpha)? == pairs, err("inverse is an involution"))?;

    let inputs: BTreeSet<Vec<Sym>> = pairs.iter().map(|(x, _)| x.clone()).collect();
    ensure(lang(&ops::domain(&t)) == inputs, err("domain"))?;
    for y in lang(&ops::range(&t)) {
        ensure(!apply(&inv, &y).map_err(e)?.is_empty(), err("range"))?;
    }

    let id = ops::identity(&ops::domain(&t)).map_err(e)?;
    ensure(rel(&ops::compose(&id, &t).map_err(e)?, &alpha)? == pairs, err("identity of the domain is neutral"))?;
    let tt = minimize(&t);
    ensure(rel(&tt, &alpha)? == pairs, err("minimize preserves the relation"))?;
    Ok(())
}

/// The functionality decision against enumeration: a functional verdict
/// means no short input has two outputs, a witness must really have two.
pub fn functionality_oracle(seed: u64) -> Check {
    let s = sigma();
    let alpha = syms(&s, &["a", "b"]);
    let mut r = rng(seed);
    let t = random_transducer(&mut r, &s, &alpha, 4);
    let e = |x: otfst::Error| x.to_string();
    match is_functional(&t).witness {
        None => {
            for w in all_strings(&alpha, 6) {
                let outs = apply(&t, &w).map_err(e)?;
                ensure(outs.len() <= 1, || format!("seed {seed}: judged functional but {w:?} has {} outputs", outs.len()))?;
            }
        }
        Some(wit) => {
            let outs = apply(&t, &wit.input).map_err(e)?;
            ensure(outs.len() >= 2, || format!("seed {seed}: witness {:?} has {} outputs", wit.input, outs.len()))?;
            for o in &wit.outputs {
                ensure(outs.contains(o), || format!("seed {seed}: witness output {o:?} not produced"))?;
            }
        }
    }
    Ok(())
}

/// Text export followed by import gives back the same machine.
pub fn att_round_trip(seed: u64) -> Check {
    let s = sigma();
    let alpha = syms(&s, &["a", "b", "@", "O["]);
    let mut r = rng(seed);
    let t = if seed.is_multiple_of(2) {
        random_transducer(&mut r, &s, &alpha, 5)
    } else {
        random_recognizer(&mut r, &s, &alpha, 5)
    };
    let text = att::export(&t);
    let back = att::import(&text, &s).map_err(|e| e.to_string())?;
    let err = |what: &'static str| move || format!("seed {seed}: {what}");
    ensure(back.num_states() <= t.num_states(), err("state count"))?;
    ensure(att::export(&back) == text, err("export is stable"))?;
    ensure(rel(&back, &alpha)? == rel(&t, &alpha)?, err("relation"))?;
    Ok(())
}

/// String-level obligatory leftmost-longest rewriting. Contexts are
/// finite sets; the left context is a suffix of the consumed input and
/// the right context a prefix of the rest.
pub fn rewrite_reference(w: &[Sym], targets: &[Vec<Sym>], out: &[Sym], left: &[Vec<Sym>], right: &[Vec<Sym>]) -> Vec<Sym> {
    let mut res = Vec::new();
    let mut i = 0;
    while i <= w.len() {
        let left_ok = left.iter().any(|l| w[..i].ends_with(l));
        let best = targets
            .iter()
            .filter(|d| !d.is_empty() && w[i..].starts_with(d))
            .filter(|d| right.iter().any(|rc| w[i + d.len()..].starts_with(rc)))
            .map(Vec::len)
            .max();
        match best {
            Some(n) if left_ok => {
                res.extend_from_slice(out);
                i += n;
            }
            _ => {
                if i == w.len() {
                    break;
                }
                res.push(w[i]);
                i += 1;
            }
        }
    }
    res
}

/// `replace(D x out, L, R)` is functional on every input and agrees with
/// [`rewrite_reference`]: every site is rewritten, none is skipped.
pub fn replace_obligatory(seed: u64) -> Check {
    let s = sigma();
    let alpha = syms(&s, &["a", "b"]);
    let c = s.lookup("c").unwrap();
    let mut r = rng(seed);
    let pick_strings = |r: &mut StdRng, min: usize, max: usize, k: usize| -> Vec<Vec<Sym>> {
        (0..k)
            .map(|_| (0..r.gen_range(min..=max)).map(|_| alpha[r.gen_range(0..2)]).collect())
            .collect()
    };
    let k = r.gen_range(1..=2);
    let targets = pick_strings(&mut r, 1, 2, k);
    let out: Vec<Sym> = (0..r.gen_range(0..=2)).map(|_| c).collect();
    let k = r.gen_range(1..=2);
    let left = pick_strings(&mut r, 0, 1, k);
    let k = r.gen_range(1..=2);
    let right = pick_strings(&mut r, 0, 1, k);

    let words = |set: &[Vec<Sym>]| {
        let items: Vec<Fsm> = set.iter().map(|w| Fsm::string(&s, w)).collect();
        ops::union_all(&s, items.iter()).unwrap()
    };
    let t = ops::cross_product(&words(&targets), &Fsm::string(&s, &out)).map_err(|e| e.to_string())?;
    let rep = rewrite::replace(&t, &words(&left), &words(&right)).map_err(|e| e.to_string())?;
    for w in all_strings(&alpha, 6) {
        let got = apply(&rep, &w).map_err(|e| e.to_string())?;
        let want = rewrite_reference(&w, &targets, &out, &left, &right);
        if got.len() != 1 || !got.contains(&want) {
            return Err(format!(
                "seed {seed}: replace({} x {}, {}, {}) on {} gave {:?}, expected {}",
                show(&s, &targets),
                s.render(&out),
                show(&s, &left),
                show(&s, &right),
                s.render(&w),
                got.iter().map(|o| s.render(o)).collect::<Vec<_>>(),
                s.render(&want)
            ));
        }
    }
    Ok(())
}

fn show(s: &Arc<Alphabet>, set: &[Vec<Sym>]) -> String {
    let parts: Vec<String> = set.iter().map(|w| format!("[{}]", s.render(w))).collect();
    format!("{{{}}}", parts.join(","))
}

/// Compiles `text` with the default alphabet.
pub fn compile(text: &str) -> Fsm {
    Compiler::new(&sigma()).compile_str(text).unwrap()
}
