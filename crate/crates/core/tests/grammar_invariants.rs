use std::sync::Arc;

use otfst::apply::{all_strings, apply};
use otfst::exactness::{check_grammar, find_precisions};
use otfst::grammars::syllable_grammar;
use otfst::ot::{compile_grammar, Evaluator, Grammar, Method};
use otfst::{Alphabet, Sym};

fn sigma() -> Arc<Alphabet> {
    Arc::new(Alphabet::default_sigma())
}

fn cv_inputs(s: &Arc<Alphabet>, n: usize) -> Vec<Vec<Sym>> {
    all_strings(&[s.lookup("b").unwrap(), s.lookup("a").unwrap()], n)
}

fn with_precisions(mut g: Grammar, p: &[u32]) -> Grammar {
    for (r, &x) in g.ranking.iter_mut().zip(p) {
        r.precision = x;
    }
    g
}

#[test]
fn optima_never_hold_two_empty_constituents_in_a_row() {
    let s = sigma();
    let empties = ["O[]", "N[]", "D[]"];
    for k in 1..=9 {
        let g = syllable_grammar(k, &s, Method::Counting).unwrap();
        let ev = Evaluator::new(&g).unwrap();
        for w in cv_inputs(&s, 7) {
            for out in ev.lattice_eval(&g.ranking, &w).unwrap() {
                let out = s.render(&out);
                for x in empties {
                    for y in empties {
                        assert!(!out.contains(&format!("{x}{y}")), "ordering {k}: {out}");
                    }
                }
            }
        }
    }
}

#[test]
fn matching_needs_no_more_precision_than_counting() {
    let s = sigma();
    for k in 1..=9 {
        let g = syllable_grammar(k, &s, Method::Counting).unwrap();
        let counting = find_precisions(&g, Method::Counting, Some(8), 16).unwrap();
        let capped: Vec<u32> = counting.iter().map(|&p| p.min(3)).collect();
        let mut m = with_precisions(g, &capped);
        m.set_method(Method::MatchingGlobal);
        let report = check_grammar(&m, Some(8)).unwrap();
        assert!(report.is_exact(), "ordering {k} at {capped:?}:\n{}", report.to_text());
    }
}

#[test]
fn raising_matching_precision_keeps_correct_results() {
    let s = sigma();
    let inputs = cv_inputs(&s, 6);
    for k in [7, 8, 9] {
        let g = syllable_grammar(k, &s, Method::MatchingGlobal).unwrap();
        let ev = Evaluator::new(&g).unwrap();
        let oracle: Vec<_> = inputs.iter().map(|w| ev.lattice_eval(&g.ranking, w).unwrap()).collect();
        let mut agreed: Option<Vec<bool>> = None;
        for p in 0..=2 {
            let t = compile_grammar(&with_precisions(g.clone(), &[p; 5])).unwrap();
            let now: Vec<bool> = inputs.iter().zip(&oracle).map(|(w, o)| &apply(&t, w).unwrap() == o).collect();
            if let Some(before) = &agreed {
                for (i, (&b, &n)) in before.iter().zip(&now).enumerate() {
                    assert!(!b || n, "ordering {k}: precision {p} breaks {}", s.render(&inputs[i]));
                }
            }
            agreed = Some(now);
        }
        assert!(agreed.unwrap().iter().all(|&x| x), "ordering {k} still inexact at precision 2");
    }
}

#[test]
fn oracle_examples() {
    let s = sigma();
    let g = syllable_grammar(2, &s, Method::Counting).unwrap();
    let w = s.tokenize("bebop").unwrap();
    let got: Vec<String> = otfst::ot::brute_force_eval(&g, &w).unwrap().iter().map(|o| s.render(o)).collect();
    assert_eq!(got, ["O[b]N[e]O[b]N[o]X[p]"]);
    let empty: Vec<String> = otfst::ot::brute_force_eval(&g, &[]).unwrap().iter().map(|o| s.render(o)).collect();
    assert_eq!(empty, [""]);
}
