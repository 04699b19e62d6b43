//! Built-in grammars: syllabification with five constraints under nine
//! rankings, and three single-constraint toy grammars.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ot::{Grammar, Method};
use crate::regex::{parse_expr, Expr};
use crate::symbol::Alphabet;

/// Syllable structure. Inputs are strings of consonants and vowels; Gen
/// brackets every segment as onset, nucleus, coda or unparsed material and
/// may insert empty constituents anywhere.
pub const SYLLABLE_GRAMMAR: &str = r"% syllabification
macro(cons, {b,c,d,f,g,h,j,k,l,m,n,p,q,r,s,t,v,w,x,y,z}).
macro(vowel, {a,e,o,u,i}).
macro(letter, {cons,vowel}).

macro(o_br, 'O[').
macro(n_br, 'N[').
macro(d_br, 'D[').
macro(x_br, 'X[').
macro(r_br, ']').
macro(bracket, {o_br,n_br,d_br,x_br,r_br}).

macro(onset, [o_br,cons^,r_br]).
macro(nucleus, [n_br,vowel^,r_br]).
macro(coda, [d_br,cons^,r_br]).
macro(unparsed, [x_br,letter,r_br]).

macro(gen, {cons,vowel}* o overparse o parse o syllable_structure).
macro(overparse, intro_each_pos([{o_br,d_br,n_br},r_br]^)).
macro(parse, replace([[] x {o_br,d_br,x_br},cons,[] x r_br])
          o replace([[] x {n_br,x_br},vowel,[] x r_br])).
macro(syllable_structure, ignore([onset^,nucleus,coda^],unparsed)*).

macro(mark_violation(parse), replace(([] x @),x_br,[])).
macro(mark_violation(no_coda), replace(([] x @),d_br,[])).
macro(mark_violation(fill_nuc), replace(([] x @),[n_br,r_br],[])).
macro(mark_violation(fill_ons), replace(([] x @),[o_br,r_br],[])).
macro(mark_violation(have_ons), replace(([] x @),[],n_br)
                                o replace((@ x []),onset,[])).

gen = gen;
ranking = have_ons >> fill_ons >> no_coda >> fill_nuc >> parse;
";

pub const HILLER_GRAMMAR: &str = r"% a^n b^m maps to itself if n <= m, to b^n a^m if m <= n
macro(mark_violation('A'), replace([] x @, a, [])).
gen = {[(a x b)*,(b x a)*],[(a x a)*,(b x b)*]};
ranking = 'A';
";

/// The same relation with Gen keeping the input: input symbols are tagged
/// `0`, output symbols `1`, and the constraint is against `[a,1]`.
pub const HILLER_MARKUP_GRAMMAR: &str = r"% tagged input and output
macro(mark_violation('A'), replace([] x @, [a,1], [])).
gen = {[(a x [a,0,b,1])*,(b x [b,0,a,1])*],
       [(a x [a,0,a,1])*,(b x [b,0,b,1])*]};
ranking = 'A';
erase = [{a,b},1];
erase_guard = 1;
";

/// One `a` before the input or two after it; the constraint forbids `a`.
pub const LOCALITY_GRAMMAR: &str = r"% inserted material is on opposite ends
macro(mark_violation('A'), replace([] x @, a, [])).
gen = {[([] x a),{b,c}*],[{b,c}*,([] x [a,a])]};
ranking = 'A';
erase = a;
";

/// The nine rankings of the syllabification constraints, highest first.
pub const ORDERINGS: [[&str; 5]; 9] = [
    ["have_ons", "fill_ons", "no_coda", "fill_nuc", "parse"],
    ["have_ons", "no_coda", "fill_nuc", "parse", "fill_ons"],
    ["no_coda", "fill_nuc", "parse", "fill_ons", "have_ons"],
    ["have_ons", "fill_ons", "no_coda", "parse", "fill_nuc"],
    ["have_ons", "no_coda", "parse", "fill_nuc", "fill_ons"],
    ["no_coda", "parse", "fill_nuc", "fill_ons", "have_ons"],
    ["have_ons", "fill_ons", "parse", "fill_nuc", "no_coda"],
    ["have_ons", "parse", "fill_ons", "fill_nuc", "no_coda"],
    ["parse", "fill_ons", "have_ons", "fill_nuc", "no_coda"],
];

pub const BUILTIN_NAMES: &[&str] = &[
    "ps-syll:1",
    "ps-syll:2",
    "ps-syll:3",
    "ps-syll:4",
    "ps-syll:5",
    "ps-syll:6",
    "ps-syll:7",
    "ps-syll:8",
    "ps-syll:9",
    "hiller",
    "hiller-markup",
    "locality-footnote",
];

/// Gen of the syllabification grammar, before macro expansion.
pub fn syllable_gen() -> Expr {
    parse_expr("{cons,vowel}* o overparse o parse o syllable_structure").expect("valid expression")
}

/// Syllabification under ranking `ordering` (1 to 9).
pub fn syllable_grammar(ordering: usize, sigma: &Arc<Alphabet>, method: Method) -> Result<Grammar> {
    let order = ordering
        .checked_sub(1)
        .and_then(|i| ORDERINGS.get(i))
        .ok_or_else(|| Error::UnknownGrammar(format!("ps-syll:{ordering}")))?;
    let mut g = Grammar::parse(&format!("ps-syll:{ordering}"), SYLLABLE_GRAMMAR, sigma, method)?;
    g.reorder(order)?;
    Ok(g)
}

pub fn hiller_grammar(sigma: &Arc<Alphabet>, method: Method) -> Result<Grammar> {
    Grammar::parse("hiller", HILLER_GRAMMAR, sigma, method)
}

pub fn hiller_markup_grammar(sigma: &Arc<Alphabet>, method: Method) -> Result<Grammar> {
    Grammar::parse("hiller-markup", HILLER_MARKUP_GRAMMAR, sigma, method)
}

pub fn locality_example_grammar(sigma: &Arc<Alphabet>, method: Method) -> Result<Grammar> {
    Grammar::parse("locality-footnote", LOCALITY_GRAMMAR, sigma, method)
}

/// Source text of a built-in grammar. The syllabification rankings share
/// one text and differ only in their ranking.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    match name {
        "hiller" => Some(HILLER_GRAMMAR),
        "hiller-markup" => Some(HILLER_MARKUP_GRAMMAR),
        "locality-footnote" => Some(LOCALITY_GRAMMAR),
        n if BUILTIN_NAMES.contains(&n) => Some(SYLLABLE_GRAMMAR),
        _ => None,
    }
}

/// Looks up a built-in grammar by name, every constraint using `method`
/// at precision 0.
pub fn builtin(name: &str, sigma: &Arc<Alphabet>, method: Method) -> Result<Grammar> {
    match name {
        "hiller" => hiller_grammar(sigma, method),
        "hiller-markup" => hiller_markup_grammar(sigma, method),
        "locality-footnote" => locality_example_grammar(sigma, method),
        _ => match name.strip_prefix("ps-syll:").and_then(|n| n.parse::<usize>().ok()) {
            Some(k) => syllable_grammar(k, sigma, method),
            None => Err(Error::UnknownGrammar(name.to_string())),
        },
    }
}
