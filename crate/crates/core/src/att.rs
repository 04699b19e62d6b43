//! AT&T text format.
//!
//! One arc per line as `src<TAB>dst<TAB>in<TAB>out`, a final state as a line
//! holding only its number, `<eps>` for the empty string. The start state is
//! the source of the first line. Lines are written state by state, start
//! state first, each state's arcs followed by its final line.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fsm::{Fsm, Label, StateId};
use crate::symbol::{Alphabet, Sym, EPS};

pub const EPS_TOKEN: &str = "<eps>";

pub fn export(m: &Fsm) -> String {
    let sigma = m.sigma();
    let name = |s: Sym| if s == EPS { EPS_TOKEN } else { sigma.name(s) };
    let mut out = String::new();
    let start = m.start();
    if m.arcs(start).is_empty() && !m.is_final(start) {
        return out;
    }
    let order = std::iter::once(start).chain(m.states().filter(|&s| s != start));
    for s in order {
        for t in m.arcs(s) {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", s, t.next, name(t.label.input), name(t.label.output));
        }
        if m.is_final(s) {
            let _ = writeln!(out, "{}", s);
        }
    }
    out
}

pub fn import(text: &str, sigma: &Arc<Alphabet>) -> Result<Fsm> {
    let sym = |tok: &str, line: usize| -> Result<Sym> {
        if tok == EPS_TOKEN {
            Ok(EPS)
        } else {
            sigma.id(tok).ok_or_else(|| Error::Att { line, msg: format!("unknown symbol `{tok}`") })
        }
    };
    let state = |tok: &str, line: usize| -> Result<StateId> {
        tok.parse::<StateId>()
            .map_err(|_| Error::Att { line, msg: format!("bad state number `{tok}`") })
    };
    let mut m = Fsm::empty(sigma);
    let mut start = None;
    let ensure = |m: &mut Fsm, s: StateId| {
        while m.num_states() <= s as usize {
            m.add_state();
        }
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(['\t', ' ']).filter(|f| !f.is_empty()).collect();
        let src = state(fields[0], line)?;
        ensure(&mut m, src);
        start.get_or_insert(src);
        match fields.len() {
            1 => m.set_final(src, true),
            3 | 4 => {
                let dst = state(fields[1], line)?;
                ensure(&mut m, dst);
                let input = sym(fields[2], line)?;
                let output = if fields.len() == 4 { sym(fields[3], line)? } else { input };
                m.add_arc(src, Label::new(input, output), dst);
            }
            n => {
                return Err(Error::Att { line, msg: format!("expected 1, 3 or 4 fields, found {n}") });
            }
        }
    }
    if let Some(s) = start {
        m.set_start(s);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops;

    #[test]
    fn export_import_is_bit_exact() {
        let sigma = Arc::new(Alphabet::default_sigma());
        let a = Fsm::pair(&sigma, sigma.id("a").unwrap(), EPS);
        let b = Fsm::symbol(&sigma, sigma.id("O[").unwrap());
        let m = ops::star(&ops::concat(&a, &b).unwrap()).normalize();
        let text = export(&m);
        assert!(text.contains("<eps>"));
        assert!(text.contains("O["));
        let back = import(&text, &sigma).unwrap();
        assert_eq!(export(&back), text);
    }

    #[test]
    fn start_state_is_first_source() {
        let sigma = Arc::new(Alphabet::new(["a"]).unwrap());
        let m = import("3\t1\ta\ta\n1\n", &sigma).unwrap();
        assert_eq!(m.start(), 3);
        assert_eq!(export(&m), "3\t1\ta\ta\n1\n");
    }

    #[test]
    fn bad_lines_are_rejected() {
        let sigma = Arc::new(Alphabet::new(["a"]).unwrap());
        assert!(matches!(import("0\t1\tz\tz\n", &sigma), Err(Error::Att { line: 1, .. })));
        assert!(matches!(import("0\t1\n", &sigma), Err(Error::Att { .. })));
        assert!(matches!(import("x\n", &sigma), Err(Error::Att { .. })));
    }

    #[test]
    fn empty_language_exports_as_empty_text() {
        let sigma = Arc::new(Alphabet::new(["a"]).unwrap());
        assert_eq!(export(&Fsm::empty(&sigma)), "");
        assert!(import("", &sigma).unwrap().is_empty());
    }
}
