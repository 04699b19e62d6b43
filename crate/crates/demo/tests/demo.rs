use otfst_demo::{apply, check, compare};

#[test]
fn apply_builtin() {
    assert_eq!(apply("ps-syll:2", "match", "", "bebop").unwrap(), "O[b]N[e]O[b]N[o]X[p]");
    assert_eq!(apply("ps-syll:9", "match", "fill_nuc=1", "arts").unwrap(), "N[a]D[r]O[t]N[]D[s]");
}

#[test]
fn apply_custom_source() {
    let src = "macro(mark_violation(nob), replace([] x @, b, [])).\n\
               gen = {[a*, (b x [])*, a*], [a*, b*, a*]};\nranking = nob;";
    assert_eq!(apply(src, "count", "", "abba").unwrap(), "aa");
}

#[test]
fn compare_counting_and_matching() {
    let c = compare("ps-syll:2", "", "bebop").unwrap();
    assert_eq!(c.counting().lines().count(), 3);
    assert_eq!(c.matching(), "O[b]N[e]O[b]N[o]X[p]");
    assert_eq!(c.matching_states, 22);
    assert!(c.counting_states > 0);
}

#[test]
fn check_report() {
    assert!(check("ps-syll:7", "match", "fill_nuc=1", 0).unwrap().ends_with("exact: yes\n"));
    assert!(check("hiller", "count", "2", 0).unwrap().ends_with("exact: no\n"));
    assert!(check("locality-footnote", "count", "1", 6).unwrap().contains("exact up to length 6"));
}

#[test]
fn errors_are_messages() {
    assert!(apply("ps-syll:1", "fast", "", "a").unwrap_err().contains("unknown method"));
    assert!(apply("ps-syll:1", "count", "nothing=2", "a").unwrap_err().contains("nothing"));
    assert!(apply("gen = ", "count", "", "a").is_err());
}
