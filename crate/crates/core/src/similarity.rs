//! Similarity measures used by the fine-grained reuse validator: a dice
//! coefficient over node-kind multisets, a normalized Levenshtein distance
//! over statement texts, and their mean.

use crate::ast::{node_kind_multiset, AstNode};

/// Levenshtein edit distance over Unicode scalar values, two-row rolling
/// variant.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }

    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let cost = usize::from(ca != cb);
            cur[j + 1] = (prev[j + 1] + 1).min(cur[j] + 1).min(prev[j] + cost);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Dice coefficient over the node-kind multisets of the two subtrees,
/// roots excluded. Intersection is the per-kind minimum. Two empty
/// multisets count as identical.
pub fn structural_similarity(a: &AstNode, b: &AstNode) -> f64 {
    let ma = node_kind_multiset(a);
    let mb = node_kind_multiset(b);
    let total_a: usize = ma.values().sum();
    let total_b: usize = mb.values().sum();
    if total_a == 0 && total_b == 0 {
        return 1.0;
    }
    let common: usize = ma
        .iter()
        .map(|(kind, &count)| count.min(mb.get(kind).copied().unwrap_or(0)))
        .sum();
    2.0 * common as f64 / (total_a + total_b) as f64
}

/// Normalized Levenshtein similarity over the verbatim node texts
/// (leading/trailing whitespace trimmed). Two empty texts count as
/// identical.
pub fn literal_similarity(a: &AstNode, b: &AstNode) -> f64 {
    literal_similarity_text(a.text().trim(), b.text().trim())
}

pub fn literal_similarity_text(a: &str, b: &str) -> f64 {
    let len_a = a.chars().count();
    let len_b = b.chars().count();
    let max_len = len_a.max(len_b);
    if max_len == 0 {
        return 1.0;
    }
    1.0 - levenshtein(a, b) as f64 / max_len as f64
}

/// Mean of structural and literal similarity.
pub fn context_similarity(a: &AstNode, b: &AstNode) -> f64 {
    0.5 * structural_similarity(a, b) + 0.5 * literal_similarity(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{parse_unit, CompilationUnit};
    use proptest::prelude::*;

    fn statement<'a>(unit: &'a CompilationUnit, text_prefix: &str) -> &'a AstNode {
        unit.root
            .walk()
            .find(|n| n.kind.is_statement() && n.text().starts_with(text_prefix))
            .unwrap_or_else(|| panic!("no statement starting with {text_prefix:?}"))
    }

    #[test]
    fn levenshtein_basics() {
        assert_eq!(levenshtein("", ""), 0);
        assert_eq!(levenshtein("abc", "abd"), 1);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        assert_eq!(levenshtein("a", ""), 1);
    }

    #[test]
    fn literal_similarity_examples() {
        assert!((literal_similarity_text("abc", "abc") - 1.0).abs() < 1e-12);
        assert!((literal_similarity_text("abc", "abd") - 2.0 / 3.0).abs() < 1e-12);
        assert!((literal_similarity_text("a", "") - 0.0).abs() < 1e-12);
        assert!((literal_similarity_text("", "") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_statements_score_one() {
        let unit = parse_unit(
            "class A { int f() { return name().substring(dotIdx + 1); } }",
            "t",
        )
        .unwrap();
        let ret = statement(&unit, "return");
        assert!((structural_similarity(ret, ret) - 1.0).abs() < 1e-12);
        assert!((literal_similarity(ret, ret) - 1.0).abs() < 1e-12);
        assert!((context_similarity(ret, ret) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_kind_sets_score_zero() {
        let unit = parse_unit("class A { void f() { x(); return 0; } }", "t").unwrap();
        // Expression statement `x();` descendants: invocation + name.
        // Return `0` descendants: literal only.
        let call = statement(&unit, "x()");
        let ret = statement(&unit, "return");
        assert_eq!(structural_similarity(call, ret), 0.0);
    }

    #[test]
    fn substring_statements_hand_counted_dice() {
        // a: return name().substring(0, dotIdx);
        //    descendants: invocation x2, simple-name x3, literal x1 = 6
        // b: return name().substring(dotIdx + 1);
        //    descendants: invocation x2, simple-name x3, infix x1, literal x1 = 7
        // common: 2 + 3 + 1 = 6; dice = 12/13
        let unit = parse_unit(
            "class A { String f() { return name().substring(0, dotIdx); } \
             String g() { return name().substring(dotIdx + 1); } }",
            "t",
        )
        .unwrap();
        let a = statement(&unit, "return name().substring(0");
        let b = statement(&unit, "return name().substring(dotIdx");
        let got = structural_similarity(a, b);
        assert!((got - 12.0 / 13.0).abs() < 1e-12, "got {got}");
    }

    proptest! {
        #[test]
        fn levenshtein_matches_full_matrix_oracle(
            a in "[a-c]{0,12}",
            b in "[a-c]{0,12}",
        ) {
            // Independent full-matrix dynamic program.
            let ac: Vec<char> = a.chars().collect();
            let bc: Vec<char> = b.chars().collect();
            let mut d = vec![vec![0usize; bc.len() + 1]; ac.len() + 1];
            for (i, row) in d.iter_mut().enumerate() { row[0] = i; }
            for (j, cell) in d[0].iter_mut().enumerate() { *cell = j; }
            for i in 1..=ac.len() {
                for j in 1..=bc.len() {
                    let cost = usize::from(ac[i - 1] != bc[j - 1]);
                    d[i][j] = (d[i - 1][j] + 1)
                        .min(d[i][j - 1] + 1)
                        .min(d[i - 1][j - 1] + cost);
                }
            }
            prop_assert_eq!(levenshtein(&a, &b), d[ac.len()][bc.len()]);
        }

        #[test]
        fn similarity_text_is_symmetric_and_bounded(a in ".{0,24}", b in ".{0,24}") {
            let ab = literal_similarity_text(&a, &b);
            let ba = literal_similarity_text(&b, &a);
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&ab));
        }
    }
}
