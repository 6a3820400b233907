//! Identifier tokenization: sub-token splitting and identifier extraction.

use crate::ast::{tokenize, AstNode, TokenKind};

/// Splits an identifier into lowercase sub-tokens.
///
/// Boundaries: camelCase/PascalCase transitions, underscores and other
/// non-alphanumeric separators, and letter/digit transitions. A run of
/// uppercase letters is one acronym block; the last uppercase before a
/// lowercase starts the next token, so `HTTPResponse` splits as
/// `http`, `response`.
pub fn split_subtokens(identifier: &str) -> Vec<String> {
    fn flush(current: &mut String, tokens: &mut Vec<String>) {
        if !current.is_empty() {
            tokens.push(current.to_lowercase());
            current.clear();
        }
    }

    let chars: Vec<char> = identifier.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut prev: Option<char> = None;

    for i in 0..chars.len() {
        let c = chars[i];
        if !c.is_alphanumeric() {
            flush(&mut current, &mut tokens);
            prev = None;
            continue;
        }
        if let Some(p) = prev {
            let boundary = (p.is_lowercase() && c.is_uppercase())
                || (p.is_alphabetic() && c.is_numeric())
                || (p.is_numeric() && c.is_alphabetic())
                || (p.is_uppercase()
                    && c.is_uppercase()
                    && chars.get(i + 1).map(|n| n.is_lowercase()).unwrap_or(false));
            if boundary {
                flush(&mut current, &mut tokens);
            }
        }
        current.push(c);
        prev = Some(c);
    }
    flush(&mut current, &mut tokens);
    tokens
}

/// In-order identifier tokens of a node's text. Literals, operators,
/// separators, and keywords are dropped.
pub fn identifier_tokens(node: &AstNode) -> Vec<String> {
    identifier_tokens_of_text(node.text())
}

pub fn identifier_tokens_of_text(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| t.kind == TokenKind::Identifier)
        .map(|t| t.text(text).to_string())
        .collect()
}

/// Identifier sub-tokens of a node: identifiers split and lowercased, in
/// source order.
pub fn identifier_subtokens(node: &AstNode) -> Vec<String> {
    identifier_tokens(node)
        .iter()
        .flat_map(|t| split_subtokens(t))
        .collect()
}

/// Recomposes sub-tokens into a lowerCamelCase identifier.
pub fn lower_camel_case(subtokens: &[String]) -> String {
    let mut out = String::new();
    for token in subtokens {
        if token.is_empty() {
            continue;
        }
        if out.is_empty() {
            out.push_str(token);
        } else {
            let mut chars = token.chars();
            if let Some(first) = chars.next() {
                out.extend(first.to_uppercase());
                out.push_str(chars.as_str());
            }
        }
    }
    out
}

/// A syntactically valid identifier: a letter followed by letters/digits.
pub fn is_valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric())
}
