//! Token-level scanner for the Java-subset grammar.
//!
//! The scanner never fails: characters it cannot classify become
//! single-character `Operator` tokens so downstream recovery can still
//! walk the stream. Comments and whitespace are dropped.

use super::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Number,
    Str,
    Char,
    Operator,
    Punct,
}

#[derive(Debug, Clone, Copy)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

impl Token {
    pub fn text<'s>(&self, source: &'s str) -> &'s str {
        &source[self.span.start..self.span.end]
    }
}

/// Reserved words of the source language. `true`, `false`, and `null` are
/// reserved literals and are included so they never count as identifiers.
pub const KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "void",
    "volatile",
    "while",
    "true",
    "false",
    "null",
];

pub fn is_keyword(text: &str) -> bool {
    KEYWORDS.contains(&text)
}

/// Multi-character operators, longest first so maximal munch works by
/// scanning the table in order.
const OPERATORS: &[&str] = &[
    ">>>=", "...", ">>>", "<<=", ">>=", "->", "::", "++", "--", "<<", ">>", "<=", ">=", "==",
    "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
];

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Scans `source` into tokens, skipping whitespace and comments.
pub fn tokenize(source: &str) -> Vec<Token> {
    let bytes = source.as_bytes();
    let len = bytes.len();
    let mut tokens = Vec::new();
    let mut i = 0;

    'outer: while i < len {
        let c = source[i..].chars().next().unwrap();

        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }

        // Line comment.
        if c == '/' && source[i..].starts_with("//") {
            while i < len && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        // Block comment (including doc comments); unterminated ones run to EOF.
        if c == '/' && source[i..].starts_with("/*") {
            match source[i + 2..].find("*/") {
                Some(end) => i += 2 + end + 2,
                None => i = len,
            }
            continue;
        }

        let start = i;

        if is_ident_start(c) {
            i += c.len_utf8();
            while i < len {
                let c = source[i..].chars().next().unwrap();
                if !is_ident_continue(c) {
                    break;
                }
                i += c.len_utf8();
            }
            let kind = if is_keyword(&source[start..i]) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            tokens.push(Token {
                kind,
                span: Span::new(start, i),
            });
            continue;
        }

        if c.is_ascii_digit() {
            i += 1;
            let mut seen_dot = false;
            while i < len {
                let c = bytes[i] as char;
                if c.is_ascii_alphanumeric() || c == '_' {
                    i += 1;
                } else if c == '.' && !seen_dot && i + 1 < len && bytes[i + 1].is_ascii_digit() {
                    seen_dot = true;
                    i += 1;
                } else {
                    break;
                }
            }
            tokens.push(Token {
                kind: TokenKind::Number,
                span: Span::new(start, i),
            });
            continue;
        }

        if c == '"' || c == '\'' {
            let quote = c;
            i += 1;
            while i < len {
                let c = source[i..].chars().next().unwrap();
                if c == '\\' {
                    i += 1;
                    if i < len {
                        i += source[i..].chars().next().unwrap().len_utf8();
                    }
                    continue;
                }
                i += c.len_utf8();
                if c == quote {
                    break;
                }
            }
            tokens.push(Token {
                kind: if quote == '"' {
                    TokenKind::Str
                } else {
                    TokenKind::Char
                },
                span: Span::new(start, i),
            });
            continue;
        }

        for op in OPERATORS {
            if source[i..].starts_with(op) {
                i += op.len();
                tokens.push(Token {
                    kind: TokenKind::Operator,
                    span: Span::new(start, i),
                });
                continue 'outer;
            }
        }

        let kind = match c {
            '(' | ')' | '{' | '}' | '[' | ']' | ';' | ',' | '.' | '@' => TokenKind::Punct,
            _ => TokenKind::Operator,
        };
        i += c.len_utf8();
        tokens.push(Token {
            kind,
            span: Span::new(start, i),
        });
    }

    tokens
}

/// Line and column (both 1-based) of a byte offset.
pub fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for (i, c) in source.char_indices() {
        if i >= offset {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

/// Byte offset of a 1-based line/column position, or `None` when the
/// position lies beyond the source.
pub fn offset_of(source: &str, line: usize, col: usize) -> Option<usize> {
    let mut cur_line = 1;
    let mut cur_col = 1;
    for (i, c) in source.char_indices() {
        if cur_line == line && cur_col == col {
            return Some(i);
        }
        if c == '\n' {
            cur_line += 1;
            cur_col = 1;
        } else {
            cur_col += 1;
        }
    }
    if cur_line == line && cur_col == col {
        return Some(source.len());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(src: &str) -> Vec<String> {
        tokenize(src)
            .iter()
            .map(|t| t.text(src).to_string())
            .collect()
    }

    #[test]
    fn splits_invocation_chain() {
        assert_eq!(
            texts("name().lastIndexOf('.')"),
            vec!["name", "(", ")", ".", "lastIndexOf", "(", "'.'", ")"]
        );
    }

    #[test]
    fn skips_comments_and_whitespace() {
        assert_eq!(
            texts("int x = 1; // trailing\n/* block */ x++;"),
            vec!["int", "x", "=", "1", ";", "x", "++", ";"]
        );
    }

    #[test]
    fn string_escapes_do_not_terminate() {
        assert_eq!(texts(r#""a\"b" + 'c'"#), vec![r#""a\"b""#, "+", "'c'"]);
    }

    #[test]
    fn maximal_munch_operators() {
        assert_eq!(texts("a >>> b >> c >= d"), vec!["a", ">>>", "b", ">>", "c", ">=", "d"]);
        assert_eq!(texts("x...y"), vec!["x", "...", "y"]);
    }

    #[test]
    fn numbers_with_suffixes_and_dots() {
        assert_eq!(texts("1.5f 0x1F 10L 1_000"), vec!["1.5f", "0x1F", "10L", "1_000"]);
    }

    #[test]
    fn keywords_are_not_identifiers() {
        let toks = tokenize("new StringBuilder()");
        assert_eq!(toks[0].kind, TokenKind::Keyword);
        assert_eq!(toks[1].kind, TokenKind::Identifier);
    }

    #[test]
    fn line_col_round_trip() {
        let src = "ab\ncd\nef";
        assert_eq!(line_col(src, 0), (1, 1));
        assert_eq!(line_col(src, 3), (2, 1));
        assert_eq!(offset_of(src, 2, 1), Some(3));
        assert_eq!(offset_of(src, 3, 2), Some(7));
        assert_eq!(offset_of(src, 9, 1), None);
    }
}
