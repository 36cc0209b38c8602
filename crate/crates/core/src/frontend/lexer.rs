use super::FrontendError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Starts with a lowercase letter.
    Ident(String),
    /// Starts with an uppercase letter or `_`.
    Var(String),
    Int(i64),
    Neck,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bar,
    Comma,
    Dot,
    Slash,
    Plus,
    Minus,
    Star,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits `src` into tokens. `%` starts a comment running to the end of
/// the line; comments of the form `% expect: <verdict>` are returned
/// separately.
pub fn lex(src: &str) -> Result<(Vec<Token>, Option<String>), FrontendError> {
    let mut out = Vec::new();
    let mut expect = None;
    for (ln, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let at = |tok| Token { tok, line: ln + 1, col };
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '%' {
                let rest: String = chars[i + 1..].iter().collect();
                if let Some(v) = rest.trim().strip_prefix("expect:") {
                    expect = Some(v.trim().to_string());
                }
                break;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(at(if c.is_ascii_lowercase() {
                    Tok::Ident(word)
                } else {
                    Tok::Var(word)
                }));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let n = word.parse().map_err(|_| FrontendError::Syntax {
                    line: ln + 1,
                    col,
                    msg: format!("integer literal `{word}` out of range"),
                })?;
                out.push(at(Tok::Int(n)));
                continue;
            }
            let two: String = chars[i..(i + 3).min(chars.len())].iter().collect();
            let (tok, len) = if two.starts_with("=\\=") {
                (Tok::Ne, 3)
            } else if two.starts_with(":-") {
                (Tok::Neck, 2)
            } else if two.starts_with("=<") {
                (Tok::Le, 2)
            } else if two.starts_with(">=") {
                (Tok::Ge, 2)
            } else {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    '|' => Tok::Bar,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    '/' => Tok::Slash,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '=' => Tok::Eq,
                    '<' => Tok::Lt,
                    '>' => Tok::Gt,
                    _ => {
                        return Err(FrontendError::Syntax {
                            line: ln + 1,
                            col,
                            msg: format!("unexpected character `{c}`"),
                        })
                    }
                };
                (t, 1)
            };
            out.push(at(tok));
            i += len;
        }
    }
    Ok((out, expect))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operators_and_comments() {
        let (toks, expect) = lex("false :- N =\\= M, X =< 1. % expect: unsat").unwrap();
        let kinds: Vec<Tok> = toks.into_iter().map(|t| t.tok).collect();
        assert_eq!(kinds[1], Tok::Neck);
        assert_eq!(kinds[3], Tok::Ne);
        assert_eq!(kinds[7], Tok::Le);
        assert_eq!(expect.as_deref(), Some("unsat"));
    }

    #[test]
    fn positions_are_one_based() {
        let err = lex("p(X).\n  p(#).").unwrap_err();
        assert!(matches!(err, FrontendError::Syntax { line: 2, col: 5, .. }));
    }
}
