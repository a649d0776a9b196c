use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    /// A whole `#include ...` line, verbatim.
    Include(String),
    Punct(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const PUNCTS: &[&str] = &[
    "&&", "||", "<=", ">=", "==", "!=", "+=", "-=", "++", "--", "(", ")", "{", "}", ";", ",", "=", "+", "-", "*", "/",
    "%", "<", ">", "!",
];

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize, chars: &[char]| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1, &chars);
        } else if rest == "//" {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1, &chars);
            }
        } else if rest == "/*" {
            let (l0, c0) = (line, col);
            advance(&mut i, &mut line, &mut col, 2, &chars);
            loop {
                if i + 1 >= chars.len() {
                    return Err(ParseError::new(l0, c0, "unterminated comment"));
                }
                if chars[i] == '*' && chars[i + 1] == '/' {
                    advance(&mut i, &mut line, &mut col, 2, &chars);
                    break;
                }
                advance(&mut i, &mut line, &mut col, 1, &chars);
            }
        } else if c == '#' {
            let (l0, c0) = (line, col);
            let start = i;
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1, &chars);
            }
            let text: String = chars[start..i].iter().collect::<String>().trim_end().to_string();
            if !text.starts_with("#include") {
                return Err(ParseError::new(l0, c0, format!("unsupported preprocessor line `{text}`")));
            }
            out.push(Token { tok: Tok::Include(text), line: l0, col: c0 });
        } else if c.is_ascii_digit() {
            let (l0, c0) = (line, col);
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                advance(&mut i, &mut line, &mut col, 1, &chars);
            }
            let text: String = chars[start..i].iter().collect();
            let digits = text.trim_end_matches(['u', 'U', 'l', 'L']);
            let v = digits
                .parse::<u64>()
                .map_err(|_| ParseError::new(l0, c0, format!("bad integer literal `{text}`")))?;
            out.push(Token { tok: Tok::Int(v), line: l0, col: c0 });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let (l0, c0) = (line, col);
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(&mut i, &mut line, &mut col, 1, &chars);
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token { tok: Tok::Ident(text), line: l0, col: c0 });
        } else if let Some(p) = PUNCTS.iter().find(|p| src_at(&chars, i, p)) {
            out.push(Token { tok: Tok::Punct(p), line, col });
            advance(&mut i, &mut line, &mut col, p.len(), &chars);
        } else {
            return Err(ParseError::new(line, col, format!("unexpected character `{c}`")));
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

fn src_at(chars: &[char], i: usize, p: &str) -> bool {
    p.chars().enumerate().all(|(k, pc)| chars.get(i + k) == Some(&pc))
}
