use std::fmt;

use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    Ident(String),
    Number(f64),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Semi,
    Comma,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "identifier `{s}`"),
            Token::Number(n) => write!(f, "number `{n}`"),
            Token::Str(_) => f.write_str("string"),
            Token::LBrace => f.write_str("`{`"),
            Token::RBrace => f.write_str("`}`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::LBracket => f.write_str("`[`"),
            Token::RBracket => f.write_str("`]`"),
            Token::Colon => f.write_str("`:`"),
            Token::Semi => f.write_str("`;`"),
            Token::Comma => f.write_str("`,`"),
            Token::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub token: Token,
    pub span: SourceSpan,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_ident_start) && chars.all(is_ident_continue)
}

pub(crate) fn tokenize(text: &str, file: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut lexer = Lexer { chars: text.chars().collect(), pos: 0, line: 1, column: 1, file };
    let mut out = Vec::new();
    loop {
        let tok = lexer.next_token()?;
        let eof = tok.token == Token::Eof;
        out.push(tok);
        if eof {
            return Ok(out);
        }
    }
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    file: &'a str,
}

impl Lexer<'_> {
    fn span(&self) -> SourceSpan {
        SourceSpan::new(self.file, self.line, self.column)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Spanned, ParseError> {
        self.skip_trivia();
        let span = self.span();
        let Some(c) = self.peek() else {
            return Ok(Spanned { token: Token::Eof, span });
        };
        let single = match c {
            '{' => Some(Token::LBrace),
            '}' => Some(Token::RBrace),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            '[' => Some(Token::LBracket),
            ']' => Some(Token::RBracket),
            ':' => Some(Token::Colon),
            ';' => Some(Token::Semi),
            ',' => Some(Token::Comma),
            _ => None,
        };
        if let Some(token) = single {
            self.bump();
            return Ok(Spanned { token, span });
        }
        if c == '"' {
            return self.string(span);
        }
        if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' {
            return self.number(span);
        }
        if is_ident_start(c) {
            let mut s = String::new();
            while let Some(c) = self.peek().filter(|c| is_ident_continue(*c)) {
                s.push(c);
                self.bump();
            }
            return Ok(Spanned { token: Token::Ident(s), span });
        }
        Err(ParseError::new(span, format!("unexpected character {c:?}"), vec!["a token".into()]))
    }

    fn string(&mut self, span: SourceSpan) -> Result<Spanned, ParseError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => {
                    return Err(ParseError::new(span, "unterminated string", vec!["`\"`".into()]));
                }
                Some('"') => return Ok(Spanned { token: Token::Str(s), span }),
                Some('\\') => {
                    let esc_span = self.span();
                    match self.bump() {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        Some('r') => s.push('\r'),
                        other => {
                            return Err(ParseError::new(
                                esc_span,
                                format!("invalid escape {other:?}"),
                                vec!["`\\\"`".into(), "`\\\\`".into(), "`\\n`".into(), "`\\t`".into(), "`\\r`".into()],
                            ))
                        }
                    }
                }
                Some(c) => s.push(c),
            }
        }
    }

    fn number(&mut self, span: SourceSpan) -> Result<Spanned, ParseError> {
        let mut s = String::new();
        if let Some(c) = self.peek().filter(|c| matches!(c, '-' | '+')) {
            s.push(c);
            self.bump();
        }
        let mut digits = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
            digits += 1;
        }
        if self.peek() == Some('.') {
            s.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                s.push(c);
                self.bump();
                digits += 1;
            }
        }
        if digits > 0 && matches!(self.peek(), Some('e' | 'E')) {
            s.push('e');
            self.bump();
            if let Some(c) = self.peek().filter(|c| matches!(c, '-' | '+')) {
                s.push(c);
                self.bump();
            }
            let mut exp_digits = 0;
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                s.push(c);
                self.bump();
                exp_digits += 1;
            }
            if exp_digits == 0 {
                return Err(ParseError::new(span, format!("malformed number `{s}`"), vec!["exponent digits".into()]));
            }
        }
        if digits == 0 {
            return Err(ParseError::new(span, format!("malformed number `{s}`"), vec!["digits".into()]));
        }
        match s.parse::<f64>() {
            Ok(n) if n.is_finite() => Ok(Spanned { token: Token::Number(n), span }),
            _ => Err(ParseError::new(span, format!("number `{s}` is not finite"), vec!["a finite number".into()])),
        }
    }
}
