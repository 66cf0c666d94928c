use super::Formula;
use thiserror::Error;

/// A syntax error, located by character offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    Not,
    Box,
    Dia,
    And,
    Or,
    Imp,
    Rhd,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(v) => format!("variable `{v}`"),
            Tok::Top => "`top`".into(),
            Tok::Bot => "`bot`".into(),
            Tok::Not => "`~`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Dia => "`<>`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Rhd => "`|>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn lex(input: &str, metavars: bool) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset, message: String| ParseError { offset, message };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let next = chars.get(i + 1).copied();
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '~' | '!' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '∨' => Tok::Or,
            '→' => Tok::Imp,
            '□' => Tok::Box,
            '◇' | '◊' => Tok::Dia,
            '▷' => Tok::Rhd,
            '⊤' => Tok::Top,
            '⊥' => Tok::Bot,
            '|' if next == Some('>') => {
                i += 1;
                Tok::Rhd
            }
            '|' => Tok::Or,
            '-' if next == Some('>') => {
                i += 1;
                Tok::Imp
            }
            '[' if next == Some(']') => {
                i += 1;
                Tok::Box
            }
            '<' if next == Some('>') => {
                i += 1;
                Tok::Dia
            }
            '#' if matches!(next, Some('t') | Some('f')) => {
                i += 1;
                if next == Some('t') {
                    Tok::Top
                } else {
                    Tok::Bot
                }
            }
            c if c.is_ascii_lowercase() || (metavars && c.is_ascii_uppercase()) => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                i = j - 1;
                match word.as_str() {
                    "top" => Tok::Top,
                    "bot" => Tok::Bot,
                    "box" => Tok::Box,
                    "dia" => Tok::Dia,
                    _ => Tok::Ident(word),
                }
            }
            c => return Err(err(start, format!("unexpected character `{c}`"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), message: message.into() })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // imp := rhd ('->' imp)?
    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.rhd()?;
        if self.eat(&Tok::Imp) {
            Ok(Formula::imp(lhs, self.imp()?))
        } else {
            Ok(lhs)
        }
    }

    // rhd := or ('|>' or)?
    fn rhd(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if !self.eat(&Tok::Rhd) {
            return Ok(lhs);
        }
        let rhs = self.or()?;
        if self.peek() == Some(&Tok::Rhd) {
            return self.error("`|>` is non-associative; parenthesize chained interpretability formulas");
        }
        Ok(Formula::rhd(lhs, rhs))
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input, expected a formula");
        };
        self.pos += 1;
        match tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Box => Ok(Formula::boxed(self.unary()?)),
            Tok::Dia => Ok(Formula::dia(self.unary()?)),
            Tok::Top => Ok(Formula::Top),
            Tok::Bot => Ok(Formula::Bot),
            Tok::Ident(v) => Ok(Formula::Var(v)),
            Tok::LParen => {
                let f = self.imp()?;
                if !self.eat(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                Ok(f)
            }
            t => {
                self.pos -= 1;
                self.error(format!("unexpected {}, expected a formula", t.describe()))
            }
        }
    }
}

fn parse_with(input: &str, metavars: bool) -> Result<Formula, ParseError> {
    let toks = lex(input, metavars)?;
    let mut p = Parser { toks, pos: 0, end: input.chars().count() };
    let f = p.imp()?;
    match p.peek() {
        None => Ok(f),
        Some(t) => {
            let msg = format!("unexpected {} after a complete formula", t.describe());
            p.error(msg)
        }
    }
}

/// Parses the concrete syntax.
///
/// Variables match `[a-z][a-zA-Z0-9_]*`, except the keywords `top`, `bot`,
/// `box` and `dia`. Constants are `#t`/`top` and `#f`/`bot`; connectives
/// are `~` (or `!`), `&`, `|`, `->`, `[]` (or `box`), `<>` (or `dia`) and
/// `|>`. The Unicode symbols `¬ ∧ ∨ → □ ◇ ▷ ⊤ ⊥` are accepted too.
///
/// Prefix operators bind tightest, then `&`, `|`, `|>` and `->` in that
/// order; `->` associates to the right, `&` and `|` to the left, and a
/// chain `a |> b |> c` is rejected.
pub fn parse(input: &str) -> Result<Formula, ParseError> {
    parse_with(input, false)
}

/// Like [`parse`], but also admits identifiers starting with an upper-case
/// letter. Axiom schemes use `A`, `B`, `C` as metavariables so that they can
/// never collide with object-language variables.
pub(crate) fn parse_pattern(input: &str) -> Result<Formula, ParseError> {
    parse_with(input, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Formula {
        Formula::var(n)
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("p |> q -> r").unwrap();
        assert_eq!(f, Formula::imp(Formula::rhd(v("p"), v("q")), v("r")));
        let g = parse("a -> b -> c").unwrap();
        assert_eq!(g, Formula::imp(v("a"), Formula::imp(v("b"), v("c"))));
        let h = parse("a | b & c | d").unwrap();
        assert_eq!(h, Formula::or(Formula::or(v("a"), Formula::and(v("b"), v("c"))), v("d")));
        let k = parse("~[]a & <>b |> c | d").unwrap();
        assert_eq!(
            k,
            Formula::rhd(
                Formula::and(Formula::not(Formula::boxed(v("a"))), Formula::dia(v("b"))),
                Formula::or(v("c"), v("d"))
            )
        );
    }

    #[test]
    fn rhd_chain_is_rejected() {
        let e = parse("p |> q |> r").unwrap_err();
        assert!(e.message.contains("non-associative"), "{e}");
        assert_eq!(e.offset, 7);
    }

    #[test]
    fn unicode_and_keyword_aliases() {
        assert_eq!(parse("□(p → q) ▷ ¬r").unwrap(), parse("[](p -> q) |> ~r").unwrap());
        assert_eq!(parse("box dia #t").unwrap(), parse("[]<>top").unwrap());
        assert_eq!(parse("◇⊥ ∧ ⊤ ∨ !x1_y").unwrap(), parse("<>bot & #t | ~x1_y").unwrap());
    }

    #[test]
    fn dia_is_sugar() {
        assert_eq!(parse("<>p").unwrap(), parse("~[]~p").unwrap());
        assert_eq!(parse("~[]~p").unwrap().to_string(), "<>p");
    }

    #[test]
    fn reports_errors_with_offsets() {
        assert_eq!(parse("p &").unwrap_err().offset, 3);
        assert_eq!(parse("(p").unwrap_err().message, "expected `)`");
        assert!(parse("P").is_err());
        assert!(parse("p q").unwrap_err().message.contains("after a complete formula"));
        assert!(parse_pattern("A |> B").is_ok());
    }
}
