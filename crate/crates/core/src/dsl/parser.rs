use super::{BinOp, DslError, Expression, Func, ParseErrorKind, Span};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn err(kind: ParseErrorKind, offset: usize, detail: impl Into<String>) -> DslError {
    DslError::Parse {
        kind,
        offset,
        detail: detail.into(),
    }
}

/// Widens the node's span to include enclosing parentheses.
fn respan(mut e: Expression, to: Span) -> Expression {
    match &mut e {
        Expression::Num(_, s) | Expression::Var(_, s) | Expression::Neg(_, s) => *s = to,
        Expression::Binary { span, .. } | Expression::Call { span, .. } => *span = to,
    }
    e
}

fn lex(src: &str) -> Result<Vec<Token>, DslError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            out.push(Token {
                tok,
                span: Span::new(start, i),
            });
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| {
                err(
                    ParseErrorKind::UnknownToken,
                    start,
                    format!("bad number `{text}`"),
                )
            })?;
            out.push(Token {
                tok: Tok::Num(value),
                span: Span::new(start, i),
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..i].to_string()),
                span: Span::new(start, i),
            });
            continue;
        }
        let ch = src[start..].chars().next().unwrap_or('?');
        return Err(err(ParseErrorKind::UnknownToken, start, format!("`{ch}`")));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.span.start)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expression, DslError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Expression, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<Expression, DslError> {
        if let Some(Tok::Minus) = self.peek() {
            let minus = self.bump().expect("peeked");
            let inner = self.unary()?;
            let span = minus.span.join(inner.span());
            return Ok(Expression::Neg(Box::new(inner), span));
        }
        self.power()
    }

    // power := primary ('^' unary)?    (right-associative through unary)
    fn power(&mut self) -> Result<Expression, DslError> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let exponent = self.unary()?;
            return Ok(binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expression, DslError> {
        let at = self.offset();
        let Some(token) = self.bump() else {
            return Err(err(
                ParseErrorKind::UnexpectedToken,
                at,
                "expected operand, found end of input",
            ));
        };
        match token.tok {
            Tok::Num(x) => Ok(Expression::Num(x, token.span)),
            Tok::Ident(name) => {
                if let Some(Tok::LParen) = self.peek() {
                    let Some(func) = Func::from_name(&name) else {
                        return Err(err(ParseErrorKind::UnknownFunction, token.span.start, name));
                    };
                    let open = self.bump().expect("peeked");
                    let arg = self.expr()?;
                    let close = self.expect_close(open.span.start)?;
                    Ok(Expression::Call {
                        func,
                        arg: Box::new(arg),
                        span: token.span.join(close),
                    })
                } else if Func::from_name(&name).is_some() {
                    Err(err(
                        ParseErrorKind::UnexpectedToken,
                        self.offset(),
                        format!("function `{name}` requires an argument list"),
                    ))
                } else {
                    Ok(Expression::Var(name, token.span))
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.expect_close(token.span.start)?;
                Ok(respan(inner, Span::new(token.span.start, close.end)))
            }
            Tok::RParen => Err(err(
                ParseErrorKind::UnbalancedParen,
                token.span.start,
                "unexpected `)`",
            )),
            other => Err(err(
                ParseErrorKind::UnexpectedToken,
                token.span.start,
                format!("expected operand, found {other:?}"),
            )),
        }
    }

    fn expect_close(&mut self, open_at: usize) -> Result<Span, DslError> {
        match self.peek() {
            Some(Tok::RParen) => Ok(self.bump().expect("peeked").span),
            None => Err(err(
                ParseErrorKind::UnbalancedParen,
                self.end,
                format!("`(` at byte {open_at} is never closed"),
            )),
            Some(_) => Err(err(
                ParseErrorKind::UnexpectedToken,
                self.offset(),
                "expected `)`",
            )),
        }
    }
}

fn binary(op: BinOp, lhs: Expression, rhs: Expression) -> Expression {
    let span = lhs.span().join(rhs.span());
    Expression::Binary {
        op,
        lhs: Box::new(lhs),
        rhs: Box::new(rhs),
        span,
    }
}

/// Parses one expression; the whole input must be consumed.
pub fn parse_expr(source: &str) -> Result<Expression, DslError> {
    let tokens = lex(source)?;
    if tokens.is_empty() {
        return Err(err(ParseErrorKind::EmptyInput, 0, ""));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        end: source.len(),
    };
    let e = p.expr()?;
    if let Some(t) = p.tokens.get(p.pos) {
        let kind = if t.tok == Tok::RParen {
            ParseErrorKind::UnbalancedParen
        } else {
            ParseErrorKind::TrailingInput
        };
        return Err(err(kind, t.span.start, ""));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind_at(src: &str) -> (ParseErrorKind, usize) {
        match parse_expr(src) {
            Err(DslError::Parse { kind, offset, .. }) => (kind, offset),
            other => panic!("expected parse error for {src:?}, got {other:?}"),
        }
    }

    #[test]
    fn parses_sub_of_call() {
        let e = parse_expr("h - cos(k)").unwrap();
        match e {
            Expression::Binary {
                op: BinOp::Sub,
                lhs,
                rhs,
                ..
            } => {
                assert!(matches!(*lhs, Expression::Var(ref n, s) if n == "h" && s == Span::new(0, 1)));
                match *rhs {
                    Expression::Call {
                        func: Func::Cos, arg, ..
                    } => {
                        assert!(
                            matches!(*arg, Expression::Var(ref n, s) if n == "k" && s == Span::new(8, 9))
                        );
                    }
                    other => panic!("{other:?}"),
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unary_minus_binds_tighter_than_mul() {
        let e = parse_expr("-gamma*sin(k)").unwrap();
        let Expression::Binary {
            op: BinOp::Mul,
            lhs,
            rhs,
            ..
        } = e
        else {
            panic!("top node should be Mul");
        };
        assert!(matches!(*lhs, Expression::Neg(..)));
        assert!(matches!(*rhs, Expression::Call { func: Func::Sin, .. }));
    }

    #[test]
    fn pow_is_right_associative_and_above_unary() {
        let e = parse_expr("2^3^2").unwrap();
        let Expression::Binary {
            op: BinOp::Pow,
            lhs,
            rhs,
            ..
        } = e
        else {
            panic!()
        };
        assert!(matches!(*lhs, Expression::Num(x, _) if x == 2.0));
        assert!(matches!(*rhs, Expression::Binary { op: BinOp::Pow, .. }));

        // -2^2 is -(2^2)
        assert!(matches!(parse_expr("-2^2").unwrap(), Expression::Neg(..)));
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_expr("t1+t2*cos( k )").unwrap();
        let b = parse_expr("  t1 +  t2 * cos(k)").unwrap();
        assert!(a.same_shape(&b));
    }

    #[test]
    fn numbers_with_exponents() {
        assert!(matches!(parse_expr("1.5e-3").unwrap(), Expression::Num(x, _) if x == 1.5e-3));
        assert!(matches!(parse_expr(".25").unwrap(), Expression::Num(x, _) if x == 0.25));
        // `2e` is a number followed by an identifier
        assert_eq!(kind_at("2e").0, ParseErrorKind::TrailingInput);
    }

    #[test]
    fn error_cases() {
        assert_eq!(kind_at("sin(k"), (ParseErrorKind::UnbalancedParen, 5));
        assert_eq!(kind_at(""), (ParseErrorKind::EmptyInput, 0));
        assert_eq!(kind_at("   "), (ParseErrorKind::EmptyInput, 0));
        assert_eq!(kind_at("k $ 2"), (ParseErrorKind::UnknownToken, 2));
        assert_eq!(kind_at("k 2"), (ParseErrorKind::TrailingInput, 2));
        assert_eq!(kind_at("(k))"), (ParseErrorKind::UnbalancedParen, 3));
        assert_eq!(kind_at(")"), (ParseErrorKind::UnbalancedParen, 0));
        assert_eq!(kind_at("k +"), (ParseErrorKind::UnexpectedToken, 3));
        assert_eq!(kind_at("exp(k)"), (ParseErrorKind::UnknownFunction, 0));
        assert_eq!(kind_at("sin + 1").0, ParseErrorKind::UnexpectedToken);
        assert_eq!(kind_at("1..2").0, ParseErrorKind::UnknownToken);
    }
}
