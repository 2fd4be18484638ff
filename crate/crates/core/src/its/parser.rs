use std::iter::Peekable;
use std::str::CharIndices;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Cost, Its, Location, Transition, MAIN, SINK};
use crate::error::ParseError;
use crate::terms::{normalize, Conjunction, Poly, Rel, Update, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Arrow,
    Plus,
    Minus,
    Star,
    Caret,
    AndAnd,
    Rel(Rel),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(line_no: usize, text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut it: Peekable<CharIndices<'_>> = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        let col = i + 1;
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if c == '#' {
            break;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                    s.push(d);
                    it.next();
                } else {
                    break;
                }
            }
            out.push(Spanned {
                tok: Tok::Ident(s),
                col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if d.is_ascii_digit() {
                    s.push(d);
                    it.next();
                } else {
                    break;
                }
            }
            if let Some(&(_, '.')) = it.peek() {
                return Err(err(line_no, col, "non-integer literal"));
            }
            out.push(Spanned {
                tok: Tok::Int(s.parse().expect("digits")),
                col,
            });
            continue;
        }
        it.next();
        let next = it.peek().map(|&(_, d)| d);
        let tok = match (c, next) {
            ('(', _) => Tok::LParen,
            (')', _) => Tok::RParen,
            ('[', _) => Tok::LBrack,
            (']', _) => Tok::RBrack,
            (',', _) => Tok::Comma,
            ('+', _) => Tok::Plus,
            ('*', _) => Tok::Star,
            ('^', _) => Tok::Caret,
            ('-', Some('>')) => {
                it.next();
                Tok::Arrow
            }
            ('-', _) => Tok::Minus,
            ('&', Some('&')) => {
                it.next();
                Tok::AndAnd
            }
            ('<', Some('=')) => {
                it.next();
                Tok::Rel(Rel::Le)
            }
            ('>', Some('=')) => {
                it.next();
                Tok::Rel(Rel::Ge)
            }
            ('=', Some('=')) => {
                it.next();
                Tok::Rel(Rel::Eq)
            }
            ('<', _) => Tok::Rel(Rel::Lt),
            ('>', _) => Tok::Rel(Rel::Gt),
            ('/', _) | ('.', _) => return Err(err(line_no, col, "non-integer literal")),
            _ => return Err(err(line_no, col, format!("unexpected character `{c}`"))),
        };
        out.push(Spanned { tok, col });
    }
    Ok(out)
}

struct LineParser<'a> {
    line: usize,
    toks: Vec<Spanned>,
    pos: usize,
    program_vars: &'a [Var],
    end_col: usize,
}

impl LineParser<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |s| s.col)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(err(self.line, self.col(), msg))
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn resolve(&self, name: &str) -> Var {
        self.program_vars
            .iter()
            .find(|v| v.name() == name)
            .cloned()
            .unwrap_or_else(|| Var::temporary(name))
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            return match self.bump() {
                Some(Tok::Int(e)) => match u32::try_from(&e) {
                    Ok(e) if e <= 64 => Ok(base.pow(e)),
                    _ => self.fail("exponent too large"),
                },
                _ => {
                    self.pos -= 1;
                    self.fail("expected integer exponent")
                }
            };
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Poly, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(Poly::constant(BigRational::from_integer(k)))
            }
            Some(Tok::Ident(name)) => {
                if name == "inf" {
                    return self.fail("infinite cost is not allowed in input");
                }
                self.pos += 1;
                Ok(Poly::var(self.resolve(&name)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => self.fail("expected expression"),
        }
    }

    fn guard(&mut self) -> Result<Conjunction, ParseError> {
        let mut c = Conjunction::top();
        if self.peek() == Some(&Tok::Ident("true".into())) {
            self.pos += 1;
            return Ok(c);
        }
        loop {
            let col = self.col();
            let lhs = self.expr()?;
            let rel = match self.bump() {
                Some(Tok::Rel(r)) => r,
                _ => {
                    self.pos -= 1;
                    return self.fail("expected relation");
                }
            };
            let rhs = self.expr()?;
            let atoms =
                normalize(&lhs, rel, &rhs).map_err(|e| err(self.line, col, e.to_string()))?;
            c.extend(atoms);
            if self.peek() == Some(&Tok::AndAnd) {
                self.pos += 1;
            } else {
                return Ok(c);
            }
        }
    }

    fn location(&mut self) -> Result<Location, ParseError> {
        let col = self.col();
        let name = self.ident("location")?;
        if name == SINK {
            return Err(err(self.line, col, "location `sink` is reserved"));
        }
        Ok(Location::new(name))
    }

    fn rule(&mut self) -> Result<Transition, ParseError> {
        let src = self.location()?;
        self.expect(Tok::LParen, "`(`")?;
        let mut params = Vec::new();
        loop {
            let col = self.col();
            let p = self.ident("parameter")?;
            params.push((p, col));
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        if params.len() != self.program_vars.len() {
            return self.fail(format!(
                "expected {} parameters, found {}",
                self.program_vars.len(),
                params.len()
            ));
        }
        for ((p, col), v) in params.iter().zip(self.program_vars) {
            if p != v.name() {
                return Err(err(
                    self.line,
                    *col,
                    format!("parameter `{p}` should be `{v}`"),
                ));
            }
        }
        self.expect(Tok::Arrow, "`->`")?;
        let dst = self.location()?;
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.expr()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        if args.len() != self.program_vars.len() {
            return self.fail(format!(
                "expected {} arguments, found {}",
                self.program_vars.len(),
                args.len()
            ));
        }
        self.expect(Tok::LBrack, "`[`")?;
        let guard = self.guard()?;
        self.expect(Tok::RBrack, "`]`")?;
        let cost = if self.peek() == Some(&Tok::Ident("cost".into())) {
            self.pos += 1;
            self.expr()?
        } else {
            Poly::one()
        };
        if self.pos < self.toks.len() {
            return self.fail("unexpected trailing input");
        }
        Ok(Transition {
            src,
            dst,
            cost: Cost::Finite(cost),
            update: Update::new(self.program_vars.to_vec(), args),
            guard,
        })
    }
}

/// Parses the line-oriented ITS format:
///
/// ```text
/// vars x y
/// start main
/// main(x, y) -> f(x, y) [true]
/// f(x, y) -> f(x - y, y) [x > 0 && y >= 0] cost x
/// ```
pub fn parse(text: &str) -> Result<Its, ParseError> {
    let mut program_vars: Option<Vec<Var>> = None;
    let mut start: Option<String> = None;
    let mut transitions = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = lex(line, raw)?;
        if toks.is_empty() {
            continue;
        }
        let end_col = raw.len() + 1;
        let first = match &toks[0].tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(err(line, toks[0].col, "expected `vars`, `start` or a rule")),
        };
        if program_vars.is_none() {
            if first != "vars" {
                return Err(err(line, toks[0].col, "expected `vars` header"));
            }
            let mut vars = Vec::new();
            for s in &toks[1..] {
                match &s.tok {
                    Tok::Ident(n) if vars.iter().any(|v: &Var| v.name() == n) => {
                        return Err(err(line, s.col, format!("duplicate variable `{n}`")))
                    }
                    Tok::Ident(n) => vars.push(Var::program(n.clone())),
                    _ => return Err(err(line, s.col, "expected variable name")),
                }
            }
            if vars.is_empty() {
                return Err(err(line, end_col, "expected at least one variable"));
            }
            program_vars = Some(vars);
            continue;
        }
        if start.is_none() {
            match (first.as_str(), toks.get(1).map(|s| &s.tok), toks.len()) {
                ("start", Some(Tok::Ident(s)), 2) if s == MAIN => start = Some(s.clone()),
                ("start", Some(Tok::Ident(_)), 2) => {
                    return Err(err(line, toks[1].col, "start location must be `main`"))
                }
                _ => return Err(err(line, toks[0].col, "expected `start main`")),
            }
            continue;
        }
        let mut p = LineParser {
            line,
            toks,
            pos: 0,
            program_vars: program_vars.as_deref().expect("header parsed"),
            end_col,
        };
        transitions.push(p.rule()?);
    }
    let program_vars = program_vars.ok_or_else(|| err(1, 1, "missing `vars` header"))?;
    if start.is_none() {
        return Err(err(text.lines().count().max(1), 1, "missing `start` line"));
    }
    if transitions.is_empty() {
        return Err(err(
            text.lines().count().max(1),
            1,
            "expected at least one rule",
        ));
    }
    Ok(Its::new(program_vars, transitions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::its::print;
    use crate::terms::Atom;

    #[test]
    fn parses_countdown_loop() {
        let its = parse("vars x\nstart main\nf(x) -> f(x-1) [x > 0] cost 1\n").unwrap();
        let t = &its.transitions[0];
        let x = Poly::var(Var::program("x"));
        assert_eq!(t.src, Location::new("f"));
        assert_eq!(t.update.rhs()[0], &x - &Poly::one());
        assert_eq!(t.guard.atoms(), &[Atom::gt_zero(x)]);
        assert_eq!(t.cost, Cost::Finite(Poly::one()));
    }

    #[test]
    fn true_guard_is_empty_and_cost_defaults_to_one() {
        let its = parse("vars x\nstart main\nmain(x) -> f(x) [true]\n").unwrap();
        assert!(its.transitions[0].guard.is_empty());
        assert_eq!(its.transitions[0].cost, Cost::Finite(Poly::one()));
    }

    #[test]
    fn undeclared_identifiers_are_temporaries() {
        let its = parse("vars x\nstart main\nf(x) -> f(x-n) [x >= n && n > 0] cost n\n").unwrap();
        let t = &its.transitions[0];
        assert_eq!(
            t.temporaries().into_iter().collect::<Vec<_>>(),
            vec![Var::temporary("n")]
        );
        assert_eq!(t.guard.len(), 2);
    }

    #[test]
    fn reports_position_of_errors() {
        let e = parse("vars x\nstart main\nf(x) -> f(x-1) [x > 0.5]\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 21));
        assert!(e.msg.contains("non-integer"));

        let e = parse("vars x\nstart main\nf(x) -> f(x) [x > 0] cost inf\n").unwrap_err();
        assert!(e.msg.contains("infinite"));

        let e = parse("vars x\nstart main\nf(x) -> f(x/2) [x > 0]\n").unwrap_err();
        assert!(e.msg.contains("non-integer"));

        let e = parse("vars x\nstart main\nf(x) -> sink(x) [x > 0]\n").unwrap_err();
        assert!(e.msg.contains("reserved"));

        let e = parse("vars x\nstart main\nf(x) -> f(x [x > 0]\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn comments_and_blank_lines() {
        let its = parse(
            "# header\nvars x y\n\nstart main # entry\nmain(x, y) -> f(x, y) [true] # init\n",
        )
        .unwrap();
        assert_eq!(its.program_vars.len(), 2);
    }

    #[test]
    fn print_round_trip() {
        let src = "vars x y\nstart main\nmain(x, y) -> f(x, y) [true]\n\
                   f(x, y) -> f(x - y*u, y + 2) [x > 0 && y >= 0 && u == 1 && x^2 < 100] cost x*y + 3\n";
        let its = parse(src).unwrap();
        let again = parse(&print(&its)).unwrap();
        assert_eq!(its, again);
    }
}
