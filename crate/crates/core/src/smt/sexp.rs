//! Just enough s-expression reading for solver responses.

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl Sexp {
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s) => Some(s),
            Sexp::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(l) => Some(l),
            Sexp::Atom(_) => None,
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<String>, String> {
    let mut toks = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' => {
                toks.push(c.to_string());
                chars.next();
            }
            '|' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('|') => break,
                        Some(d) => s.push(d),
                        None => return Err("unterminated quoted symbol".into()),
                    }
                }
                toks.push(s);
            }
            '"' => {
                chars.next();
                let mut s = String::from("\"");
                loop {
                    match chars.next() {
                        Some('"') if chars.peek() == Some(&'"') => {
                            chars.next();
                            s.push('"');
                        }
                        Some('"') => break,
                        Some(d) => s.push(d),
                        None => return Err("unterminated string".into()),
                    }
                }
                s.push('"');
                toks.push(s);
            }
            ';' => {
                for d in chars.by_ref() {
                    if d == '\n' {
                        break;
                    }
                }
            }
            _ => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                toks.push(s);
            }
        }
    }
    Ok(toks)
}

/// Parses all top-level expressions in `src`.
pub fn parse_all(src: &str) -> Result<Vec<Sexp>, String> {
    let toks = tokenize(src)?;
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    for t in toks {
        match t.as_str() {
            "(" => stack.push(Vec::new()),
            ")" => {
                let done = stack.pop().ok_or("unbalanced `)`")?;
                stack
                    .last_mut()
                    .ok_or("unbalanced `)`")?
                    .push(Sexp::List(done));
            }
            _ => stack
                .last_mut()
                .expect("non-empty stack")
                .push(Sexp::Atom(t)),
        }
        if stack.is_empty() {
            return Err("unbalanced `)`".into());
        }
    }
    if stack.len() != 1 {
        return Err("unbalanced `(`".into());
    }
    Ok(stack.pop().unwrap())
}

/// Paren depth after reading `src`, ignoring quoted symbols and strings.
pub fn depth(src: &str) -> i64 {
    let mut d = 0;
    let mut in_bar = false;
    let mut in_str = false;
    for c in src.chars() {
        match c {
            '|' if !in_str => in_bar = !in_bar,
            '"' if !in_bar => in_str = !in_str,
            '(' if !in_bar && !in_str => d += 1,
            ')' if !in_bar && !in_str => d -= 1,
            _ => {}
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_model() {
        let src = "(\n  (define-fun |t!n| () Int\n    (- 3))\n  (define-fun x () Int 2)\n)";
        let e = parse_all(src).unwrap();
        assert_eq!(e.len(), 1);
        let defs = e[0].as_list().unwrap();
        assert_eq!(defs[0].as_list().unwrap()[1], Sexp::Atom("t!n".into()));
        assert_eq!(depth(src), 0);
        assert_eq!(depth("(a (b"), 2);
    }

    #[test]
    fn rejects_unbalanced() {
        assert!(parse_all("(a").is_err());
        assert!(parse_all("a)").is_err());
    }
}
