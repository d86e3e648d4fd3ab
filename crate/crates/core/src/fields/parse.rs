//! Text grammar shared by field elements, forms and symbols.
//!
//! ```text
//! expr   := [+|-] term ((+|-) term)*
//! term   := factor (* factor)*
//! factor := atom [^ [-]int]
//! atom   := int | ident | [int, ...] | ( expr ) | O(ident[^[-]int])
//! ```
//!
//! An `O(...)` that appears as a whole summand caps the precision of the
//! finished sum; anywhere else it stands for an inexact zero.

use super::Field;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Expr {
    Int(i64),
    Ident(String),
    Vector(Vec<i64>),
    BigO(String, i64),
    Sum(Vec<(bool, Expr)>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().map_err(|_| Error::Parse(format!("integer {s} out of range")))?;
            out.push(Tok::Num(n));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()[],".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}' at token {}", self.pos)))
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.next() {
            Some(Tok::Num(n)) => Ok(if neg { -n } else { n }),
            _ => Err(Error::Parse("expected an integer".into())),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            terms.push((neg, self.term()?));
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 && !terms[0].0 { terms.pop().unwrap().1 } else { Expr::Sum(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Product(factors) })
    }

    fn factor(&mut self) -> Result<Expr> {
        let atom = self.atom()?;
        if self.eat('^') {
            let e = self.signed_int()?;
            return Ok(Expr::Pow(Box::new(atom), e));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(Expr::Int(n)),
            Some(Tok::Ident(name)) if name == "O" && self.peek() == Some(&Tok::Sym('(')) => {
                self.expect('(')?;
                let var = match self.next() {
                    Some(Tok::Ident(v)) => v,
                    _ => return Err(Error::Parse("expected a variable inside O(...)".into())),
                };
                let n = if self.eat('^') { self.signed_int()? } else { 1 };
                self.expect(')')?;
                Ok(Expr::BigO(var, n))
            }
            Some(Tok::Ident(name)) => Ok(Expr::Ident(name)),
            Some(Tok::Sym('[')) => {
                let mut v = Vec::new();
                if !self.eat(']') {
                    loop {
                        v.push(self.signed_int()?);
                        if self.eat(']') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Expr::Vector(v))
            }
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub(crate) fn parse_expr(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input after token {}", p.pos)));
    }
    Ok(e)
}

/// Splits `"(a, b, c)"` or `"a, b, c"` into its top-level items.
pub(crate) fn split_list(text: &str) -> Result<Vec<String>> {
    let mut s = text.trim();
    if s.starts_with('(') && s.ends_with(')') {
        // strip only when the opening paren closes at the very end
        let mut depth = 0i32;
        let mut closes_at_end = true;
        for (i, c) in s.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                _ => {}
            }
            if depth == 0 && i + 1 < s.len() {
                closes_at_end = false;
                break;
            }
        }
        if closes_at_end {
            s = &s[1..s.len() - 1];
        }
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced brackets".into()));
    }
    out.push(cur);
    let out: Vec<String> = out.into_iter().map(|x| x.trim().to_string()).collect();
    if out.iter().any(|x| x.is_empty()) {
        return Err(Error::Parse(format!("empty item in list {text:?}")));
    }
    Ok(out)
}

/// Evaluation target for parsed expressions.
pub(crate) trait Target {
    type V: Clone;
    fn int(&self, n: i64) -> Result<Self::V>;
    fn ident(&self, name: &str) -> Result<Self::V>;
    fn vector(&self, c: &[i64]) -> Result<Self::V>;
    fn big_o(&self, var: &str, n: i64) -> Result<Self::V>;
    fn cap(&self, v: Self::V, var: &str, n: i64) -> Result<Self::V>;
    fn zero(&self) -> Self::V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn pow(&self, a: &Self::V, e: i64) -> Result<Self::V>;
}

pub(crate) fn eval<T: Target>(t: &T, e: &Expr) -> Result<T::V> {
    match e {
        Expr::Int(n) => t.int(*n),
        Expr::Ident(name) => t.ident(name),
        Expr::Vector(c) => t.vector(c),
        Expr::BigO(var, n) => t.big_o(var, *n),
        Expr::Sum(terms) => {
            let mut acc = t.zero();
            let mut caps = Vec::new();
            for (neg, term) in terms {
                if let Expr::BigO(var, n) = term {
                    caps.push((var, *n));
                    continue;
                }
                let v = eval(t, term)?;
                acc = t.add(&acc, &if *neg { t.neg(&v) } else { v });
            }
            for (var, n) in caps {
                acc = t.cap(acc, var, n)?;
            }
            Ok(acc)
        }
        Expr::Product(fs) => {
            let mut acc = eval(t, &fs[0])?;
            for f in &fs[1..] {
                acc = t.mul(&acc, &eval(t, f)?);
            }
            Ok(acc)
        }
        Expr::Pow(base, k) => t.pow(&eval(t, base)?, *k),
    }
}

struct ElemTarget<'a, F>(&'a F);

impl<F: Field> Target for ElemTarget<'_, F> {
    type V = F::Elem;

    fn int(&self, n: i64) -> Result<F::Elem> {
        Ok(self.0.from_int(n))
    }

    fn ident(&self, name: &str) -> Result<F::Elem> {
        self.0
            .ident(name)
            .ok_or_else(|| Error::Parse(format!("unknown identifier {name:?} in {}", self.0.descriptor())))
    }

    fn vector(&self, c: &[i64]) -> Result<F::Elem> {
        self.0
            .from_coeff_vector(c)
            .ok_or_else(|| Error::Parse(format!("coefficient vector {c:?} does not fit {}", self.0.descriptor())))
    }

    fn big_o(&self, var: &str, n: i64) -> Result<F::Elem> {
        self.0.cap_precision(self.0.zero(), var, n)
    }

    fn cap(&self, v: F::Elem, var: &str, n: i64) -> Result<F::Elem> {
        self.0.cap_precision(v, var, n)
    }

    fn zero(&self) -> F::Elem {
        self.0.zero()
    }

    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.add(a, b)
    }

    fn neg(&self, a: &F::Elem) -> F::Elem {
        self.0.neg(a)
    }

    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        self.0.mul(a, b)
    }

    fn pow(&self, a: &F::Elem, e: i64) -> Result<F::Elem> {
        self.0.pow_signed(a, e)
    }
}

pub(crate) fn parse_element<F: Field>(field: &F, text: &str) -> Result<F::Elem> {
    eval(&ElemTarget(field), &parse_expr(text)?)
}

/// Parses a comma separated list such as `"(t, 3, -1)"`.
pub fn parse_elements<F: Field>(field: &F, text: &str) -> Result<Vec<F::Elem>> {
    split_list(text)?.iter().map(|s| field.parse_elem(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_shapes() {
        assert_eq!(parse_expr("3").unwrap(), Expr::Int(3));
        assert_eq!(
            parse_expr("-t^-1").unwrap(),
            Expr::Sum(vec![(true, Expr::Pow(Box::new(Expr::Ident("t".into())), -1))])
        );
        assert_eq!(parse_expr("O(t)").unwrap(), Expr::BigO("t".into(), 1));
        assert_eq!(parse_expr("[1,-2]").unwrap(), Expr::Vector(vec![1, -2]));
        assert!(parse_expr("3 +").is_err());
        assert!(parse_expr("(3").is_err());
        assert!(parse_expr("3 $ 4").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(split_list("(t, 3)").unwrap(), vec!["t", "3"]);
        assert_eq!(split_list("([1,2], (t+1)*s)").unwrap(), vec!["[1,2]", "(t+1)*s"]);
        assert_eq!(split_list("(t+1)*(s)").unwrap(), vec!["(t+1)*(s)"]);
        assert_eq!(split_list("(t+1)").unwrap(), vec!["t+1"]);
        assert!(split_list("(t,)").is_err());
    }
}
