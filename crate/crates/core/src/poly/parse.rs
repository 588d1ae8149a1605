//! Recursive-descent parser for the polynomial text form:
//!
//! ```text
//! poly     := ['-'] term (('+'|'-') term)*
//! term     := integer | integer '*' monomial | monomial
//! monomial := varpow ('*' varpow)*
//! varpow   := 'x' index ['^' positive-integer]
//! ```
//!
//! Whitespace between tokens is ignored.

use num_bigint::BigInt;
use num_traits::One;

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    max_var: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        // ASCII digits only.
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn positive(&mut self, what: &str) -> Result<usize> {
        let start = self.pos;
        let d = self.digits()?;
        match d.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(Error::Syntax { pos: start, msg: format!("{what} must be a positive integer") }),
        }
    }

    fn varpow(&mut self, exps: &mut Vec<u32>) -> Result<()> {
        if self.peek() != Some(b'x') {
            return self.err("expected variable 'x<index>'");
        }
        self.pos += 1;
        if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            return self.err("expected variable index after 'x'");
        }
        let index = self.positive("variable index")?;
        if index > self.max_var {
            return Err(Error::VariableOutOfRange { index, s: self.max_var });
        }
        let mut exp = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.positive("exponent")?;
            exp = u32::try_from(e).or_else(|_| self.err("exponent too large"))?;
        }
        if exps.len() < index {
            exps.resize(index, 0);
        }
        exps[index - 1] += exp;
        Ok(())
    }

    fn monomial(&mut self) -> Result<Monomial> {
        let mut exps = Vec::new();
        self.varpow(&mut exps)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.varpow(&mut exps)?;
        }
        Ok(Monomial::new(exps))
    }

    fn term(&mut self) -> Result<(Monomial, BigInt)> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let coeff: BigInt = self.digits()?.parse().unwrap();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    Ok((self.monomial()?, coeff))
                } else {
                    Ok((Monomial::one(), coeff))
                }
            }
            Some(b'x') => Ok((self.monomial()?, BigInt::one())),
            Some(_) => self.err("expected a term"),
            None => self.err("unexpected end of input"),
        }
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut terms = Vec::new();
        let mut negative = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negative = true;
        }
        loop {
            let (m, c) = self.term()?;
            terms.push((m, if negative { -c } else { c }));
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                None => break,
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
            self.pos += 1;
        }
        Ok(Polynomial::from_terms(terms))
    }
}

pub(super) fn parse_polynomial(text: &str, s: usize) -> Result<Polynomial> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0, max_var: s };
    parser.poly()
}
