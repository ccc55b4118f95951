//! The element expression grammar:
//!
//! ```text
//! element := term (("+" | "-") term)*
//! term    := factor (("*" | "/") factor)*
//! factor  := rational | name | name "^" int
//!          | "x" "^" "(" coords ")" | "E" "^" "(" coords ")" | "y" "^" int
//!          | "(" scalar-sum ")"
//! ```
//!
//! Names are `[A-Za-z_][A-Za-z0-9_]*` and resolve to presentation generators
//! first, then to tower constants. Whitespace is insignificant. Division is
//! only defined by scalar factors.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{GenId, Presentation, WeylMonomial, Word};
use crate::error::{Error, Result};
use crate::exponents::ExponentVec;
use crate::scalars::{Scalar, Tower};
use crate::Element;

pub(crate) struct ElementParser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
    context: String,
}

/// A parsed multiplicative factor.
enum Factor {
    Scalar(Scalar),
    /// Inverse of a scalar (from `/`).
    Gen(GenId, i64),
    Weyl(WeylMonomial),
}

/// Raw parse target for PBW rule right-hand sides: the presentation does not
/// exist yet, so only the generator list and tower are consulted and no
/// reduction happens.
pub(crate) fn parse_raw_terms(
    text: &str,
    context: &str,
    tower: &Tower,
    gens: &[String],
) -> Result<Vec<(Word, Scalar)>> {
    let mut p = ElementParser::new(text, context);
    let terms = p.sum_raw(tower, gens)?;
    p.expect_end()?;
    Ok(terms)
}

/// Full parse into a canonical element of the presentation.
pub(crate) fn parse_element(text: &str, context: &str, pres: &Presentation) -> Result<Element> {
    let mut p = ElementParser::new(text, context);
    let e = p.sum_full(pres)?;
    p.expect_end()?;
    Ok(e)
}

impl<'a> ElementParser<'a> {
    fn new(src: &'a str, context: &str) -> Self {
        ElementParser {
            chars: src.chars().collect(),
            pos: 0,
            src,
            context: context.to_string(),
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            context: format!("{} (`{}` at column {})", self.context, self.src, self.pos + 1),
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect_end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos != self.chars.len() {
            return Err(self.err("trailing input"));
        }
        Ok(())
    }

    fn integer(&mut self, signed: bool) -> Result<i64> {
        self.skip_ws();
        let mut sign = 1i64;
        if signed && self.chars.get(self.pos) == Some(&'-') {
            sign = -1;
            self.pos += 1;
        }
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>().map(|v| sign * v).map_err(|_| self.err("integer out of range"))
    }

    fn name(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphabetic() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
            while self.pos < self.chars.len()
                && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
            {
                self.pos += 1;
            }
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn rational(&mut self) -> Result<BigRational> {
        let n = self.integer(false)?;
        // a "/" between two integer literals is a rational literal
        let save = self.pos;
        if self.peek() == Some('/') {
            self.pos += 1;
            self.skip_ws();
            if self.chars.get(self.pos).map(|c| c.is_ascii_digit()) == Some(true) {
                let d = self.integer(false)?;
                if d == 0 {
                    return Err(self.err("zero denominator"));
                }
                return Ok(BigRational::new(BigInt::from(n), BigInt::from(d)));
            }
            self.pos = save;
        }
        Ok(BigRational::from_integer(BigInt::from(n)))
    }

    fn coords(&mut self) -> Result<Vec<i64>> {
        if self.peek() != Some('(') {
            return Err(self.err("expected `(`"));
        }
        self.pos += 1;
        let mut out = vec![self.integer(true)?];
        while self.peek() == Some(',') {
            self.pos += 1;
            out.push(self.integer(true)?);
        }
        if self.peek() != Some(')') {
            return Err(self.err("expected `)`"));
        }
        self.pos += 1;
        Ok(out)
    }

    /// Parenthesized scalar subexpression over the tower.
    fn paren_scalar(&mut self, tower: &Tower) -> Result<Scalar> {
        // reuse the tower's scalar parser on the balanced substring
        self.skip_ws();
        debug_assert_eq!(self.chars.get(self.pos), Some(&'('));
        let start = self.pos;
        let mut depth = 0i32;
        let mut end = None;
        for i in self.pos..self.chars.len() {
            match self.chars[i] {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        end = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let Some(end) = end else { return Err(self.err("unbalanced parentheses")) };
        let inner: String = self.chars[start + 1..end].iter().collect();
        let v = tower.parse_scalar(&inner).map_err(|e| self.err(&e.to_string()))?;
        self.pos = end + 1;
        Ok(v)
    }

    fn factor(
        &mut self,
        tower: &Tower,
        gens: Option<&[String]>,
        weyl_one: Option<&ExponentVec>,
    ) -> Result<Factor> {
        match self.peek() {
            Some('(') => Ok(Factor::Scalar(self.paren_scalar(tower)?)),
            Some(c) if c.is_ascii_digit() => {
                let q = self.rational()?;
                let base = tower.from_rational(q);
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let e = self.integer(true)?;
                    return Ok(Factor::Scalar(
                        tower.pow(&base, e).map_err(|e| self.err(&e.to_string()))?,
                    ));
                }
                Ok(Factor::Scalar(base))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.name();
                // builtin special heads
                if let Some(one_vec) = weyl_one {
                    let rank = one_vec.rank();
                    match name.as_str() {
                        "x" => {
                            let mut m = WeylMonomial::unit(rank);
                            if self.peek() == Some('^') {
                                self.pos += 1;
                                if self.peek() == Some('(') {
                                    let coords = self.coords()?;
                                    if coords.len() != rank {
                                        return Err(self.err("coordinate list has wrong rank"));
                                    }
                                    m.beta = ExponentVec(coords);
                                    return Ok(Factor::Weyl(m));
                                }
                                // integer power of the distinguished x
                                let e = self.integer(true)?;
                                m.beta = ExponentVec(one_vec.0.iter().map(|c| c * e).collect());
                                return Ok(Factor::Weyl(m));
                            }
                            m.beta = one_vec.clone();
                            return Ok(Factor::Weyl(m));
                        }
                        "E" => {
                            if self.peek() != Some('^') {
                                return Err(self.err("`E` requires `^(coords)`"));
                            }
                            self.pos += 1;
                            let coords = self.coords()?;
                            if coords.len() != rank {
                                return Err(self.err("coordinate list has wrong rank"));
                            }
                            let mut m = WeylMonomial::unit(rank);
                            m.gamma = ExponentVec(coords);
                            return Ok(Factor::Weyl(m));
                        }
                        "y" => {
                            let mut k = 1i64;
                            if self.peek() == Some('^') {
                                self.pos += 1;
                                k = self.integer(true)?;
                            }
                            let mut m = WeylMonomial::unit(rank);
                            m.hyper = k;
                            return Ok(Factor::Weyl(m));
                        }
                        "dx" | "dt" => {
                            let mut pow = 1i64;
                            if self.peek() == Some('^') {
                                self.pos += 1;
                                pow = self.integer(true)?;
                            }
                            if pow < 0 {
                                return Err(self.err("derivative powers must be nonnegative"));
                            }
                            let mut m = WeylMonomial::unit(rank);
                            if name == "dx" {
                                m.dx = pow as u32;
                            } else {
                                m.dt = pow as u32;
                            }
                            return Ok(Factor::Weyl(m));
                        }
                        _ => {}
                    }
                }
                // generator?
                if let Some(gens) = gens {
                    if let Some(gi) = gens.iter().position(|g| g == &name) {
                        let mut pow = 1i64;
                        if self.peek() == Some('^') {
                            self.pos += 1;
                            pow = self.integer(true)?;
                        }
                        if pow < 0 {
                            return Err(self.err("generators are not invertible"));
                        }
                        return Ok(Factor::Gen(gi as GenId, pow));
                    }
                }
                // constant?
                let base = tower
                    .constant(&name)
                    .map_err(|_| self.err(&format!("unknown name `{name}`")))?;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let e = self.integer(true)?;
                    return Ok(Factor::Scalar(
                        tower.pow(&base, e).map_err(|e| self.err(&e.to_string()))?,
                    ));
                }
                Ok(Factor::Scalar(base))
            }
            _ => Err(self.err("expected factor")),
        }
    }

    // ----- raw (word-level) parsing for PBW rule right-hand sides -----

    fn term_raw(&mut self, tower: &Tower, gens: &[String]) -> Result<(Word, Scalar)> {
        let mut coeff = tower.one();
        let mut word: Word = Vec::new();
        loop {
            let dividing = if self.peek() == Some('/') {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.factor(tower, Some(gens), None)? {
                Factor::Scalar(s) => {
                    let s = if dividing {
                        tower.inv(&s).map_err(|e| self.err(&e.to_string()))?
                    } else {
                        s
                    };
                    coeff = tower.mul(&coeff, &s);
                }
                Factor::Gen(g, pow) => {
                    if dividing {
                        return Err(self.err("cannot divide by a generator"));
                    }
                    for _ in 0..pow {
                        word.push(g);
                    }
                }
                Factor::Weyl(_) => return Err(self.err("builtin monomial in a PBW context")),
            }
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                }
                Some('/') => {} // handled at loop head
                _ => break,
            }
        }
        Ok((word, coeff))
    }

    fn sum_raw(&mut self, tower: &Tower, gens: &[String]) -> Result<Vec<(Word, Scalar)>> {
        let mut out = Vec::new();
        let mut negate = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (w, c) = self.term_raw(tower, gens)?;
            let c = if negate { tower.neg(&c) } else { c };
            out.push((w, c));
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(out)
    }

    // ----- full parsing into canonical elements -----

    fn term_full(&mut self, pres: &Presentation) -> Result<Element> {
        let tower = pres.tower();
        let (gens, one_vec): (Option<Vec<String>>, Option<ExponentVec>) = match pres {
            Presentation::Pbw(p) => (Some(p.generator_names().to_vec()), None),
            Presentation::Weyl(w) => (None, Some(w.module().one_vec().clone())),
        };
        let one_ref = one_vec.as_ref();
        let mut acc = pres.one_element();
        loop {
            let dividing = if self.peek() == Some('/') {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.factor(tower, gens.as_deref(), one_ref)? {
                Factor::Scalar(s) => {
                    let s = if dividing {
                        tower.inv(&s).map_err(|e| self.err(&e.to_string()))?
                    } else {
                        s
                    };
                    acc = pres.scale(&acc, &s);
                }
                Factor::Gen(g, pow) => {
                    if dividing {
                        return Err(self.err("cannot divide by a generator"));
                    }
                    let Presentation::Pbw(p) = pres else { unreachable!() };
                    for _ in 0..pow {
                        acc = pres
                            .multiply(&acc, &p.generator_element(g))
                            .map_err(|e| self.err(&e.to_string()))?;
                    }
                }
                Factor::Weyl(m) => {
                    if dividing {
                        return Err(self.err("cannot divide by a monomial"));
                    }
                    let Presentation::Weyl(w) = pres else {
                        return Err(self.err("builtin monomial in a PBW context"));
                    };
                    let e = w
                        .monomial_element(m, tower.one())
                        .map_err(|e| self.err(&e.to_string()))?;
                    acc = pres.multiply(&acc, &e).map_err(|e| self.err(&e.to_string()))?;
                }
            }
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                }
                Some('/') => {}
                _ => break,
            }
        }
        Ok(acc)
    }

    fn sum_full(&mut self, pres: &Presentation) -> Result<Element> {
        let mut acc = pres.zero_element();
        let mut negate = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term_full(pres)?;
            let t = if negate { pres.neg(&t) } else { t };
            acc = pres.add(&acc, &t).map_err(|e| self.err(&e.to_string()))?;
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

