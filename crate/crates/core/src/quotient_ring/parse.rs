//! Literal syntax: a sum of terms `c*y1^a1*...*t^k`, where `c` is an integer
//! or a fraction `p/q`. Factors may appear in any order and repeat; a
//! missing coefficient means 1. Decimal points and exponents are rejected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Monomial, MultiPoly};
use crate::error::{Error, Result};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("column {}: {msg}", self.pos + 1))
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        if matches!(self.src.get(self.pos), Some(b'.') | Some(b'e') | Some(b'E')) {
            return Err(self.err("floating-point coefficients are not allowed; write p/q"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn small(&mut self) -> Result<u32> {
        let d = self.digits()?;
        d.parse().map_err(|_| self.err("exponent or index too large"))
    }
}

/// Parses a literal into its coefficients in `t`: entry `k` multiplies `tᵏ`.
pub fn parse_t_poly(text: &str, nvars: usize) -> Result<Vec<MultiPoly>> {
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut coeffs: Vec<MultiPoly> = Vec::new();
    let mut first = true;
    loop {
        let negative = match lx.peek() {
            Some(b'+') if !first => {
                lx.pos += 1;
                false
            }
            Some(b'-') => {
                lx.pos += 1;
                true
            }
            None if first => return Err(lx.err("empty expression")),
            _ if first => false,
            None => break,
            Some(_) => return Err(lx.err("expected '+' or '-'")),
        };
        first = false;
        let (c, mono, tpow) = term(&mut lx, nvars)?;
        let c = if negative { -c } else { c };
        let k = tpow as usize;
        while coeffs.len() <= k {
            coeffs.push(MultiPoly::zero(nvars));
        }
        coeffs[k] = &coeffs[k] + &MultiPoly::monomial(nvars, mono, c);
        if lx.peek().is_none() {
            break;
        }
    }
    if coeffs.is_empty() {
        coeffs.push(MultiPoly::zero(nvars));
    }
    Ok(coeffs)
}

fn term(lx: &mut Lexer<'_>, nvars: usize) -> Result<(BigRational, Monomial, u32)> {
    let mut c = BigRational::one();
    let mut exps = vec![0u32; nvars];
    let mut tpow = 0u32;
    loop {
        match lx.peek() {
            Some(b'0'..=b'9') => {
                let num: BigInt = lx.digits()?.parse().expect("digits");
                let mut value = BigRational::from_integer(num);
                if lx.peek() == Some(b'/') {
                    lx.pos += 1;
                    let den: BigInt = lx.digits()?.parse().expect("digits");
                    if den.is_zero() {
                        return Err(lx.err("zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                c *= value;
            }
            Some(b'y') => {
                lx.pos += 1;
                let idx = lx.small()? as usize;
                if idx == 0 || idx > nvars {
                    return Err(Error::VariableMismatch { expected: nvars, got: idx });
                }
                exps[idx - 1] += exponent(lx)?;
            }
            Some(b't') => {
                lx.pos += 1;
                tpow += exponent(lx)?;
            }
            _ => return Err(lx.err("expected a number, y<i> or t")),
        }
        if lx.peek() == Some(b'*') {
            lx.pos += 1;
        } else {
            return Ok((c, Monomial::new(exps), tpow));
        }
    }
}

fn exponent(lx: &mut Lexer<'_>) -> Result<u32> {
    if lx.peek() == Some(b'^') {
        lx.pos += 1;
        lx.small()
    } else {
        Ok(1)
    }
}
