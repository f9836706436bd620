//! Exact arithmetic in `Q[y₁, …, y_m, t] / (t² + ‖Y‖²)`, `‖Y‖² = Σ yᵢ²`.
//!
//! Every class has a unique representative `p + t·q` with `p, q` free of `t`.
//! For `m ≥ 5` the ring is a UFD and `t̄` is prime, so the `t̄`-valuation is
//! the exponent of a prime. For smaller `m` the valuation is still computed
//! as the largest power of `t̄` that divides, with no factorization claims.

mod parse;
mod poly;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use parse::parse_t_poly;
pub use poly::{rational, Monomial, MultiPoly};

use crate::error::{Error, Result};

pub const MAX_VARS: usize = 6;
pub const MAX_T_DEGREE: usize = 3;

/// `p + t·q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotElem {
    pub p: MultiPoly,
    pub q: MultiPoly,
}

impl QuotElem {
    pub fn new(p: MultiPoly, q: MultiPoly) -> Self {
        assert_eq!(p.nvars(), q.nvars(), "variable count");
        Self { p, q }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let n = p.nvars();
        Self::new(p, MultiPoly::zero(n))
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(MultiPoly::zero(nvars), MultiPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(nvars))
    }

    /// The class `t̄` of `t`.
    pub fn tbar(nvars: usize) -> Self {
        Self::new(MultiPoly::zero(nvars), MultiPoly::one(nvars))
    }

    pub fn tbar_pow(nvars: usize, k: u32) -> Self {
        (0..k).fold(Self::one(nvars), |acc, _| acc.mul(&Self::tbar(nvars)))
    }

    pub fn nvars(&self) -> usize {
        self.p.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.p + &other.p, &self.q + &other.q)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.p - &other.p, &self.q - &other.q)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.p, -&self.q)
    }

    /// `(p₁ + tq₁)(p₂ + tq₂) = (p₁p₂ − ‖Y‖²q₁q₂) + t(p₁q₂ + q₁p₂)`.
    pub fn mul(&self, other: &Self) -> Self {
        let n = MultiPoly::norm_squared(self.nvars());
        let p = &(&self.p * &other.p) - &(&n * &(&self.q * &other.q));
        let q = &(&self.p * &other.q) + &(&self.q * &other.p);
        Self::new(p, q)
    }
}

impl fmt::Display for QuotElem {
    /// Flat literal: the `p` terms, then the `q` terms times `t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.p);
        }
        let p = self.p.terms().rev().map(|(m, c)| (m, c, 0));
        let q = self.q.terms().rev().map(|(m, c)| (m, c, 1));
        poly::write_terms(f, p.chain(q))
    }
}

impl Serialize for QuotElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Parts {
            nvars: usize,
            p: String,
            q: String,
        }
        Parts { nvars: self.nvars(), p: self.p.to_string(), q: self.q.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuotElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Parts {
            nvars: usize,
            p: String,
            q: String,
        }
        let parts = Parts::deserialize(d)?;
        let one = |s: &str| -> Result<MultiPoly> {
            let c = parse_t_poly(s, parts.nvars)?;
            if c.len() > 1 {
                return Err(Error::Parse(format!("unexpected t in component {s}")));
            }
            Ok(c.into_iter().next().expect("at least one coefficient"))
        };
        let p = one(&parts.p).map_err(serde::de::Error::custom)?;
        let q = one(&parts.q).map_err(serde::de::Error::custom)?;
        Ok(QuotElem::new(p, q))
    }
}

fn check_nvars(nvars: usize) -> Result<()> {
    if nvars > MAX_VARS {
        return Err(Error::InvalidParameter(format!("at most {MAX_VARS} variables, got {nvars}")));
    }
    Ok(())
}

/// Reduces `Σ cₖ tᵏ` (`k ≤ 3`) by `t² ↦ −‖Y‖²`.
pub fn reduce(coeffs: &[MultiPoly]) -> Result<QuotElem> {
    let Some(first) = coeffs.first() else {
        return Err(Error::InvalidParameter("empty coefficient list".into()));
    };
    let nvars = first.nvars();
    check_nvars(nvars)?;
    if let Some(bad) = coeffs.iter().find(|c| c.nvars() != nvars) {
        return Err(Error::VariableMismatch { expected: nvars, got: bad.nvars() });
    }
    let degree = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    if degree > MAX_T_DEGREE {
        return Err(Error::DegreeTooHigh(degree));
    }
    let minus_n = -&MultiPoly::norm_squared(nvars);
    let mut out = QuotElem::zero(nvars);
    let mut factor = MultiPoly::one(nvars);
    for (k, c) in coeffs.iter().enumerate().take(degree + 1) {
        if k >= 2 && k % 2 == 0 {
            factor = &factor * &minus_n;
        }
        let term = &factor * c;
        if k % 2 == 0 {
            out.p = &out.p + &term;
        } else {
            out.q = &out.q + &term;
        }
    }
    Ok(out)
}

/// Parses a literal and reduces it.
pub fn parse_elem(text: &str, nvars: usize) -> Result<QuotElem> {
    check_nvars(nvars)?;
    reduce(&parse_t_poly(text, nvars)?)
}

/// `e′` with `t̄·e′ = e`, if it exists.
///
/// `t̄(a + tb) = −‖Y‖²b + ta`, so `e = p + tq` is divisible exactly when
/// `‖Y‖²` divides `p`, and then `e′ = q − t·p/‖Y‖²`. With no variables
/// `t̄² = 0` and the quotient is taken as `q`.
pub fn tbar_divide(e: &QuotElem) -> Option<QuotElem> {
    let nvars = e.nvars();
    if nvars == 0 {
        return e.p.is_zero().then(|| QuotElem::from_poly(e.q.clone()));
    }
    let b = e.p.div_exact(&MultiPoly::norm_squared(nvars))?;
    Some(QuotElem::new(e.q.clone(), -&b))
}

/// Largest `k ≤ cap` with `t̄ᵏ | e`.
pub fn tbar_valuation(e: &QuotElem, cap: usize) -> Result<usize> {
    if e.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut cur = e.clone();
    for k in 0..cap {
        match tbar_divide(&cur) {
            Some(next) => cur = next,
            None => return Ok(k),
        }
    }
    Ok(cap)
}

/// Entry `f + t·g` of a matrix over `Q[Y][t]` of degree at most one in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearEntry {
    pub f: MultiPoly,
    pub g: MultiPoly,
}

impl LinearEntry {
    pub fn new(f: MultiPoly, g: MultiPoly) -> Self {
        Self { f, g }
    }

    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        let mut c = parse_t_poly(text, nvars)?.into_iter();
        let f = c.next().expect("at least one coefficient");
        let g = c.next().unwrap_or_else(|| MultiPoly::zero(nvars));
        if c.any(|x| !x.is_zero()) {
            return Err(Error::DegreeTooHigh(2));
        }
        Ok(Self { f, g })
    }
}

/// A 2×2 minor `f + tg + t²h` that is not divisible by `t² + ‖Y‖²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorFailure {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    pub f: MultiPoly,
    pub g: MultiPoly,
    pub h: MultiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorCheck {
    pub ok: bool,
    pub minors_checked: usize,
    pub first_failure: Option<MinorFailure>,
}

/// Whether every 2×2 minor `f + tg + t²h` has `g = 0` and `f = ‖Y‖²h`.
pub fn minor_divisibility_check(m: &[Vec<LinearEntry>]) -> Result<MinorCheck> {
    let Some(row0) = m.first() else {
        return Ok(MinorCheck { ok: true, minors_checked: 0, first_failure: None });
    };
    let cols = row0.len();
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidParameter("ragged matrix".into()));
    }
    let Some(nvars) = row0.first().map(|e| e.f.nvars()) else {
        return Ok(MinorCheck { ok: true, minors_checked: 0, first_failure: None });
    };
    if let Some(bad) = m.iter().flatten().find(|e| e.f.nvars() != nvars || e.g.nvars() != nvars) {
        return Err(Error::VariableMismatch { expected: nvars, got: bad.f.nvars().max(bad.g.nvars()) });
    }
    let n = MultiPoly::norm_squared(nvars);
    let mut checked = 0;
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            for k in 0..cols {
                for l in k + 1..cols {
                    let (a, b, c, d) = (&m[i][k], &m[j][l], &m[i][l], &m[j][k]);
                    let f = &(&a.f * &b.f) - &(&c.f * &d.f);
                    let g = &(&(&a.f * &b.g) + &(&a.g * &b.f)) - &(&(&c.f * &d.g) + &(&c.g * &d.f));
                    let h = &(&a.g * &b.g) - &(&c.g * &d.g);
                    checked += 1;
                    if !g.is_zero() || f != &n * &h {
                        return Ok(MinorCheck {
                            ok: false,
                            minors_checked: checked,
                            first_failure: Some(MinorFailure { rows: (i, j), cols: (k, l), f, g, h }),
                        });
                    }
                }
            }
        }
    }
    Ok(MinorCheck { ok: true, minors_checked: checked, first_failure: None })
}
