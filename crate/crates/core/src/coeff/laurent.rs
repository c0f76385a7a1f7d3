use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ExactRational;
use crate::error::{Error, Result};

/// Exponent pair `(e_q, e_t)`.
pub type Exponent = (i32, i32);

/// A Laurent polynomial in `q` and `t` with rational coefficients.
///
/// Terms are kept in a map ordered lexicographically by `(e_q, e_t)`; zero
/// coefficients are never stored, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponent, ExactRational>,
}

/// One serialized term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub eq: i32,
    pub et: i32,
    pub coeff: ExactRational,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(ExactRational::one())
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::monomial(c, (0, 0))
    }

    pub fn monomial(c: ExactRational, exp: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn q() -> Self {
        Self::monomial(ExactRational::one(), (1, 0))
    }

    pub fn t() -> Self {
        Self::monomial(ExactRational::one(), (0, 1))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, ExactRational)>) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &ExactRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Exponent) -> ExactRational {
        self.terms.get(&e).cloned().unwrap_or_else(ExactRational::zero)
    }

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<(Exponent, &ExactRational)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub fn min_exponents(&self) -> Option<Exponent> {
        let eq = self.terms.keys().map(|e| e.0).min()?;
        let et = self.terms.keys().map(|e| e.1).min()?;
        Some((eq, et))
    }

    pub fn max_exponents(&self) -> Option<Exponent> {
        let eq = self.terms.keys().map(|e| e.0).max()?;
        let et = self.terms.keys().map(|e| e.1).max()?;
        Some((eq, et))
    }

    fn add_term(&mut self, e: Exponent, c: &ExactRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by `q^dq t^dt`.
    pub fn shift(&self, (dq, dt): Exponent) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, v)| ((e.0 + dq, e.1 + dt), v.clone())).collect(),
        }
    }

    /// Rewrites exponents through `f`, summing terms that collide.
    pub fn map_exponents(&self, f: impl Fn(Exponent) -> Exponent) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (f(*e), c.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let (lead_e, lead_c) = divisor.leading()?;
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        // any exact quotient has its exponents inside this box
        let (fmin, fmax) = (self.min_exponents()?, self.max_exponents()?);
        let (gmin, gmax) = (divisor.min_exponents()?, divisor.max_exponents()?);
        let lo = (fmin.0 - gmin.0, fmin.1 - gmin.1);
        let hi = (fmax.0 - gmax.0, fmax.1 - gmax.1);
        if lo.0 > hi.0 || lo.1 > hi.1 {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some((re, rc)) = rem.leading() {
            let qe = (re.0 - lead_e.0, re.1 - lead_e.1);
            if qe.0 < lo.0 || qe.0 > hi.0 || qe.1 < lo.1 || qe.1 > hi.1 {
                return None;
            }
            let qc = rc / lead_c;
            for (e, c) in divisor.terms.iter() {
                rem.add_term((e.0 + qe.0, e.1 + qe.1), &-(c * &qc));
            }
            quot.add_term(qe, &qc);
        }
        Some(quot)
    }

    /// Exact substitution; negative powers of a zero value are an error.
    pub fn evaluate(&self, q: &ExactRational, t: &ExactRational) -> Result<ExactRational> {
        let mut acc = ExactRational::zero();
        for (&(eq, et), c) in &self.terms {
            acc += &(c * &q.pow(eq)? * t.pow(et)?);
        }
        Ok(acc)
    }

    /// Terms sorted by `(e_q, e_t)`.
    pub fn to_terms(&self) -> Vec<Term> {
        self.terms
            .iter()
            .map(|(&(eq, et), c)| Term {
                eq,
                et,
                coeff: c.clone(),
            })
            .collect()
    }

    /// Splits off content and monomial: `self = c · q^a t^b · f` where `f` is a
    /// polynomial with coprime integer coefficients, no monomial factor and a
    /// positive leading coefficient. Returns `None` for the zero polynomial.
    pub fn normalize(&self) -> Option<(ExactRational, Exponent, LaurentPoly)> {
        let min = self.min_exponents()?;
        let shifted = self.shift((-min.0, -min.1));
        let mut denom_lcm = BigInt::one();
        for c in shifted.terms.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for c in shifted.terms.values() {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        let lead_negative = shifted.leading().map(|(_, c)| c.is_negative()).unwrap_or(false);
        let mut content = ExactRational::new(numer_gcd.abs(), denom_lcm).ok()?;
        if lead_negative {
            content = -content;
        }
        let inv = content.recip().ok()?;
        Some((content, min, shifted.scale(&inv)))
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c);
        }
        out
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term((e1.0 + e2.0, e1.1 + e2.1), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(eq, et), c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (eq == 0 && et == 0) {
                if mag.is_integer() {
                    factors.push(mag.numer().to_string());
                } else {
                    factors.push(format!("({mag})"));
                }
            }
            for (var, e) in [("q", eq), ("t", et)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_terms().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(deserializer)?;
        Ok(LaurentPoly::from_terms(terms.into_iter().map(|t| ((t.eq, t.et), t.coeff))))
    }
}

/// Evaluation error helper used by rational functions.
pub(crate) fn pole(factor: &LaurentPoly) -> Error {
    Error::Pole {
        factor: factor.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::frac(n, d)
    }

    fn binom(a: i32, b: i32) -> LaurentPoly {
        // 1 - q^a t^b
        LaurentPoly::from_terms([((0, 0), r(1, 1)), ((a, b), r(-1, 1))])
    }

    #[test]
    fn exact_division() {
        let f = binom(0, 2);
        let g = binom(0, 1);
        let q = f.exact_div(&g).unwrap();
        assert_eq!(q, LaurentPoly::from_terms([((0, 0), r(1, 1)), ((0, 1), r(1, 1))]));
        assert!(g.exact_div(&f).is_none());
        assert!(binom(1, 1).exact_div(&binom(0, 1)).is_none());
        let prod = &(&binom(2, 1) * &binom(1, 3)) * &LaurentPoly::monomial(r(3, 2), (-1, 2));
        assert_eq!(prod.exact_div(&binom(1, 3)).unwrap(), &binom(2, 1) * &LaurentPoly::monomial(r(3, 2), (-1, 2)));
    }

    #[test]
    fn normalization() {
        // (1/2)t^-1 - (1/2) q t^-1  =  (-1/2) t^-1 (q - 1)
        let p = LaurentPoly::from_terms([((0, -1), r(1, 2)), ((1, -1), r(-1, 2))]);
        let (c, m, f) = p.normalize().unwrap();
        assert_eq!(c, r(-1, 2));
        assert_eq!(m, (0, -1));
        assert_eq!(f, LaurentPoly::from_terms([((0, 0), r(-1, 1)), ((1, 0), r(1, 1))]));
    }

    #[test]
    fn evaluation() {
        let p = LaurentPoly::from_terms([((0, 0), r(1, 1)), ((0, 1), r(1, 1)), ((0, -1), r(2, 1))]);
        assert_eq!(p.evaluate(&r(0, 1), &r(1, 2)).unwrap(), r(11, 2));
        assert!(p.evaluate(&r(1, 1), &r(0, 1)).is_err());
    }

    #[test]
    fn display() {
        let p = LaurentPoly::from_terms([((0, 0), r(1, 1)), ((2, -1), r(-3, 1))]);
        assert_eq!(p.to_string(), "1 - 3*q^2*t^-1");
    }
}
