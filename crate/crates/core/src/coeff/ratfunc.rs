use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::laurent::{pole, Exponent, LaurentPoly};
use super::ExactRational;
use crate::error::{Error, Result};

/// A rational function in `q` and `t`.
///
/// Stored in partially factored form `c · q^a t^b · Π f_i^{e_i}` where every
/// `f_i` is a normalized polynomial (see [`LaurentPoly::normalize`]) and the
/// `e_i` are nonzero integers. Products only touch exponents; sums expand the
/// non-shared part and then try to cancel numerator against denominator by
/// exact division. Equality is decided by subtraction, so it is exact even
/// when two values carry different factorizations.
#[derive(Clone)]
pub struct RationalFunction {
    coeff: ExactRational,
    mono: Exponent,
    factors: BTreeMap<LaurentPoly, i32>,
}

/// Numerator/denominator pair used for serialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionRepr {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            coeff: ExactRational::zero(),
            mono: (0, 0),
            factors: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(ExactRational::one())
    }

    pub fn constant(c: ExactRational) -> Self {
        RationalFunction {
            coeff: c,
            mono: (0, 0),
            factors: BTreeMap::new(),
        }
    }

    pub fn q() -> Self {
        Self::monomial(ExactRational::one(), (1, 0))
    }

    pub fn t() -> Self {
        Self::monomial(ExactRational::one(), (0, 1))
    }

    pub fn monomial(c: ExactRational, e: Exponent) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            coeff: c,
            mono: e,
            factors: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: &LaurentPoly) -> Self {
        match p.normalize() {
            None => Self::zero(),
            Some((c, m, f)) => {
                let mut factors = BTreeMap::new();
                if !f.is_constant() {
                    factors.insert(f, 1);
                }
                RationalFunction {
                    coeff: c,
                    mono: m,
                    factors,
                }
            }
        }
    }

    /// `num / den`; fails when `den` is the zero polynomial.
    pub fn from_ratio(num: &LaurentPoly, den: &LaurentPoly) -> Result<Self> {
        Self::from_poly(num).checked_div(&Self::from_poly(den))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Expanded numerator.
    pub fn numerator(&self) -> LaurentPoly {
        let mut out = LaurentPoly::monomial(self.coeff.clone(), (self.mono.0.max(0), self.mono.1.max(0)));
        for (f, &e) in &self.factors {
            if e > 0 {
                out = &out * &f.pow(e as u32);
            }
        }
        out
    }

    /// Expanded denominator.
    pub fn denominator(&self) -> LaurentPoly {
        let mut out = LaurentPoly::monomial(ExactRational::one(), ((-self.mono.0).max(0), (-self.mono.1).max(0)));
        for (f, &e) in &self.factors {
            if e < 0 {
                out = &out * &f.pow((-e) as u32);
            }
        }
        out
    }

    pub fn repr(&self) -> RationalFunctionRepr {
        RationalFunctionRepr {
            num: self.numerator(),
            den: self.denominator(),
        }
    }

    /// If the value is a Laurent polynomial, returns it.
    pub fn as_polynomial(&self) -> Option<LaurentPoly> {
        if self.factors.values().all(|&e| e > 0) {
            Some(self.numerator().shift((self.mono.0.min(0), self.mono.1.min(0))))
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction {
            coeff: self.coeff.recip()?,
            mono: (-self.mono.0, -self.mono.1),
            factors: self.factors.iter().map(|(f, e)| (f.clone(), -e)).collect(),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return if e > 0 { Ok(Self::zero()) } else { Err(Error::DivisionByZero) };
        }
        Ok(RationalFunction {
            coeff: self.coeff.pow(e)?,
            mono: (self.mono.0 * e, self.mono.1 * e),
            factors: self.factors.iter().map(|(f, x)| (f.clone(), x * e)).collect(),
        })
    }

    /// Exact substitution of rational values for `q` and `t`.
    pub fn evaluate(&self, q: &ExactRational, t: &ExactRational) -> Result<ExactRational> {
        if self.is_zero() {
            return Ok(ExactRational::zero());
        }
        let mut value = self.coeff.clone();
        let (mono_q, mono_t) = (q.pow(self.mono.0), t.pow(self.mono.1));
        for (f, &e) in &self.factors {
            let v = f.evaluate(q, t)?;
            if v.is_zero() && e < 0 {
                return Err(pole(f));
            }
            value = value * v.pow(e)?;
        }
        let mono_q = mono_q.map_err(|_| pole(&LaurentPoly::q()))?;
        let mono_t = mono_t.map_err(|_| pole(&LaurentPoly::t()))?;
        Ok(value * mono_q * mono_t)
    }

    fn insert_factor(&mut self, f: LaurentPoly, e: i32) {
        if e == 0 {
            return;
        }
        let entry = self.factors.entry(f).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.factors.retain(|_, x| *x != 0);
        }
    }

    /// Multiplies in an arbitrary polynomial, normalizing it first.
    fn absorb_poly(&mut self, p: &LaurentPoly, e: i32) {
        match p.normalize() {
            None => *self = Self::zero(),
            Some((c, m, f)) => {
                self.coeff = &self.coeff * &c.pow(e).expect("normalized content is nonzero");
                self.mono = (self.mono.0 + m.0 * e, self.mono.1 + m.1 * e);
                if !f.is_constant() {
                    self.insert_factor(f, e);
                }
            }
        }
    }

    /// Cancels numerator factors against denominator factors where one
    /// divides the other exactly.
    fn cancel(&mut self) {
        if self.is_zero() {
            self.factors.clear();
            self.mono = (0, 0);
            return;
        }
        'outer: loop {
            let pos: Vec<LaurentPoly> = self.factors.iter().filter(|(_, &e)| e > 0).map(|(f, _)| f.clone()).collect();
            let neg: Vec<LaurentPoly> = self.factors.iter().filter(|(_, &e)| e < 0).map(|(f, _)| f.clone()).collect();
            for n in &pos {
                for d in &neg {
                    if n.len() >= d.len() {
                        if let Some(h) = n.exact_div(d) {
                            self.insert_factor(n.clone(), -1);
                            self.insert_factor(d.clone(), 1);
                            self.absorb_poly(&h, 1);
                            continue 'outer;
                        }
                    } else if let Some(h) = d.exact_div(n) {
                        self.insert_factor(n.clone(), -1);
                        self.insert_factor(d.clone(), 1);
                        self.absorb_poly(&h, -1);
                        continue 'outer;
                    }
                }
            }
            break;
        }
    }

    fn add_impl(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.mono == rhs.mono && self.factors == rhs.factors {
            let mut out = self.clone();
            out.coeff = &self.coeff + &rhs.coeff;
            if out.coeff.is_zero() {
                return Self::zero();
            }
            return out;
        }
        let mono = (self.mono.0.min(rhs.mono.0), self.mono.1.min(rhs.mono.1));
        let mut common: BTreeMap<LaurentPoly, i32> = BTreeMap::new();
        for f in self.factors.keys().chain(rhs.factors.keys()) {
            let a = self.factors.get(f).copied().unwrap_or(0);
            let b = rhs.factors.get(f).copied().unwrap_or(0);
            let m = a.min(b);
            if m != 0 {
                common.insert(f.clone(), m);
            }
        }
        let expand = |x: &Self| -> LaurentPoly {
            let mut p = LaurentPoly::monomial(x.coeff.clone(), (x.mono.0 - mono.0, x.mono.1 - mono.1));
            let keys: BTreeSet<&LaurentPoly> = x.factors.keys().chain(common.keys()).collect();
            for f in keys {
                let rest = x.factors.get(f).copied().unwrap_or(0) - common.get(f).copied().unwrap_or(0);
                if rest > 0 {
                    p = &p * &f.pow(rest as u32);
                }
            }
            p
        };
        let sum = &expand(self) + &expand(rhs);
        if sum.is_zero() {
            return Self::zero();
        }
        let mut out = RationalFunction {
            coeff: ExactRational::one(),
            mono,
            factors: common,
        };
        out.absorb_poly(&sum, 1);
        out.cancel();
        out
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        out.coeff = &self.coeff * &rhs.coeff;
        out.mono = (self.mono.0 + rhs.mono.0, self.mono.1 + rhs.mono.1);
        let mut touched = false;
        for (f, &e) in &rhs.factors {
            let before = out.factors.get(f).copied().unwrap_or(0);
            if (before > 0 && e < 0) || (before < 0 && e > 0) || before == 0 {
                touched = true;
            }
            out.insert_factor(f.clone(), e);
        }
        if touched {
            out.cancel();
        }
        out
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.coeff == other.coeff && self.mono == other.mono && self.factors == other.factors {
            return true;
        }
        (self - other).is_zero()
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.add_impl(rhs)
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.add_impl(&-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        self.mul_impl(rhs)
    }
}

/// Panics on a zero divisor; use [`RationalFunction::checked_div`] when unsure.
impl Div<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        let mut out = self.clone();
        out.coeff = -&out.coeff;
        out
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = self.denominator();
        if den == LaurentPoly::one() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "({}) / ({})", self.numerator(), den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.repr().serialize(serializer)
    }
}
