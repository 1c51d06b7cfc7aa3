//! Truncated Puiseux series over the rationals.
//!
//! A [`PuiseuxSeries`] is a finite sum `Σ c_e t^e` whose exponents lie on the
//! grid `(1/m)·ℤ` for its ramification `m`, together with a precision `P`: the
//! series is known exactly below `t^P` and nothing is known at or above it.
//! Laurent series are the case `m = 1`.
//!
//! A series with no stored terms is *zero to precision*. It is never treated
//! as an exact zero when a valuation is requested; [`PuiseuxSeries::valuation`]
//! reports [`Error::IndeterminateValuation`] instead.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{ceil_q, fmt_big, fmt_q, q, Q};

/// Working precision used when none is given.
pub const DEFAULT_PRECISION: i64 = 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PuiseuxSeries {
    ramification: i64,
    terms: BTreeMap<Q, BigRational>,
    precision: Q,
}

impl PuiseuxSeries {
    /// Builds a series from `(exponent, coefficient)` pairs. Zero coefficients
    /// and exponents at or above `precision` are dropped; repeated exponents
    /// are summed. The ramification is the lcm of the exponent denominators.
    pub fn from_terms<I>(terms: I, precision: Q) -> Self
    where
        I: IntoIterator<Item = (Q, BigRational)>,
    {
        let mut map: BTreeMap<Q, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            if e >= precision {
                continue;
            }
            *map.entry(e).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let ramification = map.keys().fold(1i64, |m, e| m.lcm(e.denom()));
        PuiseuxSeries {
            ramification,
            terms: map,
            precision,
        }
    }

    pub fn zero(precision: Q) -> Self {
        Self::from_terms(std::iter::empty(), precision)
    }

    pub fn constant(c: BigRational, precision: Q) -> Self {
        Self::monomial(c, q(0), precision)
    }

    pub fn one(precision: Q) -> Self {
        Self::constant(BigRational::one(), precision)
    }

    /// `c·t^e`.
    pub fn monomial(c: BigRational, e: Q, precision: Q) -> Self {
        Self::from_terms([(e, c)], precision)
    }

    /// Declares a coarser grid than the terms require. `m` must be a multiple
    /// of the current ramification.
    pub fn with_ramification(mut self, m: i64) -> Self {
        assert!(m > 0 && m % self.ramification == 0, "ramification must refine the exponent grid");
        self.ramification = m;
        self
    }

    pub fn ramification(&self) -> i64 {
        self.ramification
    }

    pub fn precision(&self) -> Q {
        self.precision
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Q, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &Q) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Result<Q> {
        self.terms
            .keys()
            .next()
            .copied()
            .ok_or(Error::IndeterminateValuation(self.precision))
    }

    pub fn leading_term(&self) -> Option<(Q, &BigRational)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    /// Lowers the precision to `p` (no-op if `p` is not lower).
    pub fn truncate(&self, p: Q) -> Self {
        if p >= self.precision {
            return self.clone();
        }
        let mut out = self.clone();
        out.terms.retain(|e, _| *e < p);
        out.precision = p;
        out
    }

    /// True when `self - other` vanishes to the joint precision.
    pub fn agrees_with(&self, other: &PuiseuxSeries) -> bool {
        self.sub(other).is_zero_to_precision()
    }

    pub fn add(&self, other: &PuiseuxSeries) -> Self {
        let precision = self.precision.min(other.precision);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(*e).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|e, c| *e < precision && !c.is_zero());
        PuiseuxSeries {
            ramification: self.ramification.lcm(&other.ramification),
            terms,
            precision,
        }
    }

    pub fn sub(&self, other: &PuiseuxSeries) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            ramification: self.ramification,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            precision: self.precision,
        }
    }

    /// Precision of a product: an unknown tail at `t^{P_a}` multiplied by `b`
    /// sits at `t^{P_a + val b}`. A zero-to-precision factor contributes its
    /// precision in place of a valuation.
    fn product_precision(&self, other: &PuiseuxSeries) -> Q {
        let va = self.valuation().unwrap_or(self.precision);
        let vb = other.valuation().unwrap_or(other.precision);
        (self.precision + vb).min(other.precision + va)
    }

    pub fn mul(&self, other: &PuiseuxSeries) -> Self {
        let precision = self.product_precision(other);
        let mut terms: BTreeMap<Q, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e >= precision {
                    // exponents of `other` are sorted
                    break;
                }
                *terms.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        PuiseuxSeries {
            ramification: self.ramification.lcm(&other.ramification),
            terms,
            precision,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return PuiseuxSeries::zero(self.precision).with_ramification(self.ramification);
        }
        PuiseuxSeries {
            ramification: self.ramification,
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
            precision: self.precision,
        }
    }

    /// Multiplies by `t^e` exactly.
    pub fn shift(&self, e: Q) -> Self {
        PuiseuxSeries {
            ramification: self.ramification.lcm(e.denom()),
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
            precision: self.precision + e,
        }
    }

    /// Multiplicative inverse. Writing `a = c·t^v·(1 + u)` with `val u > 0`,
    /// the inverse is `c⁻¹·t^{-v}·Σ(-u)^k`, expanded as far as the relative
    /// precision `P - v` of `a` allows. The result has precision `P - 2v`, so
    /// that `a·a⁻¹ = 1` to precision `P - v`.
    pub fn invert(&self) -> Result<Self> {
        let (v, lead) = match self.leading_term() {
            Some((v, c)) => (v, c.clone()),
            None => return Err(Error::IndeterminateValuation(self.precision)),
        };
        let m = self.ramification;
        let rel_precision = self.precision - v;
        // number of grid steps known: k with k/m < rel_precision
        let steps = ceil_q(&(rel_precision * m)).max(0) as usize;
        let tail: Vec<(usize, &BigRational)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(e, c)| (((e - v) * m).to_integer() as usize, c))
            .filter(|(k, _)| *k < steps)
            .collect();
        let inv_lead = lead.recip();
        let mut coeffs: Vec<BigRational> = Vec::with_capacity(steps);
        for k in 0..steps {
            if k == 0 {
                coeffs.push(inv_lead.clone());
                continue;
            }
            let mut acc = BigRational::zero();
            for (j, c) in &tail {
                if *j > k {
                    break;
                }
                let b = &coeffs[k - j];
                if !b.is_zero() {
                    acc += *c * b;
                }
            }
            coeffs.push(-(acc * &inv_lead));
        }
        let precision = self.precision - v - v;
        let terms = coeffs
            .into_iter()
            .enumerate()
            .map(|(k, c)| (Q::new(k as i64, m) - v, c));
        Ok(PuiseuxSeries::from_terms(terms, precision).with_ramification_at_least(m))
    }

    fn with_ramification_at_least(mut self, m: i64) -> Self {
        self.ramification = self.ramification.lcm(&m);
        self
    }

    /// Integer power; negative exponents go through [`invert`](Self::invert).
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.invert()?.pow(-k);
        }
        if k == 0 {
            return Ok(PuiseuxSeries::one(self.precision_for_unit())
                .with_ramification_at_least(self.ramification));
        }
        let mut result: Option<PuiseuxSeries> = None;
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(result.expect("k > 0"))
    }

    /// `a^0 = 1` is exact; it keeps the operand's precision when that is
    /// positive so the constant term is representable.
    fn precision_for_unit(&self) -> Q {
        if self.precision > q(0) {
            self.precision
        } else {
            q(1)
        }
    }

    /// The substitution `t ↦ t^c` for `c ≥ 0`: every exponent `e` becomes
    /// `c·e` and the precision becomes `c·P`.
    ///
    /// For `c = 0` every term lands on exponent 0 and the coefficients are
    /// summed. The precision is then left at `P` when `P > 0`; if `P ≤ 0`
    /// nothing about the constant term is known and the result is zero to
    /// precision `P`.
    pub fn scale_exponents(&self, c: Q) -> Result<Self> {
        if c < q(0) {
            return Err(Error::invalid("exponent scale factor must be nonnegative"));
        }
        if c.is_zero() {
            if self.precision <= q(0) {
                return Ok(PuiseuxSeries::zero(self.precision));
            }
            let sum = self.terms.values().fold(BigRational::zero(), |acc, x| acc + x);
            return Ok(PuiseuxSeries::constant(sum, self.precision));
        }
        let (p, d) = (*c.numer(), *c.denom());
        let grid = self.ramification * d;
        let ramification = grid / p.gcd(&grid);
        let terms = self.terms.iter().map(|(e, x)| (e * c, x.clone()));
        Ok(PuiseuxSeries::from_terms(terms, self.precision * c).with_ramification_at_least(ramification))
    }

    /// Renders the known terms in the literal syntax of the expression
    /// grammar, without the `O(t^P)` tail.
    pub fn to_literal(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let coeff = fmt_big(&mag);
            let is_one = mag.is_one();
            if e.is_zero() {
                out.push_str(&coeff);
                continue;
            }
            if !is_one {
                out.push_str(&coeff);
                out.push('*');
            }
            out.push_str(&fmt_t_power(e));
        }
        out
    }
}

pub(crate) fn fmt_t_power(e: &Q) -> String {
    if e.is_one() {
        "t".to_string()
    } else if e.is_integer() {
        format!("t^{}", e.numer())
    } else {
        format!("t^({})", fmt_q(e))
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.to_literal(), fmt_t_power(&self.precision))
    }
}

impl Add for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        PuiseuxSeries::add(self, rhs)
    }
}

impl Sub for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        PuiseuxSeries::sub(self, rhs)
    }
}

impl Mul for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        PuiseuxSeries::mul(self, rhs)
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{big, qr};

    const P: i64 = 32;

    fn s(terms: &[(Q, i64)]) -> PuiseuxSeries {
        PuiseuxSeries::from_terms(terms.iter().map(|(e, c)| (*e, big(*c))), q(P))
    }

    #[test]
    fn valuation_of_leading_term() {
        assert_eq!(s(&[(q(2), 1), (q(3), 5)]).valuation(), Ok(q(2)));
        let x = PuiseuxSeries::from_terms([(qr(-1, 2), big(3)), (q(1), big(1))], q(P));
        assert_eq!(x.valuation(), Ok(qr(-1, 2)));
        assert_eq!(x.ramification(), 2);
        assert_eq!(
            PuiseuxSeries::zero(q(P)).valuation(),
            Err(Error::IndeterminateValuation(q(P)))
        );
    }

    #[test]
    fn add_and_cancel() {
        let a = s(&[(q(0), 1), (q(1), 1)]);
        let b = s(&[(q(0), 1), (q(1), -1)]);
        assert_eq!(a.add(&b), s(&[(q(0), 2)]));
        let c = a.add(&a.neg());
        assert!(c.is_zero_to_precision());
        assert_eq!(c.precision(), q(P));
    }

    #[test]
    fn mul_on_common_grid() {
        let a = PuiseuxSeries::monomial(big(1), qr(1, 2), q(P));
        let b = PuiseuxSeries::monomial(big(1), qr(1, 3), q(P));
        let c = a.mul(&b);
        assert_eq!(c.ramification(), 6);
        assert_eq!(c.valuation(), Ok(qr(5, 6)));
        assert_eq!(c.num_terms(), 1);
    }

    #[test]
    fn mul_precision_bound() {
        let a = s(&[(q(-2), 1)]);
        let b = s(&[(q(3), 1)]);
        // min(32 + 3, 32 - 2)
        assert_eq!(a.mul(&b).precision(), q(30));
        let z = PuiseuxSeries::zero(q(10));
        assert_eq!(z.mul(&a).precision(), q(8));
    }

    #[test]
    fn invert_geometric() {
        let a = s(&[(q(0), 1), (q(1), -1)]);
        let b = a.invert().unwrap();
        assert_eq!(b.precision(), q(P));
        for k in 0..P {
            assert_eq!(b.coefficient(&q(k)), big(1));
        }
        assert_eq!(b.num_terms(), P as usize);
    }

    #[test]
    fn invert_monomial() {
        let a = s(&[(q(3), 1)]);
        let b = a.invert().unwrap();
        assert_eq!(b.valuation(), Ok(q(-3)));
        assert_eq!(b.num_terms(), 1);
    }

    #[test]
    fn invert_with_pole() {
        // 1 / (2t^{-1} + t) = (1/2)t - (1/4)t^3 + (1/8)t^5 - ...
        let a = s(&[(q(-1), 2), (q(1), 1)]);
        let b = a.invert().unwrap();
        assert_eq!(b.coefficient(&q(1)), qr(1, 2).into_big());
        assert_eq!(b.coefficient(&q(3)), qr(-1, 4).into_big());
        assert_eq!(b.coefficient(&q(5)), qr(1, 8).into_big());
        let one = a.mul(&b);
        assert_eq!(one.precision(), q(P + 1));
        assert!(one.agrees_with(&PuiseuxSeries::one(q(P))));
    }

    #[test]
    fn invert_zero_fails() {
        assert!(PuiseuxSeries::zero(q(P)).invert().is_err());
    }

    #[test]
    fn scale_exponents_examples() {
        let a = s(&[(q(2), 1), (q(3), 1)]);
        let b = a.scale_exponents(qr(1, 2)).unwrap();
        assert_eq!(b.coefficient(&q(1)), big(1));
        assert_eq!(b.coefficient(&qr(3, 2)), big(1));
        assert_eq!(b.ramification(), 2);
        assert_eq!(b.precision(), q(16));
        assert_eq!(a.scale_exponents(q(1)).unwrap(), a);
        let c = a.scale_exponents(q(0)).unwrap();
        assert_eq!(c, PuiseuxSeries::constant(big(2), q(P)));
        assert!(a.scale_exponents(q(-1)).is_err());
    }

    #[test]
    fn pow_and_literal() {
        let a = s(&[(q(-1), 1), (q(0), 1)]);
        let cube = a.pow(3).unwrap();
        assert_eq!(cube.to_literal(), "t^-3 + 3*t^-2 + 3*t^-1 + 1");
        assert_eq!(a.pow(0).unwrap(), PuiseuxSeries::one(q(P)));
        let x = PuiseuxSeries::from_terms([(qr(-1, 2), big(3)), (q(1), qr(1, 2).into_big())], q(P));
        assert_eq!(x.to_literal(), "3*t^(-1/2) + 1/2*t");
        assert_eq!(format!("{}", PuiseuxSeries::zero(q(4))), "0 + O(t^4)");
    }

    trait IntoBig {
        fn into_big(self) -> BigRational;
    }
    impl IntoBig for Q {
        fn into_big(self) -> BigRational {
            crate::rat::to_big(&self)
        }
    }
}
