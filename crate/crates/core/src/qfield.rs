//! Exact arithmetic over `Z[q, q^-1]` and its fraction field `Q(q)`.
//!
//! [`LaurentPoly`] is a sparse map from exponents to big integers with no
//! stored zeros. [`RatFn`] is a reduced quotient of two Laurent polynomials in
//! a canonical form, so structural equality is mathematical equality.
//! [`TruncSeries`] holds the Taylor expansion of a rational function at
//! `q = 0` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An element of `Z[q, q^-1]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * q^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    pub fn q_pow(exp: i64) -> Self {
        Self::monomial(1, exp)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Multiplication by `q^n`.
    pub fn shift(&self, n: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + n, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// The bar involution `q -> q^-1`.
    pub fn bar(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.coeffs.iter().all(|(e, c)| self.coeffs.get(&-e) == Some(c))
    }

    /// Value at `q = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Splits `self = p + r` with `r` bar-invariant and `p` supported on
    /// strictly positive exponents. The coefficient of `r` at `q^n` is the
    /// coefficient of `self` at `q^-|n|`.
    pub fn split_bar(&self) -> (LaurentPoly, LaurentPoly) {
        let mut r = LaurentPoly::zero();
        for (e, c) in self.terms() {
            if e <= 0 {
                r.add_term(e, c.clone());
                if e < 0 {
                    r.add_term(-e, c.clone());
                }
            }
        }
        let p = self - &r;
        (p, r)
    }

    /// Exact quotient, or `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (a, sa) = self.to_dense();
        let (b, sb) = divisor.to_dense();
        let (quot, rem) = dense_divrem_exact(&a, &b)?;
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_dense(&quot, sa - sb))
    }

    /// Dense coefficients starting at the lowest exponent, plus that exponent.
    fn to_dense(&self) -> (Vec<BigInt>, i64) {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return (Vec::new(), 0);
        };
        let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.coeffs {
            v[(e - lo) as usize] = c.clone();
        }
        (v, lo)
    }

    fn from_dense(v: &[BigInt], lo: i64) -> Self {
        Self::from_terms(v.iter().enumerate().map(|(i, c)| (lo + i as i64, c.clone())))
    }

    /// Gcd of the integer coefficients.
    pub fn integer_content(&self) -> BigInt {
        self.coeffs
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Coefficient of the highest power of `q`.
    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.values().next_back()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

/// The quantum integer `[n] = (q^n - q^-n) / (q - q^-1)`.
pub fn qint(n: i64) -> LaurentPoly {
    let sign: i64 = if n < 0 { -1 } else { 1 };
    let m = n.abs();
    LaurentPoly::from_terms((0..m).map(|j| (m - 1 - 2 * j, sign)))
}

/// The quantum factorial `[m]! = [1][2]...[m]`, with `[0]! = 1`.
pub fn qfact(m: u32) -> LaurentPoly {
    (1..=m as i64).fold(LaurentPoly::one(), |acc, i| &acc * &qint(i))
}

/// `prod_{d=1}^{c} 1/(1 - q^{2d})`, the norm of a divided power `f_i^(c)`.
pub fn divided_power_norm(c: u32) -> RatFn {
    let den = (1..=c as i64).fold(LaurentPoly::one(), |acc, d| {
        &acc * &LaurentPoly::from_terms([(0, 1), (2 * d, -1)])
    });
    RatFn::new(LaurentPoly::one(), den)
}

fn dense_trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Long division over Z; `None` when a leading-coefficient division is inexact.
fn dense_divrem_exact(a: &[BigInt], b: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let mut rem: Vec<BigInt> = a.to_vec();
    dense_trim(&mut rem);
    let mut b = b.to_vec();
    dense_trim(&mut b);
    let lb = b.last()?.clone();
    if rem.len() < b.len() {
        return Some((Vec::new(), rem));
    }
    let mut quot = vec![BigInt::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let lead = rem.last().unwrap().clone();
        let (qc, r) = lead.div_rem(&lb);
        if !r.is_zero() {
            return None;
        }
        let shift = rem.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= &qc * bc;
        }
        quot[shift] = qc;
        dense_trim(&mut rem);
    }
    Some((quot, rem))
}

fn dense_content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn dense_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let c = dense_content(v);
    if c.is_zero() {
        return Vec::new();
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| x / &c).collect();
    dense_trim(&mut out);
    if out.last().is_some_and(|l| l.is_negative()) {
        for x in out.iter_mut() {
            *x = -&*x;
        }
    }
    out
}

/// Pseudo-remainder of `a` by `b` (both dense, trimmed, `b` nonzero).
fn dense_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    dense_trim(&mut rem);
    let lb = b.last().unwrap();
    while rem.len() >= b.len() && !rem.is_empty() {
        let lead = rem.last().unwrap().clone();
        let shift = rem.len() - b.len();
        for x in rem.iter_mut() {
            *x *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= &lead * bc;
        }
        dense_trim(&mut rem);
    }
    rem
}

/// Primitive gcd of two polynomials in `Z[q]`, positive leading coefficient.
fn dense_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut a = dense_primitive(a);
    let mut b = dense_primitive(b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = dense_prem(&a, &b);
        a = b;
        b = dense_primitive(&r);
    }
    a
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c);
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (*e, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{abs}*q")?,
                (e, true) => write!(f, "q^{e}")?,
                (e, false) => write!(f, "{abs}*q^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a map from exponents to decimal coefficient strings")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<LaurentPoly, A::Error> {
                let mut p = LaurentPoly::zero();
                while let Some((k, v)) = access.next_entry::<String, String>()? {
                    let e: i64 = k.parse().map_err(de::Error::custom)?;
                    let c: BigInt = v.parse().map_err(de::Error::custom)?;
                    p.add_term(e, c);
                }
                Ok(p)
            }
        }
        deserializer.deserialize_map(PolyVisitor)
    }
}

/// An element of `Q(q)` stored as a reduced quotient of Laurent polynomials.
///
/// Canonical form: `den` has lowest exponent 0 and positive leading
/// coefficient, `num` and `den` are coprime in `Q[q]`, and the integer
/// contents of `num` and `den` are coprime. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRatFn")]
pub struct RatFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

#[derive(Deserialize)]
struct RawRatFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl TryFrom<RawRatFn> for RatFn {
    type Error = String;
    fn try_from(raw: RawRatFn) -> Result<Self, String> {
        if raw.den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(RatFn::new(raw.num, raw.den))
    }
}

impl RatFn {
    /// Panics if `den` is zero.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "RatFn with zero denominator");
        Self::normalize(num, den)
    }

    pub fn zero() -> Self {
        Self {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `Some` iff the value lies in `Z[q, q^-1]`.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn bar(&self) -> Self {
        Self::new(self.num.bar(), self.den.bar())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::normalize(self.den.clone(), self.num.clone()))
        }
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (dn, dshift) = den.to_dense();
        let (nn, nshift) = num.to_dense();
        let g = dense_gcd(&nn, &dn);
        let (nq, _) = dense_divrem_exact(&nn, &g).expect("gcd divides numerator");
        let (dq, _) = dense_divrem_exact(&dn, &g).expect("gcd divides denominator");
        let cn = dense_content(&nq);
        let cd = dense_content(&dq);
        let common = cn.gcd(&cd);
        let mut nq: Vec<BigInt> = nq.into_iter().map(|c| c / &common).collect();
        let mut dq: Vec<BigInt> = dq.into_iter().map(|c| c / &common).collect();
        dense_trim(&mut dq);
        if dq.last().is_some_and(|l| l.is_negative()) {
            for x in nq.iter_mut().chain(dq.iter_mut()) {
                *x = -&*x;
            }
        }
        Self {
            num: LaurentPoly::from_dense(&nq, nshift - dshift),
            den: LaurentPoly::from_dense(&dq, 0),
        }
    }

    /// Taylor expansion at `q = 0` through `q^order`.
    pub fn expand(&self, order: i64) -> TruncSeries {
        TruncSeries::of(self, order)
    }
}

impl From<LaurentPoly> for RatFn {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return RatFn::from_poly(&self.num + &rhs.num);
            }
            return RatFn::normalize(&self.num + &rhs.num, self.den.clone());
        }
        RatFn::normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Add for RatFn {
    type Output = RatFn;
    fn add(self, rhs: RatFn) -> RatFn {
        &self + &rhs
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Sub for RatFn {
    type Output = RatFn;
    fn sub(self, rhs: RatFn) -> RatFn {
        &self - &rhs
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFn::from_poly(&self.num * &rhs.num);
        }
        RatFn::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Mul for RatFn {
    type Output = RatFn;
    fn mul(self, rhs: RatFn) -> RatFn {
        &self * &rhs
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

/// Truncated Laurent series `sum_{k=valuation}^{order} c_k q^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    pub order: i64,
    pub valuation: i64,
    /// `coeffs[j]` is the coefficient of `q^(valuation + j)`.
    pub coeffs: Vec<BigRational>,
}

impl TruncSeries {
    pub fn zero(order: i64) -> Self {
        Self {
            order,
            valuation: order + 1,
            coeffs: Vec::new(),
        }
    }

    pub fn of(f: &RatFn, order: i64) -> Self {
        let Some(valuation) = f.num.min_exp() else {
            return Self::zero(order);
        };
        if valuation > order {
            return Self {
                order,
                valuation,
                coeffs: Vec::new(),
            };
        }
        let len = (order - valuation + 1) as usize;
        // The canonical denominator has a nonzero constant term.
        let (den, _) = f.den.to_dense();
        let d0 = BigRational::from_integer(den[0].clone());
        let mut inv: Vec<BigRational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = if k == 0 {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            for j in 1..=k.min(den.len().saturating_sub(1)) {
                acc -= BigRational::from_integer(den[j].clone()) * &inv[k - j];
            }
            inv.push(acc / &d0);
        }
        let mut coeffs = vec![BigRational::zero(); len];
        for (e, c) in f.num.terms() {
            let off = (e - valuation) as usize;
            if off >= len {
                break;
            }
            let c = BigRational::from_integer(c.clone());
            for j in 0..(len - off) {
                coeffs[off + j] += &c * &inv[j];
            }
        }
        Self {
            order,
            valuation,
            coeffs,
        }
    }

    /// Coefficient of `q^k` (zero outside the stored window).
    pub fn coeff(&self, k: i64) -> BigRational {
        if k < self.valuation || k > self.order {
            return BigRational::zero();
        }
        self.coeffs
            .get((k - self.valuation) as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// First exponent `k <= order` with a nonzero coefficient.
    pub fn leading_exp(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|j| self.valuation + j as i64)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.valuation + j as i64;
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                _ => write!(f, "({c})*q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn bar_reverses_exponents() {
        assert_eq!(lp(&[(2, 1), (0, 1)]).bar(), lp(&[(-2, 1), (0, 1)]));
        assert_eq!(LaurentPoly::zero().bar(), LaurentPoly::zero());
        assert_eq!(lp(&[(1, 1), (-1, -1)]).bar(), lp(&[(-1, 1), (1, -1)]));
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(qint(2), lp(&[(1, 1), (-1, 1)]));
        assert_eq!(qint(0), LaurentPoly::zero());
        assert_eq!(qint(-2), -qint(2));
        assert_eq!(qfact(0), LaurentPoly::one());
        let expected = &lp(&[(1, 1), (-1, 1)]) * &lp(&[(2, 1), (0, 1), (-2, 1)]);
        assert_eq!(qfact(3), expected);
        // [n] = (q^n - q^-n)/(q - q^-1) checked by exact division.
        for n in 1..8 {
            let num = lp(&[(n, 1), (-n, -1)]);
            let den = lp(&[(1, 1), (-1, -1)]);
            assert_eq!(num.div_exact(&den).unwrap(), qint(n));
        }
    }

    #[test]
    fn split_bar_examples() {
        assert_eq!(lp(&[(1, 1)]).split_bar(), (lp(&[(1, 1)]), LaurentPoly::zero()));
        assert_eq!(
            lp(&[(-1, 1)]).split_bar(),
            (lp(&[(1, -1)]), lp(&[(-1, 1), (1, 1)]))
        );
        assert_eq!(LaurentPoly::one().split_bar(), (LaurentPoly::zero(), LaurentPoly::one()));
    }

    #[test]
    fn expand_geometric_series() {
        let one = LaurentPoly::one();
        let f = RatFn::new(one.clone(), lp(&[(0, 1), (2, -1)]));
        let s = f.expand(5);
        let got: Vec<i64> = (0..=5).map(|k| s.coeff(k).to_integer().try_into().unwrap()).collect();
        assert_eq!(got, vec![1, 0, 1, 0, 1, 0]);

        let g = RatFn::new(lp(&[(1, 1)]), lp(&[(0, 1), (1, -1)]));
        let s = g.expand(3);
        assert_eq!(s.valuation, 1);
        let got: Vec<i64> = (0..=3).map(|k| s.coeff(k).to_integer().try_into().unwrap()).collect();
        assert_eq!(got, vec![0, 1, 1, 1]);

        let z = RatFn::zero().expand(4);
        assert!(z.coeffs.iter().all(|c| c.is_zero()));
        assert_eq!(z.leading_exp(), None);
    }

    #[test]
    fn expand_with_pole_and_rational_coefficients() {
        // q^-2 / (2 - q) = q^-2 (1/2 + q/4 + q^2/8 + ...)
        let f = RatFn::new(lp(&[(-2, 1)]), lp(&[(0, 2), (1, -1)]));
        let s = f.expand(0);
        assert_eq!(s.valuation, -2);
        assert_eq!(s.coeff(-2), BigRational::new(1.into(), 2.into()));
        assert_eq!(s.coeff(0), BigRational::new(1.into(), 8.into()));
        assert!(!s.is_integral());
    }

    #[test]
    fn canonical_form_is_structural() {
        // (q^2 - 1)/(q - 1) = q + 1
        let a = RatFn::new(lp(&[(2, 1), (0, -1)]), lp(&[(1, 1), (0, -1)]));
        assert_eq!(a, RatFn::from_poly(lp(&[(1, 1), (0, 1)])));
        // 2q / (4 q^3) = 1/(2 q^2)
        let b = RatFn::new(lp(&[(1, 2)]), lp(&[(3, 4)]));
        assert_eq!(b.den(), &LaurentPoly::constant(2));
        assert_eq!(b.num(), &lp(&[(-2, 1)]));
        // sign moves to the numerator
        let c = RatFn::new(LaurentPoly::one(), lp(&[(0, 1), (2, -1)]));
        let d = RatFn::new(LaurentPoly::constant(-1), lp(&[(0, -1), (2, 1)]));
        assert_eq!(c, d);
        assert!(c.den().leading().unwrap().is_positive());
    }

    #[test]
    fn rational_arithmetic() {
        let x = RatFn::new(lp(&[(1, 1)]), lp(&[(0, 1), (2, -1)]));
        let y = RatFn::new(lp(&[(0, 3), (1, 1)]), lp(&[(0, 1), (1, 1)]));
        let inv = x.inv().unwrap();
        assert!((&x * &inv).is_one());
        assert_eq!(&(&x + &y) - &y, x);
        assert!(RatFn::zero().inv().is_none());
    }

    #[test]
    fn divided_power_norm_matches_product() {
        let f = divided_power_norm(2);
        let expected = RatFn::new(
            LaurentPoly::one(),
            &lp(&[(0, 1), (2, -1)]) * &lp(&[(0, 1), (4, -1)]),
        );
        assert_eq!(f, expected);
        assert!(divided_power_norm(0).is_one());
    }

    #[test]
    fn json_round_trip() {
        let f = RatFn::new(lp(&[(-3, 7), (2, -1)]), lp(&[(0, 1), (2, -1)]));
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"-3\":\"-7\""), "{s}");
        let g: RatFn = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn display() {
        assert_eq!(lp(&[(2, 1), (0, -3), (-1, 1)]).to_string(), "q^2 - 3 + q^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }
}
