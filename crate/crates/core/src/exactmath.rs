//! Exact arithmetic: big rationals with `"num/den"` serialization, Laurent
//! polynomials over the Gaussian integers, extended Euclid, continued
//! fractions and exact symmetric-matrix signatures.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational number, always reduced with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(i64, i64),
    #[error("expected 0 < q < p, got p={p}, q={q}")]
    OutOfRange { p: i64, q: i64 },
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form `num/den`; zero is `0/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::BadRational(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Serde adapter: `#[serde(with = "rational_serde")]`.
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rational_vec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(de::Error::custom))
            .collect()
    }
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) > 0`.
///
/// `x` is normalized to the least positive representative modulo `|b|/g`
/// (so `(5, 3)` gives `(1, 2, -3)`); when `b = 0`, `x = sign(a)`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    assert!(a != 0 || b != 0, "ext_gcd(0, 0) is undefined");
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let t = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    if r0 < 0 {
        r0 = -r0;
        s0 = -s0;
    }
    let g = r0;
    let (a, b) = (a as i128, b as i128);
    let x = if b == 0 {
        a.signum()
    } else {
        let m = (b / g).abs();
        let x = s0.rem_euclid(m);
        if x == 0 {
            m
        } else {
            x
        }
    };
    let y = if b == 0 { 0 } else { (g - a * x) / b };
    debug_assert_eq!(a * x + b * y, g);
    (g as i64, x as i64, y as i64)
}

/// Minimal positive `(r, s)` with `p*s - q*r = 1`.
pub fn solve_rep(p: i64, q: i64) -> Result<(i64, i64), ExactError> {
    if !(0 < q && q < p) {
        return Err(ExactError::OutOfRange { p, q });
    }
    if p.gcd(&q) != 1 {
        return Err(ExactError::NotCoprime(p, q));
    }
    // s = p^{-1} mod q in 1..=q
    let (_, x, _) = ext_gcd(p, q);
    let s = if q == 1 { 1 } else { x };
    let r = (p * s - 1) / q;
    debug_assert!(r > 0 && p * s - q * r == 1);
    Ok((r, s))
}

/// Continued fraction `[a1, …, an]` with all entries positive.
pub fn positive_continued_fraction(mut p: i64, mut q: i64) -> Vec<i64> {
    let mut out = Vec::new();
    while q != 0 {
        out.push(p.div_euclid(q));
        (p, q) = (q, p.rem_euclid(q));
    }
    out
}

/// Value of `a1 + 1/(a2 + 1/(… + 1/an))`.
pub fn continued_fraction_value(entries: &[i64]) -> Option<Rational> {
    let (last, rest) = entries.split_last()?;
    let mut v = rat_int(*last);
    for &a in rest.iter().rev() {
        if v.is_zero() {
            return None;
        }
        v = rat_int(a) + v.recip();
    }
    Some(v)
}

/// All-even continued fraction of `p/denominator`.
///
/// No all-even expansion exists when numerator and denominator are both odd,
/// so the denominator is shifted by `p` when needed (`K(p,q) = K(p,q-p)`);
/// `denominator` records the fraction actually expanded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenCF {
    pub p: i64,
    pub denominator: i64,
    pub entries: Vec<i64>,
}

impl EvenCF {
    pub fn value(&self) -> Rational {
        continued_fraction_value(&self.entries).expect("nonempty expansion")
    }
}

pub fn even_continued_fraction(p: i64, q: i64) -> Result<EvenCF, ExactError> {
    if !(p > 0 && q != 0 && q.abs() < p) {
        return Err(ExactError::OutOfRange { p, q });
    }
    if p.gcd(&q) != 1 {
        return Err(ExactError::NotCoprime(p, q));
    }
    let denominator = if (p + q) % 2 != 0 {
        q
    } else if q > 0 {
        q - p
    } else {
        q + p
    };
    let (mut a, mut b) = (p, denominator);
    let mut entries = Vec::new();
    while b != 0 {
        // nearest even multiple; ties are impossible when a + b is odd
        let k = Integer::div_floor(&(a + b), &(2 * b));
        let e = 2 * k;
        entries.push(e);
        (a, b) = (b, a - e * b);
    }
    Ok(EvenCF {
        p,
        denominator,
        entries,
    })
}

/// Gaussian integer `re + im·i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `i^k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussInt::new(1, 0),
            1 => GaussInt::new(0, 1),
            2 => GaussInt::new(-1, 0),
            _ => GaussInt::new(0, -1),
        }
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Units are `±1, ±i`; returns the inverse of a unit.
    fn unit_inverse(&self) -> Option<GaussInt> {
        if self.norm().is_one() {
            Some(GaussInt::new(self.re.clone(), -self.im.clone()))
        } else {
            None
        }
    }
}

impl Add for &GaussInt {
    type Output = GaussInt;
    fn add(self, o: &GaussInt) -> GaussInt {
        GaussInt::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussInt {
    type Output = GaussInt;
    fn sub(self, o: &GaussInt) -> GaussInt {
        GaussInt::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussInt {
    type Output = GaussInt;
    fn mul(self, o: &GaussInt) -> GaussInt {
        GaussInt::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-&self.re, -&self.im)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im.is_one() => write!(f, "i"),
            (true, false) if (-&self.im).is_one() => write!(f, "-i"),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => write!(f, "({}{}i)", self.re, self.im),
            _ => write!(f, "({}+{}i)", self.re, self.im),
        }
    }
}

/// Laurent polynomial in `q` with Gaussian-integer coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussLaurent {
    terms: BTreeMap<i64, GaussInt>,
}

impl GaussLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, GaussInt::new(1, 0))
    }

    pub fn monomial(exp: i64, c: GaussInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        GaussLaurent { terms }
    }

    /// `c·q^exp` with integer `c`.
    pub fn int_monomial(exp: i64, c: i64) -> Self {
        Self::monomial(exp, GaussInt::new(c, 0))
    }

    /// `(iq)^k = i^k q^k`.
    pub fn iq_pow(k: i64) -> Self {
        Self::monomial(k, GaussInt::i_pow(k))
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, GaussInt)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in it {
            out.add_term(e, &c);
        }
        out
    }

    pub fn from_int_terms<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Self {
        Self::from_terms(it.into_iter().map(|(e, c)| (e, GaussInt::new(c, 0))))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> GaussInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient is a rational integer.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    pub fn add_term(&mut self, exp: i64, c: &GaussInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exp).or_default();
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, c: &GaussInt) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (*e, v * c)))
    }

    /// Multiply by `i^k`.
    pub fn scale_by_i_power(&self, k: i64) -> Self {
        self.scale(&GaussInt::i_pow(k))
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        GaussLaurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// `Σ c_k q^k ↦ Σ c_k q^{-k}`.
    pub fn substitute_q_inverse(&self) -> Self {
        GaussLaurent {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Value at `q = i`.
    pub fn eval_at_i(&self) -> GaussInt {
        let mut acc = GaussInt::default();
        for (e, c) in &self.terms {
            acc = &acc + &(c * &GaussInt::i_pow(*e));
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    /// The divisor's leading coefficient must be a unit.
    pub fn checked_div(&self, d: &GaussLaurent) -> Option<GaussLaurent> {
        let dtop = d.max_exp()?;
        let dlow = d.min_exp()?;
        let inv = d.terms[&dtop].unit_inverse()?;
        let mut rem = self.clone();
        let mut quot = GaussLaurent::zero();
        while let Some(top) = rem.max_exp() {
            if top - dtop < rem.min_exp().unwrap() - dlow {
                return None;
            }
            let c = &rem.terms[&top] * &inv;
            let t = GaussLaurent::monomial(top - dtop, c);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// JSON-ready `[exponent, re, im]` triples sorted by exponent.
    pub fn to_triples(&self) -> Vec<(i64, BigInt, BigInt)> {
        self.terms
            .iter()
            .map(|(e, c)| (*e, c.re.clone(), c.im.clone()))
            .collect()
    }
}

impl Add for &GaussLaurent {
    type Output = GaussLaurent;
    fn add(self, o: &GaussLaurent) -> GaussLaurent {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl AddAssign<&GaussLaurent> for GaussLaurent {
    fn add_assign(&mut self, o: &GaussLaurent) {
        for (e, c) in &o.terms {
            self.add_term(*e, c);
        }
    }
}

impl Sub for &GaussLaurent {
    type Output = GaussLaurent;
    fn sub(self, o: &GaussLaurent) -> GaussLaurent {
        self + &(-o)
    }
}

impl Neg for &GaussLaurent {
    type Output = GaussLaurent;
    fn neg(self) -> GaussLaurent {
        GaussLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &GaussLaurent {
    type Output = GaussLaurent;
    fn mul(self, o: &GaussLaurent) -> GaussLaurent {
        let mut out = GaussLaurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl fmt::Display for GaussLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg_real = (c.im.is_zero() && c.re.is_negative())
                || (c.re.is_zero() && c.im.is_negative());
            let mag = if neg_real { -c } else { c.clone() };
            if k == 0 {
                if neg_real {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg_real { "-" } else { "+" })?;
            }
            let coeff = if mag.im.is_zero() && mag.re.is_one() {
                String::new()
            } else {
                mag.to_string()
            };
            match *e {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{coeff}q")?,
                e => write!(f, "{coeff}q^{e}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

impl JsonInt {
    fn from_big(b: &BigInt) -> Self {
        match b.to_i64() {
            Some(v) => JsonInt::Small(v),
            None => JsonInt::Big(b.to_string()),
        }
    }

    fn to_big<E: de::Error>(&self) -> Result<BigInt, E> {
        match self {
            JsonInt::Small(v) => Ok(BigInt::from(*v)),
            JsonInt::Big(s) => s.parse().map_err(|_| E::custom(format!("bad integer {s:?}"))),
        }
    }
}

impl Serialize for GaussLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(e, c)| {
            (*e, JsonInt::from_big(&c.re), JsonInt::from_big(&c.im))
        }))
    }
}

impl<'de> Deserialize<'de> for GaussLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<(i64, JsonInt, JsonInt)>::deserialize(d)?;
        let mut out = GaussLaurent::zero();
        let mut last = None;
        for (e, re, im) in raw {
            if last.is_some_and(|l| l >= e) {
                return Err(de::Error::custom("exponents must be strictly increasing"));
            }
            last = Some(e);
            out.add_term(e, &GaussInt::new(re.to_big::<D::Error>()?, im.to_big::<D::Error>()?));
        }
        Ok(out)
    }
}

/// Signature (positive minus negative inertia) of a symmetric integer matrix,
/// by exact congruence diagonalization.
pub fn symmetric_signature(m: &[Vec<BigInt>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let mut live: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg) = (0i64, 0i64);
    while !live.is_empty() {
        let piv = live.iter().copied().find(|&i| !a[i][i].is_zero());
        let Some(piv) = piv else {
            // all diagonal entries vanish: fold a partner row into one with
            // a nonzero off-diagonal entry, which creates a nonzero pivot
            let pair = live
                .iter()
                .flat_map(|&i| live.iter().map(move |&j| (i, j)))
                .find(|&(i, j)| i != j && !a[i][j].is_zero());
            let Some((i, j)) = pair else { break };
            for k in 0..n {
                let v = a[j][k].clone();
                a[i][k] += v;
            }
            for k in 0..n {
                let v = a[k][j].clone();
                a[k][i] += v;
            }
            continue;
        };
        let d = a[piv][piv].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        live.retain(|&i| i != piv);
        for &i in &live {
            let f = &a[i][piv] / &d;
            if f.is_zero() {
                continue;
            }
            for &j in &live {
                let v = &f * &a[piv][j];
                a[i][j] -= v;
            }
        }
        for &i in &live {
            a[i][piv] = Rational::zero();
            a[piv][i] = Rational::zero();
        }
    }
    pos - neg
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn integer_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
