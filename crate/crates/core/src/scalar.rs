//! Exact arithmetic over the Gaussian rationals extended by real square roots.
//!
//! A [`Scalar`] is a finite sum `Σ (re + i·im)·√m` over pairwise distinct
//! square-free radicals `m ≥ 1`. Products of radicals are reduced with
//! `√m·√n = g·√(mn/g²)` where `g = gcd(m, n)`, which keeps every tag
//! square-free without factoring. Inverses are computed by repeatedly
//! multiplying with the conjugate that flips the sign of one prime radical,
//! so any nonzero element of the multiquadratic field can be inverted.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type FloatComplex = num_complex::Complex64;

/// Build a rational from small integers. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Term {
    radical: u64,
    re: Rational,
    im: Rational,
}

impl Term {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// Element of ℚ(i, √m₁, √m₂, …) in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    // sorted by radical, no zero terms
    terms: Vec<Term>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Scalar::from_rational(Rational::one())
    }

    pub fn i() -> Self {
        Scalar::gaussian(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::from_rational(rat(num, den))
    }

    pub fn from_rational(q: Rational) -> Self {
        Scalar::gaussian(q, Rational::zero())
    }

    pub fn gaussian(re: Rational, im: Rational) -> Self {
        Scalar::from_parts(1, re, im)
    }

    /// `(re + i·im)·√radical`; `radical` must be square-free.
    pub fn from_parts(radical: u64, re: Rational, im: Rational) -> Self {
        debug_assert!(radical >= 1 && is_squarefree(radical));
        let t = Term { radical, re, im };
        if t.is_zero() {
            Scalar::zero()
        } else {
            Scalar { terms: vec![t] }
        }
    }

    /// `√m` for a positive integer, with the square part extracted.
    pub fn sqrt_int(m: u64) -> Self {
        scalar_sqrt(&Rational::from_integer(BigInt::from(m))).expect("nonnegative")
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].radical == 1
            && self.terms[0].re.is_one()
            && self.terms[0].im.is_zero()
    }

    /// True when the value is a Gaussian rational (no radical other than 1).
    pub fn is_gaussian_rational(&self) -> bool {
        self.terms.iter().all(|t| t.radical == 1)
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.im.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.is_real() && self.is_gaussian_rational()
    }

    /// The rational value, if the scalar is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if !self.is_rational() {
            return None;
        }
        Some(self.terms.first().map(|t| t.re.clone()).unwrap_or_else(Rational::zero))
    }

    /// Radical tags present, ascending.
    pub fn radicals(&self) -> Vec<u64> {
        self.terms.iter().map(|t| t.radical).collect()
    }

    /// `(radical, re, im)` triples in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational, &Rational)> {
        self.terms.iter().map(|t| (t.radical, &t.re, &t.im))
    }

    pub fn conj(&self) -> Self {
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    radical: t.radical,
                    re: t.re.clone(),
                    im: -t.im.clone(),
                })
                .collect(),
        }
    }

    pub fn re(&self) -> Self {
        self.filter_map(|t| (!t.re.is_zero()).then(|| (t.re.clone(), Rational::zero())))
    }

    pub fn im(&self) -> Self {
        self.filter_map(|t| (!t.im.is_zero()).then(|| (t.im.clone(), Rational::zero())))
    }

    fn filter_map(&self, f: impl Fn(&Term) -> Option<(Rational, Rational)>) -> Self {
        Scalar {
            terms: self
                .terms
                .iter()
                .filter_map(|t| {
                    f(t).map(|(re, im)| Term {
                        radical: t.radical,
                        re,
                        im,
                    })
                })
                .collect(),
        }
    }

    /// `|a|² = a·conj(a)`, always real.
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    radical: t.radical,
                    re: &t.re * q,
                    im: &t.im * q,
                })
                .collect(),
        }
    }

    pub fn mul_i(&self) -> Self {
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    radical: t.radical,
                    re: -t.im.clone(),
                    im: t.re.clone(),
                })
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(invert(self))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Sign of a real scalar: -1, 0 or 1.
    pub fn signum(&self) -> Result<i32> {
        if !self.is_real() {
            return Err(Error::NotReal(self.to_string()));
        }
        Ok(real_sign(self))
    }

    /// Order two real scalars.
    pub fn cmp_real(&self, other: &Scalar) -> Result<Ordering> {
        Ok(match (self - other).signum()? {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    pub fn is_positive(&self) -> bool {
        matches!(self.signum(), Ok(1))
    }

    pub fn is_nonnegative(&self) -> bool {
        matches!(self.signum(), Ok(0) | Ok(1))
    }

    /// Square root of a nonnegative real scalar, when it stays representable.
    ///
    /// Rationals always work. `a + b√m` is denested when `a² − b²m` is a
    /// rational square; anything else is reported as not representable.
    pub fn sqrt_real(&self) -> Result<Self> {
        match self.signum()? {
            -1 => return Err(Error::NegativeRadicand(self.to_string())),
            0 => return Ok(Scalar::zero()),
            _ => {}
        }
        if let Some(q) = self.as_rational() {
            return scalar_sqrt(&q);
        }
        let not_repr = || Error::RadicalNotRepresentable(self.to_string());
        // a + b√m with a single nontrivial radical
        let (a, b, m) = match self.terms.as_slice() {
            [t] => (Rational::zero(), t.re.clone(), t.radical),
            [t0, t1] if t0.radical == 1 => (t0.re.clone(), t1.re.clone(), t1.radical),
            _ => return Err(not_repr()),
        };
        let disc = &a * &a - &b * &b * Rational::from_integer(BigInt::from(m));
        if disc.is_negative() {
            return Err(not_repr());
        }
        let d = rational_sqrt_exact(&disc).ok_or_else(not_repr)?;
        let two = Rational::from_integer(BigInt::from(2));
        let u = (&a + &d) / &two;
        let v = (&a - &d) / &two;
        if u.is_negative() || v.is_negative() {
            return Err(not_repr());
        }
        let su = scalar_sqrt(&u)?;
        let sv = scalar_sqrt(&v)?;
        let root = if b.is_negative() { su - sv } else { su + sv };
        debug_assert_eq!(&(&root * &root), self);
        Ok(root)
    }

    pub fn to_float(&self) -> FloatComplex {
        self.terms.iter().fold(FloatComplex::new(0.0, 0.0), |acc, t| {
            let s = (t.radical as f64).sqrt();
            acc + FloatComplex::new(rat_to_f64(&t.re) * s, rat_to_f64(&t.im) * s)
        })
    }

    fn push_term(terms: &mut Vec<Term>, radical: u64, re: Rational, im: Rational) {
        match terms.binary_search_by_key(&radical, |t| t.radical) {
            Ok(idx) => {
                let t = &mut terms[idx];
                t.re += re;
                t.im += im;
                if t.is_zero() {
                    terms.remove(idx);
                }
            }
            Err(idx) => {
                let t = Term { radical, re, im };
                if !t.is_zero() {
                    terms.insert(idx, t);
                }
            }
        }
    }

    fn add_ref(&self, rhs: &Scalar, sign: bool) -> Scalar {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            let pick = match (self.terms.get(i), rhs.terms.get(j)) {
                (Some(a), Some(b)) => a.radical.cmp(&b.radical),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => unreachable!(),
            };
            match pick {
                Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let b = &rhs.terms[j];
                    out.push(if sign {
                        b.clone()
                    } else {
                        Term {
                            radical: b.radical,
                            re: -b.re.clone(),
                            im: -b.im.clone(),
                        }
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let (a, b) = (&self.terms[i], &rhs.terms[j]);
                    let t = if sign {
                        Term {
                            radical: a.radical,
                            re: &a.re + &b.re,
                            im: &a.im + &b.im,
                        }
                    } else {
                        Term {
                            radical: a.radical,
                            re: &a.re - &b.re,
                            im: &a.im - &b.im,
                        }
                    };
                    if !t.is_zero() {
                        out.push(t);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Scalar { terms: out }
    }

    fn mul_ref(&self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        let mut terms: Vec<Term> = Vec::new();
        for a in &self.terms {
            for b in &rhs.terms {
                let g = a.radical.gcd(&b.radical);
                let radical = (a.radical / g)
                    .checked_mul(b.radical / g)
                    .expect("radical tag overflow");
                let re = &a.re * &b.re - &a.im * &b.im;
                let im = &a.re * &b.im + &a.im * &b.re;
                let gq = Rational::from_integer(BigInt::from(g));
                Scalar::push_term(&mut terms, radical, re * &gq, im * &gq);
            }
        }
        Scalar { terms }
    }
}

fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // huge numerator/denominator: scale down through the bit lengths
        let n = q.numer();
        let d = q.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(1000);
        let n = (n >> shift).to_f64().unwrap_or(0.0);
        let d = (d >> shift).to_f64().unwrap_or(1.0);
        n / d
    })
}

fn is_squarefree(m: u64) -> bool {
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    true
}

fn smallest_prime_factor(m: u64) -> u64 {
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    m
}

/// Split `x = a + b·√p` where neither `a` nor `b` involve the prime `p`.
fn split_prime(x: &Scalar, p: u64) -> (Scalar, Scalar) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for t in &x.terms {
        if t.radical % p == 0 {
            b.push(Term {
                radical: t.radical / p,
                re: t.re.clone(),
                im: t.im.clone(),
            });
        } else {
            a.push(t.clone());
        }
    }
    b.sort_by_key(|t| t.radical);
    (Scalar { terms: a }, Scalar { terms: b })
}

fn invert(x: &Scalar) -> Scalar {
    if x.is_gaussian_rational() {
        let t = &x.terms[0];
        let n = &t.re * &t.re + &t.im * &t.im;
        return Scalar::gaussian(&t.re / &n, -(&t.im / &n));
    }
    let largest = x.terms.last().expect("nonzero").radical;
    let p = smallest_prime_factor(largest);
    let (a, b) = split_prime(x, p);
    let sqrt_p = Scalar::from_parts(p, Rational::one(), Rational::zero());
    let partner = &a - &(&b * &sqrt_p);
    let pq = Rational::from_integer(BigInt::from(p));
    let reduced = &(&a * &a) - &(&b * &b).scale(&pq);
    &partner * &invert(&reduced)
}

fn real_sign(x: &Scalar) -> i32 {
    if x.is_zero() {
        return 0;
    }
    if x.is_gaussian_rational() {
        return if x.terms[0].re.is_positive() { 1 } else { -1 };
    }
    let largest = x.terms.last().expect("nonzero").radical;
    let p = smallest_prime_factor(largest);
    let (a, b) = split_prime(x, p);
    let sa = real_sign(&a);
    let sb = real_sign(&b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return if sa == 0 { sb } else { sa };
    }
    let pq = Rational::from_integer(BigInt::from(p));
    let diff = &(&a * &a) - &(&b * &b).scale(&pq);
    real_sign(&diff) * sa
}

/// Exact rational square root if `q` is the square of a rational.
fn rational_sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().to_biguint()?;
    let d = q.denom().to_biguint()?;
    let rn = n.sqrt();
    let rd = d.sqrt();
    (&rn * &rn == n && &rd * &rd == d)
        .then(|| Rational::new(BigInt::from(rn), BigInt::from(rd)))
}

/// Write `n = s²·m` with `m` square-free. Trial division up to 10⁶; a
/// leftover cofactor that is a perfect square is still extracted.
fn square_free_decompose(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut square = BigUint::one();
    let mut free = BigUint::one();
    let mut d = 2u64;
    while d <= 1_000_000 && BigUint::from(d) * BigUint::from(d) <= rest {
        let bd = BigUint::from(d);
        let mut count = 0u32;
        while (&rest % &bd).is_zero() {
            rest /= &bd;
            count += 1;
        }
        if count > 0 {
            square *= bd.pow(count / 2);
            if count % 2 == 1 {
                free *= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        square *= r;
    } else {
        free *= rest;
    }
    (square, free)
}

/// `√q` as `r·√m` with `r` rational and `m` square-free.
pub fn scalar_sqrt(q: &Rational) -> Result<Scalar> {
    if q.is_negative() {
        return Err(Error::NegativeRadicand(q.to_string()));
    }
    if q.is_zero() {
        return Ok(Scalar::zero());
    }
    // √(p/d) = √(p·d)/d keeps the radical integral
    let p = q.numer().to_biguint().expect("positive");
    let d = q.denom().to_biguint().expect("positive");
    let (square, free) = square_free_decompose(&(&p * &d));
    let m = free
        .to_u64()
        .ok_or_else(|| Error::RadicalNotRepresentable(q.to_string()))?;
    let coeff = Rational::new(
        BigInt::from_biguint(Sign::Plus, square),
        BigInt::from_biguint(Sign::Plus, d),
    );
    Ok(Scalar::from_parts(m, coeff, Rational::zero()))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_ref(b, true));
forward_binop!(Sub, sub, |a, b| a.add_ref(b, false));
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));
// Panics on division by zero; use `checked_div` for fallible division.
forward_binop!(Div, div, |a, b| a.checked_div(b).expect("division by zero"));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    radical: t.radical,
                    re: -t.re.clone(),
                    im: -t.im.clone(),
                })
                .collect(),
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for t in &rhs.terms {
            Scalar::push_term(&mut self.terms, t.radical, t.re.clone(), t.im.clone());
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for t in &rhs.terms {
            Scalar::push_term(&mut self.terms, t.radical, -t.re.clone(), -t.im.clone());
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::from_rational(q)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

// ---- literal grammar -------------------------------------------------------

fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Prints in the literal grammar, e.g. `1/2 + 1/10 i * sqrt(5)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in &self.terms {
            for (value, imag) in [(&t.re, false), (&t.im, true)] {
                if value.is_zero() {
                    continue;
                }
                let neg = value.is_negative();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if neg { '-' } else { '+' })?;
                }
                first = false;
                write!(f, "{}", fmt_rational(&value.abs()))?;
                if imag {
                    write!(f, " i")?;
                }
                if t.radical != 1 {
                    write!(f, " * sqrt({})", t.radical)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

struct LiteralParser<'a> {
    src: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl<'a> LiteralParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} in scalar literal {:?}", self.pos, self.text))
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.text[start..self.pos].parse().expect("digits"))
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn term(&mut self, negative: bool) -> Result<Scalar> {
        let mut coeff = match self.integer() {
            Some(n) => {
                let mut q = Rational::from_integer(n);
                if self.eat(b'/') {
                    let d = self.integer().ok_or_else(|| self.err("expected denominator"))?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    q /= Rational::from_integer(d);
                }
                Some(q)
            }
            None => None,
        };
        let mut imag = false;
        if self.peek() == Some(b'i') && !self.text[self.pos..].starts_with("i*") {
            // a lone `i` (not the start of another word)
            let next = self.src.get(self.pos + 1).copied();
            if next.is_none_or(|c| !c.is_ascii_alphabetic()) {
                self.pos += 1;
                imag = true;
            }
        } else if self.text[self.pos..].starts_with("i*") {
            self.pos += 1;
            imag = true;
        }
        let mut radical = Scalar::one();
        let has_star = self.eat(b'*');
        if has_star || (coeff.is_none() && !imag) {
            if !self.keyword("sqrt") {
                return Err(self.err("expected sqrt"));
            }
            if !self.eat(b'(') {
                return Err(self.err("expected '('"));
            }
            let m = self.integer().ok_or_else(|| self.err("expected radicand"))?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            radical = scalar_sqrt(&Rational::from_integer(m))?;
        }
        if coeff.is_none() {
            coeff = Some(Rational::one());
        }
        let mut q = coeff.expect("set");
        if negative {
            q = -q;
        }
        let base = if imag {
            Scalar::gaussian(Rational::zero(), q)
        } else {
            Scalar::from_rational(q)
        };
        Ok(&base * &radical)
    }

    fn parse(mut self) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        let mut first = true;
        loop {
            let mut negative = false;
            let mut saw_sign = false;
            loop {
                if self.eat(b'+') {
                    saw_sign = true;
                } else if self.eat(b'-') {
                    negative = !negative;
                    saw_sign = true;
                } else {
                    break;
                }
            }
            if !first && !saw_sign {
                return Err(self.err("expected '+' or '-'"));
            }
            first = false;
            acc += &self.term(negative)?;
            if self.peek().is_none() {
                return Ok(acc);
            }
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parse the literal grammar `[+/-] p[/q] [i] [* sqrt(m)]` joined by `+`/`-`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::Parse("empty scalar literal".into()));
        }
        LiteralParser {
            src: s.as_bytes(),
            pos: 0,
            text: s,
        }
        .parse()
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Coefficient types usable by the generic series and evaluation code:
/// exact [`Scalar`] and the floating [`FloatComplex`] backend.
pub trait Coeff: Clone + Send + Sync + fmt::Debug + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn from_scalar(s: &Scalar) -> Self;
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Result<Self> {
        Scalar::inv(self)
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
}

impl Coeff for FloatComplex {
    fn zero() -> Self {
        FloatComplex::new(0.0, 0.0)
    }
    fn one() -> Self {
        FloatComplex::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Result<Self> {
        if Coeff::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(FloatComplex::new(1.0, 0.0) / self)
        }
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.to_float()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(lit: &str) -> Scalar {
        lit.parse().unwrap()
    }

    #[test]
    fn radicals_multiply_out() {
        let a = &Scalar::from_ratio(1, 2) * &Scalar::sqrt_int(5);
        let b = &Scalar::i() * &Scalar::sqrt_int(5);
        assert_eq!(&a * &b, Scalar::gaussian(rat(0, 1), rat(5, 2)));
    }

    #[test]
    fn one_over_i() {
        assert_eq!(Scalar::one().checked_div(&Scalar::i()).unwrap(), -Scalar::i());
    }

    #[test]
    fn a3_times_conj_b3() {
        // mu = lambda = 1: a3 = sqrt(5)/2, b3 = i/(4 a3)
        let a3 = &Scalar::sqrt_int(5) * &Scalar::from_ratio(1, 2);
        let b3 = Scalar::i().checked_div(&(&Scalar::from_int(4) * &a3)).unwrap();
        assert_eq!(&a3 * &b3.conj(), s("-1/4 i"));
        assert_eq!(b3, s("1/10 i * sqrt(5)"));
        assert_eq!(b3.conj(), s("-1/10 i * sqrt(5)"));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(scalar_sqrt(&rat(1, 1)).unwrap(), Scalar::one());
        assert_eq!(scalar_sqrt(&rat(15, 4)).unwrap(), s("1/2 * sqrt(15)"));
        assert_eq!(scalar_sqrt(&rat(1, 9)).unwrap(), Scalar::from_ratio(1, 3));
        assert_eq!(scalar_sqrt(&rat(7, 288)).unwrap(), s("1/24 * sqrt(14)"));
        assert!(matches!(scalar_sqrt(&rat(-1, 2)), Err(Error::NegativeRadicand(_))));
    }

    #[test]
    fn float_values() {
        assert!((Scalar::from_ratio(1, 3).to_float().re - 1.0 / 3.0).abs() < 1e-16);
        let v = s("1/2 * sqrt(15)").to_float();
        assert!((v.re - 1.936_491_673_103_708_5).abs() < 1e-15 && v.im == 0.0);
        assert_eq!(Scalar::i().to_float(), FloatComplex::new(0.0, 1.0));
    }

    #[test]
    fn multi_radical_inverse() {
        let x = s("1 + 1 * sqrt(2) + 1 i * sqrt(3) + 2 * sqrt(6)");
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, Scalar::one());
    }

    #[test]
    fn real_sign_with_radicals() {
        // sqrt(2) + sqrt(3) - sqrt(10) is about -0.016
        let x = s("1 * sqrt(2) + 1 * sqrt(3) - 1 * sqrt(10)");
        assert_eq!(x.signum().unwrap(), -1);
        assert_eq!(s("3 - 2 * sqrt(2)").signum().unwrap(), 1);
        assert_eq!(s("1/3").cmp_real(&s("1/4 * sqrt(2)")).unwrap(), Ordering::Less);
        assert!(s("i").signum().is_err());
    }

    #[test]
    fn denesting_sqrt() {
        // (1 + sqrt 2)^2 = 3 + 2 sqrt 2
        assert_eq!(s("3 + 2 * sqrt(2)").sqrt_real().unwrap(), s("1 + 1 * sqrt(2)"));
        assert_eq!(s("3 - 2 * sqrt(2)").sqrt_real().unwrap(), s("-1 + 1 * sqrt(2)"));
        assert!(matches!(
            s("1 * sqrt(2)").sqrt_real(),
            Err(Error::RadicalNotRepresentable(_))
        ));
    }

    #[test]
    fn literal_round_trip() {
        for lit in ["0", "1/2 + 1/10 i * sqrt(5)", "-3 i", "-1/2 * sqrt(15) - 7 i * sqrt(15)"] {
            assert_eq!(s(lit).to_string(), lit);
        }
        assert_eq!(s("i"), Scalar::i());
        assert_eq!(s("sqrt(8)"), s("2 * sqrt(2)"));
        assert_eq!(s("- -2"), Scalar::from_int(2));
        assert!("1 +".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("2 3".parse::<Scalar>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn scalar() -> impl Strategy<Value = Scalar> {
            let part = (-20i64..20, 1i64..9, -20i64..20, 1i64..9);
            prop::collection::vec((part, prop::sample::select(vec![1u64, 2, 3, 5, 6, 10, 15])), 1..4).prop_map(|ts| {
                ts.into_iter().fold(Scalar::zero(), |acc, ((a, b, c, d), m)| {
                    &acc + &(&Scalar::gaussian(rat(a, b), rat(c, d)) * &Scalar::sqrt_int(m))
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn inverse_is_two_sided(x in scalar()) {
                prop_assume!(!x.is_zero());
                let inv = x.inv().unwrap();
                prop_assert!((&x * &inv).is_one());
            }

            #[test]
            fn ring_laws(a in scalar(), b in scalar(), c in scalar()) {
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            }

            #[test]
            fn literal_round_trip(a in scalar()) {
                prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
            }

            #[test]
            fn norm_is_real_and_nonnegative(a in scalar()) {
                let n = &a * &a.conj();
                prop_assert!(n.is_real());
                prop_assert!(n.is_nonnegative());
            }
        }
    }

}
