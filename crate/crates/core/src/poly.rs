//! Sparse polynomials in the complexified variables `(z, w, χ, τ)` and
//! rational tuples sharing one denominator.
//!
//! `χ` and `τ` stand for the formal conjugates of `z` and `w`. Terms are kept
//! in a `BTreeMap` under graded lexicographic order with `z < w < χ < τ`, so
//! iteration and printing are deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Coeff, FloatComplex, Rational, Scalar};
use crate::series::Series;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Z,
    W,
    Chi,
    Tau,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::Z, Var::W, Var::Chi, Var::Tau];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The formal conjugate variable.
    pub fn conj(self) -> Var {
        match self {
            Var::Z => Var::Chi,
            Var::W => Var::Tau,
            Var::Chi => Var::Z,
            Var::Tau => Var::W,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Z => "z",
            Var::W => "w",
            Var::Chi => "chi",
            Var::Tau => "tau",
        }
    }
}

/// Exponent vector over `(z, w, χ, τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0).all(|(a, b)| *a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a -= b;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::term(Monomial::ONE, c)
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        Poly::term(Monomial(e), Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Collect `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms(iter: impl IntoIterator<Item = ([u32; 4], Scalar)>) -> Self {
        let mut p = Poly::zero();
        for (e, c) in iter {
            p.add_term(Monomial(e), &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::ONE)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Variables that actually occur.
    pub fn vars(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|m| m.exp(*v) > 0))
            .collect()
    }

    fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            p.add_term(*m, &f(c));
        }
        p
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    fn mul_impl(&self, rhs: &Poly, max_degree: Option<u32>) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                if max_degree.is_some_and(|d| m.degree() > d) {
                    continue;
                }
                let prod = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e += &prod,
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Product with every term of total degree above `max_degree` dropped.
    pub fn mul_truncated(&self, rhs: &Poly, max_degree: u32) -> Poly {
        self.mul_impl(rhs, Some(max_degree))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// k-th partial derivative in `v`.
    pub fn diff(&self, v: Var, k: u32) -> Poly {
        let idx = v.index();
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e < k {
                continue;
            }
            let falling: u64 = ((e - k + 1)..=e).map(u64::from).product();
            let mut nm = *m;
            nm.0[idx] -= k;
            let f = Rational::from_integer(BigInt::from(falling));
            p.add_term(nm, &c.scale(&f));
        }
        p
    }

    /// Replace `v` by `replacement`.
    pub fn subst(&self, v: Var, replacement: &Poly) -> Poly {
        let idx = v.index();
        let mut grouped: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut rest = *m;
            let e = rest.0[idx];
            rest.0[idx] = 0;
            grouped.entry(e).or_default().add_term(rest, c);
        }
        let mut out = Poly::zero();
        let mut power = Poly::one();
        let mut current = 0;
        for (e, part) in grouped {
            while current < e {
                power = &power * replacement;
                current += 1;
            }
            out = &out + &(&part * &power);
        }
        out
    }

    /// Simultaneous substitution `v ↦ images[v]` for all four variables.
    pub fn compose(&self, images: &[Poly; 4]) -> Poly {
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(), p.clone()]).collect();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, e) in m.0.iter().enumerate() {
                let e = *e as usize;
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e];
            }
            out = &out + &t;
        }
        out
    }

    /// Formal conjugation: swap `z ↔ χ`, `w ↔ τ` and conjugate coefficients.
    pub fn conjugate(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let [z, w, chi, tau] = m.0;
                    (Monomial([chi, tau, z, w]), c.conj())
                })
                .collect(),
        }
    }

    /// Generic evaluation: `coeff` lifts each scalar into the target ring.
    pub fn eval_with<C: Coeff>(&self, point: &[C; 4], coeff: impl Fn(&Scalar) -> C) -> C {
        let mut powers: Vec<Vec<C>> = point.iter().map(|x| vec![C::one(), x.clone()]).collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (i, e) in m.0.iter().enumerate() {
                let e = *e as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i][powers[i].len() - 1].times(&point[i]);
                    powers[i].push(next);
                }
                t = t.times(&powers[i][e]);
            }
            acc = acc.plus(&t);
        }
        acc
    }

    pub fn eval(&self, point: &[Scalar; 4]) -> Scalar {
        self.eval_with(point, Scalar::clone)
    }

    pub fn eval_float(&self, point: &[FloatComplex; 4]) -> FloatComplex {
        self.eval_with(point, Scalar::to_float)
    }

    /// Evaluate with each variable replaced by a truncated series.
    pub fn eval_series<C: Coeff>(
        &self,
        args: &[Series<C>; 4],
        coeff: impl Fn(&Scalar) -> C,
    ) -> Series<C> {
        let order = args[0].order();
        let mut powers: Vec<Vec<Series<C>>> = args
            .iter()
            .map(|x| vec![Series::constant(C::one(), order), x.clone()])
            .collect();
        let mut acc = Series::zero(order);
        for (m, c) in &self.terms {
            let mut t = Series::constant(coeff(c), order);
            for (i, e) in m.0.iter().enumerate() {
                let e = *e as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i][powers[i].len() - 1].times(&args[i]);
                    powers[i].push(next);
                }
                t = t.times(&powers[i][e]);
            }
            acc = acc.plus(&t);
        }
        acc
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Drop every term of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. A single divisor is its own Gröbner basis, so the leading
    /// term of the running remainder must always be divisible.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        let lc_inv = lc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(lm);
            let qc = c * &lc_inv;
            rem = &rem - &divisor.mul_monomial(&qm).scale(&qc);
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    /// Parse with the built-in variables only.
    pub fn parse(src: &str) -> Result<Poly> {
        Poly::parse_with(src, &[])
    }

    /// Parse an arithmetic expression in `z, w, chi, tau`, `i`, integers,
    /// `sqrt(<constant>)` and the supplied named constants. Supports
    /// `+ - * / ^`, parentheses and implicit multiplication by juxtaposition.
    /// Division is only allowed by nonzero constants.
    pub fn parse_with(src: &str, constants: &[(&str, Scalar)]) -> Result<Poly> {
        let mut p = ExprParser {
            chars: src.char_indices().collect(),
            pos: 0,
            src,
            constants,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

struct ExprParser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
    constants: &'a [(&'a str, Scalar)],
}

impl ExprParser<'_> {
    fn err(&self, what: &str) -> Error {
        let at = self.chars.get(self.pos).map_or(self.src.len(), |c| c.0);
        Error::Parse(format!("{what} at byte {at} in {:?}", self.src))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(self.err("division by a non-constant or zero"));
                    }
                    acc = acc.scale(&d.constant_term().inv()?);
                }
                Some(c) if c == '(' || c.is_alphanumeric() => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer().ok_or_else(|| self.err("expected exponent"))?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        s.parse().ok()
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer().expect("digit");
                Ok(Poly::constant(Scalar::from_rational(Rational::from_integer(n))))
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.1.is_alphanumeric() || c.1 == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                self.identifier(&name, start)
            }
            _ => Err(self.err("expected an operand")),
        }
    }

    fn identifier(&mut self, name: &str, start: usize) -> Result<Poly> {
        let var = match name {
            "z" => Some(Var::Z),
            "w" => Some(Var::W),
            "chi" | "χ" => Some(Var::Chi),
            "tau" | "τ" => Some(Var::Tau),
            _ => None,
        };
        if let Some(v) = var {
            return Ok(Poly::var(v));
        }
        if name == "i" {
            return Ok(Poly::constant(Scalar::i()));
        }
        if name == "sqrt" {
            if self.peek() != Some('(') {
                return Err(self.err("expected '(' after sqrt"));
            }
            let arg = self.atom()?;
            let q = arg
                .is_constant()
                .then(|| arg.constant_term().as_rational())
                .flatten()
                .ok_or_else(|| self.err("sqrt needs a rational constant"))?;
            return Ok(Poly::constant(crate::scalar::scalar_sqrt(&q)?));
        }
        if let Some((_, v)) = self.constants.iter().find(|(n, _)| *n == name) {
            return Ok(Poly::constant(v.clone()));
        }
        self.pos = start;
        Err(self.err(&format!("unknown identifier {name:?}")))
    }
}

impl FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Poly::parse(s)
    }
}

impl fmt::Display for Poly {
    /// Highest term first; the output parses back with [`Poly::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            if !c.is_one() || *m == Monomial::ONE {
                factors.push(format!("({c})"));
            }
            for v in Var::ALL {
                match m.exp(v) {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    e => factors.push(format!("{}^{e}", v.name())),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<'b> Add<&'b Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &'b Poly) -> Poly {
        let (mut big, small) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(*m, c);
        }
        big
    }
}

impl<'b> Sub<&'b Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &'b Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'b> Mul<&'b Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &'b Poly) -> Poly {
        self.mul_impl(rhs, None)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &'b Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |acc, p| &acc + &p)
    }
}

/// Polynomials form a ring; only constants are invertible.
impl Coeff for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
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
        if self.is_constant() {
            Ok(Poly::constant(self.constant_term().inv()?))
        } else {
            Err(Error::DivisionByZero)
        }
    }
    fn from_scalar(s: &Scalar) -> Self {
        Poly::constant(s.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    e: [u32; 4],
    c: Scalar,
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<JsonTerm> = self
            .terms
            .iter()
            .map(|(m, c)| JsonTerm { e: m.0, c: c.clone() })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<JsonTerm>::deserialize(d)?;
        Ok(Poly::from_terms(terms.into_iter().map(|t| (t.e, t.c))))
    }
}

/// Numerators sharing one denominator: `(P_1, …, P_N) / δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatTuple {
    pub numerators: Vec<Poly>,
    pub denominator: Poly,
}

impl RatTuple {
    pub fn new(numerators: Vec<Poly>, denominator: Poly) -> Self {
        RatTuple {
            numerators,
            denominator,
        }
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    /// As-presented degree: max total degree over numerators and denominator.
    pub fn degree(&self) -> u32 {
        self.numerators
            .iter()
            .chain(std::iter::once(&self.denominator))
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, point: &[Scalar; 4]) -> Result<Vec<Scalar>> {
        let d = self.denominator.eval(point);
        if d.is_zero() {
            return Err(Error::PoleAtPoint(format!("{point:?}")));
        }
        let inv = d.inv()?;
        Ok(self.numerators.iter().map(|p| &p.eval(point) * &inv).collect())
    }

    pub fn eval_float(&self, point: &[FloatComplex; 4]) -> Result<Vec<FloatComplex>> {
        let d = self.denominator.eval_float(point);
        if d.norm() == 0.0 {
            return Err(Error::PoleAtPoint(format!("{point:?}")));
        }
        Ok(self.numerators.iter().map(|p| p.eval_float(point) / d).collect())
    }

    /// Equality as rational maps: `P_i·δ' = P'_i·δ` for every component.
    pub fn cross_eq(&self, other: &RatTuple) -> bool {
        self.len() == other.len()
            && self
                .numerators
                .iter()
                .zip(&other.numerators)
                .all(|(a, b)| (a * &other.denominator) == (b * &self.denominator))
    }

    /// Taylor expansion of every component at 0, truncated at total degree
    /// `order`, by recursive division on homogeneous parts.
    pub fn taylor(&self, order: u32) -> Result<Vec<Poly>> {
        let d0 = self.denominator.constant_term();
        if d0.is_zero() {
            return Err(Error::PoleAtBasePoint);
        }
        let d0_inv = d0.inv()?;
        let den_parts: Vec<Poly> = (0..=order).map(|k| self.denominator.homogeneous_part(k)).collect();
        let mut out = Vec::with_capacity(self.len());
        for num in &self.numerators {
            let mut parts: Vec<Poly> = Vec::with_capacity(order as usize + 1);
            for k in 0..=order {
                let mut acc = num.homogeneous_part(k);
                for j in 1..=k {
                    let dj = &den_parts[j as usize];
                    if !dj.is_zero() {
                        acc = &acc - &(dj * &parts[(k - j) as usize]);
                    }
                }
                parts.push(acc.scale(&d0_inv));
            }
            out.push(parts.into_iter().sum());
        }
        Ok(out)
    }

    /// `∂^{k+l} H_comp / ∂z^k ∂w^l` at 0.
    pub fn jet(&self, comp: usize, k: u32, l: u32) -> Result<Scalar> {
        let series = self.taylor(k + l)?;
        Ok(taylor_jet(&series[comp], k, l))
    }
}

/// `k!·l!` times the coefficient of `z^k w^l` in a Taylor polynomial.
pub fn taylor_jet(series: &Poly, k: u32, l: u32) -> Scalar {
    let c = series.coeff(&Monomial([k, l, 0, 0]));
    let fact = |n: u32| -> BigInt { (1..=n).map(BigInt::from).product() };
    c.scale(&Rational::from_integer(fact(k) * fact(l)))
}

/// Convenience constructor for tests and catalog code.
pub fn poly(src: &str) -> Poly {
    Poly::parse(src).unwrap_or_else(|e| panic!("bad polynomial literal {src:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn difference_of_squares() {
        assert_eq!(&poly("z + w") * &poly("z - w"), poly("z^2 - w^2"));
        assert!((&poly("z") - &poly("z")).is_zero());
    }

    #[test]
    fn derivatives() {
        assert_eq!(poly("z^2*w").diff(Var::Z, 1), poly("2 z w"));
        let g = Poly::parse_with("w*(1 - i*mu*w)", &[("mu", Scalar::from_ratio(1, 3))]).unwrap();
        assert!(g.diff(Var::W, 1).constant_term().is_one());
        assert!(poly("z^3").diff(Var::Z, 4).is_zero());
    }

    #[test]
    fn segre_substitution() {
        let segre = poly("w - 2 i z chi");
        let rho = poly("(w - tau)/(2 i) - z chi");
        assert!(rho.subst(Var::Tau, &segre).is_zero());
        assert_eq!(poly("z").subst(Var::W, &poly("2 i z chi")), poly("z"));
        assert_eq!(poly("w").conjugate().subst(Var::Tau, &segre), segre);
    }

    #[test]
    fn conjugation() {
        assert_eq!(poly("i z").conjugate(), poly("-i chi"));
        let g = Poly::parse_with("w*(1 - i*mu*w)", &[("mu", Scalar::from_ratio(1, 3))]).unwrap();
        assert_eq!(g.conjugate(), poly("tau*(1 + 1/3 i tau)"));
        assert_eq!(poly("3 z^2 - z").conjugate(), poly("3 chi^2 - chi"));
    }

    #[test]
    fn grlex_order() {
        let ms: Vec<Monomial> = poly("1 + z + w + chi + tau + z^2 + z w")
            .terms()
            .map(|(m, _)| *m)
            .collect();
        assert_eq!(ms[0], Monomial::ONE);
        assert_eq!(ms[1], Monomial([1, 0, 0, 0]));
        assert_eq!(ms[4], Monomial([0, 0, 0, 1]));
        assert_eq!(ms[5], Monomial([2, 0, 0, 0]));
        assert_eq!(ms[6], Monomial([1, 1, 0, 0]));
    }

    #[test]
    fn exact_division() {
        let a = poly("z^2 + 3 w z - chi");
        let b = poly("w - 2 i z + 1");
        assert_eq!((&a * &b).div_exact(&b), Some(a.clone()));
        assert_eq!((&(&a * &b) + &poly("z")).div_exact(&b), None);
        assert_eq!(Poly::zero().div_exact(&b), Some(Poly::zero()));
    }

    #[test]
    fn taylor_of_geometric() {
        let t = RatTuple::new(vec![poly("1")], poly("1 - z"));
        let s = t.taylor(4).unwrap();
        assert_eq!(s[0], poly("1 + z + z^2 + z^3 + z^4"));
        assert!(t.jet(0, 3, 0).unwrap() == Scalar::from_int(6));
    }

    #[test]
    fn display_round_trip() {
        let p = poly("1/2 i sqrt(5) z^2 w - 3 tau + 7");
        assert_eq!(poly(&p.to_string()), p);
        let json = serde_json::to_string(&p).unwrap();
        let back: Poly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn parse_errors() {
        assert!(Poly::parse("z +").is_err());
        assert!(Poly::parse("z / w").is_err());
        assert!(Poly::parse("q").is_err());
        assert!(Poly::parse("(z").is_err());
    }

    #[test]
    fn evaluation() {
        let p = poly("z^2 + i w");
        let v = p.eval(&[Scalar::from_int(2), Scalar::from_int(3), Scalar::zero(), Scalar::zero()]);
        assert_eq!(v, "4 + 3 i".parse().unwrap());
        let f = p.eval_float(&[
            FloatComplex::new(2.0, 0.0),
            FloatComplex::new(3.0, 0.0),
            FloatComplex::new(0.0, 0.0),
            FloatComplex::new(0.0, 0.0),
        ]);
        assert_eq!(f, FloatComplex::new(4.0, 3.0));
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -4i64..5, -4i64..5), 0..5).prop_map(
            |ts| {
                Poly::from_terms(ts.into_iter().map(|((a, b, c, d), re, im)| {
                    ([a, b, c, d], Scalar::gaussian(Rational::from_integer(re.into()), Rational::from_integer(im.into())))
                }))
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn conjugate_is_ring_involution(a in small_poly(), b in small_poly()) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!((&a + &b).conjugate(), &a.conjugate() + &b.conjugate());
            prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
        }

        #[test]
        fn degree_is_additive(a in small_poly(), b in small_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!((&a * &b).degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
        }

        #[test]
        fn segre_chain_rule(a in small_poly()) {
            // d/dchi (a|_{tau = w - 2iz chi}) = (L a)|_{tau = w - 2iz chi}
            let segre = poly("w - 2 i z chi");
            let lhs = a.subst(Var::Tau, &segre).diff(Var::Chi, 1);
            let la = &a.diff(Var::Chi, 1) - &(&poly("2 i z") * &a.diff(Var::Tau, 1));
            prop_assert_eq!(lhs, la.subst(Var::Tau, &segre));
        }

        #[test]
        fn division_undoes_product(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
