//! Exact scalars over the Gaussian rationals ℚ(i), sparse linear combinations
//! with zero-pruning, and polynomials in two commuting formal variables.
//!
//! Every computation in the crate bottoms out here: there is no floating-point
//! mode, and every result is kept in canonical form (zero coefficients are never
//! stored).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use malachite::num::arithmetic::traits::Reciprocal;
use malachite::num::basic::traits::{One, Zero};
use malachite::{Natural, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element `re + im·i` of ℚ(i).
///
/// Both parts are arbitrary-precision rationals, always in lowest terms with a
/// positive denominator (malachite keeps them canonical).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: Rational,
    im: Rational,
}

pub type Gr = GaussianRational;

impl GaussianRational {
    pub const ZERO: Gr = Gr {
        re: Rational::ZERO,
        im: Rational::ZERO,
    };
    pub const ONE: Gr = Gr {
        re: Rational::ONE,
        im: Rational::ZERO,
    };
    pub const I: Gr = Gr {
        re: Rational::ZERO,
        im: Rational::ONE,
    };

    pub fn new(re: Rational, im: Rational) -> Self {
        Gr { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Gr {
            re: Rational::from(n),
            im: Rational::ZERO,
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Gr {
            re: Rational::from_signeds(num, den),
            im: Rational::ZERO,
        }
    }

    /// `re_num/re_den + (im_num/im_den)·i`
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        assert!(re_den != 0 && im_den != 0, "zero denominator");
        Gr {
            re: Rational::from_signeds(re_num, re_den),
            im: Rational::from_signeds(im_num, im_den),
        }
    }

    pub fn imag(n: i64) -> Self {
        Gr {
            re: Rational::ZERO,
            im: Rational::from(n),
        }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re == Rational::ZERO && self.im == Rational::ZERO
    }

    pub fn is_one(&self) -> bool {
        self.re == Rational::ONE && self.im == Rational::ZERO
    }

    pub fn is_real(&self) -> bool {
        self.im == Rational::ZERO
    }

    pub fn conj(&self) -> Self {
        Gr {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `|z|² = z·conj(z)`, a non-negative rational.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_real() {
            return Ok(Gr {
                re: (&self.re).reciprocal(),
                im: Rational::ZERO,
            });
        }
        let n = self.norm_sqr().reciprocal();
        Ok(Gr {
            re: &self.re * &n,
            im: -(&self.im * &n),
        })
    }

    pub fn checked_div(&self, other: &Gr) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// `self^n` for a non-negative exponent.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Gr::ONE;
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `(-1)^n` as a scalar.
    pub fn sign(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Gr::ONE
        } else {
            -Gr::ONE
        }
    }

    /// Integer value, when `self` is a small real integer.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_real() || self.re.denominator_ref() != &Natural::ONE {
            return None;
        }
        i64::try_from(&self.re).ok()
    }

    /// `self += a * b`, skipping the imaginary cross terms when they vanish.
    pub fn add_mul(&mut self, a: &Gr, b: &Gr) {
        match (a.is_real(), b.is_real()) {
            (true, true) => self.re += &a.re * &b.re,
            (true, false) => {
                if b.re != Rational::ZERO {
                    self.re += &a.re * &b.re;
                }
                self.im += &a.re * &b.im;
            }
            (false, true) => {
                if a.re != Rational::ZERO {
                    self.re += &a.re * &b.re;
                }
                self.im += &a.im * &b.re;
            }
            (false, false) => {
                let p = a * b;
                *self += &p;
            }
        }
    }
}

impl From<i64> for Gr {
    fn from(n: i64) -> Self {
        Gr::from_int(n)
    }
}

impl From<Rational> for Gr {
    fn from(re: Rational) -> Self {
        Gr {
            re,
            im: Rational::ZERO,
        }
    }
}

impl PartialOrd for Gr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on (re, im); only used to make output deterministic.
impl Ord for Gr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re
            .cmp(&other.re)
            .then_with(|| self.im.cmp(&other.im))
    }
}

impl Neg for Gr {
    type Output = Gr;
    fn neg(self) -> Gr {
        Gr {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &Gr {
    type Output = Gr;
    fn neg(self) -> Gr {
        Gr {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Add<&Gr> for &Gr {
    type Output = Gr;
    fn add(self, rhs: &Gr) -> Gr {
        Gr {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub<&Gr> for &Gr {
    type Output = Gr;
    fn sub(self, rhs: &Gr) -> Gr {
        Gr {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul<&Gr> for &Gr {
    type Output = Gr;
    fn mul(self, rhs: &Gr) -> Gr {
        match (self.is_real(), rhs.is_real()) {
            (true, true) => Gr {
                re: &self.re * &rhs.re,
                im: Rational::ZERO,
            },
            (true, false) => Gr {
                re: &self.re * &rhs.re,
                im: &self.re * &rhs.im,
            },
            (false, true) => Gr {
                re: &self.re * &rhs.re,
                im: &self.im * &rhs.re,
            },
            (false, false) => Gr {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Gr> for Gr {
            type Output = Gr;
            fn $m(self, rhs: Gr) -> Gr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Gr> for Gr {
            type Output = Gr;
            fn $m(self, rhs: &Gr) -> Gr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Gr> for &Gr {
            type Output = Gr;
            fn $m(self, rhs: Gr) -> Gr {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Gr> for Gr {
    fn add_assign(&mut self, rhs: &Gr) {
        self.re += &rhs.re;
        if !rhs.is_real() {
            self.im += &rhs.im;
        }
    }
}

impl AddAssign<Gr> for Gr {
    fn add_assign(&mut self, rhs: Gr) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign<&Gr> for Gr {
    fn sub_assign(&mut self, rhs: &Gr) {
        self.re -= &rhs.re;
        if !rhs.is_real() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&Gr> for Gr {
    fn mul_assign(&mut self, rhs: &Gr) {
        *self = &*self * rhs;
    }
}

impl Sum for Gr {
    fn sum<I: Iterator<Item = Gr>>(iter: I) -> Gr {
        let mut acc = Gr::ZERO;
        for x in iter {
            acc += x;
        }
        acc
    }
}

fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

impl fmt::Display for Gr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re0 = self.re == Rational::ZERO;
        let im0 = self.im == Rational::ZERO;
        if im0 {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im_abs = if self.im < Rational::ZERO {
            -&self.im
        } else {
            self.im.clone()
        };
        let im_str = if im_abs == Rational::ONE {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rational(&im_abs))
        };
        let neg = self.im < Rational::ZERO;
        if re0 {
            write!(f, "{}{}", if neg { "-" } else { "" }, im_str)
        } else {
            write!(
                f,
                "{}{}{}",
                fmt_rational(&self.re),
                if neg { "-" } else { "+" },
                im_str
            )
        }
    }
}

impl fmt::Debug for Gr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str, whole: &str) -> Result<Rational> {
    let err = |reason: &str| Error::ScalarParse {
        input: whole.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(err("empty number"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num.strip_prefix(['+', '-']).unwrap_or(num);
    if !digits(unsigned) {
        return Err(err("malformed numerator"));
    }
    if let Some(d) = den {
        if !digits(d) {
            return Err(err("malformed denominator"));
        }
        if d.bytes().all(|b| b == b'0') {
            return Err(err("zero denominator"));
        }
    }
    let negative = num.starts_with('-');
    let n = Natural::from_str(unsigned).map_err(|_| err("malformed numerator"))?;
    let d = match den {
        Some(d) => Natural::from_str(d).map_err(|_| err("malformed denominator"))?,
        None => Natural::ONE,
    };
    Ok(Rational::from_sign_and_naturals(!negative, n, d))
}

impl FromStr for Gr {
    type Err = Error;

    /// Accepts `a`, `a/b`, `c/d*i`, `i`, `-i`, `a/b+c/d*i`, `a/b-i`, with
    /// optional spaces and a lowercase `i`.
    fn from_str(input: &str) -> Result<Gr> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::ScalarParse {
                input: input.to_string(),
                reason: "empty".into(),
            });
        }
        if !s.ends_with('i') {
            return Ok(Gr::from(parse_rational(&s, input)?));
        }
        // split at the last sign that is not the leading one
        let body = &s[..s.len() - 1];
        let split = body
            .char_indices()
            .filter(|&(idx, c)| idx > 0 && (c == '+' || c == '-'))
            .map(|(idx, _)| idx)
            .last();
        let (re_part, im_part) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_part.is_empty() {
            Rational::ZERO
        } else {
            parse_rational(re_part, input)?
        };
        let im = match im_part {
            "" | "+" => Rational::ONE,
            "-" => -Rational::ONE,
            other => {
                let coeff = other.strip_suffix('*').ok_or_else(|| Error::ScalarParse {
                    input: input.to_string(),
                    reason: "expected '*' before 'i'".into(),
                })?;
                parse_rational(coeff, input)?
            }
        };
        Ok(Gr { re, im })
    }
}

impl Serialize for Gr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Gr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A vector space over ℚ(i) with canonical zero detection.
pub trait Linear: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, c: &Gr);

    fn add_assign_ref(&mut self, other: &Self) {
        self.add_scaled(other, &Gr::ONE);
    }

    fn scaled(&self, c: &Gr) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }
}

impl Linear for Gr {
    fn zero() -> Self {
        Gr::ZERO
    }
    fn is_zero(&self) -> bool {
        Gr::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, c: &Gr) {
        if c.is_one() {
            *self += other;
        } else {
            self.add_mul(other, c);
        }
    }
}

/// Sparse maps are vector spaces; zero entries are pruned on every update.
impl<K: Ord + Clone + fmt::Debug, V: Linear> Linear for BTreeMap<K, V> {
    fn zero() -> Self {
        BTreeMap::new()
    }
    fn is_zero(&self) -> bool {
        self.is_empty()
    }
    fn add_scaled(&mut self, other: &Self, c: &Gr) {
        if c.is_zero() {
            return;
        }
        for (k, v) in other {
            add_term(self, k.clone(), v, c);
        }
    }
}

/// `map[key] += c * value`, removing the entry if it cancels.
pub fn add_term<K: Ord, V: Linear>(map: &mut BTreeMap<K, V>, key: K, value: &V, c: &Gr) {
    if c.is_zero() || value.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            e.get_mut().add_scaled(value, c);
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(value.scaled(c));
        }
    }
}

/// Binomial coefficient as an exact scalar.
pub fn binomial(n: u32, k: u32) -> Gr {
    if k > n {
        return Gr::ZERO;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * u128::from(n - j) / u128::from(j + 1);
    }
    Gr::from(Rational::from(acc))
}

/// A polynomial in two commuting formal variables `x` and `y` with
/// coefficients in a vector space `V`.
///
/// In the Verma-module code `x` is λ and `y` is Θ (or μ = λ+Θ after
/// [`BiPoly::rebase`]).
#[derive(Clone, PartialEq)]
pub struct BiPoly<V> {
    terms: BTreeMap<(u32, u32), V>,
}

impl<V: Linear> Default for BiPoly<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: Linear> fmt::Debug for BiPoly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<V: Linear> BiPoly<V> {
    pub fn new() -> Self {
        BiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(x: u32, y: u32, value: V) -> Self {
        let mut p = Self::new();
        p.add_term(x, y, &value, &Gr::ONE);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, x: u32, y: u32, value: &V, c: &Gr) {
        add_term(&mut self.terms, (x, y), value, c);
    }

    pub fn coeff(&self, x: u32, y: u32) -> Option<&V> {
        self.terms.get(&(x, y))
    }

    pub fn coeff_or_zero(&self, x: u32, y: u32) -> V {
        self.terms.get(&(x, y)).cloned().unwrap_or_else(V::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &V)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<(u32, u32), V> {
        self.terms
    }

    pub fn from_terms(terms: BTreeMap<(u32, u32), V>) -> Self {
        let terms = terms.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        BiPoly { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest exponent of `x` (resp. `y`) that occurs, or `None` for zero.
    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(x, _)| x).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, y)| y).max()
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.add_scaled(other, &Gr::ONE);
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Gr) {
        for (&(x, y), v) in &other.terms {
            self.add_term(x, y, v, c);
        }
    }

    pub fn scaled(&self, c: &Gr) -> Self {
        let mut out = Self::new();
        out.add_scaled(self, c);
        out
    }

    /// Multiply by `x^a y^b`.
    pub fn shifted(&self, a: u32, b: u32) -> Self {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(x, y), v)| ((x + a, y + b), v.clone()))
                .collect(),
        }
    }

    /// Product with a scalar polynomial.
    pub fn mul_scalar_poly(&self, p: &BiPoly<Gr>) -> Self {
        let mut out = Self::new();
        for (&(x1, y1), c) in &p.terms {
            for (&(x2, y2), v) in &self.terms {
                out.add_term(x1 + x2, y1 + y2, v, c);
            }
        }
        out
    }

    /// Change of basis `y ↦ μ − x`: given `p(x, y)` returns `q(x, μ)` with
    /// `q(x, x + y) = p(x, y)`.
    pub fn rebase(&self) -> Self {
        self.substitute_y(-1)
    }

    /// Inverse of [`BiPoly::rebase`]: `μ ↦ x + y`.
    pub fn unrebase(&self) -> Self {
        self.substitute_y(1)
    }

    // y^b ↦ (y + s·x)^b for s = ±1
    fn substitute_y(&self, s: i64) -> Self {
        let mut out = Self::new();
        for (&(x, y), v) in &self.terms {
            for j in 0..=y {
                // (y + s x)^b = Σ_j C(b, j) s^j x^j y^(b-j)
                let c = &binomial(y, j) * &Gr::from(s.pow(j));
                out.add_term(x + j, y - j, v, &c);
            }
        }
        out
    }

    /// Partial derivative with respect to `x`.
    pub fn d_dx(&self) -> Self {
        let mut out = Self::new();
        for (&(x, y), v) in &self.terms {
            if x > 0 {
                out.add_term(x - 1, y, v, &Gr::from(i64::from(x)));
            }
        }
        out
    }

    /// Coefficient-wise linear map.
    pub fn map<W: Linear>(&self, mut f: impl FnMut(&V) -> W) -> BiPoly<W> {
        let mut out = BiPoly::new();
        for (&(x, y), v) in &self.terms {
            out.add_term(x, y, &f(v), &Gr::ONE);
        }
        out
    }

    /// Evaluate at scalar points, producing a vector.
    pub fn eval(&self, x: &Gr, y: &Gr) -> V {
        let mut out = V::zero();
        for (&(a, b), v) in &self.terms {
            let c = &x.pow(a) * &y.pow(b);
            out.add_scaled(v, &c);
        }
        out
    }
}

impl BiPoly<Gr> {
    pub fn mul(&self, other: &BiPoly<Gr>) -> BiPoly<Gr> {
        other.mul_scalar_poly(self)
    }

    pub fn constant(c: Gr) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `(x + y)^n` expanded.
    pub fn sum_power(n: u32) -> Self {
        let mut out = Self::new();
        for j in 0..=n {
            out.add_term(j, n - j, &binomial(n, j), &Gr::ONE);
        }
        out
    }
}

impl<V: Linear> Linear for BiPoly<V> {
    fn zero() -> Self {
        BiPoly::new()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_scaled(&mut self, other: &Self, c: &Gr) {
        BiPoly::add_scaled(self, other, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Gr {
        s.parse().unwrap()
    }

    #[test]
    fn unit_products() {
        assert_eq!(&Gr::ONE * &Gr::I, Gr::I);
        assert_eq!(&Gr::I * &Gr::I, -Gr::ONE);
    }

    #[test]
    fn inverse_of_one_plus_i() {
        let x = Gr::from_parts(1, 1, 1, 1);
        let inv = x.inv().unwrap();
        assert_eq!(inv, Gr::from_parts(1, 2, -1, 2));
        assert_eq!(&inv * &x, Gr::ONE);
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(matches!(Gr::ZERO.inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn canonical_components() {
        let x = Gr::from_parts(2, 4, -6, -8);
        assert_eq!(x.re().to_string(), "1/2");
        assert_eq!(x.im().to_string(), "3/4");
        let p = &x * &x.conj();
        assert!(p.is_real());
    }

    #[test]
    fn render_and_parse() {
        for (s, want) in [
            ("0", "0"),
            ("3", "3"),
            ("-3/6", "-1/2"),
            ("i", "i"),
            ("-i", "-i"),
            ("2*i", "2*i"),
            ("1/2 + 3/4*i", "1/2+3/4*i"),
            ("-1/2-i", "-1/2-i"),
            ("5 - 2/3 * i", "5-2/3*i"),
            ("+7", "7"),
        ] {
            assert_eq!(g(s).to_string(), want, "{s}");
            assert_eq!(g(want), g(s));
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "x", "1+2i", "1/2/3", "i*i", "--1", "1.5"] {
            assert!(s.parse::<Gr>().is_err(), "{s:?} accepted");
        }
    }

    #[test]
    fn rebase_examples() {
        // Θ → μ − λ
        let theta = BiPoly::constant(Gr::ONE).shifted(0, 1);
        let r = theta.rebase();
        assert_eq!(r.coeff(0, 1), Some(&Gr::ONE));
        assert_eq!(r.coeff(1, 0), Some(&-Gr::ONE));
        assert_eq!(r.len(), 2);
        // Θ² → μ² − 2λμ + λ²
        let r = BiPoly::constant(Gr::ONE).shifted(0, 2).rebase();
        assert_eq!(r.coeff(0, 2), Some(&Gr::ONE));
        assert_eq!(r.coeff(1, 1), Some(&Gr::from(-2)));
        assert_eq!(r.coeff(2, 0), Some(&Gr::ONE));
        // λΘ + Θ² at (2, 3) is 15; rebased form at (λ, μ) = (2, 5) agrees
        let mut p = BiPoly::constant(Gr::ONE).shifted(1, 1);
        p.add_assign(&BiPoly::constant(Gr::ONE).shifted(0, 2));
        assert_eq!(p.eval(&Gr::from(2), &Gr::from(3)), Gr::from(15));
        assert_eq!(p.rebase().eval(&Gr::from(2), &Gr::from(5)), Gr::from(15));
    }

    #[test]
    fn degrees_add_under_multiplication() {
        let p = BiPoly::sum_power(3).shifted(1, 0);
        let q = BiPoly::sum_power(2).shifted(0, 2);
        let pq = p.mul(&q);
        assert_eq!(pq.degree_x(), Some(6));
        assert_eq!(pq.degree_y(), Some(7));
    }

    #[test]
    fn sparse_maps_prune_zeros() {
        let mut m: BTreeMap<u8, Gr> = BTreeMap::new();
        add_term(&mut m, 1, &Gr::ONE, &Gr::ONE);
        add_term(&mut m, 1, &Gr::ONE, &-Gr::ONE);
        assert!(m.is_empty());
    }
}
