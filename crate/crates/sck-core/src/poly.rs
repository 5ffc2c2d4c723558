//! Coefficient fields and polynomials: finite k-linear combinations of
//! reduced words, with exact arithmetic and additive cancellation.
//!
//! Two fields are supported — ℚ (arbitrary-precision rationals) and GF(p)
//! for prime p — chosen per presentation by a [`FieldSpec`]. A [`Poly`] never
//! stores a zero coefficient, so the zero polynomial is the empty term map
//! and equality is term-map equality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::word::{Alphabet, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not a prime in 2..=2^31")]
    BadModulus(u64),
    #[error("scalar fields mixed: {0} vs {1}")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
}

/// The coefficient field of a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldSpec {
    /// The rationals ℚ.
    Rational,
    /// The prime field GF(p).
    Gf(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn gf(p: u64) -> Result<Self, FieldError> {
        if p > (1 << 31) || !is_prime(p) {
            return Err(FieldError::BadModulus(p));
        }
        Ok(FieldSpec::Gf(p))
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
            FieldSpec::Gf(p) => Scalar::Gf { value: 0, modulus: p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_integer(1)
    }

    /// Embeds an integer into the field.
    pub fn from_integer(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Gf(p) => Scalar::Gf { value: (n.rem_euclid(p as i64)) as u64, modulus: p },
        }
    }

    /// A reduced fraction in the field (`den` must be nonzero and, over
    /// GF(p), invertible).
    pub fn from_fraction(self, num: i64, den: i64) -> Result<Scalar, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        self.from_integer(num).div(&self.from_integer(den))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Gf(p) => write!(f, "GF({p})"),
        }
    }
}

/// An exact field element. Arithmetic between mismatched fields is a caller
/// bug and reported as [`FieldError::MixedFields`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Gf { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Gf { modulus, .. } => FieldSpec::Gf(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Gf { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Gf { value, .. } => *value == 1,
        }
    }

    fn check(&self, other: &Scalar) -> Result<(), FieldError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(FieldError::MixedFields(self.field(), other.field()))
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Gf { value: a, modulus }, Scalar::Gf { value: b, .. }) => {
                Scalar::Gf { value: (a + b) % modulus, modulus: *modulus }
            }
            _ => unreachable!("fields checked above"),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Gf { value, modulus } => {
                Scalar::Gf { value: (modulus - value) % modulus, modulus: *modulus }
            }
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Gf { value: a, modulus }, Scalar::Gf { value: b, .. }) => {
                // modulus ≤ 2^31, so the product fits in u64
                Scalar::Gf { value: a * b % modulus, modulus: *modulus }
            }
            _ => unreachable!("fields checked above"),
        })
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Gf { value, modulus } => {
                // Fermat: value^(p-2) mod p
                let mut base = *value;
                let mut exp = *modulus - 2;
                let mut acc: u64 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % modulus;
                    }
                    base = base * base % modulus;
                    exp >>= 1;
                }
                Scalar::Gf { value: acc, modulus: *modulus }
            }
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        self.mul(&other.inv()?)
    }

    /// Renders the scalar in presentation syntax (`-3/2`, `5`).
    pub fn display(&self) -> String {
        match self {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Gf { value, .. } => value.to_string(),
        }
    }
}

/// A polynomial: a finite k-linear combination of reduced words with no
/// explicit zero terms. Keys are held in deglex order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Word, Scalar>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    /// Builds from (word, coefficient) pairs, merging duplicates and
    /// dropping zeros.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (Word, Scalar)>,
    ) -> Result<Poly, FieldError> {
        let mut p = Poly::zero();
        for (w, c) in terms {
            p.add_term(w, c)?;
        }
        Ok(p)
    }

    pub fn monomial(word: Word, coeff: Scalar) -> Poly {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        Poly { terms }
    }

    fn add_term(&mut self, word: Word, coeff: Scalar) -> Result<(), FieldError> {
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&word) {
            None => {
                self.terms.insert(word, coeff);
            }
            Some(old) => {
                let merged = old.add(&coeff)?;
                if !merged.is_zero() {
                    self.terms.insert(word, merged);
                }
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending deglex order of the words.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    /// The monomials (words) of the polynomial, ascending deglex.
    pub fn monomials(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coeff(&self, word: &Word) -> Option<&Scalar> {
        self.terms.get(word)
    }

    /// The deglex-greatest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn max_monomial_len(&self) -> usize {
        self.monomials().map(Word::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, FieldError> {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Result<Poly, FieldError> {
        if c.is_zero() {
            return Ok(Poly::zero());
        }
        let mut terms = BTreeMap::new();
        for (w, old) in &self.terms {
            let merged = old.mul(c)?;
            // nonzero × nonzero is nonzero in a field
            terms.insert(w.clone(), merged);
        }
        Ok(Poly { terms })
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, FieldError> {
        self.add(&other.neg())
    }

    /// Multiplies every term's word by `w` on the given side (with free
    /// reduction), merging coefficients of collapsing words.
    pub fn word_mul(&self, w: &Word, side: Side) -> Result<Poly, FieldError> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let product = match side {
                Side::Left => w.mul(m).0,
                Side::Right => m.mul(w).0,
            };
            out.add_term(product, c.clone())?;
        }
        Ok(out)
    }

    /// Scales so the leading (deglex-greatest) coefficient is 1: the
    /// canonical representative of the polynomial's scalar-multiple class.
    pub fn canonicalize(&self) -> Result<Poly, FieldError> {
        match self.leading() {
            None => Ok(Poly::zero()),
            Some((_, c)) if c.is_one() => Ok(self.clone()),
            Some((_, c)) => self.scale(&c.inv()?),
        }
    }

    /// Renders in presentation syntax, terms in descending deglex order.
    pub fn display(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let (sign, magnitude) = match c {
                Scalar::Rational(r) if r.is_negative() => ("-", c.neg()),
                _ => ("+", c.clone()),
            };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            match (magnitude.is_one(), w.is_empty()) {
                (true, _) => out.push_str(&alphabet.format_word(w)),
                (false, true) => out.push_str(&magnitude.display()),
                (false, false) => {
                    out.push_str(&magnitude.display());
                    out.push('*');
                    out.push_str(&alphabet.format_word(w));
                }
            }
        }
        out
    }

    /// Parses presentation syntax: `±` separated terms, each `c*word`,
    /// `word`, or a bare scalar (`2*xyX + 3*z - 1`; fractions use
    /// `num/den`). A leading `-` negates the first term. Whitespace around
    /// operators is optional; `-` directly after `^` belongs to an exponent.
    pub fn parse(s: &str, alphabet: &Alphabet, field: FieldSpec) -> Result<Poly, ParsePolyError> {
        let col = |rest: &str| s.len() - rest.len() + 1;
        let fail = |rest: &str, kind: ParsePolyErrorKind| ParsePolyError { col: col(rest), kind };
        let mut rest = s.trim_start();
        if rest.is_empty() {
            return Err(fail(rest, ParsePolyErrorKind::Empty));
        }
        let mut out = Poly::zero();
        let mut first = true;
        while !rest.is_empty() {
            let mut negative = false;
            if let Some(tail) = rest.strip_prefix('-') {
                negative = true;
                rest = tail.trim_start();
            } else if let Some(tail) = rest.strip_prefix('+') {
                if first {
                    return Err(fail(rest, ParsePolyErrorKind::DanglingOperator));
                }
                rest = tail.trim_start();
            } else if !first {
                return Err(fail(rest, ParsePolyErrorKind::MissingOperator));
            }
            if rest.is_empty() || rest.starts_with(['+', '-']) {
                return Err(fail(rest, ParsePolyErrorKind::DanglingOperator));
            }
            // The term token runs to the next separator; a `-` right after
            // `^` is an exponent sign, not a separator.
            let mut term_end = rest.len();
            let mut prev = '\0';
            for (i, c) in rest.char_indices() {
                if c.is_whitespace() || (matches!(c, '+' | '-') && prev != '^') {
                    term_end = i;
                    break;
                }
                prev = c;
            }
            let (token, tail) = rest.split_at(term_end);
            let (word, coeff) = Self::parse_term(token, col(rest), alphabet, field)?;
            let signed = if negative { coeff.neg() } else { coeff };
            out.add_term(word, signed)
                .map_err(|e| fail(rest, ParsePolyErrorKind::Field(e)))?;
            first = false;
            rest = tail.trim_start();
        }
        Ok(out)
    }

    /// Parses one term token; `token_col` is its 1-based column in the
    /// surrounding polynomial text.
    fn parse_term(
        token: &str,
        token_col: usize,
        alphabet: &Alphabet,
        field: FieldSpec,
    ) -> Result<(Word, Scalar), ParsePolyError> {
        let scalar_of = |text: &str| -> Result<Scalar, ParsePolyError> {
            let bad = || ParsePolyError {
                col: token_col,
                kind: ParsePolyErrorKind::BadScalar(text.to_string()),
            };
            let (num, den) = match text.split_once('/') {
                None => (text, "1"),
                Some((n, d)) => (n, d),
            };
            let num: i64 = num.parse().map_err(|_| bad())?;
            let den: i64 = den.parse().map_err(|_| bad())?;
            field.from_fraction(num, den).map_err(|e| ParsePolyError {
                col: token_col,
                kind: ParsePolyErrorKind::Field(e),
            })
        };
        match token.split_once('*') {
            Some((coeff, word_text)) => {
                let scalar = scalar_of(coeff)?;
                let word_col = token_col + coeff.len() + 1;
                if word_text.contains('*') {
                    return Err(ParsePolyError {
                        col: word_col,
                        kind: ParsePolyErrorKind::BadScalar(token.to_string()),
                    });
                }
                let word = alphabet.parse_word(word_text).map_err(|e| ParsePolyError {
                    col: word_col + e.col - 1,
                    kind: ParsePolyErrorKind::Word(e.kind),
                })?;
                Ok((word, scalar))
            }
            None if token.chars().next().is_some_and(|c| c.is_ascii_digit()) => {
                // bare integer or fraction = constant term
                Ok((Word::empty(), scalar_of(token)?))
            }
            None => {
                let word = alphabet.parse_word(token).map_err(|e| ParsePolyError {
                    col: token_col + e.col - 1,
                    kind: ParsePolyErrorKind::Word(e.kind),
                })?;
                Ok((word, field.one()))
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("column {col}: {kind}")]
pub struct ParsePolyError {
    /// 1-based byte offset into the parsed string.
    pub col: usize,
    pub kind: ParsePolyErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParsePolyErrorKind {
    #[error("empty polynomial text")]
    Empty,
    #[error("operator without a term")]
    DanglingOperator,
    #[error("missing `+`/`-` between terms")]
    MissingOperator,
    #[error("malformed scalar `{0}`")]
    BadScalar(String),
    #[error(transparent)]
    Word(crate::word::ParseWordErrorKind),
    #[error(transparent)]
    Field(FieldError),
}

/// Which side a word multiplies a polynomial on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(3).unwrap()
    }

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn poly(s: &str) -> Poly {
        Poly::parse(s, &ab(), q()).unwrap()
    }

    #[test]
    fn additive_cancellation() {
        let p = poly("x + y");
        let q = poly("x");
        let diff = p.add(&q.scale(&FieldSpec::Rational.from_integer(-1)).unwrap()).unwrap();
        assert_eq!(diff, poly("y"));
    }

    #[test]
    fn char_two_doubling_vanishes() {
        let f = FieldSpec::gf(2).unwrap();
        let p = Poly::parse("x + y", &ab(), f).unwrap();
        assert!(p.add(&p).unwrap().is_zero());
        assert!(p.scale(&f.from_integer(2)).unwrap().is_zero());
    }

    #[test]
    fn self_minus_self_is_zero() {
        let p = poly("2*xyX + 3*z - 1");
        assert!(p.sub(&p).unwrap().is_zero());
    }

    #[test]
    fn word_mul_reduces_and_merges() {
        let a = ab();
        // x⁻¹ · (xy) = y
        let p = Poly::parse("xy", &a, q()).unwrap();
        let shifted = p.word_mul(&a.parse_word("X").unwrap(), Side::Left).unwrap();
        assert_eq!(shifted, poly("y"));
        // x⁻¹ · (xz + xy) = z + y: both terms transported
        let p = poly("xz + xy");
        let shifted = p.word_mul(&a.parse_word("X").unwrap(), Side::Left).unwrap();
        assert_eq!(shifted, poly("z + y"));
        // multiplication by a word permutes monomials, so term count is stable
        let p = poly("xy - y + 3*zz");
        let shifted = p.word_mul(&a.parse_word("Xz").unwrap(), Side::Right).unwrap();
        assert_eq!(shifted.term_count(), 3);
    }

    #[test]
    fn word_mul_roundtrip() {
        let a = ab();
        let p = poly("2*xyX + 3*z - 1");
        let w = a.parse_word("zY").unwrap();
        for side in Side::BOTH {
            let back = p
                .word_mul(&w, side)
                .unwrap()
                .word_mul(&w.inverse(), side)
                .unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn monomials_exclude_cancelled_words() {
        let p = poly("xy + z").sub(&poly("xy")).unwrap();
        let mons: Vec<_> = p.monomials().cloned().collect();
        assert_eq!(mons, vec![ab().parse_word("z").unwrap()]);
        assert!(Poly::zero().monomials().next().is_none());
    }

    #[test]
    fn leading_is_deglex_max() {
        let p = poly("x + zz + yy");
        let a = ab();
        // zz > yy in deglex (same length, z > y)
        assert_eq!(p.leading().unwrap().0, &a.parse_word("zz").unwrap());
        assert_eq!(p.max_monomial_len(), 2);
    }

    #[test]
    fn canonicalize_normalizes_leading_coeff() {
        let p = poly("2*xy + 4*z");
        let c = p.canonicalize().unwrap();
        assert_eq!(c, poly("xy + 2*z"));
        assert_eq!(c.canonicalize().unwrap(), c);
        // canonical forms of scalar multiples coincide
        let scaled = p.scale(&q().from_fraction(-7, 3).unwrap()).unwrap();
        assert_eq!(scaled.canonicalize().unwrap(), c);
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let a = ab();
        for text in ["2*xyX + 3*z - 1", "x - y", "-x + 3*y", "1/2*x - 2/3", "0 + x"] {
            let p = Poly::parse(text, &a, q()).unwrap();
            let shown = p.display(&a);
            assert_eq!(Poly::parse(&shown, &a, q()).unwrap(), p, "roundtrip of {text}");
        }
        assert_eq!(poly("2*xyX + 3*z - 1").display(&a), "2*xyX + 3*z - 1");
        assert_eq!(Poly::zero().display(&a), "0");
        assert_eq!(poly("x - 1").display(&a), "x - 1");
    }

    #[test]
    fn parse_errors() {
        let a = ab();
        let e = Poly::parse("x + + y", &a, q()).unwrap_err();
        assert_eq!(e.kind, ParsePolyErrorKind::DanglingOperator);
        let e = Poly::parse("x y", &a, q()).unwrap_err();
        assert_eq!(e.kind, ParsePolyErrorKind::MissingOperator);
        let e = Poly::parse("2x", &a, q()).unwrap_err();
        assert!(matches!(e.kind, ParsePolyErrorKind::BadScalar(_)));
        let e = Poly::parse("", &a, q()).unwrap_err();
        assert_eq!(e.kind, ParsePolyErrorKind::Empty);
        let e = Poly::parse("x + 1/0", &a, q()).unwrap_err();
        assert_eq!(e.kind, ParsePolyErrorKind::Field(FieldError::DivisionByZero));
    }

    #[test]
    fn gf_scalar_arithmetic() {
        let f = FieldSpec::gf(7).unwrap();
        let three = f.from_integer(3);
        let five = f.from_integer(5);
        assert_eq!(three.add(&five).unwrap(), f.from_integer(1));
        assert_eq!(three.mul(&five).unwrap(), f.from_integer(1));
        assert_eq!(three.inv().unwrap(), five);
        assert_eq!(f.from_integer(-1), f.from_integer(6));
        assert!(FieldSpec::gf(6).is_err());
        assert!(FieldSpec::gf(1).is_err());
        assert!(FieldSpec::gf((1 << 31) + 11).is_err());
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = FieldSpec::Rational.one();
        let b = FieldSpec::gf(5).unwrap().one();
        assert!(matches!(a.add(&b), Err(FieldError::MixedFields(_, _))));
    }
}
