//! Exact multivariate polynomials and polynomial maps.
//!
//! Coefficients are arbitrary precision rationals. Terms are kept in a
//! `BTreeMap` keyed by [`Monomial`], whose ordering is graded lexicographic,
//! so printing and hashing are deterministic.
//!
//! Text grammar (whitespace is ignored, maps are `;`-separated):
//!
//! ```text
//! map    := expr (';' expr)*
//! expr   := ('+'|'-')? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := rational | var ('^' uint)? | '(' expr ')' ('^' uint)?
//! rational := uint ('/' uint)?
//! var    := 'x' uint            (1-based, at most n)
//! ```
//!
//! Multiplication must be written out: `2x1` is rejected.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::FromRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} at byte {pos} exceeds the dimension n = {n}")]
    VariableOutOfRange { index: usize, n: usize, pos: usize },
    #[error("negative exponent at byte {pos}")]
    NegativeExponent { pos: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("a polynomial map needs at least one nonzero component")]
    ZeroMap,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("coefficient cannot be represented in the evaluation domain")]
    Unrepresentable,
}

/// An exponent multi-index α.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn as_rational_point(&self) -> Vec<BigRational> {
        self.0
            .iter()
            .map(|&e| BigRational::from_integer(BigInt::from(e)))
            .collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `dim` variables with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: BigRational) -> Self {
        Self::from_terms(dim, [(Monomial::one(dim), c)])
    }

    pub fn variable(dim: usize, index: usize) -> Self {
        let mut e = vec![0; dim];
        e[index] = 1;
        Self::from_terms(dim, [(Monomial(e), BigRational::one())])
    }

    /// Builds a polynomial, merging like terms and dropping zeros.
    ///
    /// Panics if a monomial has the wrong length.
    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = Polynomial::zero(dim);
        for (m, c) in terms {
            assert_eq!(m.dim(), dim, "monomial dimension");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
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

    /// Terms in increasing graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The exponents with nonzero coefficient.
    pub fn support(&self) -> BTreeSet<Monomial> {
        self.terms.keys().cloned().collect()
    }

    pub fn degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Keeps only the terms whose exponent satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_dim(other.dim)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_dim(other.dim)?;
        let mut out = Polynomial::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.dim, BigRational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn check_dim(&self, got: usize) -> Result<(), PolyError> {
        if got != self.dim {
            return Err(PolyError::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }

    /// Evaluates at a point: exactly for rational domains, in floating point for floats.
    pub fn evaluate<T>(&self, x: &[T]) -> Result<T, PolyError>
    where
        T: FromRational + Clone + num_traits::Num,
    {
        self.check_dim(x.len())?;
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut term = T::from_rational(c).ok_or(PolyError::Unrepresentable)?;
            for (xi, &e) in x.iter().zip(m.exponents()) {
                if e > 0 {
                    term = term * num_traits::pow(xi.clone(), e as usize);
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Parses a single polynomial over x1..xn.
    pub fn parse(text: &str, n: usize) -> Result<Polynomial, PolyError> {
        if n == 0 {
            return Err(PolyError::ZeroDimension);
        }
        let mut p = Parser::new(text, n);
        let poly = p.expr()?;
        p.skip_ws();
        if let Some(c) = p.peek() {
            return Err(p.syntax(format!("unexpected '{c}'")));
        }
        Ok(poly)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial dimensions differ")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial dimensions differ")
    }
}

/// Canonical printer: highest graded-lex term first, explicit `*` and `^`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let vars: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| {
                    if e == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{}", j + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A polynomial map f = (f_1, ..., f_m) from R^n to R^m.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolynomialMap {
    dim: usize,
    components: Vec<Polynomial>,
}

impl PolynomialMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self, PolyError> {
        let dim = components.first().ok_or(PolyError::ZeroMap)?.dim();
        if dim == 0 {
            return Err(PolyError::ZeroDimension);
        }
        for c in &components {
            if c.dim() != dim {
                return Err(PolyError::DimensionMismatch {
                    expected: dim,
                    got: c.dim(),
                });
            }
        }
        if components.iter().all(Polynomial::is_zero) {
            return Err(PolyError::ZeroMap);
        }
        Ok(PolynomialMap { dim, components })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// Union of the component supports.
    pub fn support(&self) -> BTreeSet<Monomial> {
        self.components.iter().flat_map(|p| p.support()).collect()
    }

    pub fn degree(&self) -> u64 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Parses a `;`-separated list of polynomials over x1..xn.
    pub fn parse(text: &str, n: usize) -> Result<PolynomialMap, PolyError> {
        if n == 0 {
            return Err(PolyError::ZeroDimension);
        }
        let mut components = Vec::new();
        let mut offset = 0;
        for piece in text.split(';') {
            let poly = Polynomial::parse(piece, n).map_err(|e| shift_error(e, offset))?;
            components.push(poly);
            offset += piece.len() + 1;
        }
        PolynomialMap::new(components)
    }

    pub fn scale_components(&self, k: &BigRational) -> PolynomialMap {
        PolynomialMap {
            dim: self.dim,
            components: self.components.iter().map(|p| p.scale(k)).collect(),
        }
    }
}

impl fmt::Display for PolynomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

fn shift_error(e: PolyError, offset: usize) -> PolyError {
    match e {
        PolyError::Syntax { pos, msg } => PolyError::Syntax { pos: pos + offset, msg },
        PolyError::VariableOutOfRange { index, n, pos } => PolyError::VariableOutOfRange {
            index,
            n,
            pos: pos + offset,
        },
        PolyError::NegativeExponent { pos } => PolyError::NegativeExponent { pos: pos + offset },
        other => other,
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, n: usize) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            n,
        }
    }

    fn syntax(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.pos).map(|&b| b as char)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::zero(self.n);
        let mut negate = false;
        if self.eat('-') {
            negate = true;
        } else {
            self.eat('+');
        }
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let mut value = BigRational::from_integer(num);
                if self.eat('/') {
                    if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(self.syntax("expected denominator"));
                    }
                    let den = self.uint()?;
                    if den.is_zero() {
                        return Err(self.syntax("zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                // the next token must not start a factor without an explicit '*'
                if matches!(self.peek(), Some('x') | Some('(')) {
                    return Err(self.syntax("implicit multiplication; write '*'"));
                }
                Ok(Polynomial::constant(self.n, value))
            }
            Some('x') => {
                let start = self.pos;
                self.pos += 1;
                if !self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                    return Err(self.syntax("expected variable index after 'x'"));
                }
                let index = self.small_uint()?;
                if index == 0 || index > self.n {
                    return Err(PolyError::VariableOutOfRange {
                        index,
                        n: self.n,
                        pos: start,
                    });
                }
                let base = Polynomial::variable(self.n, index - 1);
                self.power(base)
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.power(inner)
            }
            Some(c) => Err(self.syntax(format!("unexpected '{c}'"))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn power(&mut self, base: Polynomial) -> Result<Polynomial, PolyError> {
        if !self.eat('^') {
            if self.peek().is_some_and(|c| c.is_ascii_digit() || c == 'x') {
                return Err(self.syntax("implicit multiplication; write '*'"));
            }
            return Ok(base);
        }
        match self.peek() {
            Some('-') => Err(PolyError::NegativeExponent { pos: self.pos }),
            Some(c) if c.is_ascii_digit() => {
                let e = self.small_uint()?;
                let e = u32::try_from(e).map_err(|_| self.syntax("exponent too large"))?;
                Ok(base.pow(e))
            }
            _ => Err(self.syntax("expected exponent")),
        }
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse::<BigInt>().map_err(|_| PolyError::Syntax {
            pos: start,
            msg: "expected integer".into(),
        })
    }

    fn small_uint(&mut self) -> Result<usize, PolyError> {
        let start = self.pos;
        let v = self.uint()?;
        usize::try_from(v).map_err(|_| PolyError::Syntax {
            pos: start,
            msg: "integer too large".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{big, frac};

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn parse_sum_of_squares() {
        let f = PolynomialMap::parse("x1^2 + x2^2", 2).unwrap();
        assert_eq!(f.len(), 1);
        let p = &f.components()[0];
        assert_eq!(p.coefficient(&mono(&[2, 0])), big(1));
        assert_eq!(p.coefficient(&mono(&[0, 2])), big(1));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn parse_two_components() {
        let f = PolynomialMap::parse("x1*x2; x1^2", 2).unwrap();
        assert_eq!(f.components()[0].support(), [mono(&[1, 1])].into());
        assert_eq!(f.components()[1].support(), [mono(&[2, 0])].into());
    }

    #[test]
    fn parse_cancellation() {
        let f = PolynomialMap::parse("x1^2 - x1^2 + x2", 2).unwrap();
        let p = &f.components()[0];
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&mono(&[0, 1])), big(1));
    }

    #[test]
    fn parse_rationals_and_signs() {
        let p = Polynomial::parse("-3/4*x1 + 2 - x2^3", 2).unwrap();
        assert_eq!(p.coefficient(&mono(&[1, 0])), frac(-3, 4));
        assert_eq!(p.coefficient(&mono(&[0, 0])), big(2));
        assert_eq!(p.coefficient(&mono(&[0, 3])), big(-1));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Polynomial::parse("x3 + x1", 2),
            Err(PolyError::VariableOutOfRange { index: 3, n: 2, pos: 0 })
        ));
        assert!(matches!(
            Polynomial::parse("x1^-2", 2),
            Err(PolyError::NegativeExponent { pos: 3 })
        ));
        assert!(matches!(Polynomial::parse("2x1", 2), Err(PolyError::Syntax { .. })));
        assert!(matches!(Polynomial::parse("x1 +", 2), Err(PolyError::Syntax { .. })));
        assert!(matches!(
            Polynomial::parse("x0", 2),
            Err(PolyError::VariableOutOfRange { .. })
        ));
        assert!(matches!(
            PolynomialMap::parse("x1; x2 $", 2),
            Err(PolyError::Syntax { pos: 7, .. })
        ));
        assert!(matches!(PolynomialMap::parse("x1 - x1", 2), Err(PolyError::ZeroMap)));
    }

    #[test]
    fn supports() {
        let p = Polynomial::parse("x1^2 + x2^2", 2).unwrap();
        assert_eq!(p.support(), [mono(&[2, 0]), mono(&[0, 2])].into());
        assert!(Polynomial::zero(2).support().is_empty());
        let q = Polynomial::parse("3*x1*x2^2 - x1^3", 2).unwrap();
        assert_eq!(q.support(), [mono(&[1, 2]), mono(&[3, 0])].into());
    }

    #[test]
    fn evaluation() {
        let p = Polynomial::parse("x1^2 + x2^2", 2).unwrap();
        assert_eq!(p.evaluate(&[big(1), big(1)]).unwrap(), big(2));
        let q = Polynomial::parse("x1^2 - x2^2", 2).unwrap();
        assert_eq!(q.evaluate(&[big(1), big(1)]).unwrap(), big(0));
        let r = Polynomial::parse("x1*x2", 2).unwrap();
        assert_eq!(r.evaluate(&[big(3), big(4)]).unwrap(), big(12));
        assert_eq!(r.evaluate(&[3.0f64, 4.0]).unwrap(), 12.0);
        assert!(matches!(
            r.evaluate(&[1.0f64]),
            Err(PolyError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn arithmetic() {
        let a = Polynomial::parse("x1 + x2", 2).unwrap();
        let b = Polynomial::parse("x1 - x2", 2).unwrap();
        assert_eq!(&a * &b, Polynomial::parse("x1^2 - x2^2", 2).unwrap());
        assert!((&a * &Polynomial::zero(2)).is_zero());
        assert_eq!(a.pow(2), Polynomial::parse("x1^2 + 2*x1*x2 + x2^2", 2).unwrap());
        assert!(a.checked_mul(&Polynomial::zero(3)).is_err());
        assert!(a.checked_add(&Polynomial::zero(1)).is_err());
    }

    #[test]
    fn canonical_printing() {
        let p = Polynomial::parse("x2^2 + 1 - 3/2*x1*x2 + x1^2", 2).unwrap();
        assert_eq!(p.to_string(), "x1^2 - 3/2*x1*x2 + x2^2 + 1");
        let q = Polynomial::parse("-x1", 1).unwrap();
        assert_eq!(q.to_string(), "-x1");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
    }

    #[test]
    fn parenthesised_powers() {
        let p = Polynomial::parse("(x1 + x2)^2 - 2*x1*x2", 2).unwrap();
        assert_eq!(p, Polynomial::parse("x1^2 + x2^2", 2).unwrap());
    }
}
