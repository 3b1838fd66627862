//! The second homology lattice of the plane blown up at `k <= 8` points.
//!
//! A class is stored in the basis `L, E_1, .., E_k` with the coefficients as
//! written: `E_1` is `d = 0, m = [1, 0, ..]` and `3L - 2E_1` has `m_1 = -2`.
//! The intersection form is `L.L = 1`, `E_i.E_i = -1`, everything else zero,
//! so the pairing carries the minus signs.
//!
//! The tuple notation `(d; m_1, .., m_k)` used for curve classes means
//! `dL - sum m_i E_i`; see [`DivisorClass::from_tuple`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, parse_q, q, serde_q, serde_q_vec, Q};

/// Largest number of blow-ups handled anywhere in the crate.
pub const MAX_BLOWUPS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: classes on X_{0} and X_{1}")]
    DimensionMismatch(usize, usize),
    #[error("at most {MAX_BLOWUPS} blow-ups are supported, got {0}")]
    TooManyBlowups(usize),
    #[error("index E_{index} out of range for k = {k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("cannot parse class {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// A (possibly rational) class `d L + sum m_i E_i` in `H_2(X_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ClassJson", into = "ClassJson")]
pub struct DivisorClass {
    d: Q,
    m: Vec<Q>,
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    k: usize,
    #[serde(with = "serde_q")]
    d: Q,
    #[serde(with = "serde_q_vec")]
    m: Vec<Q>,
}

impl TryFrom<ClassJson> for DivisorClass {
    type Error = LatticeError;

    fn try_from(j: ClassJson) -> Result<Self, Self::Error> {
        if j.m.len() != j.k {
            return Err(LatticeError::DimensionMismatch(j.k, j.m.len()));
        }
        DivisorClass::try_new(j.d, j.m)
    }
}

impl From<DivisorClass> for ClassJson {
    fn from(c: DivisorClass) -> Self {
        ClassJson {
            k: c.k(),
            d: c.d,
            m: c.m,
        }
    }
}

impl DivisorClass {
    pub fn try_new(d: Q, m: Vec<Q>) -> Result<Self, LatticeError> {
        if m.len() > MAX_BLOWUPS {
            return Err(LatticeError::TooManyBlowups(m.len()));
        }
        Ok(Self { d, m })
    }

    /// Panics if `m.len() > 8`.
    pub fn new(d: Q, m: Vec<Q>) -> Self {
        Self::try_new(d, m).expect("class on X_k with k <= 8")
    }

    /// Integer coefficients as written: `from_ints(3, &[-2, -1])` is `3L - 2E_1 - E_2`.
    pub fn from_ints(d: i128, m: &[i128]) -> Self {
        Self::new(q(d), m.iter().map(|&x| q(x)).collect())
    }

    /// Curve-tuple notation: `(d; m_1, .., m_k)` is `dL - sum m_i E_i`.
    pub fn from_tuple(d: i128, m: &[i128]) -> Self {
        Self::new(q(d), m.iter().map(|&x| q(-x)).collect())
    }

    pub fn zero(k: usize) -> Self {
        Self::new(Q::zero(), vec![Q::zero(); k])
    }

    pub fn line(k: usize) -> Self {
        Self::new(q(1), vec![Q::zero(); k])
    }

    /// `E_i`, 1-based.
    pub fn exceptional(k: usize, i: usize) -> Result<Self, LatticeError> {
        if i == 0 || i > k {
            return Err(LatticeError::IndexOutOfRange { index: i, k });
        }
        let mut c = Self::zero(k);
        c.m[i - 1] = q(1);
        Ok(c)
    }

    /// `E_{i_1} + .. + E_{i_r}` for the given 1-based indices.
    pub fn e_sum(k: usize, indices: &[usize]) -> Result<Self, LatticeError> {
        let mut c = Self::zero(k);
        for &i in indices {
            if i == 0 || i > k {
                return Err(LatticeError::IndexOutOfRange { index: i, k });
            }
            c.m[i - 1] += q(1);
        }
        Ok(c)
    }

    /// `K = -3L + sum E_i`.
    pub fn canonical(k: usize) -> Self {
        Self::new(q(-3), vec![q(1); k])
    }

    /// `-K = 3L - sum E_i`.
    pub fn anticanonical(k: usize) -> Self {
        -Self::canonical(k)
    }

    /// Basis vector `0 -> L`, `i -> E_i`.
    pub fn basis(k: usize, index: usize) -> Self {
        if index == 0 {
            Self::line(k)
        } else {
            Self::exceptional(k, index).expect("basis index in range")
        }
    }

    pub fn k(&self) -> usize {
        self.m.len()
    }

    /// Coefficient of `L`.
    pub fn d(&self) -> &Q {
        &self.d
    }

    /// Coefficients of `E_1 .. E_k`, as written.
    pub fn m(&self) -> &[Q] {
        &self.m
    }

    /// Coefficient of `E_i`, 1-based.
    pub fn e(&self, i: usize) -> &Q {
        &self.m[i - 1]
    }

    /// `(d; m)` with `m_i` the negated coefficients, as in curve tuples.
    pub fn tuple_m(&self) -> Vec<Q> {
        self.m.iter().map(|x| -x).collect()
    }

    /// Coordinates `[d, m_1, .., m_k]`.
    pub fn coords(&self) -> Vec<Q> {
        std::iter::once(self.d).chain(self.m.iter().copied()).collect()
    }

    pub fn from_coords(c: &[Q]) -> Self {
        Self::new(c[0], c[1..].to_vec())
    }

    pub fn is_integral(&self) -> bool {
        self.d.is_integer() && self.m.iter().all(|x| x.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_zero() && self.m.iter().all(Q::is_zero)
    }

    fn check_k(&self, other: &Self) -> Result<(), LatticeError> {
        if self.k() != other.k() {
            Err(LatticeError::DimensionMismatch(self.k(), other.k()))
        } else {
            Ok(())
        }
    }

    /// `d d' - sum m_i m_i'`.
    pub fn intersect(&self, other: &Self) -> Result<Q, LatticeError> {
        self.check_k(other)?;
        Ok(self.dot(other))
    }

    fn dot(&self, other: &Self) -> Q {
        self.m
            .iter()
            .zip(&other.m)
            .fold(self.d * other.d, |acc, (a, b)| acc - a * b)
    }

    pub fn square(&self) -> Q {
        self.dot(self)
    }

    /// `c_1(A) = -K.A = 3d + sum m_i`.
    pub fn c1(&self) -> Q {
        self.m.iter().fold(q(3) * self.d, |acc, x| acc + x)
    }

    /// `K.A`.
    pub fn k_dot(&self) -> Q {
        -self.c1()
    }

    /// `(A.A + c_1(A)) / 2`, the number of point constraints a genus zero
    /// curve in class `A` can be made to satisfy.
    pub fn genus0_count(&self) -> Q {
        (self.square() + self.c1()) / q(2)
    }

    /// `A.A = -1` and `K.A = -1`.
    pub fn is_exceptional(&self) -> bool {
        self.is_integral() && self.square() == q(-1) && self.k_dot() == q(-1)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_k(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_k(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Q, Q) -> Q) -> Self {
        Self {
            d: f(self.d, other.d),
            m: self.m.iter().zip(&other.m).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn scale(&self, s: Q) -> Self {
        Self {
            d: self.d * s,
            m: self.m.iter().map(|x| x * s).collect(),
        }
    }

    /// If `self = c * other` for a rational `c`, returns `c`.
    pub fn ratio_to(&self, other: &Self) -> Option<Q> {
        if self.k() != other.k() || other.is_zero() {
            return None;
        }
        let pairs = self.coords().into_iter().zip(other.coords());
        let mut ratio: Option<Q> = None;
        for (a, b) in pairs {
            if b.is_zero() {
                if !a.is_zero() {
                    return None;
                }
                continue;
            }
            let r = a / b;
            match ratio {
                None => ratio = Some(r),
                Some(prev) if prev != r => return None,
                _ => {}
            }
        }
        ratio
    }

    /// Sorts each index block in decreasing order of the tuple coefficients.
    /// Blocks are given as 1-based inclusive ranges.
    pub fn sorted_blocks(&self, blocks: &[(usize, usize)]) -> Self {
        let mut out = self.clone();
        for &(lo, hi) in blocks {
            // tuple m = -coefficient, so decreasing tuple order is increasing raw order
            out.m[lo - 1..hi].sort();
        }
        out
    }

    /// Parses `"3L-2E1-E2-E3"`, `"L-E123"`, `"1/12(6L-2E123-3E4567)"`
    /// or the tuple form `"(3;2,1,1,0,0,0,0)"`. Without an explicit `k` the
    /// largest index mentioned fixes it.
    pub fn parse(input: &str, k: Option<usize>) -> Result<Self, LatticeError> {
        parse::parse_class(input, k)
    }

    /// Human-readable form, e.g. `3L-2E1-E2-E3`.
    pub fn to_notation(&self) -> String {
        self.to_string()
    }

    /// Tuple form `(d;m_1,..,m_k)` with `m` negated.
    pub fn to_tuple_string(&self) -> String {
        let ms: Vec<String> = self.tuple_m().iter().map(fmt_q).collect();
        format!("({};{})", fmt_q(&self.d), ms.join(","))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(Q, String)> = Vec::new();
        if !self.d.is_zero() {
            terms.push((self.d, "L".to_string()));
        }
        for (i, c) in self.m.iter().enumerate() {
            if !c.is_zero() {
                terms.push((*c, format!("E{}", i + 1)));
            }
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (c, sym)) in terms.iter().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else if n > 0 { "+" } else { "" };
            let coeff = if mag == q(1) {
                String::new()
            } else if mag.is_integer() {
                fmt_q(&mag)
            } else {
                format!("({})", fmt_q(&mag))
            };
            write!(f, "{sign}{coeff}{sym}")?;
        }
        Ok(())
    }
}

impl FromStr for DivisorClass {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, None)
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;

    fn add(self, rhs: Self) -> DivisorClass {
        self.try_add(rhs).expect("classes on the same X_k")
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;

    fn add(self, rhs: Self) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;

    fn sub(self, rhs: Self) -> DivisorClass {
        self.try_sub(rhs).expect("classes on the same X_k")
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;

    fn sub(self, rhs: Self) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;

    fn neg(self) -> DivisorClass {
        self.scale(q(-1))
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;

    fn neg(self) -> DivisorClass {
        self.scale(q(-1))
    }
}

impl Mul<&DivisorClass> for Q {
    type Output = DivisorClass;

    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl Mul<DivisorClass> for Q {
    type Output = DivisorClass;

    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

/// Inflation classes `A_7 = 15L - 5E_{123} - 6E_{4..7}` and
/// `A_8 = 33L - 11E_{123} - 12E_{4..8}`.
pub fn inflation_class(k: usize) -> Option<DivisorClass> {
    let (a, b) = match k {
        7 => (5, 6),
        8 => (11, 12),
        _ => return None,
    };
    let m: Vec<i128> = (1..=k).map(|i| if i <= 3 { a } else { b }).collect();
    Some(DivisorClass::from_tuple(3 * a, &m))
}

/// The unique rational class `X` on `X_k` with `X . c = v` for each
/// constraint `(c, v)`, if the constraints determine one.
pub fn class_with_pairings(k: usize, constraints: &[(DivisorClass, Q)]) -> Option<DivisorClass> {
    let rows: Vec<Vec<Q>> = constraints
        .iter()
        .map(|(c, _)| {
            std::iter::once(c.d)
                .chain(c.m.iter().map(|x| -x))
                .collect()
        })
        .collect();
    if rows.iter().any(|r| r.len() != k + 1) {
        return None;
    }
    let rhs: Vec<Q> = constraints.iter().map(|(_, v)| *v).collect();
    crate::linalg::solve_unique(&rows, &rhs).map(|x| DivisorClass::from_coords(&x))
}

/// Coordinates of `a` in the given basis, if `a` lies in its rational span
/// and the basis is independent.
pub fn coordinates_in(basis: &[DivisorClass], a: &DivisorClass) -> Option<Vec<Q>> {
    if basis.iter().any(|b| b.k() != a.k()) {
        return None;
    }
    let cols: Vec<Vec<Q>> = basis.iter().map(DivisorClass::coords).collect();
    let rows = crate::linalg::transpose(&cols);
    crate::linalg::solve_unique(&rows, &a.coords())
}

/// Gram matrix of the given classes.
pub fn gram_matrix(classes: &[DivisorClass]) -> Result<Vec<Vec<Q>>, LatticeError> {
    classes
        .iter()
        .map(|a| classes.iter().map(|b| a.intersect(b)).collect())
        .collect()
}

mod parse {
    use super::*;

    struct Term {
        coeff: Q,
        symbol: Symbol,
    }

    enum Symbol {
        Line,
        Exceptional(Vec<usize>),
        Group(Vec<Term>),
    }

    pub(super) fn parse_class(input: &str, k: Option<usize>) -> Result<DivisorClass, LatticeError> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason: &str| LatticeError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(err("empty input"));
        }
        if s.starts_with('(') && s.contains(';') {
            return parse_tuple(&s, k).map_err(|r| err(&r));
        }
        if s == "0" {
            return Ok(DivisorClass::zero(k.unwrap_or(0)));
        }
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let terms = p.sum().map_err(|r| err(&r))?;
        if p.pos != p.s.len() {
            return Err(err(&format!("unexpected character at offset {}", p.pos)));
        }
        let max_index = max_index(&terms);
        let k = match k {
            Some(k) if k < max_index => {
                return Err(LatticeError::IndexOutOfRange { index: max_index, k })
            }
            Some(k) => k,
            None => max_index,
        };
        if k > MAX_BLOWUPS {
            return Err(LatticeError::TooManyBlowups(k));
        }
        let mut out = DivisorClass::zero(k);
        accumulate(&terms, q(1), &mut out);
        Ok(out)
    }

    fn parse_tuple(s: &str, k: Option<usize>) -> Result<DivisorClass, String> {
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or("tuple must be parenthesised")?;
        let (d, rest) = inner.split_once(';').ok_or("tuple needs ';'")?;
        let d = parse_q(d).map_err(|e| e.to_string())?;
        let m: Vec<Q> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|x| parse_q(x).map(|v| -v).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?
        };
        if let Some(k) = k {
            if k != m.len() {
                return Err(format!("tuple has {} entries but k = {k}", m.len()));
            }
        }
        DivisorClass::try_new(d, m).map_err(|e| e.to_string())
    }

    fn max_index(terms: &[Term]) -> usize {
        terms
            .iter()
            .map(|t| match &t.symbol {
                Symbol::Line => 0,
                Symbol::Exceptional(ix) => ix.iter().copied().max().unwrap_or(0),
                Symbol::Group(inner) => max_index(inner),
            })
            .max()
            .unwrap_or(0)
    }

    fn accumulate(terms: &[Term], factor: Q, out: &mut DivisorClass) {
        for t in terms {
            let c = factor * t.coeff;
            match &t.symbol {
                Symbol::Line => out.d += c,
                Symbol::Exceptional(ix) => {
                    for &i in ix {
                        out.m[i - 1] += c;
                    }
                }
                Symbol::Group(inner) => accumulate(inner, c, out),
            }
        }
    }

    struct Parser<'a> {
        s: &'a [u8],
        pos: usize,
    }

    impl Parser<'_> {
        fn peek(&self) -> Option<u8> {
            self.s.get(self.pos).copied()
        }

        fn sum(&mut self) -> Result<Vec<Term>, String> {
            let mut terms = Vec::new();
            let mut first = true;
            loop {
                let sign = match self.peek() {
                    Some(b'+') => {
                        self.pos += 1;
                        q(1)
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        q(-1)
                    }
                    _ if first => q(1),
                    _ => break,
                };
                first = false;
                let mut t = self.term()?;
                t.coeff *= sign;
                terms.push(t);
            }
            Ok(terms)
        }

        fn term(&mut self) -> Result<Term, String> {
            let coeff = self.number()?.unwrap_or(q(1));
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
            let symbol = match self.peek() {
                Some(b'L') => {
                    self.pos += 1;
                    Symbol::Line
                }
                Some(b'E') => {
                    self.pos += 1;
                    Symbol::Exceptional(self.indices()?)
                }
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.sum()?;
                    if self.peek() != Some(b')') {
                        return Err("unbalanced parenthesis".into());
                    }
                    self.pos += 1;
                    Symbol::Group(inner)
                }
                _ => return Err(format!("expected L, E or '(' at offset {}", self.pos)),
            };
            Ok(Term { coeff, symbol })
        }

        fn number(&mut self) -> Result<Option<Q>, String> {
            // parenthesised coefficient such as "(1/2)L"
            if self.peek() == Some(b'(') {
                let rest = &self.s[self.pos + 1..];
                if let Some(close) = rest.iter().position(|&b| b == b')') {
                    let body = &rest[..close];
                    let numeric = !body.is_empty()
                        && body.iter().all(|b| matches!(b, b'0'..=b'9' | b'/' | b'-'));
                    if numeric {
                        let text = std::str::from_utf8(body).expect("ascii");
                        self.pos += close + 2;
                        return parse_q(text).map(Some).map_err(|e| e.to_string());
                    }
                }
                return Ok(None);
            }
            let start = self.pos;
            while matches!(self.peek(), Some(b'0'..=b'9' | b'/')) {
                self.pos += 1;
            }
            if start == self.pos {
                return Ok(None);
            }
            let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
            parse_q(text).map(Some).map_err(|e| e.to_string())
        }

        /// `E1`, `E123` (single-digit indices), `E_{123}`, `E_{4..8}`, `E{4..8}`.
        fn indices(&mut self) -> Result<Vec<usize>, String> {
            if self.peek() == Some(b'_') {
                self.pos += 1;
            }
            let braced = self.peek() == Some(b'{');
            if braced {
                self.pos += 1;
            }
            let start = self.pos;
            while matches!(self.peek(), Some(b'0'..=b'9' | b'.')) {
                self.pos += 1;
            }
            let body = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
            if braced {
                if self.peek() != Some(b'}') {
                    return Err("unterminated E_{..}".into());
                }
                self.pos += 1;
            }
            let digits = |t: &str| -> Result<Vec<usize>, String> {
                t.bytes()
                    .map(|b| match b {
                        b'1'..=b'9' => Ok((b - b'0') as usize),
                        _ => Err(format!("bad exceptional index in {body:?}")),
                    })
                    .collect()
            };
            let out = if let Some((lo, hi)) = body.split_once("..") {
                let lo: usize = lo.parse().map_err(|_| format!("bad range {body:?}"))?;
                let hi: usize = hi.parse().map_err(|_| format!("bad range {body:?}"))?;
                if lo == 0 || lo > hi {
                    return Err(format!("bad range {body:?}"));
                }
                (lo..=hi).collect()
            } else {
                digits(body)?
            };
            if out.is_empty() {
                return Err("E needs an index".into());
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn c(s: &str) -> DivisorClass {
        s.parse().unwrap()
    }

    fn ck(s: &str, k: usize) -> DivisorClass {
        DivisorClass::parse(s, Some(k)).unwrap()
    }

    #[test]
    fn basic_pairings() {
        let l = DivisorClass::line(2);
        let e1 = DivisorClass::exceptional(2, 1).unwrap();
        let e2 = DivisorClass::exceptional(2, 2).unwrap();
        assert_eq!(l.intersect(&l).unwrap(), q(1));
        assert_eq!(e1.intersect(&e2).unwrap(), q(0));
        assert_eq!(e1.intersect(&e1).unwrap(), q(-1));
        assert_eq!(l.intersect(&e1).unwrap(), q(0));
        let hat_l = ck("8L-3E1234567", 7);
        assert_eq!(hat_l.square(), q(1));
    }

    #[test]
    fn mismatched_k_is_rejected() {
        let a = DivisorClass::line(3);
        let b = DivisorClass::line(4);
        assert_eq!(a.intersect(&b), Err(LatticeError::DimensionMismatch(3, 4)));
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn chern_numbers() {
        assert_eq!(ck("E1", 7).c1(), q(1));
        assert_eq!(DivisorClass::anticanonical(7).c1(), q(2));
        assert_eq!(ck("3L-2E1-E234567", 7).c1(), q(1));
    }

    #[test]
    fn genus_zero_counts() {
        assert_eq!(inflation_class(7).unwrap().genus0_count(), q(6));
        assert_eq!(inflation_class(8).unwrap().genus0_count(), q(6));
        assert_eq!(ck("E1", 1).genus0_count(), q(0));
        assert!(inflation_class(6).is_none());
    }

    #[test]
    fn inflation_classes_have_positive_square() {
        for k in [7, 8] {
            let a = inflation_class(k).unwrap();
            assert!(a.square() > q(0), "A_{k}^2 = {}", a.square());
        }
        assert_eq!(inflation_class(7).unwrap(), ck("15L-5E123-6E4567", 7));
        assert_eq!(inflation_class(8).unwrap(), ck("33L-11E123-12E45678", 8));
    }

    #[test]
    fn the_printed_inflation_classes_are_not_usable() {
        // 5(L - E_123) - 6E_{4..7} as literally printed has negative square.
        let literal = ck("5L-5E123-6E4567", 7);
        assert!(literal.square() < q(0));
    }

    #[test]
    fn exceptional_predicate() {
        assert!(ck("E3", 8).is_exceptional());
        assert!(ck("6L-3E1-2E2345678", 8).is_exceptional());
        assert!(!ck("L-E123", 3).is_exceptional());
        assert_eq!(ck("L-E123", 3).square(), q(-2));
        assert_eq!(ck("L-E123", 3).c1(), q(0));
    }

    #[test]
    fn canonical_class() {
        for k in 0..=8 {
            let kk = DivisorClass::canonical(k);
            assert_eq!(kk.square(), q(9 - k as i128));
            assert_eq!(kk.intersect(&DivisorClass::line(k)).unwrap(), q(-3));
            for i in 1..=k {
                let e = DivisorClass::exceptional(k, i).unwrap();
                assert_eq!(kk.intersect(&e).unwrap(), q(-1));
            }
        }
    }

    #[test]
    fn signature_of_basis() {
        for k in 0..=8 {
            let basis: Vec<_> = (0..=k).map(|i| DivisorClass::basis(k, i)).collect();
            let g = gram_matrix(&basis).unwrap();
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = match (i, j) {
                        (0, 0) => q(1),
                        (a, b) if a == b => q(-1),
                        _ => q(0),
                    };
                    assert_eq!(*v, want);
                }
            }
        }
    }

    #[test]
    fn parsing_forms() {
        assert_eq!(c("3L-2E1-E2-E3"), DivisorClass::from_ints(3, &[-2, -1, -1]));
        assert_eq!(c("L-E123"), DivisorClass::from_ints(1, &[-1, -1, -1]));
        assert_eq!(c("L-E_{123}"), c("L-E123"));
        assert_eq!(c("2L-E_{1..5}"), c("2L-E12345"));
        assert_eq!(
            c("(3;2,1,1,0,0,0,0)"),
            DivisorClass::from_ints(3, &[-2, -1, -1, 0, 0, 0, 0])
        );
        assert_eq!(ck("E1", 7).k(), 7);
        let eps = c("1/12(6L-2E123-3E4567)");
        assert_eq!(*eps.d(), frac(1, 2));
        assert_eq!(*eps.e(4), frac(-1, 4));
        assert_eq!(c("-E2+E1"), DivisorClass::from_ints(0, &[1, -1]));
        assert!(DivisorClass::parse("E9", None).is_err());
        assert!(DivisorClass::parse("E5", Some(3)).is_err());
        assert!(DivisorClass::parse("3X", None).is_err());
        assert!(DivisorClass::parse("(1;1,1)", Some(3)).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["3L-2E1-E2-E3", "E1", "-L+E2", "0", "(1/2)L-(1/6)E1"] {
            let cls = DivisorClass::parse(s, Some(3)).unwrap();
            let back = DivisorClass::parse(&cls.to_string(), Some(3)).unwrap();
            assert_eq!(cls, back);
        }
        assert_eq!(c("3L-2E1-E2-E3").to_string(), "3L-2E1-E2-E3");
        assert_eq!(c("(4;2,2,2,1)").to_tuple_string(), "(4;2,2,2,1)");
    }

    #[test]
    fn json_encoding() {
        let cls = c("1/12(6L-2E123-3E4567)");
        let j = serde_json::to_string(&cls).unwrap();
        assert_eq!(
            j,
            r#"{"k":7,"d":"1/2","m":["-1/6","-1/6","-1/6","-1/4","-1/4","-1/4","-1/4"]}"#
        );
        let back: DivisorClass = serde_json::from_str(&j).unwrap();
        assert_eq!(back, cls);
        let ints: DivisorClass = serde_json::from_str(r#"{"k":2,"d":1,"m":[-1,"-1"]}"#).unwrap();
        assert_eq!(ints, c("L-E12"));
        assert!(serde_json::from_str::<DivisorClass>(r#"{"k":3,"d":1,"m":[0]}"#).is_err());
    }

    #[test]
    fn ratio_detection() {
        let k = DivisorClass::canonical(7);
        assert_eq!(ck("9L-3E1234567", 7).ratio_to(&k), Some(q(-3)));
        assert_eq!(ck("L", 7).ratio_to(&k), None);
    }
}
