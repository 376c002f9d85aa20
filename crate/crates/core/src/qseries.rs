//! Truncated Laurent series in `q` with arbitrary-precision integer coefficients.
//!
//! A [`QSeries`] knows every coefficient up to and including its truncation
//! order and nothing above it. Arithmetic always reports the order that is
//! actually guaranteed by the inputs, so truncation never silently widens.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static ZERO: BigInt = BigInt::ZERO;

/// A truncated Laurent series `sum c_e q^e` with all `e <= order` known.
///
/// Stored densely from `low` upward. The representation is kept normalized:
/// the first and last stored coefficients are nonzero, and a series with no
/// nonzero known terms has no stored coefficients and `low == order + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    low: i64,
    coeffs: Vec<BigInt>,
    order: i64,
}

/// First exponent at which two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: i64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl QSeries {
    /// Builds `sum coeffs[i] q^(low + i)`, known up to `order`. Coefficients
    /// beyond `order` are dropped.
    pub fn new(low: i64, coeffs: Vec<BigInt>, order: i64) -> Self {
        let mut s = QSeries { low, coeffs, order };
        s.normalize();
        s
    }

    /// Builds a power series from coefficients of `q^0, q^1, ...`.
    pub fn from_coeffs<I, C>(coeffs: I, order: i64) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        Self::new(0, coeffs.into_iter().map(Into::into).collect(), order)
    }

    /// The series known to vanish through `order`.
    pub fn zero(order: i64) -> Self {
        QSeries { low: order + 1, coeffs: Vec::new(), order }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(BigInt::one(), 0, order)
    }

    /// `c q^e`, known through `order`.
    pub fn monomial(c: impl Into<BigInt>, e: i64, order: i64) -> Self {
        Self::new(e, vec![c.into()], order)
    }

    fn normalize(&mut self) {
        let keep = (self.order - self.low + 1).max(0);
        if (self.coeffs.len() as i64) > keep {
            self.coeffs.truncate(keep as usize);
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = self.order + 1;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
    }

    /// Truncation order: every exponent `<= order` is known.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Lowest exponent with a nonzero coefficient, or `order + 1` when none is known.
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Lowest exponent carrying a nonzero coefficient.
    pub fn leading_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    /// True when no known coefficient is nonzero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^e`, or `None` when `e` lies above the truncation order.
    pub fn coeff(&self, e: i64) -> Option<&BigInt> {
        if e > self.order {
            return None;
        }
        Some(self.coeff_unchecked(e))
    }

    /// Coefficient of `q^e` without the truncation check; exponents outside
    /// the stored range read as zero.
    pub(crate) fn coeff_unchecked(&self, e: i64) -> &BigInt {
        let idx = e - self.low;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            &ZERO
        } else {
            &self.coeffs[idx as usize]
        }
    }

    /// Nonzero terms `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Dense coefficients from `low` to the last nonzero term.
    pub fn stored_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Lowers the truncation order; never raises it.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        Self::new(self.low, self.coeffs.clone(), order)
    }

    /// Multiplies by `q^d`.
    pub fn shift(&self, d: i64) -> Self {
        QSeries { low: self.low + d, coeffs: self.coeffs.clone(), order: self.order + d }
    }

    /// Substitutes `q -> q^h`. The result is known through `h * order`.
    pub fn scale_exponents(&self, h: i64) -> Self {
        assert!(h >= 1, "exponent scale must be positive, got {h}");
        if h == 1 || self.coeffs.is_empty() {
            return QSeries {
                low: if self.coeffs.is_empty() { h * self.order + 1 } else { self.low },
                coeffs: self.coeffs.clone(),
                order: h * self.order,
            };
        }
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * h as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * h as usize] = c.clone();
        }
        Self::new(h * self.low, coeffs, h * self.order)
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Self {
        let order = self.order.min(other.order);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return Self::zero(order);
        }
        let low = self.low.min(other.low);
        let high = (self.low + self.coeffs.len() as i64)
            .max(other.low + other.coeffs.len() as i64)
            .min(order + 1);
        let mut coeffs = Vec::with_capacity((high - low).max(0) as usize);
        for e in low..high {
            let b = other.coeff_unchecked(e);
            let c = if negate_other {
                self.coeff_unchecked(e) - b
            } else {
                self.coeff_unchecked(e) + b
            };
            coeffs.push(c);
        }
        Self::new(low, coeffs, order)
    }

    /// Cauchy product. Known through `min(N_s + low_t, N_t + low_s)`.
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.low).min(other.order + self.low);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(order);
        }
        let low = self.low + other.low;
        let len = ((order - low + 1).max(0) as usize)
            .min(self.coeffs.len() + other.coeffs.len() - 1);
        let mut coeffs = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::new(low, coeffs, order)
    }

    /// Multiplicative inverse. Requires the lowest nonzero coefficient to be
    /// `+1` or `-1`; the result starts at `-low` and is known through
    /// `order - 2 * low`.
    pub fn invert(&self) -> Result<Self> {
        let Some(lead) = self.coeffs.first() else {
            return Err(Error::EmptySeries);
        };
        if !lead.abs().is_one() {
            return Err(Error::NotAUnit(lead.to_string()));
        }
        let sign = lead.clone();
        let len = (self.order - self.low + 1) as usize;
        let mut inv: Vec<BigInt> = Vec::with_capacity(len);
        inv.push(sign.clone());
        for m in 1..len {
            let mut acc = BigInt::zero();
            for j in 1..=m.min(self.coeffs.len() - 1) {
                let u = &self.coeffs[j];
                if !u.is_zero() {
                    acc += u * &inv[m - j];
                }
            }
            inv.push(-(&sign * acc));
        }
        Ok(Self::new(-self.low, inv, self.order - 2 * self.low))
    }

    /// Compares coefficients at every exponent `<= up_to`.
    ///
    /// # Panics
    /// If either series is not known through `up_to`.
    pub fn first_difference(&self, other: &Self, up_to: i64) -> Option<Mismatch> {
        assert!(
            up_to <= self.order && up_to <= other.order,
            "comparison order {up_to} exceeds known terms ({}, {})",
            self.order,
            other.order
        );
        let start = self.low.min(other.low);
        (start..=up_to).find_map(|e| {
            let (a, b) = (self.coeff_unchecked(e), other.coeff_unchecked(e));
            (a != b).then(|| Mismatch { exponent: e, lhs: a.clone(), rhs: b.clone() })
        })
    }

    /// Equality through the common truncation order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other, self.order.min(other.order)).is_none()
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.combine(rhs, false)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.combine(rhs, true)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: QSeries) -> QSeries { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                _ if unit && e == 1 => f.write_str("q")?,
                _ if unit => write!(f, "q^{e}")?,
                1 => write!(f, "{mag}q")?,
                _ => write!(f, "{mag}q^{e}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

/// One factor `prod_{j >= 1} (1 - q^(step*j + offset))^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    #[serde(rename = "a")]
    pub step: i64,
    #[serde(rename = "b")]
    pub offset: i64,
    #[serde(rename = "e")]
    pub exponent: i64,
}

impl Factor {
    pub fn new(step: i64, offset: i64, exponent: i64) -> Result<Self> {
        let f = Factor { step, offset, exponent };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let bad = |reason| Error::InvalidFactor {
            step: self.step,
            offset: self.offset,
            exponent: self.exponent,
            reason,
        };
        if self.step < 1 {
            return Err(bad("step a must be at least 1"));
        }
        if self.step + self.offset < 1 {
            return Err(bad("smallest exponent a+b must be at least 1"));
        }
        if self.exponent == 0 {
            return Err(bad("exponent e must be nonzero"));
        }
        Ok(())
    }
}

/// A formal infinite product of [`Factor`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Factor>", into = "Vec<Factor>")]
pub struct ProductSpec {
    factors: Vec<Factor>,
}

impl ProductSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            f.validate()?;
        }
        Ok(ProductSpec { factors })
    }

    /// Convenience constructor from `(a, b, e)` triples.
    pub fn from_triples(triples: &[(i64, i64, i64)]) -> Result<Self> {
        Self::new(
            triples
                .iter()
                .map(|&(step, offset, exponent)| Factor { step, offset, exponent })
                .collect(),
        )
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn triples(&self) -> Vec<(i64, i64, i64)> {
        self.factors.iter().map(|f| (f.step, f.offset, f.exponent)).collect()
    }

    /// Expands the product through `q^order`.
    ///
    /// Positive and negative powers are expanded separately; the denominator
    /// is then inverted and multiplied in.
    pub fn expand(&self, order: i64) -> Result<QSeries> {
        if order < 0 {
            return Err(Error::NegativeOrder(order));
        }
        let len = order as usize + 1;
        let mut num = vec![BigInt::zero(); len];
        let mut den = vec![BigInt::zero(); len];
        num[0] = BigInt::one();
        den[0] = BigInt::one();
        for f in &self.factors {
            let target = if f.exponent > 0 { &mut num } else { &mut den };
            let mut j = 1;
            loop {
                let d = f.step * j + f.offset;
                if d > order {
                    break;
                }
                for _ in 0..f.exponent.abs() {
                    times_one_minus_q_pow(target, d as usize);
                }
                j += 1;
            }
        }
        let num = QSeries::new(0, num, order);
        let den = QSeries::new(0, den, order);
        let inv = den.invert().expect("product denominator has constant term 1");
        Ok(QSeries::mul(&num, &inv))
    }
}

impl TryFrom<Vec<Factor>> for ProductSpec {
    type Error = Error;
    fn try_from(factors: Vec<Factor>) -> Result<Self> {
        ProductSpec::new(factors)
    }
}

impl From<ProductSpec> for Vec<Factor> {
    fn from(p: ProductSpec) -> Self {
        p.factors
    }
}

/// In-place multiplication of a dense power series by `(1 - q^d)`.
fn times_one_minus_q_pow(coeffs: &mut [BigInt], d: usize) {
    for m in (d..coeffs.len()).rev() {
        let (lo, hi) = coeffs.split_at_mut(m);
        if !lo[m - d].is_zero() {
            hi[0] -= &lo[m - d];
        }
    }
}

/// Serialized form: `{"low": int, "order": int, "coeffs": [decimal strings]}`.
#[derive(Serialize, Deserialize)]
struct QSeriesRepr {
    low: i64,
    order: i64,
    coeffs: Vec<String>,
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesRepr {
            low: self.low,
            order: self.order,
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = QSeriesRepr::deserialize(d)?;
        if repr.low > repr.order + 1 {
            return Err(D::Error::custom(format!(
                "low exponent {} exceeds order {} + 1",
                repr.low, repr.order
            )));
        }
        if repr.coeffs.len() as i64 > repr.order - repr.low + 1 {
            return Err(D::Error::custom("coefficients extend past the truncation order"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| c.trim().parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| D::Error::custom(format!("bad coefficient: {e}")))?;
        Ok(QSeries::new(repr.low, coeffs, repr.order))
    }
}
