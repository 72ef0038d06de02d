//! Exact coefficients in ℚ and in quadratic extensions ℚ(√d).

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("{0} is not a square in {1}")]
    NotASquare(String, FieldSpec),
}

/// The coefficient field of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    /// ℚ(√d) with `d` squarefree and different from 0 and 1.
    Quadratic(i64),
}

impl FieldSpec {
    pub fn quadratic(d: i64) -> Result<FieldSpec, ScalarError> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(ScalarError::InvalidField(format!("d = {d} must be squarefree and not 0 or 1")));
        }
        Ok(FieldSpec::Quadratic(d))
    }

    pub fn gaussian() -> FieldSpec {
        FieldSpec::Quadratic(-1)
    }

    /// The `d` of ℚ(√d), or 0 for ℚ.
    pub fn d(&self) -> i64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Quadratic(d) => *d,
        }
    }

    fn from_tag(d: i64) -> FieldSpec {
        if d == 0 {
            FieldSpec::Rationals
        } else {
            FieldSpec::Quadratic(d)
        }
    }

    /// Smallest field containing both, if any.
    pub fn join(self, other: FieldSpec) -> Result<FieldSpec, ScalarError> {
        match (self, other) {
            (FieldSpec::Rationals, f) | (f, FieldSpec::Rationals) => Ok(f),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(ScalarError::FieldMismatch(a, b)),
        }
    }

    /// √d as a scalar of this field.
    pub fn sqrt_d(&self) -> Option<Scalar> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Quadratic(d) => Some(Scalar {
                a: BigRational::zero(),
                b: BigRational::one(),
                d: *d,
            }),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Quadratic(-1) => write!(f, "Q(i)"),
            FieldSpec::Quadratic(d) => write!(f, "Q(sqrt {d})"),
        }
    }
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// `a + b·√d`. Rational scalars carry tag `d = 0` and embed into every
/// quadratic field; two different quadratic fields never mix.
#[derive(Clone, Debug)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    d: i64,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}
impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn join_tags(x: i64, y: i64) -> i64 {
    if x == 0 {
        y
    } else if y == 0 || x == y {
        x
    } else {
        panic!(
            "{}",
            ScalarError::FieldMismatch(FieldSpec::from_tag(x), FieldSpec::from_tag(y))
        )
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { a: BigRational::zero(), b: BigRational::zero(), d: 0 }
    }

    pub fn one() -> Scalar {
        Scalar::int(1)
    }

    pub fn int(n: i64) -> Scalar {
        Scalar { a: rat(n, 1), b: BigRational::zero(), d: 0 }
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        assert!(d != 0, "zero denominator");
        Scalar { a: rat(n, d), b: BigRational::zero(), d: 0 }
    }

    pub fn rational(q: BigRational) -> Scalar {
        Scalar { a: q, b: BigRational::zero(), d: 0 }
    }

    /// `a + b√d` in the given field (`b` must be zero for ℚ).
    pub fn from_parts(a: BigRational, b: BigRational, field: FieldSpec) -> Scalar {
        let d = field.d();
        assert!(d != 0 || b.is_zero(), "irrational part in Q");
        Scalar { a, b, d }
    }

    /// The imaginary unit of ℚ(i).
    pub fn i() -> Scalar {
        FieldSpec::gaussian().sqrt_d().unwrap()
    }

    pub fn re(&self) -> &BigRational {
        &self.a
    }

    pub fn irr(&self) -> &BigRational {
        &self.b
    }

    /// The smallest field this scalar is known to live in.
    pub fn field(&self) -> FieldSpec {
        if self.b.is_zero() {
            FieldSpec::Rationals
        } else {
            FieldSpec::from_tag(self.d)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Conjugate `a − b√d`.
    pub fn conj(&self) -> Scalar {
        Scalar { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a² − d b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(self.d)) * &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Scalar { a: &self.a / &n, b: -(&self.b / &n), d: self.d })
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        FieldSpec::from_tag(self.d).join(FieldSpec::from_tag(o.d))?;
        Ok(self + o)
    }

    pub fn try_sub(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        FieldSpec::from_tag(self.d).join(FieldSpec::from_tag(o.d))?;
        Ok(self - o)
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        FieldSpec::from_tag(self.d).join(FieldSpec::from_tag(o.d))?;
        Ok(self * o)
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        FieldSpec::from_tag(self.d).join(FieldSpec::from_tag(o.d))?;
        let inv = o.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut r = Scalar::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// A square root inside `field`, if one exists.
    pub fn sqrt_in(&self, field: FieldSpec) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Scalar::rational(r));
            }
            let d = field.d();
            if d == 0 {
                return None;
            }
            // a = s²·d  ⇒  √a = s√d
            let q = &self.a / BigRational::from_integer(BigInt::from(d));
            return rational_sqrt(&q).map(|s| Scalar { a: BigRational::zero(), b: s, d });
        }
        if field.d() != self.d {
            return None;
        }
        // (p + q√d)² = a + b√d  ⇔  p² + d q² = a, 2pq = b
        let n = rational_sqrt(&self.norm())?;
        let two = rat(2, 1);
        for cand in [(&self.a + &n) / &two, (&self.a - &n) / &two] {
            if let Some(p) = rational_sqrt(&cand) {
                if p.is_zero() {
                    continue;
                }
                let q = &self.b / (&two * &p);
                let s = Scalar { a: p, b: q, d: self.d };
                if &(&s * &s) == self {
                    return Some(s);
                }
            }
        }
        None
    }

    /// Embedding into ℂ as (re, im), for sanity checks and root isolation.
    pub fn to_complex(&self) -> (f64, f64) {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        if self.d < 0 {
            (a, b * ((-self.d) as f64).sqrt())
        } else {
            (a + b * (self.d as f64).sqrt(), 0.0)
        }
    }

    /// Rational approximation with bounded denominator (continued fractions).
    pub fn approx_rational(x: f64, max_den: i64) -> Option<BigRational> {
        if !x.is_finite() || x.abs() > 1e12 {
            return None;
        }
        let (mut h0, mut h1) = (0i128, 1i128);
        let (mut k0, mut k1) = (1i128, 0i128);
        let mut v = x;
        for _ in 0..40 {
            let a = v.floor();
            let ai = a as i128;
            let h2 = ai * h1 + h0;
            let k2 = ai * k1 + k0;
            if k2 > max_den as i128 {
                break;
            }
            h0 = h1;
            h1 = h2;
            k0 = k1;
            k1 = k2;
            let frac = v - a;
            if frac.abs() < 1e-12 {
                break;
            }
            v = 1.0 / frac;
        }
        if k1 == 0 {
            return None;
        }
        Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { a: &self.a + &o.a, b: &self.b + &o.b, d: join_tags(self.d, o.d) }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { a: &self.a - &o.a, b: &self.b - &o.b, d: join_tags(self.d, o.d) }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let d = join_tags(self.d, o.d);
        if self.b.is_zero() && o.b.is_zero() {
            return Scalar { a: &self.a * &o.a, b: BigRational::zero(), d };
        }
        let dd = BigRational::from_integer(BigInt::from(d));
        Scalar {
            a: &self.a * &o.a + dd * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.d = join_tags(self.d, o.d);
        self.a += &o.a;
        self.b += &o.b;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.d = join_tags(self.d, o.d);
        self.a -= &o.a;
        self.b -= &o.b;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
}

fn fmt_rat(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Parser-compatible rendering: `3/2`, `i`, `2*sqrt(3)`, `(1 + i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let root = if self.d == -1 { "i".to_string() } else { format!("sqrt({})", self.d) };
        let irr = if self.b.is_one() {
            root
        } else if (-&self.b).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", fmt_rat(&self.b))
        };
        if self.a.is_zero() {
            write!(f, "{irr}")
        } else if irr.starts_with('-') {
            write!(f, "({} - {})", fmt_rat(&self.a), &irr[1..])
        } else {
            write!(f, "({} + {})", fmt_rat(&self.a), irr)
        }
    }
}

/// Greatest common divisor of two big integers (nonnegative).
pub fn big_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sum() {
        assert_eq!(Scalar::frac(1, 2) + Scalar::frac(1, 3), Scalar::frac(5, 6));
    }

    #[test]
    fn gaussian_norm() {
        let i = Scalar::i();
        let p = &Scalar::one() + &i;
        let q = &Scalar::one() - &i;
        assert_eq!(&p * &q, Scalar::int(2));
    }

    #[test]
    fn two_over_root_three_squared() {
        let f = FieldSpec::quadratic(3).unwrap();
        let s = &Scalar::int(2) * &f.sqrt_d().unwrap().inv().unwrap();
        assert_eq!(&s * &s, Scalar::frac(4, 3));
        assert_eq!(Scalar::frac(4, 3).sqrt_in(f).map(|r| &r * &r), Some(Scalar::frac(4, 3)));
    }

    #[test]
    fn inverse_and_division_by_zero() {
        let f = FieldSpec::quadratic(-3).unwrap();
        let x = &Scalar::int(2) + &(&Scalar::int(5) * &f.sqrt_d().unwrap());
        assert!((&x * &x.inv().unwrap()).is_one());
        assert_eq!(x.try_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn field_mismatch_is_reported() {
        let a = FieldSpec::quadratic(3).unwrap().sqrt_d().unwrap();
        let b = Scalar::i();
        assert!(matches!(a.try_add(&b), Err(ScalarError::FieldMismatch(_, _))));
        assert!(a.try_add(&Scalar::int(4)).is_ok());
    }

    #[test]
    fn square_roots() {
        let g = FieldSpec::gaussian();
        assert_eq!(Scalar::int(-4).sqrt_in(g), Some(&Scalar::int(2) * &Scalar::i()));
        assert_eq!(Scalar::int(2).sqrt_in(FieldSpec::Rationals), None);
        // 2i = (1+i)²
        let two_i = &Scalar::int(2) * &Scalar::i();
        let r = two_i.sqrt_in(g).unwrap();
        assert_eq!(&r * &r, two_i);
    }

    #[test]
    fn squarefree_validation() {
        assert!(FieldSpec::quadratic(4).is_err());
        assert!(FieldSpec::quadratic(1).is_err());
        assert!(FieldSpec::quadratic(-3).is_ok());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::frac(-3, 2).to_string(), "-3/2");
        assert_eq!(Scalar::i().to_string(), "i");
        let s3 = FieldSpec::quadratic(3).unwrap().sqrt_d().unwrap();
        assert_eq!((&Scalar::one() - &(&Scalar::frac(2, 3) * &s3)).to_string(), "(1 - 2/3*sqrt(3))");
    }
}
