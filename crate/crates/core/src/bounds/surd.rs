use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// `a + b√d` with rational `a`, `b` and a nonnegative integer `d`.
///
/// Operands of a binary operation must share `d`; mixing fields panics.
/// When `d` is a perfect square the value is folded into `a`, so `b == 0`
/// exactly when the number is rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

impl QuadraticSurd {
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Self {
        assert!(!d.is_negative(), "negative radicand");
        let mut s = QuadraticSurd { a, b, d };
        let root = s.d.sqrt();
        if &root * &root == s.d {
            s.a += &s.b * BigRational::from_integer(root);
            s.b = BigRational::zero();
        }
        s
    }

    pub fn rational(a: BigRational, d: BigInt) -> Self {
        Self::new(a, BigRational::zero(), d)
    }

    pub fn from_int(a: i64, d: &BigInt) -> Self {
        Self::rational(BigRational::from_integer(a.into()), d.clone())
    }

    /// `√d` itself.
    pub fn root(d: &BigInt) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), d.clone())
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadraticSurd { a: self.a.clone(), b: -&self.b, d: self.d.clone() }
    }

    /// `(a + b√d)(a - b√d) = a² - b²d`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone())
    }

    /// Exact sign, -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: the larger magnitude wins
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * BigRational::from_integer(self.d.clone()))) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conjugate();
        Ok(QuadraticSurd { a: c.a / &n, b: c.b / &n, d: c.d })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QuadraticSurd { a: &self.a * k, b: &self.b * k, d: self.d.clone() }
    }

    pub fn floor(&self) -> BigInt {
        // b√d lies in [s, s + 1) for b >= 0 where s = isqrt(floor(b²d))
        let t = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        let s = BigRational::from_integer(t.floor().to_integer().sqrt());
        let approx = if self.b.is_negative() { &self.a - &s } else { &self.a + &s };
        let mut c = approx.floor().to_integer();
        while self.cmp_int(&c) == Ordering::Less {
            c -= 1;
        }
        while self.cmp_int(&(&c + 1)) != Ordering::Less {
            c += 1;
        }
        c
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    fn cmp_int(&self, k: &BigInt) -> Ordering {
        let diff = self - &Self::rational(BigRational::from_integer(k.clone()), self.d.clone());
        diff.signum().cmp(&0)
    }

    pub fn to_f64(&self) -> f64 {
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * d.sqrt()
    }

    fn same_field(&self, rhs: &Self) {
        assert!(
            self.d == rhs.d || self.b.is_zero() || rhs.b.is_zero(),
            "surds from different fields: √{} and √{}",
            self.d,
            rhs.d
        );
    }

    fn field_of(&self, rhs: &Self) -> BigInt {
        if self.b.is_zero() { rhs.d.clone() } else { self.d.clone() }
    }
}

fn sign(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a QuadraticSurd> for &'a QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        self.same_field(rhs);
        QuadraticSurd { a: &self.a + &rhs.a, b: &self.b + &rhs.b, d: self.field_of(rhs) }
    }
}

impl<'a> Sub<&'a QuadraticSurd> for &'a QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        self.same_field(rhs);
        QuadraticSurd { a: &self.a - &rhs.a, b: &self.b - &rhs.b, d: self.field_of(rhs) }
    }
}

impl<'a> Mul<&'a QuadraticSurd> for &'a QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, rhs: &QuadraticSurd) -> QuadraticSurd {
        self.same_field(rhs);
        let d = self.field_of(rhs);
        let dr = BigRational::from_integer(d.clone());
        QuadraticSurd {
            a: &self.a * &rhs.a + &self.b * &rhs.b * dr,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        }
    }
}

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})√{}", self.b, self.d)
        } else {
            write!(f, "{} + ({})√{}", self.a, self.b, self.d)
        }
    }
}

impl Serialize for QuadraticSurd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadraticSurd", 4)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("d", &self.d.to_string())?;
        st.serialize_field("approx", &self.to_f64())?;
        st.end()
    }
}
