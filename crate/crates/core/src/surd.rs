//! Exact numbers of the form (a + b*sqrt(d)) / den over the integers.
//!
//! Every bound in the catalog has this shape with d = 5 or d = q. Floors,
//! signs and comparisons are decided with integer square roots only.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    a: BigInt,
    b: BigInt,
    d: u64,
    den: BigInt,
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

/// floor(sqrt(n)) and whether n is a perfect square; n >= 0.
fn isqrt_exact(n: &BigInt) -> (BigInt, bool) {
    let r = n.sqrt();
    let exact = &r * &r == *n;
    (r, exact)
}

/// Sign of a + b*sqrt(d) with d not a perfect square (or b = 0).
fn sign_two(a: &BigInt, b: &BigInt, d: u64) -> Ordering {
    let zero = BigInt::zero();
    match (a.cmp(&zero), b.cmp(&zero)) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less, Ordering::Less) => Ordering::Less,
        (Ordering::Greater, Ordering::Less) => (a * a).cmp(&(b * b * d)),
        (Ordering::Less, Ordering::Greater) => (b * b * d).cmp(&(a * a)),
    }
}

/// Sign of a + b*sqrt(m) + c*sqrt(n).
pub fn sign_three(a: &BigInt, b: &BigInt, m: u64, c: &BigInt, n: u64) -> Ordering {
    let s = Surd::from_parts(a.clone(), b.clone(), m);
    let t = Surd::from_parts(BigInt::zero(), c.clone(), n);
    let a = &s.a + &t.a;
    let (b, m, c, n) = (s.b, s.d, t.b, t.d);
    if b.is_zero() {
        return sign_two(&a, &c, n);
    }
    if c.is_zero() {
        return sign_two(&a, &b, m);
    }
    if m == n {
        return sign_two(&a, &(&b + &c), m);
    }
    // Sign of the radical part u = b*sqrt(m) + c*sqrt(n).
    let su = if b.sign() == c.sign() {
        b.cmp(&BigInt::zero())
    } else {
        let by_size = (&b * &b * m).cmp(&(&c * &c * n));
        if b.is_positive() {
            by_size
        } else {
            by_size.reverse()
        }
    };
    let sa = a.cmp(&BigInt::zero());
    if su == Ordering::Equal || sa == su {
        return sa;
    }
    if sa == Ordering::Equal {
        return su;
    }
    // Opposite signs: compare a^2 with u^2 = b^2 m + c^2 n + 2bc sqrt(mn).
    let rest = &a * &a - &b * &b * m - &c * &c * n;
    let cross = -(BigInt::from(2) * &b * &c);
    match Surd::from_parts(rest, cross, m * n).sign() {
        Ordering::Greater => sa,
        Ordering::Less => su,
        Ordering::Equal => Ordering::Equal,
    }
}

impl Surd {
    /// (a + b*sqrt(d)) / den, with perfect-square radicands folded into `a`.
    pub fn new(a: BigInt, b: BigInt, d: u64, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (mut a, mut b, mut den) = (a, b, den);
        if den.is_negative() {
            a = -a;
            b = -b;
            den = -den;
        }
        let (root, exact) = isqrt_exact(&BigInt::from(d));
        if exact {
            a += &b * root;
            b = BigInt::zero();
        }
        let d = if b.is_zero() { 0 } else { d };
        let g = a.gcd(&b).gcd(&den);
        if !g.is_zero() && !g.is_one() {
            a /= &g;
            b /= &g;
            den /= &g;
        }
        Self { a, b, d, den }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), BigInt::zero(), 0, BigInt::one())
    }

    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::new(num.into(), BigInt::zero(), 0, den.into())
    }

    /// a + b*sqrt(d), integers.
    pub fn from_parts(a: impl Into<BigInt>, b: impl Into<BigInt>, d: u64) -> Self {
        Self::new(a.into(), b.into(), d, BigInt::one())
    }

    pub fn rational_part(&self) -> (&BigInt, &BigInt) {
        (&self.a, &self.den)
    }

    pub fn radical_coefficient(&self) -> &BigInt {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && (&self.a % &self.den).is_zero()
    }

    pub fn sign(&self) -> Ordering {
        sign_two(&self.a, &self.b, self.d)
    }

    /// floor(b*sqrt(d)) for the numerator part.
    fn floor_radical(&self) -> BigInt {
        if self.b.is_zero() {
            return BigInt::zero();
        }
        let (r, exact) = isqrt_exact(&(&self.b * &self.b * self.d));
        if self.b.is_positive() {
            r
        } else if exact {
            -r
        } else {
            -r - 1
        }
    }

    pub fn floor(&self) -> BigInt {
        let num_floor = &self.a + self.floor_radical();
        num_floor.div_floor(&self.den)
    }

    /// Largest integer strictly below the value.
    pub fn strict_floor(&self) -> BigInt {
        if self.is_integer() {
            &self.a / &self.den - 1
        } else {
            self.floor()
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self::new(&self.a * factor, &self.b * factor, self.d, self.den.clone())
    }

    /// Distance-to-integer test: true iff the value is within 10^-digits of
    /// an integer without being one. Exact.
    pub fn near_integer(&self, digits: u32) -> bool {
        if self.is_integer() {
            return false;
        }
        let scale = BigInt::from(10u64).pow(digits + 6);
        let frac = self.scale(&scale).floor() - self.floor() * &scale;
        let tol = BigInt::from(10u64).pow(6);
        frac < tol || frac >= scale - tol
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        (a + b * (self.d as f64).sqrt()) / den
    }

    /// Exact comparison, also across different radicands.
    pub fn cmp_exact(&self, other: &Surd) -> Ordering {
        // self - other = (a1 den2 - a2 den1 + b1 den2 sqrt d1 - b2 den1 sqrt d2) / (den1 den2)
        let a = &self.a * &other.den - &other.a * &self.den;
        let b = &self.b * &other.den;
        let c = -(&other.b * &self.den);
        sign_three(&a, &b, self.d, &c, other.d)
    }

    pub fn add(&self, other: &Surd) -> Option<Surd> {
        if self.d != other.d && !self.b.is_zero() && !other.b.is_zero() {
            return None;
        }
        let d = if self.b.is_zero() { other.d } else { self.d };
        Some(Surd::new(
            &self.a * &other.den + &other.a * &self.den,
            &self.b * &other.den + &other.b * &self.den,
            d,
            &self.den * &other.den,
        ))
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.b.is_zero() {
            format!("{}", self.a)
        } else {
            let sign = if self.b.is_negative() { "-" } else { "+" };
            format!("{} {} {}*sqrt({})", self.a, sign, self.b.abs(), self.d)
        };
        if self.den.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

/// Convenience for building bound formulas: q^e as a BigInt.
pub fn pow(q: u64, e: u32) -> BigInt {
    BigInt::from(q).pow(e)
}

pub fn int(x: i64) -> BigInt {
    big(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn folds_perfect_squares() {
        let s = Surd::from_parts(1, 3, 4);
        assert!(s.is_integer());
        assert_eq!(s.floor(), int(7));
        assert_eq!(s.strict_floor(), int(6));
    }

    #[test]
    fn floors_of_irrationals() {
        // 77 - 8 sqrt 5 = 59.11...
        let s = Surd::from_parts(77, -8, 5);
        assert_eq!(s.floor(), int(59));
        assert_eq!(s.strict_floor(), int(59));
        // -sqrt 2 = -1.41...
        assert_eq!(Surd::from_parts(0, -1, 2).floor(), int(-2));
        assert_eq!(Surd::rational(118, 3).floor(), int(39));
        assert_eq!(Surd::rational(-1, 3).floor(), int(-1));
    }

    #[test]
    fn signs() {
        assert_eq!(Surd::from_parts(3, -1, 9).sign(), Ordering::Equal);
        assert_eq!(Surd::from_parts(3, -1, 8).sign(), Ordering::Greater);
        assert_eq!(Surd::from_parts(-3, 1, 10).sign(), Ordering::Greater);
        assert_eq!(Surd::from_parts(-3, 1, 8).sign(), Ordering::Less);
    }

    #[test]
    fn cross_radicand_comparison_matches_floats() {
        let cases = [
            (Surd::from_parts(10, 1, 5), Surd::from_parts(11, 1, 3)),
            (Surd::from_parts(0, 3, 2048), Surd::from_parts(100, 2, 5)),
            (Surd::from_parts(-5, 7, 5), Surd::from_parts(2, 1, 7)),
            (Surd::from_parts(1, -2, 3), Surd::from_parts(-1, 1, 2)),
        ];
        for (x, y) in cases {
            let expect = x.to_f64().partial_cmp(&y.to_f64()).unwrap();
            assert_eq!(x.cmp_exact(&y), expect, "{x} vs {y}");
            assert_eq!(y.cmp_exact(&x), expect.reverse());
        }
        let x = Surd::from_parts(2, 1, 5);
        assert_eq!(x.cmp_exact(&x.clone()), Ordering::Equal);
        // sqrt 8 = 2 sqrt 2
        assert_eq!(Surd::from_parts(0, 1, 8).cmp_exact(&Surd::from_parts(0, 2, 2)), Ordering::Equal);
    }

    #[test]
    fn near_integer_detection() {
        assert!(!Surd::from_parts(77, -8, 5).near_integer(6));
        // 10^7 + sqrt(10^14 + 1) - 2*10^7 is about 5e-8
        let tiny = Surd::from_parts(-10_000_000, 1, 100_000_000_000_001);
        assert!(tiny.near_integer(6));
    }

    #[test]
    fn display() {
        assert_eq!(Surd::from_parts(77, -8, 5).to_string(), "77 - 8*sqrt(5)");
        assert_eq!(Surd::rational(5, 3).to_string(), "(5)/3");
    }
}
