//! Log/antilog table arithmetic in GF(2^h), 1 <= h <= 7.
//!
//! Elements are the integers `0..q` whose binary digits are the coefficients
//! of a polynomial in `x` (bit i is the coefficient of x^i). Addition is
//! bitwise XOR and has no dedicated method; multiplication and inversion go
//! through the exponent/logarithm tables built from a fixed primitive
//! polynomial. For every degree the modulus is the smallest (as an integer
//! bitmask) primitive polynomial of that degree.

use serde::Serialize;

use crate::error::{Error, Result};

/// A field element, encoded as a coefficient bitmask.
pub type Elem = u8;

pub const MAX_DEGREE: u32 = 7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldTable {
    h: u32,
    q: u32,
    modulus: u32,
    exp_table: Vec<Elem>,
    /// `log_table[0]` is unused and holds 0.
    log_table: Vec<u32>,
}

/// Multiplies `elem` by x and reduces modulo `modulus` (degree `h`).
fn times_x(elem: u32, modulus: u32, h: u32) -> u32 {
    let shifted = elem << 1;
    if shifted & (1 << h) != 0 {
        shifted ^ modulus
    } else {
        shifted
    }
}

/// Powers of x modulo `modulus`, or `None` if x does not generate the
/// multiplicative group.
fn power_cycle(modulus: u32, h: u32) -> Option<Vec<u32>> {
    let order = (1u32 << h) - 1;
    let mut seen = vec![false; 1 << h];
    let mut powers = Vec::with_capacity(order as usize);
    let mut elem = 1;
    for _ in 0..order {
        if elem == 0 || seen[elem as usize] {
            return None;
        }
        seen[elem as usize] = true;
        powers.push(elem);
        elem = times_x(elem, modulus, h);
    }
    (elem == 1).then_some(powers)
}

/// Smallest primitive polynomial of degree `h`, as a bitmask including the
/// leading term.
pub fn least_primitive_modulus(h: u32) -> Result<u32> {
    if !(1..=MAX_DEGREE).contains(&h) {
        return Err(Error::UnsupportedField(h));
    }
    ((1u32 << h)..(1u32 << (h + 1)))
        .find(|&m| power_cycle(m, h).is_some())
        .ok_or_else(|| Error::Internal(format!("no primitive polynomial of degree {h}")))
}

impl FieldTable {
    pub fn new(h: u32) -> Result<Self> {
        let modulus = least_primitive_modulus(h)?;
        let powers = power_cycle(modulus, h).expect("modulus was just checked primitive");
        let q = 1u32 << h;
        let mut log_table = vec![0u32; q as usize];
        for (i, &p) in powers.iter().enumerate() {
            log_table[p as usize] = i as u32;
        }
        Ok(Self {
            h,
            q,
            modulus,
            exp_table: powers.into_iter().map(|p| p as Elem).collect(),
            log_table,
        })
    }

    /// Builds the field of order `q`, which must be 2^h with 1 <= h <= 7.
    pub fn with_order(q: u64) -> Result<Self> {
        if q < 2 || !q.is_power_of_two() {
            return Err(Error::NotEvenPrimePower(q));
        }
        let h = q.trailing_zeros();
        if h > MAX_DEGREE {
            return Err(Error::UnsupportedField(h));
        }
        Self::new(h)
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn exp_table(&self) -> &[Elem] {
        &self.exp_table
    }

    pub fn log_table(&self) -> &[u32] {
        &self.log_table
    }

    /// Order of the multiplicative group, q - 1.
    fn order(&self) -> u32 {
        self.q - 1
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q).map(|e| e as Elem)
    }

    pub fn exp(&self, i: u32) -> Elem {
        self.exp_table[(i % self.order()) as usize]
    }

    pub fn log(&self, a: Elem) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero { q: self.q });
        }
        Ok(self.log_table[a as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log_table[a as usize] + self.log_table[b as usize];
        let s = if s >= self.order() { s - self.order() } else { s };
        self.exp_table[s as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero { q: self.q });
        }
        let l = self.log_table[a as usize];
        Ok(if l == 0 { 1 } else { self.exp_table[(self.order() - l) as usize] })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// Absolute trace a + a^2 + a^4 + ... + a^(2^(h-1)); always 0 or 1.
    pub fn trace(&self, a: Elem) -> Elem {
        let mut acc = 0;
        let mut power = a;
        for _ in 0..self.h {
            acc ^= power;
            power = self.square(power);
        }
        acc
    }

    /// Smallest element with absolute trace 1, i.e. the smallest `a` for
    /// which x^2 + x + a is irreducible.
    pub fn least_trace_one(&self) -> Option<Elem> {
        self.elements().find(|&a| self.trace(a) == 1)
    }

    /// Integer square root inside the field: the unique `r` with r^2 = a.
    pub fn sqrt(&self, a: Elem) -> Elem {
        // Squaring is the Frobenius automorphism, so its inverse is a^(2^(h-1)).
        let mut r = a;
        for _ in 1..self.h {
            r = self.square(r);
        }
        r
    }
}

/// Free-function form of [`FieldTable::new`].
pub fn make_field(h: u32) -> Result<FieldTable> {
    FieldTable::new(h)
}

pub fn field_mul(field: &FieldTable, a: Elem, b: Elem) -> Elem {
    field.mul(a, b)
}

pub fn field_inv(field: &FieldTable, a: Elem) -> Result<Elem> {
    field.inv(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Carry-less product reduced modulo `modulus`; independent of the tables.
    fn poly_mulmod(mut a: u32, mut b: u32, modulus: u32, h: u32) -> u32 {
        let mut acc = 0;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & (1 << h) != 0 {
                a ^= modulus;
            }
        }
        acc
    }

    #[test]
    fn gf2_is_the_prime_field() {
        let f = make_field(1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(f.mul(1, 1), 1);
        assert_eq!(f.inv(1).unwrap(), 1);
    }

    #[test]
    fn small_exp_tables() {
        let f4 = make_field(2).unwrap();
        assert_eq!(f4.modulus(), 0b111);
        assert_eq!(f4.exp_table(), &[1, 2, 3]);
        let f8 = make_field(3).unwrap();
        assert_eq!(f8.modulus(), 0b1011);
        assert_eq!(f8.exp_table(), &[1, 2, 4, 3, 6, 7, 5]);
    }

    #[test]
    fn frozen_moduli() {
        // Checked against a brute-force scan over all candidates of each degree.
        let expected = [0b11, 0b111, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10000011];
        for (h, &m) in (1..=7).zip(expected.iter()) {
            assert_eq!(make_field(h).unwrap().modulus(), m, "h = {h}");
        }
    }

    #[test]
    fn moduli_are_least_primitive_by_naive_order() {
        for h in 1..=7u32 {
            let q = 1u32 << h;
            let is_primitive = |m: u32| {
                // x reduced modulo m
                let g = if 2 & (1 << h) != 0 { 2 ^ m } else { 2 };
                let mut e = 1;
                for step in 1..q {
                    e = poly_mulmod(e, g, m, h);
                    if e == 1 {
                        return step == q - 1;
                    }
                }
                false
            };
            let m = make_field(h).unwrap().modulus();
            assert!(is_primitive(m));
            for smaller in (1 << h)..m {
                assert!(!is_primitive(smaller), "h = {h}, smaller candidate {smaller:#b}");
            }
        }
    }

    #[test]
    fn examples_from_polynomial_arithmetic() {
        let f4 = make_field(2).unwrap();
        assert_eq!(f4.mul(2, 2), 3);
        assert_eq!(f4.inv(2).unwrap(), 3);
        let f8 = make_field(3).unwrap();
        assert_eq!(f8.mul(2, 4), 3);
        assert_eq!(f8.inv(2).unwrap(), 5);
    }

    #[test]
    fn mul_matches_polynomial_oracle_exhaustively() {
        for h in 1..=7 {
            let f = make_field(h).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let expect = poly_mulmod(a as u32, b as u32, f.modulus(), h) as Elem;
                    assert_eq!(f.mul(a, b), expect, "h={h} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn table_invariants() {
        for h in 1..=7 {
            let f = make_field(h).unwrap();
            assert_eq!(f.exp_table()[0], 1);
            let mut sorted: Vec<_> = f.exp_table().to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, (1..f.q()).map(|e| e as Elem).collect::<Vec<_>>());
            for (i, &e) in f.exp_table().iter().enumerate() {
                assert_eq!(f.log_table()[e as usize], i as u32);
            }
        }
    }

    #[test]
    fn inverse_and_zero() {
        for h in 1..=7 {
            let f = make_field(h).unwrap();
            assert!(matches!(f.inv(0), Err(Error::DivisionByZero { .. })));
            assert_eq!(f.mul(0, 1), 0);
            assert_eq!(f.inv(1).unwrap(), 1);
            for a in f.elements().skip(1) {
                let b = f.inv(a).unwrap();
                assert_eq!(f.mul(a, b), 1);
                assert_eq!(f.inv(b).unwrap(), a);
                assert_eq!(f.mul(a, 1), a);
            }
        }
    }

    #[test]
    fn distributes_over_xor() {
        for h in 1..=4 {
            let f = make_field(h).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    for c in f.elements() {
                        assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_and_sqrt() {
        let f4 = make_field(2).unwrap();
        assert_eq!(f4.least_trace_one(), Some(2));
        let f8 = make_field(3).unwrap();
        assert_eq!(f8.least_trace_one(), Some(1));
        for h in 1..=7 {
            let f = make_field(h).unwrap();
            let ones = f.elements().filter(|&a| f.trace(a) == 1).count() as u32;
            assert_eq!(ones, f.q() / 2);
            for a in f.elements() {
                assert!(f.trace(a) <= 1);
                assert_eq!(f.square(f.sqrt(a)), a);
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(make_field(0), Err(Error::UnsupportedField(0)));
        assert_eq!(make_field(8), Err(Error::UnsupportedField(8)));
        assert!(FieldTable::with_order(6).is_err());
        assert!(FieldTable::with_order(256).is_err());
        assert_eq!(FieldTable::with_order(16).unwrap().h(), 4);
    }
}
