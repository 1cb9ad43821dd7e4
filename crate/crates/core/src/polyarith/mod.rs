//! Dense univariate polynomials over a prime field `F_l`.
//!
//! Coefficients are stored as reduced machine integers, lowest degree first;
//! the modulus lives in a [`PrimeField`] context carried by each polynomial.
//! The zero polynomial is the empty coefficient vector and has no degree
//! ([`Poly::degree`] returns `None`).

mod mul;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::{is_prime, pow_mod};
use crate::error::{usage, Result};

pub use mul::DEFAULT_KARATSUBA_CUTOFF;

/// Raw product of reduced coefficient slices modulo `m`.
pub(crate) fn mul_raw(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    mul::karatsuba(a, b, m, DEFAULT_KARATSUBA_CUTOFF)
}

/// Largest modulus accepted; keeps every coefficient product inside `u64`.
pub const MAX_MODULUS: u64 = (1 << 32) - 1;

/// The prime field `F_l`, checked for primality once at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return usage(format!("{modulus} is not prime"));
        }
        if modulus > MAX_MODULUS {
            return usage(format!("field modulus {modulus} exceeds {MAX_MODULUS}"));
        }
        Ok(PrimeField { modulus })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }

    /// Canonical representative of an arbitrary integer.
    pub fn reduce(self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }

    pub fn elem(self, v: i64) -> FpElem {
        FpElem { value: self.reduce(v), modulus: self.modulus }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.modulus
    }

    /// Inverse of a nonzero element.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.modulus != 0);
        pow_mod(a, self.modulus - 2, self.modulus)
    }

    pub fn pow(self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.modulus)
    }

    /// Balanced representative in `(-l/2, l/2]`, used for display.
    pub fn signed(self, a: u64) -> i64 {
        if self.modulus > 2 && a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }
}

/// An element of `F_l` tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpElem {
    pub value: u64,
    pub modulus: u64,
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u64>,
    field: PrimeField,
}

impl Poly {
    pub fn zero(field: PrimeField) -> Self {
        Poly { coeffs: Vec::new(), field }
    }

    pub fn one(field: PrimeField) -> Self {
        Poly::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Poly::from_coeffs(field, vec![c])
    }

    /// The polynomial `X`.
    pub fn x(field: PrimeField) -> Self {
        Poly::monomial(field, 1, 1)
    }

    pub fn monomial(field: PrimeField, c: u64, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        Poly::from_coeffs(field, coeffs)
    }

    /// Builds from coefficients (lowest degree first), reducing and trimming.
    pub fn from_coeffs(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        let m = field.modulus;
        for c in coeffs.iter_mut() {
            *c %= m;
        }
        let mut p = Poly { coeffs, field };
        p.normalize();
        p
    }

    /// Builds from signed coefficients, lowest degree first.
    pub fn from_signed(field: PrimeField, coeffs: &[i64]) -> Self {
        Poly::from_coeffs(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.field.modulus
    }

    /// Coefficients, lowest degree first; empty for the zero polynomial.
    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    /// Coefficient of `X^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading());
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Poly {
        let f = self.field;
        let c = c % f.modulus;
        Poly::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplies by `X^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs, field: self.field }
    }

    fn check_same(&self, other: &Poly) {
        assert_eq!(
            self.field, other.field,
            "polynomials over different fields (F_{} vs F_{})",
            self.field.modulus, other.field.modulus
        );
    }

    pub fn mul_with_cutoff(&self, other: &Poly, cutoff: usize) -> Poly {
        self.check_same(other);
        let coeffs = mul::karatsuba(&self.coeffs, &other.coeffs, self.field.modulus, cutoff);
        Poly::from_coeffs(self.field, coeffs)
    }

    pub fn square(&self) -> Poly {
        self * self
    }

    /// Quotient and remainder; panics on a zero divisor (see [`divrem`] for
    /// the checked form).
    pub fn div_rem(&self, g: &Poly) -> (Poly, Poly) {
        self.check_same(g);
        assert!(!g.is_zero(), "division by the zero polynomial");
        let f = self.field;
        let m = f.modulus;
        let dg = g.coeffs.len() - 1;
        if self.coeffs.len() <= dg {
            return (Poly::zero(f), self.clone());
        }
        let inv = f.inv(g.leading());
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len() - dg];
        let gl = &g.coeffs[..dg];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dg], inv);
            q[i] = c;
            if c == 0 {
                continue;
            }
            let neg = m - c;
            for (slot, &gj) in r[i..i + dg].iter_mut().zip(gl) {
                *slot = (*slot + neg * gj) % m;
            }
            r[i + dg] = 0;
        }
        r.truncate(dg);
        (Poly::from_coeffs(f, q), Poly::from_coeffs(f, r))
    }

    pub fn rem(&self, g: &Poly) -> Poly {
        self.div_rem(g).1
    }

    /// Monic gcd; `gcd(0, 0)` is reported as zero (see [`gcd`]).
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check_same(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m` by square-and-multiply over the bits of `e`.
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        self.check_same(m);
        let base = self.rem(m);
        let mut acc = Poly::one(self.field).rem(m);
        if e.is_zero() {
            return acc;
        }
        for i in (0..e.bits()).rev() {
            acc = acc.square().rem(m);
            if e.bit(i) {
                acc = (&acc * &base).rem(m);
            }
        }
        acc
    }

    pub fn pow_mod_u64(&self, e: u64, m: &Poly) -> Poly {
        self.pow_mod(&BigUint::from(e), m)
    }

    /// Horner evaluation at a raw field value.
    pub fn eval_raw(&self, x: u64) -> u64 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, i as u64 % f.modulus))
            .collect();
        Poly::from_coeffs(f, coeffs)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_same(rhs);
        let f = self.field;
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (&self.coeffs, &rhs.coeffs)
        } else {
            (&rhs.coeffs, &self.coeffs)
        };
        let mut out = long.clone();
        for (o, &s) in out.iter_mut().zip(short.iter()) {
            *o = f.add(*o, s);
        }
        Poly::from_coeffs(f, out)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly { coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(), field: f }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_with_cutoff(rhs, DEFAULT_KARATSUBA_CUTOFF)
    }
}

impl fmt::Display for Poly {
    /// Human form such as `X^6 - X^5 + X^2 + 1`, using balanced
    /// representatives for odd moduli.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let s = self.field.signed(c);
            let (neg, mag) = (s < 0, s.unsigned_abs());
            match (first, neg) {
                (true, true) => write!(out, "-")?,
                (true, false) => {}
                (false, true) => write!(out, " - ")?,
                (false, false) => write!(out, " + ")?,
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            if mono.is_empty() {
                write!(out, "{mag}")?;
            } else if mag == 1 {
                write!(out, "{mono}")?;
            } else {
                write!(out, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn same_field(f: &Poly, g: &Poly) -> Result<()> {
    if f.field != g.field {
        return usage(format!(
            "modulus mismatch: F_{} vs F_{}",
            f.field.modulus, g.field.modulus
        ));
    }
    Ok(())
}

pub fn add(f: &Poly, g: &Poly) -> Result<Poly> {
    same_field(f, g)?;
    Ok(f + g)
}

pub fn mul(f: &Poly, g: &Poly) -> Result<Poly> {
    same_field(f, g)?;
    Ok(f * g)
}

pub fn divrem(f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
    same_field(f, g)?;
    if g.is_zero() {
        return usage("division by the zero polynomial");
    }
    Ok(f.div_rem(g))
}

pub fn gcd(f: &Poly, g: &Poly) -> Result<Poly> {
    same_field(f, g)?;
    if f.is_zero() && g.is_zero() {
        return usage("gcd of two zero polynomials is undefined");
    }
    Ok(f.gcd(g))
}

/// `f^e mod m`; `e` may be arbitrarily large.
pub fn powmod(f: &Poly, e: &BigUint, m: &Poly) -> Result<Poly> {
    same_field(f, m)?;
    if m.is_constant() {
        return usage("powmod modulus must be nonconstant");
    }
    Ok(f.pow_mod(e, m))
}

pub fn eval(f: &Poly, x: FpElem) -> Result<FpElem> {
    if x.modulus != f.modulus() {
        return usage(format!("modulus mismatch: F_{} vs F_{}", f.modulus(), x.modulus));
    }
    Ok(FpElem { value: f.eval_raw(x.value), modulus: x.modulus })
}
