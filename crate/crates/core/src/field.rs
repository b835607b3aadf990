//! Exact arithmetic in GF(p^k).
//!
//! Elements are identified with their canonical index: the coefficient
//! vector `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` read as the base-`p` integer
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Index `0` is zero and index `1` is
//! one in every field, so design files built from field coordinates are
//! portable across runs.
//!
//! Multiplication is tabulated through discrete logarithms of a primitive
//! element; the tables are built with plain polynomial arithmetic modulo the
//! defining polynomial, which stays available as
//! [`FieldSpec::mul_reference`] for cross-checks.

use std::fmt;

use crate::error::{Error, Result};

/// Default upper bound on `p^k`.
pub const DEFAULT_ORDER_CAP: u64 = 1 << 20;

const ADD_TABLE_MAX: u32 = 512;

/// An element of some [`FieldSpec`], stored as its canonical index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The operations of [`FieldSpec::apply`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(u64),
}

/// A finite field GF(p^k) with a fixed defining polynomial.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    /// Monic, constant term first, length `k + 1`.
    modulus: Vec<u32>,
    generator: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^k`, or `None` if it is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut k = 0u32;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---- polynomials over F_p, constant term first -----------------------------

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is prime and small; Fermat
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo a nonzero polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p) as u64;
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = r[dr] as u64 * lead_inv % p as u64;
        let shift = dr - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = c * mi as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|v| v as u32).collect();
    trim(&mut out);
    out
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    poly_rem(&poly_mul(a, b, p), m, p)
}

fn poly_powmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn poly_eval(f: &[u32], x: u32, p: u32) -> u32 {
    f.iter()
        .rev()
        .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64) as u32
}

/// Rabin-style irreducibility test for a monic polynomial of degree `k`:
/// no roots in F_p, and `gcd(f, x^(p^i) - x) = 1` for `1 <= i <= k/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    if k <= 1 {
        return k == 1;
    }
    if (0..p).any(|x| poly_eval(f, x, p) == 0) {
        return false;
    }
    let x = vec![0u32, 1];
    let mut h = x.clone();
    for _ in 1..=k / 2 {
        h = poly_powmod(&h, p as u64, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = poly_gcd(f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FieldSpec {
    /// GF(p^k) with the order cap [`DEFAULT_ORDER_CAP`].
    pub fn new(p: u64, k: u32) -> Result<Self> {
        Self::with_cap(p, k, DEFAULT_ORDER_CAP)
    }

    /// GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, k)
    }

    /// Builds GF(p^k) whose modulus is the monic irreducible of degree `k`
    /// with the smallest index for its lower coefficients (the lower
    /// coefficients read as a base-`p` integer, constant term least
    /// significant).
    pub fn with_cap(p: u64, k: u32, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::CompositeP(p));
        }
        if k == 0 {
            return Err(Error::BadParams("extension degree must be >= 1".into()));
        }
        let order = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if order > cap as u128 || order > u32::MAX as u128 {
            return Err(Error::CapExceeded {
                order: order.min(u64::MAX as u128) as u64,
                cap,
            });
        }
        let p = p as u32;
        let q = order as u32;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|low| {
                    let mut f = digits(low, p, k);
                    f.push(1);
                    f
                })
                .find(|f| is_irreducible(f, p))
                .expect("an irreducible polynomial of every degree exists")
        };
        let mut field = FieldSpec {
            p,
            k,
            q,
            modulus,
            generator: FieldElement(0),
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add: None,
        };
        field.build_tables();
        Ok(field)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let one = vec![1u32];
        let generator = if q == 2 {
            1
        } else {
            (2..q)
                .find(|&g| {
                    let gp = self.poly_of(g);
                    factors
                        .iter()
                        .all(|&l| poly_powmod(&gp, order / l, &self.modulus, self.p) != one)
                })
                .expect("the multiplicative group is cyclic")
        };
        self.generator = FieldElement(generator);
        let gp = self.poly_of(generator);
        let mut exp = Vec::with_capacity(2 * (q as usize - 1));
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u32];
        for i in 0..q - 1 {
            let idx = self.index_of_poly(&cur);
            exp.push(idx);
            log[idx as usize] = i;
            cur = poly_mulmod(&cur, &gp, &self.modulus, self.p);
        }
        let first = exp.clone();
        exp.extend(first);
        self.exp = exp;
        self.log = log;
        self.neg = (0..q)
            .map(|x| {
                let c: Vec<u32> = digits(x, self.p, self.k)
                    .into_iter()
                    .map(|d| (self.p - d) % self.p)
                    .collect();
                from_digits(&c, self.p)
            })
            .collect();
        if q <= ADD_TABLE_MAX {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = self.add_digits(a, b);
                }
            }
            self.add = Some(t);
        }
    }

    fn poly_of(&self, idx: u32) -> Vec<u32> {
        let mut c = digits(idx, self.p, self.k);
        trim(&mut c);
        c
    }

    fn index_of_poly(&self, c: &[u32]) -> u32 {
        let mut full = c.to_vec();
        full.resize(self.k as usize, 0);
        from_digits(&full, self.p)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// The field order `q = p^k`.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial, constant term first (`x` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element used for the log tables.
    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// Element with the given canonical index.
    ///
    /// # Panics
    /// If `index >= q`.
    #[inline]
    pub fn elem(&self, index: u32) -> FieldElement {
        assert!(index < self.q, "index {index} out of range for GF({})", self.q);
        FieldElement(index)
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(FieldElement)
    }

    /// Coefficient vector (length `k`, constant term first).
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        digits(x.0, self.p, self.k)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::BadParams(format!(
                "coefficients {coeffs:?} do not describe an element of GF({})",
                self.q
            )));
        }
        Ok(FieldElement(self.index_of_poly(coeffs)))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add {
            Some(t) => FieldElement(t[(a.0 * self.q + b.0) as usize]),
            None => FieldElement(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        FieldElement(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return self.zero();
        }
        let l = self.log[a.0 as usize] as u64 * (e % (self.q as u64 - 1));
        FieldElement(self.exp[(l % (self.q as u64 - 1)) as usize])
    }

    /// Polynomial multiplication modulo the defining polynomial, without
    /// the log tables.
    pub fn mul_reference(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let prod = poly_mulmod(&self.poly_of(a.0), &self.poly_of(b.0), &self.modulus, self.p);
        FieldElement(self.index_of_poly(&prod))
    }

    /// Square-and-multiply power through [`mul_reference`](Self::mul_reference).
    pub fn pow_reference(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_reference(acc, base);
            }
            base = self.mul_reference(base, base);
            e >>= 1;
        }
        acc
    }

    /// Uniform entry point over [`FieldOp`]. Unary operations ignore `b`.
    pub fn apply(&self, op: FieldOp, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Sub => Ok(self.sub(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Div => self.div(a, b),
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
            FieldOp::Pow(e) => Ok(self.pow(a, e)),
        }
    }

    /// The quadratic character `x^((q-1)/2)` as -1, 0 or +1.
    pub fn quadratic_character(&self, x: FieldElement) -> Result<i8> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if x.is_zero() {
            return Ok(0);
        }
        let e = self.pow(x, (self.q as u64 - 1) / 2);
        if e == self.one() {
            Ok(1)
        } else {
            debug_assert_eq!(e, self.neg(self.one()));
            Ok(-1)
        }
    }

    /// Square roots of `x`, smaller canonical index first; `[0]` for zero,
    /// `None` for non-squares.
    pub fn sqrt(&self, x: FieldElement) -> Result<Option<Vec<FieldElement>>> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if x.is_zero() {
            return Ok(Some(vec![x]));
        }
        let l = self.log[x.0 as usize];
        if l % 2 == 1 {
            return Ok(None);
        }
        let s = FieldElement(self.exp[(l / 2) as usize]);
        let t = self.neg(s);
        Ok(Some(if s < t { vec![s, t] } else { vec![t, s] }))
    }
}

fn digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn from_digits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = FieldSpec::new(7, 1).unwrap();
        assert_eq!(f.order(), 7);
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.mul(f.elem(3), f.elem(5)), f.one());
    }

    #[test]
    fn gf4_modulus_and_omega() {
        let f = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let omega = f.from_coeffs(&[0, 1]).unwrap();
        let omega_plus_one = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.mul(omega, omega), omega_plus_one);
    }

    #[test]
    fn gf27_frobenius_and_inverses() {
        let f = FieldSpec::new(3, 3).unwrap();
        assert_eq!(f.order(), 27);
        for x in f.elements() {
            assert_eq!(f.pow_reference(x, 27), x);
            assert_eq!(f.pow(x, 27), x);
        }
        for a in f.nonzero_elements() {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(FieldSpec::new(6, 1), Err(Error::CompositeP(6))));
        assert!(matches!(FieldSpec::new(2, 21), Err(Error::CapExceeded { .. })));
        assert!(matches!(FieldSpec::of_order(12), Err(Error::NotPrimePower(12))));
        let f = FieldSpec::new(5, 1).unwrap();
        assert!(matches!(f.inv(f.zero()), Err(Error::DivisionByZero)));
        assert!(matches!(
            f.apply(FieldOp::Div, f.one(), f.zero()),
            Err(Error::DivisionByZero)
        ));
        let g = FieldSpec::new(2, 3).unwrap();
        assert!(matches!(g.quadratic_character(g.one()), Err(Error::EvenCharacteristic)));
        assert!(matches!(g.sqrt(g.one()), Err(Error::EvenCharacteristic)));
    }

    #[test]
    fn character_examples() {
        let f = FieldSpec::new(7, 1).unwrap();
        assert_eq!(f.quadratic_character(f.neg(f.one())).unwrap(), -1);
        assert_eq!(f.quadratic_character(f.zero()).unwrap(), 0);
        for q in [3u64, 7, 9, 11, 27] {
            let f = FieldSpec::of_order(q).unwrap();
            let s: i32 = f
                .elements()
                .map(|w| f.quadratic_character(w).unwrap() as i32)
                .sum();
            assert_eq!(s, 0, "q = {q}");
        }
    }

    #[test]
    fn sqrt_examples() {
        let f = FieldSpec::new(7, 1).unwrap();
        assert_eq!(f.sqrt(f.zero()).unwrap(), Some(vec![f.zero()]));
        assert_eq!(f.sqrt(f.elem(2)).unwrap(), Some(vec![f.elem(3), f.elem(4)]));
        assert_eq!(f.sqrt(f.elem(3)).unwrap(), None);

        // squaring table oracle in GF(9)
        let f = FieldSpec::of_order(9).unwrap();
        let mut roots = vec![Vec::new(); 9];
        for s in f.elements() {
            roots[f.square(s).index() as usize].push(s);
        }
        let squares = (1..9).filter(|&i| !roots[i].is_empty()).count();
        assert_eq!(squares, 4);
        for x in f.nonzero_elements() {
            let expect = &roots[x.index() as usize];
            match f.sqrt(x).unwrap() {
                Some(r) => {
                    assert_eq!(f.quadratic_character(x).unwrap(), 1);
                    assert_eq!(&r, expect);
                    assert_eq!(r.len(), 2);
                }
                None => assert!(expect.is_empty()),
            }
        }
    }

    #[test]
    fn irreducibility_matches_root_and_factor_search() {
        // brute force: a monic quartic over F_3 is reducible iff it has a
        // root or is a product of two monic quadratics
        let p = 3u32;
        let mut reducible = std::collections::HashSet::new();
        for a in 0..9u32 {
            for b in 0..9u32 {
                let f = [a % 3, a / 3, 1];
                let g = [b % 3, b / 3, 1];
                reducible.insert(poly_mul(&f, &g, p));
            }
        }
        for low in 0..81u32 {
            let mut f = digits(low, p, 4);
            f.push(1);
            let has_root = (0..p).any(|x| poly_eval(&f, x, p) == 0);
            let expect = !has_root && !reducible.contains(&f);
            assert_eq!(is_irreducible(&f, p), expect, "{f:?}");
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
