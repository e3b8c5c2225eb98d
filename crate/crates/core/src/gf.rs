//! Finite fields `F_{p^d}` in a polynomial basis.
//!
//! The modulus is the first monic irreducible of degree `d` in the order
//! that reads the coefficient vector `(c_0, …, c_{d-1})` as a base-`p`
//! integer, and the generator is the first element in the same order whose
//! multiplicative order is `p^d - 1`. Both choices are deterministic.

use num_prime::nt_funcs::{factorize64, is_prime64};

use crate::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 53;

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 {
        a * b % p
    } else {
        (a as u128 * b as u128 % p as u128) as u64
    }
}

/// Field element as coefficients of `1, X, …, X^{d-1}`, each in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    d: usize,
    /// Monic modulus, low degree first, length `d + 1`.
    modulus: Vec<u64>,
    generator: FieldElem,
    /// `trace(X^i)` for `i < d`.
    trace_form: Vec<u64>,
    size: u64,
}

// Dense polynomials over F_p, low degree first, used only while searching for
// the modulus.
mod poly {
    use super::mulmod;

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        pow_mod(a, p - 2, p)
    }

    pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b, p);
            }
            b = mulmod(b, b, p);
            e >>= 1;
        }
        r
    }

    /// Remainder of `a` modulo the monic-or-not `m` (non-zero).
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = mulmod(r[top], lead_inv, p);
            if c != 0 {
                for (j, &mj) in m.iter().enumerate() {
                    let idx = top - dm + j;
                    r[idx] = (r[idx] + p - mulmod(c, mj, p)) % p;
                }
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn mulmod_poly(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn pow_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = rem(&[1], m, p);
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod_poly(&r, &b, m, p);
            }
            b = mulmod_poly(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            *o = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    /// Rabin-style test: `f` of degree `d` is irreducible iff it shares no
    /// factor with `X^{p^i} - X` for `1 ≤ i ≤ d/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let d = f.len() - 1;
        if d <= 1 {
            return d == 1;
        }
        let x = vec![0, 1];
        let mut h = x.clone();
        for _ in 0..d / 2 {
            h = pow_poly(&h, p, f, p);
            let g = gcd(f, &sub(&h, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl FiniteField {
    /// Builds `F_{p^d}`.
    pub fn new(p: u64, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("field degree must be at least 1"));
        }
        if !is_prime64(p) {
            return Err(Error::invalid(format!("p = {p} is not prime")));
        }
        let size = (0..d)
            .try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|&s| s <= MAX_FIELD_SIZE))
            .ok_or(Error::DomainTooLarge {
                what: "field size p^d",
                size: (p as u128).saturating_pow(d as u32),
                bound: MAX_FIELD_SIZE as u128,
            })?;

        let modulus = Self::find_modulus(p, d);
        let mut field = FiniteField {
            p,
            d,
            modulus,
            generator: FieldElem { coeffs: vec![0; d] },
            trace_form: Vec::new(),
            size,
        };
        field.trace_form = (0..d)
            .map(|i| {
                let mut c = vec![0u64; d];
                c[i] = 1;
                field.trace_frobenius(&FieldElem { coeffs: c })
            })
            .collect();
        field.generator = field.find_generator();
        Ok(field)
    }

    fn find_modulus(p: u64, d: usize) -> Vec<u64> {
        let mut tail = vec![0u64; d];
        loop {
            let mut f = tail.clone();
            f.push(1);
            if poly::is_irreducible(&f, p) {
                return f;
            }
            // Increment the base-p counter, constant term fastest.
            for c in tail.iter_mut() {
                *c += 1;
                if *c < p {
                    break;
                }
                *c = 0;
            }
        }
    }

    fn find_generator(&self) -> FieldElem {
        let order = self.size - 1;
        let primes: Vec<u64> = factorize64(order).into_keys().collect();
        (1..self.size)
            .map(|i| self.from_index(i))
            .find(|x| self.has_order(x, order, &primes))
            .expect("the multiplicative group is cyclic")
    }

    /// `x` has multiplicative order exactly `order`, given its prime divisors.
    fn has_order(&self, x: &FieldElem, order: u64, primes: &[u64]) -> bool {
        let one = self.one();
        self.pow(x, order) == one && primes.iter().all(|&r| self.pow(x, order / r) != one)
    }

    /// Prime divisors of `p^d - 1`.
    pub fn group_order_primes(&self) -> Vec<u64> {
        factorize64(self.size - 1).into_keys().collect()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `p^d`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> &FieldElem {
        &self.generator
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.d] }
    }

    pub fn one(&self) -> FieldElem {
        self.constant(1)
    }

    pub fn constant(&self, c: u64) -> FieldElem {
        let mut coeffs = vec![0; self.d];
        coeffs[0] = c % self.p;
        FieldElem { coeffs }
    }

    /// Element whose coordinates are the base-`p` digits of `index`.
    pub fn from_index(&self, mut index: u64) -> FieldElem {
        let coeffs = (0..self.d)
            .map(|_| {
                let c = index % self.p;
                index /= self.p;
                c
            })
            .collect();
        FieldElem { coeffs }
    }

    pub fn to_index(&self, x: &FieldElem) -> u64 {
        x.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() != self.d || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::invalid("coefficient vector does not describe a field element"));
        }
        Ok(FieldElem { coeffs: coeffs.to_vec() })
    }

    pub fn is_zero(&self, x: &FieldElem) -> bool {
        x.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(&a, &b)| (a + b) % p).collect() }
    }

    pub fn sub(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let p = self.p;
        FieldElem { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(&a, &b)| (a + p - b) % p).collect() }
    }

    pub fn scale(&self, x: &FieldElem, c: u64) -> FieldElem {
        let c = c % self.p;
        FieldElem { coeffs: x.coeffs.iter().map(|&a| mulmod(a, c, self.p)).collect() }
    }

    pub fn mul(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let (p, d) = (self.p, self.d);
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(a, b, p)) % p;
            }
        }
        // X^d = -(m_0 + … + m_{d-1} X^{d-1}).
        for top in (d..2 * d - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for j in 0..d {
                let idx = top - d + j;
                prod[idx] = (prod[idx] + p - mulmod(c, self.modulus[j], p)) % p;
            }
        }
        prod.truncate(d);
        FieldElem { coeffs: prod }
    }

    pub fn pow(&self, x: &FieldElem, mut e: u64) -> FieldElem {
        let mut r = self.one();
        let mut b = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(&self, x: &FieldElem) -> Option<FieldElem> {
        (!self.is_zero(x)).then(|| self.pow(x, self.size - 2))
    }

    pub fn frobenius(&self, x: &FieldElem) -> FieldElem {
        self.pow(x, self.p)
    }

    /// `Σ_{i<d} x^{p^i}`, which lands in the prime field.
    pub fn trace_frobenius(&self, x: &FieldElem) -> u64 {
        let mut acc = self.zero();
        let mut y = x.clone();
        for _ in 0..self.d {
            acc = self.add(&acc, &y);
            y = self.frobenius(&y);
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0), "trace not in prime field");
        acc.coeffs[0]
    }

    /// Trace via the precomputed linear form.
    pub fn trace(&self, x: &FieldElem) -> u64 {
        x.coeffs
            .iter()
            .zip(&self.trace_form)
            .fold(0, |acc, (&c, &t)| (acc + mulmod(c, t, self.p)) % self.p)
    }

    pub fn trace_form(&self) -> &[u64] {
        &self.trace_form
    }

    /// `g^0, g^1, …, g^{q-2}` with their traces.
    pub fn unit_walk(&self) -> UnitWalk<'_> {
        UnitWalk { field: self, index: 0, current: self.one() }
    }

    /// `trace(g^i)` for `0 ≤ i < q - 1`.
    pub fn trace_table(&self) -> Vec<u32> {
        assert!(self.p <= u32::MAX as u64);
        self.unit_walk().map(|(_, _, t)| t as u32).collect()
    }
}

pub struct UnitWalk<'a> {
    field: &'a FiniteField,
    index: u64,
    current: FieldElem,
}

impl Iterator for UnitWalk<'_> {
    type Item = (u64, FieldElem, u64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.index >= self.field.size - 1 {
            return None;
        }
        let next = self.field.mul(&self.current, &self.field.generator);
        let elem = std::mem::replace(&mut self.current, next);
        let tr = self.field.trace(&elem);
        let i = self.index;
        self.index += 1;
        Some((i, elem, tr))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.field.size - 1 - self.index) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for UnitWalk<'_> {}
