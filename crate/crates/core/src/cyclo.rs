//! Exact arithmetic in `Z[ζ_p]` and the valuation at `π = 1 - ζ_p`.
//!
//! Elements are stored in the power basis `ζ^0, …, ζ^{p-2}`; anything of
//! higher degree is folded with `ζ^p = 1` and
//! `ζ^{p-1} = -(1 + ζ + … + ζ^{p-2})`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::{Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u64) -> Self {
        assert!(p >= 2, "cyclotomic prime must be at least 2");
        CycInt { p, coeffs: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn from_int(p: u64, k: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[0] = k.into();
        x
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    /// `ζ^{v mod p}`.
    pub fn zeta_power(p: u64, v: i64) -> Self {
        let mut expanded = vec![BigInt::zero(); p as usize];
        expanded[v.rem_euclid(p as i64) as usize] = BigInt::one();
        Self::from_expanded(p, expanded)
    }

    /// Reduces `Σ c_i ζ^i` for an arbitrary-length coefficient vector.
    pub fn from_expanded(p: u64, coeffs: Vec<BigInt>) -> Self {
        let pu = p as usize;
        let mut folded = vec![BigInt::zero(); pu];
        for (i, c) in coeffs.into_iter().enumerate() {
            folded[i % pu] += c;
        }
        let top = folded.pop().expect("p >= 2");
        for c in folded.iter_mut() {
            *c -= &top;
        }
        CycInt { p, coeffs: folded }
    }

    /// `Σ_v counts[v] ζ^v` for a histogram of length `p`.
    pub fn from_histogram(p: u64, counts: &[u64]) -> Self {
        assert_eq!(counts.len(), p as usize, "histogram length must be p");
        Self::from_expanded(p, counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Canonical coordinates; any vector of length `p - 1` is valid.
    pub fn from_coeffs(p: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() as u64 != p - 1 {
            return Err(Error::invalid(format!(
                "expected {} coordinates for p = {p}, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycInt { p, coeffs })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &CycInt) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MixedPrime(self.p, other.p));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CycInt) -> Result<CycInt> {
        self.check_same(other)?;
        Ok(CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &CycInt) -> Result<CycInt> {
        self.check_same(other)?;
        Ok(CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &CycInt) -> Result<CycInt> {
        self.check_same(other)?;
        let len = self.coeffs.len();
        let mut prod = vec![BigInt::zero(); 2 * len - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_expanded(self.p, prod))
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Divides every coordinate by `k`; `None` unless all are divisible.
    pub fn div_exact_int(&self, k: &BigInt) -> Option<CycInt> {
        assert!(!k.is_zero(), "division by zero");
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(CycInt { p: self.p, coeffs })
    }

    /// Galois action `σ_j: ζ ↦ ζ^j`, `p ∤ j`.
    pub fn galois(&self, j: u64) -> CycInt {
        assert!(j % self.p != 0, "σ_j needs p ∤ j");
        let pu = self.p as usize;
        let mut expanded = vec![BigInt::zero(); pu];
        for (i, c) in self.coeffs.iter().enumerate() {
            expanded[(i as u64 * j % self.p) as usize] += c;
        }
        Self::from_expanded(self.p, expanded)
    }

    /// Field norm to `Q`: the product of all `p - 1` conjugates.
    pub fn norm(&self) -> BigInt {
        let prod = (2..self.p).fold(self.clone(), |acc, j| &acc * &self.galois(j));
        debug_assert!(prod.coeffs[1..].iter().all(Zero::is_zero), "norm not rational");
        prod.coeffs[0].clone()
    }

    /// Exact quotient `self / other` in `Z[ζ_p]`, via `1/y = Π_{σ≠1} σ(y) / N(y)`.
    pub fn div_exact(&self, other: &CycInt) -> Result<CycInt> {
        self.check_same(other)?;
        if other.is_zero() {
            return Err(Error::InexactDivision("division by zero".into()));
        }
        let cofactor = (2..self.p).fold(CycInt::one(self.p), |acc, j| &acc * &other.galois(j));
        let norm = (&cofactor * other).coeffs[0].clone();
        (self * &cofactor)
            .div_exact_int(&norm)
            .ok_or_else(|| Error::InexactDivision("quotient is not a cyclotomic integer".into()))
    }

    /// Largest `v` with `π^v | self`, `None` for zero.
    pub fn pi_valuation(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let p = BigInt::from(self.p);
        let pm1 = self.p - 1;
        let len = self.coeffs.len();
        let mut x = self.coeffs.clone();
        let mut v = 0u64;
        // Strip whole powers of p = unit · π^{p-1} first.
        loop {
            if x.iter().all(|c| c.is_multiple_of(&p)) {
                for c in x.iter_mut() {
                    *c = &*c / &p;
                }
                v += pm1;
            } else {
                break;
            }
        }
        loop {
            let s: BigInt = x.iter().sum();
            let (sp, r) = s.div_rem(&p);
            if !r.is_zero() {
                return Some(v);
            }
            // z(T) = x(T) - (x(1)/p)·Φ_p(T) vanishes at T = 1; z ≡ x mod Φ_p.
            let mut z: Vec<BigInt> = x.iter().map(|c| c - &sp).collect();
            z.push(-sp);
            // z = (T - 1)·q, and x = (1 - ζ)·(-q).
            let mut q = vec![BigInt::zero(); len];
            q[len - 1] = z[len].clone();
            for i in (1..len).rev() {
                q[i - 1] = &z[i] + &q[i];
            }
            debug_assert!((&z[0] + &q[0]).is_zero());
            x = q.into_iter().map(|c| -c).collect();
            v += 1;
        }
    }

    /// `ord_p = v_π / (p - 1)`.
    pub fn ord_p(&self) -> Result<Rational> {
        self.pi_valuation()
            .map(|v| Rational::new(v.into(), (self.p - 1).into()))
            .ok_or_else(|| Error::invalid("valuation of zero is infinite"))
    }

    /// Image under the complex embedding `ζ ↦ e^{2πi·j/p}`.
    pub fn embed(&self, j: u64) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| Complex64::from_polar(1.0, theta * i as f64) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// Coordinates as decimal strings, `ζ^0` first.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_decimal_strings(p: u64, coords: &[String]) -> Result<Self> {
        let coeffs = coords
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| Error::invalid(format!("bad coordinate {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(p, coeffs)
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycInt> for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                self.$checked(rhs).expect("mixed cyclotomic primes")
            }
        }
        impl $tr<CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$checked(&rhs).expect("mixed cyclotomic primes")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { p: self.p, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

/// Element of `Q(ζ_p)` as a cyclotomic integer over a positive integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycRat {
    num: CycInt,
    den: BigInt,
}

impl CycRat {
    pub fn new(num: CycInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let mut r = CycRat { num, den };
        r.reduce();
        Ok(r)
    }

    pub fn from_int(x: CycInt) -> Self {
        CycRat { num: x, den: BigInt::one() }
    }

    fn reduce(&mut self) {
        let g = self.num.coeffs.iter().fold(self.den.clone(), |g, c| g.gcd(c));
        if !g.is_one() && !g.is_zero() {
            self.num = self.num.div_exact_int(&g).expect("gcd divides");
            self.den = &self.den / &g;
        }
    }

    pub fn numerator(&self) -> &CycInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn add(&self, other: &CycRat) -> Result<CycRat> {
        let num = self.num.scale(&other.den).checked_add(&other.num.scale(&self.den))?;
        CycRat::new(num, &self.den * &other.den)
    }

    pub fn mul(&self, other: &CycRat) -> Result<CycRat> {
        CycRat::new(self.num.checked_mul(&other.num)?, &self.den * &other.den)
    }

    pub fn neg(&self) -> CycRat {
        CycRat { num: -&self.num, den: self.den.clone() }
    }

    pub fn div_int(&self, k: &BigInt) -> Result<CycRat> {
        CycRat::new(self.num.clone(), &self.den * k)
    }

    /// The underlying cyclotomic integer when the denominator is 1.
    pub fn into_integral(self) -> Option<CycInt> {
        self.den.is_one().then_some(self.num)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(p: u64, v: &[i64]) -> CycInt {
        CycInt::from_expanded(p, v.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn zeta_basics() {
        assert_eq!(CycInt::zeta_power(5, 0), CycInt::one(5));
        let sum = (0..7).fold(CycInt::zero(7), |acc, v| acc + CycInt::zeta_power(7, v));
        assert!(sum.is_zero());
        assert_eq!(CycInt::zeta_power(5, 7), CycInt::zeta_power(5, 2));
        assert_eq!(CycInt::zeta_power(2, 1), CycInt::from_int(2, -1));
    }

    #[test]
    fn valuation_examples() {
        for p in [2u64, 3, 5, 7, 47] {
            assert_eq!(CycInt::zero(p).pi_valuation(), None);
            let pi = CycInt::one(p) - CycInt::zeta_power(p, 1);
            assert_eq!(pi.pi_valuation(), Some(1));
            assert_eq!(CycInt::from_int(p, p).pi_valuation(), Some(p - 1));
            let pi_pm1 = (1..p - 1).fold(pi.clone(), |acc, _| &acc * &pi);
            assert_eq!(pi_pm1.pi_valuation(), Some(p - 1));
            assert_eq!(CycInt::from_int(p, p).ord_p().unwrap(), Rational::one());
            assert!(CycInt::zeta_power(p, 1).ord_p().unwrap().is_zero());
            let pi3 = &(&pi * &pi) * &pi;
            assert_eq!(pi3.ord_p().unwrap(), Rational::new(3.into(), (p - 1).into()));
        }
        assert!(CycInt::zero(5).ord_p().is_err());
    }

    #[test]
    fn exact_division() {
        let x = cyc(7, &[3, -1, 4, 1, -5, 9]);
        let y = cyc(7, &[2, 7, 1, 8, 2, 8]);
        let xy = &x * &y;
        assert_eq!(xy.div_exact(&y).unwrap(), x);
        assert!(CycInt::one(7).div_exact(&CycInt::from_int(7, 2)).is_err());
        assert!(x.div_exact(&CycInt::zero(7)).is_err());
        assert_eq!(CycInt::from_int(5, 3).norm(), BigInt::from(81));
    }

    #[test]
    fn mixed_primes_are_rejected() {
        assert!(matches!(CycInt::one(5).checked_add(&CycInt::one(7)), Err(Error::MixedPrime(5, 7))));
    }

    #[test]
    fn cycrat_reduces() {
        let r = CycRat::new(cyc(5, &[4, 6]), BigInt::from(-2)).unwrap();
        assert_eq!(r.denominator(), &BigInt::one());
        assert_eq!(r.clone().into_integral().unwrap(), cyc(5, &[-2, -3]));
        let half = CycRat::new(CycInt::one(5), BigInt::from(2)).unwrap();
        let one = half.add(&half).unwrap();
        assert_eq!(one.into_integral().unwrap(), CycInt::one(5));
    }

    fn arb_cyc(p: u64) -> impl Strategy<Value = CycInt> {
        proptest::collection::vec(-50i64..50, (p - 1) as usize)
            .prop_map(move |v| CycInt::from_coeffs(p, v.into_iter().map(BigInt::from).collect()).unwrap())
    }

    fn arb_p() -> impl Strategy<Value = u64> {
        prop_oneof![Just(2u64), Just(3u64), Just(5u64), Just(7u64), Just(11u64)]
    }

    proptest! {
        #[test]
        fn valuation_is_multiplicative((x, y) in arb_p().prop_flat_map(|p| (arb_cyc(p), arb_cyc(p)))) {
            prop_assume!(!x.is_zero() && !y.is_zero());
            let vx = x.pi_valuation().unwrap();
            let vy = y.pi_valuation().unwrap();
            prop_assert_eq!((&x * &y).pi_valuation(), Some(vx + vy));
        }

        #[test]
        fn valuation_is_ultrametric((x, y) in arb_p().prop_flat_map(|p| (arb_cyc(p), arb_cyc(p)))) {
            prop_assume!(!x.is_zero() && !y.is_zero());
            let vx = x.pi_valuation().unwrap();
            let vy = y.pi_valuation().unwrap();
            if let Some(vs) = (&x + &y).pi_valuation() {
                prop_assert!(vs >= vx.min(vy));
                if vx != vy {
                    prop_assert_eq!(vs, vx.min(vy));
                }
            }
        }

        #[test]
        fn valuation_is_galois_stable((x, j) in arb_p().prop_flat_map(|p| (arb_cyc(p), 1..p))) {
            prop_assert_eq!(x.galois(j).pi_valuation(), x.pi_valuation());
        }

        #[test]
        fn reduction_preserves_complex_value(
            (p, raw) in arb_p().prop_flat_map(|p| (Just(p), proptest::collection::vec(-1000i64..1000, 0..(3 * p as usize))))
        ) {
            let x = CycInt::from_expanded(p, raw.iter().map(|&c| BigInt::from(c)).collect());
            for j in 1..p {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / p as f64;
                let direct: Complex64 = raw
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| Complex64::from_polar(1.0, theta * i as f64) * c as f64)
                    .sum();
                let got = x.embed(j);
                let scale = raw.iter().map(|c| c.abs() as f64).sum::<f64>().max(1.0);
                prop_assert!((got - direct).norm() <= 1e-9 * scale);
            }
        }
    }
}
