//! From power sums to the L-polynomial and its Newton polygon.
//!
//! With `S_k = Σ β_j^k`, the reciprocal L-function is
//! `Π (1 - β_j T) = Σ (-1)^j e_j T^j`, so the `e_j` follow from Newton's
//! identities.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::cyclo::{CycInt, CycRat};
use crate::polygon::PolygonData;
use crate::{Error, Rational, Result};

/// `e_0, …, e_K` from `S_1, …, S_K`.
pub fn lpoly_from_power_sums(p: u64, sums: &[CycInt]) -> Result<Vec<CycInt>> {
    if sums.is_empty() {
        return Err(Error::invalid("need at least one power sum"));
    }
    let mut e: Vec<CycRat> = vec![CycRat::from_int(CycInt::one(p))];
    for k in 1..=sums.len() {
        let mut acc = CycRat::from_int(CycInt::zero(p));
        for i in 1..=k {
            let term = e[k - i].mul(&CycRat::from_int(sums[i - 1].clone()))?;
            acc = if i % 2 == 1 { acc.add(&term)? } else { acc.add(&term.neg())? };
        }
        e.push(acc.div_int(&BigInt::from(k))?);
    }
    e.into_iter()
        .enumerate()
        .map(|(k, x)| {
            x.into_integral()
                .ok_or_else(|| Error::Inconsistent(format!("e_{k} is not a cyclotomic integer")))
        })
        .collect()
}

/// Output of [`complete_by_functional_equation`].
#[derive(Clone, Debug)]
pub struct Completion {
    /// `e_0, …, e_{2n+1}`.
    pub coeffs: Vec<CycInt>,
    /// Companion index `j` used to solve for `e_{2n+1}`.
    pub pivot: usize,
    /// Indices whose directly computed value was confirmed by the relation.
    pub cross_checked: Vec<usize>,
}

/// Rebuilds `e_0..e_{2n+1}` of `f_t` from its low coefficients `e_f`
/// (at least `e_0..e_{n+1}`) and the companion's `e_c` (`e_0..e_n`), using
/// `e_j(companion) = q^{2j} e_{2n+1-j}(f) / e_{2n+1}(f)` with `q = p`.
pub fn complete_by_functional_equation(n: usize, p: u64, e_f: &[CycInt], e_c: &[CycInt]) -> Result<Completion> {
    let deg = 2 * n + 1;
    if e_f.len() < n + 2 || e_c.len() < n + 1 {
        return Err(Error::invalid(format!(
            "need e_0..e_{} of f and e_0..e_{n} of the companion",
            n + 1
        )));
    }
    let known_f = (e_f.len() - 1).min(deg);
    let q2 = |j: usize| BigInt::from(p).pow(2 * j as u32);

    // Pivot: the largest usable j with a non-zero companion coefficient.
    let lowest = (deg - known_f).max(1);
    let pivot = (lowest..=n)
        .rev()
        .find(|&j| !e_c[j].is_zero())
        .ok_or_else(|| Error::Degenerate(format!("companion coefficients e_{lowest}..e_{n} all vanish")))?;
    let top = e_f[deg - pivot]
        .scale(&q2(pivot))
        .div_exact(&e_c[pivot])
        .map_err(|e| Error::Inconsistent(format!("solving for e_{deg}: {e}")))?;
    if top.is_zero() {
        return Err(Error::Inconsistent(format!("e_{deg} vanishes; degree is below {deg}")));
    }

    let mut coeffs: Vec<CycInt> = e_f[..n + 2].to_vec();
    coeffs.resize(deg + 1, CycInt::zero(p));
    coeffs[deg] = top.clone();
    let mut cross_checked = Vec::new();
    for j in 1..=n {
        let idx = deg - j;
        let value = (&e_c[j] * &top)
            .div_exact_int(&q2(j))
            .ok_or_else(|| Error::InexactDivision(format!("e_{idx} from the companion e_{j}")))?;
        if idx <= known_f && j != pivot {
            if value != e_f[idx] {
                return Err(Error::Inconsistent(format!(
                    "functional equation disagrees with the direct value of e_{idx}"
                )));
            }
            cross_checked.push(idx);
        }
        coeffs[idx] = value;
    }
    if known_f == deg {
        if e_f[deg] != top {
            return Err(Error::Inconsistent(format!(
                "functional equation disagrees with the direct value of e_{deg}"
            )));
        }
        cross_checked.push(deg);
    }
    cross_checked.sort_unstable();
    Ok(Completion { coeffs, pivot, cross_checked })
}

/// `ord_q` of each coefficient (`None` for zero) and the lower hull of the
/// finite points.
pub fn newton_polygon_of(coeffs: &[CycInt], a: u32) -> Result<(PolygonData, Vec<Option<Rational>>)> {
    if coeffs.is_empty() || coeffs[0] != CycInt::one(coeffs[0].p()) {
        return Err(Error::invalid("L-polynomial must have constant term 1"));
    }
    let a = Rational::from_integer(BigInt::from(a));
    let ords: Vec<Option<Rational>> = coeffs
        .iter()
        .map(|c| c.ord_p().ok().map(|o| o / &a))
        .collect();
    let points: Vec<(i64, Rational)> = ords
        .iter()
        .enumerate()
        .filter_map(|(k, o)| o.clone().map(|o| (k as i64, o)))
        .collect();
    let polygon = PolygonData::lower_hull(&points).expect("e_0 is present");
    Ok((polygon, ords))
}

/// `|β|/q - 1` for every reciprocal root, under `ζ ↦ e^{2πi·j/p}`.
///
/// Roots of `Σ (-1)^k e_k q^{-k} u^k` are `u = q/β`, so purity puts them all on
/// the unit circle.
pub fn purity_deviations(coeffs: &[CycInt], q: f64, embedding: u64) -> Vec<f64> {
    let poly: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            c.embed(embedding) * (sign / q.powi(k as i32))
        })
        .collect();
    polynomial_roots(&poly).into_iter().map(|u| 1.0 / u.norm() - 1.0).collect()
}

/// All complex roots by Durand–Kerner iteration followed by Newton polishing.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().map_or(false, |x| x.norm() == 0.0) {
        c.pop();
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, &a| acc * z + a);
    let deriv = |z: Complex64| {
        monic
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::zero(), |acc, (i, &a)| acc * z + a * i as f64)
    };
    let radius = 1.0 + monic[..deg].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = Complex64::from_polar(0.9 * radius.min(2.0), 0.4);
    let mut roots: Vec<Complex64> = (0..deg).map(|i| seed.powu(i as u32 + 1)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let zi = roots[i];
            let denom = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Complex64::one(), |acc, (_, &zj)| acc * (zi - zj));
            let step = eval(zi) / denom;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    for z in roots.iter_mut() {
        for _ in 0..5 {
            let d = deriv(*z);
            if d.norm() == 0.0 {
                break;
            }
            *z -= eval(*z) / d;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn int(p: u64, k: i64) -> CycInt {
        CycInt::from_int(p, k)
    }

    #[test]
    fn newton_identities_integer_roots() {
        // Roots 1 and 2: S_1 = 3, S_2 = 5.
        let e = lpoly_from_power_sums(5, &[int(5, 3), int(5, 5)]).unwrap();
        assert_eq!(e, vec![int(5, 1), int(5, 3), int(5, 2)]);
        // Extra sums of a degree-2 polynomial give vanishing e_3.
        let e = lpoly_from_power_sums(5, &[int(5, 3), int(5, 5), int(5, 9)]).unwrap();
        assert!(e[3].is_zero());
    }

    #[test]
    fn first_identity() {
        let s1 = CycInt::zeta_power(7, 3);
        let e = lpoly_from_power_sums(7, &[s1.clone()]).unwrap();
        assert_eq!(e[1], s1);
    }

    #[test]
    fn non_integral_sums_are_rejected() {
        // S_1 = 1, S_2 = 0 would need e_2 = 1/2.
        assert!(matches!(
            lpoly_from_power_sums(5, &[int(5, 1), int(5, 0)]),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn polygon_of_simple_coefficients() {
        let u = CycInt::zeta_power(5, 2);
        let coeffs = vec![CycInt::one(5), u.clone(), u.scale(&BigInt::from(5))];
        let (poly, ords) = newton_polygon_of(&coeffs, 1).unwrap();
        assert_eq!(poly.slopes(), &[rat(0, 1), rat(1, 1)]);
        assert_eq!(ords[2], Some(rat(1, 1)));
        let with_gap = vec![CycInt::one(5), CycInt::zero(5), int(5, 25)];
        let (poly, ords) = newton_polygon_of(&with_gap, 1).unwrap();
        assert_eq!(poly.slopes(), &[rat(1, 1), rat(1, 1)]);
        assert_eq!(ords[1], None);
    }

    #[test]
    fn completion_reproduces_a_symmetric_polynomial() {
        // n = 1 toy: roots β_1, β_2, β_3 with companion roots q²/β.
        // Take β = (1, q, q²) over Z, q = 3: e = (1, 13, 39, 27);
        // companion roots (9, 3, 1) have the same e.
        let p = 3;
        let e: Vec<CycInt> = [1, 13, 39, 27].iter().map(|&x| int(p, x)).collect();
        let c = complete_by_functional_equation(1, p, &e[..3], &e[..2]).unwrap();
        assert_eq!(c.coeffs, e);
        assert_eq!(c.pivot, 1);
        assert!(c.cross_checked.is_empty());
        let full = complete_by_functional_equation(1, p, &e, &e[..2]).unwrap();
        assert_eq!(full.cross_checked, vec![3]);
    }

    #[test]
    fn completion_detects_inconsistency() {
        let p = 3;
        let e: Vec<CycInt> = [1, 13, 39].iter().map(|&x| int(p, x)).collect();
        let bad_c: Vec<CycInt> = [1, 14].iter().map(|&x| int(p, x)).collect();
        assert!(complete_by_functional_equation(1, p, &e, &bad_c).is_err());
        let zero_c: Vec<CycInt> = [1, 0].iter().map(|&x| int(p, x)).collect();
        assert!(matches!(
            complete_by_functional_equation(1, p, &e, &zero_c),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn roots_of_known_polynomial() {
        // (u - 1)(u + 2)(u - i)
        let i = Complex64::i();
        let c = vec![2.0 * i, Complex64::new(-2.0, 0.0) - i, Complex64::new(1.0, 0.0) - i, Complex64::one()];
        let mut r = polynomial_roots(&c);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - Complex64::new(-2.0, 0.0)).norm() < 1e-10);
        assert!((r[1] - i).norm() < 1e-10);
        assert!((r[2] - Complex64::one()).norm() < 1e-10);
    }
}
