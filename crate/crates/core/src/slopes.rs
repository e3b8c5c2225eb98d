//! Slope combinatorics for the family: the residues `α_{i,j}`, the
//! permutation `g`, minimal assignments `N_m` and their differences `B_m`,
//! the two arithmetic hypotheses on `n` and `p`, and the predicted Newton
//! polygon.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_prime::nt_funcs::is_prime64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::assignment::{exhaustive_min, for_each_permutation, hungarian};
use crate::geometry::hodge_closed_form;
use crate::json::serialize_bigint;
use crate::polygon::PolygonData;
use crate::{Error, Rational, Result};

/// Largest `m` for which the exhaustive permutation scan runs.
pub const EXHAUSTIVE_LIMIT: usize = 9;

/// Parameters of one member of the family over `F_q`, `q = p^a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub n: u32,
    pub p: u64,
    pub a: u32,
    /// Residue class of `t` in `F_p^*`; absent when a result does not depend on it.
    pub t_residue: Option<u64>,
}

impl FamilyParams {
    pub fn new(n: u32, p: u64, t_residue: Option<u64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("n must be at least 2, got {n}")));
        }
        if !is_prime64(p) {
            return Err(Error::invalid(format!("p = {p} is not prime")));
        }
        if n as u64 % p == 0 {
            return Err(Error::invalid(format!("p = {p} divides n = {n}")));
        }
        if let Some(t) = t_residue {
            if t == 0 || t >= p {
                return Err(Error::invalid(format!("t must lie in 1..{}, got {t}", p - 1)));
            }
        }
        Ok(FamilyParams { n, p, a: 1, t_residue })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentResult {
    pub m: usize,
    pub n_m: i64,
    /// Number of minimizing permutations; only known when the exhaustive scan ran.
    pub minimizer_count: Option<u64>,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VandermondeEntry {
    pub all_nonzero: bool,
    #[serde(serialize_with = "serialize_bigint")]
    pub max_abs_det: BigInt,
    pub subsets: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assumption14Report {
    pub n: u32,
    pub per_m: BTreeMap<usize, VandermondeEntry>,
    pub overall: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assumption16Report {
    pub n: u32,
    pub p: u64,
    pub ok: bool,
    /// `ord_p((k-1)!(p-k)! - (-1)^k)` for `k = 1..n-1`.
    pub per_k: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeBounds {
    /// Primes strictly above this get the `F_p` slope formula.
    #[serde(serialize_with = "serialize_bigint")]
    pub thm15: BigInt,
    /// Primes strictly above this (plus the factorial condition) get the `F_q` statement.
    #[serde(serialize_with = "serialize_bigint")]
    pub thm17: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictionReport {
    pub params: FamilyParams,
    pub b: Vec<i64>,
    pub polygon: PolygonData,
    pub ordinary: bool,
    pub bounds: PrimeBounds,
    /// `p` exceeds `bounds.thm15`, so the slope formula is a theorem here.
    pub certified: bool,
    pub warnings: Vec<String>,
}

/// `α_{i,j} = i - p·j + n·⌈(p·j - i)/n⌉`, always in `[0, n-1]`.
pub fn alpha(n: u32, p: u64, i: i64, j: i64) -> i64 {
    let n = n as i64;
    let p = p as i64;
    let x = p * j - i;
    i - p * j + n * Integer::div_ceil(&x, &n)
}

/// The inverse of `p` modulo `n`, normalized into `(0, n)`.
pub fn varpi(n: u32, p: u64) -> Result<i64> {
    if n < 2 {
        return Err(Error::invalid(format!("n must be at least 2, got {n}")));
    }
    let ext = Integer::extended_gcd(&((p % n as u64) as i64), &(n as i64));
    if ext.gcd != 1 {
        return Err(Error::invalid(format!("gcd(p, n) = gcd({p}, {n}) is not 1")));
    }
    Ok(ext.x.rem_euclid(n as i64))
}

/// The permutation `g` of `{0, …, 2n}`: fixes `0, n, 2n` and otherwise
/// multiplies by `p^{-1}` mod `n` inside each of the two blocks.
pub fn g_map(n: u32, p: u64) -> Result<Vec<usize>> {
    let w = varpi(n, p)?;
    let n = n as i64;
    let g = (0..=2 * n)
        .map(|i| {
            let reduced = w * i + n * Integer::div_ceil(&(-w * i), &n);
            let gi = if i == 0 || i == n || i == 2 * n {
                i
            } else if i < n {
                reduced
            } else {
                n + reduced
            };
            gi as usize
        })
        .collect();
    Ok(g)
}

fn alpha_matrix(n: u32, p: u64, m: usize) -> Vec<Vec<i64>> {
    (0..m)
        .map(|i| (0..m).map(|j| alpha(n, p, i as i64, j as i64)).collect())
        .collect()
}

/// `N_m`, the minimum of `Σ α_{i,δ(i)}` over permutations `δ` of `0..m`.
///
/// The Hungarian solver always runs; for `m ≤ 9` the exhaustive scan also runs
/// and must agree, and supplies the minimizer count.
pub fn minimal_assignment(n: u32, p: u64, m: usize) -> Result<AssignmentResult> {
    if m < 1 || m > n as usize + 1 {
        return Err(Error::invalid(format!("m must lie in 1..={}, got {m}", n + 1)));
    }
    varpi(n, p)?;
    let cost = alpha_matrix(n, p, m);
    let (hcost, hwit) = hungarian(&cost);
    if m <= EXHAUSTIVE_LIMIT {
        let ex = exhaustive_min(&cost);
        if ex.cost != hcost {
            return Err(Error::Inconsistent(format!(
                "assignment solvers disagree for n={n}, p={p}, m={m}: exhaustive {} vs Hungarian {hcost}",
                ex.cost
            )));
        }
        return Ok(AssignmentResult {
            m,
            n_m: ex.cost,
            minimizer_count: Some(ex.minimizers),
            witness: ex.witness,
        });
    }
    Ok(AssignmentResult { m, n_m: hcost, minimizer_count: None, witness: hwit })
}

/// Number of permutations `δ` of `0..m` with `m-i-1 ≤ α_{m-1,δ(i)}` for all `i`.
/// This characterizes the minimizers for `m < n`.
pub fn admissible_permutation_count(n: u32, p: u64, m: usize) -> u64 {
    let last: Vec<i64> = (0..m).map(|j| alpha(n, p, m as i64 - 1, j as i64)).collect();
    let mut count = 0;
    for_each_permutation(m, |perm| {
        if perm.iter().enumerate().all(|(i, &d)| (m - i - 1) as i64 <= last[d]) {
            count += 1;
        }
    });
    count
}

fn check_prime_above_n(n: u32, p: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("n must be at least 2, got {n}")));
    }
    if !is_prime64(p) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    if p <= n as u64 {
        return Err(Error::invalid(format!("p = {p} must exceed n = {n}")));
    }
    Ok(())
}

/// `[B_0, …, B_n]` with `B_m = N_{m+1} - N_m` and `N_0 = 0`.
pub fn b_sequence(n: u32, p: u64) -> Result<Vec<i64>> {
    check_prime_above_n(n, p)?;
    let mut nm = vec![0i64];
    for m in 1..=n as usize + 1 {
        nm.push(minimal_assignment(n, p, m)?.n_m);
    }
    Ok(nm.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Entry `(r, c)` is `Π_{j<c} (x_r - j)²`.
fn vandermonde_like(xs: &[i64]) -> Vec<Vec<BigInt>> {
    xs.iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(xs.len());
            let mut acc = BigInt::one();
            for c in 0..xs.len() as i64 {
                row.push(acc.clone());
                let f = BigInt::from(x - c);
                acc *= &f * &f;
            }
            row
        })
        .collect()
}

/// Fraction-free (Bareiss) determinant over the integers.
pub fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let m = a.len();
    if m == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..m - 1 {
        if a[k][k].is_zero() {
            match (k + 1..m).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[m - 1][m - 1]
}

fn for_each_subset(n: usize, m: usize, mut f: impl FnMut(&[i64])) {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        if cur.len() == m {
            f(cur);
            return;
        }
        for x in start..n {
            if n - x < m - cur.len() {
                break;
            }
            cur.push(x as i64);
            rec(x + 1, n, m, cur, f);
            cur.pop();
        }
    }
    rec(0, n, m, &mut Vec::with_capacity(m), &mut f);
}

/// Scans every `m`-subset of `[0, n-1]` for `0 ≤ m ≤ n-1` and records whether
/// all Vandermonde-like determinants are non-zero and the largest `|det|`.
pub fn vandermonde_report(n: u32) -> Result<Assumption14Report> {
    if n < 2 {
        return Err(Error::invalid(format!("n must be at least 2, got {n}")));
    }
    let mut per_m = BTreeMap::new();
    for m in 0..n as usize {
        let mut all_nonzero = true;
        let mut max_abs = BigInt::zero();
        let mut subsets = 0u64;
        for_each_subset(n as usize, m, |xs| {
            let det = determinant(vandermonde_like(xs));
            subsets += 1;
            if det.is_zero() {
                all_nonzero = false;
            }
            let a = det.abs();
            if a > max_abs {
                max_abs = a;
            }
        });
        per_m.insert(m, VandermondeEntry { all_nonzero, max_abs_det: max_abs, subsets });
    }
    let overall = per_m.values().all(|e| e.all_nonzero);
    Ok(Assumption14Report { n, per_m, overall })
}

/// p-adic valuation of a non-zero integer.
pub fn ord_p_int(x: &BigInt, p: u64) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        x = q;
        v += 1;
    }
}

fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// Checks `ord_p((k-1)!(p-k)! - (-1)^k) = 1` for `1 ≤ k ≤ n-1`.
pub fn assumption16(n: u32, p: u64) -> Result<Assumption16Report> {
    check_prime_above_n(n, p)?;
    let per_k: Vec<u32> = (1..n as u64)
        .map(|k| {
            let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let x = factorial(k - 1) * factorial(p - k) - sign;
            ord_p_int(&x, p)
        })
        .collect();
    let ok = per_k.iter().all(|&v| v == 1);
    Ok(Assumption16Report { n, p, ok, per_k })
}

/// Prime thresholds above which the two main slope statements apply.
pub fn prime_bounds(n: u32) -> Result<PrimeBounds> {
    let report = vandermonde_report(n)?;
    prime_bounds_from(&report)
}

pub fn prime_bounds_from(report: &Assumption14Report) -> Result<PrimeBounds> {
    if !report.overall {
        let bad: Vec<_> = report.per_m.iter().filter(|(_, e)| !e.all_nonzero).map(|(m, _)| *m).collect();
        return Err(Error::AssumptionFailed(format!(
            "a Vandermonde-like determinant vanishes for n = {} at m in {bad:?}",
            report.n
        )));
    }
    let n = BigInt::from(report.n);
    let cubic: BigInt = BigInt::from(2) * n.pow(3) - n.pow(2) - &n + 1;
    let thm15 = report.per_m.values().map(|e| e.max_abs_det.clone()).fold(cubic, |a, b| a.max(b));
    let thm17: BigInt = BigInt::from(4) * n.pow(4) + BigInt::from(4) * n.pow(3) + BigInt::from(3) * n.pow(2) + &n + 1;
    Ok(PrimeBounds { thm15, thm17 })
}

/// Predicted slopes `s_i = i/n + (2n+1)B_i/(n(p-1))` for `i ≤ n` and
/// `s_i = i/n - (2n+1)B_{2n-i}/(n(p-1))` above, kept in index order.
pub fn predicted_slopes(n: u32, p: u64, b: &[i64]) -> Vec<Rational> {
    let ni = n as i64;
    let den = BigInt::from(ni) * BigInt::from(p - 1);
    let scale = |bi: i64| Rational::new(BigInt::from((2 * ni + 1) * bi), den.clone());
    (0..=2 * ni)
        .map(|i| {
            let base = Rational::new(i.into(), ni.into());
            if i <= ni {
                base + scale(b[i as usize])
            } else {
                base - scale(b[(2 * ni - i) as usize])
            }
        })
        .collect()
}

pub fn predicted_np(n: u32, p: u64) -> Result<PredictionReport> {
    check_prime_above_n(n, p)?;
    let params = FamilyParams::new(n, p, None)?;
    let b = b_sequence(n, p)?;
    let slopes = predicted_slopes(n, p, &b);
    let polygon = PolygonData::from_slopes(slopes);
    let bounds = prime_bounds(n)?;
    let certified = BigInt::from(p) > bounds.thm15;
    let mut warnings = Vec::new();
    if !certified {
        warnings.push(format!(
            "p = {p} does not exceed the prime bound {}; slopes are reported but not guaranteed",
            bounds.thm15
        ));
    }
    if !polygon.is_convex() {
        warnings.push("predicted slope list is not nondecreasing".to_string());
    }
    Ok(PredictionReport {
        params,
        b,
        polygon,
        ordinary: p % n as u64 == 1,
        bounds,
        certified,
        warnings,
    })
}

/// `max_i |s_i^pred - i/n|` for the limit scan.
pub fn max_deviation_from_hodge(n: u32, p: u64) -> Result<Rational> {
    let report = predicted_np(n, p)?;
    Ok(report
        .polygon
        .max_slope_deviation(&hodge_closed_form(n))
        .expect("same length"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha(3, 5, 0, 0), 0);
        assert_eq!(alpha(3, 5, 1, 1), 2);
        assert_eq!(alpha(3, 5, 0, 1), 1);
        assert_eq!(alpha(3, 5, 1, 0), 1);
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_map(3, 7).unwrap(), vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(g_map(3, 5).unwrap(), vec![0, 2, 1, 3, 5, 4, 6]);
        assert!(g_map(4, 2).is_err());
        assert!(g_map(1, 5).is_err());
    }

    #[test]
    fn assignment_examples() {
        let r1 = minimal_assignment(3, 5, 1).unwrap();
        assert_eq!((r1.n_m, r1.minimizer_count), (0, Some(1)));
        let r2 = minimal_assignment(3, 5, 2).unwrap();
        assert_eq!((r2.n_m, r2.minimizer_count), (2, Some(2)));
        let r3 = minimal_assignment(3, 5, 3).unwrap();
        assert_eq!(r3.n_m, 0);
        let g = g_map(3, 5).unwrap();
        assert_eq!(r3.witness, g[..3].to_vec());
        assert!(minimal_assignment(3, 5, 0).is_err());
        assert!(minimal_assignment(3, 5, 5).is_err());
    }

    #[test]
    fn b_sequences() {
        assert_eq!(b_sequence(3, 47).unwrap(), vec![0, 2, -2, 0]);
        assert_eq!(b_sequence(4, 127).unwrap(), vec![0, 2, 0, -2, 0]);
        assert_eq!(b_sequence(3, 7).unwrap(), vec![0; 4]);
        assert_eq!(b_sequence(5, 11).unwrap(), vec![0; 6]);
    }

    #[test]
    fn vandermonde_small() {
        let r = vandermonde_report(3).unwrap();
        assert!(r.overall);
        assert_eq!(r.per_m[&0].max_abs_det, BigInt::one());
        assert_eq!(r.per_m[&1].max_abs_det, BigInt::one());
        assert_eq!(r.per_m[&2].max_abs_det, BigInt::from(4));
        assert_eq!(r.per_m[&2].subsets, 3);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = |v: &[&[i64]]| v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        assert_eq!(determinant(m(&[&[1, 1, 0], &[1, 4, 4], &[1, 9, 36]])), BigInt::from(76));
        assert_eq!(determinant(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(m(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn assumption16_examples() {
        let r = assumption16(3, 7).unwrap();
        assert!(r.ok);
        assert_eq!(r.per_k, vec![1, 1]);
        assert_eq!(assumption16(2, 5).unwrap().per_k, vec![2]);
        assert_eq!(assumption16(2, 13).unwrap().per_k, vec![2]);
        assert!(!assumption16(2, 13).unwrap().ok);
    }

    #[test]
    fn bounds() {
        let b3 = prime_bounds(3).unwrap();
        assert_eq!((b3.thm15, b3.thm17), (BigInt::from(43), BigInt::from(463)));
        let b4 = prime_bounds(4).unwrap();
        assert_eq!((b4.thm15, b4.thm17), (BigInt::from(109), BigInt::from(1333)));
    }

    #[test]
    fn prediction_fixture_cubic() {
        let r = predicted_np(3, 47).unwrap();
        let d = rat(7, 69);
        let want = vec![
            rat(0, 1),
            rat(1, 3) + &d,
            rat(2, 3) - &d,
            rat(1, 1),
            rat(4, 3) + &d,
            rat(5, 3) - &d,
            rat(2, 1),
        ];
        assert_eq!(r.polygon.slopes(), want.as_slice());
        assert!(r.certified && !r.ordinary && r.warnings.is_empty());
        let ord = predicted_np(3, 7).unwrap();
        assert!(ord.ordinary);
        assert!(!ord.certified);
        assert_eq!(ord.warnings.len(), 1);
    }

    #[test]
    fn prediction_rejects_bad_primes() {
        assert!(predicted_np(3, 3).is_err());
        assert!(predicted_np(3, 2).is_err());
        assert!(predicted_np(4, 9).is_err());
    }
}
