//! A fixed matrix of property checks across every module.

use num_bigint::BigInt;
use num_prime::nt_funcs::is_prime64;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::assignment::{exhaustive_min, for_each_permutation, hungarian};
use crate::cyclo::CycInt;
use crate::geometry::{hodge_polygon, weight, LatticePoint};
use crate::oracle::{oracle_np, trace_histogram, OracleOptions, SumAlgorithm, SumOptions, SumSpec};
use crate::slopes::{alpha, b_sequence, g_map, minimal_assignment, predicted_slopes};
use crate::Rational;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
    pub passed: bool,
}

type Outcome = std::result::Result<String, String>;

const SEED: u64 = 0x5eed_0f_7011c;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn primes_between(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|&p| is_prime64(p))
}

pub fn run_selftest() -> SelftestReport {
    let table: [(&'static str, fn() -> Outcome); 12] = [
        ("weight-axioms", weight_axioms),
        ("hodge-closed-form", hodge_closed_form_check),
        ("alpha-range-and-zero-locus", alpha_range),
        ("g-bijection", g_bijection),
        ("minimizer-characterization", minimizer_characterization),
        ("assignment-solvers-agree", assignment_solvers),
        ("predicted-slope-symmetry", slope_symmetry),
        ("pi-valuation", pi_valuation),
        ("sum-engines-agree", engines_agree),
        ("functional-equation", functional_equation),
        ("hodge-bound-and-purity", hodge_bound_and_purity),
        ("ordinary-small-primes", ordinary_small_primes),
    ];
    let checks: Vec<Check> = table
        .iter()
        .map(|&(name, f)| match f() {
            Ok(detail) => Check { name, passed: true, detail },
            Err(detail) => Check { name, passed: false, detail },
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    SelftestReport { checks, passed }
}

fn weight_axioms() -> Outcome {
    let mut pairs = 0;
    for n in 2..=6u32 {
        let ni = n as i64;
        let one = Rational::from_integer(1.into());
        for v in [LatticePoint::new(ni, 0), LatticePoint::new(0, 1), LatticePoint::new(-1, -1)] {
            ensure(weight(n, v) == one, || format!("vertex {v:?} of Δ has weight ≠ 1 for n = {n}"))?;
        }
        let range = -2 * ni..=2 * ni;
        let pts: Vec<LatticePoint> = range
            .clone()
            .flat_map(|a| range.clone().map(move |b| LatticePoint::new(a, b)))
            .collect();
        for &u in &pts {
            let wu = weight(n, u);
            ensure(wu >= Rational::zero() && (wu.is_zero() == (u == LatticePoint::new(0, 0))), || {
                format!("ω{u:?} = {wu} for n = {n}")
            })?;
            let scaled = LatticePoint::new(3 * u.a, 3 * u.b);
            ensure(weight(n, scaled) == &wu * Rational::from_integer(3.into()), || {
                format!("ω is not homogeneous at {u:?}, n = {n}")
            })?;
            for &v in pts.iter().step_by(7) {
                ensure(weight(n, u + v) <= &wu + weight(n, v), || {
                    format!("ω is not subadditive at {u:?} + {v:?}, n = {n}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} subadditivity pairs over n = 2..6"))
}

fn hodge_closed_form_check() -> Outcome {
    for n in 2..=12 {
        hodge_polygon(n).map_err(|e| e.to_string())?;
    }
    Ok("lattice-point Hodge polygons equal the closed form for n = 2..12".into())
}

fn alpha_range() -> Outcome {
    let mut count = 0;
    for n in 2..=8u32 {
        let ni = n as i64;
        for p in primes_between(2, 60).filter(|&p| n as u64 % p != 0) {
            for i in -3 * ni..=3 * ni {
                for j in -3 * ni..=3 * ni {
                    let a = alpha(n, p, i, j);
                    ensure((0..ni).contains(&a), || format!("α = {a} out of range (n={n}, p={p}, i={i}, j={j})"))?;
                    let divisible = (i - p as i64 * j).rem_euclid(ni) == 0;
                    ensure((a == 0) == divisible, || format!("zero locus wrong at n={n}, p={p}, i={i}, j={j}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} values checked"))
}

fn g_bijection() -> Outcome {
    for n in 2..=8u32 {
        for p in primes_between(2, 60).filter(|&p| n as u64 % p != 0) {
            let g = g_map(n, p).map_err(|e| e.to_string())?;
            let mut sorted = g.clone();
            sorted.sort_unstable();
            let nu = n as usize;
            ensure(sorted == (0..=2 * nu).collect::<Vec<_>>(), || format!("g is not a bijection (n={n}, p={p})"))?;
            ensure(g[0] == 0 && g[nu] == nu && g[2 * nu] == 2 * nu, || format!("g moves 0, n or 2n (n={n}, p={p})"))?;
            let identity = g.iter().enumerate().all(|(i, &x)| i == x);
            ensure(identity == (p % n as u64 == 1), || format!("identity iff p ≡ 1 mod n fails (n={n}, p={p})"))?;
        }
    }
    Ok("n = 2..8, primes below 60".into())
}

/// For `m < n`, minimizers are exactly the permutations with
/// `m - i - 1 ≤ α_{m-1, δ(i)}` for all `i`.
fn minimizer_characterization() -> Outcome {
    let mut cases = 0;
    for n in 3..=7u32 {
        for p in primes_between(n as u64 + 1, 60).filter(|&p| n as u64 % p != 0) {
            for m in 1..n as usize {
                let cost: Vec<Vec<i64>> = (0..m)
                    .map(|i| (0..m).map(|j| alpha(n, p, i as i64, j as i64)).collect())
                    .collect();
                let min = exhaustive_min(&cost).cost;
                let mut mismatch = None;
                for_each_permutation(m, |perm| {
                    let minimal = perm.iter().enumerate().map(|(i, &d)| cost[i][d]).sum::<i64>() == min;
                    let admissible = perm
                        .iter()
                        .enumerate()
                        .all(|(i, &d)| (m - i - 1) as i64 <= alpha(n, p, m as i64 - 1, d as i64));
                    if minimal != admissible && mismatch.is_none() {
                        mismatch = Some(perm.to_vec());
                    }
                });
                if let Some(perm) = mismatch {
                    return Err(format!("n={n}, p={p}, m={m}: permutation {perm:?} breaks the equivalence"));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (n, p, m) cases"))
}

fn assignment_solvers() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    for trial in 0..300 {
        let m = rng.gen_range(1..=7);
        let cost: Vec<Vec<i64>> = (0..m).map(|_| (0..m).map(|_| rng.gen_range(-20..40)).collect()).collect();
        let ex = exhaustive_min(&cost);
        let (h, perm) = hungarian(&cost);
        let realized: i64 = perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        ensure(ex.cost == h && realized == h, || format!("trial {trial}: {cost:?}"))?;
    }
    for n in 2..=6u32 {
        for p in primes_between(n as u64 + 1, 80).filter(|&p| n as u64 % p != 0) {
            for m in 1..=n as usize + 1 {
                minimal_assignment(n, p, m).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok("300 random matrices and all α matrices for n ≤ 6, p < 80".into())
}

fn slope_symmetry() -> Outcome {
    let two = Rational::from_integer(2.into());
    let mut count = 0;
    for n in 2..=8u32 {
        for p in primes_between(n as u64 + 1, 200).filter(|&p| n as u64 % p != 0) {
            let b = b_sequence(n, p).map_err(|e| e.to_string())?;
            ensure(b[0] == 0 && b[n as usize] == 0, || format!("B_0 or B_n non-zero (n={n}, p={p}): {b:?}"))?;
            let s = predicted_slopes(n, p, &b);
            let nn = 2 * n as usize;
            for i in 0..=nn {
                ensure(&s[i] + &s[nn - i] == two, || format!("s_{i} + s_{} ≠ 2 (n={n}, p={p})", nn - i))?;
            }
            let total: Rational = s.iter().sum();
            ensure(total == Rational::from_integer((nn as i64 + 1).into()), || format!("Σ s_i ≠ 2n+1 (n={n}, p={p})"))?;
            count += 1;
        }
    }
    Ok(format!("{count} (n, p) pairs"))
}

fn random_cyc(rng: &mut StdRng, p: u64) -> CycInt {
    let coeffs = (0..p - 1).map(|_| BigInt::from(rng.gen_range(-6i64..=6))).collect();
    CycInt::from_coeffs(p, coeffs).expect("length p - 1")
}

fn pi_valuation() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    let mut count = 0;
    for p in [2u64, 3, 5, 7, 11] {
        let pi = CycInt::one(p) - CycInt::zeta_power(p, 1);
        ensure(pi.pi_valuation() == Some(1), || format!("v(1 - ζ) ≠ 1 for p = {p}"))?;
        ensure(CycInt::from_int(p, p).pi_valuation() == Some(p - 1), || format!("v(p) ≠ p - 1 for p = {p}"))?;
        for _ in 0..60 {
            // Bias towards high valuation by multiplying in powers of π.
            let x = &random_cyc(&mut rng, p) * &pi_pow(&pi, rng.gen_range(0..4));
            let y = &random_cyc(&mut rng, p) * &pi_pow(&pi, rng.gen_range(0..4));
            let (vx, vy) = (x.pi_valuation(), y.pi_valuation());
            if let (Some(a), Some(b)) = (vx, vy) {
                ensure((&x * &y).pi_valuation() == Some(a + b), || format!("v not multiplicative, p = {p}"))?;
                if let Some(c) = (&x + &y).pi_valuation() {
                    ensure(c >= a.min(b), || format!("v(x + y) < min, p = {p}"))?;
                    if a != b {
                        ensure(c == a.min(b), || format!("strict ultrametric fails, p = {p}"))?;
                    }
                }
                for j in 2..p {
                    ensure(x.galois(j).pi_valuation() == vx, || format!("v not Galois-invariant, p = {p}"))?;
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} random pairs"))
}

fn pi_pow(pi: &CycInt, e: u32) -> CycInt {
    (0..e).fold(CycInt::one(pi.p()), |acc, _| &acc * pi)
}

fn engines_agree() -> Outcome {
    let opts = SumOptions::default();
    let mut count = 0;
    for (n, p, k) in [(2u32, 3u64, 3usize), (2, 5, 2), (3, 2, 4), (3, 5, 2), (3, 7, 2), (4, 3, 3), (5, 11, 1), (2, 13, 2)] {
        for t in 1..p {
            for spec in [SumSpec::family(n, p, k, t), SumSpec::companion(n, p, k, t)] {
                let a = trace_histogram(&spec, SumAlgorithm::Naive, &opts).map_err(|e| e.to_string())?;
                let b = trace_histogram(&spec, SumAlgorithm::Convolution, &opts).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("engines differ on {spec:?}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} sums"))
}

fn functional_equation() -> Outcome {
    for (n, p) in [(2u32, 5u64), (2, 3)] {
        for t in 1..p {
            let opts = OracleOptions { max_k: Some(2 * n as usize + 2), ..Default::default() };
            let r = oracle_np(n, p, t, &opts).map_err(|e| e.to_string())?;
            let want: Vec<usize> = (n as usize + 2..=2 * n as usize + 1).collect();
            let c = &r.completion;
            ensure(c.cross_checked == want && c.vanishes_above_degree == Some(true), || {
                format!("n={n}, p={p}, t={t}: {c:?}")
            })?;
        }
    }
    Ok("direct high-k coefficients agree with completion for n = 2, p ∈ {3, 5}".into())
}

fn hodge_bound_and_purity() -> Outcome {
    let mut worst = 0.0f64;
    for (n, p) in [(2u32, 3u64), (2, 7), (3, 2), (3, 5), (4, 3), (4, 5)] {
        for t in 1..p {
            let r = oracle_np(n, p, t, &OracleOptions::default()).map_err(|e| e.to_string())?;
            ensure(r.hodge_ok, || format!("NP below HP for n={n}, p={p}, t={t}"))?;
            ensure(r.purity_ok, || format!("|β| ≠ p for n={n}, p={p}, t={t}: {}", r.purity_max_deviation))?;
            worst = worst.max(r.purity_max_deviation);
        }
    }
    Ok(format!("worst relative purity deviation {worst:.1e}"))
}

fn ordinary_small_primes() -> Outcome {
    for (n, p) in [(2u32, 3u64), (2, 5), (3, 7), (4, 5)] {
        for t in 1..p {
            let r = oracle_np(n, p, t, &OracleOptions::default()).map_err(|e| e.to_string())?;
            ensure(r.polygon == r.hodge, || format!("n={n}, p={p}, t={t} is not ordinary"))?;
        }
    }
    Ok("p ≡ 1 mod n gives NP = HP".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let r = run_selftest();
        for c in &r.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
