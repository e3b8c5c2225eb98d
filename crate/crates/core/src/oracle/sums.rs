//! Exact toric exponential sums
//! `S = Σ_{x,y ∈ F*_{p^k}} ζ_p^{tr(c1·x^n + c2·y + c3·t/(xy))}`.
//!
//! Both engines produce the trace histogram `M_v = #{(x, y) : tr(...) = v}`,
//! from which `S = Σ_v M_v ζ^v`.
//!
//! * [`SumAlgorithm::Naive`] walks every pair with field arithmetic.
//! * [`SumAlgorithm::Convolution`] writes `x = g^i`, `y = g^j`, so the sum
//!   becomes `Σ_l c_l (a ⊛ b)_l` for three sequences of p-th roots of unity.
//!   For every p-th root `η` in a word-sized prime field the cyclic
//!   convolution is done with an NTT, giving `Σ_v M_v η^v`; the `p` evaluations
//!   (plus the trivial one) are then inverted exactly.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::CycInt;
use crate::gf::FiniteField;
use crate::ntt::{ceil_log2, find_ntt_primes, NttPlan, NttPrime};
use crate::{Error, Result};

/// Bound on `p^{2k}` for the naive engine.
pub const NAIVE_MAX_PAIRS: u128 = 1_000_000_000;
/// Bound on `p^k` for the convolution engine.
pub const CONVOLUTION_MAX_FIELD: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SumAlgorithm {
    Naive,
    #[default]
    Convolution,
}

impl std::str::FromStr for SumAlgorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(SumAlgorithm::Naive),
            "convolution" => Ok(SumAlgorithm::Convolution),
            other => Err(Error::invalid(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// One sum over `F*_{p^k}`; coefficients are residues mod `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SumSpec {
    pub n: u32,
    pub p: u64,
    pub k: usize,
    pub c1: u64,
    pub c2: u64,
    pub c3: u64,
    pub t: u64,
}

impl SumSpec {
    /// `x^n + y + t/(xy)`.
    pub fn family(n: u32, p: u64, k: usize, t: u64) -> Self {
        SumSpec { n, p, k, c1: 1, c2: 1, c3: 1, t: t % p }
    }

    /// The polynomial whose reciprocal roots are `p^2/β`: `x^n + y - t/(xy)`
    /// for odd `n`, `-x^n + y + t/(xy)` for even `n`.
    pub fn companion(n: u32, p: u64, k: usize, t: u64) -> Self {
        let t = t % p;
        if n % 2 == 1 {
            SumSpec { n, p, k, c1: 1, c2: 1, c3: 1, t: (p - t) % p }
        } else {
            SumSpec { n, p, k, c1: p - 1, c2: 1, c3: 1, t }
        }
    }

    /// Same sum with every coefficient multiplied by `j`; its value is the
    /// Galois conjugate `σ_j` of the original.
    pub fn twisted(&self, j: u64) -> Self {
        let p = self.p;
        SumSpec { c1: self.c1 * j % p, c2: self.c2 * j % p, c3: self.c3 * j % p, ..*self }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        if self.k == 0 {
            return Err(Error::invalid("extension degree k must be at least 1"));
        }
        if self.n as u64 % self.p == 0 {
            return Err(Error::invalid(format!("p = {} divides n = {}", self.p, self.n)));
        }
        for (name, c) in [("c1", self.c1), ("c2", self.c2), ("c3", self.c3), ("t", self.t)] {
            if c % self.p == 0 {
                return Err(Error::invalid(format!("{name} must be a unit mod p")));
            }
        }
        if self.p > u32::MAX as u64 {
            return Err(Error::invalid("p is too large for trace tables"));
        }
        Ok(())
    }

    fn field_size(&self) -> Result<u64> {
        (0..self.k)
            .try_fold(1u64, |acc, _| acc.checked_mul(self.p))
            .ok_or(Error::DomainTooLarge { what: "p^k", size: u128::MAX, bound: u64::MAX as u128 })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SumOptions {
    pub mem_budget_bytes: Option<u64>,
}

pub fn toric_sum(spec: &SumSpec, algorithm: SumAlgorithm) -> Result<CycInt> {
    toric_sum_with(spec, algorithm, &SumOptions::default())
}

pub fn toric_sum_with(spec: &SumSpec, algorithm: SumAlgorithm, opts: &SumOptions) -> Result<CycInt> {
    let hist = trace_histogram(spec, algorithm, opts)?;
    Ok(CycInt::from_histogram(spec.p, &hist))
}

pub fn trace_histogram(spec: &SumSpec, algorithm: SumAlgorithm, opts: &SumOptions) -> Result<Vec<u64>> {
    spec.validate()?;
    match algorithm {
        SumAlgorithm::Naive => naive_histogram(spec),
        SumAlgorithm::Convolution => {
            let ctx = ConvolutionContext::new(spec.p, spec.k, opts)?;
            ctx.histogram(spec)
        }
    }
}

fn naive_histogram(spec: &SumSpec) -> Result<Vec<u64>> {
    let q = spec.field_size()?;
    let pairs = q as u128 * q as u128;
    if pairs > NAIVE_MAX_PAIRS {
        return Err(Error::DomainTooLarge { what: "p^(2k) for the naive sum", size: pairs, bound: NAIVE_MAX_PAIRS });
    }
    let f = FiniteField::new(spec.p, spec.k)?;
    let (p, d) = (spec.p, spec.k);
    let c3t = spec.c3 * spec.t % p;
    let units: Vec<_> = (1..q).map(|e| f.from_index(e)).collect();
    let inverses: Vec<_> = units.iter().map(|u| f.inv(u).expect("unit")).collect();
    let inv_coords: Vec<u64> = inverses.iter().flat_map(|y| y.coeffs().to_vec()).collect();
    let y_term: Vec<u64> = units.iter().map(|y| spec.c2 * f.trace(y) % p).collect();
    let basis_x = (d > 1).then(|| f.from_index(p));

    let hist = units
        .par_iter()
        .zip(inverses.par_iter())
        .fold(
            || vec![0u64; p as usize],
            |mut hist, (x, x_inv)| {
                let a = f.trace(&f.scale(&f.pow(x, spec.n as u64), spec.c1));
                // tr(w·z) is linear in the coordinates of z.
                let mut w = f.scale(x_inv, c3t);
                let mut lambda = Vec::with_capacity(d);
                for i in 0..d {
                    lambda.push(f.trace(&w));
                    if i + 1 < d {
                        w = f.mul(&w, basis_x.as_ref().unwrap());
                    }
                }
                for (yi, &b) in y_term.iter().enumerate() {
                    let coords = &inv_coords[yi * d..(yi + 1) * d];
                    let c: u64 = lambda.iter().zip(coords).map(|(l, z)| l * z).sum::<u64>() % p;
                    hist[((a + b + c) % p) as usize] += 1;
                }
                hist
            },
        )
        .reduce(
            || vec![0u64; p as usize],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(hist)
}

/// Field, trace table and NTT setup for the convolution engine over one
/// `F_{p^k}`; reusable for every coefficient choice.
pub struct ConvolutionContext {
    p: u64,
    /// `q - 1`.
    order: usize,
    trace: Vec<u32>,
    primes: Vec<NttPrime>,
    log_len: u32,
}

/// Estimated peak memory of the convolution engine in bytes.
pub fn convolution_memory_estimate(p: u64, k: usize, threads: usize) -> u64 {
    let order = p.saturating_pow(k as u32).saturating_sub(1);
    let len = 1u64 << ceil_log2((2 * order).saturating_sub(1).max(1) as usize);
    // Trace table and three index tables (u32), twiddles (2 × len/… u64), and
    // two padded work arrays per worker.
    order * 16 + len * 16 + threads as u64 * len * 16
}

impl ConvolutionContext {
    pub fn new(p: u64, k: usize, opts: &SumOptions) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("extension degree k must be at least 1"));
        }
        let q = (0..k)
            .try_fold(1u64, |acc, _| acc.checked_mul(p).filter(|&s| s <= CONVOLUTION_MAX_FIELD))
            .ok_or(Error::DomainTooLarge {
                what: "p^k for the convolution sum",
                size: (p as u128).saturating_pow(k as u32),
                bound: CONVOLUTION_MAX_FIELD as u128,
            })?;
        if let Some(budget) = opts.mem_budget_bytes {
            let needed = convolution_memory_estimate(p, k, rayon::current_num_threads());
            if needed > budget {
                return Err(Error::MemoryBudget { needed_bytes: needed, budget_bytes: budget });
            }
        }
        let field = FiniteField::new(p, k)?;
        let order = (q - 1) as usize;
        let trace = field.trace_table();
        let log_len = ceil_log2(2 * order - 1);
        // Histogram entries are at most order^2; each prime is ≥ 2^60.
        let bound_bits = 2 * (64 - (order as u64).leading_zeros());
        let count = (bound_bits as usize + 1) / 60 + 1;
        let primes = find_ntt_primes(p, log_len, count)?;
        Ok(ConvolutionContext { p, order, trace, primes, log_len })
    }

    pub fn histogram(&self, spec: &SumSpec) -> Result<Vec<u64>> {
        spec.validate()?;
        if spec.p != self.p || self.order as u64 + 1 != spec.field_size()? {
            return Err(Error::invalid("sum specification does not match the prepared field"));
        }
        let (p, order) = (self.p, self.order);
        let n = spec.n as usize % order.max(1);
        let c3t = spec.c3 * spec.t % p;
        let tr = &self.trace;
        let a_idx: Vec<u32> = (0..order).map(|i| (spec.c1 * tr[(n * i) % order] as u64 % p) as u32).collect();
        let b_idx: Vec<u32> = (0..order).map(|j| (spec.c2 * tr[j] as u64 % p) as u32).collect();
        let c_idx: Vec<u32> = (0..order).map(|l| (c3t * tr[(order - l) % order] as u64 % p) as u32).collect();

        let residues: Vec<Vec<u64>> = self
            .primes
            .iter()
            .map(|prime| self.histogram_mod(prime, &a_idx, &b_idx, &c_idx))
            .collect();
        let moduli: Vec<u64> = self.primes.iter().map(|q| q.mont.modulus()).collect();
        let total = order as u128 * order as u128;
        let hist: Vec<u64> = (0..p as usize)
            .map(|v| {
                let r: Vec<u64> = residues.iter().map(|res| res[v]).collect();
                crt(&r, &moduli).to_u64().expect("histogram entry fits in u64")
            })
            .collect();
        let sum: u128 = hist.iter().map(|&x| x as u128).sum();
        if sum != total {
            return Err(Error::Inconsistent(format!(
                "convolution histogram sums to {sum}, expected {total}"
            )));
        }
        Ok(hist)
    }

    /// `M_v mod P` for one NTT prime.
    fn histogram_mod(&self, prime: &NttPrime, a_idx: &[u32], b_idx: &[u32], c_idx: &[u32]) -> Vec<u64> {
        let m = prime.mont;
        let (p, order) = (self.p as usize, self.order);
        let plan = NttPlan::new(prime, self.log_len);
        let len = plan.len();

        // evals[j] = Σ_v M_v η^{jv}.
        let mut evals = vec![0u64; p];
        evals[0] = m.to_mont(((order as u128 * order as u128) % m.modulus() as u128) as u64);
        let others: Vec<(usize, u64)> = (1..p)
            .into_par_iter()
            .map(|j| {
                let eta_j = m.pow(prime.eta, j as u64);
                let mut pw = Vec::with_capacity(p);
                let mut cur = m.one();
                for _ in 0..p {
                    pw.push(cur);
                    cur = m.mul(cur, eta_j);
                }
                let mut fa = vec![0u64; len];
                let mut fb = vec![0u64; len];
                for i in 0..order {
                    fa[i] = pw[a_idx[i] as usize];
                    fb[i] = pw[b_idx[i] as usize];
                }
                plan.forward(&mut fa);
                plan.forward(&mut fb);
                for (x, y) in fa.iter_mut().zip(&fb) {
                    *x = m.mul(*x, *y);
                }
                drop(fb);
                plan.inverse(&mut fa);
                let mut acc = 0u64;
                for l in 0..order {
                    let wrap = if l + order < len { fa[l + order] } else { 0 };
                    acc = m.add(acc, m.mul(pw[c_idx[l] as usize], m.add(fa[l], wrap)));
                }
                (j, acc)
            })
            .collect();
        for (j, e) in others {
            evals[j] = e;
        }

        // M_v = p^{-1} Σ_j evals[j] η^{-jv}.
        let eta_inv = m.inv(prime.eta);
        let p_inv = m.inv(m.to_mont(p as u64));
        (0..p)
            .map(|v| {
                let step = m.pow(eta_inv, v as u64);
                let mut w = m.one();
                let mut acc = 0u64;
                for e in &evals {
                    acc = m.add(acc, m.mul(*e, w));
                    w = m.mul(w, step);
                }
                m.from_mont(m.mul(acc, p_inv))
            })
            .collect()
    }
}

/// Smallest non-negative integer with the given residues (pairwise coprime moduli).
fn crt(residues: &[u64], moduli: &[u64]) -> BigInt {
    let mut x = BigInt::from(residues[0]);
    let mut modulus = BigInt::from(moduli[0]);
    for (&r, &m) in residues.iter().zip(moduli).skip(1) {
        let mb = BigInt::from(m);
        // x + modulus·s ≡ r (mod m).
        let inv = (&modulus % &mb).modpow(&BigInt::from(m - 2), &mb);
        let diff = ((BigInt::from(r) - &x) % &mb + &mb) % &mb;
        let s = diff * inv % &mb;
        x += &modulus * s;
        modulus *= mb;
    }
    x
}
