//! Number-theoretic transforms over word-sized primes `P < 2^62`.
//!
//! Arithmetic is done in Montgomery form. Convolutions use power-of-two
//! lengths; cyclic convolutions of other lengths are obtained by zero-padding
//! to a linear convolution and folding. The forward transform leaves its
//! output in bit-reversed order, which pointwise products do not mind.

use num_prime::nt_funcs::is_prime64;

use crate::{Error, Result};

/// Montgomery arithmetic modulo an odd `m < 2^62`.
#[derive(Clone, Copy, Debug)]
pub struct Montgomery {
    m: u64,
    /// `-m^{-1} mod 2^64`.
    neg_inv: u64,
    /// `2^128 mod m`.
    r2: u64,
}

impl Montgomery {
    pub fn new(m: u64) -> Self {
        assert!(m % 2 == 1 && m < (1 << 62), "modulus must be odd and below 2^62");
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % m as u128) as u64;
        let r2 = (r as u128 * r as u128 % m as u128) as u64;
        Montgomery { m, neg_inv: inv.wrapping_neg(), r2 }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    #[inline(always)]
    fn reduce(&self, t: u128) -> u64 {
        let u = (t as u64).wrapping_mul(self.neg_inv);
        let s = ((t + u as u128 * self.m as u128) >> 64) as u64;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.m, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut r = self.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.m - 2)
    }
}

/// A prime `P ≡ 1 (mod step)` together with elements of order `2^log_len`
/// and `p` (both in Montgomery form).
#[derive(Clone, Debug)]
pub struct NttPrime {
    pub mont: Montgomery,
    pub log_len: u32,
    /// Primitive `2^log_len`-th root of unity.
    pub root: u64,
    /// Primitive `p`-th root of unity.
    pub eta: u64,
    pub p: u64,
}

/// Up to `count` distinct primes below `2^62` that are `≡ 1` modulo
/// `2^log_len · p`, searched downward from the top of the range.
pub fn find_ntt_primes(p: u64, log_len: u32, count: usize) -> Result<Vec<NttPrime>> {
    let step = if p == 2 { 1u64 << log_len.max(1) } else { (1u64 << log_len) * p };
    let limit = (1u64 << 62) - 1;
    let mut c = limit / step;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if c == 0 {
            return Err(Error::invalid(format!(
                "no NTT prime for p = {p} and length 2^{log_len}"
            )));
        }
        let cand = c * step + 1;
        c -= 1;
        if cand % 2 == 0 || !is_prime64(cand) {
            continue;
        }
        let mont = Montgomery::new(cand);
        // x^((P-1)/2^L) has order exactly 2^L unless it is a square root of
        // something of lower order; likewise x^((P-1)/p) has order p unless it is 1.
        let root = (2..)
            .map(|x| mont.pow(mont.to_mont(x), (cand - 1) >> log_len))
            .find(|&r| log_len == 0 || mont.pow(r, 1u64 << (log_len - 1)) != mont.one())
            .expect("a root of unity of order 2^log_len exists");
        let eta = (2..)
            .map(|x| mont.pow(mont.to_mont(x), (cand - 1) / p))
            .find(|&e| e != mont.one())
            .expect("a root of unity of order p exists");
        out.push(NttPrime { mont, log_len, root, eta, p });
    }
    Ok(out)
}

/// Precomputed twiddles for one power-of-two length.
pub struct NttPlan {
    mont: Montgomery,
    len: usize,
    /// Forward twiddles, stage-major: for the stage of half-size `h`, entries
    /// `h..2h` hold `w_{2h}^k`.
    fwd: Vec<u64>,
    inv: Vec<u64>,
    len_inv: u64,
}

impl NttPlan {
    pub fn new(prime: &NttPrime, log_len: u32) -> Self {
        assert!(log_len <= prime.log_len);
        let mont = prime.mont;
        let len = 1usize << log_len;
        let root = mont.pow(prime.root, 1u64 << (prime.log_len - log_len));
        let root_inv = mont.inv(root);
        let build = |w: u64| {
            let mut t = vec![0u64; len.max(2)];
            let mut h = 1;
            while h < len {
                // Primitive (2h)-th root is w^(len / 2h).
                let step = mont.pow(w, (len / (2 * h)) as u64);
                let mut cur = mont.one();
                for k in 0..h {
                    t[h + k] = cur;
                    cur = mont.mul(cur, step);
                }
                h *= 2;
            }
            t
        };
        let len_inv = mont.inv(mont.to_mont(len as u64));
        NttPlan { mont, len, fwd: build(root), inv: build(root_inv), len_inv }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Decimation in frequency: natural-order input, bit-reversed output.
    pub fn forward(&self, a: &mut [u64]) {
        let n = self.len;
        assert_eq!(a.len(), n);
        let m = &self.mont;
        let mut h = n / 2;
        while h >= 1 {
            let w = &self.fwd[h..2 * h];
            for chunk in a.chunks_exact_mut(2 * h) {
                let (lo, hi) = chunk.split_at_mut(h);
                for k in 0..h {
                    let (u, v) = (lo[k], hi[k]);
                    lo[k] = m.add(u, v);
                    hi[k] = m.mul(m.sub(u, v), w[k]);
                }
            }
            h /= 2;
        }
    }

    /// Decimation in time: bit-reversed input, natural-order output,
    /// including the `1/len` factor. Undoes [`NttPlan::forward`].
    pub fn inverse(&self, a: &mut [u64]) {
        let n = self.len;
        assert_eq!(a.len(), n);
        let m = &self.mont;
        let mut h = 1;
        while h < n {
            let w = &self.inv[h..2 * h];
            for chunk in a.chunks_exact_mut(2 * h) {
                let (lo, hi) = chunk.split_at_mut(h);
                for k in 0..h {
                    let u = lo[k];
                    let v = m.mul(hi[k], w[k]);
                    lo[k] = m.add(u, v);
                    hi[k] = m.sub(u, v);
                }
            }
            h *= 2;
        }
        for x in a.iter_mut() {
            *x = m.mul(*x, self.len_inv);
        }
    }

    /// Bytes held by the plan.
    pub fn memory_bytes(&self) -> u64 {
        ((self.fwd.len() + self.inv.len()) * 8) as u64
    }
}

/// Smallest `L` with `2^L ≥ n`.
pub fn ceil_log2(n: usize) -> u32 {
    n.max(1).next_power_of_two().trailing_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn montgomery_round_trip() {
        let m = Montgomery::new((1 << 61) - 1);
        for a in [0u64, 1, 2, 12345678901234, (1 << 61) - 2] {
            assert_eq!(m.from_mont(m.to_mont(a)), a);
        }
        let (a, b) = (987654321987u64, 123456789123u64);
        let want = (a as u128 * b as u128 % m.modulus() as u128) as u64;
        assert_eq!(m.from_mont(m.mul(m.to_mont(a), m.to_mont(b))), want);
    }

    #[test]
    fn primes_have_required_roots() {
        for p in [2u64, 3, 47] {
            let ps = find_ntt_primes(p, 10, 2).unwrap();
            assert_eq!(ps.len(), 2);
            assert_ne!(ps[0].mont.modulus(), ps[1].mont.modulus());
            for q in &ps {
                let m = q.mont;
                assert_eq!(m.pow(q.eta, p), m.one());
                assert_ne!(q.eta, m.one());
                assert_eq!(m.pow(q.root, 1 << 10), m.one());
                assert_ne!(m.pow(q.root, 1 << 9), m.one());
            }
        }
    }

    #[test]
    fn cyclic_convolution_matches_schoolbook() {
        let prime = &find_ntt_primes(5, 6, 1).unwrap()[0];
        let m = prime.mont;
        let n = 23usize;
        let a: Vec<u64> = (0..n as u64).map(|i| (i * i + 3) % 17).collect();
        let b: Vec<u64> = (0..n as u64).map(|i| (7 * i + 1) % 13).collect();
        let mut want = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                want[(i + j) % n] += a[i] * b[j];
            }
        }
        let log = ceil_log2(2 * n - 1);
        let plan = NttPlan::new(prime, log);
        let mut fa = vec![0u64; plan.len()];
        let mut fb = vec![0u64; plan.len()];
        for i in 0..n {
            fa[i] = m.to_mont(a[i]);
            fb[i] = m.to_mont(b[i]);
        }
        plan.forward(&mut fa);
        plan.forward(&mut fb);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = m.mul(*x, *y);
        }
        plan.inverse(&mut fa);
        let got: Vec<u64> = (0..n)
            .map(|l| m.from_mont(m.add(fa[l], if l + n < fa.len() { fa[l + n] } else { 0 })))
            .collect();
        assert_eq!(got, want);
    }
}
