//! Construction of `F_{p^n}` with a deterministic modulus and generator,
//! element arithmetic, trace/norm, and a full discrete-log table.
//!
//! The modulus is the lexicographically smallest monic irreducible of degree
//! `n` (coefficients compared constant-term first) and the generator is the
//! smallest element of multiplicative order `q - 1` under the same ordering,
//! so builds are reproducible without external tables.

use crate::poly::{is_prime, prime_factors};
use crate::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Hard ceiling on `q`; the dlog table is `O(q)`.
pub const MAX_Q: u64 = 1 << 20;

const CACHE_VERSION: u32 = 1;

/// An element of `F_{p^n}` in the polynomial basis, coefficients in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FqElem(pub Vec<u32>);

impl FqElem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The constant coefficient, for elements of the prime subfield.
    pub fn constant(&self) -> u32 {
        self.0[0]
    }

    pub fn in_prime_subfield(&self) -> bool {
        self.0.iter().skip(1).all(|&c| c == 0)
    }
}

/// Finite field context: modulus, generator, and lookup tables.
#[derive(Debug)]
pub struct FqCtx {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    /// Monic irreducible of degree n, ascending coefficients, length n + 1.
    pub modulus: Vec<u32>,
    pub generator: FqElem,
    /// `exp[j] = generator^j` for `j` in `[0, q - 2]`.
    exp: Vec<FqElem>,
    /// Discrete log indexed by element index; `u64::MAX` marks zero.
    dlog: Vec<u64>,
    /// `trace_of_power[j] = Tr(generator^j)`.
    trace_of_power: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    p: u64,
    n: u32,
    modulus: Vec<u32>,
    generator: Vec<u32>,
    dlog: Vec<u64>,
}

impl FqCtx {
    pub fn build(p: u64, n: u32) -> Result<FqCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(n >= 1);
        let q = p.checked_pow(n).filter(|&q| q <= MAX_Q).ok_or_else(|| {
            Error::FieldTooLarge(p.saturating_pow(n), MAX_Q)
        })?;
        let modulus = find_modulus(p, n);
        Self::assemble(p, n, q, modulus, None)
    }

    /// Build with an on-disk cache of (modulus, generator, dlog table) keyed
    /// by `(p, n, version)`. A missing or corrupt cache falls back to a
    /// rebuild and rewrites the file atomically.
    pub fn build_with_cache(p: u64, n: u32, dir: &Path) -> Result<FqCtx> {
        let file = dir.join(format!("fq_{p}_{n}_v{CACHE_VERSION}.json"));
        if let Ok(bytes) = std::fs::read(&file) {
            if let Ok(c) = serde_json::from_slice::<CacheFile>(&bytes) {
                if c.version == CACHE_VERSION && c.p == p && c.n == n as u32 {
                    let q = p.pow(n);
                    if let Ok(ctx) =
                        Self::assemble(p, n, q, c.modulus, Some((FqElem(c.generator), c.dlog)))
                    {
                        return Ok(ctx);
                    }
                }
            }
        }
        let ctx = Self::build(p, n)?;
        std::fs::create_dir_all(dir)?;
        let cache = CacheFile {
            version: CACHE_VERSION,
            p,
            n,
            modulus: ctx.modulus.clone(),
            generator: ctx.generator.0.clone(),
            dlog: ctx.dlog.clone(),
        };
        let tmp = dir.join(format!(".fq_{p}_{n}_v{CACHE_VERSION}.json.tmp.{}", std::process::id()));
        std::fs::write(&tmp, serde_json::to_vec(&cache).expect("serialize cache"))?;
        std::fs::rename(&tmp, &file)?;
        Ok(ctx)
    }

    fn assemble(
        p: u64,
        n: u32,
        q: u64,
        modulus: Vec<u32>,
        cached: Option<(FqElem, Vec<u64>)>,
    ) -> Result<FqCtx> {
        let mut ctx = FqCtx {
            p,
            n,
            q,
            modulus,
            generator: FqElem(vec![0; n as usize]),
            exp: Vec::new(),
            dlog: Vec::new(),
            trace_of_power: Vec::new(),
        };
        let (generator, dlog_hint) = match cached {
            Some((g, d)) => (g, Some(d)),
            None => (ctx.find_generator(), None),
        };
        ctx.generator = generator;
        ctx.exp = Vec::with_capacity(q as usize - 1);
        ctx.dlog = vec![u64::MAX; q as usize];
        let mut x = ctx.one();
        for j in 0..q - 1 {
            ctx.exp.push(x.clone());
            let idx = ctx.index(&x);
            if ctx.dlog[idx] != u64::MAX {
                return Err(Error::BadFieldData("generator order below q - 1".into()));
            }
            ctx.dlog[idx] = j;
            x = ctx.mul(&x, &ctx.generator);
        }
        if x != ctx.one() {
            return Err(Error::BadFieldData("generator power cycle broken".into()));
        }
        if let Some(d) = dlog_hint {
            if d != ctx.dlog {
                return Err(Error::BadFieldData("cached dlog table mismatch".into()));
            }
        }
        ctx.trace_of_power = (0..q - 1)
            .map(|j| {
                let e = ctx.exp[j as usize].clone();
                ctx.trace(&e)
            })
            .collect();
        Ok(ctx)
    }

    pub fn zero(&self) -> FqElem {
        FqElem(vec![0; self.n as usize])
    }

    pub fn one(&self) -> FqElem {
        let mut v = vec![0; self.n as usize];
        v[0] = 1;
        FqElem(v)
    }

    /// The prime-subfield element `c mod p`.
    pub fn scalar(&self, c: u64) -> FqElem {
        let mut v = vec![0; self.n as usize];
        v[0] = (c % self.p) as u32;
        FqElem(v)
    }

    fn index(&self, x: &FqElem) -> usize {
        let mut idx = 0u64;
        for &c in x.0.iter().rev() {
            idx = idx * self.p + c as u64;
        }
        idx as usize
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| ((x as u64 + y as u64) % self.p) as u32)
                .collect(),
        )
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(a.0.iter().map(|&x| ((self.p - x as u64) % self.p) as u32).collect())
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let n = self.n as usize;
        let mut conv = vec![0u64; 2 * n - 1];
        for i in 0..n {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                conv[i + j] = (conv[i + j] + a.0[i] as u64 * b.0[j] as u64) % self.p;
            }
        }
        for i in (n..2 * n - 1).rev() {
            let c = conv[i];
            if c == 0 {
                continue;
            }
            conv[i] = 0;
            // x^n = -(modulus[0] + ... + modulus[n-1] x^{n-1})
            for j in 0..n {
                let sub = c * self.modulus[j] as u64 % self.p;
                conv[i - n + j] = (conv[i - n + j] + self.p - sub) % self.p;
            }
        }
        FqElem(conv[..n].iter().map(|&c| c as u32).collect())
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `Tr(x) = sum_j x^{p^j}` in `F_p`.
    pub fn trace(&self, x: &FqElem) -> u32 {
        let mut acc = x.clone();
        let mut t = x.clone();
        for _ in 1..self.n {
            t = self.pow(&t, self.p);
            acc = self.add(&acc, &t);
        }
        assert!(acc.in_prime_subfield(), "trace must land in F_p");
        acc.constant()
    }

    /// `N(x) = x^{(q-1)/(p-1)}` for nonzero `x`, and 0 at 0.
    pub fn norm(&self, x: &FqElem) -> u32 {
        if x.is_zero() {
            return 0;
        }
        let e = (self.q - 1) / (self.p - 1);
        let r = self.pow(x, e);
        assert!(r.in_prime_subfield(), "norm must land in F_p");
        r.constant()
    }

    pub fn discrete_log(&self, x: &FqElem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::DlogOfZero);
        }
        Ok(self.dlog[self.index(x)])
    }

    /// `generator^j` with `j` taken mod `q - 1`.
    pub fn gen_pow(&self, j: u64) -> &FqElem {
        &self.exp[(j % (self.q - 1)) as usize]
    }

    /// `Tr(generator^j)`, table-backed.
    pub fn trace_of_gen_pow(&self, j: u64) -> u32 {
        self.trace_of_power[(j % (self.q - 1)) as usize]
    }

    /// All field elements in index order (0 first).
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(move |mut idx| {
            let mut v = vec![0u32; self.n as usize];
            for c in v.iter_mut() {
                *c = (idx % self.p) as u32;
                idx /= self.p;
            }
            FqElem(v)
        })
    }

    fn find_generator(&self) -> FqElem {
        let factors = prime_factors(self.q - 1);
        for cand in lex_elements(self.p, self.n as usize) {
            let e = FqElem(cand);
            if e.is_zero() {
                continue;
            }
            if factors.iter().all(|&l| self.pow(&e, (self.q - 1) / l) != self.one())
            {
                return e;
            }
        }
        unreachable!("F_q^x is cyclic, a generator exists")
    }
}

/// Multiplicative order of `p` modulo `k`; `gcd(p, k)` must be 1.
pub fn order_mod(p: u64, k: u64) -> Result<u64> {
    if k == 1 {
        return Ok(1);
    }
    if p.gcd(&k) != 1 {
        return Err(Error::NotCoprime(p, k));
    }
    let mut f = 1u64;
    let mut acc = p % k;
    while acc != 1 {
        acc = acc * p % k;
        f += 1;
    }
    Ok(f)
}

/// Coefficient tuples `(c_0, ..., c_{len-1})` in lexicographic order with the
/// constant term compared first.
fn lex_elements(p: u64, len: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = p.pow(len as u32);
    (0..total).map(move |rank| {
        let mut v = vec![0u32; len];
        let mut r = rank;
        for i in (0..len).rev() {
            v[i] = (r % p) as u32;
            r /= p;
        }
        v
    })
}

/// Lexicographically smallest monic irreducible of degree n over F_p.
fn find_modulus(p: u64, n: u32) -> Vec<u32> {
    let n = n as usize;
    for lower in lex_elements(p, n) {
        let mut f = lower.clone();
        f.push(1);
        if poly_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducibles of every degree exist over F_p")
}

// dense poly arithmetic over F_p for the irreducibility test

fn poly_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    if v.is_empty() {
        v.push(0);
    }
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut conv = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            conv[i + j] = (conv[i + j] + x * y) % p;
        }
    }
    poly_rem(&mut conv, f, p);
    conv
}

fn poly_rem(a: &mut Vec<u64>, f: &[u64], p: u64) {
    let df = f.len() - 1;
    while a.len() > df {
        let c = *a.last().unwrap();
        let deg = a.len() - 1;
        if c != 0 {
            // f is monic
            for j in 0..df {
                let sub = c * f[j] % p;
                a[deg - df + j] = (a[deg - df + j] + p - sub) % p;
            }
        }
        a.pop();
    }
    poly_trim(a);
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let mut r = a.clone();
        // make b monic for the reduction
        let lead = *b.last().unwrap();
        let inv = mod_inverse(lead, p);
        let monic: Vec<u64> = b.iter().map(|&c| c * inv % p).collect();
        poly_rem(&mut r, &monic, p);
        a = b;
        b = r;
    }
    a
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime, a != 0
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Irreducibility over F_p: `x^{p^n} = x (mod f)` and
/// `gcd(x^{p^d} - x, f) = 1` for every proper divisor `d | n`.
fn poly_is_irreducible(f: &[u32], p: u64) -> bool {
    let n = f.len() - 1;
    let f64v: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    if n == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // iterated Frobenius: frob[d] = x^{p^d} mod f
    let mut t = x.clone();
    for d in 1..=n {
        // t <- t^p mod f by repeated squaring on the exponent p
        t = poly_powmod(&t, p, &f64v, p);
        if d < n && n % d == 0 {
            let mut diff = t.clone();
            poly_sub_in(&mut diff, &x, p);
            let g = poly_gcd(f64v.clone(), diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        if d == n {
            let mut diff = t.clone();
            poly_sub_in(&mut diff, &x, p);
            poly_trim(&mut diff);
            if !(diff.len() == 1 && diff[0] == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_sub_in(a: &mut Vec<u64>, b: &[u64], p: u64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (i, &c) in b.iter().enumerate() {
        a[i] = (a[i] + p - c) % p;
    }
    poly_trim(a);
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        e >>= 1;
        if e > 0 {
            b = poly_mulmod(&b, &b, f, p);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_conventions() {
        let f5 = FqCtx::build(5, 1).unwrap();
        assert_eq!(f5.modulus, vec![0, 1]); // x
        assert_eq!(f5.generator, FqElem(vec![2]));
        let f2 = FqCtx::build(2, 1).unwrap();
        assert_eq!(f2.generator, FqElem(vec![1]));
    }

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        let f9 = FqCtx::build(3, 2).unwrap();
        assert_eq!(f9.modulus, vec![1, 0, 1]);
        // Tr(t) = t + t^3 = 0 since t^2 = -1.
        let t = FqElem(vec![0, 1]);
        assert_eq!(f9.trace(&t), 0);
        // N(t) = t^4 = 1.
        assert_eq!(f9.norm(&t), 1);
    }

    #[test]
    fn trace_basics() {
        for (p, n) in [(5u64, 1u32), (3, 2), (2, 3), (7, 2)] {
            let fq = FqCtx::build(p, n).unwrap();
            assert_eq!(fq.trace(&fq.zero()), 0);
            assert_eq!(fq.trace(&fq.one()), (n as u64 % p) as u32);
        }
    }

    #[test]
    fn dlog_examples() {
        let f5 = FqCtx::build(5, 1).unwrap();
        assert_eq!(f5.discrete_log(&f5.one()).unwrap(), 0);
        assert_eq!(f5.discrete_log(&f5.generator.clone()).unwrap(), 1);
        assert_eq!(f5.discrete_log(&FqElem(vec![4])).unwrap(), 2); // 2^2 = 4
        assert!(f5.discrete_log(&f5.zero()).is_err());
    }

    #[test]
    fn dlog_is_additive() {
        let fq = FqCtx::build(3, 3).unwrap();
        let q = fq.q;
        for (a, b) in [(3u64, 7u64), (11, 20), (25, 25), (1, 12)] {
            let x = fq.gen_pow(a).clone();
            let y = fq.gen_pow(b).clone();
            let lhs = fq.discrete_log(&fq.mul(&x, &y)).unwrap();
            assert_eq!(lhs, (a + b) % (q - 1));
        }
    }

    #[test]
    fn order_mod_examples() {
        assert_eq!(order_mod(7, 1).unwrap(), 1);
        assert_eq!(order_mod(3, 8).unwrap(), 2);
        assert_eq!(order_mod(3, 5).unwrap(), 4);
        assert!(order_mod(3, 9).is_err());
    }

    #[test]
    fn order_mod_divides_n_for_divisors_of_q_minus_1() {
        for (p, n) in [(3u64, 4u32), (5, 2), (2, 5), (7, 2)] {
            let q = p.pow(n);
            for k in crate::poly::divisors(q - 1) {
                let o = order_mod(p, k).unwrap();
                assert_eq!(n as u64 % o, 0, "o_{k}({p}) = {o} must divide {n}");
            }
        }
    }

    #[test]
    fn trace_kernel_has_dimension_n_minus_1() {
        // exhaustive over all prime powers q <= 343
        for q in 2..=343u64 {
            if let Some((p, n)) = crate::poly::prime_power(q) {
                let fq = FqCtx::build(p, n).unwrap();
                let mut kernel = 0u64;
                let mut image = std::collections::HashSet::new();
                for x in fq.elements() {
                    let t = fq.trace(&x);
                    image.insert(t);
                    if t == 0 {
                        kernel += 1;
                    }
                }
                assert_eq!(kernel, p.pow(n - 1), "q = {q}");
                assert_eq!(image.len() as u64, p, "trace onto F_p, q = {q}");
            }
        }
    }

    #[test]
    fn trace_is_linear_and_frobenius_invariant() {
        let fq = FqCtx::build(5, 2).unwrap();
        let xs: Vec<FqElem> = fq.elements().collect();
        for x in &xs {
            let xp = fq.pow(x, 5);
            assert_eq!(fq.trace(x), fq.trace(&xp));
        }
        for (i, j) in [(3usize, 7usize), (10, 21), (4, 4)] {
            let (x, y) = (&xs[i], &xs[j]);
            for a in 0..5u64 {
                for b in 0..5u64 {
                    let ax = fq.mul(&fq.scalar(a), x);
                    let by = fq.mul(&fq.scalar(b), y);
                    let lhs = fq.trace(&fq.add(&ax, &by));
                    let rhs = (a * fq.trace(x) as u64 + b * fq.trace(y) as u64) % 5;
                    assert_eq!(lhs as u64, rhs);
                }
            }
        }
    }

    #[test]
    fn norm_of_generator_is_primitive_root() {
        let fq = FqCtx::build(3, 2).unwrap();
        let ng = fq.norm(&fq.generator.clone());
        // order of ng mod 3 must be 2
        assert_eq!(ng as u64 % 3 != 1, true);
        assert_eq!(ng as u64 * ng as u64 % 3, 1);
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let a = FqCtx::build_with_cache(3, 2, dir.path()).unwrap();
        let b = FqCtx::build_with_cache(3, 2, dir.path()).unwrap();
        assert_eq!(a.modulus, b.modulus);
        assert_eq!(a.generator, b.generator);
        let direct = FqCtx::build(3, 2).unwrap();
        assert_eq!(a.modulus, direct.modulus);
        assert_eq!(a.generator, direct.generator);
    }

    #[test]
    fn corrupt_cache_falls_back() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("fq_3_2_v1.json");
        std::fs::write(&file, b"not json").unwrap();
        let a = FqCtx::build_with_cache(3, 2, dir.path()).unwrap();
        assert_eq!(a.modulus, vec![1, 0, 1]);
    }
}
