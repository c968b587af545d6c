//! Multiplicative characters and exact Gauss sums, plus the surrounding
//! apparatus: Jacobi/Legendre symbols, the Lerch permutation sign, base-p
//! digit statistics, the reduction to `F_q[t]/(t^{p-1})` behind the
//! Stickelberger congruence, and the two Hasse-Davenport identities.
//!
//! The character group is generated by `chi` with `chi(g) = zeta_{q-1}`,
//! where `g` is the deterministic field generator. Pairing that same `g`
//! with the reduction `zeta_{q-1} -> g` makes `chi` the Teichmuller
//! character of an (implicit) prime above `p`, which is what turns the
//! Stickelberger congruence into a check inside `F_q[t]/(t^{p-1})`.

use crate::cyclo::{CycloCtx, CycloElem, ElemBuilder};
use crate::finite_field::{FqCtx, FqElem};
use crate::{Error, Rat, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex};

/// A multiplicative character `chi^t` of `F_q`, identified by its exponent
/// against the context generator. `chi^t(0) = 0` by convention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Character {
    pub t: u64,
}

/// Field + cyclotomic context pair with a Gauss-sum cache.
pub struct GaussCtx {
    pub fq: Arc<FqCtx>,
    pub cyc: Arc<CycloCtx>,
    cache: Mutex<HashMap<u64, CycloElem>>,
}

impl GaussCtx {
    pub fn new(p: u64, n: u32) -> Result<GaussCtx> {
        let fq = Arc::new(FqCtx::build(p, n)?);
        Self::from_field(fq)
    }

    pub fn with_cache_dir(p: u64, n: u32, dir: &Path) -> Result<GaussCtx> {
        let fq = Arc::new(FqCtx::build_with_cache(p, n, dir)?);
        Self::from_field(fq)
    }

    fn from_field(fq: Arc<FqCtx>) -> Result<GaussCtx> {
        let cyc = if fq.q == 2 {
            CycloCtx::new(1, 2)?
        } else {
            CycloCtx::new(fq.q - 1, fq.p)?
        };
        Ok(GaussCtx {
            fq,
            cyc,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn q(&self) -> u64 {
        self.fq.q
    }

    /// Normalize an exponent (possibly negative) modulo `q - 1`.
    pub fn character(&self, t: i64) -> Character {
        let m = (self.q() - 1) as i64;
        Character {
            t: t.rem_euclid(m) as u64,
        }
    }

    /// `ord(chi^t) = (q - 1) / gcd(t, q - 1)`.
    pub fn char_order(&self, ch: Character) -> u64 {
        let m = self.q() - 1;
        m / ch.t.gcd(&m)
    }

    /// `chi^t(x) = zeta_{q-1}^{t * dlog(x)}`, and 0 at `x = 0`.
    pub fn char_eval(&self, ch: Character, x: &FqElem) -> CycloElem {
        if x.is_zero() {
            return CycloElem::zero();
        }
        let j = self.fq.discrete_log(x).expect("nonzero element");
        CycloElem::monomial(&self.cyc, ch.t * j % (self.q() - 1), 0)
    }

    /// `chi^t(-1)` as a sign.
    pub fn char_at_minus_one(&self, ch: Character) -> i64 {
        let q = self.q();
        if q % 2 == 0 {
            return 1; // -1 = 1 in characteristic 2
        }
        if ch.t * ((q - 1) / 2) % (q - 1) == 0 {
            1
        } else {
            -1
        }
    }

    /// Exact Gauss sum `G_q(chi^t) = sum_x chi^t(x) zeta_p^{Tr(x)}`.
    /// Cached per exponent; the matrix builders request the same sums
    /// `O(m^2)` times.
    pub fn gauss_sum(&self, ch: Character) -> CycloElem {
        let t = ch.t % (self.q() - 1);
        if let Some(e) = self.cache.lock().unwrap().get(&t) {
            return e.clone();
        }
        let q = self.q();
        let mut b = ElemBuilder::new(self.cyc.clone());
        for j in 0..q - 1 {
            let v = self.fq.trace_of_gen_pow(j) as u64;
            b.add_root_power(t * j, v, 1);
        }
        let e = b.finish();
        self.cache.lock().unwrap().entry(t).or_insert_with(|| e.clone());
        e
    }

    /// `G_q(chi^t)^{-1}` through the reflection identity
    /// `G(psi) G(psi^{-1}) = psi(-1) q` for nontrivial `psi`; `-1` for the
    /// trivial character.
    pub fn gauss_sum_inverse(&self, ch: Character) -> CycloElem {
        let q = self.q();
        let t = ch.t % (q - 1);
        if t == 0 {
            return CycloElem::from_int(-1);
        }
        let sign = self.char_at_minus_one(ch);
        let conj = self.gauss_sum(self.character(-(t as i64)));
        conj.scale(&Rat::new(BigInt::from(sign), BigInt::from(q)))
    }
}

/// Jacobi symbol `(a/m)` for odd `m >= 1`.
pub fn jacobi_symbol(a: i64, m: u64) -> Result<i32> {
    if m % 2 == 0 {
        return Err(Error::EvenModulus(m));
    }
    let mut a = a.rem_euclid(m as i64) as u64;
    let mut m = m;
    let mut sign = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        a %= m;
    }
    Ok(if m == 1 { sign } else { 0 })
}

/// Legendre symbol for an odd prime `p`.
pub fn legendre_symbol(a: i64, p: u64) -> i32 {
    jacobi_symbol(a, p).expect("odd prime modulus")
}

/// Sign of the permutation `x -> ax` on `Z/m`, by Lerch's three-case
/// formula. Requires `gcd(a, m) = 1`.
pub fn lerch_sign(a: i64, m: u64) -> Result<i32> {
    let ar = a.rem_euclid(m as i64) as u64;
    if ar.gcd(&m) != 1 {
        return Err(Error::NotCoprime(ar, m));
    }
    if m % 2 == 1 {
        jacobi_symbol(a, m)
    } else if m % 4 == 2 {
        Ok(1)
    } else {
        // m = 0 mod 4 forces a odd
        Ok(if (ar - 1) / 2 % 2 == 0 { 1 } else { -1 })
    }
}

/// Base-p digit sum `s(r)` and digit-factorial product `t(r)` of
/// `r = sum r_j p^j` with `n` digits.
pub fn digit_stats(r: u64, p: u64, n: u32) -> Result<(u32, BigUint)> {
    let q = p.pow(n);
    if r > q - 2 {
        return Err(Error::ExponentOutOfRange(r, q - 2));
    }
    let mut s = 0u32;
    let mut t = BigUint::one();
    let mut rem = r;
    for _ in 0..n {
        let d = rem % p;
        rem /= p;
        s += d as u32;
        t *= factorial(d);
    }
    Ok((s, t))
}

fn factorial(d: u64) -> BigUint {
    (1..=d).map(BigUint::from).product::<BigUint>().max(BigUint::one())
}

/// An element of `F_q[t]/(t^{p-1})`, the largest truncation in which the
/// Stickelberger congruence stays checkable with plain `F_q` arithmetic.
#[derive(Clone, Debug)]
pub struct LocalElem {
    pub fq: Arc<FqCtx>,
    /// Exactly `p - 1` coefficients, ascending in `t`.
    pub coeffs: Vec<FqElem>,
}

impl LocalElem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FqElem::is_zero)
    }
}

impl PartialEq for LocalElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

/// Reduce an exact cyclotomic element through `zeta_{q-1} -> g`,
/// `zeta_p -> 1 + t`, rationals mod `p`, truncated in `F_q[t]/(t^{p-1})`
/// (`Phi_p(1 + t) = t^{p-1} mod p` makes the truncation a homomorphism).
pub fn to_local(e: &CycloElem, gctx: &GaussCtx) -> Result<LocalElem> {
    let p = gctx.fq.p;
    let dp = p as usize - 1;
    let mut coeffs = vec![gctx.fq.zero(); dp];
    for (u, v, c) in e.terms() {
        let s = rat_mod_p(&c, p)?;
        if s == 0 {
            continue;
        }
        let base = gctx.fq.mul(&gctx.fq.scalar(s), gctx.fq.gen_pow(u as u64));
        // (1 + t)^v truncated; v < p - 1 so every binomial index is valid
        for (i, coeff) in coeffs.iter_mut().enumerate().take(v + 1) {
            let bin = binomial_mod(v as u64, i as u64, p);
            if bin != 0 {
                let term = gctx.fq.mul(&base, &gctx.fq.scalar(bin));
                *coeff = gctx.fq.add(coeff, &term);
            }
        }
    }
    Ok(LocalElem {
        fq: gctx.fq.clone(),
        coeffs,
    })
}

fn rat_mod_p(c: &Rat, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let den = c.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::DenominatorDivisibleByP(p));
    }
    let num = c.numer().mod_floor(&pb).to_u64().unwrap();
    let den = den.to_u64().unwrap();
    Ok(num * mod_inverse(den, p) % p)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn binomial_mod(n: u64, k: u64, p: u64) -> u64 {
    // n < p - 1 here, so this never overflows as BigUint and reduces cleanly
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    (acc % BigUint::from(p)).to_u64().unwrap()
}

/// Outcome of one Stickelberger congruence instance.
#[derive(Clone, Debug)]
pub struct StickelbergerOutcome {
    pub r: u64,
    pub digit_sum: u32,
    pub digit_factorials: BigUint,
    pub pass: bool,
    pub expected: String,
    pub computed: String,
}

/// Check `G_q(chi^{-r}) = -(1/t(r)) t^{s(r)} + O(t^{s(r)+1})` in the local
/// truncation when `s(r) <= p - 2`, and total vanishing when
/// `s(r) >= p - 1`.
pub fn stickelberger_check(gctx: &GaussCtx, r: u64) -> Result<StickelbergerOutcome> {
    let p = gctx.fq.p;
    let (s, t) = digit_stats(r, p, gctx.fq.n)?;
    let g = gctx.gauss_sum(gctx.character(-(r as i64)));
    let local = to_local(&g, gctx)?;
    let dp = p as usize - 1;
    let computed = format_local(&local);
    if (s as usize) < dp {
        let t_mod = (&t % BigUint::from(p)).to_u64().unwrap();
        let want = (p - mod_inverse(t_mod, p)) % p; // -1/t(r) mod p
        let lower_zero = local.coeffs[..s as usize].iter().all(FqElem::is_zero);
        let lead_ok = local.coeffs[s as usize] == gctx.fq.scalar(want);
        Ok(StickelbergerOutcome {
            r,
            digit_sum: s,
            digit_factorials: t,
            pass: lower_zero && lead_ok,
            expected: format!("{want}*t^{s} + O(t^{})", s + 1),
            computed,
        })
    } else {
        Ok(StickelbergerOutcome {
            r,
            digit_sum: s,
            digit_factorials: t,
            pass: local.is_zero(),
            expected: "0".into(),
            computed,
        })
    }
}

fn format_local(l: &LocalElem) -> String {
    let terms: Vec<String> = l
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("{:?}*t^{i}", c.0))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Outcome of one Hasse-Davenport check, with both exact sides retained.
#[derive(Clone, Debug)]
pub struct HdOutcome {
    pub pass: bool,
    pub lhs: CycloElem,
    pub rhs: CycloElem,
}

/// Hasse-Davenport lifting: `G_q(psi o N) = (-1)^{n-1} G_p(psi)^n`, with
/// the small field embedded via `zeta_{p-1} = zeta_{q-1}^{(q-1)/(p-1)}`.
/// `t` is the exponent of `psi` against the base-field generator.
pub fn hd_lifting_check(p: u64, n: u32, t: u64) -> Result<HdOutcome> {
    let base = GaussCtx::new(p, 1)?;
    let big = GaussCtx::new(p, n)?;
    let q = big.q();
    let t = if p == 2 { 0 } else { t % (p - 1) };

    let g_base = base.gauss_sum(Character { t });
    let mut rhs = g_base.pow(n as u64).lift(&big.cyc);
    if n % 2 == 0 {
        rhs = -rhs;
    }

    // psi o Norm has exponent t * c * (q-1)/(p-1) where g^{(q-1)/(p-1)}
    // reduces to the base generator raised to c.
    let lifted_t = if p == 2 {
        0
    } else {
        let norm_g = big.fq.norm(&big.fq.generator.clone()) as u64;
        let c = base.fq.discrete_log(&base.fq.scalar(norm_g))?;
        t * c % (q - 1) * ((q - 1) / (p - 1)) % (q - 1)
    };
    let lhs = big.gauss_sum(Character { t: lifted_t });
    Ok(HdOutcome {
        pass: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Hasse-Davenport product:
/// `prod_a G(psi rho^a) = -psi^{-m}(m) G(psi^m) prod_a G(rho^a)` where
/// `rho = chi^{a0}` has exact order `m`.
pub fn hd_product_check(gctx: &GaussCtx, m: u64, t_psi: u64, a0: u64) -> Result<HdOutcome> {
    let q = gctx.q();
    let rho_order = gctx.char_order(Character { t: a0 });
    if rho_order != m {
        return Err(Error::WrongCharacterOrder(rho_order, m));
    }
    let mut lhs = CycloElem::one();
    let mut rho_prod = CycloElem::one();
    for a in 0..m {
        lhs = lhs.mul_ref(&gctx.gauss_sum(gctx.character((t_psi + a * a0) as i64)));
        rho_prod = rho_prod.mul_ref(&gctx.gauss_sum(gctx.character((a * a0) as i64)));
    }
    let m_elem = gctx.fq.scalar(m);
    let psi_factor = gctx.char_eval(gctx.character(-((m * t_psi % (q - 1)) as i64)), &m_elem);
    let rhs = -psi_factor
        .mul_ref(&gctx.gauss_sum(gctx.character((m * t_psi) as i64)))
        .mul_ref(&rho_prod);
    Ok(HdOutcome {
        pass: lhs == rhs,
        lhs,
        rhs,
    })
}
