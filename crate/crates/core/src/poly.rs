//! Integer polynomial helpers: divisors, Euler phi, and cyclotomic
//! polynomials via exact division of `x^n - 1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// All positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0);
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

/// Euler totient by trial factorization.
pub fn euler_phi(mut n: u64) -> u64 {
    assert!(n > 0);
    let mut phi = n;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            phi -= phi / f;
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Prime factors of `n`, without multiplicity.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// Decompose `q` as `p^n` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let ps = prime_factors(q);
    if ps.len() != 1 {
        return None;
    }
    let p = ps[0];
    let mut n = 0u32;
    let mut m = q;
    while m > 1 {
        m /= p;
        n += 1;
    }
    if p.pow(n) == q {
        Some((p, n))
    } else {
        None
    }
}

/// `x^n - 1` as an ascending coefficient vector.
fn x_pow_minus_one(n: u64) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n as usize + 1];
    c[0] = -BigInt::one();
    c[n as usize] = BigInt::one();
    c
}

/// Exact polynomial division over Z; panics on a nonzero remainder.
fn div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    assert!(dn >= dd);
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = rem[i + dd].clone();
        if !c.is_zero() {
            for j in 0..=dd {
                rem[i + j] -= &c * &den[j];
            }
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

/// The n-th cyclotomic polynomial, ascending coefficients, monic of degree
/// `phi(n)`. Computed as `(x^n - 1) / prod_{d | n, d < n} Phi_d`.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    let mut memo: HashMap<u64, Vec<BigInt>> = HashMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: u64, memo: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(c) = memo.get(&n) {
        return c.clone();
    }
    let result = if n == 1 {
        vec![-BigInt::one(), BigInt::one()]
    } else {
        let mut num = x_pow_minus_one(n);
        for d in divisors(n) {
            if d < n {
                let phi_d = cyclotomic_memo(d, memo);
                num = div_exact(&num, &phi_d);
            }
        }
        num
    };
    memo.insert(n, result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn phi_1_is_x_minus_1() {
        assert_eq!(cyclotomic_poly(1), big(&[-1, 1]));
    }

    #[test]
    fn phi_5_is_geometric() {
        assert_eq!(cyclotomic_poly(5), big(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn phi_12() {
        assert_eq!(cyclotomic_poly(12), big(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn product_over_divisors_recovers_x_n_minus_1() {
        // Phi_d multiplied over all d | n must give x^n - 1.
        for n in 1..=200u64 {
            let mut prod = vec![BigInt::one()];
            for d in divisors(n) {
                prod = mul(&prod, &cyclotomic_poly(d));
            }
            assert_eq!(prod, x_pow_minus_one(n), "n = {n}");
        }
    }

    fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn phi_degree_matches_totient() {
        for n in 1..=60 {
            assert_eq!(cyclotomic_poly(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(32), Some((2, 5)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(13), Some((13, 1)));
    }
}
