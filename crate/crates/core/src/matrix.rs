//! Cyclotomic Gauss-sum matrices and exact determinants.
//!
//! Two independent determinant routes are provided: fraction-free (Bareiss)
//! elimination, generic over any exact scalar, and the eigenvalue-product
//! formula `det A_q(k) = sign(tau_m(-1)) prod_b lambda_b` coming from the
//! circulant-like structure of `C_q(k)`. A cofactor expansion serves as a
//! third, brute-force oracle for small sizes.

use crate::characters::{lerch_sign, Character, GaussCtx};
use crate::cyclo::{CycloElem, ElemBuilder};
use crate::scalar::Scalar;
use crate::{Error, Int, Rat, Result};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Clone> SquareMatrix<T> {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        SquareMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T: Scalar> SquareMatrix<T> {
    /// Fraction-free (Bareiss) elimination. Every interior division is by
    /// the previous pivot and must be exact; inexactness is a hard error
    /// since it would indicate an arithmetic bug, not bad input.
    pub fn det_bareiss(&self) -> T {
        let n = self.dim;
        let mut m = self.data.clone();
        let mut negate = false;
        let mut prev: Option<T> = None;
        for k in 0..n {
            let pivot = match (k..n).find(|&r| !m[r * n + k].is_zero()) {
                None => return T::zero(),
                Some(r) => r,
            };
            if pivot != k {
                for j in 0..n {
                    m.swap(pivot * n + j, k * n + j);
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[k * n + k].clone() * m[i * n + j].clone()
                        - m[i * n + k].clone() * m[k * n + j].clone();
                    m[i * n + j] = match &prev {
                        None => num,
                        Some(d) => {
                            let q = num.clone() / d.clone();
                            assert!(
                                q.clone() * d.clone() == num,
                                "inexact division in fraction-free elimination"
                            );
                            q
                        }
                    };
                }
                m[i * n + k] = T::zero();
            }
            prev = Some(m[k * n + k].clone());
        }
        let det = m[n * n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// Cofactor expansion along the first row; exponential, test oracle only.
    pub fn det_cofactor(&self) -> T {
        let n = self.dim;
        if n == 1 {
            return self.data[0].clone();
        }
        let mut acc = T::zero();
        for j in 0..n {
            if self.get(0, j).is_zero() {
                continue;
            }
            let minor = SquareMatrix::from_fn(n - 1, |r, c| {
                self.get(r + 1, if c < j { c } else { c + 1 }).clone()
            });
            let term = self.get(0, j).clone() * minor.det_cofactor();
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }
}

impl SquareMatrix<CycloElem> {
    /// Bareiss elimination specialized so the per-step exact division is a
    /// single field inversion of the previous pivot instead of one solve
    /// per entry.
    pub fn det_exact(&self) -> CycloElem {
        let n = self.dim;
        let mut m = self.data.clone();
        let mut negate = false;
        let mut prev_inv: Option<CycloElem> = None;
        for k in 0..n {
            let pivot = match (k..n).find(|&r| !m[r * n + k].is_zero()) {
                None => return CycloElem::zero(),
                Some(r) => r,
            };
            if pivot != k {
                for j in 0..n {
                    m.swap(pivot * n + j, k * n + j);
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[k * n + k].mul_ref(&m[i * n + j]).sub_ref(
                        &m[i * n + k].mul_ref(&m[k * n + j]),
                    );
                    m[i * n + j] = match &prev_inv {
                        None => num,
                        Some(inv) => num.mul_ref(inv),
                    };
                }
                m[i * n + k] = CycloElem::zero();
            }
            prev_inv = Some(m[k * n + k].invert().expect("pivot is nonzero"));
        }
        let det = m[n * n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }
}

fn check_divisor(q: u64, k: u64) -> Result<usize> {
    if k == 0 || (q - 1) % k != 0 {
        return Err(Error::NotDivisor(k, q - 1));
    }
    Ok(((q - 1) / k) as usize)
}

/// `A_q(k) = [G(chi^{k i + k j})]`, indices `0..m`.
pub fn build_a(g: &GaussCtx, k: u64) -> Result<SquareMatrix<CycloElem>> {
    build_a_with_generator(g, k, 1)
}

/// Same as [`build_a`] with the replacement generator `chi^s`
/// (`gcd(s, q - 1) = 1`); used to exercise generator independence.
pub fn build_a_with_generator(g: &GaussCtx, k: u64, s: u64) -> Result<SquareMatrix<CycloElem>> {
    let m = check_divisor(g.q(), k)?;
    Ok(SquareMatrix::from_fn(m, |i, j| {
        g.gauss_sum(g.character((s * k * (i + j) as u64) as i64))
    }))
}

/// `B_q(k) = [G(chi^{k i + k j})^{-1}]`.
pub fn build_b(g: &GaussCtx, k: u64) -> Result<SquareMatrix<CycloElem>> {
    build_b_with_generator(g, k, 1)
}

pub fn build_b_with_generator(g: &GaussCtx, k: u64, s: u64) -> Result<SquareMatrix<CycloElem>> {
    let m = check_divisor(g.q(), k)?;
    Ok(SquareMatrix::from_fn(m, |i, j| {
        g.gauss_sum_inverse(g.character((s * k * (i + j) as u64) as i64))
    }))
}

/// `C_q(k) = [G(chi^{k i - k j})]`.
pub fn build_c(g: &GaussCtx, k: u64) -> Result<SquareMatrix<CycloElem>> {
    let m = check_divisor(g.q(), k)?;
    Ok(SquareMatrix::from_fn(m, |i, j| {
        g.gauss_sum(g.character(k as i64 * (i as i64 - j as i64)))
    }))
}

/// `D_q(k) = [(-1)^{k i - k j} G(chi^{k i - k j})]`.
pub fn build_d(g: &GaussCtx, k: u64) -> Result<SquareMatrix<CycloElem>> {
    let m = check_divisor(g.q(), k)?;
    Ok(SquareMatrix::from_fn(m, |i, j| {
        let e = g.gauss_sum(g.character(k as i64 * (i as i64 - j as i64)));
        if (k as i64 * (i as i64 - j as i64)).rem_euclid(2) == 1 {
            -e
        } else {
            e
        }
    }))
}

/// Eigenvalues `lambda_b = m sum_{y in U_k} zeta_p^{Tr(by)}` of `C_q(k)`,
/// one per coset representative `b = g^j`, `j = 0..m-1`.
#[derive(Clone, Debug)]
pub struct EigenData {
    pub m: usize,
    /// dlog exponents of the coset representatives `g^0 .. g^{m-1}`.
    pub reps: Vec<u64>,
    pub lambdas: Vec<CycloElem>,
}

pub fn eigenvalues(g: &GaussCtx, k: u64) -> Result<EigenData> {
    let m = check_divisor(g.q(), k)? as u64;
    let mut reps = Vec::with_capacity(m as usize);
    let mut lambdas = Vec::with_capacity(m as usize);
    for j in 0..m {
        // U_k = { g^{m i} : i < k }
        let mut b = ElemBuilder::new(g.cyc.clone());
        for i in 0..k {
            let tr = g.fq.trace_of_gen_pow(j + m * i) as u64;
            b.add_root_power(0, tr, m as i64);
        }
        reps.push(j);
        lambdas.push(b.finish());
    }
    Ok(EigenData {
        m: m as usize,
        reps,
        lambdas,
    })
}

/// `det A_q(k)` via the eigenvalue product:
/// `sign(tau_m(-1)) * prod_b lambda_b`.
pub fn det_a_via_eigen(g: &GaussCtx, k: u64) -> Result<CycloElem> {
    let eig = eigenvalues(g, k)?;
    let sign = lerch_sign(-1, eig.m as u64)?;
    let mut acc = CycloElem::from_int(sign as i64);
    for l in &eig.lambdas {
        acc = acc.mul_ref(l);
    }
    Ok(acc)
}

/// `det B_q(k)` via `sign(tau_m(-1)) * prod_b (lambda_b + 1 - q)/q`,
/// which is guaranteed rational. Returns exact 0 when a factor vanishes.
pub fn det_b_via_eigen(g: &GaussCtx, k: u64) -> Result<Rat> {
    let eig = eigenvalues(g, k)?;
    let q = g.q() as i64;
    let sign = lerch_sign(-1, eig.m as u64)?;
    let mut acc = CycloElem::from_int(sign as i64);
    let inv_q = Rat::new(Int::one(), Int::from(q));
    for l in &eig.lambdas {
        let f = l.add_ref(&CycloElem::from_int(1 - q)).scale(&inv_q);
        if f.is_zero() {
            return Ok(Rat::zero());
        }
        acc = acc.mul_ref(&f);
    }
    acc.as_rational()
        .ok_or_else(|| Error::BadFieldData("det B_q(k) did not reduce to a rational".into()))
}

/// Carlitz's matrix `C_p(psi) = [psi(i + j)]_{1 <= i,j <= p-1}` over `F_p`.
pub fn build_carlitz(g: &GaussCtx, t: u64) -> Result<SquareMatrix<CycloElem>> {
    let p = g.fq.p;
    assert_eq!(g.fq.n, 1, "Carlitz matrix is a prime-field object");
    if p == 2 || t % (p - 1) == 0 {
        return Err(Error::WrongCharacterOrder(1, p - 1));
    }
    let ch = Character { t: t % (p - 1) };
    Ok(SquareMatrix::from_fn(p as usize - 1, |i, j| {
        let x = g.fq.scalar((i + j + 2) as u64);
        g.char_eval(ch, &x)
    }))
}

/// Carlitz's closed form for `det C_p(psi)`: a sign depending on
/// `f = ord(psi)` and `psi(-1)`, times `G_p(psi)^{p-1} / p`.
pub fn carlitz_det_formula(g: &GaussCtx, t: u64) -> Result<CycloElem> {
    let p = g.fq.p;
    assert_eq!(g.fq.n, 1);
    if p == 2 || t % (p - 1) == 0 {
        return Err(Error::WrongCharacterOrder(1, p - 1));
    }
    let ch = Character { t: t % (p - 1) };
    let f = g.char_order(ch);
    let psi_m1 = g.char_at_minus_one(ch);
    let exponent = if f % 2 == 1 {
        (p - 1) / (2 * f)
    } else if psi_m1 == 1 {
        (p - 1) / f
    } else {
        (f + 2) * (p - 1) / (2 * f)
    };
    let sign = if exponent % 2 == 0 { 1 } else { -1 };
    let gp = g.gauss_sum(ch).pow(p - 1);
    Ok(gp.scale(&Rat::new(Int::from(sign), Int::from(p))))
}

/// Chapman's `V_p = [((i + j - 1)/p)]_{1 <= i,j <= (p-1)/2}`.
pub fn build_legendre_v(p: u64) -> SquareMatrix<Int> {
    assert!(p > 2);
    let d = (p as usize - 1) / 2;
    SquareMatrix::from_fn(d, |i, j| {
        Int::from(crate::characters::legendre_symbol((i + j + 1) as i64, p))
    })
}

/// The reflection partner `[((i + j)/p)]_{1 <= i,j <= (p-1)/2}`.
pub fn build_legendre_shifted(p: u64) -> SquareMatrix<Int> {
    assert!(p > 2);
    let d = (p as usize - 1) / 2;
    SquareMatrix::from_fn(d, |i, j| {
        Int::from(crate::characters::legendre_symbol((i + j + 2) as i64, p))
    })
}

/// Sun's `S_p = [((i^2 + j^2)/p)]_{1 <= i,j <= (p-1)/2}`.
pub fn build_sun_s(p: u64) -> SquareMatrix<Int> {
    assert!(p > 2);
    let d = (p as usize - 1) / 2;
    SquareMatrix::from_fn(d, |i, j| {
        let v = ((i + 1) * (i + 1) + (j + 1) * (j + 1)) as i64;
        Int::from(crate::characters::legendre_symbol(v, p))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gctx(p: u64, n: u32) -> GaussCtx {
        GaussCtx::new(p, n).unwrap()
    }

    #[test]
    fn identity_determinants() {
        let id = SquareMatrix::from_fn(4, |i, j| {
            if i == j {
                CycloElem::one()
            } else {
                CycloElem::zero()
            }
        });
        assert_eq!(id.det_exact(), CycloElem::one());
        assert_eq!(id.det_cofactor(), CycloElem::one());
    }

    #[test]
    fn det_a_q3_k1_cofactor_oracle() {
        let g = gctx(3, 1);
        let a = build_a(&g, 1).unwrap();
        // 2x2 oracle by hand: (-1)(-1) - G(chi)^2 with G(chi)^2 = -3
        let gs = g.gauss_sum(Character { t: 1 });
        let oracle = CycloElem::one().sub_ref(&gs.mul_ref(&gs));
        assert_eq!(oracle, CycloElem::from_int(4));
        assert_eq!(a.det_exact(), CycloElem::from_int(4));
        assert_eq!(a.det_cofactor(), CycloElem::from_int(4));
        assert_eq!(det_a_via_eigen(&g, 1).unwrap(), CycloElem::from_int(4));
    }

    #[test]
    fn trivial_k_gives_one_by_one() {
        for (p, n) in [(3u64, 1u32), (5, 1), (3, 2)] {
            let g = gctx(p, n);
            let k = g.q() - 1;
            let a = build_a(&g, k).unwrap();
            assert_eq!(a.dim(), 1);
            assert_eq!(a.det_exact(), CycloElem::from_int(-1));
            assert_eq!(det_a_via_eigen(&g, k).unwrap(), CycloElem::from_int(-1));
        }
    }

    #[test]
    fn a_q5_k2_entries() {
        let g = gctx(5, 1);
        let a = build_a(&g, 2).unwrap();
        let root5 = g.gauss_sum(Character { t: 2 });
        assert_eq!(*a.get(0, 0), CycloElem::from_int(-1));
        assert_eq!(*a.get(0, 1), root5);
        assert_eq!(*a.get(1, 0), root5);
        assert_eq!(*a.get(1, 1), CycloElem::from_int(-1));
        // det = 1 - 5 = -4
        assert_eq!(a.det_exact(), CycloElem::from_int(-4));
    }

    #[test]
    fn eigenvalue_examples() {
        // k = q-1: single eigenvalue -1
        let g = gctx(7, 1);
        let eig = eigenvalues(&g, 6).unwrap();
        assert_eq!(eig.lambdas, vec![CycloElem::from_int(-1)]);
        // k = 1: lambda_b = (q-1) zeta_p^{Tr(b)}
        let eig = eigenvalues(&g, 1).unwrap();
        for (j, l) in eig.reps.iter().zip(&eig.lambdas) {
            let tr = g.fq.trace_of_gen_pow(*j) as u64;
            let expect = CycloElem::monomial(&g.cyc, 0, tr).scale(&Rat::from_integer(6.into()));
            assert_eq!(*l, expect);
        }
        // q=5, k=2: lambda_1 = 2(z5 + z5^4), lambda_2 = 2(z5^2 + z5^3)
        let g5 = gctx(5, 1);
        let eig = eigenvalues(&g5, 2).unwrap();
        let z = |v| CycloElem::monomial(&g5.cyc, 0, v);
        let two = Rat::from_integer(2.into());
        let l1 = z(1).add_ref(&z(4)).scale(&two);
        let l2 = z(2).add_ref(&z(3)).scale(&two);
        // reps are g^0 = 1 and g^1 = 2; Tr is the identity on F_5
        assert_eq!(eig.lambdas[0], l1);
        assert_eq!(eig.lambdas[1], l2);
    }

    #[test]
    fn eigenvalues_well_defined_on_cosets() {
        let g = gctx(3, 2);
        for k in [2u64, 4] {
            let m = (g.q() - 1) / k;
            for j in 0..m {
                // recompute lambda from a different coset representative
                let mut b = ElemBuilder::new(g.cyc.clone());
                for i in 0..k {
                    let tr = g.fq.trace_of_gen_pow(j + m + m * i) as u64;
                    b.add_root_power(0, tr, m as i64);
                }
                let eig = eigenvalues(&g, k).unwrap();
                assert_eq!(eig.lambdas[j as usize], b.finish(), "k={k} j={j}");
            }
        }
    }

    #[test]
    fn eigenrelation_c_v_equals_lambda_v() {
        for (p, n) in [(5u64, 1u32), (7, 1), (3, 2), (13, 1)] {
            let g = gctx(p, n);
            let q = g.q();
            for k in crate::poly::divisors(q - 1) {
                let c = build_c(&g, k).unwrap();
                let eig = eigenvalues(&g, k).unwrap();
                let m = eig.m;
                for (bj, lambda) in eig.reps.iter().zip(&eig.lambdas) {
                    let b = g.fq.gen_pow(*bj).clone();
                    let v: Vec<CycloElem> = (0..m)
                        .map(|r| g.char_eval(Character { t: k * r as u64 % (q - 1) }, &b))
                        .collect();
                    for i in 0..m {
                        let mut lhs = CycloElem::zero();
                        for (r, vr) in v.iter().enumerate() {
                            lhs = lhs.add_ref(&c.get(i, r).mul_ref(vr));
                        }
                        assert_eq!(lhs, lambda.mul_ref(&v[i]), "q={q} k={k} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_relates_c_and_d() {
        for (p, n) in [(5u64, 1u32), (7, 1), (3, 2)] {
            let g = gctx(p, n);
            let q = g.q();
            for k in crate::poly::divisors(q - 1) {
                let c = build_c(&g, k).unwrap();
                let d = build_d(&g, k).unwrap();
                let m = c.dim();
                for i in 0..m {
                    for j in 0..m {
                        let sign = (k as i64 * (i as i64 - j as i64)).rem_euclid(2);
                        let expect = if sign == 1 {
                            -c.get(i, j).clone()
                        } else {
                            c.get(i, j).clone()
                        };
                        assert_eq!(*d.get(i, j), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn det_a_eigen_examples() {
        let g5 = gctx(5, 1);
        assert_eq!(det_a_via_eigen(&g5, 1).unwrap(), CycloElem::from_int(-256));
        let g9 = gctx(3, 2);
        assert_eq!(det_a_via_eigen(&g9, 2).unwrap(), CycloElem::from_int(512));
    }

    #[test]
    fn det_b_eigen_examples() {
        let g3 = gctx(3, 1);
        assert_eq!(det_b_via_eigen(&g3, 1).unwrap(), Rat::new(4.into(), 3.into()));
        let g5 = gctx(5, 1);
        assert_eq!(det_b_via_eigen(&g5, 2).unwrap(), Rat::new(4.into(), 5.into()));
        let g9 = gctx(3, 2);
        assert_eq!(det_b_via_eigen(&g9, 2).unwrap(), Rat::zero());
        // 1x1 case: det B_3(2) = -1
        assert_eq!(det_b_via_eigen(&g3, 2).unwrap(), Rat::from_integer((-1).into()));
    }

    #[test]
    fn carlitz_p3_by_hand() {
        let g = gctx(3, 1);
        let c = build_carlitz(&g, 1).unwrap();
        // [[phi(2), phi(3)], [phi(3), phi(4)]] = [[-1, 0], [0, 1]]
        assert_eq!(*c.get(0, 0), CycloElem::from_int(-1));
        assert_eq!(*c.get(0, 1), CycloElem::zero());
        assert_eq!(*c.get(1, 0), CycloElem::zero());
        assert_eq!(*c.get(1, 1), CycloElem::one());
        assert_eq!(c.det_exact(), CycloElem::from_int(-1));
        assert_eq!(carlitz_det_formula(&g, 1).unwrap(), CycloElem::from_int(-1));
    }

    #[test]
    fn carlitz_p5_quadratic() {
        let g = gctx(5, 1);
        let c = build_carlitz(&g, 2).unwrap();
        assert_eq!(c.det_exact(), CycloElem::from_int(5));
        assert_eq!(carlitz_det_formula(&g, 2).unwrap(), CycloElem::from_int(5));
    }

    #[test]
    fn legendre_matrices_small() {
        let v3 = build_legendre_v(3);
        assert_eq!(v3.det_bareiss(), Int::from(1));
        let s3 = build_sun_s(3);
        assert_eq!(s3.det_bareiss(), Int::from(-1));
        let v5 = build_legendre_v(5);
        assert_eq!(*v5.get(0, 0), Int::from(1));
        assert_eq!(*v5.get(0, 1), Int::from(-1));
        assert_eq!(*v5.get(1, 1), Int::from(-1));
        assert_eq!(v5.det_bareiss(), Int::from(-2));
        let s5 = build_sun_s(5);
        assert_eq!(s5.det_bareiss(), Int::from(1));
    }

    #[test]
    fn invalid_k_is_rejected() {
        let g = gctx(5, 1);
        assert!(build_a(&g, 3).is_err());
        assert!(eigenvalues(&g, 5).is_err());
    }

    use crate::cyclo::ElemBuilder;

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_on_small_int_matrices(
            dim in 1usize..=4,
            seed in any::<u64>(),
        ) {
            let mut state = seed | 1;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % 19) as i64 - 9
            };
            let m = SquareMatrix::from_fn(dim, |_, _| Int::from(next()));
            prop_assert_eq!(m.det_bareiss(), m.det_cofactor());
        }
    }
}
