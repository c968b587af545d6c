//! Exact arithmetic in the field `L = Q(zeta_N, zeta_p)` with `N = q - 1`.
//!
//! Elements are kept fully reduced modulo both cyclotomic relations
//! `Phi_N(zeta_N) = 0` and `Phi_p(zeta_p) = 0`, so equality is structural.
//! Purely rational elements collapse to a context-free constant, which lets
//! `Zero`/`One` exist without a context and makes "this determinant is a
//! rational number" a cheap structural observation.

use crate::poly::{cyclotomic_poly, euler_phi, is_prime};
use crate::{Error, Rat, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// Shared context for `Q(zeta_N, zeta_p)`: the two cyclotomic moduli plus a
/// power table for reducing `zeta_N^u` into the degree-`phi(N)` basis.
#[derive(Debug)]
pub struct CycloCtx {
    /// Order of the first root of unity (`q - 1` in the Gauss-sum setting).
    pub n_root: u64,
    /// The prime `p`.
    pub p: u64,
    /// `deg Phi_N = phi(N)`.
    pub deg_n: usize,
    /// `deg Phi_p = p - 1`.
    pub deg_p: usize,
    /// Ascending coefficients of `Phi_N`, monic.
    pub phi_n: Vec<BigInt>,
    /// Ascending coefficients of `Phi_p` (all ones), monic.
    pub phi_p: Vec<BigInt>,
    /// `zeta_n_pow[u]` = coordinates of `zeta_N^u` in the power basis,
    /// for `0 <= u <= max(N - 1, 2 phi(N) - 2)`.
    zeta_n_pow: Vec<Vec<BigInt>>,
}

impl CycloCtx {
    pub fn new(n_root: u64, p: u64) -> Result<Arc<CycloCtx>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n_root == 0 || n_root.gcd(&p) != 1 {
            return Err(Error::NotCoprime(n_root, p));
        }
        let phi_n = cyclotomic_poly(n_root);
        let phi_p = cyclotomic_poly(p);
        let deg_n = phi_n.len() - 1;
        let deg_p = phi_p.len() - 1;
        debug_assert_eq!(deg_n as u64, euler_phi(n_root));
        debug_assert_eq!(deg_p as u64, p - 1);

        let max_u = std::cmp::max(n_root as usize - 1, 2 * deg_n - 2);
        let mut zeta_n_pow: Vec<Vec<BigInt>> = Vec::with_capacity(max_u + 1);
        for u in 0..deg_n {
            let mut row = vec![BigInt::zero(); deg_n];
            row[u] = BigInt::one();
            zeta_n_pow.push(row);
        }
        for u in deg_n..=max_u {
            let prev = &zeta_n_pow[u - 1];
            let top = prev[deg_n - 1].clone();
            let mut row = vec![BigInt::zero(); deg_n];
            for j in 1..deg_n {
                row[j] = prev[j - 1].clone();
            }
            if !top.is_zero() {
                // zeta_N^{deg_n} = -(phi_n[0] + ... + phi_n[deg_n-1] zeta_N^{deg_n-1})
                for j in 0..deg_n {
                    row[j] -= &top * &phi_n[j];
                }
            }
            zeta_n_pow.push(row);
        }
        Ok(Arc::new(CycloCtx {
            n_root,
            p,
            deg_n,
            deg_p,
            phi_n,
            phi_p,
            zeta_n_pow,
        }))
    }

    /// Dimension of `L` over `Q`.
    pub fn dim(&self) -> usize {
        self.deg_n * self.deg_p
    }

    fn same(&self, other: &CycloCtx) -> bool {
        self.n_root == other.n_root && self.p == other.p
    }
}

#[derive(Clone, Debug)]
enum Repr {
    /// A rational constant, valid in every context.
    Const(Rat),
    /// Fully reduced coordinates, row-major `u * deg_p + v`, and not purely
    /// constant (a purely rational value collapses to `Const`).
    Poly { ctx: Arc<CycloCtx>, coeffs: Vec<Rat> },
}

/// An exact element of `Q(zeta_N, zeta_p)`.
#[derive(Clone, Debug)]
pub struct CycloElem(Repr);

impl CycloElem {
    pub fn from_rat(r: Rat) -> CycloElem {
        CycloElem(Repr::Const(r))
    }

    pub fn from_int(v: i64) -> CycloElem {
        CycloElem(Repr::Const(Rat::from_integer(BigInt::from(v))))
    }

    pub fn from_bigint(v: BigInt) -> CycloElem {
        CycloElem(Repr::Const(Rat::from_integer(v)))
    }

    /// `zeta_N^u * zeta_p^v`, exponents taken modulo the root orders.
    pub fn monomial(ctx: &Arc<CycloCtx>, u: u64, v: u64) -> CycloElem {
        let mut b = ElemBuilder::new(ctx.clone());
        b.add_root_power(u, v, 1);
        b.finish()
    }

    /// `zeta_N` itself.
    pub fn zeta_n(ctx: &Arc<CycloCtx>) -> CycloElem {
        Self::monomial(ctx, 1, 0)
    }

    /// `zeta_p` itself.
    pub fn zeta_p(ctx: &Arc<CycloCtx>) -> CycloElem {
        Self::monomial(ctx, 0, 1)
    }

    pub fn ctx(&self) -> Option<&Arc<CycloCtx>> {
        match &self.0 {
            Repr::Const(_) => None,
            Repr::Poly { ctx, .. } => Some(ctx),
        }
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<Rat> {
        match &self.0 {
            Repr::Const(r) => Some(r.clone()),
            Repr::Poly { .. } => None,
        }
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.denom().is_one())
            .map(|r| r.numer().clone())
    }

    /// Coordinate at `(u, v)` in the reduced power basis.
    pub fn coeff(&self, u: usize, v: usize) -> Rat {
        match &self.0 {
            Repr::Const(r) => {
                if u == 0 && v == 0 {
                    r.clone()
                } else {
                    Rat::zero()
                }
            }
            Repr::Poly { ctx, coeffs } => coeffs[u * ctx.deg_p + v].clone(),
        }
    }

    /// Nonzero coordinates as `(u, v, coeff)` triples.
    pub fn terms(&self) -> Vec<(usize, usize, Rat)> {
        match &self.0 {
            Repr::Const(r) => {
                if r.is_zero() {
                    vec![]
                } else {
                    vec![(0, 0, r.clone())]
                }
            }
            Repr::Poly { ctx, coeffs } => coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i / ctx.deg_p, i % ctx.deg_p, c.clone()))
                .collect(),
        }
    }

    fn promote(&self, ctx: &Arc<CycloCtx>) -> Vec<Rat> {
        match &self.0 {
            Repr::Const(r) => {
                let mut v = vec![Rat::zero(); ctx.dim()];
                v[0] = r.clone();
                v
            }
            Repr::Poly { ctx: c, coeffs } => {
                assert!(c.same(ctx), "cyclotomic context mismatch");
                coeffs.clone()
            }
        }
    }

    fn from_coeffs(ctx: Arc<CycloCtx>, coeffs: Vec<Rat>) -> CycloElem {
        if coeffs.iter().skip(1).all(Zero::is_zero) {
            CycloElem(Repr::Const(coeffs.into_iter().next().unwrap()))
        } else {
            CycloElem(Repr::Poly { ctx, coeffs })
        }
    }

    pub fn scale(&self, s: &Rat) -> CycloElem {
        if s.is_zero() {
            return CycloElem::zero();
        }
        match &self.0 {
            Repr::Const(r) => CycloElem(Repr::Const(r * s)),
            Repr::Poly { ctx, coeffs } => CycloElem(Repr::Poly {
                ctx: ctx.clone(),
                coeffs: coeffs.iter().map(|c| c * s).collect(),
            }),
        }
    }

    pub fn add_ref(&self, other: &CycloElem) -> CycloElem {
        match (&self.0, &other.0) {
            (Repr::Const(a), Repr::Const(b)) => CycloElem(Repr::Const(a + b)),
            _ => {
                let ctx = self.ctx().or_else(|| other.ctx()).unwrap().clone();
                let mut a = self.promote(&ctx);
                let b = other.promote(&ctx);
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                CycloElem::from_coeffs(ctx, a)
            }
        }
    }

    pub fn sub_ref(&self, other: &CycloElem) -> CycloElem {
        self.add_ref(&other.clone().neg())
    }

    pub fn mul_ref(&self, other: &CycloElem) -> CycloElem {
        match (&self.0, &other.0) {
            (Repr::Const(a), _) => other.scale(a),
            (_, Repr::Const(b)) => self.scale(b),
            (Repr::Poly { ctx: ca, coeffs: a }, Repr::Poly { ctx: cb, coeffs: b }) => {
                assert!(ca.same(cb), "cyclotomic context mismatch");
                let ctx = ca;
                let (dn, dp) = (ctx.deg_n, ctx.deg_p);
                let (un, vn) = (2 * dn - 1, 2 * dp - 1);
                let mut acc = vec![Rat::zero(); un * vn];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let (u1, v1) = (i / dp, i % dp);
                    for (j, y) in b.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let (u2, v2) = (j / dp, j % dp);
                        acc[(u1 + u2) * vn + (v1 + v2)] += x * y;
                    }
                }
                CycloElem::from_coeffs(ctx.clone(), reduce_grid(ctx, &mut acc, un, vn))
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> CycloElem {
        let mut base = self.clone();
        let mut acc = CycloElem::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse, via the regular-representation linear solve.
    pub fn invert(&self) -> Result<CycloElem> {
        match &self.0 {
            Repr::Const(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(CycloElem(Repr::Const(r.recip())))
                }
            }
            Repr::Poly { ctx, .. } => {
                let d = ctx.dim();
                // Column i holds the coordinates of self * basis_i.
                let mut rows: Vec<Vec<Rat>> = vec![vec![Rat::zero(); d + 1]; d];
                for i in 0..d {
                    let (u, v) = (i / ctx.deg_p, i % ctx.deg_p);
                    let col = self
                        .mul_ref(&CycloElem::monomial(ctx, u as u64, v as u64))
                        .promote(ctx);
                    for (r, c) in col.into_iter().enumerate() {
                        rows[r][i] = c;
                    }
                }
                rows[0][d] = Rat::one();
                let sol = solve(rows, d).ok_or(Error::DivisionByZero)?;
                let inv = CycloElem::from_coeffs(ctx.clone(), sol);
                debug_assert!(self.mul_ref(&inv).is_one());
                Ok(inv)
            }
        }
    }

    /// Double-precision complex value under the principal embedding
    /// `zeta_M -> e^{2 pi i / M}`.
    pub fn embed(&self) -> Complex64 {
        match &self.0 {
            Repr::Const(r) => Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0),
            Repr::Poly { ctx, coeffs } => {
                let tau = std::f64::consts::TAU;
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (u, v) = (i / ctx.deg_p, i % ctx.deg_p);
                    let angle = tau * (u as f64 / ctx.n_root as f64 + v as f64 / ctx.p as f64);
                    acc += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle);
                }
                acc
            }
        }
    }

    /// Re-express an element of `Q(zeta_{N'}, zeta_p)` inside a larger
    /// context with `N' | N`, via `zeta_{N'} = zeta_N^{N/N'}`.
    pub fn lift(&self, big: &Arc<CycloCtx>) -> CycloElem {
        match &self.0 {
            Repr::Const(_) => self.clone(),
            Repr::Poly { ctx, .. } => {
                assert_eq!(ctx.p, big.p, "lift must preserve p");
                assert_eq!(big.n_root % ctx.n_root, 0, "root orders must be nested");
                let e = big.n_root / ctx.n_root;
                let mut acc = CycloElem::zero();
                for (u, v, c) in self.terms() {
                    // Basis coordinates of the small field are plain root
                    // powers, so each maps to a single monomial upstairs.
                    let m = CycloElem::monomial(big, u as u64 * e, v as u64);
                    acc = acc.add_ref(&m.scale(&c));
                }
                acc
            }
        }
    }
}

/// Gaussian elimination for the inversion solve; returns the solution of the
/// augmented system or `None` if the matrix is singular.
fn solve(mut rows: Vec<Vec<Rat>>, d: usize) -> Option<Vec<Rat>> {
    for col in 0..d {
        let pivot = (col..d).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for j in col..=d {
            rows[col][j] = &rows[col][j] * &inv;
        }
        for r in 0..d {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for j in col..=d {
                    let t = &rows[col][j] * &f;
                    rows[r][j] -= t;
                }
            }
        }
    }
    Some(rows.into_iter().map(|r| r[d].clone()).collect())
}

/// Reduce a raw product grid (`un x vn`, exponents not yet wrapped) into the
/// canonical `deg_n x deg_p` basis.
fn reduce_grid(ctx: &Arc<CycloCtx>, acc: &mut [Rat], un: usize, vn: usize) -> Vec<Rat> {
    let (dn, dp) = (ctx.deg_n, ctx.deg_p);
    let p = ctx.p as usize;
    // zeta_p pass: wrap v >= p, then fold v = p - 1 through Phi_p.
    for u in 0..un {
        for v in dp..vn {
            let val = std::mem::replace(&mut acc[u * vn + v], Rat::zero());
            if val.is_zero() {
                continue;
            }
            if v >= p {
                acc[u * vn + (v - p)] += val;
            } else {
                for v2 in 0..dp {
                    acc[u * vn + v2] -= &val;
                }
            }
        }
    }
    // zeta_N pass: fold u >= deg_n through the power table.
    let mut out = vec![Rat::zero(); dn * dp];
    for u in 0..un {
        for v in 0..dp {
            let val = &acc[u * vn + v];
            if val.is_zero() {
                continue;
            }
            if u < dn {
                out[u * dp + v] += val;
            } else {
                for (j, w) in ctx.zeta_n_pow[u].iter().enumerate() {
                    if !w.is_zero() {
                        out[j * dp + v] += val * Rat::from_integer(w.clone());
                    }
                }
            }
        }
    }
    out
}

/// Accumulates integer combinations of raw root powers `zeta_N^u zeta_p^v`
/// (any `u < N`, any `v < p`) and reduces once at the end. This is how Gauss
/// sums and eigenvalues are assembled without per-term reductions.
pub struct ElemBuilder {
    ctx: Arc<CycloCtx>,
    /// deg_n rows, p columns (v = p - 1 still unfolded).
    grid: Vec<BigInt>,
}

impl ElemBuilder {
    pub fn new(ctx: Arc<CycloCtx>) -> ElemBuilder {
        let size = ctx.deg_n * ctx.p as usize;
        ElemBuilder {
            ctx,
            grid: vec![BigInt::zero(); size],
        }
    }

    pub fn add_root_power(&mut self, u: u64, v: u64, weight: i64) {
        if weight == 0 {
            return;
        }
        let p = self.ctx.p as usize;
        let u = (u % self.ctx.n_root) as usize;
        let v = (v % self.ctx.p) as usize;
        let w = BigInt::from(weight);
        for (j, c) in self.ctx.zeta_n_pow[u].iter().enumerate() {
            if !c.is_zero() {
                self.grid[j * p + v] += c * &w;
            }
        }
    }

    pub fn finish(self) -> CycloElem {
        let (dn, dp) = (self.ctx.deg_n, self.ctx.deg_p);
        let p = self.ctx.p as usize;
        let mut coeffs = vec![Rat::zero(); dn * dp];
        for j in 0..dn {
            let top = self.grid[j * p + dp].clone(); // v = p - 1 column
            for v in 0..dp {
                let c = &self.grid[j * p + v] - &top;
                if !c.is_zero() {
                    coeffs[j * dp + v] = Rat::from_integer(c);
                }
            }
        }
        CycloElem::from_coeffs(self.ctx, coeffs)
    }
}

/// The exact product over nonzero residues `prod_{b=1}^{p-1} (1 - zeta_p^b)`,
/// which must reduce to the rational constant `p`.
pub fn one_minus_zeta_product(ctx: &Arc<CycloCtx>) -> CycloElem {
    let mut acc = CycloElem::one();
    for b in 1..ctx.p {
        let f = CycloElem::one().sub_ref(&CycloElem::monomial(ctx, 0, b));
        acc = acc.mul_ref(&f);
    }
    acc
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Const(a), Repr::Const(b)) => a == b,
            (Repr::Poly { ctx: ca, coeffs: a }, Repr::Poly { ctx: cb, coeffs: b }) => {
                ca.same(cb) && a == b
            }
            // A reduced Poly is never purely rational.
            _ => false,
        }
    }
}

impl Zero for CycloElem {
    fn zero() -> Self {
        CycloElem(Repr::Const(Rat::zero()))
    }
    fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Const(r) if r.is_zero())
    }
}

impl One for CycloElem {
    fn one() -> Self {
        CycloElem(Repr::Const(Rat::one()))
    }
    fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Const(r) if r.is_one())
    }
}

impl Add for CycloElem {
    type Output = CycloElem;
    fn add(self, rhs: CycloElem) -> CycloElem {
        self.add_ref(&rhs)
    }
}

impl Sub for CycloElem {
    type Output = CycloElem;
    fn sub(self, rhs: CycloElem) -> CycloElem {
        self.sub_ref(&rhs)
    }
}

impl Mul for CycloElem {
    type Output = CycloElem;
    fn mul(self, rhs: CycloElem) -> CycloElem {
        self.mul_ref(&rhs)
    }
}

impl Neg for CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        match self.0 {
            Repr::Const(r) => CycloElem(Repr::Const(-r)),
            Repr::Poly { ctx, coeffs } => CycloElem(Repr::Poly {
                ctx,
                coeffs: coeffs.into_iter().map(Neg::neg).collect(),
            }),
        }
    }
}

impl Div for CycloElem {
    type Output = CycloElem;
    fn div(self, rhs: CycloElem) -> CycloElem {
        self.mul_ref(&rhs.invert().expect("division by zero"))
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Const(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Poly { ctx, .. } => {
                let mut first = true;
                for (u, v, c) in self.terms() {
                    let sign = if c.is_negative() { "-" } else { "+" };
                    if first {
                        if c.is_negative() {
                            write!(f, "-")?;
                        }
                        first = false;
                    } else {
                        write!(f, " {} ", sign)?;
                    }
                    let a = c.abs();
                    let mut parts = Vec::new();
                    if !a.is_one() || (u == 0 && v == 0) {
                        if a.denom().is_one() {
                            parts.push(format!("{}", a.numer()));
                        } else {
                            parts.push(format!("{}/{}", a.numer(), a.denom()));
                        }
                    }
                    if u > 0 {
                        parts.push(format!("z{}^{}", ctx.n_root, u));
                    }
                    if v > 0 {
                        parts.push(format!("z{}^{}", ctx.p, v));
                    }
                    write!(f, "{}", parts.join("*"))?;
                }
                Ok(())
            }
        }
    }
}
