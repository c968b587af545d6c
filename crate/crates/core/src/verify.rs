//! Executable checks, one per closed-form claim, producing structured
//! reports. The expected side of every report comes from the closed forms
//! in this module; the computed side comes from the exact matrix engine.
//! The two paths share no determinant logic.

use crate::characters::{
    hd_lifting_check, hd_product_check, legendre_symbol, lerch_sign,
    stickelberger_check, Character, GaussCtx,
};
use crate::cyclo::CycloElem;
use crate::finite_field::order_mod;
use crate::matrix::{
    build_a, build_a_with_generator, build_b, build_b_with_generator, build_carlitz,
    build_legendre_shifted, build_legendre_v, build_sun_s, carlitz_det_formula, det_a_via_eigen,
    det_b_via_eigen, SquareMatrix,
};
use crate::{Int, Rat, Result};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Recorded for information only; neither asserted nor counted a failure.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<String>,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    /// Only populated on request; timing would break byte-determinism.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    fn new(claim: &str, expected: String, computed: String, pass: bool) -> VerificationReport {
        VerificationReport {
            claim: claim.into(),
            q: None,
            p: None,
            n: None,
            k: None,
            extra: None,
            expected,
            computed,
            status: if pass { Status::Pass } else { Status::Fail },
            elapsed_ms: None,
        }
    }

    fn at(mut self, g: &GaussCtx) -> Self {
        self.q = Some(g.q());
        self.p = Some(g.fq.p);
        self.n = Some(g.fq.n);
        self
    }

    fn with_k(mut self, k: u64) -> Self {
        self.k = Some(k);
        self
    }

    fn with_extra(mut self, extra: String) -> Self {
        self.extra = Some(extra);
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Deterministic aggregation order: claim id, then parameters.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| {
        (&a.claim, a.q, a.p, a.n, a.k, &a.extra).cmp(&(&b.claim, b.q, b.p, b.n, b.k, &b.extra))
    });
}

pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports are serializable")
}

/// CSV projection with columns claim, q, p, n, k, status, expected, computed.
pub fn reports_to_csv(reports: &[VerificationReport], header: bool) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if header {
        w.write_record(["claim", "q", "p", "n", "k", "status", "expected", "computed"])
            .unwrap();
    }
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in reports {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        };
        w.write_record([
            r.claim.clone(),
            opt(r.q),
            opt(r.p),
            opt(r.n.map(u64::from)),
            opt(r.k),
            status.into(),
            r.expected.clone(),
            r.computed.clone(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

// ---------------------------------------------------------------------------
// Closed forms. Kept apart from the matrix engine on purpose.
// ---------------------------------------------------------------------------

/// `(-1)^{(q-2)(q-3)/2} (q-1)^{q-1}`.
pub fn det_a1_closed(q: u64) -> Int {
    let sign = if (q - 2) * (q - 3) / 2 % 2 == 0 { 1 } else { -1 };
    Int::from(sign) * Pow::pow(&Int::from(q - 1), (q - 1) as u32)
}

/// `(-1)^{alpha_n} ((q-1)/2)^{(q-1)/2} 2^{(p^{n-1}-1)/2}` for odd `q = p^n`.
pub fn det_a2_closed(p: u64, n: u32) -> Int {
    let q = p.pow(n);
    let alpha = if n % 2 == 1 { 1 } else { (p * p + 7) / 8 };
    let sign = if alpha % 2 == 0 { 1 } else { -1 };
    Int::from(sign)
        * Pow::pow(&Int::from((q - 1) / 2), ((q - 1) / 2) as u32)
        * Pow::pow(&Int::from(2), ((p.pow(n - 1) - 1) / 2) as u32)
}

/// `(-1)^{(m^2-m+2)/2}`, the residue of `det A_q(k)` mod `p`.
pub fn congruence_sign(m: u64) -> i64 {
    if (m * m - m + 2) / 2 % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(-1)^{p(p+1)/2} (p-1)^{p-1} / p^{p-2}`.
pub fn det_b1_closed(p: u64) -> Rat {
    let sign = if p * (p + 1) / 2 % 2 == 0 { 1 } else { -1 };
    Rat::new(
        Int::from(sign) * Pow::pow(&Int::from(p - 1), (p - 1) as u32),
        Pow::pow(&Int::from(p), (p - 2) as u32),
    )
}

/// `(-1)^{(m^2-m+2)/2} p ((p-1)/2p)^{(p-1)/2}` for odd prime `p`, with
/// `m = (p-1)/2`. The sign combines the `tau_m(-1)` permutation sign,
/// `(-1)^{(m-1)(m-2)/2}`, with the `(-1)^m` from evaluating the
/// eigenvalue product; writing it as `(p+3)(p-1)/4` flips it whenever
/// `m = 0, 3 (mod 4)` (first at p = 7, where the determinant is +27/49).
pub fn det_b2_closed(p: u64) -> Rat {
    let m = (p - 1) / 2;
    let sign = if (m * m - m + 2) / 2 % 2 == 0 { 1 } else { -1 };
    let base = Rat::new(Int::from(p - 1), Int::from(2 * p));
    Rat::from_integer(Int::from(sign as i64 * p as i64)) * Pow::pow(&base, ((p - 1) / 2) as i32)
}

fn factorial_int(r: u64) -> Int {
    (1..=r).map(Int::from).product::<Int>().max(Int::one())
}

/// `prod_{r=0}^{n-1} r!(r+1)!`.
pub fn gamma_det_closed(n: u64) -> Int {
    (0..n).map(|r| factorial_int(r) * factorial_int(r + 1)).product()
}

/// `(-1)^{n(n-1)/2} prod_{r=0}^{n-1} r!/(n+r)!`.
pub fn gamma_recip_det_closed(n: u64) -> Rat {
    let sign = if n * (n - 1) / 2 % 2 == 0 { 1 } else { -1 };
    (0..n)
        .map(|r| Rat::new(factorial_int(r), factorial_int(n + r)))
        .product::<Rat>()
        * Rat::from_integer(sign.into())
}

// ---------------------------------------------------------------------------
// Per-claim verifiers.
// ---------------------------------------------------------------------------

/// Integrality, rationality, the mod-p congruence, and generator
/// independence of `det A_q(k)` / `det B_q(k)`. Generator replacements
/// `chi -> chi^s` are sampled (up to three `s`); equality is checked
/// entrywise through the conjugating index permutation `i -> si mod m`,
/// plus a full re-elimination when `m <= cross_check_bound`.
pub fn verify_thm11(g: &GaussCtx, k: u64, cross_check_bound: usize) -> Result<Vec<VerificationReport>> {
    let q = g.q();
    let m = (q - 1) / k;
    let det_a = det_a_via_eigen(g, k)?;
    let det_a_int = det_a.as_integer();
    let mut out = Vec::new();

    out.push(
        VerificationReport::new(
            "thm11.integer",
            "det A in Z".into(),
            match &det_a_int {
                Some(v) => v.to_string(),
                None => format!("{det_a}"),
            },
            det_a_int.is_some(),
        )
        .at(g)
        .with_k(k),
    );

    let det_b = det_b_via_eigen(g, k);
    out.push(
        VerificationReport::new(
            "thm11.rational",
            "det B in Q".into(),
            match &det_b {
                Ok(v) => v.to_string(),
                Err(e) => e.to_string(),
            },
            det_b.is_ok(),
        )
        .at(g)
        .with_k(k),
    );

    let sign = congruence_sign(m);
    let cong_ok = match &det_a_int {
        Some(v) => (v - Int::from(sign)).mod_floor(&Int::from(g.fq.p)).is_zero(),
        None => false,
    };
    out.push(
        VerificationReport::new(
            "thm11.congruence",
            format!("det A = {sign} (mod {})", g.fq.p),
            det_a_int.map(|v| v.to_string()).unwrap_or_else(|| "non-integer".into()),
            cong_ok,
        )
        .at(g)
        .with_k(k),
    );

    // generator replacements
    let samples: Vec<u64> = (2..q - 1).filter(|s| s.gcd(&(q - 1)) == 1).take(3).collect();
    let a = build_a(g, k)?;
    let b = build_b(g, k)?;
    let mut gen_ok = true;
    let mut detail = String::new();
    // re-elimination cost scales like m^3 times the cube of the field
    // degree (pivot inversions), so both are capped
    let cross_check = m as usize <= cross_check_bound && g.cyc.dim() <= 64;
    let det_a_base = if cross_check { Some(a.det_exact()) } else { None };
    for (idx, &s) in samples.iter().enumerate() {
        let a2 = build_a_with_generator(g, k, s)?;
        let b2 = build_b_with_generator(g, k, s)?;
        let mu = m as usize;
        let perm_ok = (0..mu).all(|i| {
            (0..mu).all(|j| {
                let pi = (s as usize * i) % mu;
                let pj = (s as usize * j) % mu;
                a2.get(i, j) == a.get(pi, pj) && b2.get(i, j) == b.get(pi, pj)
            })
        });
        // full re-elimination on the first sample only; the entrywise
        // permutation identity already forces equal determinants
        let det_ok = match (&det_a_base, idx) {
            (Some(base), 0) => &a2.det_exact() == base,
            _ => true,
        };
        if !(perm_ok && det_ok) {
            gen_ok = false;
            detail = format!("mismatch at s={s}");
        }
    }
    out.push(
        VerificationReport::new(
            "thm11.generator",
            "det independent of generator".into(),
            if gen_ok { "identical".into() } else { detail },
            gen_ok,
        )
        .at(g)
        .with_k(k)
        .with_extra(format!(
            "s sampled: {}",
            samples.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
        )),
    );
    Ok(out)
}

/// `det A_q(1)` against the closed form. `q = 2` is recorded
/// informationally: the direct value is `-1` while the formula expression
/// evaluates to `1`, and the claim's status there is an open question.
pub fn verify_thm12_a1(g: &GaussCtx) -> Result<VerificationReport> {
    let q = g.q();
    let det = det_a_via_eigen(g, 1)?;
    let computed = det.as_integer().map(|v| v.to_string()).unwrap_or_else(|| format!("{det}"));
    if q == 2 {
        let mut r = VerificationReport::new(
            "thm12.a1",
            "unasserted (formula expression = 1)".into(),
            computed,
            true,
        )
        .at(g)
        .with_k(1)
        .with_extra("recorded without judging the formula at q=2".into());
        r.status = Status::Info;
        return Ok(r);
    }
    let expected = det_a1_closed(q);
    let pass = det == CycloElem::from_bigint(expected.clone());
    Ok(VerificationReport::new("thm12.a1", expected.to_string(), computed, pass).at(g).with_k(1))
}

/// `det A_q(2)` against the closed form, odd `q` only.
pub fn verify_thm12_a2(g: &GaussCtx) -> Result<Option<VerificationReport>> {
    let q = g.q();
    if q % 2 == 0 {
        return Ok(None);
    }
    let det = det_a_via_eigen(g, 2)?;
    let expected = det_a2_closed(g.fq.p, g.fq.n);
    let computed = det.as_integer().map(|v| v.to_string()).unwrap_or_else(|| format!("{det}"));
    let pass = det == CycloElem::from_bigint(expected.clone());
    Ok(Some(
        VerificationReport::new("thm12.a2", expected.to_string(), computed, pass).at(g).with_k(2),
    ))
}

/// Singularity of `B_q(k)` against the order criterion, plus the `n = 1`
/// closed forms for `k = 1` and `k = 2`.
pub fn verify_thm13(g: &GaussCtx, k: u64) -> Result<Vec<VerificationReport>> {
    let p = g.fq.p;
    let n = g.fq.n;
    let det_b = det_b_via_eigen(g, k)?;
    let order = order_mod(p, k)?;
    let nonsingular = !det_b.is_zero();
    let mut out = vec![VerificationReport::new(
        "thm13.singularity",
        format!(
            "{} (o_k(p) = {order}, n = {n})",
            if order == n as u64 { "nonsingular" } else { "singular" }
        ),
        format!("det B = {det_b}"),
        nonsingular == (order == n as u64),
    )
    .at(g)
    .with_k(k)];

    if n == 1 && k == 1 {
        let expected = det_b1_closed(p);
        out.push(
            VerificationReport::new(
                "thm13.b1",
                expected.to_string(),
                det_b.to_string(),
                det_b == expected,
            )
            .at(g)
            .with_k(k),
        );
    }
    if n == 1 && k == 2 && p % 2 == 1 {
        let expected = det_b2_closed(p);
        out.push(
            VerificationReport::new(
                "thm13.b2",
                expected.to_string(),
                det_b.to_string(),
                det_b == expected,
            )
            .at(g)
            .with_k(k),
        );
    }
    Ok(out)
}

/// `det C_p(psi)` against Carlitz's three-case formula, every nontrivial
/// `psi` of `F_p`.
pub fn verify_carlitz(g: &GaussCtx) -> Result<Vec<VerificationReport>> {
    let p = g.fq.p;
    assert_eq!(g.fq.n, 1);
    let mut out = Vec::new();
    for t in 1..p.saturating_sub(1) {
        let det = build_carlitz(g, t)?.det_exact();
        let expected = carlitz_det_formula(g, t)?;
        out.push(
            VerificationReport::new(
                "carlitz",
                format!("{expected}"),
                format!("{det}"),
                det == expected,
            )
            .at(g)
            .with_extra(format!("t={t} ord={}", g.char_order(Character { t }))),
        );
    }
    Ok(out)
}

/// Stickelberger congruence for every exponent `0 <= r <= q-2`.
pub fn verify_stickelberger(g: &GaussCtx) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for r in 0..=g.q() - 2 {
        let o = stickelberger_check(g, r)?;
        out.push(
            VerificationReport::new("stickelberger", o.expected, o.computed, o.pass)
                .at(g)
                .with_extra(format!("r={r:04} s(r)={} t(r)={}", o.digit_sum, o.digit_factorials)),
        );
    }
    Ok(out)
}

fn permutation_sign_brute(a: u64, m: u64) -> i32 {
    let perm: Vec<u64> = (0..m).map(|x| a * x % m).collect();
    let mut inv = 0u64;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Lerch's sign formula against a brute-force inversion count, all units
/// of `Z/m`.
pub fn verify_lerch(m: u64) -> Result<VerificationReport> {
    let mut mismatches = Vec::new();
    let mut checked = 0u64;
    for a in 1..m.max(2) {
        if a.gcd(&m) != 1 {
            continue;
        }
        checked += 1;
        let formula = lerch_sign(a as i64, m)?;
        let brute = permutation_sign_brute(a, m);
        if formula != brute {
            mismatches.push(format!("a={a}: formula {formula}, brute {brute}"));
        }
    }
    let mut r = VerificationReport::new(
        "lerch",
        format!("{checked} signs match inversion count"),
        if mismatches.is_empty() {
            "all match".into()
        } else {
            mismatches.join("; ")
        },
        mismatches.is_empty(),
    );
    r.extra = Some(format!("m={m:04}"));
    Ok(r)
}

/// Hasse-Davenport lifting for every base character of `F_p` into `F_{p^n}`.
pub fn verify_hd_lifting(p: u64, n: u32) -> Result<Vec<VerificationReport>> {
    let ts: Vec<u64> = if p == 2 { vec![0] } else { (0..p - 1).collect() };
    let mut out = Vec::new();
    for t in ts {
        let o = hd_lifting_check(p, n, t)?;
        let mut r = VerificationReport::new(
            "hd.lifting",
            format!("{}", o.rhs),
            format!("{}", o.lhs),
            o.pass,
        );
        r.q = Some(p.pow(n));
        r.p = Some(p);
        r.n = Some(n);
        r.extra = Some(format!("t={t}"));
        out.push(r);
    }
    Ok(out)
}

/// Hasse-Davenport product relation, one aggregate report per order
/// `m | q-1`, sweeping every `psi`.
pub fn verify_hd_product(g: &GaussCtx) -> Result<Vec<VerificationReport>> {
    let q = g.q();
    let mut out = Vec::new();
    for m in crate::poly::divisors(q - 1) {
        let a0 = (q - 1) / m;
        let mut bad = Vec::new();
        for t_psi in 0..q - 1 {
            let o = hd_product_check(g, m, t_psi, a0)?;
            if !o.pass {
                bad.push(format!("t_psi={t_psi}"));
            }
        }
        out.push(
            VerificationReport::new(
                "hd.product",
                format!("{} characters satisfy the relation", q - 1),
                if bad.is_empty() { "all satisfy".into() } else { bad.join("; ") },
                bad.is_empty(),
            )
            .at(g)
            .with_extra(format!("m={m:04}")),
        );
    }
    Ok(out)
}

/// Chapman: the reflection identity for all odd `p`, and `det V_p = 0` for
/// `p = 3 (mod 4)`, `p >= 7` (`V_3 = [1]` is excluded; the vanishing claim
/// starts at p = 7).
pub fn verify_chapman(p: u64) -> Vec<VerificationReport> {
    let v = build_legendre_v(p);
    let shifted = build_legendre_shifted(p);
    let det_v = v.det_bareiss();
    let det_s = shifted.det_bareiss();
    let reflected = Int::from(legendre_symbol(-1, p)) * &det_s;
    let mut out = vec![{
        let mut r = VerificationReport::new(
            "chapman.reflection",
            format!("(-1/p) * {det_s} = {reflected}"),
            det_v.to_string(),
            det_v == reflected,
        );
        r.p = Some(p);
        r
    }];
    if p % 4 == 3 && p >= 7 {
        let mut r = VerificationReport::new(
            "chapman.vanishing",
            "0".into(),
            det_v.to_string(),
            det_v.is_zero(),
        );
        r.p = Some(p);
        out.push(r);
    }
    out
}

fn is_perfect_square(v: &Int) -> bool {
    if v.is_negative() {
        return false;
    }
    let r = v.sqrt();
    &(&r * &r) == v
}

/// The unique `a = 1 (mod 4)` with `p = a^2 + 4b^2`, for `p = 1 (mod 4)`.
pub fn sun_decomposition_a(p: u64) -> Option<i64> {
    let bound = (p as f64).sqrt() as i64 + 1;
    for abs_a in (1..=bound).step_by(2) {
        let sq = (abs_a * abs_a) as u64;
        if sq > p || (p - sq) % 4 != 0 {
            continue;
        }
        let b2 = Int::from((p - sq) / 4);
        if is_perfect_square(&b2) {
            // pick the sign making a = 1 (mod 4)
            return Some(if abs_a % 4 == 1 { abs_a } else { -abs_a });
        }
    }
    None
}

/// Sun's matrix: `-det S_p` is a nonzero square mod p; a perfect integer
/// square when `p = 3 (mod 4)`; and `det S_p / a` is a perfect square when
/// `p = a^2 + 4b^2`, `a = 1 (mod 4)`.
pub fn verify_sun(p: u64) -> Vec<VerificationReport> {
    let det = build_sun_s(p).det_bareiss();
    let neg = -&det;
    let mut out = Vec::new();

    let residue = neg.mod_floor(&Int::from(p));
    let res_u = u64::try_from(&residue).unwrap();
    let is_sq_mod_p = res_u != 0 && legendre_symbol(res_u as i64, p) == 1;
    let mut r = VerificationReport::new(
        "sun.residue",
        "-det S_p a nonzero square mod p".into(),
        format!("-det S_p = {neg} = {res_u} (mod {p})"),
        is_sq_mod_p,
    );
    r.p = Some(p);
    out.push(r);

    if p % 4 == 3 {
        let mut r = VerificationReport::new(
            "sun.square",
            "-det S_p a perfect square".into(),
            neg.to_string(),
            is_perfect_square(&neg),
        );
        r.p = Some(p);
        out.push(r);
    } else {
        let a = sun_decomposition_a(p).expect("p = 1 (mod 4) is a^2 + 4b^2");
        let (quot, rem) = det.div_rem(&Int::from(a));
        let pass = rem.is_zero() && is_perfect_square(&quot);
        let mut r = VerificationReport::new(
            "sun.quotient",
            format!("det S_p / {a} a perfect square"),
            format!("det S_p = {det}, quotient {quot}"),
            pass,
        );
        r.p = Some(p);
        out.push(r);
    }
    out
}

/// Exact gamma-matrix determinants `det[G(i+j)]` and `det[1/G(i+j)]`
/// through `G(r) = (r-1)!`.
pub fn verify_gamma(dim: u64) -> Vec<VerificationReport> {
    let d = dim as usize;
    let fact = SquareMatrix::from_fn(d, |i, j| factorial_int((i + j + 1) as u64));
    let det = fact.det_bareiss();
    let expected = gamma_det_closed(dim);
    let mut r1 = VerificationReport::new(
        "gamma.det",
        expected.to_string(),
        det.to_string(),
        det == expected,
    );
    r1.extra = Some(format!("n={dim:02}"));

    let recip = SquareMatrix::from_fn(d, |i, j| {
        Rat::new(Int::one(), factorial_int((i + j + 1) as u64))
    });
    let det = recip.det_bareiss();
    let expected = gamma_recip_det_closed(dim);
    let mut r2 = VerificationReport::new(
        "gamma.recip",
        expected.to_string(),
        det.to_string(),
        det == expected,
    );
    r2.extra = Some(format!("n={dim:02}"));
    vec![r1, r2]
}

/// Numeric sanity: `|G_q(chi^t)| = sqrt(q)` for every nontrivial character
/// (tolerance 1e-9), and the sign branches of the quadratic Gauss sum
/// `G_q(phi) = (-1)^{n-1} q^{1/2}` (p = 1 mod 4) or `(-1)^{n-1} i^n q^{1/2}`
/// (p = 3 mod 4).
pub fn verify_numeric(g: &GaussCtx) -> Vec<VerificationReport> {
    let q = g.q();
    let root_q = (q as f64).sqrt();
    let mut worst = 0f64;
    for t in 1..q - 1 {
        let e = g.gauss_sum(Character { t }).embed();
        worst = worst.max((e.norm() - root_q).abs());
    }
    let mut out = vec![VerificationReport::new(
        "numeric.modulus",
        format!("|G| = sqrt({q}) +/- 1e-9, {} characters", q.saturating_sub(2)),
        format!("max deviation {worst:.3e}"),
        worst < 1e-9,
    )
    .at(g)];

    if q % 2 == 1 {
        let p = g.fq.p;
        let n = g.fq.n;
        let e = g.gauss_sum(Character { t: (q - 1) / 2 }).embed();
        let s = if n % 2 == 1 { 1.0 } else { -1.0 };
        let expect = if p % 4 == 1 {
            num_complex::Complex64::new(s * root_q, 0.0)
        } else {
            let i_n = match n % 4 {
                0 => num_complex::Complex64::new(1.0, 0.0),
                1 => num_complex::Complex64::new(0.0, 1.0),
                2 => num_complex::Complex64::new(-1.0, 0.0),
                _ => num_complex::Complex64::new(0.0, -1.0),
            };
            i_n * s * root_q
        };
        out.push(
            VerificationReport::new(
                "numeric.sign",
                format!("{:.9}{:+.9}i", expect.re, expect.im),
                format!("{:.9}{:+.9}i", e.re, e.im),
                (e - expect).norm() < 1e-9,
            )
            .at(g),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gctx(p: u64, n: u32) -> GaussCtx {
        GaussCtx::new(p, n).unwrap()
    }

    fn all_pass(reports: &[VerificationReport]) {
        for r in reports {
            assert!(
                r.passed(),
                "{} q={:?} k={:?} extra={:?}: expected {}, computed {}",
                r.claim,
                r.q,
                r.k,
                r.extra,
                r.expected,
                r.computed
            );
        }
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(det_a1_closed(3), Int::from(4));
        assert_eq!(det_a1_closed(5), Int::from(-256));
        assert_eq!(det_a2_closed(5, 1), Int::from(-4));
        assert_eq!(det_a2_closed(3, 2), Int::from(512));
        // q=25: (-1)^4 * 12^12 * 2^2
        assert_eq!(
            det_a2_closed(5, 2),
            Pow::pow(&Int::from(12), 12u32) * Int::from(4)
        );
        assert_eq!(det_b1_closed(3), Rat::new(4.into(), 3.into()));
        assert_eq!(det_b2_closed(5), Rat::new(4.into(), 5.into()));
        assert_eq!(det_b2_closed(3), Rat::from_integer((-1).into()));
        // sign differs from the naive (p+3)(p-1)/4 exponent at p = 7, 23, ...
        assert_eq!(det_b2_closed(7), Rat::new(27.into(), 49.into()));
        assert_eq!(det_b2_closed(11), Rat::new((-3125).into(), 14641.into()));
        assert_eq!(det_b2_closed(13), Rat::new(46656.into(), 371293.into()));
        assert_eq!(congruence_sign(4), -1);
        assert_eq!(congruence_sign(1), -1);
        assert_eq!(congruence_sign(2), 1);
    }

    #[test]
    fn gamma_closed_form_values() {
        assert_eq!(gamma_det_closed(1), Int::one());
        assert_eq!(gamma_det_closed(2), Int::from(2));
        assert_eq!(gamma_recip_det_closed(2), Rat::new((-1).into(), 12.into()));
    }

    #[test]
    fn thm11_small_sweep() {
        for (p, n) in [(3u64, 1u32), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let g = gctx(p, n);
            for k in crate::poly::divisors(g.q() - 1) {
                all_pass(&verify_thm11(&g, k, 13).unwrap());
            }
        }
    }

    #[test]
    fn thm12_examples() {
        all_pass(&[verify_thm12_a1(&gctx(3, 1)).unwrap()]);
        all_pass(&[verify_thm12_a1(&gctx(2, 2)).unwrap()]);
        all_pass(&[verify_thm12_a2(&gctx(5, 1)).unwrap().unwrap()]);
        all_pass(&[verify_thm12_a2(&gctx(3, 2)).unwrap().unwrap()]);
        assert!(verify_thm12_a2(&gctx(2, 2)).unwrap().is_none());
        let info = verify_thm12_a1(&gctx(2, 1)).unwrap();
        assert_eq!(info.status, Status::Info);
        assert_eq!(info.computed, "-1");
    }

    #[test]
    fn thm13_examples() {
        let g9 = gctx(3, 2);
        // o_8(3) = 2 = n: nonsingular; o_2(3) = 1: singular
        all_pass(&verify_thm13(&g9, 8).unwrap());
        all_pass(&verify_thm13(&g9, 2).unwrap());
        let g3 = gctx(3, 1);
        let reports = verify_thm13(&g3, 2).unwrap();
        all_pass(&reports);
        assert!(reports.iter().any(|r| r.claim == "thm13.b2"));
        all_pass(&verify_thm13(&gctx(5, 1), 1).unwrap());
    }

    #[test]
    fn carlitz_p5() {
        let reports = verify_carlitz(&gctx(5, 1)).unwrap();
        assert_eq!(reports.len(), 3);
        all_pass(&reports);
    }

    #[test]
    fn stickelberger_q5() {
        all_pass(&verify_stickelberger(&gctx(5, 1)).unwrap());
    }

    #[test]
    fn lerch_small() {
        for m in 1..=16 {
            all_pass(&[verify_lerch(m).unwrap()]);
        }
    }

    #[test]
    fn hd_small() {
        all_pass(&verify_hd_lifting(3, 2).unwrap());
        all_pass(&verify_hd_product(&gctx(5, 1)).unwrap());
    }

    #[test]
    fn chapman_and_sun_small() {
        for p in [5u64, 7, 11, 13] {
            all_pass(&verify_chapman(p));
            all_pass(&verify_sun(p));
        }
        assert_eq!(sun_decomposition_a(5), Some(1));
        assert_eq!(sun_decomposition_a(13), Some(-3));
        assert_eq!(sun_decomposition_a(17), Some(1));
    }

    #[test]
    fn gamma_small() {
        for n in 1..=5 {
            all_pass(&verify_gamma(n));
        }
    }

    #[test]
    fn numeric_small() {
        for (p, n) in [(5u64, 1u32), (7, 1), (3, 2), (11, 1)] {
            all_pass(&verify_numeric(&gctx(p, n)));
        }
    }

    #[test]
    fn serialization_shapes() {
        let mut reports = verify_gamma(2);
        reports.extend(verify_chapman(7));
        sort_reports(&mut reports);
        let csv = reports_to_csv(&reports, true);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "claim,q,p,n,k,status,expected,computed"
        );
        assert_eq!(csv.lines().count(), reports.len() + 1);
        assert!(csv.lines().nth(1).unwrap().starts_with("chapman."));
        let json = reports_to_json(&reports);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.as_array().unwrap().len(), reports.len());
        assert!(parsed[0].get("elapsed_ms").is_none());
    }
}
