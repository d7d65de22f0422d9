//! Degree sets of curves over finite fields, through exact point counts.
//!
//! A smooth projective curve of genus g over F_q has a degree-d closed point
//! whenever #C(F_{q^d}) > Σ_{p|d} #C(F_{q^{d/p}}), and the Weil bounds
//! |N_r − (q^r + 1)| ≤ 2g·q^{r/2} turn that into the purely numeric test
//!
//!   q^d − Σ_{p|d} q^{d/p} − 2g(q^{d/2} + Σ_{p|d} q^{d/2p}) + 1 − ω(d) > 0.
//!
//! [`weil_min_degree`] finds the least r from which the test holds for every
//! d ≥ r (it always holds from 2g+9 on). All arithmetic is exact: the
//! half-integer powers q^{e/2} are carried as a + b√q with integer a, b and
//! inequalities are decided by comparing squares, never floats.
//!
//! Point counts extend from the first g values through the zeta function:
//! Newton's identities recover the L-polynomial, the functional equation
//! supplies the upper coefficients, and the induced integer recurrence on
//! power sums produces every further count. Counts convert to closed-point
//! counts by Möbius inversion.
//!
//! [`factor_degrees`] extracts the degrees of the irreducible factors of a
//! squarefree monic polynomial over F_p by distinct-degree splitting
//! (gcds against x^{p^i} − x); no full factorization is performed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::eps::{EpsError, EventuallyPeriodicSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiniteFieldError {
    #[error("q must be a prime power at least 2, got {0}")]
    NotPrimePower(u64),
    #[error("counts violate the Weil bound at degree {degree}: N = {count}")]
    WeilViolation { degree: u64, count: u64 },
    #[error("need counts N_1..N_{needed} to extend, got {got}")]
    NotEnoughCounts { needed: u64, got: usize },
    #[error("counts are inconsistent: {0}")]
    InconsistentCounts(String),
    #[error("removing {removed} points of degree {degree} but the curve only has {available}")]
    RemovalExceedsCount {
        degree: u64,
        removed: u64,
        available: u64,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial must be monic of degree at least 1")]
    BadPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error(transparent)]
    Set(#[from] EpsError),
}

/// Rational-point counts of a curve over F_q and its extensions.
///
/// `counts[i]` is N_{i+1} = #C(F_{q^{i+1}}). At least `genus` counts are
/// required before the zeta machinery can extend them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveCountData {
    q: u64,
    genus: u64,
    counts: Vec<u64>,
}

impl CurveCountData {
    pub fn new(q: u64, genus: u64, counts: Vec<u64>) -> Result<Self, FiniteFieldError> {
        if !is_prime_power(q) {
            return Err(FiniteFieldError::NotPrimePower(q));
        }
        for (i, &n) in counts.iter().enumerate() {
            check_weil_bound(q, genus, i as u64 + 1, n)?;
        }
        Ok(CurveCountData { q, genus, counts })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Counts N_1..N_B, extending through the zeta function when B exceeds
    /// the provided data. Genus 0 needs no data at all.
    pub fn extend_counts(&self, bound: u64) -> Result<Vec<u64>, FiniteFieldError> {
        extend_counts(self, bound)
    }
}

/// |N − (q^d + 1)| ≤ 2g·q^{d/2}, compared through squares.
fn check_weil_bound(q: u64, genus: u64, degree: u64, count: u64) -> Result<(), FiniteFieldError> {
    let qd = BigInt::from(q).pow(degree as u32);
    let dev = BigInt::from(count) - (&qd + 1);
    // dev^2 <= 4 g^2 q^d
    let lhs = &dev * &dev;
    let rhs = BigInt::from(4u64) * BigInt::from(genus) * BigInt::from(genus) * &qd;
    if lhs > rhs {
        return Err(FiniteFieldError::WeilViolation {
            degree,
            count,
        });
    }
    Ok(())
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if is_prime_u64(q) {
        return true;
    }
    // find the smallest prime factor by trial division and check q = p^k
    let mut p = 2u64;
    while p.saturating_mul(p) <= q {
        if q % p == 0 {
            let mut m = q;
            while m % p == 0 {
                m /= p;
            }
            return m == 1;
        }
        p += 1;
        if p > 1_000_000 {
            return false;
        }
    }
    true
}

/// Deterministic Miller-Rabin for u64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

fn prime_divisors(d: u64) -> Vec<u64> {
    let mut d = d;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= d {
        if d % p == 0 {
            out.push(p);
            while d % p == 0 {
                d /= p;
            }
        }
        p += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

/// Half-integer power q^{e/2} as a + b√q with integer a, b.
fn half_power(q: &BigInt, e: u64) -> (BigInt, BigInt) {
    let whole = q.pow((e / 2) as u32);
    if e % 2 == 0 {
        (whole, BigInt::zero())
    } else {
        (BigInt::zero(), whole)
    }
}

/// Does q^d − Σ q^{d/p} − 2g(q^{d/2} + Σ q^{d/2p}) + 1 − ω(d) > 0 hold?
fn weil_gap_positive(q: u64, genus: u64, d: u64) -> bool {
    let qb = BigInt::from(q);
    let primes = prime_divisors(d);
    let omega = primes.len() as u64;
    let mut plain = qb.pow(d as u32) + 1 - BigInt::from(omega);
    for &p in &primes {
        plain -= qb.pow((d / p) as u32);
    }
    // radical side: 2g (q^{d/2} + Σ_p q^{d/2p}) = a + b√q
    let (mut a, mut b) = half_power(&qb, d);
    for &p in &primes {
        let (pa, pb) = half_power(&qb, d / p);
        a += pa;
        b += pb;
    }
    let two_g = BigInt::from(2 * genus);
    a *= &two_g;
    b *= &two_g;
    // plain > a + b√q  ⇔  plain − a > b√q with both sides nonnegative care
    let lhs: BigInt = plain - a;
    if b.is_zero() {
        return lhs.is_positive();
    }
    if !lhs.is_positive() {
        return false;
    }
    &lhs * &lhs > &b * &b * qb
}

/// Least r such that the Weil existence test holds for every d ≥ r.
/// Always at most 2g + 9.
pub fn weil_min_degree(q: u64, genus: u64) -> u64 {
    let upper = 2 * genus + 9;
    let mut last_failure = 0u64;
    for d in 1..=upper {
        if !weil_gap_positive(q, genus, d) {
            last_failure = d;
        }
    }
    // from 2g+9 on the inequality holds for every q >= 2
    debug_assert!(weil_gap_positive(q, genus, upper));
    last_failure + 1
}

/// Number of degree-d closed points: (1/d) Σ_{r|d} μ(d/r) N_r.
pub fn degree_point_count(counts: &[u64], d: u64) -> Result<u64, FiniteFieldError> {
    if d == 0 || counts.len() < d as usize {
        return Err(FiniteFieldError::InconsistentCounts(format!(
            "need counts up to degree {d}"
        )));
    }
    let mut total = BigInt::zero();
    for r in 1..=d {
        if d % r == 0 {
            let mu = moebius(d / r);
            if mu != 0 {
                total += BigInt::from(mu) * BigInt::from(counts[r as usize - 1]);
            }
        }
    }
    let (quot, rem) = total.div_rem(&BigInt::from(d));
    if !rem.is_zero() || quot.is_negative() {
        return Err(FiniteFieldError::InconsistentCounts(format!(
            "Moebius sum at degree {d} is not a nonnegative multiple of {d}"
        )));
    }
    u64::try_from(quot).map_err(|_| {
        FiniteFieldError::InconsistentCounts(format!("count at degree {d} overflows"))
    })
}

fn moebius(n: u64) -> i64 {
    let mut n = n;
    let mut mu = 1i64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Counts N_1..N_bound via the L-polynomial recurrence. The provided data
/// must include at least `genus` counts; all intermediate quantities are
/// checked for integrality and the Weil bounds.
pub fn extend_counts(data: &CurveCountData, bound: u64) -> Result<Vec<u64>, FiniteFieldError> {
    let q = BigInt::from(data.q);
    let g = data.genus as usize;
    if (data.counts.len() as u64) < data.genus && (bound as usize) > data.counts.len() {
        return Err(FiniteFieldError::NotEnoughCounts {
            needed: data.genus,
            got: data.counts.len(),
        });
    }
    if bound as usize <= data.counts.len() {
        return Ok(data.counts[..bound as usize].to_vec());
    }
    // power sums of the Frobenius eigenvalues from the given counts
    let mut s: Vec<BigInt> = Vec::with_capacity(bound as usize + 1);
    s.push(BigInt::zero()); // unused index 0
    for r in 1..=g {
        let nr = BigInt::from(data.counts[r - 1]);
        s.push(q.pow(r as u32) + 1 - nr);
    }
    // Newton's identities: S_k + a_1 S_{k-1} + … + a_{k-1} S_1 + k a_k = 0
    let mut a: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=g {
        let mut acc = s[k].clone();
        for j in 1..k {
            acc += &a[j] * &s[k - j];
        }
        let (coeff, rem) = (-acc).div_rem(&BigInt::from(k as u64));
        if !rem.is_zero() {
            return Err(FiniteFieldError::InconsistentCounts(format!(
                "L-polynomial coefficient a_{k} is not an integer"
            )));
        }
        a.push(coeff);
    }
    // functional equation: a_{g+j} = q^j a_{g-j}
    for j in 1..=g {
        let coeff = q.pow(j as u32) * &a[g - j];
        a.push(coeff);
    }
    let deg = 2 * g;
    // extend power sums: for k <= deg use Newton, beyond use the recurrence
    for k in (g + 1)..=(bound as usize) {
        let mut acc = BigInt::zero();
        if k <= deg {
            for j in 1..k {
                acc += &a[j] * &s[k - j];
            }
            acc += BigInt::from(k as u64) * &a[k];
            s.push(-acc);
        } else {
            for j in 1..=deg {
                acc += &a[j] * &s[k - j];
            }
            s.push(-acc);
        }
    }
    let mut out = Vec::with_capacity(bound as usize);
    for r in 1..=bound as usize {
        let nr: BigInt = q.pow(r as u32) + 1 - &s[r];
        if nr.is_negative() {
            return Err(FiniteFieldError::InconsistentCounts(format!(
                "extended count N_{r} is negative"
            )));
        }
        let nr = u64::try_from(nr).map_err(|_| {
            FiniteFieldError::InconsistentCounts(format!("extended count N_{r} overflows"))
        })?;
        check_weil_bound(data.q, data.genus, r as u64, nr)?;
        out.push(nr);
    }
    Ok(out)
}

/// Exact degree set of the curve minus a multiset of marked closed points
/// (`removed` lists the degree of each removed point, with repetition).
///
/// Below the Weil threshold membership is decided by the exact counts; from
/// the threshold on, every degree has points and only finitely many removals
/// can interfere, so the tail is certified.
pub fn curve_degree_set(
    data: &CurveCountData,
    removed: &[u64],
) -> Result<EventuallyPeriodicSet, FiniteFieldError> {
    let min_deg = weil_min_degree(data.q, data.genus);
    let max_removed = removed.iter().copied().max().unwrap_or(0);
    let horizon = min_deg.max(max_removed + 1);
    let counts = extend_counts(data, horizon)?;
    let removed_at = |d: u64| removed.iter().filter(|&&r| r == d).count() as u64;
    let mut explicit = Vec::new();
    for d in 1..horizon {
        let available = degree_point_count(&counts, d)?;
        let gone = removed_at(d);
        if gone > available {
            return Err(FiniteFieldError::RemovalExceedsCount {
                degree: d,
                removed: gone,
                available,
            });
        }
        if available > gone {
            explicit.push(d);
        }
    }
    // sanity at the boundary: the tail starts where removals have run out
    let available = degree_point_count(&counts, horizon)?;
    let gone = removed_at(horizon);
    if gone > 0 {
        return Err(FiniteFieldError::InconsistentCounts(
            "internal horizon error".into(),
        ));
    }
    debug_assert!(available > 0);
    Ok(EventuallyPeriodicSet::from_raw(horizon, explicit, 1, [0])?)
}

/// A monic polynomial over a prime field, coefficients from the constant
/// term upward.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePolynomial {
    p: u64,
    coeffs: Vec<u64>,
}

impl PrimePolynomial {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self, FiniteFieldError> {
        if !is_prime_u64(p) {
            return Err(FiniteFieldError::NotPrime(p));
        }
        let coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        let degree = coeffs.iter().rposition(|&c| c != 0);
        match degree {
            Some(d) if d >= 1 && coeffs[d] == 1 => Ok(PrimePolynomial {
                p,
                coeffs: coeffs[..=d].to_vec(),
            }),
            _ => Err(FiniteFieldError::BadPolynomial),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u64 {
        (self.coeffs.len() - 1) as u64
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }
}

/// Degrees of the irreducible factors, with multiplicity one each since the
/// input must be squarefree. Sorted ascending; the multiset sums to deg f.
pub fn factor_degrees(f: &PrimePolynomial) -> Result<Vec<u64>, FiniteFieldError> {
    let p = f.p;
    let fv = f.coeffs.clone();
    let deriv = poly_derivative(&fv, p);
    if poly_gcd(&fv, &deriv, p).len() != 1 {
        return Err(FiniteFieldError::NotSquarefree);
    }
    let mut degrees = Vec::new();
    let mut g = fv;
    // running power x^{p^i} mod g, re-reduced as g shrinks
    let x = vec![0, 1];
    let mut power = poly_mod(&x, &g, p);
    let mut i = 0u64;
    while poly_deg(&g) > 0 {
        i += 1;
        power = poly_pow_mod(&power, p, &g, p);
        if 2 * i > poly_deg(&g) as u64 {
            // remainder is irreducible
            degrees.push(poly_deg(&g) as u64);
            break;
        }
        let mut diff = power.clone();
        poly_sub_assign(&mut diff, &x, p);
        let factor = poly_gcd(&g, &diff, p);
        let fd = poly_deg(&factor);
        if fd > 0 {
            for _ in 0..(fd as u64 / i) {
                degrees.push(i);
            }
            g = poly_div_exact(&g, &factor, p);
            power = poly_mod(&power, &g, p);
        }
    }
    degrees.sort_unstable();
    Ok(degrees)
}

// -- dense polynomial arithmetic over F_p, lowest coefficient first --

fn poly_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn poly_deg(v: &[u64]) -> usize {
    v.len() - 1
}

fn poly_derivative(v: &[u64], p: u64) -> Vec<u64> {
    if v.len() <= 1 {
        return vec![0];
    }
    let mut out: Vec<u64> = v
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
        .collect();
    poly_trim(&mut out);
    out
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_sub_assign(a: &mut Vec<u64>, b: &[u64], p: u64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (i, &c) in b.iter().enumerate() {
        a[i] = (a[i] + p - c) % p;
    }
    poly_trim(a);
}

fn poly_is_zero(v: &[u64]) -> bool {
    v.iter().all(|&c| c == 0)
}

/// Quotient and remainder of a by b (b nonzero).
fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = poly_deg(b);
    let inv = inv_mod(b[db], p);
    if poly_is_zero(&r) || poly_deg(&r) < db {
        return (vec![0], r);
    }
    let mut q = vec![0u64; poly_deg(&r) - db + 1];
    while !poly_is_zero(&r) && poly_deg(&r) >= db {
        let dr = poly_deg(&r);
        let c = mul_mod(r[dr], inv, p);
        q[dr - db] = c;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - mul_mod(c, b[i], p)) % p;
        }
        poly_trim(&mut r);
        if dr == 0 {
            break;
        }
    }
    poly_trim(&mut q);
    poly_trim(&mut r);
    (q, r)
}

fn poly_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    poly_divmod(a, b, p).1
}

fn poly_div_exact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    poly_divmod(a, b, p).0
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_mod(&a, &b, p);
        a = b;
        b = r;
    }
    // normalize monic
    let da = poly_deg(&a);
    if a[da] != 0 && a[da] != 1 {
        let inv = inv_mod(a[da], p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

fn poly_pow_mod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut base = poly_mod(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mod(&poly_mul(&result, &base, p), modulus, p);
        }
        base = poly_mod(&poly_mul(&base, &base, p), modulus, p);
        e >>= 1;
    }
    result
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}
