//! Shared oracle machinery for the integration suites: a dense bitset model
//! of integer sets on a bounded window, a deterministic generator of random
//! canonical sets, and brute-force point counting over small finite fields.

#![allow(dead_code)]

use degsets::EventuallyPeriodicSet;

const WORD: usize = 64;

/// Membership bitmap over [1, bound].
#[derive(Clone, PartialEq, Eq)]
pub struct Bitset {
    bound: u64,
    words: Vec<u64>,
}

impl Bitset {
    pub fn empty(bound: u64) -> Self {
        Bitset {
            bound,
            words: vec![0; (bound as usize + 1) / WORD + 1],
        }
    }

    pub fn from_eps(set: &EventuallyPeriodicSet, bound: u64) -> Self {
        let mut b = Self::empty(bound);
        for n in 1..=bound {
            if set.contains(n).unwrap() {
                b.set(n);
            }
        }
        b
    }

    pub fn set(&mut self, n: u64) {
        if n >= 1 && n <= self.bound {
            self.words[n as usize / WORD] |= 1 << (n as usize % WORD);
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= 1
            && n <= self.bound
            && self.words[n as usize / WORD] >> (n as usize % WORD) & 1 == 1
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.bound, other.bound);
        Bitset {
            bound: self.bound,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.bound, other.bound);
        Bitset {
            bound: self.bound,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn scale(&self, d: u64) -> Self {
        let mut out = Self::empty(self.bound);
        let mut n = 1;
        while n * d <= self.bound {
            if self.contains(n) {
                out.set(n * d);
            }
            n += 1;
        }
        out
    }

    /// Exact sums s + t with both addends drawn from the window.
    pub fn sumset(&self, other: &Self) -> Self {
        let mut out = Self::empty(self.bound);
        for s in 1..=self.bound {
            if !self.contains(s) {
                continue;
            }
            // out |= other << s
            let shift_words = s as usize / WORD;
            let shift_bits = s as usize % WORD;
            for i in 0..other.words.len() {
                let w = other.words[i];
                if w == 0 {
                    continue;
                }
                if i + shift_words < out.words.len() {
                    out.words[i + shift_words] |= w << shift_bits;
                }
                if shift_bits > 0 && i + shift_words + 1 < out.words.len() {
                    out.words[i + shift_words + 1] |= w >> (WORD - shift_bits);
                }
            }
        }
        // clear anything past the bound
        for n in self.bound + 1..(out.words.len() * WORD) as u64 {
            let idx = n as usize;
            out.words[idx / WORD] &= !(1 << (idx % WORD));
        }
        out
    }

    pub fn gcd(&self) -> Option<u64> {
        let mut g = 0u64;
        for n in 1..=self.bound {
            if self.contains(n) {
                g = num_integer::gcd(g, n);
            }
        }
        (g > 0).then_some(g)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn agrees_with(&self, set: &EventuallyPeriodicSet) -> bool {
        (1..=self.bound).all(|n| self.contains(n) == set.contains(n).unwrap())
    }

    pub fn first_disagreement(&self, set: &EventuallyPeriodicSet) -> Option<u64> {
        (1..=self.bound).find(|&n| self.contains(n) != set.contains(n).unwrap())
    }
}

/// xorshift64*, deterministic across runs.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.max(1))
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    pub fn chance(&mut self, percent: u64) -> bool {
        self.below(100) < percent
    }
}

/// A random canonical set with small threshold and period.
pub fn random_eps(rng: &mut Rng) -> EventuallyPeriodicSet {
    let threshold = rng.range(1, 40);
    let period = rng.range(1, 12);
    let explicit: Vec<u64> = (1..threshold).filter(|_| rng.chance(35)).collect();
    let residues: Vec<u64> = (0..period).filter(|_| rng.chance(40)).collect();
    EventuallyPeriodicSet::from_raw(threshold, explicit, period, residues).unwrap()
}

pub fn random_nonempty_eps(rng: &mut Rng) -> EventuallyPeriodicSet {
    loop {
        let s = random_eps(rng);
        if !s.is_empty() {
            return s;
        }
    }
}

// ---- brute-force curve point counts over small finite fields ----

/// F_{p^k} as polynomials over F_p modulo a found irreducible; elements are
/// indices into a multiplication-friendly dense table.
pub struct SmallField {
    pub p: u64,
    pub k: u32,
    irred: Vec<u64>, // monic, degree k, lowest coefficient first
}

impl SmallField {
    pub fn new(p: u64, k: u32) -> Self {
        let irred = find_irreducible(p, k);
        SmallField { p, k, irred }
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.k)
    }

    /// Element encodings are base-p digit strings of length k.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::with_capacity(self.size() as usize);
        for code in 0..self.size() {
            let mut digits = Vec::with_capacity(self.k as usize);
            let mut c = code;
            for _ in 0..self.k {
                digits.push(c % self.p);
                c /= self.p;
            }
            out.push(digits);
        }
        out
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.k as usize]
    }

    pub fn scalar(&self, c: u64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = c % self.p;
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce modulo the irreducible
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c != 0 {
                prod[d] = 0;
                for i in 0..k {
                    prod[d - k + i] = (prod[d - k + i] + (self.p - 1) * c % self.p * self.irred[i]) % self.p;
                }
            }
        }
        prod.truncate(k);
        prod
    }

    pub fn pow(&self, a: &[u64], e: u64) -> Vec<u64> {
        let mut result = self.scalar(1);
        for _ in 0..e {
            result = self.mul(&result, a);
        }
        result
    }

    /// Evaluate a polynomial with F_p coefficients (lowest first).
    pub fn eval(&self, coeffs: &[u64], x: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &self.scalar(c));
        }
        acc
    }

    pub fn is_square(&self, v: &[u64]) -> bool {
        if v.iter().all(|&c| c == 0) {
            return true;
        }
        // v^((q-1)/2) == 1 for odd q; every element is a square in char 2
        if self.p == 2 {
            return true;
        }
        let e = (self.size() - 1) / 2;
        self.pow(v, e) == self.scalar(1)
    }
}

fn find_irreducible(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    // brute force: monic degree-k with no roots and no low-degree factors,
    // tested by gcd-free trial division against smaller monics
    let total = p.pow(k);
    'candidate: for code in 0..total {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            coeffs.push(c % p);
            c /= p;
        }
        coeffs.push(1);
        for d in 1..=(k / 2).max(1) {
            let lower = p.pow(d);
            for lower_code in 0..lower {
                let mut g = Vec::with_capacity(d as usize + 1);
                let mut lc = lower_code;
                for _ in 0..d {
                    g.push(lc % p);
                    lc /= p;
                }
                g.push(1);
                if poly_divides(&g, &coeffs, p) {
                    continue 'candidate;
                }
            }
        }
        return coeffs;
    }
    unreachable!("irreducible polynomials exist in every degree");
}

fn poly_divides(g: &[u64], f: &[u64], p: u64) -> bool {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg && r.len() > 1 {
        let dr = r.len() - 1;
        let c = r[dr];
        if c != 0 {
            for i in 0..=dg {
                let idx = dr - dg + i;
                r[idx] = (r[idx] + (p - 1) * c % p * g[i]) % p;
            }
        }
        r.pop();
        while r.len() > 1 && *r.last().unwrap() == 0 {
            r.pop();
        }
    }
    r.iter().all(|&c| c == 0)
}

/// Number of points over F_{p^k} of the smooth projective hyperelliptic
/// curve y² = f(x), for odd p and squarefree f.
pub fn count_hyperelliptic(field: &SmallField, f: &[u64]) -> u64 {
    assert!(field.p % 2 == 1);
    let mut count = 0u64;
    for x in field.elements() {
        let v = field.eval(f, &x);
        if v.iter().all(|&c| c == 0) {
            count += 1;
        } else if field.is_square(&v) {
            count += 2;
        }
    }
    let degree = f.len() - 1;
    if degree % 2 == 1 {
        count += 1;
    } else {
        let lc = field.scalar(f[degree]);
        if field.is_square(&lc) {
            count += 2;
        }
    }
    count
}

/// Points over F_{2^k} of y² + y = f(x) plus one point at infinity (f of
/// odd degree at most 3 keeps the projective model smooth enough here).
pub fn count_artin_schreier(field: &SmallField, f: &[u64]) -> u64 {
    assert_eq!(field.p, 2);
    let mut count = 0u64;
    for x in field.elements() {
        let v = field.eval(f, &x);
        // y² + y = v has 2 solutions iff the absolute trace of v vanishes
        let mut trace = field.zero();
        let mut w = v.clone();
        for _ in 0..field.k {
            trace = field.add(&trace, &w);
            w = field.mul(&w, &w);
        }
        if trace == field.zero() {
            count += 2;
        }
    }
    count + 1
}
