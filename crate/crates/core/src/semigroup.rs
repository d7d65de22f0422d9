//! Numerical semigroup computations on multisets of positive generators.
//!
//! Two closures of a generator multiset {g₁, …, g_d} are needed:
//!
//! * [`monoid_closure`]: all nonzero sums Σ aᵢgᵢ with aᵢ ≥ 0 — the positive
//!   part of the usual numerical monoid ⟨g₁, …, g_d⟩;
//! * [`positive_combinations`]: sums where every coefficient is strictly
//!   positive, i.e. the translate of the monoid (with zero) by Σ gᵢ. This is
//!   the local degree semigroup of a point lying on components with
//!   multiplicities gᵢ: each branch must appear with positive weight.
//!
//! Note that strictly positive coefficients matter: {2a+3b : a,b ≥ 1} is
//! {5, 7} ∪ {8, 9, 10, …} and does not contain 6, even though the monoid
//! ⟨2,3⟩ contains every integer above 1.
//!
//! Membership is decided exactly through the Apéry set with respect to the
//! smallest generator: the least monoid element in each residue class is a
//! shortest path in a graph with one node per class, and everything at or
//! above the class minimum is in the monoid.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_integer::Integer;
use thiserror::Error;

use crate::eps::{EpsError, EventuallyPeriodicSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("generator multiset must be nonempty")]
    Empty,
    #[error("generators must be positive")]
    ZeroGenerator,
    #[error("Frobenius number requires gcd 1, got gcd {0}")]
    NontrivialGcd(u64),
    #[error(transparent)]
    Set(#[from] EpsError),
}

/// A nonempty multiset of positive integer generators. Duplicates are kept:
/// two branches of the same multiplicity both demand a positive coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorMultiset {
    generators: Vec<u64>,
}

impl GeneratorMultiset {
    pub fn new(generators: impl IntoIterator<Item = u64>) -> Result<Self, SemigroupError> {
        let mut generators: Vec<u64> = generators.into_iter().collect();
        if generators.is_empty() {
            return Err(SemigroupError::Empty);
        }
        if generators.contains(&0) {
            return Err(SemigroupError::ZeroGenerator);
        }
        generators.sort_unstable();
        Ok(GeneratorMultiset { generators })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn gcd(&self) -> u64 {
        self.generators.iter().fold(0u64, |g, &x| g.gcd(&x))
    }

    pub fn sum(&self) -> u64 {
        self.generators.iter().sum()
    }
}

/// Least monoid element in each residue class modulo the smallest generator
/// (gcd of the generators must be 1 for all classes to be reachable in
/// general; with a nontrivial gcd unreachable classes stay at `u64::MAX`).
fn apery_distances(generators: &[u64]) -> Vec<u64> {
    let m = generators[0] as usize;
    let mut dist = vec![u64::MAX; m];
    dist[0] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, 0usize)));
    while let Some(Reverse((d, r))) = heap.pop() {
        if d > dist[r] {
            continue;
        }
        for &g in generators {
            let nd = d.saturating_add(g);
            let nr = ((r as u64 + g) % m as u64) as usize;
            if nd < dist[nr] {
                dist[nr] = nd;
                heap.push(Reverse((nd, nr)));
            }
        }
    }
    dist
}

/// All nonzero sums Σ aᵢgᵢ with aᵢ ≥ 0, as an exact set.
pub fn monoid_closure(g: &GeneratorMultiset) -> Result<EventuallyPeriodicSet, SemigroupError> {
    let d = g.gcd();
    let reduced: Vec<u64> = g.generators.iter().map(|&x| x / d).collect();
    if reduced[0] == 1 {
        return Ok(EventuallyPeriodicSet::naturals().scale(d)?);
    }
    let dist = apery_distances(&reduced);
    let max = *dist.iter().max().expect("nonempty");
    debug_assert!(max < u64::MAX, "gcd-reduced generators reach every class");
    // n is a member iff n >= dist[n mod m]; from max(dist) on, everything is in
    let threshold = max.max(1);
    let m = reduced[0];
    let explicit: Vec<u64> = (1..threshold)
        .filter(|&n| n >= dist[(n % m) as usize])
        .collect();
    let base = EventuallyPeriodicSet::from_raw(threshold, explicit, 1, [0])?;
    Ok(base.scale(d)?)
}

/// Sums Σ aᵢgᵢ with every aᵢ ≥ 1: the translate of the monoid (including
/// zero) by the sum of the generators.
pub fn positive_combinations(
    g: &GeneratorMultiset,
) -> Result<EventuallyPeriodicSet, SemigroupError> {
    let total = g.sum();
    let monoid = monoid_closure(g)?;
    Ok(EventuallyPeriodicSet::finite([total])?.union(&monoid.shifted(total)?)?)
}

/// Largest positive integer outside the monoid closure, for coprime
/// generators. Returns 0 when there is no gap (i.e. 1 is a generator).
pub fn frobenius(g: &GeneratorMultiset) -> Result<u64, SemigroupError> {
    let d = g.gcd();
    if d != 1 {
        return Err(SemigroupError::NontrivialGcd(d));
    }
    if g.generators[0] == 1 {
        return Ok(0);
    }
    let dist = apery_distances(&g.generators);
    let max = *dist.iter().max().expect("nonempty");
    Ok(max - g.generators[0])
}
