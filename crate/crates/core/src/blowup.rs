//! Local blow-up calculus at a closed point of the special fiber.
//!
//! Blowing up a closed point x inserts an exceptional line of multiplicity
//! e = Σ mᵢ·e(Eᵢ, x), the sum over branches of component multiplicity times
//! Hilbert–Samuel multiplicity. The supported local shapes and their rewrite
//! rules are:
//!
//! * `Interior(m)` — smooth point on one component: e = m, one new crossing
//!   Transverse(m, m);
//! * `Transverse(m₁,…,m_r)` — r pairwise-transversal smooth branches:
//!   e = Σ mᵢ, new crossings Transverse(mᵢ, e) at r distinct points;
//! * `Tangential2(m₁, m₂)` — two smooth branches with contact of order two:
//!   e = m₁ + m₂, and both strict transforms pass through a single point of
//!   the exceptional line, giving one Transverse(m₁, m₂, e);
//! * `Node(m)` — a simple node on one component: the branch has multiplicity
//!   two, so e = 2m; the two tangent directions either are rational (`Split`,
//!   two crossings Transverse(m, 2m)) or conjugate (`Inert`, one crossing of
//!   residue degree two).
//!
//! From a shape, [`enumerate_m`] collects over all finite blow-up sequences
//! the value d(B) = (degree of the final center) × (final exceptional
//! multiplicity) and returns ⋃ d(B)·N; [`enumerate_m_prime`] drops the degree
//! factor. These sit between each other and the positive-combination
//! semigroup of the branch multiplicities: M ⊆ M′ ⊆ N.
//!
//! Enumerations are exact but, except where a closed form is proved
//! (`Interior`, two-branch `Transverse`, `Node` at depth three or more),
//! they are lower bounds for the full union over unbounded sequences and are
//! flagged uncertified.

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use thiserror::Error;

use crate::eps::{EpsError, EventuallyPeriodicSet};
use crate::fiber::ResidueFieldClass;
use crate::semigroup::{self, GeneratorMultiset, SemigroupError};

/// Enumeration depths beyond this are rejected; the frontier grows
/// exponentially in the worst case.
pub const MAX_SUPPORTED_DEPTH: u64 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlowupError {
    #[error("multiplicities must be positive")]
    ZeroMultiplicity,
    #[error("transverse shapes support 2 or 3 branches, got {0}")]
    UnsupportedBranchCount(usize),
    #[error("enumeration depth must be at least 1")]
    ZeroDepth,
    #[error("enumeration depth {0} exceeds the supported maximum {MAX_SUPPORTED_DEPTH}")]
    DepthTooLarge(u64),
    #[error("a node with conjugate tangent directions cannot exist over an algebraically closed residue field")]
    InertOverClosedField,
    #[error(transparent)]
    Set(#[from] EpsError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

/// Whether the two tangent directions at a node are rational or conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeTangents {
    Split,
    Inert,
}

/// The local shape of the special fiber at a closed point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LocalShape {
    Interior { multiplicity: u64 },
    Transverse { multiplicities: Vec<u64> },
    Tangential2 { first: u64, second: u64 },
    Node { multiplicity: u64, tangents: NodeTangents },
}

impl LocalShape {
    fn validate(&self) -> Result<(), BlowupError> {
        match self {
            LocalShape::Interior { multiplicity } | LocalShape::Node { multiplicity, .. } => {
                if *multiplicity == 0 {
                    return Err(BlowupError::ZeroMultiplicity);
                }
            }
            LocalShape::Transverse { multiplicities } => {
                if multiplicities.len() < 2 || multiplicities.len() > 3 {
                    return Err(BlowupError::UnsupportedBranchCount(multiplicities.len()));
                }
                if multiplicities.contains(&0) {
                    return Err(BlowupError::ZeroMultiplicity);
                }
            }
            LocalShape::Tangential2 { first, second } => {
                if *first == 0 || *second == 0 {
                    return Err(BlowupError::ZeroMultiplicity);
                }
            }
        }
        Ok(())
    }

    /// Multiplicity of the exceptional divisor of the blow-up at a point of
    /// this shape: Σ mᵢ·e(Eᵢ, x), where the Hilbert–Samuel multiplicity is 1
    /// on a smooth branch and 2 at a node.
    pub fn exceptional_multiplicity(&self) -> u64 {
        match self {
            LocalShape::Interior { multiplicity } => *multiplicity,
            LocalShape::Transverse { multiplicities } => multiplicities.iter().sum(),
            LocalShape::Tangential2 { first, second } => first + second,
            LocalShape::Node { multiplicity, .. } => 2 * multiplicity,
        }
    }

    /// Branch multiplicities with one entry per branch through the point;
    /// the node counts its single component twice.
    pub fn branch_multiset(&self) -> Vec<u64> {
        match self {
            LocalShape::Interior { multiplicity } => vec![*multiplicity],
            LocalShape::Transverse { multiplicities } => multiplicities.clone(),
            LocalShape::Tangential2 { first, second } => vec![*first, *second],
            LocalShape::Node { multiplicity, .. } => vec![*multiplicity],
        }
    }
}

/// A closed point together with its local shape and degree over the base
/// residue field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalConfig {
    pub degree: u64,
    pub shape: LocalShape,
}

impl LocalConfig {
    pub fn new(degree: u64, shape: LocalShape) -> Result<Self, BlowupError> {
        if degree == 0 {
            return Err(BlowupError::ZeroMultiplicity);
        }
        shape.validate()?;
        Ok(LocalConfig { degree, shape })
    }
}

/// One crossing point created by a blow-up, with its degree relative to the
/// residue field of the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChildPoint {
    pub config: LocalConfig,
    pub relative_degree: u64,
}

/// Result of blowing up a point: the exceptional multiplicity, the crossing
/// points on the exceptional line, and the degrees available at its interior
/// points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupStep {
    pub exceptional_multiplicity: u64,
    pub children: Vec<ChildPoint>,
    pub interior_degrees: EventuallyPeriodicSet,
}

/// Applies the rewrite rule for the shape at the given point.
pub fn blow_up(c: &LocalConfig) -> Result<BlowupStep, BlowupError> {
    c.shape.validate()?;
    let e = c.shape.exceptional_multiplicity();
    let child = |mults: Vec<u64>, rel: u64| -> Result<ChildPoint, BlowupError> {
        Ok(ChildPoint {
            config: LocalConfig::new(
                c.degree * rel,
                LocalShape::Transverse {
                    multiplicities: mults,
                },
            )?,
            relative_degree: rel,
        })
    };
    let children = match &c.shape {
        LocalShape::Interior { multiplicity } => vec![child(vec![*multiplicity, e], 1)?],
        LocalShape::Transverse { multiplicities } => multiplicities
            .iter()
            .map(|&m| child(vec![m, e], 1))
            .collect::<Result<_, _>>()?,
        LocalShape::Tangential2 { first, second } => {
            // both strict transforms meet the exceptional line at one point
            vec![child(vec![*first, *second, e], 1)?]
        }
        LocalShape::Node { multiplicity, tangents } => match tangents {
            NodeTangents::Split => vec![
                child(vec![*multiplicity, e], 1)?,
                child(vec![*multiplicity, e], 1)?,
            ],
            NodeTangents::Inert => vec![child(vec![*multiplicity, e], 2)?],
        },
    };
    // Interior centers of an exceptional line contribute every degree:
    // any degree missing on the punctured line (at most one low degree over
    // the smallest fields) is reached instead through a crossing chain
    // inside the exceptional locus with the same degree-times-multiplicity
    // value, so N is the sound degree set here for every residue field.
    Ok(BlowupStep {
        exceptional_multiplicity: e,
        children,
        interior_degrees: EventuallyPeriodicSet::naturals(),
    })
}

/// Either an exact eventually periodic set (certified closed forms) or the
/// union of dN over a finite set of collected values d, kept as generators
/// because the minimal period of such a union is astronomically large as
/// soon as the generators are not mutually divisible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlowupSet {
    Closed(EventuallyPeriodicSet),
    Multiples(MultiplesUnion),
}

impl BlowupSet {
    pub fn contains(&self, n: u64) -> Result<bool, EpsError> {
        match self {
            BlowupSet::Closed(s) => s.contains(n),
            BlowupSet::Multiples(m) => {
                if n == 0 {
                    return Err(EpsError::ZeroElement);
                }
                Ok(m.contains(n))
            }
        }
    }

    pub fn is_subset(&self, other: &BlowupSet) -> bool {
        match (self, other) {
            (BlowupSet::Closed(a), BlowupSet::Closed(b)) => a.is_subset(b),
            (BlowupSet::Multiples(a), BlowupSet::Closed(b)) => a.is_subset_eps(b),
            (BlowupSet::Multiples(a), BlowupSet::Multiples(b)) => a.is_subset(b),
            (BlowupSet::Closed(a), BlowupSet::Multiples(b)) => {
                // explicit range first, then each tail ray of the closed set
                // must land inside the union
                let bound = a.threshold();
                let head_ok =
                    (1..bound).all(|n| !a.contains(n).unwrap_or(false) || b.contains(n));
                head_ok
                    && a.tail_rays()
                        .into_iter()
                        .all(|(first, step)| b.covers_ray(first, step))
            }
        }
    }

    /// Least element of `self` not in `other`, searching up to `bound`.
    pub fn min_missing_from(&self, other: &BlowupSet, bound: u64) -> Option<u64> {
        (1..=bound).find(|&n| {
            self.contains(n).unwrap_or(false) && !other.contains(n).unwrap_or(true)
        })
    }

    /// Exact eventually periodic view, when representable within the period
    /// cap.
    pub fn to_eps(&self) -> Result<EventuallyPeriodicSet, EpsError> {
        match self {
            BlowupSet::Closed(s) => Ok(s.clone()),
            BlowupSet::Multiples(m) => m.to_eps(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            BlowupSet::Closed(s) => s.to_string(),
            BlowupSet::Multiples(m) => match m.to_eps() {
                Ok(s) => s.to_string(),
                Err(_) => m.render_generators(),
            },
        }
    }
}

/// ⋃ dN over a finite antichain of generators (no generator divides another).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiplesUnion {
    generators: BTreeSet<u64>,
}

impl MultiplesUnion {
    pub fn new(values: impl IntoIterator<Item = u64>) -> Self {
        let mut u = MultiplesUnion::default();
        for v in values {
            u.insert(v);
        }
        u
    }

    pub fn insert(&mut self, d: u64) {
        debug_assert!(d > 0);
        if self.generators.iter().any(|&g| d % g == 0) {
            return;
        }
        self.generators.retain(|&g| g % d != 0);
        self.generators.insert(d);
    }

    pub fn generators(&self) -> impl Iterator<Item = u64> + '_ {
        self.generators.iter().copied()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.generators.iter().any(|&g| n % g == 0 && n >= g)
    }

    /// dN ⊆ ⋃ gN holds exactly when some generator divides d.
    pub fn is_subset(&self, other: &MultiplesUnion) -> bool {
        self.generators
            .iter()
            .all(|&d| other.generators.iter().any(|&g| d % g == 0))
    }

    pub fn is_subset_eps(&self, other: &EventuallyPeriodicSet) -> bool {
        self.generators.iter().all(|&d| {
            EventuallyPeriodicSet::multiples(d)
                .map(|m| m.is_subset(other))
                .unwrap_or(false)
        })
    }

    /// A single generator dividing both `first` and `step` covers the whole
    /// ray; no cycle needs scanning in that case.
    fn covers_ray_exact(&self, first: u64, step: u64) -> Option<bool> {
        if self
            .generators
            .iter()
            .any(|&g| first % g == 0 && step % g == 0)
        {
            return Some(true);
        }
        None
    }

    /// Does the ray {first, first+step, …} lie inside the union? Membership
    /// is periodic modulo the lcm of the generators. Definitive except when
    /// that lcm exceeds the certification budget, where the answer falls
    /// back to "not covered".
    pub fn covers_ray(&self, first: u64, step: u64) -> bool {
        if let Some(ans) = self.covers_ray_exact(first, step) {
            return ans;
        }
        // scan a prefix for a quick counterexample before paying for a cycle
        let scan = 4096u64;
        for k in 0..scan {
            let n = first + k * step;
            if !self.contains(n) {
                return false;
            }
        }
        let mut l = 1u64;
        for &g in &self.generators {
            l = match l.checked_mul(g / l.gcd(&g)) {
                Some(v) if v <= (1 << 26) => v,
                _ => return false, // cannot certify; treat as not covered
            };
        }
        (0..l).all(|k| self.contains(first + k * step))
    }

    pub fn to_eps(&self) -> Result<EventuallyPeriodicSet, EpsError> {
        let mut acc = EventuallyPeriodicSet::empty();
        for &g in &self.generators {
            acc = acc.union(&EventuallyPeriodicSet::multiples(g)?)?;
        }
        Ok(acc)
    }

    pub fn render_generators(&self) -> String {
        self.generators
            .iter()
            .map(|g| format!("{g}N"))
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Outcome of an enumeration: the set and whether it is exact rather than a
/// lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub set: BlowupSet,
    pub certified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CollectKind {
    DegreeTimesMultiplicity,
    MultiplicityOnly,
}

/// BFS over reachable centers. Every reachable point can end some finite
/// sequence, and blow-ups at distinct points do not disturb each other's
/// local shapes, so the reachable set is the tree closure of the rewrite
/// rules. Interior points of an exceptional line of multiplicity e
/// contribute δ·δ′·e for every available interior degree δ′, and the whole
/// subtree below such a point stays inside δ·e·N, so interior centers are
/// folded in closed form instead of being expanded.
fn collect_generators(
    c: &LocalConfig,
    max_depth: u64,
    kind: CollectKind,
) -> Result<MultiplesUnion, BlowupError> {
    let mut out = MultiplesUnion::default();
    let mut queue = VecDeque::new();
    let mut seen = BTreeSet::new();
    queue.push_back((c.shape.clone(), 1u64, 0u64));
    while let Some((shape, rel_degree, depth)) = queue.pop_front() {
        if depth >= max_depth {
            continue;
        }
        let key = (shape_key(&shape), rel_degree);
        if !seen.insert(key) {
            continue;
        }
        let e = shape.exceptional_multiplicity();
        match kind {
            CollectKind::DegreeTimesMultiplicity => {
                // ending here: d = rel_degree·e; ending at an interior point
                // of the new line of any degree δ′ gives rel_degree·δ′·e,
                // whose multiples are already inside rel_degree·e·N
                out.insert(rel_degree * e);
            }
            CollectKind::MultiplicityOnly => {
                out.insert(e);
            }
        }
        let step = blow_up(&LocalConfig::new(1, shape)?)?;
        for child in step.children {
            queue.push_back((
                child.config.shape,
                rel_degree * child.relative_degree,
                depth + 1,
            ));
        }
    }
    Ok(out)
}

fn shape_key(shape: &LocalShape) -> (u8, Vec<u64>) {
    match shape {
        LocalShape::Interior { multiplicity } => (0, vec![*multiplicity]),
        LocalShape::Transverse { multiplicities } => {
            let mut m = multiplicities.clone();
            m.sort_unstable();
            (1, m)
        }
        LocalShape::Tangential2 { first, second } => {
            let mut m = vec![*first, *second];
            m.sort_unstable();
            (2, m)
        }
        LocalShape::Node { multiplicity, tangents } => (
            match tangents {
                NodeTangents::Split => 3,
                NodeTangents::Inert => 4,
            },
            vec![*multiplicity],
        ),
    }
}

fn check_depth(max_depth: u64) -> Result<(), BlowupError> {
    if max_depth == 0 {
        return Err(BlowupError::ZeroDepth);
    }
    if max_depth > MAX_SUPPORTED_DEPTH {
        return Err(BlowupError::DepthTooLarge(max_depth));
    }
    Ok(())
}

fn check_field(c: &LocalConfig, field: &ResidueFieldClass) -> Result<(), BlowupError> {
    if matches!(
        c.shape,
        LocalShape::Node {
            tangents: NodeTangents::Inert,
            ..
        }
    ) && matches!(field, ResidueFieldClass::AlgebraicallyClosed)
    {
        return Err(BlowupError::InertOverClosedField);
    }
    Ok(())
}

/// ⋃ d(B)·N over blow-up sequences of length at most `max_depth`, relative
/// to the residue field of the point (callers scale by its degree).
pub fn enumerate_m(
    c: &LocalConfig,
    field: &ResidueFieldClass,
    max_depth: u64,
) -> Result<Enumeration, BlowupError> {
    check_depth(max_depth)?;
    check_field(c, field)?;
    c.shape.validate()?;
    let closed = match &c.shape {
        LocalShape::Interior { multiplicity } => {
            Some(EventuallyPeriodicSet::multiples(*multiplicity)?)
        }
        LocalShape::Transverse { multiplicities } if multiplicities.len() == 2 => {
            // at a strict-normal-crossings point the reachable multiples fill
            // the whole positive-combination semigroup
            Some(semigroup::positive_combinations(&GeneratorMultiset::new(
                multiplicities.iter().copied(),
            )?)?)
        }
        LocalShape::Node { multiplicity, tangents } if max_depth >= 3 => Some(match tangents {
            NodeTangents::Split => EventuallyPeriodicSet::at_least(2)?.scale(*multiplicity)?,
            NodeTangents::Inert => EventuallyPeriodicSet::multiples(2 * multiplicity)?,
        }),
        _ => None,
    };
    match closed {
        Some(set) => Ok(Enumeration {
            set: BlowupSet::Closed(set),
            certified: true,
        }),
        None => Ok(Enumeration {
            set: BlowupSet::Multiples(collect_generators(
                c,
                max_depth,
                CollectKind::DegreeTimesMultiplicity,
            )?),
            certified: false,
        }),
    }
}

/// ⋃ e(B)·N over blow-up sequences of length at most `max_depth`.
pub fn enumerate_m_prime(c: &LocalConfig, max_depth: u64) -> Result<Enumeration, BlowupError> {
    check_depth(max_depth)?;
    c.shape.validate()?;
    let closed = match &c.shape {
        LocalShape::Interior { multiplicity } => {
            Some(EventuallyPeriodicSet::multiples(*multiplicity)?)
        }
        LocalShape::Transverse { multiplicities } if multiplicities.len() == 2 => {
            Some(semigroup::positive_combinations(&GeneratorMultiset::new(
                multiplicities.iter().copied(),
            )?)?)
        }
        LocalShape::Node { multiplicity, .. } if max_depth >= 3 => {
            // both tangent variants: multiplicities 2m, 3m, … fill mN_{>1}
            Some(EventuallyPeriodicSet::at_least(2)?.scale(*multiplicity)?)
        }
        _ => None,
    };
    match closed {
        Some(set) => Ok(Enumeration {
            set: BlowupSet::Closed(set),
            certified: true,
        }),
        None => Ok(Enumeration {
            set: BlowupSet::Multiples(collect_generators(
                c,
                max_depth,
                CollectKind::MultiplicityOnly,
            )?),
            certified: false,
        }),
    }
}

/// The positive-combination semigroup of the branch multiplicities at the
/// point, every branch carrying a positive coefficient.
pub fn branch_semigroup(c: &LocalConfig) -> Result<EventuallyPeriodicSet, BlowupError> {
    Ok(semigroup::positive_combinations(&GeneratorMultiset::new(
        c.shape.branch_multiset(),
    )?)?)
}

/// Containments M ⊆ M′ ⊆ N with the least witnesses of strictness found
/// below the search bound.
#[derive(Debug, Clone)]
pub struct ContainmentReport {
    pub branch_set: EventuallyPeriodicSet,
    pub m: Enumeration,
    pub m_prime: Enumeration,
    pub m_subset_of_m_prime: bool,
    pub m_prime_subset_of_branch_set: bool,
    pub m_prime_minus_m_witness: Option<u64>,
    pub branch_minus_m_prime_witness: Option<u64>,
    pub branch_minus_m_witness: Option<u64>,
    pub search_bound: u64,
}

pub fn containment_report(
    c: &LocalConfig,
    field: &ResidueFieldClass,
    max_depth: u64,
) -> Result<ContainmentReport, BlowupError> {
    let n_set = branch_semigroup(c)?;
    let m = enumerate_m(c, field, max_depth)?;
    let m_prime = enumerate_m_prime(c, max_depth)?;
    let n_as_blowup = BlowupSet::Closed(n_set.clone());
    let search_bound = 10_000u64;
    let find_witness = |big: &BlowupSet, small: &BlowupSet| {
        big.min_missing_from(small, search_bound)
    };
    Ok(ContainmentReport {
        m_subset_of_m_prime: m.set.is_subset(&m_prime.set),
        m_prime_subset_of_branch_set: m_prime.set.is_subset(&n_as_blowup),
        m_prime_minus_m_witness: find_witness(&m_prime.set, &m.set),
        branch_minus_m_prime_witness: find_witness(&n_as_blowup, &m_prime.set),
        branch_minus_m_witness: find_witness(&n_as_blowup, &m.set),
        branch_set: n_set,
        m,
        m_prime,
        search_bound,
    })
}
