//! Degree sets of the generic fiber from special-fiber data.
//!
//! The input is the combinatorial shape of the special fiber of a regular
//! model with strict normal crossings over a Henselian base: irreducible
//! components with multiplicities and degree-set data, and marked closed
//! points with the components (branches) through them. The degree set of the
//! generic fiber is then the union of
//!
//! * one contribution per marked point x: deg(x) times the semigroup of
//!   strictly positive combinations of the multiplicities of the branches
//!   through x, and
//! * one contribution per component E: m_E · ⋃_{d} dN, the union over the
//!   degrees d available on the interior of E (the complement of the marked
//!   points).
//!
//! Interior degree sets are first-class input: over an infinite residue
//! field a component's interior realizes the same degrees as the whole
//! component (`Same`), while over a finite field they are derived from exact
//! point counts with the marked points subtracted (`Auto`).
//!
//! The index (gcd of the degree set) is also computable componentwise as
//! gcd over E of m_E·δ(E); [`index_of`] evaluates both routes and treats a
//! mismatch as an input inconsistency.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use thiserror::Error;

use crate::eps::{EpsError, EventuallyPeriodicSet};
use crate::finitefield::{curve_degree_set, CurveCountData, FiniteFieldError};
use crate::semigroup::{positive_combinations, GeneratorMultiset, SemigroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiberError {
    #[error("configuration is invalid:\n{0}")]
    Invalid(ValidationReport),
    #[error("point `{0}` is not a strict-normal-crossings point; resolve it through the blow-up calculus or supply its contribution explicitly")]
    NonSncPoint(String),
    #[error("component `{0}`: interior degree set cannot be resolved: {1}")]
    UnresolvableInterior(String, String),
    #[error("component `{0}`: degree set cannot be resolved: {1}")]
    UnresolvableDegreeSet(String, String),
    #[error("component `{component}`: marked point `{point}` of degree {degree} is not compatible with constant field degree {cfd}")]
    PointDegreeNotDivisible {
        component: String,
        point: String,
        degree: u64,
        cfd: u64,
    },
    #[error("index mismatch: gcd of the degree set is {from_degree_set} but gcd over components of m·δ(E) is {from_components}; the component degree sets contradict the marked-point data")]
    IndexMismatch {
        from_degree_set: u64,
        from_components: u64,
    },
    #[error("component `{0}`: multiples of the interior degrees do not form an eventually periodic set")]
    InteriorClosureNotPeriodic(String),
    #[error(transparent)]
    Set(#[from] EpsError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    FiniteField(#[from] FiniteFieldError),
}

/// The residue field of the base, by class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResidueFieldClass {
    AlgebraicallyClosed,
    Finite { q: u64 },
    InfiniteOther,
}

impl ResidueFieldClass {
    pub fn is_finite(&self) -> bool {
        matches!(self, ResidueFieldClass::Finite { .. })
    }
}

/// Degree-set data of one component over the base residue field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeSetSpec {
    /// Every positive degree occurs (dense rational points, e.g. a line over
    /// an infinite field).
    All,
    Explicit(EventuallyPeriodicSet),
    /// Deferred to exact point counts over the constant field of the
    /// component; the engine scales by the constant field degree.
    FiniteField(CurveCountData),
}

/// Degree-set data for the interior (complement of the marked points).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InteriorSpec {
    /// Interior degrees equal the component's degrees (infinite residue
    /// fields, where rational points are dense).
    Same,
    /// Subtract the marked points from exact finite-field counts.
    Auto,
    Explicit(EventuallyPeriodicSet),
}

/// One irreducible component of the special fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentRecord {
    pub id: String,
    pub multiplicity: u64,
    pub constant_field_degree: Option<u64>,
    pub degree_set: DegreeSetSpec,
    pub interior_degree_set: InteriorSpec,
    pub arithmetic_genus: Option<u64>,
}

impl ComponentRecord {
    pub fn cfd(&self) -> u64 {
        self.constant_field_degree.unwrap_or(1)
    }
}

/// A branch of a marked point on a component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchRef {
    pub component: String,
    pub count: u64,
}

/// A marked closed point of the special fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedPoint {
    pub id: String,
    pub degree: u64,
    pub branches: Vec<BranchRef>,
    pub snc: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConfigMetadata {
    pub genus: Option<u64>,
    pub declared_minimal: bool,
    pub hyperelliptic: bool,
}

/// The full labeled special-fiber configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialFiberConfig {
    pub residue_field: ResidueFieldClass,
    pub components: Vec<ComponentRecord>,
    pub points: Vec<MarkedPoint>,
    pub metadata: ConfigMetadata,
}

impl SpecialFiberConfig {
    pub fn component(&self, id: &str) -> Option<&ComponentRecord> {
        self.components.iter().find(|c| c.id == id)
    }

    fn points_on<'a>(&'a self, component: &'a str) -> impl Iterator<Item = &'a MarkedPoint> + 'a {
        self.points
            .iter()
            .filter(move |p| p.branches.iter().any(|b| b.component == component))
    }
}

/// A structural problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub subject: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_clean() {
            write!(f, "ok")?;
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Degree set of a component over the base field.
pub fn resolve_degree_set(
    component: &ComponentRecord,
) -> Result<EventuallyPeriodicSet, FiberError> {
    let base = match &component.degree_set {
        DegreeSetSpec::All => EventuallyPeriodicSet::naturals(),
        DegreeSetSpec::Explicit(s) => s.clone(),
        DegreeSetSpec::FiniteField(data) => curve_degree_set(data, &[]).map_err(|e| {
            FiberError::UnresolvableDegreeSet(component.id.clone(), e.to_string())
        })?,
    };
    Ok(base.scale(component.cfd())?)
}

/// Degrees available on the interior of a component, marked points removed.
pub fn resolve_interior_degree_set(
    component: &ComponentRecord,
    cfg: &SpecialFiberConfig,
) -> Result<EventuallyPeriodicSet, FiberError> {
    match &component.interior_degree_set {
        InteriorSpec::Explicit(s) => Ok(s.clone()),
        InteriorSpec::Same => resolve_degree_set(component),
        InteriorSpec::Auto => {
            let data = match &component.degree_set {
                DegreeSetSpec::FiniteField(data) => data,
                _ => {
                    return Err(FiberError::UnresolvableInterior(
                        component.id.clone(),
                        "`auto` needs finite-field count data on the component".into(),
                    ))
                }
            };
            let cfd = component.cfd();
            let mut removed = Vec::new();
            for point in cfg.points_on(&component.id) {
                if point.degree % cfd != 0 {
                    return Err(FiberError::PointDegreeNotDivisible {
                        component: component.id.clone(),
                        point: point.id.clone(),
                        degree: point.degree,
                        cfd,
                    });
                }
                removed.push(point.degree / cfd);
            }
            let interior = curve_degree_set(data, &removed).map_err(|e| {
                FiberError::UnresolvableInterior(component.id.clone(), e.to_string())
            })?;
            Ok(interior.scale(cfd)?)
        }
    }
}

/// Contribution of a strict-normal-crossings marked point:
/// deg(x) · {Σ aᵢmᵢ : aᵢ ≥ 1} over the branch multiplicities.
pub fn point_contribution(
    point: &MarkedPoint,
    cfg: &SpecialFiberConfig,
) -> Result<EventuallyPeriodicSet, FiberError> {
    if !point.snc {
        return Err(FiberError::NonSncPoint(point.id.clone()));
    }
    let mut multiset = Vec::new();
    for branch in &point.branches {
        let component = cfg.component(&branch.component).ok_or_else(|| {
            FiberError::Invalid(ValidationReport {
                violations: vec![Violation {
                    subject: format!("point `{}`", point.id),
                    message: format!("references unknown component `{}`", branch.component),
                }],
                warnings: vec![],
            })
        })?;
        for _ in 0..branch.count {
            multiset.push(component.multiplicity);
        }
    }
    let semigroup = positive_combinations(&GeneratorMultiset::new(multiset)?)?;
    Ok(semigroup.scale(point.degree)?)
}

/// Contribution of the interior of a component: m · ⋃_{d interior} dN.
pub fn interior_contribution(
    component: &ComponentRecord,
    cfg: &SpecialFiberConfig,
) -> Result<EventuallyPeriodicSet, FiberError> {
    let interior = resolve_interior_degree_set(component, cfg)?;
    let closure = interior
        .multiples_closure()
        .map_err(|_| FiberError::InteriorClosureNotPeriodic(component.id.clone()))?;
    Ok(closure.scale(component.multiplicity)?)
}

/// The degree set of the generic fiber: union of all point and interior
/// contributions. Requires a structurally valid configuration whose marked
/// points are all strict normal crossings.
pub fn degree_set(cfg: &SpecialFiberConfig) -> Result<EventuallyPeriodicSet, FiberError> {
    let report = validate(cfg);
    if !report.is_clean() {
        return Err(FiberError::Invalid(report));
    }
    if let Some(p) = cfg.points.iter().find(|p| !p.snc) {
        return Err(FiberError::NonSncPoint(p.id.clone()));
    }
    let mut acc = EventuallyPeriodicSet::empty();
    for component in &cfg.components {
        acc = acc.union(&interior_contribution(component, cfg)?)?;
    }
    for point in &cfg.points {
        acc = acc.union(&point_contribution(point, cfg)?)?;
    }
    Ok(acc)
}

/// gcd over components of m·δ(E), where δ(E) is the gcd of the component's
/// degree set over the base field.
pub fn index_from_components(cfg: &SpecialFiberConfig) -> Result<u64, FiberError> {
    let mut g = 0u64;
    for component in &cfg.components {
        let delta = resolve_degree_set(component)?.gcd_of()?;
        g = g.gcd(&component.multiplicity.checked_mul(delta).ok_or(EpsError::Overflow)?);
    }
    Ok(g)
}

/// The index of the generic fiber, computed both from the degree set and
/// componentwise, with the two answers cross-checked.
pub fn index_of(cfg: &SpecialFiberConfig) -> Result<u64, FiberError> {
    let from_components = index_from_components(cfg)?;
    let from_degree_set = degree_set(cfg)?.gcd_of()?;
    if from_components != from_degree_set {
        return Err(FiberError::IndexMismatch {
            from_degree_set,
            from_components,
        });
    }
    Ok(from_degree_set)
}

/// Structural validation. Geometry the configuration does not carry (actual
/// completeness of the intersection marking) is a declared input contract
/// and cannot be checked here.
pub fn validate(cfg: &SpecialFiberConfig) -> ValidationReport {
    let mut violations: Vec<Violation> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    let mut push = |subject: &str, message: String| {
        violations.push(Violation {
            subject: subject.to_string(),
            message,
        });
    };

    if cfg.components.is_empty() {
        push("configuration", "at least one component is required".into());
    }
    let mut ids: BTreeSet<&str> = BTreeSet::new();
    for c in &cfg.components {
        if !ids.insert(c.id.as_str()) {
            push(&format!("component `{}`", c.id), "duplicate id".into());
        }
        if c.multiplicity == 0 {
            push(&format!("component `{}`", c.id), "multiplicity must be positive".into());
        }
        if c.cfd() == 0 {
            push(
                &format!("component `{}`", c.id),
                "constant field degree must be positive".into(),
            );
        }
    }
    let mut point_ids: BTreeSet<&str> = BTreeSet::new();
    for p in &cfg.points {
        let subject = format!("point `{}`", p.id);
        if !point_ids.insert(p.id.as_str()) {
            push(&subject, "duplicate id".into());
        }
        if p.degree == 0 {
            push(&subject, "degree must be positive".into());
        }
        if p.branches.is_empty() {
            push(&subject, "at least one branch is required".into());
        }
        let mut seen_components = BTreeSet::new();
        let mut total_branches = 0u64;
        for b in &p.branches {
            if b.count == 0 {
                push(&subject, format!("branch count on `{}` must be positive", b.component));
            }
            total_branches += b.count;
            if cfg.component(&b.component).is_none() {
                push(&subject, format!("references unknown component `{}`", b.component));
                continue;
            }
            let fresh = seen_components.insert(b.component.as_str());
            if p.snc && !fresh {
                push(
                    &subject,
                    format!("strict normal crossings forbids repeated component `{}`", b.component),
                );
            }
        }
        if p.snc && p.branches.iter().any(|b| b.count > 1) {
            push(&subject, "strict normal crossings forbids branch count above 1".into());
        }
        if p.snc && total_branches > 2 {
            push(
                &subject,
                "strict normal crossings allows at most two branches on a relative curve".into(),
            );
        }
        // the residue field of the point contains the constant field of
        // every component through it
        for b in &p.branches {
            if let Some(c) = cfg.component(&b.component) {
                if c.cfd() > 0 && p.degree % c.cfd() != 0 {
                    push(
                        &subject,
                        format!(
                            "degree {} is not a multiple of the constant field degree {} of `{}`",
                            p.degree,
                            c.cfd(),
                            c.id
                        ),
                    );
                }
            }
        }
    }
    // degree-set consistency per component
    let mut deltas: BTreeMap<&str, u64> = BTreeMap::new();
    for c in &cfg.components {
        let subject = format!("component `{}`", c.id);
        match resolve_degree_set(c) {
            Err(e) => push(&subject, e.to_string()),
            Ok(ds) => {
                if ds.is_empty() {
                    push(&subject, "degree set is empty".into());
                    continue;
                }
                let cfd = c.cfd();
                if cfd > 1 {
                    let multiples = EventuallyPeriodicSet::multiples(cfd).expect("cfd > 0");
                    if !ds.is_subset(&multiples) {
                        push(
                            &subject,
                            format!("degree set has members not divisible by the constant field degree {cfd}"),
                        );
                    }
                }
                if let Ok(delta) = ds.gcd_of() {
                    deltas.insert(c.id.as_str(), delta);
                }
                // interior must sit inside the component degrees
                match resolve_interior_degree_set(c, cfg) {
                    Ok(interior) => {
                        if !interior.is_subset(&ds) {
                            push(
                                &subject,
                                "interior degree set is not contained in the degree set".into(),
                            );
                        }
                    }
                    Err(e) => push(&subject, e.to_string()),
                }
            }
        }
    }
    // genus-based checks
    if let Some(genus) = cfg.metadata.genus {
        if deltas.len() == cfg.components.len() && !cfg.components.is_empty() {
            let mut index = 0u64;
            for c in &cfg.components {
                index = index.gcd(&(c.multiplicity * deltas[c.id.as_str()]));
            }
            if genus != 1 && index > 0 {
                let canonical_degree = (2 * genus as i64 - 2).unsigned_abs();
                if canonical_degree % index != 0 {
                    push(
                        "configuration",
                        format!("index {index} must divide the canonical degree 2g-2 = {canonical_degree}"),
                    );
                }
            }
        }
        if cfg.metadata.declared_minimal
            && cfg.metadata.hyperelliptic
            && genus % 2 == 0
            && genus > 0
            && matches!(cfg.residue_field, ResidueFieldClass::AlgebraicallyClosed)
        {
            let gcd_mult = cfg
                .components
                .iter()
                .fold(0u64, |g, c| g.gcd(&c.multiplicity));
            if gcd_mult > 0 && (genus - 1) % gcd_mult != 0 {
                push(
                    "configuration",
                    format!(
                        "gcd of multiplicities {gcd_mult} must divide g-1 = {} on a minimal model",
                        genus - 1
                    ),
                );
            }
        }
    }
    if let ResidueFieldClass::Finite { q } = cfg.residue_field {
        if q % 2 == 0 || q % 3 == 0 || q % 5 == 0 {
            warnings.push(format!(
                "residue characteristic divides 30 (q = {q}); genus-2 classification results assume characteristic coprime to 30"
            ));
        }
    }
    ValidationReport { violations, warnings }
}
