//! Built-in special-fiber configurations and the genus-2 classifier.
//!
//! The fixtures encode the minimal-model special fibers the genus-2 theory
//! runs on. Components are lines or low-genus curves over the residue
//! field; each fixture records multiplicities, which components meet, and —
//! for the Galois-twisted variants — which geometric components fuse into a
//! single irreducible component with a larger constant field.
//!
//! Every fixture passes the geometric consistency checks: each component's
//! neighboring multiplicities sum to a multiple of its own (so its
//! self-intersection is an integer) and the adjunction count gives total
//! genus two.
//!
//! The classifier combines the special-fiber degree set with the large-field
//! floor: over a Henselian field, any genus-2 curve has degree-2 points over
//! each rational point of the line (the hyperelliptic double cover) and,
//! when the index is one, degree-3 points by Riemann–Roch. For residue
//! characteristic coprime to 30 the possible degree sets are 2N, N, N_{>1},
//! 2N ∪ 3N, or — for a smooth special fiber — the multiples of the degrees
//! realized on the fiber itself.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::eps::{EpsError, EventuallyPeriodicSet};
use crate::fiber::{
    self, BranchRef, ComponentRecord, ConfigMetadata, DegreeSetSpec, FiberError, InteriorSpec,
    MarkedPoint, ResidueFieldClass, SpecialFiberConfig,
};
use crate::finitefield::{factor_degrees, CurveCountData, FiniteFieldError, PrimePolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown fixture label `{0}`")]
    UnknownLabel(String),
    #[error("fixture `{0}` has no galois-swap variant")]
    NoSwapVariant(String),
    #[error("a galois-swapped variant needs a nontrivial Galois action; the residue field is algebraically closed")]
    SwapOverClosedField,
    #[error("fixture `{label}` carries frozen curve counts only over q = {supported}, got q = {got}")]
    UnsupportedField { label: String, supported: u64, got: u64 },
    #[error("the genus-2 classifier applies to index 1 or 2, got {0}")]
    IndexOutOfRange(u64),
    #[error("configuration does not declare genus 2")]
    NotGenus2,
    #[error("degree set {0} is outside the genus-2 menu; the input is invalid or outside the classification hypotheses")]
    OutsideMenu(String),
    #[error("total branch degree must be even, got {0}")]
    OddTotalDegree(u64),
    #[error("branch degree multiset must be nonempty")]
    EmptyDegrees,
    #[error("field size q^{0} overflows")]
    FieldTooLarge(u64),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    FiniteField(#[from] FiniteFieldError),
    #[error(transparent)]
    Set(#[from] EpsError),
}

/// Labels of the built-in configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixtureLabel {
    /// The multiplicity-6 spine with 2, 3, 3 and a 2–4 chain hanging off it.
    NuIV,
    /// Multiplicities {4, 3, 3, 2, 2}: two 3-components joining the central
    /// 4 to a shared 2-bridge, plus a 2-tail.
    NuIIIStarII0,
    /// Multiplicities {3, 3, 4, 5, 2, 2} with a 3–4 crossing and a 5 meeting
    /// the rest in a degree-2 subscheme.
    NuIIStarIVAlpha,
    /// A smooth genus-2 special fiber.
    SmoothGenus2,
    /// Two genus-1 components of multiplicity one crossing at a point.
    TwoEllipticChain,
}

impl FixtureLabel {
    pub const ALL: [FixtureLabel; 5] = [
        FixtureLabel::NuIV,
        FixtureLabel::NuIIIStarII0,
        FixtureLabel::NuIIStarIVAlpha,
        FixtureLabel::SmoothGenus2,
        FixtureLabel::TwoEllipticChain,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FixtureLabel::NuIV => "NU-IV",
            FixtureLabel::NuIIIStarII0 => "NU-III*-II0",
            FixtureLabel::NuIIStarIVAlpha => "NU-II*-IV-alpha",
            FixtureLabel::SmoothGenus2 => "smooth-genus-2",
            FixtureLabel::TwoEllipticChain => "two-elliptic-chain",
        }
    }

    pub fn has_swap_variant(&self) -> bool {
        matches!(self, FixtureLabel::NuIV | FixtureLabel::NuIIIStarII0)
    }
}

impl fmt::Display for FixtureLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixtureLabel {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, CatalogError> {
        FixtureLabel::ALL
            .iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| CatalogError::UnknownLabel(s.to_string()))
    }
}

/// Variant options of a fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FixtureVariant {
    /// Fuse the designated conjugate component pair into one irreducible
    /// component with constant field degree 2.
    pub galois_swap: bool,
}

/// Residue field of a fixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureField {
    Finite { q: u64 },
    AlgebraicallyClosed,
}

impl FixtureField {
    fn residue_class(&self) -> ResidueFieldClass {
        match self {
            FixtureField::Finite { q } => ResidueFieldClass::Finite { q: *q },
            FixtureField::AlgebraicallyClosed => ResidueFieldClass::AlgebraicallyClosed,
        }
    }
}

/// Frozen point counts, verified by enumeration:
/// y² = x⁵ + 1 over F_7 (genus 2) and y² = x³ + 1 over F_7 (genus 1).
const GENUS2_Q: u64 = 7;
const GENUS2_COUNTS: [u64; 2] = [8, 50];
const GENUS1_Q: u64 = 7;
const GENUS1_COUNTS: [u64; 1] = [12];

/// A genus-0 rational component: over a finite field its degrees come from
/// the exact line counts, over an algebraically closed field only degree 1
/// occurs.
fn rational_line(
    id: &str,
    multiplicity: u64,
    field: &FixtureField,
) -> Result<ComponentRecord, CatalogError> {
    let (degree_set, interior) = match field {
        FixtureField::Finite { q } => (
            DegreeSetSpec::FiniteField(CurveCountData::new(*q, 0, vec![q + 1])?),
            InteriorSpec::Auto,
        ),
        FixtureField::AlgebraicallyClosed => (
            DegreeSetSpec::Explicit(EventuallyPeriodicSet::finite([1])?),
            InteriorSpec::Same,
        ),
    };
    Ok(ComponentRecord {
        id: id.into(),
        multiplicity,
        constant_field_degree: None,
        degree_set,
        interior_degree_set: interior,
        arithmetic_genus: Some(0),
    })
}

/// A geometrically reducible component: a conjugate pair of lines fused into
/// one component with constant field degree 2. Only meaningful over a
/// finite field.
fn conjugate_line_pair(
    id: &str,
    multiplicity: u64,
    q: u64,
) -> Result<ComponentRecord, CatalogError> {
    let q2 = q.checked_mul(q).ok_or(CatalogError::FieldTooLarge(2))?;
    Ok(ComponentRecord {
        id: id.into(),
        multiplicity,
        constant_field_degree: Some(2),
        degree_set: DegreeSetSpec::FiniteField(CurveCountData::new(q2, 0, vec![q2 + 1])?),
        interior_degree_set: InteriorSpec::Auto,
        arithmetic_genus: Some(0),
    })
}

fn snc_point(id: &str, degree: u64, components: &[&str]) -> MarkedPoint {
    MarkedPoint {
        id: id.into(),
        degree,
        branches: components
            .iter()
            .map(|c| BranchRef {
                component: (*c).into(),
                count: 1,
            })
            .collect(),
        snc: true,
    }
}

fn genus2_metadata(declared_minimal: bool) -> ConfigMetadata {
    ConfigMetadata {
        genus: Some(2),
        declared_minimal,
        hyperelliptic: true,
    }
}

/// Builds a fixture configuration.
pub fn build_fixture(
    label: FixtureLabel,
    variant: FixtureVariant,
    field: FixtureField,
) -> Result<SpecialFiberConfig, CatalogError> {
    if variant.galois_swap && !label.has_swap_variant() {
        return Err(CatalogError::NoSwapVariant(label.to_string()));
    }
    if variant.galois_swap && matches!(field, FixtureField::AlgebraicallyClosed) {
        return Err(CatalogError::SwapOverClosedField);
    }
    match label {
        FixtureLabel::NuIV => build_nu_iv(variant, field),
        FixtureLabel::NuIIIStarII0 => build_nu_iii_star_ii0(variant, field),
        FixtureLabel::NuIIStarIVAlpha => build_nu_ii_star_iv_alpha(field),
        FixtureLabel::SmoothGenus2 => build_smooth_genus2(field),
        FixtureLabel::TwoEllipticChain => build_two_elliptic_chain(field),
    }
}

/// Spine of multiplicity 6 crossed by components of multiplicities 2, 3, 3
/// and 4, with a further 2 hanging off the 4. Every crossing joins two
/// multiplicities sharing a factor 2 or 3, so the degree set is 2N ∪ 3N.
/// The swap variant fuses the two 3-components into one with constant field
/// degree 2, pushing every contribution into 2N.
fn build_nu_iv(
    variant: FixtureVariant,
    field: FixtureField,
) -> Result<SpecialFiberConfig, CatalogError> {
    let mut components = vec![
        rational_line("spine6", 6, &field)?,
        rational_line("a2", 2, &field)?,
        rational_line("b4", 4, &field)?,
        rational_line("b2", 2, &field)?,
    ];
    let mut points = vec![
        snc_point("spine6-a2", 1, &["spine6", "a2"]),
        snc_point("spine6-b4", 1, &["spine6", "b4"]),
        snc_point("b4-b2", 1, &["b4", "b2"]),
    ];
    if variant.galois_swap {
        let q = match field {
            FixtureField::Finite { q } => q,
            FixtureField::AlgebraicallyClosed => unreachable!("checked above"),
        };
        components.push(conjugate_line_pair("c3pair", 3, q)?);
        points.push(snc_point("spine6-c3pair", 2, &["spine6", "c3pair"]));
    } else {
        components.push(rational_line("c3a", 3, &field)?);
        components.push(rational_line("c3b", 3, &field)?);
        points.push(snc_point("spine6-c3a", 1, &["spine6", "c3a"]));
        points.push(snc_point("spine6-c3b", 1, &["spine6", "c3b"]));
    }
    Ok(SpecialFiberConfig {
        residue_field: field.residue_class(),
        components,
        points,
        metadata: genus2_metadata(true),
    })
}

/// Central multiplicity-4 component with a 2-tail; two 3-components join the
/// 4 to a shared 2-bridge. The swap variant fuses the 3-pair, leaving only
/// even contributions (degree set 2N); unswapped, the rational points on the
/// 3-components supply 3N and the crossings fill in N_{>1}.
fn build_nu_iii_star_ii0(
    variant: FixtureVariant,
    field: FixtureField,
) -> Result<SpecialFiberConfig, CatalogError> {
    let mut components = vec![
        rational_line("center4", 4, &field)?,
        rational_line("tail2", 2, &field)?,
        rational_line("bridge2", 2, &field)?,
    ];
    let mut points = vec![snc_point("center4-tail2", 1, &["center4", "tail2"])];
    if variant.galois_swap {
        let q = match field {
            FixtureField::Finite { q } => q,
            FixtureField::AlgebraicallyClosed => unreachable!("checked above"),
        };
        components.push(conjugate_line_pair("c3pair", 3, q)?);
        points.push(snc_point("center4-c3pair", 2, &["center4", "c3pair"]));
        points.push(snc_point("bridge2-c3pair", 2, &["bridge2", "c3pair"]));
    } else {
        components.push(rational_line("c3a", 3, &field)?);
        components.push(rational_line("c3b", 3, &field)?);
        points.push(snc_point("center4-c3a", 1, &["center4", "c3a"]));
        points.push(snc_point("center4-c3b", 1, &["center4", "c3b"]));
        points.push(snc_point("bridge2-c3a", 1, &["bridge2", "c3a"]));
        points.push(snc_point("bridge2-c3b", 1, &["bridge2", "c3b"]));
    }
    Ok(SpecialFiberConfig {
        residue_field: field.residue_class(),
        components,
        points,
        metadata: genus2_metadata(true),
    })
}

/// Multiplicities {3, 3, 4, 5, 2, 2} with a 3–4 crossing at a rational point
/// and the 5 meeting the rest in two rational points (a degree-2 subscheme).
/// No component has multiplicity 1, so the degree set is exactly N_{>1}.
fn build_nu_ii_star_iv_alpha(field: FixtureField) -> Result<SpecialFiberConfig, CatalogError> {
    let components = vec![
        rational_line("a3", 3, &field)?,
        rational_line("b3", 3, &field)?,
        rational_line("c4", 4, &field)?,
        rational_line("d5", 5, &field)?,
        rational_line("e2", 2, &field)?,
        rational_line("f2", 2, &field)?,
    ];
    let points = vec![
        snc_point("a3-c4", 1, &["a3", "c4"]),
        snc_point("a3-d5", 1, &["a3", "d5"]),
        snc_point("b3-c4", 1, &["b3", "c4"]),
        snc_point("b3-e2", 1, &["b3", "e2"]),
        snc_point("d5-e2", 1, &["d5", "e2"]),
        snc_point("c4-f2", 1, &["c4", "f2"]),
    ];
    Ok(SpecialFiberConfig {
        residue_field: field.residue_class(),
        components,
        points,
        metadata: genus2_metadata(false),
    })
}

fn build_smooth_genus2(field: FixtureField) -> Result<SpecialFiberConfig, CatalogError> {
    let component = match field {
        FixtureField::Finite { q } => {
            if q != GENUS2_Q {
                return Err(CatalogError::UnsupportedField {
                    label: FixtureLabel::SmoothGenus2.to_string(),
                    supported: GENUS2_Q,
                    got: q,
                });
            }
            ComponentRecord {
                id: "fiber".into(),
                multiplicity: 1,
                constant_field_degree: None,
                degree_set: DegreeSetSpec::FiniteField(CurveCountData::new(
                    GENUS2_Q,
                    2,
                    GENUS2_COUNTS.to_vec(),
                )?),
                interior_degree_set: InteriorSpec::Same,
                arithmetic_genus: Some(2),
            }
        }
        FixtureField::AlgebraicallyClosed => ComponentRecord {
            id: "fiber".into(),
            multiplicity: 1,
            constant_field_degree: None,
            degree_set: DegreeSetSpec::Explicit(EventuallyPeriodicSet::finite([1])?),
            interior_degree_set: InteriorSpec::Same,
            arithmetic_genus: Some(2),
        },
    };
    Ok(SpecialFiberConfig {
        residue_field: field.residue_class(),
        components: vec![component],
        points: vec![],
        metadata: genus2_metadata(true),
    })
}

fn build_two_elliptic_chain(field: FixtureField) -> Result<SpecialFiberConfig, CatalogError> {
    let elliptic = |id: &str| -> Result<ComponentRecord, CatalogError> {
        Ok(match field {
            FixtureField::Finite { q } => {
                if q != GENUS1_Q {
                    return Err(CatalogError::UnsupportedField {
                        label: FixtureLabel::TwoEllipticChain.to_string(),
                        supported: GENUS1_Q,
                        got: q,
                    });
                }
                ComponentRecord {
                    id: id.into(),
                    multiplicity: 1,
                    constant_field_degree: None,
                    degree_set: DegreeSetSpec::FiniteField(CurveCountData::new(
                        GENUS1_Q,
                        1,
                        GENUS1_COUNTS.to_vec(),
                    )?),
                    interior_degree_set: InteriorSpec::Auto,
                    arithmetic_genus: Some(1),
                }
            }
            FixtureField::AlgebraicallyClosed => ComponentRecord {
                id: id.into(),
                multiplicity: 1,
                constant_field_degree: None,
                degree_set: DegreeSetSpec::Explicit(EventuallyPeriodicSet::finite([1])?),
                interior_degree_set: InteriorSpec::Same,
                arithmetic_genus: Some(1),
            },
        })
    };
    Ok(SpecialFiberConfig {
        residue_field: field.residue_class(),
        components: vec![elliptic("e1")?, elliptic("e2")?],
        points: vec![snc_point("e1-e2", 1, &["e1", "e2"])],
        metadata: genus2_metadata(true),
    })
}

/// The degrees guaranteed over a large field: every rational point of the
/// line lifts to a degree-2 point through the hyperelliptic double cover,
/// and index 1 supplies degree-3 points; both intersected with the degrees
/// of finite extensions of the base field.
pub fn large_field_floor(
    index: u64,
    ext_degrees: &EventuallyPeriodicSet,
) -> Result<EventuallyPeriodicSet, CatalogError> {
    let base = match index {
        2 => EventuallyPeriodicSet::multiples(2)?,
        1 => EventuallyPeriodicSet::multiples(2)?.union(&EventuallyPeriodicSet::multiples(3)?)?,
        other => return Err(CatalogError::IndexOutOfRange(other)),
    };
    Ok(base.intersect(ext_degrees)?)
}

/// The five possible outcomes of the genus-2 classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Genus2Kind {
    TwoN,
    AllN,
    AboveOne,
    TwoNUnionThreeN,
    SmoothFiberMultiples,
}

impl fmt::Display for Genus2Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Genus2Kind::TwoN => "2N",
            Genus2Kind::AllN => "N",
            Genus2Kind::AboveOne => "N>=2",
            Genus2Kind::TwoNUnionThreeN => "2N|3N",
            Genus2Kind::SmoothFiberMultiples => "multiples of the smooth-fiber degrees",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Genus2Class {
    pub kind: Genus2Kind,
    pub degree_set: EventuallyPeriodicSet,
}

/// Is the configured special fiber a single smooth genus-2 curve?
fn is_declared_smooth_genus2(cfg: &SpecialFiberConfig) -> bool {
    cfg.points.is_empty()
        && cfg.components.len() == 1
        && cfg.components[0].multiplicity == 1
        && cfg.components[0].arithmetic_genus == Some(2)
}

/// Classifies the degree set of a genus-2 configuration against the menu
/// {2N, N, N_{>1}, 2N ∪ 3N} plus the smooth-fiber case.
pub fn genus2_classify(
    cfg: &SpecialFiberConfig,
    ext_degrees: &EventuallyPeriodicSet,
) -> Result<Genus2Class, CatalogError> {
    if cfg.metadata.genus != Some(2) {
        return Err(CatalogError::NotGenus2);
    }
    let ds = fiber::degree_set(cfg)?;
    let index = fiber::index_of(cfg)?;
    let floor = large_field_floor(index, ext_degrees)?;
    let degree_set = ds.union(&floor)?;
    if is_declared_smooth_genus2(cfg) {
        return Ok(Genus2Class {
            kind: Genus2Kind::SmoothFiberMultiples,
            degree_set,
        });
    }
    let kind = if degree_set == EventuallyPeriodicSet::multiples(2)? {
        Genus2Kind::TwoN
    } else if degree_set == EventuallyPeriodicSet::naturals() {
        Genus2Kind::AllN
    } else if degree_set == EventuallyPeriodicSet::at_least(2)? {
        Genus2Kind::AboveOne
    } else if degree_set
        == EventuallyPeriodicSet::multiples(2)?.union(&EventuallyPeriodicSet::multiples(3)?)?
    {
        Genus2Kind::TwoNUnionThreeN
    } else {
        return Err(CatalogError::OutsideMenu(degree_set.to_string()));
    };
    Ok(Genus2Class { kind, degree_set })
}

/// Hyperelliptic family over a finite residue field: a genus-0 spine of
/// multiplicity 2 crossed by one multiplicity-1 component per branch degree
/// nᵢ, each meeting the spine at a degree-nᵢ point. The resulting degree
/// set is 2N ∪ n₁N ∪ … ∪ n_ℓN.
pub fn hyperelliptic_family(
    degrees: &[u64],
    q: u64,
) -> Result<SpecialFiberConfig, CatalogError> {
    if degrees.is_empty() {
        return Err(CatalogError::EmptyDegrees);
    }
    let total: u64 = degrees.iter().sum();
    if total % 2 != 0 {
        return Err(CatalogError::OddTotalDegree(total));
    }
    let field = FixtureField::Finite { q };
    let mut components = vec![rational_line("spine2", 2, &field)?];
    let mut points = Vec::new();
    for (i, &n) in degrees.iter().enumerate() {
        let id = format!("branch{}d{}", i + 1, n);
        let qn = q
            .checked_pow(u32::try_from(n).map_err(|_| CatalogError::FieldTooLarge(n))?)
            .ok_or(CatalogError::FieldTooLarge(n))?;
        components.push(ComponentRecord {
            id: id.clone(),
            multiplicity: 1,
            constant_field_degree: Some(n),
            degree_set: DegreeSetSpec::FiniteField(CurveCountData::new(qn, 0, vec![qn + 1])?),
            interior_degree_set: InteriorSpec::Auto,
            arithmetic_genus: Some(0),
        });
        points.push(snc_point(&format!("spine2-{id}"), n, &["spine2", &id]));
    }
    let genus = total / 2 - 1;
    Ok(SpecialFiberConfig {
        residue_field: ResidueFieldClass::Finite { q },
        components,
        points,
        metadata: ConfigMetadata {
            genus: Some(genus),
            declared_minimal: false,
            hyperelliptic: true,
        },
    })
}

/// The polynomial route into the family: reduce y² = π·f(x) with f monic,
/// squarefree and of even degree; the branch degrees are the degrees of the
/// irreducible factors of f over the residue field.
pub fn hyperelliptic_family_from_polynomial(
    f: &PrimePolynomial,
) -> Result<SpecialFiberConfig, CatalogError> {
    if f.degree() % 2 != 0 {
        return Err(CatalogError::OddTotalDegree(f.degree()));
    }
    let degrees = factor_degrees(f)?;
    hyperelliptic_family(&degrees, f.p())
}
