//! Configuration documents and result rendering.
//!
//! A configuration is a JSON document with top-level keys `residue_field`,
//! `components`, `points` and optional `metadata`:
//!
//! ```json
//! {
//!   "residue_field": { "class": "finite", "q": 7 },
//!   "components": [
//!     { "id": "spine", "multiplicity": 2,
//!       "degree_set": "finite-field(q=7,g=0,counts=[8])",
//!       "interior_degree_set": "auto" }
//!   ],
//!   "points": [
//!     { "id": "x", "degree": 1,
//!       "branches": [ { "component": "spine" } ], "snc": true }
//!   ],
//!   "metadata": { "genus": 2, "declared_minimal": false, "hyperelliptic": true }
//! }
//! ```
//!
//! Degree sets inside documents are strings: the textual forms of
//! [`EventuallyPeriodicSet`] (`N`, `2N`, `N>=4`, `eps{..}`, unions with `|`),
//! the marker `all`, or a deferred finite-field spec
//! `finite-field(q=..,g=..,counts=[..])`. Interior degree sets additionally
//! accept `same` and `auto`; when omitted they default to `auto` for
//! finite-field data and `same` otherwise.
//!
//! `parse(render(cfg))` is the identity on valid configurations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eps::EventuallyPeriodicSet;
use crate::fiber::{
    BranchRef, ComponentRecord, ConfigMetadata, DegreeSetSpec, InteriorSpec, MarkedPoint,
    ResidueFieldClass, SpecialFiberConfig,
};
use crate::finitefield::CurveCountData;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("document syntax: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("residue_field: unknown class `{0}` (expected algebraically-closed, finite or infinite-other)")]
    UnknownFieldClass(String),
    #[error("residue_field: class `finite` requires q")]
    MissingQ,
    #[error("component `{id}`: {message}")]
    Component { id: String, message: String },
    #[error("point `{id}`: {message}")]
    Point { id: String, message: String },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDocument {
    residue_field: ResidueFieldDoc,
    components: Vec<ComponentDoc>,
    points: Vec<PointDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<MetadataDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResidueFieldDoc {
    class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    id: String,
    multiplicity: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    constant_field_degree: Option<u64>,
    degree_set: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interior_degree_set: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arithmetic_genus: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointDoc {
    id: String,
    degree: u64,
    branches: Vec<BranchDoc>,
    #[serde(default = "default_true")]
    snc: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchDoc {
    component: String,
    #[serde(default = "default_count", skip_serializing_if = "is_one")]
    count: u64,
}

fn default_count() -> u64 {
    1
}

fn is_one(v: &u64) -> bool {
    *v == 1
}

#[derive(Debug, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct MetadataDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genus: Option<u64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    declared_minimal: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    hyperelliptic: bool,
}

/// Parses a configuration document. Structural soundness beyond the schema
/// (id resolution, degree-set consistency) is the business of
/// [`crate::fiber::validate`].
pub fn parse_config(text: &str) -> Result<SpecialFiberConfig, IoError> {
    let doc: ConfigDocument = serde_json::from_str(text)?;
    let residue_field = match doc.residue_field.class.as_str() {
        "algebraically-closed" => ResidueFieldClass::AlgebraicallyClosed,
        "infinite-other" => ResidueFieldClass::InfiniteOther,
        "finite" => ResidueFieldClass::Finite {
            q: doc.residue_field.q.ok_or(IoError::MissingQ)?,
        },
        other => return Err(IoError::UnknownFieldClass(other.to_string())),
    };
    let mut components = Vec::with_capacity(doc.components.len());
    for c in doc.components {
        let degree_set = parse_degree_set(&c.degree_set).map_err(|message| IoError::Component {
            id: c.id.clone(),
            message,
        })?;
        let interior_degree_set = match c.interior_degree_set.as_deref() {
            None => default_interior(&degree_set),
            Some(text) => parse_interior(text).map_err(|message| IoError::Component {
                id: c.id.clone(),
                message,
            })?,
        };
        components.push(ComponentRecord {
            id: c.id,
            multiplicity: c.multiplicity,
            constant_field_degree: c.constant_field_degree,
            degree_set,
            interior_degree_set,
            arithmetic_genus: c.arithmetic_genus,
        });
    }
    let points = doc
        .points
        .into_iter()
        .map(|p| MarkedPoint {
            id: p.id,
            degree: p.degree,
            branches: p
                .branches
                .into_iter()
                .map(|b| BranchRef {
                    component: b.component,
                    count: b.count,
                })
                .collect(),
            snc: p.snc,
        })
        .collect();
    let metadata = doc
        .metadata
        .map(|m| ConfigMetadata {
            genus: m.genus,
            declared_minimal: m.declared_minimal,
            hyperelliptic: m.hyperelliptic,
        })
        .unwrap_or_default();
    Ok(SpecialFiberConfig {
        residue_field,
        components,
        points,
        metadata,
    })
}

fn default_interior(degree_set: &DegreeSetSpec) -> InteriorSpec {
    match degree_set {
        DegreeSetSpec::FiniteField(_) => InteriorSpec::Auto,
        _ => InteriorSpec::Same,
    }
}

fn parse_degree_set(text: &str) -> Result<DegreeSetSpec, String> {
    let trimmed = text.trim();
    if trimmed.eq_ignore_ascii_case("all") {
        return Ok(DegreeSetSpec::All);
    }
    if let Some(body) = trimmed
        .strip_prefix("finite-field(")
        .and_then(|t| t.strip_suffix(')'))
    {
        return parse_finite_field_spec(body).map(DegreeSetSpec::FiniteField);
    }
    trimmed
        .parse::<EventuallyPeriodicSet>()
        .map(DegreeSetSpec::Explicit)
        .map_err(|e| e.to_string())
}

fn parse_interior(text: &str) -> Result<InteriorSpec, String> {
    let trimmed = text.trim();
    if trimmed.eq_ignore_ascii_case("same") {
        return Ok(InteriorSpec::Same);
    }
    if trimmed.eq_ignore_ascii_case("auto") {
        return Ok(InteriorSpec::Auto);
    }
    trimmed
        .parse::<EventuallyPeriodicSet>()
        .map(InteriorSpec::Explicit)
        .map_err(|e| e.to_string())
}

/// `q=7,g=0,counts=[8]` (counts may be empty for genus 0).
fn parse_finite_field_spec(body: &str) -> Result<CurveCountData, String> {
    let mut q = None;
    let mut genus = None;
    let mut counts: Option<Vec<u64>> = None;
    let mut rest = body.trim();
    while !rest.is_empty() {
        let (key, after_key) = rest
            .split_once('=')
            .ok_or_else(|| format!("expected key=value in `{rest}`"))?;
        let key = key.trim();
        let after_key = after_key.trim_start();
        let (value, remainder) = if after_key.starts_with('[') {
            let end = after_key
                .find(']')
                .ok_or_else(|| "unterminated counts list".to_string())?;
            (&after_key[..=end], after_key[end + 1..].trim_start())
        } else {
            match after_key.find(',') {
                Some(i) => (&after_key[..i], after_key[i + 1..].trim_start()),
                None => (after_key, ""),
            }
        };
        match key {
            "q" => q = Some(value.trim().parse::<u64>().map_err(|_| format!("bad q `{value}`"))?),
            "g" | "genus" => {
                genus = Some(value.trim().parse::<u64>().map_err(|_| format!("bad genus `{value}`"))?)
            }
            "counts" => {
                let inner = value
                    .trim()
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| format!("bad counts `{value}`"))?;
                let list = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner
                        .split(',')
                        .map(|t| t.trim().parse::<u64>().map_err(|_| format!("bad count `{t}`")))
                        .collect::<Result<_, _>>()?
                };
                counts = Some(list);
            }
            other => return Err(format!("unknown finite-field key `{other}`")),
        }
        rest = remainder.trim_start_matches(',').trim_start();
    }
    let q = q.ok_or("finite-field spec needs q")?;
    let genus = genus.ok_or("finite-field spec needs g")?;
    let counts = counts.unwrap_or_default();
    CurveCountData::new(q, genus, counts).map_err(|e| e.to_string())
}

fn render_degree_set(spec: &DegreeSetSpec) -> String {
    match spec {
        DegreeSetSpec::All => "all".into(),
        DegreeSetSpec::Explicit(s) => s.to_string(),
        DegreeSetSpec::FiniteField(data) => {
            let counts = data
                .counts()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("finite-field(q={},g={},counts=[{}])", data.q(), data.genus(), counts)
        }
    }
}

fn render_interior(spec: &InteriorSpec) -> String {
    match spec {
        InteriorSpec::Same => "same".into(),
        InteriorSpec::Auto => "auto".into(),
        InteriorSpec::Explicit(s) => s.to_string(),
    }
}

/// Renders a configuration as a JSON document; inverse of [`parse_config`].
pub fn render_config(cfg: &SpecialFiberConfig) -> String {
    let doc = ConfigDocument {
        residue_field: match cfg.residue_field {
            ResidueFieldClass::AlgebraicallyClosed => ResidueFieldDoc {
                class: "algebraically-closed".into(),
                q: None,
            },
            ResidueFieldClass::InfiniteOther => ResidueFieldDoc {
                class: "infinite-other".into(),
                q: None,
            },
            ResidueFieldClass::Finite { q } => ResidueFieldDoc {
                class: "finite".into(),
                q: Some(q),
            },
        },
        components: cfg
            .components
            .iter()
            .map(|c| ComponentDoc {
                id: c.id.clone(),
                multiplicity: c.multiplicity,
                constant_field_degree: c.constant_field_degree,
                degree_set: render_degree_set(&c.degree_set),
                interior_degree_set: Some(render_interior(&c.interior_degree_set)),
                arithmetic_genus: c.arithmetic_genus,
            })
            .collect(),
        points: cfg
            .points
            .iter()
            .map(|p| PointDoc {
                id: p.id.clone(),
                degree: p.degree,
                branches: p
                    .branches
                    .iter()
                    .map(|b| BranchDoc {
                        component: b.component.clone(),
                        count: b.count,
                    })
                    .collect(),
                snc: p.snc,
            })
            .collect(),
        metadata: Some(MetadataDoc {
            genus: cfg.metadata.genus,
            declared_minimal: cfg.metadata.declared_minimal,
            hyperelliptic: cfg.metadata.hyperelliptic,
        }),
    };
    serde_json::to_string_pretty(&doc).expect("document serialization cannot fail")
}

/// Output format for results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultFormat {
    Text,
    Json,
}

/// Renders a set in the chosen format: the bit-exact textual form, or a
/// JSON object mirroring the four canonical fields.
pub fn render_result(set: &EventuallyPeriodicSet, format: ResultFormat) -> String {
    match format {
        ResultFormat::Text => set.to_string(),
        ResultFormat::Json => {
            let value = serde_json::json!({
                "explicit": set.explicit_members().collect::<Vec<_>>(),
                "from": set.threshold(),
                "period": set.period(),
                "residues": set.residues().collect::<Vec<_>>(),
            });
            value.to_string()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_fixture, FixtureField, FixtureLabel, FixtureVariant};
    use crate::fiber::degree_set;

    fn eps(s: &str) -> EventuallyPeriodicSet {
        s.parse().unwrap()
    }

    const SAMPLE: &str = r#"{
        "residue_field": {"class": "finite", "q": 7},
        "components": [
            {"id": "a", "multiplicity": 2,
             "degree_set": "finite-field(q=7,g=0,counts=[8])"},
            {"id": "b", "multiplicity": 3, "degree_set": "all",
             "interior_degree_set": "same"}
        ],
        "points": [
            {"id": "x", "degree": 1,
             "branches": [{"component": "a"}, {"component": "b"}]}
        ],
        "metadata": {"genus": 2, "hyperelliptic": true}
    }"#;

    #[test]
    fn parse_sample() {
        let cfg = parse_config(SAMPLE).unwrap();
        assert_eq!(cfg.components.len(), 2);
        assert!(matches!(
            cfg.components[0].interior_degree_set,
            InteriorSpec::Auto
        ));
        assert!(matches!(
            cfg.components[1].interior_degree_set,
            InteriorSpec::Same
        ));
        assert!(cfg.points[0].snc);
        assert_eq!(cfg.metadata.genus, Some(2));
        assert_eq!(
            degree_set(&cfg).unwrap(),
            eps("2N|3N")
                .union(&eps("eps{explicit=[5,7]; from=8; period=1; residues=[0]}"))
                .unwrap()
        );
    }

    #[test]
    fn missing_components_key_is_named() {
        let err = parse_config(r#"{"residue_field": {"class": "finite", "q": 7}, "points": []}"#)
            .unwrap_err();
        assert!(err.to_string().contains("components"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config(
            r#"{"residue_field": {"class": "finite", "q": 7}, "components": [],
                "points": [], "extra": 1}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");
    }

    #[test]
    fn finite_field_spec_resolves() {
        let cfg = parse_config(
            r#"{"residue_field": {"class": "finite", "q": 3},
                "components": [{"id": "l", "multiplicity": 1,
                                "degree_set": "finite-field(q=3,g=0,counts=[4])"}],
                "points": []}"#,
        )
        .unwrap();
        assert_eq!(degree_set(&cfg).unwrap(), eps("N"));
    }

    #[test]
    fn bad_degree_set_names_the_component() {
        let err = parse_config(
            r#"{"residue_field": {"class": "finite", "q": 3},
                "components": [{"id": "l", "multiplicity": 1, "degree_set": "wat"}],
                "points": []}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("`l`"), "{err}");
    }

    #[test]
    fn fixtures_round_trip() {
        for label in FixtureLabel::ALL {
            for field in [FixtureField::Finite { q: 7 }, FixtureField::AlgebraicallyClosed] {
                let cfg = build_fixture(label, FixtureVariant::default(), field).unwrap();
                let text = render_config(&cfg);
                let back = parse_config(&text).unwrap();
                assert_eq!(back, cfg, "{label} over {field:?}");
            }
        }
        let swapped = build_fixture(
            FixtureLabel::NuIV,
            FixtureVariant { galois_swap: true },
            FixtureField::Finite { q: 7 },
        )
        .unwrap();
        let back = parse_config(&render_config(&swapped)).unwrap();
        assert_eq!(back, swapped);
    }

    #[test]
    fn render_result_forms() {
        assert_eq!(render_result(&eps("N"), ResultFormat::Text), "N");
        assert_eq!(render_result(&eps("N>=4"), ResultFormat::Text), "N>=4");
        assert_eq!(
            render_result(&eps("2N|3N"), ResultFormat::Text),
            "eps{explicit=[]; from=1; period=6; residues=[0,2,3,4]}"
        );
        let json = render_result(&eps("2N|3N"), ResultFormat::Json);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["period"], 6);
        assert_eq!(value["residues"], serde_json::json!([0, 2, 3, 4]));
    }
}
