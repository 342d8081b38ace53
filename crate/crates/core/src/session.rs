//! JSON session files: a variety, named maps on it and analysis options.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::birational::RationalMap;
use crate::error::Error;
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::groebner::Ideal;
use crate::invariants::VarietyPresentation;
use crate::monomial::MonomialOrder;
use crate::parse::parse_poly;
use crate::poly::Poly;
use crate::ring::{Limits, PolyRing, RingRef};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },

    #[error("schema error at `{path}`: {msg}")]
    Schema { path: String, msg: String },

    #[error("form `{form}` is not homogeneous of degree {degree}")]
    Homogeneity { form: String, degree: u32 },

    #[error(transparent)]
    Algebra(#[from] Error),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub degree: u32,
    pub forms: Vec<String>,
    /// A known inverse, checked on demand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// On-disk layout of a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub ideal: Vec<String>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapEntry>,
    #[serde(default)]
    pub options: SessionOptions,
}

impl SessionFile {
    pub fn from_json(text: &str) -> Result<Self, SessionError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| SessionError::Schema {
            path: e.path().to_string(),
            msg: e.inner().to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("session serializes")
    }

    pub fn limits(&self) -> Limits {
        let d = Limits::default();
        Limits {
            max_degree: self.options.max_degree.unwrap_or(d.max_degree),
            max_pairs: self.options.max_pairs.unwrap_or(d.max_pairs),
        }
    }

    /// Builds the session over the declared field.
    pub fn build(&self, limits: Limits) -> Result<AnySession, SessionError> {
        Ok(match self.field {
            FieldSpec::Rationals => AnySession::Rationals(Session::build(self, Rationals, limits)?),
            FieldSpec::PrimeField(p) => {
                let f = PrimeField::new(p).map_err(|e| SessionError::Schema {
                    path: "field".into(),
                    msg: e.to_string(),
                })?;
                AnySession::Prime(Session::build(self, f, limits)?)
            }
        })
    }
}

#[derive(Debug, Clone)]
pub struct NamedMap<F: Field> {
    pub name: String,
    pub map: RationalMap<F>,
    pub inverse: Option<RationalMap<F>>,
    pub note: Option<String>,
}

/// A parsed session over a concrete field.
#[derive(Debug, Clone)]
pub struct Session<F: Field> {
    pub name: Option<String>,
    pub variety: Arc<VarietyPresentation<F>>,
    pub maps: Vec<NamedMap<F>>,
    pub options: SessionOptions,
}

fn schema<E: std::fmt::Display>(path: impl Into<String>) -> impl FnOnce(E) -> SessionError {
    let path = path.into();
    move |e| SessionError::Schema {
        path,
        msg: e.to_string(),
    }
}

fn parse_forms<F: Field>(
    ring: &RingRef<F>,
    texts: &[String],
    degree: u32,
    path: &str,
) -> Result<Vec<Poly<F>>, SessionError> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = parse_poly(t, ring).map_err(schema(format!("{path}[{i}]")))?;
            if !p.is_zero() && p.homogeneous_degree() != Some(degree) {
                return Err(SessionError::Homogeneity {
                    form: format!("{path}[{i}]"),
                    degree,
                });
            }
            Ok(p)
        })
        .collect()
}

impl<F: Field> Session<F> {
    pub fn build(file: &SessionFile, field: F, limits: Limits) -> Result<Self, SessionError> {
        let ring = PolyRing::with_limits(field, &file.vars, MonomialOrder::GrevLex, limits)
            .map_err(schema("vars"))?;
        let gens = file
            .ideal
            .iter()
            .enumerate()
            .map(|(i, t)| parse_poly(t, &ring).map_err(schema(format!("ideal[{i}]"))))
            .collect::<Result<Vec<_>, _>>()?;
        let ideal = Ideal::new(&ring, gens)?;
        if !ideal.is_homogeneous() {
            let bad = file
                .ideal
                .iter()
                .position(|t| {
                    parse_poly(t, &ring)
                        .map(|p| !p.is_homogeneous())
                        .unwrap_or(false)
                })
                .unwrap_or(0);
            return Err(SessionError::Schema {
                path: format!("ideal[{bad}]"),
                msg: "generator is not homogeneous".into(),
            });
        }
        let variety = Arc::new(VarietyPresentation::new(&ideal)?);
        let mut maps = Vec::with_capacity(file.maps.len());
        for (name, entry) in &file.maps {
            let path = format!("maps.{name}");
            let forms = parse_forms(
                variety.ring(),
                &entry.forms,
                entry.degree,
                &format!("{path}.forms"),
            )?;
            let map = RationalMap::new(&variety, forms).map_err(schema(format!("{path}.forms")))?;
            let inverse = match &entry.inverse {
                None => None,
                Some(texts) => {
                    let deg = texts
                        .iter()
                        .filter_map(|t| parse_poly(t, variety.ring()).ok())
                        .find_map(|p| p.total_degree())
                        .unwrap_or(1);
                    let forms =
                        parse_forms(variety.ring(), texts, deg, &format!("{path}.inverse"))?;
                    Some(
                        RationalMap::new(&variety, forms)
                            .map_err(schema(format!("{path}.inverse")))?,
                    )
                }
            };
            maps.push(NamedMap {
                name: name.clone(),
                map,
                inverse,
                note: entry.note.clone(),
            });
        }
        Ok(Session {
            name: file.name.clone(),
            variety,
            maps,
            options: file.options.clone(),
        })
    }

    pub fn map(&self, name: &str) -> Option<&NamedMap<F>> {
        self.maps.iter().find(|m| m.name == name)
    }

    /// Writes the session back in canonical form.
    pub fn to_file(&self) -> SessionFile {
        let show = |ps: &[Poly<F>]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        SessionFile {
            name: self.name.clone(),
            field: self.variety.ring().field().spec(),
            vars: self.variety.ring().vars().to_vec(),
            ideal: show(self.variety.ideal().generators()),
            maps: self
                .maps
                .iter()
                .map(|m| {
                    (
                        m.name.clone(),
                        MapEntry {
                            degree: m.map.degree(),
                            forms: show(m.map.forms()),
                            inverse: m.inverse.as_ref().map(|g| show(g.forms())),
                            note: m.note.clone(),
                        },
                    )
                })
                .collect(),
            options: self.options.clone(),
        }
    }
}

/// A session over whichever field the file declares.
#[derive(Debug, Clone)]
pub enum AnySession {
    Rationals(Session<Rationals>),
    Prime(Session<PrimeField>),
}

impl AnySession {
    pub fn to_file(&self) -> SessionFile {
        match self {
            AnySession::Rationals(s) => s.to_file(),
            AnySession::Prime(s) => s.to_file(),
        }
    }
}

pub fn read_session_file(path: &Path) -> Result<SessionFile, SessionError> {
    let text = std::fs::read_to_string(path).map_err(|e| SessionError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    SessionFile::from_json(&text)
}

/// Reads and builds a session, with limits taken from its options.
pub fn load_session(path: &Path) -> Result<AnySession, SessionError> {
    let file = read_session_file(path)?;
    file.build(file.limits())
}
