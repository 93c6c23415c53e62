//! JSON spec files describing a user-defined action.
//!
//! ```json
//! { "moduli": [2, 2, 2],
//!   "states": {"predicate": "even_weight"},
//!   "generators": [
//!     {"label": "cross(2,3)", "perm": [1, 3, 2], "units": [1, 1, 1], "twist": [0, 1, 1]}
//!   ],
//!   "description": "sl-so p=2 q=1" }
//! ```
//!
//! `perm` lists 1-based images; `states` is exactly one of
//! `{"generators": [[...], ...]}`, `{"predicate": "even_weight"}` or
//! `{"all": true}`. Unknown fields are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::abelian::{GroupElement, SubgroupSpec, TorsionGroup};
use crate::action::{TwistedAction, TwistedGenerator};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub moduli: Vec<u32>,
    pub states: StatesEntry,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatesEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub all: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub label: String,
    pub perm: Vec<usize>,
    pub units: Vec<i64>,
    pub twist: Vec<i64>,
}

fn field_error(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::ParseError {
        location: location.into(),
        message: message.into(),
    }
}

fn vector(g: &TorsionGroup, values: &[i64], location: &str) -> Result<GroupElement> {
    g.element(values).map_err(|_| {
        field_error(
            location,
            format!("expected {} entries, got {}", g.rank(), values.len()),
        )
    })
}

impl ActionFile {
    /// Serializable form of an existing action.
    pub fn from_action(action: &TwistedAction) -> Self {
        let ints = |x: &GroupElement| x.coords().iter().map(|&c| i64::from(c)).collect();
        Self {
            moduli: action.ambient().moduli().to_vec(),
            states: StatesEntry {
                generators: Some(action.states().generators().iter().map(ints).collect()),
                ..Default::default()
            },
            generators: action
                .generators()
                .iter()
                .map(|g| GeneratorEntry {
                    label: g.label().to_string(),
                    perm: g.perm().iter().map(|p| p + 1).collect(),
                    units: g.units().iter().map(|&u| i64::from(u)).collect(),
                    twist: ints(g.twist()),
                })
                .collect(),
            description: action.description().to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Builds and validates the action.
    pub fn into_action(self) -> Result<TwistedAction> {
        if self.moduli.is_empty() {
            return Err(field_error("moduli", "must list at least one modulus"));
        }
        let g = TorsionGroup::new(self.moduli.clone())
            .map_err(|e| field_error("moduli", e.to_string()))?;
        let r = g.rank();
        let states = match (&self.states.generators, &self.states.predicate, self.states.all) {
            (Some(gens), None, None) => {
                let gens = gens
                    .iter()
                    .enumerate()
                    .map(|(i, v)| vector(&g, v, &format!("states.generators[{i}]")))
                    .collect::<Result<_>>()?;
                SubgroupSpec::generated(&g, gens)?
            }
            (None, Some(pred), None) if pred == "even_weight" => {
                if self.moduli.iter().any(|&m| m != 2) {
                    return Err(field_error(
                        "states.predicate",
                        "even_weight requires every modulus to be 2",
                    ));
                }
                let gens = (1..r)
                    .map(|i| g.basis(i - 1).add(&g.basis(i)))
                    .collect::<Result<_>>()?;
                SubgroupSpec::generated(&g, gens)?
            }
            (None, Some(pred), None) => {
                return Err(field_error(
                    "states.predicate",
                    format!("unknown predicate {pred:?} (expected \"even_weight\")"),
                ))
            }
            (None, None, Some(true)) => g.full()?,
            (None, None, Some(false)) => {
                return Err(field_error("states.all", "must be true when present"))
            }
            _ => {
                return Err(field_error(
                    "states",
                    "give exactly one of \"generators\", \"predicate\", \"all\"",
                ))
            }
        };
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, entry) in self.generators.into_iter().enumerate() {
            let at = |field: &str| format!("generators[{i}].{field}");
            if entry.perm.len() != r {
                return Err(field_error(
                    at("perm"),
                    format!("expected {r} entries, got {}", entry.perm.len()),
                ));
            }
            if let Some(&bad) = entry.perm.iter().find(|&&p| p == 0 || p > r) {
                return Err(field_error(at("perm"), format!("image {bad} outside 1..={r}")));
            }
            if entry.units.len() != r {
                return Err(field_error(
                    at("units"),
                    format!("expected {r} entries, got {}", entry.units.len()),
                ));
            }
            let twist = vector(&g, &entry.twist, &at("twist"))?;
            let perm = entry.perm.iter().map(|p| p - 1).collect();
            gens.push(TwistedGenerator::new(entry.label, perm, entry.units, twist)?);
        }
        let action = TwistedAction::new(states, gens, self.description)?;
        let report = action.validate();
        if !report.ok {
            return Err(Error::ValidationFailed(report));
        }
        Ok(action)
    }
}

/// Parses and validates a spec file's contents.
pub fn parse_spec(text: &str) -> Result<TwistedAction> {
    let file: ActionFile = serde_json::from_str(text).map_err(|e| {
        field_error(format!("line {} column {}", e.line(), e.column()), e.to_string())
    })?;
    file.into_action()
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<TwistedAction> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| {
        field_error(path.display().to_string(), format!("cannot read spec file: {e}"))
    })?;
    parse_spec(&text)
}
