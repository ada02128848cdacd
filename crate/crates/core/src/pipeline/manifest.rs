//! Published reference values and the check each computed quantity faces.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MANIFEST_JSON: &str = include_str!("../../data/paper_values.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// |computed − reference| ≤ tolerance
    Abs,
    /// computed ≥ reference
    Min,
    /// computed ≤ reference
    Max,
    /// computed == reference
    Exact,
    /// Reported, never fails.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub id: String,
    pub scenario: String,
    pub quantity: String,
    /// `None` when the reference is computed at run time.
    pub reference: Option<f64>,
    pub tolerance: Option<f64>,
    pub kind: CheckKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PublishedValues {
    pub fidelity_pulsed: f64,
    pub fidelity_cw: f64,
    pub chsh_pulsed: f64,
    pub chsh_cw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub published: PublishedValues,
    pub rows: Vec<ManifestRow>,
}

impl Manifest {
    pub fn row(&self, id: &str) -> Result<&ManifestRow> {
        self.rows
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::domain(format!("no manifest row `{id}`")))
    }

    pub fn rows_for<'a>(&'a self, scenario: &'a str) -> impl Iterator<Item = &'a ManifestRow> + 'a {
        self.rows.iter().filter(move |r| r.scenario == scenario)
    }
}

/// The manifest compiled into the crate.
pub fn manifest() -> &'static Manifest {
    static M: OnceLock<Manifest> = OnceLock::new();
    M.get_or_init(|| serde_json::from_str(MANIFEST_JSON).expect("embedded manifest is valid JSON"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

/// One computed quantity next to its reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub quantity: String,
    pub computed: f64,
    pub reference: Option<f64>,
    pub tolerance: Option<f64>,
    pub kind: CheckKind,
    pub status: Status,
}

impl Check {
    /// Evaluates `computed` against manifest row `id`. `derived` supplies
    /// the reference for rows whose reference is computed at run time.
    pub fn evaluate(id: &str, computed: f64, derived: Option<f64>) -> Result<Check> {
        let row = manifest().row(id)?;
        let reference = row.reference.or(derived);
        let status = match (row.kind, reference) {
            (CheckKind::Info, _) => Status::Info,
            (_, None) => return Err(Error::domain(format!("check `{id}` has no reference"))),
            (kind, Some(r)) => {
                let ok = match kind {
                    CheckKind::Abs => (computed - r).abs() <= row.tolerance.unwrap_or(0.0),
                    CheckKind::Min => computed >= r,
                    CheckKind::Max => computed <= r,
                    CheckKind::Exact => computed == r,
                    CheckKind::Info => unreachable!(),
                };
                if ok && computed.is_finite() {
                    Status::Pass
                } else {
                    Status::Fail
                }
            }
        };
        Ok(Check {
            id: id.to_string(),
            quantity: row.quantity.clone(),
            computed,
            reference,
            tolerance: row.tolerance,
            kind: row.kind,
            status,
        })
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}
