//! Report types and their table / JSON renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::families::Mode;
use crate::slice::SignaturePair;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema_version: String,
    pub family: FamilyInfo,
    pub mode: Mode,
    pub orbits: Vec<OrbitEntry>,
    pub counts: Counts,
    pub engine: EngineInfo,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyInfo {
    pub description: String,
    /// `"sl-so"` or `"custom"`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    pub fingerprint: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub representative: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_string: Option<String>,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical_form: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<SignaturePair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Counts {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twisted: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plain_w0: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plain_w00: Option<usize>,
}

impl Counts {
    pub fn get(&self, mode: Mode) -> Option<usize> {
        match mode {
            Mode::Twisted => self.twisted,
            Mode::PlainW0 => self.plain_w0,
            Mode::PlainW00 => self.plain_w00,
        }
    }

    pub fn set(&mut self, mode: Mode, count: usize) {
        match mode {
            Mode::Twisted => self.twisted = Some(count),
            Mode::PlainW0 => self.plain_w0 = Some(count),
            Mode::PlainW00 => self.plain_w00 = Some(count),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineInfo {
    pub engine: String,
    pub state_count: usize,
    pub runtime_ms: f64,
}

impl ClassificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Fixed-width rendering. Runtime is left out so output is reproducible.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "family: {}", self.family.description).unwrap();
        writeln!(out, "mode: {}", self.mode.as_str()).unwrap();
        writeln!(out, "states: {}", self.engine.state_count).unwrap();
        writeln!(out, "orbits: {}", self.orbits.len()).unwrap();
        let counts: Vec<String> = [Mode::Twisted, Mode::PlainW0, Mode::PlainW00]
            .into_iter()
            .filter_map(|m| self.counts.get(m).map(|c| format!("{} {c}", m.as_str())))
            .collect();
        writeln!(out, "counts: {}", counts.join(", ")).unwrap();
        writeln!(out).unwrap();

        let mut header = vec!["#", "representative"];
        let with_signs = self.orbits.iter().any(|o| o.sign_string.is_some());
        let with_canon = self.orbits.iter().any(|o| o.canonical_name.is_some());
        let with_sig = self.orbits.iter().any(|o| o.signature.is_some());
        if with_signs {
            header.push("matrix");
        }
        header.push("size");
        if with_canon {
            header.push("canonical");
        }
        if with_sig {
            header.push("signature");
        }
        let rows: Vec<Vec<String>> = self
            .orbits
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let mut row = vec![i.to_string(), coords_string(&o.representative)];
                if with_signs {
                    row.push(o.sign_string.clone().unwrap_or_default());
                }
                row.push(o.size.to_string());
                if with_canon {
                    row.push(o.canonical_name.clone().unwrap_or_default());
                }
                if with_sig {
                    row.push(
                        o.signature
                            .map(|s| format!("({},{})", s.pos, s.neg))
                            .unwrap_or_default(),
                    );
                }
                row
            })
            .collect();
        render_columns(&mut out, &header, &rows);
        out
    }
}

pub fn coords_string(c: &[u32]) -> String {
    let parts: Vec<String> = c.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

/// Left-aligned columns separated by two spaces, no trailing whitespace.
pub(crate) fn render_columns(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(cell);
            s.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
        }
        writeln!(out, "{}", s.trim_end()).unwrap();
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub twisted: usize,
    pub plain_w0: usize,
    pub plain_w00: usize,
    /// Whether the `W00` count agrees with the twisted count.
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub schema_version: String,
    pub family: String,
    pub max_n: usize,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_table(&self) -> String {
        let header = ["p", "q", "n", "twisted", "plain-w0", "plain-w00", "w00-vs-twisted"];
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.p.to_string(),
                    r.q.to_string(),
                    r.n.to_string(),
                    r.twisted.to_string(),
                    r.plain_w0.to_string(),
                    r.plain_w00.to_string(),
                    if r.matches { "match" } else { "mismatch" }.to_string(),
                ]
            })
            .collect();
        let mut out = String::new();
        render_columns(&mut out, &header, &rows);
        out
    }
}
