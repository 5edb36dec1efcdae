//! JSON and DOT serialization for posets.
//!
//! The JSON document stores labels and the cover relation only; the reader
//! rebuilds the full order as the reflexive-transitive closure, so files
//! stay small and cannot encode an inconsistent relation. Covers are
//! written in lexicographic order, making output byte-deterministic. An
//! optional layer block carries a sign vector and lift pairs alongside the
//! poset.

use crate::layered::LayerStructure;
use crate::poset::{FinitePoset, PosetError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("layer block refers to element {index} of a {size}-element poset")]
    LayerIndex { index: usize, size: usize },
}

/// On-disk form of a poset: labels plus covering pairs `[lower, upper]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetDoc {
    pub labels: Vec<String>,
    pub covers: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layer: Option<LayerDoc>,
}

/// On-disk form of a layer: one sign per element and the lift pairs
/// `[lower, upper]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerDoc {
    pub sign: Vec<i8>,
    pub lift: Vec<(usize, usize)>,
}

/// Captures `p` (and optionally a layer) as a document, covers sorted
/// lexicographically.
pub fn to_doc(p: &FinitePoset, layer: Option<&LayerStructure>) -> PosetDoc {
    PosetDoc {
        labels: (0..p.len()).map(|i| p.label(i).to_string()).collect(),
        covers: p.cover_pairs(),
        layer: layer.map(|l| LayerDoc {
            sign: l.sign.clone(),
            lift: l.lift.iter().map(|(&a, &b)| (a, b)).collect(),
        }),
    }
}

/// Rebuilds the poset (and layer, if present) from a document. The order is
/// the closure of the listed covers; cycles and bad indices are rejected.
/// The layer is checked for index bounds only, not for the layer axioms.
pub fn from_doc(doc: &PosetDoc) -> Result<(FinitePoset, Option<LayerStructure>), IoError> {
    let p = FinitePoset::from_cover_relations(doc.labels.clone(), &doc.covers)?;
    let layer = match &doc.layer {
        None => None,
        Some(l) => {
            for &(a, b) in &l.lift {
                for i in [a, b] {
                    if i >= p.len() {
                        return Err(IoError::LayerIndex { index: i, size: p.len() });
                    }
                }
            }
            Some(LayerStructure {
                sign: l.sign.clone(),
                lift: l.lift.iter().copied().collect(),
            })
        }
    };
    Ok((p, layer))
}

/// Serializes a poset document to pretty JSON.
pub fn write_poset_json(p: &FinitePoset, layer: Option<&LayerStructure>) -> String {
    serde_json::to_string_pretty(&to_doc(p, layer)).expect("documents always serialize")
}

/// Parses JSON into a poset and optional layer.
pub fn read_poset_json(text: &str) -> Result<(FinitePoset, Option<LayerStructure>), IoError> {
    let doc: PosetDoc = serde_json::from_str(text)?;
    from_doc(&doc)
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the Hasse diagram in DOT, drawn bottom to top. When the poset is
/// graded, elements of equal rank are pinned to the same level.
pub fn to_dot(p: &FinitePoset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=box];\n");
    for x in 0..p.len() {
        out.push_str(&format!("  {} [label=\"{}\"];\n", x, escape(p.label(x))));
    }
    if let Ok(ranks) = p.grading() {
        let lo = ranks.values.iter().copied().min().unwrap_or(0);
        let hi = ranks.values.iter().copied().max().unwrap_or(0);
        for r in lo..=hi {
            let level: Vec<String> = (0..p.len())
                .filter(|&x| ranks.values[x] == r)
                .map(|x| x.to_string())
                .collect();
            if !level.is_empty() {
                out.push_str(&format!("  {{ rank=same; {}; }}\n", level.join("; ")));
            }
        }
    }
    for (a, b) in p.cover_pairs() {
        out.push_str(&format!("  {a} -> {b};\n"));
    }
    out.push_str("}\n");
    out
}
