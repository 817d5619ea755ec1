//! Three-valued verdicts and the certificates backing them.
//!
//! Certificates only name vertices and edges by id, so a report can be
//! re-checked against a fresh parse of the same input. For periodic inputs,
//! realized vertices are written `id@copy` (stem vertices keep their id).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{Cycle, DirectedGraph};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictValue {
    Yes,
    No,
    Unknown,
}

impl VerdictValue {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictValue::Yes => "yes",
            VerdictValue::No => "no",
            VerdictValue::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCert {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
}

impl CycleCert {
    pub fn of(g: &DirectedGraph, c: &Cycle) -> Self {
        Self {
            vertices: c.vertices.iter().map(|&v| g.vertex_id(v).to_string()).collect(),
            edges: c.edges.iter().map(|&e| g.edge(e).id.clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerCert {
    pub cycle: CycleCert,
    pub period: usize,
}

/// Cycles with exits inside one quotient, reached from every remaining vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientWitness {
    pub removed: Vec<String>,
    pub exit_cycles: Vec<CycleCert>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionCert {
    pub vertex: String,
    /// Vertex word of the cylinder `W`.
    pub word: Vec<String>,
    pub n: usize,
    pub m: usize,
}

/// Weighted closed walk in the shift quotient, by edge id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientCycleCert {
    pub edges: Vec<String>,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Why no decision was made.
    Refusal { reason: String },
    /// No cycle: vertices listed so every edge goes forward.
    TopologicalOrder { order: Vec<String> },
    Cycle {
        cycle: CycleCert,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        has_exit: Option<bool>,
    },
    TorusCorners { corners: Vec<CornerCert> },
    ExitCycles { quotients: Vec<QuotientWitness> },
    /// A vertex outside a hereditary saturated set that cannot reach a
    /// cycle with an exit in the quotient; `cycle` is an exit-free cycle it
    /// reaches there.
    QuotientObstruction {
        removed: Vec<String>,
        vertex: String,
        cycle: CycleCert,
    },
    /// The vertex set is finite, so the algebra has a unit.
    Unital { vertex_count: usize },
    Trace { values: BTreeMap<String, String> },
    /// Multipliers for the trace equations (by vertex id) and for the
    /// normalization row (key `"sum"`).
    Farkas { multipliers: BTreeMap<String, String> },
    Lattice { sets: Vec<Vec<String>> },
    Contractions { witnesses: Vec<ContractionCert> },
    /// A realized cycle together with a predecessor-closed finite set
    /// containing it.
    LeftFiniteCycle { cycle: CycleCert, left_set: Vec<String> },
    /// Absence established by an exhaustive search of the realized graph
    /// up to `depth` copies, which is enough for the property searched.
    Exhaustive { search: String, depth: u32 },
    /// Every left-finite realized vertex lies outside any infinite
    /// left-finite path; `negative_cycle` generates the left-infinite part.
    LeftInfinite {
        #[serde(skip_serializing_if = "Option::is_none", default)]
        negative_cycle: Option<QuotientCycleCert>,
        finite_region: Vec<String>,
    },
    /// Transfer-matrix analysis of the left-finite periodic region.
    Perron {
        types: Vec<String>,
        matrix: Vec<Vec<String>>,
        char_poly: Vec<String>,
        root_above_one: bool,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        trace_direction: Option<Vec<String>>,
        /// Realized trace values on three consecutive copies.
        #[serde(skip_serializing_if = "Option::is_none", default)]
        sample: Option<BTreeMap<String, String>>,
    },
    /// The realized graph is strongly connected and has a cycle with an exit.
    StronglyConnected { depth: u32, exit_cycle: CycleCert },
    Composite { parts: BTreeMap<String, Certificate> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub value: VerdictValue,
    pub certificate: Certificate,
    pub paper_condition: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypotheses: Vec<String>,
}

impl Verdict {
    pub fn yes(condition: &str, certificate: Certificate) -> Self {
        Self::new(VerdictValue::Yes, condition, certificate)
    }

    pub fn no(condition: &str, certificate: Certificate) -> Self {
        Self::new(VerdictValue::No, condition, certificate)
    }

    pub fn unknown(condition: &str, reason: impl Into<String>) -> Self {
        Self::new(
            VerdictValue::Unknown,
            condition,
            Certificate::Refusal { reason: reason.into() },
        )
    }

    pub fn new(value: VerdictValue, condition: &str, certificate: Certificate) -> Self {
        Self {
            value,
            certificate,
            paper_condition: condition.to_string(),
            hypotheses: Vec::new(),
        }
    }

    pub fn with_hypotheses(mut self, hyps: &[&str]) -> Self {
        self.hypotheses = hyps.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn is_yes(&self) -> bool {
        self.value == VerdictValue::Yes
    }

    pub fn is_no(&self) -> bool {
        self.value == VerdictValue::No
    }

    pub fn is_unknown(&self) -> bool {
        self.value == VerdictValue::Unknown
    }
}

pub fn rational_string(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    s.parse().ok()
}
