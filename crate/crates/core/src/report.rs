//! Dispatch of requested checks and the JSON report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classify::{self, COND_AF};
use crate::ideals;
use crate::periodic::{self, pure::COND_CORNERS};
use crate::presentations::{serialize, Format, GraphClass, Parsed};
use crate::shiftspace::{self, COND_CONTRACTION};
use crate::traces::{self, COND_TRACE};
use crate::verdict::{Certificate, Verdict};
use crate::Options;

pub const TOOL: &str = "ckdecide";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const COND_LATTICE: &str =
    "ideals invariant under gauge action correspond to hereditary saturated vertex sets, ordered by inclusion";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Af,
    Pi,
    Stable,
    Ideals,
    Traces,
    Shift,
}

impl Check {
    pub const ALL: [Check; 6] = [Check::Af, Check::Pi, Check::Stable, Check::Ideals, Check::Traces, Check::Shift];

    pub fn name(self) -> &'static str {
        match self {
            Check::Af => "af",
            Check::Pi => "pi",
            Check::Stable => "stable",
            Check::Ideals => "ideals",
            Check::Traces => "traces",
            Check::Shift => "shift",
        }
    }

    /// Report keys filled by this check.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Check::Af => &["af"],
            Check::Pi => &["purely_infinite", "torus_corners"],
            Check::Stable => &["stable", "unital_quotient"],
            Check::Ideals => &["hereditary_saturated_lattice"],
            Check::Traces => &["graph_trace"],
            Check::Shift => &["contraction_witnesses"],
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check '{s}' (expected af, pi, stable, ideals, traces, shift or all)"))
    }
}

/// Parses a comma-separated list; `all` expands to every check.
pub fn parse_checks(list: &str) -> Result<Vec<Check>, String> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item == "all" {
            out.extend(Check::ALL);
        } else {
            out.push(item.parse()?);
        }
    }
    if out.is_empty() {
        return Err("no checks requested".into());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDescriptor {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub path: Option<String>,
    pub format: String,
    /// Canonical text of the parsed input; the verifier re-parses it.
    pub canonical: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    pub input: InputDescriptor,
    pub class: GraphClass,
    pub checks: Vec<String>,
    pub options: ReportOptions,
    pub verdicts: BTreeMap<String, Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportOptions {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub depth: Option<u32>,
    pub cycle_cap: usize,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Plain-text summary, one line per verdict.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} ({} input, {})\n",
            self.input.path.as_deref().unwrap_or("<input>"),
            self.input.format,
            describe_flags(&self.class)
        );
        for (k, v) in &self.verdicts {
            out.push_str(&format!("{k:<30} {:<8} {}\n", v.value.as_str().to_uppercase(), summary(&v.certificate)));
        }
        out
    }
}

fn describe_flags(c: &GraphClass) -> String {
    let mut parts = Vec::new();
    parts.push(if c.flags.no_sinks { "no sinks" } else { "has sinks" });
    if c.flags.row_finite {
        parts.push("row-finite");
    }
    parts.join(", ")
}

fn summary(c: &Certificate) -> String {
    match c {
        Certificate::Refusal { reason } => reason.clone(),
        Certificate::TopologicalOrder { order } => format!("acyclic ({} vertices ordered)", order.len()),
        Certificate::Cycle { cycle, has_exit } => {
            let exit = match has_exit {
                Some(true) => ", with exit",
                Some(false) => ", no exit",
                None => "",
            };
            format!("cycle {}{exit}", cycle.vertices.join(" -> "))
        }
        Certificate::TorusCorners { corners } => {
            let periods: Vec<String> = corners.iter().map(|c| c.period.to_string()).collect();
            format!("{} exit-free cycle(s), periods [{}]", corners.len(), periods.join(", "))
        }
        Certificate::ExitCycles { quotients } => format!("{} quotient(s) checked", quotients.len()),
        Certificate::QuotientObstruction { removed, vertex, cycle } => format!(
            "after removing {{{}}}, {vertex} only reaches the exit-free cycle {}",
            removed.join(", "),
            cycle.vertices.join(" -> ")
        ),
        Certificate::Unital { vertex_count: 0 } => "no vertices, zero algebra".into(),
        Certificate::Unital { vertex_count } => format!("{vertex_count} vertices, algebra is unital"),
        Certificate::Trace { values } => format!("trace on {} vertices", values.len()),
        Certificate::Farkas { .. } => "no bounded trace (Farkas multipliers)".into(),
        Certificate::Lattice { sets } => format!("{} hereditary saturated sets", sets.len()),
        Certificate::Contractions { witnesses } => format!("{} witnesses", witnesses.len()),
        Certificate::LeftFiniteCycle { cycle, left_set } => format!(
            "cycle {} has {} predecessors",
            cycle.vertices.join(" -> "),
            left_set.len()
        ),
        Certificate::Exhaustive { search, depth } => format!("no {search} within {depth} copies"),
        Certificate::LeftInfinite { finite_region, .. } => {
            format!("no left-finite region carries a trace ({} finite types)", finite_region.len())
        }
        Certificate::Perron { char_poly, root_above_one, .. } => format!(
            "transfer polynomial [{}], root above one: {root_above_one}",
            char_poly.join(", ")
        ),
        Certificate::StronglyConnected { depth, .. } => format!("strongly connected from copy {depth}"),
        Certificate::Composite { parts } => {
            let keys: Vec<&str> = parts.keys().map(String::as_str).collect();
            format!("composite: {}", keys.join(", "))
        }
    }
}

fn unsupported(cond: &str, check: Check, class: &str) -> Verdict {
    Verdict::unknown(cond, format!("check '{check}' is not supported for {class} inputs"))
}

/// Marks verdicts that only say the check does not apply.
fn is_unsupported(v: &Verdict) -> bool {
    matches!(&v.certificate, Certificate::Refusal { reason } if reason.contains("is not supported for"))
}

fn class_name(input: &Parsed) -> &'static str {
    match input {
        Parsed::Finite(_) => "finite graph",
        Parsed::Matrix(_) => "matrix",
        Parsed::Periodic(_) => "periodic",
    }
}

fn run(input: &Parsed, check: Check, opts: &Options) -> Vec<(&'static str, Verdict)> {
    let cls = class_name(input);
    match (check, input) {
        (Check::Af, Parsed::Finite(g)) => vec![("af", classify::is_af(g))],
        (Check::Af, Parsed::Matrix(a)) => vec![("af", classify::is_af_matrix(a))],
        (Check::Af, Parsed::Periodic(p)) => {
            let c = periodic::realized_cycle_exists(p);
            let v = match c.value {
                crate::VerdictValue::Yes => Verdict::no(COND_AF, c.certificate),
                crate::VerdictValue::No => Verdict::yes(COND_AF, c.certificate),
                crate::VerdictValue::Unknown => Verdict::new(c.value, COND_AF, c.certificate),
            };
            vec![("af", v.with_hypotheses(&["row-finite"]))]
        }
        (Check::Pi, Parsed::Periodic(p)) => vec![
            (
                "purely_infinite",
                periodic::periodic_is_purely_infinite(p, opts.depth, opts.lattice_cap),
            ),
            ("torus_corners", periodic::periodic_torus_corners(p, opts.depth, opts.cycle_cap)),
        ],
        (Check::Pi, _) => {
            let g = input.finite_graph().expect("finite input");
            let mut corners = classify::torus_corners(&g);
            corners.truncate(opts.cycle_cap);
            let cert = classify::corners_certificate(&g, &corners);
            let tc = if corners.is_empty() {
                Verdict::no(COND_CORNERS, cert)
            } else {
                Verdict::yes(COND_CORNERS, cert)
            };
            vec![("purely_infinite", classify::is_purely_infinite(&g, opts.lattice_cap)), ("torus_corners", tc)]
        }
        (Check::Stable, _) => vec![
            ("stable", traces::is_stable(input)),
            ("unital_quotient", traces::has_unital_quotient(input)),
        ],
        (Check::Ideals, Parsed::Periodic(_)) => {
            vec![("hereditary_saturated_lattice", unsupported(COND_LATTICE, check, cls))]
        }
        (Check::Ideals, _) => {
            let g = input.finite_graph().expect("finite input");
            let v = match ideals::enumerate_hereditary_saturated(&g, opts.lattice_cap) {
                Ok(sets) => Verdict::yes(
                    COND_LATTICE,
                    Certificate::Lattice {
                        sets: sets.iter().map(|s| ideals::set_to_ids(&g, s)).collect(),
                    },
                ),
                Err(e) => Verdict::unknown(COND_LATTICE, format!("lattice enumeration stopped: {e}")),
            };
            vec![("hereditary_saturated_lattice", v)]
        }
        (Check::Traces, Parsed::Periodic(_)) => vec![("graph_trace", unsupported(COND_TRACE, check, cls))],
        (Check::Traces, _) => {
            let g = input.finite_graph().expect("finite input");
            vec![("graph_trace", traces::bounded_graph_trace(&g).0)]
        }
        (Check::Shift, Parsed::Matrix(a)) => vec![("contraction_witnesses", shiftspace::contraction_verdict(a))],
        (Check::Shift, _) => vec![("contraction_witnesses", unsupported(COND_CONTRACTION, check, cls))],
    }
}

/// Runs the checks. The flag is false when no requested check applies to
/// this class of input.
pub fn analyze(
    input: &Parsed,
    checks: &[Check],
    opts: &Options,
    format: Format,
    path: Option<&str>,
) -> (AnalysisReport, bool) {
    let mut verdicts = BTreeMap::new();
    let mut supported = false;
    for &c in checks {
        for (k, v) in run(input, c, opts) {
            supported |= !is_unsupported(&v);
            verdicts.insert(k.to_string(), v);
        }
    }
    let report = AnalysisReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        input: InputDescriptor {
            path: path.map(str::to_string),
            format: format.name().into(),
            canonical: serialize(input),
        },
        class: input.class(),
        checks: checks.iter().map(|c| c.name().to_string()).collect(),
        options: ReportOptions {
            depth: opts.depth,
            cycle_cap: opts.cycle_cap,
        },
        verdicts,
    };
    (report, supported)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse;

    #[test]
    fn check_lists() {
        assert_eq!(parse_checks("all").unwrap().len(), 6);
        assert_eq!(parse_checks("pi,af,pi").unwrap(), vec![Check::Af, Check::Pi]);
        assert!(parse_checks("af,bogus").is_err());
        assert!(parse_checks("").is_err());
    }

    #[test]
    fn o2_report() {
        let p = parse("vertex v\nedge e v v\nedge f v v\n", Format::Edgelist).unwrap();
        let (r, ok) = analyze(&p, &Check::ALL, &Options::default(), Format::Edgelist, None);
        assert!(ok);
        assert!(r.verdicts["purely_infinite"].is_yes());
        assert!(r.verdicts["af"].is_no());
        assert!(r.verdicts["stable"].is_no());
        assert!(r.verdicts["graph_trace"].is_no());
        assert!(r.verdicts["contraction_witnesses"].is_unknown());
    }

    #[test]
    fn shift_alone_on_periodic_is_unsupported() {
        let p = parse("[block]\nvertex b\n[cross]\nedge u b b +1\n", Format::Periodic).unwrap();
        let (r, ok) = analyze(&p, &[Check::Shift, Check::Traces], &Options::default(), Format::Periodic, None);
        assert!(!ok);
        assert_eq!(r.verdicts.len(), 2);
    }
}
