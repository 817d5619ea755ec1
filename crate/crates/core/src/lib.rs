//! Decision procedures, with re-checkable certificates, for structural
//! properties of graph C*-algebras: AF-ness, pure infiniteness, stability,
//! unitality of quotients, the hereditary saturated lattice, graph-trace
//! existence and local contraction on the associated Markov shift.
//!
//! Inputs are finite directed graphs, {0,1} matrices, or periodic
//! presentations of locally finite infinite graphs (see [`presentations`]).

pub mod classify;
pub mod dot;
pub mod error;
pub mod exact_lp;
pub mod graph;
pub mod ideals;
pub mod perron;
pub mod periodic;
pub mod presentations;
pub mod report;
pub mod shiftspace;
pub mod traces;
pub mod verdict;
pub mod verify;

pub use error::{GraphError, IdealError, LpError, ParseError, ShiftError, VerifyError};
pub use graph::{Cycle, DegreeProfile, DirectedGraph, Path};
pub use presentations::{AdjacencyMatrix, GraphClass, Parsed, PeriodicPresentation};
pub use verdict::{Certificate, Verdict, VerdictValue};

pub type Rational = num_rational::BigRational;

/// Limits shared by the decision procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Copies of the block explored by periodic searches; `None` picks a
    /// depth from the presentation size.
    pub depth: Option<u32>,
    pub cycle_cap: usize,
    pub lattice_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            depth: None,
            cycle_cap: graph::DEFAULT_CYCLE_CAP,
            lattice_cap: ideals::DEFAULT_LATTICE_CAP,
        }
    }
}
