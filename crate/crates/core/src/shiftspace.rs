//! Cylinder calculus on the one-sided Markov shift of a {0,1} matrix.
//!
//! Points of the shift are infinite paths of the matrix graph, written as
//! vertex sequences. With no zero rows every finite path extends to an
//! infinite one, so a cylinder is empty only if its word is not a path.

use std::collections::BTreeSet;

use crate::classify::{self, TorusCorner};
use crate::error::ShiftError;
use crate::graph::DirectedGraph;
use crate::presentations::AdjacencyMatrix;
use crate::verdict::{Certificate, ContractionCert, CycleCert, Verdict};

pub const COND_CONTRACTION: &str =
    "a vertex cylinder contains a set W with T^n(W) strictly inside T^m(W) iff the vertex connects to a cycle with an exit";
pub const COND_APERIODIC: &str =
    "a vertex emits a path that is not eventually periodic iff it reaches a vertex lying on two distinct cycles";

pub fn graph_of_matrix(a: &AdjacencyMatrix) -> DirectedGraph {
    a.graph()
}

/// `Z(word)`: all infinite paths starting with `word` (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cylinder {
    pub word: Vec<usize>,
}

impl Cylinder {
    pub fn new(a: &AdjacencyMatrix, word: Vec<usize>) -> Result<Self, ShiftError> {
        if word.is_empty() {
            return Err(ShiftError::InvalidWord);
        }
        if let Some(&v) = word.iter().find(|&&v| v >= a.dim()) {
            return Err(ShiftError::UnknownVertex(v));
        }
        if word.windows(2).any(|w| !a.get(w[0], w[1])) {
            return Err(ShiftError::InvalidWord);
        }
        Ok(Self { word })
    }

    pub fn labels(&self) -> Vec<String> {
        self.word.iter().map(|&v| AdjacencyMatrix::label(v)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CylinderRelation {
    Equal,
    StrictSubset,
    StrictSuperset,
    Disjoint,
    /// Only arises between unions of cylinders.
    Incomparable,
}

fn check_rows(a: &AdjacencyMatrix) -> Result<(), ShiftError> {
    match a.zero_rows().first() {
        Some(&z) => Err(ShiftError::ZeroRow(z)),
        None => Ok(()),
    }
}

/// `T^n(Z(word))` as a set of cylinders.
pub fn shift_image(a: &AdjacencyMatrix, c: &Cylinder, n: usize) -> Result<BTreeSet<Cylinder>, ShiftError> {
    check_rows(a)?;
    let k = c.word.len();
    if n < k {
        return Ok(BTreeSet::from([Cylinder {
            word: c.word[n..].to_vec(),
        }]));
    }
    let mut frontier = BTreeSet::from([*c.word.last().expect("nonempty word")]);
    for _ in 0..(n - k + 1) {
        frontier = frontier.iter().flat_map(|&v| a.successors(v)).collect();
    }
    Ok(frontier.into_iter().map(|j| Cylinder { word: vec![j] }).collect())
}

/// True when every path extending the shorter word is forced along the
/// longer one, i.e. each step past the prefix has no alternative.
fn forced_extension(a: &AdjacencyMatrix, long: &[usize], prefix: usize) -> bool {
    (prefix - 1..long.len() - 1).all(|i| a.successors(long[i]).count() == 1)
}

pub fn cylinder_compare(a: &AdjacencyMatrix, c1: &Cylinder, c2: &Cylinder) -> CylinderRelation {
    let (b, g) = (&c1.word, &c2.word);
    if b.len() >= g.len() && b.starts_with(g) {
        if forced_extension(a, b, g.len()) {
            CylinderRelation::Equal
        } else {
            CylinderRelation::StrictSubset
        }
    } else if g.len() > b.len() && g.starts_with(b) {
        if forced_extension(a, g, b.len()) {
            CylinderRelation::Equal
        } else {
            CylinderRelation::StrictSuperset
        }
    } else {
        CylinderRelation::Disjoint
    }
}

/// All paths of exactly `len` vertices starting with the cylinder's word.
fn refine(a: &AdjacencyMatrix, c: &Cylinder, len: usize) -> BTreeSet<Vec<usize>> {
    let mut words = BTreeSet::from([c.word.clone()]);
    while words.iter().next().is_some_and(|w| w.len() < len) {
        words = words
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().expect("nonempty");
                a.successors(last).map(move |j| {
                    let mut x = w.clone();
                    x.push(j);
                    x
                })
            })
            .collect();
    }
    words
}

/// Compares unions of cylinders by refining both to words of one length.
pub fn union_compare(a: &AdjacencyMatrix, u1: &BTreeSet<Cylinder>, u2: &BTreeSet<Cylinder>) -> CylinderRelation {
    let len = u1.iter().chain(u2).map(|c| c.word.len()).max().unwrap_or(1);
    let w1: BTreeSet<Vec<usize>> = u1.iter().flat_map(|c| refine(a, c, len)).collect();
    let w2: BTreeSet<Vec<usize>> = u2.iter().flat_map(|c| refine(a, c, len)).collect();
    if w1 == w2 {
        CylinderRelation::Equal
    } else if w1.is_subset(&w2) {
        CylinderRelation::StrictSubset
    } else if w2.is_subset(&w1) {
        CylinderRelation::StrictSuperset
    } else if w1.is_disjoint(&w2) {
        CylinderRelation::Disjoint
    } else {
        CylinderRelation::Incomparable
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionWitness {
    pub w: Cylinder,
    pub n: usize,
    pub m: usize,
}

impl ContractionWitness {
    pub fn cert(&self, v: usize) -> ContractionCert {
        ContractionCert {
            vertex: AdjacencyMatrix::label(v),
            word: self.w.labels(),
            n: self.n,
            m: self.m,
        }
    }
}

/// `T^n(W)` strictly inside `T^m(W)`, checked on refined words.
pub fn verify_contraction(a: &AdjacencyMatrix, w: &ContractionWitness) -> bool {
    if w.n == w.m {
        return false;
    }
    let (Ok(x), Ok(y)) = (shift_image(a, &w.w, w.n), shift_image(a, &w.w, w.m)) else {
        return false;
    };
    union_compare(a, &x, &y) == CylinderRelation::StrictSubset
}

/// With `alpha` a path from `v` to the base `w` of a cycle `gamma` with an
/// exit, `W = Z(alpha gamma w)`, `n = |alpha|`, `m = |alpha| + |gamma|`:
/// then `T^n(W) = Z(gamma w)` sits strictly inside `T^m(W) = Z(w)`.
pub fn contraction_witness(a: &AdjacencyMatrix, v: usize) -> Result<ContractionWitness, ShiftError> {
    check_rows(a)?;
    if v >= a.dim() {
        return Err(ShiftError::UnknownVertex(v));
    }
    let g = a.graph();
    let comps = g.strongly_connected_components();
    let good = |x: usize| g.component_cycles_have_exit(&comps, comps.component_of[x]);
    let alpha = g.path_to(v, good, |_| true).ok_or(ShiftError::NoExitCycle(v))?;
    let base = alpha.last().map_or(v, |&e| g.edge(e).range);
    let gamma = g.cycle_through(base, &comps).expect("nontrivial component");
    debug_assert!(g.cycle_has_exit(&gamma));
    let mut word: Vec<usize> = alpha.iter().map(|&e| g.edge(e).source).collect();
    word.extend(&gamma.vertices);
    word.push(base);
    let out = ContractionWitness {
        w: Cylinder { word },
        n: alpha.len(),
        m: alpha.len() + gamma.len(),
    };
    if !verify_contraction(a, &out) {
        return Err(ShiftError::NoExitCycle(v));
    }
    Ok(out)
}

pub fn contraction_verdict(a: &AdjacencyMatrix) -> Verdict {
    if let Some(&z) = a.zero_rows().first() {
        return Verdict::unknown(COND_CONTRACTION, format!("matrix has a zero row at index {}", z + 1));
    }
    let mut witnesses = Vec::new();
    for v in 0..a.dim() {
        match contraction_witness(a, v) {
            Ok(w) => witnesses.push(w.cert(v)),
            Err(_) => {
                let cert = classify::exit_obstruction(&a.graph()).unwrap_or(Certificate::Refusal {
                    reason: format!("vertex {} reaches no cycle with an exit", v + 1),
                });
                return Verdict::no(COND_CONTRACTION, cert);
            }
        }
    }
    Verdict::yes(COND_CONTRACTION, Certificate::Contractions { witnesses })
}

#[derive(Clone, Debug)]
pub struct MarkovReport {
    pub af: Verdict,
    pub isolated_periodic: Vec<TorusCorner>,
    pub aperiodic_point: Vec<Verdict>,
}

/// Vertices on two distinct simple cycles: exactly the members of strongly
/// connected components with more edges than vertices.
fn branching_components(g: &DirectedGraph) -> Vec<bool> {
    let comps = g.strongly_connected_components();
    let mut internal = vec![0usize; comps.count()];
    for e in g.edges() {
        let c = comps.component_of[e.source];
        if comps.component_of[e.range] == c {
            internal[c] += 1;
        }
    }
    (0..g.vertex_count())
        .map(|v| {
            let c = comps.component_of[v];
            internal[c] > comps.members[c].len()
        })
        .collect()
}

pub fn aperiodic_points(g: &DirectedGraph) -> Vec<bool> {
    let rich = branching_components(g);
    let targets: Vec<usize> = (0..g.vertex_count()).filter(|&v| rich[v]).collect();
    g.reaching_set(targets)
}

pub fn markov_classify(a: &AdjacencyMatrix) -> Result<MarkovReport, ShiftError> {
    check_rows(a)?;
    let g = a.graph();
    let af = classify::is_af_matrix(a);
    let isolated_periodic = classify::torus_corners(&g);
    let rich = branching_components(&g);
    let comps = g.strongly_connected_components();
    let aperiodic = aperiodic_points(&g);
    let aperiodic_point = (0..g.vertex_count())
        .map(|v| {
            if !aperiodic[v] {
                return Verdict::no(
                    COND_APERIODIC,
                    Certificate::Exhaustive {
                        search: "components with more edges than vertices reachable from the vertex".into(),
                        depth: 0,
                    },
                );
            }
            let path = g.path_to(v, |x| rich[x], |_| true).expect("reaches a rich vertex");
            let w = path.last().map_or(v, |&e| g.edge(e).range);
            let c = g.cycle_through(w, &comps).expect("nontrivial");
            Verdict::yes(
                COND_APERIODIC,
                Certificate::Cycle {
                    cycle: CycleCert::of(&g, &c),
                    has_exit: Some(true),
                },
            )
        })
        .collect();
    Ok(MarkovReport {
        af,
        isolated_periodic,
        aperiodic_point,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    fn mat(s: &str) -> AdjacencyMatrix {
        let rows = s
            .lines()
            .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
            .collect();
        AdjacencyMatrix::from_rows(rows).unwrap()
    }

    fn cyl(a: &AdjacencyMatrix, w: &[usize]) -> Cylinder {
        Cylinder::new(a, w.iter().map(|x| x - 1).collect()).unwrap()
    }

    #[test]
    fn images() {
        let a = mat("1 1\n1 1\n");
        let c = cyl(&a, &[1, 2]);
        assert_eq!(shift_image(&a, &c, 1).unwrap(), BTreeSet::from([cyl(&a, &[2])]));
        let z1 = cyl(&a, &[1]);
        assert_eq!(shift_image(&a, &z1, 1).unwrap(), BTreeSet::from([cyl(&a, &[1]), cyl(&a, &[2])]));
        assert_eq!(shift_image(&a, &c, 0).unwrap(), BTreeSet::from([c.clone()]));
    }

    #[test]
    fn compare() {
        let a = mat("1 1\n1 1\n");
        assert_eq!(cylinder_compare(&a, &cyl(&a, &[1, 2]), &cyl(&a, &[1])), CylinderRelation::StrictSubset);
        assert_eq!(cylinder_compare(&a, &cyl(&a, &[1]), &cyl(&a, &[1])), CylinderRelation::Equal);
        assert_eq!(cylinder_compare(&a, &cyl(&a, &[1]), &cyl(&a, &[2])), CylinderRelation::Disjoint);
        let b = mat("0 1\n1 0\n");
        assert_eq!(cylinder_compare(&b, &cyl(&b, &[1, 2]), &cyl(&b, &[1])), CylinderRelation::Equal);
    }

    #[test]
    fn witnesses() {
        let a = mat("1 1\n1 1\n");
        let w = contraction_witness(&a, 0).unwrap();
        assert_eq!(w.w.word, vec![0, 0]);
        assert_eq!((w.n, w.m), (0, 1));
        let b = mat("0 1\n1 1\n");
        // Vertex 1 already lies on the cycle 1 -> 2 -> 1, which exits at 2.
        let w = contraction_witness(&b, 0).unwrap();
        assert_eq!(w.w.word, vec![0, 1, 0]);
        assert_eq!((w.n, w.m), (0, 2));
        assert!(verify_contraction(&b, &w));
        // The hand-built witness W = Z(1,2,2), n = 1, m = 2 also verifies.
        let hand = ContractionWitness { w: cyl(&b, &[1, 2, 2]), n: 1, m: 2 };
        assert!(verify_contraction(&b, &hand));
        assert_eq!(contraction_witness(&mat("1\n"), 0), Err(ShiftError::NoExitCycle(0)));
    }

    #[test]
    fn classify_examples() {
        let r = markov_classify(&mat("1 1\n1 1\n")).unwrap();
        assert!(r.af.is_no());
        assert!(r.isolated_periodic.is_empty());
        assert!(r.aperiodic_point.iter().all(|v| v.is_yes()));
        let r = markov_classify(&mat("1 0\n0 1\n")).unwrap();
        assert_eq!(r.isolated_periodic.len(), 2);
        assert!(r.aperiodic_point.iter().all(|v| v.is_no()));
        assert!(markov_classify(&mat("0 1 1\n0 0 1\n0 0 0\n")).is_err());
        let r = markov_classify(&mat("0 1 1\n0 0 1\n0 0 1\n")).unwrap();
        assert!(r.af.is_no());
    }
}
