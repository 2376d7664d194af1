//! Kernels of label-induced homomorphisms `A_Γ → Z^d` (generalized
//! Bestvina–Brady subgroups): finite generation, strong and special
//! classes, the edge generating set, rewriting into it, predicted
//! distortion, and the hypotheses of the decomposition upper bound.

mod lattice;
mod oracle;
mod rewrite;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Domination, GraphError, SimplicialGraph, VertexLabeling, VertexSet};
use crate::raag::{Letter, RaagElement, RaagError, Word};

pub use lattice::{lattice_index, LatticeIndex, LatticeIndexResult};
pub use oracle::{kernel_distortion, FreeTimesAbelianLength, KernelDistortionError, KernelOracle};
pub use rewrite::{rewrite_lemma1, rewrite_lemma2, KernelRewriter, TLetter, TWord};

/// Largest label count for which every subset of basis subgraphs is tried.
pub const MAX_SUBSET_SEARCH_DIM: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Raag(#[from] RaagError),
    #[error("kernel is not finitely generated (basis subgraph {witness} fails)")]
    NotFinitelyGenerated { witness: u32 },
    #[error("labeling dimension {0} exceeds the subset search limit of {MAX_SUBSET_SEARCH_DIM}")]
    TooManyLabels(u32),
    #[error("both a linear and a quadratic criterion fired: {0}")]
    Inconsistent(String),
    #[error("vertices `{0}` and `{1}` lie in different label classes")]
    DifferentClasses(String, String),
    #[error("vertex `{0}` is sent to zero and lies in no basis subgraph")]
    KilledVertex(String),
    #[error("basis subgraph {0} is disconnected")]
    DisconnectedBasis(u32),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("expected vectors of dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("lattice dimension must be positive, got {0}")]
    InvalidDimension(usize),
    #[error("lattice index does not fit in 64 bits")]
    IndexOverflow,
    #[error("collection member {0} is empty")]
    EmptyMember(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Strength {
    NotApplicable,
    Plain,
    Strong,
    Special,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelClassification {
    pub finitely_generated: bool,
    /// First label whose basis subgraph is disconnected or not dominating.
    pub witness: Option<u32>,
    pub strength: Strength,
    pub reasons: Vec<String>,
}

/// Finite generation holds iff every basis subgraph is connected and
/// dominating; the strength is the weakest domination class among them.
pub fn classify_kernel(graph: &SimplicialGraph, labeling: &VertexLabeling) -> Result<KernelClassification, KernelError> {
    check_labeling(graph, labeling)?;
    let mut witness = None;
    let mut weakest = Domination::SpeciallyDominating;
    let mut reasons = Vec::new();
    for i in 1..=labeling.dim() {
        let class = labeling.class(i);
        let connected = graph.is_connected_within(class);
        let dom = graph.domination_class(class)?;
        weakest = weakest.min(dom);
        if !connected {
            reasons.push(format!("basis subgraph {i} is disconnected"));
        }
        if dom == Domination::NotDominating {
            let lonely: Vec<String> = graph
                .all()
                .difference(class)
                .iter()
                .filter(|&v| graph.neighbors(v).intersection(class).is_empty())
                .map(|v| graph.name(v).to_owned())
                .collect();
            reasons.push(format!("basis subgraph {i} is not dominating: {lonely:?} have no neighbour in it"));
        }
        if (!connected || dom == Domination::NotDominating) && witness.is_none() {
            witness = Some(i);
        }
    }
    let finitely_generated = witness.is_none();
    let strength = if !finitely_generated {
        Strength::NotApplicable
    } else {
        match weakest {
            Domination::SpeciallyDominating => Strength::Special,
            Domination::StronglyDominating => Strength::Strong,
            _ => Strength::Plain,
        }
    };
    if finitely_generated {
        reasons.push(format!("every basis subgraph is connected; weakest domination {weakest:?}"));
    }
    Ok(KernelClassification { finitely_generated, witness, strength, reasons })
}

fn check_labeling(graph: &SimplicialGraph, labeling: &VertexLabeling) -> Result<(), KernelError> {
    if labeling.len() != graph.len() {
        return Err(RaagError::LabelingMismatch { labels: labeling.len(), vertices: graph.len() }.into());
    }
    Ok(())
}

/// An edge generator `u v^-1` with `u < v` adjacent in one basis subgraph,
/// or a single vertex sent to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TGenerator {
    pub u: usize,
    pub v: Option<usize>,
    pub element: RaagElement,
}

impl TGenerator {
    pub fn label(&self) -> String {
        self.element.to_string()
    }
}

/// The set `T`: one element `u v^-1` per edge inside a basis subgraph,
/// listed by `(u, v)` in vertex order.
pub fn kernel_generators_t(graph: &Arc<SimplicialGraph>, labeling: &VertexLabeling) -> Result<Vec<TGenerator>, KernelError> {
    check_labeling(graph, labeling)?;
    let mut out = Vec::new();
    for u in 0..graph.len() {
        let label = labeling.label(u);
        if label == 0 {
            continue;
        }
        for v in graph.neighbors(u).iter().filter(|&v| v > u && labeling.label(v) == label) {
            let raw = [Letter::new(u, false), Letter::new(v, true)];
            out.push(TGenerator { u, v: Some(v), element: RaagElement::canonicalize(graph, &raw)? });
        }
    }
    Ok(out)
}

/// `T` together with every vertex labelled `0`; this is the generating set
/// used for distortion experiments.
pub fn kernel_generating_set(graph: &Arc<SimplicialGraph>, labeling: &VertexLabeling) -> Result<Vec<TGenerator>, KernelError> {
    let mut gens = kernel_generators_t(graph, labeling)?;
    for u in labeling.killed().iter() {
        gens.push(TGenerator { u, v: None, element: RaagElement::canonicalize(graph, &[Letter::new(u, false)])? });
    }
    Ok(gens)
}

/// Membership in the kernel for a normal-form word.
pub fn word_in_kernel(labeling: &VertexLabeling, word: &Word) -> bool {
    crate::raag::image_of_letters(labeling, word).is_zero()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum DistortionVerdict {
    Unknown,
    AtMostQuadratic,
    Quadratic,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistortionPrediction {
    pub verdict: DistortionVerdict,
    pub reason: String,
}

fn class_union(labeling: &VertexLabeling, mask: u32) -> VertexSet {
    (1..=labeling.dim())
        .filter(|i| mask >> (i - 1) & 1 == 1)
        .fold(VertexSet::EMPTY, |acc, i| acc.union(labeling.class(i)))
}

/// Distortion class provable from the criteria for strong and special
/// kernels.
///
/// Quadratic: strong, and some non-empty set of basis subgraphs generates a
/// subgraph with at least two vertices that is not a join. Linear: special,
/// or strong with every basis subgraph a join and every pair commuting.
/// Labelings that send vertices to zero fall outside these criteria; with a
/// single label they get the at-most-quadratic bound of the living-subgraph
/// criterion.
pub fn predict_distortion(graph: &SimplicialGraph, labeling: &VertexLabeling) -> Result<DistortionPrediction, KernelError> {
    let cls = classify_kernel(graph, labeling)?;
    if let Some(witness) = cls.witness {
        return Err(KernelError::NotFinitelyGenerated { witness });
    }
    let d = labeling.dim();
    if d > MAX_SUBSET_SEARCH_DIM {
        return Err(KernelError::TooManyLabels(d));
    }
    if !labeling.killed().is_empty() {
        let (verdict, reason) = if d == 1 {
            (
                DistortionVerdict::AtMostQuadratic,
                "living subgraph is connected and its star contains every vertex: at most quadratic".to_owned(),
            )
        } else {
            (DistortionVerdict::Unknown, "some vertices are sent to zero; no criterion applies".to_owned())
        };
        return Ok(DistortionPrediction { verdict, reason });
    }
    if cls.strength < Strength::Strong {
        return Ok(DistortionPrediction {
            verdict: DistortionVerdict::Unknown,
            reason: "kernel is finitely generated but not strong; no criterion applies".to_owned(),
        });
    }

    let quadratic = (1u32..1 << d).find(|&mask| {
        let union = class_union(labeling, mask);
        union.len() >= 2 && graph.join_parts_within(union).is_none()
    });
    let special = cls.strength == Strength::Special;
    let classes: Vec<VertexSet> = (1..=d).map(|i| labeling.class(i)).collect();
    let all_joins = classes.iter().all(|&c| graph.join_parts_within(c).is_some());
    let all_commute = classes.iter().enumerate().all(|(i, &a)| {
        classes[i + 1..].iter().all(|&b| graph.subgraphs_commute(a, b).unwrap_or(false))
    });
    let linear_reason = if special {
        Some("kernel is special".to_owned())
    } else if all_joins && all_commute {
        Some("strong; every basis subgraph is a join and each pair commutes".to_owned())
    } else {
        None
    };
    let quadratic_reason = quadratic.map(|mask| {
        let labels: Vec<u32> = (1..=d).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        format!("strong; basis subgraphs {labels:?} generate a non-join subgraph")
    });
    match (linear_reason, quadratic_reason) {
        (Some(l), Some(q)) => Err(KernelError::Inconsistent(format!("{l}; {q}"))),
        (Some(reason), None) => Ok(DistortionPrediction { verdict: DistortionVerdict::Linear, reason }),
        (None, Some(reason)) => Ok(DistortionPrediction { verdict: DistortionVerdict::Quadratic, reason }),
        (None, None) => Ok(DistortionPrediction {
            verdict: DistortionVerdict::AtMostQuadratic,
            reason: "strong kernel: at most quadratic; neither sharper criterion fires".to_owned(),
        }),
    }
}

/// Machine-readable summary for one graph and labeling.
#[derive(Debug, Clone, Serialize)]
pub struct BbReport {
    pub finitely_generated: bool,
    pub strength: Strength,
    pub prediction: Option<DistortionVerdict>,
    pub reasons: Vec<String>,
}

pub fn bb_report(graph: &SimplicialGraph, labeling: &VertexLabeling) -> Result<BbReport, KernelError> {
    let cls = classify_kernel(graph, labeling)?;
    let mut reasons = cls.reasons.clone();
    let prediction = match predict_distortion(graph, labeling) {
        Ok(p) => {
            reasons.push(p.reason);
            Some(p.verdict)
        }
        Err(KernelError::NotFinitelyGenerated { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(BbReport { finitely_generated: cls.finitely_generated, strength: cls.strength, prediction, reasons })
}

/// Restriction of a labeling to `subset`, with the labels that occur
/// re-indexed onto `1..=d'` in increasing order. Label `0` stays `0`.
pub fn restrict_labeling(
    graph: &SimplicialGraph,
    labeling: &VertexLabeling,
    subset: VertexSet,
) -> Result<(SimplicialGraph, Option<VertexLabeling>), KernelError> {
    let sub = graph.induced_subgraph(subset)?;
    let present: BTreeSet<u32> = subset.iter().map(|v| labeling.label(v)).filter(|&l| l > 0).collect();
    let present: Vec<u32> = present.into_iter().collect();
    let labels: Vec<u32> = subset
        .iter()
        .map(|v| {
            let l = labeling.label(v);
            if l == 0 {
                0
            } else {
                present.iter().position(|&p| p == l).expect("label present") as u32 + 1
            }
        })
        .collect();
    if present.is_empty() {
        return Ok((sub, None));
    }
    let restricted = VertexLabeling::new(&sub, labels, present.len() as u32)?;
    Ok((sub, Some(restricted)))
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberReport {
    pub vertices: Vec<String>,
    pub image_rank: u32,
    pub classification: KernelClassification,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theo1Report {
    pub covers_all_vertices: bool,
    pub uncovered: Vec<String>,
    pub members: Vec<MemberReport>,
    /// Pairs of members whose shared vertices map onto a finite-index
    /// sublattice of `Z^d`.
    pub links: Vec<(usize, usize)>,
    pub chain_connected: bool,
    pub failures: Vec<String>,
    pub holds: bool,
}

/// Checks the hypotheses of the decomposition bound for a collection of
/// vertex-induced sub-RAAGs: (1) the members cover the graph and each meets
/// the kernel in a finitely generated subgroup; (2) the graph on members,
/// joined when their common vertices span a finite-index sublattice, is
/// connected.
pub fn theo1_hypothesis_check(
    graph: &SimplicialGraph,
    labeling: &VertexLabeling,
    collection: &[VertexSet],
) -> Result<Theo1Report, KernelError> {
    check_labeling(graph, labeling)?;
    if let Some(i) = collection.iter().position(|s| s.is_empty()) {
        return Err(KernelError::EmptyMember(i));
    }
    let mut failures = Vec::new();
    let union = collection.iter().fold(VertexSet::EMPTY, |acc, s| acc.union(*s));
    let uncovered = graph.set_names(graph.all().difference(union));
    if !uncovered.is_empty() {
        failures.push(format!("condition (1): vertices {uncovered:?} lie in no member"));
    }

    let mut members = Vec::new();
    for (i, &subset) in collection.iter().enumerate() {
        let (sub, restricted) = restrict_labeling(graph, labeling, subset)?;
        let (classification, image_rank) = match restricted {
            Some(lab) => (classify_kernel(&sub, &lab)?, lab.dim()),
            None => (
                KernelClassification {
                    finitely_generated: true,
                    witness: None,
                    strength: Strength::NotApplicable,
                    reasons: vec!["every vertex is sent to zero; the kernel is the whole subgroup".to_owned()],
                },
                0,
            ),
        };
        if !classification.finitely_generated {
            failures.push(format!(
                "condition (1): member {i} {:?} meets the kernel in a non-finitely-generated subgroup",
                sub.names()
            ));
        }
        members.push(MemberReport { vertices: sub.names().to_vec(), image_rank, classification });
    }

    let d = labeling.dim() as usize;
    let mut links = Vec::new();
    for i in 0..collection.len() {
        for j in i + 1..collection.len() {
            let shared = collection[i].intersection(collection[j]);
            let vectors: Vec<Vec<i64>> = shared
                .iter()
                .map(|v| {
                    let mut e = vec![0i64; d];
                    let l = labeling.label(v) as usize;
                    if l > 0 {
                        e[l - 1] = 1;
                    }
                    e
                })
                .collect();
            if lattice_index(&vectors, d)?.is_finite_index() {
                links.push((i, j));
            }
        }
    }
    let mut reach = vec![false; collection.len()];
    if !reach.is_empty() {
        reach[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &links {
                if reach[a] != reach[b] {
                    reach[a] = true;
                    reach[b] = true;
                    changed = true;
                }
            }
        }
    }
    let chain_connected = reach.iter().all(|&r| r);
    if !chain_connected {
        let stranded: Vec<usize> = reach.iter().enumerate().filter(|(_, &r)| !r).map(|(i, _)| i).collect();
        failures.push(format!("condition (2): members {stranded:?} are not chained to member 0 through finite-index intersections"));
    }
    let holds = failures.is_empty();
    Ok(Theo1Report { covers_all_vertices: uncovered.is_empty(), uncovered, members, links, chain_connected, failures, holds })
}
