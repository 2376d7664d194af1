//! Cayley-graph oracle for a kernel over its generating set `T ∪ {killed
//! vertices}`, with exact word lengths when the kernel is free times free
//! abelian.

use std::sync::Arc;

use super::rewrite::{KernelRewriter, TWord};
use super::{kernel_generating_set, word_in_kernel, KernelError};
use crate::graph::{SimplicialGraph, VertexLabeling};
use crate::metric::{distortion_series, DistortionSeries, GroupOracle, MetricError};
use crate::raag::{Letter, RaagElement, RaagOracle, Word};

/// When the vertices with non-zero label carry a single label and span a
/// tree, and every vertex sent to zero is adjacent to all other vertices,
/// the kernel is `F(T) × Z^k`: the edge generators form a free basis of the
/// kernel of the tree's group (it has no triangles, so its kernel has no
/// relations among them) and the killed vertices are central. Word length
/// is then the free-reduced length of any `T`-word plus the killed
/// exponents.
#[derive(Debug, Clone)]
pub struct FreeTimesAbelianLength {
    rewriter: KernelRewriter,
    killed: Vec<bool>,
    pivot: usize,
}

impl FreeTimesAbelianLength {
    /// `None` when the structural conditions fail.
    pub fn detect(graph: &Arc<SimplicialGraph>, labeling: &VertexLabeling) -> Option<Self> {
        if labeling.dim() != 1 || labeling.len() != graph.len() {
            return None;
        }
        let killed_set = labeling.killed();
        let living = labeling.class(1);
        let others_adjacent = killed_set.iter().all(|v| {
            graph.all().difference(crate::graph::VertexSet::singleton(v)).is_subset(graph.neighbors(v))
        });
        let living_edges: usize = living.iter().map(|v| graph.neighbors(v).intersection(living).len()).sum::<usize>() / 2;
        let tree = graph.is_connected_within(living) && living_edges + 1 == living.len();
        if !(others_adjacent && tree) {
            return None;
        }
        let rewriter = KernelRewriter::new(graph, labeling).ok()?;
        Some(FreeTimesAbelianLength {
            rewriter,
            killed: (0..graph.len()).map(|v| killed_set.contains(v)).collect(),
            pivot: living.first()?,
        })
    }

    /// Length of a kernel element given by a normal-form word.
    pub fn length(&self, word: &[Letter]) -> Option<u32> {
        let mut central = vec![0i64; self.killed.len()];
        let mut living: Vec<Letter> = Vec::with_capacity(word.len());
        for &l in word {
            if self.killed[l.vertex()] {
                central[l.vertex()] += l.sign();
            } else {
                living.push(l);
            }
        }
        let t = self.rewriter.lemma2(self.pivot, &living, 0).ok()?;
        let reduced = free_reduce(&t);
        let abelian: u64 = central.iter().map(|e| e.unsigned_abs()).sum();
        u32::try_from(reduced.len() as u64 + abelian).ok()
    }
}

fn free_reduce(w: &TWord) -> TWord {
    let mut out = TWord::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// The kernel's Cayley graph over `T ∪ {killed vertices}` (and inverses).
#[derive(Clone)]
pub struct KernelOracle {
    inner: RaagOracle,
    hint: Option<FreeTimesAbelianLength>,
}

impl KernelOracle {
    /// `use_hint = false` forces every length to come from search.
    pub fn new(graph: &Arc<SimplicialGraph>, labeling: &VertexLabeling, use_hint: bool) -> Result<Self, KernelError> {
        let gens: Vec<RaagElement> = kernel_generating_set(graph, labeling)?.into_iter().map(|g| g.element).collect();
        let hint = if use_hint { FreeTimesAbelianLength::detect(graph, labeling) } else { None };
        Ok(KernelOracle { inner: RaagOracle::from_elements(graph, &gens), hint })
    }

    pub fn has_exact_lengths(&self) -> bool {
        self.hint.is_some()
    }
}

impl GroupOracle for KernelOracle {
    type Element = Word;

    fn identity(&self) -> Word {
        self.inner.identity()
    }

    fn generator_count(&self) -> usize {
        self.inner.generator_count()
    }

    fn generator_label(&self, i: usize) -> String {
        self.inner.generator_label(i)
    }

    fn generator(&self, i: usize) -> Word {
        self.inner.generator(i)
    }

    fn compose(&self, a: &Word, b: &Word) -> Word {
        self.inner.compose(a, b)
    }

    fn step(&self, a: &Word, i: usize) -> Word {
        self.inner.step(a, i)
    }

    fn exact_length(&self, x: &Word) -> Option<u32> {
        self.hint.as_ref().and_then(|h| h.length(x))
    }
}

/// Distortion of the kernel of `labeling` in `A_Γ` (standard generators)
/// with respect to `T ∪ {killed vertices}`.
pub fn kernel_distortion(
    graph: &Arc<SimplicialGraph>,
    labeling: &VertexLabeling,
    r_max: u32,
    budget: usize,
    use_hint: bool,
) -> Result<DistortionSeries, KernelDistortionError> {
    let s = RaagOracle::standard(graph);
    let h = KernelOracle::new(graph, labeling, use_hint)?;
    Ok(distortion_series(&s, |w: &Word| word_in_kernel(labeling, w), &h, r_max, budget)?)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelDistortionError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}
