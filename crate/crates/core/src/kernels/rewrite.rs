//! Explicit words over the edge generators `T` for the conjugates
//! `s1^n s2 s1^(-n-1)` and `s^m w s^(-m-n)`, with their length bounds.

use std::collections::HashMap;
use std::sync::Arc;

use super::{kernel_generators_t, KernelError, TGenerator};
use crate::graph::{SimplicialGraph, VertexLabeling};
use crate::raag::{Letter, RaagElement};

/// A generator of `T` (by index into [`KernelRewriter::generators`]) or its
/// inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TLetter {
    pub generator: usize,
    pub inverse: bool,
}

impl TLetter {
    pub fn inverse(self) -> Self {
        TLetter { generator: self.generator, inverse: !self.inverse }
    }
}

pub type TWord = Vec<TLetter>;

fn invert_tword(w: &[TLetter]) -> TWord {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// Rewrites conjugates of basis-subgraph letters into the edge generators
/// `T` of a kernel.
#[derive(Debug, Clone)]
pub struct KernelRewriter {
    graph: Arc<SimplicialGraph>,
    labeling: VertexLabeling,
    generators: Vec<TGenerator>,
    by_edge: HashMap<(usize, usize), usize>,
    k: u64,
}

impl KernelRewriter {
    pub fn new(graph: &Arc<SimplicialGraph>, labeling: &VertexLabeling) -> Result<Self, KernelError> {
        let generators = kernel_generators_t(graph, labeling)?;
        let by_edge = generators
            .iter()
            .enumerate()
            .map(|(i, g)| ((g.u, g.v.expect("edge generator")), i))
            .collect();
        let diameter = graph.diameter().ok_or(KernelError::DisconnectedGraph)?;
        Ok(KernelRewriter {
            graph: Arc::clone(graph),
            labeling: labeling.clone(),
            generators,
            by_edge,
            k: diameter as u64 + 2,
        })
    }

    pub fn generators(&self) -> &[TGenerator] {
        &self.generators
    }

    /// `K = diam(Γ) + 2`.
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn lemma1_bound(&self, n: i64) -> u64 {
        2 * self.k * (n.unsigned_abs() + 1)
    }

    pub fn lemma2_bound(&self, m: i64, word_len: usize, commuting: bool) -> u64 {
        let l = word_len as u64;
        if commuting {
            l
        } else {
            2 * self.k * (m.unsigned_abs() * l + l * l)
        }
    }

    /// The letter for `u v^-1` where `u`, `v` are adjacent in one class.
    fn edge_letter(&self, u: usize, v: usize) -> TLetter {
        if u < v {
            TLetter { generator: self.by_edge[&(u, v)], inverse: false }
        } else {
            TLetter { generator: self.by_edge[&(v, u)], inverse: true }
        }
    }

    fn class_of(&self, v: usize) -> Result<u32, KernelError> {
        if v >= self.graph.len() {
            return Err(crate::raag::RaagError::VertexOutOfRange(v).into());
        }
        match self.labeling.label(v) {
            0 => Err(KernelError::KilledVertex(self.graph.name(v).to_owned())),
            l => Ok(l),
        }
    }

    fn same_class(&self, a: usize, b: usize) -> Result<u32, KernelError> {
        let (la, lb) = (self.class_of(a)?, self.class_of(b)?);
        if la != lb {
            return Err(KernelError::DifferentClasses(self.graph.name(a).to_owned(), self.graph.name(b).to_owned()));
        }
        Ok(la)
    }

    /// `Π_j (u_j u_{j+1}^-1)^x` along `path`.
    fn telescope(&self, path: &[usize], x: i64, out: &mut TWord) {
        for pair in path.windows(2) {
            let letter = self.edge_letter(pair[0], pair[1]);
            let letter = if x < 0 { letter.inverse() } else { letter };
            out.extend(std::iter::repeat_n(letter, x.unsigned_abs() as usize));
        }
    }

    /// A word over `T` equal to `s1^n s2 s1^(-n-1)`, built as
    /// `(s1^n s2^-n)(s2^(n+1) s1^(-n-1))` with each factor telescoped along
    /// a shortest path from `s1` to `s2` inside their basis subgraph.
    pub fn lemma1(&self, s1: usize, s2: usize, n: i64) -> Result<TWord, KernelError> {
        let label = self.same_class(s1, s2)?;
        let class = self.labeling.class(label);
        let path = self
            .graph
            .shortest_path_within(s1, s2, class)
            .ok_or(KernelError::DisconnectedBasis(label))?;
        let mut out = TWord::new();
        self.telescope(&path, n, &mut out);
        let reversed: Vec<usize> = path.iter().rev().copied().collect();
        self.telescope(&reversed, n + 1, &mut out);
        Ok(out)
    }

    /// A word over `T` equal to `s^m w s^(-m-n)` where `n` is the exponent
    /// sum of `w`. When `s` commutes with every letter of `w` the word is
    /// `Π (s_k s^-1)^(±1)`; otherwise it chains one conjugate per letter.
    pub fn lemma2(&self, s: usize, w: &[Letter], m: i64) -> Result<TWord, KernelError> {
        for l in w {
            self.same_class(s, l.vertex())?;
        }
        let mut out = TWord::new();
        if self.commutes_with_all(s, w) {
            for l in w.iter().filter(|l| l.vertex() != s) {
                let letter = self.edge_letter(l.vertex(), s);
                out.push(if l.is_inverse() { letter.inverse() } else { letter });
            }
            return Ok(out);
        }
        let mut a = m;
        for l in w {
            if l.is_inverse() {
                out.extend(invert_tword(&self.lemma1(s, l.vertex(), a - 1)?));
                a -= 1;
            } else {
                out.extend(self.lemma1(s, l.vertex(), a)?);
                a += 1;
            }
        }
        Ok(out)
    }

    pub fn commutes_with_all(&self, s: usize, w: &[Letter]) -> bool {
        w.iter().all(|l| l.vertex() == s || self.graph.adjacent(s, l.vertex()))
    }

    /// Multiplies a `T`-word out in `A_Γ`.
    pub fn evaluate(&self, w: &[TLetter]) -> RaagElement {
        let mut letters = Vec::with_capacity(2 * w.len());
        for l in w {
            let g = &self.generators[l.generator].element;
            if l.inverse {
                letters.extend(g.invert().word().iter().copied());
            } else {
                letters.extend(g.word().iter().copied());
            }
        }
        RaagElement::canonicalize(&self.graph, &letters).expect("letters of this graph")
    }

    pub fn format(&self, w: &[TLetter]) -> String {
        if w.is_empty() {
            return "1".to_owned();
        }
        w.iter()
            .map(|l| {
                let g = self.generators[l.generator].label();
                if l.inverse {
                    format!("({g})^-1")
                } else {
                    format!("({g})")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn rewrite_lemma1(
    graph: &Arc<SimplicialGraph>,
    labeling: &VertexLabeling,
    s1: usize,
    s2: usize,
    n: i64,
) -> Result<TWord, KernelError> {
    KernelRewriter::new(graph, labeling)?.lemma1(s1, s2, n)
}

pub fn rewrite_lemma2(
    graph: &Arc<SimplicialGraph>,
    labeling: &VertexLabeling,
    s: usize,
    w: &[Letter],
    m: i64,
) -> Result<TWord, KernelError> {
    KernelRewriter::new(graph, labeling)?.lemma2(s, w, m)
}
