//! Right-angled Artin group elements in shortlex normal form.
//!
//! A word is kept freely reduced in the RAAG sense (no letter meets its
//! inverse across a block of letters that commute with it) and, among the
//! reduced words for the same element, lexicographically least under the
//! letter order `v < v^-1 < w < w^-1 < ...` for vertices `v < w`. Reduced
//! words are geodesic, so the word length is the word-metric length.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

use crate::graph::{GraphError, SimplicialGraph, VertexLabeling};
use crate::metric::GroupOracle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RaagError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("letter refers to vertex #{0}, outside the graph")]
    VertexOutOfRange(usize),
    #[error("elements live over different graphs")]
    GraphMismatch,
    #[error("labeling has {labels} entries but the graph has {vertices} vertices")]
    LabelingMismatch { labels: usize, vertices: usize },
    #[error("cannot parse word token `{0}`")]
    BadToken(String),
}

/// A generator or its inverse, packed as `vertex << 1 | inverse`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub fn new(vertex: usize, inverse: bool) -> Self {
        debug_assert!(vertex < 128);
        Letter((vertex as u8) << 1 | inverse as u8)
    }

    pub fn vertex(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}{}", self.vertex(), if self.is_inverse() { "^-1" } else { "" })
    }
}

pub type Word = SmallVec<[Letter; 24]>;

/// Right-multiplies a normal-form word by one letter, keeping normal form.
pub fn push_letter(graph: &SimplicialGraph, word: &mut Word, s: Letter) {
    let commuting = graph.neighbors(s.vertex());
    let mut tail = word.len();
    while tail > 0 {
        let l = word[tail - 1];
        if l.vertex() == s.vertex() {
            if l == s.inverse() {
                word.remove(tail - 1);
                lex_normalize(graph, word);
                return;
            }
            break;
        }
        if !commuting.contains(l.vertex()) {
            break;
        }
        tail -= 1;
    }
    // s may sit anywhere in word[tail..]; the lex-least slot is before the
    // first larger letter.
    let pos = (tail..word.len()).find(|&k| s < word[k]).unwrap_or(word.len());
    word.insert(pos, s);
}

/// Rewrites a reduced word into the lexicographically least word for the
/// same element by repeatedly extracting the least letter that can be
/// commuted to the front.
pub fn lex_normalize(graph: &SimplicialGraph, word: &mut Word) {
    let mut rest: Word = std::mem::take(word);
    while !rest.is_empty() {
        let mut seen = 0u64;
        let mut best = 0;
        let mut have = false;
        for (i, l) in rest.iter().enumerate() {
            let v = l.vertex();
            if seen & !graph.neighbors(v).0 == 0 && (!have || *l < rest[best]) {
                best = i;
                have = true;
            }
            seen |= 1 << v;
        }
        word.push(rest.remove(best));
    }
}

/// Normal form of an arbitrary letter sequence.
pub fn normal_form(graph: &SimplicialGraph, raw: &[Letter]) -> Word {
    let mut w = Word::new();
    for &l in raw {
        push_letter(graph, &mut w, l);
    }
    w
}

pub fn invert_word(graph: &SimplicialGraph, word: &[Letter]) -> Word {
    let mut w: Word = word.iter().rev().map(|l| l.inverse()).collect();
    lex_normalize(graph, &mut w);
    w
}

/// Parses `a b^-1 c` into letters over `graph`.
pub fn parse_letters(graph: &SimplicialGraph, text: &str) -> Result<Vec<Letter>, RaagError> {
    text.split_whitespace()
        .map(|tok| {
            let (name, inverse) = match tok.strip_suffix("^-1") {
                Some(base) => (base, true),
                None => (tok, false),
            };
            if name.is_empty() || name.contains('^') {
                return Err(RaagError::BadToken(tok.to_owned()));
            }
            Ok(Letter::new(graph.require_vertex(name)?, inverse))
        })
        .collect()
}

pub fn format_letters(graph: &SimplicialGraph, word: &[Letter]) -> String {
    if word.is_empty() {
        return "1".to_owned();
    }
    word.iter()
        .map(|l| format!("{}{}", graph.name(l.vertex()), if l.is_inverse() { "^-1" } else { "" }))
        .collect::<Vec<_>>()
        .join(" ")
}

/// An element of `A_Γ` with its normal-form word.
#[derive(Clone)]
pub struct RaagElement {
    graph: Arc<SimplicialGraph>,
    word: Word,
}

impl RaagElement {
    pub fn identity(graph: &Arc<SimplicialGraph>) -> Self {
        RaagElement { graph: Arc::clone(graph), word: Word::new() }
    }

    pub fn canonicalize(graph: &Arc<SimplicialGraph>, raw: &[Letter]) -> Result<Self, RaagError> {
        if let Some(l) = raw.iter().find(|l| l.vertex() >= graph.len()) {
            return Err(RaagError::VertexOutOfRange(l.vertex()));
        }
        Ok(RaagElement { graph: Arc::clone(graph), word: normal_form(graph, raw) })
    }

    pub fn parse(graph: &Arc<SimplicialGraph>, text: &str) -> Result<Self, RaagError> {
        let raw = parse_letters(graph, text)?;
        Self::canonicalize(graph, &raw)
    }

    pub fn generator(graph: &Arc<SimplicialGraph>, name: &str) -> Result<Self, RaagError> {
        let v = graph.require_vertex(name)?;
        Ok(RaagElement { graph: Arc::clone(graph), word: smallvec::smallvec![Letter::new(v, false)] })
    }

    /// Wraps a word already known to be in normal form, such as an element
    /// of a [`RaagOracle`] ball.
    pub fn from_normal_word(graph: &Arc<SimplicialGraph>, word: Word) -> Self {
        RaagElement { graph: Arc::clone(graph), word }
    }

    pub fn graph(&self) -> &Arc<SimplicialGraph> {
        &self.graph
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn geodesic_length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    fn same_graph(&self, other: &RaagElement) -> Result<(), RaagError> {
        if Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph {
            Ok(())
        } else {
            Err(RaagError::GraphMismatch)
        }
    }

    pub fn multiply(&self, other: &RaagElement) -> Result<RaagElement, RaagError> {
        self.same_graph(other)?;
        let mut word = self.word.clone();
        for &l in &other.word {
            push_letter(&self.graph, &mut word, l);
        }
        Ok(RaagElement { graph: Arc::clone(&self.graph), word })
    }

    pub fn invert(&self) -> RaagElement {
        RaagElement { graph: Arc::clone(&self.graph), word: invert_word(&self.graph, &self.word) }
    }

    pub fn pow(&self, n: i64) -> RaagElement {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut word = Word::new();
        for _ in 0..n.unsigned_abs() {
            for &l in &base.word {
                push_letter(&self.graph, &mut word, l);
            }
        }
        RaagElement { graph: Arc::clone(&self.graph), word }
    }

    pub fn equals(&self, other: &RaagElement) -> Result<bool, RaagError> {
        self.same_graph(other)?;
        Ok(self.word == other.word)
    }
}

impl PartialEq for RaagElement {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other).unwrap_or(false)
    }
}

impl Eq for RaagElement {}

impl fmt::Display for RaagElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.graph, &self.word))
    }
}

impl fmt::Debug for RaagElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RaagElement({self})")
    }
}

/// Image of an element under the labeling homomorphism to `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianImage(pub Vec<i64>);

impl AbelianImage {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).sum()
    }
}

/// Signed label counts of a word; label `0` contributes nothing.
pub fn image_of_letters(labeling: &VertexLabeling, word: &[Letter]) -> AbelianImage {
    let mut coords = vec![0i64; labeling.dim() as usize];
    for l in word {
        let label = labeling.label(l.vertex());
        if label > 0 {
            coords[label as usize - 1] += l.sign();
        }
    }
    AbelianImage(coords)
}

pub fn evaluate_hom(labeling: &VertexLabeling, x: &RaagElement) -> Result<AbelianImage, RaagError> {
    if labeling.len() != x.graph.len() {
        return Err(RaagError::LabelingMismatch { labels: labeling.len(), vertices: x.graph.len() });
    }
    Ok(image_of_letters(labeling, &x.word))
}

pub fn in_kernel(labeling: &VertexLabeling, x: &RaagElement) -> Result<bool, RaagError> {
    evaluate_hom(labeling, x).map(|img| img.is_zero())
}

/// Cayley-graph oracle for `A_Γ` with respect to a finite list of elements
/// and their inverses.
#[derive(Clone)]
pub struct RaagOracle {
    graph: Arc<SimplicialGraph>,
    generators: Vec<(String, Word)>,
    /// Non-identity graph automorphisms, as vertex permutations; only
    /// filled for the standard generating set.
    automorphisms: Vec<Vec<usize>>,
}

impl RaagOracle {
    /// The standard generating set: every vertex and its inverse.
    pub fn standard(graph: &Arc<SimplicialGraph>) -> Self {
        let generators = (0..graph.len())
            .flat_map(|v| {
                [false, true].into_iter().map(move |inv| Letter::new(v, inv))
            })
            .map(|l| (format_letters(graph, &[l]), smallvec::smallvec![l]))
            .collect();
        let automorphisms = graph_automorphisms(graph, MAX_AUTOMORPHISMS);
        RaagOracle { graph: Arc::clone(graph), generators, automorphisms }
    }

    /// Generating set made of `elements` followed by their inverses,
    /// interleaved as `g1, g1^-1, g2, g2^-1, ...`.
    pub fn from_elements(graph: &Arc<SimplicialGraph>, elements: &[RaagElement]) -> Self {
        let mut generators = Vec::with_capacity(2 * elements.len());
        for e in elements {
            generators.push((e.to_string(), e.word.clone()));
            let inv = e.invert();
            generators.push((format!("({e})^-1"), inv.word));
        }
        RaagOracle { graph: Arc::clone(graph), generators, automorphisms: Vec::new() }
    }

    pub fn graph(&self) -> &Arc<SimplicialGraph> {
        &self.graph
    }

    /// Length-preserving automorphisms of the standard generating set that
    /// invert a single generator.
    fn invert_vertex(&self, v: usize, word: &Word) -> Word {
        let mut w: Word = word
            .iter()
            .map(|&l| if l.vertex() == v { l.inverse() } else { l })
            .collect();
        lex_normalize(&self.graph, &mut w);
        w
    }

    fn permute(&self, perm: &[usize], word: &Word) -> Word {
        let mut w: Word = word.iter().map(|&l| Letter::new(perm[l.vertex()], l.is_inverse())).collect();
        lex_normalize(&self.graph, &mut w);
        w
    }
}

/// Cap on the automorphisms collected for orbit reduction; orbits stay
/// correct with any subset, just coarser.
const MAX_AUTOMORPHISMS: usize = 64;

/// Non-identity adjacency-preserving vertex permutations, by backtracking,
/// stopping after `limit`.
pub fn graph_automorphisms(graph: &SimplicialGraph, limit: usize) -> Vec<Vec<usize>> {
    fn extend(g: &SimplicialGraph, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let v = perm.len();
        if v == g.len() {
            if perm.iter().enumerate().any(|(i, &p)| i != p) {
                out.push(perm.clone());
            }
            return;
        }
        for image in 0..g.len() {
            if used[image] || g.neighbors(v).len() != g.neighbors(image).len() {
                continue;
            }
            if (0..v).all(|u| g.adjacent(u, v) == g.adjacent(perm[u], image)) {
                used[image] = true;
                perm.push(image);
                extend(g, perm, used, out, limit);
                perm.pop();
                used[image] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(graph, &mut Vec::with_capacity(graph.len()), &mut vec![false; graph.len()], &mut out, limit);
    out
}

impl GroupOracle for RaagOracle {
    type Element = Word;

    fn identity(&self) -> Word {
        Word::new()
    }

    fn generator_count(&self) -> usize {
        self.generators.len()
    }

    fn generator_label(&self, i: usize) -> String {
        self.generators[i].0.clone()
    }

    fn generator(&self, i: usize) -> Word {
        self.generators[i].1.clone()
    }

    fn compose(&self, a: &Word, b: &Word) -> Word {
        let mut w = a.clone();
        for &l in b {
            push_letter(&self.graph, &mut w, l);
        }
        w
    }

    fn step(&self, a: &Word, i: usize) -> Word {
        self.compose(a, &self.generators[i].1)
    }

    fn symmetry_count(&self) -> usize {
        if self.is_standard() {
            self.graph.len() + self.automorphisms.len()
        } else {
            0
        }
    }

    fn apply_symmetry(&self, k: usize, x: &Word) -> Word {
        match k.checked_sub(self.graph.len()) {
            None => self.invert_vertex(k, x),
            Some(a) => self.permute(&self.automorphisms[a], x),
        }
    }
}

impl RaagOracle {
    fn is_standard(&self) -> bool {
        self.generators.len() == 2 * self.graph.len()
            && self.generators.iter().enumerate().all(|(i, (_, w))| {
                w.len() == 1 && w[0] == Letter::new(i / 2, i % 2 == 1)
            })
    }
}
