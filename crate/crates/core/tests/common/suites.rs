//! Exhaustive comparisons between the library and the reference
//! implementations. Each suite returns a one-line summary on success and the
//! list of disagreements on failure.

use std::collections::HashSet;
use std::sync::Arc;

use dlab_core::fixtures::builtin;
use dlab_core::kernels::{lattice_index, LatticeIndex, TLetter};
use dlab_core::metric::explore;
use dlab_core::raag::format_letters;
use dlab_core::{Letter, RaagOracle};

use super::{graphs_up_to_isomorphism, invert_raw, raw, small_from_library, Piling, RawLetter};

pub type SuiteResult = Result<String, Vec<String>>;

fn finish(summary: String, failures: Vec<String>) -> SuiteResult {
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(failures)
    }
}

/// Normal forms against pilings on every graph with at most five vertices:
/// each ball element's normal form must have the length of its piling, the
/// normal-form-to-piling map must be injective, and both balls must have the
/// same size.
pub fn normal_forms_vs_pilings(radius: u32) -> SuiteResult {
    let mut failures = Vec::new();
    let mut graphs = 0;
    let mut elements = 0;
    for n in 1..=5 {
        for sg in graphs_up_to_isomorphism(n) {
            graphs += 1;
            let g = Arc::new(sg.to_library());
            let ball = explore(&RaagOracle::standard(&g), radius, usize::MAX);
            let reference = super::piling_ball(&sg, radius as usize);
            let mut seen = HashSet::new();
            for (word, len) in ball.iter() {
                elements += 1;
                let p = Piling::of_word(&sg, &raw(word));
                if p.length() != len as usize || word.len() != len as usize {
                    failures.push(format!(
                        "{:?}: {} has search length {len}, word length {}, piling length {}",
                        sg.edges(),
                        format_letters(&g, word),
                        word.len(),
                        p.length()
                    ));
                }
                match reference.get(&p) {
                    Some(&(ref_len, _)) if ref_len == len as usize => {}
                    other => failures.push(format!(
                        "{:?}: {} missing or misplaced in the piling ball ({other:?})",
                        sg.edges(),
                        format_letters(&g, word)
                    )),
                }
                if !seen.insert(p) {
                    failures.push(format!("{:?}: two normal forms share a piling", sg.edges()));
                }
            }
            if ball.len() != reference.len() {
                failures.push(format!("{:?}: ball sizes {} vs {}", sg.edges(), ball.len(), reference.len()));
            }
        }
    }
    finish(format!("{graphs} graphs, {elements} elements up to radius {radius}"), failures)
}

/// `lattice_index` against coset enumeration for `d = 1` (one or two
/// integers in `[-20, 20]`) and `d = 2` (one, two or three vectors with
/// entries in `[-3, 3]`), restricted to index at most 20 or infinite.
pub fn lattice_vs_cosets() -> SuiteResult {
    let mut cases: Vec<(usize, Vec<Vec<i64>>)> = Vec::new();
    for a in -20..=20i64 {
        cases.push((1, vec![vec![a]]));
        for b in -20..=20i64 {
            cases.push((1, vec![vec![a], vec![b]]));
        }
    }
    let entries: Vec<Vec<i64>> = (-3..=3i64).flat_map(|x| (-3..=3i64).map(move |y| vec![x, y])).collect();
    for u in &entries {
        cases.push((2, vec![u.clone()]));
        for v in &entries {
            cases.push((2, vec![u.clone(), v.clone()]));
        }
    }
    // three-vector spans: a fixed third vector against every pair
    for u in &entries {
        for v in &entries {
            cases.push((2, vec![u.clone(), v.clone(), vec![2, 3]]));
        }
    }
    let mut failures = Vec::new();
    let mut checked = 0;
    for (d, vectors) in &cases {
        let (rank, index) = super::coset_index(vectors, *d);
        if index.is_some_and(|i| i > 20) {
            continue;
        }
        checked += 1;
        let got = lattice_index(vectors, *d).expect("valid input");
        let expected_index = match index {
            Some(i) => LatticeIndex::Finite(i),
            None => LatticeIndex::Infinite,
        };
        if got.rank != rank || got.index != expected_index {
            failures.push(format!("{vectors:?}: got rank {} index {:?}, expected rank {rank} index {expected_index:?}", got.rank, got.index));
        }
    }
    finish(format!("{checked} spans with index ≤ 20 or infinite"), failures)
}

/// The figure graphs, each with its built-in labelling.
pub const FIGURE_GRAPHS: [&str; 8] =
    ["fig1-left", "fig1-middle", "fig1-right", "fig2-left", "fig2-middle", "fig2-right", "fig-4", "fig-a1"];

/// Expands a `T`-word into standard letters, reading each generator as
/// `u v^-1` (or `u` for a killed vertex).
fn expand(gens: &[(usize, Option<usize>)], w: &[TLetter]) -> Vec<RawLetter> {
    let mut out = Vec::new();
    for l in w {
        let (u, v) = gens[l.generator];
        let mut piece = vec![(u, 1i8)];
        if let Some(v) = v {
            piece.push((v, -1));
        }
        if l.inverse {
            piece = invert_raw(&piece);
        }
        out.extend(piece);
    }
    out
}

fn power(v: usize, n: i64) -> Vec<RawLetter> {
    let e = if n < 0 { -1 } else { 1 };
    vec![(v, e); n.unsigned_abs() as usize]
}

/// Every word of length at most `max_len` over the given vertices.
fn words(vertices: &[usize], max_len: usize) -> Vec<Vec<RawLetter>> {
    let mut all = vec![Vec::new()];
    let mut layer: Vec<Vec<RawLetter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &v in vertices {
                for e in [1i8, -1] {
                    let mut w2 = w.clone();
                    w2.push((v, e));
                    next.push(w2);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Both rewriting lemmas on every figure graph: for every ordered pair in
/// one connected basis class and `|n| ≤ 4`, the first lemma's word equals
/// `s1^n s2 s1^(-n-1)` and has length at most `2K(|n|+1)`; for every class
/// vertex `s`, every class word `w` of length at most 3 and `|m| ≤ 4`, the
/// second lemma's word equals `s^m w s^(-m-n)` (with `n` the exponent sum of
/// `w`) and has length at most `|w|` when `s` commutes with `w`, otherwise
/// `2K(|m||w| + |w|²)`. Here `K` is the graph diameter plus two, computed
/// independently.
pub fn rewrite_lemmas() -> SuiteResult {
    let mut failures = Vec::new();
    let mut checked = 0;
    for name in FIGURE_GRAPHS {
        let fx = builtin(name).expect("built-in");
        let sg = small_from_library(&fx.graph);
        let k = sg.diameter().expect("connected") as u64 + 2;
        let graph = Arc::new(fx.graph);
        let labeling = fx.labeling;
        let rewriter = match dlab_core::kernels::KernelRewriter::new(&graph, &labeling) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        let gens: Vec<(usize, Option<usize>)> = rewriter.generators().iter().map(|g| (g.u, g.v)).collect();
        let equal = |a: &[RawLetter], b: &[RawLetter]| Piling::of_word(&sg, a) == Piling::of_word(&sg, b);
        for label in 1..=labeling.dim() {
            let class: Vec<usize> = labeling.class(label).iter().collect();
            let connected = graph.is_connected_within(labeling.class(label));
            for &s1 in &class {
                for &s2 in &class {
                    for n in -4..=4i64 {
                        let result = rewriter.lemma1(s1, s2, n);
                        let word = match result {
                            Ok(w) => w,
                            Err(dlab_core::kernels::KernelError::DisconnectedBasis(_)) if !connected => continue,
                            other => {
                                failures.push(format!("{name}: lemma1({s1},{s2},{n}) gave {other:?}"));
                                continue;
                            }
                        };
                        checked += 1;
                        let target = [power(s1, n), vec![(s2, 1)], power(s1, -n - 1)].concat();
                        if !equal(&expand(&gens, &word), &target) {
                            failures.push(format!("{name}: lemma1({s1},{s2},{n}) evaluates wrongly"));
                        }
                        if word.len() as u64 > 2 * k * (n.unsigned_abs() + 1) {
                            failures.push(format!("{name}: lemma1({s1},{s2},{n}) has length {}", word.len()));
                        }
                    }
                }
            }
            if !connected {
                continue;
            }
            for &s in &class {
                for w in words(&class, 3) {
                    let letters: Vec<Letter> = w.iter().map(|&(v, e)| Letter::new(v, e < 0)).collect();
                    let commuting = w.iter().all(|&(v, _)| v == s || sg.adj[s][v]);
                    let sum: i64 = w.iter().map(|&(_, e)| e as i64).sum();
                    let l = w.len() as u64;
                    for m in -4..=4i64 {
                        let word = match rewriter.lemma2(s, &letters, m) {
                            Ok(word) => word,
                            Err(e) => {
                                failures.push(format!("{name}: lemma2({s},{w:?},{m}) failed: {e}"));
                                continue;
                            }
                        };
                        checked += 1;
                        let target = [power(s, m), w.clone(), power(s, -m - sum)].concat();
                        if !equal(&expand(&gens, &word), &target) {
                            failures.push(format!("{name}: lemma2({s},{w:?},{m}) evaluates wrongly"));
                        }
                        let bound = if commuting { l } else { 2 * k * (m.unsigned_abs() * l + l * l) };
                        if word.len() as u64 > bound {
                            failures.push(format!("{name}: lemma2({s},{w:?},{m}) has length {} > {bound}", word.len()));
                        }
                    }
                }
            }
        }
    }
    finish(format!("{checked} rewrites on {} figure graphs", FIGURE_GRAPHS.len()), failures)
}

/// Number of isomorphism classes of graphs on `n` vertices.
pub fn graph_count(n: usize) -> usize {
    graphs_up_to_isomorphism(n).len()
}
