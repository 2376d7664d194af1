//! Reference implementations that share no code with the library: piling
//! normal forms for RAAGs, brute-force graph enumeration, coset enumeration
//! for lattices, and a grid model of `Z^2`.

#![allow(dead_code)]

pub mod suites;

use std::collections::{HashMap, HashSet, VecDeque};

/// A graph as an adjacency matrix over vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl SmallGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        SmallGraph { n, adj }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj[u][v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.n).map(|v| format!("v{v}")).collect()
    }

    pub fn to_library(&self) -> dlab_core::SimplicialGraph {
        let names = self.names();
        let edges: Vec<(String, String)> = self.edges().into_iter().map(|(u, v)| (names[u].clone(), names[v].clone())).collect();
        dlab_core::SimplicialGraph::new(names, edges).expect("valid graph")
    }

    /// Graph distance by breadth-first search over the whole graph.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in 0..self.n {
                    if self.adj[u][v] && dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if dist.contains(&usize::MAX) {
                return None;
            }
            best = best.max(*dist.iter().max().unwrap());
        }
        Some(best)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every simple graph on `n` vertices, one per isomorphism class.
pub fn graphs_up_to_isomorphism(n: usize) -> Vec<SmallGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let canonical = perms
            .iter()
            .map(|p| {
                let mut image: Vec<(usize, usize)> =
                    edges.iter().map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect();
                image.sort();
                image
            })
            .min()
            .unwrap();
        if seen.insert(canonical) {
            out.push(SmallGraph::from_edges(n, &edges));
        }
    }
    out
}

/// A generator `x_v^{±1}`, as `(vertex, +1 | -1)`.
pub type RawLetter = (usize, i8);

/// Piling normal form: one column per vertex, beads `+1`, `-1` or
/// `0`. Two words are equal in the RAAG iff their pilings agree, and the
/// number of non-zero beads is the geodesic length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piling {
    columns: Vec<Vec<i8>>,
}

impl Piling {
    pub fn identity(n: usize) -> Self {
        Piling { columns: vec![Vec::new(); n] }
    }

    pub fn push(&mut self, g: &SmallGraph, (x, e): RawLetter) {
        let blocked = |y: usize| y != x && !g.adj[x][y];
        if self.columns[x].last() == Some(&-e) {
            self.columns[x].pop();
            for y in (0..g.n).filter(|&y| blocked(y)) {
                let top = self.columns[y].pop();
                assert_eq!(top, Some(0), "piling invariant");
            }
        } else {
            self.columns[x].push(e);
            for y in (0..g.n).filter(|&y| blocked(y)) {
                self.columns[y].push(0);
            }
        }
    }

    pub fn of_word(g: &SmallGraph, word: &[RawLetter]) -> Self {
        let mut p = Piling::identity(g.n);
        for &l in word {
            p.push(g, l);
        }
        p
    }

    pub fn length(&self) -> usize {
        self.columns.iter().flatten().filter(|&&b| b != 0).count()
    }

    pub fn exponent_sums(&self) -> Vec<i64> {
        self.columns.iter().map(|c| c.iter().map(|&b| b as i64).sum()).collect()
    }
}

pub fn invert_raw(word: &[RawLetter]) -> Vec<RawLetter> {
    word.iter().rev().map(|&(v, e)| (v, -e)).collect()
}

/// Ball of `radius` in the RAAG over the standard generators, keyed by
/// piling, with one geodesic word per element.
pub fn piling_ball(g: &SmallGraph, radius: usize) -> HashMap<Piling, (usize, Vec<RawLetter>)> {
    let mut ball = HashMap::new();
    ball.insert(Piling::identity(g.n), (0, Vec::new()));
    let mut frontier = vec![(Piling::identity(g.n), Vec::new())];
    for len in 1..=radius {
        let mut next = Vec::new();
        for (p, w) in &frontier {
            for v in 0..g.n {
                for e in [1i8, -1] {
                    let mut q: Piling = p.clone();
                    q.push(g, (v, e));
                    if !ball.contains_key(&q) {
                        let mut w2: Vec<RawLetter> = w.clone();
                        w2.push((v, e));
                        ball.insert(q.clone(), (len, w2.clone()));
                        next.push((q, w2));
                    }
                }
            }
        }
        frontier = next;
    }
    ball
}

/// Distortion of a subgroup given by generator words, by two independent
/// breadth-first searches over pilings: the ambient ball of `r_max`, then
/// the subgroup Cayley graph until every ambient target is reached.
pub fn brute_force_distortion(
    g: &SmallGraph,
    in_subgroup: impl Fn(&Piling) -> bool,
    generators: &[Vec<RawLetter>],
    r_max: usize,
) -> Vec<usize> {
    let ambient = piling_ball(g, r_max);
    let mut targets: HashMap<Piling, usize> =
        ambient.iter().filter(|(p, _)| in_subgroup(p)).map(|(p, &(len, _))| (p.clone(), len)).collect();
    let mut steps: Vec<Vec<RawLetter>> = Vec::new();
    for w in generators {
        steps.push(w.clone());
        steps.push(invert_raw(w));
    }
    let mut dist = vec![0usize; r_max + 1];
    let mut seen: HashSet<Piling> = HashSet::new();
    let start = Piling::identity(g.n);
    seen.insert(start.clone());
    targets.remove(&start);
    let mut frontier = vec![start];
    let mut len = 0;
    while !targets.is_empty() {
        assert!(!frontier.is_empty(), "subgroup search exhausted with targets left");
        len += 1;
        let mut next = Vec::new();
        for p in &frontier {
            for s in &steps {
                let mut q = p.clone();
                for &l in s {
                    q.push(g, l);
                }
                if seen.insert(q.clone()) {
                    if let Some(amb) = targets.remove(&q) {
                        for slot in dist.iter_mut().skip(amb) {
                            *slot = (*slot).max(len);
                        }
                    }
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Rank of the rational span and index in `Z^d` (`None` when infinite) of
/// the lattice spanned by `vectors`, for `d ∈ {1, 2}`, by enumerating the
/// image of the lattice in `(Z/M)^d` where `M` is a non-zero maximal minor.
pub fn coset_index(vectors: &[Vec<i64>], d: usize) -> (usize, Option<u64>) {
    assert!(d == 1 || d == 2);
    let minors: Vec<i64> = if d == 1 {
        vectors.iter().map(|v| v[0]).collect()
    } else {
        let mut m = Vec::new();
        for i in 0..vectors.len() {
            for j in i + 1..vectors.len() {
                m.push(vectors[i][0] * vectors[j][1] - vectors[i][1] * vectors[j][0]);
            }
        }
        m
    };
    let Some(modulus) = minors.iter().map(|m| m.unsigned_abs()).find(|&m| m != 0) else {
        let rank = usize::from(vectors.iter().any(|v| v.iter().any(|&x| x != 0)));
        return (rank, None);
    };
    // M·Z^d lies in the span of the d vectors giving the minor, so the index
    // is the number of residues modulo M divided by the size of the image.
    let m = modulus as i64;
    let reduce = |v: &[i64]| -> Vec<i64> { v.iter().map(|x| x.rem_euclid(m)).collect() };
    let mut image: HashSet<Vec<i64>> = HashSet::new();
    let zero = vec![0i64; d];
    image.insert(zero.clone());
    let mut queue = VecDeque::from([zero]);
    while let Some(p) = queue.pop_front() {
        for v in vectors {
            let q: Vec<i64> = p.iter().zip(v).map(|(a, b)| a + b).collect();
            let q = reduce(&q);
            if image.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    let residues = modulus.pow(d as u32);
    assert_eq!(residues % image.len() as u64, 0);
    (d, Some(residues / image.len() as u64))
}

/// Divergence of `Z^2` (standard generators) at radius `r`, computed on the
/// square grid `|x|, |y| <= 4r + 4`: the largest distance between two points
/// of the `L1` sphere of radius `r` avoiding the open ball of radius `inner`.
/// `None` when some pair is disconnected.
pub fn grid_divergence(r: i64, inner: i64) -> Option<u64> {
    let b = 4 * r + 4;
    let side = (2 * b + 1) as usize;
    let index = |x: i64, y: i64| ((x + b) as usize) * side + (y + b) as usize;
    let allowed = |x: i64, y: i64| x.abs() <= b && y.abs() <= b && x.abs() + y.abs() >= inner;
    let sphere: Vec<(i64, i64)> =
        (-r..=r).flat_map(|x| (-r..=r).map(move |y| (x, y))).filter(|(x, y)| x.abs() + y.abs() == r).collect();
    let mut worst = 0u64;
    for &(sx, sy) in &sphere {
        let mut dist = vec![u64::MAX; side * side];
        dist[index(sx, sy)] = 0;
        let mut queue = VecDeque::from([(sx, sy)]);
        while let Some((x, y)) = queue.pop_front() {
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (nx, ny) = (x + dx, y + dy);
                if allowed(nx, ny) && dist[index(nx, ny)] == u64::MAX {
                    dist[index(nx, ny)] = dist[index(x, y)] + 1;
                    queue.push_back((nx, ny));
                }
            }
        }
        for &(tx, ty) in &sphere {
            let d = dist[index(tx, ty)];
            if d == u64::MAX {
                return None;
            }
            worst = worst.max(d);
        }
    }
    Some(worst)
}

/// `x^e` as raw letters of a named vertex.
pub fn letters_of(names: &[&str], text: &str) -> Vec<RawLetter> {
    text.split_whitespace()
        .map(|tok| {
            let (name, e) = match tok.strip_suffix("^-1") {
                Some(n) => (n, -1),
                None => (tok, 1),
            };
            (names.iter().position(|&n| n == name).expect("known vertex"), e)
        })
        .collect()
}

/// The library graph as an adjacency matrix, with vertices in library order.
pub fn small_from_library(g: &dlab_core::SimplicialGraph) -> SmallGraph {
    let n = g.len();
    let mut adj = vec![vec![false; n]; n];
    for (u, row) in adj.iter_mut().enumerate() {
        for (v, cell) in row.iter_mut().enumerate() {
            *cell = g.adjacent(u, v);
        }
    }
    SmallGraph { n, adj }
}

/// Converts library letters to raw letters.
pub fn raw(word: &[dlab_core::Letter]) -> Vec<RawLetter> {
    word.iter().map(|l| (l.vertex(), if l.is_inverse() { -1 } else { 1 })).collect()
}
