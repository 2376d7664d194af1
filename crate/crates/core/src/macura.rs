//! Macura's free-by-cyclic groups `G_d = F_d ⋊ Z`, where the stable letter
//! `t` acts on `F_d = <x_1, …, x_d>` by `Φ_d: x_1 ↦ x_1, x_i ↦ x_i x_{i-1}^-1`
//! with inverse `Ψ_d: x_i ↦ x_i x_{i-1} ⋯ x_1`.

use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

use crate::metric::{distortion_series, DistortionSeries, GroupOracle, MetricError};

/// Largest supported rank; letters are stored as signed bytes.
pub const MAX_RANK: usize = 127;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MacuraError {
    #[error("rank must be between 2 and {MAX_RANK}, got {0}")]
    BadRank(usize),
    #[error("letter index {index} outside 1..={rank}")]
    IndexOutOfRange { index: i64, rank: usize },
    #[error("ranks differ: {0} and {1}")]
    RankMismatch(usize, usize),
    #[error("growth table covers n ≤ {n_max}, asked for {n}")]
    OutOfTable { n: u32, n_max: u32 },
    #[error("cannot parse token `{0}`")]
    BadToken(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

type Letters = SmallVec<[i8; 22]>;

/// A freely reduced word in `x_1, …, x_d`. Letter `±i` stands for `x_i^±1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    rank: u8,
    letters: Letters,
}

fn push_reduced(letters: &mut Letters, l: i8) {
    if letters.last() == Some(&-l) {
        letters.pop();
    } else {
        letters.push(l);
    }
}

fn check_rank(d: usize) -> Result<(), MacuraError> {
    if (2..=MAX_RANK).contains(&d) {
        Ok(())
    } else {
        Err(MacuraError::BadRank(d))
    }
}

impl FreeWord {
    pub fn identity(d: usize) -> Result<Self, MacuraError> {
        check_rank(d)?;
        Ok(FreeWord { rank: d as u8, letters: Letters::new() })
    }

    /// Free reduction of a raw sequence of signed indices.
    pub fn reduce(d: usize, raw: &[i64]) -> Result<Self, MacuraError> {
        let mut w = FreeWord::identity(d)?;
        for &l in raw {
            if l == 0 || l.unsigned_abs() as usize > d {
                return Err(MacuraError::IndexOutOfRange { index: l, rank: d });
            }
            push_reduced(&mut w.letters, l as i8);
        }
        Ok(w)
    }

    /// `x_i`.
    pub fn generator(d: usize, i: usize) -> Result<Self, MacuraError> {
        FreeWord::reduce(d, &[i as i64])
    }

    /// Parses `x2 x1^-1`; the empty string and `1` are the identity.
    pub fn parse(d: usize, text: &str) -> Result<Self, MacuraError> {
        let mut raw = Vec::new();
        for tok in text.split_whitespace().filter(|t| *t != "1") {
            let (body, sign) = match tok.strip_suffix("^-1") {
                Some(b) => (b, -1),
                None => (tok, 1),
            };
            let i: i64 = body
                .strip_prefix('x')
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| MacuraError::BadToken(tok.to_owned()))?;
            raw.push(sign * i);
        }
        FreeWord::reduce(d, &raw)
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn letters(&self) -> impl Iterator<Item = i64> + '_ {
        self.letters.iter().map(|&l| l as i64)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn same_rank(&self, other: &FreeWord) -> Result<(), MacuraError> {
        if self.rank != other.rank {
            return Err(MacuraError::RankMismatch(self.rank(), other.rank()));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &FreeWord) -> Result<FreeWord, MacuraError> {
        self.same_rank(other)?;
        let mut out = self.clone();
        for &l in &other.letters {
            push_reduced(&mut out.letters, l);
        }
        Ok(out)
    }

    pub fn invert(&self) -> FreeWord {
        FreeWord { rank: self.rank, letters: self.letters.iter().rev().map(|&l| -l).collect() }
    }

    fn substitute(&self, auto: Auto) -> FreeWord {
        let mut out = Letters::with_capacity(self.letters.len() * 2);
        for &l in &self.letters {
            let i = l.abs();
            let forward = l > 0;
            match (auto, forward) {
                (Auto::Phi, true) => {
                    push_reduced(&mut out, i);
                    if i > 1 {
                        push_reduced(&mut out, -(i - 1));
                    }
                }
                (Auto::Phi, false) => {
                    if i > 1 {
                        push_reduced(&mut out, i - 1);
                    }
                    push_reduced(&mut out, -i);
                }
                (Auto::Psi, true) => {
                    for j in (1..=i).rev() {
                        push_reduced(&mut out, j);
                    }
                }
                (Auto::Psi, false) => {
                    for j in 1..=i {
                        push_reduced(&mut out, -j);
                    }
                }
            }
        }
        FreeWord { rank: self.rank, letters: out }
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (k, &l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_char(' ')?;
            }
            write!(f, "x{}", l.abs())?;
            if l < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWord({self})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Auto {
    Phi,
    Psi,
}

impl Auto {
    pub fn inverse(self) -> Auto {
        match self {
            Auto::Phi => Auto::Psi,
            Auto::Psi => Auto::Phi,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Auto::Phi => "Phi",
            Auto::Psi => "Psi",
        }
    }

    /// The growth bound for `|auto^n(x_i)|`: `2n^(i-1)` for `Φ`, `i·n^(i-1)`
    /// for `Ψ`.
    pub fn growth_bound(self, n: u32, i: u32) -> u64 {
        let p = (n as u64).pow(i - 1);
        match self {
            Auto::Phi => 2 * p,
            Auto::Psi => i as u64 * p,
        }
    }
}

pub fn apply_phi(w: &FreeWord) -> FreeWord {
    w.substitute(Auto::Phi)
}

pub fn apply_psi(w: &FreeWord) -> FreeWord {
    w.substitute(Auto::Psi)
}

/// `auto^n(w)`, reducing after every application; negative `n` iterates the
/// inverse automorphism.
pub fn iterate_auto(auto: Auto, n: i64, w: &FreeWord) -> FreeWord {
    let step = if n < 0 { auto.inverse() } else { auto };
    let mut out = w.clone();
    for _ in 0..n.unsigned_abs() {
        out = out.substitute(step);
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthEntry {
    pub auto: Auto,
    pub n: u32,
    pub i: u32,
    pub length: u64,
    pub bound: u64,
    pub ok: bool,
}

/// `|Φ^n(x_i)|` and `|Ψ^n(x_i)|` for `1 ≤ n ≤ n_max`, `1 ≤ i ≤ d`.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthTable {
    pub d: usize,
    pub n_max: u32,
    pub entries: Vec<GrowthEntry>,
}

pub const GROWTH_CSV_HEADER: &str = "auto,n,i,length,bound,ok";

pub fn growth_table(d: usize, n_max: u32) -> Result<GrowthTable, MacuraError> {
    check_rank(d)?;
    let mut entries = Vec::with_capacity(2 * d * n_max as usize);
    for auto in [Auto::Phi, Auto::Psi] {
        for i in 1..=d {
            let mut w = FreeWord::generator(d, i)?;
            for n in 1..=n_max {
                w = w.substitute(auto);
                let length = w.len() as u64;
                let bound = auto.growth_bound(n, i as u32);
                entries.push(GrowthEntry { auto, n, i: i as u32, length, bound, ok: length <= bound });
            }
        }
    }
    entries.sort_by_key(|e| (e.auto == Auto::Psi, e.n, e.i));
    Ok(GrowthTable { d, n_max, entries })
}

impl GrowthTable {
    pub fn length(&self, auto: Auto, n: u32, i: u32) -> Option<u64> {
        if n == 0 {
            return (1..=self.d as u32).contains(&i).then_some(1);
        }
        self.entries.iter().find(|e| e.auto == auto && e.n == n && e.i == i).map(|e| e.length)
    }

    pub fn violations(&self) -> impl Iterator<Item = &GrowthEntry> {
        self.entries.iter().filter(|e| !e.ok)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(GROWTH_CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{},{},{},{}", e.auto.name(), e.n, e.i, e.length, e.bound, e.ok);
        }
        out
    }

    /// `φ(n) = max{|Φ^j(x_i)| : 1 ≤ i ≤ d, |j| ≤ n}`, using `Φ^-j = Ψ^j`.
    pub fn phi(&self, n: u32) -> Result<u64, MacuraError> {
        if n > self.n_max {
            return Err(MacuraError::OutOfTable { n, n_max: self.n_max });
        }
        Ok(self
            .entries
            .iter()
            .filter(|e| e.n <= n)
            .map(|e| e.length)
            .max()
            .unwrap_or(1)
            .max(1))
    }
}

/// Gersten's upper bound `n·φ(n)` for the distortion of `F_d` in `G_d`.
pub fn gersten_bound(table: &GrowthTable, n: u32) -> Result<u64, MacuraError> {
    Ok(n as u64 * table.phi(n)?)
}

/// `t^k · w` with `w` in `F_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FbcElement {
    pub k: i64,
    pub tail: FreeWord,
}

impl FbcElement {
    pub fn identity(d: usize) -> Result<Self, MacuraError> {
        Ok(FbcElement { k: 0, tail: FreeWord::identity(d)? })
    }

    pub fn t_power(d: usize, k: i64) -> Result<Self, MacuraError> {
        Ok(FbcElement { k, tail: FreeWord::identity(d)? })
    }

    pub fn from_free(w: FreeWord) -> Self {
        FbcElement { k: 0, tail: w }
    }

    pub fn rank(&self) -> usize {
        self.tail.rank()
    }
}

impl fmt::Display for FbcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.k, self.tail.is_empty()) {
            (0, _) => write!(f, "{}", self.tail),
            (k, true) => write!(f, "t^{k}"),
            (k, false) => write!(f, "t^{k} {}", self.tail),
        }
    }
}

/// `(t^k w)(t^m v) = t^(k+m) Ψ^m(w) v`, since `t^-1 x t = Ψ(x)`.
pub fn gd_multiply(a: &FbcElement, b: &FbcElement) -> Result<FbcElement, MacuraError> {
    a.tail.same_rank(&b.tail)?;
    let moved = iterate_auto(Auto::Psi, b.k, &a.tail);
    Ok(FbcElement { k: a.k + b.k, tail: moved.multiply(&b.tail)? })
}

/// `(t^k w)^-1 = w^-1 t^-k = t^-k Φ^k(w^-1)`.
pub fn gd_invert(a: &FbcElement) -> FbcElement {
    FbcElement { k: -a.k, tail: iterate_auto(Auto::Phi, a.k, &a.tail.invert()) }
}

pub fn fd_membership(x: &FbcElement) -> bool {
    x.k == 0
}

/// Cayley-graph oracle for `G_d` over `x_1^±1, …, x_d^±1, t^±1`.
#[derive(Debug, Clone)]
pub struct GdOracle {
    d: usize,
}

impl GdOracle {
    pub fn new(d: usize) -> Result<Self, MacuraError> {
        check_rank(d)?;
        Ok(GdOracle { d })
    }
}

fn free_generator(d: usize, i: usize) -> FreeWord {
    let idx = (i / 2 + 1) as i8;
    let mut letters = Letters::new();
    letters.push(if i.is_multiple_of(2) { idx } else { -idx });
    FreeWord { rank: d as u8, letters }
}

fn free_label(i: usize) -> String {
    if i.is_multiple_of(2) {
        format!("x{}", i / 2 + 1)
    } else {
        format!("x{}^-1", i / 2 + 1)
    }
}

impl GroupOracle for GdOracle {
    type Element = FbcElement;

    fn identity(&self) -> FbcElement {
        FbcElement::identity(self.d).expect("rank checked")
    }

    fn generator_count(&self) -> usize {
        2 * self.d + 2
    }

    fn generator_label(&self, i: usize) -> String {
        if i < 2 * self.d {
            free_label(i)
        } else if i == 2 * self.d {
            "t".to_owned()
        } else {
            "t^-1".to_owned()
        }
    }

    fn generator(&self, i: usize) -> FbcElement {
        if i < 2 * self.d {
            FbcElement::from_free(free_generator(self.d, i))
        } else {
            let k = if i == 2 * self.d { 1 } else { -1 };
            FbcElement::t_power(self.d, k).expect("rank checked")
        }
    }

    fn compose(&self, a: &FbcElement, b: &FbcElement) -> FbcElement {
        gd_multiply(a, b).expect("same rank")
    }

    fn step(&self, a: &FbcElement, i: usize) -> FbcElement {
        if i < 2 * self.d {
            let mut tail = a.tail.clone();
            let idx = (i / 2 + 1) as i8;
            push_reduced(&mut tail.letters, if i.is_multiple_of(2) { idx } else { -idx });
            FbcElement { k: a.k, tail }
        } else {
            let (dk, auto) = if i == 2 * self.d { (1, Auto::Psi) } else { (-1, Auto::Phi) };
            FbcElement { k: a.k + dk, tail: a.tail.substitute(auto) }
        }
    }
}

/// Cayley-graph oracle for `F_d` over its free basis, embedded in `G_d`.
/// Word length is the reduced length, so no search is needed.
#[derive(Debug, Clone)]
pub struct FreeOracle {
    d: usize,
}

impl FreeOracle {
    pub fn new(d: usize) -> Result<Self, MacuraError> {
        check_rank(d)?;
        Ok(FreeOracle { d })
    }
}

impl GroupOracle for FreeOracle {
    type Element = FbcElement;

    fn identity(&self) -> FbcElement {
        FbcElement::identity(self.d).expect("rank checked")
    }

    fn generator_count(&self) -> usize {
        2 * self.d
    }

    fn generator_label(&self, i: usize) -> String {
        free_label(i)
    }

    fn generator(&self, i: usize) -> FbcElement {
        FbcElement::from_free(free_generator(self.d, i))
    }

    fn compose(&self, a: &FbcElement, b: &FbcElement) -> FbcElement {
        gd_multiply(a, b).expect("same rank")
    }

    fn exact_length(&self, x: &FbcElement) -> Option<u32> {
        (x.k == 0).then_some(x.tail.len() as u32)
    }
}

/// Distortion of `F_d` in `G_d` for radii `0..=r_max`.
pub fn fd_distortion(d: usize, r_max: u32, budget: usize) -> Result<DistortionSeries, MacuraError> {
    let g = GdOracle::new(d)?;
    let h = FreeOracle::new(d)?;
    Ok(distortion_series(&g, fd_membership, &h, r_max, budget)?)
}

/// The relators `a_0 a_1 a_0^-1 a_1^-1` and `a_i^-1 a_0 a_i a_{i-1}^-1`
/// (`2 ≤ i ≤ d`) of the one-relator-per-index presentation, as signed
/// indices into `a_0, …, a_d` (`±(j+1)` for `a_j^±1`).
pub fn first_presentation_relators(d: usize) -> Vec<Vec<i64>> {
    let a = |j: i64| j + 1;
    let mut out = vec![vec![a(0), a(1), -a(0), -a(1)]];
    for i in 2..=d as i64 {
        out.push(vec![-a(i), a(0), a(i), -a(i - 1)]);
    }
    out
}

/// Image of a word in `a_0, …, a_d` under `a_0 ↦ t^-1`, `a_i ↦ t^-1 x_i`.
pub fn evaluate_first_presentation(d: usize, word: &[i64]) -> Result<FbcElement, MacuraError> {
    let t_inv = FbcElement::t_power(d, -1)?;
    let mut acc = FbcElement::identity(d)?;
    for &l in word {
        let j = l.unsigned_abs() as usize - 1;
        if l == 0 || j > d {
            return Err(MacuraError::IndexOutOfRange { index: l, rank: d });
        }
        let image = if j == 0 { t_inv.clone() } else { gd_multiply(&t_inv, &FbcElement::from_free(FreeWord::generator(d, j)?))? };
        let image = if l < 0 { gd_invert(&image) } else { image };
        acc = gd_multiply(&acc, &image)?;
    }
    Ok(acc)
}
