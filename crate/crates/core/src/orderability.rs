//! Non-left-orderability obstructions for group presentations, and the
//! Heegaard-diagram combinatorics (perfect matchings, strong diagrams,
//! destabilization) that feed them.

use std::collections::HashSet;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::integer_determinant;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("bad relator token {0:?}")]
    BadToken(String),
    #[error("generator index {index} out of range 1..={count}")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid Heegaard data: {0}")]
    InvalidHeegaard(String),
    #[error("signed intersection matrix is singular")]
    SingularMatrix,
    #[error("destabilization needs genus > 1")]
    GenusOne,
    #[error("intersection graph has no leaf")]
    NoLeaf,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Element of `{0, +, −, *}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignSymbol {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "*")]
    Star,
}

impl SignSymbol {
    pub const ALL: [SignSymbol; 4] = [
        SignSymbol::Zero,
        SignSymbol::Plus,
        SignSymbol::Minus,
        SignSymbol::Star,
    ];

    pub fn from_sign(s: i64) -> Self {
        match s.signum() {
            0 => SignSymbol::Zero,
            1 => SignSymbol::Plus,
            _ => SignSymbol::Minus,
        }
    }
}

impl fmt::Display for SignSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignSymbol::Zero => "0",
            SignSymbol::Plus => "+",
            SignSymbol::Minus => "-",
            SignSymbol::Star => "*",
        })
    }
}

pub fn sign_mul(x: SignSymbol, y: SignSymbol) -> SignSymbol {
    use SignSymbol::*;
    match (x, y) {
        (Zero, _) | (_, Zero) => Zero,
        (Star, _) | (_, Star) => Star,
        (Plus, Plus) | (Minus, Minus) => Plus,
        _ => Minus,
    }
}

impl Mul for SignSymbol {
    type Output = SignSymbol;
    fn mul(self, rhs: SignSymbol) -> SignSymbol {
        sign_mul(self, rhs)
    }
}

/// `⟨x₁..x_m | r₁..r_n⟩` with each relator a word of `(generator, ±1)`,
/// generators indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Vec<(usize, i8)>>,
}

/// On-disk form: `{"generators": m, "relators": [["x1", "x2^-1"], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub generators: usize,
    pub relators: Vec<Vec<String>>,
}

fn parse_token(tok: &str, m: usize) -> Result<(usize, i64), OrderError> {
    let bad = || OrderError::BadToken(tok.to_string());
    let rest = tok.trim().strip_prefix('x').ok_or_else(bad)?;
    let (idx, pow) = match rest.split_once('^') {
        Some((a, b)) => (a, b.parse::<i64>().map_err(|_| bad())?),
        None => (rest, 1),
    };
    let index: usize = idx.parse().map_err(|_| bad())?;
    if index == 0 || index > m {
        return Err(OrderError::GeneratorOutOfRange { index, count: m });
    }
    if pow == 0 {
        return Err(bad());
    }
    Ok((index - 1, pow))
}

impl GroupPresentation {
    pub fn parse(file: &PresentationFile) -> Result<Self, OrderError> {
        let m = file.generators;
        let mut relators = Vec::new();
        for word in &file.relators {
            let mut r = Vec::new();
            for tok in word {
                let (i, pow) = parse_token(tok, m)?;
                let e = pow.signum() as i8;
                r.extend(std::iter::repeat_n((i, e), pow.unsigned_abs() as usize));
            }
            relators.push(r);
        }
        Ok(GroupPresentation {
            generators: m,
            relators,
        })
    }

    pub fn to_file(&self) -> PresentationFile {
        PresentationFile {
            generators: self.generators,
            relators: self
                .relators
                .iter()
                .map(|w| {
                    w.iter()
                        .map(|&(i, e)| {
                            if e > 0 {
                                format!("x{}", i + 1)
                            } else {
                                format!("x{}^-1", i + 1)
                            }
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Generators as rows, relators as columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignMatrix {
    pub rows: Vec<Vec<SignSymbol>>,
}

impl SignMatrix {
    pub fn new(rows: Vec<Vec<SignSymbol>>) -> Self {
        SignMatrix { rows }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    /// Simultaneous relabeling: row `i` of the result is row `rp[i]`,
    /// column `j` is column `cp[j]`.
    pub fn permuted(&self, rp: &[usize], cp: &[usize]) -> Self {
        SignMatrix {
            rows: rp
                .iter()
                .map(|&i| cp.iter().map(|&j| self.rows[i][j]).collect())
                .collect(),
        }
    }
}

impl fmt::Display for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|s| s.to_string()).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// `ε_ij` is `+` if only `x_i` occurs in `r_j`, `−` if only `x_i⁻¹`, `*` if
/// both, `0` if neither.
pub fn epsilon_matrix(g: &GroupPresentation) -> SignMatrix {
    let n = g.relators.len();
    let mut rows = vec![vec![SignSymbol::Zero; n]; g.generators];
    for (j, r) in g.relators.iter().enumerate() {
        for &(i, e) in r {
            let s = if e > 0 {
                SignSymbol::Plus
            } else {
                SignSymbol::Minus
            };
            rows[i][j] = match rows[i][j] {
                SignSymbol::Zero => s,
                cur if cur == s => s,
                _ => SignSymbol::Star,
            };
        }
    }
    SignMatrix { rows }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NotLoVerdict {
    Obstructed,
    /// a row scaling under which no column is nonzero and sign-uniform
    Inconclusive { witness: Vec<SignSymbol> },
}

fn column_is_uniform(col: impl Iterator<Item = SignSymbol>) -> bool {
    let mut seen = SignSymbol::Zero;
    for s in col {
        match (s, seen) {
            (SignSymbol::Zero, _) => {}
            (SignSymbol::Star, _) => return false,
            (s, SignSymbol::Zero) => seen = s,
            (s, t) if s != t => return false,
            _ => {}
        }
    }
    seen != SignSymbol::Zero
}

/// Every nonzero `d ∈ {0,+,−}^m` must leave some column, after scaling row
/// `i` by `d_i`, nonzero with all nonzero entries of one sign.
pub fn check_not_lo(e: &SignMatrix) -> NotLoVerdict {
    let m = e.n_rows();
    let n = e.n_cols();
    let digits = [SignSymbol::Zero, SignSymbol::Plus, SignSymbol::Minus];
    let total = 3usize.pow(m as u32);
    for code in 1..total {
        let mut d = Vec::with_capacity(m);
        let mut c = code;
        for _ in 0..m {
            d.push(digits[c % 3]);
            c /= 3;
        }
        let ok = (0..n).any(|j| column_is_uniform((0..m).map(|i| d[i] * e.rows[i][j])));
        if !ok {
            return NotLoVerdict::Inconclusive { witness: d };
        }
    }
    NotLoVerdict::Obstructed
}

fn permutation_parity(perm: &[usize]) -> SignSymbol {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    if odd {
        SignSymbol::Minus
    } else {
        SignSymbol::Plus
    }
}

/// Permutations `σ` with every `E[i][σ(i)]` nonzero, by backtracking over
/// the support.
pub fn support_permutations(e: &SignMatrix) -> Vec<Vec<usize>> {
    fn rec(
        e: &SignMatrix,
        row: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if row == e.n_rows() {
            out.push(cur.clone());
            return;
        }
        for j in 0..e.n_cols() {
            if !used[j] && e.rows[row][j] != SignSymbol::Zero {
                used[j] = true;
                cur.push(j);
                rec(e, row + 1, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(e, 0, &mut vec![false; e.n_cols()], &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum FormalDetFailure {
    NoSummand,
    StarInSummand { permutation: Vec<usize> },
    MixedSigns {
        positive: Vec<usize>,
        negative: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FormalDetVerdict {
    Pass { summands: usize, sign: SignSymbol },
    Fail(FormalDetFailure),
}

impl FormalDetVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, FormalDetVerdict::Pass { .. })
    }
}

/// The formal determinant `Σ_σ sgn(σ) Π ε_{iσ(i)}` must have a nonzero
/// summand, no `*` in any nonzero summand, and all nonzero summands of one
/// sign.
pub fn check_formal_determinant(e: &SignMatrix) -> Result<FormalDetVerdict, OrderError> {
    let (r, c) = (e.n_rows(), e.n_cols());
    if r != c {
        return Err(OrderError::NotSquare { rows: r, cols: c });
    }
    let perms = support_permutations(e);
    if perms.is_empty() {
        return Ok(FormalDetVerdict::Fail(FormalDetFailure::NoSummand));
    }
    let mut first: Option<(SignSymbol, Vec<usize>)> = None;
    for perm in &perms {
        let s = perm
            .iter()
            .enumerate()
            .fold(permutation_parity(perm), |acc, (i, &j)| acc * e.rows[i][j]);
        if s == SignSymbol::Star {
            return Ok(FormalDetVerdict::Fail(FormalDetFailure::StarInSummand {
                permutation: perm.clone(),
            }));
        }
        match &first {
            None => first = Some((s, perm.clone())),
            Some((s0, p0)) if *s0 != s => {
                let (positive, negative) = if *s0 == SignSymbol::Plus {
                    (p0.clone(), perm.clone())
                } else {
                    (perm.clone(), p0.clone())
                };
                return Ok(FormalDetVerdict::Fail(FormalDetFailure::MixedSigns {
                    positive,
                    negative,
                }));
            }
            _ => {}
        }
    }
    Ok(FormalDetVerdict::Pass {
        summands: perms.len(),
        sign: first.unwrap().0,
    })
}

/// Combinatorics of a Heegaard diagram: for each `β_j`, its intersections
/// with the α-circles in traversal order as `(α index from 1, η = ±1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeegaardCombinatorics {
    pub genus: usize,
    pub beta: Vec<Vec<(usize, i8)>>,
}

impl HeegaardCombinatorics {
    pub fn new(genus: usize, beta: Vec<Vec<(usize, i8)>>) -> Result<Self, OrderError> {
        let h = HeegaardCombinatorics { genus, beta };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<(), OrderError> {
        let bad = |s: String| Err(OrderError::InvalidHeegaard(s));
        if self.genus == 0 {
            return bad("genus must be positive".into());
        }
        if self.beta.len() != self.genus {
            return bad(format!("{} beta curves for genus {}", self.beta.len(), self.genus));
        }
        for (j, b) in self.beta.iter().enumerate() {
            for &(a, s) in b {
                if a == 0 || a > self.genus {
                    return bad(format!("beta {} meets alpha {a}", j + 1));
                }
                if s != 1 && s != -1 {
                    return bad(format!("beta {} has sign {s}", j + 1));
                }
            }
        }
        Ok(())
    }

    /// Standard genus-1 diagram of `L(p,1)`: `p` positive points
    /// (`p = 1` is `S³`).
    pub fn lens(p: usize) -> Self {
        HeegaardCombinatorics {
            genus: 1,
            beta: vec![vec![(1, 1); p]],
        }
    }

    /// `N[i][j]` = number of points of `α_i ∩ β_j`.
    pub fn count_matrix(&self) -> Vec<Vec<u64>> {
        let g = self.genus;
        let mut m = vec![vec![0; g]; g];
        for (j, b) in self.beta.iter().enumerate() {
            for &(a, _) in b {
                m[a - 1][j] += 1;
            }
        }
        m
    }

    /// `N[i][j]` = algebraic intersection number of `α_i` and `β_j`.
    pub fn signed_matrix(&self) -> Vec<Vec<i64>> {
        let g = self.genus;
        let mut m = vec![vec![0; g]; g];
        for (j, b) in self.beta.iter().enumerate() {
            for &(a, s) in b {
                m[a - 1][j] += s as i64;
            }
        }
        m
    }

    pub fn determinant(&self) -> BigInt {
        let m: Vec<Vec<BigInt>> = self
            .signed_matrix()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        integer_determinant(&m)
    }

    /// Reverse the orientation of `α_i` (1-based).
    pub fn flip_alpha(&self, i: usize) -> Self {
        let mut h = self.clone();
        for b in &mut h.beta {
            for x in b.iter_mut() {
                if x.0 == i {
                    x.1 = -x.1;
                }
            }
        }
        h
    }

    /// Orient so that the signed intersection determinant is positive,
    /// flipping `α₁` if needed; reports whether it flipped.
    pub fn normalized(&self) -> Result<(Self, bool), OrderError> {
        let d = self.determinant();
        if d.is_zero() {
            return Err(OrderError::SingularMatrix);
        }
        if d.is_negative() {
            Ok((self.flip_alpha(1), true))
        } else {
            Ok((self.clone(), false))
        }
    }
}

/// Relator `j` is the word `Π a_{i_ℓ}^{η_ℓ}` read along `β_j`.
pub fn presentation_from_heegaard(h: &HeegaardCombinatorics) -> GroupPresentation {
    GroupPresentation {
        generators: h.genus,
        relators: h
            .beta
            .iter()
            .map(|b| b.iter().map(|&(a, s)| (a - 1, s)).collect())
            .collect(),
    }
}

/// An intersection point `α_a ∩ β_b`, identified by its position `ell`
/// along `β_b`; indices from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub ell: usize,
    pub sign: i8,
}

/// Bipartite multigraph on `A₁..A_g`, `B₁..B_g` with one edge per
/// intersection point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteMultigraph {
    pub g: usize,
    pub edges: Vec<Edge>,
}

/// One edge per A-vertex: `matching[a]` is the edge at `A_a`.
pub type Matching = Vec<Edge>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "side", content = "index", rename_all = "snake_case")]
pub enum Vertex {
    A(usize),
    B(usize),
}

impl BipartiteMultigraph {
    pub fn from_heegaard(h: &HeegaardCombinatorics) -> Self {
        let edges = h
            .beta
            .iter()
            .enumerate()
            .flat_map(|(j, b)| {
                b.iter().enumerate().map(move |(ell, &(a, s))| Edge {
                    a: a - 1,
                    b: j,
                    ell,
                    sign: s,
                })
            })
            .collect();
        BipartiteMultigraph { g: h.genus, edges }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges
            .iter()
            .filter(|e| match v {
                Vertex::A(i) => e.a == i,
                Vertex::B(j) => e.b == j,
            })
            .count()
    }

    /// A 1-valent vertex (multi-edges counted with multiplicity), A-side
    /// first.
    pub fn find_leaf(&self) -> Option<Vertex> {
        (0..self.g)
            .map(Vertex::A)
            .chain((0..self.g).map(Vertex::B))
            .find(|&v| self.degree(v) == 1)
    }

    pub fn is_perfect_matching(&self, m: &[Edge]) -> bool {
        m.len() == self.g
            && m.iter().enumerate().all(|(a, e)| e.a == a && self.edges.contains(e))
            && m.iter().map(|e| e.b).collect::<HashSet<_>>().len() == self.g
    }
}

pub fn perfect_matchings(gr: &BipartiteMultigraph) -> Vec<Matching> {
    let mut by_a: Vec<Vec<Edge>> = vec![Vec::new(); gr.g];
    for e in &gr.edges {
        by_a[e.a].push(*e);
    }
    fn rec(
        by_a: &[Vec<Edge>],
        a: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<Edge>,
        out: &mut Vec<Matching>,
    ) {
        if a == by_a.len() {
            out.push(cur.clone());
            return;
        }
        for e in &by_a[a] {
            if !used[e.b] {
                used[e.b] = true;
                cur.push(*e);
                rec(by_a, a + 1, used, cur, out);
                cur.pop();
                used[e.b] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&by_a, 0, &mut vec![false; gr.g], &mut Vec::new(), &mut out);
    out
}

/// Permanent of a nonnegative integer matrix by subset dynamic programming.
pub fn permanent(m: &[Vec<u64>]) -> BigInt {
    let n = m.len();
    let mut dp = vec![BigInt::zero(); 1 << n];
    dp[0] = BigInt::one();
    for mask in 0..(1usize << n) {
        if dp[mask].is_zero() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        let cur = dp[mask].clone();
        for (j, &c) in m[row].iter().enumerate() {
            if c != 0 && mask & (1 << j) == 0 {
                dp[mask | (1 << j)] += &cur * c;
            }
        }
    }
    dp[(1 << n) - 1].clone()
}

/// Number of generators `x = (x₁..x_g)` of the Floer chain complex: the
/// permanent of the count matrix.
pub fn generator_count(h: &HeegaardCombinatorics) -> BigInt {
    permanent(&h.count_matrix())
}

/// Grading `η(x) = sgn(σ) Π η(x_i)` of a generator.
pub fn matching_grading(m: &[Edge]) -> i64 {
    let perm: Vec<usize> = m.iter().map(|e| e.b).collect();
    let s = if permutation_parity(&perm) == SignSymbol::Plus {
        1
    } else {
        -1
    };
    m.iter().fold(s, |acc, e| acc * e.sign as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongReport {
    pub genus: usize,
    pub generator_count: BigInt,
    pub determinant: BigInt,
    pub strong: bool,
    /// `α₁` was reversed to make the determinant positive
    pub flipped_alpha1: bool,
}

/// Largest generator set whose gradings are enumerated individually.
const GRADING_ENUMERATION_LIMIT: u64 = 200_000;

/// Strong iff the number of generators equals `|det|`, i.e. every
/// generator has the same grading.
pub fn is_strong(h: &HeegaardCombinatorics) -> Result<StrongReport, OrderError> {
    h.validate()?;
    let (hn, flipped) = h.normalized()?;
    let count = generator_count(&hn);
    let det = hn.determinant();
    let strong = count == det;
    if strong && count <= BigInt::from(GRADING_ENUMERATION_LIMIT) {
        let gr = BipartiteMultigraph::from_heegaard(&hn);
        for m in perfect_matchings(&gr) {
            assert_eq!(matching_grading(&m), 1, "strong diagram with a negative generator");
        }
    }
    Ok(StrongReport {
        genus: h.genus,
        generator_count: count,
        determinant: det,
        strong,
        flipped_alpha1: flipped,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Destabilization {
    pub diagram: HeegaardCombinatorics,
    /// 1-based indices of the removed pair
    pub removed_alpha: usize,
    pub removed_beta: usize,
    pub leaf: Vertex,
}

/// Delete a leaf and the vertex it is matched to, i.e. the pair `α_i, β_j`
/// joined by the leaf's only edge.
pub fn destabilize_leaf(h: &HeegaardCombinatorics) -> Result<Destabilization, OrderError> {
    h.validate()?;
    if h.genus <= 1 {
        return Err(OrderError::GenusOne);
    }
    let gr = BipartiteMultigraph::from_heegaard(h);
    let leaf = gr.find_leaf().ok_or(OrderError::NoLeaf)?;
    let edge = *gr
        .edges
        .iter()
        .find(|e| match leaf {
            Vertex::A(i) => e.a == i,
            Vertex::B(j) => e.b == j,
        })
        .unwrap();
    let (ai, bj) = (edge.a + 1, edge.b);
    let beta = h
        .beta
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != bj)
        .map(|(_, b)| {
            b.iter()
                .filter(|x| x.0 != ai)
                .map(|&(a, s)| (if a > ai { a - 1 } else { a }, s))
                .collect()
        })
        .collect();
    let out = HeegaardCombinatorics {
        genus: h.genus - 1,
        beta,
    };
    assert_eq!(
        generator_count(&out),
        generator_count(h),
        "destabilization changed the number of perfect matchings"
    );
    Ok(Destabilization {
        diagram: out,
        removed_alpha: ai,
        removed_beta: bj + 1,
        leaf,
    })
}

/// Destabilize until genus 1 or no leaf remains.
pub fn destabilize_fully(h: &HeegaardCombinatorics) -> Result<Vec<Destabilization>, OrderError> {
    let mut steps: Vec<Destabilization> = Vec::new();
    let mut cur = h.clone();
    while cur.genus > 1 {
        match destabilize_leaf(&cur) {
            Ok(d) => {
                cur = d.diagram.clone();
                steps.push(d);
            }
            Err(OrderError::NoLeaf) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(steps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CycleCheck {
    LeafFound { leaf: Vertex },
    /// alternating cycle (μ-edges at even positions) and `μ Δ cycle`
    SecondMatching { cycle: Vec<Edge>, matching: Matching },
}

/// Given a perfect matching `μ` claimed to be unique: either find a leaf,
/// or orient `μ`-edges `A→B` and the others `B→A`, follow out-edges to a
/// directed cycle, and return the matching obtained by exchanging its
/// edges — so a leafless graph never has a unique perfect matching.
pub fn unique_matching_cycle_check(
    gr: &BipartiteMultigraph,
    mu: &[Edge],
) -> Result<CycleCheck, OrderError> {
    if !gr.is_perfect_matching(mu) {
        return Err(OrderError::PreconditionViolated(
            "the given edges are not a perfect matching".into(),
        ));
    }
    if let Some(leaf) = gr.find_leaf() {
        return Ok(CycleCheck::LeafFound { leaf });
    }
    let in_mu: HashSet<Edge> = mu.iter().copied().collect();
    // from B_j, any edge other than its matched one leads back to A
    let back: Vec<Edge> = (0..gr.g)
        .map(|j| {
            *gr.edges
                .iter()
                .find(|e| e.b == j && !in_mu.contains(e))
                .expect("leafless: every B has a second edge")
        })
        .collect();
    let mut pos_of_a = vec![usize::MAX; gr.g];
    let mut walk: Vec<Edge> = Vec::new();
    let mut a = 0;
    let start = loop {
        if pos_of_a[a] != usize::MAX {
            break pos_of_a[a];
        }
        pos_of_a[a] = walk.len();
        let down = mu[a];
        let up = back[down.b];
        walk.push(down);
        walk.push(up);
        a = up.a;
    };
    let cycle: Vec<Edge> = walk[start..].to_vec();
    let mut matching: Vec<Edge> = mu.to_vec();
    for e in cycle.iter().skip(1).step_by(2) {
        matching[e.a] = *e;
    }
    debug_assert!(gr.is_perfect_matching(&matching));
    Ok(CycleCheck::SecondMatching { cycle, matching })
}
