//! 2-bridge links `K(p,q)`: normal form, alternating 4-plat diagrams,
//! orientation, determinant, linking number, signature (two routes) and the
//! skein resolution of the top crossing.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{
    even_continued_fraction, integer_determinant, positive_continued_fraction,
    symmetric_signature, EvenCF,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwoBridgeError {
    #[error("K({p},{q}): gcd(p, q) != 1")]
    NotCoprime { p: i64, q: i64 },
    #[error("K({p},{q}): p must be at least 1")]
    BadModulus { p: i64, q: i64 },
    #[error("orientation o2 exists only for 2-component links")]
    NoSecondOrientation,
    #[error("linking number is defined only for 2-component links")]
    NotALink,
    #[error("the unknot has no skein resolution")]
    Unknot,
}

/// A 2-bridge link in normal form `0 < q < p` (or the unknot `(1, 0)`).
///
/// `mirror` records that normalization absorbed a sign, i.e. the input was
/// `K(p, -q)`; the link itself is fully determined by `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoBridge {
    pub p: i64,
    pub q: i64,
    pub mirror: bool,
}

impl PartialOrd for TwoBridge {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for TwoBridge {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.p, self.q).cmp(&(o.p, o.q))
    }
}

impl fmt::Display for TwoBridge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({},{})", self.p, self.q)
    }
}

pub fn normalize(p: i64, q: i64) -> Result<TwoBridge, TwoBridgeError> {
    if p < 1 {
        return Err(TwoBridgeError::BadModulus { p, q });
    }
    if p.gcd(&q) != 1 {
        return Err(TwoBridgeError::NotCoprime { p, q });
    }
    if p == 1 {
        return Ok(TwoBridge::UNKNOT);
    }
    Ok(TwoBridge {
        p,
        q: q.rem_euclid(p),
        mirror: q < 0,
    })
}

/// Every normalized 2-bridge link with `p ≤ pmax`, sorted by `(p, q)`.
pub fn family(pmax: i64) -> Vec<TwoBridge> {
    let mut out = vec![TwoBridge::UNKNOT];
    for p in 2..=pmax {
        for q in 1..p {
            if p.gcd(&q) == 1 {
                out.push(TwoBridge { p, q, mirror: false });
            }
        }
    }
    out
}

impl TwoBridge {
    pub const UNKNOT: TwoBridge = TwoBridge {
        p: 1,
        q: 0,
        mirror: false,
    };

    pub fn new(p: i64, q: i64) -> Result<Self, TwoBridgeError> {
        normalize(p, q)
    }

    pub fn is_unknot(&self) -> bool {
        self.p == 1
    }

    /// `K(p, -q) = K(p, p-q)`, with the mirror flag toggled.
    pub fn mirror_image(&self) -> TwoBridge {
        if self.is_unknot() {
            return *self;
        }
        TwoBridge {
            p: self.p,
            q: self.p - self.q,
            mirror: !self.mirror,
        }
    }

    /// Order of `H_1` of the branched double cover `L(p,q)`.
    pub fn determinant(&self) -> i64 {
        self.p
    }

    pub fn components(&self) -> usize {
        if self.p % 2 == 0 {
            2
        } else {
            1
        }
    }

    pub fn orientations(&self) -> Vec<OrientationClass> {
        if self.components() == 2 {
            vec![OrientationClass::O1, OrientationClass::O2]
        } else {
            vec![OrientationClass::O1]
        }
    }

    /// Canonical oriented alternating diagram (orientation `o₁`).
    pub fn diagram(&self) -> PlanarDiagram {
        PlanarDiagram::orient(&raw_crossings(self.p, self.q), None)
    }

    pub fn oriented_diagram(&self, o: OrientationClass) -> Result<PlanarDiagram, TwoBridgeError> {
        match o {
            OrientationClass::O1 => Ok(self.diagram()),
            OrientationClass::O2 if self.components() == 2 => {
                Ok(PlanarDiagram::orient(&raw_crossings(self.p, self.q), Some(1)))
            }
            OrientationClass::O2 => Err(TwoBridgeError::NoSecondOrientation),
        }
    }

    pub fn signature(&self, o: OrientationClass) -> Result<i64, TwoBridgeError> {
        Ok(self.oriented_diagram(o)?.signature())
    }

    pub fn linking_number(&self) -> Result<i64, TwoBridgeError> {
        if self.components() != 2 {
            return Err(TwoBridgeError::NotALink);
        }
        Ok(self.diagram().linking_number())
    }

    /// Signatures from the symmetrized Seifert form of the even continued
    /// fraction. For a knot this is `[σ]`: the form is built from the
    /// unmirrored tangle, so its signature is negated. For a link the two
    /// Schubert normal forms `p/q` and `p/(q-p)` give the signatures of the
    /// two relative orientations, in an order tied to the Schubert form
    /// rather than to `o₁`/`o₂`.
    pub fn seifert_signatures(&self) -> Vec<i64> {
        if self.is_unknot() {
            return vec![0];
        }
        let first = seifert_signature(&even_continued_fraction(self.p, self.q).unwrap());
        if self.components() == 1 {
            vec![-first]
        } else {
            let second =
                seifert_signature(&even_continued_fraction(self.p, self.q - self.p).unwrap());
            vec![first, second]
        }
    }

    /// Resolve the top crossing of the canonical diagram.
    pub fn skein_children(&self) -> Result<SkeinChildren, TwoBridgeError> {
        if self.is_unknot() {
            return Err(TwoBridgeError::Unknot);
        }
        let (p, q) = (self.p, self.q);
        let k0 = if q > 1 {
            normalize(q, -p)?
        } else {
            TwoBridge::UNKNOT
        };
        let k1 = if p - q > 1 {
            normalize(p - q, q)?
        } else {
            TwoBridge::UNKNOT
        };
        let raw = raw_crossings(p, q);
        let d = PlanarDiagram::orient(&raw, None);
        let t = raw.len() - 1;
        let mu = d.crossings[t].sign;
        let c = raw[t];
        // The horizontal smoothing of the last twist closes the remaining
        // tangle to K(p-q, q); the vertical one gives K(q, -p).
        let horizontal = [(c[0], c[1]), (c[2], c[3])];
        let vertical = [(c[1], c[2]), (c[0], c[3])];
        let oriented_is_horizontal = d.oriented_smoothing_is_horizontal(t);
        let (oriented_pairs, other_pairs) = if oriented_is_horizontal {
            (horizontal, vertical)
        } else {
            (vertical, horizontal)
        };
        let oriented_child = smooth(&raw, t, &oriented_pairs);
        let other_child = smooth(&raw, t, &other_pairs);
        // count in the working chirality, where the top crossing is positive
        let n_minus_k: usize = d
            .crossings
            .iter()
            .filter(|x| x.sign * mu < 0)
            .count();
        let other = PlanarDiagram::orient(&other_child, None);
        let n_minus_other = other.crossings.iter().filter(|x| x.sign * mu < 0).count();
        let e = n_minus_other as i64 - n_minus_k as i64;
        Ok(SkeinChildren {
            k0,
            k1,
            oriented: if oriented_is_horizontal {
                SkeinLabel::K1
            } else {
                SkeinLabel::K0
            },
            top_sign: mu,
            e,
            oriented_resolution: oriented_child,
            unoriented_resolution: other_child,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrientationClass {
    #[serde(rename = "o1")]
    O1,
    #[serde(rename = "o2")]
    O2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SkeinLabel {
    K0,
    K1,
}

/// Both resolutions of the top crossing of `K`.
///
/// `k0 = K(q, -p)` and `k1 = K(p-q, q)`; `oriented` says which of them is the
/// orientation-respecting resolution. `e = n₋(unoriented) - n₋(K)`, counted
/// in the chirality where the top crossing is positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkeinChildren {
    pub k0: TwoBridge,
    pub k1: TwoBridge,
    pub oriented: SkeinLabel,
    pub top_sign: i8,
    pub e: i64,
    #[serde(skip)]
    pub oriented_resolution: Vec<[usize; 4]>,
    #[serde(skip)]
    pub unoriented_resolution: Vec<[usize; 4]>,
}

impl SkeinChildren {
    pub fn oriented_child(&self) -> TwoBridge {
        match self.oriented {
            SkeinLabel::K0 => self.k0,
            SkeinLabel::K1 => self.k1,
        }
    }

    pub fn unoriented_child(&self) -> TwoBridge {
        match self.oriented {
            SkeinLabel::K0 => self.k1,
            SkeinLabel::K1 => self.k0,
        }
    }
}

/// Unoriented crossings `(u, o, u', o')` listed counterclockwise with the
/// under-strand at positions 0 and 2.
///
/// A rational tangle is twisted from the `[0]` tangle following the
/// positive continued fraction (odd length, last run horizontal), closed by
/// the numerator closure, and mirrored so that `K(3,1)` is the right-handed
/// trefoil. The last crossing is the outermost horizontal twist.
pub fn raw_crossings(p: i64, q: i64) -> Vec<[usize; 4]> {
    if p == 1 {
        return Vec::new();
    }
    let mut a = positive_continued_fraction(p, q);
    if a.len().is_multiple_of(2) {
        let last = a.pop().unwrap();
        a.push(last - 1);
        a.push(1);
    }
    let mut next = 0usize;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let top = fresh();
    let bottom = fresh();
    let (nw, mut ne, mut sw, mut se) = (top, top, bottom, bottom);
    let mut xs: Vec<[usize; 4]> = Vec::new();
    for (k, &run) in a.iter().rev().enumerate() {
        for _ in 0..run {
            if k % 2 == 0 {
                let (wt, wb) = (ne, se);
                let (et, eb) = (fresh(), fresh());
                xs.push([eb, et, wt, wb]);
                ne = et;
                se = eb;
            } else {
                let (nl, nr) = (sw, se);
                let (sl, sr) = (fresh(), fresh());
                xs.push([sr, nr, nl, sl]);
                sw = sl;
                se = sr;
            }
        }
    }
    // numerator closure: NW~NE, SW~SE
    let mut uf = UnionFind::new(next);
    uf.union(nw, ne);
    uf.union(sw, se);
    let mut relabel: HashMap<usize, usize> = HashMap::new();
    xs.iter()
        .map(|c| {
            let m = c.map(|l| {
                let r = uf.find(l);
                let n = relabel.len();
                *relabel.entry(r).or_insert(n)
            });
            // mirror: swap over and under
            [m[1], m[2], m[3], m[0]]
        })
        .collect()
}

/// Remove crossing `t`, joining the given endpoint label pairs.
pub fn smooth(raw: &[[usize; 4]], t: usize, pairs: &[(usize, usize); 2]) -> Vec<[usize; 4]> {
    let n = raw.iter().flatten().copied().max().map_or(0, |m| m + 1);
    let mut uf = UnionFind::new(n);
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    raw.iter()
        .enumerate()
        .filter(|(i, _)| *i != t)
        .map(|(_, c)| c.map(|l| uf.find(l)))
        .collect()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }
}

/// One oriented crossing in PD form: `pd[0]` is the incoming under-strand,
/// then counterclockwise. The over-strand enters at `pd[3]` for a positive
/// crossing and at `pd[1]` for a negative one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub pd: [usize; 4],
    pub sign: i8,
}

/// Oriented planar diagram; serializes as PD-code JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarDiagram {
    pub crossings: Vec<Crossing>,
    pub components: usize,
    /// component index of every arc label
    pub arc_components: Vec<usize>,
}

impl PlanarDiagram {
    /// Orient unoriented crossings by traversal. Components are discovered in
    /// crossing order, entering the first unvisited strand at position 0 or 1;
    /// `flip` reverses one component afterwards.
    pub fn orient(raw: &[[usize; 4]], flip: Option<usize>) -> PlanarDiagram {
        let nlabels = raw.iter().flatten().copied().max().map_or(0, |m| m + 1);
        let mut occ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nlabels];
        for (ci, c) in raw.iter().enumerate() {
            for (k, &l) in c.iter().enumerate() {
                occ[l].push((ci, k));
            }
        }
        // incoming[ci][parity] = position where that strand enters
        let mut incoming: Vec<[Option<usize>; 2]> = vec![[None, None]; raw.len()];
        let mut comp_of: Vec<[usize; 2]> = vec![[0, 0]; raw.len()];
        let mut arc_components = vec![usize::MAX; nlabels];
        let mut ncomp = 0;
        for ci0 in 0..raw.len() {
            for k0 in 0..2 {
                if incoming[ci0][k0].is_some() {
                    continue;
                }
                let (mut ci, mut k) = (ci0, k0);
                while incoming[ci][k % 2].is_none() {
                    incoming[ci][k % 2] = Some(k);
                    comp_of[ci][k % 2] = ncomp;
                    let out = (k + 2) % 4;
                    let l = raw[ci][out];
                    arc_components[l] = ncomp;
                    let &(nc, nk) = occ[l].iter().find(|&&e| e != (ci, out)).expect("closed arc");
                    ci = nc;
                    k = nk;
                }
                ncomp += 1;
            }
        }
        let ncomp = if raw.is_empty() { 1 } else { ncomp };
        let mut crossings = Vec::with_capacity(raw.len());
        for (ci, c) in raw.iter().enumerate() {
            let mut under_in = incoming[ci][0].unwrap();
            let mut over_in = incoming[ci][1].unwrap();
            if let Some(f) = flip {
                if comp_of[ci][0] == f {
                    under_in = (under_in + 2) % 4;
                }
                if comp_of[ci][1] == f {
                    over_in = (over_in + 2) % 4;
                }
            }
            let sign = if over_in == (under_in + 3) % 4 { 1 } else { -1 };
            let pd = [
                c[under_in],
                c[(under_in + 1) % 4],
                c[(under_in + 2) % 4],
                c[(under_in + 3) % 4],
            ];
            crossings.push(Crossing { pd, sign });
        }
        PlanarDiagram {
            crossings,
            components: ncomp,
            arc_components,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign < 0).count()
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus() as i64 - self.n_minus() as i64
    }

    fn under_component(&self, c: &Crossing) -> usize {
        self.arc_components[c.pd[0]]
    }

    fn over_component(&self, c: &Crossing) -> usize {
        self.arc_components[c.pd[1]]
    }

    /// Half the signed count of crossings between different components.
    pub fn linking_number(&self) -> i64 {
        let s: i64 = self
            .crossings
            .iter()
            .filter(|c| self.under_component(c) != self.over_component(c))
            .map(|c| c.sign as i64)
            .sum();
        debug_assert!(s % 2 == 0);
        s / 2
    }

    /// Every arc label occurs exactly twice.
    pub fn is_well_formed(&self) -> bool {
        let mut count = vec![0usize; self.arc_components.len()];
        for c in &self.crossings {
            for &l in &c.pd {
                if l >= count.len() {
                    return false;
                }
                count[l] += 1;
            }
        }
        count.iter().all(|&n| n == 2)
    }

    /// Each arc runs from an under-crossing to an over-crossing.
    pub fn is_alternating(&self) -> bool {
        let mut parities: Vec<Vec<usize>> = vec![Vec::new(); self.arc_components.len()];
        for c in &self.crossings {
            for (k, &l) in c.pd.iter().enumerate() {
                parities[l].push(k % 2);
            }
        }
        parities.iter().all(|v| v.len() == 2 && v[0] != v[1])
    }

    /// Whether the oriented smoothing of crossing `t` joins positions
    /// (0,1) and (2,3).
    fn oriented_smoothing_is_horizontal(&self, t: usize) -> bool {
        // under enters at 0 and leaves at 2; the over strand leaves at 1 for
        // a positive crossing. The oriented smoothing joins under-in with
        // over-out and over-in with under-out.
        let over_out = if self.crossings[t].sign > 0 { 1 } else { 3 };
        over_out == 1
    }

    /// Regions of the diagram as cycles of corners `(crossing, k)`, where
    /// corner `k` lies between positions `k` and `k+1`.
    pub fn faces(&self) -> (usize, Vec<[usize; 4]>) {
        let mut occ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.arc_components.len()];
        for (ci, c) in self.crossings.iter().enumerate() {
            for (k, &l) in c.pd.iter().enumerate() {
                occ[l].push((ci, k));
            }
        }
        let mut face_of = vec![[usize::MAX; 4]; self.crossings.len()];
        let mut nfaces = 0;
        for ci in 0..self.crossings.len() {
            for k in 0..4 {
                if face_of[ci][k] != usize::MAX {
                    continue;
                }
                let (mut x, mut kk) = (ci, k);
                while face_of[x][kk] == usize::MAX {
                    face_of[x][kk] = nfaces;
                    let e = (kk + 1) % 4;
                    let l = self.crossings[x].pd[e];
                    let &(y, m) = occ[l].iter().find(|&&o| o != (x, e)).unwrap();
                    x = y;
                    kk = m;
                }
                nfaces += 1;
            }
        }
        (nfaces, face_of)
    }

    /// Checkerboard colouring, the Goeritz matrix on the unshaded regions
    /// (first region deleted) and the Gordon–Litherland correction `μ`.
    pub fn goeritz(&self) -> Goeritz {
        if self.crossings.is_empty() {
            return Goeritz {
                matrix: Vec::new(),
                correction: 0,
            };
        }
        let (nfaces, face_of) = self.faces();
        assert_eq!(nfaces, self.crossings.len() + 2, "diagram is not connected and planar");
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nfaces];
        for f in &face_of {
            for k in 0..4 {
                let (a, b) = (f[k], f[(k + 1) % 4]);
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut colour = vec![u8::MAX; nfaces];
        colour[0] = 0;
        let mut stack = vec![0];
        while let Some(f) = stack.pop() {
            for &g in &adj[f] {
                if colour[g] == u8::MAX {
                    colour[g] = 1 - colour[f];
                    stack.push(g);
                } else {
                    assert_ne!(colour[g], colour[f], "regions are not 2-colourable");
                }
            }
        }
        let white: Vec<usize> = (0..nfaces).filter(|&f| colour[f] == 0).collect();
        let mut index = vec![usize::MAX; nfaces];
        for (i, &f) in white.iter().enumerate() {
            index[f] = i;
        }
        let n = white.len();
        let mut g = vec![vec![0i64; n]; n];
        let mut mu = 0i64;
        for (ci, c) in self.crossings.iter().enumerate() {
            // corners 1 and 3 are swept by turning the over-strand
            // counterclockwise; η = +1 when they are shaded
            let eta = if colour[face_of[ci][1]] == 1 { 1 } else { -1 };
            let wc: Vec<usize> = (0..4).filter(|&k| colour[face_of[ci][k]] == 0).collect();
            let (f1, f2) = (face_of[ci][wc[0]], face_of[ci][wc[1]]);
            if f1 != f2 {
                let (i, j) = (index[f1], index[f2]);
                g[i][j] -= eta;
                g[j][i] -= eta;
                g[i][i] += eta;
                g[j][j] += eta;
            }
            // ends: 0 in, 2 out; over in at 3 (positive) or 1 (negative)
            let over_in = if c.sign > 0 { 3 } else { 1 };
            let incoming = |k: usize| k == 0 || k == over_in;
            let shaded = (0..4).find(|&k| colour[face_of[ci][k]] == 1).unwrap();
            if incoming(shaded) == incoming((shaded + 1) % 4) {
                mu += eta;
            }
        }
        let matrix = g[1..]
            .iter()
            .map(|row| row[1..].iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Goeritz {
            matrix,
            correction: mu,
        }
    }

    pub fn signature(&self) -> i64 {
        let g = self.goeritz();
        symmetric_signature(&g.matrix) - g.correction
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Goeritz {
    pub matrix: Vec<Vec<BigInt>>,
    pub correction: i64,
}

impl Goeritz {
    pub fn determinant(&self) -> BigInt {
        integer_determinant(&self.matrix).abs()
    }
}

/// Signature of the tridiagonal symmetrized Seifert form of an even
/// continued fraction.
pub fn seifert_signature(cf: &EvenCF) -> i64 {
    let m = cf.entries.len();
    let mut t = vec![vec![BigInt::from(0); m]; m];
    for i in 0..m {
        let s = if (m - 1 - i).is_multiple_of(2) { 1 } else { -1 };
        t[i][i] = BigInt::from(cf.entries[i] * s);
        if i + 1 < m {
            t[i][i + 1] = BigInt::from(1);
            t[i + 1][i] = BigInt::from(1);
        }
    }
    symmetric_signature(&t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(p: i64, q: i64) -> TwoBridge {
        normalize(p, q).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(k(3, 1), TwoBridge { p: 3, q: 1, mirror: false });
        assert_eq!(k(3, -1), TwoBridge { p: 3, q: 2, mirror: true });
        assert_eq!(k(1, 0), TwoBridge::UNKNOT);
        assert!(normalize(4, 2).is_err());
        assert!(normalize(0, 1).is_err());
        assert_eq!(k(5, 2).mirror_image().mirror_image(), k(5, 2));
    }

    #[test]
    fn determinant_and_components() {
        assert_eq!(TwoBridge::UNKNOT.determinant(), 1);
        assert_eq!(k(3, 1).determinant(), 3);
        assert_eq!(k(2, 1).determinant(), 2);
        assert_eq!(k(3, 1).components(), 1);
        assert_eq!(k(2, 1).components(), 2);
        assert_eq!(TwoBridge::UNKNOT.components(), 1);
    }

    #[test]
    fn diagrams_are_alternating_with_cf_crossing_count() {
        assert_eq!(TwoBridge::UNKNOT.diagram().crossing_count(), 0);
        assert_eq!(k(3, 1).diagram().crossing_count(), 3);
        for kk in family(60) {
            let d = kk.diagram();
            assert!(d.is_well_formed(), "{kk}");
            assert_eq!(d.components, kk.components(), "{kk}");
            if kk.is_unknot() {
                continue;
            }
            assert!(d.is_alternating(), "{kk}");
            let sum: i64 = positive_continued_fraction(kk.p, kk.q).iter().sum();
            assert_eq!(d.crossing_count() as i64, sum, "{kk}");
        }
    }

    #[test]
    fn goeritz_determinant_is_p() {
        assert_eq!(k(5, 2).diagram().goeritz().determinant(), BigInt::from(5));
        for kk in family(100) {
            if kk.is_unknot() {
                continue;
            }
            let g = kk.diagram().goeritz();
            assert_eq!(g.determinant(), BigInt::from(kk.determinant()), "{kk}");
        }
    }

    #[test]
    fn trefoil_chirality_and_hopf() {
        assert_eq!(k(3, 1).signature(OrientationClass::O1).unwrap(), -2);
        assert_eq!(k(3, 2).signature(OrientationClass::O1).unwrap(), 2);
        assert_eq!(TwoBridge::UNKNOT.signature(OrientationClass::O1).unwrap(), 0);
        let h = k(2, 1);
        let lk = h.linking_number().unwrap();
        assert_eq!(lk.abs(), 1);
        let s1 = h.signature(OrientationClass::O1).unwrap();
        let s2 = h.signature(OrientationClass::O2).unwrap();
        assert_eq!(s2 - s1, 2 * lk);
        assert_eq!(k(4, 1).linking_number().unwrap().abs(), 2);
        assert!(k(3, 1).linking_number().is_err());
        assert!(k(3, 1).signature(OrientationClass::O2).is_err());
    }

    /// Alternating-diagram signature oracle: σ = s_A − n₊ − 1 where s_A is
    /// the number of loops in the all-0 smoothing.
    fn traczyk(d: &PlanarDiagram) -> i64 {
        let n = d.arc_components.len();
        let mut uf = UnionFind::new(n);
        for c in &d.crossings {
            uf.union(c.pd[0], c.pd[1]);
            uf.union(c.pd[2], c.pd[3]);
        }
        let loops = (0..n).filter(|&l| uf.find(l) == l).count() as i64;
        loops - d.n_plus() as i64 - 1
    }

    #[test]
    fn signature_routes_agree() {
        for kk in family(100) {
            if kk.is_unknot() {
                continue;
            }
            let d = kk.diagram();
            let s1 = d.signature();
            assert_eq!(s1, traczyk(&d), "{kk}");
            assert_eq!(s1.rem_euclid(2), kk.components() as i64 - 1, "{kk}");
            let seif = kk.seifert_signatures();
            if kk.components() == 1 {
                assert_eq!(seif, vec![s1], "{kk}");
            } else {
                let s2 = kk.signature(OrientationClass::O2).unwrap();
                assert_eq!(s2 - s1, 2 * kk.linking_number().unwrap(), "{kk}");
                let mut a = vec![s1, s2];
                let mut b = seif.clone();
                a.sort();
                b.sort();
                assert_eq!(a, b, "{kk}");
            }
        }
    }

    #[test]
    fn mirror_negates_signature() {
        // for links the mirror may exchange the two orientation classes,
        // so only the set of signatures is negated
        let sigs = |k: &TwoBridge| {
            let mut v: Vec<i64> = k
                .orientations()
                .into_iter()
                .map(|o| k.signature(o).unwrap())
                .collect();
            v.sort();
            v
        };
        for kk in family(40) {
            let mut neg: Vec<i64> = sigs(&kk).iter().map(|s| -s).collect();
            neg.sort();
            assert_eq!(sigs(&kk.mirror_image()), neg, "{kk}");
        }
    }

    #[test]
    fn skein_children_examples() {
        let c = k(3, 1).skein_children().unwrap();
        assert_eq!(c.k0, TwoBridge::UNKNOT);
        assert_eq!(c.k1.p, 2);
        let c = k(2, 1).skein_children().unwrap();
        assert_eq!((c.k0, c.k1), (TwoBridge::UNKNOT, TwoBridge::UNKNOT));
        let c = k(5, 3).skein_children().unwrap();
        assert_eq!(c.k0, normalize(3, -5).unwrap());
        assert_eq!(c.k1, normalize(2, 3).unwrap());
        assert_eq!((c.k0.determinant(), c.k1.determinant()), (3, 2));
        assert!(TwoBridge::UNKNOT.skein_children().is_err());
    }

    #[test]
    fn skein_children_structure() {
        for kk in family(60) {
            if kk.is_unknot() {
                continue;
            }
            let c = kk.skein_children().unwrap();
            assert_eq!(kk.determinant(), c.k0.determinant() + c.k1.determinant(), "{kk}");
            let or = PlanarDiagram::orient(&c.oriented_resolution, None);
            let un = PlanarDiagram::orient(&c.unoriented_resolution, None);
            assert_eq!(un.components, 1, "{kk}");
            assert_eq!(or.components + kk.components(), 3, "{kk}");
            // the oriented child of a knot is a link with lk = e/2
            if kk.components() == 1 {
                let d = kk.diagram();
                let t = d.crossings.len() - 1;
                let mu = d.crossings[t].sign as i64;
                let raw = raw_crossings(kk.p, kk.q);
                let inherited = inherited_linking(&d, &raw, t, &c.oriented_resolution) * mu;
                assert_eq!(c.e, 2 * inherited, "{kk}");
            }
        }
    }

    /// Linking number of the oriented resolution, with crossing signs
    /// inherited from the parent diagram.
    fn inherited_linking(
        d: &PlanarDiagram,
        _raw: &[[usize; 4]],
        t: usize,
        child: &[[usize; 4]],
    ) -> i64 {
        let cd = PlanarDiagram::orient(child, None);
        let signs: Vec<i64> = (0..d.crossings.len())
            .filter(|&i| i != t)
            .map(|i| d.crossings[i].sign as i64)
            .collect();
        let s: i64 = cd
            .crossings
            .iter()
            .zip(&signs)
            .filter(|(c, _)| cd.arc_components[c.pd[0]] != cd.arc_components[c.pd[1]])
            .map(|(_, s)| s)
            .sum();
        s / 2
    }

    #[test]
    fn pd_json_shape() {
        let d = k(3, 1).diagram();
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["crossings"].as_array().unwrap().len(), 3);
        assert!(v["crossings"][0]["pd"].is_array());
        assert!(v["crossings"][0]["sign"].is_i64());
        let back: PlanarDiagram = serde_json::from_value(v).unwrap();
        assert_eq!(back, d);
    }
}
