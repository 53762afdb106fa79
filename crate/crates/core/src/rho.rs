//! ρ-invariants of the abelian representations of lens spaces, computed as
//! `4·(area − weighted lattice count)` of a rational right triangle, and the
//! integer invariant `I(𝔰) = 8d(𝔰) ± ρ(ι(𝔰))`.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{rat, rational_serde, solve_rep, ExactError, Rational};
use crate::lensfloer::{d_table, LensError, LensSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RhoError {
    #[error("rho({a},{b},·): gcd(a, b) != 1 or a < 1")]
    BadModulus { a: i64, b: i64 },
    #[error("8d {sign} rho is not an integer for L({p},{q}), index {i}: {value}")]
    IntegralityViolation {
        p: i64,
        q: i64,
        i: i64,
        sign: &'static str,
        value: String,
    },
    #[error(transparent)]
    Lens(#[from] LensError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Area and weighted lattice count of the triangle with vertices
/// `(0,0), (n,0), (n, nb/a)`. Interior points weigh 1, boundary points 1/2,
/// integer vertices 1/4, and the origin is excluded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleCount {
    #[serde(with = "rational_serde")]
    pub area: Rational,
    #[serde(with = "rational_serde")]
    pub int: Rational,
}

pub fn triangle_count(a: i64, b: i64, n: i64) -> TriangleCount {
    assert!(a > 0 && n >= 0 && b >= 0);
    // work in quarters; exact integer arithmetic
    let (a, b, n) = (a as i128, b as i128, n as i128);
    let mut quarters: i128 = 0;
    for x in 1..=n {
        let top_num = x * b; // column height is top_num / a
        let ymax = Integer::div_floor(&top_num, &a);
        let on_hyp = top_num % a == 0;
        for_column(&mut quarters, x == n, ymax, on_hyp);
    }
    TriangleCount {
        area: Rational::new((n * n * b).into(), (2 * a).into()),
        int: Rational::new(quarters.into(), 4.into()),
    }
}

/// Add the weights of the points `(x, 0..=ymax)` in one column, in quarters.
fn for_column(acc: &mut i128, right_edge: bool, ymax: i128, on_hyp: bool) {
    if right_edge {
        // (n,0) and, if integral, (n, nb/a) are vertices; the rest of the
        // right edge is boundary
        let vertices = if on_hyp && ymax > 0 { 2 } else { 1 };
        let edge_points = ymax + 1 - vertices;
        // at height 0 the two vertices coincide and are counted once
        *acc += vertices + edge_points * 2;
    } else {
        // bottom point is boundary; top point is boundary when it lies on
        // the hypotenuse; the rest are interior
        let mut boundary = 1;
        let mut interior = ymax;
        if on_hyp && ymax > 0 {
            boundary += 1;
            interior -= 1;
        }
        *acc += boundary * 2 + interior * 4;
    }
}

/// `ρ(a, b, n)` with `n` read modulo `a`.
pub fn rho(a: i64, b: i64, n: i64) -> Result<Rational, RhoError> {
    if a < 1 || a.gcd(&b) != 1 || b < 0 {
        return Err(RhoError::BadModulus { a, b });
    }
    let n = n.rem_euclid(a);
    let t = triangle_count(a, b, n);
    Ok((t.area - t.int) * Rational::from_integer(4.into()))
}

/// Representation index `n ∈ ℤ/a` of the family `M(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepIndex {
    pub a: i64,
    pub b: i64,
    pub n: i64,
}

impl RepIndex {
    pub fn rho(&self) -> Rational {
        rho(self.a, self.b, self.n).expect("valid representation index")
    }

    pub fn is_trivial(&self) -> bool {
        self.n.rem_euclid(self.a) == 0
    }
}

/// Integers in `[(p-1)/2, (p-1+2q)/2]`.
pub fn spinc_window(p: i64, q: i64) -> Vec<i64> {
    let lo = Integer::div_floor(&p, &2); // ceil((p-1)/2)
    let hi = Integer::div_floor(&(p - 1 + 2 * q), &2);
    (lo..=hi).collect()
}

pub fn n_of_i(p: i64, q: i64, i: i64) -> i64 {
    2 * i + 1 - p - q
}

/// `ι` on the window: index `i` of `L(p,q)` read as the representation
/// `n(i)` of `M(q, s)`, where `ps − qr = 1`.
pub fn iota(p: i64, q: i64, i: i64) -> Result<RepIndex, RhoError> {
    let (_, s) = solve_rep(p, q)?;
    Ok(RepIndex {
        a: q,
        b: s,
        n: n_of_i(p, q, i).rem_euclid(q),
    })
}

/// `ι` on all of `Spin^c(L(p,q))`: index `i` goes to `n(i) mod p` in
/// `M(p, r)`. Spin structures go to the trivial representation.
pub fn iota_global(p: i64, q: i64, i: i64) -> Result<RepIndex, RhoError> {
    let l = LensSpace::new(p, q)?;
    if l.p == 1 {
        return Ok(RepIndex { a: 1, b: 0, n: 0 });
    }
    let (r, _) = solve_rep(l.p, l.q)?;
    Ok(RepIndex {
        a: l.p,
        b: r,
        n: n_of_i(l.p, l.q, i).rem_euclid(l.p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum ISign {
    Plus,
    Minus,
}

impl ISign {
    pub fn as_str(&self) -> &'static str {
        match self {
            ISign::Plus => "+",
            ISign::Minus => "-",
        }
    }
}

/// `8d(𝔰) ± ρ(ι(𝔰))` as an exact rational.
pub fn i_value(p: i64, q: i64, i: i64, sign: ISign) -> Result<Rational, RhoError> {
    let l = LensSpace::new(p, q)?;
    let d = &d_table(l.p, l.q)?[i.rem_euclid(l.p) as usize];
    let r = iota_global(l.p, l.q, i)?.rho();
    let eight = Rational::from_integer(8.into());
    Ok(match sign {
        ISign::Plus => eight * d + r,
        ISign::Minus => eight * d - r,
    })
}

/// `I(𝔰)`, required to be an integer.
pub fn i_invariant(p: i64, q: i64, i: i64, sign: ISign) -> Result<i64, RhoError> {
    let v = i_value(p, q, i, sign)?;
    if !v.denom().is_one() {
        return Err(RhoError::IntegralityViolation {
            p,
            q,
            i,
            sign: sign.as_str(),
            value: crate::exactmath::format_rational(&v),
        });
    }
    Ok(v.to_integer().to_i64().expect("small integer"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IRow {
    pub i: i64,
    #[serde(with = "rational_serde")]
    pub d: Rational,
    pub n: i64,
    #[serde(with = "rational_serde")]
    pub rho: Rational,
    /// `None` when `8d ± ρ` is not integral.
    #[serde(rename = "I")]
    pub value: Option<i64>,
    #[serde(with = "rational_serde")]
    pub exact: Rational,
    pub spin: bool,
}

/// The full `(i, d, n, ρ, I)` table of `L(p,q)`.
pub fn i_table(p: i64, q: i64, sign: ISign) -> Result<Vec<IRow>, RhoError> {
    let l = LensSpace::new(p, q)?;
    let d = d_table(l.p, l.q)?;
    (0..l.p)
        .map(|i| {
            let rep = iota_global(l.p, l.q, i)?;
            let exact = i_value(l.p, l.q, i, sign)?;
            Ok(IRow {
                i,
                d: d[i as usize].clone(),
                n: n_of_i(l.p, l.q, i),
                rho: rep.rho(),
                value: exact.is_integer().then(|| exact.to_integer().to_i64().unwrap()),
                exact,
                spin: l.conjugate(i) == i,
            })
        })
        .collect()
}

/// Which window an index of `Spin^c(L(p,q))` was taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Window {
    First,
    Second,
}

/// For odd `p` the windows share their two (conjugate) endpoints; the
/// endpoint rule decides which one the first window keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Low,
    High,
}

/// Image in `ℤ/p` of the second window `𝒫′ = spinc_window(p, p−q)`, carried
/// over by `L(p,q) ≅ −L(p,p−q)`, which sends index `i` to `i + q`.
pub fn second_window_images(p: i64, q: i64) -> Vec<i64> {
    spinc_window(p, p - q)
        .into_iter()
        .map(|i| (i + q).rem_euclid(p))
        .collect()
}

/// Enumerate `Spin^c(L(p,q))` through the two windows. Returns each index of
/// `0..p` exactly once together with its window; panics if the windows fail
/// to partition `ℤ/p` as described.
pub fn spinc_enumeration(p: i64, q: i64, endpoint: Endpoint) -> Vec<(i64, Window)> {
    if p == 1 {
        return vec![(0, Window::First)];
    }
    let first = spinc_window(p, q);
    let mut first: Vec<i64> = first.into_iter().map(|i| i.rem_euclid(p)).collect();
    let second = second_window_images(p, q);
    if p % 2 == 1 {
        // both windows have one extra point: the shared conjugate endpoints
        let (lo, hi) = (first[0], *first.last().unwrap());
        let drop = match endpoint {
            Endpoint::Low => lo,
            Endpoint::High => hi,
        };
        first.retain(|&i| i != drop);
    }
    let mut out: Vec<(i64, Window)> = first.iter().map(|&i| (i, Window::First)).collect();
    out.extend(
        second
            .into_iter()
            .filter(|i| !first.contains(i))
            .map(|i| (i, Window::Second)),
    );
    let mut seen = vec![false; p as usize];
    for &(i, _) in &out {
        assert!(!seen[i as usize], "windows overlap at {i} for L({p},{q})");
        seen[i as usize] = true;
    }
    assert!(seen.iter().all(|&s| s), "windows do not cover L({p},{q})");
    out
}

/// Vertical gap between the hypotenuses of `Δ(p, r)` and `Δ(q, s)` at `x = n`:
/// `|nr/p − ns/q| = |n|/(pq) ≤ 1/p` for `|n| < q`.
pub fn lattice_segment_bound_holds(p: i64, q: i64, n: i64) -> bool {
    let (r, s) = solve_rep(p, q).expect("valid (p,q)");
    let diff = rat(n * r, p) - rat(n * s, q);
    let diff = if diff < Rational::zero() { -diff } else { diff };
    diff <= rat(1, p)
}
