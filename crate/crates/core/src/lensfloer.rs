//! Correction terms `d(L(p,q), i)` of lens spaces, indexed by `ℤ/p`.
//!
//! Tables are built by the Euclidean recursion
//! `d(L(p,q),i) = -1/4 + (2i+1-p-q)²/(4pq) - d(L(q, p mod q), i mod q)`
//! with `d(L(1,0), 0) = 0`, and memoized per `(p, q)`.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::{format_rational, parse_rational, rat, rat_int, rational_serde, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LensError {
    #[error("L({p},{q}): gcd(p, q) != 1")]
    NotCoprime { p: i64, q: i64 },
    #[error("L({p},{q}): p must be at least 1")]
    BadModulus { p: i64, q: i64 },
    #[error("index {i} out of range 0..{p}")]
    IndexOutOfRange { p: i64, i: i64 },
}

/// Lens space `L(p,q)` with `0 ≤ q < p` (`L(1,0) = S³`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LensSpace {
    pub p: i64,
    pub q: i64,
}

impl LensSpace {
    pub fn new(p: i64, q: i64) -> Result<Self, LensError> {
        if p < 1 {
            return Err(LensError::BadModulus { p, q });
        }
        if p.gcd(&q) != 1 {
            return Err(LensError::NotCoprime { p, q });
        }
        Ok(LensSpace {
            p,
            q: q.rem_euclid(p),
        })
    }

    /// Index of the conjugate Spin^c structure.
    pub fn conjugate(&self, i: i64) -> i64 {
        (self.p + self.q - 1 - i).rem_euclid(self.p)
    }

    pub fn spin_indices(&self) -> Vec<i64> {
        (0..self.p).filter(|&i| self.conjugate(i) == i).collect()
    }
}

type TableMap = HashMap<(i64, i64), Arc<Vec<Rational>>>;

/// Concurrent memo of whole d-tables, optionally mirrored to a directory.
pub struct DTableCache {
    tables: RwLock<TableMap>,
    dir: Option<PathBuf>,
}

static GLOBAL: OnceLock<DTableCache> = OnceLock::new();

/// Environment variable naming a directory for persisted d-tables.
pub const CACHE_DIR_ENV: &str = "TWOBRIDGE_DCACHE";

impl DTableCache {
    pub fn in_memory() -> Self {
        DTableCache {
            tables: RwLock::new(HashMap::new()),
            dir: None,
        }
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        DTableCache {
            tables: RwLock::new(HashMap::new()),
            dir: Some(dir.into()),
        }
    }

    /// Process-wide cache; persisted when `TWOBRIDGE_DCACHE` is set.
    pub fn global() -> &'static DTableCache {
        GLOBAL.get_or_init(|| match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => DTableCache::with_dir(d),
            _ => DTableCache::in_memory(),
        })
    }

    fn file(&self, p: i64, q: i64) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("d_{p}_{q}.json")))
    }

    fn load(&self, p: i64, q: i64) -> Option<Vec<Rational>> {
        let text = fs::read_to_string(self.file(p, q)?).ok()?;
        let raw: Vec<String> = serde_json::from_str(&text).ok()?;
        let v: Option<Vec<Rational>> = raw.iter().map(|s| parse_rational(s).ok()).collect();
        v.filter(|v| v.len() == p as usize)
    }

    fn store(&self, p: i64, q: i64, v: &[Rational]) {
        let Some(path) = self.file(p, q) else { return };
        if let Some(parent) = path.parent() {
            let _ = fs::create_dir_all(parent);
        }
        let raw: Vec<String> = v.iter().map(format_rational).collect();
        // the cache is an optimization; failing to persist is not an error
        let _ = fs::write(path, serde_json::to_string(&raw).unwrap());
    }

    /// All `p` values `d(L(p,q), i)`, `i = 0..p`.
    pub fn table(&self, l: LensSpace) -> Arc<Vec<Rational>> {
        let key = (l.p, l.q);
        if let Some(t) = self.tables.read().unwrap().get(&key) {
            return t.clone();
        }
        let t = Arc::new(match self.load(l.p, l.q) {
            Some(v) => v,
            None => {
                let v = self.compute(l);
                self.store(l.p, l.q, &v);
                v
            }
        });
        self.tables.write().unwrap().entry(key).or_insert(t).clone()
    }

    fn compute(&self, l: LensSpace) -> Vec<Rational> {
        let (p, q) = (l.p, l.q);
        if p == 1 {
            return vec![rat_int(0)];
        }
        let child = self.table(LensSpace { p: q, q: p % q });
        (0..p)
            .map(|i| {
                let n = 2 * i + 1 - p - q;
                rat(-1, 4) + rat(n * n, 4 * p * q) - &child[(i % q) as usize]
            })
            .collect()
    }
}

pub fn d_table(p: i64, q: i64) -> Result<Arc<Vec<Rational>>, LensError> {
    Ok(DTableCache::global().table(LensSpace::new(p, q)?))
}

/// `d(L(p,q), i)`, reducing `i` modulo `p`.
pub fn d_invariant(p: i64, q: i64, i: i64) -> Result<Rational, LensError> {
    let t = d_table(p, q)?;
    Ok(t[i.rem_euclid(p) as usize].clone())
}

/// As [`d_invariant`], but rejects `i` outside `0..p`.
pub fn d_invariant_strict(p: i64, q: i64, i: i64) -> Result<Rational, LensError> {
    let l = LensSpace::new(p, q)?;
    if !(0..p).contains(&i) {
        return Err(LensError::IndexOutOfRange { p, i });
    }
    Ok(DTableCache::global().table(l)[i as usize].clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpincRow {
    pub i: i64,
    #[serde(with = "rational_serde")]
    pub d: Rational,
    pub spin: bool,
    pub conjugate: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpincTable {
    pub p: i64,
    pub q: i64,
    pub rows: Vec<SpincRow>,
}

pub fn spinc_table(p: i64, q: i64) -> Result<SpincTable, LensError> {
    let l = LensSpace::new(p, q)?;
    let t = DTableCache::global().table(l);
    let rows = (0..l.p)
        .map(|i| SpincRow {
            i,
            d: t[i as usize].clone(),
            spin: l.conjugate(i) == i,
            conjugate: l.conjugate(i),
        })
        .collect();
    Ok(SpincTable { p: l.p, q: l.q, rows })
}

/// Number of division steps of the Euclidean algorithm on `(p, q)`.
pub fn recursion_depth(p: i64, q: i64) -> usize {
    let (mut a, mut b, mut n) = (p, q.rem_euclid(p.max(1)), 0);
    while a > 1 {
        (a, b) = (b, a % b);
        n += 1;
    }
    n
}
