use std::collections::HashMap;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exactmat::{CoeffRing, FqMatrix};
use crate::vicat::{
    coset_representatives, enumerate_group, gl_generators, gl_order, GroupTable, ViMorphism,
};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;
pub const DEFAULT_GROUP_CAP: u64 = 25_000;

/// Canonical coset representatives for `Hom_VI(F^d, F^n) / GL_d` and their
/// positions.
#[derive(Debug)]
pub struct CosetTable {
    pub reps: Vec<ViMorphism>,
    index: HashMap<FqMatrix, usize>,
}

impl CosetTable {
    pub fn position(&self, canonical: &ViMorphism) -> usize {
        self.index[canonical.matrix()]
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Write-once memo table: concurrent inserts keep the first value.
#[derive(Debug)]
struct Memo<K, V> {
    map: Mutex<HashMap<K, V>>,
}

impl<K: Eq + Hash, V: Clone> Memo<K, V> {
    fn new() -> Self {
        Memo {
            map: Mutex::new(HashMap::new()),
        }
    }

    fn get_or_try(&self, key: K, stats: &CacheStats, f: impl FnOnce() -> Result<V>) -> Result<V> {
        if let Some(v) = self.map.lock().unwrap().get(&key) {
            stats.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v.clone());
        }
        stats.misses.fetch_add(1, Ordering::Relaxed);
        let v = f()?;
        Ok(self.map.lock().unwrap().entry(key).or_insert(v).clone())
    }
}

#[derive(Debug, Default)]
struct CacheStats {
    hits: AtomicU64,
    misses: AtomicU64,
}

#[derive(Debug)]
struct Inner {
    q: u32,
    ring: CoeffRing,
    enumeration_cap: u64,
    group_cap: u64,
    cosets: Memo<(usize, usize), Arc<CosetTable>>,
    groups: Memo<usize, Arc<GroupTable>>,
    stats: CacheStats,
}

/// Field, coefficient ring, caps and shared combinatorial caches.
#[derive(Debug, Clone)]
pub struct ViContext {
    inner: Arc<Inner>,
}

impl PartialEq for ViContext {
    fn eq(&self, other: &Self) -> bool {
        self.q() == other.q() && self.ring() == other.ring()
    }
}

impl ViContext {
    pub fn new(q: u32, ring: CoeffRing) -> Result<Self> {
        Self::with_caps(q, ring, DEFAULT_ENUMERATION_CAP, DEFAULT_GROUP_CAP)
    }

    pub fn rational(q: u32) -> Result<Self> {
        Self::new(q, CoeffRing::Rational)
    }

    pub fn with_caps(
        q: u32,
        ring: CoeffRing,
        enumeration_cap: u64,
        group_cap: u64,
    ) -> Result<Self> {
        ring.validate_for(q)?;
        Ok(ViContext {
            inner: Arc::new(Inner {
                q,
                ring,
                enumeration_cap,
                group_cap,
                cosets: Memo::new(),
                groups: Memo::new(),
                stats: CacheStats::default(),
            }),
        })
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn ring(&self) -> CoeffRing {
        self.inner.ring
    }

    pub fn enumeration_cap(&self) -> u64 {
        self.inner.enumeration_cap
    }

    pub fn group_cap(&self) -> u64 {
        self.inner.group_cap
    }

    pub fn same_as(&self, other: &ViContext) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self == other
    }

    pub fn check_same(&self, other: &ViContext) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn cosets(&self, d: usize, n: usize) -> Result<Arc<CosetTable>> {
        self.inner.cosets.get_or_try((d, n), &self.inner.stats, || {
            let reps = coset_representatives(self.q(), d, n, self.enumeration_cap())?;
            let index = reps
                .iter()
                .enumerate()
                .map(|(i, r)| (r.matrix().clone(), i))
                .collect();
            Ok(Arc::new(CosetTable { reps, index }))
        })
    }

    pub fn gl_generators(&self, n: usize) -> Vec<FqMatrix> {
        gl_generators(self.q(), n).gens
    }

    pub fn gl_order(&self, d: usize) -> BigUint {
        gl_order(self.q(), d)
    }

    /// Whether `GL_d` is small enough to enumerate under the group cap.
    pub fn gl_enumerable(&self, d: usize) -> bool {
        self.gl_order(d) <= BigUint::from(self.group_cap())
    }

    /// All of `GL_d` with its Cayley table for the standard generators.
    pub fn gl_group(&self, d: usize) -> Result<Arc<GroupTable>> {
        let order = self.gl_order(d);
        if order > BigUint::from(self.group_cap()) {
            return Err(Error::too_large(format!("GL_{d}"), order, self.group_cap()));
        }
        self.inner.groups.get_or_try(d, &self.inner.stats, || {
            let gens = self.gl_generators(d);
            let table = enumerate_group(&gens, d, self.q(), self.group_cap())?;
            debug_assert_eq!(BigUint::from(table.elements.len()), order);
            Ok(Arc::new(table))
        })
    }

    /// `(hits, misses)` of the in-memory combinatorial caches.
    pub fn cache_stats(&self) -> (u64, u64) {
        (
            self.inner.stats.hits.load(Ordering::Relaxed),
            self.inner.stats.misses.load(Ordering::Relaxed),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_cache_is_write_once() {
        let ctx = ViContext::rational(2).unwrap();
        let a = ctx.cosets(1, 3).unwrap();
        let b = ctx.cosets(1, 3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.len(), 7);
        assert_eq!(ctx.cache_stats(), (1, 1));
        for (i, r) in a.reps.iter().enumerate() {
            assert_eq!(a.position(r), i);
        }
    }

    #[test]
    fn describing_characteristic_rejected() {
        assert!(matches!(
            ViContext::new(3, CoeffRing::Modular(3)),
            Err(Error::UnsupportedField(_))
        ));
        assert!(ViContext::new(4, CoeffRing::Rational).is_err());
    }

    #[test]
    fn group_cap_enforced() {
        let ctx = ViContext::rational(3).unwrap();
        assert_eq!(ctx.gl_group(2).unwrap().elements.len(), 48);
        assert!(matches!(ctx.gl_group(4), Err(Error::TooLarge { .. })));
    }
}
