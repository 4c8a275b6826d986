//! Read-through access to oracle values: in-process memo, then the cache
//! file, then a fresh search. Odd-prime classification lives here because it
//! is the one input the closed forms take from the oracle.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use log::info;

use crate::cache::{Cache, CacheKey};
use crate::error::{Error, Result};
use crate::group::{is_prime, GroupSpec};
use crate::oracle::{exact_record, OracleConfig};
use crate::record::{AwRecord, Mode};

/// Primes up to this bound are classified by search even when the general
/// order bound is lower.
pub const DEFAULT_MAX_PRIME: u64 = 47;

/// `aw(Z_p, 3)` for an odd prime `p`; always 3 or 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeClass {
    pub p: u64,
    pub aw_value: u64,
}

#[derive(Debug)]
pub struct Classifier {
    oracle: OracleConfig,
    max_prime: u64,
    cache: Option<Arc<Cache>>,
    memo: RwLock<HashMap<CacheKey, AwRecord>>,
}

impl Default for Classifier {
    fn default() -> Self {
        Self::new(OracleConfig::default())
    }
}

impl Classifier {
    pub fn new(oracle: OracleConfig) -> Self {
        Self {
            oracle,
            max_prime: DEFAULT_MAX_PRIME,
            cache: None,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_cache(mut self, cache: Arc<Cache>) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn with_max_prime(mut self, max_prime: u64) -> Self {
        self.max_prime = max_prime;
        self
    }

    pub fn oracle_config(&self) -> &OracleConfig {
        &self.oracle
    }

    pub fn max_prime(&self) -> u64 {
        self.max_prime
    }

    pub fn cache(&self) -> Option<&Arc<Cache>> {
        self.cache.as_ref()
    }

    fn order_bound(&self, spec: &GroupSpec) -> usize {
        let order = spec.order() as u64;
        let prime_cyclic = spec.primary_decomposition().factors().len() == 1 && is_prime(order);
        if prime_cyclic && order <= self.max_prime {
            self.oracle.max_order.max(order as usize)
        } else {
            self.oracle.max_order
        }
    }

    /// Whether `exact(spec, k, mode)` can answer without refusing.
    pub fn is_available(&self, spec: &GroupSpec, k: usize, mode: Mode) -> bool {
        let key = CacheKey::new(spec, k, mode);
        spec.order() <= self.order_bound(spec)
            || self.memo.read().expect("memo lock").contains_key(&key)
            || self.cache.as_ref().is_some_and(|c| c.get(&key).is_some())
    }

    /// Exact value with witness, presented over `spec`.
    pub fn exact(&self, spec: &GroupSpec, k: usize, mode: Mode) -> Result<AwRecord> {
        let key = CacheKey::new(spec, k, mode);
        let canonical = self.canonical_exact(spec, &key, k, mode)?;
        Ok(present(canonical, spec))
    }

    fn canonical_exact(
        &self,
        spec: &GroupSpec,
        key: &CacheKey,
        k: usize,
        mode: Mode,
    ) -> Result<AwRecord> {
        if let Some(hit) = self.memo.read().expect("memo lock").get(key) {
            return Ok(hit.clone());
        }
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.get(key)) {
            self.memo
                .write()
                .expect("memo lock")
                .insert(key.clone(), hit.clone());
            return Ok(hit);
        }
        let canonical_spec = spec.primary_decomposition().canonical_spec();
        let config = self.oracle.clone().with_max_order(self.order_bound(spec));
        info!("searching {canonical_spec} ({mode}, k={k})");
        let record = exact_record(&canonical_spec, k, mode, &config)?;
        if let Some(cache) = &self.cache {
            cache.put(&record)?;
        }
        self.memo
            .write()
            .expect("memo lock")
            .insert(key.clone(), record.clone());
        Ok(record)
    }

    pub fn classify_odd_prime(&self, p: u64) -> Result<PrimeClass> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let record = self.prime_record(p, Mode::Aw)?;
        Ok(PrimeClass {
            p,
            aw_value: record.value,
        })
    }

    /// Oracle record for `Z_p`, or `UnclassifiedPrime` if out of reach.
    pub fn prime_record(&self, p: u64, mode: Mode) -> Result<AwRecord> {
        let spec = GroupSpec::cyclic(p)?;
        match self.exact(&spec, 3, mode) {
            Err(Error::Infeasible { .. }) => Err(Error::UnclassifiedPrime(p)),
            other => other,
        }
    }
}

/// Carries a canonical-presentation record over to `spec`.
fn present(mut record: AwRecord, spec: &GroupSpec) -> AwRecord {
    if &record.spec != spec {
        let map = spec.canonical_map();
        record.witness = record.witness.map(|w| w.pullback(&map));
        record.spec = spec.clone();
    }
    record
}
