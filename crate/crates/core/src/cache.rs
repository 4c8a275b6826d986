//! JSON store of oracle results, keyed by isomorphism class.
//!
//! ```json
//! { "schema_version": 1,
//!   "entries": [ { "group": "2^2·3", "k": 3, "mode": "aw", "value": 4,
//!                  "provenance": "oracle", "witness": [0,1,1,2, ...] } ] }
//! ```
//!
//! Witnesses are stored over the canonical presentation of the group (prime
//! powers sorted by prime, then exponent descending), color ids 0-based in
//! element-index order. Every write replaces the file atomically.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::ap::{enumerate_aps, find_rainbow};
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::group::{GroupSpec, PrimaryDecomposition};
use crate::record::{AwRecord, Mode, Provenance};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_CACHE_PATH: &str = "aw-cache.json";
pub const CACHE_ENV_VAR: &str = "AW_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CacheKey {
    pub group: String,
    pub k: usize,
    pub mode: Mode,
}

impl CacheKey {
    pub fn new(spec: &GroupSpec, k: usize, mode: Mode) -> Self {
        Self {
            group: spec.primary_decomposition().key(),
            k,
            mode,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub group: String,
    pub k: usize,
    pub mode: Mode,
    pub value: u64,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u32>>,
}

impl CacheEntry {
    pub fn key(&self) -> CacheKey {
        CacheKey {
            group: self.group.clone(),
            k: self.k,
            mode: self.mode,
        }
    }

    /// Moves the witness onto the canonical presentation.
    pub fn from_record(record: &AwRecord) -> Self {
        let decomposition = record.spec.primary_decomposition();
        let witness = record.witness.as_ref().map(|w| {
            let map = record.spec.canonical_map();
            let mut canonical = vec![0u32; map.len()];
            for (i, &j) in map.iter().enumerate() {
                canonical[j] = w.color(i);
            }
            Coloring::from(canonical).into()
        });
        Self {
            group: decomposition.key(),
            k: record.k,
            mode: record.mode,
            value: record.value,
            provenance: record.provenance,
            witness,
        }
    }

    /// Record over the canonical presentation, provenance as stored.
    pub fn to_record(&self) -> Result<AwRecord> {
        let spec = PrimaryDecomposition::from_key(&self.group)?.canonical_spec();
        Ok(AwRecord {
            spec,
            k: self.k,
            mode: self.mode,
            value: self.value,
            provenance: self.provenance,
            witness: self.witness.clone().map(Coloring::from),
        })
    }

    /// Checks the witness against a freshly built catalog.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let spec = PrimaryDecomposition::from_key(&self.group)
            .map_err(|e| e.to_string())?
            .canonical_spec();
        let Some(raw) = &self.witness else {
            return Ok(());
        };
        if raw.len() != spec.order() {
            return Err(format!(
                "witness has {} entries, group order is {}",
                raw.len(),
                spec.order()
            ));
        }
        let witness = Coloring::from(raw.clone());
        if witness.num_colors() as u64 + 1 != self.value {
            return Err(format!(
                "witness uses {} colors but value is {}",
                witness.num_colors(),
                self.value
            ));
        }
        if self.mode == Mode::Awu && !witness.is_unitary() {
            return Err("unitary witness has no singleton class".to_string());
        }
        let catalog = enumerate_aps(&spec, self.k).map_err(|e| e.to_string())?;
        if let Some(ap) = find_rainbow(&witness, &catalog) {
            return Err(format!("witness contains rainbow progression {ap:?}"));
        }
        Ok(())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    schema_version: u32,
    entries: Vec<CacheEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlaggedEntry {
    pub group: String,
    pub k: usize,
    pub mode: Mode,
    pub reason: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checked: usize,
    pub flagged: Vec<FlaggedEntry>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.flagged.is_empty()
    }
}

/// File-backed cache. Readers share the map; writers serialize on
/// `write_lock` and replace the file by rename.
#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    entries: RwLock<BTreeMap<CacheKey, CacheEntry>>,
    rejected: Vec<FlaggedEntry>,
    write_lock: Mutex<()>,
}

impl Cache {
    /// Loads `path`, or starts empty if it does not exist. Entries whose
    /// witness fails verification are dropped with a warning and reported
    /// by [`Cache::verify_all`].
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        let mut rejected = Vec::new();
        if path.exists() {
            let text = fs::read_to_string(&path)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let found = value
                .get("schema_version")
                .and_then(serde_json::Value::as_u64)
                .unwrap_or(0) as u32;
            if found != SCHEMA_VERSION {
                return Err(Error::SchemaMismatch {
                    path,
                    found,
                    expected: SCHEMA_VERSION,
                });
            }
            let file: CacheFile = serde_json::from_value(value)?;
            for entry in file.entries {
                match entry.verify() {
                    Ok(()) => {
                        entries.insert(entry.key(), entry);
                    }
                    Err(reason) => {
                        warn!(
                            "dropping cache entry {} k={} {}: {reason}",
                            entry.group, entry.k, entry.mode
                        );
                        rejected.push(FlaggedEntry {
                            group: entry.group,
                            k: entry.k,
                            mode: entry.mode,
                            reason,
                        });
                    }
                }
            }
        }
        Ok(Self {
            path,
            entries: RwLock::new(entries),
            rejected,
            write_lock: Mutex::new(()),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries dropped while loading.
    pub fn rejected(&self) -> &[FlaggedEntry] {
        &self.rejected
    }

    /// Record over the canonical presentation with provenance `cache`.
    pub fn get(&self, key: &CacheKey) -> Option<AwRecord> {
        let entries = self.entries.read().expect("cache lock");
        let entry = entries.get(key)?;
        let mut record = entry.to_record().ok()?;
        record.provenance = Provenance::Cache;
        Some(record)
    }

    pub fn put(&self, record: &AwRecord) -> Result<()> {
        let entry = CacheEntry::from_record(record);
        let _writer = self.write_lock.lock().expect("cache write lock");
        let snapshot = {
            let mut entries = self.entries.write().expect("cache lock");
            entries.insert(entry.key(), entry);
            CacheFile {
                schema_version: SCHEMA_VERSION,
                entries: entries.values().cloned().collect(),
            }
        };
        self.write_atomic(&snapshot)
    }

    fn write_atomic(&self, file: &CacheFile) -> Result<()> {
        let dir = match self.path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        serde_json::to_writer_pretty(&mut tmp, file)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(&self.path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    /// Re-verifies every entry; entries rejected at load are included.
    pub fn verify_all(&self) -> VerifyReport {
        let entries = self.entries.read().expect("cache lock");
        let mut report = VerifyReport {
            checked: entries.len() + self.rejected.len(),
            flagged: self.rejected.clone(),
        };
        for entry in entries.values() {
            if let Err(reason) = entry.verify() {
                report.flagged.push(FlaggedEntry {
                    group: entry.group.clone(),
                    k: entry.k,
                    mode: entry.mode,
                    reason,
                });
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{aw_exact, awu_exact, OracleConfig};
    use proptest::prelude::*;

    fn spec(f: &[u64]) -> GroupSpec {
        GroupSpec::new(f.to_vec()).unwrap()
    }

    #[test]
    fn get_missing_is_none() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path().join("c.json")).unwrap();
        assert!(cache
            .get(&CacheKey::new(&spec(&[5]), 3, Mode::Aw))
            .is_none());
        assert!(cache.is_empty());
    }

    #[test]
    fn put_then_get_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        let record = aw_exact(&spec(&[12]), 3, &OracleConfig::default()).unwrap();
        {
            let cache = Cache::open(&path).unwrap();
            cache.put(&record).unwrap();
            let got = cache
                .get(&CacheKey::new(&spec(&[12]), 3, Mode::Aw))
                .unwrap();
            assert_eq!(got.value, record.value);
            assert_eq!(got.provenance, Provenance::Cache);
        }
        let cache = Cache::open(&path).unwrap();
        let got = cache
            .get(&CacheKey::new(&spec(&[4, 3]), 3, Mode::Aw))
            .unwrap();
        assert_eq!(got.value, record.value);
        assert_eq!(got.spec, spec(&[4, 3]));
        assert!(cache.verify_all().is_clean());

        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"group\": \"2^2·3\""));
        assert!(text.contains("\"schema_version\": 1"));
    }

    #[test]
    fn presentations_share_an_entry() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path().join("c.json")).unwrap();
        let record = awu_exact(&spec(&[6]), 3, &OracleConfig::default()).unwrap();
        cache.put(&record).unwrap();
        let hit = cache
            .get(&CacheKey::new(&spec(&[2, 3]), 3, Mode::Awu))
            .unwrap();
        assert_eq!(hit.value, record.value);
        assert!(cache.verify_all().is_clean());
    }

    #[test]
    fn tampered_witness_is_flagged() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        let cache = Cache::open(&path).unwrap();
        cache
            .put(&aw_exact(&spec(&[5]), 3, &OracleConfig::default()).unwrap())
            .unwrap();
        cache
            .put(&aw_exact(&spec(&[3]), 3, &OracleConfig::default()).unwrap())
            .unwrap();
        drop(cache);

        // Z_5 witness swapped for a 3-coloring containing the rainbow {0,1,2}
        let text = fs::read_to_string(&path).unwrap();
        let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
        for entry in json["entries"].as_array_mut().unwrap() {
            if entry["group"] == "5" {
                entry["witness"] = serde_json::json!([0, 1, 2, 2, 2]);
                entry["value"] = serde_json::json!(4);
            }
        }
        fs::write(&path, serde_json::to_string(&json).unwrap()).unwrap();

        let cache = Cache::open(&path).unwrap();
        assert!(cache
            .get(&CacheKey::new(&spec(&[5]), 3, Mode::Aw))
            .is_none());
        assert!(cache
            .get(&CacheKey::new(&spec(&[3]), 3, Mode::Aw))
            .is_some());
        let report = cache.verify_all();
        assert_eq!(report.checked, 2);
        assert_eq!(report.flagged.len(), 1);
        assert_eq!(report.flagged[0].group, "5");
        assert!(report.flagged[0].reason.contains("rainbow"));
    }

    #[test]
    fn schema_mismatch_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, r#"{"schema_version": 7, "entries": []}"#).unwrap();
        assert!(matches!(
            Cache::open(&path),
            Err(Error::SchemaMismatch { found: 7, .. })
        ));
    }

    fn arb_record() -> impl Strategy<Value = AwRecord> {
        let groups = prop::sample::select(vec![
            vec![1u64],
            vec![2],
            vec![6],
            vec![2, 3],
            vec![4, 2],
            vec![9],
            vec![3, 3],
        ]);
        (
            groups,
            prop::bool::ANY,
            prop::bool::ANY,
            prop::sample::select(vec![
                Provenance::Formula,
                Provenance::Oracle,
                Provenance::Cache,
            ]),
        )
            .prop_map(|(f, unitary, with_witness, provenance)| {
                let g = spec(&f);
                let mode = if unitary { Mode::Awu } else { Mode::Aw };
                let mut record =
                    crate::oracle::exact_record(&g, 3, mode, &OracleConfig::default()).unwrap();
                record.provenance = provenance;
                if !with_witness {
                    record.witness = None;
                }
                record
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn entry_round_trip(record in arb_record()) {
            let entry = CacheEntry::from_record(&record);
            let json = serde_json::to_string(&entry).unwrap();
            let back: CacheEntry = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(&back, &entry);
            let rebuilt = back.to_record().unwrap();
            prop_assert_eq!(rebuilt.value, record.value);
            prop_assert_eq!(rebuilt.provenance, record.provenance);
            prop_assert_eq!(&rebuilt.spec, &record.spec.primary_decomposition().canonical_spec());
            prop_assert!(back.verify().is_ok());
            if record.spec == rebuilt.spec {
                prop_assert_eq!(rebuilt, record);
            }
        }
    }
}
