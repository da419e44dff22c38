//! Append-only JSON-lines cache of property reports, keyed by canonical ring
//! text, property, degree and tool version.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::VERSION;
use crate::properties::{Property, PropertyReport};

#[derive(Serialize, Deserialize)]
struct Line {
    ring: String,
    property: Property,
    degree: Option<u32>,
    version: String,
    report: PropertyReport,
}

type Key = (String, Property, Option<u32>);

pub struct Cache {
    path: PathBuf,
    entries: Mutex<HashMap<Key, PropertyReport>>,
    file: Mutex<File>,
}

impl Cache {
    /// Loads existing entries for this version; lines from other versions and
    /// unreadable lines are ignored.
    pub fn open(path: &Path) -> Result<Cache, String> {
        let io = |e: std::io::Error| format!("{}: {e}", path.display());
        let mut entries = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(path).map_err(io)?).lines() {
                let line = line.map_err(io)?;
                if let Ok(l) = serde_json::from_str::<Line>(&line) {
                    if l.version == VERSION {
                        entries.insert((l.ring, l.property, l.degree), l.report);
                    }
                }
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io)?;
        Ok(Cache {
            path: path.to_path_buf(),
            entries: Mutex::new(entries),
            file: Mutex::new(file),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(
        &self,
        ring: &str,
        property: Property,
        degree: Option<u32>,
    ) -> Option<PropertyReport> {
        self.entries
            .lock()
            .unwrap()
            .get(&(ring.to_string(), property, degree))
            .cloned()
    }

    pub fn put(&self, ring: &str, report: &PropertyReport) -> Result<(), String> {
        let key = (ring.to_string(), report.property, report.degree);
        let mut entries = self.entries.lock().unwrap();
        if entries.contains_key(&key) {
            return Ok(());
        }
        let line = Line {
            ring: key.0.clone(),
            property: key.1,
            degree: key.2,
            version: VERSION.to_string(),
            report: report.clone(),
        };
        let text = serde_json::to_string(&line).expect("report serializes");
        let mut f = self.file.lock().unwrap();
        writeln!(f, "{text}")
            .and_then(|_| f.flush())
            .map_err(|e| format!("{}: {e}", self.path.display()))?;
        entries.insert(key, report.clone());
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::make_zn;
    use crate::properties::is_reduced;

    #[test]
    fn entries_survive_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let rep = is_reduced(&make_zn(4).unwrap());
        {
            let c = Cache::open(&path).unwrap();
            assert!(c.is_empty());
            c.put("Z(4)", &rep).unwrap();
            c.put("Z(4)", &rep).unwrap();
        }
        std::fs::write(
            &path,
            std::fs::read_to_string(&path).unwrap() + "not json\n",
        )
        .unwrap();
        let c = Cache::open(&path).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.get("Z(4)", Property::Reduced, None), Some(rep));
        assert_eq!(c.get("Z(4)", Property::Abelian, None), None);
    }
}
