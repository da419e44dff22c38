//! Suite runner, family search, JSON reports and the result cache.

pub mod cache;
pub mod report;
pub mod search;
pub mod suite;

use std::collections::HashMap;
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::constructions::Limits;
use crate::dsl::ring_from_str;
use crate::poly::AnnPairBudget;
use crate::properties::{self, Property, PropertyReport, Verdict};
use crate::ring::Ring;

pub use cache::Cache;
pub use report::{emit_report, CaseResult, RunReport};
pub use search::{
    search, Family, InstanceStatus, KRange, SearchInstance, SearchOutcome, SearchSpec,
};
pub use suite::{corpus, paper_suite, verify_paper, verify_paper_with, Outcome, SuiteCase};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Ring families used throughout the suite and as the default test set.
pub const CORPUS: [&str; 21] = [
    "Z(1)",
    "Z(2)",
    "Z(3)",
    "Z(4)",
    "Z(6)",
    "Z(8)",
    "Prod(Z(2), Z(2))",
    "Prod(Z(2), Z(3))",
    "Mat(Z(2), 2)",
    "UT(Z(2), 2)",
    "Triv(Z(2))",
    "Triv(Z(4))",
    "Triv(Z(8))",
    "PolyMod(Z(2), 2)",
    "PolyMod(Z(2), 3)",
    "Tnk(Z(2), 3, 1)",
    "Tnk(Z(2), 3, 2)",
    "Tnk(Z(4), 3, 1)",
    "Tnk(Z(2), 4, 2)",
    "Tnk(Z(6), 2, 1)",
    "Triv(Mat(Z(2), 2))",
];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub caps: Limits,
    pub budgets: AnnPairBudget,
    /// Worker threads; 0 means one per available core.
    pub threads: usize,
}

impl RunConfig {
    pub fn resolved_threads(&self) -> usize {
        if self.threads > 0 {
            return self.threads;
        }
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }

    /// Runs `f` on a pool sized by this configuration.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.resolved_threads())
            .build()
            .expect("thread pool")
            .install(f)
    }
}

type ReportKey = (String, Property, Option<u32>);

/// Run-local memo of rings and reports, optionally backed by a cache file.
///
/// Lookups never block on another thread's computation: under work stealing a
/// thread waiting for a result could end up computing it itself. Two threads
/// may therefore compute the same report; the first one stored wins.
pub struct Session {
    pub config: RunConfig,
    rings: Mutex<HashMap<String, Ring>>,
    reports: Mutex<HashMap<ReportKey, PropertyReport>>,
    cache: Option<Cache>,
}

impl Session {
    pub fn new(config: RunConfig) -> Session {
        Session {
            config,
            rings: Mutex::new(HashMap::new()),
            reports: Mutex::new(HashMap::new()),
            cache: None,
        }
    }

    pub fn with_cache(config: RunConfig, path: &Path) -> Result<Session, String> {
        let cache = Cache::open(path)?;
        Ok(Session {
            cache: Some(cache),
            ..Session::new(config)
        })
    }

    /// Parses and builds `text`, sharing one instance per canonical form.
    pub fn ring(&self, text: &str) -> Result<Ring, String> {
        if let Some(r) = self.rings.lock().unwrap().get(text) {
            return Ok(r.clone());
        }
        let built = ring_from_str(text, &self.config.caps)?;
        let mut rings = self.rings.lock().unwrap();
        let r = rings.entry(built.label()).or_insert(built).clone();
        rings.insert(text.to_string(), r.clone());
        Ok(r)
    }

    pub fn report(
        &self,
        text: &str,
        property: Property,
        degree: u32,
    ) -> Result<PropertyReport, String> {
        let ring = self.ring(text)?;
        let key: ReportKey = (
            ring.label(),
            property,
            property.is_degree_bounded().then_some(degree),
        );
        if let Some(r) = self.reports.lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let fresh = match self
            .cache
            .as_ref()
            .and_then(|c| c.get(&key.0, property, key.2))
        {
            Some(hit) => hit,
            None => {
                let rep = properties::check(&ring, property, degree, self.config.budgets);
                if let Some(c) = &self.cache {
                    if !matches!(rep.verdict, Verdict::BudgetExhausted { .. }) {
                        c.put(&key.0, &rep)?;
                    }
                }
                rep
            }
        };
        Ok(self
            .reports
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(fresh)
            .clone())
    }
}

/// Identifier-friendly form of a ring expression: `Tnk(Z(4), 3, 1)` becomes
/// `Tnk-Z4-3-1`.
pub fn slug(text: &str) -> String {
    let tokens: Vec<&str> = text
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|t| !t.is_empty())
        .collect();
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if tokens[i] == "Z" && i + 1 < tokens.len() {
            out.push(format!("Z{}", tokens[i + 1]));
            i += 2;
        } else {
            out.push(tokens[i].to_string());
            i += 1;
        }
    }
    out.join("-")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs() {
        assert_eq!(slug("Tnk(Z(4), 3, 1)"), "Tnk-Z4-3-1");
        assert_eq!(slug("Prod(Z(2), Z(3))"), "Prod-Z2-Z3");
        assert_eq!(slug("Triv(Mat(Z(2), 2))"), "Triv-Mat-Z2-2");
    }

    #[test]
    fn session_shares_rings_and_reports() {
        let s = Session::new(RunConfig::default());
        let a = s.ring("Triv( Z(4) )").unwrap();
        let b = s.ring("Triv(Z(4))").unwrap();
        assert!(a.same_ring(&b));
        let r1 = s
            .report("Triv(Z(4))", Property::LinearArmendariz, 2)
            .unwrap();
        let r2 = s
            .report("Triv(Z(4))", Property::LinearArmendariz, 5)
            .unwrap();
        assert_eq!(r1, r2);
        assert!(s.ring("Z(").is_err());
    }
}
