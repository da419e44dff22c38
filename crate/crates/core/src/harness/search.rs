//! Sweeps over a construction family, checking one property per instance.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Session;
use crate::properties::{Property, PropertyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Tnk,
    Triv,
    Polymod,
    Mat,
    Ut,
    Prod,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "tnk" => Family::Tnk,
            "triv" => Family::Triv,
            "polymod" => Family::Polymod,
            "mat" => Family::Mat,
            "ut" => Family::Ut,
            "prod" => Family::Prod,
            _ => {
                return Err(format!(
                    "unknown family {s:?} (tnk, triv, polymod, mat, ut, prod)"
                ))
            }
        })
    }
}

/// One end of a `k` range: a constant, or `n` shifted by a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Bound {
    Const(i64),
    N(i64),
}

impl Bound {
    fn parse(s: &str) -> Result<Bound, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || format!("bad range bound {s:?}");
        if let Some(rest) = s.strip_prefix('n') {
            if rest.is_empty() {
                return Ok(Bound::N(0));
            }
            let (sign, num) = rest.split_at(1);
            let c: i64 = num.parse().map_err(|_| bad())?;
            return match sign {
                "+" => Ok(Bound::N(c)),
                "-" => Ok(Bound::N(-c)),
                _ => Err(bad()),
            };
        }
        s.parse().map(Bound::Const).map_err(|_| bad())
    }

    fn at(self, n: usize) -> i64 {
        match self {
            Bound::Const(c) => c,
            Bound::N(c) => n as i64 + c,
        }
    }
}

/// Inclusive range such as `1..n-2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KRange(Bound, Bound);

impl KRange {
    pub fn values(&self, n: usize) -> Vec<usize> {
        let (lo, hi) = (self.0.at(n).max(0), self.1.at(n));
        (lo..=hi).map(|k| k as usize).collect()
    }
}

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<KRange, String> {
        match s.split_once("..") {
            Some((a, b)) => Ok(KRange(
                Bound::parse(a)?,
                Bound::parse(b.trim_start_matches('='))?,
            )),
            None => {
                let b = Bound::parse(s)?;
                Ok(KRange(b, b))
            }
        }
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |b: Bound| match b {
            Bound::Const(c) => c.to_string(),
            Bound::N(0) => "n".into(),
            Bound::N(c) if c > 0 => format!("n+{c}"),
            Bound::N(c) => format!("n-{}", -c),
        };
        write!(f, "{}..{}", show(self.0), show(self.1))
    }
}

impl Serialize for KRange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<KRange, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub family: Family,
    pub bases: Vec<String>,
    /// Sizes for `tnk`, `mat`, `ut` and `polymod`.
    #[serde(default)]
    pub n: Vec<usize>,
    /// Band offsets for `tnk`.
    #[serde(default)]
    pub k: Option<KRange>,
    pub property: Property,
    #[serde(default = "default_degree")]
    pub degree: u32,
    /// An instance is a hit when the property's truth equals this.
    pub target: bool,
    #[serde(default)]
    pub stop_after: Option<usize>,
}

fn default_degree() -> u32 {
    2
}

impl SearchSpec {
    /// Ring expressions in enumeration order.
    pub fn instances(&self) -> Result<Vec<String>, String> {
        let mut out = Vec::new();
        match self.family {
            Family::Triv => out.extend(self.bases.iter().map(|b| format!("Triv({b})"))),
            Family::Prod => {
                for (i, a) in self.bases.iter().enumerate() {
                    for b in &self.bases[i..] {
                        out.push(format!("Prod({a}, {b})"));
                    }
                }
            }
            Family::Mat | Family::Ut | Family::Polymod => {
                let name = match self.family {
                    Family::Mat => "Mat",
                    Family::Ut => "UT",
                    _ => "PolyMod",
                };
                for b in &self.bases {
                    out.extend(self.n.iter().map(|n| format!("{name}({b}, {n})")));
                }
            }
            Family::Tnk => {
                let k = self.k.ok_or("tnk needs a k range")?;
                for b in &self.bases {
                    for &n in &self.n {
                        out.extend(
                            k.values(n)
                                .into_iter()
                                .map(|k| format!("Tnk({b}, {n}, {k})")),
                        );
                    }
                }
            }
        }
        if out.is_empty() {
            return Err("the search has no instances".into());
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum InstanceStatus {
    Checked { report: PropertyReport, hit: bool },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchInstance {
    pub ring: String,
    #[serde(flatten)]
    pub status: InstanceStatus,
}

impl SearchInstance {
    pub fn is_hit(&self) -> bool {
        matches!(self.status, InstanceStatus::Checked { hit: true, .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub spec: SearchSpec,
    pub instances: Vec<SearchInstance>,
    pub hits: usize,
}

fn run_one(s: &Session, text: &str, spec: &SearchSpec) -> SearchInstance {
    let ring = match s.ring(text) {
        Ok(r) => r.label(),
        Err(e) => {
            return SearchInstance {
                ring: text.to_string(),
                status: InstanceStatus::Skipped { reason: e },
            }
        }
    };
    let status = match s.report(&ring, spec.property, spec.degree) {
        Ok(report) => InstanceStatus::Checked {
            hit: report.holds() == Some(spec.target),
            report,
        },
        Err(reason) => InstanceStatus::Skipped { reason },
    };
    SearchInstance { ring, status }
}

/// Checks every instance in order. Instances run in parallel batches; with
/// `stop_after` set, the outcome ends at the N-th hit regardless of how the
/// batches were scheduled.
pub fn search(s: &Session, spec: &SearchSpec) -> Result<SearchOutcome, String> {
    let texts = spec.instances()?;
    let batch = s.config.resolved_threads().max(1);
    let limit = spec.stop_after.unwrap_or(usize::MAX);
    let mut instances = Vec::new();
    let mut hits = 0;
    s.config.install(|| {
        for chunk in texts.chunks(batch) {
            let done: Vec<SearchInstance> = chunk.par_iter().map(|t| run_one(s, t, spec)).collect();
            for inst in done {
                if hits == limit {
                    return;
                }
                hits += inst.is_hit() as usize;
                instances.push(inst);
            }
        }
    });
    Ok(SearchOutcome {
        spec: spec.clone(),
        instances,
        hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::RunConfig;

    fn tnk(base: &str, target: bool) -> SearchSpec {
        SearchSpec {
            family: Family::Tnk,
            bases: vec![base.into()],
            n: vec![3, 4],
            k: Some("1..n-2".parse().unwrap()),
            property: Property::CentralLinearArmendariz,
            degree: 2,
            target,
            stop_after: None,
        }
    }

    #[test]
    fn ranges() {
        let k: KRange = "1..n-2".parse().unwrap();
        assert_eq!(k.values(3), vec![1]);
        assert_eq!(k.values(5), vec![1, 2, 3]);
        assert_eq!(k.to_string(), "1..n-2");
        assert_eq!("n".parse::<KRange>().unwrap().values(4), vec![4]);
        assert!("1..m".parse::<KRange>().is_err());
    }

    #[test]
    fn banded_family_over_z4_all_hit() {
        let s = Session::new(RunConfig::default());
        let out = search(&s, &tnk("Z(4)", false)).unwrap();
        assert_eq!(out.instances.len(), 3);
        assert_eq!(out.hits, 3);
        let out = search(&s, &tnk("Z(2)", false)).unwrap();
        assert_eq!(out.hits, 0);
    }

    #[test]
    fn stop_after_and_overflow() {
        let s = Session::new(RunConfig::default());
        let mut spec = tnk("Z(4)", false);
        spec.stop_after = Some(2);
        assert_eq!(search(&s, &spec).unwrap().instances.len(), 2);
        let spec = SearchSpec {
            family: Family::Mat,
            bases: vec!["Z(2)".into()],
            n: vec![2, 5],
            k: None,
            property: Property::Abelian,
            degree: 2,
            target: false,
            stop_after: None,
        };
        let out = search(&s, &spec).unwrap();
        assert!(matches!(
            out.instances[1].status,
            InstanceStatus::Skipped { .. }
        ));
        assert_eq!(out.hits, 1);
    }

    #[test]
    fn prod_pairs() {
        let spec = SearchSpec {
            family: Family::Prod,
            bases: vec!["Z(2)".into(), "Z(3)".into()],
            n: vec![],
            k: None,
            property: Property::Reduced,
            degree: 2,
            target: true,
            stop_after: None,
        };
        assert_eq!(spec.instances().unwrap().len(), 3);
    }
}
