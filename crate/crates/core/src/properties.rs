//! Decision procedures for ring properties, each returning a report with a
//! re-checkable witness on failure, plus the implication audit.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::constructions::{base_ring, from_matrix_entries, matrix_shape};
use crate::error::RingError;
use crate::poly::{sweep_annihilating, AnnPairBudget, Step};
use crate::ring::{Idx, Kind, Layout, Ring};
use crate::witness::{self, Offense, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Commutative,
    Reduced,
    CentralReduced,
    Abelian,
    Semicommutative,
    VonNeumannRegular,
    RightPp,
    Semiprime,
    SquareZeroProductsCentral,
    CentralLinearArmendariz,
    LinearArmendariz,
    WeakLinearArmendariz,
    Armendariz,
}

impl Property {
    /// Profile order: structural checks first, sweeps last.
    pub const ALL: [Property; 13] = [
        Property::Commutative,
        Property::Reduced,
        Property::CentralReduced,
        Property::Abelian,
        Property::Semicommutative,
        Property::VonNeumannRegular,
        Property::RightPp,
        Property::Semiprime,
        Property::SquareZeroProductsCentral,
        Property::CentralLinearArmendariz,
        Property::LinearArmendariz,
        Property::WeakLinearArmendariz,
        Property::Armendariz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Commutative => "commutative",
            Property::Reduced => "reduced",
            Property::CentralReduced => "central-reduced",
            Property::Abelian => "abelian",
            Property::Semicommutative => "semicommutative",
            Property::VonNeumannRegular => "von-neumann-regular",
            Property::RightPp => "right-pp",
            Property::Semiprime => "semiprime",
            Property::SquareZeroProductsCentral => "square-zero-products-central",
            Property::CentralLinearArmendariz => "central-linear-armendariz",
            Property::LinearArmendariz => "linear-armendariz",
            Property::WeakLinearArmendariz => "weak-linear-armendariz",
            Property::Armendariz => "armendariz",
        }
    }

    pub fn is_degree_bounded(self) -> bool {
        self == Property::Armendariz
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let alias = match s {
            "cla" => Some(Property::CentralLinearArmendariz),
            "la" => Some(Property::LinearArmendariz),
            "wla" => Some(Property::WeakLinearArmendariz),
            "vnr" => Some(Property::VonNeumannRegular),
            _ => None,
        };
        alias
            .or_else(|| Property::ALL.into_iter().find(|p| p.name() == s))
            .ok_or_else(|| {
                let names: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
                format!(
                    "unknown property {s:?}; expected one of {}",
                    names.join(", ")
                )
            })
    }
}

impl Serialize for Property {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Property {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    CertifiedUpToDegree(u32),
    BudgetExhausted { examined: u64 },
}

impl Verdict {
    /// `Some(true)` for holds or certified, `Some(false)` for fails, `None`
    /// when the verdict was withheld.
    pub fn truth(self) -> Option<bool> {
        match self {
            Verdict::Holds | Verdict::CertifiedUpToDegree(_) => Some(true),
            Verdict::Fails => Some(false),
            Verdict::BudgetExhausted { .. } => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Fails => f.write_str("fails"),
            Verdict::CertifiedUpToDegree(d) => write!(f, "certified-up-to-degree({d})"),
            Verdict::BudgetExhausted { examined } => write!(f, "budget-exhausted({examined})"),
        }
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let arg = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        match s {
            "holds" => return Ok(Verdict::Holds),
            "fails" => return Ok(Verdict::Fails),
            _ => {}
        }
        if let Some(d) = arg("certified-up-to-degree").and_then(|d| d.parse().ok()) {
            return Ok(Verdict::CertifiedUpToDegree(d));
        }
        if let Some(e) = arg("budget-exhausted").and_then(|e| e.parse().ok()) {
            return Ok(Verdict::BudgetExhausted { examined: e });
        }
        Err(format!("unknown verdict {s:?}"))
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub work: u64,
    pub ms: u64,
}

impl PropertyReport {
    fn new(property: Property, witness: Option<Witness>, work: u64, start: Instant) -> Self {
        PropertyReport {
            property,
            degree: None,
            verdict: if witness.is_some() {
                Verdict::Fails
            } else {
                Verdict::Holds
            },
            witness,
            work,
            ms: start.elapsed().as_millis() as u64,
        }
    }

    fn exhausted(property: Property, examined: u64, start: Instant) -> Self {
        PropertyReport {
            property,
            degree: None,
            verdict: Verdict::BudgetExhausted { examined },
            witness: None,
            work: examined,
            ms: start.elapsed().as_millis() as u64,
        }
    }

    pub fn holds(&self) -> Option<bool> {
        self.verdict.truth()
    }

    /// Same verdict, witness and work; wall time ignored.
    pub fn same_outcome(&self, other: &PropertyReport) -> bool {
        PropertyReport {
            ms: 0,
            ..self.clone()
        } == PropertyReport {
            ms: 0,
            ..other.clone()
        }
    }
}

/// Least index in `0..n` satisfying `pred`, searched in parallel.
fn least(n: usize, pred: impl Fn(Idx) -> bool + Sync) -> Option<Idx> {
    (0..n as Idx).into_par_iter().find_first(|&x| pred(x))
}

fn examined(found: Option<Idx>, n: usize) -> u64 {
    found.map_or(n as u64, |x| x as u64 + 1)
}

pub fn is_commutative(r: &Ring) -> PropertyReport {
    let start = Instant::now();
    let a = least(r.order(), |x| !r.is_central_idx(x));
    let w = a.map(|a| {
        let b = r
            .first_noncommuting(a)
            .expect("non-central element has a witness");
        witness::noncommuting_pair(r, a, b)
    });
    PropertyReport::new(Property::Commutative, w, examined(a, r.order()), start)
}

/// Scans square-zero elements; no nonzero nilpotent exists iff none is found.
pub fn is_reduced(r: &Ring) -> PropertyReport {
    let start = Instant::now();
    let a = least(r.order(), |x| x != 0 && r.mul_idx(x, x) == 0);
    let w = a.map(|a| witness::nonzero_nilpotent(r, a));
    PropertyReport::new(Property::Reduced, w, examined(a, r.order()), start)
}

pub fn is_central_reduced(r: &Ring) -> PropertyReport {
    let start = Instant::now();
    let nil = r.nilpotents();
    let x = nil
        .members()
        .iter()
        .copied()
        .find(|&x| !r.is_central_idx(x));
    let w = x.map(|x| {
        let m = r.nilpotency_index(x).expect("member of the nilpotent set");
        let c = r
            .first_noncommuting(x)
            .expect("non-central element has a witness");
        witness::nilpotent_noncentral(r, x, m, c)
    });
    PropertyReport::new(Property::CentralReduced, w, nil.len() as u64, start)
}

pub fn is_abelian(r: &Ring) -> PropertyReport {
    let start = Instant::now();
    let e = least(r.order(), |x| r.mul_idx(x, x) == x && !r.is_central_idx(x));
    let w = e.map(|e| {
        let c = r
            .first_noncommuting(e)
            .expect("non-central element has a witness");
        witness::noncentral_idempotent(r, e, c)
    });
    PropertyReport::new(Property::Abelian, w, examined(e, r.order()), start)
}

/// `ab = 0 ⇒ aRb = 0`. Since `r ↦ a·r·b` is additive, testing `r` over the
/// additive generators decides each pair; the least offending `r` is then
/// found by a full scan.
pub fn is_semicommutative(r: &Ring) -> PropertyReport {
    let start = Instant::now();
    let gens = r.additive_generators();
    let hit = |a: Idx| -> Option<(Idx, Idx)> {
        (1..r.order() as Idx)
            .filter(|&b| r.mul_idx(a, b) == 0)
            .find(|&b| gens.iter().any(|&g| r.mul_idx(r.mul_idx(a, g), b) != 0))
            .map(|b| (a, b))
    };
    let found = (1..r.order() as Idx).into_par_iter().find_map_first(hit);
    let w = found.map(|(a, b)| {
        let m = (0..r.order() as Idx)
            .find(|&m| r.mul_idx(r.mul_idx(a, m), b) != 0)
            .expect("generator test found a violation");
        witness::semicomm_violation(r, a, m, b)
    });
    let work = examined(found.map(|(a, _)| a), r.order());
    PropertyReport::new(Property::Semicommutative, w, work, start)
}

pub fn is_von_neumann_regular(r: &Ring) -> PropertyReport {
    let start = Instant::now();
    let n = r.order() as Idx;
    let a = least(r.order(), |a| {
        !(0..n).any(|x| r.mul_idx(r.mul_idx(a, x), a) == a)
    });
    let w = a.map(|a| witness::vnr_failure(r, a));
    PropertyReport::new(
        Property::VonNeumannRegular,
        w,
        examined(a, r.order()),
        start,
    )
}

/// Right annihilator of every element equals `e·R` for an idempotent `e`.
pub fn is_right_pp(r: &Ring) -> PropertyReport {
    let start = Instant::now();
    let n = r.order() as Idx;
    let principal: HashSet<Vec<Idx>> = r
        .idempotents()
        .members()
        .par_iter()
        .map(|&e| {
            let mut s: Vec<Idx> = (0..n).map(|x| r.mul_idx(e, x)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let a = least(r.order(), |a| {
        let ann: Vec<Idx> = (0..n).filter(|&b| r.mul_idx(a, b) == 0).collect();
        !principal.contains(&ann)
    });
    let w = a.map(|a| witness::pp_failure(r, a));
    PropertyReport::new(Property::RightPp, w, examined(a, r.order()), start)
}

/// `aRa = 0 ⇒ a = 0`, tested over additive generators.
pub fn is_semiprime(r: &Ring) -> PropertyReport {
    let start = Instant::now();
    let gens = r.additive_generators();
    let a = least(r.order(), |a| {
        a != 0 && gens.iter().all(|&g| r.mul_idx(r.mul_idx(a, g), a) == 0)
    });
    let w = a.map(|a| witness::semiprime_failure(r, a));
    PropertyReport::new(Property::Semiprime, w, examined(a, r.order()), start)
}

/// Constructive candidates for a commuting square-zero pair, tried in order:
/// `(s·I, e_{1,k+1} + .. + e_{1,n})` in `T_n^k(R)` and `((s, 0), (0, 1))` in
/// a trivial extension, for nonzero square-zero `s` of the base ring.
fn constructive_square_zero(r: &Ring) -> Vec<(Idx, Idx)> {
    let Some(base) = base_ring(r) else {
        return Vec::new();
    };
    let square_zero: Vec<Idx> = (1..base.order() as Idx)
        .filter(|&s| base.mul_idx(s, s) == 0)
        .collect();
    let one = base.one_idx();
    match (matrix_shape(r), r.kind()) {
        (Some((n, Some(k))), _) => {
            let mut b = vec![0; n * n];
            b[k..n].fill(one);
            let Some(b) = from_matrix_entries(r, &b) else {
                return Vec::new();
            };
            square_zero
                .iter()
                .filter_map(|&s| {
                    let mut a = vec![0; n * n];
                    for i in 0..n {
                        a[i * n + i] = s;
                    }
                    from_matrix_entries(r, &a).map(|a| (a, b))
                })
                .collect()
        }
        (
            _,
            Kind::Params(crate::ring::ParamRing {
                layout: Layout::Trivial,
                ..
            }),
        ) => {
            let m = base.order() as Idx;
            square_zero.iter().map(|&s| (s * m, one)).collect()
        }
        _ => Vec::new(),
    }
}

fn square_zero_pair_ok(r: &Ring, a: Idx, b: Idx) -> bool {
    let ab = r.mul_idx(a, b);
    r.mul_idx(a, a) == 0 && r.mul_idx(b, b) == 0 && ab == r.mul_idx(b, a) && !r.is_central_idx(ab)
}

/// Searches `a, b` with `a² = b² = 0`, `ab = ba` and `ab` not central; such a
/// pair refutes central linear Armendariz through `(a + bx)(a - bx) = 0`.
/// Holds when no pair exists.
pub fn square_zero_noncentral_witness(r: &Ring) -> PropertyReport {
    let start = Instant::now();
    let candidates = constructive_square_zero(r);
    let mut work = candidates.len() as u64;
    let mut pair = candidates
        .into_iter()
        .find(|&(a, b)| square_zero_pair_ok(r, a, b));
    if pair.is_none() {
        let sq: Vec<Idx> = (1..r.order() as Idx)
            .into_par_iter()
            .filter(|&x| r.mul_idx(x, x) == 0)
            .collect();
        work += r.order() as u64;
        pair = sq.par_iter().find_map_first(|&a| {
            sq.iter()
                .find(|&&b| square_zero_pair_ok(r, a, b))
                .map(|&b| (a, b))
        });
        work += match pair {
            Some((a, _)) => sq.iter().position(|&x| x == a).unwrap() as u64 + 1,
            None => sq.len() as u64,
        } * sq.len() as u64;
    }
    let w = pair.map(|(a, b)| {
        let c = r
            .first_noncommuting(r.mul_idx(a, b))
            .expect("non-central element has a witness");
        witness::square_zero_pair(r, a, b, c)
    });
    PropertyReport::new(Property::SquareZeroProductsCentral, w, work, start)
}

/// Least `(i, j)` whose product `a_i·b_j` violates `bad`.
fn offending<F>(a: &[Idx], b: &[Idx], r: &Ring, bad: F) -> Option<(usize, usize)>
where
    F: Fn(Idx) -> bool,
{
    (0..a.len())
        .flat_map(|i| (0..b.len()).map(move |j| (i, j)))
        .find(|&(i, j)| bad(r.mul_idx(a[i], b[j])))
}

enum Coefficient {
    Zero,
    Central,
    Nilpotent,
}

/// Sweeps annihilating pairs of degree `d` for the first one whose
/// coefficient products are not all of the required kind.
fn sweep_products(
    r: &Ring,
    d: usize,
    want: Coefficient,
    budget: AnnPairBudget,
) -> Result<(Option<Witness>, u64), u64> {
    match want {
        Coefficient::Central => {
            r.center();
        }
        Coefficient::Nilpotent => {
            r.nilpotents();
        }
        Coefficient::Zero => {}
    }
    let bad = |p: Idx| match want {
        Coefficient::Zero => p != 0,
        Coefficient::Central => !r.is_central_idx(p),
        Coefficient::Nilpotent => !r.is_nilpotent_idx(p),
    };
    let result = sweep_annihilating(r, d, budget, |a, b| match offending(a, b, r, bad) {
        Some(ij) => Step::Stop((a.to_vec(), b.to_vec(), ij)),
        None => Step::Skip,
    });
    match result {
        Ok(s) => {
            let w = s.stopped.map(|(a, b, (i, j))| {
                let p = r.mul_idx(a[i], b[j]);
                let offense = match want {
                    Coefficient::Zero => Offense::Nonzero,
                    Coefficient::Central => Offense::Noncentral {
                        r: r.first_noncommuting(p).expect("non-central product"),
                    },
                    Coefficient::Nilpotent => {
                        let (p, q) = witness::power_cycle(r, p).expect("non-nilpotent product");
                        Offense::NotNilpotent { p, q }
                    }
                };
                witness::annihilating_pair_violation(r, &a, &b, (i, j), offense)
            });
            Ok((w, s.work))
        }
        Err(RingError::BudgetExhausted { examined }) => Err(examined),
        Err(e) => unreachable!("degree-1 sweep cannot fail otherwise: {e}"),
    }
}

fn linear_report(
    r: &Ring,
    p: Property,
    want: Coefficient,
    budget: AnnPairBudget,
) -> PropertyReport {
    let start = Instant::now();
    match sweep_products(r, 1, want, budget) {
        Ok((w, work)) => PropertyReport::new(p, w, work, start),
        Err(examined) => PropertyReport::exhausted(p, examined, start),
    }
}

pub fn is_linear_armendariz(r: &Ring, budget: AnnPairBudget) -> PropertyReport {
    linear_report(r, Property::LinearArmendariz, Coefficient::Zero, budget)
}

pub fn is_weak_linear_armendariz(r: &Ring, budget: AnnPairBudget) -> PropertyReport {
    linear_report(
        r,
        Property::WeakLinearArmendariz,
        Coefficient::Nilpotent,
        budget,
    )
}

/// Full degree-1 sweep without the square-zero shortcut; the witness is the
/// least violating quadruple.
pub fn central_linear_armendariz_sweep(r: &Ring, budget: AnnPairBudget) -> PropertyReport {
    linear_report(
        r,
        Property::CentralLinearArmendariz,
        Coefficient::Central,
        budget,
    )
}

/// Tries the square-zero refutation first, then sweeps.
pub fn is_central_linear_armendariz(r: &Ring, budget: AnnPairBudget) -> PropertyReport {
    let start = Instant::now();
    let pre = square_zero_noncentral_witness(r);
    if pre.witness.is_some() {
        return PropertyReport {
            property: Property::CentralLinearArmendariz,
            ms: start.elapsed().as_millis() as u64,
            ..pre
        };
    }
    let mut rep = central_linear_armendariz_sweep(r, budget);
    rep.work += pre.work;
    rep.ms = start.elapsed().as_millis() as u64;
    rep
}

/// Sweeps degrees `1..=d` in turn; passing all of them certifies the
/// Armendariz condition up to degree `d` only.
pub fn is_armendariz_up_to(r: &Ring, d: u32, budget: AnnPairBudget) -> PropertyReport {
    let start = Instant::now();
    let mut work = 0;
    let rep = |verdict, witness, work| PropertyReport {
        property: Property::Armendariz,
        degree: Some(d),
        verdict,
        witness,
        work,
        ms: start.elapsed().as_millis() as u64,
    };
    if d == 0 {
        return rep(Verdict::Holds, None, 0);
    }
    for m in 1..=d {
        let left = AnnPairBudget {
            max_pairs_examined: budget.max_pairs_examined - work,
            ..budget
        };
        match sweep_products(r, m as usize, Coefficient::Zero, left) {
            Ok((Some(w), n)) => return rep(Verdict::Fails, Some(w), work + n),
            Ok((None, n)) => work += n,
            Err(examined) => {
                let total = work + examined;
                return rep(Verdict::BudgetExhausted { examined: total }, None, total);
            }
        }
    }
    rep(Verdict::CertifiedUpToDegree(d), None, work)
}

/// Runs one checker. `degree` applies to `armendariz` only.
pub fn check(r: &Ring, property: Property, degree: u32, budget: AnnPairBudget) -> PropertyReport {
    match property {
        Property::Commutative => is_commutative(r),
        Property::Reduced => is_reduced(r),
        Property::CentralReduced => is_central_reduced(r),
        Property::Abelian => is_abelian(r),
        Property::Semicommutative => is_semicommutative(r),
        Property::VonNeumannRegular => is_von_neumann_regular(r),
        Property::RightPp => is_right_pp(r),
        Property::Semiprime => is_semiprime(r),
        Property::SquareZeroProductsCentral => square_zero_noncentral_witness(r),
        Property::CentralLinearArmendariz => is_central_linear_armendariz(r, budget),
        Property::LinearArmendariz => is_linear_armendariz(r, budget),
        Property::WeakLinearArmendariz => is_weak_linear_armendariz(r, budget),
        Property::Armendariz => is_armendariz_up_to(r, degree, budget),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub ring: String,
    pub reports: Vec<PropertyReport>,
    pub audit: AuditOutcome,
}

impl Profile {
    pub fn get(&self, p: Property) -> Option<&PropertyReport> {
        self.reports.iter().find(|r| r.property == p)
    }
}

/// Every checker in [`Property::ALL`] order, then the audit.
pub fn property_profile(r: &Ring, d: u32, budget: AnnPairBudget) -> Profile {
    let reports: Vec<PropertyReport> = Property::ALL
        .iter()
        .map(|&p| check(r, p, d, budget))
        .collect();
    let audit = match implication_audit(&reports) {
        Ok(rules) => AuditOutcome::Consistent {
            rules_checked: rules,
        },
        Err(c) => AuditOutcome::Contradiction(c),
    };
    Profile {
        ring: r.label(),
        reports,
        audit,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditOutcome {
    Consistent { rules_checked: usize },
    Contradiction(ContradictionFound),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("implication {rule} violated")]
pub struct ContradictionFound {
    pub rule: String,
    pub reports: Vec<PropertyReport>,
}

/// `(premises, conclusion)`: all premises holding forces the conclusion.
const RULES: &[(&[Property], Property)] = {
    use Property::*;
    &[
        (&[Armendariz], LinearArmendariz),
        (&[LinearArmendariz], CentralLinearArmendariz),
        (&[CentralLinearArmendariz], Abelian),
        (&[Commutative], CentralLinearArmendariz),
        (&[Reduced], CentralReduced),
        (&[CentralReduced], CentralLinearArmendariz),
        (&[LinearArmendariz], WeakLinearArmendariz),
        (&[RightPp, CentralLinearArmendariz], LinearArmendariz),
        (&[Reduced, WeakLinearArmendariz], CentralLinearArmendariz),
        (&[CentralLinearArmendariz], SquareZeroProductsCentral),
    ]
};

/// Checks one ring's reports against the known implications. Rules whose
/// reports are missing or withheld are skipped; a degree-bounded Armendariz
/// pass counts as holding, which is sound for the degree-1 consequences.
/// Returns the number of rules evaluated.
pub fn implication_audit(reports: &[PropertyReport]) -> Result<usize, ContradictionFound> {
    let find = |p: Property| {
        reports
            .iter()
            .find(|r| r.property == p && (p != Property::Armendariz || r.degree.unwrap_or(1) >= 1))
    };
    let mut checked = 0;
    'rules: for (premises, conclusion) in RULES {
        let mut involved = Vec::new();
        for &p in premises.iter() {
            match find(p) {
                Some(r) if r.holds() == Some(true) => involved.push(r.clone()),
                _ => continue 'rules,
            }
        }
        let Some(c) = find(*conclusion) else { continue };
        let Some(holds) = c.holds() else { continue };
        checked += 1;
        if !holds {
            involved.push(c.clone());
            let names: Vec<&str> = premises.iter().map(|p| p.name()).collect();
            return Err(ContradictionFound {
                rule: format!("{} => {}", names.join(" and "), conclusion.name()),
                reports: involved,
            });
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{
        make_matrix, make_poly_mod, make_product, make_tnk, make_trivial_extension,
        make_upper_triangular, make_zn,
    };
    use crate::ring::Value;

    fn z(n: u64) -> Ring {
        make_zn(n).unwrap()
    }

    fn budget() -> AnnPairBudget {
        AnnPairBudget::default()
    }

    fn assert_fails_rechecked(r: &Ring, rep: &PropertyReport) {
        assert_eq!(rep.verdict, Verdict::Fails, "{} on {}", rep.property, r);
        let w = rep.witness.as_ref().expect("failing report has a witness");
        assert_eq!(w.recheck(r), Ok(true), "{} on {}", rep.property, r);
    }

    #[test]
    fn verdict_text_round_trip() {
        for v in [
            Verdict::Holds,
            Verdict::Fails,
            Verdict::CertifiedUpToDegree(2),
            Verdict::BudgetExhausted { examined: 17 },
        ] {
            assert_eq!(v.to_string().parse::<Verdict>(), Ok(v));
        }
        assert_eq!(
            serde_json::to_string(&Verdict::CertifiedUpToDegree(2)).unwrap(),
            "\"certified-up-to-degree(2)\""
        );
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>(), Ok(p));
        }
        assert!("armendariz-ish".parse::<Property>().is_err());
    }

    #[test]
    fn structural_checks() {
        let m2 = make_matrix(&z(2), 2).unwrap();
        assert_eq!(is_commutative(&z(8)).verdict, Verdict::Holds);
        assert_fails_rechecked(&m2, &is_commutative(&m2));
        assert_eq!(is_reduced(&z(6)).verdict, Verdict::Holds);
        let rep = is_reduced(&z(4));
        assert_fails_rechecked(&z(4), &rep);
        assert_eq!(rep.witness.unwrap().elements[0].index, 2);
        let p = make_poly_mod(&z(2), 2).unwrap();
        let rep = is_reduced(&p);
        assert_eq!(
            rep.witness.unwrap().elements[0].value,
            Value::int_poly(&[0, 1])
        );
        assert_eq!(is_central_reduced(&p).verdict, Verdict::Holds);
        assert_fails_rechecked(&m2, &is_central_reduced(&m2));
        let ut = make_upper_triangular(&z(2), 2).unwrap();
        assert_fails_rechecked(&ut, &is_abelian(&ut));
        assert_eq!(is_abelian(&z(6)).verdict, Verdict::Holds);
        assert_fails_rechecked(&m2, &is_semicommutative(&m2));
        assert_eq!(is_semicommutative(&z(4)).verdict, Verdict::Holds);
        assert_eq!(is_von_neumann_regular(&m2).verdict, Verdict::Holds);
        assert_fails_rechecked(&z(4), &is_von_neumann_regular(&z(4)));
        let p23 = make_product(&[z(2), z(3)]).unwrap();
        assert_eq!(is_von_neumann_regular(&p23).verdict, Verdict::Holds);
        assert_eq!(is_right_pp(&z(6)).verdict, Verdict::Holds);
        assert_eq!(is_right_pp(&z(5)).verdict, Verdict::Holds);
        let t4 = make_trivial_extension(&z(4)).unwrap();
        assert_fails_rechecked(&t4, &is_right_pp(&t4));
        assert_eq!(is_semiprime(&m2).verdict, Verdict::Holds);
        assert_eq!(is_semiprime(&z(6)).verdict, Verdict::Holds);
        assert_fails_rechecked(&z(4), &is_semiprime(&z(4)));
    }

    #[test]
    fn reduced_agrees_with_nilpotent_set() {
        for r in [z(4), z(6), z(8), make_matrix(&z(2), 2).unwrap()] {
            let by_scan = is_reduced(&r).verdict == Verdict::Holds;
            assert_eq!(by_scan, r.nilpotents().len() == 1);
        }
    }

    #[test]
    fn linear_checks_on_trivial_extension() {
        let t4 = make_trivial_extension(&z(4)).unwrap();
        assert_eq!(
            is_central_linear_armendariz(&t4, budget()).verdict,
            Verdict::Holds
        );
        let la = is_linear_armendariz(&t4, budget());
        assert_fails_rechecked(&t4, &la);
        let w = la.witness.unwrap();
        assert_eq!(
            w.get("product").unwrap().value,
            Value::pair(Value::int(0), Value::int(2))
        );
        assert_eq!(
            is_weak_linear_armendariz(&t4, budget()).verdict,
            Verdict::Holds
        );
        let arm = is_armendariz_up_to(&t4, 1, budget());
        assert_eq!(arm.verdict, Verdict::Fails);
        assert_eq!(arm.witness, Some(w));
    }

    #[test]
    fn linear_checks_on_small_rings() {
        assert_eq!(
            is_linear_armendariz(&z(2), budget()).verdict,
            Verdict::Holds
        );
        assert_eq!(
            is_linear_armendariz(&z(1), budget()).verdict,
            Verdict::Holds
        );
        assert_eq!(
            is_armendariz_up_to(&z(2), 2, budget()).verdict,
            Verdict::CertifiedUpToDegree(2)
        );
        let t = make_tnk(&z(2), 3, 1).unwrap();
        assert_eq!(
            is_central_linear_armendariz(&t, budget()).verdict,
            Verdict::Holds
        );
        assert_eq!(
            is_armendariz_up_to(&t, 2, budget()).verdict,
            Verdict::CertifiedUpToDegree(2)
        );
        let m2 = make_matrix(&z(2), 2).unwrap();
        assert_fails_rechecked(&m2, &is_central_linear_armendariz(&m2, budget()));
        assert_fails_rechecked(&m2, &central_linear_armendariz_sweep(&m2, budget()));
    }

    #[test]
    fn square_zero_prefilter_uses_constructive_pair() {
        let t = make_tnk(&z(4), 3, 1).unwrap();
        let rep = square_zero_noncentral_witness(&t);
        assert_fails_rechecked(&t, &rep);
        let w = rep.witness.unwrap();
        assert_eq!(w.get("a").unwrap().value, Value::int_tnk(&[2], &[0, 0, 0]));
        assert_eq!(w.get("b").unwrap().value, Value::int_tnk(&[0], &[1, 1, 0]));
        assert_eq!(
            square_zero_noncentral_witness(&z(6)).verdict,
            Verdict::Holds
        );
        let tm = make_trivial_extension(&make_matrix(&z(2), 2).unwrap()).unwrap();
        assert_fails_rechecked(&tm, &square_zero_noncentral_witness(&tm));
        let cla = is_central_linear_armendariz(&t, budget());
        assert_fails_rechecked(&t, &cla);
        assert_eq!(
            cla.witness.unwrap().kind,
            witness::WitnessKind::SquareZeroPair
        );
    }

    #[test]
    fn budget_withholds_verdict() {
        let t = make_trivial_extension(&z(8)).unwrap();
        let rep = is_weak_linear_armendariz(&t, AnnPairBudget::with_max(100));
        assert_eq!(rep.verdict, Verdict::BudgetExhausted { examined: 100 });
        assert!(rep.witness.is_none());
        let rep = is_armendariz_up_to(&z(4), 2, AnnPairBudget::with_max(100));
        assert!(matches!(rep.verdict, Verdict::BudgetExhausted { .. }));
    }

    #[test]
    fn profiles_pass_audit() {
        for r in [
            z(1),
            z(4),
            make_matrix(&z(2), 2).unwrap(),
            make_trivial_extension(&z(4)).unwrap(),
        ] {
            let p = property_profile(&r, 2, budget());
            assert!(matches!(p.audit, AuditOutcome::Consistent { .. }), "{r}");
        }
        let one = property_profile(&z(1), 2, budget());
        assert!(one.reports.iter().all(|r| r.holds() == Some(true)));
        let m2 = property_profile(&make_matrix(&z(2), 2).unwrap(), 2, budget());
        assert_eq!(m2.get(Property::Abelian).unwrap().verdict, Verdict::Fails);
        assert_eq!(
            m2.get(Property::CentralLinearArmendariz).unwrap().verdict,
            Verdict::Fails
        );
    }

    #[test]
    fn synthetic_contradiction_is_caught() {
        let fake = |p, verdict| PropertyReport {
            property: p,
            degree: None,
            verdict,
            witness: None,
            work: 0,
            ms: 0,
        };
        let reports = [
            fake(Property::CentralLinearArmendariz, Verdict::Holds),
            fake(Property::Abelian, Verdict::Fails),
        ];
        let err = implication_audit(&reports).unwrap_err();
        assert_eq!(err.rule, "central-linear-armendariz => abelian");
        assert_eq!(err.reports.len(), 2);
        let withheld = [
            fake(
                Property::CentralLinearArmendariz,
                Verdict::BudgetExhausted { examined: 3 },
            ),
            fake(Property::Abelian, Verdict::Fails),
        ];
        assert_eq!(implication_audit(&withheld), Ok(0));
    }
}
