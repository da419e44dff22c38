//! Witnesses for failed properties and the recipes that re-check them.
//!
//! A recipe is a closed formula over named elements, built from ring
//! arithmetic, equality and quantifiers over the whole ring. It evaluates to
//! `true` exactly when the violation is reproduced.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ring::{Idx, Ring, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    NoncentralIdempotent,
    NilpotentNoncentral,
    SemicommViolation,
    AnnihilatingPairViolation,
    SquareZeroPair,
    PpFailure,
    VnrFailure,
    SemiprimeFailure,
    NoncommutingPair,
    NonzeroNilpotent,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Var(String),
    Zero,
    One,
    Add(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Pow(Box<Term>, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Eq(Term, Term),
    Ne(Term, Term),
    ForAll { var: String, body: Box<Check> },
    Exists { var: String, body: Box<Check> },
    And(Vec<Check>),
    Or(Vec<Check>),
    Not(Box<Check>),
}

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn add(self, other: Term) -> Term {
        Term::Add(Box::new(self), Box::new(other))
    }
    pub fn mul(self, other: Term) -> Term {
        Term::Mul(Box::new(self), Box::new(other))
    }
    pub fn neg(self) -> Term {
        Term::Neg(Box::new(self))
    }
    pub fn pow(self, e: u64) -> Term {
        Term::Pow(Box::new(self), e)
    }
    pub fn eq(self, other: Term) -> Check {
        Check::Eq(self, other)
    }
    pub fn ne(self, other: Term) -> Check {
        Check::Ne(self, other)
    }
}

impl Check {
    pub fn for_all(var: &str, body: Check) -> Check {
        Check::ForAll {
            var: var.into(),
            body: Box::new(body),
        }
    }
    pub fn exists(var: &str, body: Check) -> Check {
        Check::Exists {
            var: var.into(),
            body: Box::new(body),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedElement {
    pub name: String,
    pub index: Idx,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub elements: Vec<NamedElement>,
    pub recheck: Check,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecheckError {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("element {name} is not an element of {ring}")]
    Foreign { name: String, ring: String },
    #[error("element {name}: index {index} does not match value {value}")]
    Inconsistent {
        name: String,
        index: Idx,
        value: String,
    },
}

impl Witness {
    pub fn new(kind: WitnessKind, ring: &Ring, named: &[(&str, Idx)], recheck: Check) -> Witness {
        Witness {
            kind,
            elements: named
                .iter()
                .map(|&(name, index)| NamedElement {
                    name: name.to_string(),
                    index,
                    value: ring.decode(index),
                })
                .collect(),
            recheck,
        }
    }

    pub fn get(&self, name: &str) -> Option<&NamedElement> {
        self.elements.iter().find(|e| e.name == name)
    }

    /// Re-evaluates the recipe on `ring`. `Ok(true)` means the violation is
    /// reproduced. Element values are checked against their indices first.
    pub fn recheck(&self, ring: &Ring) -> Result<bool, RecheckError> {
        let mut env = Vec::with_capacity(self.elements.len() + 4);
        for e in &self.elements {
            match ring.encode(&e.value) {
                Some(i) if i == e.index => env.push((e.name.clone(), i)),
                Some(_) => {
                    return Err(RecheckError::Inconsistent {
                        name: e.name.clone(),
                        index: e.index,
                        value: e.value.to_string(),
                    })
                }
                None => {
                    return Err(RecheckError::Foreign {
                        name: e.name.clone(),
                        ring: ring.label(),
                    })
                }
            }
        }
        Eval { ring, env }.check(&self.recheck)
    }
}

struct Eval<'r> {
    ring: &'r Ring,
    env: Vec<(String, Idx)>,
}

impl Eval<'_> {
    fn term(&self, t: &Term) -> Result<Idx, RecheckError> {
        let r = self.ring;
        Ok(match t {
            Term::Var(name) => self
                .env
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|&(_, i)| i)
                .ok_or_else(|| RecheckError::Unbound(name.clone()))?,
            Term::Zero => r.zero_idx(),
            Term::One => r.one_idx(),
            Term::Add(a, b) => r.add_idx(self.term(a)?, self.term(b)?),
            Term::Neg(a) => r.neg_idx(self.term(a)?),
            Term::Mul(a, b) => r.mul_idx(self.term(a)?, self.term(b)?),
            Term::Pow(a, e) => r.pow_idx(self.term(a)?, *e),
        })
    }

    fn check(&mut self, c: &Check) -> Result<bool, RecheckError> {
        Ok(match c {
            Check::Eq(a, b) => self.term(a)? == self.term(b)?,
            Check::Ne(a, b) => self.term(a)? != self.term(b)?,
            Check::ForAll { var, body } => !self.any(var, body, false)?,
            Check::Exists { var, body } => self.any(var, body, true)?,
            Check::And(cs) => {
                for c in cs {
                    if !self.check(c)? {
                        return Ok(false);
                    }
                }
                true
            }
            Check::Or(cs) => {
                for c in cs {
                    if self.check(c)? {
                        return Ok(true);
                    }
                }
                false
            }
            Check::Not(c) => !self.check(c)?,
        })
    }

    /// Whether some binding of `var` makes `body` evaluate to `target`.
    fn any(&mut self, var: &str, body: &Check, target: bool) -> Result<bool, RecheckError> {
        for x in 0..self.ring.order() as Idx {
            self.env.push((var.to_string(), x));
            let v = self.check(body);
            self.env.pop();
            if v? == target {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn commutator_ne(x: Term, r: &str) -> Check {
    x.clone().mul(var(r)).ne(var(r).mul(x))
}

/// `a·b ≠ b·a`.
pub fn noncommuting_pair(ring: &Ring, a: Idx, b: Idx) -> Witness {
    Witness::new(
        WitnessKind::NoncommutingPair,
        ring,
        &[("a", a), ("b", b)],
        commutator_ne(var("a"), "b"),
    )
}

/// `a ≠ 0` and `a² = 0`.
pub fn nonzero_nilpotent(ring: &Ring, a: Idx) -> Witness {
    Witness::new(
        WitnessKind::NonzeroNilpotent,
        ring,
        &[("a", a)],
        Check::And(vec![
            var("a").ne(Term::Zero),
            var("a").mul(var("a")).eq(Term::Zero),
        ]),
    )
}

/// `x^m = 0` and `x·r ≠ r·x`.
pub fn nilpotent_noncentral(ring: &Ring, x: Idx, m: u64, r: Idx) -> Witness {
    Witness::new(
        WitnessKind::NilpotentNoncentral,
        ring,
        &[("x", x), ("r", r)],
        Check::And(vec![
            var("x").pow(m).eq(Term::Zero),
            commutator_ne(var("x"), "r"),
        ]),
    )
}

/// `e² = e` and `e·r ≠ r·e`.
pub fn noncentral_idempotent(ring: &Ring, e: Idx, r: Idx) -> Witness {
    Witness::new(
        WitnessKind::NoncentralIdempotent,
        ring,
        &[("e", e), ("r", r)],
        Check::And(vec![
            var("e").mul(var("e")).eq(var("e")),
            commutator_ne(var("e"), "r"),
        ]),
    )
}

/// `a·b = 0` and `a·r·b ≠ 0`.
pub fn semicomm_violation(ring: &Ring, a: Idx, r: Idx, b: Idx) -> Witness {
    Witness::new(
        WitnessKind::SemicommViolation,
        ring,
        &[("a", a), ("r", r), ("b", b)],
        Check::And(vec![
            var("a").mul(var("b")).eq(Term::Zero),
            var("a").mul(var("r")).mul(var("b")).ne(Term::Zero),
        ]),
    )
}

/// `a·x·a ≠ a` for every `x`.
pub fn vnr_failure(ring: &Ring, a: Idx) -> Witness {
    Witness::new(
        WitnessKind::VnrFailure,
        ring,
        &[("a", a)],
        Check::for_all("x", var("a").mul(var("x")).mul(var("a")).ne(var("a"))),
    )
}

/// `a ≠ 0` and `a·r·a = 0` for every `r`.
pub fn semiprime_failure(ring: &Ring, a: Idx) -> Witness {
    Witness::new(
        WitnessKind::SemiprimeFailure,
        ring,
        &[("a", a)],
        Check::And(vec![
            var("a").ne(Term::Zero),
            Check::for_all("r", var("a").mul(var("r")).mul(var("a")).eq(Term::Zero)),
        ]),
    )
}

/// No idempotent `e` has `r(a) = e·R`: for each `e`, either `e` is not
/// idempotent, some annihilator of `a` is outside `e·R`, or some element of
/// `e·R` does not annihilate `a`.
pub fn pp_failure(ring: &Ring, a: Idx) -> Witness {
    let e = || var("e");
    let body = Check::Or(vec![
        e().mul(e()).ne(e()),
        Check::exists(
            "r",
            Check::And(vec![
                var("a").mul(var("r")).eq(Term::Zero),
                Check::for_all("s", e().mul(var("s")).ne(var("r"))),
            ]),
        ),
        Check::exists("s", var("a").mul(e().mul(var("s"))).ne(Term::Zero)),
    ]);
    Witness::new(
        WitnessKind::PpFailure,
        ring,
        &[("a", a)],
        Check::for_all("e", body),
    )
}

/// How an annihilating pair violates its property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Offense {
    /// `a_i·b_j ≠ 0`.
    Nonzero,
    /// `a_i·b_j` fails to commute with `r`.
    Noncentral { r: Idx },
    /// `a_i·b_j` has powers `p < q` with `x^p = x^q ≠ 0`.
    NotNilpotent { p: u64, q: u64 },
}

/// `f·g = 0` for `f = Σ a_i x^i`, `g = Σ b_j x^j`, yet the product
/// `a_i·b_j` (also named `product`) violates `offense`.
pub fn annihilating_pair_violation(
    ring: &Ring,
    a: &[Idx],
    b: &[Idx],
    (i, j): (usize, usize),
    offense: Offense,
) -> Witness {
    let d = a.len() - 1;
    let an: Vec<String> = (0..=d).map(|t| format!("a{t}")).collect();
    let bn: Vec<String> = (0..b.len()).map(|t| format!("b{t}")).collect();
    let mut named: Vec<(&str, Idx)> = Vec::new();
    named.extend(an.iter().map(String::as_str).zip(a.iter().copied()));
    named.extend(bn.iter().map(String::as_str).zip(b.iter().copied()));
    let product = ring.mul_idx(a[i], b[j]);
    named.push(("product", product));
    let mut checks = Vec::new();
    for m in 0..a.len() + b.len() - 1 {
        let mut sum = Term::Zero;
        for t in 0..=m.min(d) {
            if m - t < b.len() {
                sum = sum.add(var(&an[t]).mul(var(&bn[m - t])));
            }
        }
        checks.push(sum.eq(Term::Zero));
    }
    checks.push(var(&an[i]).mul(var(&bn[j])).eq(var("product")));
    match offense {
        Offense::Nonzero => checks.push(var("product").ne(Term::Zero)),
        Offense::Noncentral { r } => {
            named.push(("r", r));
            checks.push(commutator_ne(var("product"), "r"));
        }
        Offense::NotNilpotent { p, q } => {
            checks.push(var("product").pow(p).eq(var("product").pow(q)));
            checks.push(var("product").pow(p).ne(Term::Zero));
        }
    }
    Witness::new(
        WitnessKind::AnnihilatingPairViolation,
        ring,
        &named,
        Check::And(checks),
    )
}

/// `a² = b² = 0`, `ab = ba`, and `ab` fails to commute with `r`. Then
/// `(a + bx)(a - bx) = 0` while the coefficient product `a·(-b)` is not
/// central.
pub fn square_zero_pair(ring: &Ring, a: Idx, b: Idx, r: Idx) -> Witness {
    let ab = || var("a").mul(var("b"));
    Witness::new(
        WitnessKind::SquareZeroPair,
        ring,
        &[("a", a), ("b", b), ("r", r)],
        Check::And(vec![
            var("a").mul(var("a")).eq(Term::Zero),
            var("b").mul(var("b")).eq(Term::Zero),
            ab().eq(var("b").mul(var("a"))),
            commutator_ne(ab(), "r"),
        ]),
    )
}

/// Least `p < q` with `x^p = x^q`, when `x` is not nilpotent.
pub fn power_cycle(ring: &Ring, x: Idx) -> Option<(u64, u64)> {
    let mut seen = std::collections::HashMap::new();
    let mut p = x;
    let mut e = 1u64;
    loop {
        if p == 0 {
            return None;
        }
        if let Some(&first) = seen.get(&p) {
            return Some((first, e));
        }
        seen.insert(p, e);
        p = ring.mul_idx(p, x);
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{make_matrix, make_trivial_extension, make_zn};

    fn m2() -> Ring {
        make_matrix(&make_zn(2).unwrap(), 2).unwrap()
    }

    fn unit(r: &Ring, rows: [[u64; 2]; 2]) -> Idx {
        r.encode(&Value::int_matrix(&rows)).unwrap()
    }

    #[test]
    fn idempotent_witness_rechecks() {
        let r = m2();
        let w = noncentral_idempotent(&r, unit(&r, [[1, 0], [0, 0]]), unit(&r, [[0, 1], [0, 0]]));
        assert_eq!(w.recheck(&r), Ok(true));
        // a central choice of r does not reproduce
        let bad = noncentral_idempotent(&r, unit(&r, [[1, 0], [0, 0]]), r.one_idx());
        assert_eq!(bad.recheck(&r), Ok(false));
    }

    #[test]
    fn json_round_trip() {
        let r = m2();
        let w = semicomm_violation(&r, 1, 2, 3);
        let text = serde_json::to_string(&w).unwrap();
        let back: Witness = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
        assert!(text.contains("\"kind\":\"semicomm-violation\""));
    }

    #[test]
    fn quantified_recipes() {
        let z4 = make_zn(4).unwrap();
        assert_eq!(vnr_failure(&z4, 2).recheck(&z4), Ok(true));
        assert_eq!(vnr_failure(&z4, 1).recheck(&z4), Ok(false));
        assert_eq!(semiprime_failure(&z4, 2).recheck(&z4), Ok(true));
        let z6 = make_zn(6).unwrap();
        assert_eq!(pp_failure(&z6, 2).recheck(&z6), Ok(false));
        let t = make_trivial_extension(&z4).unwrap();
        let two = t
            .encode(&Value::pair(Value::int(2), Value::int(0)))
            .unwrap();
        assert_eq!(pp_failure(&t, two).recheck(&t), Ok(true));
    }

    #[test]
    fn annihilating_pair_recipe() {
        let t = make_trivial_extension(&make_zn(4).unwrap()).unwrap();
        let c = t
            .encode(&Value::pair(Value::int(2), Value::int(0)))
            .unwrap();
        let d = t
            .encode(&Value::pair(Value::int(2), Value::int(1)))
            .unwrap();
        let w = annihilating_pair_violation(&t, &[c, d], &[c, d], (0, 1), Offense::Nonzero);
        assert_eq!(w.recheck(&t), Ok(true));
        assert_eq!(
            w.get("product").unwrap().value,
            Value::pair(Value::int(0), Value::int(2))
        );
        let (p, q) = power_cycle(&t, t.one_idx()).unwrap();
        assert_eq!((p, q), (1, 2));
        assert!(power_cycle(&t, c).is_none());
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let z4 = make_zn(4).unwrap();
        let mut w = nonzero_nilpotent(&z4, 2);
        w.elements[0].index = 3;
        assert!(matches!(
            w.recheck(&z4),
            Err(RecheckError::Inconsistent { .. })
        ));
        let z2 = make_zn(2).unwrap();
        let w = nonzero_nilpotent(&z4, 3);
        assert!(matches!(w.recheck(&z2), Err(RecheckError::Foreign { .. })));
        let w = Witness {
            recheck: var("q").eq(Term::Zero),
            ..nonzero_nilpotent(&z4, 2)
        };
        assert_eq!(w.recheck(&z4), Err(RecheckError::Unbound("q".into())));
    }
}
