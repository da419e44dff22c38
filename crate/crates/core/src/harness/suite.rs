//! The verification suite: one case per checked claim, each with an expected
//! verdict and the claim it anchors to.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::report::{CaseResult, RunReport};
use super::{slug, RunConfig, Session, CORPUS};
use crate::constructions::{matrix_entries, RingDescriptor};
use crate::properties::{implication_audit, Property, PropertyReport, Verdict};
use crate::ring::{Idx, Ring, Value};
use crate::witness::{self, Offense, Witness, WitnessKind};

use Property::*;

pub fn corpus() -> Vec<&'static str> {
    CORPUS.to_vec()
}

pub struct Outcome {
    pub observed: Verdict,
    pub witness: Option<Witness>,
    pub work: u64,
}

type Runner = dyn Fn(&Session) -> Result<Outcome, String> + Send + Sync;

#[derive(Clone)]
pub struct SuiteCase {
    pub id: String,
    pub ring: String,
    pub property: String,
    pub degree: Option<u32>,
    pub expected: Verdict,
    pub anchor: String,
    run: Arc<Runner>,
}

impl std::fmt::Debug for SuiteCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SuiteCase")
            .field("id", &self.id)
            .field("ring", &self.ring)
            .field("property", &self.property)
            .field("expected", &self.expected)
            .finish()
    }
}

impl SuiteCase {
    pub fn new(
        id: impl Into<String>,
        ring: &str,
        property: impl Into<String>,
        degree: Option<u32>,
        expected: Verdict,
        anchor: &str,
        run: impl Fn(&Session) -> Result<Outcome, String> + Send + Sync + 'static,
    ) -> SuiteCase {
        SuiteCase {
            id: id.into(),
            ring: ring.to_string(),
            property: property.into(),
            degree,
            expected,
            anchor: anchor.to_string(),
            run: Arc::new(run),
        }
    }

    pub fn run(&self, s: &Session) -> CaseResult {
        let start = Instant::now();
        let (observed, witness, work) = match (self.run)(s) {
            Ok(o) => (o.observed.to_string(), o.witness, o.work),
            Err(e) => (format!("error: {e}"), None, 0),
        };
        CaseResult {
            id: self.id.clone(),
            ring: self.ring.clone(),
            property: self.property.clone(),
            degree: self.degree,
            expected: self.expected,
            observed,
            witness,
            work,
            ms: start.elapsed().as_millis() as u64,
            anchor: self.anchor.clone(),
        }
    }
}

/// A report whose witness, if any, has been re-evaluated on its ring.
fn checked(s: &Session, ring: &str, p: Property, degree: u32) -> Result<PropertyReport, String> {
    let rep = s.report(ring, p, degree)?;
    if let Some(w) = &rep.witness {
        let r = s.ring(ring)?;
        match w.recheck(&r) {
            Ok(true) => {}
            Ok(false) => return Err(format!("{p} witness on {ring} does not re-check")),
            Err(e) => return Err(format!("{p} witness on {ring}: {e}")),
        }
    }
    Ok(rep)
}

fn from_report(rep: PropertyReport) -> Outcome {
    Outcome {
        observed: rep.verdict,
        witness: rep.witness,
        work: rep.work,
    }
}

fn withheld(work: u64) -> Outcome {
    Outcome {
        observed: Verdict::BudgetExhausted { examined: work },
        witness: None,
        work,
    }
}

/// Holds unless every premise holds and the conclusion fails.
fn implies(premises: &[&PropertyReport], conclusion: &PropertyReport) -> Outcome {
    let work = premises.iter().map(|r| r.work).sum::<u64>() + conclusion.work;
    let truths: Option<Vec<bool>> = premises.iter().map(|r| r.holds()).collect();
    let (Some(truths), Some(c)) = (truths, conclusion.holds()) else {
        return withheld(work);
    };
    if truths.iter().all(|&t| t) && !c {
        return Outcome {
            observed: Verdict::Fails,
            witness: conclusion.witness.clone(),
            work,
        };
    }
    Outcome {
        observed: Verdict::Holds,
        witness: None,
        work,
    }
}

/// Holds when all reports agree.
fn agree(reports: &[&PropertyReport]) -> Outcome {
    let work = reports.iter().map(|r| r.work).sum();
    let Some(truths) = reports
        .iter()
        .map(|r| r.holds())
        .collect::<Option<Vec<bool>>>()
    else {
        return withheld(work);
    };
    let same = truths.windows(2).all(|w| w[0] == w[1]);
    Outcome {
        observed: if same { Verdict::Holds } else { Verdict::Fails },
        witness: None,
        work,
    }
}

fn prop_case(
    id: String,
    ring: &str,
    p: Property,
    degree: Option<u32>,
    expected: Verdict,
    anchor: &str,
) -> SuiteCase {
    let text = ring.to_string();
    SuiteCase::new(id, ring, p.name(), degree, expected, anchor, move |s| {
        checked(s, &text, p, degree.unwrap_or(1)).map(from_report)
    })
}

const HOLDS: Verdict = Verdict::Holds;
const FAILS: Verdict = Verdict::Fails;

const MATRIX_RINGS: &str = "full and upper triangular matrix rings of size at least 2 contain non-central idempotents, so they are neither abelian nor central linear Armendariz";
const CLA_ABELIAN: &str = "central linear Armendariz rings are abelian";
const VNR: &str = "for von Neumann regular rings, Armendariz, reduced, central linear Armendariz, linear Armendariz and semicommutative are equivalent";
const PRODUCTS: &str =
    "for a central idempotent e, R is central linear Armendariz iff eR and (1-e)R are";
const LA_CLA: &str = "linear Armendariz rings are central linear Armendariz, and right p.p. central linear Armendariz rings are linear Armendariz";
const TRIV_2N: &str =
    "T(Z_{2^n}, Z_{2^n}) is central linear Armendariz but neither right p.p. nor linear Armendariz";
const TNK_REDUCED: &str =
    "for n >= 3 and 1 <= k <= n-2, R is reduced iff T_n^k(R) is central linear Armendariz";
const SQUARE_ZERO: &str = "a^2 = b^2 = 0 with ab = ba non-central refutes central linear Armendariz via (a + bx)(a - bx) = 0";
const TNK_HALF: &str =
    "for n >= 3: R reduced iff T_n^[n/2](R) Armendariz iff T_n^(n-2)(R) central linear Armendariz";
const IDEAL_LIFT: &str = "if I is a reduced ideal and R/I is central linear Armendariz, then R is central linear Armendariz";
const CENTRAL_REDUCED_EXAMPLES: &str = "commutative rings and reduced rings are central reduced";
const DUAL_NUMBERS: &str =
    "S[x]/(x^2) over a commutative ring S is central reduced but not reduced";
const CENTRAL_REDUCED_CLA: &str = "central reduced rings are central linear Armendariz";
const TRIV_CENTRAL_REDUCED: &str = "R central reduced implies T(R,R) central linear Armendariz; the converse holds for semiprime R";
const TNK_TOP: &str = "for semiprime R and n >= 2, R is central reduced iff T_n^(n-1)(R) is central linear Armendariz";
const ISO: &str = "T_2^1(R) is the trivial extension T(R,R) and T_n^(n-1)(R) is R[x]/(x^n)";
const AUDIT: &str = "the known implications among these ring classes hold on every profile";
const SUBRINGS: &str = "subrings of central linear Armendariz rings are central linear Armendariz";

fn matrix_cases(out: &mut Vec<SuiteCase>) {
    for ring in ["Mat(Z(2), 2)", "UT(Z(2), 2)", "UT(Z(2), 3)", "Mat(Z(3), 2)"] {
        for (tag, p) in [("abelian", Abelian), ("cla", CentralLinearArmendariz)] {
            let id = format!("ex-2.3-{tag}-{}", slug(ring));
            out.push(prop_case(id, ring, p, None, FAILS, MATRIX_RINGS));
        }
    }
}

fn corpus_implications(out: &mut Vec<SuiteCase>) {
    type Rule = (&'static str, &'static [Property], Property, &'static str);
    const RULES: [Rule; 4] = [
        (
            "lemma-2.2",
            &[CentralLinearArmendariz],
            Abelian,
            CLA_ABELIAN,
        ),
        (
            "thm-2.6-forward",
            &[LinearArmendariz],
            CentralLinearArmendariz,
            LA_CLA,
        ),
        (
            "thm-2.6-converse",
            &[RightPp, CentralLinearArmendariz],
            LinearArmendariz,
            LA_CLA,
        ),
        (
            "thm-2.17",
            &[CentralReduced],
            CentralLinearArmendariz,
            CENTRAL_REDUCED_CLA,
        ),
    ];
    for (prefix, premises, conclusion, anchor) in RULES {
        let names: Vec<&str> = premises.iter().map(|p| p.name()).collect();
        let label = format!("{} => {}", names.join(" and "), conclusion.name());
        for ring in CORPUS {
            let text = ring.to_string();
            out.push(SuiteCase::new(
                format!("{prefix}-{}", slug(ring)),
                ring,
                label.clone(),
                None,
                HOLDS,
                anchor,
                move |s| {
                    let ps = premises
                        .iter()
                        .map(|&p| checked(s, &text, p, 1))
                        .collect::<Result<Vec<_>, _>>()?;
                    let c = checked(s, &text, conclusion, 1)?;
                    Ok(implies(&ps.iter().collect::<Vec<_>>(), &c))
                },
            ));
        }
    }
    for ring in CORPUS {
        let text = ring.to_string();
        out.push(SuiteCase::new(
            format!("ex-2.15-{}", slug(ring)),
            ring,
            "commutative or reduced => central-reduced",
            None,
            HOLDS,
            CENTRAL_REDUCED_EXAMPLES,
            move |s| {
                let comm = checked(s, &text, Commutative, 1)?;
                let red = checked(s, &text, Reduced, 1)?;
                let cr = checked(s, &text, CentralReduced, 1)?;
                let a = implies(&[&comm], &cr);
                let b = implies(&[&red], &cr);
                Ok(if a.observed == HOLDS { b } else { a })
            },
        ));
    }
}

fn vnr_cases(out: &mut Vec<SuiteCase>) {
    for ring in [
        "Mat(Z(2), 2)",
        "Prod(Z(2), Z(2))",
        "Prod(Z(2), Z(3))",
        "Z(2)",
        "Z(3)",
    ] {
        out.push(prop_case(
            format!("thm-2.4-vnr-{}", slug(ring)),
            ring,
            VonNeumannRegular,
            None,
            HOLDS,
            VNR,
        ));
    }
    for ring in CORPUS {
        let text = ring.to_string();
        out.push(SuiteCase::new(
            format!("thm-2.4-equiv-{}", slug(ring)),
            ring,
            "von-neumann-regular => armendariz(2) = reduced = central-linear-armendariz = linear-armendariz = semicommutative",
            Some(2),
            HOLDS,
            VNR,
            move |s| {
                let vnr = checked(s, &text, VonNeumannRegular, 2)?;
                if vnr.holds() != Some(true) {
                    return Ok(Outcome {
                        observed: HOLDS,
                        witness: None,
                        work: vnr.work,
                    });
                }
                let five = [Armendariz, Reduced, CentralLinearArmendariz, LinearArmendariz, Semicommutative]
                    .iter()
                    .map(|&p| checked(s, &text, p, 2))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(agree(&five.iter().collect::<Vec<_>>()))
            },
        ));
    }
}

fn product_cases(out: &mut Vec<SuiteCase>) {
    for ring in [
        "Prod(Z(2), Z(2))",
        "Prod(Z(2), Z(3))",
        "Prod(Z(4), Z(2))",
        "Prod(Z(2), UT(Z(2), 2))",
        "Prod(Triv(Z(4)), Z(3))",
    ] {
        let text = ring.to_string();
        out.push(SuiteCase::new(
            format!("lemma-2.5-{}", slug(ring)),
            ring,
            "central-linear-armendariz(product) <=> all factors central-linear-armendariz",
            None,
            HOLDS,
            PRODUCTS,
            move |s| {
                let d: RingDescriptor = text.parse().map_err(|e| format!("{e}"))?;
                let RingDescriptor::Prod(factors) = d else {
                    return Err(format!("{text} is not a product"));
                };
                let whole = checked(s, &text, CentralLinearArmendariz, 1)?;
                let parts = factors
                    .iter()
                    .map(|f| checked(s, &f.to_string(), CentralLinearArmendariz, 1))
                    .collect::<Result<Vec<_>, _>>()?;
                let work = whole.work + parts.iter().map(|p| p.work).sum::<u64>();
                let Some(all) = parts.iter().map(|p| p.holds()).collect::<Option<Vec<_>>>() else {
                    return Ok(withheld(work));
                };
                let Some(w) = whole.holds() else {
                    return Ok(withheld(work));
                };
                let ok = w == all.iter().all(|&t| t);
                Ok(Outcome {
                    observed: if ok { HOLDS } else { FAILS },
                    witness: None,
                    work,
                })
            },
        ));
    }
}

/// The trivial extension `T(Z_{2^n}, Z_{2^n})` checked three ways.
fn trivial_extension_cases(out: &mut Vec<SuiteCase>) {
    for n in [2u32, 3] {
        let ring = format!("Triv(Z({}))", 1u64 << n);
        out.push(prop_case(
            format!("ex-2.7-cla-n{n}"),
            &ring,
            CentralLinearArmendariz,
            None,
            HOLDS,
            TRIV_2N,
        ));
        out.push(prop_case(
            format!("ex-2.7-right-pp-n{n}"),
            &ring,
            RightPp,
            None,
            FAILS,
            TRIV_2N,
        ));
        let text = ring.clone();
        out.push(SuiteCase::new(
            format!("ex-2.7-la-n{n}"),
            &ring,
            LinearArmendariz.name(),
            None,
            FAILS,
            TRIV_2N,
            move |s| {
                let r = s.ring(&text)?;
                let rep = checked(s, &text, LinearArmendariz, 1)?;
                let half = 1u64 << (n - 1);
                let pattern = Value::pair(Value::int(0), Value::int(half));
                if let Some(w) = &rep.witness {
                    let got = w.get("product").map(|e| &e.value);
                    if got != Some(&pattern) {
                        return Err(format!(
                            "least witness product is {got:?}, expected {pattern}"
                        ));
                    }
                }
                // f = (a, 0) + (a, 1)x with a = 2^(n-1) squares to zero
                let c = r
                    .encode(&Value::pair(Value::int(half), Value::int(0)))
                    .unwrap();
                let d = r
                    .encode(&Value::pair(Value::int(half), Value::int(1)))
                    .unwrap();
                let w = witness::annihilating_pair_violation(
                    &r,
                    &[c, d],
                    &[c, d],
                    (0, 1),
                    Offense::Nonzero,
                );
                if w.recheck(&r) != Ok(true) {
                    return Err("the square-zero polynomial does not re-check".into());
                }
                Ok(Outcome {
                    observed: rep.verdict,
                    witness: Some(w),
                    work: rep.work,
                })
            },
        ));
    }
}

/// Whether `w` is the pair `(a·I, e_{1,k+1} + .. + e_{1,n})` in `T_n^k`.
fn is_band_pair(r: &Ring, w: &Witness, n: usize, k: usize, a: Idx) -> bool {
    let (Some(x), Some(y)) = (w.get("a"), w.get("b")) else {
        return false;
    };
    let (Some(ea), Some(eb)) = (matrix_entries(r, x.index), matrix_entries(r, y.index)) else {
        return false;
    };
    (0..n * n).all(|p| {
        let (i, j) = (p / n, p % n);
        ea[p] == if i == j { a } else { 0 } && eb[p] == if i == 0 && j >= k { 1 } else { 0 }
    })
}

fn tnk_cases(out: &mut Vec<SuiteCase>) {
    for (n, k) in [(3, 1), (4, 1), (4, 2), (5, 2), (5, 3)] {
        let ring = format!("Tnk(Z(4), {n}, {k})");
        let text = ring.clone();
        out.push(SuiteCase::new(
            format!("thm-2.9-neg-Z4-n{n}-k{k}"),
            &ring,
            CentralLinearArmendariz.name(),
            None,
            FAILS,
            TNK_REDUCED,
            move |s| {
                let r = s.ring(&text)?;
                let rep = checked(s, &text, CentralLinearArmendariz, 1)?;
                if let Some(w) = &rep.witness {
                    if w.kind != WitnessKind::SquareZeroPair || !is_band_pair(&r, w, n, k, 2) {
                        return Err("witness is not the constructive square-zero pair".into());
                    }
                }
                Ok(from_report(rep))
            },
        ));
        out.push(prop_case(
            format!("thm-2.9-square-zero-Z4-n{n}-k{k}"),
            &ring,
            SquareZeroProductsCentral,
            None,
            FAILS,
            SQUARE_ZERO,
        ));
    }
    for (base, n, k) in [
        ("Z(2)", 3, 1),
        ("Z(2)", 4, 1),
        ("Z(2)", 4, 2),
        ("Z(3)", 3, 1),
    ] {
        let ring = format!("Tnk({base}, {n}, {k})");
        out.push(prop_case(
            format!("thm-2.9-pos-{}-n{n}-k{k}", slug(base)),
            &ring,
            CentralLinearArmendariz,
            None,
            HOLDS,
            TNK_REDUCED,
        ));
    }
    for (base, reduced) in [("Z(2)", true), ("Z(4)", false)] {
        let b = slug(base);
        out.push(prop_case(
            format!("thm-2.10-reduced-{b}"),
            base,
            Reduced,
            None,
            if reduced { HOLDS } else { FAILS },
            TNK_HALF,
        ));
        for n in [3usize, 4] {
            let half = format!("Tnk({base}, {n}, {})", n / 2);
            let top = format!("Tnk({base}, {n}, {})", n - 2);
            out.push(prop_case(
                format!("thm-2.10-armendariz-{b}-n{n}"),
                &half,
                Armendariz,
                Some(2),
                if reduced {
                    Verdict::CertifiedUpToDegree(2)
                } else {
                    FAILS
                },
                TNK_HALF,
            ));
            out.push(prop_case(
                format!("thm-2.10-cla-{b}-n{n}"),
                &top,
                CentralLinearArmendariz,
                None,
                if reduced { HOLDS } else { FAILS },
                TNK_HALF,
            ));
            let base_text = base.to_string();
            let label = half.clone();
            out.push(SuiteCase::new(
                format!("thm-2.10-equiv-{b}-n{n}"),
                &label,
                "reduced(R) = armendariz(2)(T_n^[n/2](R)) = central-linear-armendariz(T_n^(n-2)(R))",
                Some(2),
                HOLDS,
                TNK_HALF,
                move |s| {
                    let a = checked(s, &base_text, Reduced, 2)?;
                    let b = checked(s, &half, Armendariz, 2)?;
                    let c = checked(s, &top, CentralLinearArmendariz, 2)?;
                    Ok(agree(&[&a, &b, &c]))
                },
            ));
        }
    }
}

fn ideal_cases(out: &mut Vec<SuiteCase>) {
    let pairs: [(&str, Value, bool); 6] = [
        ("Z(6)", Value::int(2), true),
        ("Z(6)", Value::int(3), true),
        ("Z(4)", Value::int(2), false),
        (
            "Triv(Z(2))",
            Value::pair(Value::int(0), Value::int(1)),
            false,
        ),
        ("Prod(Z(2), Z(3))", Value::int_tuple(&[1, 0]), true),
        ("Mat(Z(2), 2)", Value::int_matrix(&[[0, 0], [0, 0]]), false),
    ];
    for (ring, gen, hypothesis) in pairs {
        let tag = format!("{}-I{}", slug(ring), slug(&gen.to_string()));
        let label = format!("ideal <{gen}>");
        let (text, g) = (ring.to_string(), gen.clone());
        let quotient = move |s: &Session| -> Result<(bool, String), String> {
            let r = s.ring(&text)?;
            let i = r
                .encode(&g)
                .ok_or_else(|| format!("{g} is not an element of {text}"))?;
            let ideal = r.ideal_closure(&[i]);
            Ok((ideal.is_reduced(), format!("Quot({text}, [{i}])")))
        };
        let q = quotient.clone();
        out.push(SuiteCase::new(
            format!("thm-2.11-hypothesis-{tag}"),
            ring,
            format!("{label} reduced and quotient central-linear-armendariz"),
            None,
            if hypothesis { HOLDS } else { FAILS },
            IDEAL_LIFT,
            move |s| {
                let (reduced, quot) = q(s)?;
                let cla = checked(s, &quot, CentralLinearArmendariz, 1)?;
                let Some(c) = cla.holds() else {
                    return Ok(withheld(cla.work));
                };
                Ok(Outcome {
                    observed: if reduced && c { HOLDS } else { FAILS },
                    witness: None,
                    work: cla.work,
                })
            },
        ));
        let text = ring.to_string();
        out.push(SuiteCase::new(
            format!("thm-2.11-{tag}"),
            ring,
            format!("{label} reduced and quotient central-linear-armendariz => central-linear-armendariz"),
            None,
            HOLDS,
            IDEAL_LIFT,
            move |s| {
                let (reduced, quot) = quotient(s)?;
                let qc = checked(s, &quot, CentralLinearArmendariz, 1)?;
                let rc = checked(s, &text, CentralLinearArmendariz, 1)?;
                if !reduced {
                    return Ok(Outcome {
                        observed: HOLDS,
                        witness: None,
                        work: qc.work + rc.work,
                    });
                }
                Ok(implies(&[&qc], &rc))
            },
        ));
    }
}

fn central_reduced_cases(out: &mut Vec<SuiteCase>) {
    for base in ["Z(2)", "Z(3)", "Z(4)", "Z(6)"] {
        let ring = format!("PolyMod({base}, 2)");
        let id = slug(&ring);
        out.push(prop_case(
            format!("ex-2.16-central-reduced-{id}"),
            &ring,
            CentralReduced,
            None,
            HOLDS,
            DUAL_NUMBERS,
        ));
        out.push(prop_case(
            format!("ex-2.16-reduced-{id}"),
            &ring,
            Reduced,
            None,
            FAILS,
            DUAL_NUMBERS,
        ));
    }
    out.push(prop_case(
        "thm-2.17-cla-PolyMod-Z2-2".into(),
        "PolyMod(Z(2), 2)",
        CentralLinearArmendariz,
        None,
        HOLDS,
        CENTRAL_REDUCED_CLA,
    ));
}

fn triv_cases(out: &mut Vec<SuiteCase>) {
    for base in [
        "Z(2)",
        "Z(3)",
        "Z(4)",
        "Z(6)",
        "Prod(Z(2), Z(2))",
        "PolyMod(Z(2), 2)",
        "Mat(Z(2), 2)",
    ] {
        let (b, t) = (base.to_string(), format!("Triv({base})"));
        out.push(SuiteCase::new(
            format!("lemma-2.18-forward-{}", slug(base)),
            base,
            "central-reduced(R) => central-linear-armendariz(Triv(R))",
            None,
            HOLDS,
            TRIV_CENTRAL_REDUCED,
            move |s| {
                let cr = checked(s, &b, CentralReduced, 1)?;
                let cla = checked(s, &t, CentralLinearArmendariz, 1)?;
                Ok(implies(&[&cr], &cla))
            },
        ));
    }
    for base in ["Mat(Z(2), 2)", "Z(6)", "Z(2)", "Prod(Z(2), Z(3))"] {
        let (b, t) = (base.to_string(), format!("Triv({base})"));
        out.push(SuiteCase::new(
            format!("lemma-2.18-converse-{}", slug(base)),
            base,
            "semiprime(R) and central-linear-armendariz(Triv(R)) => central-reduced(R)",
            None,
            HOLDS,
            TRIV_CENTRAL_REDUCED,
            move |s| {
                let sp = checked(s, &b, Semiprime, 1)?;
                let cla = checked(s, &t, CentralLinearArmendariz, 1)?;
                let cr = checked(s, &b, CentralReduced, 1)?;
                Ok(implies(&[&sp, &cla], &cr))
            },
        ));
    }
    let m = "Mat(Z(2), 2)";
    out.push(prop_case(
        "lemma-2.18-semiprime-Mat-Z2-2".into(),
        m,
        Semiprime,
        None,
        HOLDS,
        TRIV_CENTRAL_REDUCED,
    ));
    out.push(prop_case(
        "lemma-2.18-central-reduced-Mat-Z2-2".into(),
        m,
        CentralReduced,
        None,
        FAILS,
        TRIV_CENTRAL_REDUCED,
    ));
    let text = "Triv(Mat(Z(2), 2))";
    out.push(SuiteCase::new(
        "lemma-2.18-cla-Triv-Mat-Z2-2",
        text,
        CentralLinearArmendariz.name(),
        None,
        FAILS,
        TRIV_CENTRAL_REDUCED,
        move |s| {
            let rep = checked(s, text, CentralLinearArmendariz, 1)?;
            match &rep.witness {
                Some(w) if w.kind != WitnessKind::SquareZeroPair => {
                    Err("expected a square-zero pair witness".into())
                }
                _ => Ok(from_report(rep)),
            }
        },
    ));
}

fn top_band_cases(out: &mut Vec<SuiteCase>) {
    let instances = [
        ("Mat(Z(2), 2)", 2, FAILS),
        ("Z(6)", 2, HOLDS),
        ("Z(6)", 3, HOLDS),
        ("Z(2)", 3, HOLDS),
        ("Z(3)", 2, HOLDS),
    ];
    for (base, n, expected) in instances {
        let ring = format!("Tnk({base}, {n}, {})", n - 1);
        let tag = format!("{}-n{n}", slug(base));
        out.push(prop_case(
            format!("thm-2.19-{tag}"),
            &ring,
            CentralLinearArmendariz,
            None,
            expected,
            TNK_TOP,
        ));
        let b = base.to_string();
        out.push(SuiteCase::new(
            format!("thm-2.19-equiv-{tag}"),
            base,
            format!("semiprime(R) => (central-reduced(R) <=> central-linear-armendariz({ring}))"),
            None,
            HOLDS,
            TNK_TOP,
            move |s| {
                let sp = checked(s, &b, Semiprime, 1)?;
                if sp.holds() != Some(true) {
                    return Ok(Outcome {
                        observed: HOLDS,
                        witness: None,
                        work: sp.work,
                    });
                }
                let cr = checked(s, &b, CentralReduced, 1)?;
                let cla = checked(s, &ring, CentralLinearArmendariz, 1)?;
                Ok(agree(&[&cr, &cla]))
            },
        ));
    }
}

/// Identical addition and multiplication tables under the identity map.
fn tables_match(a: &Ring, b: &Ring) -> bool {
    let n = a.order();
    n == b.order()
        && (0..n as Idx).into_par_iter().all(|x| {
            (0..n as Idx)
                .all(|y| a.add_idx(x, y) == b.add_idx(x, y) && a.mul_idx(x, y) == b.mul_idx(x, y))
        })
}

fn iso_cases(out: &mut Vec<SuiteCase>) {
    for base in ["Z(2)", "Z(4)"] {
        let pairs = [
            (format!("Tnk({base}, 2, 1)"), format!("Triv({base})")),
            (format!("Tnk({base}, 2, 1)"), format!("PolyMod({base}, 2)")),
            (format!("Tnk({base}, 3, 2)"), format!("PolyMod({base}, 3)")),
        ];
        for (left, right) in pairs {
            let id = format!("iso-{}-{}", slug(&left), slug(&right));
            let (l, r) = (left.clone(), right.clone());
            out.push(SuiteCase::new(
                id,
                &left,
                format!("table-match {right}"),
                None,
                HOLDS,
                ISO,
                move |s| {
                    let (a, b) = (s.ring(&l)?, s.ring(&r)?);
                    let same = tables_match(&a, &b);
                    Ok(Outcome {
                        observed: if same { HOLDS } else { FAILS },
                        witness: None,
                        work: (a.order() * a.order()) as u64,
                    })
                },
            ));
        }
    }
}

fn audit_cases(out: &mut Vec<SuiteCase>) {
    for ring in CORPUS {
        let text = ring.to_string();
        out.push(SuiteCase::new(
            format!("audit-{}", slug(ring)),
            ring,
            "implication-audit",
            Some(2),
            HOLDS,
            AUDIT,
            move |s| {
                let reports = Property::ALL
                    .iter()
                    .map(|&p| checked(s, &text, p, 2))
                    .collect::<Result<Vec<_>, _>>()?;
                let work = reports.iter().map(|r| r.work).sum();
                Ok(Outcome {
                    observed: match implication_audit(&reports) {
                        Ok(_) => HOLDS,
                        Err(_) => FAILS,
                    },
                    witness: None,
                    work,
                })
            },
        ));
    }
}

fn subring_cases(out: &mut Vec<SuiteCase>) {
    for ring in CORPUS {
        let text = ring.to_string();
        out.push(SuiteCase::new(
            format!("subring-{}", slug(ring)),
            ring,
            "central-linear-armendariz(R) => central-linear-armendariz(Sub(R, [1]))",
            None,
            HOLDS,
            SUBRINGS,
            move |s| {
                let r = s.ring(&text)?;
                let sub = format!("Sub({text}, [{}])", 1.min(r.order() - 1));
                let whole = checked(s, &text, CentralLinearArmendariz, 1)?;
                let part = checked(s, &sub, CentralLinearArmendariz, 1)?;
                Ok(implies(&[&whole], &part))
            },
        ));
    }
}

/// Every case, sorted by id.
pub fn paper_suite() -> Vec<SuiteCase> {
    let mut out = Vec::new();
    matrix_cases(&mut out);
    corpus_implications(&mut out);
    vnr_cases(&mut out);
    product_cases(&mut out);
    trivial_extension_cases(&mut out);
    tnk_cases(&mut out);
    ideal_cases(&mut out);
    central_reduced_cases(&mut out);
    triv_cases(&mut out);
    top_band_cases(&mut out);
    iso_cases(&mut out);
    audit_cases(&mut out);
    subring_cases(&mut out);
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// Runs the cases whose id matches `filter` (a glob), in parallel, and
/// collects the results in id order.
pub fn verify_paper(s: &Session, filter: Option<&str>) -> Result<RunReport, String> {
    let pattern = filter
        .map(glob::Pattern::new)
        .transpose()
        .map_err(|e| format!("bad filter: {e}"))?;
    let cases: Vec<SuiteCase> = paper_suite()
        .into_iter()
        .filter(|c| pattern.as_ref().is_none_or(|p| p.matches(&c.id)))
        .collect();
    let results = s
        .config
        .install(|| cases.par_iter().map(|c| c.run(s)).collect::<Vec<_>>());
    Ok(RunReport::new(s.config.clone(), results))
}

/// Convenience wrapper with a fresh session.
pub fn verify_paper_with(config: RunConfig, filter: Option<&str>) -> Result<RunReport, String> {
    verify_paper(&Session::new(config), filter)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_anchored() {
        let cases = paper_suite();
        let mut ids: Vec<&str> = cases.iter().map(|c| c.id.as_str()).collect();
        ids.dedup();
        assert_eq!(ids.len(), cases.len());
        assert!(cases.iter().all(|c| !c.anchor.is_empty()));
    }

    #[test]
    fn example_family_cases() {
        let r = verify_paper_with(RunConfig::default(), Some("ex-2.7-*")).unwrap();
        assert_eq!(r.cases.len(), 6);
        assert!(r.pass, "{}", r.to_json());
        let la = r.cases.iter().find(|c| c.id == "ex-2.7-la-n2").unwrap();
        assert!(la.witness.is_some());
    }

    #[test]
    fn filter_errors_surface() {
        assert!(verify_paper_with(RunConfig::default(), Some("[")).is_err());
        let none = verify_paper_with(RunConfig::default(), Some("no-such-*")).unwrap();
        assert!(none.cases.is_empty() && none.pass);
    }
}
