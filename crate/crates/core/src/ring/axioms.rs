use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Idx, Ring};
use crate::error::{Result, RingError};

/// Index-level arithmetic, the minimum needed to audit the ring axioms.
pub trait RingArith {
    fn order(&self) -> usize;
    fn add(&self, a: Idx, b: Idx) -> Idx;
    fn mul(&self, a: Idx, b: Idx) -> Idx;
    fn neg(&self, a: Idx) -> Idx;
    fn one(&self) -> Idx;
}

impl RingArith for Ring {
    fn order(&self) -> usize {
        Ring::order(self)
    }
    fn add(&self, a: Idx, b: Idx) -> Idx {
        self.add_idx(a, b)
    }
    fn mul(&self, a: Idx, b: Idx) -> Idx {
        self.mul_idx(a, b)
    }
    fn neg(&self, a: Idx) -> Idx {
        self.neg_idx(a)
    }
    fn one(&self) -> Idx {
        self.one_idx()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomMode {
    /// Every triple; requires `order <= cap`.
    Exhaustive { cap: usize },
    /// `samples` uniformly drawn triples from a seeded generator.
    Sampled { samples: usize, seed: u64 },
}

impl AxiomMode {
    /// Exhaustive within `cap`, otherwise 10,000 seeded triples.
    pub fn auto(order: usize, cap: usize, seed: u64) -> AxiomMode {
        if order <= cap {
            AxiomMode::Exhaustive { cap }
        } else {
            AxiomMode::Sampled {
                samples: 10_000,
                seed,
            }
        }
    }
}

fn check_triple<R: RingArith + ?Sized>(r: &R, a: Idx, b: Idx, c: Idx) -> Result<()> {
    let fail = |law| Err(RingError::AxiomViolation { law, a, b, c });
    if r.mul(r.mul(a, b), c) != r.mul(a, r.mul(b, c)) {
        return fail("multiplicative associativity");
    }
    if r.mul(a, r.add(b, c)) != r.add(r.mul(a, b), r.mul(a, c)) {
        return fail("left distributivity");
    }
    if r.mul(r.add(a, b), c) != r.add(r.mul(a, c), r.mul(b, c)) {
        return fail("right distributivity");
    }
    if r.add(r.add(a, b), c) != r.add(a, r.add(b, c)) {
        return fail("additive associativity");
    }
    Ok(())
}

fn check_single<R: RingArith + ?Sized>(r: &R, a: Idx, b: Idx) -> Result<()> {
    let fail = |law| Err(RingError::AxiomViolation { law, a, b, c: 0 });
    let one = r.one();
    if r.mul(one, a) != a || r.mul(a, one) != a {
        return fail("multiplicative identity");
    }
    if r.add(a, 0) != a || r.add(a, r.neg(a)) != 0 {
        return fail("additive identity and inverse");
    }
    if r.add(a, b) != r.add(b, a) {
        return fail("additive commutativity");
    }
    Ok(())
}

/// Audits associativity, both distributive laws and the identity laws.
pub fn check_axioms<R: RingArith + ?Sized>(r: &R, mode: AxiomMode) -> Result<()> {
    let n = r.order();
    match mode {
        AxiomMode::Exhaustive { cap } => {
            if n > cap {
                return Err(RingError::InvalidParameter(format!(
                    "exhaustive axiom check needs order <= {cap}, ring has {n} elements"
                )));
            }
            for a in 0..n as Idx {
                for b in 0..n as Idx {
                    check_single(r, a, b)?;
                    for c in 0..n as Idx {
                        check_triple(r, a, b, c)?;
                    }
                }
            }
        }
        AxiomMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let a = rng.gen_range(0..n) as Idx;
                let b = rng.gen_range(0..n) as Idx;
                let c = rng.gen_range(0..n) as Idx;
                check_single(r, a, b)?;
                check_triple(r, a, b, c)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{make_tnk, make_zn};

    struct Corrupted {
        inner: Ring,
    }

    impl RingArith for Corrupted {
        fn order(&self) -> usize {
            self.inner.order()
        }
        fn add(&self, a: Idx, b: Idx) -> Idx {
            self.inner.add_idx(a, b)
        }
        fn mul(&self, a: Idx, b: Idx) -> Idx {
            if (a, b) == (2, 3) {
                return 2;
            }
            self.inner.mul_idx(a, b)
        }
        fn neg(&self, a: Idx) -> Idx {
            self.inner.neg_idx(a)
        }
        fn one(&self) -> Idx {
            self.inner.one_idx()
        }
    }

    #[test]
    fn z12_passes() {
        check_axioms(&make_zn(12).unwrap(), AxiomMode::Exhaustive { cap: 64 }).unwrap();
    }

    #[test]
    fn tnk_z2_3_1_passes_exhaustively() {
        let t = make_tnk(&make_zn(2).unwrap(), 3, 1).unwrap();
        assert_eq!(t.order(), 16);
        check_axioms(&t, AxiomMode::Exhaustive { cap: 64 }).unwrap();
    }

    #[test]
    fn corrupted_table_is_caught() {
        let bad = Corrupted {
            inner: make_zn(5).unwrap(),
        };
        let err = check_axioms(&bad, AxiomMode::Exhaustive { cap: 64 }).unwrap_err();
        assert!(matches!(err, RingError::AxiomViolation { .. }));
        let sampled = check_axioms(
            &bad,
            AxiomMode::Sampled {
                samples: 10_000,
                seed: 7,
            },
        );
        assert!(sampled.is_err());
    }

    #[test]
    fn exhaustive_respects_cap() {
        let z = make_zn(100).unwrap();
        assert!(check_axioms(&z, AxiomMode::Exhaustive { cap: 64 }).is_err());
        check_axioms(&z, AxiomMode::auto(100, 64, 1)).unwrap();
    }
}
